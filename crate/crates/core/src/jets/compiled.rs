//! Polynomials flattened for fast evaluation on jets modulo `q`.

use alloc::vec;
use alloc::vec::Vec;

use super::ideal::IdealGens;
use super::modq;
use crate::algebra::poly::MultiPoly;
use crate::algebra::Field;
use crate::error::Result;

#[derive(Clone, Debug)]
struct Term {
    coef: u32,
    factors: Vec<(usize, u32)>,
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledPoly {
    terms: Vec<Term>,
}

impl CompiledPoly {
    pub(crate) fn new(p: &MultiPoly, q: u32) -> Result<Self> {
        let p = p.to_field(Field::Prime(q))?;
        let terms = p
            .terms()
            .map(|(m, c)| Term {
                coef: c.as_fp().map_or(0, |x| x.value()),
                factors: m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect(),
            })
            .filter(|t| t.coef != 0)
            .collect();
        Ok(CompiledPoly { terms })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_exponents(&self, out: &mut [u32]) {
        for t in &self.terms {
            for &(v, e) in &t.factors {
                out[v] = out[v].max(e);
            }
        }
    }

    pub(crate) fn eval_point(&self, x: &[u32], q: u32) -> u32 {
        let mut acc = 0;
        for t in &self.terms {
            let mut v = t.coef;
            for &(i, e) in &t.factors {
                v = modq::mul(v, modq::pow(x[i], u64::from(e), q), q);
                if v == 0 {
                    break;
                }
            }
            acc = modq::add(acc, v, q);
        }
        acc
    }

    /// Evaluates on series whose powers are cached in `pw`; writes `pw.len` coefficients.
    pub(crate) fn eval_series(&self, pw: &Powers, out: &mut [u32], scratch: &mut [u32]) {
        let q = pw.q;
        let len = pw.len;
        for o in out.iter_mut() {
            *o = 0;
        }
        let mut cur = vec![0u32; len];
        for t in &self.terms {
            for c in cur.iter_mut() {
                *c = 0;
            }
            cur[0] = t.coef;
            for &(v, e) in &t.factors {
                modq::series_mul(&cur, pw.get(v, e), scratch, q);
                cur.copy_from_slice(scratch);
            }
            for (o, &c) in out.iter_mut().zip(&cur) {
                *o = modq::add(*o, c, q);
            }
        }
    }
}

/// Cached powers `x_v(t)^e` of the coordinate series, truncated to `len` terms.
pub(crate) struct Powers {
    q: u32,
    len: usize,
    maxe: Vec<u32>,
    offsets: Vec<usize>,
    data: Vec<u32>,
}

impl Powers {
    pub(crate) fn new(q: u32, maxe: &[u32]) -> Self {
        let mut offsets = Vec::with_capacity(maxe.len());
        let mut total = 0;
        for &e in maxe {
            offsets.push(total);
            total += e as usize + 1;
        }
        Powers {
            q,
            len: 0,
            maxe: maxe.to_vec(),
            offsets,
            data: vec![0; total],
        }
    }

    /// Loads coordinates `coords[v * stride .. v * stride + len]` and rebuilds the powers.
    pub(crate) fn load(&mut self, coords: &[u32], stride: usize, len: usize) {
        let q = self.q;
        let slots: usize = self.maxe.iter().map(|&e| e as usize + 1).sum();
        if self.data.len() != slots * len {
            self.data = vec![0; slots * len];
        }
        self.len = len;
        let mut tmp = vec![0u32; len];
        for v in 0..self.maxe.len() {
            let base = self.offsets[v] * len;
            self.data[base..base + len].fill(0);
            self.data[base] = 1 % q;
            if self.maxe[v] >= 1 {
                self.data[base + len..base + 2 * len]
                    .copy_from_slice(&coords[v * stride..v * stride + len]);
            }
            for e in 2..=self.maxe[v] as usize {
                let (head, tail) = self.data.split_at_mut(base + e * len);
                modq::series_mul(
                    &head[base + (e - 1) * len..base + e * len],
                    &coords[v * stride..v * stride + len],
                    &mut tmp,
                    q,
                );
                tail[..len].copy_from_slice(&tmp);
            }
        }
    }

    fn get(&self, v: usize, e: u32) -> &[u32] {
        let at = (self.offsets[v] + e as usize) * self.len;
        &self.data[at..at + self.len]
    }
}

/// One ideal compiled together with all first partial derivatives of its generators.
#[derive(Clone, Debug)]
pub(crate) struct CompiledIdeal {
    pub(crate) gens: Vec<CompiledPoly>,
    /// `partials[g][v] = d gen_g / d x_v`
    pub(crate) partials: Vec<Vec<CompiledPoly>>,
}

impl CompiledIdeal {
    pub(crate) fn new(ideal: &IdealGens, q: u32) -> Result<Self> {
        let mut gens = Vec::new();
        let mut partials = Vec::new();
        for g in ideal.gens() {
            let c = CompiledPoly::new(g, q)?;
            if c.is_zero() {
                continue;
            }
            gens.push(c);
            partials.push(
                (0..ideal.nvars())
                    .map(|v| CompiledPoly::new(&g.derivative(v), q))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(CompiledIdeal { gens, partials })
    }
}

/// Largest exponent of each variable over all generators of all ideals.
pub(crate) fn max_exponents(ideals: &[CompiledIdeal], n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for i in ideals {
        for g in &i.gens {
            g.max_exponents(&mut out);
        }
    }
    out
}
