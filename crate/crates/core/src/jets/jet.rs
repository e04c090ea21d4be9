use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ideal::IdealGens;
use crate::algebra::poly::MultiPoly;
use crate::algebra::{Field, FieldElem, SeriesOrder, TruncSeries};
use crate::error::{Error, Result};

/// Default ceiling on enumerated jets or visited search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// A jet of affine `n`-space: `n` series at one common level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetPoint {
    coords: Vec<TruncSeries>,
}

impl JetPoint {
    pub fn new(coords: Vec<TruncSeries>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::Dimension("a jet needs at least one coordinate".into()));
        };
        let (level, field) = (first.level(), first.field());
        if coords.iter().any(|c| c.level() != level || c.field() != field) {
            return Err(Error::Dimension(
                "jet coordinates must share one level and field".into(),
            ));
        }
        Ok(JetPoint { coords })
    }

    /// Builds a jet from integer coefficient lists, one per coordinate.
    pub fn from_coeffs<C: AsRef<[i64]>>(field: Field, coords: &[C]) -> Result<Self> {
        JetPoint::new(
            coords
                .iter()
                .map(|c| TruncSeries::from_i64s(field, c.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn coords(&self) -> &[TruncSeries] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn level(&self) -> u32 {
        self.coords[0].level()
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }
}

/// `p(gamma(t))` modulo `t^(N+1)`, computed in the jet's field.
pub fn substitute_jet(p: &MultiPoly, jet: &JetPoint) -> Result<TruncSeries> {
    if p.nvars() != jet.n() {
        return Err(Error::VariableMismatch(format!(
            "polynomial in {} variables, jet with {} coordinates",
            p.nvars(),
            jet.n()
        )));
    }
    let field = jet.field();
    let level = jet.level();
    let mut acc = TruncSeries::zero(field, level);
    let mut powers: Vec<Vec<TruncSeries>> = jet
        .coords()
        .iter()
        .map(|c| vec![TruncSeries::one(field, level), c.clone()])
        .collect();
    for (m, c) in p.terms() {
        let mut term = TruncSeries::constant(field.convert(c)?, level);
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[v].len() <= e as usize {
                let next = powers[v].last().map(|s| s.mul(&jet.coords()[v]));
                powers[v].extend(next);
            }
            term = term.mul(&powers[v][e as usize]);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Least order of the pulled-back generators; `Truncated` for the zero ideal
/// or when every pullback vanishes at this level.
pub fn ord_along_ideal(gens: &IdealGens, jet: &JetPoint) -> Result<SeriesOrder> {
    if gens.nvars() != jet.n() {
        return Err(Error::VariableMismatch(format!(
            "ideal in {} variables, jet with {} coordinates",
            gens.nvars(),
            jet.n()
        )));
    }
    let mut best = SeriesOrder::Truncated;
    for g in gens.gens() {
        best = best.min(substitute_jet(g, jet)?.ord());
    }
    Ok(best)
}

/// Odometer over all `q^(n(N+1))` jets; the last coefficient of the last
/// coordinate turns fastest.
#[derive(Clone, Debug)]
pub struct JetIter {
    field: Field,
    n: usize,
    level: u32,
    digits: Vec<u32>,
    done: bool,
}

/// Streams every jet of `A^n` over `F_q` at level `N`, refusing spaces larger than `budget`.
pub fn enumerate_jets(n: usize, level: u32, q: u32, budget: u64) -> Result<JetIter> {
    let field = Field::prime(u64::from(q))?;
    if n == 0 {
        return Err(Error::Dimension("jets of A^0".into()));
    }
    let coords = n * (level as usize + 1);
    let size = u32::try_from(coords)
        .ok()
        .and_then(|e| u64::from(q).checked_pow(e));
    if size.map_or(true, |s| s > budget) {
        return Err(Error::BudgetExceeded {
            budget,
            unit: "jets",
        });
    }
    Ok(JetIter {
        field,
        n,
        level,
        digits: vec![0; coords],
        done: false,
    })
}

impl Iterator for JetIter {
    type Item = JetPoint;

    fn next(&mut self) -> Option<JetPoint> {
        if self.done {
            return None;
        }
        let width = self.level as usize + 1;
        let coords = (0..self.n)
            .map(|i| TruncSeries::new(
                self.field,
                self.digits[i * width..(i + 1) * width]
                    .iter()
                    .map(|&d| self.field.from_i64(i64::from(d)))
                    .collect::<Vec<FieldElem>>(),
            ))
            .collect::<Result<Vec<_>>>()
            .ok()?;
        let q = self.field.characteristic();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < q {
                break;
            }
            self.digits[i] = 0;
        }
        JetPoint::new(coords).ok()
    }
}
