//! Word-sized arithmetic modulo a small prime, for the counting hot loops.

use alloc::vec;
use alloc::vec::Vec;

#[inline]
pub(crate) fn add(a: u32, b: u32, q: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % q as u64) as u32
}

#[inline]
pub(crate) fn sub(a: u32, b: u32, q: u32) -> u32 {
    let s = a as u64 + q as u64 - b as u64;
    (s % q as u64) as u32
}

#[inline]
pub(crate) fn mul(a: u32, b: u32, q: u32) -> u32 {
    (a as u64 * b as u64 % q as u64) as u32
}

#[inline]
pub(crate) fn neg(a: u32, q: u32) -> u32 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

pub(crate) fn pow(mut a: u32, mut e: u64, q: u32) -> u32 {
    let mut acc = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, q);
        }
        a = mul(a, a, q);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u32, q: u32) -> u32 {
    debug_assert!(a % q != 0);
    pow(a, q as u64 - 2, q)
}

/// Truncated product of two coefficient slices into `out` (all of one length).
pub(crate) fn series_mul(a: &[u32], b: &[u32], out: &mut [u32], q: u32) {
    let n = out.len();
    for o in out.iter_mut() {
        *o = 0;
    }
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            if y != 0 {
                out[i + j] = add(out[i + j], mul(x, y, q), q);
            }
        }
    }
}

/// Reduced row echelon basis that accepts rows one at a time and tracks
/// consistency of the augmented system.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    q: u32,
    rows: Vec<(Vec<u32>, u32, usize)>,
    inconsistent: bool,
}

impl Echelon {
    pub(crate) fn new(q: u32) -> Self {
        Echelon {
            q,
            rows: Vec::new(),
            inconsistent: false,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn consistent(&self) -> bool {
        !self.inconsistent
    }

    pub(crate) fn insert(&mut self, mut row: Vec<u32>, mut rhs: u32) {
        if self.inconsistent {
            return;
        }
        let q = self.q;
        for (r, b, p) in &self.rows {
            let c = row[*p];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(r) {
                    if y != 0 {
                        *x = sub(*x, mul(c, y, q), q);
                    }
                }
                rhs = sub(rhs, mul(c, *b, q), q);
            }
        }
        match row.iter().position(|&x| x != 0) {
            None => {
                if rhs != 0 {
                    self.inconsistent = true;
                }
            }
            Some(p) => {
                let s = inv(row[p], q);
                for x in row.iter_mut() {
                    *x = mul(*x, s, q);
                }
                rhs = mul(rhs, s, q);
                // keep earlier rows reduced at the new pivot
                for (r, b, _) in self.rows.iter_mut() {
                    let c = r[p];
                    if c != 0 {
                        for (x, &y) in r.iter_mut().zip(&row) {
                            if y != 0 {
                                *x = sub(*x, mul(c, y, q), q);
                            }
                        }
                        *b = sub(*b, mul(c, rhs, q), q);
                    }
                }
                self.rows.push((row, rhs, p));
            }
        }
    }

    /// Solution set of the system as `point + span(basis)`, or `None` if inconsistent.
    pub(crate) fn solution(&self, ncols: usize) -> Option<Affine> {
        if self.inconsistent {
            return None;
        }
        let q = self.q;
        let mut point = vec![0u32; ncols];
        let mut is_pivot = vec![false; ncols];
        for (_, b, p) in &self.rows {
            point[*p] = *b;
            is_pivot[*p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (r, _, p) in &self.rows {
                v[*p] = neg(r[free], q);
            }
            basis.push(v);
        }
        Some(Affine { q, point, basis })
    }
}

/// An affine subspace of `F_q^n`.
#[derive(Clone, Debug)]
pub(crate) struct Affine {
    q: u32,
    pub(crate) point: Vec<u32>,
    pub(crate) basis: Vec<Vec<u32>>,
}

impl Affine {
    /// Calls `f` on every point, in odometer order of the basis coefficients.
    pub(crate) fn for_each_point(&self, mut f: impl FnMut(&[u32])) {
        let q = self.q;
        let d = self.basis.len();
        let mut coef = vec![0u32; d];
        let mut x = self.point.clone();
        loop {
            f(&x);
            let mut i = d;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                // step coordinate i of the odometer: x += basis[i]
                for (xe, &b) in x.iter_mut().zip(&self.basis[i]) {
                    *xe = add(*xe, b, q);
                }
                coef[i] += 1;
                if coef[i] < q {
                    break;
                }
                // wrapped: q * basis[i] = 0 so x is back to its old value
                coef[i] = 0;
            }
        }
    }
}
