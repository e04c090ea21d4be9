//! Dense linear algebra over the rationals for small configuration matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Basis of `{x : rows * x = 0}`.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![rat(0); ncols];
            x[free] = rat(1);
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -&m[i][free];
            }
            x
        })
        .collect()
}

pub fn det(rows: &[Vec<Rat>]) -> Rat {
    let mut m = rows.to_vec();
    let n = m.len();
    let mut acc = rat(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return rat(0);
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc = &acc * &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] = &m[i][j] - &d;
            }
        }
    }
    acc
}

pub fn transpose(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let ncols = rows.first().map_or(0, Vec::len);
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// The listed columns of `rows`.
pub fn columns(rows: &[Vec<Rat>], cols: &[usize]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect()
}

/// `x^T * rows`.
pub fn left_mul(x: &[Rat], rows: &[Vec<Rat>]) -> Vec<Rat> {
    let ncols = rows.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|j| x.iter().zip(rows).fold(rat(0), |acc, (a, r)| acc + a * &r[j]))
        .collect()
}

/// Scales a nonzero vector to coprime integers with a positive leading entry.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| {
            let y = Rat::from_integer(x / &g);
            if lead_neg {
                -y
            } else {
                y
            }
        })
        .collect()
}
