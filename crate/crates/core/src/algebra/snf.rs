//! Smith normal form over `F[t]/(t^(N+1))` and the resulting lambda-profiles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::matrix::Matrix;
use super::series::{SeriesOrder, TruncSeries};
use crate::error::{Error, Result};

/// Matrix of truncated series, all at one level.
pub type SeriesMatrix = Matrix<TruncSeries>;

/// Nondecreasing exponents `lambda_1 <= ... <= lambda_r` of a diagonal form.
///
/// When only a prefix is known at the working level, `parts` holds that prefix
/// and `truncated` is set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaProfile {
    parts: Vec<u32>,
    rank: usize,
    truncated: bool,
}

impl LambdaProfile {
    /// A fully determined profile.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition(format!(
                "profile {parts:?} is not nondecreasing"
            )));
        }
        Ok(LambdaProfile {
            rank: parts.len(),
            parts,
            truncated: false,
        })
    }

    /// A profile of length `rank` of which only `prefix` is determined.
    pub fn partial(prefix: Vec<u32>, rank: usize) -> Result<Self> {
        let mut p = LambdaProfile::new(prefix)?;
        p.rank = rank;
        p.truncated = true;
        Ok(p)
    }

    /// Recovers a profile from the minimal orders of the `ell`-minors, `ell = 1..=r`.
    pub fn from_minor_orders(orders: &[SeriesOrder]) -> Result<Self> {
        let mut parts = Vec::with_capacity(orders.len());
        let mut prev = 0u32;
        for o in orders {
            match o {
                SeriesOrder::Finite(s) => {
                    let part = s.checked_sub(prev).ok_or_else(|| {
                        Error::InvariantViolation(format!("minor orders {orders:?} decrease"))
                    })?;
                    parts.push(part);
                    prev = *s;
                }
                SeriesOrder::Truncated => return LambdaProfile::partial(parts, orders.len()),
            }
        }
        LambdaProfile::new(parts).map_err(|_| {
            Error::InvariantViolation(format!(
                "minor orders {orders:?} do not give a nondecreasing profile"
            ))
        })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `|lambda|`, over the known parts only.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `lambda_r`, if determined.
    pub fn last(&self) -> Option<u32> {
        if self.truncated {
            None
        } else {
            self.parts.last().copied()
        }
    }

    pub fn partial_sums(&self) -> Vec<u32> {
        self.parts
            .iter()
            .scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// All nondecreasing profiles of length `r` with parts at most `max_part`.
    pub fn enumerate(r: usize, max_part: u32) -> Vec<LambdaProfile> {
        fn rec(r: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<LambdaProfile>) {
            if cur.len() == r {
                out.push(LambdaProfile {
                    parts: cur.clone(),
                    rank: r,
                    truncated: false,
                });
                return;
            }
            for p in lo..=hi {
                cur.push(p);
                rec(r, p, hi, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(r, 0, max_part, &mut Vec::new(), &mut out);
        out
    }

    /// Nondecreasing profiles of length `r` with `|lambda| = size` and parts at most `max_part`.
    pub fn with_size(r: usize, size: u32, max_part: u32) -> Vec<LambdaProfile> {
        LambdaProfile::enumerate(r, max_part.min(size))
            .into_iter()
            .filter(|p| p.size() == size)
            .collect()
    }
}

impl fmt::Display for LambdaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        if self.truncated {
            if !self.parts.is_empty() {
                write!(f, ",")?;
            }
            write!(f, "?")?;
        }
        write!(f, ")")
    }
}

/// `P * M * Q = diag(t^lambda)` modulo `t^(N+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub p_transform: SeriesMatrix,
    pub q_transform: SeriesMatrix,
    pub lambda: LambdaProfile,
    pub valid_to_level: u32,
}

impl SnfResult {
    /// The `s x r` diagonal matrix `diag(t^lambda_1, ..., t^lambda_r)`.
    pub fn diagonal(&self, rows: usize, cols: usize) -> SeriesMatrix {
        let sample = self.p_transform.get(0, 0);
        let (field, level) = (sample.field(), sample.level());
        Matrix::from_fn(rows, cols, |i, j| {
            if i == j {
                TruncSeries::monomial(field.one(), self.lambda.parts()[i], level)
            } else {
                TruncSeries::zero(field, level)
            }
        })
    }
}

/// Diagonalizes a series matrix by unimodular row and column operations.
///
/// Pivots on an entry of least order, the first such in row-major order, and
/// scales its row by the inverse of the pivot's unit part.
pub fn smith_normal_form(m: &SeriesMatrix) -> Result<SnfResult> {
    let level = m.get(0, 0).level();
    let field = m.get(0, 0).field();
    if m.entries().iter().any(|e| e.level() != level || e.field() != field) {
        return Err(Error::Dimension(String::from(
            "series matrix entries must share one level and field",
        )));
    }
    let (s, r) = (m.rows(), m.cols());
    let one = TruncSeries::one(field, level);
    let mut a = m.clone();
    let mut p = Matrix::identity(s, &one);
    let mut q = Matrix::identity(r, &one);
    let mut parts = Vec::with_capacity(s.min(r));

    for k in 0..s.min(r) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..s {
            for j in k..r {
                if let SeriesOrder::Finite(o) = a.get(i, j).ord() {
                    if best.map_or(true, |(b, _, _)| o < b) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let Some((lam, pi, pj)) = best else {
            return Err(Error::TruncationInsufficient {
                level,
                detail: format!(
                    "elementary divisors beyond position {k} vanish modulo t^{}",
                    level + 1
                ),
            });
        };
        a.swap_rows(k, pi);
        p.swap_rows(k, pi);
        a.swap_cols(k, pj);
        q.swap_cols(k, pj);

        let unit_inv = a.get(k, k).shift_down(lam).unit_inverse()?;
        for j in 0..r {
            let v = a.get(k, j).mul(&unit_inv);
            a.set(k, j, v);
        }
        for j in 0..s {
            let v = p.get(k, j).mul(&unit_inv);
            p.set(k, j, v);
        }

        for i in k + 1..s {
            let e = a.get(i, k).shift_down(lam);
            if e.ord() == SeriesOrder::Truncated {
                continue;
            }
            for j in 0..r {
                let v = a.get(i, j).sub(&e.mul(a.get(k, j)));
                a.set(i, j, v);
            }
            for j in 0..s {
                let v = p.get(i, j).sub(&e.mul(p.get(k, j)));
                p.set(i, j, v);
            }
        }
        for j in k + 1..r {
            let e = a.get(k, j).shift_down(lam);
            if e.ord() == SeriesOrder::Truncated {
                continue;
            }
            for i in 0..s {
                let v = a.get(i, j).sub(&e.mul(a.get(i, k)));
                a.set(i, j, v);
            }
            for i in 0..r {
                let v = q.get(i, j).sub(&e.mul(q.get(i, k)));
                q.set(i, j, v);
            }
        }
        parts.push(lam);
    }

    let total: u32 = parts.iter().sum();
    if total > level {
        return Err(Error::TruncationInsufficient {
            level,
            detail: format!("|lambda| = {total} exceeds the level"),
        });
    }
    Ok(SnfResult {
        p_transform: p,
        q_transform: q,
        lambda: LambdaProfile::new(parts)?,
        valid_to_level: level,
    })
}

/// Minimal order among the `ell`-minors, for `ell = 1..=min(s, r)`.
pub fn minor_orders(m: &SeriesMatrix) -> Result<Vec<SeriesOrder>> {
    (1..=m.rows().min(m.cols()))
        .map(|ell| {
            Ok(m.minors(ell)?
                .iter()
                .map(TruncSeries::ord)
                .min()
                .unwrap_or(SeriesOrder::Truncated))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use crate::algebra::field::Field;
    use proptest::prelude::*;

    fn sm(q: u32, rows: &[&[&[i64]]]) -> SeriesMatrix {
        let f = Field::Prime(q);
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| TruncSeries::from_i64s(f, c).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn check(m: &SeriesMatrix, res: &SnfResult) {
        let prod = res.p_transform.mul(m).unwrap().mul(&res.q_transform).unwrap();
        assert_eq!(prod, res.diagonal(m.rows(), m.cols()));
        assert!(res.p_transform.det().unwrap().is_unit());
        assert!(res.q_transform.det().unwrap().is_unit());
        let oracle = LambdaProfile::from_minor_orders(&minor_orders(m).unwrap()).unwrap();
        assert_eq!(oracle, res.lambda);
    }

    #[test]
    fn already_diagonal() {
        let m = sm(5, &[&[&[0, 1, 0, 0, 0], &[0; 5]], &[&[0; 5], &[0, 0, 1, 0, 0]]]);
        let res = smith_normal_form(&m).unwrap();
        assert_eq!(res.lambda.parts(), &[1, 2]);
        let one = TruncSeries::one(Field::Prime(5), 4);
        assert_eq!(res.p_transform, Matrix::identity(2, &one));
        assert_eq!(res.q_transform, Matrix::identity(2, &one));
    }

    #[test]
    fn unimodular_and_derived_cases() {
        let m = sm(3, &[&[&[0, 0], &[1, 0]], &[&[1, 0], &[0, 0]]]);
        let res = smith_normal_form(&m).unwrap();
        assert_eq!(res.lambda.parts(), &[0, 0]);
        check(&m, &res);

        // [[t, t], [t, t + t^2]]: least entry order 1, det = t^3
        let m = sm(5, &[&[&[0, 1, 0, 0, 0], &[0, 1, 0, 0, 0]], &[&[0, 1, 0, 0, 0], &[0, 1, 1, 0, 0]]]);
        let res = smith_normal_form(&m).unwrap();
        assert_eq!(res.lambda.parts(), &[1, 2]);
        check(&m, &res);
    }

    #[test]
    fn insufficient_truncation() {
        let m = sm(5, &[&[&[0, 0, 0], &[0, 0, 0]], &[&[0, 0, 0], &[0, 0, 0]]]);
        assert!(matches!(smith_normal_form(&m), Err(Error::TruncationInsufficient { .. })));
        // diag(t^2, t^2) at N = 3: both parts are found but |lambda| = 4 > 3
        let m = sm(5, &[&[&[0, 0, 1, 0], &[0; 4]], &[&[0; 4], &[0, 0, 1, 0]]]);
        assert!(matches!(smith_normal_form(&m), Err(Error::TruncationInsufficient { .. })));
    }

    #[test]
    fn profile_enumeration() {
        assert_eq!(LambdaProfile::enumerate(2, 3).len(), 10);
        assert_eq!(LambdaProfile::enumerate(3, 3).len(), 20);
        let two: Vec<_> = LambdaProfile::with_size(2, 2, 2)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(two, vec![vec![0, 2], vec![1, 1]]);
        assert!(LambdaProfile::new(vec![2, 1]).is_err());
        let partial = LambdaProfile::partial(vec![1], 2).unwrap();
        assert_eq!(partial.to_string(), "(1,?)");
    }

    fn series_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SeriesMatrix> {
        // Sparse-ish coefficients so that higher elementary divisors occur.
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => 1i64..5], rows * cols * 7)
            .prop_map(move |c| {
                let f = Field::Prime(5);
                Matrix::from_fn(rows, cols, |i, j| {
                    let at = (i * cols + j) * 7;
                    TruncSeries::from_i64s(f, &c[at..at + 7]).unwrap()
                })
            })
    }

    proptest! {
        #[test]
        fn snf_reconstructs(m in prop_oneof![series_matrix(2, 2), series_matrix(3, 2), series_matrix(2, 3)]) {
            match smith_normal_form(&m) {
                Ok(res) => check(&m, &res),
                Err(Error::TruncationInsufficient { .. }) => {
                    let orders = minor_orders(&m).unwrap();
                    let last = *orders.last().unwrap();
                    prop_assert!(!matches!(last, SeriesOrder::Finite(k) if k <= 6));
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
