use alloc::format;

use super::Verdict;
use crate::algebra::snf::{LambdaProfile, SeriesMatrix};
use crate::algebra::{Field, Matrix, TruncSeries};
use crate::error::{Error, Result};
use crate::jets::{proj_count_fixed_base, Codim, ContactQuery, ProjectiveReport};

/// Codimension of `{u in P^(r-1) jets : ord(diag(t^lambda) u) >= m}`:
/// `sum over lambda_j < m of (m - lambda_j)`, or `None` (empty) when `lambda_r < m`.
pub fn fiber_codim_formula(lambda: &LambdaProfile, m: u32) -> Result<Option<u32>> {
    let Some(last) = lambda.last() else {
        return Err(Error::Precondition(format!("profile {lambda} is not determined")));
    };
    if last < m {
        return Ok(None);
    }
    Ok(Some(lambda.parts().iter().filter(|&&l| l < m).map(|&l| m - l).sum()))
}

/// `diag(t^lambda_1, ..., t^lambda_r)` at the given level.
pub fn diagonal_base(lambda: &LambdaProfile, level: u32) -> SeriesMatrix {
    let r = lambda.parts().len();
    let f = Field::Rationals;
    Matrix::from_fn(r, r, |i, j| {
        if i == j {
            TruncSeries::monomial(f.one(), lambda.parts()[i], level)
        } else {
            TruncSeries::zero(f, level)
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck {
    pub lambda: LambdaProfile,
    pub m: u32,
    pub level: u32,
    pub formula: Option<u32>,
    pub counted: ProjectiveReport,
    pub verdict: Verdict,
}

/// Counts the fiber over the diagonal base and compares it with [`fiber_codim_formula`].
///
/// The verdict uses the codimension read from the exact piece counts; the
/// cross-prime consensus is kept in `counted.report` alongside.
pub fn fiber_count_check(lambda: &LambdaProfile, m: u32, level: u32, primes: &[u32]) -> Result<FiberCheck> {
    let formula = fiber_codim_formula(lambda, m)?;
    if m > level {
        return Err(Error::Precondition(format!("m = {m} exceeds the level N = {level}")));
    }
    if lambda.last().is_some_and(|l| l > level) {
        return Err(Error::Precondition(format!(
            "profile {lambda} has a part above the level N = {level}"
        )));
    }
    let counted = proj_count_fixed_base(&diagonal_base(lambda, level), &ContactQuery::at_least(m, level), primes)?;
    let verdict = match (counted.exact_codim, formula) {
        (Some(Codim::Infinite), None) => Verdict::Pass,
        (Some(Codim::Exact(c)), Some(f)) if c == f => Verdict::Pass,
        (Some(_), _) => Verdict::Fail,
        (None, _) => Verdict::Ambiguous,
    };
    Ok(FiberCheck {
        lambda: lambda.clone(),
        m,
        level,
        formula,
        counted,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::CountStatus;
    use alloc::vec;

    fn lam(p: &[u32]) -> LambdaProfile {
        LambdaProfile::new(p.to_vec()).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(fiber_codim_formula(&lam(&[0, 2]), 2).unwrap(), Some(2));
        assert_eq!(fiber_codim_formula(&lam(&[1, 2]), 3).unwrap(), None);
        assert_eq!(fiber_codim_formula(&lam(&[0, 0]), 0).unwrap(), Some(0));
        let partial = LambdaProfile::partial(vec![0], 2).unwrap();
        assert!(fiber_codim_formula(&partial, 1).is_err());
    }

    #[test]
    fn counted_checks() {
        let c = fiber_count_check(&lam(&[0, 2]), 1, 2, &[2, 3]).unwrap();
        assert_eq!((c.formula, c.verdict), (Some(1), Verdict::Pass));
        assert_eq!(c.counted.report.codim, Codim::Exact(1));
        let c = fiber_count_check(&lam(&[0, 2]), 3, 3, &[2, 3]).unwrap();
        assert_eq!((c.formula, c.verdict), (None, Verdict::Pass));
        assert_eq!(c.counted.report.status, CountStatus::ExactEmpty);
        let c = fiber_count_check(&lam(&[1, 1]), 1, 1, &[2, 3]).unwrap();
        assert_eq!((c.formula, c.verdict), (Some(0), Verdict::Pass));
    }

    #[test]
    fn all_small_profiles() {
        for r in 2..=3 {
            for l in LambdaProfile::enumerate(r, 2) {
                for m in 0..=2 {
                    let c = fiber_count_check(&l, m, 2, &[2]).unwrap();
                    assert_eq!(c.verdict, Verdict::Pass, "{l} {m}");
                }
            }
        }
    }
}
