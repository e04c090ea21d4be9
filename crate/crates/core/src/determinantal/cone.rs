use alloc::format;
use alloc::vec::Vec;

use super::pair::{DeterminantalPair, PolyMatrix};
use super::Verdict;
use crate::algebra::SeriesOrder;
use crate::error::{Error, Result};
use crate::jets::{consensus_in_dim, joint_histogram, CountConfig, CountReport, IdealGens};

/// Counts for one prime: `left = |Cont^m(W~) & Cont^p(y = 0)|` and
/// `right = |Cont^(m-p)(W')|`, both at the same level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCounts {
    pub q: u32,
    pub left: u128,
    pub right: u128,
    /// `left * q^(pr) == right`.
    pub identity: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeCheck {
    pub m: u32,
    pub p: u32,
    pub level: u32,
    pub counts: Vec<ConeCounts>,
    pub left: CountReport,
    pub right: CountReport,
    /// `p * r`.
    pub shift: u32,
    pub verdict: Verdict,
}

/// Compares jets of the affine cone `W~_A` in `X x A^r` with contact `m` along
/// `W~_A` and `p` along the zero section against `Cont^(m-p)` of the punctured
/// cone `W'_A`. Since the equations are linear in `y`, writing `y = t^p v`
/// gives a bijection up to the `q^(pr)` coefficients of `y` the level forgets,
/// so the codimensions differ by exactly `pr`.
pub fn cone_comparison_check(a: &PolyMatrix, m: u32, p: u32, level: u32, cfg: &CountConfig<'_>) -> Result<ConeCheck> {
    if p > m || m > level {
        return Err(Error::Precondition(format!(
            "need p <= m <= N, got p = {p}, m = {m}, N = {level}"
        )));
    }
    cfg.validate()?;
    let pair = DeterminantalPair::new(a.clone())?;
    let (n, r) = (pair.n(), pair.r());
    let w = pair.w_gens();
    let zero_section = IdealGens::coordinates(w.vars(), &(n..n + r).collect::<Vec<_>>());
    let ideals = [w.clone(), zero_section];
    let shift = p * r as u32;
    let mut counts = Vec::new();
    for &q in &cfg.primes {
        let h = joint_histogram(&ideals, level, q, &cfg.engine)?;
        let left = h.cell(&[SeriesOrder::Finite(m), SeriesOrder::Finite(p)]);
        let right = h.cell(&[SeriesOrder::Finite(m - p), SeriesOrder::Finite(0)]);
        let identity = left.checked_mul(u128::from(q).pow(shift)) == Some(right);
        counts.push(ConeCounts { q, left, right, identity });
    }
    let dim = ((n + r) * (level as usize + 1)) as u32;
    let left = consensus_in_dim(&counts.iter().map(|c| (c.q, c.left)).collect::<Vec<_>>(), dim);
    let right = consensus_in_dim(&counts.iter().map(|c| (c.q, c.right)).collect::<Vec<_>>(), dim);
    // the identity fixes the codimension shift at every prime; consensus
    // codimensions are estimates and can only contradict it through rounding
    let verdict = if counts.iter().all(|c| c.identity) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ConeCheck {
        m,
        p,
        level,
        counts,
        left,
        right,
        shift,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;
    use crate::determinantal::pair::{generic_matrix, parse_matrix};
    use alloc::vec;

    #[test]
    fn single_entry() {
        let a = parse_matrix(&vars(&["x1"]), &[vec!["x1"]]).unwrap();
        let cfg = CountConfig::with_primes(&[2, 3]);
        let c = cone_comparison_check(&a, 2, 1, 2, &cfg).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        // ord x1 = 1 and ord y1 = 1 at level 2: (q-1)q for each coordinate
        assert_eq!((c.counts[0].left, c.counts[1].left), (4, 36));
        // ord y1 = 0 and ord x1 = 1: (q-1)q^2 times (q-1)q
        assert_eq!(c.counts[1].right, 18 * 6);
        let c = cone_comparison_check(&a, 2, 1, 2, &CountConfig::with_primes(&[5, 7])).unwrap();
        assert_eq!(c.left.codim, crate::jets::Codim::Exact(2));
        assert_eq!(c.right.codim, crate::jets::Codim::Exact(1));
        let c = cone_comparison_check(&a, 2, 0, 2, &cfg).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert_eq!(c.left, c.right);
    }

    #[test]
    fn generic_two_by_two() {
        let cfg = CountConfig::with_primes(&[2, 3]);
        let c = cone_comparison_check(&generic_matrix(2, 2), 2, 1, 2, &cfg).unwrap();
        assert!(c.counts.iter().all(|c| c.identity));
        assert_eq!(c.verdict, Verdict::Pass);
        assert!(cone_comparison_check(&generic_matrix(2, 2), 1, 2, 2, &cfg).is_err());
    }
}
