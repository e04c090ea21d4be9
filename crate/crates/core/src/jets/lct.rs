//! Log canonical thresholds from contact-locus codimensions.

use alloc::format;
use alloc::vec::Vec;

use num_rational::Rational64;

use super::contact::CountConfig;
use super::counter::joint_histogram;
use super::ideal::IdealGens;
use super::report::{codim_consensus, sampled_report, Codim, CountReport, CountStatus, SampleStats};
use super::sampling::sample_hits;
use crate::algebra::SeriesOrder;
use crate::error::{Error, Result};

/// Codimension of `Cont^m` at level `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LctStep {
    pub m: u32,
    pub report: CountReport,
    /// `codim / m` when the codimension is usable.
    pub ratio: Option<Rational64>,
}

/// `min_m codim(Cont^m) / m` over `1 <= m <= M`.
#[derive(Clone, Debug, PartialEq)]
pub struct LctEstimate {
    pub max_m: u32,
    pub steps: Vec<LctStep>,
    pub estimate: Rational64,
    /// Largest `m` attaining the minimum.
    pub witness_m: u32,
    /// Every step is certified, so `estimate` is an upper bound for the threshold.
    pub certified_upper_bound: bool,
    pub generators: usize,
    pub ambient_dim: usize,
}

/// Codimension used in the ratio: exact values, or the upper end of an interval.
fn usable_codim(c: Codim) -> Option<u32> {
    match c {
        Codim::Exact(c) => Some(c),
        Codim::Interval { hi, .. } => hi,
        Codim::Infinite => None,
    }
}

fn step(m: u32, report: CountReport) -> LctStep {
    let ratio = usable_codim(report.codim).map(|c| Rational64::new(i64::from(c), i64::from(m)));
    LctStep { m, report, ratio }
}

/// One histogram at level `M` per prime; the level-`m` count of `Cont^m` is
/// the level-`M` count divided by `q^(n(M-m))`.
fn exact_steps(ideals: &[IdealGens], n: usize, max_m: u32, cfg: &CountConfig<'_>) -> Result<Vec<LctStep>> {
    cfg.validate()?;
    let mut per_m: Vec<Vec<(u32, u128)>> = (0..=max_m).map(|_| Vec::new()).collect();
    for &q in &cfg.primes {
        let marg = joint_histogram(ideals, max_m, q, &cfg.engine)?.marginal(0);
        for m in 1..=max_m {
            let scale = u128::from(q).pow((n * (max_m - m) as usize) as u32);
            let c = marg[m as usize];
            if c % scale != 0 {
                return Err(Error::InvariantViolation(format!(
                    "count {c} of Cont^{m} at level {max_m} is not a multiple of q^(n(M-m))"
                )));
            }
            per_m[m as usize].push((q, c / scale));
        }
    }
    Ok((1..=max_m)
        .map(|m| step(m, codim_consensus(&per_m[m as usize], n, m)))
        .collect())
}

fn sampled_steps(ideals: &[IdealGens], n: usize, max_m: u32, cfg: &CountConfig<'_>) -> Result<Vec<LctStep>> {
    let s = cfg.sampling.ok_or(Error::Precondition("sampling is not configured".into()))?;
    (1..=max_m)
        .map(|m| {
            let stats = cfg
                .primes
                .iter()
                .map(|&q| {
                    let hits = sample_hits(ideals, m, q, s, |o| o[0] == SeriesOrder::Finite(m))?;
                    Ok((q, SampleStats::new(s.samples, hits)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(step(m, sampled_report(&stats, (n * (m as usize + 1)) as u32)))
        })
        .collect()
}

/// Estimates the log canonical threshold of `gens` from `Cont^m`, `m = 1..=M`.
pub fn lct_estimate(gens: &IdealGens, max_m: u32, cfg: &CountConfig<'_>) -> Result<LctEstimate> {
    lct_estimate_visible(gens, max_m, cfg)?.ok_or_else(|| {
        Error::Precondition(format!(
            "Cont^m is empty for every m <= {max_m}; the threshold is not visible at this depth"
        ))
    })
}

/// As [`lct_estimate`], with `None` when every `Cont^m` up to `M` is empty.
pub fn lct_estimate_visible(gens: &IdealGens, max_m: u32, cfg: &CountConfig<'_>) -> Result<Option<LctEstimate>> {
    if max_m == 0 {
        return Err(Error::Precondition("M must be at least 1".into()));
    }
    if gens.is_zero_ideal() {
        return Err(Error::Precondition("the zero ideal has no threshold".into()));
    }
    let n = gens.nvars();
    let ideals = [gens.clone()];
    let steps = match exact_steps(&ideals, n, max_m, cfg) {
        Err(Error::BudgetExceeded { .. }) if cfg.sampling.is_some() => {
            sampled_steps(&ideals, n, max_m, cfg)?
        }
        other => other?,
    };
    let any_sampled = steps.iter().any(|s| s.report.status == CountStatus::Sampled);

    let mut best: Option<(Rational64, u32)> = None;
    for s in &steps {
        if let Some(r) = s.ratio {
            if best.map_or(true, |(b, _)| r <= b) {
                best = Some((r, s.m));
            }
        }
    }
    let Some((estimate, witness_m)) = best else {
        return Ok(None);
    };
    let certified = !any_sampled && steps.iter().all(|s| s.report.status.is_certified());
    let generators = gens.gens().len();
    if estimate > Rational64::from_integer(generators as i64) {
        return Err(Error::InvariantViolation(format!(
            "threshold estimate {estimate} exceeds the number of generators {generators}"
        )));
    }
    if estimate > Rational64::from_integer(n as i64) {
        return Err(Error::InvariantViolation(format!(
            "threshold estimate {estimate} exceeds the ambient dimension {n}"
        )));
    }
    Ok(Some(LctEstimate {
        max_m,
        steps,
        estimate,
        witness_m,
        certified_upper_bound: certified,
        generators,
        ambient_dim: n,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{numbered_vars, vars};

    fn lct(v: &[&str], gens: &[&str], m: u32) -> LctEstimate {
        let i = IdealGens::parse(&vars(v), gens).unwrap();
        lct_estimate(&i, m, &CountConfig::default()).unwrap()
    }

    #[test]
    fn monomials() {
        for a in 1..=3i64 {
            let g = alloc::format!("x1^{a}");
            let e = lct(&["x1"], &[&g], 2 * a as u32);
            assert_eq!(e.estimate, Rational64::new(1, a));
            assert!(e.certified_upper_bound);
            assert_eq!(e.witness_m, 2 * a as u32);
        }
        let e = lct(&["x1"], &["x1^2"], 6);
        assert_eq!(e.estimate, Rational64::new(1, 2));
        assert_eq!(e.witness_m, 6);
        // odd orders are empty
        assert_eq!(e.steps[0].report.status, CountStatus::ExactEmpty);
    }

    #[test]
    fn normal_crossing_and_smooth() {
        let e = lct(&["x1", "x2"], &["x1*x2"], 2);
        assert_eq!(e.estimate, Rational64::from_integer(1));
        assert!(e.certified_upper_bound);
        let e = lct(&["x1"], &["x1"], 4);
        assert_eq!(e.estimate, Rational64::from_integer(1));
    }

    #[test]
    fn generic_determinant() {
        let v = numbered_vars("x", 4);
        let det = IdealGens::parse(&v, &["x1*x4 - x2*x3"]).unwrap();
        let e = lct_estimate(&det, 3, &CountConfig::default()).unwrap();
        assert_eq!(e.estimate, Rational64::from_integer(1));
        assert!(e.certified_upper_bound);
        for s in &e.steps {
            assert_eq!(s.report.codim, Codim::Exact(s.m));
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        let v = vars(&["x1"]);
        assert!(lct_estimate(&IdealGens::zero(&v), 2, &CountConfig::default()).is_err());
        let unit = IdealGens::parse(&v, &["1"]).unwrap();
        assert!(lct_estimate(&unit, 2, &CountConfig::default()).is_err());
        let x = IdealGens::parse(&v, &["x1"]).unwrap();
        assert!(lct_estimate(&x, 0, &CountConfig::default()).is_err());
    }
}
