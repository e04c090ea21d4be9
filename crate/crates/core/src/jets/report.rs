//! Turning point counts into codimension estimates.

use alloc::vec::Vec;
use core::fmt;

/// Half-width of the acceptance band around an integer `log_q(count)`.
pub const GUARD_BAND: f64 = 0.45;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountStatus {
    /// Every count is zero.
    ExactEmpty,
    /// All primes round to the same dimension inside the guard band.
    Consensus,
    /// Rounding is unreliable or the primes disagree.
    Ambiguous,
    /// At least one count was estimated from random jets.
    Sampled,
}

impl CountStatus {
    pub fn is_certified(self) -> bool {
        matches!(self, CountStatus::ExactEmpty | CountStatus::Consensus)
    }

    pub fn label(self) -> &'static str {
        match self {
            CountStatus::ExactEmpty => "EXACT_EMPTY",
            CountStatus::Consensus => "CONSENSUS",
            CountStatus::Ambiguous => "AMBIGUOUS",
            CountStatus::Sampled => "SAMPLED",
        }
    }
}

impl fmt::Display for CountStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Codimension of a counted set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Codim {
    /// The set is empty.
    Infinite,
    Exact(u32),
    /// Bounds from disagreeing or unreliable roundings; `hi = None` is unbounded.
    Interval { lo: u32, hi: Option<u32> },
}

impl Codim {
    pub fn exact(self) -> Option<u32> {
        match self {
            Codim::Exact(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Infinite => write!(f, "inf"),
            Codim::Exact(c) => write!(f, "{c}"),
            Codim::Interval { lo, hi: Some(hi) } => write!(f, "[{lo},{hi}]"),
            Codim::Interval { lo, hi: None } => write!(f, "[{lo},inf]"),
        }
    }
}

/// Hit statistics of a sampled count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleStats {
    pub samples: u64,
    pub hits: u64,
    /// 95% Wilson score interval for the hit fraction.
    pub wilson: (f64, f64),
}

impl SampleStats {
    pub fn new(samples: u64, hits: u64) -> Self {
        SampleStats {
            samples,
            hits,
            wilson: wilson_interval(hits, samples, 1.96),
        }
    }
}

/// Wilson score interval for `hits` successes out of `n` trials.
pub fn wilson_interval(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Count data for one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeCount {
    pub q: u32,
    /// Exact count, or the rounded point estimate when sampled.
    pub raw: u128,
    pub total: u128,
    /// `log_q(raw)`; `None` for a zero count.
    pub log_q: Option<f64>,
    /// `round(log_q(raw))`.
    pub dim: Option<u32>,
    pub sample: Option<SampleStats>,
}

/// Per-prime counts of a subset of a `dim`-dimensional jet space and the codimension they support.
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub space_dim: u32,
    pub per_prime: Vec<PrimeCount>,
    pub status: CountStatus,
    pub codim: Codim,
}

impl CountReport {
    pub fn raw(&self, q: u32) -> Option<u128> {
        self.per_prime.iter().find(|p| p.q == q).map(|p| p.raw)
    }
}

fn log_q(x: f64, q: u32) -> f64 {
    libm::log(x) / libm::log(q as f64)
}

fn is_power(mut x: u128, q: u32) -> bool {
    let q = u128::from(q);
    if x == 0 {
        return false;
    }
    while x % q == 0 {
        x /= q;
    }
    x == 1
}

/// Consensus codimension of exact counts inside the jet space of `A^n` at level `N`.
pub fn codim_consensus(counts: &[(u32, u128)], n: usize, level: u32) -> CountReport {
    consensus_in_dim(counts, (n * (level as usize + 1)) as u32)
}

/// Consensus codimension of exact counts inside a space of dimension `space_dim`.
pub fn consensus_in_dim(counts: &[(u32, u128)], space_dim: u32) -> CountReport {
    let per_prime: Vec<PrimeCount> = counts
        .iter()
        .map(|&(q, raw)| {
            let total = u128::from(q).checked_pow(space_dim).unwrap_or(u128::MAX);
            let log = (raw > 0).then(|| log_q(raw as f64, q));
            PrimeCount {
                q,
                raw,
                total,
                log_q: log,
                dim: log.map(|x| libm::round(x).max(0.0) as u32),
                sample: None,
            }
        })
        .collect();
    let (status, codim) = decide(&per_prime, space_dim);
    CountReport {
        space_dim,
        per_prime,
        status,
        codim,
    }
}

fn decide(per_prime: &[PrimeCount], space_dim: u32) -> (CountStatus, Codim) {
    if per_prime.iter().all(|p| p.raw == 0) {
        return (CountStatus::ExactEmpty, Codim::Infinite);
    }
    let within = |p: &PrimeCount| match (p.log_q, p.dim) {
        (Some(x), Some(d)) => libm::fabs(x - d as f64) < GUARD_BAND,
        _ => false,
    };
    let first = per_prime.iter().find_map(|p| p.dim);
    let agree = per_prime.iter().all(|p| p.dim == first && within(p));
    let single_exact = per_prime.len() >= 2
        || per_prime.iter().all(|p| p.raw == p.total || is_power(p.raw, p.q));
    if agree && single_exact {
        if let Some(d) = first {
            return (CountStatus::Consensus, Codim::Exact(space_dim.saturating_sub(d)));
        }
    }
    let mut lo = u32::MAX;
    let mut hi = Some(0u32);
    for p in per_prime {
        match (p.log_q, p.dim) {
            (Some(x), Some(d)) => {
                let (a, b) = if within(p) && single_exact {
                    (d, d)
                } else {
                    (libm::floor(x) as u32, libm::ceil(x) as u32)
                };
                lo = lo.min(space_dim.saturating_sub(b));
                hi = hi.map(|h| h.max(space_dim.saturating_sub(a)));
            }
            _ => hi = None,
        }
    }
    (CountStatus::Ambiguous, Codim::Interval { lo, hi })
}

/// Report for counts estimated from samples; never certified.
pub fn sampled_report(samples: &[(u32, SampleStats)], space_dim: u32) -> CountReport {
    let mut lo = u32::MAX;
    let mut hi = Some(0u32);
    let per_prime = samples
        .iter()
        .map(|&(q, s)| {
            let total = u128::from(q).checked_pow(space_dim).unwrap_or(u128::MAX);
            let frac = s.hits as f64 / s.samples.max(1) as f64;
            let est = frac * total as f64;
            let (wl, wh) = s.wilson;
            // dimension bounds from the interval ends
            let dim_hi = log_q(wh * total as f64, q);
            lo = lo.min(space_dim.saturating_sub(libm::ceil(dim_hi).max(0.0) as u32));
            if wl > 0.0 {
                let dim_lo = log_q(wl * total as f64, q);
                hi = hi.map(|h| h.max(space_dim.saturating_sub(libm::floor(dim_lo).max(0.0) as u32)));
            } else {
                hi = None;
            }
            let log = (est >= 1.0).then(|| log_q(est, q));
            PrimeCount {
                q,
                raw: est as u128,
                total,
                log_q: log,
                dim: log.map(|x| libm::round(x).max(0.0) as u32),
                sample: Some(s),
            }
        })
        .collect();
    CountReport {
        space_dim,
        per_prime,
        status: CountStatus::Sampled,
        codim: Codim::Interval { lo, hi },
    }
}
