//! Contact loci `Cont^m` and `Cont^{>=m}` counted over several primes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::counter::{joint_histogram, Engine};
use super::ideal::IdealGens;
use super::report::{codim_consensus, sampled_report, CountReport, SampleStats};
use super::sampling::{sample_hits, SamplingConfig};
use crate::algebra::poly::MultiPoly;
use crate::algebra::snf::LambdaProfile;
use crate::algebra::{Matrix, SeriesOrder};
use crate::error::{Error, Result};

/// Primes used when none are configured.
pub const DEFAULT_PRIMES: [u32; 2] = [3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContactMode {
    /// `ord = m`
    Exact,
    /// `ord >= m`, including jets whose order is not determined at the level.
    AtLeast,
}

impl ContactMode {
    pub fn accepts(self, order: SeriesOrder, m: u32) -> bool {
        match self {
            ContactMode::Exact => order == SeriesOrder::Finite(m),
            ContactMode::AtLeast => order.at_least(m),
        }
    }
}

/// Extra conditions a counted jet must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// The jet lies in the stratum of the given profile for the matrix,
    /// i.e. its `ell`-minors have order `lambda_1 + ... + lambda_ell`.
    Stratum {
        matrix: Matrix<MultiPoly>,
        profile: LambdaProfile,
    },
    /// The listed coordinates have joint order exactly `order`.
    CoordinateOrder { coords: Vec<usize>, order: u32 },
}

impl Constraint {
    /// Registry name.
    pub fn name(&self) -> &'static str {
        match self {
            Constraint::Stratum { .. } => "stratum",
            Constraint::CoordinateOrder { .. } => "coordinate-order",
        }
    }

    fn ideals(&self, gens: &IdealGens) -> Result<Vec<IdealGens>> {
        match self {
            Constraint::Stratum { matrix, profile } => {
                if profile.is_truncated() || profile.rank() != matrix.cols().min(matrix.rows()) {
                    return Err(Error::Precondition(format!(
                        "profile {profile} does not fit a {}x{} matrix",
                        matrix.rows(),
                        matrix.cols()
                    )));
                }
                let mvars = matrix.get(0, 0).vars().clone();
                (1..=profile.rank())
                    .map(|ell| {
                        let minors = matrix.minors(ell)?;
                        let nonzero: Vec<_> = minors.into_iter().filter(|g| !g.is_zero()).collect();
                        if nonzero.is_empty() {
                            Ok(IdealGens::zero(gens.vars()))
                        } else {
                            IdealGens::new(&mvars, nonzero)?.embed(gens.vars())
                        }
                    })
                    .collect()
            }
            Constraint::CoordinateOrder { coords, .. } => {
                if let Some(&bad) = coords.iter().find(|&&c| c >= gens.nvars()) {
                    return Err(Error::OutOfRange {
                        what: "coordinate",
                        value: bad,
                        range: format!("0..{}", gens.nvars()),
                    });
                }
                Ok(vec![IdealGens::coordinates(gens.vars(), coords)])
            }
        }
    }

    fn accepts(&self, orders: &[SeriesOrder]) -> bool {
        match self {
            Constraint::Stratum { profile, .. } => profile
                .partial_sums()
                .iter()
                .zip(orders)
                .all(|(&s, &o)| o == SeriesOrder::Finite(s)),
            Constraint::CoordinateOrder { order, .. } => orders[0] == SeriesOrder::Finite(*order),
        }
    }
}

/// What to count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactQuery {
    pub mode: ContactMode,
    pub m: u32,
    pub level: u32,
    pub constraint: Option<Constraint>,
}

impl ContactQuery {
    pub fn exact(m: u32, level: u32) -> Self {
        ContactQuery {
            mode: ContactMode::Exact,
            m,
            level,
            constraint: None,
        }
    }

    pub fn at_least(m: u32, level: u32) -> Self {
        ContactQuery {
            mode: ContactMode::AtLeast,
            m,
            level,
            constraint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // ord >= N+1 is still decided at level N; an exact order is not
        let max = match self.mode {
            ContactMode::Exact => self.level,
            ContactMode::AtLeast => self.level + 1,
        };
        if self.m > max {
            return Err(Error::Precondition(format!(
                "contact order m = {} is not decided at level N = {}",
                self.m, self.level
            )));
        }
        Ok(())
    }
}

/// Primes, work budget and optional sampled fallback.
#[derive(Clone, Debug)]
pub struct CountConfig<'r> {
    pub primes: Vec<u32>,
    pub engine: Engine<'r>,
    pub sampling: Option<SamplingConfig>,
}

impl Default for CountConfig<'static> {
    fn default() -> Self {
        CountConfig {
            primes: DEFAULT_PRIMES.to_vec(),
            engine: Engine::default(),
            sampling: None,
        }
    }
}

impl<'r> CountConfig<'r> {
    pub fn with_primes(primes: &[u32]) -> CountConfig<'static> {
        CountConfig {
            primes: primes.to_vec(),
            ..CountConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::Precondition(String::from("no primes configured")));
        }
        for &q in &self.primes {
            crate::algebra::Field::prime(u64::from(q))?;
        }
        let mut sorted = self.primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.primes.len() {
            return Err(Error::Precondition(String::from("primes must be distinct")));
        }
        Ok(())
    }
}

/// Per-prime counts of the selected cells of a joint histogram, with sampling fallback.
pub(crate) enum Tally {
    Exact(Vec<(u32, u128)>),
    Sampled(Vec<(u32, SampleStats)>),
}

pub(crate) fn tally(
    ideals: &[IdealGens],
    level: u32,
    cfg: &CountConfig<'_>,
    pred: &dyn Fn(&[SeriesOrder]) -> bool,
) -> Result<Tally> {
    cfg.validate()?;
    let mut exact = Vec::new();
    for &q in &cfg.primes {
        match joint_histogram(ideals, level, q, &cfg.engine) {
            Ok(h) => exact.push((q, h.sum_where(pred))),
            Err(Error::BudgetExceeded { .. }) if cfg.sampling.is_some() => {
                let s = cfg.sampling.unwrap_or(SamplingConfig { samples: 0, seed: 0 });
                let mut out = Vec::new();
                for &q in &cfg.primes {
                    let hits = sample_hits(ideals, level, q, s, pred)?;
                    out.push((q, SampleStats::new(s.samples, hits)));
                }
                return Ok(Tally::Sampled(out));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Tally::Exact(exact))
}

/// Counts jets at `query.level` whose order along `gens` meets the query, over every configured prime.
pub fn count_contact(gens: &IdealGens, query: &ContactQuery, cfg: &CountConfig<'_>) -> Result<CountReport> {
    query.validate()?;
    let mut ideals = vec![gens.clone()];
    if let Some(c) = &query.constraint {
        ideals.extend(c.ideals(gens)?);
    }
    let (mode, m) = (query.mode, query.m);
    let constraint = query.constraint.clone();
    let pred = move |o: &[SeriesOrder]| {
        mode.accepts(o[0], m) && constraint.as_ref().map_or(true, |c| c.accepts(&o[1..]))
    };
    let dim = (gens.nvars() * (query.level as usize + 1)) as u32;
    Ok(match tally(&ideals, query.level, cfg, &pred)? {
        Tally::Exact(counts) => codim_consensus(&counts, gens.nvars(), query.level),
        Tally::Sampled(s) => sampled_report(&s, dim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::{numbered_vars, vars};
    use crate::jets::report::{Codim, CountStatus};

    #[test]
    fn linear_conditions() {
        let x = IdealGens::parse(&vars(&["x1"]), &["x1"]).unwrap();
        let cfg = CountConfig::with_primes(&[3]);
        let r = count_contact(&x, &ContactQuery::at_least(2, 2), &cfg).unwrap();
        assert_eq!(r.raw(3), Some(3));
        assert_eq!(r.codim, Codim::Exact(2));
        let r = count_contact(&x, &ContactQuery::exact(1, 2), &cfg).unwrap();
        assert_eq!(r.raw(3), Some(6));
        assert!(count_contact(&x, &ContactQuery::exact(3, 2), &cfg).is_err());
    }

    #[test]
    fn determinant_hypersurface() {
        let v = numbered_vars("x", 4);
        let det = IdealGens::parse(&v, &["x1*x4 - x2*x3"]).unwrap();
        let cfg = CountConfig::with_primes(&[2, 3]);
        let r = count_contact(&det, &ContactQuery::at_least(1, 0), &cfg).unwrap();
        assert_eq!(r.raw(2), Some(10));
        assert_eq!(r.raw(3), Some(33));
        assert_eq!((r.status, r.codim), (CountStatus::Consensus, Codim::Exact(1)));
    }

    #[test]
    fn constraints_restrict_counts() {
        let v = numbered_vars("x", 4);
        let det = IdealGens::parse(&v, &["x1*x4 - x2*x3"]).unwrap();
        let x = |s: &str| parse_poly(s, &v).unwrap();
        let a = Matrix::from_rows(vec![vec![x("x1"), x("x2")], vec![x("x3"), x("x4")]]).unwrap();
        let cfg = CountConfig::with_primes(&[2]);
        let mut total = 0;
        for parts in [[0u32, 2], [1, 1]] {
            let q = ContactQuery {
                constraint: Some(Constraint::Stratum {
                    matrix: a.clone(),
                    profile: LambdaProfile::new(parts.to_vec()).unwrap(),
                }),
                ..ContactQuery::exact(2, 2)
            };
            total += count_contact(&det, &q, &cfg).unwrap().raw(2).unwrap();
        }
        let all = count_contact(&det, &ContactQuery::exact(2, 2), &cfg).unwrap();
        assert_eq!(Some(total), all.raw(2));

        let q = ContactQuery {
            constraint: Some(Constraint::CoordinateOrder {
                coords: vec![0],
                order: 1,
            }),
            ..ContactQuery::at_least(0, 1)
        };
        // x1 = a t + ..., a != 0: 1 * 1 * 2^6 jets of the 2^8
        assert_eq!(count_contact(&det, &q, &cfg).unwrap().raw(2), Some(64));
    }

    #[test]
    fn sampled_fallback() {
        let v = numbered_vars("x", 4);
        let det = IdealGens::parse(&v, &["x1*x4 - x2*x3"]).unwrap();
        let cfg = CountConfig {
            primes: vec![3],
            engine: Engine {
                budget: 10,
                ..Engine::default()
            },
            sampling: Some(SamplingConfig {
                samples: 2000,
                seed: 1,
            }),
        };
        let r = count_contact(&det, &ContactQuery::at_least(1, 1), &cfg).unwrap();
        assert_eq!(r.status, CountStatus::Sampled);
        let strict = CountConfig {
            sampling: None,
            ..cfg
        };
        assert!(matches!(
            count_contact(&det, &ContactQuery::at_least(1, 1), &strict),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
