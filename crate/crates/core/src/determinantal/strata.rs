use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pair::{minor_ideal_tower, minor_profile, pullback, snf_profile, DeterminantalPair};
use crate::algebra::snf::LambdaProfile;
use crate::algebra::{Field, SeriesOrder, TruncSeries};
use crate::error::{Error, Result};
use crate::jets::{joint_histogram, ord_along_ideal, Engine, JetPoint, JointHistogram};

/// How many jets of `Cont^m` are compared between the minor and Smith-form routes.
pub const SNF_SPOT_CHECKS: usize = 24;

/// The decomposition of `Cont^m(Z_A)` at one prime into profile strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub m: u32,
    pub level: u32,
    pub q: u32,
    /// Sorted by profile.
    pub strata: Vec<(LambdaProfile, u128)>,
    /// Jets of `Cont^m` whose profile the level leaves undetermined.
    pub residual: u128,
    /// `|Cont^m|`, counted separately from the strata.
    pub cont_m: u128,
    pub partition_ok: bool,
    pub snf_checked: usize,
    pub snf_disagreements: usize,
}

impl StratumReport {
    pub fn strata_total(&self) -> u128 {
        self.strata.iter().map(|(_, c)| c).sum()
    }
}

/// Joint histogram of the minor-ideal tower.
pub(crate) fn tower_histogram(
    pair: &DeterminantalPair,
    level: u32,
    q: u32,
    engine: &Engine<'_>,
) -> Result<JointHistogram> {
    joint_histogram(&minor_ideal_tower(pair.matrix())?, level, q, engine)
}

/// Strata with `|lambda| = m` in a tower histogram, and the undetermined remainder.
pub(crate) fn strata_from(h: &JointHistogram, m: u32) -> Result<(BTreeMap<LambdaProfile, u128>, u128)> {
    let mut strata = BTreeMap::new();
    let mut residual = 0;
    for (orders, count) in h.nonzero_cells() {
        if orders.last() != Some(&SeriesOrder::Finite(m)) {
            continue;
        }
        let profile = LambdaProfile::from_minor_orders(&orders)?;
        if profile.is_truncated() {
            residual += count;
        } else {
            *strata.entry(profile).or_insert(0) += count;
        }
    }
    Ok((strata, residual))
}

/// Classifies every jet of `Cont^m(Z_A)` at level `N` over `F_q` by its profile.
pub fn stratum_counts(
    pair: &DeterminantalPair,
    m: u32,
    level: u32,
    q: u32,
    engine: &Engine<'_>,
) -> Result<StratumReport> {
    if m > level {
        return Err(Error::Precondition(format!(
            "contact order m = {m} exceeds the level N = {level}"
        )));
    }
    let h = tower_histogram(pair, level, q, engine)?;
    let (strata, residual) = strata_from(&h, m)?;
    let cont_m = joint_histogram(core::slice::from_ref(pair.z_gens()), level, q, engine)?.marginal(0)
        [m as usize];
    let (snf_checked, snf_disagreements) = spot_check(pair, m, level, q)?;
    let strata: Vec<_> = strata.into_iter().collect();
    let total: u128 = strata.iter().map(|(_, c)| c).sum();
    Ok(StratumReport {
        m,
        level,
        q,
        partition_ok: residual == 0 && total == cont_m,
        strata,
        residual,
        cont_m,
        snf_checked,
        snf_disagreements,
    })
}

/// Compares the two profile routes on random jets of `Cont^m`.
fn spot_check(pair: &DeterminantalPair, m: u32, level: u32, q: u32) -> Result<(usize, usize)> {
    let field = Field::prime(u64::from(q))?;
    let n = pair.n();
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(q) << 32 | u64::from(m) << 16 | u64::from(level));
    let (mut checked, mut bad) = (0, 0);
    for _ in 0..SNF_SPOT_CHECKS * 64 {
        if checked == SNF_SPOT_CHECKS {
            break;
        }
        let coords = (0..n)
            .map(|_| {
                // bias towards higher order so deep strata are reached
                let ord = rng.gen_range(0..=m.min(level));
                let c: Vec<_> = (0..=level)
                    .map(|k| if k < ord { 0 } else { i64::from(rng.gen_range(0..q)) })
                    .map(|c| field.from_i64(c))
                    .collect();
                TruncSeries::new(field, c)
            })
            .collect::<Result<Vec<_>>>()?;
        let jet = JetPoint::new(coords)?;
        if ord_along_ideal(pair.z_gens(), &jet)? != SeriesOrder::Finite(m) {
            continue;
        }
        let pulled = pullback(pair.matrix(), &jet)?;
        let by_minors = minor_profile(&pulled)?;
        checked += 1;
        match snf_profile(&pulled)? {
            Some(s) if s == by_minors => {}
            _ => bad += 1,
        }
    }
    Ok((checked, bad))
}
