//! Uniform random jets, for counts beyond the exact-search budget.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::{max_exponents, CompiledIdeal, Powers};
use super::ideal::IdealGens;
use crate::algebra::SeriesOrder;
use crate::error::Result;

/// Sampled mode parameters. The stream for prime `q` is seeded from `(seed, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub samples: u64,
    pub seed: u64,
}

/// Draws jets uniformly and counts those whose order tuple satisfies `pred`.
pub fn sample_hits(
    ideals: &[IdealGens],
    level: u32,
    q: u32,
    cfg: SamplingConfig,
    mut pred: impl FnMut(&[SeriesOrder]) -> bool,
) -> Result<u64> {
    let n = ideals.first().map_or(0, IdealGens::nvars);
    let compiled = ideals
        .iter()
        .map(|i| CompiledIdeal::new(i, q))
        .collect::<Result<Vec<_>>>()?;
    let len = level as usize + 1;
    let mut powers = Powers::new(q, &max_exponents(&compiled, n));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (u64::from(q) << 32));
    let mut coords = vec![0u32; n * len];
    let mut value = vec![0u32; len];
    let mut scratch = vec![0u32; len];
    let mut orders = vec![SeriesOrder::Truncated; compiled.len()];
    let mut hits = 0;
    for _ in 0..cfg.samples {
        for c in coords.iter_mut() {
            *c = rng.gen_range(0..q);
        }
        powers.load(&coords, len, len);
        for (o, ideal) in orders.iter_mut().zip(&compiled) {
            *o = SeriesOrder::Truncated;
            for g in &ideal.gens {
                g.eval_series(&powers, &mut value, &mut scratch);
                if let Some(k) = value.iter().position(|&c| c != 0) {
                    *o = (*o).min(SeriesOrder::Finite(k as u32));
                }
            }
        }
        if pred(&orders) {
            hits += 1;
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;

    #[test]
    fn sampled_fraction_is_close() {
        // ord(x1) >= 1 has probability 1/5
        let i = IdealGens::parse(&vars(&["x1", "x2"]), &["x1"]).unwrap();
        let cfg = SamplingConfig {
            samples: 20_000,
            seed: 7,
        };
        let hits = sample_hits(&[i.clone()], 2, 5, cfg, |o| o[0] >= SeriesOrder::Finite(1)).unwrap();
        let frac = hits as f64 / 20_000.0;
        assert!((frac - 0.2).abs() < 0.02, "{frac}");
        let again = sample_hits(&[i], 2, 5, cfg, |o| o[0] >= SeriesOrder::Finite(1)).unwrap();
        assert_eq!(hits, again);
    }
}
