use detlab_core::jets::{ShardRunner, ShardTally};
use rayon::prelude::*;

/// Runs counting shards on the rayon pool. Results come back in shard order,
/// so histograms do not depend on scheduling.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rayon;

impl ShardRunner for Rayon {
    fn run(&self, shards: usize, job: &(dyn Fn(usize) -> ShardTally + Sync)) -> Vec<ShardTally> {
        (0..shards).into_par_iter().map(job).collect()
    }
}

pub static RAYON: Rayon = Rayon;
