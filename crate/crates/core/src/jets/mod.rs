//! Jets of affine space over prime fields, contact orders and point counts.

mod compiled;
pub mod contact;
pub mod counter;
pub mod ideal;
pub mod jet;
pub mod lct;
mod modq;
pub mod projective;
pub mod report;
pub mod sampling;

pub use contact::{count_contact, Constraint, ContactMode, ContactQuery, CountConfig, DEFAULT_PRIMES};
pub use counter::{joint_histogram, space_size, Engine, JointHistogram, Sequential, ShardRunner, ShardTally};
pub use ideal::IdealGens;
pub use jet::{enumerate_jets, ord_along_ideal, substitute_jet, JetIter, JetPoint, DEFAULT_BUDGET};
pub use lct::{lct_estimate, lct_estimate_visible, LctEstimate, LctStep};
pub use projective::{proj_count_contact, proj_count_fixed_base, ProjectiveReport};
pub use report::{codim_consensus, consensus_in_dim, Codim, CountReport, CountStatus, PrimeCount, SampleStats};
pub use sampling::SamplingConfig;
