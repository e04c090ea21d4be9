//! Configuration hypersurfaces: Patterson matrices `D diag(x) D^T` of rational
//! configurations, their matroids, and 1-genericity.

mod campaign;
mod config;
mod generic;
pub mod linalg;
mod matroid;

pub use campaign::{configuration_lct_campaign, ConfigurationReport};
pub use config::{cauchy_binet_expansion, is_square_free, patterson_matrix, ConfigurationMatrix, SupportExpansion};
pub use generic::{hadamard_one_generic, incidence_jacobian, linear_one_generic, OneGenericity, Witness};
pub use matroid::{elements, is_connected, Matroid, MAX_GROUND_SET};
