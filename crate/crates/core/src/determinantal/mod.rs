//! Determinantal loci `Z_A`, their incidence correspondences `W_A` in
//! `X x P^(r-1)`, and the profile stratification of jets linking the two.

mod cone;
mod fiber;
mod pair;
mod strata;
mod thresholds;

use core::fmt;

pub use cone::{cone_comparison_check, ConeCheck, ConeCounts};
pub use fiber::{diagonal_base, fiber_codim_formula, fiber_count_check, FiberCheck};
pub use pair::{
    generic_matrix, lambda_profile, minor_ideal_tower, minor_profile, parse_matrix, pullback, snf_profile,
    DeterminantalPair, PolyMatrix,
};
pub use strata::{stratum_counts, StratumReport, SNF_SPOT_CHECKS};
pub use thresholds::{
    corollary_check, rationality_screen, thm1_bound_backward, thm1_bound_forward, BoundCheck, CorollaryReport,
    CorollaryVerdict, RationalityScreen, ScreenedStratum,
};

/// Outcome of comparing a count with a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Ambiguous,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Ambiguous => "AMBIGUOUS",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
