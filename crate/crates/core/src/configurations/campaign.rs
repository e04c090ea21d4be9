use alloc::format;

use super::config::{cauchy_binet_expansion, patterson_matrix, is_square_free, ConfigurationMatrix, SupportExpansion};
use super::matroid::{is_connected, Matroid};
use crate::determinantal::{corollary_check, CorollaryReport, PolyMatrix};
use crate::error::{Error, Result};
use crate::jets::CountConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigurationReport {
    pub patterson: PolyMatrix,
    pub expansion: SupportExpansion,
    pub square_free: bool,
    pub connected: bool,
    /// The matroid's bases coincide with the support of `det A`.
    pub support_is_bases: bool,
    pub corollary: CorollaryReport,
}

/// Builds the Patterson matrix of the configuration and estimates both
/// thresholds for it. The determinant must be square-free.
pub fn configuration_lct_campaign(cfg: &ConfigurationMatrix, max_m: u32, counts: &CountConfig<'_>) -> Result<ConfigurationReport> {
    let patterson = patterson_matrix(cfg);
    let expansion = cauchy_binet_expansion(cfg)?;
    let square_free = is_square_free(&expansion.determinant);
    if !square_free {
        return Err(Error::InvariantViolation(format!(
            "det A = {} is not square-free",
            expansion.determinant
        )));
    }
    let matroid = Matroid::from_columns(cfg)?;
    let support_is_bases = matroid.basis_sets() == expansion.support();
    if !support_is_bases {
        return Err(Error::InvariantViolation(
            "the support of det A differs from the bases of the matroid".into(),
        ));
    }
    let corollary = corollary_check(&patterson, max_m, counts)?;
    Ok(ConfigurationReport {
        connected: is_connected(&matroid),
        patterson,
        expansion,
        square_free,
        support_is_bases,
        corollary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinantal::CorollaryVerdict;
    use alloc::vec;
    use num_rational::Rational64;

    #[test]
    fn coordinate_configurations() {
        let id = ConfigurationMatrix::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        let rep = configuration_lct_campaign(&id, 2, &CountConfig::default()).unwrap();
        assert!(!rep.connected);
        assert_eq!(rep.corollary.lct_z.estimate, Rational64::from_integer(1));
        let row = ConfigurationMatrix::from_i64(&[vec![1, 1]]).unwrap();
        let rep = configuration_lct_campaign(&row, 3, &CountConfig::default()).unwrap();
        assert!(rep.connected);
        assert_eq!(rep.corollary.lct_z.estimate, Rational64::from_integer(1));
        assert_eq!(rep.corollary.verdict, CorollaryVerdict::Consistent);
    }
}
