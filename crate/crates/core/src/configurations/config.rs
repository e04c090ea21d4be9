use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::linalg::{columns, det, rank, rat, Rat};
use crate::algebra::matrix::k_subsets;
use crate::algebra::poly::{numbered_vars, MultiPoly, Vars};
use crate::algebra::{Field, FieldElem, Matrix};
use crate::determinantal::PolyMatrix;
use crate::error::{Error, Result};

/// An `r x n` rational matrix of rank `r`; its rows span a configuration in `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationMatrix {
    d: Vec<Vec<Rat>>,
}

impl ConfigurationMatrix {
    pub fn new(d: Vec<Vec<Rat>>) -> Result<Self> {
        let r = d.len();
        let n = d.first().map_or(0, Vec::len);
        if r == 0 || n == 0 {
            return Err(Error::Dimension("empty configuration matrix".into()));
        }
        if d.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("ragged configuration matrix".into()));
        }
        let k = rank(&d);
        if k != r {
            return Err(Error::Precondition(format!(
                "configuration matrix has rank {k}, expected full row rank {r}"
            )));
        }
        Ok(ConfigurationMatrix { d })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Reduced incidence matrix of a graph on vertices `0..vertices`: one column
    /// per edge, `+1` at the lower endpoint and `-1` at the higher, with the row
    /// of the last vertex deleted. The graph must be connected.
    pub fn from_graph(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertices < 2 {
            return Err(Error::Precondition("a graph configuration needs at least two vertices".into()));
        }
        let mut d = vec![vec![rat(0); edges.len()]; vertices - 1];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= vertices || b >= vertices {
                return Err(Error::OutOfRange {
                    what: "vertex",
                    value: a.max(b),
                    range: format!("0..{vertices}"),
                });
            }
            let (lo, hi) = (a.min(b), a.max(b));
            if lo == hi {
                continue;
            }
            if lo < vertices - 1 {
                d[lo][e] = rat(1);
            }
            if hi < vertices - 1 {
                d[hi][e] = rat(-1);
            }
        }
        Self::new(d).map_err(|e| match e {
            Error::Precondition(_) => Error::Precondition("the graph is not connected".into()),
            other => other,
        })
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.d
    }

    /// `r`.
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// `n = |E|`.
    pub fn ground_size(&self) -> usize {
        self.d[0].len()
    }

    /// `D|_I`.
    pub fn restrict(&self, cols: &[usize]) -> Vec<Vec<Rat>> {
        columns(&self.d, cols)
    }

    /// Variables `x1..xn`, one per element of `E`.
    pub fn vars(&self) -> Vars {
        numbered_vars("x", self.ground_size())
    }

    /// `G * D`.
    pub fn change_basis(&self, g: &[Vec<Rat>]) -> Result<Self> {
        if g.len() != self.rank() || g.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::Dimension("change of basis must be r x r".into()));
        }
        let d = g
            .iter()
            .map(|row| super::linalg::left_mul(row, &self.d))
            .collect();
        Self::new(d)
    }
}

/// `A = D diag(x) D^T`, entry `(i, j) = sum_e d_ie d_je x_e`.
pub fn patterson_matrix(cfg: &ConfigurationMatrix) -> PolyMatrix {
    let v = cfg.vars();
    let r = cfg.rank();
    let d = cfg.rows();
    Matrix::from_fn(r, r, |i, j| {
        let terms = (0..cfg.ground_size()).filter_map(|e| {
            let c = &d[i][e] * &d[j][e];
            (!c.is_zero()).then(|| {
                let mut exps = vec![0; v.len()];
                exps[e] = 1;
                (exps, FieldElem::Rational(c))
            })
        });
        MultiPoly::from_terms(&v, Field::Rationals, terms).expect("exponent vectors fit the variables")
    })
}

/// Degree at most one in every variable.
pub fn is_square_free(p: &MultiPoly) -> bool {
    p.terms().all(|(m, _)| m.exponents().iter().all(|&e| e <= 1))
}

/// `det A = sum over r-subsets I of c_I x^I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportExpansion {
    /// Nonzero coefficients keyed by sorted 0-based subsets.
    pub coefficients: BTreeMap<Vec<usize>, Rat>,
    /// The expanded determinant of the Patterson matrix.
    pub determinant: MultiPoly,
    /// Whether the unsquared sum `sum det(D|_I) x^I` also equals `det A`.
    pub unsquared_matches: bool,
}

impl SupportExpansion {
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.coefficients.keys().cloned().collect()
    }
}

fn subset_poly(v: &Vars, coeffs: &BTreeMap<Vec<usize>, Rat>) -> Result<MultiPoly> {
    MultiPoly::from_terms(
        v,
        Field::Rationals,
        coeffs.iter().map(|(set, c)| {
            let mut exps = vec![0; v.len()];
            for &e in set {
                exps[e] = 1;
            }
            (exps, FieldElem::Rational(c.clone()))
        }),
    )
}

/// Cauchy-Binet for `D diag(x) D^T`: `c_I = det(D|_I)^2`, checked term by term
/// against the directly expanded determinant.
pub fn cauchy_binet_expansion(cfg: &ConfigurationMatrix) -> Result<SupportExpansion> {
    let v = cfg.vars();
    let mut squared = BTreeMap::new();
    let mut plain = BTreeMap::new();
    for set in k_subsets(cfg.ground_size(), cfg.rank()) {
        let m = det(&cfg.restrict(&set));
        if !m.is_zero() {
            squared.insert(set.clone(), &m * &m);
            plain.insert(set, m);
        }
    }
    let determinant = patterson_matrix(cfg).det()?;
    let expansion = subset_poly(&v, &squared)?;
    if expansion != determinant {
        return Err(Error::InvariantViolation(format!(
            "Cauchy-Binet sum {expansion} differs from det A = {determinant}"
        )));
    }
    Ok(SupportExpansion {
        unsquared_matches: subset_poly(&v, &plain)? == determinant,
        coefficients: squared,
        determinant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn triangle() -> ConfigurationMatrix {
        ConfigurationMatrix::from_i64(&[vec![1, -1, 0], vec![0, 1, -1]]).unwrap()
    }

    #[test]
    fn patterson_examples() {
        let id = ConfigurationMatrix::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        let a = patterson_matrix(&id);
        assert_eq!(a.get(0, 0).to_string(), "x1");
        assert!(a.get(0, 1).is_zero());
        assert_eq!(a.det().unwrap().to_string(), "x1*x2");

        let a = patterson_matrix(&triangle());
        assert_eq!(a.get(0, 0).to_string(), "x1 + x2");
        assert_eq!(a.get(0, 1).to_string(), "-x2");
        assert_eq!(a.get(1, 1).to_string(), "x2 + x3");
        assert_eq!(a.det().unwrap().to_string(), "x1*x2 + x1*x3 + x2*x3");

        assert!(ConfigurationMatrix::from_i64(&[vec![1, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn graphs() {
        let t = ConfigurationMatrix::from_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let det = patterson_matrix(&t).det().unwrap();
        assert_eq!(det.to_string(), "x1*x2 + x1*x3 + x2*x3");
        assert!(ConfigurationMatrix::from_graph(4, &[(0, 1), (2, 3)]).is_err());
    }

    #[test]
    fn expansions() {
        let e = cauchy_binet_expansion(&triangle()).unwrap();
        assert_eq!(e.coefficients.len(), 3);
        assert!(e.coefficients.values().all(|c| *c == rat(1)));
        // det(D|_{1,3}) = -1, so only the squares reproduce det A
        assert!(!e.unsquared_matches);

        let id = ConfigurationMatrix::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        let e = cauchy_binet_expansion(&id).unwrap();
        assert_eq!(e.support(), vec![vec![0, 1]]);

        let row = ConfigurationMatrix::from_i64(&[vec![1, 2]]).unwrap();
        let e = cauchy_binet_expansion(&row).unwrap();
        assert_eq!(e.coefficients[&vec![0]], rat(1));
        assert_eq!(e.coefficients[&vec![1]], rat(4));
        assert_eq!(e.determinant.to_string(), "x1 + 4*x2");
        assert!(!e.unsquared_matches);
    }

    #[test]
    fn square_free() {
        let v = numbered_vars("x", 3);
        let p = |s: &str| crate::algebra::parse_poly(s, &v).unwrap();
        assert!(is_square_free(&p("x1*x2 + x2*x3")));
        assert!(!is_square_free(&p("x1^2")));
        assert!(is_square_free(&p("5")));
    }
}
