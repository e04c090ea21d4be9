use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::parse::parse_poly;
use crate::algebra::poly::{numbered_vars, MultiPoly, Vars};
use crate::algebra::snf::{minor_orders, smith_normal_form, LambdaProfile, SeriesMatrix};
use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};
use crate::jets::{ord_along_ideal, substitute_jet, IdealGens, JetPoint};

/// Matrix of polynomials over one variable list.
pub type PolyMatrix = Matrix<MultiPoly>;

/// Parses a matrix given as rows of polynomial strings.
pub fn parse_matrix<S: AsRef<str>>(vars: &Vars, rows: &[Vec<S>]) -> Result<PolyMatrix> {
    let rows = rows
        .iter()
        .map(|row| row.iter().map(|e| parse_poly(e.as_ref(), vars)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

/// The `s x r` matrix of distinct variables `x1, ..., x_{sr}`, filled row by row.
pub fn generic_matrix(s: usize, r: usize) -> PolyMatrix {
    let v = numbered_vars("x", s * r);
    Matrix::from_fn(s, r, |i, j| MultiPoly::variable(&v, Field::Rationals, i * r + j))
}

fn matrix_vars(a: &PolyMatrix) -> Result<Vars> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let v = a.get(0, 0).vars().clone();
    if a.entries().iter().any(|e| e.vars() != &v) {
        return Err(Error::VariableMismatch("matrix entries use different variable lists".into()));
    }
    Ok(v)
}

/// The `ell`-minors of `a` for `ell = 1..=min(s, r)`, with zero and repeated
/// minors dropped. A size whose minors all vanish gives the zero ideal.
pub fn minor_ideal_tower(a: &PolyMatrix) -> Result<Vec<IdealGens>> {
    let v = matrix_vars(a)?;
    (1..=a.rows().min(a.cols()))
        .map(|ell| {
            let mut gens: Vec<MultiPoly> = Vec::new();
            for g in a.minors(ell)? {
                if !g.is_zero() && !gens.contains(&g) {
                    gens.push(g);
                }
            }
            Ok(if gens.is_empty() {
                IdealGens::zero(&v)
            } else {
                IdealGens::new(&v, gens)?
            })
        })
        .collect()
}

/// `gamma^*(A)`: the matrix of pulled-back entries.
pub fn pullback(a: &PolyMatrix, jet: &JetPoint) -> Result<SeriesMatrix> {
    a.try_map(|e| substitute_jet(e, jet))
}

/// The profile of `gamma^*(A)` from the orders of its minor ideals, checked
/// against the Smith normal form whenever both are determined at the jet's level.
pub fn lambda_profile(a: &PolyMatrix, jet: &JetPoint) -> Result<LambdaProfile> {
    let tower = minor_ideal_tower(a)?;
    let orders = tower
        .iter()
        .map(|i| ord_along_ideal(i, jet))
        .collect::<Result<Vec<_>>>()?;
    let profile = LambdaProfile::from_minor_orders(&orders)?;
    let pulled = pullback(a, jet)?;
    if let Some(snf) = snf_profile(&pulled)? {
        if !profile.is_truncated() && snf != profile {
            return Err(Error::InvariantViolation(format!(
                "minor orders give {profile}, the Smith form gives {snf}"
            )));
        }
    }
    Ok(profile)
}

/// The Smith-form profile, or `None` when the level does not determine it.
pub fn snf_profile(m: &SeriesMatrix) -> Result<Option<LambdaProfile>> {
    match smith_normal_form(m) {
        Ok(r) => Ok(Some(r.lambda)),
        Err(Error::TruncationInsufficient { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The profile read off the minors of a series matrix.
pub fn minor_profile(m: &SeriesMatrix) -> Result<LambdaProfile> {
    LambdaProfile::from_minor_orders(&minor_orders(m)?)
}

/// A matrix `A` with `s >= r`, its maximal-minor ideal `Z_A` and the incidence
/// forms `sum_j a_ij y_j` cutting out `W_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminantalPair {
    matrix: PolyMatrix,
    z_gens: IdealGens,
    w_gens: IdealGens,
}

impl DeterminantalPair {
    pub fn new(matrix: PolyMatrix) -> Result<Self> {
        let v = matrix_vars(&matrix)?;
        let (s, r) = (matrix.rows(), matrix.cols());
        if s < r {
            return Err(Error::Dimension(format!(
                "a {s}x{r} matrix has fewer rows than columns"
            )));
        }
        let minors = matrix.minors(r)?;
        let z_gens = IdealGens::new(&v, minors).map_err(|_| {
            Error::Precondition("every maximal minor vanishes, so Z_A is not a proper subscheme".into())
        })?;
        let ys: Vec<String> = (1..=r).map(|j| format!("y{j}")).collect();
        if let Some(clash) = ys.iter().find(|y| v.contains(*y)) {
            return Err(Error::VariableMismatch(format!(
                "matrix variable {clash} clashes with a projective coordinate"
            )));
        }
        let wv: Vars = v.iter().cloned().chain(ys).collect::<Vec<_>>().into();
        let w = (0..s)
            .map(|i| {
                let mut form = MultiPoly::zero(&wv, matrix.get(i, 0).field());
                for j in 0..r {
                    let y = MultiPoly::variable(&wv, form.field(), v.len() + j);
                    form = &form + &(&matrix.get(i, j).embed(&wv)? * &y);
                }
                Ok(form)
            })
            .collect::<Result<Vec<_>>>()?;
        let w_gens = IdealGens::new(&wv, w)?;
        Ok(DeterminantalPair { matrix, z_gens, w_gens })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    /// Number of rows `s`.
    pub fn s(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of columns `r`.
    pub fn r(&self) -> usize {
        self.matrix.cols()
    }

    /// Dimension of `X`.
    pub fn n(&self) -> usize {
        self.z_gens.nvars()
    }

    pub fn z_gens(&self) -> &IdealGens {
        &self.z_gens
    }

    /// Incidence forms over `x_1..x_n, y_1..y_r`.
    pub fn w_gens(&self) -> &IdealGens {
        &self.w_gens
    }

    /// The incidence forms on the chart `y_j = 1`, over the remaining variables.
    pub fn w_chart(&self, j: usize) -> Result<IdealGens> {
        if j >= self.r() {
            return Err(Error::OutOfRange {
                what: "chart",
                value: j,
                range: format!("0..{}", self.r()),
            });
        }
        let one = self.w_gens.gens()[0].field().one();
        self.w_gens.specialize(self.n() + j, &one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn towers() {
        let g = minor_ideal_tower(&generic_matrix(2, 2)).unwrap();
        assert_eq!(g[0].gens().len(), 4);
        assert_eq!(g[1].gens().len(), 1);
        assert_eq!(g[1].gens()[0].to_string(), "x1*x4 - x2*x3");

        let v = vars(&["x1"]);
        let d = parse_matrix(&v, &[vec!["x1", "0"], vec!["0", "x1"]]).unwrap();
        let g = minor_ideal_tower(&d).unwrap();
        assert_eq!(g[0].gens().len(), 1);
        assert_eq!(g[1].gens()[0].to_string(), "x1^2");

        let g = minor_ideal_tower(&generic_matrix(3, 2)).unwrap();
        assert_eq!((g[0].gens().len(), g[1].gens().len()), (6, 3));
    }

    #[test]
    fn profiles() {
        let a = generic_matrix(2, 2);
        let f = Field::Prime(3);
        let jet = JetPoint::from_coeffs(f, &[[1, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(lambda_profile(&a, &jet).unwrap().parts(), &[0, 2]);
        let jet = JetPoint::from_coeffs(
            f,
            &[[0, 1, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 0, 1, 0]],
        )
        .unwrap();
        assert_eq!(lambda_profile(&a, &jet).unwrap().parts(), &[1, 3]);

        let v = vars(&["x1"]);
        let d = parse_matrix(&v, &[vec!["x1", "0"], vec!["0", "x1"]]).unwrap();
        let jet = JetPoint::from_coeffs(f, &[[0, 0, 0]]).unwrap();
        let p = lambda_profile(&d, &jet).unwrap();
        assert!(p.is_truncated());
        assert_eq!(p.to_string(), "(?)");
    }

    #[test]
    fn pair_construction() {
        let p = DeterminantalPair::new(generic_matrix(2, 2)).unwrap();
        assert_eq!(p.w_gens().gens()[0].to_string(), "x1*y1 + x2*y2");
        assert!(p.w_gens().gens().iter().all(|g| g.total_degree() == 2));
        let chart = p.w_chart(0).unwrap();
        assert_eq!(chart.vars().join(","), "x1,x2,x3,x4,y2");
        assert_eq!(chart.gens()[1].to_string(), "x4*y2 + x3");

        let v = vars(&["x1"]);
        let zero = parse_matrix(&v, &[vec!["x1", "x1"], vec!["x1", "x1"]]).unwrap();
        assert!(matches!(DeterminantalPair::new(zero), Err(Error::Precondition(_))));
        let v = vars(&["y1"]);
        let clash = parse_matrix(&v, &[vec!["y1"]]).unwrap();
        assert!(matches!(DeterminantalPair::new(clash), Err(Error::VariableMismatch(_))));
        assert!(DeterminantalPair::new(generic_matrix(2, 3)).is_err());
    }
}
