use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::config::ConfigurationMatrix;
use super::linalg::{kernel, left_mul, primitive, rank, rat, transpose, Rat};
use super::matroid::{elements, MAX_GROUND_SET};
use crate::algebra::poly::{MultiPoly, Vars};
use crate::algebra::{Field, Matrix};
use crate::determinantal::PolyMatrix;
use crate::error::{Error, Result};

/// Nonzero `v, w` with `v^T A w = 0` identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v: Vec<Rat>,
    pub w: Vec<Rat>,
    /// For the Hadamard criterion: the split `S` (0-based) and two vectors of
    /// the configuration, supported off `S` and inside `S`.
    pub split: Option<(Vec<usize>, Vec<Rat>, Vec<Rat>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneGenericity {
    pub one_generic: bool,
    /// The verdict is a decision; otherwise it is evidence from a witness search.
    pub confirmed: bool,
    pub witness: Option<Witness>,
    pub method: String,
}

impl OneGenericity {
    pub fn label(&self) -> &'static str {
        match (self.one_generic, self.confirmed) {
            (true, true) => "1-generic",
            (true, false) => "1-generic (UNCONFIRMED: no witness found)",
            (false, _) => "not 1-generic",
        }
    }
}

/// The Patterson matrix fails to be 1-generic exactly when `E` splits as
/// `S | E - S` with both column blocks of rank below `r`: then the
/// configuration has nonzero vectors supported on each side, whose
/// coordinatewise product vanishes.
pub fn hadamard_one_generic(cfg: &ConfigurationMatrix) -> Result<OneGenericity> {
    let (r, n) = (cfg.rank(), cfg.ground_size());
    if n > MAX_GROUND_SET {
        return Err(Error::BudgetExceeded {
            budget: MAX_GROUND_SET as u64,
            unit: "ground set elements",
        });
    }
    let full: u64 = (1 << n) - 1;
    for rest in 0..1u64 << (n - 1) {
        let s = 1 | rest << 1;
        if s == full {
            continue;
        }
        let (inside, outside) = (elements(s), elements(full & !s));
        let (d_in, d_out) = (cfg.restrict(&inside), cfg.restrict(&outside));
        if rank(&d_in) < r && rank(&d_out) < r {
            // c1^T D vanishes on S, c2^T D vanishes off S
            let c1 = primitive(&kernel(&transpose(&d_in), r)[0]);
            let c2 = primitive(&kernel(&transpose(&d_out), r)[0]);
            let u1 = left_mul(&c1, cfg.rows());
            let u2 = left_mul(&c2, cfg.rows());
            return Ok(OneGenericity {
                one_generic: false,
                confirmed: true,
                witness: Some(Witness {
                    v: c1,
                    w: c2,
                    split: Some((inside, u1, u2)),
                }),
                method: "Hadamard split".into(),
            });
        }
    }
    Ok(OneGenericity {
        one_generic: true,
        confirmed: true,
        witness: None,
        method: "Hadamard split".into(),
    })
}

/// `A = sum_k x_k A_k` for a matrix of linear forms over the rationals.
fn coefficient_matrices(a: &PolyMatrix) -> Result<Vec<Vec<Vec<Rat>>>> {
    let n = a.get(0, 0).nvars();
    let mut out = vec![vec![vec![rat(0); a.cols()]; a.rows()]; n];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let e = a.get(i, j);
            if e.field() != Field::Rationals {
                return Err(Error::Precondition("entries must have rational coefficients".into()));
            }
            if !e.is_zero() && !e.is_homogeneous_linear() {
                return Err(Error::Precondition(format!("entry {e} is not a linear form")));
            }
            for (m, c) in e.terms() {
                let k = m.exponents().iter().position(|&x| x == 1).unwrap_or(0);
                out[k][i][j] = c.as_rational().cloned().unwrap_or_default();
            }
        }
    }
    Ok(out)
}

/// `v^T A_k w = 0` for every `k`.
fn annihilates(ak: &[Vec<Vec<Rat>>], v: &[Rat], w: &[Rat]) -> bool {
    ak.iter().all(|m| {
        let vm = left_mul(v, m);
        vm.iter().zip(w).fold(rat(0), |acc, (a, b)| acc + a * b).is_zero()
    })
}

/// Nonzero `w` orthogonal to every `A_k^T v`, if any.
fn partner(ak: &[Vec<Vec<Rat>>], v: &[Rat]) -> Option<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> = ak.iter().map(|m| left_mul(v, m)).collect();
    kernel(&rows, v.len()).into_iter().next().map(|w| primitive(&w))
}

// univariate polynomials over Q, lowest degree first

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lead = b[b.len() - 1].clone();
    while r.len() >= b.len() {
        let f = &r[r.len() - 1] / &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&f * c);
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn poly_gcd(mut a: Vec<Rat>, mut b: Vec<Rat>) -> Vec<Rat> {
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

/// A rational root of a polynomial of degree 1 or 2.
fn rational_root(p: &[Rat]) -> Option<Rat> {
    match p.len() {
        2 => Some(-&p[0] / &p[1]),
        3 => {
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = b * b - rat(4) * a * c;
            rational_sqrt(&disc).map(|s| (-b + s) / (rat(2) * a))
        }
        _ => None,
    }
}

/// Exact decision for `2 x 2` matrices. For fixed `v`, a partner `w` exists iff
/// the vectors `A_k^T v` span at most a line, i.e. all their `2 x 2` minors
/// vanish. Those minors are binary quadratic forms in `v`, so the question is
/// whether they share a projective zero over the complex numbers.
fn decide_rank_two(ak: &[Vec<Vec<Rat>>]) -> OneGenericity {
    // A_k^T v = (l_k0(v), l_k1(v)) with l_kj = A_k[0][j] v1 + A_k[1][j] v2
    let lin = |k: usize, j: usize| (ak[k][0][j].clone(), ak[k][1][j].clone());
    let mut forms = Vec::new();
    for k in 0..ak.len() {
        for l in k..ak.len() {
            let ((a1, a2), (b1, b2)) = (lin(k, 0), lin(l, 1));
            let ((c1, c2), (d1, d2)) = (lin(l, 0), lin(k, 1));
            // l_k0 l_l1 - l_l0 l_k1 as [v2^2, v1 v2, v1^2]
            forms.push([
                &a2 * &b2 - &c2 * &d2,
                &a1 * &b2 + &a2 * &b1 - &c1 * &d2 - &c2 * &d1,
                &a1 * &b1 - &c1 * &d1,
            ]);
        }
    }
    let method = String::from("common zeros of binary quadratic forms");
    let found = |v: Vec<Rat>| {
        let w = partner(ak, &v);
        OneGenericity {
            one_generic: false,
            confirmed: true,
            witness: w.map(|w| Witness {
                v: primitive(&v),
                w,
                split: None,
            }),
            method: method.clone(),
        }
    };
    if forms.iter().all(|f| f[2].is_zero()) {
        return found(vec![rat(1), rat(0)]);
    }
    let g = forms
        .iter()
        .map(|f| trim(f.to_vec()))
        .fold(Vec::new(), poly_gcd);
    if g.len() <= 1 {
        return OneGenericity {
            one_generic: true,
            confirmed: true,
            witness: None,
            method,
        };
    }
    match rational_root(&g) {
        Some(root) => found(vec![root, rat(1)]),
        None => OneGenericity {
            one_generic: false,
            confirmed: true,
            witness: None,
            method: format!("{method}; the common zero is irrational"),
        },
    }
}

/// Points of `P^(r-1)(F_q)`, first nonzero coordinate 1.
fn projective_points(r: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        for idx in 0..(q as usize).pow(free as u32) {
            let mut p = vec![0u32; r];
            p[lead] = 1;
            let mut rest = idx;
            for c in p[lead + 1..].iter_mut() {
                *c = (rest % q as usize) as u32;
                rest /= q as usize;
            }
            out.push(p);
        }
    }
    out
}

fn lift(p: &[u32], q: u32) -> Vec<Rat> {
    p.iter()
        .map(|&c| {
            let c = i64::from(c);
            rat(if c > i64::from(q) / 2 { c - i64::from(q) } else { c })
        })
        .collect()
}

/// Searches `P^(r-1)(F_q)^2` for `v^T A w = 0 (mod q)` and re-checks each hit
/// over the rationals after lifting to small integers.
fn search_witness(ak: &[Vec<Vec<Rat>>], r: usize, primes: &[u32]) -> Result<Option<Witness>> {
    for &q in primes {
        let field = Field::prime(u64::from(q))?;
        let reduce = |x: &Rat| -> Option<u32> {
            field.from_rational(x).ok().and_then(|e| e.as_fp()).map(|f| f.value())
        };
        let Some(mods) = ak
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(reduce).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let pts = projective_points(r, q);
        let qq = u64::from(q);
        for v in &pts {
            for w in &pts {
                let zero = mods.iter().all(|m| {
                    let mut s = 0u64;
                    for (i, row) in m.iter().enumerate() {
                        for (j, &c) in row.iter().enumerate() {
                            s = (s + u64::from(v[i]) * u64::from(c) % qq * u64::from(w[j])) % qq;
                        }
                    }
                    s == 0
                });
                if zero {
                    let (lv, lw) = (lift(v, q), lift(w, q));
                    if annihilates(ak, &lv, &lw) {
                        return Ok(Some(Witness {
                            v: lv,
                            w: lw,
                            split: None,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Decides whether a square matrix of linear forms is 1-generic.
///
/// Sizes 1 and 2 are decided exactly. For larger sizes a witness found over
/// some `F_q` and confirmed over the rationals settles non-genericity; without
/// one the positive answer is unconfirmed.
pub fn linear_one_generic(a: &PolyMatrix, primes: &[u32]) -> Result<OneGenericity> {
    let r = a.rows();
    if r != a.cols() {
        return Err(Error::Dimension(format!("a {}x{} matrix is not square", r, a.cols())));
    }
    let ak = coefficient_matrices(a)?;
    if r == 1 {
        let zero = ak.iter().all(|m| m[0][0].is_zero());
        return Ok(OneGenericity {
            one_generic: !zero,
            confirmed: true,
            witness: zero.then(|| Witness {
                v: vec![rat(1)],
                w: vec![rat(1)],
                split: None,
            }),
            method: "single entry".into(),
        });
    }
    if r == 2 {
        let mut out = decide_rank_two(&ak);
        if !out.one_generic && out.witness.is_none() {
            out.witness = search_witness(&ak, r, primes)?;
        }
        return Ok(out);
    }
    Ok(match search_witness(&ak, r, primes)? {
        Some(w) => OneGenericity {
            one_generic: false,
            confirmed: true,
            witness: Some(w),
            method: "finite-field search, confirmed over Q".into(),
        },
        None => OneGenericity {
            one_generic: true,
            confirmed: false,
            witness: None,
            method: format!("finite-field search over {primes:?}"),
        },
    })
}

/// `[A | B(y)]`: the Jacobian of the incidence forms `sum_j a_ij y_j` with
/// respect to `y_1..y_r` and then `x_1..x_n`, over the variables `x, y`.
pub fn incidence_jacobian(a: &PolyMatrix) -> Result<PolyMatrix> {
    coefficient_matrices(a)?;
    if a.entries().iter().all(MultiPoly::is_zero) {
        return Err(Error::Precondition("the zero matrix has no incidence forms".into()));
    }
    let xv = a.get(0, 0).vars().clone();
    let (n, r) = (xv.len(), a.cols());
    let ys: Vec<String> = (1..=r).map(|j| format!("y{j}")).collect();
    if let Some(clash) = ys.iter().find(|y| xv.contains(*y)) {
        return Err(Error::VariableMismatch(format!("variable {clash} clashes with a y coordinate")));
    }
    let all: Vars = xv.iter().cloned().chain(ys).collect::<Vec<_>>().into();
    let forms = (0..a.rows())
        .map(|i| {
            let mut f = MultiPoly::zero(&all, Field::Rationals);
            for j in 0..r {
                let y = MultiPoly::variable(&all, Field::Rationals, n + j);
                f = &f + &(&a.get(i, j).embed(&all)? * &y);
            }
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_fn(a.rows(), r + n, |i, c| {
        let var = if c < r { n + c } else { c - r };
        forms[i].derivative(var)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::numbered_vars;
    use crate::configurations::config::patterson_matrix;
    use crate::determinantal::{generic_matrix, parse_matrix};
    use alloc::string::ToString;

    fn cfg(rows: &[Vec<i64>]) -> ConfigurationMatrix {
        ConfigurationMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn hadamard_examples() {
        let h = hadamard_one_generic(&cfg(&[vec![1, 0], vec![0, 1]])).unwrap();
        assert!(!h.one_generic);
        let (s, u1, u2) = h.witness.unwrap().split.unwrap();
        assert_eq!(s, vec![0]);
        assert_eq!((u1, u2), (vec![rat(0), rat(1)], vec![rat(1), rat(0)]));
        assert!(hadamard_one_generic(&cfg(&[vec![1, -1, 0], vec![0, 1, -1]])).unwrap().one_generic);
        assert!(hadamard_one_generic(&cfg(&[vec![1, 1]])).unwrap().one_generic);
    }

    #[test]
    fn linear_examples() {
        let g = linear_one_generic(&generic_matrix(2, 2), &[3, 5]).unwrap();
        assert!(g.one_generic && g.confirmed);
        let v = numbered_vars("x", 2);
        let a = parse_matrix(&v, &[vec!["x1", "x2"], vec!["x2", "x1"]]).unwrap();
        let g = linear_one_generic(&a, &[3]).unwrap();
        assert!(!g.one_generic);
        let w = g.witness.unwrap();
        let ak = coefficient_matrices(&a).unwrap();
        assert!(annihilates(&ak, &w.v, &w.w));
        let id = patterson_matrix(&cfg(&[vec![1, 0], vec![0, 1]]));
        assert!(!linear_one_generic(&id, &[3]).unwrap().one_generic);
        assert!(linear_one_generic(&generic_matrix(2, 3), &[3]).is_err());
    }

    #[test]
    fn irrational_common_zero() {
        // v^T A w = x1 (v1 w1 - 2 v2 w2) + x2 (v1 w2 + v2 w1) vanishes only for v1^2 = 2 v2^2
        let v = numbered_vars("x", 2);
        let a = parse_matrix(&v, &[vec!["x1", "x2"], vec!["x2", "-2*x1"]]).unwrap();
        let g = linear_one_generic(&a, &[3, 5]).unwrap();
        assert!(!g.one_generic && g.confirmed);
        assert!(g.witness.is_none());
    }

    #[test]
    fn larger_matrices() {
        let g = linear_one_generic(&generic_matrix(3, 3), &[3]).unwrap();
        assert!(g.one_generic && !g.confirmed);
        assert!(g.label().contains("UNCONFIRMED"));
        let v = numbered_vars("x", 3);
        let a = parse_matrix(&v, &[vec!["x1", "0", "0"], vec!["0", "x2", "0"], vec!["0", "0", "x3"]]).unwrap();
        let g = linear_one_generic(&a, &[3]).unwrap();
        assert!(!g.one_generic && g.confirmed);
    }

    #[test]
    fn jacobians() {
        let j = incidence_jacobian(&generic_matrix(2, 2)).unwrap();
        let row: Vec<_> = j.row(0).iter().map(|e| e.to_string()).collect();
        assert_eq!(row, vec!["x1", "x2", "y1", "y2", "0", "0"]);
        let row: Vec<_> = j.row(1).iter().map(|e| e.to_string()).collect();
        assert_eq!(row, vec!["x3", "x4", "0", "0", "y1", "y2"]);
        let v = numbered_vars("x", 1);
        let d = parse_matrix(&v, &[vec!["x1", "0"], vec!["0", "x1"]]).unwrap();
        let j = incidence_jacobian(&d).unwrap();
        assert_eq!((j.get(0, 2).to_string(), j.get(1, 2).to_string()), ("y1".into(), "y2".into()));
        let z = parse_matrix(&v, &[vec!["0"]]).unwrap();
        assert!(incidence_jacobian(&z).is_err());
        let sq = parse_matrix(&v, &[vec!["x1^2"]]).unwrap();
        assert!(incidence_jacobian(&sq).is_err());
    }
}
