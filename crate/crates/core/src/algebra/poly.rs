//! Sparse multivariate polynomials with dense exponent vectors in graded-lex order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldElem};
use super::ring::CommRing;
use crate::error::{Error, Result};

/// Ordered, shared variable names.
pub type Vars = Arc<[String]>;

/// Builds a variable list from names.
pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// `x1, ..., xn`.
pub fn numbered_vars(prefix: &str, n: usize) -> Vars {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Exponent vector, one entry per variable. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over [`Field`] in a fixed, named set of variables.
///
/// Zero coefficients are never stored, so two polynomials over the same
/// variables are equal exactly when their term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    field: Field,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars, field: Field) -> Self {
        MultiPoly {
            vars: vars.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: FieldElem) -> Self {
        let field = c.field();
        let mut p = MultiPoly::zero(vars, field);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn variable(vars: &Vars, field: Field, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        let mut p = MultiPoly::zero(vars, field);
        p.terms.insert(Monomial(e), field.one());
        p
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms<I>(vars: &Vars, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElem)>,
    {
        let mut p = MultiPoly::zero(vars, field);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            let c = field.convert(&c)?;
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElem {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Every term has total degree exactly one (the zero polynomial qualifies).
    pub fn is_homogeneous_linear(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 1)
    }

    fn assert_compatible(&self, other: &MultiPoly) {
        assert!(
            self.vars == other.vars && self.field == other.field,
            "polynomials over different rings: ({}; {}) vs ({}; {})",
            self.vars.join(","),
            self.field,
            other.vars.join(","),
            other.field
        );
    }

    pub fn scale(&self, c: &FieldElem) -> MultiPoly {
        let mut p = MultiPoly::zero(&self.vars, self.field);
        if c.is_zero() {
            return p;
        }
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(&self.vars, self.field.one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(&self.vars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            p.add_term(Monomial(exps), c * &self.field.from_i64(i64::from(e)));
        }
        p
    }

    /// Substitutes `value` for variable `var` and drops it from the variable list.
    pub fn specialize(&self, var: usize, value: &FieldElem) -> Result<MultiPoly> {
        let value = self.field.convert(value)?;
        let new_vars: Vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != var)
            .map(|(_, v)| v.clone())
            .collect();
        let mut p = MultiPoly::zero(&new_vars, self.field);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps.remove(var);
            p.add_term(Monomial(exps), c * &value.pow(e));
        }
        Ok(p)
    }

    /// Re-expresses the polynomial over a larger variable list, matching names.
    pub fn embed(&self, target: &Vars) -> Result<MultiPoly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                target.iter().position(|t| t == v).ok_or_else(|| {
                    Error::VariableMismatch(format!("`{v}` is not among {}", target.join(",")))
                })
            })
            .collect::<Result<_>>()?;
        let mut p = MultiPoly::zero(target, self.field);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] += e;
            }
            p.add_term(Monomial(exps), c.clone());
        }
        Ok(p)
    }

    /// Replaces variable `i` by `images[i]`; all images share one ring.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (tvars, tfield) = (first.vars.clone(), first.field);
        let mut acc = MultiPoly::zero(&tvars, tfield);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&tvars, tfield.convert(c)?);
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Maps all coefficients into `field`.
    pub fn to_field(&self, field: Field) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(&self.vars, field);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), field.convert(c)?);
        }
        Ok(p)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &self.field.convert(x)?.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.assert_compatible(rhs);
        let mut p = MultiPoly::zero(&self.vars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = -&*c;
        }
        p
    }
}

impl CommRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.vars, self.field)
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(&self.vars, self.field.one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Prints in the accepted input grammar, highest graded-lex term first.
/// Non-integral rational coefficients print as `p/q`, which the grammar does not read back.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_display();
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
