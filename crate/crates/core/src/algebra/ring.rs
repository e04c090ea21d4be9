use core::fmt::Debug;

/// Minimal commutative-ring interface used by the generic matrix routines.
///
/// Elements carry their own context (variable list, truncation level,
/// characteristic), so the neutral elements are produced from an existing one.
pub trait CommRing: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;

    fn negated(&self) -> Self {
        self.zero_like().minus(self)
    }
}

impl CommRing for super::FieldElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        super::FieldElem::is_zero(self)
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
