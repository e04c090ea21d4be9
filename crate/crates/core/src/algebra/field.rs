//! Exact coefficient fields: the rationals and prime fields `F_q`.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus.
pub const MAX_MODULUS: u32 = 1 << 31;

/// Deterministic trial-division primality test, adequate for moduli below 2^31.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    let mut d = 3u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `F_q`, always stored as its canonical representative in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    /// Reduces `value` modulo `modulus`. The modulus is assumed prime.
    pub fn new(value: i64, modulus: u32) -> Self {
        let m = i64::from(modulus);
        Fp {
            value: value.rem_euclid(m) as u32,
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(u64::from(self.modulus) - 2))
    }

    fn check(self, rhs: Fp) {
        assert_eq!(
            self.modulus, rhs.modulus,
            "arithmetic between F_{} and F_{}",
            self.modulus, rhs.modulus
        );
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let s = u64::from(self.value) + u64::from(rhs.value);
        Fp {
            value: (s % u64::from(self.modulus)) as u32,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let s = u64::from(self.value) + u64::from(self.modulus) - u64::from(rhs.value);
        Fp {
            value: (s % u64::from(self.modulus)) as u32,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.check(rhs);
        let p = u64::from(self.value) * u64::from(rhs.value);
        Fp {
            value: (p % u64::from(self.modulus)) as u32,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
}

/// Which exact field a coefficient lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Validates a prime modulus.
    pub fn prime(q: u64) -> Result<Field> {
        if q >= u64::from(MAX_MODULUS) || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field::Prime(q as u32))
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(q) => FieldElem::Prime(Fp::new(v, q)),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(q) => {
                let r = v.mod_floor(&BigInt::from(q));
                FieldElem::Prime(Fp::new(r.to_i64().unwrap_or(0), q))
            }
        }
    }

    /// Maps a rational number into this field. Fails when the denominator
    /// vanishes modulo the characteristic.
    pub fn from_rational(self, v: &BigRational) -> Result<FieldElem> {
        match self {
            Field::Rationals => Ok(FieldElem::Rational(v.clone())),
            Field::Prime(q) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                if den.is_zero() {
                    return Err(Error::NoReduction(v.to_string(), q));
                }
                num.try_div(&den)
            }
        }
    }

    /// Maps an element of any field into this one. Rationals reduce modulo `q`;
    /// prime-field elements are only accepted by the same prime field.
    pub fn convert(self, v: &FieldElem) -> Result<FieldElem> {
        match (self, v) {
            (_, FieldElem::Rational(r)) => self.from_rational(r),
            (Field::Prime(q), FieldElem::Prime(x)) if x.modulus == q => Ok(v.clone()),
            (Field::Rationals, FieldElem::Prime(x)) => Err(Error::Precondition(format!(
                "cannot lift an element of F_{} to the rationals",
                x.modulus
            ))),
            (Field::Prime(q), FieldElem::Prime(x)) => Err(Error::Precondition(format!(
                "cannot map F_{} into F_{}",
                x.modulus, q
            ))),
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(q) => q,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(q) => write!(f, "F_{q}"),
        }
    }
}

/// An exact scalar. Mixing fields in one operation is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Prime(Fp),
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rational(_) => Field::Rationals,
            FieldElem::Prime(x) => Field::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Prime(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Prime(x) => x.value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rational(r) => Some(r),
            FieldElem::Prime(_) => None,
        }
    }

    pub fn as_fp(&self) -> Option<Fp> {
        match self {
            FieldElem::Rational(_) => None,
            FieldElem::Prime(x) => Some(*x),
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        match self {
            FieldElem::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(FieldElem::Rational(r.recip()))
                }
            }
            FieldElem::Prime(x) => x.inv().map(FieldElem::Prime),
        }
    }

    pub fn try_div(&self, rhs: &FieldElem) -> Result<FieldElem> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> FieldElem {
        match self {
            FieldElem::Rational(r) => FieldElem::Rational(num_traits::pow(r.clone(), exp as usize)),
            FieldElem::Prime(x) => FieldElem::Prime(x.pow(u64::from(exp))),
        }
    }

    /// True when the printed form needs a leading minus sign.
    pub(crate) fn is_negative_display(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_negative(),
            FieldElem::Prime(_) => false,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => write!(f, "{r}"),
            FieldElem::Prime(x) => write!(f, "{}", x.value),
        }
    }
}

macro_rules! field_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'a FieldElem) -> FieldElem {
                match (self, rhs) {
                    (FieldElem::Rational(a), FieldElem::Rational(b)) => {
                        FieldElem::Rational($trait::$method(a, b))
                    }
                    (FieldElem::Prime(a), FieldElem::Prime(b)) => {
                        FieldElem::Prime($trait::$method(*a, *b))
                    }
                    _ => panic!("arithmetic between {} and {}", self.field(), rhs.field()),
                }
            }
        }
    };
}

field_binop!(Add, add);
field_binop!(Sub, sub);
field_binop!(Mul, mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Prime(a) => FieldElem::Prime(-*a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_elements_are_canonical() {
        let a = Fp::new(-1, 5);
        assert_eq!(a.value(), 4);
        assert_eq!((a + Fp::new(3, 5)).value(), 2);
        assert_eq!((Fp::new(2, 5) * Fp::new(3, 5)).value(), 1);
        assert_eq!(Fp::new(3, 7).inv().unwrap().value(), 5);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Fp::new(0, 3).inv(), Err(Error::DivisionByZero));
        let q = Field::Rationals;
        assert_eq!(q.one().try_div(&q.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(2_147_483_647).is_ok());
        assert!(Field::prime(1 << 31).is_err());
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert!(is_prime(2_147_483_629));
    }

    #[test]
    fn rational_reduction() {
        let f = Field::Prime(5);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), f.from_i64(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(matches!(f.from_rational(&fifth), Err(Error::NoReduction(..))));
    }
}
