//! Univariate power series truncated at `t^(N+1)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{Field, FieldElem};
use super::ring::CommRing;
use crate::error::{Error, Result};

/// The `t`-adic order of a truncated series.
///
/// `Truncated` means every stored coefficient vanishes: the true order is at
/// least `N + 1` and may be infinite. It compares above every finite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesOrder {
    Finite(u32),
    Truncated,
}

impl SeriesOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            SeriesOrder::Finite(k) => Some(k),
            SeriesOrder::Truncated => None,
        }
    }

    /// The order, or `TruncationInsufficient` when it is not determined at `level`.
    pub fn require(self, level: u32) -> Result<u32> {
        self.finite().ok_or(Error::TruncationInsufficient {
            level,
            detail: String::from("order is not determined below the truncation"),
        })
    }

    /// `self >= m`, treating `Truncated` as at least `m` for any `m <= level`.
    pub fn at_least(self, m: u32) -> bool {
        match self {
            SeriesOrder::Finite(k) => k >= m,
            SeriesOrder::Truncated => true,
        }
    }
}

impl fmt::Display for SeriesOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesOrder::Finite(k) => write!(f, "{k}"),
            SeriesOrder::Truncated => write!(f, "trunc"),
        }
    }
}

/// `c_0 + c_1 t + ... + c_N t^N (mod t^(N+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl TruncSeries {
    pub fn zero(field: Field, level: u32) -> Self {
        TruncSeries {
            field,
            coeffs: vec![field.zero(); level as usize + 1],
        }
    }

    pub fn one(field: Field, level: u32) -> Self {
        TruncSeries::constant(field.one(), level)
    }

    pub fn constant(c: FieldElem, level: u32) -> Self {
        let mut s = TruncSeries::zero(c.field(), level);
        s.coeffs[0] = c;
        s
    }

    /// `c * t^k`, which is zero when `k > level`.
    pub fn monomial(c: FieldElem, k: u32, level: u32) -> Self {
        let mut s = TruncSeries::zero(c.field(), level);
        if k <= level {
            s.coeffs[k as usize] = c;
        }
        s
    }

    /// Builds a series from its coefficient list; the level is `coeffs.len() - 1`.
    pub fn new(field: Field, coeffs: Vec<FieldElem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension(String::from(
                "a truncated series needs at least one coefficient",
            )));
        }
        let coeffs = coeffs
            .iter()
            .map(|c| field.convert(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries { field, coeffs })
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Result<Self> {
        TruncSeries::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn level(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> &FieldElem {
        &self.coeffs[k as usize]
    }

    pub fn ord(&self) -> SeriesOrder {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(SeriesOrder::Truncated, |k| SeriesOrder::Finite(k as u32))
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    fn assert_compatible(&self, other: &TruncSeries) {
        assert!(
            self.field == other.field && self.coeffs.len() == other.coeffs.len(),
            "series over different rings: {} mod t^{} vs {} mod t^{}",
            self.field,
            self.coeffs.len(),
            other.field,
            other.coeffs.len()
        );
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_compatible(other);
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_compatible(other);
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.assert_compatible(other);
        let n = self.coeffs.len();
        let mut out = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TruncSeries {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn scale(&self, c: &FieldElem) -> TruncSeries {
        TruncSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> TruncSeries {
        let mut acc = TruncSeries::one(self.field, self.level());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn unit_inverse(&self) -> Result<TruncSeries> {
        let inv0 = self.coeffs[0].inv()?;
        let n = self.coeffs.len();
        let mut out = vec![self.field.zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -&(&acc * &inv0);
        }
        Ok(TruncSeries {
            field: self.field,
            coeffs: out,
        })
    }

    /// Divides by `t^k`, dropping the first `k` coefficients and padding the
    /// top with zeros. Multiplying the result by `t^k` recovers `self`
    /// modulo `t^(N+1)` whenever `ord(self) >= k`.
    pub fn shift_down(&self, k: u32) -> TruncSeries {
        let n = self.coeffs.len();
        let k = (k as usize).min(n);
        let mut coeffs: Vec<FieldElem> = self.coeffs[k..].to_vec();
        coeffs.resize(n, self.field.zero());
        TruncSeries {
            field: self.field,
            coeffs,
        }
    }

    /// Re-truncates (or zero-pads) to another level.
    pub fn with_level(&self, level: u32) -> TruncSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(level as usize + 1, self.field.zero());
        TruncSeries {
            field: self.field,
            coeffs,
        }
    }
}

impl CommRing for TruncSeries {
    fn zero_like(&self) -> Self {
        TruncSeries::zero(self.field, self.level())
    }
    fn one_like(&self) -> Self {
        TruncSeries::one(self.field, self.level())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

/// `1 + 2*t^3 + O(t^5)`.
impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative_display();
            let abs = if negative { -c } else { c.clone() };
            let sep = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = match (k, abs.is_one()) {
                (0, _) => format!("{abs}"),
                (1, true) => String::from("t"),
                (1, false) => format!("{abs}*t"),
                (_, true) => format!("t^{k}"),
                (_, false) => format!("{abs}*t^{k}"),
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.coeffs.len())
    }
}
