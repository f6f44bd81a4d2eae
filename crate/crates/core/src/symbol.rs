//! Exact symbols in the unit interval.
//!
//! A [`Symbol`] is a reduced fraction `p/q` with `0 <= p <= q`. Values whose
//! numerator and denominator fit in a `u64` are stored inline; anything larger
//! lives in a boxed [`BigRational`]. The representation is canonical: a value
//! is stored inline if and only if it fits, so structural equality is value
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: u64, den: u64 },
    Big(Box<BigRational>),
}

/// An exact rational in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Repr);

pub(crate) static ZERO: Symbol = Symbol(Repr::Small { num: 0, den: 1 });

impl Symbol {
    pub const fn zero() -> Self {
        Symbol(Repr::Small { num: 0, den: 1 })
    }

    pub const fn one() -> Self {
        Symbol(Repr::Small { num: 1, den: 1 })
    }

    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::SymbolRange(format!("{num}/{den}")));
        }
        Ok(Self::small_reduced(num as u128, den as u128))
    }

    /// The fraction `i/n`, as used for the scale factors of the constructions.
    pub fn ratio(i: u64, n: u64) -> Self {
        Self::new(i, n).expect("scale fraction must lie in [0, 1]")
    }

    /// Converts an arbitrary rational, rejecting values outside `[0, 1]`.
    pub fn from_big(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::SymbolRange(value.to_string()));
        }
        Ok(Self::canonical(value))
    }

    fn small_reduced(num: u128, den: u128) -> Self {
        if num == 0 {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        match (u64::try_from(num), u64::try_from(den)) {
            (Ok(num), Ok(den)) => Symbol(Repr::Small { num, den }),
            _ => Symbol(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    // `value` must already be reduced (BigRational keeps itself reduced).
    fn canonical(value: BigRational) -> Self {
        if value.is_zero() {
            return Self::zero();
        }
        match (value.numer().to_u64(), value.denom().to_u64()) {
            (Some(num), Some(den)) => Symbol(Repr::Small { num, den }),
            _ => Symbol(Repr::Big(Box::new(value))),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    /// Whether the value is stored on the machine-word path.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small { .. })
    }

    pub fn numer(&self) -> BigUint {
        match &self.0 {
            Repr::Small { num, .. } => BigUint::from(*num),
            Repr::Big(r) => r.numer().magnitude().clone(),
        }
    }

    pub fn denom(&self) -> BigUint {
        match &self.0 {
            Repr::Small { den, .. } => BigUint::from(*den),
            Repr::Big(r) => r.denom().magnitude().clone(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => (**r).clone(),
        }
    }

    /// Exact product; stays in `[0, 1]`.
    pub fn mul(&self, other: &Symbol) -> Symbol {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            // Cross-reduce first so the u128 products are already in lowest terms.
            let g1 = a.gcd(d);
            let g2 = c.gcd(b);
            let num = (*a / g1) as u128 * (*c / g2) as u128;
            let den = (*b / g2) as u128 * (*d / g1) as u128;
            return Self::small_reduced(num, den);
        }
        Self::canonical(self.to_big() * other.to_big())
    }

    /// Exact `|self - other|`.
    pub fn abs_diff(&self, other: &Symbol) -> Symbol {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            let lhs = *a as u128 * *d as u128;
            let rhs = *c as u128 * *b as u128;
            if let Some(den) = (*b as u128).checked_mul(*d as u128) {
                return Self::small_reduced(lhs.abs_diff(rhs), den);
            }
        }
        Self::canonical((self.to_big() - other.to_big()).abs())
    }

    /// Compares the value with the fraction `p/q` (`q > 0`).
    pub fn cmp_ratio(&self, p: u64, q: u64) -> Ordering {
        debug_assert!(q > 0);
        match &self.0 {
            Repr::Small { num, den } => (*num as u128 * q as u128).cmp(&(p as u128 * *den as u128)),
            Repr::Big(r) => {
                let lhs = r.numer() * BigInt::from(q);
                let rhs = r.denom() * BigInt::from(p);
                lhs.cmp(&rhs)
            }
        }
    }

    /// `self < 1/k`.
    pub fn lt_recip(&self, k: u64) -> bool {
        self.cmp_ratio(1, k) == Ordering::Less
    }

    /// `self <= c/k`.
    pub fn le_ratio(&self, c: u64, k: u64) -> bool {
        self.cmp_ratio(c, k) != Ordering::Greater
    }
}

impl Default for Symbol {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p/q`. Only the lowest-terms spelling is accepted.
impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed symbol {s:?}"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let canonical_digits =
            |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && (t == "0" || !t.starts_with('0'));
        if !canonical_digits(p) || !canonical_digits(q) {
            return Err(bad());
        }
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        if !p.gcd(&q).is_one() {
            return Err(Error::Parse(format!("symbol {s:?} is not in lowest terms")));
        }
        Symbol::from_big(BigRational::new_raw(p, q))
    }
}
