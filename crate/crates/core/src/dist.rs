//! Exact distances in `[0, 1]` with addition truncated at 1.
//!
//! A [`Dist`] is a rational number. Values whose numerator and denominator fit
//! in an `i64` are kept in a machine-word representation; anything larger is
//! promoted to a big rational. The representation is canonical (a value is
//! only ever big when it does not fit), so structural equality is value
//! equality.

use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, One, ToPrimitive, Zero};

use crate::error::DistError;

type Small = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Small),
    Big(BigRational),
}

/// An exact distance value in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dist(Repr);

impl Dist {
    pub const ZERO: Dist = Dist(Repr::Small(Ratio::new_raw(0, 1)));
    pub const ONE: Dist = Dist(Repr::Small(Ratio::new_raw(1, 1)));

    /// `numer / denom`, reduced. Fails unless the value lies in `[0, 1]`.
    pub fn new(numer: u64, denom: u64) -> Result<Dist, DistError> {
        if denom == 0 {
            return Err(DistError::ZeroDenominator);
        }
        if numer > denom {
            return Err(DistError::OutOfRange(alloc::format!("{numer}/{denom}")));
        }
        Ok(Dist::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    /// Like [`Dist::new`] but for known-good literals.
    ///
    /// # Panics
    /// If the fraction is not a value in `[0, 1]`.
    pub fn frac(numer: u64, denom: u64) -> Dist {
        Dist::new(numer, denom).expect("fraction outside [0, 1]")
    }

    /// Accepts any rational in `[0, 1]`.
    pub fn from_ratio(value: BigRational) -> Result<Dist, DistError> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(DistError::OutOfRange(value.to_string()));
        }
        Ok(Dist::from_big(value))
    }

    fn from_big(value: BigRational) -> Dist {
        match (value.numer().to_i64(), value.denom().to_i64()) {
            (Some(n), Some(d)) => Dist(Repr::Small(Ratio::new_raw(n, d))),
            _ => Dist(Repr::Big(value)),
        }
    }

    /// Clamps an intermediate result back into `[0, 1]`.
    fn clamped(value: BigRational) -> Dist {
        if value >= BigRational::one() {
            Dist::ONE
        } else if value <= BigRational::zero() {
            Dist::ZERO
        } else {
            Dist::from_big(value)
        }
    }

    fn clamped_small(value: Small) -> Dist {
        if value >= Small::one() {
            Dist::ONE
        } else if value <= Small::zero() {
            Dist::ZERO
        } else {
            Dist(Repr::Small(value))
        }
    }

    pub fn to_ratio(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigUint {
        self.to_ratio().numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.to_ratio().denom().magnitude().clone()
    }

    pub fn is_zero(&self) -> bool {
        *self == Dist::ZERO
    }

    pub fn is_one(&self) -> bool {
        *self == Dist::ONE
    }

    /// Numerator and denominator, when both fit in an `i64`.
    pub(crate) fn small_parts(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(r) => Some((*r.numer(), *r.denom())),
            Repr::Big(_) => None,
        }
    }

    /// `numer / denom` for `0 <= numer <= denom`, `denom > 0`.
    pub(crate) fn from_small_parts(numer: i64, denom: i64) -> Dist {
        debug_assert!(0 <= numer && numer <= denom && denom > 0);
        Dist(Repr::Small(Ratio::new(numer, denom)))
    }

    /// `self + sign * other`, clamped, computed in `i128` when both sides are
    /// small. Clamping happens before reduction, so saturated results never
    /// pay for a gcd.
    fn shifted(&self, other: &Dist, negate: bool) -> Dist {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            let (an, ad) = (i128::from(*a.numer()), i128::from(*a.denom()));
            let (mut bn, bd) = (i128::from(*b.numer()), i128::from(*b.denom()));
            if negate {
                bn = -bn;
            }
            let (num, den) = if ad == bd { (an + bn, ad) } else { (an * bd + bn * ad, ad * bd) };
            if num >= den {
                return Dist::ONE;
            }
            if num <= 0 {
                return Dist::ZERO;
            }
            let g = num.gcd(&den);
            if let (Ok(n), Ok(d)) = (i64::try_from(num / g), i64::try_from(den / g)) {
                return Dist(Repr::Small(Ratio::new_raw(n, d)));
            }
        }
        let (a, b) = (self.to_ratio(), other.to_ratio());
        Dist::clamped(if negate { a - b } else { a + b })
    }

    /// `min(1, self + other)`.
    pub fn truncated_add(&self, other: &Dist) -> Dist {
        self.shifted(other, false)
    }

    /// `max(0, self - other)`.
    pub fn dotminus(&self, other: &Dist) -> Dist {
        self.shifted(other, true)
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Dist) -> Dist {
        if self >= other {
            self.dotminus(other)
        } else {
            other.dotminus(self)
        }
    }

    /// Exact division by a positive integer.
    pub fn div_int(&self, divisor: u32) -> Dist {
        assert!(divisor > 0, "division by zero");
        let d = i64::from(divisor);
        if let Repr::Small(a) = &self.0 {
            if let Some(v) = a.checked_div(&Small::from_integer(d)) {
                return Dist::clamped_small(v);
            }
        }
        Dist::clamped(self.to_ratio() / BigRational::from_integer(BigInt::from(divisor)))
    }

    /// Exact multiplication by a nonnegative integer, truncated at 1.
    pub fn mul_int(&self, factor: u32) -> Dist {
        let f = i64::from(factor);
        if let Repr::Small(a) = &self.0 {
            if let Some(v) = a.checked_mul(&Small::from_integer(f)) {
                return Dist::clamped_small(v);
            }
        }
        Dist::clamped(self.to_ratio() * BigRational::from_integer(BigInt::from(factor)))
    }

    /// `(self + other) / 2`, exact and untruncated.
    pub fn midpoint(&self, other: &Dist) -> Dist {
        Dist::clamped((self.to_ratio() + other.to_ratio()) / BigRational::from_integer(BigInt::from(2)))
    }

    /// The grid `{0, 1/q, ..., 1}`.
    pub fn grid(q: u32) -> impl Iterator<Item = Dist> {
        assert!(q > 0, "grid denominator must be positive");
        (0..=u64::from(q)).map(move |p| Dist::frac(p, u64::from(q)))
    }

    /// Is this value a multiple of `1/q`?
    pub fn on_grid(&self, q: u32) -> bool {
        let r = self.to_ratio();
        (r * BigRational::from_integer(BigInt::from(q))).is_integer()
    }

    /// Parses `"p/q"`, `"0"` or `"1"`. `p` and `q` are plain decimal digits,
    /// the fraction must be in lowest terms and lie in `[0, 1]`.
    pub fn parse(text: &str) -> Result<Dist, DistError> {
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let (p, q) = match text.split_once('/') {
            Some((p, q)) if digits(p) && digits(q) => (p, q),
            None if text == "0" || text == "1" => (text, "1"),
            _ => return Err(DistError::Syntax(text.to_string())),
        };
        let p: BigInt = p.parse().map_err(|_| DistError::Syntax(text.to_string()))?;
        let q: BigInt = q.parse().map_err(|_| DistError::Syntax(text.to_string()))?;
        if q.is_zero() {
            return Err(DistError::ZeroDenominator);
        }
        if !p.gcd(&q).is_one() {
            return Err(DistError::NotReduced(text.to_string()));
        }
        if p > q {
            return Err(DistError::OutOfRange(text.to_string()));
        }
        Ok(Dist::from_big(BigRational::new_raw(p, q)))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) if a.denom() == b.denom() => a.numer().cmp(b.numer()),
            (Repr::Small(a), Repr::Small(b)) => (i128::from(*a.numer()) * i128::from(*b.denom()))
                .cmp(&(i128::from(*b.numer()) * i128::from(*a.denom()))),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Dist {
    fn default() -> Self {
        Dist::ZERO
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.is_one() {
            return f.write_str("1");
        }
        match &self.0 {
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dist {
    type Err = DistError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dist::parse(s)
    }
}
