//! Exact rational numbers.
//!
//! Values whose numerator and denominator fit in an `i64` are stored inline and
//! combined through `i128` intermediates; anything larger falls back to a
//! heap-allocated [`BigRational`]. The representation is canonical: a value is
//! stored inline if and only if it fits, so derived equality and hashing are
//! structural equality of reduced fractions.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// An exact fraction with positive denominator, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // den > 0, gcd(|num|, den) == 1, num != i64::MIN
    Small { num: i64, den: i64 },
    Big(Box<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    InvalidInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        (a as u64).gcd(&(b as u64)) as u128
    } else {
        a.gcd(&b)
    }
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_i128(n as i128, 1)
    }

    /// Builds `num / den`.
    ///
    /// # Panics
    /// If `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            return Self::zero();
        }
        if den != 1 {
            let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
            if g != 1 {
                num /= g;
                den /= g;
            }
        }
        if fits(num) && fits(den) {
            Rational(Repr::Small {
                num: num as i64,
                den: den as i64,
            })
        } else {
            Self::from_big(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))
        }
    }

    /// Wraps an already-reduced big rational, demoting it when it fits inline.
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rational(Repr::Small { num: n, den: d });
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    /// Builds a rational from arbitrary-precision parts; the result is reduced.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// # Panics
    /// If `self` is zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                Self::from_i128(*den as i128, *num as i128)
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    /// `self -= a * b`, the inner step of every elimination in this crate.
    pub fn sub_mul(&mut self, a: &Rational, b: &Rational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if let (
            Repr::Small { num: sn, den: sd },
            Repr::Small { num: an, den: ad },
            Repr::Small { num: bn, den: bd },
        ) = (&self.0, &a.0, &b.0)
        {
            // integer tableau entries are the common case
            if *sd == 1 && *ad == 1 && *bd == 1 {
                let v = *sn as i128 - (*an as i128) * (*bn as i128);
                if fits(v) {
                    self.0 = Repr::Small {
                        num: v as i64,
                        den: 1,
                    };
                    return;
                }
            }
        }
        let prod = a * b;
        *self -= &prod;
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Self::from_integer(n as i64)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

fn add_small(an: i64, ad: i64, bn: i64, bd: i64) -> Rational {
    if ad == bd {
        Rational::from_i128(an as i128 + bn as i128, ad as i128)
    } else {
        Rational::from_i128(
            an as i128 * bd as i128 + bn as i128 * ad as i128,
            ad as i128 * bd as i128,
        )
    }
}

fn mul_small(an: i64, ad: i64, bn: i64, bd: i64) -> Rational {
    if an == 0 || bn == 0 {
        return Rational::zero();
    }
    // cross-reduce so the products are already in lowest terms
    let g1 = (an.unsigned_abs()).gcd(&(bd as u64)) as i64;
    let g2 = (bn.unsigned_abs()).gcd(&(ad as u64)) as i64;
    let num = (an / g1) as i128 * (bn / g2) as i128;
    let den = (ad / g2) as i128 * (bd / g1) as i128;
    if fits(num) && fits(den) {
        Rational(Repr::Small {
            num: num as i64,
            den: den as i64,
        })
    } else {
        Rational::from_big(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                add_small(*an, *ad, *bn, *bd)
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                // bn != i64::MIN by invariant
                add_small(*an, *ad, -*bn, *bd)
            }
            _ => Rational::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                mul_small(*an, *ad, *bn, *bd)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        self * &rhs.recip()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational(Repr::Small {
                num: -*num,
                den: *den,
            }),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `n`, `n/d`, with optional sign and surrounding whitespace.
    /// Non-canonical input such as `3/12` or `2/-4` is reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let parse_int = |t: &str| {
            let t = t.trim();
            let t = t.strip_prefix('+').unwrap_or(t);
            t.parse::<BigInt>()
                .map_err(|_| ParseRationalError::InvalidInteger(t.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Rational::from(parse_int(s)?)),
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::from_bigints(n, d))
            }
        }
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

/// Shorthand for `Rational::new(num, den)`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: &str) -> BigInt {
        n.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(ratio(3, 12), ratio(1, 4));
        assert_eq!(ratio(2, -4), ratio(-1, 2));
        assert_eq!(ratio(0, -7), Rational::zero());
        assert_eq!(ratio(-1, 2).denom(), BigInt::from(2));
        assert_eq!("3/12".parse::<Rational>().unwrap().to_string(), "1/4");
        assert_eq!(" -6/4 ".parse::<Rational>().unwrap().to_string(), "-3/2");
        assert_eq!("+5".parse::<Rational>().unwrap(), Rational::from(5));
    }

    #[test]
    fn parse_errors() {
        assert_eq!("".parse::<Rational>(), Err(ParseRationalError::Empty));
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            "a/2".parse::<Rational>(),
            Err(ParseRationalError::InvalidInteger(_))
        ));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let m = Rational::from(i64::MAX);
        let sum = &m + &m;
        assert_eq!(sum.numer(), big("18446744073709551614"));
        // back into range
        let back = &sum - &m;
        assert_eq!(back, m);
        assert!(matches!(back.0, Repr::Small { .. }));

        let tiny = ratio(1, i64::MAX);
        let sq = &tiny * &tiny;
        assert_eq!(sq.denom(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(&sq * &Rational::from(i64::MAX), tiny);
    }

    #[test]
    fn min_value_is_stored_big() {
        let v = Rational::from(i64::MIN);
        assert!(matches!(v.0, Repr::Big(_)));
        assert_eq!(-&v, Rational::from_bigints(-BigInt::from(i64::MIN), BigInt::from(1)));
    }

    #[test]
    fn sub_mul_matches_plain_arithmetic() {
        let mut x = ratio(1, 3);
        x.sub_mul(&ratio(2, 5), &ratio(5, 4));
        assert_eq!(x, ratio(1, 3) - ratio(1, 2));
        let mut y = Rational::from(i64::MAX);
        y.sub_mul(&Rational::from(-2), &Rational::from(i64::MAX));
        assert_eq!(y.numer(), BigInt::from(i64::MAX) * 3);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| {
            Rational::from_bigints(BigInt::from(n), BigInt::from(d))
        })
    }

    proptest! {
        #[test]
        fn matches_big_rational(a in arb_rational(), b in arb_rational()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }

        #[test]
        fn display_parse_round_trip(a in arb_rational()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn always_reduced(a in arb_rational(), b in arb_rational()) {
            let c = &a * &b + &a;
            prop_assert!(c.denom() > BigInt::from(0));
            prop_assert_eq!(c.numer().gcd(&c.denom()), if c.is_zero() { c.denom() } else { BigInt::from(1) });
        }
    }
}
