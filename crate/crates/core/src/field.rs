//! Coefficient fields: prime fields `F_p` and the rationals.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest field [`Field::elements`] will list.
pub const MAX_LISTED_ELEMENTS: u64 = 1 << 16;

/// An exact, countable coefficient field.
///
/// Elements are self-describing: the field is carried by the type, so
/// `Zero::zero()` and `One::one()` need no context.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Field tag as used in documents: `"f2"`, `"f3"`, ..., `"q"`.
    fn tag() -> String;

    fn try_inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;

    /// Number of elements, `None` for infinite fields.
    fn order() -> Option<u64>;

    /// All elements in a fixed order (zero first), for finite fields with
    /// at most [`MAX_LISTED_ELEMENTS`] elements.
    fn elements() -> Option<Vec<Self>> {
        None
    }

    /// Parses an unsigned coefficient in canonical form (`"3"`, `"3/2"`).
    /// Returns `None` for anything that is not the canonical spelling.
    fn parse_canonical(s: &str) -> Option<Self>;

    /// Whether the canonical text of this element starts with a minus sign.
    fn is_negative(&self) -> bool {
        false
    }
}

const fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Element of the prime field `F_P`, stored as a residue in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const VALID: () = assert!(is_prime_u32(P) && P < (1 << 31), "modulus must be a prime below 2^31");

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp((value % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + rhs.0 as u64)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + P as u64 - rhs.0 as u64)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp::new(P as u64 - self.0 as u64)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.try_inv().expect("division by zero in F_p")
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn tag() -> String {
        format!("f{P}")
    }

    fn try_inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n.rem_euclid(P as i64) as u64)
    }

    fn order() -> Option<u64> {
        Some(P as u64)
    }

    fn elements() -> Option<Vec<Self>> {
        ((P as u64) <= MAX_LISTED_ELEMENTS).then(|| (0..P as u64).map(Fp::new).collect())
    }

    fn parse_canonical(s: &str) -> Option<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
            return None;
        }
        let v: u64 = s.parse().ok()?;
        (v < P as u64).then(|| Fp::new(v))
    }
}

/// Arbitrary-precision rationals, always in lowest terms.
pub type Rational = BigRational;

impl Field for BigRational {
    fn tag() -> String {
        "q".to_string()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn order() -> Option<u64> {
        None
    }

    fn parse_canonical(s: &str) -> Option<Self> {
        fn digits(t: &str) -> Option<BigInt> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                return None;
            }
            t.parse().ok()
        }
        let value = match s.split_once('/') {
            None => BigRational::from_integer(digits(s)?),
            Some((n, d)) => {
                let (n, d) = (digits(n)?, digits(d)?);
                if d.is_zero() || d.is_one() {
                    return None;
                }
                let r = BigRational::new(n.clone(), d.clone());
                // reject non-reduced spellings such as 2/4
                if r.numer() != &n || r.denom() != &d {
                    return None;
                }
                r
            }
        };
        Some(value)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F3 = Fp<3>;
    type F7 = Fp<7>;

    #[test]
    fn residues_stay_reduced() {
        assert_eq!(F3::from_i64(-1).value(), 2);
        assert_eq!((F3::new(2) + F3::new(2)).value(), 1);
        assert_eq!((-F3::new(0)).value(), 0);
        assert_eq!((F7::new(3) - F7::new(5)).value(), 5);
    }

    #[test]
    fn inverses_in_prime_field() {
        for a in F7::elements().unwrap().into_iter().skip(1) {
            assert_eq!(a * a.try_inv().unwrap(), F7::one());
        }
        assert!(F7::zero().try_inv().is_none());
    }

    #[test]
    fn canonical_parsing() {
        assert_eq!(F3::parse_canonical("2"), Some(F3::new(2)));
        assert_eq!(F3::parse_canonical("3"), None);
        assert_eq!(F3::parse_canonical("02"), None);
        assert_eq!(Rational::parse_canonical("3/2"), Some(Rational::new(3.into(), 2.into())));
        assert_eq!(Rational::parse_canonical("4/2"), None);
        assert_eq!(Rational::parse_canonical("5/1"), None);
        assert_eq!(Rational::parse_canonical("-5"), None);
    }

    #[test]
    fn tags() {
        assert_eq!(Fp::<2>::tag(), "f2");
        assert_eq!(Rational::tag(), "q");
    }
}
