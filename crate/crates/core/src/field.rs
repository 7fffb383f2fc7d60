//! Exact coefficient fields: arbitrary-precision rationals (with a fast
//! machine-word path) and a fixed prime field for cheap cross-checks.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use std::fmt;

pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;
    fn name() -> &'static str;
}

/// A rational number stored as a reduced `i64` fraction when it fits,
/// promoted to a `BigRational` when it does not. All arithmetic is exact.
#[derive(Clone, PartialEq, Eq)]
pub enum Q {
    Small(i64, i64), // n/d, d > 0, gcd(|n|,d) = 1
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    fn from_i128_frac(mut n: i128, mut d: i128) -> Q {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Q::Small(0, 1);
        }
        let g = gcd_i128(n, d);
        n /= g;
        d /= g;
        if let (Ok(ns), Ok(ds)) = (i64::try_from(n), i64::try_from(d)) {
            Q::Small(ns, ds)
        } else {
            Q::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    fn demote(b: BigRational) -> Q {
        let (n, d) = (b.numer(), b.denom());
        if let (Ok(ns), Ok(ds)) = (i64::try_from(n), i64::try_from(d)) {
            Q::Small(ns, ds)
        } else {
            Q::Big(Box::new(b))
        }
    }

    pub fn from_frac(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128_frac(n as i128, d as i128)
    }

    /// Parses "p" or "p/q".
    pub fn parse(s: &str) -> Option<Q> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::demote(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().ok()?;
            Some(Q::demote(BigRational::from_integer(n)))
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{}", n),
            Q::Small(n, d) => write!(f, "{}/{}", n, d),
            Q::Big(b) => write!(f, "{}", b),
        }
    }
}

impl Field for Q {
    fn zero() -> Q {
        Q::Small(0, 1)
    }
    fn one() -> Q {
        Q::Small(1, 1)
    }
    fn from_i64(n: i64) -> Q {
        Q::Small(n, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }
    fn add(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128_frac(a * d + c * b, b * d)
            }
            _ => Q::demote(self.to_big() + other.to_big()),
        }
    }
    fn sub(&self, other: &Q) -> Q {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Q) -> Q {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128_frac(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::demote(self.to_big() * other.to_big()),
        }
    }
    fn neg(&self) -> Q {
        match self {
            Q::Small(n, d) => Q::Small(-n, *d),
            Q::Big(b) => Q::Big(Box::new(-(**b).clone())),
        }
    }
    fn inv(&self) -> Q {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Q::Small(n, d) => Q::from_i128_frac(*d as i128, *n as i128),
            Q::Big(b) => Q::demote(b.recip()),
        }
    }
    fn name() -> &'static str {
        "rational"
    }
}

/// The prime field F_p for p = 2^31 - 1 (Mersenne). Used as a fast modular
/// cross-check field; rank over F_p lower-bounds rank over Q.
pub const FP_MODULUS: u64 = 2_147_483_647;

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Fp(pub u64); // always reduced mod FP_MODULUS

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Fp {
        Fp(0)
    }
    fn one() -> Fp {
        Fp(1)
    }
    fn from_i64(n: i64) -> Fp {
        Fp(n.rem_euclid(FP_MODULUS as i64) as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Fp) -> Fp {
        Fp((self.0 + other.0) % FP_MODULUS)
    }
    fn sub(&self, other: &Fp) -> Fp {
        Fp((self.0 + FP_MODULUS - other.0) % FP_MODULUS)
    }
    fn mul(&self, other: &Fp) -> Fp {
        Fp((self.0 as u128 * other.0 as u128 % FP_MODULUS as u128) as u64)
    }
    fn neg(&self) -> Fp {
        if self.0 == 0 {
            Fp(0)
        } else {
            Fp(FP_MODULUS - self.0)
        }
    }
    fn inv(&self) -> Fp {
        assert!(self.0 != 0, "inverse of zero");
        // Fermat: a^(p-2)
        let mut base = *self;
        let mut e = FP_MODULUS - 2;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
    fn name() -> &'static str {
        "fp"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_arith() {
        let a = Q::from_frac(1, 3);
        let b = Q::from_frac(1, 6);
        assert_eq!(a.add(&b), Q::from_frac(1, 2));
        assert_eq!(a.sub(&b), Q::from_frac(1, 6));
        assert_eq!(a.mul(&b), Q::from_frac(1, 18));
        assert_eq!(a.inv(), Q::from_i64(3));
        assert_eq!(Q::parse("-4/6"), Some(Q::from_frac(-2, 3)));
        assert_eq!(Q::parse("7"), Some(Q::from_i64(7)));
    }

    #[test]
    fn q_promotes_past_i64() {
        // (2^40)^2 overflows i64 but must stay exact
        let big = Q::from_i64(1 << 40);
        let sq = big.mul(&big);
        assert_eq!(sq.to_big(), BigRational::from_integer(BigInt::from(1u128 << 80)));
        assert_eq!(sq.mul(&sq.inv()), Q::one());
    }

    #[test]
    fn fp_arith() {
        let a = Fp::from_i64(-1);
        assert_eq!(a, Fp(FP_MODULUS - 1));
        let b = Fp(12345);
        assert_eq!(b.mul(&b.inv()), Fp(1));
        assert_eq!(a.add(&Fp(1)), Fp(0));
    }
}
