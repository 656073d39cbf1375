//! Residues modulo a compile-time modulus.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, ToBigInt};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// An element of `Z/M`, stored as its least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Zmod<const M: u64>(u64);

impl<const M: u64> Zmod<M> {
    pub const MODULUS: u64 = M;

    pub fn new(v: i64) -> Self {
        Zmod(v.rem_euclid(M as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Representative in the symmetric range `(-M/2, M/2]`.
    pub fn symmetric(self) -> i64 {
        let v = self.0 as i64;
        if 2 * v > M as i64 {
            v - M as i64
        } else {
            v
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `self` is a unit.
    pub fn inv(self) -> Option<Self> {
        let (g, x, _) = ext_gcd(self.0 as i64, M as i64);
        (g == 1).then(|| Zmod::new(x))
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl<const M: u64> fmt::Debug for Zmod<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const M: u64> fmt::Display for Zmod<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const M: u64> From<i64> for Zmod<M> {
    fn from(v: i64) -> Self {
        Zmod::new(v)
    }
}

/// The least nonnegative representative.
impl<const M: u64> ToBigInt for Zmod<M> {
    fn to_bigint(&self) -> Option<BigInt> {
        Some(BigInt::from(self.0))
    }
}

impl<const M: u64> Add for Zmod<M> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zmod((self.0 + o.0) % M)
    }
}

impl<const M: u64> Sub for Zmod<M> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Zmod((self.0 + M - o.0) % M)
    }
}

impl<const M: u64> Mul for Zmod<M> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zmod(((self.0 as u128 * o.0 as u128) % M as u128) as u64)
    }
}

impl<const M: u64> Neg for Zmod<M> {
    type Output = Self;
    fn neg(self) -> Self {
        Zmod((M - self.0) % M)
    }
}

impl<const M: u64> AddAssign for Zmod<M> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const M: u64> SubAssign for Zmod<M> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const M: u64> MulAssign for Zmod<M> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<const M: u64> Zero for Zmod<M> {
    fn zero() -> Self {
        Zmod(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const M: u64> One for Zmod<M> {
    fn one() -> Self {
        Zmod(1 % M)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F3 = Zmod<3>;
    type Z81 = Zmod<81>;

    #[test]
    fn inverses_exist_exactly_for_units() {
        assert_eq!(F3::new(2).inv(), Some(F3::new(2)));
        assert_eq!(Z81::new(3).inv(), None);
        let u = Z81::new(5);
        assert_eq!(u * u.inv().unwrap(), Z81::one());
    }

    #[test]
    fn symmetric_range() {
        assert_eq!(F3::new(2).symmetric(), -1);
        assert_eq!(Z81::new(40).symmetric(), 40);
        assert_eq!(Z81::new(41).symmetric(), -40);
    }

    proptest! {
        #[test]
        fn ring_axioms(a in -200i64..200, b in -200i64..200, c in -200i64..200) {
            let (x, y, z) = (Z81::new(a), Z81::new(b), Z81::new(c));
            prop_assert_eq!((x + y) * z, x * z + y * z);
            prop_assert_eq!(x * (y * z), (x * y) * z);
            prop_assert_eq!(x - x, Z81::zero());
            prop_assert_eq!(Z81::new(a * b), x * y);
        }
    }
}
