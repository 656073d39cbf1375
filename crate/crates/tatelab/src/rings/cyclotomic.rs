//! The truncated ring `(Z/3^N)[z]/(z^6 + z^3 + 1)`, a model of `Z_3[zeta_9]` modulo `3^N`.
//!
//! Precision is tracked in units of the uniformizer `pi = 1 - z`, where
//! `pi^6 = 3 * unit`. An element with `pi_precision = k` is known modulo `pi^k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::RingError;

pub const DEGREE: usize = 6;

/// Coefficients of the Eisenstein polynomial `Phi_9(1 - x) = x^6 - 6x^5 + 15x^4 - 21x^3 + 18x^2 - 9x + 3`.
const EISENSTEIN: [i64; 7] = [3, -9, 18, -21, 15, -6, 1];

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicElement {
    coeffs: [i64; DEGREE],
    exponent: u32,
    pi_precision: u32,
}

/// `k/6` valuation, or infinity for an element that vanishes at working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiValuation {
    pub numerator: Option<u32>,
}

impl PiValuation {
    pub const DENOMINATOR: u32 = 6;

    pub fn finite(k: u32) -> Self {
        PiValuation { numerator: Some(k) }
    }

    pub fn infinite() -> Self {
        PiValuation { numerator: None }
    }

    pub fn is_unit(&self) -> bool {
        self.numerator == Some(0)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator.map_or(f64::INFINITY, |k| k as f64 / Self::DENOMINATOR as f64)
    }
}

impl Ord for PiValuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.numerator, other.numerator) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    }
}

impl PartialOrd for PiValuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PiValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.numerator {
            Some(k) => write!(f, "{k}/6"),
            None => write!(f, "inf"),
        }
    }
}

fn pow3(e: u32) -> i64 {
    3i64.pow(e)
}

impl CyclotomicElement {
    fn raw(coeffs: [i64; DEGREE], exponent: u32, pi_precision: u32) -> Self {
        let m = pow3(exponent);
        let coeffs = coeffs.map(|c| c.rem_euclid(m));
        CyclotomicElement { coeffs, exponent, pi_precision }
    }

    /// Element with the given `zeta`-basis coordinates, at full precision modulo `3^exponent`.
    pub fn from_coeffs(coeffs: [i64; DEGREE], exponent: u32) -> Self {
        assert!((1..=16).contains(&exponent), "modulus exponent out of range");
        Self::raw(coeffs, exponent, DEGREE as u32 * exponent)
    }

    pub fn integer(v: i64, exponent: u32) -> Self {
        let mut c = [0; DEGREE];
        c[0] = v;
        Self::from_coeffs(c, exponent)
    }

    pub fn zero(exponent: u32) -> Self {
        Self::integer(0, exponent)
    }

    pub fn one(exponent: u32) -> Self {
        Self::integer(1, exponent)
    }

    pub fn zeta(exponent: u32) -> Self {
        let mut c = [0; DEGREE];
        c[1] = 1;
        Self::from_coeffs(c, exponent)
    }

    /// The uniformizer `1 - zeta`.
    pub fn pi(exponent: u32) -> Self {
        Self::from_coeffs([1, -1, 0, 0, 0, 0], exponent)
    }

    pub fn coeffs(&self) -> [i64; DEGREE] {
        self.coeffs
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn pi_precision(&self) -> u32 {
        self.pi_precision
    }

    /// Number of reliable 3-adic digits, `floor(pi_precision / 6)`.
    pub fn three_adic_precision(&self) -> u32 {
        self.pi_precision / DEGREE as u32
    }

    fn modulus(&self) -> i64 {
        pow3(self.exponent)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.exponent, other.exponent, "incompatible cyclotomic moduli");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut c = [0; DEGREE];
        for i in 0..DEGREE {
            c[i] = self.coeffs[i] + other.coeffs[i];
        }
        Self::raw(c, self.exponent, self.pi_precision.min(other.pi_precision))
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.coeffs.map(|c| -c), self.exponent, self.pi_precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus();
        let k = k.rem_euclid(m);
        Self::raw(self.coeffs.map(|c| (c * k) % m), self.exponent, self.pi_precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let m = self.modulus() as i128;
        let mut prod = [0i128; 2 * DEGREE - 1];
        for i in 0..DEGREE {
            for j in 0..DEGREE {
                prod[i + j] += self.coeffs[i] as i128 * other.coeffs[j] as i128;
            }
        }
        // z^6 = -z^3 - 1
        for k in (DEGREE..2 * DEGREE - 1).rev() {
            let c = prod[k] % m;
            prod[k] = 0;
            prod[k - 3] -= c;
            prod[k - 6] -= c;
        }
        let mut c = [0i64; DEGREE];
        for i in 0..DEGREE {
            c[i] = prod[i].rem_euclid(m) as i64;
        }
        Self::raw(c, self.exponent, self.pi_precision.min(other.pi_precision))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.exponent);
        acc.pi_precision = self.pi_precision;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Coordinates in the basis `1, pi, ..., pi^5`.
    pub fn pi_coordinates(&self) -> [i64; DEGREE] {
        // z = 1 - pi, so z^k = sum_j C(k, j) (-pi)^j stays below pi^6 for k < 6.
        let m = self.modulus() as i128;
        let mut out = [0i128; DEGREE];
        for (k, &a) in self.coeffs.iter().enumerate() {
            let mut binom: i128 = 1;
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out[j] += sign * binom * a as i128;
                binom = binom * (k - j) as i128 / (j + 1) as i128;
            }
        }
        for i in 0..DEGREE {
            out[i] = out[i].rem_euclid(m);
        }
        let mut c = [0i64; DEGREE];
        for i in 0..DEGREE {
            c[i] = out[i] as i64;
        }
        c
    }

    /// Inverse of [`pi_coordinates`](Self::pi_coordinates).
    pub fn from_pi_coordinates(alpha: [i64; DEGREE], exponent: u32, pi_precision: u32) -> Self {
        let pi = Self::pi(exponent);
        let mut acc = Self::zero(exponent);
        let mut power = Self::one(exponent);
        for a in alpha {
            acc = acc.add(&power.scale(a));
            power = power.mul(&pi);
        }
        acc.pi_precision = pi_precision;
        acc
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self, RingError> {
        if self.pi_coordinates()[0] % 3 == 0 {
            return Err(RingError::NotAUnit);
        }
        // The unit group of A/3^N has order 2 * 3^(6N - 1).
        let order = 2u128 * 3u128.pow(DEGREE as u32 * self.exponent - 1);
        let mut e = order - 1;
        let mut base = self.clone();
        let mut acc = Self::one(self.exponent);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc.pi_precision = self.pi_precision;
        Ok(acc)
    }

    /// `3 / pi = pi^5 / w` where `pi^6 = 3 w` and `w = -1 + 3pi - 6pi^2 + 7pi^3 - 5pi^4 + 2pi^5`.
    fn three_over_pi(exponent: u32) -> Self {
        let mut w = [0i64; DEGREE];
        for i in 0..DEGREE {
            w[i] = -EISENSTEIN[i] / 3;
        }
        let w = Self::from_pi_coordinates(w, exponent, DEGREE as u32 * exponent);
        let pi5 = Self::pi(exponent).pow(5);
        pi5.mul(&w.inverse().expect("w is a unit"))
    }

    /// The unique `b` (up to the lost top digit) with `pi * b = self`.
    ///
    /// Consumes one unit of `pi`-adic precision.
    pub fn divide_by_pi_exact(&self) -> Result<Self, RingError> {
        let alpha = self.pi_coordinates();
        if alpha[0] % 3 != 0 {
            return Err(RingError::NotDivisible { residue: alpha[0].rem_euclid(3) });
        }
        if self.pi_precision == 0 {
            return Err(RingError::PrecisionExhausted);
        }
        let beta = alpha[0] / 3;
        let mut shifted = [0i64; DEGREE];
        shifted[..DEGREE - 1].copy_from_slice(&alpha[1..]);
        let tail = Self::from_pi_coordinates(shifted, self.exponent, self.pi_precision);
        let mut out = tail.add(&Self::three_over_pi(self.exponent).scale(beta));
        out.pi_precision = self.pi_precision - 1;
        Ok(out)
    }

    /// Largest `k` with `pi^k | self`, reported as `k/6`; infinite below working precision.
    pub fn pi_valuation(&self) -> PiValuation {
        let alpha = self.pi_coordinates();
        let mut best: Option<u32> = None;
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut v = 0u32;
            let mut x = a;
            while x % 3 == 0 {
                x /= 3;
                v += 1;
            }
            let k = DEGREE as u32 * v + i as u32;
            best = Some(best.map_or(k, |b| b.min(k)));
        }
        match best {
            Some(k) if k < self.pi_precision => PiValuation::finite(k),
            _ => PiValuation::infinite(),
        }
    }

    /// Coefficients reduced modulo 3 in the `zeta` basis.
    pub fn mod3(&self) -> [u8; DEGREE] {
        assert!(self.three_adic_precision() >= 1, "not enough precision to reduce modulo 3");
        self.coeffs.map(|c| c.rem_euclid(3) as u8)
    }

    /// Value of `z = 1` modulo 3, the residue field image.
    pub fn residue(&self) -> u8 {
        (self.coeffs.iter().sum::<i64>().rem_euclid(3)) as u8
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod 3^{} (pi-precision {})", self.coeffs, self.exponent, self.pi_precision)
    }
}

/// Render a mod-3 coefficient vector as `2z^5 + z^2 + 1` with the given variable name.
pub fn format_mod3(c: &[u8; DEGREE], var: &str) -> String {
    let mut terms = Vec::new();
    for k in (0..DEGREE).rev() {
        let a = c[k];
        if a == 0 {
            continue;
        }
        let coef = if a == 1 && k > 0 { String::new() } else { a.to_string() };
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const N: u32 = 8;

    #[test]
    fn infinite_valuation_is_the_largest() {
        assert!(PiValuation::infinite() > PiValuation::finite(40));
        assert!(PiValuation::finite(1) > PiValuation::finite(0));
        assert_eq!(PiValuation::finite(2).min(PiValuation::infinite()), PiValuation::finite(2));
    }

    #[test]
    fn zeta_has_order_nine() {
        let z = CyclotomicElement::zeta(N);
        assert_eq!(z.mul(&z.pow(8)), CyclotomicElement::one(N));
        assert_ne!(z.pow(3), CyclotomicElement::one(N));
    }

    #[test]
    fn pi_sixth_is_three_times_a_unit() {
        let pi6 = CyclotomicElement::pi(N).pow(6);
        assert_eq!(pi6.pi_valuation(), PiValuation::finite(6));
        let mut q = CyclotomicElement::integer(3, N);
        for _ in 0..6 {
            q = q.divide_by_pi_exact().unwrap();
        }
        assert!(q.pi_valuation().is_unit());
        assert_eq!(q.pi_precision(), 6 * N - 6);
    }

    #[test]
    fn pi_is_nilpotent_mod_three() {
        let pi = CyclotomicElement::pi(1);
        assert_eq!(pi.pow(6), CyclotomicElement::zero(1));
        assert_ne!(pi.pow(5), CyclotomicElement::zero(1));
    }

    #[test]
    fn division_inverts_multiplication() {
        let z = CyclotomicElement::zeta(N);
        let a = CyclotomicElement::pi(N).mul(&z);
        assert_eq!(a.divide_by_pi_exact().unwrap().coeffs(), z.coeffs());
        let z3 = z.pow(3);
        let b = CyclotomicElement::pi(N).mul(&z3);
        assert_eq!(b.divide_by_pi_exact().unwrap().coeffs(), z3.coeffs());
    }

    #[test]
    fn units_are_not_divisible() {
        match CyclotomicElement::one(N).divide_by_pi_exact() {
            Err(RingError::NotDivisible { residue }) => assert_eq!(residue, 1),
            other => panic!("expected divisibility error, got {other:?}"),
        }
    }

    #[test]
    fn valuations_of_basic_elements() {
        assert_eq!(CyclotomicElement::integer(3, N).pi_valuation(), PiValuation::finite(6));
        assert!(CyclotomicElement::zeta(N).pi_valuation().is_unit());
        assert_eq!(CyclotomicElement::pi(N).pow(2).pi_valuation(), PiValuation::finite(2));
        assert_eq!(CyclotomicElement::zero(N).pi_valuation(), PiValuation::infinite());
        assert_eq!(PiValuation::finite(6).as_f64(), 1.0);
    }

    #[test]
    fn pi_coordinates_round_trip() {
        let a = CyclotomicElement::from_coeffs([5, -7, 11, 0, 3, 2], N);
        let back = CyclotomicElement::from_pi_coordinates(a.pi_coordinates(), N, 6 * N);
        assert_eq!(back, a);
    }

    fn element() -> impl Strategy<Value = CyclotomicElement> {
        proptest::array::uniform6(-50i64..50).prop_map(|c| CyclotomicElement::from_coeffs(c, N))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_axioms(a in element(), b in element(), c in element()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }

        #[test]
        fn division_is_two_sided_inverse(a in element()) {
            let pa = CyclotomicElement::pi(N).mul(&a);
            let q = pa.divide_by_pi_exact().unwrap();
            // pi * (pa / pi) recovers pa, and pa / pi agrees with a modulo pi^(6N - 1).
            prop_assert_eq!(CyclotomicElement::pi(N).mul(&q).coeffs(), pa.coeffs());
            let diff = q.sub(&a);
            prop_assert!(diff.pi_valuation().numerator.map_or(true, |k| k >= 6 * N - 1));
        }

        #[test]
        fn valuation_is_additive(a in element(), b in element()) {
            let (va, vb) = (a.pi_valuation(), b.pi_valuation());
            if let (Some(x), Some(y)) = (va.numerator, vb.numerator) {
                if x + y < 6 * N {
                    prop_assert_eq!(a.mul(&b).pi_valuation(), PiValuation::finite(x + y));
                }
            }
        }
    }
}
