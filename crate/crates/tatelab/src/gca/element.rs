use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Algebra, GcaError};

/// Coefficient rings usable in elements: the integers (`i64`, `BigInt`) or `Z/M`.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + From<i64>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + From<i64>
        + Send
        + Sync
        + 'static
{
}

/// Exponent vector over the free generators; odd exponents are 0 or 1.
///
/// Ordered graded-lexicographically: total exponent first, then the exponent
/// vector compared from the first generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A sparse element: nonzero coefficients indexed by monomials in the free generators.
#[derive(Clone)]
pub struct Element<R> {
    alg: Algebra,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Coeff> PartialEq for Element<R> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

/// Product of two monomials with its Koszul sign, or `None` if an odd generator repeats.
pub(crate) fn monomial_product(alg: &Algebra, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
    let n = a.0.len();
    let mut negative = false;
    let mut odd_in_a_after = 0usize;
    // Walk generators from the last to the first, counting odd generators of `a`
    // that an odd generator of `b` has to move past.
    for i in (0..n).rev() {
        if alg.is_odd(i) {
            if a.0[i] == 1 && b.0[i] == 1 {
                return None;
            }
            if b.0[i] == 1 && odd_in_a_after % 2 == 1 {
                negative = !negative;
            }
            if a.0[i] == 1 {
                odd_in_a_after += 1;
            }
        }
    }
    let exps = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    Some((Monomial(exps), negative))
}

impl<R: Coeff> Element<R> {
    pub fn zero(alg: &Algebra) -> Self {
        Element { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alg: &Algebra, c: R) -> Self {
        Self::monomial(alg, Monomial::one(alg.n_free()), c)
    }

    pub fn one(alg: &Algebra) -> Self {
        Self::constant(alg, R::one())
    }

    pub fn monomial(alg: &Algebra, m: Monomial, c: R) -> Self {
        assert_eq!(m.0.len(), alg.n_free(), "monomial length does not match the presentation");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element { alg: alg.clone(), terms }
    }

    /// A declared generator, rewritten in the free generators if it was eliminated.
    pub fn generator(alg: &Algebra, name: &str) -> Result<Self, GcaError> {
        let g = alg.generator_index(name)?;
        let mut out = Self::zero(alg);
        for &(i, c) in alg.substitution(g) {
            let mut e = vec![0u16; alg.n_free()];
            e[i] = 1;
            out.add_term(Monomial(e), R::from(c));
        }
        Ok(out)
    }

    /// Parse a polynomial in the declared generator names.
    pub fn parse(alg: &Algebra, src: &str) -> Result<Self, GcaError> {
        let mut out = Self::zero(alg);
        for (c, factors) in crate::polyparse::parse_polynomial(src)? {
            let mut term = Self::constant(alg, R::from(c));
            for (name, e) in factors {
                term = term.try_mul(&Self::generator(alg, &name)?.pow(e))?;
            }
            out = out + term;
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Internal degree, if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| self.alg.degree_of(m));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Number of odd generators in each term, if constant across terms.
    pub fn odd_degree(&self) -> Option<u32> {
        let count = |m: &Monomial| -> u32 {
            (0..self.alg.n_free()).filter(|&i| self.alg.is_odd(i)).map(|i| m.0[i] as u32).sum()
        };
        let mut it = self.terms.keys().map(count);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(&self.alg);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GcaError> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(GcaError::MixedPresentations);
        }
        let mut out = Self::zero(&self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = monomial_product(&self.alg, ma, mb) {
                    let c = ca.clone() * cb.clone();
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GcaError> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(GcaError::MixedPresentations);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.alg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Map coefficients into another coefficient ring.
    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Element<S> {
        let mut out = Element::<S>::zero(&self.alg);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn format_monomial(alg: &Algebra, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            let name = &alg.free_generator(i).name;
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl<R: Coeff> fmt::Display for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono = Self::format_monomial(&self.alg, m);
            let coeff = c.to_string();
            let body = match (coeff.as_str(), mono.as_str()) {
                (_, "1") => coeff.clone(),
                ("1", _) => mono.clone(),
                ("-1", _) => format!("-{mono}"),
                _ => format!("{coeff}*{mono}"),
            };
            if first {
                write!(f, "{body}")?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl<R: Coeff> fmt::Debug for Element<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl<R: Coeff> Add for Element<R> {
    type Output = Element<R>;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("elements of one presentation")
    }
}

impl<R: Coeff> Sub for Element<R> {
    type Output = Element<R>;
    fn sub(self, rhs: Self) -> Self {
        self.try_add(&-rhs).expect("elements of one presentation")
    }
}

impl<R: Coeff> Neg for Element<R> {
    type Output = Element<R>;
    fn neg(self) -> Self {
        self.scale(&-R::one())
    }
}

impl<R: Coeff> Add for &Element<R> {
    type Output = Element<R>;
    fn add(self, rhs: Self) -> Element<R> {
        self.try_add(rhs).expect("elements of one presentation")
    }
}

impl<R: Coeff> Sub for &Element<R> {
    type Output = Element<R>;
    fn sub(self, rhs: Self) -> Element<R> {
        self.try_add(&-rhs.clone()).expect("elements of one presentation")
    }
}

/// Graded-commutative product.
///
/// # Panics
/// If the operands come from different presentations; use [`Element::try_mul`] to get an error instead.
impl<R: Coeff> Mul for &Element<R> {
    type Output = Element<R>;
    fn mul(self, rhs: Self) -> Element<R> {
        self.try_mul(rhs).expect("elements of one presentation")
    }
}

impl<R: Coeff> Mul for Element<R> {
    type Output = Element<R>;
    fn mul(self, rhs: Self) -> Element<R> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::super::{polynomial_exterior_t, sym_induced_rho, AlgebraPresentation, Generator};
    use super::*;
    use crate::F3;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn odd_squares_vanish_and_anticommute() {
        let (t, _) = polynomial_exterior_t::<F3>();
        let c1 = Element::<F3>::generator(&t, "c1").unwrap();
        let c2 = Element::<F3>::generator(&t, "c2").unwrap();
        assert!((&c1 * &c1).is_zero());
        assert_eq!(&c1 * &c2, -(&c2 * &c1));
        let d1 = Element::<F3>::generator(&t, "d1").unwrap();
        assert_eq!(&c1 * &d1, &d1 * &c1);
    }

    #[test]
    fn delta_squared_relation() {
        let (t, _) = polynomial_exterior_t::<F3>();
        let p = |s: &str| Element::<F3>::parse(&t, s).unwrap();
        let delta = p("d1 - d2") * p("d2 - d3") * p("d3 - d1");
        let s1 = p("d1 + d2 + d3");
        let s2 = p("d1*d2 + d2*d3 + d3*d1");
        let s3 = p("d1*d2*d3");
        let rhs = -s2.pow(3) - s1.pow(3) * s3.clone() + s1.pow(2) * s2.pow(2);
        assert_eq!(&delta * &delta, rhs);
    }

    #[test]
    fn mixed_presentations_are_rejected() {
        let (t1, _) = polynomial_exterior_t::<F3>();
        let (t2, _) = polynomial_exterior_t::<F3>();
        let a = Element::<F3>::one(&t1);
        let b = Element::<F3>::one(&t2);
        assert!(matches!(a.try_mul(&b), Err(GcaError::MixedPresentations)));
    }

    #[test]
    fn eliminated_generators_substitute() {
        let (m, _) = sym_induced_rho();
        let x6 = Element::<BigInt>::generator(&m, "x6").unwrap();
        let expect = Element::<BigInt>::parse(&m, "-x0 - x3").unwrap();
        assert_eq!(x6, expect);
        assert_eq!(x6.to_string(), "-x0 - x3");
    }

    #[test]
    fn display_round_trips() {
        let (t, _) = polynomial_exterior_t::<F3>();
        let e = Element::<F3>::parse(&t, "c1*d1^2 - d2 + c2*c3*d3").unwrap();
        let shown = e.to_string();
        let again = Element::<F3>::parse(e.algebra(), &shown).unwrap();
        assert_eq!(again, e);
    }

    fn random_element(alg: &Algebra, seed: &[(u8, [u8; 4])]) -> Element<i64> {
        let mut out = Element::zero(alg);
        for (c, e) in seed {
            let m = Monomial::new(vec![(e[0] % 2) as u16, (e[1] % 2) as u16, (e[2] % 3) as u16, (e[3] % 3) as u16]);
            out.add_term(m, *c as i64 - 128);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn associative_and_graded_commutative(
            a in proptest::collection::vec((any::<u8>(), any::<[u8; 4]>()), 1..4),
            b in proptest::collection::vec((any::<u8>(), any::<[u8; 4]>()), 1..4),
            c in proptest::collection::vec((any::<u8>(), any::<[u8; 4]>()), 1..4),
            ea in any::<[u8; 4]>(), eb in any::<[u8; 4]>()
        ) {
            let alg = AlgebraPresentation::new(0, vec![
                Generator::odd("u", -1), Generator::odd("v", -3),
                Generator::even("p", -2), Generator::even("q", -4)], vec![]).unwrap();
            let (x, y, z) = (random_element(&alg, &a), random_element(&alg, &b), random_element(&alg, &c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&Element::one(&alg) * &x, x.clone());
            let ma = random_element(&alg, &[(129, ea)]);
            let mb = random_element(&alg, &[(129, eb)]);
            let sign = if ma.odd_degree().unwrap() % 2 == 1 && mb.odd_degree().unwrap() % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(&ma * &mb, (&mb * &ma).scale(&sign));
        }
    }
}
