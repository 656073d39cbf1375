//! Cup products, restriction and inflation for cyclic groups.
//!
//! Cochains of the periodic resolution in degree `k` are determined by their value
//! at `1`, an element of the coefficient algebra. The differentials are
//! `d_odd = g - 1` and `d_even = N`. The product uses the diagonal approximation
//!
//! * `p` even: `1 -> 1 (x) 1`
//! * `p` odd, `q` even: `1 -> 1 (x) g`
//! * `p`, `q` odd: `1 -> sum_{0 <= i < j < n} g^i (x) g^j`
//!
//! and is cross-checked against the Alexander-Whitney product on the homogeneous
//! bar resolution, transported by explicit comparison maps in both directions.

use std::collections::HashMap;

use crate::gca::{CyclicAction, Element};

use super::CohomologyError;

/// A coefficient algebra together with the cyclic group acting on it.
///
/// The group has order `order` and its generator acts through `action`; for a
/// quotient group the values must be fixed by `g^order`.
#[derive(Clone, Debug)]
pub struct CochainAlgebra {
    action: CyclicAction<i64>,
    order: usize,
}

impl CochainAlgebra {
    pub fn new(action: &CyclicAction<i64>) -> Self {
        CochainAlgebra { action: action.clone(), order: action.order() }
    }

    /// The quotient of order `order`, acting on elements fixed by `g^order`.
    pub fn quotient(action: &CyclicAction<i64>, order: usize) -> Result<Self, CohomologyError> {
        if order == 0 || action.order() % order != 0 {
            return Err(CohomologyError::BadGroupPair { order, of: action.order() });
        }
        Ok(CochainAlgebra { action: action.clone(), order })
    }

    /// The subgroup of the given index, generated by `g^index`.
    pub fn subgroup(&self, index: usize) -> Result<Self, CohomologyError> {
        if index == 0 || self.order % index != 0 {
            return Err(CohomologyError::BadGroupPair { order: index, of: self.order });
        }
        Ok(CochainAlgebra { action: self.action.power(index), order: self.order / index })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn action(&self) -> &CyclicAction<i64> {
        &self.action
    }

    /// `a, g a, g^2 a, ..., g^{n-1} a`.
    fn orbit(&self, a: &Element<i64>) -> Vec<Element<i64>> {
        let mut out = Vec::with_capacity(self.order);
        let mut x = a.clone();
        for _ in 0..self.order {
            let next = self.action.apply(&x);
            out.push(x);
            x = next;
        }
        out
    }

    /// Value of the cochain with value `a` at `sum c_m g^m`.
    fn evaluate(&self, orbit: &[Element<i64>], coeffs: &[i64]) -> Element<i64> {
        let mut out = Element::zero(self.action.algebra());
        for (m, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out = out + orbit[m].scale(&c);
            }
        }
        out
    }
}

/// Periodic-resolution cup product of cocycles of degrees `p, q >= 0` with values `a`, `b`.
pub fn cup_product(ca: &CochainAlgebra, p: u32, a: &Element<i64>, q: u32, b: &Element<i64>) -> Element<i64> {
    if p % 2 == 0 {
        return a * b;
    }
    let gb = ca.orbit(b);
    if q % 2 == 0 {
        return a * &gb[1 % ca.order];
    }
    let ga = ca.orbit(a);
    let mut out = Element::zero(ca.action.algebra());
    let mut prefix = Element::zero(ca.action.algebra());
    for j in 0..ca.order {
        // prefix = sum_{i<j} g^i a
        out = out + &prefix * &gb[j];
        prefix = prefix + ga[j].clone();
    }
    out
}

/// Chain-level comparison maps between the periodic and the homogeneous bar resolution
/// of a cyclic group of order `n`; group elements are exponents of the generator.
struct Comparison {
    n: usize,
    phi_cache: HashMap<Vec<usize>, Vec<i64>>,
}

type BarChain = HashMap<Vec<usize>, i64>;

impl Comparison {
    fn new(n: usize) -> Self {
        Comparison { n, phi_cache: HashMap::new() }
    }

    /// Contracting homotopy of the periodic resolution, as a Z-linear map in degree `k`.
    fn homotopy(&self, k: usize, x: &[i64]) -> Vec<i64> {
        let n = self.n;
        let mut out = vec![0i64; n];
        for (m, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k % 2 == 0 {
                for entry in out.iter_mut().take(m) {
                    *entry += c;
                }
            } else if m == n - 1 {
                out[0] += c;
            }
        }
        out
    }

    /// `phi_k(g_0, ..., g_k)` in `P_k = Z[C_n]`.
    fn phi(&mut self, tuple: &[usize]) -> Vec<i64> {
        let n = self.n;
        let g0 = tuple[0];
        let normalized: Vec<usize> = tuple.iter().map(|&g| (g + n - g0) % n).collect();
        let base = match self.phi_cache.get(&normalized) {
            Some(v) => v.clone(),
            None => {
                let v = self.phi_normalized(&normalized);
                self.phi_cache.insert(normalized, v.clone());
                v
            }
        };
        rotate(&base, g0)
    }

    fn phi_normalized(&mut self, tuple: &[usize]) -> Vec<i64> {
        let n = self.n;
        let k = tuple.len() - 1;
        if k == 0 {
            let mut v = vec![0i64; n];
            v[tuple[0]] = 1;
            return v;
        }
        let mut boundary = vec![0i64; n];
        for i in 0..=k {
            let face: Vec<usize> = tuple.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &g)| g).collect();
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (m, c) in self.phi(&face).into_iter().enumerate() {
                boundary[m] += sign * c;
            }
        }
        self.homotopy(k - 1, &boundary)
    }

    /// `psi_k(1)` in the bar resolution, as a combination of homogeneous tuples.
    fn psi(&self, k: usize) -> BarChain {
        let n = self.n;
        let mut current: BarChain = HashMap::from([(vec![0usize], 1i64)]);
        for degree in 1..=k {
            // d_degree(1) = g - 1 for odd degree, N for even degree.
            let multiplier: Vec<(usize, i64)> =
                if degree % 2 == 1 { vec![(1 % n, 1), (0, -1)] } else { (0..n).map(|m| (m, 1)).collect() };
            let mut next: BarChain = HashMap::new();
            for (tuple, c) in &current {
                for &(m, f) in &multiplier {
                    // s(g x) with the homotopy s(g_0, ..., g_j) = (e, g_0, ..., g_j).
                    let mut shifted = Vec::with_capacity(tuple.len() + 1);
                    shifted.push(0);
                    shifted.extend(tuple.iter().map(|&g| (g + m) % n));
                    *next.entry(shifted).or_insert(0) += c * f;
                }
            }
            next.retain(|_, c| *c != 0);
            current = next;
        }
        current
    }
}

fn rotate(v: &[i64], shift: usize) -> Vec<i64> {
    let n = v.len();
    let mut out = vec![0i64; n];
    for (m, &c) in v.iter().enumerate() {
        out[(m + shift) % n] = c;
    }
    out
}

/// The same product computed on the bar resolution with the Alexander-Whitney diagonal.
pub fn bar_cup_product(ca: &CochainAlgebra, p: u32, a: &Element<i64>, q: u32, b: &Element<i64>) -> Element<i64> {
    let (p, q) = (p as usize, q as usize);
    let mut cmp = Comparison::new(ca.order);
    let (ga, gb) = (ca.orbit(a), ca.orbit(b));
    let mut out = Element::zero(ca.action.algebra());
    let mut terms: Vec<(Vec<usize>, i64)> = cmp.psi(p + q).into_iter().collect();
    terms.sort();
    for (tuple, c) in terms {
        let left = ca.evaluate(&ga, &cmp.phi(&tuple[..=p]));
        if left.is_zero() {
            continue;
        }
        let right = ca.evaluate(&gb, &cmp.phi(&tuple[p..]));
        out = out + (&left * &right).scale(&c);
    }
    out
}

/// Restriction to the subgroup of the given index, on periodic cochains of degree `k`.
pub fn restriction_to_subgroup(
    ca: &CochainAlgebra,
    index: usize,
    k: u32,
    a: &Element<i64>,
) -> Result<(CochainAlgebra, Element<i64>), CohomologyError> {
    let sub = ca.subgroup(index)?;
    let mut big = Comparison::new(ca.order);
    let small = Comparison::new(sub.order);
    let ga = ca.orbit(a);
    let mut out = Element::zero(ca.action.algebra());
    for (tuple, c) in small.psi(k as usize) {
        let lifted: Vec<usize> = tuple.iter().map(|&h| h * index).collect();
        out = out + ca.evaluate(&ga, &big.phi(&lifted)).scale(&c);
    }
    Ok((sub, out))
}

/// Inflation from the quotient `quotient` to the full group `full`, in degree `k`.
///
/// The value `a` must be fixed by the kernel of the projection.
pub fn inflation_from_quotient(
    quotient: &CochainAlgebra,
    full: &CochainAlgebra,
    k: u32,
    a: &Element<i64>,
) -> Result<Element<i64>, CohomologyError> {
    if full.order % quotient.order != 0 {
        return Err(CohomologyError::BadGroupPair { order: quotient.order, of: full.order });
    }
    let kernel_generator = full.action.power(quotient.order);
    if kernel_generator.apply(a) != *a {
        return Err(CohomologyError::NotNormalizing);
    }
    let mut q = Comparison::new(quotient.order);
    let big = Comparison::new(full.order);
    let ga = quotient.orbit(a);
    let mut out = Element::zero(full.action.algebra());
    for (tuple, c) in big.psi(k as usize) {
        let projected: Vec<usize> = tuple.iter().map(|&g| g % quotient.order).collect();
        out = out + quotient.evaluate(&ga, &q.phi(&projected)).scale(&c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{element_vector, tate_cohomology, vector_element};
    use super::*;
    use crate::gca::{sym_induced_rho, Algebra, AlgebraPresentation};
    use num_bigint::BigInt;

    fn integers(order: usize) -> (Algebra, CochainAlgebra) {
        let alg = AlgebraPresentation::new(0, vec![], vec![]).unwrap();
        let action = CyclicAction::trivial(&alg, order);
        (alg.clone(), CochainAlgebra::new(&action))
    }

    #[test]
    fn comparison_maps_are_chain_maps() {
        let mut c = Comparison::new(3);
        // phi o psi is the identity on P_k for these small degrees.
        for k in 0..5usize {
            let mut total = vec![0i64; 3];
            for (tuple, coef) in c.psi(k) {
                for (m, v) in c.phi(&tuple).into_iter().enumerate() {
                    total[m] += coef * v;
                }
            }
            assert_eq!(total, vec![1, 0, 0], "degree {k}");
        }
    }

    #[test]
    fn trivial_coefficients() {
        let (alg, ca) = integers(9);
        let one = Element::<i64>::one(&alg);
        // b * b = b^2 generates degree 4; a * a = C(9,2) = 36 = 0 mod 3.
        assert_eq!(cup_product(&ca, 2, &one, 2, &one), one);
        let aa = cup_product(&ca, 1, &one, 1, &one);
        assert_eq!(aa, one.scale(&36));
        assert_eq!(bar_cup_product(&ca, 1, &one, 1, &one), aa);
    }

    #[test]
    fn periodic_and_bar_products_agree_in_cohomology_on_m() {
        let (m, gamma) = sym_induced_rho();
        let ca = CochainAlgebra::new(&gamma);
        for (p, tp, q, tq) in [(1u32, -2i64, 1u32, -2i64), (1, -2, 2, -4), (2, -4, 1, -2), (2, -2, 2, -2), (1, -2, 3, -2)] {
            let hp = tate_cohomology(&gamma, p as i64, tp).unwrap();
            let hq = tate_cohomology(&gamma, q as i64, tq).unwrap();
            let target = tate_cohomology(&gamma, (p + q) as i64, tp + tq).unwrap();
            for u in &hp.representatives {
                for v in &hq.representatives {
                    let (a, b) = (vector_element(&m, tp, u), vector_element(&m, tq, v));
                    let periodic = element_vector(&m, tp + tq, &cup_product(&ca, p, &a, q, &b));
                    let bar = element_vector(&m, tp + tq, &bar_cup_product(&ca, p, &a, q, &b));
                    assert_eq!(target.coordinates(&periodic).unwrap(), target.coordinates(&bar).unwrap());
                }
            }
        }
    }

    #[test]
    fn restriction_is_onto_for_trivial_integers() {
        let (alg, ca) = integers(9);
        let one = Element::<i64>::one(&alg);
        let (sub, r) = restriction_to_subgroup(&ca, 3, 2, &one).unwrap();
        assert_eq!(sub.order(), 3);
        // Ĥ^2(C3; Z) = Z/3 generated by 1; the restriction of the generator is a unit multiple.
        let c = r.coefficient(&crate::gca::Monomial::one(0));
        assert_ne!(c.rem_euclid(3), 0);
        let (_, r0) = restriction_to_subgroup(&ca, 3, 0, &one).unwrap();
        assert_eq!(r0, one);
    }

    #[test]
    fn inflation_lands_on_multiples_of_three() {
        let (alg, full) = integers(9);
        let quotient = CochainAlgebra::quotient(full.action(), 3).unwrap();
        let one = Element::<i64>::one(&alg);
        let inf = inflation_from_quotient(&quotient, &full, 2, &one).unwrap();
        let c = inf.coefficient(&crate::gca::Monomial::one(0));
        // Ĥ^2(C9; Z) = Z/9 with generator 1: the inflated class is 3 times a unit.
        assert_eq!(c.rem_euclid(3), 0);
        assert_ne!(c.rem_euclid(9), 0);
        let _ = BigInt::from(c);
    }
}
