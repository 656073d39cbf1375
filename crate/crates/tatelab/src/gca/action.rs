use std::collections::HashMap;

use num_bigint::{BigInt, ToBigInt};

use super::{Algebra, Coeff, Element, GcaError, Monomial};
use crate::rings::{IntMatrix, ModMatrix};

/// A finite-order automorphism determined by linear images of the generators.
#[derive(Clone)]
pub struct CyclicAction<R> {
    alg: Algebra,
    order: usize,
    /// Image of each free generator, written in the free generators.
    images: Vec<Element<R>>,
}

/// Column-sparse matrix: `columns[j]` lists the nonzero `(row, value)` entries of column `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R> {
    rows: usize,
    columns: Vec<Vec<(usize, R)>>,
}

impl<R: Coeff> CyclicAction<R> {
    /// Images of all declared generators, as polynomial text in the generator names.
    pub fn from_text(alg: &Algebra, order: usize, images: &[&str]) -> Result<Self, GcaError> {
        let parsed = images.iter().map(|s| Element::parse(alg, s)).collect::<Result<Vec<_>, _>>()?;
        Self::from_images(alg, order, parsed)
    }

    /// Images of all declared generators, validated for degree, parity, relations and order.
    pub fn from_images(alg: &Algebra, order: usize, images: Vec<Element<R>>) -> Result<Self, GcaError> {
        let bad = |g: usize, reason: &str| GcaError::BadAction {
            generator: alg.generators[g].name.clone(),
            reason: reason.to_string(),
        };
        if images.len() != alg.generators.len() {
            return Err(GcaError::BadAction {
                generator: String::new(),
                reason: format!("expected {} images, found {}", alg.generators.len(), images.len()),
            });
        }
        if order == 0 {
            return Err(bad(0, "order must be positive"));
        }
        for (g, img) in images.iter().enumerate() {
            if !std::sync::Arc::ptr_eq(img.algebra(), alg) {
                return Err(GcaError::MixedPresentations);
            }
            if img.terms().any(|(m, _)| m.total() != 1) {
                return Err(bad(g, "image is not linear"));
            }
            if !img.is_zero() && img.degree() != Some(alg.generators[g].degree) {
                return Err(bad(g, "image changes the internal degree"));
            }
            let odd = alg.generators[g].parity == super::Parity::Odd;
            if !img.is_zero() && img.odd_degree() != Some(odd as u32) {
                return Err(bad(g, "image changes the parity"));
            }
        }
        let free_images: Vec<Element<R>> = (0..alg.n_free())
            .map(|i| {
                let g = alg.generator_index(&alg.free_generator(i).name).expect("free generator is declared");
                images[g].clone()
            })
            .collect();
        let action = CyclicAction { alg: alg.clone(), order, images: free_images };
        // Eliminated generators must map to the substituted combination of images.
        for (g, img) in images.iter().enumerate() {
            let via_substitution = action.apply(&Element::generator(alg, &alg.generators[g].name)?);
            if via_substitution != *img {
                return Err(bad(g, "image does not preserve the linear relations"));
            }
        }
        for i in 0..alg.n_free() {
            let x = Element::generator(alg, &alg.free_generator(i).name)?;
            if action.apply_power(&x, order) != x {
                return Err(bad(i, "the declared power is not the identity"));
            }
        }
        Ok(action)
    }

    /// The trivial action of order `order`.
    pub fn trivial(alg: &Algebra, order: usize) -> Self {
        let images = (0..alg.n_free())
            .map(|i| {
                let mut e = vec![0u16; alg.n_free()];
                e[i] = 1;
                Element::monomial(alg, Monomial::new(e), R::one())
            })
            .collect();
        CyclicAction { alg: alg.clone(), order, images }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The `k`-th power, as an action of order `order / gcd(order, k)`.
    pub fn power(&self, k: usize) -> Self {
        let images = (0..self.alg.n_free())
            .map(|i| {
                let x = Element::generator(&self.alg, &self.alg.free_generator(i).name).expect("free generator");
                self.apply_power(&x, k % self.order)
            })
            .collect();
        let order = self.order / num_integer::gcd(self.order, k);
        CyclicAction { alg: self.alg.clone(), order, images }
    }

    /// Ring-homomorphic image of `a`.
    ///
    /// # Panics
    /// If `a` belongs to a different presentation.
    pub fn apply(&self, a: &Element<R>) -> Element<R> {
        assert!(std::sync::Arc::ptr_eq(a.algebra(), &self.alg), "element of a different presentation");
        let mut cache = PowerCache::default();
        let mut out = Element::zero(&self.alg);
        for (m, c) in a.terms() {
            out = out + self.image_of_monomial(m, &mut cache).scale(c);
        }
        out
    }

    pub fn apply_power(&self, a: &Element<R>, k: usize) -> Element<R> {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.apply(&x);
        }
        x
    }

    fn image_of_monomial(&self, m: &Monomial, cache: &mut PowerCache<R>) -> Element<R> {
        let mut acc = Element::one(&self.alg);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = cache
                .entry((i, e))
                .or_insert_with(|| self.images[i].pow(e as u32))
                .clone();
            acc = &acc * &p;
        }
        acc
    }

    /// The matrix of the action on the degree-`t` piece, in the order of `basis_in_degree`.
    pub fn sparse_matrix(&self, t: i64) -> Result<SparseMatrix<R>, GcaError> {
        let basis = self.alg.basis_in_degree(t)?;
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut cache = PowerCache::default();
        let columns = basis
            .iter()
            .map(|m| {
                self.image_of_monomial(m, &mut cache)
                    .terms()
                    .map(|(n, c)| (index[n], c.clone()))
                    .collect()
            })
            .collect();
        Ok(SparseMatrix { rows: basis.len(), columns })
    }
}

impl<R: Coeff + ToBigInt> CyclicAction<R> {
    /// Dense integer matrix of the action on the degree-`t` piece.
    pub fn action_matrix(&self, t: i64) -> Result<IntMatrix, GcaError> {
        Ok(self.sparse_matrix(t)?.to_int_matrix())
    }
}

impl<R: Coeff> std::fmt::Debug for CyclicAction<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CyclicAction").field("order", &self.order).field("images", &self.images).finish()
    }
}

type PowerCache<R> = HashMap<(usize, u16), Element<R>>;

impl<R: Coeff> SparseMatrix<R> {
    pub fn new(rows: usize, columns: Vec<Vec<(usize, R)>>) -> Self {
        assert!(columns.iter().flatten().all(|(r, _)| *r < rows), "row index out of bounds");
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, R)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        // Dense accumulator with a list of touched rows, reused across columns.
        let mut acc: Vec<Option<R>> = vec![None; self.rows];
        let mut touched = Vec::new();
        let columns = other
            .columns
            .iter()
            .map(|col| {
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        let term = a.clone() * b.clone();
                        match &mut acc[*i] {
                            Some(v) => *v = v.clone() + term,
                            slot => {
                                *slot = Some(term);
                                touched.push(*i);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, R)> = touched
                    .drain(..)
                    .filter_map(|i| acc[i].take().filter(|v| !v.is_zero()).map(|v| (i, v)))
                    .collect();
                out
            })
            .collect();
        SparseMatrix { rows: self.rows, columns }
    }

    /// Restriction to the rows and columns in `support`, renumbered in that order.
    ///
    /// # Panics
    /// If a column in `support` has an entry outside `support`.
    pub fn restrict(&self, support: &[usize]) -> SparseMatrix<R> {
        let pos: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let columns = support
            .iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .map(|(i, v)| (*pos.get(i).expect("support is invariant"), v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: support.len(), columns }
    }
}

impl<R: Coeff + ToBigInt> SparseMatrix<R> {
    pub fn to_int_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.to_bigint().expect("integral coefficient");
            }
        }
        m
    }

    /// Reduction modulo `modulus` into a dense modular matrix.
    pub fn to_mod_matrix(&self, modulus: u16) -> ModMatrix {
        let mut m = ModMatrix::zeros(self.rows, self.cols(), modulus);
        let q = BigInt::from(modulus);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                let r = v.to_bigint().expect("integral coefficient") % &q;
                m.set(*i, j, i64::try_from(r).expect("reduced residue"));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::super::{polynomial_exterior_t, sym_induced_rho, AlgebraPresentation, Generator};
    use super::*;
    use crate::F3;
    use proptest::prelude::*;

    #[test]
    fn gamma_shifts_indices() {
        let (m, g) = sym_induced_rho();
        let p = |s: &str| Element::<i64>::parse(&m, s).unwrap();
        assert_eq!(g.apply(&p("x0")), p("x1"));
        assert_eq!(g.apply(&p("x0*x3*x6")), p("x1*x4*x7"));
        assert_eq!(g.apply_power(&p("x4"), 9), p("x4"));
        assert_eq!(g.apply_power(&p("x4"), 3), p("x7"));
    }

    #[test]
    fn matrices_have_the_declared_order() {
        let (_, g) = sym_induced_rho();
        for t in [0, -2, -4, -6] {
            let a = g.action_matrix(t).unwrap();
            assert_eq!(a.pow(9), IntMatrix::identity(a.rows()));
            if t != 0 {
                assert_ne!(a.pow(3), IntMatrix::identity(a.rows()));
            }
        }
        let a = g.action_matrix(-2).unwrap();
        assert_eq!(a.rows(), 6);
    }

    #[test]
    fn gamma_cubed_is_unipotent_mod_three() {
        let (_, g) = sym_induced_rho();
        let a3 = g.power(3).action_matrix(-2).unwrap();
        let u = a3.sub(&IntMatrix::identity(6)).pow(3);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(u[(i, j)].clone() % 3, BigInt::from(0));
            }
        }
        assert_eq!(g.power(3).order(), 3);
    }

    #[test]
    fn trivial_action_gives_identity() {
        let (m, _) = sym_induced_rho();
        let id = CyclicAction::<i64>::trivial(&m, 1);
        assert_eq!(id.action_matrix(-4).unwrap(), IntMatrix::identity(21));
    }

    #[test]
    fn action_permutes_t_generators() {
        let (t, g) = polynomial_exterior_t::<F3>();
        let p = |s: &str| Element::<F3>::parse(&t, s).unwrap();
        assert_eq!(g.apply(&p("c1*c2")), p("c2*c3"));
        assert_eq!(g.apply(&p("c3*c1")), p("c1*c2"));
        assert_eq!(g.apply(&p("d1^2*c3")), p("d2^2*c1"));
    }

    #[test]
    fn rejects_invalid_actions() {
        let (m, _) = sym_induced_rho();
        let shift: Vec<String> = (0..9).map(|i| format!("x{}", (i + 1) % 9)).collect();
        let refs: Vec<&str> = shift.iter().map(String::as_str).collect();
        assert!(CyclicAction::<i64>::from_text(&m, 3, &refs).is_err());
        let mut broken = refs.clone();
        broken[6] = "x1";
        assert!(matches!(
            CyclicAction::<i64>::from_text(&m, 9, &broken),
            Err(GcaError::BadAction { .. })
        ));
        let alg = AlgebraPresentation::new(0, vec![Generator::even("a", -2), Generator::odd("b", -2)], vec![])
            .unwrap();
        assert!(CyclicAction::<i64>::from_text(&alg, 2, &["b", "a"]).is_err());
        assert!(CyclicAction::<i64>::from_text(&alg, 1, &["a^2", "b"]).is_err());
    }

    #[test]
    fn sparse_composition_matches_dense() {
        let (_, g) = sym_induced_rho();
        let s = g.sparse_matrix(-4).unwrap();
        let d = g.action_matrix(-4).unwrap();
        assert_eq!(s.compose(&s).to_int_matrix(), &d * &d);
        assert_eq!(g.power(2).action_matrix(-4).unwrap(), &d * &d);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn action_is_multiplicative(
            a in proptest::collection::vec((-3i64..4, 0usize..9, 0usize..9), 1..4),
            b in proptest::collection::vec((-3i64..4, 0usize..9, 0usize..9), 1..4),
        ) {
            let (m, g) = sym_induced_rho();
            let build = |spec: &[(i64, usize, usize)]| {
                spec.iter().fold(Element::<i64>::zero(&m), |acc, &(c, i, j)| {
                    acc + Element::parse(&m, &format!("{c}*x{i}*x{j}")).unwrap_or_else(|_| Element::zero(&m))
                })
            };
            let (x, y) = (build(&a), build(&b));
            prop_assert_eq!(g.apply(&(&x * &y)), &g.apply(&x) * &g.apply(&y));
        }

        #[test]
        fn t_action_is_multiplicative(e1 in any::<[u8; 6]>(), e2 in any::<[u8; 6]>()) {
            let (t, g) = polynomial_exterior_t::<F3>();
            let mono = |e: [u8; 6]| {
                let v: Vec<u16> = e.iter().enumerate().map(|(i, x)| if i < 3 { (x % 2) as u16 } else { (x % 3) as u16 }).collect();
                Element::<F3>::monomial(&t, Monomial::new(v), F3::new(1))
            };
            let (x, y) = (mono(e1) + mono(e2), mono(e2));
            prop_assert_eq!(g.apply(&(&x * &y)), &g.apply(&x) * &g.apply(&y));
            prop_assert_eq!(g.apply_power(&x, 3), x);
        }
    }
}
