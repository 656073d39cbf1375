//! Sublattices of `Z^n` given by generators, and ideal pieces of graded algebras as lattices.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclic_cohomology::element_vector;
use crate::gca::{Algebra, Element};
use crate::rings::{kernel_basis, smith_normal_form, subquotient_structure, IntMatrix};

/// A sublattice of `Z^ambient`, stored by a basis of columns.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn from_columns(ambient: usize, columns: &[Vec<BigInt>]) -> Self {
        let gens = IntMatrix::from_columns(ambient, columns);
        let snf = smith_normal_form(&gens);
        let diag = snf.diagonal();
        let cols: Vec<Vec<BigInt>> = (0..snf.rank())
            .map(|i| snf.u_inv.column(i).into_iter().map(|x| x * &diag[i]).collect())
            .collect();
        Lattice { ambient, basis: IntMatrix::from_columns(ambient, &cols) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut cols = self.columns();
        cols.extend(other.columns());
        Lattice::from_columns(self.ambient, &cols)
    }

    /// Image of the lattice under `a`.
    pub fn image(&self, a: &IntMatrix) -> Lattice {
        let cols: Vec<Vec<BigInt>> = self.columns().iter().map(|c| a.apply(c)).collect();
        Lattice::from_columns(a.rows(), &cols)
    }

    /// The full lattice `Z^n`.
    pub fn full(n: usize) -> Lattice {
        Lattice { ambient: n, basis: IntMatrix::identity(n) }
    }

    /// `{v : a v ∈ self}`.
    pub fn preimage(&self, a: &IntMatrix) -> Lattice {
        let n = a.cols();
        let r = self.rank();
        let mut joined = IntMatrix::zeros(self.ambient, n + r);
        for i in 0..self.ambient {
            for j in 0..n {
                joined[(i, j)] = a[(i, j)].clone();
            }
            for j in 0..r {
                joined[(i, n + j)] = -self.basis[(i, j)].clone();
            }
        }
        let ker = kernel_basis(&joined);
        let cols: Vec<Vec<BigInt>> = ker.columns().into_iter().map(|c| c[..n].to_vec()).collect();
        Lattice::from_columns(n, &cols)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        let mut cols = self.columns();
        cols.push(v.to_vec());
        let joined = Lattice::from_columns(self.ambient, &cols);
        joined.rank() == self.rank() && joined.index_in_span() == self.index_in_span()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        other.columns().iter().all(|c| self.contains_vector(c))
    }

    /// Product of the elementary divisors: the index of the lattice in its saturation.
    fn index_in_span(&self) -> BigInt {
        smith_normal_form(&self.basis).diagonal().into_iter().filter(|d| !d.is_zero()).product()
    }

    /// Exponents of the `3`-primary cyclic summands of `self / sub`.
    pub fn quotient_exponents(&self, sub: &Lattice) -> Vec<u32> {
        let mut e = subquotient_structure(&self.basis, &sub.basis, 3)
            .expect("sublattice is contained in the lattice")
            .exponents;
        e.sort_unstable_by(|a, b| b.cmp(a));
        e
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.contains(other) && other.contains(self)
    }
}

/// A homogeneous ideal of a graded algebra over `Z`, given by homogeneous generators.
#[derive(Clone, Debug)]
pub struct Ideal {
    alg: Algebra,
    generators: Vec<Element<i64>>,
}

impl Ideal {
    pub fn new(alg: &Algebra, generators: Vec<Element<i64>>) -> Self {
        Ideal { alg: alg.clone(), generators }
    }

    pub fn generators(&self) -> &[Element<i64>] {
        &self.generators
    }

    /// The ideal generated by the union of the generators.
    pub fn plus(&self, other: &Ideal) -> Ideal {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ideal::new(&self.alg, g)
    }

    /// The degree-`t` piece of `I^k`: products of `k` generators times monomials.
    pub fn power_piece(&self, k: u32, t: i64) -> Lattice {
        let basis = self.alg.basis_in_degree(t).expect("finite degree piece");
        let mut products = Vec::new();
        self.products(k, 0, Element::one(&self.alg), t, &mut products);
        let mut cols = Vec::new();
        for p in products {
            let deg = p.degree().expect("nonzero product");
            for m in self.alg.basis_in_degree(t - deg).expect("finite degree piece") {
                let x = &p * &Element::monomial(&self.alg, m, 1);
                cols.push(element_vector(&self.alg, t, &x));
            }
        }
        Lattice::from_columns(basis.len(), &cols)
    }

    /// Sum of the degree-`t` pieces of `I_1^k + I_2^k + …` for the listed ideals.
    pub fn sum_of_powers_piece(ideals: &[Ideal], k: u32, t: i64) -> Lattice {
        let mut it = ideals.iter().map(|i| i.power_piece(k, t));
        let first = it.next().expect("at least one ideal");
        it.fold(first, |acc, l| acc.sum(&l))
    }

    fn products(&self, k: u32, from: usize, acc: Element<i64>, t: i64, out: &mut Vec<Element<i64>>) {
        if acc.is_zero() || acc.degree().is_some_and(|d| d < t) {
            return;
        }
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in from..self.generators.len() {
            self.products(k - 1, i, &acc * &self.generators[i], t, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn containment_and_quotient() {
        let big = Lattice::from_columns(2, &[col(&[1, 0]), col(&[0, 3])]);
        let small = Lattice::from_columns(2, &[col(&[3, 0]), col(&[0, 9]), col(&[6, 9])]);
        assert!(big.contains(&small));
        assert!(!small.contains(&big));
        assert_eq!(big.quotient_exponents(&small), vec![1, 1]);
        assert!(big.contains_vector(&col(&[5, 6])));
        assert!(!big.contains_vector(&col(&[0, 1])));
    }

    #[test]
    fn preimage_of_a_multiple() {
        // {v : 3 v ∈ 9 Z^2} = 3 Z^2.
        let nine = Lattice::from_columns(2, &[col(&[9, 0]), col(&[0, 9])]);
        let three = IntMatrix::diagonal(&[3, 3]);
        let pre = nine.preimage(&three);
        assert_eq!(pre, Lattice::from_columns(2, &[col(&[3, 0]), col(&[0, 3])]));
    }
}
