//! Tate cohomology of cyclic groups from the periodic resolution
//! `... -> Z[C_n] --N--> Z[C_n] --(1-g)--> Z[C_n] -> Z`.
//!
//! Even degrees are `ker(1-g)/Im(N)` and odd degrees are `ker(N)/Im(1-g)`, with
//! `N = 1 + g + ... + g^{n-1}`. Everything is computed over the integers by Smith
//! normal form, block by block: a degree piece splits along the connected
//! components of the support graph of the action matrix.

mod blocks;
mod census;
mod cup;
mod decompose;

pub use blocks::{support_blocks, tate_structure, tate_structure_in_degree, TateStructure};
pub use census::{census, orbit_census, outer_decomposition, outer_decomposition_by, CensusRow, FixedBlockRoute, OrbitCensus};
pub use cup::{
    bar_cup_product, cup_product, inflation_from_quotient, restriction_to_subgroup, CochainAlgebra,
};
pub use decompose::{decompose_c3, C3DecompositionCounts};

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gca::{Algebra, CyclicAction, Element, GcaError, SparseMatrix};
use crate::rings::{kernel_basis, subquotient_with_coordinates, CoordinateMap, IntMatrix, RingError};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("matrix is not an action of order {order}")]
    NotOfOrder { order: usize },
    #[error("matrix minus the identity is not nilpotent of order 3 over F_3")]
    NotUnipotent,
    #[error("outer automorphism does not commute with the inner generator")]
    NotNormalizing,
    #[error("local elimination found {found} of {dim} invariant factors; raise the precision")]
    PrecisionExhausted { dim: usize, found: usize },
    #[error("group of order {order} is not a subgroup or quotient of order {of}")]
    BadGroupPair { order: usize, of: usize },
}

/// Parity of the cohomological degree; Tate cohomology of a cyclic group is 2-periodic.
pub fn is_even(n: i64) -> bool {
    n.rem_euclid(2) == 0
}

/// A lattice `Z^r` with a generator matrix of finite order.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicModule {
    order: usize,
    gamma: IntMatrix,
}

impl CyclicModule {
    pub fn new(order: usize, gamma: IntMatrix) -> Result<Self, CohomologyError> {
        if gamma.rows() != gamma.cols() || order == 0 || gamma.pow(order as u32) != IntMatrix::identity(gamma.rows())
        {
            return Err(CohomologyError::NotOfOrder { order });
        }
        Ok(CyclicModule { order, gamma })
    }

    /// `Z^rank` with the trivial action.
    pub fn trivial(order: usize, rank: usize) -> Self {
        CyclicModule { order, gamma: IntMatrix::identity(rank) }
    }

    /// The regular representation `Z[C_n]`, with `g` shifting the basis `1, g, ..., g^{n-1}`.
    pub fn regular(order: usize) -> Self {
        let mut gamma = IntMatrix::zeros(order, order);
        for i in 0..order {
            gamma[((i + 1) % order, i)] = BigInt::one();
        }
        CyclicModule { order, gamma }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.gamma.rows()
    }

    pub fn gamma(&self) -> &IntMatrix {
        &self.gamma
    }

    pub fn one_minus_gamma(&self) -> IntMatrix {
        IntMatrix::identity(self.rank()).sub(&self.gamma)
    }

    pub fn norm(&self) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rank());
        let mut power = IntMatrix::identity(self.rank());
        for _ in 1..self.order {
            power = &power * &self.gamma;
            acc = acc.add(&power);
        }
        acc
    }

    /// The subgroup of index `index`, generated by `g^index`.
    pub fn subgroup(&self, index: usize) -> Result<Self, CohomologyError> {
        if index == 0 || self.order % index != 0 {
            return Err(CohomologyError::BadGroupPair { order: index, of: self.order });
        }
        Ok(CyclicModule { order: self.order / index, gamma: self.gamma.pow(index as u32) })
    }

    /// Kernel and image generators (as columns) for Tate degree `n`.
    fn cycles_and_boundaries(&self, n: i64) -> (IntMatrix, IntMatrix) {
        if is_even(n) {
            (kernel_basis(&self.one_minus_gamma()), self.norm())
        } else {
            (kernel_basis(&self.norm()), self.one_minus_gamma())
        }
    }

    /// `Ĥ^n` with representatives and the coordinate map.
    pub fn tate(&self, n: i64) -> Result<(Vec<u32>, Vec<Vec<BigInt>>, CoordinateMap), CohomologyError> {
        let (ker, im) = self.cycles_and_boundaries(n);
        let (sq, map) = subquotient_with_coordinates(&ker, &im, 3)?;
        Ok((sq.exponents, sq.representatives, map))
    }

    /// Ordinary invariants `H^0 = ker(1-g)`, as a basis of columns.
    pub fn invariants(&self) -> IntMatrix {
        kernel_basis(&self.one_minus_gamma())
    }
}

/// One block of a [`TateGroup`]: the basis positions it lives on and its coordinate map.
#[derive(Clone, Debug)]
struct BlockCoordinates {
    support: Vec<usize>,
    map: CoordinateMap,
    first_summand: usize,
    n_summands: usize,
}

/// `Ĥ^n(C_order; A_t)`: cyclic 3-primary summands with integer representatives
/// in the monomial basis of the degree-`t` piece.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TateGroup {
    pub group_order: usize,
    pub n: i64,
    pub t: i64,
    /// Exponent `e` of each cyclic summand `Z/3^e`, in block order.
    pub exponents: Vec<u32>,
    #[serde(skip)]
    pub representatives: Vec<Vec<BigInt>>,
    #[serde(skip)]
    coordinates: Option<Arc<Vec<BlockCoordinates>>>,
}

impl PartialEq for TateGroup {
    fn eq(&self, other: &Self) -> bool {
        self.group_order == other.group_order
            && self.n == other.n
            && self.t == other.t
            && self.invariant_factors() == other.invariant_factors()
    }
}

impl TateGroup {
    /// Invariant factors `3^e`, in ascending order.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut f: Vec<u64> = self.exponents.iter().map(|&e| 3u64.pow(e)).collect();
        f.sort_unstable();
        f
    }

    pub fn order(&self) -> BigInt {
        self.exponents.iter().fold(BigInt::one(), |acc, &e| acc * BigInt::from(3u64.pow(e)))
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Number of cyclic summands, i.e. the `F_3`-dimension of the group mod 3.
    pub fn cyclic_rank(&self) -> usize {
        self.exponents.len()
    }

    /// Coefficients of a cocycle in the cyclic summands, each reduced mod `3^e`.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>, CohomologyError> {
        let blocks = self.coordinates.as_ref().expect("coordinates are kept for computed groups");
        let mut out = vec![BigInt::zero(); self.exponents.len()];
        let mut covered = vec![false; x.len()];
        for b in blocks.iter() {
            let local: Vec<BigInt> = b.support.iter().map(|&i| x[i].clone()).collect();
            for &i in &b.support {
                covered[i] = true;
            }
            if b.n_summands == 0 {
                // Still verify that the restriction is a cocycle.
                b.map.coordinates(&local)?;
                continue;
            }
            let c = b.map.coordinates(&local)?;
            out[b.first_summand..b.first_summand + b.n_summands].clone_from_slice(&c);
        }
        debug_assert!(covered.iter().all(|&c| c));
        Ok(out)
    }

    /// Whether the cocycle `x` is zero in cohomology.
    pub fn is_coboundary(&self, x: &[BigInt]) -> Result<bool, CohomologyError> {
        Ok(self.coordinates(x)?.iter().all(Zero::is_zero))
    }

    /// Human-readable structure such as `Z/9 + Z/3`, or `0`.
    pub fn describe(&self) -> String {
        describe_factors(&self.invariant_factors())
    }
}

/// `Z/9 + Z/3 + Z/3` from ascending factors, or `0`.
pub fn describe_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors.iter().rev().map(|f| format!("Z/{f}")).collect::<Vec<_>>().join(" + ")
}

/// Exact Tate cohomology of a cyclic action on a dense lattice.
pub fn tate_of_module(module: &CyclicModule, n: i64, t: i64) -> Result<TateGroup, CohomologyError> {
    let sparse = dense_to_sparse(module.gamma());
    tate_of_sparse(&sparse, module.order(), n, t)
}

fn dense_to_sparse(m: &IntMatrix) -> SparseMatrix<i64> {
    let columns = (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter(|&i| !m[(i, j)].is_zero())
                .map(|i| (i, m[(i, j)].to_i64().expect("small entries")))
                .collect()
        })
        .collect();
    SparseMatrix::new(m.rows(), columns)
}

fn tate_of_sparse(gamma: &SparseMatrix<i64>, order: usize, n: i64, t: i64) -> Result<TateGroup, CohomologyError> {
    let mut exponents = Vec::new();
    let mut representatives = Vec::new();
    let mut coords = Vec::new();
    let dim = gamma.rows();
    for support in support_blocks(gamma) {
        let block = CyclicModule::new(order, gamma.restrict(&support).to_int_matrix())?;
        let (exps, reps, map) = block.tate(n)?;
        coords.push(BlockCoordinates {
            support: support.clone(),
            map,
            first_summand: exponents.len(),
            n_summands: exps.len(),
        });
        exponents.extend(exps);
        for r in reps {
            let mut full = vec![BigInt::zero(); dim];
            for (k, &i) in support.iter().enumerate() {
                full[i] = r[k].clone();
            }
            representatives.push(full);
        }
    }
    Ok(TateGroup { group_order: order, n, t, exponents, representatives, coordinates: Some(Arc::new(coords)) })
}

/// `Ĥ^n(C_order; A_t)` for the group generated by `action`, exactly, with representatives.
pub fn tate_cohomology(action: &CyclicAction<i64>, n: i64, t: i64) -> Result<TateGroup, CohomologyError> {
    tate_of_sparse(&action.sparse_matrix(t)?, action.order(), n, t)
}

/// Ordinary invariants of the degree-`t` piece, as a basis of columns.
pub fn h0(action: &CyclicAction<i64>, t: i64) -> Result<IntMatrix, CohomologyError> {
    let gamma = action.sparse_matrix(t)?;
    let dim = gamma.rows();
    let mut cols = Vec::new();
    for support in support_blocks(&gamma) {
        let block = CyclicModule::new(action.order(), gamma.restrict(&support).to_int_matrix())?;
        let k = block.invariants();
        for j in 0..k.cols() {
            let mut full = vec![BigInt::zero(); dim];
            for (r, &i) in support.iter().enumerate() {
                full[i] = k[(r, j)].clone();
            }
            cols.push(full);
        }
    }
    Ok(IntMatrix::from_columns(dim, &cols))
}

/// Matrix of an outer automorphism on the summands of `inner`.
///
/// Column `j` holds the coordinates of `outer * rep_j`. Entries are reduced mod
/// the order of the target summand. The automorphism must commute with the
/// inner generator, which makes the induced map well defined.
pub fn induced_outer_action(
    inner: &TateGroup,
    inner_gamma: &IntMatrix,
    outer: &IntMatrix,
) -> Result<Vec<Vec<BigInt>>, CohomologyError> {
    if &(outer * inner_gamma) != &(inner_gamma * outer) {
        return Err(CohomologyError::NotNormalizing);
    }
    let k = inner.cyclic_rank();
    let mut m = vec![vec![BigInt::zero(); k]; k];
    for (j, rep) in inner.representatives.iter().enumerate() {
        let image = outer.apply(rep);
        for (i, c) in inner.coordinates(&image)?.into_iter().enumerate() {
            m[i][j] = c;
        }
    }
    Ok(m)
}

/// The action of the subgroup of the given index, generated by `g^index`.
pub fn subgroup_action(action: &CyclicAction<i64>, index: usize) -> Result<CyclicAction<i64>, CohomologyError> {
    if index == 0 || action.order() % index != 0 {
        return Err(CohomologyError::BadGroupPair { order: index, of: action.order() });
    }
    Ok(action.power(index))
}

/// Coefficients of `x` in the monomial basis of the degree-`t` piece.
pub fn element_vector(alg: &Algebra, t: i64, x: &Element<i64>) -> Vec<BigInt> {
    let basis = alg.basis_in_degree(t).expect("finite degree piece");
    basis.iter().map(|b| BigInt::from(x.coefficient(b))).collect()
}

/// The element of degree `t` with the given coefficients in the monomial basis.
pub fn vector_element(alg: &Algebra, t: i64, v: &[BigInt]) -> Element<i64> {
    let basis = alg.basis_in_degree(t).expect("finite degree piece");
    let mut out = Element::zero(alg);
    for (b, c) in basis.iter().zip(v) {
        let c = c.to_i64().expect("coefficient fits in i64");
        if c != 0 {
            out = out + Element::monomial(alg, b.clone(), c);
        }
    }
    out
}

/// Reduce every entry of a coordinate matrix to `F_3`.
pub fn reduce_mod3(m: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    let three = BigInt::from(3);
    m.iter()
        .map(|row| row.iter().map(|x| x.mod_floor(&three).to_i64().expect("residue")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::{sym_induced_rho, Element};

    #[test]
    fn trivial_c9_on_integers() {
        let m = CyclicModule::trivial(9, 1);
        assert_eq!(tate_of_module(&m, 0, 0).unwrap().invariant_factors(), vec![9]);
        assert_eq!(tate_of_module(&m, 2, 0).unwrap().invariant_factors(), vec![9]);
        assert!(tate_of_module(&m, 1, 0).unwrap().is_zero());
    }

    #[test]
    fn free_module_is_acyclic() {
        let m = CyclicModule::regular(3);
        for n in 0..4 {
            assert!(tate_of_module(&m, n, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn reduced_regular_representation() {
        // Z[C3]/N: classes only in odd degree.
        let rho = CyclicModule::new(3, IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]])).unwrap();
        assert!(tate_of_module(&rho, 0, 0).unwrap().is_zero());
        assert_eq!(tate_of_module(&rho, 1, 0).unwrap().invariant_factors(), vec![3]);
        assert_eq!(rho.invariants().cols(), 0);
    }

    #[test]
    fn rejects_wrong_order() {
        assert!(CyclicModule::new(2, IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]])).is_err());
    }

    #[test]
    fn c3_on_m_at_minus_six_is_spanned_by_the_d_classes() {
        let (m, gamma) = sym_induced_rho();
        let tau = gamma.power(3);
        let h = tate_cohomology(&tau, 0, -6).unwrap();
        assert_eq!(h.invariant_factors(), vec![3, 3, 3]);
        let basis = m.basis_in_degree(-6).unwrap();
        let vector = |s: &str| -> Vec<BigInt> {
            let e = Element::<i64>::parse(&m, s).unwrap();
            basis.iter().map(|b| BigInt::from(e.coefficient(b))).collect()
        };
        let d: Vec<Vec<BigInt>> = ["x0*x3*x6", "x1*x4*x7", "x2*x5*x8"].iter().map(|s| vector(s)).collect();
        let coords: Vec<Vec<BigInt>> = d.iter().map(|x| h.coordinates(x).unwrap()).collect();
        assert_ne!(IntMatrix::from_columns(3, &coords).determinant() % 3, BigInt::zero());
        // The outer generator permutes the three classes cyclically.
        let g = gamma.action_matrix(-6).unwrap();
        let outer = induced_outer_action(&h, &tau.action_matrix(-6).unwrap(), &g).unwrap();
        for i in 0..3 {
            let mapped: Vec<BigInt> = (0..3)
                .map(|r| (0..3).map(|c| &outer[r][c] * &coords[i][c]).sum::<BigInt>().mod_floor(&BigInt::from(3)))
                .collect();
            assert_eq!(mapped, coords[(i + 1) % 3]);
        }
    }

    #[test]
    fn h0_ranks() {
        let (_, gamma) = sym_induced_rho();
        let tau = gamma.power(3);
        assert_eq!(h0(&tau, -6).unwrap().cols(), 20);
        assert_eq!(h0(&tau, 0).unwrap().cols(), 1);
        let rho = CyclicModule::trivial(9, 1);
        assert_eq!(rho.invariants().cols(), 1);
    }

    #[test]
    fn odd_classes_at_minus_two() {
        let (m, gamma) = sym_induced_rho();
        let tau = gamma.power(3);
        let h = tate_cohomology(&tau, 1, -2).unwrap();
        assert_eq!(h.invariant_factors(), vec![3, 3, 3]);
        let h9 = tate_cohomology(&gamma, 1, -2).unwrap();
        assert_eq!(h9.invariant_factors(), vec![3]);
        let f0 = Element::<i64>::parse(&m, "x0 + x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8").unwrap();
        assert!(f0.is_zero());
    }
}
