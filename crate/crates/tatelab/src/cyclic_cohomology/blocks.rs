//! Invariant factors of Tate cohomology without representatives, for large degree pieces.
//!
//! A piece splits into the connected components of the support graph of the
//! generator. When a component is itself the sum of three pieces that `g^3`
//! preserves and `g` permutes cyclically, it is induced from the subgroup
//! generated by `g^3`, and Shapiro's lemma replaces it by one of the three pieces
//! with the smaller group. The remaining components are eliminated densely over
//! `Z/3^K`, which is exact once the ranks of `N` and `1 - g` found below `3^K`
//! add up to the dimension.

use serde::{Deserialize, Serialize};

use super::CohomologyError;
use crate::gca::{CyclicAction, SparseMatrix};
use crate::rings::{local_profile, ModMatrix};

/// Exponents of the cyclic summands of `Ĥ^even` and `Ĥ^odd`, in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateStructure {
    pub even: Vec<u32>,
    pub odd: Vec<u32>,
}

impl TateStructure {
    pub fn parity(&self, n: i64) -> &[u32] {
        if super::is_even(n) {
            &self.even
        } else {
            &self.odd
        }
    }

    /// Invariant factors `3^e` in ascending order.
    pub fn invariant_factors(&self, n: i64) -> Vec<u64> {
        let mut f: Vec<u64> = self.parity(n).iter().map(|&e| 3u64.pow(e)).collect();
        f.sort_unstable();
        f
    }

    fn extend(&mut self, other: TateStructure) {
        self.even.extend(other.even);
        self.odd.extend(other.odd);
    }

    fn normalize(&mut self) {
        self.even.sort_unstable_by(|a, b| b.cmp(a));
        self.odd.sort_unstable_by(|a, b| b.cmp(a));
    }
}

/// Connected components of the support graph, each sorted ascending; components are
/// ordered by their smallest index.
pub fn support_blocks<R: crate::gca::Coeff>(m: &SparseMatrix<R>) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..m.cols() {
        for (i, _) in m.column(j) {
            let (a, b) = (find(&mut parent, *i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    groups.into_values().collect()
}

/// Invariant factors of `Ĥ^*(C_order; Z^r)` for the generator `gamma`.
pub fn tate_structure(gamma: &SparseMatrix<i64>, order: usize) -> Result<TateStructure, CohomologyError> {
    let mut out = TateStructure::default();
    for support in support_blocks(gamma) {
        out.extend(block_structure(&gamma.restrict(&support), order)?);
    }
    out.normalize();
    Ok(out)
}

/// [`tate_structure`] for the degree-`t` piece of an algebra.
pub fn tate_structure_in_degree(action: &CyclicAction<i64>, t: i64) -> Result<TateStructure, CohomologyError> {
    tate_structure(&action.sparse_matrix(t)?, action.order())
}

fn block_structure(gamma: &SparseMatrix<i64>, order: usize) -> Result<TateStructure, CohomologyError> {
    if order == 1 {
        return Ok(TateStructure::default());
    }
    if order % 3 == 0 {
        if let Some(tau) = induced_piece(gamma) {
            return tate_structure(&tau, order / 3);
        }
    }
    dense_structure(gamma, order)
}

/// If `gamma^3` splits the block into three pieces that `gamma` permutes cyclically,
/// return `gamma^3` on the first piece.
pub(super) fn induced_piece(gamma: &SparseMatrix<i64>) -> Option<SparseMatrix<i64>> {
    // A generator permuting pieces cyclically fixes no basis vector's piece.
    if (0..gamma.cols()).any(|j| gamma.column(j).iter().any(|(i, _)| *i == j)) {
        return None;
    }
    let cube = gamma.compose(gamma).compose(gamma);
    let pieces = support_blocks(&cube);
    if pieces.len() != 3 {
        return None;
    }
    let mut label = vec![0usize; gamma.rows()];
    for (k, p) in pieces.iter().enumerate() {
        for &i in p {
            label[i] = k;
        }
    }
    let mut target = [usize::MAX; 3];
    for j in 0..gamma.cols() {
        for (i, _) in gamma.column(j) {
            let (from, to) = (label[j], label[*i]);
            if target[from] == usize::MAX {
                target[from] = to;
            } else if target[from] != to {
                return None;
            }
        }
    }
    let cyclic = target.iter().all(|&t| t < 3) && target[0] != 0 && target[target[0]] != 0 && target[target[target[0]]] == 0;
    cyclic.then(|| cube.restrict(&pieces[0]))
}

fn three_adic_valuation(mut n: usize) -> u32 {
    let mut v = 0;
    while n % 3 == 0 {
        n /= 3;
        v += 1;
    }
    v
}

fn dense_structure(gamma: &SparseMatrix<i64>, order: usize) -> Result<TateStructure, CohomologyError> {
    let dim = gamma.rows();
    let levels = three_adic_valuation(order) + 1;
    let modulus = 3u16.pow(levels);
    let q = modulus as i64;
    let mut one_minus = ModMatrix::zeros(dim, dim, modulus);
    let mut norm = ModMatrix::zeros(dim, dim, modulus);
    for j in 0..dim {
        one_minus.add_to(j, j, 1);
        for (i, v) in gamma.column(j) {
            one_minus.add_to(*i, j, -v);
        }
        // N e_j = sum of g^k e_j, by repeated sparse application.
        let mut v = vec![0i64; dim];
        v[j] = 1;
        let mut acc = v.clone();
        for _ in 1..order {
            let mut next = vec![0i64; dim];
            for (k, &x) in v.iter().enumerate() {
                if x != 0 {
                    for (i, c) in gamma.column(k) {
                        next[*i] = (next[*i] + c * x).rem_euclid(q);
                    }
                }
            }
            for (a, b) in acc.iter_mut().zip(&next) {
                *a = (*a + b) % q;
            }
            v = next;
        }
        for (i, x) in acc.into_iter().enumerate() {
            if x != 0 {
                norm.set(i, j, x);
            }
        }
    }
    let pn = local_profile(norm, 3);
    let pd = local_profile(one_minus, 3);
    if pn.rank() + pd.rank() != dim {
        return Err(CohomologyError::PrecisionExhausted { dim, found: pn.rank() + pd.rank() });
    }
    Ok(TateStructure { even: pn.torsion_exponents(), odd: pd.torsion_exponents() })
}

#[cfg(test)]
mod tests {
    use super::super::{tate_cohomology, tate_of_module, CyclicModule};
    use super::*;
    use crate::gca::sym_induced_rho;
    use crate::rings::IntMatrix;

    fn sparse(m: &IntMatrix) -> SparseMatrix<i64> {
        let cols = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| m[(i, j)] != 0.into())
                    .map(|i| (i, i64::try_from(&m[(i, j)]).unwrap()))
                    .collect()
            })
            .collect();
        SparseMatrix::new(m.rows(), cols)
    }

    #[test]
    fn trivial_and_regular() {
        let s = tate_structure(&sparse(&IntMatrix::identity(1)), 9).unwrap();
        assert_eq!(s, TateStructure { even: vec![2], odd: vec![] });
        let reg = CyclicModule::regular(9);
        assert_eq!(tate_structure(&sparse(reg.gamma()), 9).unwrap(), TateStructure::default());
        let reg3 = CyclicModule::regular(3);
        assert_eq!(tate_structure(&sparse(reg3.gamma()), 3).unwrap(), TateStructure::default());
    }

    #[test]
    fn induced_from_trivial_subgroup_module() {
        // Z[C9] (x)_{C3} Z = Z[C9/C3] with g permuting three basis vectors: Shapiro gives Ĥ(C3; Z).
        let mut g = IntMatrix::zeros(3, 3);
        for i in 0..3 {
            g[((i + 1) % 3, i)] = 1.into();
        }
        let s = tate_structure(&sparse(&g), 9).unwrap();
        assert_eq!(s, TateStructure { even: vec![1], odd: vec![] });
        let direct = tate_of_module(&CyclicModule::new(9, g).unwrap(), 0, 0).unwrap();
        assert_eq!(direct.invariant_factors(), vec![3]);
    }

    #[test]
    fn blocks_of_m_follow_the_three_rank_two_summands() {
        let (_, gamma) = sym_induced_rho();
        let tau = gamma.power(3).sparse_matrix(-4).unwrap();
        let sizes: Vec<usize> = support_blocks(&tau).iter().map(Vec::len).collect();
        // Sym^2 of three rank-2 summands: (2,0,0)-type pieces have dim 3, (1,1,0)-type dim 4.
        assert_eq!(sizes.iter().sum::<usize>(), 21);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 3);
    }

    #[test]
    fn fast_route_matches_exact_route_on_m() {
        let (_, gamma) = sym_induced_rho();
        let tau = gamma.power(3);
        for t in (-12..=0).step_by(2) {
            for action in [&gamma, &tau] {
                let fast = tate_structure_in_degree(action, t).unwrap();
                for n in 0..2 {
                    let exact = tate_cohomology(action, n, t).unwrap();
                    assert_eq!(fast.invariant_factors(n), exact.invariant_factors(), "t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn shapiro_matches_full_block() {
        // The same C9 blocks, once through Shapiro and once densely.
        let (_, gamma) = sym_induced_rho();
        let g = gamma.sparse_matrix(-8).unwrap();
        for support in support_blocks(&g) {
            let block = g.restrict(&support);
            let mut via_shapiro = block_structure(&block, 9).unwrap();
            let mut dense = dense_structure(&block, 9).unwrap();
            via_shapiro.normalize();
            dense.normalize();
            assert_eq!(via_shapiro, dense);
        }
    }
}
