//! `Ĥ^*(C_3; M)` as a module over the outer group `C_9/C_3`, summand by summand.
//!
//! A degree piece splits along the connected components of the support graph of
//! the outer generator `g`. A component whose three pieces are cycled by `g` has
//! induced, hence free, cohomology of rank `dim Ĥ(C_3; piece)`. The remaining
//! components are fixed by `g`; there the Tate group of `g^3` is computed exactly
//! with representatives, `g` is induced on it, and the result is decomposed over `F_3`.
//!
//! The census is compared with the orbits of monomials of
//! `T = F_3[d1,d2,d3] (x) Λ[c1,c2,c3]` under the cyclic shift of indices.

use serde::Serialize;

use super::blocks::induced_piece;
use super::{
    decompose_c3, induced_outer_action, reduce_mod3, support_blocks, tate_of_module, tate_structure, C3DecompositionCounts,
    CohomologyError, CyclicModule,
};
use crate::gca::{CyclicAction, SparseMatrix};
use crate::rings::{kernel_mod_p, rank_mod_p, ModMatrix};

/// How the fixed components are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedBlockRoute {
    /// Linear algebra over `F_3` on saturations; fast.
    ModThree,
    /// Integer Smith normal form with representatives; slow beyond small degrees.
    Exact,
}

/// Outer decomposition of `Ĥ^parity(C_3; A_t)`, where `action` generates the outer
/// group and its cube generates the inner one.
pub fn outer_decomposition(action: &CyclicAction<i64>, parity: i64, t: i64) -> Result<C3DecompositionCounts, CohomologyError> {
    outer_decomposition_by(action, parity, t, FixedBlockRoute::ModThree)
}

pub fn outer_decomposition_by(
    action: &CyclicAction<i64>,
    parity: i64,
    t: i64,
    route: FixedBlockRoute,
) -> Result<C3DecompositionCounts, CohomologyError> {
    if action.order() != 9 {
        return Err(CohomologyError::BadGroupPair { order: 3, of: action.order() });
    }
    let gamma = action.sparse_matrix(t)?;
    let mut total = C3DecompositionCounts::default();
    for support in support_blocks(&gamma) {
        let block = gamma.restrict(&support);
        if let Some(piece) = induced_piece(&block) {
            let rank = tate_structure(&piece, 3)?.parity(parity).len();
            total = total + C3DecompositionCounts { trivial: 0, two_dimensional: 0, free: rank };
            continue;
        }
        let outer = match route {
            FixedBlockRoute::ModThree => fixed_block_mod_three(&block, parity),
            FixedBlockRoute::Exact => fixed_block_exact(&block, parity, t)?,
        };
        if outer.rows() > 0 {
            total = total + decompose_c3(&outer)?;
        }
    }
    Ok(total)
}

fn fixed_block_exact(block: &SparseMatrix<i64>, parity: i64, t: i64) -> Result<ModMatrix, CohomologyError> {
    let g = block.to_int_matrix();
    let tau = g.pow(3);
    let inner = tate_of_module(&CyclicModule::new(3, tau.clone())?, parity, t)?;
    let outer = reduce_mod3(&induced_outer_action(&inner, &tau, &g)?);
    let mut m = ModMatrix::zeros(outer.len(), outer.len(), 3);
    for (i, row) in outer.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

fn apply(m: &SparseMatrix<i64>, v: &[i64]) -> Vec<i64> {
    let mut out = vec![0; m.rows()];
    for (j, &x) in v.iter().enumerate() {
        if x != 0 {
            for (i, c) in m.column(j) {
                out[*i] += c * x;
            }
        }
    }
    out
}

/// The outer generator on `Ĥ^parity(C_3; W)` for a lattice `W` with generator `g`,
/// with `C_3` generated by `g^3`.
///
/// With `A = N` (even) or `A = 1 - g^3` (odd), the group is `sat(AW)/AW`, and it is
/// killed by 3. So `x` lies in the saturation exactly when `3x ∈ AW`, and modulo 3
/// the saturation is spanned by the image of `A` together with `A y / 3` for lifts
/// `y` of the kernel of `A` over `F_3`.
fn fixed_block_mod_three(g: &SparseMatrix<i64>, parity: i64) -> ModMatrix {
    let n = g.rows();
    let tau = g.compose(g).compose(g);
    let a = |v: &[i64]| -> Vec<i64> {
        let tv = apply(&tau, v);
        if parity.rem_euclid(2) == 0 {
            let ttv = apply(&tau, &tv);
            (0..n).map(|i| v[i] + tv[i] + ttv[i]).collect()
        } else {
            (0..n).map(|i| v[i] - tv[i]).collect()
        }
    };
    let mut a_bar = ModMatrix::zeros(n, n, 3);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        for (i, x) in a(&e).into_iter().enumerate() {
            a_bar.set(i, j, x);
        }
    }
    let boundary_rank = rank_mod_p(&a_bar);
    // Representatives: A y / 3 that are independent modulo the image of A.
    let mut reps: Vec<Vec<i64>> = Vec::new();
    let mut span = a_bar.clone();
    for y in kernel_mod_p(&a_bar) {
        let lifted: Vec<i64> = y.iter().map(|&x| x as i64).collect();
        let v: Vec<i64> = a(&lifted)
            .into_iter()
            .map(|x| {
                debug_assert_eq!(x.rem_euclid(3), 0);
                (x / 3).rem_euclid(3)
            })
            .collect();
        let candidate = append_column(&span, &v);
        if rank_mod_p(&candidate) > boundary_rank + reps.len() {
            span = candidate;
            reps.push(v);
        }
    }
    // Coordinates of g r_i modulo the image of A, in the basis r_1, ..., r_k.
    let k = reps.len();
    let mut outer = ModMatrix::zeros(k, k, 3);
    for (j, r) in reps.iter().enumerate() {
        let image: Vec<i64> = apply(g, r).into_iter().map(|x| (-x).rem_euclid(3)).collect();
        let system = append_column(&span, &image);
        let solution = kernel_mod_p(&system).into_iter().find(|z| z[n + k] != 0).expect("g preserves the saturation");
        let scale = if solution[n + k] == 1 { 1 } else { 2 };
        for i in 0..k {
            outer.set(i, j, solution[n + i] as i64 * scale);
        }
    }
    outer
}

fn append_column(m: &ModMatrix, v: &[i64]) -> ModMatrix {
    let mut out = ModMatrix::zeros(m.rows(), m.cols() + 1, 3);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j) as i64);
        }
        out.set(i, m.cols(), v[i]);
    }
    out
}

/// Orbits of the monomials `c_S d1^e1 d2^e2 d3^e3` with `|S|` of the given parity and
/// internal degree `t`, where `|c_i| = -2` and `|d_i| = -6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    /// The monomials fixed by the shift, named as products of `cbar` and `s3`.
    pub fixed: Vec<String>,
    pub free_orbits: usize,
}

impl OrbitCensus {
    pub fn counts(&self) -> C3DecompositionCounts {
        C3DecompositionCounts { trivial: self.fixed.len(), two_dimensional: 0, free: self.free_orbits }
    }
}

pub fn orbit_census(parity: i64, t: i64) -> OrbitCensus {
    let mut fixed = Vec::new();
    let mut moved = 0;
    for subset in 0u8..8 {
        let size = subset.count_ones() as i64;
        if (size - parity).rem_euclid(2) != 0 {
            continue;
        }
        let rest = -t - 2 * size;
        if rest < 0 || rest % 6 != 0 {
            continue;
        }
        let total = rest / 6;
        let shift_fixes_subset = subset == 0 || subset == 7;
        for e1 in 0..=total {
            for e2 in 0..=total - e1 {
                let e3 = total - e1 - e2;
                if shift_fixes_subset && e1 == e2 && e2 == e3 {
                    let mut name = Vec::new();
                    if subset == 7 {
                        name.push("cbar".to_string());
                    }
                    match e1 {
                        0 => {}
                        1 => name.push("s3".into()),
                        i => name.push(format!("s3^{i}")),
                    }
                    fixed.push(if name.is_empty() { "1".into() } else { name.join("*") });
                } else {
                    moved += 1;
                }
            }
        }
    }
    debug_assert_eq!(moved % 3, 0);
    OrbitCensus { fixed, free_orbits: moved / 3 }
}

/// One `(parity, t)` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub parity: i64,
    pub t: i64,
    pub computed: C3DecompositionCounts,
    pub enumerated: OrbitCensus,
}

impl CensusRow {
    pub fn agrees(&self) -> bool {
        self.computed == self.enumerated.counts()
    }
}

/// The census for every even `t` in `t_min..=t_max` and both parities.
pub fn census(action: &CyclicAction<i64>, t_min: i64, t_max: i64) -> Result<Vec<CensusRow>, CohomologyError> {
    let mut rows = Vec::new();
    for t in (t_min..=t_max).rev().filter(|t| t % 2 == 0) {
        for parity in 0..2 {
            rows.push(CensusRow { parity, t, computed: outer_decomposition(action, parity, t)?, enumerated: orbit_census(parity, t) });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::sym_induced_rho;

    #[test]
    fn enumeration_in_low_degrees() {
        assert_eq!(orbit_census(0, 0), OrbitCensus { fixed: vec!["1".into()], free_orbits: 0 });
        // c1, c2, c3 form one orbit.
        assert_eq!(orbit_census(1, -2), OrbitCensus { fixed: vec![], free_orbits: 1 });
        // d1, d2, d3 at t = -6 in even parity; cbar in odd parity.
        assert_eq!(orbit_census(0, -6).free_orbits, 1);
        assert_eq!(orbit_census(1, -6).fixed, vec!["cbar".to_string()]);
        assert_eq!(orbit_census(0, -18).fixed, vec!["s3".to_string()]);
        assert_eq!(orbit_census(1, -24).fixed, vec!["cbar*s3".to_string()]);
    }

    #[test]
    fn outer_action_at_minus_six() {
        let (_, gamma) = sym_induced_rho();
        // Ĥ^0(C_3; M)_{-6} is spanned by d1, d2, d3, permuted cyclically: one free summand.
        let even = outer_decomposition(&gamma, 0, -6).unwrap();
        assert_eq!(even, C3DecompositionCounts { trivial: 0, two_dimensional: 0, free: 1 });
        let odd = outer_decomposition(&gamma, 1, -6).unwrap();
        assert_eq!(odd, C3DecompositionCounts { trivial: 1, two_dimensional: 0, free: 0 });
    }

    #[test]
    fn fixed_block_routes_agree() {
        let (_, gamma) = sym_induced_rho();
        for t in (-12..=0).step_by(2) {
            for parity in 0..2 {
                let fast = outer_decomposition_by(&gamma, parity, t, FixedBlockRoute::ModThree).unwrap();
                let exact = outer_decomposition_by(&gamma, parity, t, FixedBlockRoute::Exact).unwrap();
                assert_eq!(fast, exact, "t={t} parity={parity}");
            }
        }
    }

    #[test]
    fn census_on_a_small_window() {
        let (_, gamma) = sym_induced_rho();
        for row in census(&gamma, -18, 0).unwrap() {
            assert!(row.agrees(), "{row:?}");
        }
    }
}
