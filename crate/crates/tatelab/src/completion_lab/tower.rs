//! The tower `A/I^k` for `A = Z[x,y]` with `γ(x) = y`, `γ(y) = -x-y`, and the
//! images `B_k` of the Tate cohomology of later stages in stage `k`.
//!
//! Each stage in internal degree `t` is the lattice `A_t` modulo `L_k = I^k ∩ A_t`,
//! and the transition maps are induced by the identity of `A_t`. For `A` one of
//! `1 - γ` and the trace `N`, with `D` the other one,
//! `Ĥ(A_t / L_k) = K_k / (D A_t + L_k)` with `K_k = {v : A v ∈ L_k}`, so the image
//! of stage `k + j` in stage `k` is `(K_{k+j} + D A_t + L_k) / (D A_t + L_k)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::lattice::{Ideal, Lattice};
use crate::cyclic_cohomology::element_vector;
use crate::gca::{Algebra, AlgebraPresentation, CyclicAction, Element, Generator};
use crate::rings::IntMatrix;

/// The two ideals of `Z[x,y]` whose towers are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealCase {
    /// `(3, x, y)`.
    Maximal,
    /// `(3, y - x)`.
    Diagonal,
}

impl IdealCase {
    pub fn name(self) -> &'static str {
        match self {
            IdealCase::Maximal => "(3,x,y)",
            IdealCase::Diagonal => "(3,y-x)",
        }
    }
}

/// Degree-`t` piece of stage `k`: the relation lattice `I^k ∩ A_t` inside `Z^dim`.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub k: u32,
    pub t: i64,
    pub relations: Lattice,
}

impl TowerStage {
    pub fn dimension(&self) -> usize {
        self.relations.ambient()
    }

    /// Whether the identity of `A_t` induces a map from `next` to this stage.
    pub fn receives(&self, next: &TowerStage) -> bool {
        next.t == self.t && self.relations.contains(&next.relations)
    }
}

/// The image of the Tate cohomology of stages `k + j` in stage `k`, for `j` up to the lookahead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizedImage {
    pub case: IdealCase,
    pub k: u32,
    pub t: i64,
    /// `0` for even, `1` for odd.
    pub parity: u8,
    /// Exponents of the cyclic summands of the image after `j` transition maps, for each `j`.
    pub images: Vec<Vec<u32>>,
    /// Smallest `j` from which the image no longer changes within the lookahead, if it
    /// changes no more after its last step.
    pub stabilized_at: Option<usize>,
}

impl StabilizedImage {
    /// The stabilized image, or the last computed one.
    pub fn exponents(&self) -> &[u32] {
        self.images.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// `log_3` of the order of the image after `j` maps.
    pub fn log_orders(&self) -> Vec<u32> {
        self.images.iter().map(|e| e.iter().sum()).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.log_orders().windows(2).all(|w| w[1] <= w[0])
    }
}

/// `Z[x,y]` with `|x| = |y| = -2` and its order-3 action, together with one of the ideals.
pub struct TowerModel {
    pub case: IdealCase,
    alg: Algebra,
    action: CyclicAction<i64>,
    ideal: Ideal,
    relations: BTreeMap<(u32, i64), Lattice>,
}

impl TowerModel {
    pub fn new(case: IdealCase) -> Self {
        let alg = AlgebraPresentation::new(0, vec![Generator::even("x", -2), Generator::even("y", -2)], vec![])
            .expect("valid presentation");
        let action = CyclicAction::from_text(&alg, 3, &["y", "-x - y"]).expect("valid action");
        let texts: &[&str] = match case {
            IdealCase::Maximal => &["3", "x", "y"],
            IdealCase::Diagonal => &["3", "y - x"],
        };
        let gens = texts.iter().map(|s| Element::parse(&alg, s).expect("valid generator")).collect();
        let ideal = Ideal::new(&alg, gens);
        TowerModel { case, alg, action, ideal, relations: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn action(&self) -> &CyclicAction<i64> {
        &self.action
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn stage(&mut self, k: u32, t: i64) -> TowerStage {
        TowerStage { k, t, relations: self.relations(k, t).clone() }
    }

    fn relations(&mut self, k: u32, t: i64) -> &Lattice {
        let ideal = &self.ideal;
        self.relations.entry((k, t)).or_insert_with(|| ideal.power_piece(k, t))
    }

    fn operators(&self, t: i64) -> (IntMatrix, IntMatrix) {
        let g = self.action.action_matrix(t).expect("finite degree piece");
        let n = g.rows();
        let one = IntMatrix::identity(n);
        let g2 = &g * &g;
        (one.sub(&g), one.add(&g).add(&g2))
    }

    /// `(A, D)`: the cocycle condition operator and the coboundary operator for a parity.
    fn cocycle_and_boundary(&self, t: i64, parity: u8) -> (IntMatrix, IntMatrix) {
        let (one_minus, norm) = self.operators(t);
        if parity == 0 {
            (one_minus, norm)
        } else {
            (norm, one_minus)
        }
    }

    /// Exponents of `Ĥ^parity(C_3; A_t / (I^k ∩ A_t))`.
    pub fn stage_cohomology(&mut self, k: u32, t: i64, parity: u8) -> Vec<u32> {
        let (a, d) = self.cocycle_and_boundary(t, parity);
        let l = self.relations(k, t).clone();
        let boundaries = Lattice::full(a.cols()).image(&d).sum(&l);
        l.preimage(&a).quotient_exponents(&boundaries)
    }

    /// The images of stages `k, k+1, …, k+lookahead` in stage `k`.
    pub fn stabilized_image(&mut self, k: u32, t: i64, parity: u8, lookahead: usize) -> StabilizedImage {
        let (a, d) = self.cocycle_and_boundary(t, parity);
        let lk = self.relations(k, t).clone();
        let boundaries = Lattice::full(a.cols()).image(&d).sum(&lk);
        let images: Vec<Vec<u32>> = (0..=lookahead)
            .map(|j| {
                let cocycles = self.relations(k + j as u32, t).preimage(&a);
                cocycles.sum(&boundaries).quotient_exponents(&boundaries)
            })
            .collect();
        let last = images.len() - 1;
        let first_stable = (0..=last).rev().take_while(|&j| images[j] == images[last]).last().unwrap_or(last);
        let stabilized_at = (first_stable < last).then_some(first_stable);
        StabilizedImage { case: self.case, k, t, parity, images, stabilized_at }
    }

    /// Whether `x` is a cocycle of stage `k` whose class is nonzero and lifts to stage `k + lookahead`.
    pub fn class_survives(&mut self, k: u32, t: i64, parity: u8, lookahead: usize, x: &Element<i64>) -> ClassStatus {
        let v: Vec<BigInt> = element_vector(&self.alg, t, x);
        let (a, d) = self.cocycle_and_boundary(t, parity);
        let lk = self.relations(k, t).clone();
        let boundaries = Lattice::full(a.cols()).image(&d).sum(&lk);
        let lifted = self.relations(k + lookahead as u32, t).preimage(&a).sum(&boundaries);
        ClassStatus {
            cocycle: lk.preimage(&a).contains_vector(&v),
            nonzero: !boundaries.contains_vector(&v),
            in_image: lifted.contains_vector(&v),
        }
    }

    /// Stabilized images for both parities and every even `t` in the window.
    pub fn window(&mut self, k: u32, t_min: i64, t_max: i64, lookahead: usize) -> Vec<StabilizedImage> {
        let mut out = Vec::new();
        for t in (t_min..=t_max).filter(|t| t % 2 == 0) {
            for parity in 0..2 {
                out.push(self.stabilized_image(k, t, parity, lookahead));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassStatus {
    pub cocycle: bool,
    pub nonzero: bool,
    pub in_image: bool,
}

/// The expected image: `Ĥ^*(C_3; Z)[δ, ε]/(ε^2)` with `|δ| = -6`, `|ε| = -2` in odd
/// parity, truncated to `δ^i` with `3i < k` and `εδ^i` with `3i + 1 < k` for `(3,x,y)`.
pub fn closed_form_image(case: IdealCase, k: u32, t: i64, parity: u8) -> Vec<u32> {
    if t > 0 || t % 2 != 0 {
        return vec![];
    }
    let m = (-t / 2) as u32;
    let class_here = (parity == 0 && m % 3 == 0) || (parity == 1 && m % 3 == 1);
    let below_stage = match case {
        IdealCase::Maximal => m < k,
        IdealCase::Diagonal => true,
    };
    if class_here && below_stage {
        vec![1]
    } else {
        vec![]
    }
}

/// `I^{nk} ⊆ J_k ⊆ I^k` in degree `t` for `Z[x,y] = Z[x] (x) Z[y]` with `I_1 = (3,x)`,
/// `I_2 = (3,y)`, `J_k = I_1^k + I_2^k` and `I = I_1 + I_2`, here with `n = 2`.
pub fn tower_sandwich(k: u32, t: i64) -> (bool, bool) {
    let model = TowerModel::new(IdealCase::Maximal);
    let alg = model.algebra();
    let ideal = |texts: &[&str]| Ideal::new(alg, texts.iter().map(|s| Element::parse(alg, s).unwrap()).collect());
    let (i1, i2) = (ideal(&["3", "x"]), ideal(&["3", "y"]));
    let i = i1.plus(&i2);
    let j = Ideal::sum_of_powers_piece(&[i1, i2], k, t);
    (j.contains(&i.power_piece(2 * k, t)), i.power_piece(k, t).contains(&j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn maximal_ideal_stage_is_a_scalar_multiple() {
        // I^k ∩ A_m = 3^{k-m} A_m for m < k.
        let mut model = TowerModel::new(IdealCase::Maximal);
        let stage = model.stage(5, -4);
        assert_eq!(stage.dimension(), 3);
        let expected = Lattice::from_columns(3, &IntMatrix::diagonal(&[27, 27, 27]).columns());
        assert_eq!(stage.relations, expected);
        assert!(model.stage(6, -4).relations == Lattice::from_columns(3, &IntMatrix::diagonal(&[81, 81, 81]).columns()));
    }

    #[test]
    fn stages_map_down() {
        for case in [IdealCase::Maximal, IdealCase::Diagonal] {
            let mut model = TowerModel::new(case);
            for t in [-2, -6, -8] {
                for k in 1..6 {
                    let (s, next) = (model.stage(k, t), model.stage(k + 1, t));
                    assert!(s.receives(&next), "{case:?} k={k} t={t}");
                }
            }
        }
    }

    #[test]
    fn trivial_piece_loses_its_odd_class() {
        // Stage k in degree 0 is Z/3^k with trivial action: Ĥ^odd = Z/3, but no class lifts.
        let mut model = TowerModel::new(IdealCase::Maximal);
        assert_eq!(model.stage_cohomology(3, 0, 1), vec![1]);
        let s = model.stabilized_image(3, 0, 1, 4);
        assert_eq!(s.images[0], vec![1]);
        assert!(s.exponents().is_empty());
        assert_eq!(s.stabilized_at, Some(1));
        assert_eq!(model.stabilized_image(3, 0, 0, 4).exponents(), &[1]);
    }

    #[test]
    fn maximal_case_truncates() {
        for k in [3, 6] {
            let mut model = TowerModel::new(IdealCase::Maximal);
            for s in model.window(k, -14, 0, 4) {
                assert!(s.is_monotone());
                assert!(s.stabilized_at.is_some());
                assert_eq!(s.exponents(), closed_form_image(IdealCase::Maximal, k, s.t, s.parity), "k={k} {s:?}");
            }
        }
    }

    #[test]
    fn diagonal_case_keeps_every_class() {
        let mut model = TowerModel::new(IdealCase::Diagonal);
        for s in model.window(2, -14, 0, 4) {
            assert_eq!(s.exponents(), closed_form_image(IdealCase::Diagonal, 2, s.t, s.parity), "{s:?}");
        }
    }

    #[test]
    fn diagonal_odd_class_is_x_delta_power() {
        let mut model = TowerModel::new(IdealCase::Diagonal);
        let alg = model.algebra().clone();
        let delta = Element::parse(&alg, "x^2*y + x*y^2").unwrap();
        for i in 0..3u32 {
            let x = &Element::parse(&alg, "x").unwrap() * &delta.pow(i);
            let t = -2 - 6 * i as i64;
            let status = model.class_survives(3, t, 1, 4, &x);
            assert_eq!(status, ClassStatus { cocycle: true, nonzero: true, in_image: true }, "i={i}");
            // The even class of the stage does not lift.
            assert!(!model.stage_cohomology(3, t, 0).is_empty());
            assert!(model.stabilized_image(3, t, 0, 4).exponents().is_empty());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn images_shrink_stabilize_and_match(diagonal in any::<bool>(), k in 2u32..8, m in 0i64..8, parity in 0u8..2) {
            let case = if diagonal { IdealCase::Diagonal } else { IdealCase::Maximal };
            let mut model = TowerModel::new(case);
            let s = model.stabilized_image(k, -2 * m, parity, 4);
            prop_assert!(s.is_monotone());
            prop_assert!(s.stabilized_at.is_some());
            let expected = closed_form_image(case, k, -2 * m, parity);
            prop_assert_eq!(s.exponents(), expected.as_slice());
        }
    }

    #[test]
    fn sandwich_of_ideal_systems() {
        for k in 1..=3 {
            for t in [0, -2, -4, -6, -8] {
                assert_eq!(tower_sandwich(k, t), (true, true), "k={k} t={t}");
            }
        }
    }
}
