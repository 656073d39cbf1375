//! Finite-stage checks of the completion argument for `M = Sym(Ind_{C3}^{C9} ρ̄)`.
//!
//! The completed and localized modules are never built. What is checked is
//! everything that lives at a finite stage: the coordinates `x, z1, …, z5` adapted to
//! the ideal `I`, the towers `Z[x,y]/I^k` and the images of their Tate cohomology,
//! the filtration-compatible basis of `F_3[d1,d2,d3] (x) Λ[c1,c2,c3]`, and the
//! identities `δ1 = d1 - d2`, `δ3 = d1 - d3` in `Ĥ^0(C_3; M)`.

mod lattice;
mod tower;
mod w_basis;

pub use lattice::{Ideal, Lattice};
pub use tower::{closed_form_image, tower_sandwich, ClassStatus, IdealCase, StabilizedImage, TowerModel, TowerStage};
pub use w_basis::{rank_f3, w_basis_check, DisplayedTriple, GeneratorOrder, WBasisDegree, WModel};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclic_cohomology::element_vector;
use crate::gca::{sym_induced_rho, Algebra, CyclicAction, Element};
use crate::report::Check;
use crate::rings::IntMatrix;

/// Settings for the completion checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompletionWindow {
    pub t_min: i64,
    pub t_max: i64,
    pub lookahead: usize,
    pub maximal_stages: Vec<u32>,
    pub diagonal_stages: Vec<u32>,
    pub w_degree_max: u32,
    /// Internal degrees in which the two descriptions of `I` are compared.
    pub ideal_degrees: Vec<i64>,
}

impl Default for CompletionWindow {
    fn default() -> Self {
        CompletionWindow {
            t_min: -18,
            t_max: 0,
            lookahead: 6,
            maximal_stages: vec![3, 6, 9],
            diagonal_stages: vec![2, 3],
            w_degree_max: 9,
            ideal_degrees: vec![0, -2, -4],
        }
    }
}

/// `M` with the coordinates `x = x0`, `z1 = x1 - x0`, `z2 = x4 - x3`, `z3 = x3 - x0`,
/// `z4 = x2 - x0`, `z5 = x5 - x3`.
pub struct Coordinates {
    pub alg: Algebra,
    pub action: CyclicAction<i64>,
}

impl Default for Coordinates {
    fn default() -> Self {
        Self::new()
    }
}

impl Coordinates {
    pub fn new() -> Self {
        let (alg, action) = sym_induced_rho();
        Coordinates { alg, action }
    }

    /// Parse a polynomial in `x0..x8` and the new coordinates `x, z1..z5`, with
    /// parentheses and implicit multiplication.
    pub fn parse(&self, src: &str) -> Element<i64> {
        let mut p = CoordinateParser { c: self, src: src.as_bytes(), pos: 0 };
        let e = p.expr();
        p.skip_ws();
        assert_eq!(p.pos, p.src.len(), "trailing input in {src:?}");
        e
    }

    /// Product of the parsed factors.
    pub fn product(&self, factors: &[&str]) -> Element<i64> {
        factors.iter().fold(Element::one(&self.alg), |acc, f| &acc * &self.parse(f))
    }

    fn variable(&self, name: &str) -> Element<i64> {
        let g = |n: &str| Element::generator(&self.alg, n).expect("generator of M");
        match name {
            "x" => g("x0"),
            "z1" => &g("x1") - &g("x0"),
            "z2" => &g("x4") - &g("x3"),
            "z3" => &g("x3") - &g("x0"),
            "z4" => &g("x2") - &g("x0"),
            "z5" => &g("x5") - &g("x3"),
            other => g(other),
        }
    }

    pub fn tau(&self) -> CyclicAction<i64> {
        self.action.power(3)
    }
}

struct CoordinateParser<'a> {
    c: &'a Coordinates,
    src: &'a [u8],
    pos: usize,
}

impl CoordinateParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Element<i64> {
        let mut total = Element::zero(&self.c.alg);
        let mut sign = 1;
        loop {
            match self.peek() {
                Some(b'-') => {
                    sign = -sign;
                    self.pos += 1;
                    continue;
                }
                Some(b'+') => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            let term = self.term();
            total = if sign > 0 { total + term } else { total - term };
            sign = 1;
            match self.peek() {
                Some(b'+') | Some(b'-') => {}
                _ => return total,
            }
        }
    }

    fn term(&mut self) -> Element<i64> {
        let mut acc = self.factor();
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor();
                }
                Some(ch) if ch == b'(' || ch.is_ascii_alphanumeric() => acc = &acc * &self.factor(),
                _ => return acc,
            }
        }
    }

    fn number(&mut self) -> u32 {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().expect("integer literal")
    }

    fn factor(&mut self) -> Element<i64> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr();
                assert_eq!(self.peek(), Some(b')'), "unbalanced parentheses");
                self.pos += 1;
                e
            }
            Some(ch) if ch.is_ascii_digit() => Element::constant(&self.c.alg, self.number() as i64),
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.c.variable(name)
            }
            other => panic!("unexpected {:?} at offset {}", other.map(char::from), self.pos),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number();
            return base.pow(e);
        }
        base
    }
}

/// Outcome of the coordinate-change checks.
#[derive(Clone, Debug, Serialize)]
pub struct CoordinateChangeReport {
    /// `x6 + 2x + z3`, `x7 + 2x + z1 + z2 + z3`, `x8 + 2x + z3 + z4 + z5`, all expected zero.
    pub derived_expressions_vanish: [bool; 3],
    /// `Δ` minus the product of the nine displayed factors is zero.
    pub delta_formula: bool,
    /// `τ = γ^3` acts on `{z1,z2}`, `{x,x+z3}`, `{z4,z5}` by `(a, b) -> (b, -a-b)`.
    pub splitting: bool,
    /// `(degree, dim M_t, rank of each ideal piece, equal)` for the two presentations of `I`.
    pub ideal_pieces: Vec<(i64, usize, usize, bool)>,
}

impl CoordinateChangeReport {
    pub fn passed(&self) -> bool {
        self.derived_expressions_vanish.iter().all(|&b| b)
            && self.delta_formula
            && self.splitting
            && self.ideal_pieces.iter().all(|r| r.3)
    }
}

/// The two presentations of `I` on `M`: `(3, x_i - x_{i+1})` and `(3, z1, …, z5)`.
pub fn ideal_presentations(c: &Coordinates) -> (Ideal, Ideal) {
    let mut diffs = vec![c.parse("3")];
    diffs.extend((0..8).map(|i| c.parse(&format!("x{i} - x{}", i + 1))));
    let mut zs = vec![c.parse("3")];
    zs.extend((1..=5).map(|i| c.parse(&format!("z{i}"))));
    (Ideal::new(&c.alg, diffs), Ideal::new(&c.alg, zs))
}

pub fn coordinate_change_check(ideal_degrees: &[i64]) -> CoordinateChangeReport {
    let c = Coordinates::new();
    let derived_expressions_vanish = [
        c.parse("x6 + 2x + z3").is_zero(),
        c.parse("x7 + 2x + z1 + z2 + z3").is_zero(),
        c.parse("x8 + 2x + z3 + z4 + z5").is_zero(),
    ];
    let delta = c.product(&["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"]);
    let displayed = c.product(&[
        "x",
        "x + z1",
        "x + z4",
        "x + z3",
        "x + z2 + z3",
        "x + z3 + z5",
        "-2x - z3",
        "-2x - z1 - z2 - z3",
        "-2x - z3 - z4 - z5",
    ]);
    let tau = c.tau();
    let pairs = [("z1", "z2"), ("x", "x + z3"), ("z4", "z5")];
    let splitting = pairs.iter().all(|(a, b)| {
        let (a, b) = (c.parse(a), c.parse(b));
        tau.apply(&a) == b && tau.apply(&b) == -(&a + &b)
    });
    let (diffs, zs) = ideal_presentations(&c);
    let ideal_pieces = ideal_degrees
        .iter()
        .map(|&t| {
            let (l1, l2) = (diffs.power_piece(1, t), zs.power_piece(1, t));
            (t, l1.ambient(), l1.rank(), l1 == l2)
        })
        .collect();
    CoordinateChangeReport {
        derived_expressions_vanish,
        delta_formula: (&delta - &displayed).is_zero(),
        splitting,
        ideal_pieces,
    }
}

/// Outcome of the `Ĥ^0` identities in degree `-6`.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    /// For `(δ1, d1 - d2)` and `(δ3, d1 - d3)`: both sides are `τ`-invariant.
    pub invariant: [bool; 2],
    /// The difference lies in the image of the trace `1 + τ + τ²`.
    pub difference_is_a_trace: [bool; 2],
    /// The difference is nonzero in `M`, so the identity fails in `H^0`.
    pub difference_nonzero: [bool; 2],
    /// `x (x + z3)(2x + z3) + d1 = 0`.
    pub delta2_is_minus_d1: bool,
}

impl DeltaReport {
    pub fn passed(&self) -> bool {
        self.invariant.iter().chain(&self.difference_is_a_trace).chain(&self.difference_nonzero).all(|&b| b)
            && self.delta2_is_minus_d1
    }
}

/// `(δ1 - (d1 - d2), δ3 - (d1 - d3))` as elements of `M_{-6}`, with the four invariant classes.
pub fn delta_differences(c: &Coordinates) -> [(Element<i64>, Element<i64>); 2] {
    let delta1 = c.product(&["z1", "z2", "z1 + z2"]);
    let delta3 = c.product(&["z4", "z5", "z4 + z5"]);
    let d1 = c.product(&["x0", "x3", "x6"]);
    let d2 = c.product(&["x1", "x4", "x7"]);
    let d3 = c.product(&["x2", "x5", "x8"]);
    [(delta1, &d1 - &d2), (delta3, &d1 - &d3)]
}

pub fn delta_cohomologous_check() -> DeltaReport {
    let c = Coordinates::new();
    let tau = c.tau();
    let t = -6;
    let g = tau.action_matrix(t).expect("finite degree piece");
    let n = g.rows();
    let trace = IntMatrix::identity(n).add(&g).add(&(&g * &g));
    let traces = Lattice::full(n).image(&trace);
    let mut report = DeltaReport {
        invariant: [false; 2],
        difference_is_a_trace: [false; 2],
        difference_nonzero: [false; 2],
        delta2_is_minus_d1: false,
    };
    for (i, (delta, diff)) in delta_differences(&c).iter().enumerate() {
        report.invariant[i] = tau.apply(delta) == *delta && tau.apply(diff) == *diff;
        let v: Vec<BigInt> = element_vector(&c.alg, t, &(diff - delta));
        report.difference_is_a_trace[i] = traces.contains_vector(&v);
        report.difference_nonzero[i] = !(diff - delta).is_zero();
    }
    let d1 = c.product(&["x0", "x3", "x6"]);
    report.delta2_is_minus_d1 = (&c.product(&["x", "x + z3", "2x + z3"]) + &d1).is_zero();
    report
}

/// All completion checks, as report records.
pub fn completion_checks(window: &CompletionWindow) -> Vec<Check> {
    let mut out = Vec::new();
    let cc = coordinate_change_check(&window.ideal_degrees);
    out.push(Check::new(
        "completion.coordinates",
        "coordinate change adapted to I",
        cc.derived_expressions_vanish.iter().all(|&b| b) && cc.splitting,
        format!("x6,x7,x8 expressions {:?}, splitting {}", cc.derived_expressions_vanish, cc.splitting),
    ));
    out.push(Check::new("completion.delta-product", "nine-factor product for Δ", cc.delta_formula, ""));
    out.push(Check::new(
        "completion.ideal",
        "(3, x_i - x_{i+1}) = (3, z1..z5)",
        cc.ideal_pieces.iter().all(|r| r.3),
        format!("(t, dim, rank, equal): {:?}", cc.ideal_pieces),
    ));
    for (case, stages) in [(IdealCase::Maximal, &window.maximal_stages), (IdealCase::Diagonal, &window.diagonal_stages)] {
        let mut model = TowerModel::new(case);
        for &k in stages {
            let rows = model.window(k, window.t_min, window.t_max, window.lookahead);
            let bad: Vec<(i64, u8)> = rows
                .iter()
                .filter(|s| {
                    !s.is_monotone()
                        || s.stabilized_at.is_none()
                        || s.exponents() != closed_form_image(case, k, s.t, s.parity).as_slice()
                })
                .map(|s| (s.t, s.parity))
                .collect();
            let stable = rows.iter().filter_map(|s| s.stabilized_at).max().unwrap_or(0);
            out.push(Check::new(
                &format!("completion.tower{}.k{k}", case.name()),
                "stabilized images B_k of the tower",
                bad.is_empty(),
                format!(
                    "t in [{}, {}], lookahead {}, latest stabilization {stable}, mismatches {bad:?}",
                    window.t_min, window.t_max, window.lookahead
                ),
            ));
        }
    }
    let mut diagonal = TowerModel::new(IdealCase::Diagonal);
    let alg = diagonal.algebra().clone();
    let delta = Element::parse(&alg, "x^2*y + x*y^2").expect("valid element");
    let x = Element::parse(&alg, "x").expect("valid element");
    let mut generated = true;
    for &k in &window.diagonal_stages {
        for i in 0..=((-window.t_min - 2) / 6).max(0) as u32 {
            let s = diagonal.class_survives(k, -2 - 6 * i as i64, 1, window.lookahead, &(&x * &delta.pow(i)));
            generated &= s.cocycle && s.nonzero && s.in_image;
        }
    }
    out.push(Check::new("completion.tower-generator", "odd image generated by x δ^i", generated, ""));
    let sandwich = (1..=3).all(|k| (window.t_min..=window.t_max).step_by(2).all(|t| tower_sandwich(k, t) == (true, true)));
    out.push(Check::new("completion.sandwich", "I^{2k} ⊆ I_1^k + I_2^k ⊆ I^k", sandwich, "k <= 3"));
    let wb = w_basis_check(window.w_degree_max);
    let failed: Vec<(u32, u32)> = wb.iter().filter(|r| !r.passed()).map(|r| (r.n, r.exterior_degree)).collect();
    out.push(Check::new(
        "completion.w-basis",
        "filtration-compatible basis by cyclic summands",
        failed.is_empty(),
        format!("n <= {}, exterior degrees 0..3, failures {failed:?}", window.w_degree_max),
    ));
    let model = WModel::new();
    let triples: Vec<DisplayedTriple> = (0..3).flat_map(|i| model.displayed_triples(i)).collect();
    out.push(Check::new(
        "completion.w-triples",
        "displayed β-sets",
        triples.iter().all(|t| t.matches),
        format!("{} triples", triples.len()),
    ));
    let orders = model.generator_orders();
    let expected = [1, 1, 0];
    out.push(Check::new(
        "completion.generator-orders",
        "s1, s2 in J minus J^2; s3 not in J",
        orders.iter().map(|o| o.order).eq(expected),
        orders.iter().map(|o| format!("{}: {}", o.name, o.order)).collect::<Vec<_>>().join(", "),
    ));
    let dr = delta_cohomologous_check();
    out.push(Check::new(
        "completion.delta",
        "δ1 = d1 - d2 and δ3 = d1 - d3 in Ĥ^0 but not in H^0",
        dr.passed(),
        format!("{dr:?}"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_cohomology::tate_cohomology;
    use crate::rings::{rank_mod_p, ModMatrix};

    #[test]
    fn parser_for_new_coordinates() {
        let c = Coordinates::new();
        assert_eq!(c.parse("z1"), c.parse("x1 - x0"));
        assert_eq!(c.parse("-2x - z3"), c.parse("x6"));
        assert_eq!(c.parse("2(z1 + z2)"), c.parse("2x4 - 2x3 + 2x1 - 2x0"));
    }

    #[test]
    fn coordinate_change() {
        let r = coordinate_change_check(&[0, -2]);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.ideal_pieces[1], (-2, 6, 6, true));
    }

    #[test]
    fn ideal_pieces_agree_mod_three() {
        // Both ideals contain 3 M_t, so equality is equality of their images in M_t / 3.
        let c = Coordinates::new();
        let (diffs, zs) = ideal_presentations(&c);
        for t in [-2, -4] {
            let dim = c.alg.basis_in_degree(t).unwrap().len();
            let image_rank = |ideal: &Ideal, extra: &[Vec<BigInt>]| {
                let mut cols = Vec::new();
                for g in &ideal.generators()[1..] {
                    for m in c.alg.basis_in_degree(t + 2).unwrap() {
                        cols.push(element_vector(&c.alg, t, &(g * &Element::monomial(&c.alg, m, 1))));
                    }
                }
                cols.extend_from_slice(extra);
                let mut a = ModMatrix::zeros(dim, cols.len(), 3);
                for (j, col) in cols.iter().enumerate() {
                    for (i, x) in col.iter().enumerate() {
                        a.set(i, j, i64::try_from(x % 3).unwrap());
                    }
                }
                rank_mod_p(&a)
            };
            let r1 = image_rank(&diffs, &[]);
            let r2 = image_rank(&zs, &[]);
            assert_eq!(r1, r2);
            // The union has the same rank, so the two spans coincide.
            let mut extra = Vec::new();
            for g in &zs.generators()[1..] {
                for m in c.alg.basis_in_degree(t + 2).unwrap() {
                    extra.push(element_vector(&c.alg, t, &(g * &Element::monomial(&c.alg, m, 1))));
                }
            }
            assert_eq!(image_rank(&diffs, &extra), r1);
        }
    }

    #[test]
    fn delta_identities() {
        let r = delta_cohomologous_check();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn delta_differences_are_coboundaries_in_tate_cohomology() {
        let c = Coordinates::new();
        let h0 = tate_cohomology(&c.tau(), 0, -6).unwrap();
        for (delta, diff) in delta_differences(&c) {
            let v = element_vector(&c.alg, -6, &(&diff - &delta));
            assert!(h0.is_coboundary(&v).unwrap());
            assert!(!h0.is_coboundary(&element_vector(&c.alg, -6, &delta)).unwrap());
        }
    }

    #[test]
    fn all_checks_pass_on_a_small_window() {
        let w = CompletionWindow {
            t_min: -8,
            lookahead: 4,
            maximal_stages: vec![3],
            diagonal_stages: vec![2],
            w_degree_max: 4,
            ideal_degrees: vec![-2],
            ..CompletionWindow::default()
        };
        for check in completion_checks(&w) {
            assert!(check.passed(), "{check:?}");
        }
    }
}
