//! A basis of `F_3[d1,d2,d3] (x) Λ[c1,c2,c3]` by cyclic `F_3[C_3]`-summands that is
//! compatible with the filtration by powers of `J = (d1 - d2, d1 - d3)`.
//!
//! In the coordinates `d = d1`, `w1 = d2 - d1`, `w2 = d1 + d2 + d3` the action is
//! `γ(d) = d + w1`, `γ(w1) = w1 + w2`, `γ(w2) = w2`, and `J = (w1, w2)`. The piece
//! `A_n` of polynomials of degree `n` in `d, w1, w2` with `d`-degree at most 2 is
//! spanned by sets `β(f) = {f, γf - f, f + γf + γ²f}`, one for a distinguished
//! generator and one for each free generator of `W_m = F_3{w1^a w2^b}_{a+b=m}`
//! multiplied by `1`, `d` or `d²`. Exterior classes are handled by
//! `c1 β(f) ∪ c2 β(γf) ∪ c3 β(γ²f)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gca::{Algebra, AlgebraPresentation, CyclicAction, Element, Generator, Monomial};
use crate::rings::{rank_mod_p, ModMatrix};
use crate::F3;

/// The ring in the coordinates `d, w1, w2` with exterior classes `c1, c2, c3`.
pub struct WModel {
    alg: Algebra,
    action: CyclicAction<F3>,
}

/// Outcome of the basis construction in one homogeneous degree and one exterior degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WBasisDegree {
    pub n: u32,
    pub exterior_degree: u32,
    /// Generators `f` of the `β`-sets of `A_n`, printed.
    pub generators: Vec<String>,
    pub dimension: usize,
    pub basis_size: usize,
    /// Every `β`-set (or exterior triple) is three independent vectors spanning a `γ`-stable subspace.
    pub summands_free_and_stable: bool,
    /// The leading forms of the whole basis are independent, hence a basis of the associated graded.
    pub graded_basis: bool,
}

impl WBasisDegree {
    pub fn passed(&self) -> bool {
        self.basis_size == self.dimension && self.summands_free_and_stable && self.graded_basis
    }
}

/// The three displayed `β`-sets, compared with the computed ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplayedTriple {
    pub generator: String,
    pub expected: Vec<String>,
    pub computed: Vec<String>,
    pub matches: bool,
}

/// `J`-adic order of a generator of the invariants: the least `w`-degree of its terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorOrder {
    pub name: String,
    pub in_coordinates: String,
    pub order: u32,
}

impl Default for WModel {
    fn default() -> Self {
        Self::new()
    }
}

impl WModel {
    pub fn new() -> Self {
        let gens = vec![
            Generator::odd("c1", -2),
            Generator::odd("c2", -2),
            Generator::odd("c3", -2),
            Generator::even("d", -6),
            Generator::even("w1", -6),
            Generator::even("w2", -6),
        ];
        let alg = AlgebraPresentation::new(3, gens, vec![]).expect("valid presentation");
        let action =
            CyclicAction::from_text(&alg, 3, &["c2", "c3", "c1", "d + w1", "w1 + w2", "w2"]).expect("valid action");
        WModel { alg, action }
    }

    pub fn parse(&self, s: &str) -> Element<F3> {
        Element::parse(&self.alg, s).expect("valid element")
    }

    /// Product of parsed factors.
    pub fn product(&self, factors: &[&str]) -> Element<F3> {
        factors.iter().fold(Element::one(&self.alg), |acc, f| &acc * &self.parse(f))
    }

    pub fn gamma(&self, x: &Element<F3>) -> Element<F3> {
        self.action.apply(x)
    }

    /// `{f, γf - f, f + γf + γ²f}`.
    pub fn beta(&self, f: &Element<F3>) -> [Element<F3>; 3] {
        let g1 = self.gamma(f);
        let g2 = self.gamma(&g1);
        [f.clone(), &g1 - f, &(f + &g1) + &g2]
    }

    /// `w̄ = w1 (w1 + w2)(w1 - w2)`.
    pub fn w_bar(&self) -> Element<F3> {
        self.product(&["w1", "w1 + w2", "w1 - w2"])
    }

    fn w_degree(&self, m: &Monomial) -> u32 {
        let (w1, w2) = (self.index("w1"), self.index("w2"));
        (m.exponents()[w1] + m.exponents()[w2]) as u32
    }

    fn index(&self, name: &str) -> usize {
        self.alg.free_names().iter().position(|n| *n == name).expect("known generator")
    }

    /// The terms of least `w`-degree, with that degree.
    pub fn leading_form(&self, x: &Element<F3>) -> Option<(u32, Element<F3>)> {
        let level = x.terms().map(|(m, _)| self.w_degree(m)).min()?;
        let lead = x
            .terms()
            .filter(|(m, _)| self.w_degree(m) == level)
            .fold(Element::zero(&self.alg), |acc, (m, c)| acc + Element::monomial(&self.alg, m.clone(), *c));
        Some((level, lead))
    }

    /// Monomials `w1^a w2^(m-a)`, with `a` descending.
    fn w_monomials(&self, m: u32) -> Vec<Element<F3>> {
        (0..=m).rev().map(|a| self.parse(&format!("w1^{a}*w2^{}", m - a))).collect()
    }

    /// The non-free summand of `W_m`: `w̄^i` for `m = 3i`, `{w1 w̄^i, w2 w̄^i}` for `m = 3i+1`.
    fn non_free_part(&self, m: u32) -> Vec<Element<F3>> {
        let wb = self.w_bar().pow(m / 3);
        match m % 3 {
            0 => vec![wb],
            1 => vec![&self.parse("w1") * &wb, &self.parse("w2") * &wb],
            _ => vec![],
        }
    }

    /// Generators of a free complement of the non-free summand of `W_m`, chosen greedily among monomials.
    pub fn free_generators(&self, m: i64) -> Vec<Element<F3>> {
        if m < 0 {
            return vec![];
        }
        let m = m as u32;
        let mut span = self.non_free_part(m);
        let wanted = (m as usize + 1 - span.len()) / 3;
        let mut gens = Vec::new();
        for f in self.w_monomials(m) {
            if gens.len() == wanted {
                break;
            }
            let mut trial = span.clone();
            trial.extend(self.beta(&f));
            if rank_f3(&trial) == trial.len() {
                span = trial;
                gens.push(f);
            }
        }
        gens
    }

    /// The distinguished generator of `A_n` for `n >= 1`.
    pub fn distinguished_generator(&self, n: u32) -> Element<F3> {
        let i = n / 3;
        match n % 3 {
            1 => &self.parse("d") * &self.w_bar().pow(i),
            2 => &self.parse("d^2") * &self.w_bar().pow(i),
            _ => &self.product(&["d^2", "w1 + w2"]) * &self.w_bar().pow(i - 1),
        }
    }

    /// Generators `f` with `A_n = ⊕ span β(f)`.
    pub fn generators(&self, n: u32) -> Vec<Element<F3>> {
        let mut gens = vec![self.distinguished_generator(n)];
        for (eps, power) in ["1", "d", "d^2"].iter().enumerate() {
            let dp = self.parse(power);
            gens.extend(self.free_generators(n as i64 - eps as i64).iter().map(|f| &dp * f));
        }
        gens
    }

    /// `dim A_n {exterior monomials of degree e}`.
    fn dimension(&self, n: u32, exterior_degree: u32) -> usize {
        let ext = [1, 3, 3, 1][exterior_degree as usize];
        let a = (0..=2u32.min(n)).map(|eps| (n - eps + 1) as usize).sum::<usize>();
        a * ext
    }

    /// The summands of `A_n` in exterior degree `e`, each a list of three vectors.
    fn summands(&self, n: u32, exterior_degree: u32) -> Vec<Vec<Element<F3>>> {
        let mut out = Vec::new();
        for f in self.generators(n) {
            match exterior_degree {
                0 => out.push(self.beta(&f).to_vec()),
                3 => {
                    let c = self.parse("c1*c2*c3");
                    out.push(self.beta(&f).iter().map(|b| &c * b).collect());
                }
                e => {
                    let cs = if e == 1 {
                        [self.parse("c1"), self.parse("c2"), self.parse("c3")]
                    } else {
                        [self.parse("c1*c2"), self.parse("c2*c3"), self.parse("c3*c1")]
                    };
                    let g1 = self.gamma(&f);
                    let g2 = self.gamma(&g1);
                    let norm = &(&f + &g1) + &g2;
                    out.push(vec![&cs[0] * &f, &cs[1] * &g1, &cs[2] * &g2]);
                    out.push(vec![&cs[0] * &(&g1 - &f), &cs[1] * &(&g2 - &g1), &cs[2] * &(&f - &g2)]);
                    out.push(cs.iter().map(|c| c * &norm).collect());
                }
            }
        }
        out
    }

    pub fn check_degree(&self, n: u32, exterior_degree: u32) -> WBasisDegree {
        let summands = self.summands(n, exterior_degree);
        let summands_free_and_stable = summands.iter().all(|s| {
            let mut with_images = s.clone();
            with_images.extend(s.iter().map(|x| self.gamma(x)));
            rank_f3(s) == 3 && rank_f3(&with_images) == 3
        });
        let basis: Vec<Element<F3>> = summands.into_iter().flatten().collect();
        let leads: Vec<Element<F3>> = basis.iter().filter_map(|x| self.leading_form(x).map(|(_, l)| l)).collect();
        WBasisDegree {
            n,
            exterior_degree,
            generators: self.generators(n).iter().map(ToString::to_string).collect(),
            dimension: self.dimension(n, exterior_degree),
            basis_size: basis.len(),
            summands_free_and_stable,
            graded_basis: leads.len() == basis.len() && rank_f3(&leads) == basis.len(),
        }
    }

    /// The displayed `β`-sets for `dw̄^i`, `d²w̄^i` and `d²(w1+w2)w̄^{i-1}`.
    pub fn displayed_triples(&self, i: u32) -> Vec<DisplayedTriple> {
        let wb = self.w_bar().pow(i);
        let wb1 = if i == 0 { None } else { Some(self.w_bar().pow(i - 1)) };
        let times = |s: &str, w: &Element<F3>| &self.parse(s) * w;
        let mut rows = vec![
            (times("d", &wb), vec![times("d", &wb), times("w1", &wb), times("w2", &wb)]),
            (
                times("d^2", &wb),
                vec![
                    times("d^2", &wb),
                    times("-d*w1 + w1^2", &wb),
                    times("-d*w2 - w1^2 + w1*w2 + w2^2", &wb),
                ],
            ),
        ];
        if let Some(w) = wb1 {
            rows.push((
                times("d^2*w1 + d^2*w2", &w),
                vec![
                    times("d^2*w1 + d^2*w2", &w),
                    times("d^2*w2 - d*w1^2 + d*w1*w2 + w1^3 - w1^2*w2", &w),
                    times("-w1^3 + w1*w2^2", &w),
                ],
            ));
        }
        rows.into_iter()
            .map(|(f, expected)| {
                let computed = self.beta(&f).to_vec();
                DisplayedTriple {
                    generator: f.to_string(),
                    matches: computed == expected,
                    expected: expected.iter().map(ToString::to_string).collect(),
                    computed: computed.iter().map(ToString::to_string).collect(),
                }
            })
            .collect()
    }

    /// `J`-adic orders of `s1, s2, s3` after substituting `d1 = d`, `d2 = d + w1`, `d3 = d - w1 + w2`.
    pub fn generator_orders(&self) -> Vec<GeneratorOrder> {
        let d1 = self.parse("d");
        let d2 = self.parse("d + w1");
        let d3 = self.parse("d - w1 + w2");
        let s1 = &(&d1 + &d2) + &d3;
        let s2 = &(&(&d1 * &d2) + &(&d2 * &d3)) + &(&d3 * &d1);
        let s3 = &(&d1 * &d2) * &d3;
        [("s1", s1), ("s2", s2), ("s3", s3)]
            .into_iter()
            .map(|(name, x)| GeneratorOrder {
                name: name.to_string(),
                in_coordinates: x.to_string(),
                order: self.leading_form(&x).map_or(u32::MAX, |(l, _)| l),
            })
            .collect()
    }
}

/// Rank over `F_3` of a list of elements, in the coordinates of their monomials.
pub fn rank_f3(xs: &[Element<F3>]) -> usize {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for x in xs {
        for (m, _) in x.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut a = ModMatrix::zeros(index.len(), xs.len(), 3);
    for (j, x) in xs.iter().enumerate() {
        for (m, c) in x.terms() {
            a.set(index[m], j, c.value() as i64);
        }
    }
    rank_mod_p(&a)
}

/// Run the construction for `1 <= n <= n_max` in every exterior degree.
pub fn w_basis_check(n_max: u32) -> Vec<WBasisDegree> {
    let model = WModel::new();
    (1..=n_max).flat_map(|n| (0..=3).map(move |e| (n, e))).map(|(n, e)| model.check_degree(n, e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_in_new_coordinates() {
        let w = WModel::new();
        assert_eq!(w.gamma(&w.parse("d")), w.parse("d + w1"));
        assert_eq!(w.gamma(&w.w_bar()), w.w_bar());
        // s3 = d (d + w1)(d - w1 + w2) is fixed.
        let s3 = w.product(&["d", "d + w1", "d - w1 + w2"]);
        assert_eq!(w.gamma(&s3), s3);
    }

    #[test]
    fn first_degrees() {
        let w = WModel::new();
        let d = w.check_degree(1, 0);
        assert_eq!(d.generators, vec!["d".to_string()]);
        assert!(d.passed(), "{d:?}");
        for n in 1..=6 {
            for e in 0..=3 {
                let r = w.check_degree(n, e);
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn displayed_triples_match() {
        let w = WModel::new();
        for i in 0..3 {
            for row in w.displayed_triples(i) {
                assert!(row.matches, "{row:?}");
            }
        }
    }

    #[test]
    fn free_parts_have_the_expected_rank() {
        let w = WModel::new();
        for m in 0..10u32 {
            let expected = match m % 3 {
                0 | 1 => m / 3,
                _ => m / 3 + 1,
            };
            assert_eq!(w.free_generators(m as i64).len() as u32, expected, "m={m}");
        }
    }

    #[test]
    fn orders_of_the_symmetric_functions() {
        let w = WModel::new();
        let orders: Vec<u32> = w.generator_orders().iter().map(|g| g.order).collect();
        assert_eq!(orders, vec![1, 1, 0]);
        let s2 = &w.generator_orders()[1];
        assert_eq!(w.parse(&s2.in_coordinates), w.parse("-d*w2 - w1^2 + w1*w2"));
    }
}
