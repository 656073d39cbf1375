//! The verification suites: each one runs a part of the computation and returns its checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::completion_lab::{completion_checks, CompletionWindow};
use crate::cyclic_cohomology::{
    census, element_vector, subgroup_action, support_blocks, tate_cohomology, tate_structure_in_degree, vector_element,
    cup_product, CochainAlgebra, CohomologyError, TateStructure,
};
use crate::fgl_detect::{fgl_checks, FglError, DEFAULT_PRECISION};
use crate::gca::{sym_induced_rho, CyclicAction};
use crate::groebner::{buchberger, ideals_equal};
use crate::invariants::{InvariantRing, InvariantsError, TRACE_RELATION_IDEAL, TRACE_RELATION_TAGS};
use crate::report::Check;
use crate::rings::{rank_mod_p, ModMatrix};
use crate::serre::{
    compare, direct_c9_oracle, matches_trivial_pattern, run_pipeline, search_differential_patterns_trivial_case,
    trivial_case_abutment, trivial_coefficient_e2, trivial_oracle, ComparisonReport, SerreError, SerreRun, SerreWindow,
};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Serre(#[from] SerreError),
    #[error(transparent)]
    Fgl(#[from] FglError),
}

/// Window bounds for every suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteWindows {
    /// Degrees where the structure route is compared with dimensions over `F_3`.
    pub cohomology_t_min: i64,
    /// Degrees where the structure route is compared with the exact route.
    pub exact_t_min: i64,
    pub census_t_min: i64,
    pub freeness_t_min: i64,
    pub serre: SerreWindow,
    pub trivial_n_max: i64,
    pub fgl_precision: u32,
}

impl Default for SuiteWindows {
    fn default() -> Self {
        SuiteWindows {
            cohomology_t_min: -24,
            exact_t_min: -12,
            census_t_min: -36,
            freeness_t_min: -60,
            serre: SerreWindow::default(),
            trivial_n_max: 8,
            fgl_precision: DEFAULT_PRECISION,
        }
    }
}

/// `dim_F3 Ĥ^n(G; V)` for an action on `V` over `F_3`, the same for every `n`:
/// `dim V - rank(1 - g) - rank N`.
pub fn tate_dimension_mod3(gamma: &ModMatrix, order: usize) -> usize {
    let n = gamma.rows();
    let id = ModMatrix::identity(n, 3);
    let mut norm = ModMatrix::zeros(n, n, 3);
    let mut power = id.clone();
    for _ in 0..order {
        norm = norm.add(&power);
        power = power.mul(gamma);
    }
    n - rank_mod_p(&id.sub(gamma)) - rank_mod_p(&norm)
}

/// `dim_F3 Ĥ^n(G; A_t / 3)`, computed block by block.
pub fn tate_dimension_of_reduction(action: &CyclicAction<i64>, t: i64) -> Result<usize, CohomologyError> {
    let gamma = action.sparse_matrix(t)?;
    Ok(support_blocks(&gamma).iter().map(|b| tate_dimension_mod3(&gamma.restrict(b).to_mod_matrix(3), action.order())).sum())
}

/// The reduction sequence `0 -> Ĥ^n / 3 -> Ĥ^n(A/3) -> Ĥ^{n+1}[3] -> 0` predicts
/// `dim Ĥ^n(A/3) = c(Ĥ^n) + c(Ĥ^{n+1})` for a torsion-free `A`, with `c` the number of cyclic summands.
pub fn reduction_dimension(structure: &TateStructure) -> usize {
    structure.even.len() + structure.odd.len()
}

/// Structure of `Ĥ^*(C_3; M)` and `Ĥ^*(C_9; M)`, the exact route and the outer decomposition.
pub fn cohomology_checks(windows: &SuiteWindows) -> Result<Vec<Check>, SuiteError> {
    let (_, c9) = sym_induced_rho();
    let c3 = subgroup_action(&c9, 3)?;
    let mut out = Vec::new();
    for (name, action) in [("C3", &c3), ("C9", &c9)] {
        let mut mismatches = Vec::new();
        let mut rows = 0;
        for t in (windows.cohomology_t_min..=0).rev().filter(|t| t % 2 == 0) {
            let structure = tate_structure_in_degree(action, t)?;
            let oracle = tate_dimension_of_reduction(action, t)?;
            rows += 1;
            if reduction_dimension(&structure) != oracle {
                mismatches.push(format!("t={t}: {:?} vs dim {oracle}", structure));
            }
        }
        out.push(Check::new(
            &format!("cohomology.{name}.mod3"),
            "Tate cohomology of M against kernels and images over F3 on M/3",
            mismatches.is_empty(),
            if mismatches.is_empty() { format!("{rows} degrees agree") } else { mismatches.join("; ") },
        ));
        let mut mismatches = Vec::new();
        for t in (windows.exact_t_min..=0).rev().filter(|t| t % 2 == 0) {
            let structure = tate_structure_in_degree(action, t)?;
            for n in [0, 1] {
                let exact = tate_cohomology(action, n, t)?.invariant_factors();
                if exact != structure.invariant_factors(n) {
                    mismatches.push(format!("n={n} t={t}: {exact:?} vs {:?}", structure.invariant_factors(n)));
                }
            }
        }
        out.push(Check::new(
            &format!("cohomology.{name}.exact"),
            "invariant factors without representatives against the exact route",
            mismatches.is_empty(),
            if mismatches.is_empty() { format!("t in [{}, 0]", windows.exact_t_min) } else { mismatches.join("; ") },
        ));
    }
    let rows = census(&c9, windows.census_t_min, 0)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| format!("parity {} t={}: {:?} vs {:?}", r.parity, r.t, r.computed, r.enumerated.counts()))
        .collect();
    out.push(Check::new(
        "cohomology.census",
        "C9/C3-module structure of Ĥ*(C3; M) against the orbit enumeration",
        bad.is_empty(),
        if bad.is_empty() { format!("{} rows agree for t in [{}, 0]", rows.len(), windows.census_t_min) } else { bad.join("; ") },
    ));
    Ok(out)
}

const GENERATOR_BIDEGREES: [(&str, u32, i64); 16] = [
    ("1", 0, 0),
    ("cbar", 3, -6),
    ("delta", 0, -18),
    ("cbar_delta", 3, -24),
    ("f0", 1, -2),
    ("f1", 1, -8),
    ("f2", 1, -8),
    ("f3", 1, -14),
    ("f4", 1, -14),
    ("f5", 1, -20),
    ("F0", 2, -4),
    ("F1", 2, -10),
    ("F2", 2, -10),
    ("F3", 2, -16),
    ("F4", 2, -16),
    ("F5", 2, -22),
];

/// The sixteen generators and the freeness of the invariants over `S` on the window.
pub fn invariants_checks(ring: &InvariantRing, windows: &SuiteWindows) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, q, t) in GENERATOR_BIDEGREES {
        let g = ring.generators().get(name);
        let ok = g.is_some_and(|g| (g.q, g.t) == (q, t) && ring.is_invariant(&g.element));
        out.push(Check::new(
            &format!("invariants.generator.{name}"),
            "invariant generator and its bidegree",
            ok,
            format!("expected ({q}, {t}), got {:?}", g.map(|g| (g.q, g.t))),
        ));
    }
    let report = ring.verify_free_generation(windows.freeness_t_min, 0);
    let failures: Vec<String> = report
        .failures()
        .iter()
        .map(|d| format!("(q, t) = ({}, {}): dim {} free {} rank {}", d.q, d.t, d.invariant_dim, d.free_dim, d.span_rank))
        .collect();
    out.push(Check::new(
        "invariants.freeness",
        "T^C3 is free over S on the sixteen generators",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} bidegrees with t in [{}, 0]", report.degrees.len(), windows.freeness_t_min)
        } else {
            failures.join("; ")
        },
    ));
    out
}

/// Product and reduction identities expanded in `T`, and the two relation ideals.
pub fn relations_checks(ring: &InvariantRing) -> Result<Vec<Check>, SuiteError> {
    let mut out = Vec::new();
    for c in ring.verify_relation_suite()? {
        let mut details = format!("{} = {}", c.lhs, c.rhs);
        if !c.holds {
            let lhs = ring.evaluate(&c.lhs)?;
            if let Some(actual) = ring.express(&lhs) {
                details.push_str(&format!("; expands to {actual}"));
            }
        }
        out.push(Check::new(&format!("relations.{}", c.lhs), "product relation expanded in T", c.holds, details));
    }
    for c in ring.verify_generator_reductions()? {
        out.push(Check::new(&format!("relations.{}", c.lhs), "reduction identity", c.holds, format!("{} = {}", c.lhs, c.rhs)));
    }
    let names = ["f0", "f1", "f2", "f3", "f4", "f5", "s1", "s2", "s3"];
    let computed = ring.relation_ideal(&names, TRACE_RELATION_TAGS, false)?;
    let listed: Vec<_> = TRACE_RELATION_IDEAL
        .iter()
        .map(|p| computed.ring().parse(p))
        .collect::<Result<_, _>>()
        .map_err(InvariantsError::from)?;
    let listed = buchberger(computed.ring(), &listed);
    out.push(Check::new(
        "relations.ideal.f-s",
        "relations among f0..f5, s1, s2, s3 equal the listed ten polynomials",
        ideals_equal(&computed, &listed),
        format!("{} Groebner generators computed, {} listed", computed.len(), TRACE_RELATION_IDEAL.len()),
    ));
    let alternant = ring.relation_ideal(&["s1", "s2", "s3", "delta"], &["s1", "s2", "s3", "delta"], false)?;
    let expected = alternant.ring().parse("delta^2 + s2^3 + s1^3*s3 - s1^2*s2^2").map_err(InvariantsError::from)?;
    let principal = buchberger(alternant.ring(), &[expected]);
    out.push(Check::new(
        "relations.ideal.delta",
        "relations among s1, s2, s3, delta form the principal ideal of delta^2 + s2^3 + s1^3 s3 - s1^2 s2^2",
        ideals_equal(&alternant, &principal),
        alternant.to_string(),
    ));
    Ok(out)
}

/// Output of the Serre suite: the checks, the pipeline and the comparison rows.
pub struct SerreSuite {
    pub checks: Vec<Check>,
    pub run: SerreRun,
    pub comparison: ComparisonReport,
}

/// The trivial-coefficient spectral sequence, the pipeline for `M` against the direct
/// computation, and the hidden multiplicative extension.
pub fn serre_suite(ring: &InvariantRing, windows: &SuiteWindows) -> Result<SerreSuite, SuiteError> {
    let mut out = trivial_serre_checks(windows.trivial_n_max)?;
    let window = windows.serre;
    let run = run_pipeline(ring, window)?;
    let (_, c9) = sym_induced_rho();
    let oracle = direct_c9_oracle(&c9, window.t_min, window.t_max)?;
    let comparison = compare(&run.prediction, &oracle, window.n_min..=window.n_max);
    let mismatches: Vec<String> = comparison
        .mismatches()
        .iter()
        .map(|r| format!("n={} t={}: {:?} vs {:?}", r.n, r.t, r.predicted, r.observed))
        .collect();
    out.push(Check::new(
        "serre.comparison",
        "E2, d3 family and 3 b1 = b2 against Ĥ*(C9; M)",
        mismatches.is_empty(),
        if mismatches.is_empty() { format!("{} rows agree", comparison.rows.len()) } else { mismatches.join("; ") },
    ));
    let high = run.e4.entries_from_column(4);
    out.push(Check::new(
        "serre.e4-columns",
        "E4 is concentrated in p = 0, 1, 2, 3",
        high.is_empty(),
        format!("{} nonzero entries with p >= 4", high.len()),
    ));
    out.extend(hidden_extension_checks(ring)?);
    Ok(SerreSuite { checks: out, run, comparison })
}

/// `E_2` pattern, uniqueness of the `d_3` pattern and the abutment for trivial coefficients.
pub fn trivial_serre_checks(n_max: i64) -> Result<Vec<Check>, SuiteError> {
    let mut out = Vec::new();
    let page = trivial_coefficient_e2(n_max)?;
    out.push(Check::new(
        "serre.trivial.e2",
        "E2 = (Z[b1, b2]/(3b1, 3b2)){1, a2 b1}",
        matches_trivial_pattern(&page, n_max),
        format!("total degrees 0..={n_max}"),
    ));
    let search = search_differential_patterns_trivial_case(n_max)?;
    out.push(Check::new(
        "serre.trivial.d3",
        "d3(a2 b1) = b2^2 is the only consistent pattern",
        search.is_a2_b1_pattern(),
        format!(
            "{} candidates, {} not differentials, {} consistent",
            search.candidates,
            search.not_differentials,
            search.consistent.len()
        ),
    ));
    let prediction = trivial_case_abutment(n_max)?;
    let oracle = trivial_oracle(n_max)?;
    let ok = (1..=n_max).all(|n| {
        let expected: &[u64] = if n % 2 == 0 { &[9] } else { &[] };
        prediction.factors(n, 0) == oracle[&n].as_slice() && oracle[&n].as_slice() == expected
    });
    out.push(Check::new(
        "serre.trivial.abutment",
        "with 3 b1 = b2 the abutment is Z/9[b^±]",
        ok,
        (1..=n_max).map(|n| format!("n={n}: {:?}", prediction.factors(n, 0))).collect::<Vec<_>>().join(", "),
    ));
    Ok(out)
}

/// `f0 ⌣ F0 = 3 c̄` in `Ĥ^3(C9; M)_{-6}` while `f0 F0 = 0` in `T`.
pub fn hidden_extension_checks(ring: &InvariantRing) -> Result<Vec<Check>, SuiteError> {
    let (m, c9) = sym_induced_rho();
    let ca = CochainAlgebra::new(&c9);
    let h1 = tate_cohomology(&c9, 1, -2)?;
    let h2 = tate_cohomology(&c9, 2, -4)?;
    let h3 = tate_cohomology(&c9, 3, -6)?;
    let shapes = (h1.invariant_factors(), h2.invariant_factors(), h3.invariant_factors());
    let mut ok = shapes == (vec![3], vec![3], vec![9]);
    let mut details = format!("Ĥ^1 = {}, Ĥ^2 = {}, Ĥ^3 = {}", h1.describe(), h2.describe(), h3.describe());
    if ok {
        let f0 = vector_element(&m, -2, &h1.representatives[0]);
        let big_f0 = vector_element(&m, -4, &h2.representatives[0]);
        let product = cup_product(&ca, 1, &f0, 2, &big_f0);
        let c = h3.coordinates(&element_vector(&m, -6, &product))?;
        let c = c[0].clone() % 9;
        let c = i64::try_from(&c).expect("reduced coordinate");
        ok = c.rem_euclid(3) == 0 && c.rem_euclid(9) != 0;
        details.push_str(&format!("; f0 ⌣ F0 = {} in Z/9", c.rem_euclid(9)));
    }
    let mut out = vec![Check::new("serre.f0-F0", "f0 ⌣ F0 = 3 c̄ up to a unit", ok, details)];
    let graded = ring.evaluate("f0*F0")?;
    out.push(Check::new(
        "serre.f0-F0-graded",
        "f0 F0 = 0 in E∞",
        graded.is_zero(),
        format!("f0*F0 = {graded} in T"),
    ));
    Ok(out)
}

/// One named suite and its checks.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: Vec<Check>,
}

/// Every suite on the given windows, in a fixed order.
pub fn verify_all(windows: &SuiteWindows, completion: &CompletionWindow) -> Result<Vec<SuiteResult>, SuiteError> {
    let ring = InvariantRing::new();
    let named = |name: &str, checks| SuiteResult { name: name.to_string(), checks };
    Ok(vec![
        named("cohomology", cohomology_checks(windows)?),
        named("invariants", invariants_checks(&ring, windows)),
        named("relations", relations_checks(&ring)?),
        named("serre", serre_suite(&ring, windows)?.checks),
        named("completion", completion_checks(completion)),
        named("fgl", fgl_checks(windows.fgl_precision)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn small() -> SuiteWindows {
        SuiteWindows {
            cohomology_t_min: -8,
            exact_t_min: -6,
            census_t_min: -8,
            freeness_t_min: -12,
            serre: SerreWindow { t_min: -8, t_max: 0, n_min: 1, n_max: 4, p_max: 5 },
            trivial_n_max: 6,
            fgl_precision: DEFAULT_PRECISION,
        }
    }

    #[test]
    fn tate_dimension_of_the_regular_module() {
        // F3[C3] is free: no Tate cohomology. The trivial module has one class.
        let mut g = ModMatrix::zeros(3, 3, 3);
        for i in 0..3 {
            g.set((i + 1) % 3, i, 1);
        }
        assert_eq!(tate_dimension_mod3(&g, 3), 0);
        assert_eq!(tate_dimension_mod3(&ModMatrix::identity(1, 3), 3), 1);
    }

    #[test]
    fn small_suites_pass() {
        let w = small();
        let ring = InvariantRing::new();
        assert!(all_passed(&cohomology_checks(&w).unwrap()));
        assert!(all_passed(&invariants_checks(&ring, &w)));
        let serre = serre_suite(&ring, &w).unwrap();
        assert!(all_passed(&serre.checks), "{:?}", serre.checks);
        assert_eq!(serre.comparison.rows.len(), 9 * 4);
    }

    #[test]
    fn relation_suite_reports_the_one_misprint() {
        let ring = InvariantRing::new();
        let failed: Vec<String> =
            relations_checks(&ring).unwrap().into_iter().filter(|c| !c.passed()).map(|c| c.id).collect();
        assert_eq!(failed, vec!["relations.f2*f5".to_string()]);
    }
}
