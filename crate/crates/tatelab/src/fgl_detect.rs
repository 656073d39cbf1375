//! Hazewinkel generators of the formal `Z_3[ζ_9]`-module with logarithm
//! `x + Σ_{k>0} x^{3^k} / π^k`, `π = 1 - ζ`, and the group `H^1(C_9; Z_3[ζ])` for
//! the action by a power of `ζ`.
//!
//! The generators come from `3 ℓ_n = Σ_{0≤i<n} ℓ_i v_{n-i}^{3^i}` with `ℓ_i = π^{-i}`.
//! Multiplying by `π^n` gives `π^n v_n = 3 - Σ_{1≤i<n} π^{n-i} v_{n-i}^{3^i}`, and `v_n`
//! is obtained by `n` exact divisions by `π`.

use serde::Serialize;
use thiserror::Error;

use crate::cyclic_cohomology::{tate_of_module, CohomologyError, CyclicModule, TateGroup};
use crate::report::Check;
use crate::rings::{format_mod3, CyclotomicElement, IntMatrix, PiValuation, RingError};

pub const DEFAULT_PRECISION: u32 = 8;

/// Sign of the uniformizer in the logarithm coefficients `ℓ_k = π^{-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Uniformizer {
    /// `π = 1 - ζ`.
    OneMinusZeta,
    /// `π = ζ - 1`, which changes `v_n` by `(-1)^n`.
    ZetaMinusOne,
}

impl Uniformizer {
    pub fn element(self, precision: u32) -> CyclotomicElement {
        match self {
            Uniformizer::OneMinusZeta => CyclotomicElement::pi(precision),
            Uniformizer::ZetaMinusOne => CyclotomicElement::pi(precision).neg(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Uniformizer::OneMinusZeta => "1-ζ",
            Uniformizer::ZetaMinusOne => "ζ-1",
        }
    }
}

/// The generators `v_1, …, v_6` modulo 3, as printed in the `ζ`-basis.
pub const EXPECTED_TABLE: [&str; 6] = [
    "2ζ^5 + 2ζ^4 + 2ζ^3 + ζ^2 + ζ + 1",
    "2ζ^4 + ζ^3 + ζ + 2",
    "2ζ^3 + 1",
    "ζ^5 + ζ^4 + ζ^3 + ζ^2 + ζ + 1",
    "ζ^4 + 2ζ^3 + ζ + 2",
    "2ζ^5 + ζ^4 + ζ^3 + 2ζ^2 + 2",
];

#[derive(Debug, Error)]
pub enum FglError {
    #[error("v_{n}: {source}")]
    Division { n: usize, source: RingError },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// `v_1, …, v_n` modulo `3^precision`.
#[derive(Clone, Debug)]
pub struct HazewinkelTable {
    pub uniformizer: Uniformizer,
    pub precision: u32,
    pub v: Vec<CyclotomicElement>,
}

impl HazewinkelTable {
    pub fn mod3(&self) -> Vec<[u8; 6]> {
        self.v.iter().map(CyclotomicElement::mod3).collect()
    }

    /// The reductions printed as `2ζ^3 + 1`.
    pub fn lines(&self) -> Vec<String> {
        self.mod3().iter().map(|c| format_mod3(c, "ζ")).collect()
    }

    /// `3 - Σ_{0≤i<n} π^{n-i} v_{n-i}^{3^i}` for each `n`, which vanishes at working precision.
    pub fn residuals(&self) -> Vec<CyclotomicElement> {
        let pi = self.uniformizer.element(self.precision);
        (1..=self.v.len())
            .map(|n| {
                let mut r = CyclotomicElement::integer(3, self.precision);
                for i in 0..n {
                    let term = pi.pow((n - i) as u64).mul(&self.v[n - i - 1].pow(3u64.pow(i as u32)));
                    r = r.sub(&term);
                }
                r
            })
            .collect()
    }
}

/// Solve the recursion for `v_1, …, v_n`.
pub fn hazewinkel_table(n: usize, precision: u32, uniformizer: Uniformizer) -> Result<HazewinkelTable, FglError> {
    let pi = uniformizer.element(precision);
    let sign = match uniformizer {
        Uniformizer::OneMinusZeta => 1,
        Uniformizer::ZetaMinusOne => -1,
    };
    let mut v: Vec<CyclotomicElement> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = CyclotomicElement::integer(3, precision);
        for i in 1..k {
            acc = acc.sub(&pi.pow((k - i) as u64).mul(&v[k - i - 1].pow(3u64.pow(i as u32))));
        }
        for _ in 0..k {
            acc = acc.divide_by_pi_exact().map_err(|source| FglError::Division { n: k, source })?.scale(sign);
        }
        v.push(acc);
    }
    Ok(HazewinkelTable { uniformizer, precision, v })
}

pub fn hazewinkel_v(n: usize, precision: u32, uniformizer: Uniformizer) -> Result<CyclotomicElement, FglError> {
    Ok(hazewinkel_table(n, precision, uniformizer)?.v.pop().expect("n >= 1"))
}

/// Valuations of `v_1, …, v_5` and the residue of `v_6` at `ζ = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct HeightCertificate {
    pub valuations: Vec<PiValuation>,
    /// `v_i mod π` for `i = 1..6`, i.e. the coefficient sum modulo 3.
    pub residues: Vec<u8>,
}

impl HeightCertificate {
    /// `v_1, …, v_5 ≡ 0` and `v_6` a unit modulo `π`.
    pub fn height_is_six(&self) -> bool {
        self.residues.len() == 6 && self.residues[..5].iter().all(|&r| r == 0) && self.residues[5] != 0
    }

    /// Every valuation of `v_1, …, v_5` is at least `1/6`.
    pub fn lower_valuations_positive(&self) -> bool {
        self.valuations[..5].iter().all(|v| v.numerator != Some(0))
    }
}

pub fn height_certificate(table: &HazewinkelTable) -> HeightCertificate {
    HeightCertificate {
        valuations: table.v.iter().map(CyclotomicElement::pi_valuation).collect(),
        residues: table.v.iter().map(CyclotomicElement::residue).collect(),
    }
}

/// Multiplication by `ζ^m` on `Z[ζ]` in the basis `1, ζ, …, ζ^5`.
pub fn zeta_power_matrix(m: i64) -> IntMatrix {
    let mut z = IntMatrix::zeros(6, 6);
    for k in 0..5 {
        z[(k + 1, k)] = 1.into();
    }
    // ζ · ζ^5 = ζ^6 = -1 - ζ^3.
    z[(0, 5)] = (-1).into();
    z[(3, 5)] = (-1).into();
    z.pow(m.rem_euclid(9) as u32)
}

/// `H^1(C_9; Z_3[ζ])` with the generator acting by `ζ^m`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightModuleCohomology {
    pub m: i64,
    pub group: TateGroup,
    /// The trace `Σ_k ζ^{mk}` when it is a scalar.
    pub trace_scalar: Option<i64>,
}

pub fn h1_c9_weight_module(m: i64) -> Result<WeightModuleCohomology, FglError> {
    let module = CyclicModule::new(9, zeta_power_matrix(m))?;
    let group = tate_of_module(&module, 1, 0)?;
    let norm = module.norm();
    let c = norm[(0, 0)].clone();
    let scalar = (0..6).all(|i| (0..6).all(|j| norm[(i, j)] == if i == j { c.clone() } else { 0.into() }));
    Ok(WeightModuleCohomology { m, group, trace_scalar: scalar.then(|| i64::try_from(&c).expect("small trace")) })
}

/// The table, the height certificate and the two cohomology computations as report records.
pub fn fgl_checks(precision: u32) -> Result<Vec<Check>, FglError> {
    let table = hazewinkel_table(6, precision, Uniformizer::OneMinusZeta)?;
    let other = hazewinkel_table(6, precision, Uniformizer::ZetaMinusOne)?;
    let mut out = Vec::new();
    for (n, ((got, alt), want)) in table.lines().iter().zip(other.lines()).zip(EXPECTED_TABLE).enumerate() {
        out.push(Check::new(
            &format!("fgl.v{}", n + 1),
            "Hazewinkel generator modulo 3, π = 1-ζ",
            got == want,
            format!("v{} = {got}; printed {want}; with π = ζ-1: {alt}", n + 1),
        ));
    }
    out.push(Check::computed(
        "fgl.table-zeta-minus-one",
        "Hazewinkel generators modulo 3, π = ζ-1",
        format!("all six equal the printed table: {}", other.lines().iter().zip(EXPECTED_TABLE).all(|(a, b)| a == b)),
    ));
    let residual_ok = table.residuals().iter().all(|r| r.pi_valuation() == PiValuation::infinite());
    out.push(Check::new("fgl.recursion", "3 l_n = sum l_i v_{n-i}^{3^i}", residual_ok, format!("3^{precision}")));
    let cert = height_certificate(&table);
    out.push(Check::new(
        "fgl.height",
        "v_1..v_5 vanish and v_6 is a unit modulo π",
        cert.height_is_six() && cert.lower_valuations_positive(),
        format!(
            "valuations {}, residues {:?}",
            cert.valuations.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            cert.residues
        ),
    ));
    let h27 = h1_c9_weight_module(27)?;
    out.push(Check::new(
        "fgl.h1-weight-27",
        "H^1(C_9; R_{4·27}) = 0",
        h27.group.is_zero(),
        format!("H^1 = {}, trace = {:?}", h27.group.describe(), h27.trace_scalar),
    ));
    let h1 = h1_c9_weight_module(1)?;
    out.push(Check::computed("fgl.h1-weight-1", "H^1(C_9; R_4)", format!("H^1 = {}", h1.group.describe())));
    Ok(out)
}
