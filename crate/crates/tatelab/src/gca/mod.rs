//! Sparse graded-commutative algebras with even (polynomial) and odd (exterior) generators.
//!
//! Linear relations are eliminated once, when the presentation is built: each
//! relation solves for its last generator with a unit coefficient, so elements
//! only ever mention the remaining free generators.

mod action;
mod element;
mod file;

pub use action::{CyclicAction, SparseMatrix};
pub use element::{Coeff, Element, Monomial};
pub use file::{load_presentation, parse_presentation, PresentationFile};

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyparse::{parse_polynomial, ParseError};

#[derive(Debug, Error)]
pub enum GcaError {
    #[error("elements belong to different presentations")]
    MixedPresentations,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("relation {index} is not homogeneous")]
    InhomogeneousRelation { index: usize },
    #[error("relation {index} mixes parities")]
    MixedParityRelation { index: usize },
    #[error("relation {index} has no generator with a unit coefficient to eliminate")]
    NoUnitPivot { index: usize },
    #[error("relation {index} is not linear")]
    NonlinearRelation { index: usize },
    #[error("relation {index} is dependent on the earlier relations")]
    DependentRelation { index: usize },
    #[error("degree {t} piece is infinite-dimensional")]
    InfinitePiece { t: i64 },
    #[error("action image of {generator:?} is invalid: {reason}")]
    BadAction { generator: String, reason: String },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("presentation file: {0}")]
    File(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub parity: Parity,
}

impl Generator {
    pub fn even(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree, parity: Parity::Even }
    }

    pub fn odd(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree, parity: Parity::Odd }
    }
}

/// A presentation with its linear relations already eliminated.
#[derive(Debug, PartialEq)]
pub struct AlgebraPresentation {
    pub modulus: u64,
    pub generators: Vec<Generator>,
    pub linear_relations: Vec<Vec<(usize, i64)>>,
    /// Indices (into `generators`) of the generators that survive elimination, in order.
    free: Vec<usize>,
    /// For every declared generator, its expression in the free generators.
    substitution: Vec<Vec<(usize, i64)>>,
    by_name: HashMap<String, usize>,
}

/// Shared handle to a presentation; elements carry one.
pub type Algebra = Arc<AlgebraPresentation>;

impl AlgebraPresentation {
    /// Build a presentation, eliminating each linear relation in turn.
    pub fn new(
        modulus: u64,
        generators: Vec<Generator>,
        linear_relations: Vec<Vec<(usize, i64)>>,
    ) -> Result<Algebra, GcaError> {
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(GcaError::DuplicateGenerator(g.name.clone()));
            }
        }
        let n = generators.len();
        // Dense rows over the integers; substitution of earlier pivots keeps them in echelon form.
        let mut subst: Vec<Option<Vec<i64>>> = vec![None; n];
        for (index, rel) in linear_relations.iter().enumerate() {
            let mut row = vec![0i64; n];
            for &(g, c) in rel {
                row[g] += c;
            }
            let degrees: Vec<i64> = (0..n).filter(|&g| row[g] != 0).map(|g| generators[g].degree).collect();
            if degrees.windows(2).any(|w| w[0] != w[1]) {
                return Err(GcaError::InhomogeneousRelation { index });
            }
            let parities: Vec<Parity> =
                (0..n).filter(|&g| row[g] != 0).map(|g| generators[g].parity).collect();
            if parities.windows(2).any(|w| w[0] != w[1]) {
                return Err(GcaError::MixedParityRelation { index });
            }
            for g in 0..n {
                if row[g] == 0 {
                    continue;
                }
                if let Some(s) = &subst[g] {
                    let c = row[g];
                    row[g] = 0;
                    for h in 0..n {
                        row[h] += c * s[h];
                    }
                }
            }
            if row.iter().all(|&c| c == 0) {
                return Err(GcaError::DependentRelation { index });
            }
            let Some(pivot) = (0..n).rev().find(|&g| row[g] == 1 || row[g] == -1) else {
                return Err(GcaError::NoUnitPivot { index });
            };
            let c = row[pivot];
            let expr: Vec<i64> = (0..n).map(|h| if h == pivot { 0 } else { -row[h] * c }).collect();
            for s in subst.iter_mut().flatten() {
                let k = s[pivot];
                if k != 0 {
                    s[pivot] = 0;
                    for h in 0..n {
                        s[h] += k * expr[h];
                    }
                }
            }
            subst[pivot] = Some(expr);
        }
        let free: Vec<usize> = (0..n).filter(|&g| subst[g].is_none()).collect();
        let position: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let substitution = (0..n)
            .map(|g| match &subst[g] {
                None => vec![(position[&g], 1)],
                Some(s) => (0..n).filter(|&h| s[h] != 0).map(|h| (position[&h], s[h])).collect(),
            })
            .collect();
        Ok(Arc::new(AlgebraPresentation {
            modulus,
            generators,
            linear_relations,
            free,
            substitution,
            by_name,
        }))
    }

    /// Build a presentation from relations written as text, e.g. `"x0 + x3 + x6"`.
    pub fn with_text_relations(
        modulus: u64,
        generators: Vec<Generator>,
        relations: &[&str],
    ) -> Result<Algebra, GcaError> {
        let index: HashMap<&str, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        let mut parsed = Vec::new();
        for (k, rel) in relations.iter().enumerate() {
            let mut row = Vec::new();
            for (c, factors) in parse_polynomial(rel)? {
                if factors.len() != 1 || factors[0].1 != 1 {
                    return Err(GcaError::NonlinearRelation { index: k });
                }
                let g = *index
                    .get(factors[0].0.as_str())
                    .ok_or_else(|| GcaError::UnknownGenerator(factors[0].0.clone()))?;
                row.push((g, c));
            }
            parsed.push(row);
        }
        Self::new(modulus, generators, parsed)
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, GcaError> {
        self.by_name.get(name).copied().ok_or_else(|| GcaError::UnknownGenerator(name.to_string()))
    }

    /// Number of generators surviving elimination.
    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    /// The `i`-th free generator.
    pub fn free_generator(&self, i: usize) -> &Generator {
        &self.generators[self.free[i]]
    }

    pub fn free_names(&self) -> Vec<&str> {
        self.free.iter().map(|&g| self.generators[g].name.as_str()).collect()
    }

    pub(crate) fn substitution(&self, g: usize) -> &[(usize, i64)] {
        &self.substitution[g]
    }

    pub fn is_odd(&self, free_index: usize) -> bool {
        self.free_generator(free_index).parity == Parity::Odd
    }

    pub fn degree_of(&self, m: &Monomial) -> i64 {
        m.exponents().iter().enumerate().map(|(i, &e)| e as i64 * self.free_generator(i).degree).sum()
    }

    /// Monomials of internal degree `t` in the free generators, in ascending monomial order.
    pub fn basis_in_degree(&self, t: i64) -> Result<Vec<Monomial>, GcaError> {
        let degs: Vec<i64> = (0..self.n_free()).map(|i| self.free_generator(i).degree).collect();
        let even_zero = (0..self.n_free()).any(|i| degs[i] == 0 && !self.is_odd(i));
        let positive = degs.iter().any(|&d| d > 0);
        let negative = degs.iter().any(|&d| d < 0);
        if even_zero || (positive && negative) {
            return Err(GcaError::InfinitePiece { t });
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.n_free()];
        self.enumerate(0, t, &degs, &mut exps, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(&self, i: usize, remaining: i64, degs: &[i64], exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == degs.len() {
            if remaining == 0 {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        let d = degs[i];
        let max = if self.is_odd(i) {
            1
        } else if d == 0 || remaining == 0 || (remaining > 0) != (d > 0) {
            0
        } else {
            remaining / d
        };
        for e in 0..=max {
            exps[i] = e as u16;
            self.enumerate(i + 1, remaining - e * d, degs, exps, out);
        }
        exps[i] = 0;
    }
}

/// The algebra `M = Sym(Ind_{C3}^{C9} rho)`: nine generators `x0..x8` of degree `-2`
/// modulo `x_j + x_{j+3} + x_{j+6}`, with `gamma(x_i) = x_{i+1}`.
pub fn sym_induced_rho() -> (Algebra, CyclicAction<i64>) {
    let gens = (0..9).map(|i| Generator::even(&format!("x{i}"), -2)).collect();
    let alg = AlgebraPresentation::with_text_relations(0, gens, &["x0 + x3 + x6", "x1 + x4 + x7", "x2 + x5 + x8"])
        .expect("valid presentation");
    let images: Vec<String> = (0..9).map(|i| format!("x{}", (i + 1) % 9)).collect();
    let refs: Vec<&str> = images.iter().map(String::as_str).collect();
    let action = CyclicAction::from_text(&alg, 9, &refs).expect("valid action");
    (alg, action)
}

/// `T = k[d1,d2,d3] (x) Lambda[c1,c2,c3]` with `|d_i| = -6`, `|c_i| = -2`, and `C3` cycling indices.
pub fn polynomial_exterior_t<R: Coeff>() -> (Algebra, CyclicAction<R>) {
    let gens = vec![
        Generator::odd("c1", -2),
        Generator::odd("c2", -2),
        Generator::odd("c3", -2),
        Generator::even("d1", -6),
        Generator::even("d2", -6),
        Generator::even("d3", -6),
    ];
    let alg = AlgebraPresentation::new(3, gens, vec![]).expect("valid presentation");
    let action = CyclicAction::from_text(&alg, 3, &["c2", "c3", "c1", "d2", "d3", "d1"]).expect("valid action");
    (alg, action)
}
