//! The `C_3`-invariants of `T = k[d1,d2,d3] (x) Lambda[c1,c2,c3]` over `F_3`.
//!
//! `C_3` cycles the indices of both families of generators. The invariant ring
//! is compared against the free `S = k[s1,s2,s3]`-module on sixteen trace
//! generators, degree by degree, and the product and reduction identities among
//! the generators are expanded in `T`.
//!
//! Bidegrees are `(q, t)`: `q` counts exterior factors and `t` is the internal
//! degree with `|c_i| = -2` and `|d_i| = -6`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gca::{polynomial_exterior_t, Algebra, CyclicAction, Element, GcaError, Monomial};
use crate::groebner::{algebraic_relations, GroebnerBasis, GroebnerError, MonomialOrder, Poly, PolyRing};
use crate::polyparse::{parse_polynomial, ParseError};
use crate::rings::{kernel_mod_p, rank_mod_p, ModMatrix};
use crate::F3;

#[derive(Debug, Error)]
pub enum InvariantsError {
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("trace is only defined on a single monomial, got {0}")]
    NotMonomial(String),
    #[error("monomial {0} is fixed by the action, so its trace is not defined")]
    FixedMonomial(String),
    #[error("unknown named element {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// A named invariant with its bidegree.
#[derive(Clone, Debug)]
pub struct NamedGenerator {
    pub name: String,
    pub q: u32,
    pub t: i64,
    pub element: Element<F3>,
}

/// The sixteen `S`-module generators in a fixed order.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    pub entries: Vec<NamedGenerator>,
}

impl GeneratorTable {
    pub fn get(&self, name: &str) -> Option<&NamedGenerator> {
        self.entries.iter().find(|g| g.name == name)
    }
}

/// Comparison of the invariants with the free `S`-module in one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub q: u32,
    pub t: i64,
    /// `dim_F3` of the invariants.
    pub invariant_dim: usize,
    /// Number of products `s1^a s2^b s3^c * g` landing in this bidegree.
    pub free_dim: usize,
    /// Rank of those products.
    pub span_rank: usize,
    /// Every product is invariant.
    pub products_invariant: bool,
}

impl DegreeCheck {
    /// The products are independent and span the invariants.
    pub fn passes(&self) -> bool {
        self.products_invariant && self.span_rank == self.free_dim && self.span_rank == self.invariant_dim
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub degrees: Vec<DegreeCheck>,
}

impl FreenessReport {
    pub fn all_pass(&self) -> bool {
        self.degrees.iter().all(DegreeCheck::passes)
    }

    pub fn failures(&self) -> Vec<&DegreeCheck> {
        self.degrees.iter().filter(|d| !d.passes()).collect()
    }
}

/// An identity `lhs = rhs` expanded in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `generator*monomial`, dropping a unit factor on either side.
pub fn product_name(generator: &str, monomial: &str) -> String {
    match (generator, monomial) {
        (g, "") => g.to_string(),
        ("1", m) => m.to_string(),
        (g, m) => format!("{g}*{m}"),
    }
}

/// Product relations among the generators, as `(lhs, rhs)` in the named elements.
pub const RELATION_SUITE: &[(&str, &str)] = &[
    ("delta^2", "-s2^3 - s1^3*s3 + s1^2*s2^2"),
    ("f0*f1", "F2 - F1"),
    ("f0*f2", "F0*s1 - F1 + F2"),
    ("f0*f3", "F4 - F3"),
    ("f0*f4", "F0*s2 - F3 + F4"),
    ("f0*f5", "F2*s2 - F3*s1"),
    ("f1*f2", "F0*s2 - F2*s1"),
    ("f1*f3", "F5 - F0*s3 - F3*s1"),
    ("f1*f4", "F5 - F0*s3 + F3*s1 + F1*s2 - F2*s2"),
    ("f1*f5", "F1*s3 - F2*s3 - F3*s2"),
    ("f2*f3", "F5 + F2*s2 - F3*s1 - F0*s3"),
    ("f2*f4", "F5 - F0*s3 + F2*s2 - F3*s1 - F4*s1"),
    ("f2*f5", "F0*s1*s3 + F1*s3 + F2*s1*s2 - F3*s1^2 - F4*s2 + F5*s1"),
    ("f3*f4", "F0*s1*s3 - F4*s2"),
    ("f3*f5", "F3*s3 - F4*s3 + F2*s1*s3"),
    ("f4*f5", "F0*s2*s3 - F1*s1*s3 + F2*s2^2 - F2*s1*s3 + F3*s3 - F3*s1*s2 - F4*s3 + F5*s2"),
    ("f0*delta", "-f0*s1*s2 - f1*s2 + f2*s2 + f3*s1 - f4*s1"),
    ("f1*delta", "f0*s2^2 - f0*s1*s3 + f1*s1*s2 + f3*s2 - f4*s2 + f5*s1"),
    ("f2*delta", "-f0*s1*s3 - f2*s1*s2 + f3*s2 - f3*s1^2 - f4*s2 + f5*s1"),
    ("f3*delta", "-f0*s2*s3 - f1*s1*s3 + f2*s1*s3 + f3*s1*s2 + f5*s2"),
    ("f4*delta", "-f0*s2*s3 + f0*s1^2*s3 - f1*s1*s3 + f2*s2^2 + f2*s1*s3 - f3*s1*s2 + f4*s1*s2 + f5*s2"),
    (
        "f5*delta",
        "f0*s1*s2*s3 - f1*s2*s3 - f1*s1^2*s3 + f2*s2*s3 - f3*s2^2 + f3*s1*s3 - f4*s1*s3 - f5*s1*s2",
    ),
];

/// Traces of redundant monomials rewritten in the generators, as `(monomial, rhs)`.
pub const GENERATOR_REDUCTIONS: &[(&str, &str)] = &[
    ("c3*d1^2*d2", "f5 + f2*s2 - f3*s1"),
    ("c1*d1*d2^2", "-f5 - f0*s3 + f3*s1"),
    ("c3*d1*d2^2", "-f5 - f0*s3 - f2*s2 + f3*s1 + f4*s1"),
    ("c3*c1*d1^2*d2", "F5 + F2*s2 - F3*s1"),
    ("c1*c2*d1*d2^2", "-F5 - F0*s3 + F3*s1"),
    ("c3*c1*d1*d2^2", "-F5 - F0*s3 - F2*s2 + F3*s1 + F4*s1"),
];

/// Generators of the ideal of relations among `f0, …, f5, s1, s2, s3`, read as `T0, …, T8`.
pub const TRACE_RELATION_IDEAL: &[&str] = &[
    "T1*T5 - T2*T5 + T3^2 + T3*T4 + T4^2 - T0*T1*T8 + T0*T2*T8 - T0*T4*T7 + T1*T2*T7 - T1*T3*T6 + T0^2*T6*T8",
    "T3*T5 - T4*T5 - T0*T3*T8 + T0*T4*T8 - T1^2*T8 - T1*T2*T8 - T2^2*T8 + T2*T3*T7 - T3^2*T6 - T0^2*T7*T8 + T0*T1*T6*T8",
    "T5^2 + T0*T5*T8 + T1*T3*T8 - T1*T4*T8 - T2*T3*T8 + T2*T4*T8 + T2*T5*T7 + T3*T4*T7 + T3*T5*T6 + T0^2*T8^2 + T0*T2*T7*T8 + T0*T3*T6*T8 + T2^2*T6*T8 - T2*T3*T6*T7 + T3^2*T6^2",
    "T0*T3*T7 - T0*T4*T7 + T0*T5*T6 + T1*T2*T7 - T2^2*T7 - T2*T3*T6 + T2*T4*T6 - T0^2*T6*T8 - T0*T3*T6^2",
    "T0*T5*T7 + T1*T4*T7 - T1*T5*T6 - T2*T4*T7 + T2*T5*T6 - T3^2*T6 + T3*T4*T6 - T0^2*T7*T8 + T0*T2*T7^2 - T0*T3*T6*T7 - T1*T2*T6*T7 + T1*T3*T6^2",
    "T1^2*T7 + T1*T2*T7 - T1*T3*T6 + T1*T4*T6 + T2^2*T7 + T2*T3*T6 - T2*T4*T6 + T0^2*T7^2 - T0*T1*T6*T7 + T0*T3*T6^2",
    "T1*T3*T7 - T1*T4*T7 + T1*T5*T6 - T2*T3*T7 + T2*T4*T7 - T2*T5*T6 - T0*T1*T6*T8 + T0*T2*T6*T8 - T0*T2*T7^2 + T1*T2*T6*T7 - T1*T3*T6^2",
    "T2*T5*T7 - T3*T4*T7 + T4^2*T7 - T4*T5*T6 - T0*T2*T7*T8 + T0*T4*T6*T8 - T1*T2*T6*T8 + T2^2*T6*T8 + T2^2*T7^2 - T2*T3*T6*T7 - T2*T4*T6*T7 + T3*T4*T6^2 + T0*T2*T6^2*T8",
    "T3^3 - T4^3 + T0*T4*T5*T6 + T1^3*T8 - T1^2*T5*T6 - T1*T2*T5*T6 - T1*T3^2*T6 - T1*T4^2*T6 - T2^3*T8 + T2^2*T3*T7 - T2^2*T4*T7 - T2^2*T5*T6 - T2*T4^2*T6 + T0^2*T1*T7*T8 - T0^2*T2*T7*T8 + T0^2*T3*T6*T8 + T0^2*T3*T7^2 + T0^2*T4*T6*T8 - T0^2*T4*T7^2 - T0*T1*T2*T6*T8 + T0*T1*T2*T7^2 - T0*T1*T3*T6*T7 + T0*T1*T4*T6*T7 + T0*T2^2*T6*T8 - T0*T2^2*T7^2 + T0*T3^2*T6^2 + T0*T3*T4*T6^2 - T1^2*T2*T6*T7 + T1^2*T3*T6^2 + T1*T2^2*T6*T7 - T1*T2*T3*T6^2",
    "T3^2*T7 + T3*T4*T7 + T4^2*T7 + T1^2*T6*T8 + T1*T2*T6*T8 + T2^2*T6*T8 + T2^2*T7^2 - T2*T3*T6*T7 - T2*T4*T6*T7 + T3*T4*T6^2 + T0^2*T6*T7*T8 - T0*T1*T6^2*T8 + T0*T2*T6^2*T8",
];

/// The tags `T0, …, T8` naming `f0, …, f5, s1, s2, s3` in [`TRACE_RELATION_IDEAL`].
pub const TRACE_RELATION_TAGS: &[&str] = &["T0", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8"];

/// Orbit representatives `X_1` of monomials in the `d_i` used for the product-of-traces identity.
pub const ORBIT_IDENTITY_MONOMIALS: &[&str] = &["d1", "d1*d2", "d1^2*d2", "d1*d2^2"];

/// `T` with its cyclic action, the symmetric functions and the named generators.
pub struct InvariantRing {
    alg: Algebra,
    gamma: CyclicAction<F3>,
    names: HashMap<String, Element<F3>>,
    table: GeneratorTable,
}

impl Default for InvariantRing {
    fn default() -> Self {
        Self::new()
    }
}

impl InvariantRing {
    pub fn new() -> Self {
        let (alg, gamma) = polynomial_exterior_t::<F3>();
        let mut ring = InvariantRing {
            alg,
            gamma,
            names: HashMap::new(),
            table: GeneratorTable { entries: Vec::new() },
        };
        ring.build_names();
        ring
    }

    fn build_names(&mut self) {
        let tr = |r: &Self, s: &str| r.trace(&r.parse(s).expect("valid monomial")).expect("free orbit");
        let parse = |r: &Self, s: &str| r.parse(s).expect("valid polynomial");
        let s1 = tr(self, "d1");
        let s2 = tr(self, "d1*d2");
        let s3 = parse(self, "d1*d2*d3");
        let d = |r: &Self, a: &str, b: &str| &parse(r, a) - &parse(r, b);
        let delta = &(&d(self, "d1", "d2") * &d(self, "d2", "d3")) * &d(self, "d3", "d1");
        let cbar = parse(self, "c1*c2*c3");
        let cbar_delta = &cbar * &delta;
        let mut entries = vec![
            ("1", Element::one(&self.alg)),
            ("cbar", cbar),
            ("delta", delta),
            ("cbar_delta", cbar_delta),
        ];
        let f_args = ["c1", "c1*d1", "c1*d2", "c1*d1*d2", "c1*d2*d3", "c1*d1^2*d2"];
        let f_names = ["f0", "f1", "f2", "f3", "f4", "f5"];
        let big_names = ["F0", "F1", "F2", "F3", "F4", "F5"];
        for (k, arg) in f_args.iter().enumerate() {
            entries.push((f_names[k], tr(self, arg)));
        }
        for (k, arg) in f_args.iter().enumerate() {
            let big = arg.replacen("c1", "c1*c2", 1);
            entries.push((big_names[k], tr(self, &big)));
        }
        let mut table = Vec::new();
        for (name, element) in entries {
            let (q, t) = self.bidegree(&element).expect("homogeneous generator");
            self.names.insert(name.to_string(), element.clone());
            table.push(NamedGenerator { name: name.to_string(), q, t, element });
        }
        self.names.insert("s1".into(), s1);
        self.names.insert("s2".into(), s2);
        self.names.insert("s3".into(), s3);
        self.table = GeneratorTable { entries: table };
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn action(&self) -> &CyclicAction<F3> {
        &self.gamma
    }

    pub fn generators(&self) -> &GeneratorTable {
        &self.table
    }

    /// A named invariant: a generator from the table, `s1`, `s2` or `s3`.
    pub fn named(&self, name: &str) -> Result<&Element<F3>, InvariantsError> {
        self.names.get(name).ok_or_else(|| InvariantsError::UnknownName(name.to_string()))
    }

    /// Parse a polynomial in `c1, c2, c3, d1, d2, d3`.
    pub fn parse(&self, src: &str) -> Result<Element<F3>, InvariantsError> {
        Ok(Element::parse(&self.alg, src)?)
    }

    /// Evaluate a polynomial whose variables are named invariants, multiplying factors in the written order.
    pub fn evaluate(&self, src: &str) -> Result<Element<F3>, InvariantsError> {
        let mut out = Element::zero(&self.alg);
        for (c, factors) in parse_polynomial(src)? {
            let mut term = Element::constant(&self.alg, F3::from(c));
            for (name, e) in factors {
                let x = self.named(&name)?;
                for _ in 0..e {
                    term = &term * x;
                }
            }
            out = out + term;
        }
        Ok(out)
    }

    /// `k[c1, c2, c3, d1, d2, d3]` with commuting variables, under grevlex.
    pub fn commutative_ring(&self) -> Result<PolyRing, InvariantsError> {
        Ok(PolyRing::with_names(&self.alg.free_names(), MonomialOrder::Grevlex)?)
    }

    /// The image of an element of `T` in the commutative polynomial ring, keeping the
    /// coefficients of the ordered monomials.
    pub fn commutative_image(&self, ring: &PolyRing, x: &Element<F3>) -> Poly {
        ring.from_terms(
            x.terms().map(|(m, c)| (c.symmetric(), m.exponents().iter().map(|&e| e as u8).collect::<Vec<u8>>())),
        )
    }

    /// The ideal of relations among the named invariants, one tag per name, eliminated in
    /// the commutative ring, optionally with `c_i^2 = 0` imposed.
    pub fn relation_ideal(&self, names: &[&str], tags: &[&str], square_zero: bool) -> Result<GroebnerBasis, InvariantsError> {
        let ring = self.commutative_ring()?;
        let polys: Vec<Poly> =
            names.iter().map(|n| Ok(self.commutative_image(&ring, self.named(n)?))).collect::<Result<_, InvariantsError>>()?;
        let odd: Vec<usize> = if square_zero { (0..self.alg.n_free()).filter(|&i| self.alg.is_odd(i)).collect() } else { Vec::new() };
        Ok(algebraic_relations(&ring, &odd, &polys, tags)?)
    }

    /// `X + gX + g^2X` for any element.
    pub fn orbit_sum(&self, x: &Element<F3>) -> Element<F3> {
        let gx = self.gamma.apply(x);
        let ggx = self.gamma.apply(&gx);
        &(x + &gx) + &ggx
    }

    /// The trace of a monomial that is not fixed by the action.
    pub fn trace(&self, x: &Element<F3>) -> Result<Element<F3>, InvariantsError> {
        if x.len() != 1 {
            return Err(InvariantsError::NotMonomial(x.to_string()));
        }
        let (m, _) = x.leading().expect("one term");
        let gx = self.gamma.apply(x);
        if gx.coefficient(m) != F3::from(0) {
            return Err(InvariantsError::FixedMonomial(x.to_string()));
        }
        Ok(self.orbit_sum(x))
    }

    pub fn is_invariant(&self, x: &Element<F3>) -> bool {
        self.gamma.apply(x) == *x
    }

    fn exterior_degree(&self, m: &Monomial) -> u32 {
        m.exponents().iter().enumerate().filter(|&(i, _)| self.alg.is_odd(i)).map(|(_, &e)| e as u32).sum()
    }

    /// `(q, t)` of a nonzero bihomogeneous element.
    pub fn bidegree(&self, x: &Element<F3>) -> Option<(u32, i64)> {
        let mut out = None;
        for (m, _) in x.terms() {
            let b = (self.exterior_degree(m), self.alg.degree_of(m));
            if out.is_some_and(|o| o != b) {
                return None;
            }
            out = Some(b);
        }
        out
    }

    /// Monomials of bidegree `(q, t)`.
    pub fn bidegree_basis(&self, q: u32, t: i64) -> Vec<Monomial> {
        let all = self.alg.basis_in_degree(t).expect("T has finite pieces");
        all.into_iter().filter(|m| self.exterior_degree(m) == q).collect()
    }

    fn coordinates(&self, basis: &[Monomial], x: &Element<F3>) -> Vec<i64> {
        basis.iter().map(|m| x.coefficient(m).value() as i64).collect()
    }

    /// The generator acting on bidegree `(q, t)`, in the monomial basis.
    pub fn action_matrix(&self, q: u32, t: i64) -> (Vec<Monomial>, ModMatrix) {
        let basis = self.bidegree_basis(q, t);
        let n = basis.len();
        let mut m = ModMatrix::zeros(n, n, 3);
        for (j, b) in basis.iter().enumerate() {
            let x = Element::monomial(&self.alg, b.clone(), F3::from(1));
            for (i, c) in self.coordinates(&basis, &self.gamma.apply(&x)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        (basis, m)
    }

    /// Coordinates of a bihomogeneous element in [`bidegree_basis`](Self::bidegree_basis).
    pub fn coordinates_in(&self, q: u32, t: i64, x: &Element<F3>) -> Vec<i64> {
        self.coordinates(&self.bidegree_basis(q, t), x)
    }

    /// An `F_3`-basis of the invariants of bidegree `(q, t)`.
    pub fn invariant_basis(&self, q: u32, t: i64) -> Vec<Element<F3>> {
        let (basis, gamma) = self.action_matrix(q, t);
        let m = gamma.sub(&ModMatrix::identity(basis.len(), 3));
        kernel_mod_p(&m)
            .into_iter()
            .map(|v| {
                let mut e = Element::zero(&self.alg);
                for (b, c) in basis.iter().zip(v) {
                    if c != 0 {
                        e = e + Element::monomial(&self.alg, b.clone(), F3::from(c as i64));
                    }
                }
                e
            })
            .collect()
    }

    /// Monomials `s1^a s2^b s3^c` of internal degree `t`.
    pub fn symmetric_monomials(&self, t: i64) -> Vec<Element<F3>> {
        self.symmetric_monomials_named(t).into_iter().map(|(_, e)| e).collect()
    }

    /// Compare the invariants with the free `S`-module on the generators in one bidegree.
    pub fn check_degree(&self, q: u32, t: i64) -> DegreeCheck {
        let basis = self.bidegree_basis(q, t);
        let invariant_dim = self.invariant_basis(q, t).len();
        let mut products = Vec::new();
        for g in self.table.entries.iter().filter(|g| g.q == q && g.t >= t) {
            for s in self.symmetric_monomials(t - g.t) {
                products.push(&s * &g.element);
            }
        }
        let products_invariant = products.iter().all(|p| self.is_invariant(p));
        let mut m = ModMatrix::zeros(basis.len(), products.len(), 3);
        for (j, p) in products.iter().enumerate() {
            for (i, c) in self.coordinates(&basis, p).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let span_rank = if products.is_empty() { 0 } else { rank_mod_p(&m) };
        DegreeCheck { q, t, invariant_dim, free_dim: products.len(), span_rank, products_invariant }
    }

    /// [`check_degree`](Self::check_degree) for every `q` in `0..=3` and every `t` in `t_min..=t_max`.
    pub fn verify_free_generation(&self, t_min: i64, t_max: i64) -> FreenessReport {
        let mut degrees = Vec::new();
        for t in (t_min..=t_max.min(0)).rev() {
            for q in 0..=3 {
                let check = self.check_degree(q, t);
                if check.invariant_dim > 0 || check.free_dim > 0 {
                    degrees.push(check);
                }
            }
        }
        FreenessReport { degrees }
    }

    /// Names of the free `S`-basis in bidegree `(q, t)`: a generator times a
    /// monomial in `s1, s2, s3`, such as `f0*s1*s3`, `s3^2` or `cbar`.
    pub fn free_basis_names(&self, q: u32, t: i64) -> Vec<String> {
        let mut out = Vec::new();
        for g in self.table.entries.iter().filter(|g| g.q == q && g.t >= t) {
            for (label, _) in self.symmetric_monomials_named(t - g.t) {
                out.push(product_name(&g.name, &label));
            }
        }
        out
    }

    /// Write a bihomogeneous invariant as an `S`-combination of the generators,
    /// e.g. `F0*s1 - F1`, or `None` if it is not in their span.
    pub fn express(&self, x: &Element<F3>) -> Option<String> {
        if x.is_zero() {
            return Some("0".into());
        }
        let (q, t) = self.bidegree(x)?;
        let basis = self.bidegree_basis(q, t);
        let mut labels = Vec::new();
        let mut columns = Vec::new();
        for g in self.table.entries.iter().filter(|g| g.q == q && g.t >= t) {
            for (label, s) in self.symmetric_monomials_named(t - g.t) {
                labels.push(if label.is_empty() { g.name.clone() } else { format!("{}*{label}", g.name) });
                columns.push(self.coordinates(&basis, &(&s * &g.element)));
            }
        }
        columns.push(self.coordinates(&basis, x));
        let mut m = ModMatrix::zeros(basis.len(), columns.len(), 3);
        for (j, col) in columns.iter().enumerate() {
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let last = columns.len() - 1;
        let v = kernel_mod_p(&m).into_iter().find(|v| v[last] != 0)?;
        // Normalise so that the coefficient of x is -1: then x = sum v_j * column_j.
        let scale = if v[last] == 2 { 1 } else { 2 };
        let mut out = String::new();
        for (j, label) in labels.iter().enumerate() {
            match (v[j] * scale) % 3 {
                0 => continue,
                1 => out.push_str(if out.is_empty() { "" } else { " + " }),
                _ => out.push_str(if out.is_empty() { "-" } else { " - " }),
            }
            out.push_str(label);
        }
        Some(out)
    }

    /// [`symmetric_monomials`](Self::symmetric_monomials) with their names, `""` for `1`.
    fn symmetric_monomials_named(&self, t: i64) -> Vec<(String, Element<F3>)> {
        let mut out = Vec::new();
        if t > 0 {
            return out;
        }
        let total = -t;
        for a in 0..=total / 6 {
            for b in 0..=(total - 6 * a) / 12 {
                let rest = total - 6 * a - 12 * b;
                if rest % 18 != 0 {
                    continue;
                }
                let c = rest / 18;
                let mut factors = Vec::new();
                for (name, e) in [("s1", a), ("s2", b), ("s3", c)] {
                    match e {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        _ => factors.push(format!("{name}^{e}")),
                    }
                }
                let label = factors.join("*");
                let value = self.evaluate(if label.is_empty() { "1" } else { &label }).expect("named symmetric functions");
                out.push((label, value));
            }
        }
        out
    }

    fn check_identity(&self, lhs_text: String, lhs: Element<F3>, rhs: &str) -> Result<IdentityCheck, InvariantsError> {
        let rhs_value = self.evaluate(rhs)?;
        Ok(IdentityCheck { lhs: lhs_text, rhs: rhs.to_string(), holds: lhs == rhs_value })
    }

    /// Every product relation of [`RELATION_SUITE`], expanded in `T`.
    pub fn verify_relation_suite(&self) -> Result<Vec<IdentityCheck>, InvariantsError> {
        RELATION_SUITE.iter().map(|(l, r)| self.check_identity(l.to_string(), self.evaluate(l)?, r)).collect()
    }

    /// The reductions of [`GENERATOR_REDUCTIONS`] and the product-of-traces identity on each
    /// orbit of [`ORBIT_IDENTITY_MONOMIALS`].
    pub fn verify_generator_reductions(&self) -> Result<Vec<IdentityCheck>, InvariantsError> {
        let mut out = Vec::new();
        for (mono, rhs) in GENERATOR_REDUCTIONS {
            let lhs = self.trace(&self.parse(mono)?)?;
            out.push(self.check_identity(format!("tr({mono})"), lhs, rhs)?);
        }
        let f0 = self.named("f0")?;
        for x in ORBIT_IDENTITY_MONOMIALS {
            let x1 = self.parse(x)?;
            let lhs = f0 * &self.orbit_sum(&x1);
            let mut rhs = Element::zero(&self.alg);
            for c in ["c1", "c2", "c3"] {
                rhs = rhs + self.trace(&(&self.parse(c)? * &x1))?;
            }
            out.push(IdentityCheck {
                lhs: format!("(c1+c2+c3)*tr({x})"),
                rhs: format!("tr(c1*{x}) + tr(c2*{x}) + tr(c3*{x})"),
                holds: lhs == rhs,
            });
        }
        Ok(out)
    }
}
