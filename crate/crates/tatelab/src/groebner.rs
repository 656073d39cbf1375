//! Commutative polynomials over `F_3`, Buchberger's algorithm and elimination.
//!
//! Monomials are exponent arrays with a precomputed order key. Every supported
//! order has a key that is additive in the exponents, so multiplying a
//! polynomial by a monomial shifts keys without re-sorting. Polynomials keep
//! their terms in descending key order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::polyparse::{parse_polynomial, ParseError};

/// Largest number of variables a ring may have.
pub const MAX_VARS: usize = 24;
const KEY_LEN: usize = MAX_VARS + 2;
const P: u8 = 3;

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("a ring has at most {MAX_VARS} variables, got {0}")]
    TooManyVariables(usize),
    #[error("variable weights must be positive and match the variables")]
    BadWeights,
    #[error("exponent overflow in {0}")]
    ExponentOverflow(String),
}

/// Admissible monomial orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    /// Weighted degree, then reverse lexicographic.
    Grevlex,
    /// The first `eliminate` variables are compared first (weighted grevlex), then the rest.
    Elimination { eliminate: usize },
}

type Exps = [u8; MAX_VARS];
type Key = [i32; KEY_LEN];

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    key: Key,
    exps: Exps,
    coeff: u8,
}

/// A polynomial over `F_3` in some [`PolyRing`]; terms are in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponents and coefficient (in `{1, 2}`) of each term, in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u8], u8)> {
        self.terms.iter().map(|t| (&t.exps[..], t.coeff))
    }

    pub fn leading_exponents(&self) -> Option<&[u8]> {
        self.terms.first().map(|t| &t.exps[..])
    }

    fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

/// Variables, weights and monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    variables: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
}

fn add_mod(a: u8, b: u8) -> u8 {
    (a + b) % P
}

fn mul_mod(a: u8, b: u8) -> u8 {
    ((a as u16 * b as u16) % P as u16) as u8
}

fn neg_mod(a: u8) -> u8 {
    (P - a) % P
}

fn inv_mod(a: u8) -> u8 {
    // In F_3 every unit is its own inverse.
    debug_assert!(a % P != 0);
    a
}

fn to_coeff(c: i64) -> u8 {
    c.rem_euclid(P as i64) as u8
}

fn divides(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &Exps, b: &Exps) -> Exps {
    let mut out = [0u8; MAX_VARS];
    for i in 0..MAX_VARS {
        out[i] = a[i].max(b[i]);
    }
    out
}

fn disjoint(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn sub_exps(a: &Exps, b: &Exps) -> Exps {
    let mut out = [0u8; MAX_VARS];
    for i in 0..MAX_VARS {
        out[i] = a[i] - b[i];
    }
    out
}

fn add_keys(a: &Key, b: &Key) -> Key {
    let mut out = [0i32; KEY_LEN];
    for i in 0..KEY_LEN {
        out[i] = a[i] + b[i];
    }
    out
}

impl PolyRing {
    pub fn new(variables: Vec<String>, weights: Vec<u32>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        if variables.len() > MAX_VARS {
            return Err(GroebnerError::TooManyVariables(variables.len()));
        }
        if weights.len() != variables.len() || weights.contains(&0) {
            return Err(GroebnerError::BadWeights);
        }
        if let MonomialOrder::Elimination { eliminate } = order {
            assert!(eliminate <= variables.len(), "elimination block larger than the ring");
        }
        Ok(PolyRing { variables, weights, order })
    }

    /// Unit weights.
    pub fn with_names(names: &[&str], order: MonomialOrder) -> Result<Self, GroebnerError> {
        Self::new(names.iter().map(|s| s.to_string()).collect(), vec![1; names.len()], order)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// The same variables with another order.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing { order, ..self.clone() }
    }

    fn grevlex_block(&self, e: &Exps, range: std::ops::Range<usize>, out: &mut Key, at: usize) -> usize {
        let deg: i32 = range.clone().map(|i| self.weights[i] as i32 * e[i] as i32).sum();
        out[at] = deg;
        let mut pos = at + 1;
        for i in range.rev() {
            out[pos] = -(e[i] as i32);
            pos += 1;
        }
        pos
    }

    fn key(&self, e: &Exps) -> Key {
        let n = self.n_vars();
        let mut k = [0i32; KEY_LEN];
        match self.order {
            MonomialOrder::Lex => {
                for i in 0..n {
                    k[i] = e[i] as i32;
                }
            }
            MonomialOrder::Grevlex => {
                self.grevlex_block(e, 0..n, &mut k, 0);
            }
            MonomialOrder::Elimination { eliminate } => {
                let at = self.grevlex_block(e, 0..eliminate, &mut k, 0);
                self.grevlex_block(e, eliminate..n, &mut k, at);
            }
        }
        k
    }

    /// Weighted degree of an exponent vector.
    pub fn degree(&self, exps: &[u8]) -> u32 {
        exps.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    /// Compare two exponent vectors in this ring's order.
    pub fn compare(&self, a: &[u8], b: &[u8]) -> Ordering {
        self.key(&pad(a)).cmp(&self.key(&pad(b)))
    }

    /// Build a polynomial from `(coefficient, exponents)` pairs, combining like terms.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (i64, Vec<u8>)>) -> Poly {
        let mut acc: HashMap<Exps, u8> = HashMap::new();
        for (c, e) in terms {
            assert!(e.len() <= self.n_vars(), "too many exponents");
            let v = acc.entry(pad(&e)).or_insert(0);
            *v = add_mod(*v, to_coeff(c));
        }
        self.collect(acc)
    }

    fn collect(&self, acc: HashMap<Exps, u8>) -> Poly {
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| Term { key: self.key(&e), exps: e, coeff: c }).collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        Poly { terms }
    }

    pub fn constant(&self, c: i64) -> Poly {
        self.from_terms([(c, vec![])])
    }

    pub fn variable(&self, i: usize) -> Poly {
        let mut e = vec![0u8; i + 1];
        e[i] = 1;
        self.from_terms([(1, e)])
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, GroebnerError> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| GroebnerError::UnknownVariable(name.to_string()))
    }

    /// Parse text such as `T1*T5 - T2*T5 + T3^2`.
    pub fn parse(&self, src: &str) -> Result<Poly, GroebnerError> {
        let mut terms = Vec::new();
        for (c, factors) in parse_polynomial(src)? {
            let mut e = vec![0u8; self.n_vars()];
            for (name, k) in factors {
                let i = self.variable_index(&name)?;
                let v = e[i] as u32 + k;
                e[i] = u8::try_from(v).map_err(|_| GroebnerError::ExponentOverflow(src.to_string()))?;
            }
            terms.push((c, e));
        }
        Ok(self.from_terms(terms))
    }

    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, t) in p.terms.iter().enumerate() {
            let factors: Vec<String> = (0..self.n_vars())
                .filter(|&i| t.exps[i] > 0)
                .map(|i| {
                    if t.exps[i] == 1 {
                        self.variables[i].clone()
                    } else {
                        format!("{}^{}", self.variables[i], t.exps[i])
                    }
                })
                .collect();
            let negative = t.coeff == 2;
            match (k, negative) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            if factors.is_empty() {
                out.push('1');
            } else {
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        merge(a, b, 1, None)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        merge(a, b, neg_mod(1), None)
    }

    pub fn scale(&self, a: &Poly, c: i64) -> Poly {
        let c = to_coeff(c);
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: a.terms.iter().map(|t| Term { coeff: mul_mod(t.coeff, c), ..t.clone() }).collect() }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut acc: HashMap<Exps, u8> = HashMap::new();
        for x in &a.terms {
            for y in &b.terms {
                let mut e = x.exps;
                for i in 0..MAX_VARS {
                    e[i] = e[i].checked_add(y.exps[i]).expect("exponent overflow");
                }
                let v = acc.entry(e).or_insert(0);
                *v = add_mod(*v, mul_mod(x.coeff, y.coeff));
            }
        }
        self.collect(acc)
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        (0..e).fold(self.constant(1), |acc, _| self.mul(&acc, a))
    }

    /// Re-express `p`, a polynomial of `from`, in this ring with variable `i` of `from`
    /// sent to variable `map[i]` here.
    pub fn rekey(&self, p: &Poly, map: &[Option<usize>]) -> Poly {
        let terms = p.terms.iter().map(|t| {
            let mut e = vec![0u8; self.n_vars()];
            for (i, &x) in t.exps.iter().enumerate().filter(|(_, &x)| x > 0) {
                let j = map[i].expect("variable is not mapped");
                e[j] += x;
            }
            (t.coeff as i64, e)
        });
        self.from_terms(terms)
    }

    /// Monic multiple of `p`.
    fn monic(&self, p: &Poly) -> Poly {
        match p.terms.first() {
            Some(t) if t.coeff != 1 => self.scale(p, inv_mod(t.coeff) as i64),
            _ => p.clone(),
        }
    }

    /// S-polynomial of two nonzero polynomials.
    pub fn s_polynomial(&self, f: &Poly, g: &Poly) -> Poly {
        let l = lcm(&f.lead().exps, &g.lead().exps);
        let mf = sub_exps(&l, &f.lead().exps);
        let mg = sub_exps(&l, &g.lead().exps);
        let a = shift(self, f, &mf, inv_mod(f.lead().coeff));
        let b = shift(self, g, &mg, inv_mod(g.lead().coeff));
        merge(&a, &b, neg_mod(1), None)
    }
}

fn pad(e: &[u8]) -> Exps {
    let mut out = [0u8; MAX_VARS];
    out[..e.len()].copy_from_slice(e);
    out
}

/// `c * x^m * f`.
fn shift(ring: &PolyRing, f: &Poly, m: &Exps, c: u8) -> Poly {
    let mk = ring.key(m);
    Poly {
        terms: f
            .terms
            .iter()
            .map(|t| {
                let mut e = t.exps;
                for i in 0..MAX_VARS {
                    e[i] += m[i];
                }
                Term { key: add_keys(&t.key, &mk), exps: e, coeff: mul_mod(t.coeff, c) }
            })
            .collect(),
    }
}

/// `a + c * x^m * b` (with `m = 0` when `shift` is `None`), merging sorted term lists.
fn merge(a: &Poly, b: &Poly, c: u8, shift: Option<(&Exps, &Key)>) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let shifted = |t: &Term| -> Term {
        match shift {
            None => Term { coeff: mul_mod(t.coeff, c), ..t.clone() },
            Some((m, k)) => {
                let mut e = t.exps;
                for i in 0..MAX_VARS {
                    e[i] += m[i];
                }
                Term { key: add_keys(&t.key, k), exps: e, coeff: mul_mod(t.coeff, c) }
            }
        }
    };
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let y = shifted(&b.terms[j]);
        match a.terms[i].key.cmp(&y.key) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(y);
                j += 1;
            }
            Ordering::Equal => {
                let s = add_mod(a.terms[i].coeff, y.coeff);
                if s != 0 {
                    out.push(Term { coeff: s, ..y });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(shifted));
    Poly { terms: out }
}

/// Fully reduced remainder of `p` modulo `basis`; zero iff `p` lies in the ideal when
/// `basis` is a Groebner basis.
pub fn normal_form(ring: &PolyRing, p: &Poly, basis: &[Poly]) -> Poly {
    let leads: Vec<(&Exps, u8)> = basis.iter().filter(|g| !g.is_zero()).map(|g| (&g.lead().exps, g.lead().coeff)).collect();
    let nonzero: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    while let Some(lt) = rest.terms.first() {
        match leads.iter().position(|(e, _)| divides(e, &lt.exps)) {
            Some(k) => {
                let g = nonzero[k];
                let m = sub_exps(&lt.exps, leads[k].0);
                let c = neg_mod(mul_mod(lt.coeff, inv_mod(leads[k].1)));
                let mk = ring.key(&m);
                rest = merge(&rest, g, c, Some((&m, &mk)));
            }
            None => {
                remainder.push(rest.terms.remove(0));
            }
        }
    }
    Poly { terms: remainder }
}

/// A reduced Groebner basis: monic, auto-reduced, sorted by ascending leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: PolyRing,
    polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        normal_form(&self.ring, p, &self.polys)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Every polynomial of `others` lies in this ideal.
    pub fn contains_all(&self, others: &[Poly]) -> bool {
        others.iter().all(|p| self.contains(p))
    }

    /// Every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        (0..self.polys.len()).all(|i| {
            (i + 1..self.polys.len()).all(|j| self.reduce(&self.ring.s_polynomial(&self.polys[i], &self.polys[j])).is_zero())
        })
    }

    /// No leading term divides a term of another element, and every element is monic.
    pub fn is_reduced(&self) -> bool {
        self.polys.iter().enumerate().all(|(i, f)| {
            f.lead().coeff == 1
                && self.polys.iter().enumerate().all(|(j, g)| i == j || !f.terms.iter().any(|t| divides(&g.lead().exps, &t.exps)))
        })
    }

    pub fn format(&self) -> Vec<String> {
        self.polys.iter().map(|p| self.ring.format(p)).collect()
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
    degree: u32,
    key: Key,
}

/// Buchberger's algorithm with the Gebauer-Moeller criteria and the normal selection strategy.
pub fn buchberger(ring: &PolyRing, gens: &[Poly]) -> GroebnerBasis {
    let mut polys: Vec<Poly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut input: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| ring.monic(g)).collect();
    input.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    for g in input {
        let h = ring.monic(&normal_form(ring, &g, &active_polys(&polys, &active)));
        if !h.is_zero() {
            update(ring, &mut polys, &mut active, &mut pairs, h);
        }
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| pairs[a].degree.cmp(&pairs[b].degree).then(pairs[a].key.cmp(&pairs[b].key)))
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let s = ring.s_polynomial(&polys[pair.i], &polys[pair.j]);
        let h = normal_form(ring, &s, &active_polys(&polys, &active));
        if !h.is_zero() {
            update(ring, &mut polys, &mut active, &mut pairs, ring.monic(&h));
        }
    }
    let minimal: Vec<Poly> = active_polys(&polys, &active);
    let mut reduced: Vec<Poly> = Vec::with_capacity(minimal.len());
    for (k, f) in minimal.iter().enumerate() {
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, g)| g.clone()).collect();
        let tail = Poly { terms: f.terms[1..].to_vec() };
        let mut r = normal_form(ring, &tail, &others);
        r.terms.insert(0, f.lead().clone());
        reduced.push(r);
    }
    reduced.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    GroebnerBasis { ring: ring.clone(), polys: reduced }
}

fn active_polys(polys: &[Poly], active: &[bool]) -> Vec<Poly> {
    polys.iter().zip(active).filter(|(_, &a)| a).map(|(p, _)| p.clone()).collect()
}

/// Gebauer-Moeller update after adding `h`.
fn update(ring: &PolyRing, polys: &mut Vec<Poly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Poly) {
    let hi = polys.len();
    let lh = h.lead().exps;
    polys.push(h);
    active.push(true);
    let candidates: Vec<usize> = (0..hi).filter(|&g| active[g]).collect();
    let lcm_with = |g: usize| lcm(&lh, &polys[g].lead().exps);
    // Chain criterion among the new pairs, keeping coprime pairs until the product criterion.
    let mut kept: Vec<usize> = Vec::new();
    for (idx, &g1) in candidates.iter().enumerate() {
        let l1 = lcm_with(g1);
        let coprime = disjoint(&lh, &polys[g1].lead().exps);
        let dominated = candidates[idx + 1..].iter().any(|&g2| divides(&lcm_with(g2), &l1))
            || kept.iter().any(|&g2| divides(&lcm_with(g2), &l1));
        if coprime || !dominated {
            kept.push(g1);
        }
    }
    let new_pairs: Vec<usize> = kept.into_iter().filter(|&g| !disjoint(&lh, &polys[g].lead().exps)).collect();
    pairs.retain(|p| {
        !(divides(&lh, &p.lcm)
            && lcm(&polys[p.i].lead().exps, &lh) != p.lcm
            && lcm(&lh, &polys[p.j].lead().exps) != p.lcm)
    });
    for g in new_pairs {
        let l = lcm_with(g);
        pairs.push(Pair { i: g, j: hi, lcm: l, degree: ring.degree(&l), key: ring.key(&l) });
    }
    for g in candidates {
        if divides(&lh, &polys[g].lead().exps) {
            active[g] = false;
        }
    }
}

/// The ideal of algebraic relations among `polys`, with tags named by `tags`.
///
/// The ring is extended by one tag variable per polynomial, weighted by the
/// polynomial's top weighted degree, and `tag_i - f_i` together with the squares
/// of the `square_zero` variables are eliminated under a block order. The result
/// is a Groebner basis in the tag ring under weighted grevlex.
pub fn algebraic_relations(
    ambient: &PolyRing,
    square_zero: &[usize],
    polys: &[Poly],
    tags: &[&str],
) -> Result<GroebnerBasis, GroebnerError> {
    assert_eq!(polys.len(), tags.len(), "one tag per polynomial");
    let n = ambient.n_vars();
    let tag_weights: Vec<u32> =
        polys.iter().map(|p| p.terms.iter().map(|t| ambient.degree(&t.exps)).max().unwrap_or(1).max(1)).collect();
    let mut names = ambient.variables.clone();
    names.extend(tags.iter().map(|s| s.to_string()));
    let mut weights = ambient.weights.clone();
    weights.extend(&tag_weights);
    let big = PolyRing::new(names, weights, MonomialOrder::Elimination { eliminate: n })?;
    let embed: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut gens = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        gens.push(big.sub(&big.variable(n + k), &big.rekey(p, &embed)));
    }
    for &v in square_zero {
        gens.push(big.pow(&big.variable(v), 2));
    }
    let gb = buchberger(&big, &gens);
    let small = PolyRing::new(tags.iter().map(|s| s.to_string()).collect(), tag_weights, MonomialOrder::Grevlex)?;
    let project: Vec<Option<usize>> = (0..n + tags.len()).map(|i| i.checked_sub(n)).collect();
    let relations: Vec<Poly> = gb
        .polys
        .iter()
        .filter(|p| p.terms.iter().all(|t| t.exps[..n].iter().all(|&e| e == 0)))
        .map(|p| small.rekey(p, &project))
        .collect();
    // Already a reduced basis of the elimination ideal; recompute to fix the order on tags.
    Ok(buchberger(&small, &relations))
}

/// Mutual containment of two ideals given by Groebner bases in the same variables.
pub fn ideals_equal(a: &GroebnerBasis, b: &GroebnerBasis) -> bool {
    a.contains_all(&b.polys) && b.contains_all(&a.polys)
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.format().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(names: &[&str], order: MonomialOrder) -> PolyRing {
        PolyRing::with_names(names, order).unwrap()
    }

    #[test]
    fn single_variable_ideal() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let gb = buchberger(&r, &[r.parse("x").unwrap()]);
        assert_eq!(gb.format(), vec!["x"]);
    }

    #[test]
    fn lex_elimination_of_two_quadrics() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = buchberger(&r, &[r.parse("x^2 - y").unwrap(), r.parse("y^2 - x").unwrap()]);
        assert!(gb.contains(&r.parse("y^4 - y").unwrap()));
        assert!(gb.format().contains(&"y^4 - y".to_string()));
        assert!(gb.is_groebner() && gb.is_reduced());
    }

    #[test]
    fn normal_form_basics() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let gb = buchberger(&r, &[r.parse("x*y - 1").unwrap(), r.parse("x^2 + y").unwrap()]);
        for g in gb.polys() {
            assert!(gb.reduce(g).is_zero());
        }
        let proper = buchberger(&r, &[r.parse("x^2").unwrap()]);
        assert_eq!(proper.reduce(&r.constant(1)), r.constant(1));
    }

    #[test]
    fn formatting_round_trips() {
        let r = ring(&["T0", "T1"], MonomialOrder::Grevlex);
        let p = r.parse("T1*T0 - T0^2 + 2 - T1").unwrap();
        assert_eq!(r.format(&p), "-T0^2 + T0*T1 - T1 - 1");
        assert_eq!(r.parse(&r.format(&p)).unwrap(), p);
        assert!(matches!(r.parse("z"), Err(GroebnerError::UnknownVariable(_))));
    }

    #[test]
    fn symmetric_functions_and_alternant() {
        let amb = ring(&["d1", "d2", "d3"], MonomialOrder::Grevlex);
        let f = |s: &str| amb.parse(s).unwrap();
        let delta = amb.mul(&amb.mul(&f("d1 - d2"), &f("d2 - d3")), &f("d3 - d1"));
        let polys = [f("d1 + d2 + d3"), f("d1*d2 + d2*d3 + d1*d3"), f("d1*d2*d3"), delta];
        let rel = algebraic_relations(&amb, &[], &polys, &["s1", "s2", "s3", "delta"]).unwrap();
        assert_eq!(rel.len(), 1);
        let expected = rel.ring().parse("delta^2 + s2^3 + s1^3*s3 - s1^2*s2^2").unwrap();
        assert!(rel.contains(&expected));
        let principal = buchberger(rel.ring(), &[expected]);
        assert!(ideals_equal(&rel, &principal));
    }

    #[test]
    fn single_variable_has_no_relations() {
        let amb = ring(&["d1", "d2"], MonomialOrder::Grevlex);
        let rel = algebraic_relations(&amb, &[], &[amb.parse("d1").unwrap()], &["T"]).unwrap();
        assert!(rel.is_empty());
    }

    #[test]
    fn square_zero_variables() {
        let amb = ring(&["c1", "c2"], MonomialOrder::Grevlex);
        let rel = algebraic_relations(&amb, &[0, 1], &[amb.parse("c1 + c2").unwrap()], &["T"]).unwrap();
        // (c1 + c2)^2 = 2 c1 c2 and (c1 + c2)^3 = 0.
        assert!(rel.contains(&rel.ring().parse("T^3").unwrap()));
        assert!(!rel.contains(&rel.ring().parse("T^2").unwrap()));
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<(i64, Vec<u8>)>> {
        proptest::collection::vec((1i64..3, proptest::collection::vec(0u8..3, 3)), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn groebner_postconditions(gens in proptest::collection::vec(poly_strategy(), 1..4)) {
            let r = ring(&["x", "y", "z"], MonomialOrder::Grevlex);
            let polys: Vec<Poly> = gens.into_iter().map(|t| r.from_terms(t)).collect();
            let gb = buchberger(&r, &polys);
            prop_assert!(gb.is_groebner());
            prop_assert!(gb.is_reduced());
            prop_assert!(gb.contains_all(&polys));
            let again = buchberger(&r, gb.polys());
            prop_assert_eq!(&again, &gb);
            // Ideal equality does not depend on the order.
            let lex = r.with_order(MonomialOrder::Lex);
            let relex: Vec<Poly> = polys.iter().map(|p| lex.rekey(p, &[Some(0), Some(1), Some(2)])).collect();
            let gb_lex = buchberger(&lex, &relex);
            let back: Vec<Poly> = gb_lex.polys().iter().map(|p| r.rekey(p, &[Some(0), Some(1), Some(2)])).collect();
            prop_assert!(gb.contains_all(&back));
            let forward: Vec<Poly> = gb.polys().iter().map(|p| lex.rekey(p, &[Some(0), Some(1), Some(2)])).collect();
            prop_assert!(gb_lex.contains_all(&forward));
        }

        #[test]
        fn normal_form_is_linear(a in poly_strategy(), b in poly_strategy(), g in poly_strategy()) {
            let r = ring(&["x", "y", "z"], MonomialOrder::Grevlex);
            let gb = buchberger(&r, &[r.from_terms(g)]);
            let (a, b) = (r.from_terms(a), r.from_terms(b));
            prop_assert_eq!(gb.reduce(&r.add(&a, &b)), r.add(&gb.reduce(&a), &gb.reduce(&b)));
        }
    }
}
