//! The Serre spectral sequence of `C_3 -> C_9 -> C_9/C_3` with Tate cohomology inside,
//! `E_2^{p,q} = H^p(C_9/C_3; Ĥ^q(C_3; M)) => Ĥ^{p+q}(C_9; M)`, and its comparison
//! with a direct computation of `Ĥ^*(C_9; M)`.
//!
//! The inner cohomology is modelled by the ring `T = F_3[d1,d2,d3] (x) Λ[c1,c2,c3]`
//! tensored with `F_3[b1^±]`, where `b1` has bidegree `(q, t) = (2, 0)`. A class in
//! `T` with `j` exterior factors sits in `q ≡ j (mod 2)`. The column `p = 0` is the
//! ordinary invariants of the outer group, computed as a kernel over `F_3`, and the
//! columns `p > 0` are its Tate cohomology, read off from the decomposition of each
//! bidegree into trivial, two-dimensional and free summands.
//!
//! Every entry is an `F_3`-vector space whose basis is labelled by a [`ClassLabel`].
//! Differentials are matrices between labelled entries; after taking homology a
//! surviving class keeps the label of its leading coordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic_cohomology::{
    decompose_c3, tate_of_module, tate_structure_in_degree, CohomologyError, CyclicModule, TateStructure,
};
use crate::gca::CyclicAction;
use crate::invariants::{product_name, InvariantRing, InvariantsError};
use crate::rings::{kernel_mod_p, rank_mod_p, ModMatrix};

#[derive(Debug, Error)]
pub enum SerreError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error("bidegree (q, t) = ({q}, {t}): {invariants} invariants but {free} free basis elements")]
    FreeBasisMismatch { q: u32, t: i64, invariants: usize, free: usize },
    #[error("bidegree (q, t) = ({q}, {t}): outer Tate cohomology has dimension {dimension}, {labelled} classes identified")]
    UnlabelledClasses { q: u32, t: i64, dimension: usize, labelled: usize },
    #[error("differential {from:?} -> {to:?} does not have degree (r, 1 - r, 0) for r = {r}")]
    BadDegree { r: u32, from: Position, to: Position },
    #[error("differential {from:?} -> {to:?} has the wrong shape")]
    BadShape { from: Position, to: Position },
    #[error("d_{r} on page E_{page}")]
    WrongPage { r: u32, page: u32 },
    #[error("d o d is nonzero on {from:?}")]
    NotADifferential { from: Position },
    #[error("class {label} is missing at {position:?}")]
    MissingClass { position: Position, label: ClassLabel },
    #[error("extension from {from:?} to {to:?} is inconsistent with the filtration")]
    BadExtension { from: Position, to: Position },
}

/// `(p, q, t)`: outer degree, inner degree and internal degree.
pub type Position = (i64, i64, i64);

/// The functor applied to the inner cohomology in a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OuterFunctor {
    /// Ordinary invariants `H^0`.
    Invariants,
    /// Tate cohomology, 2-periodic in `p`.
    Tate,
    /// Ordinary group cohomology `H^p`.
    Ordinary,
}

/// A basis class `a2^ε b2^m b1^k x` of an entry, with `x` an element of the inner ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassLabel {
    pub a2: bool,
    pub b2: u32,
    pub b1: i64,
    pub inner: String,
}

impl ClassLabel {
    pub fn new(a2: bool, b2: u32, b1: i64, inner: &str) -> Self {
        ClassLabel { a2, b2, b1, inner: inner.to_string() }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.a2 {
            parts.push("a2".to_string());
        }
        match self.b2 {
            0 => {}
            1 => parts.push("b2".into()),
            m => parts.push(format!("b2^{m}")),
        }
        match self.b1 {
            0 => {}
            1 => parts.push("b1".into()),
            k => parts.push(format!("b1^{k}")),
        }
        if self.inner != "1" || parts.is_empty() {
            parts.push(self.inner.clone());
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Range of internal degrees, total degrees `n = p + q` and outer degrees covered by a page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SerreWindow {
    pub t_min: i64,
    pub t_max: i64,
    pub n_min: i64,
    pub n_max: i64,
    pub p_max: i64,
}

impl Default for SerreWindow {
    fn default() -> Self {
        SerreWindow { t_min: -60, t_max: 0, n_min: 1, n_max: 4, p_max: 5 }
    }
}

impl SerreWindow {
    /// The window extended so that every differential into or out of it is present.
    fn assembled(&self) -> SerreWindow {
        SerreWindow { n_min: self.n_min - 1, n_max: self.n_max + 1, p_max: self.p_max + 3, ..*self }
    }

    fn contains(&self, (p, q, t): Position) -> bool {
        (0..=self.p_max).contains(&p) && (self.n_min..=self.n_max).contains(&(p + q)) && (self.t_min..=self.t_max).contains(&t)
    }
}

/// The page `E_r`, one labelled basis per nonzero entry.
#[derive(Clone, Debug, Serialize)]
pub struct BigradedPage {
    pub r: u32,
    pub entries: BTreeMap<Position, Vec<ClassLabel>>,
    /// Entries that are copies of `Z` rather than `F_3`-vector spaces; they carry no differentials.
    pub integral: BTreeSet<Position>,
    pub zero_column: OuterFunctor,
    pub positive_columns: OuterFunctor,
    /// Positions that were assembled, including the margin needed by `d_3`.
    pub assembled: SerreWindow,
    /// Positions that are reported.
    pub window: SerreWindow,
}

impl BigradedPage {
    pub fn dimension(&self, pos: Position) -> usize {
        self.entries.get(&pos).map_or(0, Vec::len)
    }

    pub fn classes(&self, pos: Position) -> &[ClassLabel] {
        self.entries.get(&pos).map_or(&[], Vec::as_slice)
    }

    fn position_of(&self, pos: Position, label: &ClassLabel) -> Option<usize> {
        self.classes(pos).iter().position(|l| l == label)
    }

    /// Nonzero reported entries with `p >= p_min`.
    pub fn entries_from_column(&self, p_min: i64) -> Vec<(Position, usize)> {
        self.entries
            .iter()
            .filter(|(&pos, v)| pos.0 >= p_min && self.window.contains(pos) && !v.is_empty())
            .map(|(&pos, v)| (pos, v.len()))
            .collect()
    }

    /// Reported positions of total degree `n` and internal degree `t`.
    fn total_degree(&self, n: i64, t: i64) -> Vec<(Position, &ClassLabel)> {
        self.entries
            .iter()
            .filter(|(&(p, q, tt), _)| p + q == n && tt == t && p <= self.window.p_max)
            .flat_map(|(&pos, v)| v.iter().map(move |l| (pos, l)))
            .collect()
    }
}

/// `d_r` as matrices over `F_3` between labelled entries.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DifferentialSpec {
    pub r: u32,
    pub entries: Vec<DifferentialEntry>,
}

/// One component `E_r^{source} -> E_r^{target}`; `matrix[i][j]` is the coefficient of
/// target class `i` in the image of source class `j`.
#[derive(Clone, Debug, Serialize)]
pub struct DifferentialEntry {
    pub source: Position,
    pub target: Position,
    pub matrix: Vec<Vec<u8>>,
}

impl DifferentialSpec {
    pub fn zero(r: u32) -> Self {
        DifferentialSpec { r, entries: Vec::new() }
    }

    /// The differential sending each class to a scalar multiple of one labelled class.
    ///
    /// Images that fall outside the assembled page are dropped; an image inside it
    /// that is not a class of the page is an error.
    pub fn from_rule(
        page: &BigradedPage,
        r: u32,
        rule: impl Fn(&ClassLabel) -> Option<(ClassLabel, u8)>,
    ) -> Result<Self, SerreError> {
        let mut entries = Vec::new();
        for (&source, classes) in &page.entries {
            let target = (source.0 + r as i64, source.1 + 1 - r as i64, source.2);
            let mut matrix = vec![vec![0u8; classes.len()]; page.dimension(target)];
            let mut nonzero = false;
            for (j, label) in classes.iter().enumerate() {
                let Some((image, c)) = rule(label) else { continue };
                if c % 3 == 0 {
                    continue;
                }
                let in_range = target.0 <= page.assembled.p_max && target.0 + target.1 <= page.assembled.n_max;
                match page.position_of(target, &image) {
                    Some(i) => {
                        matrix[i][j] = c % 3;
                        nonzero = true;
                    }
                    None if in_range => return Err(SerreError::MissingClass { position: target, label: image }),
                    None => {}
                }
            }
            if nonzero {
                entries.push(DifferentialEntry { source, target, matrix });
            }
        }
        Ok(DifferentialSpec { r, entries })
    }
}

/// `d_3(a2 b2^m b1^k x) = b2^{m+2} b1^{k-1} x`, zero on classes without `a2`.
pub fn d3_family(page: &BigradedPage) -> Result<DifferentialSpec, SerreError> {
    DifferentialSpec::from_rule(page, 3, |l| {
        l.a2.then(|| (ClassLabel { a2: false, b2: l.b2 + 2, b1: l.b1 - 1, inner: l.inner.clone() }, 1))
    })
}

fn to_mod_matrix(rows: &[Vec<u8>], cols: usize) -> ModMatrix {
    let mut m = ModMatrix::zeros(rows.len(), cols, 3);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v as i64);
        }
    }
    m
}

fn product_is_zero(after: &[Vec<u8>], before: &[Vec<u8>]) -> bool {
    after.iter().all(|row| {
        (0..before.first().map_or(0, Vec::len))
            .all(|j| row.iter().zip(before).map(|(&a, b)| a as u32 * b[j] as u32).sum::<u32>() % 3 == 0)
    })
}

/// Vectors over `F_3` kept in reduced echelon form, so that reduction is order independent.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<u8>)>,
}

impl Echelon {
    fn reduce(&self, v: &mut [u8]) {
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = ((*x as u32 + (3 - f as u32) * y as u32) % 3) as u8;
                }
            }
        }
    }

    /// Add `v` if it is independent, returning its pivot.
    fn insert(&mut self, mut v: Vec<u8>) -> Option<usize> {
        self.reduce(&mut v);
        let pivot = v.iter().position(|&x| x != 0)?;
        if v[pivot] == 2 {
            for x in v.iter_mut() {
                *x = (*x * 2) % 3;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[pivot];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = ((*x as u32 + (3 - f as u32) * y as u32) % 3) as u8;
                }
            }
        }
        self.rows.push((pivot, v));
        Some(pivot)
    }
}

/// The page `E_{r+1}` as the homology of `E_r` under `spec`, where `E_r = E_page` if `r > page`.
pub fn apply_differentials(page: &BigradedPage, spec: &DifferentialSpec) -> Result<BigradedPage, SerreError> {
    let r = spec.r;
    if r < page.r {
        return Err(SerreError::WrongPage { r, page: page.r });
    }
    let mut outgoing: BTreeMap<Position, &DifferentialEntry> = BTreeMap::new();
    let mut incoming: BTreeMap<Position, &DifferentialEntry> = BTreeMap::new();
    for e in &spec.entries {
        let expected = (e.source.0 + r as i64, e.source.1 + 1 - r as i64, e.source.2);
        if e.target != expected {
            return Err(SerreError::BadDegree { r, from: e.source, to: e.target });
        }
        let (ds, dt) = (page.dimension(e.source), page.dimension(e.target));
        let integral = page.integral.contains(&e.source) || page.integral.contains(&e.target);
        if integral || e.matrix.len() != dt || e.matrix.iter().any(|row| row.len() != ds) {
            return Err(SerreError::BadShape { from: e.source, to: e.target });
        }
        if outgoing.insert(e.source, e).is_some() || incoming.insert(e.target, e).is_some() {
            return Err(SerreError::BadShape { from: e.source, to: e.target });
        }
    }
    for e in &spec.entries {
        if let Some(next) = outgoing.get(&e.target) {
            if !product_is_zero(&next.matrix, &e.matrix) {
                return Err(SerreError::NotADifferential { from: e.source });
            }
        }
    }
    let mut entries = BTreeMap::new();
    for (&pos, classes) in &page.entries {
        let dim = classes.len();
        let mut echelon = Echelon::default();
        if let Some(e) = incoming.get(&pos) {
            for j in 0..e.matrix.first().map_or(0, Vec::len) {
                echelon.insert(e.matrix.iter().map(|row| row[j]).collect());
            }
        }
        let kernel: Vec<Vec<u8>> = match outgoing.get(&pos) {
            Some(e) => kernel_mod_p(&to_mod_matrix(&e.matrix, dim))
                .into_iter()
                .map(|v| v.into_iter().map(|x| x as u8).collect())
                .collect(),
            None => (0..dim).map(|i| (0..dim).map(|j| u8::from(i == j)).collect()).collect(),
        };
        let mut survivors = Vec::new();
        for v in kernel {
            if let Some(pivot) = echelon.insert(v) {
                survivors.push(classes[pivot].clone());
            }
        }
        if !survivors.is_empty() {
            entries.insert(pos, survivors);
        }
    }
    Ok(BigradedPage { r: r + 1, entries, ..page.clone() })
}

/// A hidden multiplication by 3 from a class in low filtration to one in higher filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HiddenExtension {
    pub source: (Position, ClassLabel),
    pub target: (Position, ClassLabel),
}

/// `3 * b1^k x = b2 b1^{k-1} x` for every class `b1^k x` in the zero column whose
/// partner survives in the column `p = 2`.
pub fn three_b1_extension(page: &BigradedPage) -> Vec<HiddenExtension> {
    let mut out = Vec::new();
    for (&(p, q, t), classes) in &page.entries {
        if p != 0 {
            continue;
        }
        for l in classes {
            let partner = ClassLabel { a2: false, b2: 1, b1: l.b1 - 1, inner: l.inner.clone() };
            let target = (2, q - 2, t);
            if page.position_of(target, &partner).is_some() {
                out.push(HiddenExtension { source: ((p, q, t), l.clone()), target: (target, partner) });
            }
        }
    }
    out
}

/// Predicted `Ĥ^n(C_9; M)_t` as invariant factors in ascending order.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AbutmentPrediction {
    pub groups: BTreeMap<(i64, i64), Vec<u64>>,
    /// Number of `F_3` pieces of `E_∞` in each total degree.
    pub pieces: BTreeMap<(i64, i64), usize>,
}

impl AbutmentPrediction {
    pub fn factors(&self, n: i64, t: i64) -> &[u64] {
        self.groups.get(&(n, t)).map_or(&[], Vec::as_slice)
    }

    pub fn order(&self, n: i64, t: i64) -> u128 {
        self.factors(n, t).iter().map(|&f| f as u128).product()
    }
}

/// Assemble `Ĥ^n` from the `F_3` pieces of a stable page, joining chains of hidden
/// extensions into cyclic groups of order `3^length`.
pub fn assemble_abutment(page: &BigradedPage, extensions: &[HiddenExtension]) -> Result<AbutmentPrediction, SerreError> {
    let mut next: BTreeMap<(Position, &ClassLabel), (Position, &ClassLabel)> = BTreeMap::new();
    let mut is_target: BTreeSet<(Position, &ClassLabel)> = BTreeSet::new();
    for e in extensions {
        let (s, t) = (&e.source, &e.target);
        let bad = SerreError::BadExtension { from: s.0, to: t.0 };
        let present = page.position_of(s.0, &s.1).is_some() && page.position_of(t.0, &t.1).is_some();
        let same_degree = s.0 .0 + s.0 .1 == t.0 .0 + t.0 .1 && s.0 .2 == t.0 .2;
        if !present || !same_degree || t.0 .0 <= s.0 .0 {
            return Err(bad);
        }
        if next.insert((s.0, &s.1), (t.0, &t.1)).is_some() || !is_target.insert((t.0, &t.1)) {
            return Err(bad);
        }
    }
    let w = page.window;
    let mut out = AbutmentPrediction::default();
    for t in w.t_min..=w.t_max {
        for n in w.n_min..=w.n_max {
            let classes = page.total_degree(n, t);
            let mut factors = Vec::new();
            for (pos, label) in &classes {
                if is_target.contains(&(*pos, *label)) {
                    continue;
                }
                let mut length = 1;
                let mut at = (*pos, *label);
                while let Some(&to) = next.get(&at) {
                    length += 1;
                    at = to;
                }
                factors.push(3u64.pow(length));
            }
            factors.sort_unstable();
            out.pieces.insert((n, t), classes.len());
            if !factors.is_empty() {
                out.groups.insert((n, t), factors);
            }
        }
    }
    Ok(out)
}

/// `Ĥ^*(C_9; A_t)` for every `t` in the window, straight from the periodic resolution.
pub fn direct_c9_oracle(action: &CyclicAction<i64>, t_min: i64, t_max: i64) -> Result<BTreeMap<i64, TateStructure>, SerreError> {
    let mut out = BTreeMap::new();
    for t in t_min..=t_max {
        out.insert(t, tate_structure_in_degree(action, t)?);
    }
    Ok(out)
}

/// One `(n, t)` row of a comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub n: i64,
    pub t: i64,
    pub predicted: Vec<u64>,
    pub observed: Vec<u64>,
}

impl ComparisonRow {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn mismatches(&self) -> Vec<&ComparisonRow> {
        self.rows.iter().filter(|r| !r.agrees()).collect()
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(ComparisonRow::agrees)
    }
}

/// Compare predicted and observed invariant factors for every `(n, t)` in the given ranges.
pub fn compare(
    prediction: &AbutmentPrediction,
    oracle: &BTreeMap<i64, TateStructure>,
    n_range: std::ops::RangeInclusive<i64>,
) -> ComparisonReport {
    let mut rows = Vec::new();
    for (&t, structure) in oracle {
        for n in n_range.clone() {
            rows.push(ComparisonRow { n, t, predicted: prediction.factors(n, t).to_vec(), observed: structure.invariant_factors(n) });
        }
    }
    ComparisonReport { rows }
}

/// Dimension of `Ĥ^p(C_3; V)` over `F_3`, the same for every `p`: `dim V - rank(1 - g) - rank N`.
fn tate_dimension_f3(gamma: &ModMatrix) -> usize {
    let n = gamma.rows();
    let id = ModMatrix::identity(n, 3);
    let one_minus = id.sub(gamma);
    let norm = id.add(gamma).add(&gamma.mul(gamma));
    n - rank_mod_p(&one_minus) - rank_mod_p(&norm)
}

/// Whether the given vectors stay independent in `Ĥ^p(C_3; V)`: they must be cycles and
/// independent modulo the image of `N` (for even `p`) or of `1 - g` (for odd `p`).
fn independent_in_tate(gamma: &ModMatrix, p: i64, vectors: &[Vec<i64>]) -> bool {
    let n = gamma.rows();
    let id = ModMatrix::identity(n, 3);
    let one_minus = id.sub(gamma);
    let norm = id.add(gamma).add(&gamma.mul(gamma));
    let (cycle, boundary) = if p.rem_euclid(2) == 0 { (&one_minus, &norm) } else { (&norm, &one_minus) };
    for v in vectors {
        let image = (0..n).any(|i| (0..n).map(|j| cycle.get(i, j) as i64 * v[j]).sum::<i64>().rem_euclid(3) != 0);
        if image {
            return false;
        }
    }
    let base = rank_mod_p(boundary);
    let mut stacked = ModMatrix::zeros(n, n + vectors.len(), 3);
    for i in 0..n {
        for j in 0..n {
            stacked.set(i, j, boundary.get(i, j) as i64);
        }
        for (k, v) in vectors.iter().enumerate() {
            stacked.set(i, n + k, v[i]);
        }
    }
    rank_mod_p(&stacked) == base + vectors.len()
}

/// What the inner ring contributes in one bidegree `(j, t)`.
struct InnerDegree {
    /// Names of the free `S`-basis of the invariants.
    invariant_names: Vec<String>,
    /// Names of the classes of the outer Tate cohomology, one list per parity of `p`.
    tate_names: [Vec<String>; 2],
}

/// `cbar^ε s3^i` in bidegree `(j, t)`, the candidates for trivial summands.
fn trivial_candidates(j: u32, t: i64) -> Vec<String> {
    let (generator, rest) = match j {
        0 => ("1", -t),
        3 => ("cbar", -t - 6),
        _ => return Vec::new(),
    };
    if rest < 0 || rest % 18 != 0 {
        return Vec::new();
    }
    let monomial = match rest / 18 {
        0 => String::new(),
        1 => "s3".to_string(),
        i => format!("s3^{i}"),
    };
    vec![product_name(generator, &monomial)]
}

fn inner_degree(ring: &InvariantRing, j: u32, t: i64) -> Result<InnerDegree, SerreError> {
    let invariants = ring.invariant_basis(j, t).len();
    let invariant_names = ring.free_basis_names(j, t);
    if invariant_names.len() != invariants {
        return Err(SerreError::FreeBasisMismatch { q: j, t, invariants, free: invariant_names.len() });
    }
    let (_, gamma) = ring.action_matrix(j, t);
    let counts = decompose_c3(&gamma)?;
    let candidates = trivial_candidates(j, t);
    let vectors: Vec<Vec<i64>> = candidates
        .iter()
        .map(|c| Ok(ring.coordinates_in(j, t, &ring.evaluate(c)?)))
        .collect::<Result<_, InvariantsError>>()?;
    let mut tate_names: [Vec<String>; 2] = Default::default();
    for parity in 0..2 {
        let dimension = tate_dimension_f3(&gamma);
        debug_assert_eq!(dimension, counts.tate_dimension());
        let labelled = if independent_in_tate(&gamma, parity, &vectors) { candidates.len() } else { 0 };
        if labelled != dimension {
            return Err(SerreError::UnlabelledClasses { q: j, t, dimension, labelled });
        }
        tate_names[parity as usize] = candidates.clone();
    }
    Ok(InnerDegree { invariant_names, tate_names })
}

/// `E_2` for `M`, built from the invariant ring: the zero column is
/// `H^0(C_9/C_3; T) (x) F_3[b1^±]` and the columns `p > 0` are `Ĥ^p(C_9/C_3; T) (x) F_3[b1^±]`.
pub fn assemble_e2(ring: &InvariantRing, window: SerreWindow) -> Result<BigradedPage, SerreError> {
    let assembled = window.assembled();
    let mut entries = BTreeMap::new();
    for t in assembled.t_min..=assembled.t_max {
        if t % 2 != 0 {
            continue;
        }
        let inner: Vec<InnerDegree> = (0..=3).map(|j| inner_degree(ring, j, t)).collect::<Result<_, _>>()?;
        for n in assembled.n_min..=assembled.n_max {
            for p in 0..=assembled.p_max {
                let q = n - p;
                let mut classes = Vec::new();
                for (j, data) in inner.iter().enumerate() {
                    let j = j as i64;
                    if (q - j).rem_euclid(2) != 0 {
                        continue;
                    }
                    let k = (q - j) / 2;
                    let names = if p == 0 { &data.invariant_names } else { &data.tate_names[(p % 2) as usize] };
                    for name in names {
                        classes.push(ClassLabel { a2: p % 2 == 1, b2: (p / 2) as u32, b1: k, inner: name.clone() });
                    }
                }
                if !classes.is_empty() {
                    entries.insert((p, q, t), classes);
                }
            }
        }
    }
    Ok(BigradedPage {
        r: 2,
        entries,
        integral: BTreeSet::new(),
        zero_column: OuterFunctor::Invariants,
        positive_columns: OuterFunctor::Tate,
        assembled,
        window,
    })
}

/// The full pipeline for `M`: `E_2`, the `d_3` family, `E_4 = E_∞` and the extension `3 b1 = b2`.
pub struct SerreRun {
    pub e2: BigradedPage,
    pub d3: DifferentialSpec,
    pub e4: BigradedPage,
    pub extensions: Vec<HiddenExtension>,
    pub prediction: AbutmentPrediction,
}

pub fn run_pipeline(ring: &InvariantRing, window: SerreWindow) -> Result<SerreRun, SerreError> {
    let e2 = assemble_e2(ring, window)?;
    let d3 = d3_family(&e2)?;
    let e4 = apply_differentials(&e2, &d3)?;
    let extensions = three_b1_extension(&e4);
    let prediction = assemble_abutment(&e4, &extensions)?;
    Ok(SerreRun { e2, d3, e4, extensions, prediction })
}

/// `E_2 = H^p(C_9/C_3; H^q(C_3; Z))` for the trivial module `Z`, in total degrees `0..=n_max + 1`.
pub fn trivial_coefficient_e2(n_max: i64) -> Result<BigradedPage, SerreError> {
    let inner = CyclicModule::trivial(3, 1);
    let mut entries = BTreeMap::new();
    let mut integral = BTreeSet::new();
    for n in 0..=n_max + 1 {
        for p in 0..=n {
            let q = n - p;
            // H^q(C_3; Z): Z in degree 0, the Tate group above.
            let inner_rank = if q == 0 { None } else { Some(tate_of_module(&inner, q, 0)?.cyclic_rank()) };
            let dim = match inner_rank {
                None if p == 0 => {
                    if inner.invariants().cols() == 1 {
                        integral.insert((p, q, 0));
                    }
                    continue;
                }
                None => tate_of_module(&inner, p, 0)?.cyclic_rank(),
                Some(0) => 0,
                // The outer group acts trivially on H^q(C_3; Z) = F_3^r.
                Some(r) if p == 0 => r,
                Some(r) => tate_dimension_f3(&ModMatrix::identity(r, 3)),
            };
            assert!(dim <= 1, "each entry is at most one copy of F_3");
            if dim == 1 {
                entries.insert((p, q, 0), vec![ClassLabel { a2: p % 2 == 1, b2: (p / 2) as u32, b1: q / 2, inner: "1".into() }]);
            }
        }
    }
    let window = SerreWindow { t_min: 0, t_max: 0, n_min: 1, n_max, p_max: n_max };
    let assembled = SerreWindow { n_min: 0, n_max: n_max + 1, p_max: n_max + 1, ..window };
    Ok(BigradedPage {
        r: 2,
        entries,
        integral,
        zero_column: OuterFunctor::Invariants,
        positive_columns: OuterFunctor::Ordinary,
        assembled,
        window,
    })
}

/// The module pattern `(Z[b1, b2]/(3b1, 3b2)){1, a2 b1}` in total degrees `0..=n_max`:
/// `Z` at the origin, `F_3` at `(p, 0)` for even `p > 0` and at `(p, q)` for even `q > 0`.
pub fn matches_trivial_pattern(page: &BigradedPage, n_max: i64) -> bool {
    (0..=n_max).all(|n| {
        (0..=n).all(|p| {
            let q = n - p;
            let expected = if q % 2 == 1 || (q == 0 && p % 2 == 1) || (p, q) == (0, 0) { 0 } else { 1 };
            page.dimension((p, q, 0)) == expected && page.integral.contains(&(p, q, 0)) == ((p, q) == (0, 0))
        })
    })
}

/// `Ĥ^n(C_9; Z)` for `n` in `1..=n_max`.
pub fn trivial_oracle(n_max: i64) -> Result<BTreeMap<i64, Vec<u64>>, SerreError> {
    let z = CyclicModule::trivial(9, 1);
    (1..=n_max).map(|n| Ok((n, tate_of_module(&z, n, 0)?.invariant_factors()))).collect()
}

/// A candidate `d_3`: one scalar per tower generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCandidate {
    pub values: Vec<(ClassLabel, ClassLabel, u8)>,
}

impl PatternCandidate {
    /// The generators with a nonzero differential, which determine the pattern up to units.
    pub fn support(&self) -> Vec<&ClassLabel> {
        self.values.iter().filter(|(_, _, c)| *c != 0).map(|(s, _, _)| s).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternSearchReport {
    pub n_max: i64,
    pub candidates: usize,
    pub not_differentials: usize,
    pub consistent: Vec<PatternCandidate>,
}

impl PatternSearchReport {
    /// All consistent candidates have the same support.
    pub fn unique_up_to_units(&self) -> bool {
        let supports: BTreeSet<Vec<&ClassLabel>> = self.consistent.iter().map(PatternCandidate::support).collect();
        supports.len() == 1
    }

    /// The consistent support is `{a2 b1^k}` and nothing else.
    pub fn is_a2_b1_pattern(&self) -> bool {
        self.unique_up_to_units()
            && self.consistent[0].values.iter().all(|(s, _, c)| (*c != 0) == (s.a2 && s.b2 == 0 && s.b1 >= 1))
    }
}

/// Does `E_4` of the trivial spectral sequence have the right orders in total degrees `1..=n_max`?
fn consistent_with_oracle(e4: &BigradedPage, oracle: &BTreeMap<i64, Vec<u64>>) -> bool {
    oracle.iter().all(|(&n, factors)| {
        let pieces = e4.total_degree(n, 0).len();
        let order: u128 = factors.iter().map(|&f| f as u128).product();
        3u128.pow(pieces as u32) == order && factors.len() <= pieces
    })
}

/// Try every `d_3` that is linear over `b2` and determined by scalars on the tower
/// generators `b1^k` and `a2 b1^k` (with `b2^0`), keeping those that are
/// differentials and whose `E_4` has the orders of `Ĥ^*(C_9; Z)` in degrees `1..=n_max`.
pub fn search_differential_patterns_trivial_case(n_max: i64) -> Result<PatternSearchReport, SerreError> {
    let page = trivial_coefficient_e2(n_max)?;
    let oracle = trivial_oracle(n_max)?;
    let mut generators = Vec::new();
    for (&(p, q, t), classes) in &page.entries {
        if p > 1 || p + q > n_max {
            continue;
        }
        let target = (p + 3, q - 2, t);
        if page.dimension(target) == 1 {
            generators.push((classes[0].clone(), page.classes(target)[0].clone()));
        }
    }
    let total = 3usize.pow(generators.len() as u32);
    let mut not_differentials = 0;
    let mut consistent = Vec::new();
    for code in 0..total {
        let values: Vec<(ClassLabel, ClassLabel, u8)> = generators
            .iter()
            .enumerate()
            .map(|(i, (s, t))| (s.clone(), t.clone(), ((code / 3usize.pow(i as u32)) % 3) as u8))
            .collect();
        let spec = DifferentialSpec::from_rule(&page, 3, |l| {
            values.iter().find_map(|(s, t, c)| {
                let shifted = ClassLabel { b2: s.b2 + l.b2, ..s.clone() };
                (shifted == *l).then(|| (ClassLabel { b2: t.b2 + l.b2, ..t.clone() }, *c))
            })
        })?;
        match apply_differentials(&page, &spec) {
            Ok(e4) => {
                if consistent_with_oracle(&e4, &oracle) {
                    consistent.push(PatternCandidate { values });
                }
            }
            Err(SerreError::NotADifferential { .. }) => not_differentials += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(PatternSearchReport { n_max, candidates: total, not_differentials, consistent })
}

/// The trivial spectral sequence with `d_3(a2 b1) = b2^2` and `3 b1 = b2`, assembled in degrees `1..=n_max`.
pub fn trivial_case_abutment(n_max: i64) -> Result<AbutmentPrediction, SerreError> {
    let e2 = trivial_coefficient_e2(n_max)?;
    let e4 = apply_differentials(&e2, &d3_family(&e2)?)?;
    assemble_abutment(&e4, &three_b1_extension(&e4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::sym_induced_rho;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn ring() -> &'static InvariantRing {
        static RING: OnceLock<InvariantRing> = OnceLock::new();
        RING.get_or_init(InvariantRing::new)
    }

    fn small() -> SerreWindow {
        SerreWindow { t_min: -24, t_max: 0, n_min: 1, n_max: 4, p_max: 5 }
    }

    fn small_run() -> &'static SerreRun {
        static RUN: OnceLock<SerreRun> = OnceLock::new();
        RUN.get_or_init(|| run_pipeline(ring(), small()).unwrap())
    }

    #[test]
    fn e2_examples() {
        let e2 = &small_run().e2;
        assert_eq!(e2.classes((0, 3, -6)), &[ClassLabel::new(false, 0, 0, "cbar")]);
        assert_eq!(e2.classes((2, 0, 0)), &[ClassLabel::new(false, 1, 0, "1")]);
        assert_eq!(e2.dimension((1, 0, -6)), 0);
        assert_eq!(e2.classes((1, 0, -18)), &[ClassLabel::new(true, 0, 0, "s3")]);
        assert_eq!(e2.zero_column, OuterFunctor::Invariants);
        assert_eq!(e2.positive_columns, OuterFunctor::Tate);
    }

    #[test]
    fn zero_column_is_the_invariant_ring() {
        let e2 = &small_run().e2;
        for t in (-24..=0).step_by(2) {
            for q in 0..=5i64 {
                let dims: usize = (0..=3u32)
                    .filter(|j| (q - *j as i64).rem_euclid(2) == 0)
                    .map(|j| ring().invariant_basis(j, t).len())
                    .sum();
                assert_eq!(e2.dimension((0, q, t)), dims, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn zero_spec_is_the_identity() {
        let e2 = &small_run().e2;
        let same = apply_differentials(e2, &DifferentialSpec::zero(2)).unwrap();
        assert_eq!(same.entries, e2.entries);
        assert_eq!(same.r, 3);
    }

    #[test]
    fn e4_vanishes_from_column_four() {
        let run = small_run();
        assert!(run.e4.entries_from_column(4).is_empty());
        assert!(!run.e2.entries_from_column(4).is_empty());
    }

    #[test]
    fn abutment_examples() {
        let prediction = &small_run().prediction;
        assert_eq!(prediction.factors(2, 0), &[9]);
        assert_eq!(prediction.factors(1, -2), &[3]);
        assert_eq!(prediction.factors(3, -6), &[9]);
        assert!(prediction.factors(1, 0).is_empty());
    }

    #[test]
    fn abutment_without_extensions_is_a_sum_of_pieces() {
        let run = small_run();
        let plain = assemble_abutment(&run.e4, &[]).unwrap();
        for (&(n, t), pieces) in &plain.pieces {
            assert_eq!(plain.factors(n, t), vec![3; *pieces].as_slice());
            assert_eq!(plain.order(n, t), run.prediction.order(n, t));
        }
    }

    #[test]
    fn prediction_matches_the_direct_computation() {
        let (_, gamma) = sym_induced_rho();
        let oracle = direct_c9_oracle(&gamma, -24, 0).unwrap();
        let report = compare(&small_run().prediction, &oracle, 1..=4);
        assert_eq!(report.rows.len(), 25 * 4);
        assert!(report.all_agree(), "{:?}", report.mismatches());
    }

    #[test]
    fn empty_window_gives_an_empty_report() {
        let report = compare(&AbutmentPrediction::default(), &BTreeMap::new(), 1..=4);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn inconsistent_extension_is_rejected() {
        let run = small_run();
        let backwards: Vec<HiddenExtension> = run
            .extensions
            .iter()
            .map(|e| HiddenExtension { source: e.target.clone(), target: e.source.clone() })
            .collect();
        assert!(matches!(assemble_abutment(&run.e4, &backwards), Err(SerreError::BadExtension { .. })));
    }

    #[test]
    fn trivial_page_has_the_expected_pattern() {
        let page = trivial_coefficient_e2(8).unwrap();
        assert!(matches_trivial_pattern(&page, 8));
        assert_eq!(page.classes((1, 2, 0)), &[ClassLabel::new(true, 0, 1, "1")]);
    }

    #[test]
    fn trivial_d3_truncates_the_b2_tower() {
        let page = trivial_coefficient_e2(8).unwrap();
        let e4 = apply_differentials(&page, &d3_family(&page).unwrap()).unwrap();
        assert_eq!(page.dimension((4, 0, 0)), 1);
        assert_eq!(e4.dimension((4, 0, 0)), 0);
        assert_eq!(e4.dimension((2, 0, 0)), 1);
        for n in 1..=8 {
            let columns: Vec<i64> = e4.total_degree(n, 0).iter().map(|(pos, _)| pos.0).collect();
            assert!(columns.iter().all(|&p| p == 0 || p == 2), "n={n}: {columns:?}");
        }
    }

    #[test]
    fn trivial_abutment_is_z_mod_9_in_even_degrees() {
        let prediction = trivial_case_abutment(8).unwrap();
        let oracle = trivial_oracle(8).unwrap();
        for n in 1..=8 {
            assert_eq!(prediction.factors(n, 0), oracle[&n].as_slice(), "n={n}");
            let expected: &[u64] = if n % 2 == 0 { &[9] } else { &[] };
            assert_eq!(prediction.factors(n, 0), expected);
        }
    }

    #[test]
    fn zero_differential_is_inconsistent_in_degree_four() {
        let page = trivial_coefficient_e2(8).unwrap();
        let e4 = apply_differentials(&page, &DifferentialSpec::zero(3)).unwrap();
        let plain = assemble_abutment(&e4, &[]).unwrap();
        assert_eq!(plain.factors(4, 0), &[3, 3, 3]);
        assert!(!consistent_with_oracle(&e4, &trivial_oracle(8).unwrap()));
    }

    #[test]
    fn pattern_search_finds_one_pattern() {
        let report = search_differential_patterns_trivial_case(8).unwrap();
        assert!(report.candidates > 1);
        assert!(report.unique_up_to_units(), "{:?}", report.consistent);
        assert!(report.is_a2_b1_pattern());
        assert_eq!(report.consistent.len(), 1 << report.consistent[0].support().len());
    }

    #[test]
    fn non_differential_is_rejected() {
        let page = trivial_coefficient_e2(8).unwrap();
        // d_3(b1^2) = a2 b1 b2 together with d_3(a2 b1 b2) = b2^3 squares to a nonzero map.
        let spec = DifferentialSpec::from_rule(&page, 3, |l| match (l.a2, l.b2, l.b1) {
            (false, 0, 2) => Some((ClassLabel::new(true, 1, 1, "1"), 1)),
            (true, 1, 1) => Some((ClassLabel::new(false, 3, 0, "1"), 1)),
            _ => None,
        })
        .unwrap();
        assert!(matches!(apply_differentials(&page, &spec), Err(SerreError::NotADifferential { .. })));
    }

    #[test]
    fn labels_print_as_products() {
        assert_eq!(ClassLabel::new(true, 2, -1, "cbar*s3").to_string(), "a2*b2^2*b1^-1*cbar*s3");
        assert_eq!(ClassLabel::new(false, 0, 0, "1").to_string(), "1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn pages_satisfy_the_invariants(t in -12i64..=0, n in 1i64..=2) {
            let run = small_run();
            let t = 2 * (t / 2);
            // d_3 o d_3 = 0 on the assembled page.
            let mut by_source = BTreeMap::new();
            for e in &run.d3.entries {
                by_source.insert(e.source, e);
            }
            for e in &run.d3.entries {
                if let Some(next) = by_source.get(&e.target) {
                    prop_assert!(product_is_zero(&next.matrix, &e.matrix));
                }
            }
            // Extensions change the structure, not the order.
            let pieces = run.prediction.pieces[&(n, t)];
            prop_assert_eq!(run.prediction.order(n, t), 3u128.pow(pieces as u32));
            // 2-periodicity in n.
            prop_assert_eq!(run.prediction.factors(n, t), run.prediction.factors(n + 2, t));
            // No entries at negative p.
            prop_assert!(run.e2.entries.keys().all(|pos| pos.0 >= 0));
        }
    }
}
