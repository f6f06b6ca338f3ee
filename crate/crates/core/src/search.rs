//! Fully labeled simplex search and the engines built around it:
//! fineness-driven refinement, the Tucker-triple verifier, and a colorful
//! Caratheodory solver.
//!
//! The search problem: given a labeling of the vertices of a refinement of
//! `E_N G` into `G x [n]`, find a simplex whose vertices carry a complete
//! fiber `{(g, i0) : g in G}` for one row `i0`. Two implementations share
//! the semantics. [`find_fully_labeled`] walks a materialized [`GComplex`]
//! and answers in vertex ids. [`scan_lazy`] walks a [`LazyComplex`] without
//! materializing it, labels points through the measure-driven rule, and
//! reports candidate simplices by coordinates; its block structure is the
//! unit of data parallelism.
//!
//! Both searches are deterministic by construction: they never exit early,
//! and every reduction is a minimum over canonical keys (sorted vertex
//! lists), so the result is independent of scan order and worker count.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::complex::{act, barycentric_subdivide, Facet, GComplex, JoinPoint, LazyComplex};
use crate::crosspolytope::{conv_contains_zero, ConvWitness, CrossLabel, GPolytope};
use crate::division::{decode, label_vertex, values_table, LabelOutcome};
use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::measure::Measure;
use crate::rational::{abs, format_rational, rat_int, Rational};

/// How much of the complex a search walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// One facet per orbit of the free action, each hit canonicalized over
    /// its orbit afterwards. Sound only for equivariant labelings, which is
    /// why this mode checks equivariance before trusting representatives.
    OrbitPruned,
    /// Every facet, no equivariance assumption. This is the oracle the
    /// pruned mode is validated against.
    Full,
}

/// A fully labeled fiber simplex in a materialized complex: vertex
/// `vertices[e]` carries label `(e, fiber_row)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullyLabeled {
    pub vertices: Vec<usize>,
    pub fiber_row: usize,
}

impl FullyLabeled {
    /// Canonical comparison key: the sorted vertex id list.
    pub fn key(&self) -> Vec<usize> {
        let mut key = self.vertices.clone();
        key.sort_unstable();
        key
    }
}

/// Outcome of [`find_fully_labeled`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    /// Smallest vertex id whose label came back [`LabelOutcome::Exact`].
    ExactVertex(usize),
    /// The canonically smallest fully labeled simplex, compared
    /// lexicographically on sorted vertex ids.
    FoundSimplex(FullyLabeled),
    NotFound,
}

struct LabelCache<F> {
    labeling: F,
    cache: Vec<Option<LabelOutcome>>,
    k: usize,
    n: usize,
}

impl<F: FnMut(usize) -> Result<LabelOutcome>> LabelCache<F> {
    fn new(labeling: F, vertex_count: usize, k: usize, n: usize) -> LabelCache<F> {
        LabelCache { labeling, cache: vec![None; vertex_count], k, n }
    }

    fn get(&mut self, v: usize) -> Result<LabelOutcome> {
        if let Some(label) = self.cache[v] {
            return Ok(label);
        }
        let label = (self.labeling)(v)?;
        if let LabelOutcome::Label(l) = label {
            if l.g >= self.k {
                return Err(Error::ElementOutOfRange { id: l.g, order: self.k });
            }
            if l.i >= self.n {
                return Err(Error::InvalidInput(format!(
                    "label row {} out of range for n = {}",
                    l.i, self.n
                )));
            }
        }
        self.cache[v] = Some(label);
        Ok(label)
    }
}

fn act_label(group: &Group, g: usize, label: LabelOutcome) -> LabelOutcome {
    match label {
        LabelOutcome::Exact => LabelOutcome::Exact,
        LabelOutcome::Label(l) => {
            LabelOutcome::Label(CrossLabel { g: group.mul(g, l.g), i: l.i })
        }
    }
}

/// Searches a materialized complex for an exact vertex or a fully labeled
/// fiber simplex.
///
/// The scan inspects every facet (or one per orbit in
/// [`ScanMode::OrbitPruned`]) and, within a facet, every sub-simplex made of
/// one vertex per group element with labels `{(e, i0) : e in G}` for a fixed
/// row `i0`; a facet has `N+1` vertices, so the fiber simplex is usually a
/// proper face. An exact vertex anywhere takes precedence over simplices.
/// Ties are broken toward smaller vertex ids throughout, which pins the
/// result down uniquely: the pruned and full modes agree whenever the
/// labeling is equivariant.
///
/// `labeling` is consulted at most once per vertex; results are cached.
pub fn find_fully_labeled<F>(
    complex: &GComplex,
    labeling: F,
    n: usize,
    mode: ScanMode,
) -> Result<SearchResult>
where
    F: FnMut(usize) -> Result<LabelOutcome>,
{
    let group = complex.group().clone();
    let k = group.order();
    if n == 0 {
        return Err(Error::InvalidInput("search needs at least one label row".into()));
    }
    let mut labels = LabelCache::new(labeling, complex.vertex_count(), k, n);

    if mode == ScanMode::OrbitPruned {
        // Orbit pruning is only sound for equivariant labelings. The check
        // walks every vertex, which costs one labeling pass; materialized
        // complexes are desk scale, so the insurance is cheap.
        for v in 0..complex.vertex_count() {
            let base = labels.get(v)?;
            for g in 1..k {
                if labels.get(complex.act_vertex(g, v))? != act_label(&group, g, base) {
                    return Err(Error::EquivarianceViolation { g, v });
                }
            }
        }
    }

    let facet_ids: Vec<usize> = match mode {
        ScanMode::Full => (0..complex.facets().len()).collect(),
        ScanMode::OrbitPruned => complex.orbit_representatives(),
    };

    let mut best_exact: Option<usize> = None;
    let mut best_hit: Option<FullyLabeled> = None;
    for f in facet_ids {
        let facet = &complex.facets()[f];
        let mut by_row: BTreeMap<usize, Vec<Option<usize>>> = BTreeMap::new();
        for &v in facet {
            match labels.get(v)? {
                LabelOutcome::Exact => {
                    let canon = match mode {
                        ScanMode::Full => v,
                        ScanMode::OrbitPruned => {
                            (0..k).map(|g| complex.act_vertex(g, v)).min().unwrap()
                        }
                    };
                    best_exact = Some(best_exact.map_or(canon, |b| b.min(canon)));
                }
                LabelOutcome::Label(l) => {
                    let slots = by_row.entry(l.i).or_insert_with(|| vec![None; k]);
                    let slot = &mut slots[l.g];
                    *slot = Some(slot.map_or(v, |prev| prev.min(v)));
                }
            }
        }
        for (row, slots) in by_row {
            let Some(aligned) = slots.into_iter().collect::<Option<Vec<usize>>>() else {
                continue;
            };
            let hit = match mode {
                ScanMode::Full => FullyLabeled { vertices: aligned, fiber_row: row },
                ScanMode::OrbitPruned => canonical_orbit_hit(complex, &group, &aligned, row),
            };
            best_hit = Some(match best_hit.take() {
                None => hit,
                Some(old) => {
                    if (hit.key(), hit.fiber_row, &hit.vertices)
                        < (old.key(), old.fiber_row, &old.vertices)
                    {
                        hit
                    } else {
                        old
                    }
                }
            });
        }
    }

    if let Some(v) = best_exact {
        return Ok(SearchResult::ExactVertex(v));
    }
    Ok(match best_hit {
        Some(hit) => SearchResult::FoundSimplex(hit),
        None => SearchResult::NotFound,
    })
}

/// Smallest translate of a hit under the group action. Translating by `g`
/// moves the vertex of element `e` to element `g*e`, so the aligned list is
/// re-slotted as well.
fn canonical_orbit_hit(
    complex: &GComplex,
    group: &Group,
    aligned: &[usize],
    row: usize,
) -> FullyLabeled {
    let k = group.order();
    (0..k)
        .map(|g| {
            let mut translated = vec![0usize; k];
            for (e, &v) in aligned.iter().enumerate() {
                translated[group.mul(g, e)] = complex.act_vertex(g, v);
            }
            FullyLabeled { vertices: translated, fiber_row: row }
        })
        .min_by(|a, b| (a.key(), &a.vertices).cmp(&(b.key(), &b.vertices)))
        .unwrap()
}

/// Upper bound on how many fiber candidates a lazy scan reports. The
/// smallest `CANDIDATE_CAP` by canonical key are kept; `truncated` in the
/// outcome records whether the scan saw more.
pub const CANDIDATE_CAP: usize = 64;

/// A fully labeled fiber simplex found by a lazy scan, carried by
/// coordinates because lazy complexes have no vertex ids. `vertices[e]` is
/// the vertex labeled `(e, fiber_row)`; `word` is the natural facet
/// assignment (one element per join slot) of the facet the simplex was found
/// in, which seeds the exact facet-local solver downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCandidate {
    pub vertices: Vec<JoinPoint>,
    pub fiber_row: usize,
    pub word: Vec<usize>,
}

impl FiberCandidate {
    fn sort_key(&self) -> Vec<&JoinPoint> {
        let mut key: Vec<&JoinPoint> = self.vertices.iter().collect();
        key.sort();
        key
    }
}

impl Ord for FiberCandidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.fiber_row.cmp(&other.fiber_row))
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for FiberCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// What a lazy scan saw. `candidates` comes back sorted ascending by
/// canonical key, deduplicated, holding at most [`CANDIDATE_CAP`] entries;
/// `exact` is the smallest point whose label came back exact, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub exact: Option<JoinPoint>,
    pub candidates: Vec<FiberCandidate>,
    pub truncated: bool,
    pub blocks: u64,
    pub facets: u128,
}

#[derive(Default)]
struct Accum {
    exact: Option<JoinPoint>,
    candidates: BTreeSet<FiberCandidate>,
    truncated: bool,
    blocks: u64,
    facets: u128,
}

impl Accum {
    fn push_exact(&mut self, p: JoinPoint) {
        match &self.exact {
            Some(cur) if *cur <= p => {}
            _ => self.exact = Some(p),
        }
    }

    fn push_candidate(&mut self, c: FiberCandidate) {
        self.candidates.insert(c);
        if self.candidates.len() > CANDIDATE_CAP {
            self.candidates.pop_last();
            self.truncated = true;
        }
    }

    // Associative and commutative: the kept candidates are the smallest of
    // the union, and a truncation in any partial result forces the flag, so
    // the merged outcome is independent of how blocks were partitioned.
    fn merge(mut self, other: Accum) -> Accum {
        if let Some(p) = other.exact {
            self.push_exact(p);
        }
        self.truncated |= other.truncated;
        for c in other.candidates {
            self.push_candidate(c);
        }
        self.blocks += other.blocks;
        self.facets += other.facets;
        self
    }

    fn finish(self) -> ScanOutcome {
        ScanOutcome {
            exact: self.exact,
            candidates: self.candidates.into_iter().collect(),
            truncated: self.truncated,
            blocks: self.blocks,
            facets: self.facets,
        }
    }
}

fn scan_prepare(lazy: &LazyComplex, measures: &[Measure]) -> Result<()> {
    if measures.is_empty() {
        return Err(Error::InvalidInput("scan needs at least one measure".into()));
    }
    let group = lazy.group();
    if !is_prime(group.order()) {
        return Err(Error::NotPrime(group.order()));
    }
    // Spot check of labeling equivariance on the first block's vertices; a
    // failure here means a bug in the labeling rule, and catching it before
    // a long scan beats trusting orbit pruning blindly. The reported vertex
    // index refers to the sample, in sorted coordinate order.
    let mut sample: BTreeSet<JoinPoint> = BTreeSet::new();
    lazy.visit_block(0, |facet| {
        for p in &facet.vertices {
            sample.insert(p.clone());
        }
    });
    for (idx, p) in sample.iter().enumerate() {
        let base = label_vertex(p, measures, group)?;
        for g in 1..group.order() {
            if label_vertex(&act(group, g, p), measures, group)? != act_label(group, g, base) {
                return Err(Error::EquivarianceViolation { g, v: idx });
            }
        }
    }
    Ok(())
}

fn eval_facet(
    group: &Group,
    measures: &[Measure],
    mode: ScanMode,
    facet: &Facet,
    g: usize,
    memo: &mut HashMap<JoinPoint, LabelOutcome>,
    acc: &mut Accum,
) -> Result<()> {
    let k = group.order();
    acc.facets += 1;
    // g = 0 is the stored representative; other values walk its translates
    // (full mode only), labeled independently rather than derived through
    // equivariance so the mode stays an honest oracle.
    let points: Vec<JoinPoint> = if g == 0 {
        facet.vertices.clone()
    } else {
        facet.vertices.iter().map(|p| act(group, g, p)).collect()
    };
    let word: Vec<usize> = facet.natural.iter().map(|&a| group.mul(g, a)).collect();

    let mut by_row: BTreeMap<usize, Vec<Option<usize>>> = BTreeMap::new();
    for (idx, p) in points.iter().enumerate() {
        let label = match memo.get(p) {
            Some(&l) => l,
            None => {
                let l = label_vertex(p, measures, group)?;
                memo.insert(p.clone(), l);
                l
            }
        };
        match label {
            LabelOutcome::Exact => {
                let canon = match mode {
                    ScanMode::Full => p.clone(),
                    ScanMode::OrbitPruned => (0..k).map(|h| act(group, h, p)).min().unwrap(),
                };
                acc.push_exact(canon);
            }
            LabelOutcome::Label(l) => {
                let slots = by_row.entry(l.i).or_insert_with(|| vec![None; k]);
                match slots[l.g] {
                    Some(prev) if points[prev] <= *p => {}
                    _ => slots[l.g] = Some(idx),
                }
            }
        }
    }

    for (row, slots) in by_row {
        let Some(indices) = slots.into_iter().collect::<Option<Vec<usize>>>() else {
            continue;
        };
        let aligned: Vec<JoinPoint> = indices.iter().map(|&i| points[i].clone()).collect();
        let candidate = match mode {
            ScanMode::Full => FiberCandidate { vertices: aligned, fiber_row: row, word: word.clone() },
            ScanMode::OrbitPruned => canonical_orbit_candidate(group, &aligned, row, &word),
        };
        acc.push_candidate(candidate);
    }
    Ok(())
}

fn canonical_orbit_candidate(
    group: &Group,
    aligned: &[JoinPoint],
    row: usize,
    word: &[usize],
) -> FiberCandidate {
    let k = group.order();
    (0..k)
        .map(|g| {
            let mut slots: Vec<Option<JoinPoint>> = vec![None; k];
            for (e, p) in aligned.iter().enumerate() {
                slots[group.mul(g, e)] = Some(act(group, g, p));
            }
            FiberCandidate {
                vertices: slots.into_iter().map(Option::unwrap).collect(),
                fiber_row: row,
                word: word.iter().map(|&a| group.mul(g, a)).collect(),
            }
        })
        .min()
        .unwrap()
}

fn eval_block(
    lazy: &LazyComplex,
    measures: &[Measure],
    mode: ScanMode,
    block: u64,
) -> Result<Accum> {
    let group = lazy.group();
    let translates = match mode {
        ScanMode::OrbitPruned => 1,
        ScanMode::Full => group.order(),
    };
    // Facets of a block share their subdivision prefix, so a block-local
    // memo already removes nearly all duplicate labelings while keeping
    // blocks independent for the parallel path.
    let mut memo: HashMap<JoinPoint, LabelOutcome> = HashMap::new();
    let mut acc = Accum { blocks: 1, ..Accum::default() };
    let mut failed: Option<Error> = None;
    lazy.visit_block(block, |facet| {
        if failed.is_some() {
            return;
        }
        for g in 0..translates {
            if let Err(e) = eval_facet(group, measures, mode, facet, g, &mut memo, &mut acc) {
                failed = Some(e);
                return;
            }
        }
    });
    match failed {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Lazy scan of the depth-`d` refinement with measure-driven labels,
/// sequential. [`scan_lazy`] runs the same reduction in parallel when the
/// `parallel` feature is on; outcomes are identical.
pub fn scan_lazy_sequential(
    lazy: &LazyComplex,
    measures: &[Measure],
    mode: ScanMode,
) -> Result<ScanOutcome> {
    scan_prepare(lazy, measures)?;
    let mut acc = Accum::default();
    for block in 0..lazy.block_count()? {
        acc = acc.merge(eval_block(lazy, measures, mode, block)?);
    }
    Ok(acc.finish())
}

/// Lazy scan of the depth-`d` refinement with measure-driven labels. Blocks
/// are distributed over the rayon pool; the merge is a canonical minimum, so
/// the outcome is byte-identical to the sequential scan for every worker
/// count.
#[cfg(feature = "parallel")]
pub fn scan_lazy(lazy: &LazyComplex, measures: &[Measure], mode: ScanMode) -> Result<ScanOutcome> {
    use rayon::prelude::*;

    scan_prepare(lazy, measures)?;
    let blocks = lazy.block_count()?;
    let acc = (0..blocks)
        .into_par_iter()
        .map(|block| eval_block(lazy, measures, mode, block))
        .try_reduce(Accum::default, |a, b| Ok(a.merge(b)))?;
    Ok(acc.finish())
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn scan_lazy(lazy: &LazyComplex, measures: &[Measure], mode: ScanMode) -> Result<ScanOutcome> {
    scan_lazy_sequential(lazy, measures, mode)
}

/// Iterated barycentric subdivision until the complex is fine enough for the
/// division argument: for every edge `(v, w)` and all measures `i` and parts
/// `j`, the value tables of the decoded schemes differ by less than
/// `epsilon / (p-1)^2`, strictly, where `p` is the group order.
///
/// Fineness is measured on masses, not on geometry: what the proof needs is
/// that neighboring vertices describe divisions whose parts weigh almost the
/// same, and that is checked directly by exact rational comparison.
///
/// `cap` bounds the total subdivision depth of the result; exceeding it
/// reports the worst remaining edge gap instead of refining forever.
pub fn refine_until_fine(
    complex: &GComplex,
    measures: &[Measure],
    epsilon: &Rational,
    cap: u32,
) -> Result<GComplex> {
    if *epsilon <= Rational::zero() {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
    }
    if measures.is_empty() {
        return Err(Error::InvalidInput("refinement needs at least one measure".into()));
    }
    let p = complex.group().order();
    let bound = epsilon / rat_int(((p - 1) * (p - 1)) as i64);
    let mut current = complex.clone();
    loop {
        match worst_edge_gap(&current, measures)? {
            Some(worst) if worst >= bound => {
                if current.depth() >= cap {
                    return Err(Error::DepthCapExceeded {
                        cap,
                        worst: format_rational(&worst),
                        bound: format_rational(&bound),
                    });
                }
                current = barycentric_subdivide(&current);
            }
            _ => return Ok(current),
        }
    }
}

/// Largest entrywise value-table difference across any edge of the complex,
/// `None` when there are no edges.
fn worst_edge_gap(complex: &GComplex, measures: &[Measure]) -> Result<Option<Rational>> {
    let k = complex.group().order();
    let tables: Vec<Vec<Vec<Rational>>> = complex
        .vertices()
        .iter()
        .map(|v| values_table(&decode(v, k)?, measures))
        .collect::<Result<_>>()?;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for facet in complex.facets() {
        for (a, &u) in facet.iter().enumerate() {
            for &w in &facet[a + 1..] {
                edges.insert((u, w));
            }
        }
    }
    let mut worst: Option<Rational> = None;
    for (u, w) in edges {
        for (row_u, row_w) in tables[u].iter().zip(&tables[w]) {
            for (x_u, x_w) in row_u.iter().zip(row_w) {
                let gap = abs(&(x_u - x_w));
                if worst.as_ref().map_or(true, |b| gap > *b) {
                    worst = Some(gap);
                }
            }
        }
    }
    Ok(worst)
}

/// Verdict of [`verify_tucker_triple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TuckerVerdict {
    Found {
        /// Index of the first facet whose label hull captured the origin.
        facet: usize,
        /// Vertex ids of the minimal sub-simplex carrying the witness.
        simplex: Vec<usize>,
        /// Convex coefficients; `support` indexes positions within the
        /// facet's vertex list, aligned with `simplex`.
        witness: ConvWitness,
    },
    /// No simplex works: a genuine counterexample to triple-ness for this
    /// complex, labeling, and polytope.
    NotFound,
}

/// Decides whether the labeling `phi` of `complex` into the vertices of
/// `polytope` admits a simplex whose label hull contains the origin, the
/// defining condition of a Tucker triple, and produces the exact convex
/// witness when it does.
///
/// `phi[v]` is the polytope vertex id assigned to complex vertex `v`; it
/// must intertwine the two actions, which is checked exhaustively before the
/// scan. Faces inherit their hulls from the containing facet, so scanning
/// facet hulls decides existence; the minimal face shows up as the support
/// of the witness.
pub fn verify_tucker_triple(
    complex: &GComplex,
    phi: &[usize],
    polytope: &GPolytope,
) -> Result<TuckerVerdict> {
    complex.validate()?;
    if phi.len() != complex.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "labeling covers {} vertices, complex has {}",
            phi.len(),
            complex.vertex_count()
        )));
    }
    let k = complex.group().order();
    if polytope.order() != k {
        return Err(Error::InvalidInput(format!(
            "polytope action has order {}, complex group has order {k}",
            polytope.order()
        )));
    }
    if let Some(v) = phi.iter().position(|&q| q >= polytope.vertex_count()) {
        return Err(Error::InvalidInput(format!(
            "label of vertex {v} exceeds the polytope vertex count"
        )));
    }
    for g in 1..k {
        for v in 0..complex.vertex_count() {
            if phi[complex.act_vertex(g, v)] != polytope.act_vertex(g, phi[v]) {
                return Err(Error::EquivarianceViolation { g, v });
            }
        }
    }
    for (f, facet) in complex.facets().iter().enumerate() {
        let points: Vec<Vec<Rational>> =
            facet.iter().map(|&v| polytope.vertices()[phi[v]].clone()).collect();
        if let Some(witness) = conv_contains_zero(&points) {
            let simplex = witness.support.iter().map(|&s| facet[s]).collect();
            return Ok(TuckerVerdict::Found { facet: f, simplex, witness });
        }
    }
    Ok(TuckerVerdict::NotFound)
}

/// A colorful Caratheodory instance: `d+1` columns of `m` points each in
/// dimension `d`, with every column's convex hull containing the origin.
/// `columns[nu][r]` is the row-`r` point of column `nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaraInstance {
    pub d: usize,
    pub columns: Vec<Vec<Vec<Rational>>>,
}

impl CaraInstance {
    /// Number of rows (points per column).
    pub fn m(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Validates the shape and the column-hull invariant.
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidInput("instance dimension must be at least 1".into()));
        }
        if self.columns.len() != self.d + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} columns, got {}",
                self.d + 1,
                self.columns.len()
            )));
        }
        let m = self.m();
        if m == 0 {
            return Err(Error::InvalidInput("columns must not be empty".into()));
        }
        for (nu, column) in self.columns.iter().enumerate() {
            if column.len() != m {
                return Err(Error::InvalidInput(format!(
                    "column {nu} has {} rows, expected {m}",
                    column.len()
                )));
            }
            for point in column {
                if point.len() != self.d {
                    return Err(Error::InvalidInput(format!(
                        "column {nu} holds a point of dimension {}, expected {}",
                        point.len(),
                        self.d
                    )));
                }
            }
            if conv_contains_zero(column).is_none() {
                return Err(Error::InvalidInput(format!(
                    "column {nu} hull does not contain the origin"
                )));
            }
        }
        Ok(())
    }
}

/// A transversal whose hull contains the origin. `selection[nu]` is the row
/// picked from column `nu`; `witness` certifies the containment, its support
/// indexing the transversal's point list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaraSolution {
    pub selection: Vec<usize>,
    pub witness: ConvWitness,
}

/// Picks one point per column so that the convex hull of the selection
/// contains the origin. Such a transversal exists for every valid instance,
/// so exhaustion is reported as an internal error rather than an outcome.
///
/// Depth-first search in row order with two exact tests per node. If the
/// partial transversal already captures the origin, the remaining columns
/// are filled with row 0 and the solution returned; the witness only touches
/// the prefix, so it stays valid. Otherwise the prefix is pruned when even
/// the union of all remaining columns cannot capture the origin, which is
/// exactly the strictly-separating-hyperplane prune: for finite rational
/// point sets, the origin misses the hull if and only if a rational
/// hyperplane strictly separates it, and that hyperplane then rejects every
/// extension of the prefix. Both tests are sound, so the first transversal
/// found in depth-first order is returned, deterministically.
pub fn colorful_caratheodory(instance: &CaraInstance) -> Result<CaraSolution> {
    instance.validate()?;
    let mut selection = Vec::with_capacity(instance.d + 1);
    let mut points: Vec<Vec<Rational>> = Vec::with_capacity(instance.d + 1);
    match cara_dfs(instance, &mut selection, &mut points) {
        Some(solution) => Ok(solution),
        None => Err(Error::SearchExhausted(
            "no colorful transversal found for a validated instance, \
             contradicting the existence guarantee"
                .into(),
        )),
    }
}

fn cara_dfs(
    instance: &CaraInstance,
    selection: &mut Vec<usize>,
    points: &mut Vec<Vec<Rational>>,
) -> Option<CaraSolution> {
    if let Some(witness) = conv_contains_zero(points) {
        let mut full = selection.clone();
        full.resize(instance.d + 1, 0);
        return Some(CaraSolution { selection: full, witness });
    }
    let depth = selection.len();
    if depth == instance.d + 1 {
        return None;
    }
    let mut pool = points.clone();
    for column in &instance.columns[depth..] {
        pool.extend(column.iter().cloned());
    }
    if conv_contains_zero(&pool).is_none() {
        return None;
    }
    for r in 0..instance.m() {
        selection.push(r);
        points.push(instance.columns[depth][r].clone());
        if let Some(solution) = cara_dfs(instance, selection, points) {
            return Some(solution);
        }
        selection.pop();
        points.pop();
    }
    None
}
