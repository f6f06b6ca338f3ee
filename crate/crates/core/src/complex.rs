//! The equivariant join complex `E_N G` and its refinements.
//!
//! `E_N G` is the `(N+1)`-fold join of the finite group `G` with itself. A
//! point carries one weight-element pair per join slot: weights are
//! nonnegative rationals summing to 1, and a slot with zero weight carries
//! the identity element so that every point has exactly one representation.
//! `G` acts freely by multiplying every positive slot's element on the left.
//!
//! The natural triangulation has one vertex per `(element, slot)` pair and
//! one facet per assignment of an element to every slot (`k^(N+1)` facets of
//! dimension `N`). Refinement is iterated barycentric subdivision, which the
//! action permutes cleanly: `g . bary(S) = bary(g . S)`.
//!
//! Two representations coexist. [`GComplex`] materializes vertices, facets,
//! and the action as tables; subdivision and the desk-scale verifiers work
//! on it. [`LazyComplex`] addresses the facets of a depth-`d` subdivision by
//! index without materializing anything; the division search iterates it in
//! parallel ranges, since facet counts grow by `(N+1)!` per level.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::rational::{rat_int, Rational};

/// A point of `E_N G` in canonical form: per join slot a weight and a group
/// element, zero-weight slots carrying the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JoinPoint {
    slots: Vec<(Rational, usize)>,
}

impl JoinPoint {
    /// Validates weights and elements and canonicalizes zero slots.
    pub fn new(slots: Vec<(Rational, usize)>, group: &Group) -> Result<JoinPoint> {
        if slots.is_empty() {
            return Err(Error::InvalidInput("join point needs at least one slot".into()));
        }
        let mut total = Rational::zero();
        for (t, g) in &slots {
            if t < &Rational::zero() {
                return Err(Error::InvalidInput(format!("negative slot weight {t}")));
            }
            if *g >= group.order() {
                return Err(Error::ElementOutOfRange { id: *g, order: group.order() });
            }
            total += t;
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("slot weights sum to {total}, expected 1")));
        }
        Ok(JoinPoint::canonical(slots))
    }

    fn canonical(mut slots: Vec<(Rational, usize)>) -> JoinPoint {
        for (t, g) in &mut slots {
            if t.is_zero() {
                *g = 0;
            }
        }
        JoinPoint { slots }
    }

    /// The vertex of the natural triangulation with weight 1 on `slot` and
    /// element `g` there.
    pub fn vertex(n_slots: usize, g: usize, slot: usize) -> JoinPoint {
        let slots = (0..n_slots)
            .map(|j| {
                if j == slot {
                    (Rational::one(), g)
                } else {
                    (Rational::zero(), 0)
                }
            })
            .collect();
        JoinPoint { slots }
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[(Rational, usize)] {
        &self.slots
    }

    pub fn weight(&self, slot: usize) -> &Rational {
        &self.slots[slot].0
    }

    pub fn element(&self, slot: usize) -> usize {
        self.slots[slot].1
    }

    /// Barycenter of points lying in one simplex of a refinement of the
    /// natural triangulation: positive slots of distinct points never carry
    /// conflicting elements there.
    pub fn mean(points: &[&JoinPoint]) -> JoinPoint {
        assert!(!points.is_empty());
        let n_slots = points[0].n_slots();
        let count = rat_int(points.len() as i64);
        let slots = (0..n_slots)
            .map(|j| {
                let mut sum = Rational::zero();
                let mut elem = 0usize;
                for p in points {
                    let (t, g) = &p.slots[j];
                    if !t.is_zero() {
                        debug_assert!(elem == 0 || elem == *g, "points straddle natural facets");
                        elem = *g;
                        sum += t;
                    }
                }
                if sum.is_zero() {
                    (sum, 0)
                } else {
                    (sum / &count, elem)
                }
            })
            .collect();
        JoinPoint { slots }
    }
}

/// Applies `g` to a point: every positive slot's element is multiplied on
/// the left, zero slots stay at the identity.
pub fn act_point(group: &Group, g: usize, p: &JoinPoint) -> Result<JoinPoint> {
    if g >= group.order() {
        return Err(Error::ElementOutOfRange { id: g, order: group.order() });
    }
    Ok(act(group, g, p))
}

pub(crate) fn act(group: &Group, g: usize, p: &JoinPoint) -> JoinPoint {
    let slots = p
        .slots
        .iter()
        .map(|(t, h)| {
            if t.is_zero() {
                (t.clone(), 0)
            } else {
                (t.clone(), group.mul(g, *h))
            }
        })
        .collect();
    JoinPoint { slots }
}

/// A materialized `G`-invariant simplicial complex: vertex coordinates, the
/// facet list, and the action as one vertex permutation per group element.
#[derive(Debug, Clone)]
pub struct GComplex {
    group: Group,
    n_slots: usize,
    vertices: Vec<JoinPoint>,
    /// Facets as strictly increasing vertex-id lists.
    facets: Vec<Vec<usize>>,
    /// `action[g][v]` is the vertex id of `g . v`.
    action: Vec<Vec<usize>>,
    depth: u32,
}

/// Builds the natural triangulation of `E_N G`. Vertex `(g, j)` gets id
/// `j * |G| + g`; facets enumerate every element assignment, slot 0 most
/// significant.
pub fn build_join_complex(group: &Group, n: usize) -> GComplex {
    let k = group.order();
    let n_slots = n + 1;
    let vertices: Vec<JoinPoint> = (0..n_slots)
        .flat_map(|j| (0..k).map(move |g| (g, j)))
        .map(|(g, j)| JoinPoint::vertex(n_slots, g, j))
        .collect();
    let mut facets = Vec::with_capacity(k.pow(n_slots as u32));
    let mut assignment = vec![0usize; n_slots];
    loop {
        facets.push((0..n_slots).map(|j| j * k + assignment[j]).collect());
        // Increment the assignment as a base-k counter, slot 0 most
        // significant.
        let mut j = n_slots;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            assignment[j] += 1;
            if assignment[j] < k {
                break;
            }
            assignment[j] = 0;
        }
        if assignment.iter().all(|&d| d == 0) {
            break;
        }
    }
    let action = (0..k)
        .map(|g| {
            (0..n_slots)
                .flat_map(|j| (0..k).map(move |h| (h, j)))
                .map(|(h, j)| j * k + group.mul(g, h))
                .collect()
        })
        .collect();
    GComplex { group: group.clone(), n_slots, vertices, facets, action, depth: 0 }
}

impl GComplex {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn dim(&self) -> usize {
        self.n_slots - 1
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: usize) -> &JoinPoint {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[JoinPoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.action[g][v]
    }

    /// One facet id per orbit of the free action: representatives are the
    /// facets whose sorted id list is lexicographically minimal among their
    /// translates.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        let mut reps = Vec::with_capacity(self.facets.len() / self.group.order());
        for (f, facet) in self.facets.iter().enumerate() {
            let minimal = self.group.elements().skip(1).all(|g| {
                let mut translated: Vec<usize> = facet.iter().map(|&v| self.action[g][v]).collect();
                translated.sort_unstable();
                translated.as_slice() >= facet.as_slice()
            });
            if minimal {
                reps.push(f);
            }
        }
        reps
    }

    /// Checks the structural invariants: canonical vertex coordinates, the
    /// action being a free simplicial automorphism, and every facet spanning
    /// affinely independent points of one natural join simplex. Exhaustive;
    /// intended for tests and small complexes.
    pub fn validate(&self) -> Result<()> {
        let k = self.group.order();
        for (v, p) in self.vertices.iter().enumerate() {
            if p.n_slots() != self.n_slots {
                return Err(Error::InvalidInput(format!("vertex {v} has wrong slot count")));
            }
            let total: Rational = p.slots().iter().map(|(t, _)| t.clone()).sum();
            if !total.is_one() {
                return Err(Error::InvalidInput(format!("vertex {v} weights sum to {total}")));
            }
            for (t, g) in p.slots() {
                if t < &Rational::zero() || (t.is_zero() && *g != 0) || *g >= k {
                    return Err(Error::InvalidInput(format!("vertex {v} is not canonical")));
                }
            }
        }
        for g in 0..k {
            let perm = &self.action[g];
            let mut seen = vec![false; self.vertices.len()];
            for (v, &gv) in perm.iter().enumerate() {
                if gv >= self.vertices.len() || seen[gv] {
                    return Err(Error::InvalidInput(format!("action of {g} is not a permutation")));
                }
                seen[gv] = true;
                if self.vertices[gv] != act(&self.group, g, &self.vertices[v]) {
                    return Err(Error::InvalidInput(format!(
                        "action of {g} disagrees with coordinates at vertex {v}"
                    )));
                }
                if g != 0 && gv == v {
                    return Err(Error::InvalidInput(format!("action of {g} fixes vertex {v}")));
                }
            }
        }
        let facet_set: std::collections::BTreeSet<&Vec<usize>> = self.facets.iter().collect();
        for facet in &self.facets {
            if facet.windows(2).any(|w| w[0] >= w[1]) || facet.len() != self.n_slots {
                return Err(Error::InvalidInput("facet is not a sorted full-dimensional id list".into()));
            }
            for g in 1..k {
                let mut translated: Vec<usize> = facet.iter().map(|&v| self.action[g][v]).collect();
                translated.sort_unstable();
                if !facet_set.contains(&translated) {
                    return Err(Error::InvalidInput("action does not permute facets".into()));
                }
            }
            // One element per slot across the facet's positive weights.
            let mut slot_elem: Vec<Option<usize>> = vec![None; self.n_slots];
            for &v in facet {
                for (j, (t, g)) in self.vertices[v].slots().iter().enumerate() {
                    if !t.is_zero() {
                        match slot_elem[j] {
                            None => slot_elem[j] = Some(*g),
                            Some(e) if e != *g => {
                                return Err(Error::InvalidInput(
                                    "facet straddles two natural join simplices".into(),
                                ))
                            }
                            _ => {}
                        }
                    }
                }
            }
            // Affine independence: the weight vectors, one dropped, must be
            // linearly independent after subtracting the dropped one.
            let base: Vec<Rational> =
                self.vertices[facet[0]].slots().iter().map(|(t, _)| t.clone()).collect();
            let rows: Vec<Vec<Rational>> = facet[1..]
                .iter()
                .map(|&v| {
                    self.vertices[v]
                        .slots()
                        .iter()
                        .zip(&base)
                        .map(|((t, _), b)| t - b)
                        .collect()
                })
                .collect();
            if crate::linalg::rank(&rows) != rows.len() {
                return Err(Error::InvalidInput("facet is affinely degenerate".into()));
            }
        }
        Ok(())
    }
}

/// Barycentric subdivision preserving the group action. New vertices are the
/// barycenters of the faces of the old complex, ordered by (face dimension,
/// face id list); new facets are the flags of faces inside each old facet.
pub fn barycentric_subdivide(complex: &GComplex) -> GComplex {
    let n_slots = complex.n_slots;
    // Collect every nonempty face of every facet, deduplicated.
    let mut faces: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    for facet in &complex.facets {
        let m = facet.len();
        for mask in 1u32..(1 << m) {
            let face: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).map(|i| facet[i]).collect();
            faces.insert(face);
        }
    }
    let mut ordered: Vec<Vec<usize>> = faces.into_iter().collect();
    ordered.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    let face_id: BTreeMap<&[usize], usize> =
        ordered.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();

    let vertices: Vec<JoinPoint> = ordered
        .iter()
        .map(|face| {
            let points: Vec<&JoinPoint> = face.iter().map(|&v| &complex.vertices[v]).collect();
            JoinPoint::mean(&points)
        })
        .collect();

    let mut facets = Vec::with_capacity(complex.facets.len() * factorial(n_slots) as usize);
    let perms = permutations(n_slots);
    for facet in &complex.facets {
        for perm in &perms {
            let mut chain: Vec<usize> = Vec::with_capacity(n_slots);
            let mut prefix: Vec<usize> = Vec::with_capacity(n_slots);
            for &idx in perm {
                prefix.push(facet[idx as usize]);
                prefix.sort_unstable();
                chain.push(face_id[prefix.as_slice()]);
            }
            chain.sort_unstable();
            facets.push(chain);
        }
    }
    facets.sort_unstable();

    let action: Vec<Vec<usize>> = complex
        .group
        .elements()
        .map(|g| {
            ordered
                .iter()
                .map(|face| {
                    let mut translated: Vec<usize> =
                        face.iter().map(|&v| complex.action[g][v]).collect();
                    translated.sort_unstable();
                    face_id[translated.as_slice()]
                })
                .collect()
        })
        .collect();

    GComplex {
        group: complex.group.clone(),
        n_slots,
        vertices,
        facets,
        action,
        depth: complex.depth + 1,
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(factorial(n) as usize);
    let mut current: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(current.clone());
        // Next lexicographic permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// A facet of a (possibly deep) barycentric refinement of `E_N G`,
/// reconstructed on demand.
#[derive(Debug, Clone)]
pub struct Facet {
    /// Vertex coordinates, ordered by ascending flag length.
    pub vertices: Vec<JoinPoint>,
    /// Element per slot of the natural facet this one refines.
    pub natural: Vec<usize>,
}

/// Facets of the depth-`d` barycentric refinement of `E_N G`, addressed by
/// index instead of materialized. The index space factors as one natural
/// facet orbit representative (`g_0 = 0`, one per orbit of the free action)
/// times a chain of subdivision permutations, which makes parallel range
/// splitting and deterministic reduction straightforward.
#[derive(Debug, Clone)]
pub struct LazyComplex {
    group: Group,
    n_slots: usize,
    depth: u32,
    perms: Vec<Vec<u8>>,
}

impl LazyComplex {
    pub fn new(group: &Group, n: usize, depth: u32) -> LazyComplex {
        let n_slots = n + 1;
        LazyComplex { group: group.clone(), n_slots, depth, perms: permutations(n_slots) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn deeper(&self) -> LazyComplex {
        LazyComplex {
            group: self.group.clone(),
            n_slots: self.n_slots,
            depth: self.depth + 1,
            perms: self.perms.clone(),
        }
    }

    /// Total facet count, all orbits.
    pub fn facet_count(&self) -> u128 {
        let k = self.group.order() as u128;
        let p = factorial(self.n_slots);
        k.pow(self.n_slots as u32) * p.pow(self.depth)
    }

    /// Number of natural-facet orbit representatives.
    fn rep_count(&self) -> u128 {
        (self.group.order() as u128).pow(self.n_slots as u32 - 1)
    }

    /// Parallelizable block count. A block fixes the representative and all
    /// subdivision levels but the last; iterating a block re-derives each
    /// intermediate simplex once instead of once per leaf.
    pub fn block_count(&self) -> Result<u64> {
        let p = factorial(self.n_slots);
        let blocks = self.rep_count() * p.pow(self.depth.saturating_sub(1));
        u64::try_from(blocks).map_err(|_| {
            Error::SearchExhausted(format!("{blocks} scan blocks exceed the addressable range"))
        })
    }

    /// Facets per block: `(N+1)!` once subdivided, 1 at depth 0.
    pub fn block_width(&self) -> u64 {
        if self.depth == 0 {
            1
        } else {
            factorial(self.n_slots) as u64
        }
    }

    fn natural_rep(&self, index: u128) -> Vec<usize> {
        let k = self.group.order() as u128;
        let mut assignment = vec![0usize; self.n_slots];
        let mut rest = index;
        // Slot 0 is pinned to the identity; slot 1 is most significant.
        for j in (1..self.n_slots).rev() {
            assignment[j] = (rest % k) as usize;
            rest /= k;
        }
        debug_assert_eq!(rest, 0);
        assignment
    }

    fn natural_simplex(&self, assignment: &[usize]) -> Vec<JoinPoint> {
        assignment
            .iter()
            .enumerate()
            .map(|(j, &g)| JoinPoint::vertex(self.n_slots, g, j))
            .collect()
    }

    fn child(&self, simplex: &[JoinPoint], perm: &[u8]) -> Vec<JoinPoint> {
        let mut out = Vec::with_capacity(self.n_slots);
        let mut prefix: Vec<&JoinPoint> = Vec::with_capacity(self.n_slots);
        for &idx in perm {
            prefix.push(&simplex[idx as usize]);
            out.push(JoinPoint::mean(&prefix));
        }
        out
    }

    /// Runs `visit` on every facet of the block. Facets within a block share
    /// their subdivision prefix, so the parent simplex is derived once.
    pub fn visit_block<F: FnMut(&Facet)>(&self, block: u64, mut visit: F) {
        let p = factorial(self.n_slots);
        let levels = self.depth.saturating_sub(1);
        let mut rest = block as u128;
        let mut chain: Vec<usize> = Vec::with_capacity(levels as usize);
        for _ in 0..levels {
            chain.push((rest % p) as usize);
            rest /= p;
        }
        let natural = self.natural_rep(rest);
        let mut simplex = self.natural_simplex(&natural);
        for &perm_idx in chain.iter().rev() {
            simplex = self.child(&simplex, &self.perms[perm_idx]);
        }
        if self.depth == 0 {
            visit(&Facet { vertices: simplex, natural });
            return;
        }
        for perm in &self.perms {
            visit(&Facet { vertices: self.child(&simplex, perm), natural: natural.clone() });
        }
    }

    /// Enumerates every facet orbit representative through the block
    /// structure; test- and desk-scale helper.
    pub fn for_each_rep_facet<F: FnMut(&Facet)>(&self, mut visit: F) -> Result<()> {
        for block in 0..self.block_count()? {
            self.visit_block(block, &mut visit);
        }
        Ok(())
    }

    /// Materializes the full complex (all orbits) at the lazy depth; only
    /// sensible at desk scale. Vertex ids follow sorted coordinate order.
    pub fn materialize(&self) -> Result<GComplex> {
        let k = self.group.order();
        let mut facet_points: Vec<Vec<JoinPoint>> = Vec::new();
        self.for_each_rep_facet(|facet| {
            for g in 0..k {
                facet_points.push(
                    facet.vertices.iter().map(|v| act(&self.group, g, v)).collect(),
                );
            }
        })?;
        let mut vertex_ids: BTreeMap<JoinPoint, usize> = BTreeMap::new();
        for points in &facet_points {
            for p in points {
                let next = vertex_ids.len();
                vertex_ids.entry(p.clone()).or_insert(next);
            }
        }
        // Re-key ids by sorted coordinate order for determinism.
        let mut vertices: Vec<JoinPoint> = vertex_ids.keys().cloned().collect();
        vertices.sort();
        let ids: BTreeMap<&JoinPoint, usize> =
            vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut facets: Vec<Vec<usize>> = facet_points
            .iter()
            .map(|points| {
                let mut f: Vec<usize> = points.iter().map(|p| ids[p]).collect();
                f.sort_unstable();
                f
            })
            .collect();
        facets.sort_unstable();
        facets.dedup();
        let action: Vec<Vec<usize>> = (0..k)
            .map(|g| vertices.iter().map(|p| ids[&act(&self.group, g, p)]).collect())
            .collect();
        Ok(GComplex {
            group: self.group.clone(),
            n_slots: self.n_slots,
            vertices,
            facets,
            action,
            depth: self.depth,
        })
    }
}
