//! The Simmons–Su sphere and its identification with the join complex.
//!
//! The sphere `S^n_k` consists of complex tuples `(t_0 w^{j_0}, …, t_n w^{j_n})`
//! with `w = e^{2 pi i / k}`, nonnegative weights summing to one and powers
//! `j_i` in `1..=k`. Enumerating a group `G` of order `k` as `g_1, …, g_k`
//! identifies this sphere with the join of `n + 1` copies of `G` by
//! substituting `g_j` for `w^j` coordinate by coordinate. The substitution is
//! equivariant for the embedding of `G` into the symmetric group by left
//! translation, so conjecture instances posed on the sphere can be handed to
//! the fully-labeled-simplex search unchanged.

use crate::complex::{JoinPoint, LazyComplex};
use crate::crosspolytope::CrossLabel;
use crate::division::LabelOutcome;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rational::Rational;
use crate::search::{find_fully_labeled, ScanMode, SearchResult};
use num_traits::{One, Zero};

/// A point of the sphere: coordinates `t_i w^{j_i}` stored as pairs
/// `(t_i, j_i)`. Zero-weight coordinates carry the canonical power `k`,
/// matching `w^k = 1` on the positive real axis where the coordinate
/// degenerates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SPoint {
    k: usize,
    coords: Vec<(Rational, usize)>,
}

impl SPoint {
    /// Validates weights and powers and canonicalizes zero coordinates.
    pub fn new(k: usize, coords: Vec<(Rational, usize)>) -> Result<SPoint> {
        if k == 0 {
            return Err(Error::InvalidInput("sphere points need k >= 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidInput("a sphere point needs at least one coordinate".into()));
        }
        let mut total = Rational::zero();
        for (t, j) in &coords {
            if t < &Rational::zero() {
                return Err(Error::InvalidInput(format!("negative coordinate weight {t}")));
            }
            if *j == 0 || *j > k {
                return Err(Error::InvalidInput(format!("power {j} outside 1..={k}")));
            }
            total += t;
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "coordinate weights sum to {total}, expected 1"
            )));
        }
        let coords = coords
            .into_iter()
            .map(|(t, j)| if t.is_zero() { (t, k) } else { (t, j) })
            .collect();
        Ok(SPoint { k, coords })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[(Rational, usize)] {
        &self.coords
    }

    /// Applies a permutation of the powers: `t w^j` becomes `t w^{pi(j)}`.
    /// `pi` is zero-based, mapping `j` to `pi[j - 1] + 1`.
    pub fn permuted(&self, pi: &[usize]) -> Result<SPoint> {
        if pi.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "permutation has length {}, expected {}",
                pi.len(),
                self.k
            )));
        }
        let coords = self
            .coords
            .iter()
            .map(|(t, j)| {
                let target = *pi.get(j - 1).unwrap();
                if target >= self.k {
                    return Err(Error::InvalidInput(format!(
                        "permutation image {target} outside 0..{}",
                        self.k
                    )));
                }
                Ok((t.clone(), target + 1))
            })
            .collect::<Result<_>>()?;
        SPoint::new(self.k, coords)
    }
}

/// A conjecture label `w^power * row`, both components one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SLabel {
    pub power: usize,
    pub row: usize,
}

impl SLabel {
    /// The label `pi . l`: the power moves with the permutation, the row is
    /// fixed. Equivariant labelings satisfy `l(pi . v) = pi . l(v)`.
    pub fn permuted(&self, pi: &[usize]) -> Result<SLabel> {
        let k = pi.len();
        if self.power == 0 || self.power > k {
            return Err(Error::InvalidInput(format!("power {} outside 1..={k}", self.power)));
        }
        let target = pi[self.power - 1];
        if target >= k {
            return Err(Error::InvalidInput(format!("permutation image {target} outside 0..{k}")));
        }
        Ok(SLabel { power: target + 1, row: self.row })
    }
}

/// A group of order `k` embedded in the symmetric group on the powers
/// through an enumeration `g_1, …, g_k`, identifying the sphere with the
/// join complex by the substitution `t w^j -> t g_j`.
#[derive(Debug, Clone)]
pub struct Embedding {
    group: Group,
    enumeration: Vec<usize>,
    position: Vec<usize>,
}

impl Embedding {
    /// The id-order enumeration `g_j = j - 1`.
    pub fn standard(group: Group) -> Embedding {
        let enumeration = (0..group.order()).collect();
        Embedding::with_enumeration(group, enumeration).expect("id order enumerates the group")
    }

    /// Embeds through an explicit enumeration, which must list every group
    /// element exactly once.
    pub fn with_enumeration(group: Group, enumeration: Vec<usize>) -> Result<Embedding> {
        let k = group.order();
        if enumeration.len() != k {
            return Err(Error::InvalidInput(format!(
                "enumeration lists {} elements, the group has order {k}",
                enumeration.len()
            )));
        }
        let mut position = vec![usize::MAX; k];
        for (idx, &g) in enumeration.iter().enumerate() {
            if g >= k {
                return Err(Error::ElementOutOfRange { id: g, order: k });
            }
            if position[g] != usize::MAX {
                return Err(Error::InvalidInput(format!("enumeration repeats element {g}")));
            }
            position[g] = idx;
        }
        Ok(Embedding { group, enumeration, position })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn k(&self) -> usize {
        self.group.order()
    }

    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    /// The permutation of powers induced by left translation: the position
    /// of `g_j` maps to the position of `g * g_j`. These permutations
    /// compose like the group, which is what makes the embedding an
    /// embedding.
    pub fn permutation(&self, g: usize) -> Result<Vec<usize>> {
        let k = self.k();
        if g >= k {
            return Err(Error::ElementOutOfRange { id: g, order: k });
        }
        Ok((0..k).map(|idx| self.position[self.group.mul(g, self.enumeration[idx])]).collect())
    }

    /// Substitutes group elements for roots of unity coordinate by
    /// coordinate.
    pub fn to_join_point(&self, s: &SPoint) -> Result<JoinPoint> {
        if s.k() != self.k() {
            return Err(Error::InvalidInput(format!(
                "point lives on a sphere with k = {}, the embedding has order {}",
                s.k(),
                self.k()
            )));
        }
        let slots =
            s.coords().iter().map(|(t, j)| (t.clone(), self.enumeration[j - 1])).collect();
        JoinPoint::new(slots, &self.group)
    }

    /// Inverts the substitution. Zero-weight slots take the canonical
    /// power `k`, so the round trip is the identity on canonical
    /// representatives in both directions.
    pub fn from_join_point(&self, p: &JoinPoint) -> Result<SPoint> {
        let k = self.k();
        let coords = p
            .slots()
            .iter()
            .map(|(t, g)| {
                if t.is_zero() {
                    return Ok((Rational::zero(), k));
                }
                if *g >= k {
                    return Err(Error::ElementOutOfRange { id: *g, order: k });
                }
                Ok((t.clone(), self.position[*g] + 1))
            })
            .collect::<Result<_>>()?;
        SPoint::new(k, coords)
    }
}

/// The outcome of one conjecture instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjectureVerdict {
    /// `k` adjacent vertices labeled `w^1 m, …, w^k m` for the fixed row
    /// `m`; `simplex[j - 1]` carries the label with power `j`.
    Found { row: usize, simplex: Vec<SPoint> },
    /// No fully labeled simplex in this triangulation. For `k` a prime
    /// power acting through `(Z_p)^r` this cannot happen; for other groups
    /// it is a data point and says nothing about the conjecture, since
    /// these triangulations are a restricted family.
    NotFound,
}

/// Checks one conjecture instance: the sphere of dimension `n(k - 1)`,
/// triangulated by `depth` rounds of equivariant barycentric refinement of
/// its natural triangulation, with vertex labels supplied by `labels`.
///
/// The labeling must be equivariant for the embedded group action,
/// `l(pi_g . v) = pi_g . l(v)`; violations are reported as errors. Labels
/// translate to cross-polytope labels through the enumeration, the search
/// runs on the join complex, and a hit is translated back to sphere points.
pub fn check_conjecture_instance<F>(
    embedding: &Embedding,
    n: usize,
    depth: u32,
    mut labels: F,
) -> Result<ConjectureVerdict>
where
    F: FnMut(&SPoint) -> Result<SLabel>,
{
    let k = embedding.k();
    if n == 0 {
        return Err(Error::InvalidInput("conjecture instances need at least one label row".into()));
    }
    let complex = LazyComplex::new(embedding.group(), n * (k - 1), depth).materialize()?;
    let translated = |v: usize| -> Result<LabelOutcome> {
        let s = embedding.from_join_point(complex.vertex(v))?;
        let label = labels(&s)?;
        if label.power == 0 || label.power > k {
            return Err(Error::InvalidInput(format!(
                "label power {} outside 1..={k}",
                label.power
            )));
        }
        if label.row == 0 || label.row > n {
            return Err(Error::InvalidInput(format!("label row {} outside 1..={n}", label.row)));
        }
        let g = embedding.enumeration()[label.power - 1];
        Ok(LabelOutcome::Label(CrossLabel { g, i: label.row - 1 }))
    };
    match find_fully_labeled(&complex, translated, n, ScanMode::OrbitPruned)? {
        SearchResult::ExactVertex(_) => {
            unreachable!("conjecture labelings never produce the exact outcome")
        }
        SearchResult::FoundSimplex(hit) => {
            let simplex = (1..=k)
                .map(|j| {
                    let v = hit.vertices[embedding.enumeration()[j - 1]];
                    embedding.from_join_point(complex.vertex(v))
                })
                .collect::<Result<_>>()?;
            Ok(ConjectureVerdict::Found { row: hit.fiber_row + 1, simplex })
        }
        SearchResult::NotFound => Ok(ConjectureVerdict::NotFound),
    }
}
