//! The generalized crosspolytope target of the labeling, and exact convex
//! position tests.
//!
//! Labels live in `G x [n]`: a label `(g, i)` stands for "measure `i` is
//! extremal in direction `g`". Geometrically the label maps to an `n x k`
//! rational matrix with zero row sums whose row `i` is `e_g - (1/k) * sum_h
//! e_h`; the convex hull of all `k*n` such vertices is a generalized
//! crosspolytope, and a set of labels spans a face containing the origin
//! exactly when the set contains a complete fiber `{(g, i0) : g in G}` for
//! some row `i0`. Both sides of that equivalence are implemented here and
//! cross-checked exhaustively in the acceptance suite.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::{rank, solve_unique};
use crate::rational::{rat_int, Rational};

/// A label `(g, i)`: group element and measure row (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CrossLabel {
    pub g: usize,
    pub i: usize,
}

/// An `n x k` rational matrix with zero row sums; `G` acts by permuting
/// columns through left translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumMatrix {
    n: usize,
    k: usize,
    entries: Vec<Rational>,
}

impl ZeroSumMatrix {
    pub fn new(n: usize, k: usize, entries: Vec<Rational>) -> Result<ZeroSumMatrix> {
        if entries.len() != n * k {
            return Err(Error::InvalidInput(format!(
                "{n} x {k} matrix needs {} entries, got {}",
                n * k,
                entries.len()
            )));
        }
        for i in 0..n {
            let row_sum: Rational = entries[i * k..(i + 1) * k].iter().cloned().sum();
            if !row_sum.is_zero() {
                return Err(Error::InvalidInput(format!("row {i} sums to {row_sum}, expected 0")));
            }
        }
        Ok(ZeroSumMatrix { n, k, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.k + j]
    }

    pub fn flat(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Column action: `(g . M)[i][j] = M[i][g^{-1} j]`, matching
    /// `g . vertex_vector(h, i) = vertex_vector(gh, i)`.
    pub fn act(&self, group: &Group, g: usize) -> ZeroSumMatrix {
        let ginv = group.inv(g);
        let entries = (0..self.n * self.k)
            .map(|idx| {
                let (i, j) = (idx / self.k, idx % self.k);
                self.entries[i * self.k + group.mul(ginv, j)].clone()
            })
            .collect();
        ZeroSumMatrix { n: self.n, k: self.k, entries }
    }
}

/// The crosspolytope vertex of label `(g, i)`: row `i` is `e_g - (1/k) 1`,
/// all other rows zero.
pub fn vertex_vector(group: &Group, label: CrossLabel, n: usize) -> Result<ZeroSumMatrix> {
    let k = group.order();
    if label.g >= k {
        return Err(Error::ElementOutOfRange { id: label.g, order: k });
    }
    if label.i >= n {
        return Err(Error::InvalidInput(format!("row {} out of range for n = {n}", label.i)));
    }
    let minus_inv_k = -rat_int(1) / rat_int(k as i64);
    let mut entries = vec![Rational::zero(); n * k];
    for j in 0..k {
        entries[label.i * k + j] = minus_inv_k.clone();
    }
    entries[label.i * k + label.g] += rat_int(1);
    ZeroSumMatrix::new(n, k, entries)
}

/// Smallest row `i0` whose fiber `{(g, i0) : g in G}` is contained in the
/// label set, if any.
pub fn fiber_complete(labels: &[CrossLabel], group: &Group, n: usize) -> Option<usize> {
    let k = group.order();
    (0..n).find(|&i| (0..k).all(|g| labels.contains(&CrossLabel { g, i })))
}

/// A convex combination of input points that equals the origin; the support
/// has at most `dim + 1` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvWitness {
    pub support: Vec<usize>,
    pub coefficients: Vec<Rational>,
}

impl ConvWitness {
    /// Re-checks the witness against the points it indexes.
    pub fn verify(&self, points: &[Vec<Rational>]) -> bool {
        if self.support.len() != self.coefficients.len() || self.support.is_empty() {
            return false;
        }
        let dim = points[0].len();
        let mut sum = vec![Rational::zero(); dim];
        let mut total = Rational::zero();
        for (&idx, coeff) in self.support.iter().zip(&self.coefficients) {
            if idx >= points.len() || coeff < &Rational::zero() {
                return false;
            }
            for (s, x) in sum.iter_mut().zip(&points[idx]) {
                *s += coeff * x;
            }
            total += coeff;
        }
        total == rat_int(1) && sum.iter().all(|s| s.is_zero())
    }
}

/// Decides `0 in conv(points)` exactly.
///
/// Caratheodory: if the origin is in the hull, it is a convex combination of
/// an affinely independent subset of at most `dim(aff hull) + 1` points, and
/// for such subsets the combination is the unique solution of a linear
/// system. Subsets are enumerated smallest first in index order, so the
/// returned witness is canonical.
pub fn conv_contains_zero(points: &[Vec<Rational>]) -> Option<ConvWitness> {
    if points.is_empty() {
        return None;
    }
    let dim = points[0].len();
    assert!(points.iter().all(|p| p.len() == dim), "ragged point set");
    // Affine-hull dimension bounds the support size needed.
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let max_support = rank(&diffs) + 1;

    let mut subset: Vec<usize> = Vec::new();
    for size in 1..=max_support.min(points.len()) {
        subset.clear();
        subset.extend(0..size);
        loop {
            if let Some(w) = witness_for_subset(points, &subset, dim) {
                return Some(w);
            }
            if !advance_subset(&mut subset, points.len()) {
                break;
            }
        }
    }
    None
}

/// Steps to the next size-preserving subset in lexicographic order; false
/// once exhausted.
fn advance_subset(subset: &mut [usize], m: usize) -> bool {
    let s = subset.len();
    for i in (0..s).rev() {
        if subset[i] < m - (s - i) {
            subset[i] += 1;
            for j in i + 1..s {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn witness_for_subset(points: &[Vec<Rational>], subset: &[usize], dim: usize) -> Option<ConvWitness> {
    // Solve sum(lambda_s * p_s) = 0, sum(lambda_s) = 1.
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        a.push(subset.iter().map(|&s| points[s][d].clone()).collect());
    }
    a.push(vec![rat_int(1); subset.len()]);
    let mut b = vec![Rational::zero(); dim];
    b.push(rat_int(1));
    let lambda = solve_unique(&a, &b)?;
    if lambda.iter().any(|l| l < &Rational::zero()) {
        return None;
    }
    Some(ConvWitness { support: subset.to_vec(), coefficients: lambda })
}

/// A `G`-invariant polytope given by rational vertices and the action as a
/// vertex permutation per element.
#[derive(Debug, Clone)]
pub struct GPolytope {
    vertices: Vec<Vec<Rational>>,
    action: Vec<Vec<usize>>,
}

impl GPolytope {
    pub fn new(group: &Group, vertices: Vec<Vec<Rational>>, action: Vec<Vec<usize>>) -> Result<GPolytope> {
        let k = group.order();
        if action.len() != k {
            return Err(Error::InvalidInput("polytope action needs one permutation per element".into()));
        }
        let v = vertices.len();
        for (g, perm) in action.iter().enumerate() {
            let mut seen = vec![false; v];
            for &img in perm {
                if img >= v || seen[img] {
                    return Err(Error::InvalidInput(format!("polytope action of {g} is not a permutation")));
                }
                seen[img] = true;
            }
        }
        for a in 0..k {
            for b in 0..k {
                let ab = group.mul(a, b);
                for vtx in 0..v {
                    if action[a][action[b][vtx]] != action[ab][vtx] {
                        return Err(Error::InvalidInput("polytope action does not compose".into()));
                    }
                }
            }
        }
        let poly = GPolytope { vertices, action };
        poly.certify_zero_interior()?;
        Ok(poly)
    }

    /// The generalized crosspolytope on labels `(g, i)`, vertex index
    /// `i * k + g`.
    pub fn crosspolytope(group: &Group, n: usize) -> Result<GPolytope> {
        let k = group.order();
        let mut vertices = Vec::with_capacity(n * k);
        for i in 0..n {
            for g in 0..k {
                vertices.push(vertex_vector(group, CrossLabel { g, i }, n)?.flat().to_vec());
            }
        }
        let action = (0..k)
            .map(|g| {
                (0..n * k)
                    .map(|idx| {
                        let (i, h) = (idx / k, idx % k);
                        i * k + group.mul(g, h)
                    })
                    .collect()
            })
            .collect();
        GPolytope::new(group, vertices, action)
    }

    /// Orbit polytope of a zero-sum generator vector under left translation
    /// of coordinates: vertex `g` has coordinates `j -> w[g^{-1} j]`.
    pub fn orbit(group: &Group, generator: &[Rational]) -> Result<GPolytope> {
        let k = group.order();
        if generator.len() != k {
            return Err(Error::InvalidInput(format!("generator needs {k} coordinates")));
        }
        let sum: Rational = generator.iter().cloned().sum();
        if !sum.is_zero() {
            return Err(Error::InvalidInput("orbit generator must have zero coordinate sum".into()));
        }
        let vertices: Vec<Vec<Rational>> = (0..k)
            .map(|g| {
                let ginv = group.inv(g);
                (0..k).map(|j| generator[group.mul(ginv, j)].clone()).collect()
            })
            .collect();
        let distinct: std::collections::BTreeSet<&Vec<Rational>> = vertices.iter().collect();
        if distinct.len() != k {
            return Err(Error::InvalidInput("orbit generator has a nontrivial stabilizer".into()));
        }
        let action = (0..k).map(|g| (0..k).map(|h| group.mul(g, h)).collect()).collect();
        GPolytope::new(group, vertices, action)
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Order of the acting group, the length of the action table.
    pub fn order(&self) -> usize {
        self.action.len()
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.action[g][v]
    }

    /// Certifies that 0 is in the relative interior of the vertex hull via a
    /// strictly positive convex combination. The vertex barycenter settles
    /// it for every polytope constructed here.
    fn certify_zero_interior(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidInput("polytope has no vertices".into()));
        }
        let dim = self.vertices[0].len();
        let count = rat_int(self.vertices.len() as i64);
        for d in 0..dim {
            let coord_sum: Rational = self.vertices.iter().map(|v| v[d].clone()).sum();
            if !(coord_sum / &count).is_zero() {
                return Err(Error::InvalidInput(
                    "cannot certify 0 interior: vertex barycenter is not the origin".into(),
                ));
            }
        }
        Ok(())
    }
}
