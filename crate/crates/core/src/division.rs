//! Interval partition schemes, their value tables under a measure family,
//! and the combinatorial label of a division point.
//!
//! A point of the join complex decodes to a partition of `[0,1]` into
//! consecutive intervals, each assigned to a part (a group element). The
//! value table records how much of each measure every part receives; the
//! labeling rule turns a value table into a crosspolytope label in an
//! equivariant way, which is the bridge between the simplicial search and
//! the existence argument.

use num_traits::{Signed, Zero};

use crate::complex::JoinPoint;
use crate::crosspolytope::{CrossLabel, ZeroSumMatrix};
use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::linalg;
use crate::measure::{BeadString, Measure};
use crate::rational::{rat, rat_int, sign, Rational};

/// A division of `[0,1]` by `cuts` into `cuts.len() + 1` consecutive
/// intervals, interval `j` assigned to part `assignment[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScheme {
    k: usize,
    cuts: Vec<Rational>,
    assignment: Vec<usize>,
}

impl PartitionScheme {
    pub fn new(k: usize, cuts: Vec<Rational>, assignment: Vec<usize>) -> Result<PartitionScheme> {
        if k == 0 {
            return Err(Error::InvalidInput("a scheme needs at least one part".into()));
        }
        if assignment.len() != cuts.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} cuts need {} assigned intervals, got {}",
                cuts.len(),
                cuts.len() + 1,
                assignment.len()
            )));
        }
        let zero = Rational::zero();
        let one = rat_int(1);
        let mut prev = zero.clone();
        for c in &cuts {
            if c < &prev || c > &one {
                return Err(Error::InvalidInput("cuts must be nondecreasing within [0,1]".into()));
            }
            prev = c.clone();
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= k) {
            return Err(Error::InvalidInput(format!("part {bad} out of range for k = {k}")));
        }
        Ok(PartitionScheme { k, cuts, assignment })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// The intervals assigned to `part`, degenerate ones dropped.
    pub fn intervals_of_part(&self, part: usize) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let mut lo = Rational::zero();
        for (j, a) in self.assignment.iter().enumerate() {
            let hi = if j < self.cuts.len() { self.cuts[j].clone() } else { rat_int(1) };
            if *a == part && lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            lo = hi;
        }
        out
    }
}

/// Reads a join point as a partition scheme: cuts are the prefix sums of the
/// slot weights, parts are the slot elements. Degenerate intervals keep
/// whatever element the canonical form gave them; they carry no mass.
pub fn decode(point: &JoinPoint, k: usize) -> Result<PartitionScheme> {
    let slots = point.slots();
    let mut cuts = Vec::with_capacity(slots.len() - 1);
    let mut acc = Rational::zero();
    for (t, _) in &slots[..slots.len() - 1] {
        acc += t;
        cuts.push(acc.clone());
    }
    let assignment = slots.iter().map(|&(_, g)| g).collect();
    PartitionScheme::new(k, cuts, assignment)
}

/// `values[i][e]` = mass of measure `i` on the union of intervals assigned
/// to part `e`. Rows sum to 1.
pub fn values_table(scheme: &PartitionScheme, measures: &[Measure]) -> Result<Vec<Vec<Rational>>> {
    if measures.is_empty() {
        return Err(Error::InvalidInput("values table needs at least one measure".into()));
    }
    let mut table = Vec::with_capacity(measures.len());
    for m in measures {
        let row: Result<Vec<Rational>> =
            (0..scheme.k).map(|e| m.mass_of_union(&scheme.intervals_of_part(e))).collect();
        table.push(row?);
    }
    Ok(table)
}

/// Cyclic defect matrix `E[i][e] = values[i][e] - values[i][e-1]` with the
/// element index taken mod `k`. Rows telescope to zero, so a division is an
/// exact equipartition for measure `i` exactly when row `i` vanishes.
pub fn defect_matrix(scheme: &PartitionScheme, measures: &[Measure]) -> Result<ZeroSumMatrix> {
    let values = values_table(scheme, measures)?;
    let k = scheme.k;
    let mut entries = Vec::with_capacity(values.len() * k);
    for row in &values {
        for e in 0..k {
            entries.push(&row[e] - &row[(e + k - 1) % k]);
        }
    }
    ZeroSumMatrix::new(values.len(), k, entries)
}

/// What the labeling rule saw at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelOutcome {
    /// Every part of every measure already weighs exactly `1/k`.
    Exact,
    Label(CrossLabel),
}

/// The equivariant label of a division point for a prime cyclic group.
///
/// Let `m` be the smallest entry of the value table and `i0` the first
/// measure attaining it. The sign vector of row `i0` is `eps[e] =
/// sign(values[e+1] - values[e])` (indices mod `p`). An all-zero sign vector
/// forces the whole table constant at `1/p`, the exact case. Otherwise the
/// label is `(e*, i0)` where `e*` starts the lexicographically smallest
/// rotation of the sign vector under `- < 0 < +`; for prime `p` and a
/// nonconstant vector that rotation is unique, which is what makes the rule
/// well defined and equivariant.
pub fn label_vertex(point: &JoinPoint, measures: &[Measure], group: &Group) -> Result<LabelOutcome> {
    let p = group.order();
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let scheme = decode(point, p)?;
    let values = values_table(&scheme, measures)?;

    let mut min_val = &values[0][0];
    for row in &values {
        for v in row {
            if v < min_val {
                min_val = v;
            }
        }
    }
    let i0 = values.iter().position(|row| row.iter().any(|v| v == min_val)).unwrap();

    let eps: Vec<i8> = (0..p).map(|e| sign(&(&values[i0][(e + 1) % p] - &values[i0][e]))).collect();
    if eps.iter().all(|&s| s == 0) {
        return Ok(LabelOutcome::Exact);
    }

    let mut best = 0;
    for e in 1..p {
        for s in 0..p {
            let a = eps[(e + s) % p];
            let b = eps[(best + s) % p];
            if a != b {
                if a < b {
                    best = e;
                }
                break;
            }
        }
    }
    debug_assert!(
        (1..p).all(|e| e == best || (0..p).any(|s| eps[(e + s) % p] != eps[(best + s) % p])),
        "rotation minimum must be unique for prime order"
    );
    Ok(LabelOutcome::Label(CrossLabel { g: best, i: i0 }))
}

/// Largest deviation of any table entry from the fair share `1/k`.
pub fn max_deviation(values: &[Vec<Rational>], k: usize) -> Rational {
    let share = rat(1, k as i64);
    values
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| (v - &share).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Searches the fixed interval assignment for cut positions making every
/// part of every measure weigh exactly `1/k`.
///
/// Within one choice of breakpoint cell per cut the value table is affine in
/// the cuts, so `values = 1/k` is a square linear system solvable exactly.
/// Ordered cuts only fit nondecreasing cell tuples, and those are few, so
/// the solver enumerates them in lexicographic order and returns the first
/// solution that lies in its own cell and is ordered; the result is verified
/// exact before it leaves. A singular cell system means a density plateau
/// makes whole families of cut tuples equivalent; those cells fall back to
/// an exact feasibility solve over the same equalities plus the cell box and
/// the cut ordering, so a cell containing any equipartition always yields
/// one.
pub fn solve_in_assignment(
    assignment: &[usize],
    measures: &[Measure],
    k: usize,
) -> Option<PartitionScheme> {
    let n = measures.len();
    let n_cuts = assignment.len().checked_sub(1)?;
    if k < 2 || n == 0 || n_cuts != n * (k - 1) || assignment.iter().any(|&a| a >= k) {
        return None;
    }

    // Shared breakpoint grid and per-measure slope data on every grid cell.
    let mut grid: Vec<Rational> = measures.iter().flat_map(|m| m.breakpoints().iter().cloned()).collect();
    grid.sort();
    grid.dedup();
    let n_cells = grid.len() - 1;
    let mut dens = vec![Vec::with_capacity(n_cells); n];
    let mut grid_cdf = vec![Vec::with_capacity(grid.len()); n];
    for (i, m) in measures.iter().enumerate() {
        for c in 0..n_cells {
            let piece = m.breakpoints().partition_point(|b| b <= &grid[c]) - 1;
            dens[i].push(m.densities()[piece].clone());
        }
        for b in &grid {
            grid_cdf[i].push(m.cdf(b));
        }
    }

    let mut cell = vec![0usize; n_cuts];
    loop {
        if cell_feasible(assignment, k, &grid_cdf, &cell) {
            let (a, b) = cell_system(assignment, n, k, &grid, &dens, &grid_cdf, &cell);
            let target = match linalg::solve_unique(&a, &b) {
                Some(t) => {
                    let inside =
                        (0..n_cuts).all(|j| grid[cell[j]] <= t[j] && t[j] <= grid[cell[j] + 1]);
                    let ordered = t.windows(2).all(|w| w[0] <= w[1]);
                    (inside && ordered).then_some(t)
                }
                None => solve_degenerate_cell(&a, &b, &grid, &cell),
            };
            if let Some(target) = target {
                let scheme = PartitionScheme::new(k, target, assignment.to_vec()).ok()?;
                let values = values_table(&scheme, measures).ok()?;
                if !max_deviation(&values, k).is_zero() {
                    debug_assert!(false, "cell solution must verify exactly");
                    return None;
                }
                return Some(scheme);
            }
        }
        // Next nondecreasing cell tuple.
        let Some(j) = (0..n_cuts).rev().find(|&j| cell[j] < n_cells - 1) else {
            return None;
        };
        let bumped = cell[j] + 1;
        for c in cell.iter_mut().skip(j) {
            *c = bumped;
        }
    }
}

/// Necessary condition for a cell tuple, much cheaper than solving it: each
/// part's mass is monotone in every cut (the CDFs increase), so over the
/// cell box it ranges between the values at the box corners. If some part
/// cannot reach 1/k for some measure, no point of the cell solves the
/// system. Cut ordering is ignored, which only widens the ranges.
fn cell_feasible(
    assignment: &[usize],
    k: usize,
    grid_cdf: &[Vec<Rational>],
    cell: &[usize],
) -> bool {
    let share = rat(1, k as i64);
    for cdf in grid_cdf {
        let mut lo = vec![Rational::zero(); k];
        let mut hi = vec![Rational::zero(); k];
        let last = *assignment.last().expect("assignments are nonempty");
        lo[last] += rat_int(1);
        hi[last] += rat_int(1);
        for (c, &box_c) in cell.iter().enumerate() {
            let left = assignment[c];
            let right = assignment[c + 1];
            if left == right {
                continue;
            }
            // Cut c closes the segment in `left` and opens the one in
            // `right`, so it adds cdf(t_c) to the former and subtracts it
            // from the latter.
            lo[left] += &cdf[box_c];
            hi[left] += &cdf[box_c + 1];
            lo[right] -= &cdf[box_c + 1];
            hi[right] -= &cdf[box_c];
        }
        for part in 0..k {
            if hi[part] < share || share < lo[part] {
                return false;
            }
        }
    }
    true
}

/// Feasibility fallback for singular cell systems: the equalities plus each
/// cut's cell box plus the ordering chain. Any point the solver returns lies
/// in the cell and is ordered by construction.
fn solve_degenerate_cell(
    a: &[Vec<Rational>],
    b: &[Rational],
    grid: &[Rational],
    cell: &[usize],
) -> Option<Vec<Rational>> {
    let n_cuts = cell.len();
    let mut le_a = Vec::with_capacity(3 * n_cuts);
    let mut le_b = Vec::with_capacity(3 * n_cuts);
    for j in 0..n_cuts {
        let mut row = vec![Rational::zero(); n_cuts];
        row[j] = rat_int(-1);
        le_a.push(row);
        le_b.push(-&grid[cell[j]]);
        let mut row = vec![Rational::zero(); n_cuts];
        row[j] = rat_int(1);
        le_a.push(row);
        le_b.push(grid[cell[j] + 1].clone());
    }
    for j in 0..n_cuts.saturating_sub(1) {
        let mut row = vec![Rational::zero(); n_cuts];
        row[j] = rat_int(1);
        row[j + 1] = rat_int(-1);
        le_a.push(row);
        le_b.push(Rational::zero());
    }
    linalg::feasible_point(a, b, &le_a, &le_b)
}

fn cell_system(
    assignment: &[usize],
    n: usize,
    k: usize,
    grid: &[Rational],
    dens: &[Vec<Rational>],
    grid_cdf: &[Vec<Rational>],
    cell: &[usize],
) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n_cuts = cell.len();
    let share = rat(1, k as i64);
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n * (k - 1));
    let mut b: Vec<Rational> = Vec::with_capacity(n * (k - 1));
    for i in 0..n {
        for e in 1..k {
            let mut coeffs = vec![Rational::zero(); n_cuts];
            let mut constant = Rational::zero();
            for (j, &part) in assignment.iter().enumerate() {
                if part != e {
                    continue;
                }
                // Mass of interval j is F(x_j) - F(x_{j-1}) with F affine on
                // the cell of each cut; the boundary cuts are the constants
                // 0 and 1.
                if j < n_cuts {
                    let c = cell[j];
                    constant += &grid_cdf[i][c] - &dens[i][c] * &grid[c];
                    coeffs[j] += &dens[i][c];
                } else {
                    constant += rat_int(1);
                }
                if j > 0 {
                    let c = cell[j - 1];
                    constant -= &grid_cdf[i][c] - &dens[i][c] * &grid[c];
                    coeffs[j - 1] -= &dens[i][c];
                }
            }
            a.push(coeffs);
            b.push(&share - constant);
        }
    }
    (a, b)
}

/// A necklace split: cuts on bead boundaries plus the per-part color counts
/// that were verified fair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedSplit {
    pub cuts: Vec<Rational>,
    pub assignment: Vec<usize>,
    pub counts: Vec<Vec<usize>>,
}

/// Moves each cut of a measure-space division to a bead boundary and checks
/// that every part ends up with exactly `count(c)/k` beads of each color.
///
/// Nearest boundary first (ties toward 0); if that rounding is not fair,
/// every floor/ceil combination is tried in lexicographic order before
/// giving up.
pub fn round_to_beads(scheme: &PartitionScheme, beads: &BeadString, k: usize) -> Result<RoundedSplit> {
    let l = beads.len();
    for color in 0..beads.n_colors() {
        if beads.color_count(color) % k != 0 {
            return Err(Error::InvalidInput(format!(
                "color '{}' has {} beads, not divisible by k = {k}",
                beads.palette()[color],
                beads.color_count(color)
            )));
        }
    }
    if scheme.k != k {
        return Err(Error::InvalidInput(format!("scheme has k = {}, expected {k}", scheme.k)));
    }

    let scaled: Vec<Rational> = scheme.cuts.iter().map(|c| c * rat_int(l as i64)).collect();
    let nearest: Vec<u64> = scaled
        .iter()
        .map(|v| {
            let f = v.floor().to_integer();
            let frac = v - Rational::from_integer(f.clone());
            let f: u64 = u64::try_from(&f).unwrap_or(0);
            if frac > rat(1, 2) {
                f + 1
            } else {
                f
            }
        })
        .collect();
    if let Some(split) = check_bead_cuts(&nearest, &scheme.assignment, beads, k) {
        return Ok(split);
    }

    // Fallback: all floor/ceil combinations, nondecreasing ones only.
    let n_cuts = scaled.len();
    if n_cuts <= 20 {
        let floors: Vec<u64> = scaled
            .iter()
            .map(|v| u64::try_from(&v.floor().to_integer()).unwrap_or(0))
            .collect();
        let ceils: Vec<u64> = scaled
            .iter()
            .map(|v| u64::try_from(&v.ceil().to_integer()).unwrap_or(0).min(l as u64))
            .collect();
        for mask in 0u32..(1 << n_cuts) {
            let candidate: Vec<u64> = (0..n_cuts)
                .map(|j| if mask & (1 << j) != 0 { ceils[j] } else { floors[j] })
                .collect();
            if candidate.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            if let Some(split) = check_bead_cuts(&candidate, &scheme.assignment, beads, k) {
                return Ok(split);
            }
        }
    }
    Err(Error::VerificationFailed(
        "no bead-boundary rounding of the division splits every color fairly".into(),
    ))
}

fn check_bead_cuts(
    cut_beads: &[u64],
    assignment: &[usize],
    beads: &BeadString,
    k: usize,
) -> Option<RoundedSplit> {
    let l = beads.len() as u64;
    if cut_beads.windows(2).any(|w| w[0] > w[1]) || cut_beads.iter().any(|&c| c > l) {
        return None;
    }
    let mut counts = vec![vec![0usize; beads.n_colors()]; k];
    for (t, &color) in beads.beads().iter().enumerate() {
        let t = t as u64;
        // Piece j covers bead t when cut_{j-1} <= t < cut_j, with the
        // implicit outer cuts 0 and l.
        let j = cut_beads.partition_point(|&c| c <= t);
        counts[assignment[j]][color] += 1;
    }
    for color in 0..beads.n_colors() {
        let fair = beads.color_count(color) / k;
        if counts.iter().any(|row| row[color] != fair) {
            return None;
        }
    }
    Some(RoundedSplit {
        cuts: cut_beads.iter().map(|&c| rat(c as i64, beads.len() as i64)).collect(),
        assignment: assignment.to_vec(),
        counts,
    })
}

/// How a collapsed coordinate maps back to the original interval.
#[derive(Debug, Clone)]
pub(crate) struct PartTransport {
    pieces: Vec<(Rational, Rational)>,
    total: Rational,
}

impl PartTransport {
    /// Original position of collapsed coordinate `y` in `[0,1]`.
    pub(crate) fn lift(&self, y: &Rational) -> Rational {
        let mut offset = y * &self.total;
        for (s, e) in &self.pieces {
            let len = e - s;
            if offset <= len {
                return s + offset;
            }
            offset -= len;
        }
        self.pieces.last().map(|(_, e)| e.clone()).unwrap_or_else(Rational::zero)
    }

    /// Collapsed coordinate of original position `x`, inverse to `lift` on
    /// the interiors of the part's pieces. Positions in the gaps between
    /// pieces land on the shared boundary coordinate.
    pub(crate) fn project(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (s, e) in &self.pieces {
            if x >= e {
                acc += e - s;
            } else {
                if x > s {
                    acc += x - s;
                }
                break;
            }
        }
        acc / &self.total
    }
}

/// Restricts every measure to one part of a scheme and renormalizes it onto
/// `[0,1]`, so a division of the part can be computed recursively. Also
/// returns the transport that lifts collapsed cuts back.
pub(crate) fn collapse_to_part(
    measures: &[Measure],
    scheme: &PartitionScheme,
    part: usize,
) -> Result<(Vec<Measure>, PartTransport)> {
    let pieces = scheme.intervals_of_part(part);
    let total: Rational = pieces.iter().map(|(s, e)| e - s).sum();
    if total.is_zero() {
        return Err(Error::InvalidInput(format!("part {part} has an empty interval set")));
    }

    let mut collapsed = Vec::with_capacity(measures.len());
    for (i, m) in measures.iter().enumerate() {
        let mass = m.mass_of_union(&pieces)?;
        if mass.is_zero() {
            return Err(Error::InvalidMeasure {
                index: i,
                reason: format!("zero mass on part {part}, cannot renormalize"),
            });
        }
        let mut breakpoints = vec![Rational::zero()];
        let mut densities = Vec::new();
        let mut acc = Rational::zero();
        for (s, e) in &pieces {
            let mut local: Vec<Rational> = vec![s.clone()];
            for b in m.breakpoints() {
                if b > s && b < e {
                    local.push(b.clone());
                }
            }
            local.push(e.clone());
            for w in local.windows(2) {
                let piece_idx = m.breakpoints().partition_point(|b| b <= &w[0]) - 1;
                acc += (&w[1] - &w[0]) / &total;
                breakpoints.push(acc.clone());
                densities.push(&m.densities()[piece_idx] * &total / &mass);
            }
        }
        // Exactness of the accumulated sums puts the last breakpoint at 1.
        collapsed.push(Measure::new(breakpoints, densities)?);
    }
    Ok((collapsed, PartTransport { pieces, total }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(slots: &[(Rational, usize)], k: usize) -> JoinPoint {
        let group = Group::cyclic(k).unwrap();
        JoinPoint::new(slots.to_vec(), &group).unwrap()
    }

    #[test]
    fn decode_reads_prefix_sums() {
        let p = point(&[(rat(1, 5), 1), (rat(3, 10), 2), (rat(1, 2), 0)], 3);
        let scheme = decode(&p, 3).unwrap();
        assert_eq!(scheme.cuts(), &[rat(1, 5), rat(1, 2)]);
        assert_eq!(scheme.assignment(), &[1, 2, 0]);
        assert_eq!(scheme.intervals_of_part(2), vec![(rat(1, 5), rat(1, 2))]);
    }

    #[test]
    fn scheme_validation() {
        assert!(PartitionScheme::new(2, vec![rat(1, 2)], vec![0, 1]).is_ok());
        assert!(PartitionScheme::new(2, vec![rat(1, 2)], vec![0, 2]).is_err());
        assert!(PartitionScheme::new(2, vec![rat(3, 4), rat(1, 4)], vec![0, 1, 0]).is_err());
        assert!(PartitionScheme::new(2, vec![rat(1, 2)], vec![0]).is_err());
    }

    #[test]
    fn values_table_on_the_worked_example() {
        // One uniform measure, cuts 1/5 and 1/2, parts 1, 2, 0: the table
        // row indexed by element is (1/2, 1/5, 3/10).
        let p = point(&[(rat(1, 5), 1), (rat(3, 10), 2), (rat(1, 2), 0)], 3);
        let scheme = decode(&p, 3).unwrap();
        let values = values_table(&scheme, &[Measure::uniform()]).unwrap();
        assert_eq!(values, vec![vec![rat(1, 2), rat(1, 5), rat(3, 10)]]);
    }

    #[test]
    fn defect_matrix_of_the_worked_example() {
        let p = point(&[(rat(1, 5), 1), (rat(3, 10), 2), (rat(1, 2), 0)], 3);
        let scheme = decode(&p, 3).unwrap();
        let defect = defect_matrix(&scheme, &[Measure::uniform()]).unwrap();
        assert_eq!(defect.get(0, 0), &rat(1, 5));
        assert_eq!(defect.get(0, 1), &rat(-3, 10));
        assert_eq!(defect.get(0, 2), &rat(1, 10));
    }

    #[test]
    fn label_of_the_three_part_example() {
        // Signs around the cycle are (-, +, +) starting at the identity, so
        // the lex-least rotation starts there and the min value sits in
        // measure 0.
        let group = Group::cyclic(3).unwrap();
        let p = point(&[(rat(1, 5), 1), (rat(3, 10), 2), (rat(1, 2), 0)], 3);
        let out = label_vertex(&p, &[Measure::uniform()], &group).unwrap();
        assert_eq!(out, LabelOutcome::Label(CrossLabel { g: 0, i: 0 }));
    }

    #[test]
    fn label_of_the_two_part_example() {
        let group = Group::cyclic(2).unwrap();
        let p = point(&[(rat(2, 5), 1), (rat(3, 5), 0)], 2);
        let out = label_vertex(&p, &[Measure::uniform()], &group).unwrap();
        assert_eq!(out, LabelOutcome::Label(CrossLabel { g: 0, i: 0 }));
    }

    #[test]
    fn exact_point_is_reported_exact() {
        let group = Group::cyclic(3).unwrap();
        let p = point(&[(rat(1, 3), 1), (rat(1, 3), 2), (rat(1, 3), 0)], 3);
        assert_eq!(label_vertex(&p, &[Measure::uniform()], &group).unwrap(), LabelOutcome::Exact);
    }

    #[test]
    fn label_requires_prime_order() {
        let group = Group::cyclic(4).unwrap();
        let p = point(&[(rat(1, 4), 1), (rat(1, 4), 2), (rat(1, 4), 3), (rat(1, 4), 0)], 4);
        assert!(matches!(label_vertex(&p, &[Measure::uniform()], &group), Err(Error::NotPrime(4))));
    }

    #[test]
    fn label_is_equivariant_on_scattered_points() {
        let group = Group::cyclic(5).unwrap();
        let measures =
            vec![Measure::uniform(), Measure::new(vec![rat(0, 1), rat(1, 4), rat(1, 1)], vec![rat(2, 1), rat(2, 3)]).unwrap()];
        let base = point(
            &[(rat(1, 7), 2), (rat(2, 7), 0), (rat(1, 7), 4), (rat(2, 7), 1), (rat(1, 7), 3)],
            5,
        );
        let LabelOutcome::Label(l) = label_vertex(&base, &measures, &group).unwrap() else {
            panic!("scattered point should not be exact");
        };
        for g in 0..5 {
            let moved = crate::complex::act_point(&group, g, &base).unwrap();
            let LabelOutcome::Label(lg) = label_vertex(&moved, &measures, &group).unwrap() else {
                panic!("translate should not be exact");
            };
            assert_eq!(lg.g, group.mul(g, l.g));
            assert_eq!(lg.i, l.i);
        }
    }

    #[test]
    fn ties_pick_the_smallest_measure() {
        // Both measures have the same table; the label row must be 0.
        let group = Group::cyclic(2).unwrap();
        let p = point(&[(rat(2, 5), 1), (rat(3, 5), 0)], 2);
        let out = label_vertex(&p, &[Measure::uniform(), Measure::uniform()], &group).unwrap();
        assert_eq!(out, LabelOutcome::Label(CrossLabel { g: 0, i: 0 }));
    }

    #[test]
    fn solver_halves_the_uniform_measure() {
        let scheme = solve_in_assignment(&[1, 0], &[Measure::uniform()], 2).unwrap();
        assert_eq!(scheme.cuts(), &[rat(1, 2)]);
    }

    #[test]
    fn solver_thirds_the_uniform_measure() {
        let scheme = solve_in_assignment(&[1, 2, 0], &[Measure::uniform()], 3).unwrap();
        assert_eq!(scheme.cuts(), &[rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn solver_crosses_density_cells() {
        // Density 3/2 then 1/2 with the jump at 1/2: the median 1/3 lives in
        // the first cell, and the second cell's solve lands outside it.
        let m = Measure::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![rat(3, 2), rat(1, 2)]).unwrap();
        let scheme = solve_in_assignment(&[1, 0], &[m], 2).unwrap();
        assert_eq!(scheme.cuts(), &[rat(1, 3)]);
    }

    #[test]
    fn solver_handles_two_measures() {
        let m2 = Measure::new(vec![rat(0, 1), rat(1, 4), rat(1, 1)], vec![rat(2, 1), rat(2, 3)]).unwrap();
        let scheme = solve_in_assignment(&[1, 0, 1], &[Measure::uniform(), m2], 2).unwrap();
        assert_eq!(scheme.cuts(), &[rat(1, 8), rat(5, 8)]);
        let values = values_table(&scheme, &[Measure::uniform()]).unwrap();
        assert_eq!(values[0][0], rat(1, 2));
    }

    #[test]
    fn solver_rejects_assignments_missing_a_part() {
        assert!(solve_in_assignment(&[0, 0], &[Measure::uniform()], 2).is_none());
    }

    #[test]
    fn solver_handles_plateau_families() {
        // Two copies of the uniform measure make the cell system singular:
        // any pair of cuts at distance 1/2 splits assignment [0, 1, 0]
        // fairly, and the solver must pick one rather than give up.
        let measures = vec![Measure::uniform(), Measure::uniform()];
        let scheme = solve_in_assignment(&[0, 1, 0], &measures, 2).unwrap();
        let values = values_table(&scheme, &measures).unwrap();
        assert!(max_deviation(&values, 2).is_zero());
    }

    #[test]
    fn solver_places_phantom_cuts() {
        // The second cut separates two intervals of the same part, so its
        // column is zero; the fallback places it anywhere legal.
        let measures = vec![Measure::uniform(), Measure::uniform()];
        let scheme = solve_in_assignment(&[0, 1, 1], &measures, 2).unwrap();
        assert_eq!(scheme.cuts()[0], rat(1, 2));
        let values = values_table(&scheme, &measures).unwrap();
        assert!(max_deviation(&values, 2).is_zero());
    }

    #[test]
    fn rounding_moves_cuts_to_bead_boundaries() {
        let beads = BeadString::parse("aa").unwrap();
        let scheme = PartitionScheme::new(2, vec![rat(2, 5)], vec![1, 0]).unwrap();
        let split = round_to_beads(&scheme, &beads, 2).unwrap();
        assert_eq!(split.cuts, vec![rat(1, 2)]);
        assert_eq!(split.counts, vec![vec![1], vec![1]]);
    }

    #[test]
    fn rounding_tie_falls_back_to_ceiling() {
        // 1/4 of two beads scales to 1/2, the tie rounds down to an unfair
        // empty part, and the fallback must push the cut up instead.
        let beads = BeadString::parse("aa").unwrap();
        let scheme = PartitionScheme::new(2, vec![rat(1, 4)], vec![1, 0]).unwrap();
        let split = round_to_beads(&scheme, &beads, 2).unwrap();
        assert_eq!(split.cuts, vec![rat(1, 2)]);
    }

    #[test]
    fn rounding_checks_divisibility() {
        let beads = BeadString::parse("aab").unwrap();
        let scheme = PartitionScheme::new(2, vec![rat(1, 2)], vec![1, 0]).unwrap();
        assert!(round_to_beads(&scheme, &beads, 2).is_err());
    }

    #[test]
    fn rounding_keeps_fair_boundary_cuts() {
        let beads = BeadString::parse("abab").unwrap();
        let scheme = PartitionScheme::new(2, vec![rat(1, 4), rat(3, 4)], vec![0, 1, 0]).unwrap();
        let split = round_to_beads(&scheme, &beads, 2).unwrap();
        assert_eq!(split.cuts, vec![rat(1, 4), rat(3, 4)]);
        assert_eq!(split.counts, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn collapse_renormalizes_parts() {
        // Part 0 of a thirds division under the uniform measure collapses
        // back to the uniform measure on [0,1].
        let scheme =
            PartitionScheme::new(3, vec![rat(1, 3), rat(2, 3)], vec![0, 1, 2]).unwrap();
        let (collapsed, transport) = collapse_to_part(&[Measure::uniform()], &scheme, 0).unwrap();
        assert_eq!(collapsed[0].cdf(&rat(1, 2)), rat(1, 2));
        assert_eq!(transport.lift(&rat(1, 2)), rat(1, 6));
    }

    #[test]
    fn collapse_joins_split_parts() {
        // Part 0 = [0, 1/4] + [3/4, 1]: collapsed coordinate 1/2 is the seam.
        let scheme =
            PartitionScheme::new(2, vec![rat(1, 4), rat(3, 4)], vec![0, 1, 0]).unwrap();
        let (collapsed, transport) = collapse_to_part(&[Measure::uniform()], &scheme, 0).unwrap();
        assert_eq!(collapsed[0].cdf(&rat(1, 2)), rat(1, 2));
        assert_eq!(transport.lift(&rat(1, 4)), rat(1, 8));
        assert_eq!(transport.lift(&rat(3, 4)), rat(7, 8));
        assert_eq!(transport.lift(&rat(1, 1)), rat(1, 1));
    }

    #[test]
    fn collapse_rejects_zero_mass_parts() {
        let m = Measure::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![rat(2, 1), rat(0, 1)]).unwrap();
        let scheme = PartitionScheme::new(2, vec![rat(1, 2)], vec![1, 0]).unwrap();
        assert!(collapse_to_part(&[m], &scheme, 0).is_err());
    }
}
