//! Exact linear solving over the rationals.

use num_traits::Zero;

use crate::rational::{rat_int, Rational};

/// Solves `A x = b` by Gauss-Jordan elimination over the rationals.
///
/// Returns `Some(x)` exactly when the system has a unique solution, i.e. `A`
/// has full column rank and the system is consistent. Underdetermined and
/// inconsistent systems both return `None`; callers that enumerate supports
/// rely on minimal supports being affinely independent, so skipping
/// rank-deficient systems is sound.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "matrix/rhs row mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_rows: Vec<usize> = Vec::with_capacity(cols);
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for x in m[row][col..].iter_mut() {
            *x /= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_rows.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }

    if pivot_rows.len() < cols {
        return None;
    }
    // Any remaining row must have reduced to 0 = 0.
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    Some((0..cols).map(|c| m[c][cols].clone()).collect())
}

/// Finds any rational point satisfying `eq_a x = eq_b` and `le_a x <= le_b`,
/// with all variables free.
///
/// Phase one of the simplex method on a dense exact tableau: free variables
/// split into positive and negative parts, inequality rows get slacks, every
/// row gets an artificial variable, and the artificial sum is minimized
/// under Bland's rule, which cannot cycle. The system is feasible exactly
/// when that minimum is zero, in which case the basic point found is
/// returned; the choice among feasible points is deterministic for fixed
/// input. Intended for the small facet-local systems of the division
/// solver, where exactness matters and performance does not.
pub fn feasible_point(
    eq_a: &[Vec<Rational>],
    eq_b: &[Rational],
    le_a: &[Vec<Rational>],
    le_b: &[Rational],
) -> Option<Vec<Rational>> {
    assert_eq!(eq_a.len(), eq_b.len(), "equality matrix/rhs mismatch");
    assert_eq!(le_a.len(), le_b.len(), "inequality matrix/rhs mismatch");
    let nvars = eq_a.iter().chain(le_a).map(Vec::len).next().unwrap_or(0);
    let n_le = le_a.len();
    let rows = eq_a.len() + n_le;
    if rows == 0 {
        return Some(vec![Rational::zero(); nvars]);
    }
    // Columns: positive parts, negative parts, slacks, artificials, rhs.
    let cols = 2 * nvars + n_le + rows;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut basis: Vec<usize> = Vec::with_capacity(rows);
    for r in 0..rows {
        let (coeffs, rhs, slack) = if r < eq_a.len() {
            (&eq_a[r], &eq_b[r], None)
        } else {
            (&le_a[r - eq_a.len()], &le_b[r - eq_a.len()], Some(2 * nvars + r - eq_a.len()))
        };
        assert_eq!(coeffs.len(), nvars, "ragged system");
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, v) in coeffs.iter().enumerate() {
            row[j] = v.clone();
            row[nvars + j] = -v;
        }
        if let Some(s) = slack {
            row[s] = rat_int(1);
        }
        row[cols] = rhs.clone();
        if row[cols] < Rational::zero() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        let art = 2 * nvars + n_le + r;
        row[art] = rat_int(1);
        basis.push(art);
        t.push(row);
    }

    // Reduced-cost row for minimizing the artificial sum. With the
    // artificials basic, every other column prices to its negated column
    // sum; the rhs entry holds the negated objective value.
    let mut obj = vec![Rational::zero(); cols + 1];
    for j in (0..2 * nvars + n_le).chain([cols]) {
        let mut sum = Rational::zero();
        for row in &t {
            sum += &row[j];
        }
        obj[j] = -sum;
    }

    loop {
        // Bland: enter the smallest column with negative reduced cost. The
        // artificial columns stay eligible, which keeps the optimality
        // certificate unconditional.
        let Some(pc) = (0..cols).find(|&j| obj[j] < Rational::zero()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if t[r][pc] > Rational::zero() {
                let ratio = &t[r][cols] / &t[r][pc];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // The artificial sum is bounded below by zero, so an unbounded
            // improving direction is impossible.
            debug_assert!(false, "phase-one objective cannot be unbounded");
            return None;
        };

        let inv = t[pr][pc].clone();
        for v in t[pr].iter_mut() {
            *v /= &inv;
        }
        let prow = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[pc].is_zero() {
                let f = row[pc].clone();
                for (c, v) in row.iter_mut().enumerate() {
                    let delta = &f * &prow[c];
                    *v -= delta;
                }
            }
        }
        if !obj[pc].is_zero() {
            let f = obj[pc].clone();
            for (c, v) in obj.iter_mut().enumerate() {
                let delta = &f * &prow[c];
                *v -= delta;
            }
        }
        basis[pr] = pc;
    }

    if !obj[cols].is_zero() {
        return None;
    }
    let mut parts = vec![Rational::zero(); 2 * nvars];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < 2 * nvars {
            parts[bv] = t[r][cols].clone();
        }
    }
    Some((0..nvars).map(|j| &parts[j] - &parts[nvars + j]).collect())
}

/// Rank of a rational matrix, by row elimination.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &pivot;
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
