//! Probability measures on `[0,1]` with piecewise-constant rational density,
//! and the bead-string encoding of necklace instances.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

/// A probability measure on `[0,1]` given by a piecewise-constant density.
///
/// `breakpoints` is strictly increasing from 0 to 1; `densities[t]` is the
/// (nonnegative) density on `[breakpoints[t], breakpoints[t+1]]`. The total
/// mass must be exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    breakpoints: Vec<Rational>,
    densities: Vec<Rational>,
    // Cumulative mass at each breakpoint; cached for cdf queries.
    cumulative: Vec<Rational>,
}

impl Measure {
    pub fn new(breakpoints: Vec<Rational>, densities: Vec<Rational>) -> Result<Measure> {
        let invalid = |reason: String| Error::InvalidMeasure { index: 0, reason };
        if breakpoints.len() < 2 {
            return Err(invalid("needs at least two breakpoints".into()));
        }
        if densities.len() + 1 != breakpoints.len() {
            return Err(invalid(format!(
                "{} breakpoints require {} densities, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                densities.len()
            )));
        }
        if !breakpoints[0].is_zero() {
            return Err(invalid("first breakpoint must be 0".into()));
        }
        if !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(invalid("last breakpoint must be 1".into()));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(invalid("breakpoints must be strictly increasing".into()));
            }
        }
        if densities.iter().any(|d| d < &Rational::zero()) {
            return Err(invalid("densities must be nonnegative".into()));
        }
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        let mut acc = Rational::zero();
        cumulative.push(acc.clone());
        for (t, d) in densities.iter().enumerate() {
            acc += d * (&breakpoints[t + 1] - &breakpoints[t]);
            cumulative.push(acc.clone());
        }
        if !cumulative[cumulative.len() - 1].is_one() {
            return Err(invalid(format!(
                "total mass must be exactly 1, got {}",
                cumulative[cumulative.len() - 1]
            )));
        }
        Ok(Measure { breakpoints, densities, cumulative })
    }

    pub fn uniform() -> Measure {
        Measure::new(vec![Rational::zero(), Rational::one()], vec![Rational::one()]).unwrap()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    /// Exact cumulative distribution; extended by 0 left of the support and
    /// 1 right of it so that cut arithmetic never needs range checks.
    pub fn cdf(&self, x: &Rational) -> Rational {
        if x <= &self.breakpoints[0] {
            return Rational::zero();
        }
        let last = self.breakpoints.len() - 1;
        if x >= &self.breakpoints[last] {
            return Rational::one();
        }
        // Largest t with breakpoints[t] <= x; the scan is over a handful of
        // pieces, and partition_point keeps it logarithmic anyway.
        let t = self.breakpoints.partition_point(|b| b <= x) - 1;
        &self.cumulative[t] + &self.densities[t] * (x - &self.breakpoints[t])
    }

    /// Mass of `[a, b]`; `a <= b` required.
    pub fn mass_of_interval(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a > b {
            return Err(Error::InvalidInterval(format!("interval [{a}, {b}] is reversed")));
        }
        Ok(self.cdf(b) - self.cdf(a))
    }

    /// Mass of a union of intervals with pairwise disjoint interiors.
    pub fn mass_of_union(&self, intervals: &[(Rational, Rational)]) -> Result<Rational> {
        let mut sorted: Vec<&(Rational, Rational)> = intervals.iter().collect();
        sorted.sort_by(|x, y| x.0.cmp(&y.0));
        let mut total = Rational::zero();
        let mut prev_end: Option<&Rational> = None;
        for (a, b) in sorted {
            if a > b {
                return Err(Error::InvalidInterval(format!("interval [{a}, {b}] is reversed")));
            }
            if let Some(end) = prev_end {
                if a < end {
                    return Err(Error::InvalidInterval(format!(
                        "intervals overlap at [{a}, {b}] (previous end {end})"
                    )));
                }
            }
            total += self.cdf(b) - self.cdf(a);
            prev_end = Some(b);
        }
        Ok(total)
    }

    /// Largest density value; bounds how fast masses can change under cut
    /// movement.
    pub fn max_density(&self) -> Rational {
        self.densities.iter().cloned().max().unwrap()
    }
}

/// A necklace of beads, one lowercase letter per bead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeadString {
    /// Bead colors as indices into `palette`, in necklace order.
    beads: Vec<usize>,
    /// Distinct colors in alphabetical order.
    palette: Vec<char>,
}

impl BeadString {
    pub fn parse(s: &str) -> Result<BeadString> {
        if s.is_empty() {
            return Err(Error::InvalidInput("bead string is empty".into()));
        }
        if let Some(c) = s.chars().find(|c| !c.is_ascii_lowercase()) {
            return Err(Error::InvalidInput(format!("bead {c:?} is not a lowercase letter")));
        }
        let mut palette: Vec<char> = s.chars().collect();
        palette.sort_unstable();
        palette.dedup();
        let beads = s
            .chars()
            .map(|c| palette.iter().position(|&p| p == c).unwrap())
            .collect();
        Ok(BeadString { beads, palette })
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn n_colors(&self) -> usize {
        self.palette.len()
    }

    pub fn palette(&self) -> &[char] {
        &self.palette
    }

    pub fn beads(&self) -> &[usize] {
        &self.beads
    }

    pub fn color_count(&self, color: usize) -> usize {
        self.beads.iter().filter(|&&b| b == color).count()
    }

    /// The necklace as a string, colors mapped back through the palette.
    pub fn text(&self) -> String {
        self.beads.iter().map(|&b| self.palette[b]).collect()
    }
}

/// Encodes a necklace as one measure per color: bead `t` occupies
/// `[t/L, (t+1)/L]`, and color `c` has density `L / count(c)` on its own
/// beads, so each color's measure is a probability measure.
pub fn beads_to_measures(beads: &BeadString) -> Result<Vec<Measure>> {
    let l = beads.len();
    let l_rat = rat_int(l as i64);
    let mut measures = Vec::with_capacity(beads.n_colors());
    for color in 0..beads.n_colors() {
        let count = beads.color_count(color);
        let density = &l_rat / rat_int(count as i64);
        let mut breakpoints = vec![Rational::zero()];
        let mut densities = Vec::new();
        for (t, &b) in beads.beads().iter().enumerate() {
            let end = rat_int(t as i64 + 1) / &l_rat;
            let d = if b == color { density.clone() } else { Rational::zero() };
            // Merge with the previous piece when the density repeats.
            if densities.last() == Some(&d) {
                *breakpoints.last_mut().unwrap() = end;
            } else {
                densities.push(d);
                breakpoints.push(end);
            }
        }
        measures.push(Measure::new(breakpoints, densities)?);
    }
    Ok(measures)
}
