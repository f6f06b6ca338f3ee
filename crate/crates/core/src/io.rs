//! File formats crossing the tool boundary.
//!
//! Everything is UTF-8 JSON with rationals as `"p/q"` strings, never
//! floats. Encoding is deterministic: serde writes struct fields in
//! declaration order and the pretty printer is stable, so equal data means
//! byte-identical files. Decoders reject unknown fields and re-validate
//! domain invariants, so a hand-edited file fails loudly instead of
//! drifting through the pipeline.

use serde::{Deserialize, Serialize};

use crate::complex::{GComplex, LazyComplex};
use crate::crosspolytope::GPolytope;
use crate::division::PartitionScheme;
use crate::error::{Error, Result};
use crate::group::{Group, GroupKind};
use crate::measure::{BeadString, Measure};
use crate::pipeline::{DivisionOutcome, NecklaceOutcome};
use crate::rational::{format_rational, parse_rational, rat_int, Rational};
use crate::search::CaraInstance;
use crate::simmons_su::ConjectureVerdict;
use num_traits::ToPrimitive;

/// Serializes with a stable layout and a trailing newline.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("file types serialize");
    text.push('\n');
    text
}

fn parse_all(strings: &[String]) -> Result<Vec<Rational>> {
    strings.iter().map(|s| parse_rational(s)).collect()
}

fn format_all(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    breakpoints: Vec<String>,
    densities: Vec<String>,
}

/// Parses a measure file: a top-level list of piecewise-constant densities.
/// Diagnostics name the offending measure by its position in the list.
pub fn measures_from_json(text: &str) -> Result<Vec<Measure>> {
    let files: Vec<MeasureFile> = serde_json::from_str(text)?;
    files
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let tag = |e: Error| match e {
                Error::InvalidMeasure { reason, .. } => Error::InvalidMeasure { index, reason },
                other => Error::InvalidMeasure { index, reason: other.to_string() },
            };
            let breakpoints = parse_all(&f.breakpoints).map_err(tag)?;
            let densities = parse_all(&f.densities).map_err(tag)?;
            Measure::new(breakpoints, densities).map_err(tag)
        })
        .collect()
}

pub fn measures_to_json(measures: &[Measure]) -> String {
    let files: Vec<MeasureFile> = measures
        .iter()
        .map(|m| MeasureFile {
            breakpoints: format_all(m.breakpoints()),
            densities: format_all(m.densities()),
        })
        .collect();
    render_json(&files)
}

/// The division result file. `beads` appears only on necklace results.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub k: usize,
    pub cuts: Vec<String>,
    pub assignment: Vec<usize>,
    pub values: Vec<Vec<String>>,
    pub epsilon: String,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beads: Option<BeadsSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub max_deviation: String,
    pub exact: bool,
}

/// Discrete split attached to a necklace result: cut positions both as
/// points of [0,1] and as bead indices, plus the per-thief color counts the
/// split was verified against.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeadsSection {
    pub string: String,
    pub cuts: Vec<String>,
    pub bead_cuts: Vec<usize>,
    pub assignment: Vec<usize>,
    pub counts: Vec<Vec<usize>>,
}

impl ResultFile {
    pub fn from_json(text: &str) -> Result<ResultFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        render_json(self)
    }

    /// Rebuilds the partition scheme, re-running its validation.
    pub fn scheme(&self) -> Result<PartitionScheme> {
        PartitionScheme::new(self.k, parse_all(&self.cuts)?, self.assignment.clone())
    }

    pub fn epsilon(&self) -> Result<Rational> {
        parse_rational(&self.epsilon)
    }

    /// The value table as written, which a verifier must not trust.
    pub fn claimed_values(&self) -> Result<Vec<Vec<Rational>>> {
        self.values.iter().map(|row| parse_all(row)).collect()
    }

    pub fn claimed_deviation(&self) -> Result<Rational> {
        parse_rational(&self.certificate.max_deviation)
    }
}

/// Encodes a division outcome.
pub fn division_result(outcome: &DivisionOutcome) -> ResultFile {
    ResultFile {
        k: outcome.scheme.k(),
        cuts: format_all(outcome.scheme.cuts()),
        assignment: outcome.scheme.assignment().to_vec(),
        values: outcome.values.iter().map(|row| format_all(row)).collect(),
        epsilon: format_rational(&outcome.epsilon),
        certificate: Certificate {
            max_deviation: format_rational(&outcome.max_deviation),
            exact: outcome.exact,
        },
        beads: None,
    }
}

/// Encodes a necklace outcome: the underlying measure-space division plus
/// the rounded discrete split.
pub fn necklace_result(outcome: &NecklaceOutcome, beads: &BeadString) -> ResultFile {
    let length = rat_int(beads.len() as i64);
    let bead_cuts = outcome
        .split
        .cuts
        .iter()
        .map(|c| {
            let scaled = c * &length;
            debug_assert!(scaled.is_integer(), "split cuts sit on bead boundaries");
            scaled.to_integer().to_usize().expect("bead index fits")
        })
        .collect();
    let mut file = division_result(&outcome.division);
    file.beads = Some(BeadsSection {
        string: beads.text(),
        cuts: format_all(&outcome.split.cuts),
        bead_cuts,
        assignment: outcome.split.assignment.clone(),
        counts: outcome.split.counts.clone(),
    });
    file
}

/// A colorful Caratheodory instance file: `d + 1` columns of `m` points
/// in dimension `d`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaraFile {
    pub d: usize,
    pub m: usize,
    pub columns: Vec<Vec<Vec<String>>>,
}

pub fn cara_from_json(text: &str) -> Result<CaraInstance> {
    let file: CaraFile = serde_json::from_str(text)?;
    let columns = file
        .columns
        .iter()
        .map(|col| col.iter().map(|point| parse_all(point)).collect())
        .collect::<Result<_>>()?;
    let instance = CaraInstance { d: file.d, columns };
    instance.validate()?;
    if instance.m() != file.m {
        return Err(Error::InvalidInput(format!(
            "file claims m = {}, columns hold {} points each",
            file.m,
            instance.m()
        )));
    }
    Ok(instance)
}

pub fn cara_to_json(instance: &CaraInstance) -> String {
    let file = CaraFile {
        d: instance.d,
        m: instance.m(),
        columns: instance
            .columns
            .iter()
            .map(|col| col.iter().map(|point| format_all(point)).collect())
            .collect(),
    };
    render_json(&file)
}

/// A labeled-complex file for the Tucker-triple check: the join complex of
/// `group` with `N + 1` slots at the given refinement depth, every vertex
/// labeled by a pair `[g, i]`. The target polytope is the generalized
/// crosspolytope on those labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuckerFile {
    pub group: GroupKind,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub depth: u32,
    pub labels: Vec<[usize; 2]>,
}

impl TuckerFile {
    pub fn from_json(text: &str) -> Result<TuckerFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        render_json(self)
    }

    /// Materializes the complex and translates the labels into a vertex map
    /// into the crosspolytope, ready for the triple check.
    pub fn instantiate(&self) -> Result<(GComplex, Vec<usize>, GPolytope)> {
        let group = Group::from_kind(self.group)?;
        let k = group.order();
        let complex = LazyComplex::new(&group, self.big_n, self.depth).materialize()?;
        if self.labels.len() != complex.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "file labels {} vertices, the complex has {}",
                self.labels.len(),
                complex.vertex_count()
            )));
        }
        let mut rows = 0usize;
        for &[g, i] in &self.labels {
            if g >= k {
                return Err(Error::ElementOutOfRange { id: g, order: k });
            }
            rows = rows.max(i + 1);
        }
        let phi = self.labels.iter().map(|&[g, i]| i * k + g).collect();
        let polytope = GPolytope::crosspolytope(&group, rows)?;
        Ok((complex, phi, polytope))
    }
}

/// Report written by the conjecture checker.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureFile {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex: Option<Vec<Vec<Coordinate>>>,
}

/// One sphere coordinate `t * w^j` as `(weight, power)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coordinate {
    pub weight: String,
    pub power: usize,
}

pub fn conjecture_result(verdict: &ConjectureVerdict) -> ConjectureFile {
    match verdict {
        ConjectureVerdict::NotFound => {
            ConjectureFile { verdict: "not-found".into(), row: None, simplex: None }
        }
        ConjectureVerdict::Found { row, simplex } => ConjectureFile {
            verdict: "found".into(),
            row: Some(*row),
            simplex: Some(
                simplex
                    .iter()
                    .map(|s| {
                        s.coords()
                            .iter()
                            .map(|(t, j)| Coordinate { weight: format_rational(t), power: *j })
                            .collect()
                    })
                    .collect(),
            ),
        },
    }
}
