//! Exact-arithmetic consensus division of measures on `[0,1]`.
//!
//! Given `n` probability measures with piecewise-constant rational densities,
//! this crate computes a division of `[0,1]` into intervals assigned to `k`
//! parts so that every measure gives every part mass within a requested
//! `epsilon` of `1/k`, and often exactly `1/k`. All arithmetic is exact: cut
//! positions, masses, and certificates are arbitrary-precision rationals, and
//! every returned division is re-verified by direct integration before it is
//! reported.
//!
//! The machinery is an equivariant simplicial search. For a finite group `G`
//! of order `k`, the join complex `E_N G` (the `(N+1)`-fold join of `G` with
//! itself, `N = n(k-1)`) triangulates the space of candidate divisions: a
//! point of `E_N G` decodes to interval lengths plus a part assignment per
//! interval. Vertices are labeled by a measure-driven rule into the vertex
//! set of a generalized crosspolytope, and a fully labeled simplex of the
//! labeled complex pins down a region where an equipartition point lives.
//! Iterated barycentric subdivision drives accuracy; an exact facet-local
//! solve recovers rational equipartition points once the search has located
//! the right facet.
//!
//! Beyond the division pipeline, the crate exposes the supporting pieces as
//! a toolbox: the join complex with its free `G`-action, crosspolytope
//! labels and the zero-in-convex-hull decision, a necklace-splitting
//! rounding step, a colorful Caratheodory solver, and a verifier for the
//! Tucker-style property of labeled complexes.

#![forbid(unsafe_code)]

pub mod complex;
pub mod crosspolytope;
pub mod division;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod pipeline;
pub mod rational;
pub mod samples;
pub mod search;
pub mod simmons_su;

pub use complex::{act_point, barycentric_subdivide, build_join_complex, GComplex, JoinPoint, LazyComplex};
pub use crosspolytope::{conv_contains_zero, fiber_complete, vertex_vector, ConvWitness, CrossLabel, GPolytope, ZeroSumMatrix};
pub use division::{decode, defect_matrix, label_vertex, max_deviation, round_to_beads, solve_in_assignment, values_table, LabelOutcome, PartitionScheme, RoundedSplit};
pub use error::Error;
pub use group::{Group, GroupKind};
pub use io::{cara_from_json, cara_to_json, conjecture_result, division_result, measures_from_json, measures_to_json, necklace_result, render_json, ConjectureFile, ResultFile, TuckerFile};
pub use measure::{beads_to_measures, BeadString, Measure};
pub use pipeline::{compose_division, epsilon_divide, epsilon_divide_with, necklace_split, DivideOptions, DivisionOutcome, DivisionPath, NecklaceOutcome, SearchStrategy, SimplexAudit};
pub use rational::Rational;
pub use search::{colorful_caratheodory, find_fully_labeled, refine_until_fine, scan_lazy, scan_lazy_sequential, verify_tucker_triple, CaraInstance, CaraSolution, FiberCandidate, FullyLabeled, ScanMode, ScanOutcome, SearchResult, TuckerVerdict, CANDIDATE_CAP};
pub use simmons_su::{check_conjecture_instance, ConjectureVerdict, Embedding, SLabel, SPoint};
