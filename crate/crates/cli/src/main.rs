//! Command line front end: parse inputs, run the pipelines, write result
//! files, and report in human terms. All computation lives in the library;
//! this binary owns flags, files, exit codes, and the worker pool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error. Result
//! files are byte-identical across worker counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use condiv_core::error::{Error, Result};
use condiv_core::io::{
    cara_from_json, conjecture_result, division_result, measures_from_json, necklace_result,
    render_json, BeadsSection, ResultFile, TuckerFile,
};
use condiv_core::rational::{format_rational, parse_rational, rat, sign, Rational};
use condiv_core::samples;
use condiv_core::{
    beads_to_measures, check_conjecture_instance, colorful_caratheodory, compose_division,
    epsilon_divide_with, max_deviation, necklace_split, values_table, verify_tucker_triple,
    BeadString, ConjectureVerdict, DivideOptions, DivisionOutcome, DivisionPath, Embedding, Group,
    Measure, SLabel, SPoint, SearchStrategy, TuckerVerdict,
};

#[derive(Parser)]
#[command(
    name = "condiv",
    version,
    about = "Exact consensus division of measures on [0,1]",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divide [0,1] into k parts each measure weighs within epsilon of 1/k.
    Divide {
        /// Measures file: JSON list of piecewise-constant densities.
        #[arg(long)]
        measures: PathBuf,
        /// Number of parts.
        #[arg(long)]
        k: usize,
        /// Accuracy target, a positive rational like "1/20".
        #[arg(long)]
        epsilon: String,
        /// Refinement depth cap for the simplicial search (prime k path).
        #[arg(long, default_value_t = 8)]
        cap: u32,
        /// Worker threads for the facet scan.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Result file path.
        #[arg(short, long)]
        output: PathBuf,
        /// Also print the re-integrated value table.
        #[arg(short, long, action = ArgAction::Count)]
        verbose: u8,
    },
    /// Split a bead string fairly among k thieves, cutting on bead
    /// boundaries.
    Necklace {
        /// Bead string over letters a-z, e.g. "aabbab".
        #[arg(long)]
        beads: String,
        /// Number of thieves.
        #[arg(long)]
        k: usize,
        /// Optional result file path.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print the underlying measure-space division.
        #[arg(short, long, action = ArgAction::Count)]
        verbose: u8,
    },
    /// Re-verify a result file from scratch against measures and epsilon.
    Verify {
        /// Result file to check.
        #[arg(long)]
        result: PathBuf,
        /// Measures file the result claims to divide.
        #[arg(long)]
        measures: PathBuf,
        /// Accuracy target to verify against.
        #[arg(long)]
        epsilon: String,
    },
    /// Solve a colorful Caratheodory instance and print the transversal.
    Cara {
        /// Instance file: {"d": int, "m": int, "columns": [[[rat,...],...],...]}.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Check the Tucker-triple condition for a labeled complex file.
    TuckerVerify {
        /// Complex file: {"group": {...}, "N": int, "depth": int, "labels": [[g,i],...]}.
        #[arg(long)]
        complex: PathBuf,
    },
    /// Probe the adjacent-labels conjecture with a random equivariant
    /// labeling. A not-found verdict is a data point, never a counterexample.
    SimmonsSu {
        /// Cyclic group order (exclusive with --elementary).
        #[arg(long, conflicts_with = "elementary")]
        k: Option<usize>,
        /// Elementary abelian group (Z_p)^r as two integers: P R.
        #[arg(long, num_args = 2, value_names = ["P", "R"])]
        elementary: Option<Vec<usize>>,
        /// Label rows.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Barycentric refinement depth of the sphere triangulation.
        #[arg(long, default_value_t = 0)]
        depth: u32,
        /// Seed for the random equivariant labeling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional report file path.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a quick subset of the acceptance checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::VerificationFailed(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Divide { measures, k, epsilon, cap, workers, output, verbose } => {
            divide(&measures, k, &epsilon, cap, workers, &output, verbose)
        }
        Command::Necklace { beads, k, output, verbose } => {
            necklace(&beads, k, output.as_deref(), verbose)
        }
        Command::Verify { result, measures, epsilon } => verify(&result, &measures, &epsilon),
        Command::Cara { instance } => cara(&instance),
        Command::TuckerVerify { complex } => tucker_verify(&complex),
        Command::SimmonsSu { k, elementary, n, depth, seed, output } => {
            simmons_su(k, elementary.as_deref(), n, depth, seed, output.as_deref())
        }
        Command::Selftest => selftest(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
    })
}

fn positive_epsilon(text: &str) -> Result<Rational> {
    let epsilon = parse_rational(text)?;
    if sign(&epsilon) <= 0 {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {text}")));
    }
    Ok(epsilon)
}

fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers < 1 {
        return Err(Error::InvalidInput("worker count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))
}

fn path_name(path: &DivisionPath) -> String {
    match path {
        DivisionPath::LuckyExact => "exact-vertex".into(),
        DivisionPath::Simplex(_) => "verified-simplex".into(),
        DivisionPath::PolishedCandidate => "polished-candidate".into(),
        DivisionPath::PolishedSweep => "polished-sweep".into(),
        DivisionPath::Composed { stages } => format!("composed-{stages}-stages"),
    }
}

fn report_division(outcome: &DivisionOutcome, verbose: u8) {
    let cuts: Vec<String> = outcome.scheme.cuts().iter().map(format_rational).collect();
    let assignment: Vec<String> =
        outcome.scheme.assignment().iter().map(usize::to_string).collect();
    println!("k: {}  epsilon: {}", outcome.scheme.k(), format_rational(&outcome.epsilon));
    println!("cuts: [{}]", cuts.join(", "));
    println!("assignment: [{}]", assignment.join(", "));
    println!(
        "max deviation: {}{}",
        format_rational(&outcome.max_deviation),
        if outcome.exact { " (exact)" } else { "" }
    );
    println!(
        "depth: {}  facets scanned: {}  path: {}",
        outcome.depth,
        outcome.facets,
        path_name(&outcome.path)
    );
    if verbose > 0 {
        for (i, row) in outcome.values.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            println!("measure {i}: [{}]", cells.join(", "));
        }
    }
}

fn divide(
    measures_path: &Path,
    k: usize,
    epsilon_text: &str,
    cap: u32,
    workers: usize,
    output: &Path,
    verbose: u8,
) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    let epsilon = positive_epsilon(epsilon_text)?;
    let measures = measures_from_json(&read(measures_path)?)?;
    let pool = worker_pool(workers)?;
    let options = DivideOptions { epsilon: epsilon.clone(), cap, strategy: SearchStrategy::Auto };
    let outcome = pool.install(|| match epsilon_divide_with(&measures, k, &options) {
        Err(Error::NotPrime(_)) => compose_division(&measures, k, &epsilon),
        other => other,
    })?;
    fs::write(output, division_result(&outcome).to_json())?;
    report_division(&outcome, verbose);
    println!("result written to {}", output.display());
    Ok(())
}

fn necklace(beads_text: &str, k: usize, output: Option<&Path>, verbose: u8) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    let beads = BeadString::parse(beads_text)?;
    let outcome = necklace_split(&beads, k)?;
    let file = necklace_result(&outcome, &beads);
    if let Some(path) = output {
        fs::write(path, file.to_json())?;
    }
    let section = file.beads.as_ref().expect("necklace results carry the split");
    println!("beads: {}", section.string);
    println!("cuts after beads: {:?}", section.bead_cuts);
    println!("segment thieves: {:?}", section.assignment);
    for (thief, row) in section.counts.iter().enumerate() {
        let per_color: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, count)| format!("{} x {}", count, beads.palette()[c]))
            .collect();
        println!("thief {thief}: {}", per_color.join(", "));
    }
    if verbose > 0 {
        report_division(&outcome.division, verbose - 1);
    }
    if let Some(path) = output {
        println!("result written to {}", path.display());
    }
    Ok(())
}

fn verify(result_path: &Path, measures_path: &Path, epsilon_text: &str) -> Result<()> {
    let epsilon = positive_epsilon(epsilon_text)?;
    let file = ResultFile::from_json(&read(result_path)?)?;
    let measures = measures_from_json(&read(measures_path)?)?;
    let fail = |msg: String| Error::VerificationFailed(msg);

    let scheme = file
        .scheme()
        .map_err(|e| fail(format!("result does not describe a valid scheme: {e}")))?;
    if measures.len() != file.values.len() {
        return Err(fail(format!(
            "result tabulates {} measures, the file provides {}",
            file.values.len(),
            measures.len()
        )));
    }
    let values = values_table(&scheme, &measures)?;
    let k = scheme.k();
    let target = rat(1, k as i64);
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let deviation = if v >= &target { v - &target } else { &target - v };
            if deviation >= epsilon {
                return Err(fail(format!(
                    "measure {i} gives part {j} mass {}, off 1/{k} by {} which is not below {}",
                    format_rational(v),
                    format_rational(&deviation),
                    format_rational(&epsilon)
                )));
            }
        }
    }
    let claimed = file
        .claimed_values()
        .map_err(|e| fail(format!("result value table does not parse: {e}")))?;
    if claimed != values {
        return Err(fail("claimed value table does not match re-integration".into()));
    }
    let deviation = max_deviation(&values, k);
    if file.claimed_deviation().map_err(|e| fail(e.to_string()))? != deviation {
        return Err(fail("claimed max deviation does not match re-integration".into()));
    }
    if file.certificate.exact != (sign(&deviation) == 0) {
        return Err(fail("exactness flag does not match re-integration".into()));
    }
    if let Some(section) = &file.beads {
        verify_beads(section, k).map_err(|e| match e {
            Error::VerificationFailed(msg) => fail(format!("bead split: {msg}")),
            other => fail(format!("bead split: {other}")),
        })?;
    }
    println!(
        "result verifies: max deviation {} below epsilon {}",
        format_rational(&deviation),
        format_rational(&epsilon)
    );
    Ok(())
}

/// Re-derives the discrete split from the bead string and cut indices and
/// checks fairness; nothing from the section is trusted beyond the string.
fn verify_beads(section: &BeadsSection, k: usize) -> Result<()> {
    let beads = BeadString::parse(&section.string)?;
    let l = beads.len();
    let err = |msg: String| Error::VerificationFailed(msg);
    if section.assignment.len() != section.bead_cuts.len() + 1 {
        return Err(err("segment count does not match cut count".into()));
    }
    if section.cuts.len() != section.bead_cuts.len() {
        return Err(err("rational and bead cut lists differ in length".into()));
    }
    for (text, &idx) in section.cuts.iter().zip(&section.bead_cuts) {
        if idx > l || parse_rational(text)? != rat(idx as i64, l as i64) {
            return Err(err(format!("cut {text} does not sit on bead boundary {idx}")));
        }
    }
    if section.bead_cuts.windows(2).any(|w| w[0] > w[1]) {
        return Err(err("bead cuts are not sorted".into()));
    }
    if section.assignment.iter().any(|&part| part >= k) {
        return Err(err("segment assigned to a thief that does not exist".into()));
    }
    let mut counts = vec![vec![0usize; beads.n_colors()]; k];
    for (t, &color) in beads.beads().iter().enumerate() {
        let segment = section.bead_cuts.partition_point(|&c| c <= t);
        counts[section.assignment[segment]][color] += 1;
    }
    if counts != section.counts {
        return Err(err("recounted beads disagree with the recorded counts".into()));
    }
    for color in 0..beads.n_colors() {
        let total = beads.color_count(color);
        if total % k != 0 {
            return Err(err(format!("color {color} count {total} is not divisible by {k}")));
        }
        for row in &counts {
            if row[color] != total / k {
                return Err(err(format!(
                    "a thief holds {} beads of color {color}, fair share is {}",
                    row[color],
                    total / k
                )));
            }
        }
    }
    Ok(())
}

fn cara(instance_path: &Path) -> Result<()> {
    let instance = cara_from_json(&read(instance_path)?)?;
    let solution = colorful_caratheodory(&instance)?;
    let points: Vec<Vec<Rational>> = solution
        .selection
        .iter()
        .enumerate()
        .map(|(nu, &row)| instance.columns[nu][row].clone())
        .collect();
    if !solution.witness.verify(&points) {
        return Err(Error::VerificationFailed(
            "solver witness fails re-verification against the transversal".into(),
        ));
    }
    println!("transversal: {:?}", solution.selection);
    for (nu, point) in points.iter().enumerate() {
        let coords: Vec<String> = point.iter().map(format_rational).collect();
        println!("column {nu} row {}: ({})", solution.selection[nu], coords.join(", "));
    }
    let combo: Vec<String> = solution
        .witness
        .support
        .iter()
        .zip(&solution.witness.coefficients)
        .map(|(idx, c)| format!("{} * column {idx}", format_rational(c)))
        .collect();
    println!("zero as convex combination: {}", combo.join(" + "));
    Ok(())
}

fn tucker_verify(complex_path: &Path) -> Result<()> {
    let file = TuckerFile::from_json(&read(complex_path)?)?;
    let (complex, phi, polytope) = file.instantiate()?;
    match verify_tucker_triple(&complex, &phi, &polytope)? {
        TuckerVerdict::Found { facet, simplex, witness } => {
            println!("tucker triple confirmed");
            println!("facet {facet}, simplex vertices {simplex:?}");
            let combo: Vec<String> = witness
                .coefficients
                .iter()
                .zip(&simplex)
                .map(|(c, v)| format!("{} * phi(v{v})", format_rational(c)))
                .collect();
            println!("zero as convex combination: {}", combo.join(" + "));
            Ok(())
        }
        TuckerVerdict::NotFound => Err(Error::VerificationFailed(
            "no simplex hull captures the origin for this labeling".into(),
        )),
    }
}

fn simmons_su(
    k: Option<usize>,
    elementary: Option<&[usize]>,
    n: usize,
    depth: u32,
    seed: u64,
    output: Option<&Path>,
) -> Result<()> {
    let group = match (k, elementary) {
        (Some(k), None) => Group::cyclic(k)?,
        (None, Some(&[p, r])) => Group::elementary_abelian(p, r as u32)?,
        _ => {
            return Err(Error::InvalidInput(
                "pass exactly one of --k <order> or --elementary <p> <r>".into(),
            ))
        }
    };
    let embedding = Embedding::standard(group);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = samples::sphere_labeling(&mut rng, &embedding, n, depth);
    let lookup = |s: &SPoint| -> Result<SLabel> {
        table.get(s).copied().ok_or_else(|| {
            Error::InvalidInput("triangulation vertex missing from the labeling".into())
        })
    };
    let verdict = check_conjecture_instance(&embedding, n, depth, lookup)?;
    match &verdict {
        ConjectureVerdict::Found { row, simplex } => {
            println!("adjacent labels found: powers 1..={} on row {row}", embedding.k());
            for (idx, s) in simplex.iter().enumerate() {
                let coords: Vec<String> = s
                    .coords()
                    .iter()
                    .map(|(t, j)| format!("{} w^{j}", format_rational(t)))
                    .collect();
                println!("power {}: ({})", idx + 1, coords.join(", "));
            }
        }
        ConjectureVerdict::NotFound => {
            println!("not found: a data point for this triangulation family, not a counterexample");
        }
    }
    if let Some(path) = output {
        fs::write(path, render_json(&conjecture_result(&verdict)))?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::VerificationFailed(msg.into()))
    }
}

fn selftest() -> Result<()> {
    let mut passed = 0usize;
    let mut done = |name: &str| {
        passed += 1;
        println!("ok {name}");
    };

    let uniform = vec![Measure::uniform()];
    let outcome = compose_division(&uniform, 2, &rat(1, 20))?;
    ensure(outcome.exact, "halving the uniform measure should be exact")?;
    ensure(outcome.scheme.cuts() == [rat(1, 2)], "uniform halving cut should sit at 1/2")?;
    done("uniform halving");

    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let suite = samples::measure_suite(&mut rng, 2);
    let outcome = compose_division(&suite, 3, &rat(1, 10))?;
    let values = values_table(&outcome.scheme, &suite)?;
    ensure(max_deviation(&values, 3) < rat(1, 10), "thirds must verify within 1/10")?;
    done("thirds across two measures");

    let outcome = compose_division(&suite[..1].to_vec(), 4, &rat(1, 10))?;
    ensure(outcome.scheme.cuts().len() <= 3, "quarters need at most 3 cuts")?;
    done("composite quarters");

    let beads = BeadString::parse("aabaab")?;
    let split = necklace_split(&beads, 2)?;
    ensure(
        split.split.counts.iter().all(|row| row == &[2usize, 1][..]),
        "each thief should take 2 a-beads and 1 b-bead",
    )?;
    let _ = beads_to_measures(&beads)?;
    done("necklace split");

    let square = TuckerFile {
        group: condiv_core::GroupKind::Cyclic { k: 2 },
        big_n: 1,
        depth: 1,
        labels: Vec::new(),
    };
    let group = Group::cyclic(2)?;
    let complex = condiv_core::LazyComplex::new(&group, 1, square.depth).materialize()?;
    let mut labeled = square;
    labeled.labels = samples::equivariant_labels(&mut rng, &complex, 1)
        .into_iter()
        .map(|l| [l.g, l.i])
        .collect();
    let (complex, phi, polytope) = labeled.instantiate()?;
    ensure(
        matches!(verify_tucker_triple(&complex, &phi, &polytope)?, TuckerVerdict::Found { .. }),
        "the refined square must carry a tucker triple",
    )?;
    done("tucker triple on the square");

    let instance = samples::cara_sample(&mut rng, 2, 3);
    let solution = colorful_caratheodory(&instance)?;
    let points: Vec<Vec<Rational>> = solution
        .selection
        .iter()
        .enumerate()
        .map(|(nu, &row)| instance.columns[nu][row].clone())
        .collect();
    ensure(solution.witness.verify(&points), "caratheodory witness must re-verify")?;
    done("colorful caratheodory sample");

    let embedding = Embedding::standard(Group::cyclic(2)?);
    let table = samples::sphere_labeling(&mut rng, &embedding, 1, 1);
    let verdict = check_conjecture_instance(&embedding, 1, 1, |s| {
        table.get(s).copied().ok_or_else(|| Error::InvalidInput("unlabeled vertex".into()))
    })?;
    ensure(
        matches!(verdict, ConjectureVerdict::Found { .. }),
        "the order-2 conjecture instance must be found",
    )?;
    done("conjecture probe");

    let mut files = Vec::new();
    for workers in [1usize, 2] {
        let pool = worker_pool(workers)?;
        let outcome = pool.install(|| compose_division(&suite, 3, &rat(1, 10)))?;
        files.push(division_result(&outcome).to_json());
    }
    ensure(files[0] == files[1], "result files must not depend on worker count")?;
    done("determinism across pools");

    println!("selftest passed ({passed} checks)");
    Ok(())
}
