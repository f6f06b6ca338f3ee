//! Journeys through the public API exactly as an external consumer writes
//! them. Unit tests inside the crate cover the mathematics; these cover the
//! re-exported surface staying usable end to end.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use condiv_core::io::{division_result, measures_from_json, measures_to_json, ResultFile};
use condiv_core::rational::{parse_rational, rat};
use condiv_core::samples;
use condiv_core::{
    check_conjecture_instance, compose_division, epsilon_divide, max_deviation, necklace_split,
    values_table, BeadString, ConjectureVerdict, Embedding, Error, Group, Measure,
};

#[test]
fn divide_serialize_reload_and_recheck() {
    let measures = vec![
        Measure::new(
            vec![rat(0, 1), rat(1, 4), rat(1, 1)],
            vec![rat(2, 1), rat(2, 3)],
        )
        .unwrap(),
        Measure::uniform(),
    ];
    let epsilon = rat(1, 12);
    let outcome = epsilon_divide(&measures, 3, &epsilon).unwrap();
    assert!(outcome.max_deviation < epsilon);

    let text = division_result(&outcome).to_json();
    let reloaded = ResultFile::from_json(&text).unwrap();
    let scheme = reloaded.scheme().unwrap();
    assert_eq!(scheme, outcome.scheme);
    assert_eq!(reloaded.claimed_values().unwrap(), outcome.values);

    let values = values_table(&scheme, &measures).unwrap();
    assert_eq!(max_deviation(&values, 3), outcome.max_deviation);
}

#[test]
fn measures_survive_a_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let measures = samples::measure_suite(&mut rng, 3);
    let text = measures_to_json(&measures);
    let back = measures_from_json(&text).unwrap();
    assert_eq!(back, measures);

    let bad = measures_from_json(r#"[{"breakpoints": ["0", "1"], "densities": ["2"]}]"#);
    assert!(matches!(bad, Err(Error::InvalidMeasure { index: 0, .. })));
}

#[test]
fn necklace_outcome_is_consistent_with_its_division() {
    let beads = BeadString::parse("abacabacbbcc").unwrap();
    let outcome = necklace_split(&beads, 2).unwrap();
    assert!(outcome.split.cuts.len() <= beads.n_colors());
    for (c, fair) in
        (0..beads.n_colors()).map(|c| (c, beads.color_count(c) / 2))
    {
        for row in &outcome.split.counts {
            assert_eq!(row[c], fair);
        }
    }
    assert!(outcome.division.max_deviation < parse_rational("1/24").unwrap());
}

#[test]
fn composite_division_reports_its_stages() {
    let outcome = compose_division(&[Measure::uniform()], 6, &rat(1, 10)).unwrap();
    assert!(outcome.exact);
    assert!(outcome.scheme.cuts().len() <= 5);
    assert!(matches!(
        outcome.path,
        condiv_core::DivisionPath::Composed { stages } if stages >= 2
    ));
}

#[test]
fn conjecture_probe_runs_from_a_seeded_table() {
    let embedding = Embedding::standard(Group::cyclic(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let table = samples::sphere_labeling(&mut rng, &embedding, 1, 0);
    let verdict = check_conjecture_instance(&embedding, 1, 0, |s| {
        table.get(s).copied().ok_or_else(|| Error::InvalidInput("missing label".into()))
    })
    .unwrap();
    let ConjectureVerdict::Found { row, simplex } = verdict else {
        panic!("order three is a prime power, the probe must land");
    };
    assert_eq!(row, 1);
    assert_eq!(simplex.len(), 3);
    // simplex[j-1] is the vertex the table labels with power j, on the
    // common row of the verdict.
    for (idx, point) in simplex.iter().enumerate() {
        assert_eq!(point.k(), 3);
        let label = table[point];
        assert_eq!(label.power, idx + 1);
        assert_eq!(label.row, row);
    }
}
