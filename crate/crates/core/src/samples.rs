//! Seeded generators for the randomized test suites.
//!
//! Every generator draws from a caller-supplied RNG and nothing else, so a
//! fixed seed reproduces the exact instance, failures included. Outputs are
//! built through the validating constructors; a generator that could emit an
//! invalid value would be a bug here, not in the consumer.

use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::complex::{GComplex, JoinPoint, LazyComplex};
use crate::crosspolytope::{CrossLabel, GPolytope};
use crate::division::PartitionScheme;
use crate::group::Group;
use crate::measure::Measure;
use crate::rational::{rat, rat_int, Rational};
use crate::search::CaraInstance;
use crate::simmons_su::{Embedding, SLabel, SPoint};
use num_traits::{One, Zero};

/// A measure with 1 to 4 constant pieces. Breakpoints sit on a grid with
/// denominator 8, 12, or 16; piece masses are positive integer weights
/// normalized exactly, so the density is everywhere positive.
pub fn random_measure(rng: &mut impl Rng) -> Measure {
    let den = *[8i64, 12, 16].choose(rng).unwrap();
    let pieces = rng.gen_range(1..=4usize);
    let mut interior = index::sample(rng, den as usize - 1, pieces - 1).into_vec();
    interior.sort_unstable();
    let mut breakpoints = vec![Rational::zero()];
    breakpoints.extend(interior.iter().map(|&i| rat(i as i64 + 1, den)));
    breakpoints.push(Rational::one());
    let weights: Vec<i64> = (0..pieces).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let densities = weights
        .iter()
        .zip(breakpoints.windows(2))
        .map(|(w, bp)| rat(*w, total) / (&bp[1] - &bp[0]))
        .collect();
    Measure::new(breakpoints, densities).expect("generated measures are valid")
}

/// `n` independent random measures.
pub fn measure_suite(rng: &mut impl Rng, n: usize) -> Vec<Measure> {
    (0..n).map(|_| random_measure(rng)).collect()
}

/// A valid colorful Caratheodory instance: `d + 1` columns of `m` points in
/// dimension `d`, each column recentered on its centroid so its hull
/// contains the origin by construction.
pub fn cara_sample(rng: &mut impl Rng, d: usize, m: usize) -> CaraInstance {
    let columns = (0..=d)
        .map(|_| {
            let mut points: Vec<Vec<Rational>> = (0..m)
                .map(|_| {
                    (0..d)
                        .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect()
                })
                .collect();
            let m_rat = rat_int(m as i64);
            let centroid: Vec<Rational> = (0..d)
                .map(|c| points.iter().map(|p| &p[c]).sum::<Rational>() / &m_rat)
                .collect();
            for p in &mut points {
                for (x, c) in p.iter_mut().zip(&centroid) {
                    *x -= c;
                }
            }
            points
        })
        .collect();
    let instance = CaraInstance { d, columns };
    instance.validate().expect("centered columns contain the origin");
    instance
}

fn vertex_orbit_reps(complex: &GComplex) -> Vec<usize> {
    let group = complex.group();
    (0..complex.vertex_count())
        .filter(|&v| group.elements().all(|g| complex.act_vertex(g, v) >= v))
        .collect()
}

/// A uniformly random equivariant labeling into `n` label rows: one free
/// choice per vertex orbit, extended by the action.
pub fn equivariant_labels(rng: &mut impl Rng, complex: &GComplex, n: usize) -> Vec<CrossLabel> {
    let group = complex.group();
    let k = group.order();
    let mut labels = vec![None; complex.vertex_count()];
    for rep in vertex_orbit_reps(complex) {
        let seed = CrossLabel { g: rng.gen_range(0..k), i: rng.gen_range(0..n) };
        for h in group.elements() {
            let v = complex.act_vertex(h, rep);
            labels[v] = Some(CrossLabel { g: group.mul(h, seed.g), i: seed.i });
        }
    }
    labels.into_iter().map(|l| l.expect("orbits cover the vertices")).collect()
}

/// A uniformly random equivariant vertex map into a polytope with a
/// compatible action: `phi(h . v) = h . phi(v)`.
pub fn equivariant_polytope_map(
    rng: &mut impl Rng,
    complex: &GComplex,
    polytope: &GPolytope,
) -> Vec<usize> {
    let group = complex.group();
    let mut phi = vec![None; complex.vertex_count()];
    for rep in vertex_orbit_reps(complex) {
        let target = rng.gen_range(0..polytope.vertex_count());
        for h in group.elements() {
            let v = complex.act_vertex(h, rep);
            phi[v] = Some(polytope.act_vertex(h, target));
        }
    }
    phi.into_iter().map(|t| t.expect("orbits cover the vertices")).collect()
}

/// The orbit polytope of a random zero-sum vector with trivial stabilizer.
/// Falls back to the first basis difference if the dice keep landing on
/// stabilized vectors, so it always succeeds.
pub fn random_orbit_polytope(rng: &mut impl Rng, group: &Group) -> GPolytope {
    let k = group.order();
    for _ in 0..64 {
        let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(-4..=4)).collect();
        let sum: i64 = raw.iter().sum();
        let generator: Vec<Rational> =
            raw.iter().map(|&x| rat(x, 1) - rat(sum, k as i64)).collect();
        if generator.iter().all(Rational::is_zero) {
            continue;
        }
        if let Ok(polytope) = GPolytope::orbit(group, &generator) {
            return polytope;
        }
    }
    let mut generator = vec![Rational::zero(); k];
    generator[0] = Rational::one();
    generator[1] = -Rational::one();
    GPolytope::orbit(group, &generator).expect("basis difference has trivial stabilizer")
}

/// A random point of the join complex on `n_slots` slots: integer weights
/// on a random support, normalized, with random slot elements.
pub fn random_join_point(rng: &mut impl Rng, group: &Group, n_slots: usize) -> JoinPoint {
    let k = group.order();
    let mut weights: Vec<i64> = (0..n_slots).map(|_| rng.gen_range(0..=3)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.gen_range(0..n_slots)] = 1;
    }
    let total: i64 = weights.iter().sum();
    let slots = weights
        .into_iter()
        .map(|w| (rat(w, total), rng.gen_range(0..k)))
        .collect();
    JoinPoint::new(slots, group).expect("generated points are valid")
}

/// A random partition scheme with up to 3 cuts on a coarse grid. Duplicate
/// cuts are kept, so degenerate intervals show up regularly.
pub fn random_scheme(rng: &mut impl Rng, k: usize) -> PartitionScheme {
    let den = *[8i64, 12].choose(rng).unwrap();
    let n_cuts = rng.gen_range(0..=3usize);
    let mut cuts: Vec<Rational> =
        (0..n_cuts).map(|_| rat(rng.gen_range(0..=den), den)).collect();
    cuts.sort();
    let assignment = (0..=n_cuts).map(|_| rng.gen_range(0..k)).collect();
    PartitionScheme::new(k, cuts, assignment).expect("generated schemes are valid")
}

/// A random equivariant labeling of the conjecture sphere: the depth-`depth`
/// refinement of the sphere of dimension `n(k - 1)`, one free label per
/// vertex orbit, extended through the embedded action.
pub fn sphere_labeling(
    rng: &mut impl Rng,
    embedding: &Embedding,
    n: usize,
    depth: u32,
) -> HashMap<SPoint, SLabel> {
    let group = embedding.group();
    let k = group.order();
    let complex = LazyComplex::new(group, n * (k - 1), depth)
        .materialize()
        .expect("conjecture spheres materialize");
    let mut table = HashMap::new();
    for rep in vertex_orbit_reps(&complex) {
        let label = SLabel { power: rng.gen_range(1..=k), row: rng.gen_range(1..=n) };
        for g in group.elements() {
            let pi = embedding.permutation(g).expect("group elements embed");
            let v = complex.act_vertex(g, rep);
            let s = embedding.from_join_point(complex.vertex(v)).expect("vertices map back");
            table.insert(s, label.permuted(&pi).expect("labels move with the action"));
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::act_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_seeds_reproduce_every_generator() {
        let z3 = Group::cyclic(3).unwrap();
        let complex = LazyComplex::new(&z3, 1, 1).materialize().unwrap();
        let embedding = Embedding::standard(z3.clone());
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(measure_suite(&mut a, 3), measure_suite(&mut b, 3));
        assert_eq!(cara_sample(&mut a, 2, 4), cara_sample(&mut b, 2, 4));
        assert_eq!(equivariant_labels(&mut a, &complex, 2), equivariant_labels(&mut b, &complex, 2));
        assert_eq!(random_join_point(&mut a, &z3, 3), random_join_point(&mut b, &z3, 3));
        assert_eq!(random_scheme(&mut a, 3), random_scheme(&mut b, 3));
        assert_eq!(
            sphere_labeling(&mut a, &embedding, 1, 0),
            sphere_labeling(&mut b, &embedding, 1, 0)
        );
    }

    #[test]
    fn generated_labelings_are_exhaustively_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for group in [Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()] {
            let complex = LazyComplex::new(&group, 2, 1).materialize().unwrap();
            let labels = equivariant_labels(&mut rng, &complex, 2);
            for v in 0..complex.vertex_count() {
                for g in group.elements() {
                    let moved = &labels[complex.act_vertex(g, v)];
                    assert_eq!(moved.g, group.mul(g, labels[v].g));
                    assert_eq!(moved.i, labels[v].i);
                }
            }
        }
    }

    #[test]
    fn generated_polytope_maps_intertwine_the_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let group = Group::cyclic(4).unwrap();
        let complex = LazyComplex::new(&group, 1, 1).materialize().unwrap();
        for _ in 0..5 {
            let polytope = random_orbit_polytope(&mut rng, &group);
            let phi = equivariant_polytope_map(&mut rng, &complex, &polytope);
            for v in 0..complex.vertex_count() {
                for g in group.elements() {
                    assert_eq!(phi[complex.act_vertex(g, v)], polytope.act_vertex(g, phi[v]));
                }
            }
        }
    }

    #[test]
    fn random_join_points_respect_the_complex_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let group = Group::cyclic(3).unwrap();
        for _ in 0..50 {
            let p = random_join_point(&mut rng, &group, 4);
            assert_eq!(p.n_slots(), 4);
            let moved = act_point(&group, 1, &p).unwrap();
            assert_eq!(act_point(&group, group.inv(1), &moved).unwrap(), p);
        }
    }

    #[test]
    fn sphere_labelings_cover_the_sphere_equivariantly() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let group = Group::cyclic(3).unwrap();
        let embedding = Embedding::standard(group.clone());
        let table = sphere_labeling(&mut rng, &embedding, 1, 1);
        let complex = LazyComplex::new(&group, 2, 1).materialize().unwrap();
        assert_eq!(table.len(), complex.vertex_count());
        for v in complex.vertices() {
            let s = embedding.from_join_point(v).unwrap();
            let label = table[&s];
            for g in group.elements() {
                let pi = embedding.permutation(g).unwrap();
                let moved = table[&s.permuted(&pi).unwrap()];
                assert_eq!(moved, label.permuted(&pi).unwrap());
            }
        }
    }

    #[test]
    fn generator_outputs_pass_their_validators() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..25 {
            random_measure(&mut rng);
            cara_sample(&mut rng, 3, 5);
            random_scheme(&mut rng, 4);
        }
        for k in [2usize, 3, 4] {
            let group = Group::cyclic(k).unwrap();
            for _ in 0..10 {
                random_orbit_polytope(&mut rng, &group);
            }
        }
    }
}
