//! Exhaustive soundness checks for the geometric encodings: the LDT
//! predicate must coincide with first-principles geometry on every tuple,
//! the searches must be invariant under the transformations they quotient
//! by, and the square pattern must reproduce the parallelogram criterion.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use patmatch::generators;
use patmatch::geom::{
    find_affine, find_similar, normalize_similarity, search_affine, search_similar,
    similarity_to_ldt, affine_to_ldt, Orientation, OrientationPolicy, Pattern, Scene,
    SearchOptions, Transform,
};
use patmatch::ksum::SolveMode;
use patmatch::numeric::{rational_int, Rational};
use patmatch::oracle::{
    oracle_affine, oracle_similar, tuple_is_affine_image, tuple_is_similar_copy,
};

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        out.push(idx.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn distinct_coords(scene: &Scene, tuple: &[usize]) -> bool {
    for (a, &ia) in tuple.iter().enumerate() {
        for &ib in &tuple[a + 1..] {
            if ia == ib || scene.points()[ia] == scene.points()[ib] {
                return false;
            }
        }
    }
    true
}

/// For every tuple with pairwise distinct entries, the stacked similarity
/// equations hold iff the tuple is an orientation-consistent similar copy
/// by the distance-ratio and signed-area identities.
#[test]
fn similarity_encoding_matches_first_principles() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..40 {
        let k = if case % 2 == 0 { 3 } else { 4 };
        let pattern = generators::random_similarity_pattern(&mut rng, k);
        let n = rng.gen_range(k..=6);
        let scene = if rng.gen_bool(0.5) {
            let (w, z) = generators::random_similarity_transform(&mut rng);
            generators::planted_similarity(&pattern, n, &w, &z, rng.gen_bool(0.5), rng.gen())
                .unwrap()
                .scene
        } else {
            generators::random_scene(2, n, 6, rng.gen()).unwrap()
        };
        for orientation in [Orientation::Direct, Orientation::Mirrored] {
            let enc = normalize_similarity(&pattern, orientation).unwrap();
            let ldt = similarity_to_ldt(&enc, &scene).unwrap();
            let mirrored = orientation == Orientation::Mirrored;
            for tuple in all_tuples(scene.len(), k) {
                if !distinct_coords(&scene, &tuple) {
                    continue;
                }
                let points: Vec<Vec<Rational>> =
                    tuple.iter().map(|&i| scene.points()[i].clone()).collect();
                let encoded = ldt.verify_tuple(&tuple).unwrap();
                let geometric = tuple_is_similar_copy(&pattern, &points, mirrored);
                assert_eq!(
                    encoded, geometric,
                    "case {case} orientation {orientation:?} tuple {tuple:?}"
                );
            }
        }
    }
}

/// For every tuple with pairwise distinct entries, the stacked affine
/// equations hold iff the full k x d system is consistent.
#[test]
fn affine_encoding_matches_first_principles() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for case in 0..30 {
        let d = if case % 3 == 0 { 3 } else { 2 };
        let k = d + 2 + (case % 2);
        let pattern = generators::random_affine_pattern(&mut rng, d, k);
        let n = rng.gen_range(k..=if d == 2 { 6 } else { 7 });
        let scene = if rng.gen_bool(0.5) {
            let invertible = rng.gen_bool(0.7);
            let (f, t) = generators::random_affine_transform(&mut rng, d, invertible);
            generators::planted_affine(&pattern, n, &f, &t, rng.gen()).unwrap().scene
        } else {
            generators::random_scene(d, n, 5, rng.gen()).unwrap()
        };
        let (ldt, _) = affine_to_ldt(&pattern, &scene).unwrap();
        for tuple in all_tuples(scene.len(), k) {
            if !distinct_coords(&scene, &tuple) {
                continue;
            }
            let points: Vec<Vec<Rational>> =
                tuple.iter().map(|&i| scene.points()[i].clone()).collect();
            let encoded = ldt.verify_tuple(&tuple).unwrap();
            let geometric = tuple_is_affine_image(&pattern, &points);
            assert_eq!(encoded, geometric, "case {case} tuple {tuple:?}");
        }
    }
}

/// Self-matching always succeeds with the identity transform, and every
/// reported transform reproduces the matched points bit for bit.
#[test]
fn self_match_and_transform_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..20 {
        let pattern = generators::random_similarity_pattern(&mut rng, rng.gen_range(3..=5));
        let scene = Scene::new(2, pattern.points().to_vec()).unwrap();
        let report = find_similar(&pattern, &scene, &SearchOptions::default())
            .unwrap()
            .expect("a pattern is similar to itself");
        assert!(report.maps_exactly(&pattern, &scene));

        let d = rng.gen_range(2..=3);
        let pattern = generators::random_affine_pattern(&mut rng, d, d + 2);
        let scene = Scene::new(d, pattern.points().to_vec()).unwrap();
        let report = find_affine(&pattern, &scene, &SearchOptions::default())
            .unwrap()
            .expect("a pattern is an affine image of itself");
        assert!(report.maps_exactly(&pattern, &scene));
        match report.transform {
            Transform::Affine { ref matrix, ref translation } => {
                for (i, row) in matrix.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        assert_eq!(*x, rational_int(i64::from(i == j)));
                    }
                }
                assert!(translation.iter().all(|t| *t == rational_int(0)));
            }
            _ => panic!("expected affine transform"),
        }
    }
}

/// Decisions are invariant under rational translation and uniform scaling
/// of the scene (similarity) and under invertible affine maps of the scene
/// (affine search).
#[test]
fn decision_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for case in 0..25 {
        let (pattern, scene) =
            patmatch::selftest::random_similarity_case(&mut rng, &[3, 4], 7);
        let before = find_similar(&pattern, &scene, &SearchOptions::default())
            .unwrap()
            .is_some();
        let scale = generators::random_similarity_transform(&mut rng).0.re.clone()
            + rational_int(rng.gen_range(1..=3));
        let shift = (rational_int(rng.gen_range(-9..=9)), rational_int(rng.gen_range(-9..=9)));
        let moved: Vec<Vec<Rational>> = scene
            .points()
            .iter()
            .map(|p| vec![&p[0] * &scale + &shift.0, &p[1] * &scale + &shift.1])
            .collect();
        let moved = Scene::new(2, moved).unwrap();
        let after = find_similar(&pattern, &moved, &SearchOptions::default())
            .unwrap()
            .is_some();
        assert_eq!(before, after, "similarity case {case}");
    }

    for case in 0..25 {
        let (pattern, scene) = patmatch::selftest::random_affine_case(&mut rng, 2, &[4, 5], 7);
        let before = find_affine(&pattern, &scene, &SearchOptions::default())
            .unwrap()
            .is_some();
        let (f, t) = generators::random_affine_transform(&mut rng, 2, true);
        let map = Transform::Affine { matrix: f, translation: t };
        let moved: Vec<Vec<Rational>> = scene.points().iter().map(|p| map.apply(p)).collect();
        let moved = Scene::new(2, moved).unwrap();
        let after = find_affine(&pattern, &moved, &SearchOptions::default())
            .unwrap()
            .is_some();
        assert_eq!(before, after, "affine case {case}");
    }
}

/// On the 3x3 lattice, the square pattern's enumerated solutions equal the
/// parallelogram 4-subsets found by direct combinatorial enumeration, for
/// the pipeline and the oracle alike.
#[test]
fn square_pattern_reproduces_parallelogram_subsets() {
    let scene = generators::lattice(2, 3).unwrap();
    let pattern = generators::square_pattern();

    // direct combinatorial truth: a 4-subset is a (possibly degenerate)
    // parallelogram iff some pairing into diagonals has equal vector sums
    let mut subsets = std::collections::BTreeSet::new();
    let n = scene.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let p = |i: usize| &scene.points()[i];
                    let sum =
                        |i: usize, j: usize| [&p(i)[0] + &p(j)[0], &p(i)[1] + &p(j)[1]];
                    let pairings = [
                        (sum(a, b), sum(c, e)),
                        (sum(a, c), sum(b, e)),
                        (sum(a, e), sum(b, c)),
                    ];
                    if pairings.iter().any(|(x, y)| x == y) {
                        subsets.insert(vec![a, b, c, e]);
                    }
                }
            }
        }
    }
    assert_eq!(subsets.len(), 22);

    let opts = SearchOptions { mode: SolveMode::Enumerate, ..Default::default() };
    let pipeline = search_affine(&pattern, &scene, &opts).unwrap();
    let pipeline_subsets: std::collections::BTreeSet<Vec<usize>> = pipeline
        .reports
        .iter()
        .map(|r| {
            let mut s = r.indices.clone();
            s.sort_unstable();
            s
        })
        .collect();
    assert_eq!(pipeline_subsets, subsets);

    let oracle = oracle_affine(&pattern, &scene, SolveMode::Enumerate).unwrap();
    let oracle_subsets: std::collections::BTreeSet<Vec<usize>> = oracle
        .iter()
        .map(|r| {
            let mut s = r.indices.clone();
            s.sort_unstable();
            s
        })
        .collect();
    assert_eq!(oracle_subsets, subsets);

    // each parallelogram admits exactly 8 ordered labelings
    assert_eq!(pipeline.reports.len(), 22 * 8);
    assert_eq!(oracle.len(), 22 * 8);
}

/// Oracle answers do not depend on the order of scene points.
#[test]
fn oracle_permutation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..10 {
        let (pattern, scene) = patmatch::selftest::random_similarity_case(&mut rng, &[3], 6);
        let base = oracle_similar(&pattern, &scene, OrientationPolicy::Both, SolveMode::Enumerate)
            .unwrap();
        // reverse the scene point order
        let perm: Vec<usize> = (0..scene.len()).rev().collect();
        let shuffled = Scene::new(
            2,
            perm.iter().map(|&i| scene.points()[i].clone()).collect(),
        )
        .unwrap();
        let moved =
            oracle_similar(&pattern, &shuffled, OrientationPolicy::Both, SolveMode::Enumerate)
                .unwrap();
        // map the shuffled indices back through the permutation
        let mut mapped: Vec<Vec<usize>> = moved
            .iter()
            .map(|r| r.indices.iter().map(|&i| perm[i]).collect())
            .collect();
        mapped.sort();
        let mut expected: Vec<Vec<usize>> = base.iter().map(|r| r.indices.clone()).collect();
        expected.sort();
        assert_eq!(mapped, expected);
    }
}
