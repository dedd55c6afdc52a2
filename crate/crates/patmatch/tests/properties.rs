//! Property tests for the arithmetic layer, the reductions, and the solver
//! contracts. Random instances come from the seeded generators, so each
//! failing case is reproducible from its seed.

use proptest::prelude::*;

use patmatch::generators::random_ldt_instance;
use patmatch::ksum::{
    draw_projection, ldt_to_ksum, project_instance, solve, solve_3sum_quadratic,
    solve_bruteforce, solve_mitm, KSumInstance, SolveMode, SolveOptions,
};
use patmatch::ksum::Strategy as SolverStrategy;
use patmatch::numeric::{
    ComplexRational, Rational, RingDescriptor, RingElement,
};
use patmatch::selftest::{check_fold_equivalence, corpus_rings};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-100i64..=100, 1i64..=50).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn complex_strategy() -> impl Strategy<Value = ComplexRational> {
    (rational_strategy(), rational_strategy()).prop_map(|(re, im)| ComplexRational::new(re, im))
}

fn vector_strategy(arity: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational_strategy(), arity)
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational_strategy(), b in rational_strategy(), c in rational_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        // exact arithmetic: additions invert bit for bit
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if b != Rational::new(0.into(), 1.into()) {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
    }

    #[test]
    fn complex_field_axioms(a in complex_strategy(), b in complex_strategy(), c in complex_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        // multiplication matches its componentwise definition
        let prod = &a * &b;
        prop_assert_eq!(prod.re, &a.re * &b.re - &a.im * &b.im);
        prop_assert_eq!(prod.im, &a.re * &b.im + &a.im * &b.re);
    }

    #[test]
    fn hadamard_ring_axioms(a in vector_strategy(3), b in vector_strategy(3), c in vector_strategy(3)) {
        let a = RingElement::Vector(a);
        let b = RingElement::Vector(b);
        let c = RingElement::Vector(c);
        let mul = |x: &RingElement, y: &RingElement| x.try_mul(y).unwrap();
        let add = |x: &RingElement, y: &RingElement| x.try_add(y).unwrap();
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        let one = RingElement::one(a.descriptor());
        prop_assert_eq!(mul(&a, &one), a.clone());
        let zero = RingElement::zero(a.descriptor());
        prop_assert_eq!(add(&a, &zero), a.clone());
        prop_assert!(add(&a, &a.neg()).is_zero());
    }

    #[test]
    fn canonical_form_is_representation_unique(n in -100i64..=100, d in 1i64..=50, m in 1i64..=8) {
        let a = Rational::new(n.into(), d.into());
        let b = Rational::new((n * m).into(), (d * m).into());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.numer(), b.numer());
        prop_assert_eq!(a.denom(), b.denom());
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let h = |r: &Rational| {
            let mut s = DefaultHasher::new();
            r.hash(&mut s);
            s.finish()
        };
        prop_assert_eq!(h(&a), h(&b));
    }

    /// Coefficient folding preserves the solution predicate tuple by tuple,
    /// and set sizes survive unchanged.
    #[test]
    fn fold_equivalence_on_random_instances(seed in any::<u64>(), k in 3usize..=5, n in 1usize..=4, ring_idx in 0usize..5) {
        let ring = corpus_rings()[ring_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_ldt_instance(&mut rng, k, n, ring);
        let folded = ldt_to_ksum(&inst);
        let in_sizes: Vec<usize> = inst.sets().iter().map(Vec::len).collect();
        let out_sizes: Vec<usize> = folded.sets().iter().map(Vec::len).collect();
        prop_assert_eq!(in_sizes, out_sizes);
        let (checked, bad) = check_fold_equivalence(&inst);
        prop_assert_eq!(checked, (n as u64).pow(k as u32));
        prop_assert_eq!(bad, 0);
    }

    /// Projection keeps every true solution (the converse direction is what
    /// verification exists for), and preserves sizes and index positions.
    #[test]
    fn projection_never_loses_solutions(seed in any::<u64>(), k in 3usize..=4, n in 1usize..=4, arity in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_ldt_instance(&mut rng, k, n, RingDescriptor::vector(arity));
        let folded = ldt_to_ksum(&inst);
        let v = draw_projection(arity, seed.wrapping_add(1));
        let projected = project_instance(&folded, &v).unwrap();
        let in_sizes: Vec<usize> = folded.sets().iter().map(Vec::len).collect();
        let out_sizes: Vec<usize> = projected.sets().iter().map(Vec::len).collect();
        prop_assert_eq!(in_sizes, out_sizes);

        let mut idx = vec![0usize; k];
        loop {
            if folded.verify_tuple(&idx).unwrap() {
                prop_assert!(projected.verify_tuple(&idx).unwrap());
            }
            let mut pos = k;
            loop {
                if pos == 0 { return Ok(()); }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n { break; }
                idx[pos] = 0;
            }
        }
    }

    /// All solvers agree: same decision, identical enumerated index sets.
    #[test]
    fn solver_agreement(seed in any::<u64>(), k in 3usize..=4, n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sets: Vec<Vec<RingElement>> = (0..k)
            .map(|_| (0..n).map(|_| RingElement::scalar_i64(rng.gen_range(-4i64..=4))).collect())
            .collect();
        let inst = KSumInstance::new(sets).unwrap();
        let brute = solve_bruteforce(&inst, SolveMode::Enumerate, None).unwrap();
        let mitm = solve_mitm(&inst, SolveMode::Enumerate, None).unwrap();
        prop_assert_eq!(brute.index_sets(), mitm.index_sets());
        if k == 3 {
            let quad = solve_3sum_quadratic(&inst, SolveMode::Enumerate, None).unwrap();
            prop_assert_eq!(brute.index_sets(), quad.index_sets());
        }
        let brute_dec = solve_bruteforce(&inst, SolveMode::Decide, None).unwrap();
        let mitm_dec = solve_mitm(&inst, SolveMode::Decide, None).unwrap();
        prop_assert_eq!(brute_dec.found(), mitm_dec.found());
    }

    /// The pipeline is never wrong: its verified enumerate output equals the
    /// exhaustive solution set of the instance, for every strategy.
    #[test]
    fn pipeline_matches_bruteforce(seed in any::<u64>(), k in 3usize..=4, n in 1usize..=4, ring_idx in 0usize..5) {
        let ring = corpus_rings()[ring_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_ldt_instance(&mut rng, k, n, ring);
        let folded = ldt_to_ksum(&inst);
        let truth = solve_bruteforce(&folded, SolveMode::Enumerate, None).unwrap();
        for strategy in [SolverStrategy::Auto, SolverStrategy::Mitm] {
            let opts = SolveOptions { strategy, mode: SolveMode::Enumerate, seed, ..Default::default() };
            let dec = solve(&inst, &opts, None).unwrap();
            prop_assert_eq!(truth.index_sets(), dec.index_sets());
        }
        let opts = SolveOptions { seed, ..Default::default() };
        let dec = solve(&inst, &opts, None).unwrap();
        prop_assert_eq!(dec.found(), truth.found());
        if let Some(t) = dec.solutions.first() {
            prop_assert!(inst.verify_tuple(&t.indices).unwrap());
        }
    }
}
