//! The composed solving pipeline: fold coefficients into a pure k-SUM
//! instance, flatten complex rings to real vectors, collapse vectors to
//! scalars with a random projection, and run a scalar solver. Every
//! candidate is re-checked exactly in the source ring; a candidate that
//! fails triggers a fresh projection, and after a capped number of retries
//! the vector instance is solved directly by hashing. The answer is
//! therefore always correct; randomness only affects running time.

use crate::error::Result;
use crate::ksum::instance::{KSumInstance, LdtInstance, SolutionTuple};
use crate::ksum::reductions::{
    clear_denominators, complex_to_real, draw_projection, ldt_to_ksum, project_instance,
};
use crate::ksum::solvers::{
    solve_3sum_quadratic, solve_bruteforce, solve_mitm, IndexFilter, SolveMode, SolverOutput,
};
use crate::numeric::RingTag;

/// Scalar solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Two-pointer 3SUM for k = 3, meet-in-the-middle otherwise.
    Auto,
    BruteForce,
    Mitm,
    Quad3Sum,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "auto" => Some(Strategy::Auto),
            "brute" => Some(Strategy::BruteForce),
            "mitm" => Some(Strategy::Mitm),
            "quad3sum" => Some(Strategy::Quad3Sum),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub mode: SolveMode,
    pub seed: u64,
    /// Fresh projections tried after an unverified candidate before falling
    /// back to the exact vector-instance solve.
    pub retry_cap: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Auto,
            mode: SolveMode::Decide,
            seed: 0,
            retry_cap: 3,
        }
    }
}

/// Outcome of the pipeline: verified solutions of the source instance plus
/// instrumentation.
#[derive(Debug, Clone)]
pub struct MatchDecision {
    /// Verified in the source ring; at most one tuple in decide mode, the
    /// full lexicographically sorted solution set in enumerate mode.
    pub solutions: Vec<SolutionTuple>,
    pub stats: PipelineStats,
}

impl MatchDecision {
    pub fn found(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.solutions.iter().map(|s| s.indices.clone()).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineStats {
    /// Projections drawn (0 for scalar instances).
    pub projections: u32,
    /// Candidates rejected by exact verification in the source ring.
    pub rejected_candidates: u64,
    /// Whether the exact vector-instance fallback ran.
    pub fallback_used: bool,
    /// Elements touched by reductions plus solver operations.
    pub ops: u64,
}

fn run_scalar_solver(
    inst: &KSumInstance,
    strategy: Strategy,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> Result<SolverOutput> {
    match strategy {
        Strategy::Auto => {
            if inst.k() == 3 && inst.ring().tag == RingTag::Scalar {
                solve_3sum_quadratic(inst, mode, filter)
            } else {
                solve_mitm(inst, mode, filter)
            }
        }
        Strategy::BruteForce => solve_bruteforce(inst, mode, filter),
        Strategy::Mitm => solve_mitm(inst, mode, filter),
        Strategy::Quad3Sum => solve_3sum_quadratic(inst, mode, filter),
    }
}

fn source_tuple(inst: &LdtInstance, indices: &[usize]) -> SolutionTuple {
    SolutionTuple::new(indices.to_vec(), inst.witness(indices))
}

/// Solves an LDT instance end to end. Candidate index tuples found on the
/// reduced side are verified against the source instance (`f = 0` exactly)
/// before being reported, so a "yes" always carries a correct witness and a
/// "no" is only reported when the reduced instance provably has no solution
/// compatible with the filter.
pub fn solve(
    inst: &LdtInstance,
    opts: &SolveOptions,
    filter: Option<IndexFilter>,
) -> Result<MatchDecision> {
    let mut stats = PipelineStats::default();
    let element_count: u64 = inst.sets().iter().map(|s| s.len() as u64).sum();

    let folded = ldt_to_ksum(inst);
    stats.ops += element_count;

    let real = match folded.ring().tag {
        RingTag::Complex | RingTag::ComplexVector => {
            stats.ops += element_count;
            complex_to_real(&folded)?
        }
        _ => folded,
    };

    match real.ring().tag {
        RingTag::Scalar => {
            // No projection was involved, so the reduced instance is exactly
            // equivalent; verification cannot fail.
            let real = clear_denominators(&real);
            let out = run_scalar_solver(&real, opts.strategy, opts.mode, filter)?;
            stats.ops += out.ops;
            let mut solutions = Vec::with_capacity(out.solutions.len());
            for cand in &out.solutions {
                if inst.verify_tuple(&cand.indices)? {
                    solutions.push(source_tuple(inst, &cand.indices));
                } else {
                    stats.rejected_candidates += 1;
                }
            }
            Ok(MatchDecision { solutions, stats })
        }
        RingTag::Vector => {
            let real = clear_denominators(&real);
            let arity = real.ring().arity;
            for attempt in 0..=opts.retry_cap {
                let v = draw_projection(arity, opts.seed.wrapping_add(attempt as u64));
                stats.projections += 1;
                let scalar = project_instance(&real, &v)?;
                stats.ops += element_count;
                let out = run_scalar_solver(&scalar, opts.strategy, opts.mode, filter)?;
                stats.ops += out.ops;

                match opts.mode {
                    SolveMode::Decide => match out.solutions.first() {
                        // Projection never loses solutions, so an empty
                        // scalar answer settles the decision.
                        None => return Ok(MatchDecision { solutions: Vec::new(), stats }),
                        Some(cand) => {
                            if inst.verify_tuple(&cand.indices)? {
                                return Ok(MatchDecision {
                                    solutions: vec![source_tuple(inst, &cand.indices)],
                                    stats,
                                });
                            }
                            stats.rejected_candidates += 1;
                        }
                    },
                    SolveMode::Enumerate => {
                        // Every true solution appears among the scalar
                        // solutions; exact verification filters the rest.
                        let mut solutions = Vec::new();
                        for cand in &out.solutions {
                            if inst.verify_tuple(&cand.indices)? {
                                solutions.push(source_tuple(inst, &cand.indices));
                            } else {
                                stats.rejected_candidates += 1;
                            }
                        }
                        return Ok(MatchDecision { solutions, stats });
                    }
                }
            }

            // Retries exhausted: solve the vector instance directly by
            // hashing canonical forms. Exact, no projection involved.
            stats.fallback_used = true;
            let out = solve_mitm(&real, opts.mode, filter)?;
            stats.ops += out.ops;
            let mut solutions = Vec::with_capacity(out.solutions.len());
            for cand in &out.solutions {
                if inst.verify_tuple(&cand.indices)? {
                    solutions.push(source_tuple(inst, &cand.indices));
                } else {
                    stats.rejected_candidates += 1;
                }
            }
            Ok(MatchDecision { solutions, stats })
        }
        RingTag::Complex | RingTag::ComplexVector => {
            unreachable!("complex rings were flattened above")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rational_int, RingElement};

    fn scalars(xs: &[i64]) -> Vec<RingElement> {
        xs.iter().map(|&x| RingElement::scalar_i64(x)).collect()
    }

    fn vecs(xs: &[[i64; 2]]) -> Vec<RingElement> {
        xs.iter()
            .map(|p| RingElement::Vector(vec![rational_int(p[0]), rational_int(p[1])]))
            .collect()
    }

    #[test]
    fn scalar_pipeline_matches_bruteforce() {
        let inst = LdtInstance::new(
            scalars(&[1, 2, -1, 1]),
            vec![scalars(&[1, 2]), scalars(&[3]), scalars(&[0])],
        )
        .unwrap();
        let dec = solve(&inst, &SolveOptions::default(), None).unwrap();
        assert!(dec.found());
        assert_eq!(dec.solutions[0].indices, vec![0, 0, 0]);
    }

    #[test]
    fn vector_pipeline_decides_planted_instance() {
        let ks = KSumInstance::new(vec![
            vecs(&[[1, 2], [5, 5]]),
            vecs(&[[3, 4], [9, 9]]),
            vecs(&[[-4, -6], [1, 1]]),
        ])
        .unwrap();
        let inst = LdtInstance::from_ksum(&ks);
        let dec = solve(&inst, &SolveOptions::default(), None).unwrap();
        assert!(dec.found());
        assert_eq!(dec.solutions[0].indices, vec![0, 0, 0]);
        assert!(dec.stats.projections >= 1);
    }

    #[test]
    fn no_solution_is_never_reported_as_yes() {
        let ks = KSumInstance::new(vec![
            vecs(&[[1, 0], [2, 1]]),
            vecs(&[[0, 1], [1, 3]]),
            vecs(&[[5, 5], [7, 8]]),
        ])
        .unwrap();
        let inst = LdtInstance::from_ksum(&ks);
        for seed in 0..20 {
            let opts = SolveOptions { seed, ..Default::default() };
            let dec = solve(&inst, &opts, None).unwrap();
            assert!(!dec.found());
        }
    }

    #[test]
    fn enumerate_is_exact_on_vector_instances() {
        // two true solutions, indices (0,0,0) and (1,1,0)
        let ks = KSumInstance::new(vec![
            vecs(&[[1, 2], [3, 3]]),
            vecs(&[[-1, -2], [-3, -3]]),
            vecs(&[[0, 0], [9, 9]]),
        ])
        .unwrap();
        let inst = LdtInstance::from_ksum(&ks);
        let opts = SolveOptions { mode: SolveMode::Enumerate, ..Default::default() };
        let dec = solve(&inst, &opts, None).unwrap();
        assert_eq!(dec.index_sets(), vec![vec![0, 0, 0], vec![1, 1, 0]]);
    }

    #[test]
    fn all_strategies_agree() {
        let ks = KSumInstance::new(vec![
            scalars(&[4, -1, 3]),
            scalars(&[2, 8, -3]),
            scalars(&[-1, 0, 5]),
        ])
        .unwrap();
        let inst = LdtInstance::from_ksum(&ks);
        let mut decisions = Vec::new();
        for strategy in [Strategy::Auto, Strategy::BruteForce, Strategy::Mitm, Strategy::Quad3Sum]
        {
            let opts = SolveOptions {
                strategy,
                mode: SolveMode::Enumerate,
                ..Default::default()
            };
            decisions.push(solve(&inst, &opts, None).unwrap().index_sets());
        }
        for d in &decisions[1..] {
            assert_eq!(&decisions[0], d);
        }
    }
}
