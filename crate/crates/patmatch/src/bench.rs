//! Benchmark suites measuring instrumented operation counts (and wall time)
//! across input sizes, with a log-log slope fit per suite. Operation counts
//! are deterministic for a fixed seed; wall times are not.
//!
//! The float backend lives here and only here: a tolerance-based two-pointer
//! 3SUM over `f64`, used to compare raw throughput against the exact
//! backend. Zero-testing float sums is unsound for exact matching, so no
//! correctness path ever touches it.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators;
use crate::geom::{search_similar, OrientationPolicy, SearchOptions};
use crate::ksum::{solve_3sum_quadratic, solve_mitm, KSumInstance, SolveMode};
use crate::numeric::{FloatBackendPolicy, Rational, RingElement};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub suite: String,
    pub n: usize,
    pub wall_ns: u128,
    pub ops: u64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln ops` against `ln n`.
    pub slope_ops: f64,
}

impl BenchReport {
    /// CSV with one `sample` row per size and a trailing `slope` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("record,suite,n,wall_ns,ops\n");
        for row in &self.rows {
            out.push_str(&format!(
                "sample,{},{},{},{}\n",
                row.suite, row.n, row.wall_ns, row.ops
            ));
        }
        if let Some(first) = self.rows.first() {
            out.push_str(&format!("slope,{},,,{:.4}\n", first.suite, self.slope_ops));
        }
        out
    }
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn log_log_slope(points: &[(usize, u64)]) -> f64 {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0 && y > 0)
        .map(|&(x, y)| ((x as f64).ln(), (y as f64).ln()))
        .collect();
    if data.len() < 2 {
        return f64::NAN;
    }
    let n = data.len() as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / n;
    let my = data.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = data.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Scalar sets of positive random integers: no zero-sum tuple exists, so
/// decide-mode solvers perform their full deterministic scan.
fn positive_scalar_instance(k: usize, n: usize, seed: u64) -> KSumInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<Vec<RingElement>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| RingElement::scalar_i64(rng.gen_range(1..=1_000_000)))
                .collect()
        })
        .collect();
    KSumInstance::new(sets).expect("well-formed")
}

/// Quadratic 3SUM over exact rationals, or over `f64` when a float policy
/// is given.
pub fn run_3sum_suite(
    sizes: &[usize],
    seed: u64,
    float: Option<FloatBackendPolicy>,
) -> Result<BenchReport> {
    let suite = if float.is_some() { "3sum_float" } else { "3sum" };
    let mut rows = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let inst = positive_scalar_instance(3, n, seed.wrapping_add(i as u64));
        let start = Instant::now();
        let ops = match float {
            None => {
                let out = solve_3sum_quadratic(&inst, SolveMode::Decide, None)?;
                assert!(!out.found(), "positive sets cannot sum to zero");
                out.ops
            }
            Some(policy) => {
                let (found, ops) = three_sum_f64(&inst, policy);
                assert!(!found, "positive sets cannot sum to zero");
                ops
            }
        };
        rows.push(BenchRow { suite: suite.into(), n, wall_ns: start.elapsed().as_nanos(), ops });
    }
    let slope_ops = log_log_slope(&rows.iter().map(|r| (r.n, r.ops)).collect::<Vec<_>>());
    Ok(BenchReport { rows, slope_ops })
}

/// Meet-in-the-middle for a fixed k.
pub fn run_mitm_suite(k: usize, sizes: &[usize], seed: u64) -> Result<BenchReport> {
    if k < 3 {
        return Err(Error::BadInstance("mitm suite needs k >= 3".into()));
    }
    let suite = format!("mitm_k{k}");
    let mut rows = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let inst = positive_scalar_instance(k, n, seed.wrapping_add(i as u64));
        let start = Instant::now();
        let out = solve_mitm(&inst, SolveMode::Decide, None)?;
        assert!(!out.found(), "positive sets cannot sum to zero");
        rows.push(BenchRow {
            suite: suite.clone(),
            n,
            wall_ns: start.elapsed().as_nanos(),
            ops: out.ops,
        });
    }
    let slope_ops = log_log_slope(&rows.iter().map(|r| (r.n, r.ops)).collect::<Vec<_>>());
    Ok(BenchReport { rows, slope_ops })
}

/// Full similarity pipeline (k = 3) on match-free random scenes, measuring
/// the reduction plus the scalar solver.
pub fn run_pipeline_suite(sizes: &[usize], seed: u64) -> Result<BenchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pattern = generators::random_similarity_pattern(&mut rng, 3);
    let mut rows = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        // a huge coordinate range makes accidental matches implausible, so
        // the solver performs its full scan
        let scene = generators::random_scene(2, n, 1 << 30, seed.wrapping_add(1 + i as u64))?;
        let opts = SearchOptions {
            orientation: OrientationPolicy::DirectOnly,
            seed,
            ..Default::default()
        };
        let start = Instant::now();
        let outcome = search_similar(&pattern, &scene, &opts)?;
        rows.push(BenchRow {
            suite: "pipeline_sim_k3".into(),
            n,
            wall_ns: start.elapsed().as_nanos(),
            ops: outcome.stats.ops,
        });
    }
    let slope_ops = log_log_slope(&rows.iter().map(|r| (r.n, r.ops)).collect::<Vec<_>>());
    Ok(BenchReport { rows, slope_ops })
}

/// Two-pointer 3SUM on `f64` values with tolerance-based comparisons.
fn three_sum_f64(inst: &KSumInstance, policy: FloatBackendPolicy) -> (bool, u64) {
    let to_f64 = |set: &[RingElement]| -> Vec<f64> {
        let mut v: Vec<f64> = set
            .iter()
            .map(|e| match e {
                RingElement::Scalar(x) => rational_to_f64(x),
                _ => unreachable!("bench instances are scalar"),
            })
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let a = to_f64(&inst.sets()[0]);
    let b = to_f64(&inst.sets()[1]);
    let c = to_f64(&inst.sets()[2]);
    let eps = policy.epsilon;
    let mut ops = 0u64;
    for &x in &a {
        let target = -x;
        let (mut j, mut l) = (0usize, c.len());
        while j < b.len() && l > 0 {
            ops += 1;
            let sum = b[j] + c[l - 1];
            if (sum - target).abs() <= eps {
                return (true, ops);
            }
            if sum < target {
                j += 1;
            } else {
                l -= 1;
            }
        }
    }
    (false, ops)
}

fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
