//! k-SUM solvers: an exhaustive scan used as the oracle everywhere, the
//! classical quadratic two-pointer algorithm for k = 3, and the folklore
//! meet-in-the-middle search for general k. All solvers report witnesses as
//! index tuples into the instance sets and carry an instrumented operation
//! count for empirical complexity measurements.

use std::collections::HashMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ksum::instance::{KSumInstance, SolutionTuple};
use crate::numeric::{Rational, RingElement, RingTag};

/// Magnitude cap for the narrow integer lane: sums of up to 32 entries of
/// this size stay inside `i128`.
const NARROW_BOUND: i128 = 1 << 122;

/// Views a scalar instance as plain `i128` values when every element is an
/// integer small enough that no partial sum can overflow. The narrow lane
/// runs the same algorithms on machine integers; which lane runs is a pure
/// function of the instance, and both produce identical output.
fn narrow_view(inst: &KSumInstance) -> Option<Vec<Vec<i128>>> {
    if inst.ring().tag != RingTag::Scalar {
        return None;
    }
    inst.sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|e| match e {
                    RingElement::Scalar(x) => {
                        if !x.denom().is_one() {
                            return None;
                        }
                        let v: i128 = x.numer().try_into().ok()?;
                        (v.abs() <= NARROW_BOUND).then_some(v)
                    }
                    _ => None,
                })
                .collect()
        })
        .collect()
}

/// Default cap on exhaustive tuple scans, overridable via `PATMATCH_BUDGET`.
pub const DEFAULT_TUPLE_BUDGET: u64 = 100_000_000;

/// Reads the brute-force tuple budget from the environment, if set.
pub fn tuple_budget() -> u64 {
    std::env::var("PATMATCH_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_TUPLE_BUDGET)
}

/// Whether a solver stops at the first verified tuple or collects them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Decide,
    Enumerate,
}

/// Predicate on candidate index tuples. Geometric callers use it to exclude
/// tuples that revisit a scene point; pure k-SUM callers pass `None`.
pub type IndexFilter<'a> = &'a (dyn Fn(&[usize]) -> bool + Sync);

/// Solver result: witnesses in lexicographic index order (at most one in
/// decide mode) plus the instrumented operation count.
#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub solutions: Vec<SolutionTuple>,
    pub ops: u64,
}

impl SolverOutput {
    pub fn found(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.solutions.iter().map(|s| s.indices.clone()).collect()
    }
}

fn passes(filter: Option<IndexFilter>, indices: &[usize]) -> bool {
    filter.map_or(true, |f| f(indices))
}

/// Visits every index tuple of the product of `sizes` in lexicographic
/// order. Returns `false` if the visitor aborted the scan.
pub(crate) fn for_each_tuple(sizes: &[usize], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if sizes.iter().any(|&n| n == 0) {
        return true;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        if !visit(&idx) {
            return false;
        }
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Exhaustive scan of the full tuple product. The reference answer for every
/// other solver; refuses instances whose product exceeds the budget.
pub fn solve_bruteforce(
    inst: &KSumInstance,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> Result<SolverOutput> {
    let sizes: Vec<usize> = inst.sets().iter().map(Vec::len).collect();
    let budget = tuple_budget();
    let needed: u128 = sizes.iter().map(|&n| n as u128).product();
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut ops = 0u64;
    let mut solutions = Vec::new();
    for_each_tuple(&sizes, |idx| {
        ops += 1;
        if passes(filter, idx) && inst.sum_at(idx).expect("index in range").is_zero() {
            solutions.push(SolutionTuple::new(idx.to_vec(), inst.witness(idx)));
            if mode == SolveMode::Decide {
                return false;
            }
        }
        true
    });
    Ok(SolverOutput { solutions, ops })
}

/// Classical quadratic 3SUM: sort the last two sets, then for each element
/// of the first set run a two-pointer scan for a pair with the complementary
/// sum. Runs of equal values are expanded so enumerate mode reports every
/// solution exactly once.
pub fn solve_3sum_quadratic(
    inst: &KSumInstance,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> Result<SolverOutput> {
    if inst.k() != 3 {
        return Err(Error::SolverMisuse(format!(
            "quadratic 3SUM requires k = 3, got k = {}",
            inst.k()
        )));
    }
    if inst.ring().tag != RingTag::Scalar {
        return Err(Error::SolverMisuse(format!(
            "quadratic 3SUM requires a scalar ring, got {}",
            inst.ring()
        )));
    }
    let (index_tuples, ops) = match narrow_view(inst) {
        Some(sets) => two_pointer_scan(&sets[0], &sets[1], &sets[2], mode, filter),
        None => {
            let wide: Vec<Vec<Rational>> = inst
                .sets()
                .iter()
                .map(|set| {
                    set.iter()
                        .map(|e| match e {
                            RingElement::Scalar(x) => x.clone(),
                            _ => unreachable!("ring checked above"),
                        })
                        .collect()
                })
                .collect();
            two_pointer_scan(&wide[0], &wide[1], &wide[2], mode, filter)
        }
    };
    let mut solutions: Vec<SolutionTuple> = index_tuples
        .into_iter()
        .map(|idx| SolutionTuple::new(idx.clone(), inst.witness(&idx)))
        .collect();
    solutions.sort_by(|x, y| x.indices.cmp(&y.indices));
    Ok(SolverOutput { solutions, ops })
}

/// Numeric domain a solver can scan: ordered, with exact addition and
/// negation. `i128` is the narrow lane; rationals are the general one.
trait ScanValue: Ord + Clone {
    fn sum(a: &Self, b: &Self) -> Self;
    fn negate(a: &Self) -> Self;
}

impl ScanValue for i128 {
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn negate(a: &Self) -> Self {
        -a
    }
}

impl ScanValue for Rational {
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn negate(a: &Self) -> Self {
        -a
    }
}

fn two_pointer_scan<V: ScanValue>(
    set_a: &[V],
    set_b: &[V],
    set_c: &[V],
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> (Vec<Vec<usize>>, u64) {
    let sort = |set: &[V]| -> Vec<(V, usize)> {
        let mut v: Vec<(V, usize)> = set.iter().cloned().zip(0..).collect();
        v.sort();
        v
    };
    let b = sort(set_b);
    let c = sort(set_c);
    let mut ops = 0u64;
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    'outer: for (ia, a) in set_a.iter().enumerate() {
        let target = V::negate(a);
        let (mut j, mut l) = (0usize, c.len());
        while j < b.len() && l > 0 {
            ops += 1;
            let sum = V::sum(&b[j].0, &c[l - 1].0);
            match sum.cmp(&target) {
                std::cmp::Ordering::Less => j += 1,
                std::cmp::Ordering::Greater => l -= 1,
                std::cmp::Ordering::Equal => {
                    // expand the runs of equal values on both sides
                    let jr = j + b[j..].iter().take_while(|(v, _)| *v == b[j].0).count();
                    let ll = (0..l).rev().take_while(|&i| c[i].0 == c[l - 1].0).count();
                    for (_, ib) in &b[j..jr] {
                        for (_, ic) in &c[l - ll..l] {
                            ops += 1;
                            let idx = [ia, *ib, *ic];
                            if passes(filter, &idx) {
                                solutions.push(idx.to_vec());
                                if mode == SolveMode::Decide {
                                    break 'outer;
                                }
                            }
                        }
                    }
                    j = jr;
                    l -= ll;
                }
            }
        }
    }
    (solutions, ops)
}

/// Visits every index tuple of the product of `sets` together with the sum
/// of the selected elements, sharing prefix sums across the enumeration.
/// Returns `false` if the visitor aborted.
fn for_each_sum(
    sets: &[Vec<RingElement>],
    zero: &RingElement,
    visit: &mut impl FnMut(&[usize], &RingElement) -> bool,
) -> bool {
    fn rec(
        sets: &[Vec<RingElement>],
        idx: &mut Vec<usize>,
        acc: &RingElement,
        visit: &mut impl FnMut(&[usize], &RingElement) -> bool,
    ) -> bool {
        let pos = idx.len();
        if pos == sets.len() {
            return visit(idx, acc);
        }
        for (j, e) in sets[pos].iter().enumerate() {
            let next = acc.try_add(e).expect("instance invariant: uniform ring");
            idx.push(j);
            let keep_going = rec(sets, idx, &next, visit);
            idx.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    rec(sets, &mut Vec::with_capacity(sets.len()), zero, visit)
}

/// Folklore meet-in-the-middle: enumerate partial sums of the smaller half
/// of the sets into a hash index keyed by the exact canonical sum, then
/// stream partial sums of the larger half probing for the negation. The
/// operation count reports the number of partial sums generated.
pub fn solve_mitm(
    inst: &KSumInstance,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> Result<SolverOutput> {
    let k = inst.k();
    let split = k.div_ceil(2); // probe the first ceil(k/2) sets
    let (index_tuples, ops) = match narrow_view(inst) {
        Some(sets) => mitm_narrow(&sets, split, mode, filter),
        None => mitm_wide(inst, split, mode, filter),
    };
    let mut solutions: Vec<SolutionTuple> = index_tuples
        .into_iter()
        .map(|idx| SolutionTuple::new(idx.clone(), inst.witness(&idx)))
        .collect();
    solutions.sort_by(|x, y| x.indices.cmp(&y.indices));
    Ok(SolverOutput { solutions, ops })
}

fn mitm_wide(
    inst: &KSumInstance,
    split: usize,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> (Vec<Vec<usize>>, u64) {
    let probe_sets = &inst.sets()[..split];
    let build_sets = &inst.sets()[split..];
    let zero = RingElement::zero(inst.ring());
    let mut ops = 0u64;

    let build_count: usize = build_sets.iter().map(Vec::len).product();
    let mut index: HashMap<RingElement, Vec<Vec<usize>>> =
        HashMap::with_capacity(build_count.min(1 << 22));
    for_each_sum(build_sets, &zero, &mut |idx, acc| {
        ops += 1;
        index.entry(acc.clone()).or_default().push(idx.to_vec());
        true
    });

    let mut solutions: Vec<Vec<usize>> = Vec::new();
    for_each_sum(probe_sets, &zero, &mut |idx, acc| {
        ops += 1;
        if let Some(completions) = index.get(&acc.neg()) {
            for rest in completions {
                let mut full = idx.to_vec();
                full.extend_from_slice(rest);
                if passes(filter, &full) {
                    solutions.push(full);
                    if mode == SolveMode::Decide {
                        return false;
                    }
                }
            }
        }
        true
    });
    (solutions, ops)
}

fn mitm_narrow(
    sets: &[Vec<i128>],
    split: usize,
    mode: SolveMode,
    filter: Option<IndexFilter>,
) -> (Vec<Vec<usize>>, u64) {
    let probe_sets = &sets[..split];
    let build_sets = &sets[split..];
    let width = build_sets.len();
    let mut ops = 0u64;

    let build_count: usize = build_sets.iter().map(Vec::len).product();
    // index tuples of the build half are packed flat, `width` entries each
    let mut index: HashMap<i128, Vec<u32>> = HashMap::with_capacity(build_count.min(1 << 22));
    for_each_sum_narrow(build_sets, &mut Vec::new(), 0, &mut |idx, acc| {
        ops += 1;
        let slot = index.entry(acc).or_default();
        slot.extend(idx.iter().map(|&i| i as u32));
        true
    });

    let mut solutions: Vec<Vec<usize>> = Vec::new();
    for_each_sum_narrow(probe_sets, &mut Vec::new(), 0, &mut |idx, acc| {
        ops += 1;
        if let Some(flat) = index.get(&-acc) {
            for rest in flat.chunks_exact(width) {
                let mut full = idx.to_vec();
                full.extend(rest.iter().map(|&i| i as usize));
                if passes(filter, &full) {
                    solutions.push(full);
                    if mode == SolveMode::Decide {
                        return false;
                    }
                }
            }
        }
        true
    });
    (solutions, ops)
}

fn for_each_sum_narrow(
    sets: &[Vec<i128>],
    idx: &mut Vec<usize>,
    acc: i128,
    visit: &mut impl FnMut(&[usize], i128) -> bool,
) -> bool {
    let pos = idx.len();
    if pos == sets.len() {
        return visit(idx, acc);
    }
    for (j, &v) in sets[pos].iter().enumerate() {
        idx.push(j);
        let keep_going = for_each_sum_narrow(sets, idx, acc + v, visit);
        idx.pop();
        if !keep_going {
            return false;
        }
    }
    true
}
