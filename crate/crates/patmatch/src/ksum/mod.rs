//! k-SUM and linear degeneracy testing: instance types, the reductions
//! between them, exhaustive and fast solvers, and the verified randomized
//! pipeline that ties them together.

mod instance;
mod pipeline;
mod reductions;
mod solvers;

pub use instance::{KSumInstance, LdtInstance, SolutionTuple};
pub use pipeline::{solve, MatchDecision, PipelineStats, SolveOptions, Strategy};
pub use reductions::{
    clear_denominators, complex_to_real, draw_projection, ldt_to_ksum, project_instance,
    ProjectionVector,
};
pub use solvers::{
    solve_3sum_quadratic, solve_bruteforce, solve_mitm, IndexFilter, SolveMode, SolverOutput,
    DEFAULT_TUPLE_BUDGET,
};

pub(crate) use solvers::for_each_tuple;
