//! Command-line front end. Non-interactive: every command reads files or
//! flags, writes JSON or CSV, and exits 0 (match / success), 1 (no match /
//! failed checks), or 2 (input error).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::files;
use crate::generators;
use crate::geom::{
    search_affine, search_similar, MatchReport, OrientationPolicy, Pattern, PatternKind, Scene,
    SearchOptions,
};
use crate::ksum::{solve, SolveMode, SolveOptions, Strategy};
use crate::numeric::FloatBackendPolicy;
use crate::{bench, selftest};

#[derive(Parser)]
#[command(
    name = "patmatch",
    version,
    about = "Exact geometric pattern matching via reductions to k-SUM"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a plane scene for a similar copy of a pattern
    Similarity(MatchArgs),
    /// Search a d-space scene for an affine image of a pattern
    Affine(MatchArgs),
    /// Solve a k-SUM or LDT instance file
    Ksum(KsumArgs),
    /// Measure operation counts across input sizes and fit log-log slopes
    Bench(BenchArgs),
    /// Generate scenes and pattern/scene pairs
    Gen(GenArgs),
    /// Run the core soundness checks at reduced scale
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct MatchArgs {
    /// Pattern file: {"d": ..., "points": [[...], ...]}
    pattern: PathBuf,
    /// Scene file: same format as the pattern file
    scene: PathBuf,
    /// Orientations to search (similarity only): direct | mirrored | both
    #[arg(long, default_value = "both")]
    orientation: String,
    /// Scalar solver: auto | brute | mitm | quad3sum
    #[arg(long, default_value = "auto")]
    strategy: String,
    /// Seed for the randomized projection
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report every match instead of stopping at the first
    #[arg(long)]
    enumerate: bool,
    /// Drop duplicate scene points before matching; reported indices still
    /// refer to the original file
    #[arg(long)]
    dedup: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KsumArgs {
    /// Instance file: {"k", "ring", "beta"?, "sets"}
    instance: PathBuf,
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    enumerate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite: 3sum | mitm | pipeline
    suite: String,
    /// Comma-separated input sizes (defaults per suite)
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tuple width for the mitm suite
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Run the 3sum suite on the f64 backend with this zero tolerance
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// The m^d grid scene {1..m}^d
    Lattice {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n i.i.d. random rational points
    Random {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        range: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random pattern plus a scene containing its image under a random
    /// similarity, padded with decoys
    PlantedSimilarity {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        mirrored: bool,
        #[arg(long)]
        out_pattern: Option<PathBuf>,
        #[arg(long)]
        out_scene: Option<PathBuf>,
    },
    /// Random pattern plus a scene containing its image under a random
    /// invertible affine map, padded with decoys
    PlantedAffine {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_pattern: Option<PathBuf>,
        #[arg(long)]
        out_scene: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses arguments from the process environment and runs one command.
/// Returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Similarity(args) => run_match(args, PatternKind::Similarity),
        Command::Affine(args) => run_match(args, PatternKind::Affine),
        Command::Ksum(args) => run_ksum(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args.kind),
        Command::Selftest(args) => {
            let (lines, ok) = selftest::run(args.seed);
            for line in lines {
                println!("{line}");
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    Strategy::parse(s)
        .ok_or_else(|| Error::BadInstance(format!("unknown strategy {s:?}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    emit(out, &text)
}

fn run_match(args: MatchArgs, kind: PatternKind) -> Result<i32> {
    let (pd, ppoints) = files::points_from_json(&files::read_json_file(&args.pattern)?)?;
    let pattern = match kind {
        PatternKind::Similarity => {
            if pd != 2 {
                return Err(Error::BadPattern(format!(
                    "similarity patterns live in the plane, file says d = {pd}"
                )));
            }
            Pattern::similarity(ppoints)?
        }
        PatternKind::Affine => Pattern::affine(pd, ppoints)?,
    };
    let (sd, spoints) = files::points_from_json(&files::read_json_file(&args.scene)?)?;
    let scene_full = Scene::new(sd, spoints)?;
    let orientation = OrientationPolicy::parse(&args.orientation)
        .ok_or_else(|| Error::BadInstance(format!("unknown orientation {:?}", args.orientation)))?;
    let opts = SearchOptions {
        orientation,
        strategy: parse_strategy(&args.strategy)?,
        seed: args.seed,
        mode: if args.enumerate { SolveMode::Enumerate } else { SolveMode::Decide },
        retry_cap: 3,
    };

    let (scene, back): (Scene, Option<Vec<usize>>) = if args.dedup {
        let (s, back) = scene_full.dedup();
        (s, Some(back))
    } else {
        (scene_full, None)
    };

    let outcome = match kind {
        PatternKind::Similarity => search_similar(&pattern, &scene, &opts)?,
        PatternKind::Affine => search_affine(&pattern, &scene, &opts)?,
    };
    let mut reports = outcome.reports;
    if let Some(back) = back {
        for r in &mut reports {
            for idx in &mut r.indices {
                *idx = back[*idx];
            }
        }
    }
    report_result(&reports, args.enumerate, args.out.as_deref())
}

fn report_result(reports: &[MatchReport], enumerate: bool, out: Option<&Path>) -> Result<i32> {
    if reports.is_empty() {
        emit_json(out, &files::no_match_json())?;
        return Ok(1);
    }
    let v = if enumerate {
        files::reports_to_json(reports)
    } else {
        files::report_to_json(&reports[0])
    };
    emit_json(out, &v)?;
    Ok(0)
}

fn run_ksum(args: KsumArgs) -> Result<i32> {
    let inst = files::instance_from_json(&files::read_json_file(&args.instance)?)?;
    let opts = SolveOptions {
        strategy: parse_strategy(&args.strategy)?,
        mode: if args.enumerate { SolveMode::Enumerate } else { SolveMode::Decide },
        seed: args.seed,
        retry_cap: 3,
    };
    let decision = solve(&inst, &opts, None)?;
    let found = decision.found();
    let v = if args.enumerate {
        json!({
            "match": found,
            "solutions": decision.index_sets(),
        })
    } else {
        match decision.solutions.first() {
            Some(t) => json!({"match": true, "indices": t.indices}),
            None => files::no_match_json(),
        }
    };
    emit_json(args.out.as_deref(), &v)?;
    Ok(if found { 0 } else { 1 })
}

fn run_bench(args: BenchArgs) -> Result<i32> {
    let report = match args.suite.as_str() {
        "3sum" => {
            let sizes = default_sizes(&args.sizes, &[500, 1000, 2000, 4000]);
            let policy = args.epsilon.map(FloatBackendPolicy::new).transpose()?;
            bench::run_3sum_suite(&sizes, args.seed, policy)?
        }
        "mitm" => {
            let fallback: &[usize] =
                if args.k >= 5 { &[12, 24, 48] } else { &[50, 100, 200, 400] };
            let sizes = default_sizes(&args.sizes, fallback);
            bench::run_mitm_suite(args.k, &sizes, args.seed)?
        }
        "pipeline" => {
            let sizes = default_sizes(&args.sizes, &[250, 500, 1000, 2000]);
            bench::run_pipeline_suite(&sizes, args.seed)?
        }
        other => {
            return Err(Error::BadInstance(format!(
                "unknown bench suite {other:?}; expected 3sum | mitm | pipeline"
            )))
        }
    };
    emit(args.out.as_deref(), &report.to_csv())?;
    Ok(0)
}

fn default_sizes(given: &[usize], fallback: &[usize]) -> Vec<usize> {
    if given.is_empty() {
        fallback.to_vec()
    } else {
        given.to_vec()
    }
}

fn run_gen(kind: GenKind) -> Result<i32> {
    match kind {
        GenKind::Lattice { d, m, out } => {
            let scene = generators::lattice(d, m)?;
            emit_json(out.as_deref(), &files::scene_to_json(&scene))?;
        }
        GenKind::Random { d, n, range, seed, out } => {
            let scene = generators::random_scene(d, n, range, seed)?;
            emit_json(out.as_deref(), &files::scene_to_json(&scene))?;
        }
        GenKind::PlantedSimilarity { k, n, seed, mirrored, out_pattern, out_scene } => {
            let mut rng = seeded(seed);
            let pattern = generators::random_similarity_pattern(&mut rng, k);
            let (w, z) = generators::random_similarity_transform(&mut rng);
            let planted = generators::planted_similarity(&pattern, n, &w, &z, mirrored, seed)?;
            emit_pair(&pattern, &planted, out_pattern.as_deref(), out_scene.as_deref())?;
        }
        GenKind::PlantedAffine { d, k, n, seed, out_pattern, out_scene } => {
            let mut rng = seeded(seed);
            let pattern = generators::random_affine_pattern(&mut rng, d, k);
            let (f, t) = generators::random_affine_transform(&mut rng, d, true);
            let planted = generators::planted_affine(&pattern, n, &f, &t, seed)?;
            emit_pair(&pattern, &planted, out_pattern.as_deref(), out_scene.as_deref())?;
        }
    }
    Ok(0)
}

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand_chacha::rand_core::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

fn emit_pair(
    pattern: &Pattern,
    planted: &generators::PlantedScene,
    out_pattern: Option<&Path>,
    out_scene: Option<&Path>,
) -> Result<()> {
    if planted.degenerate {
        eprintln!("warning: the planted images are not pairwise distinct; no match can pass the distinctness filter");
    }
    let pattern_json = files::points_to_json(pattern.dim(), pattern.points());
    let scene_json = files::scene_to_json(&planted.scene);
    match (out_pattern, out_scene) {
        (None, None) => {
            let bundle = json!({"pattern": pattern_json, "scene": scene_json});
            emit_json(None, &bundle)?;
        }
        (p, s) => {
            match p {
                Some(path) => emit_json(Some(path), &pattern_json)?,
                None => emit_json(None, &pattern_json)?,
            }
            match s {
                Some(path) => emit_json(Some(path), &scene_json)?,
                None => emit_json(None, &scene_json)?,
            }
        }
    }
    Ok(())
}
