//! `jigsaw` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 malformed input, 3 undetermined
//! verdict (`unique` only), 4 a check came out negative (`verify` on an
//! invalid witness, `poly --check-lemma1` with violations).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use jigsaw::certificates::certify;
use jigsaw::configs::{
    build_patch, config_constants, estimate_patch_validity, hole_border_exponent,
    indentation_bound, parse_epsilon, prop1_exact, prop2_bound, PatchKind, PatchParams,
};
use jigsaw::exec::Execution;
use jigsaw::harness::{run_sweep_with, write_csv, Mode, SweepSpec, DEFAULT_NODE_BUDGET};
use jigsaw::polyomino::{corner_census, enumerate_fixed_polyominoes, side_corner_census, RectSide};
use jigsaw::puzzle::{generate_puzzle, pieces_of, read_puzzle, write_puzzle, GridColoring};
use jigsaw::solver::{
    count_valid, decide_unique, read_witness, verify_assembly, write_witness, SolutionCount,
    UniquenessVerdict,
};

#[derive(Parser)]
#[command(
    name = "jigsaw",
    version,
    about = "Random jigsaw puzzles: generate, solve, certify, sweep"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Certificate,
    Auto,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Certificate => Mode::Certificate,
            ModeArg::Auto => Mode::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PatchArg {
    Straightline,
    Convexcorners,
    Hole,
    Indentation,
    Subsquare,
    Swappair,
}

impl From<PatchArg> for PatchKind {
    fn from(p: PatchArg) -> PatchKind {
        match p {
            PatchArg::Straightline => PatchKind::StraightLine,
            PatchArg::Convexcorners => PatchKind::ConvexCorners,
            PatchArg::Hole => PatchKind::Hole,
            PatchArg::Indentation => PatchKind::Indentation,
            PatchArg::Subsquare => PatchKind::Subsquare,
            PatchArg::Swappair => PatchKind::SwapPair,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random puzzle.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count valid assemblies of a puzzle.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Stop counting after this many.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Check a witness assembly against a puzzle.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Look for a non-uniqueness certificate.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide whether a puzzle has a unique reconstruction.
    Unique {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Search node budget.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Run a seeded sweep over (n, q) and write CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u32>,
        #[arg(long)]
        trials: u64,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
        /// Fill the mean_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Enumerate fixed polyominoes and check border corner balance.
    Poly {
        #[arg(long)]
        enumerate: usize,
        #[arg(long)]
        check_lemma1: bool,
    },
    /// Build a configuration patch and compare its bounds with simulation.
    Patch {
        #[arg(long = "type", value_enum)]
        kind: PatchArg,
        /// Row length, corner count or square side, by type.
        #[arg(long, default_value_t = 3)]
        length: usize,
        #[arg(long, default_value_t = 2)]
        width: usize,
        #[arg(long, default_value_t = 2)]
        height: usize,
        /// Enclosed sides for an indentation (2 or 3).
        #[arg(long, default_value_t = 3)]
        sides: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        q: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat every new edge as ordered.
        #[arg(long)]
        all_ordered: bool,
    },
    /// Print the configuration constants for an epsilon such as 0.2.
    Constants {
        #[arg(long)]
        epsilon: String,
    },
}

/// An error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn usage_error(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

fn read_grid(path: &Path) -> Result<GridColoring, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input_error)?;
    read_puzzle(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(input_error)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(input_error),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout")
            .map_err(input_error),
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen { n, q, seed, out } => {
            let gc = generate_puzzle(n, q, seed).map_err(|e| usage_error(e.into()))?;
            emit(&out, &write_puzzle(&gc))?;
        }
        Command::Solve { input, limit } => {
            let gc = read_grid(&input)?;
            let count = count_valid(&pieces_of(&gc), gc.n(), limit.unwrap_or(u64::MAX))
                .map_err(|e| input_error(e.into()))?;
            match count {
                SolutionCount::Exact(c) => println!("{c}"),
                SolutionCount::AtLeast(c) => println!(">={c}"),
            }
        }
        Command::Verify { input, witness } => {
            let gc = read_grid(&input)?;
            let text = fs::read_to_string(&witness)
                .with_context(|| format!("reading {}", witness.display()))
                .map_err(input_error)?;
            let asm = read_witness(&text).map_err(|e| input_error(e.into()))?;
            let ok = verify_assembly(&pieces_of(&gc), &asm).map_err(|e| input_error(e.into()))?;
            println!("{}", if ok { "VALID" } else { "INVALID" });
            return Ok(if ok { 0 } else { 4 });
        }
        Command::Certify { input } => {
            let gc = read_grid(&input)?;
            match certify(&gc) {
                Some((cert, witness)) => {
                    println!("{cert}");
                    print!("{}", write_witness(&witness));
                }
                None => println!("NONE"),
            }
        }
        Command::Unique {
            input,
            mode,
            budget,
        } => {
            let gc = read_grid(&input)?;
            let mode = Mode::from(mode);
            let certified = if mode == Mode::Exact || gc.n() == 1 {
                None
            } else {
                certify(&gc)
            };
            let verdict = match (mode, certified) {
                (_, Some((_, w))) => UniquenessVerdict::NonUnique(w),
                (Mode::Certificate, None) if gc.n() > 1 => {
                    UniquenessVerdict::Undetermined { nodes: 0 }
                }
                _ => decide_unique(&gc, budget),
            };
            match verdict {
                UniquenessVerdict::Unique => println!("UNIQUE"),
                UniquenessVerdict::NonUnique(w) => {
                    println!("NONUNIQUE");
                    print!("{}", write_witness(&w));
                }
                UniquenessVerdict::Undetermined { nodes } => {
                    println!("UNDETERMINED after {nodes} nodes");
                    return Ok(3);
                }
            }
        }
        Command::Sweep {
            n,
            q,
            trials,
            mode,
            seed,
            out,
            budget,
            serial,
            timing,
        } => {
            let mut spec = SweepSpec::new(n, q, trials, mode.into(), seed);
            spec.node_budget = budget;
            spec.record_timing = timing;
            let exec = if serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            let rows = run_sweep_with(&spec, exec).map_err(|e| usage_error(e.into()))?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).map_err(|e| input_error(e.into()))?;
            emit(&out, &String::from_utf8_lossy(&buf))?;
        }
        Command::Poly {
            enumerate,
            check_lemma1,
        } => {
            let levels =
                enumerate_fixed_polyominoes(enumerate).map_err(|e| usage_error(e.into()))?;
            let mut violations = 0;
            for (k, level) in levels.iter().enumerate() {
                let mut bad = 0;
                if check_lemma1 {
                    for p in level {
                        let sides_ok = RectSide::ALL.iter().all(|&s| {
                            let (a, b) = side_corner_census(p, s);
                            a == b
                        });
                        if corner_census(p).difference() != 4 || !sides_ok {
                            bad += 1;
                        }
                    }
                    println!(
                        "size {}: {} polyominoes, {bad} violations",
                        k + 1,
                        level.len()
                    );
                } else {
                    println!("size {}: {} polyominoes", k + 1, level.len());
                }
                violations += bad;
            }
            if violations > 0 {
                return Ok(4);
            }
        }
        Command::Patch {
            kind,
            length,
            width,
            height,
            sides,
            m,
            q,
            trials,
            seed,
            all_ordered,
        } => {
            let kind = PatchKind::from(kind);
            let params = PatchParams {
                length,
                width,
                height,
                sides,
                m,
                ..Default::default()
            };
            let mut patch = build_patch(kind, &params).map_err(|e| usage_error(e.into()))?;
            if all_ordered {
                patch = patch.with_all_new_edges_ordered();
            }
            println!("type {kind}");
            println!("pieces {}", patch.pieces.len());
            println!("new_edges {}", patch.new_edges().count());
            println!("s_u_edges {}", patch.border_count());
            let ordered = patch.ordering.as_ref().map_or(0, Vec::len);
            match prop1_exact(&patch, q) {
                Ok(p) => println!("ordered_edges {ordered} exact {p:.6e}"),
                Err(e) => println!("ordered_edges {ordered} rejected: {e}"),
            }
            match prop2_bound(&patch.deferred_knowledge(), q) {
                Ok(b) => println!("deferred_edges {} bound {b:.6e}", patch.deferred.len()),
                Err(e) => println!("deferred_edges {} rejected: {e}", patch.deferred.len()),
            }
            if let Ok(b) = hole_border_exponent(&patch, q) {
                println!("hole_bound {b:.6e}");
            }
            if let Ok(b) = indentation_bound(&patch, q) {
                println!("indentation_bound {b:.6e}");
            }
            let e = estimate_patch_validity(&patch, q, trials, seed, Execution::Parallel)
                .map_err(|e| usage_error(e.into()))?;
            println!("estimate {:.6} se {:.6} trials {}", e.p, e.se, e.trials);
        }
        Command::Constants { epsilon } => {
            let c = parse_epsilon(&epsilon)
                .and_then(config_constants)
                .map_err(|e| usage_error(e.into()))?;
            println!("epsilon {}", c.epsilon);
            println!("ell {}", c.ell);
            println!("s {}", c.s);
            println!("K {}", c.k);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
