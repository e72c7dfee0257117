//! `hwp`: solve, verify and inspect Hamilton-Waterloo factorizations.
//!
//! Exit codes: 0 success, 1 certificate rejected, 2 refusal (verdict JSON
//! on stdout), 3 oracle instance over the exhaustive bound, 64 bad flags,
//! 65 unreadable or malformed input, 70 internal error, 74 output error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hwp_core::cmn::cmn_matrix;
use hwp_core::oracle::{exhaustive_factorize, OracleConfig, OracleOutcome, DEFAULT_BOUND, DEFAULT_NODE_LIMIT};
use hwp_core::pipeline::solve;
use hwp_core::skolem::{build_skolem, validate_skolem};
use hwp_core::{Certificate, Claim, GraphSpec, HwpError};

const EXIT_REJECTED: u8 = 1;
const EXIT_REFUSED: u8 = 2;
const EXIT_OVER_BOUND: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "hwp", version, about = "Uniform Hamilton-Waterloo factorizations with verifiable certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certificate for HWP(v; M, N; alpha, beta).
    Solve {
        #[arg(long)]
        v: usize,
        #[arg(long = "M", alias = "m")]
        m: usize,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate file.
    Verify { path: PathBuf },
    /// Exhaustive search on a small instance.
    Oracle {
        #[arg(long, value_enum)]
        graph: GraphKind,
        /// Order of a complete graph.
        #[arg(long)]
        v: Option<usize>,
        /// Number and size of the parts of a complete multipartite graph.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        /// Short cycle length; also the cycle length of `C_M[n]`.
        #[arg(long = "M", alias = "m")]
        m: usize,
        /// Expansion factor of `C_M[n]`.
        #[arg(long)]
        n: Option<usize>,
        /// Long cycle length. Defaults to `Mn` for `cm-n` and to `M` otherwise.
        #[arg(long = "N")]
        big_n: Option<usize>,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Print a Skolem sequence of the given order starting at `start`.
    Skolem {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        start: i64,
    },
    /// Dump the difference matrix used for `C_M[n]` with the given split.
    Matrix {
        #[arg(long = "M", alias = "m")]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GraphKind {
    CompleteStar,
    Multipartite,
    CmN,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Solve { v, m, big_n, alpha, beta, out } => cmd_solve(v, m, big_n, alpha, beta, out),
        Command::Verify { path } => cmd_verify(&path),
        Command::Oracle { graph, v, t, w, m, n, big_n, alpha, beta, bound, node_limit } => {
            let spec = match (graph, v, t, w, n) {
                (GraphKind::CompleteStar, Some(v), ..) => GraphSpec::complete_star(v),
                (GraphKind::Multipartite, _, Some(t), Some(w), _) => GraphSpec::multipartite(t, w),
                (GraphKind::CmN, .., Some(n)) => GraphSpec::cm_n(m, n),
                _ => {
                    eprintln!("error: complete-star needs --v, multipartite needs --t and --w, cm-n needs --n");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let long = big_n.unwrap_or(match graph {
                GraphKind::CmN => m * n.unwrap_or(1),
                _ => m,
            });
            cmd_oracle(&spec, Claim::new(m, long, alpha, beta), OracleConfig { bound, node_limit })
        }
        Command::Skolem { order, start } => {
            let seq = build_skolem(order, start);
            let doc = json!({ "valid": validate_skolem(&seq), "sequence": seq });
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Command::Matrix { m, n, alpha, beta } => match cmn_matrix(m, n, alpha, beta) {
            Ok(Some(mat)) => {
                println!("{}", serde_json::to_string(&mat.dump()).expect("dump serializes"));
                ExitCode::SUCCESS
            }
            Ok(None) => {
                println!("{}", json!({ "matrix": null, "reason": "this construction uses no difference matrix" }));
                ExitCode::SUCCESS
            }
            Err(e) => report(e),
        },
    }
}

/// Maps a library error to its exit code, printing refusals as JSON.
fn report(err: HwpError) -> ExitCode {
    match err {
        HwpError::Refused(r) => {
            println!("{}", serde_json::to_string(&r).expect("refusal serializes"));
            ExitCode::from(EXIT_REFUSED)
        }
        HwpError::Invalid(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        HwpError::Budget(what) => {
            let r = hwp_core::Refusal::Unsupported { trace: vec![format!("search budget exhausted for {what}")] };
            println!("{}", serde_json::to_string(&r).expect("refusal serializes"));
            ExitCode::from(EXIT_REFUSED)
        }
        other => {
            eprintln!("internal error: {other}");
            ExitCode::from(EXIT_SOFTWARE)
        }
    }
}

fn cmd_solve(v: usize, m: usize, big_n: usize, alpha: usize, beta: usize, out: Option<PathBuf>) -> ExitCode {
    let cert = match solve(v, m, big_n, alpha, beta) {
        Ok(c) => c,
        Err(e) => return report(e),
    };
    let text = cert.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_IO);
            }
            eprintln!("wrote {} factors to {}", cert.factors.len(), path.display());
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn cmd_verify(path: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_DATA);
        }
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("malformed certificate: {e}");
            return ExitCode::from(EXIT_DATA);
        }
    };
    let verdict = cert.verify();
    let tags: Vec<&str> = verdict.failures.iter().map(|f| f.tag()).collect();
    let doc = json!({ "ok": verdict.ok, "tags": tags, "failures": verdict.failures });
    println!("{doc}");
    if verdict.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECTED)
    }
}

fn cmd_oracle(spec: &GraphSpec, claim: Claim, cfg: OracleConfig) -> ExitCode {
    if let Err(e) = spec.validate() {
        return report(e);
    }
    let order = spec.vertex_count();
    if order > cfg.bound.min(64) {
        eprintln!("{} has {order} vertices, over the exhaustive bound {}", spec.describe(), cfg.bound.min(64));
        return ExitCode::from(EXIT_OVER_BOUND);
    }
    match exhaustive_factorize(spec, claim, &cfg) {
        Ok(outcome) => {
            let doc = match &outcome {
                OracleOutcome::Found(c) => json!({ "outcome": outcome.label(), "certificate": c }),
                OracleOutcome::ProvablyNone => json!({ "outcome": outcome.label() }),
                OracleOutcome::LimitExceeded { nodes } => json!({ "outcome": outcome.label(), "nodes": nodes }),
            };
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(e) => report(e),
    }
}
