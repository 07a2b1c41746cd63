use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bcurve_cli::commands::{self, G0Args};
use bcurve_cli::config::parse_point;
use bcurve_cli::{CliError, Format, Report, RunConfig};
use bcurve_core::{CurveKind, DivisorTolerances, ExactScalar};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Spectral data of commuting differential operators.
///
/// Exit codes: 0 success, 1 internal error, 2 parse or configuration error,
/// 3 operators do not commute, 4 orders not coprime, 5 a check failed.
#[derive(Parser)]
#[command(name = "bcurve", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Truncation order N of every series.
    #[arg(long = "order", global = true, default_value_t = 48)]
    order: usize,
    /// Base point as RE or RE,IM with rational parts.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    t0: String,
    /// Curve residual tolerance for divisor points.
    #[arg(long, global = true, default_value_t = DivisorTolerances::default().curve)]
    tol_curve: f64,
    /// Distance below which roots are merged.
    #[arg(long, global = true, default_value_t = DivisorTolerances::default().cluster)]
    tol_cluster: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Series coefficients shown per operator coefficient.
    #[arg(long, global = true, default_value_t = 8)]
    terms: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Smooth,
    Node,
    Cusp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Burchnall–Chaundy curve of a commuting pair.
    Curve { p: String, q: String },
    /// Checks f(P, Q) = 0.
    Verify { p: String, q: String },
    /// Spectral divisor of the normalized eigenvector.
    Divisor { p: String, q: String },
    /// Genus-zero inverse problem with round trip.
    #[command(name = "inverse-g0")]
    InverseG0 {
        #[arg(long, value_enum, default_value_t = Kind::Smooth)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        b1: Option<String>,
        #[arg(long = "z0-inv", allow_hyphen_values = true)]
        z0_inv: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Semigroup generated by operator orders.
    Semigroup {
        #[arg(required = true)]
        orders: Vec<u64>,
        /// Membership table bound (default 4ab for the two smallest orders).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Standard form of a single operator.
    Normalize {
        p: String,
        /// Exact m-th root of the leading coefficient at the base point.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
    },
}

fn opt_point(s: &Option<String>) -> Result<Option<ExactScalar>, CliError> {
    s.as_deref().map(parse_point).transpose()
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Report, CliError> {
    match &cli.cmd {
        Cmd::Curve { p, q } => commands::curve(p, q, cfg),
        Cmd::Verify { p, q } => {
            let start = Instant::now();
            let r = commands::verify(p, q, cfg);
            eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            r
        }
        Cmd::Divisor { p, q } => commands::divisor(p, q, cfg),
        Cmd::InverseG0 { kind, b1, z0_inv, c } => {
            let kind = match kind {
                Kind::Smooth => CurveKind::Smooth,
                Kind::Node => CurveKind::Node,
                Kind::Cusp => CurveKind::Cusp,
            };
            let args = G0Args { kind: Some(kind), b1: opt_point(b1)?, z0_inv: opt_point(z0_inv)?, c: opt_point(c)? };
            commands::inverse_g0(&args, cfg)
        }
        Cmd::Semigroup { orders, bound } => commands::semigroup(orders, *bound),
        Cmd::Normalize { p, root } => commands::normalize(p, opt_point(root)?, cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let cfg = match parse_point(&c.t0) {
        Ok(t0) => RunConfig {
            order: c.order,
            t0,
            tol: DivisorTolerances { curve: c.tol_curve, cluster: c.tol_cluster },
            format: match c.format {
                OutFormat::Json => Format::Json,
                OutFormat::Text => Format::Text,
            },
            show_terms: c.terms,
        },
        Err(e) => {
            eprintln!("error: --t0: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report = match run(&cli, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let body = report.render(cfg.format);
    match &c.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    if let Some(f) = &report.failure {
        eprintln!("check failed: {f}");
    }
    ExitCode::from(report.exit_code() as u8)
}
