//! Command-line grammar.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::{run, Command, Family, Format, PotentialSpec, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "kahler-graph",
    version,
    about = "Twisted edge Laplacian spectra and Connes distances of directed graphs",
    after_help = "Vertices are numbered 0..n and all vertex arithmetic is modulo n.\n\
                  Graph files: a line `n <int>`, then one `u v` edge per line; `#` starts a comment.\n\
                  Potential files: one `mu nu nuP re im` entry per line.\n\
                  Exit codes: 0 success, 1 usage error, 2 data error, 3 check failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Graph file; `-` or absent reads standard input.
    #[arg(long, global = true, value_name = "PATH")]
    graph: Option<PathBuf>,

    /// `unit`, `zero`, or a potential file.
    #[arg(long, global = true, default_value = "unit", value_name = "unit|zero|PATH")]
    potential: String,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Also emit the closed-form n-gon spectrum and the deviation from it.
    #[arg(long, global = true)]
    closed_form: bool,

    /// Add the numeric optimization bracket to each distance.
    #[arg(long, global = true)]
    numeric: bool,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override every check tolerance in `verify`.
    #[arg(long, global = true, value_name = "FLOAT", allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Sorted eigenvalues of the twisted edge Laplacian.
    Spectrum,
    /// The assembled Laplacian matrix.
    Laplacian,
    /// All-pairs Connes distances.
    Distance,
    /// Run the invariant suites; `--graph` is optional here.
    Verify {
        #[arg(long, hide = true)]
        corrupt_wedge_sign: bool,
    },
    /// Print a built-in graph family in the edge-list format.
    Generate {
        #[command(subcommand)]
        family: FamilyCmd,
    },
}

#[derive(Debug, Subcommand)]
enum FamilyCmd {
    /// Directed polygon μ → μ+1.
    Ngon { n: usize },
    /// Edges μ → μ+1, …, μ → μ+d.
    Circulant { n: usize, d: usize },
    /// Both edges μ → μ±1.
    BidirectedNgon { n: usize },
}

pub fn parse<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let mut corrupt = false;
    let command = match cli.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Laplacian => Command::Laplacian,
        Cmd::Distance => Command::Distance,
        Cmd::Verify { corrupt_wedge_sign } => {
            corrupt = corrupt_wedge_sign;
            Command::Verify
        }
        Cmd::Generate { family } => Command::Generate(match family {
            FamilyCmd::Ngon { n } => Family::Ngon(n),
            FamilyCmd::Circulant { n, d } => Family::Circulant(n, d),
            FamilyCmd::BidirectedNgon { n } => Family::BidirectedNgon(n),
        }),
    };
    Ok(RunConfig {
        command,
        graph_path: cli.graph,
        potential: PotentialSpec::parse(&cli.potential),
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        seed: cli.seed,
        tol: cli.tol,
        closed_form: cli.closed_form,
        numeric: cli.numeric,
        corrupt_wedge_sign: corrupt,
    })
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(diag, "{rendered}")
            };
            return code;
        }
    };
    match run(&cfg, stdin, out, diag) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            e.exit_code()
        }
    }
}
