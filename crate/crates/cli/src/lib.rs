//! Command-line front end: text formats, subcommands and exit codes.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 check failure.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use kahler_graph::connection::{laplacian, PotentialCoefficients};
use kahler_graph::dirac::{self, DistanceValue, NumericInterval, NUMERIC_ITERS};
use kahler_graph::format::fmt_g17;
use kahler_graph::spectra::{eig_selfadjoint, make_circulant_regular, ngon_closed_form, Spectrum};
use kahler_graph::verify::{self, VerifyConfig};
use kahler_graph::{DirectedCyclicGraph, C64};

pub mod args;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PotentialSpec {
    #[default]
    Unit,
    Zero,
    Path(PathBuf),
}

impl PotentialSpec {
    pub fn parse(s: &str) -> Self {
        match s {
            "unit" => PotentialSpec::Unit,
            "zero" => PotentialSpec::Zero,
            p => PotentialSpec::Path(PathBuf::from(p)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ngon(usize),
    Circulant(usize, usize),
    BidirectedNgon(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Laplacian,
    Distance,
    Verify,
    Generate(Family),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` or `-` reads standard input.
    pub graph_path: Option<PathBuf>,
    pub potential: PotentialSpec,
    pub format: Format,
    pub seed: u64,
    pub tol: Option<f64>,
    pub closed_form: bool,
    pub numeric: bool,
    #[doc(hidden)]
    pub corrupt_wedge_sign: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            graph_path: None,
            potential: PotentialSpec::Unit,
            format: Format::Json,
            seed: 0,
            tol: None,
            closed_form: false,
            numeric: false,
            corrupt_wedge_sign: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0} check(s) failed")]
    CheckFailed(usize),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

impl From<kahler_graph::Error> for CliError {
    fn from(e: kahler_graph::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// A text-format error at a 1-based line.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with `#` comments removed, paired with line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Edge-list format: `n <int>`, then one `u v` pair per line.
pub fn parse_graph(text: &str) -> Result<DirectedCyclicGraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty input, expected `n <int>`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", v] => v
            .parse::<usize>()
            .map_err(|_| err(hline, format!("invalid vertex count `{v}`")))?,
        _ => return Err(err(hline, format!("expected `n <int>`, found `{header}`"))),
    };
    if n < 3 {
        return Err(err(hline, format!("need n >= 3, got {n}")));
    }
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = parts[..] else {
            return Err(err(ln, format!("expected `u v`, found `{l}`")));
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|_| err(ln, format!("invalid vertex `{s}`")));
        let (u, v) = (parse(u)?, parse(v)?);
        for x in [u, v] {
            if x >= n {
                return Err(err(ln, format!("vertex {x} out of range 0..{n}")));
            }
        }
        if !seen.insert((u, v)) {
            return Err(err(ln, format!("duplicate edge {u} -> {v}")));
        }
        edges.push((u, v));
    }
    DirectedCyclicGraph::new(n, edges).map_err(|e| err(hline, e.to_string()))
}

/// Potential format: one `mu nu nuP re im` entry per line.
pub fn parse_potential(text: &str, g: &DirectedCyclicGraph) -> Result<PotentialCoefficients, ParseError> {
    let mut entries = Vec::new();
    let mut last = 1;
    for (ln, l) in content_lines(text) {
        last = ln;
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [mu, nu, nu_p, re, im] = parts[..] else {
            return Err(err(ln, format!("expected `mu nu nuP re im`, found `{l}`")));
        };
        let idx = |s: &str| s.parse::<usize>().map_err(|_| err(ln, format!("invalid vertex `{s}`")));
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(ln, format!("invalid number `{s}`")));
        let key = (idx(mu)?, idx(nu)?, idx(nu_p)?);
        let value = C64::new(num(re)?, num(im)?);
        // per-line key check
        PotentialCoefficients::new(g, [(key, value)]).map_err(|e| err(ln, e.to_string()))?;
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(err(ln, format!("duplicate potential key ({}, {}, {})", key.0, key.1, key.2)));
        }
        entries.push((key, value));
    }
    PotentialCoefficients::new(g, entries).map_err(|e| err(last, e.to_string()))
}

/// Edge-list text for a built-in family.
pub fn generate(family: Family) -> Result<String, CliError> {
    let g = match family {
        Family::Ngon(n) => DirectedCyclicGraph::directed_ngon(n)?,
        Family::Circulant(n, d) => make_circulant_regular(n, d)?,
        Family::BidirectedNgon(n) => DirectedCyclicGraph::bidirected_ngon(n)?,
    };
    Ok(graph_text(&g))
}

pub fn graph_text(g: &DirectedCyclicGraph) -> String {
    let mut s = format!("n {}\n", g.n());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

fn read_source(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn load_graph(cfg: &RunConfig, stdin: &mut dyn Read) -> Result<DirectedCyclicGraph, CliError> {
    let text = read_source(cfg.graph_path.as_ref(), stdin)?;
    Ok(parse_graph(&text)?)
}

fn load_potential(cfg: &RunConfig, g: &DirectedCyclicGraph) -> Result<PotentialCoefficients, CliError> {
    match &cfg.potential {
        PotentialSpec::Unit => Ok(PotentialCoefficients::unit(g)),
        PotentialSpec::Zero => Ok(PotentialCoefficients::zero()),
        PotentialSpec::Path(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display())))?;
            parse_potential(&text, g).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
        }
    }
}

fn json_array(values: &[f64]) -> String {
    format!("[{}]", values.iter().map(|v| fmt_g17(*v)).collect::<Vec<_>>().join(","))
}

fn is_directed_ngon(g: &DirectedCyclicGraph) -> bool {
    DirectedCyclicGraph::directed_ngon(g.n()).is_ok_and(|h| h == *g)
}

/// Run one command, writing data to `out` and diagnostics to `diag`.
pub fn run(cfg: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    if let Some(t) = cfg.tol {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!("--tol must be >= 0, got {t}")));
        }
    }
    match cfg.command {
        Command::Generate(family) => {
            out.write_all(generate(family)?.as_bytes())?;
            Ok(())
        }
        Command::Spectrum => {
            let g = load_graph(cfg, stdin)?;
            let c = load_potential(cfg, &g)?;
            let spec = eig_selfadjoint(&laplacian(&g, &c)?, false)?;
            let closed = if cfg.closed_form {
                if is_directed_ngon(&g) {
                    Some(ngon_closed_form(g.n())?)
                } else {
                    writeln!(diag, "warning: --closed-form applies only to the directed n-gon; skipped")?;
                    None
                }
            } else {
                None
            };
            write_spectrum(out, cfg.format, &spec, closed.as_deref())
        }
        Command::Laplacian => {
            let g = load_graph(cfg, stdin)?;
            let c = load_potential(cfg, &g)?;
            let lap = laplacian(&g, &c)?;
            let m = lap.rows();
            match cfg.format {
                Format::Json => {
                    let edges: Vec<String> = g.edges().iter().map(|(s, t)| format!("[{s},{t}]")).collect();
                    let part = |f: fn(C64) -> f64| {
                        let rows: Vec<String> = (0..m)
                            .map(|i| json_array(&lap.row(i).iter().map(|z| f(*z)).collect::<Vec<_>>()))
                            .collect();
                        format!("[{}]", rows.join(","))
                    };
                    writeln!(
                        out,
                        "{{\"dim\":{m},\"edges\":[{}],\"re\":{},\"im\":{}}}",
                        edges.join(","),
                        part(|z| z.re),
                        part(|z| z.im)
                    )?;
                }
                Format::Csv => {
                    writeln!(out, "row,col,re,im")?;
                    for i in 0..m {
                        for j in 0..m {
                            let z = lap.get(i, j);
                            writeln!(out, "{i},{j},{},{}", fmt_g17(z.re), fmt_g17(z.im))?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Distance => {
            let g = load_graph(cfg, stdin)?;
            let sinks = g.sinks();
            if !sinks.is_empty() {
                let list: Vec<String> = sinks.iter().map(|v| v.to_string()).collect();
                writeln!(
                    diag,
                    "warning: vertices without outgoing edges: {}; the constraint graph may disconnect and distances may be infinite",
                    list.join(" ")
                )?;
            }
            let matrix = dirac::all_pairs_distance(&g);
            let numeric = if cfg.numeric {
                let c = load_potential(cfg, &g)?;
                let n = g.n();
                let mut rows = Vec::with_capacity(n);
                for mu in 0..n {
                    let mut row = Vec::with_capacity(n);
                    for nu in 0..n {
                        row.push(dirac::connes_distance_numeric(&g, &c, mu, nu, NUMERIC_ITERS, cfg.seed)?);
                    }
                    rows.push(row);
                }
                Some(rows)
            } else {
                None
            };
            write_distances(out, cfg.format, &matrix, numeric.as_deref())
        }
        Command::Verify => {
            let g = match &cfg.graph_path {
                Some(_) => load_graph(cfg, stdin)?,
                None => DirectedCyclicGraph::directed_ngon(3)?,
            };
            let c = load_potential(cfg, &g)?;
            if !g.sinks().is_empty() {
                writeln!(diag, "warning: graph has vertices without outgoing edges; some distances are infinite")?;
            }
            let vcfg = VerifyConfig {
                tol: cfg.tol,
                seed: cfg.seed,
                corrupt_wedge_sign: cfg.corrupt_wedge_sign,
            };
            let checks = verify::run(&g, &c, &vcfg)?;
            for c in &checks {
                writeln!(out, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                Err(CliError::CheckFailed(failed))
            } else {
                Ok(())
            }
        }
    }
}

fn write_spectrum(out: &mut dyn Write, format: Format, spec: &Spectrum, closed: Option<&[f64]>) -> Result<(), CliError> {
    let dev: Option<Vec<f64>> = closed.map(|c| spec.eigenvalues.iter().zip(c).map(|(a, b)| (a - b).abs()).collect());
    match format {
        Format::Json => match (closed, &dev) {
            (Some(c), Some(d)) => {
                let max = d.iter().copied().fold(0.0, f64::max);
                writeln!(
                    out,
                    "{{\"eigenvalues\":{},\"closed_form\":{},\"max_deviation\":{}}}",
                    json_array(&spec.eigenvalues),
                    json_array(c),
                    fmt_g17(max)
                )?;
            }
            _ => writeln!(out, "{}", spec.to_json())?,
        },
        Format::Csv => match (closed, &dev) {
            (Some(c), Some(d)) => {
                writeln!(out, "index,eigenvalue,closed_form,deviation")?;
                for (i, v) in spec.eigenvalues.iter().enumerate() {
                    writeln!(out, "{i},{},{},{}", fmt_g17(*v), fmt_g17(c[i]), fmt_g17(d[i]))?;
                }
            }
            _ => {
                writeln!(out, "index,eigenvalue")?;
                for (i, v) in spec.eigenvalues.iter().enumerate() {
                    writeln!(out, "{i},{}", fmt_g17(*v))?;
                }
            }
        },
    }
    Ok(())
}

fn write_distances(
    out: &mut dyn Write,
    format: Format,
    matrix: &[Vec<DistanceValue>],
    numeric: Option<&[Vec<NumericInterval>]>,
) -> Result<(), CliError> {
    let bound = |x: f64| {
        if x.is_infinite() {
            "\"inf\"".to_string()
        } else {
            fmt_g17(x)
        }
    };
    match format {
        Format::Json => {
            let base = dirac::distance_matrix_json(matrix);
            match numeric {
                None => writeln!(out, "{base}")?,
                Some(iv) => {
                    let mat = |pick: fn(&NumericInterval) -> f64| {
                        let rows: Vec<String> = iv
                            .iter()
                            .map(|r| format!("[{}]", r.iter().map(|i| bound(pick(i))).collect::<Vec<_>>().join(",")))
                            .collect();
                        format!("[{}]", rows.join(","))
                    };
                    let head = base.strip_suffix('}').expect("object");
                    writeln!(out, "{head},\"lower\":{},\"upper\":{}}}", mat(|i| i.lower), mat(|i| i.upper))?;
                }
            }
        }
        Format::Csv => {
            let plain = |x: f64| bound(x).trim_matches('"').to_string();
            if numeric.is_some() {
                writeln!(out, "mu,nu,distance,lower,upper")?;
            } else {
                writeln!(out, "mu,nu,distance")?;
            }
            for (mu, row) in matrix.iter().enumerate() {
                for (nu, d) in row.iter().enumerate() {
                    match numeric {
                        Some(iv) => {
                            let i = iv[mu][nu];
                            writeln!(out, "{mu},{nu},{d},{},{}", plain(i.lower), plain(i.upper))?
                        }
                        None => writeln!(out, "{mu},{nu},{d}")?,
                    }
                }
            }
        }
    }
    Ok(())
}
