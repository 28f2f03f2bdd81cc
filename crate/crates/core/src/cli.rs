//! Command-line front end.
//!
//! Exit codes: `check` returns 0 when every requested condition holds, 1 when
//! one fails and 2 on errors or unknown verdicts; `eigen` returns 3 when the
//! iteration does not converge; `unique` returns 0/1/2 for
//! certified/refuted/unknown, with condition (N) deciding when both run.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{encode, Checker, CheckOptions, Condition, Engine, Verdict};
use crate::expr::{parse_map, MapExpr};
use crate::sat::{to_dimacs, SolverConfig, DEFAULT_MAX_DECISIONS};
use crate::signature::{local_signatures, lower_signature, upper_signature, DEFAULT_TIE_TOL};
use crate::spectral::{
    condition_m, condition_n, power_iteration, Certification, PowerOptions, UniquenessReport, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

#[derive(Debug, Parser)]
#[command(name = "topical", version, about = "Irreducibility and uniqueness checks for power-mean maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide irreducibility conditions.
    Check(CheckArgs),
    /// Print upper and lower signatures, optionally local ones at a point.
    Signature(SignatureArgs),
    /// Compute a positive eigenpair by power iteration.
    Eigen(EigenArgs),
    /// Test the uniqueness conditions (M) and (N) at a point.
    Unique(UniqueArgs),
    /// Write DIMACS for a condition and/or DOT for the arc graph.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Sat,
    Brute,
    Graph,
    Auto,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Sat => Engine::Sat,
            EngineArg::Brute => Engine::Brute,
            EngineArg::Graph => Engine::Graph,
            EngineArg::Auto => Engine::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UniqueCondition {
    M,
    N,
    Both,
}

#[derive(Debug, Args)]
pub struct ConditionFlags {
    /// All five conditions.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub facial: bool,
    #[arg(long)]
    pub graphical: bool,
    #[arg(long)]
    pub partial: bool,
    #[arg(long)]
    pub indecomposable: bool,
    #[arg(long)]
    pub imperturbable: bool,
}

impl ConditionFlags {
    pub fn selected(&self) -> Vec<Condition> {
        let on = [self.facial, self.graphical, self.partial, self.indecomposable, self.imperturbable];
        Condition::ALL
            .into_iter()
            .zip(on)
            .filter(|&(_, f)| f || self.all)
            .map(|(c, _)| c)
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Map description file.
    pub map: PathBuf,
    #[command(flatten)]
    pub conditions: ConditionFlags,
    #[arg(long, value_enum, default_value = "auto")]
    pub engine: EngineArg,
    /// Decision cap for the SAT solver.
    #[arg(long, default_value_t = DEFAULT_MAX_DECISIONS)]
    pub max_decisions: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SignatureArgs {
    pub map: PathBuf,
    #[arg(long)]
    pub upper: bool,
    #[arg(long)]
    pub lower: bool,
    /// Interior point "v1,v2,..." for local signatures.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
    pub tie_tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    pub map: PathBuf,
    /// Starting point "v1,v2,..."; defaults to all ones.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct UniqueArgs {
    pub map: PathBuf,
    /// Point "v1,v2,..."; defaults to the eigenvector found by power iteration.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub condition: UniqueCondition,
    #[arg(long, value_enum, default_value = "auto")]
    pub engine: EngineArg,
    #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
    pub tie_tol: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DECISIONS)]
    pub max_decisions: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub map: PathBuf,
    /// Exactly one condition selects the DIMACS encoding.
    #[command(flatten)]
    pub conditions: ConditionFlags,
    #[arg(long)]
    pub dimacs: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse {
        path: String,
        source: crate::expr::ParseError,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

fn load(path: &Path) -> Result<MapExpr, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_map(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn parse_point(s: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse point {s:?}")))?;
    if v.len() != n || !v.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(CliError::Usage(format!("point must have {n} positive finite coordinates")));
    }
    Ok(v)
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be positive")))
    }
}

fn tie_tol(v: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Usage("--tie-tol must be in [0, 1)".into()))
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Failed(format!("output error: {e}"))
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = load(&a.map)?;
    let conds = a.conditions.selected();
    if conds.is_empty() {
        return Err(CliError::Usage("select conditions with --all or --facial/--graphical/...".into()));
    }
    if a.max_decisions == 0 {
        return Err(CliError::Usage("--max-decisions must be positive".into()));
    }
    let opts = CheckOptions {
        solver: SolverConfig {
            max_decisions: a.max_decisions,
        },
        ..CheckOptions::default()
    };
    let checker = Checker::new(&f).with_options(opts);
    let (mut fails, mut unknown) = (false, false);
    for c in conds {
        let r = checker.check(c, a.engine.into()).map_err(|e| CliError::Failed(format!("{c}: {e}")))?;
        match a.format {
            Format::Text => writeln!(out, "{}", r.render_text()),
            Format::Structured => write!(out, "{}", r.render_structured()),
        }
        .map_err(io)?;
        fails |= r.verdict == Verdict::Fails;
        unknown |= r.verdict == Verdict::Unknown;
    }
    Ok(if unknown {
        2
    } else if fails {
        1
    } else {
        0
    })
}

fn write_signature(
    out: &mut dyn Write,
    format: Format,
    kind: &str,
    g: &crate::boolfn::BoolMap,
) -> std::io::Result<()> {
    let g = g.simplify();
    match format {
        Format::Text => {
            writeln!(out, "{kind} signature:")?;
            for i in 0..g.n() {
                writeln!(out, "  {}: {}", i + 1, g.render(i))?;
            }
        }
        Format::Structured => {
            writeln!(out, "record: signature\nkind: {kind}")?;
            for i in 0..g.n() {
                writeln!(out, "entry_{}: {}", i + 1, g.render(i))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

fn cmd_signature(a: &SignatureArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = load(&a.map)?;
    tie_tol(a.tie_tol)?;
    let (upper, lower) = if a.upper || a.lower { (a.upper, a.lower) } else { (true, true) };
    match &a.point {
        None => {
            if upper {
                write_signature(out, a.format, "upper", &upper_signature(&f)).map_err(io)?;
            }
            if lower {
                write_signature(out, a.format, "lower", &lower_signature(&f)).map_err(io)?;
            }
        }
        Some(p) => {
            let u = parse_point(p, f.dim())?;
            let l = local_signatures(&f, &u, a.tie_tol).map_err(|e| CliError::Failed(e.to_string()))?;
            if upper {
                write_signature(out, a.format, "local upper", &l.upper).map_err(io)?;
            }
            if lower {
                write_signature(out, a.format, "local lower", &l.lower).map_err(io)?;
            }
            for t in l.ties.ties() {
                let line = format!("tie at {}: argmax {}, argmin {}", t.path, t.argmax, t.argmin);
                match a.format {
                    Format::Text => writeln!(out, "{line}"),
                    Format::Structured => writeln!(out, "record: tie\npath: {}\nargmax: {}\nargmin: {}\n", t.path, t.argmax, t.argmin),
                }
                .map_err(io)?;
            }
        }
    }
    Ok(0)
}

fn cmd_eigen(a: &EigenArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = load(&a.map)?;
    positive("tol", a.tol)?;
    if a.max_iter == 0 {
        return Err(CliError::Usage("--max-iter must be positive".into()));
    }
    let x0 = match &a.point {
        Some(p) => parse_point(p, f.dim())?,
        None => vec![1.0; f.dim()],
    };
    let opts = PowerOptions {
        tol: a.tol,
        max_iter: a.max_iter,
    };
    let r = power_iteration(&f, &x0, &opts).map_err(|e| CliError::Failed(e.to_string()))?;
    match a.format {
        Format::Text => writeln!(out, "{}", r.render_text()),
        Format::Structured => write!(out, "{}", r.render_structured()),
    }
    .map_err(io)?;
    Ok(if r.converged { 0 } else { 3 })
}

fn cmd_unique(a: &UniqueArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = load(&a.map)?;
    tie_tol(a.tie_tol)?;
    positive("tol", a.tol)?;
    let u = match &a.point {
        Some(p) => parse_point(p, f.dim())?,
        None => {
            let opts = PowerOptions {
                tol: a.tol,
                max_iter: a.max_iter,
            };
            let r = power_iteration(&f, &vec![1.0; f.dim()], &opts).map_err(|e| CliError::Failed(e.to_string()))?;
            if !r.converged {
                return Err(CliError::Failed(
                    "power iteration did not converge; supply --point".into(),
                ));
            }
            r.vector
        }
    };
    let solver = SolverConfig {
        max_decisions: a.max_decisions,
    };
    let engine: Engine = a.engine.into();
    let mut reports: Vec<UniquenessReport> = Vec::new();
    let fail = |e: crate::spectral::UniquenessError| CliError::Failed(e.to_string());
    if matches!(a.condition, UniqueCondition::M | UniqueCondition::Both) {
        reports.push(condition_m(&f, &u, engine, a.tie_tol, &solver).map_err(fail)?);
    }
    if matches!(a.condition, UniqueCondition::N | UniqueCondition::Both) {
        reports.push(condition_n(&f, &u, engine, a.tie_tol, &solver).map_err(fail)?);
    }
    for r in &reports {
        match a.format {
            Format::Text => writeln!(out, "{}", r.render_text()),
            Format::Structured => write!(out, "{}", r.render_structured()),
        }
        .map_err(io)?;
    }
    let decisive = reports.last().expect("at least one condition ran");
    Ok(match decisive.verdict {
        Certification::Certified => 0,
        Certification::Refuted => 1,
        Certification::Unknown => 2,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = load(&a.map)?;
    if a.dimacs.is_none() && a.dot.is_none() {
        return Err(CliError::Usage("nothing to export; give --dimacs and/or --dot".into()));
    }
    let checker = Checker::new(&f);
    if let Some(path) = &a.dimacs {
        let conds = a.conditions.selected();
        let [c] = conds.as_slice() else {
            return Err(CliError::Usage("--dimacs needs exactly one condition flag".into()));
        };
        let cnf = encode(*c, &checker.lower, &checker.upper).map_err(|e| CliError::Failed(e.to_string()))?;
        write_file(path, &to_dimacs(&cnf))?;
        writeln!(
            out,
            "wrote {c} CNF ({} variables, {} clauses) to {}",
            cnf.num_vars(),
            cnf.clauses().len(),
            path.display()
        )
        .map_err(io)?;
    }
    if let Some(path) = &a.dot {
        write_file(path, &checker.graph.to_dot())?;
        writeln!(out, "wrote arc graph to {}", path.display()).map_err(io)?;
    }
    Ok(0)
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Signature(a) => cmd_signature(a, out),
        Command::Eigen(a) => cmd_eigen(a, out),
        Command::Unique(a) => cmd_unique(a, out),
        Command::Export(a) => cmd_export(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
