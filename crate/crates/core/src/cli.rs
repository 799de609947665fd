//! Command-line front end: `eval`, `grid` and `verify`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exit_laws::{
    exit_up_prob, infimum_before_passage_density, supremum_at_passage_density,
};
use crate::grid::{tabulate, GridSpec};
use crate::killed::{exit_triple_density, u1_density, u_xyz_density};
use crate::params::StableParams;
use crate::reflected::{expected_passage_time, r1_density, r_xyz_density, reflected_triple_density};
use crate::special::QuadratureSpec;
use crate::verify::{identities, mc_suite, IdentityTolerances, McSuiteOptions, Report, VERSION};

/// Environment variable overriding the default Monte Carlo budget
/// (`n_paths * max_steps`).
pub const BUDGET_ENV: &str = "STABLEPOT_MC_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "stablepot", version, about = "Potential densities and exit laws of stable processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one quantity at one point.
    Eval(EvalArgs),
    /// Tabulate a quantity along one coordinate into a CSV file.
    Grid(GridArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct QuantityFlag {
    /// u₁(x, y), killed outside [0, 1]
    #[arg(long)]
    u1: bool,
    /// u(x, y, z), position and supremum killed below zero
    #[arg(long)]
    uxyz: bool,
    /// exit triple density at (x, u, v, y)
    #[arg(long)]
    triple: bool,
    /// r₁(x, y), reflected process
    #[arg(long)]
    r1: bool,
    /// r(x, y, z), reflected process and supremum
    #[arg(long)]
    rxyz: bool,
    /// reflected triple density at (x, u, v, y)
    #[arg(long)]
    rtriple: bool,
    /// P_x(leave [0, 1] upwards)
    #[arg(long = "exit-prob")]
    exit_prob: bool,
    /// E_x of the reflected passage time above one
    #[arg(long)]
    epass: bool,
    /// infimum-before-passage density at y
    #[arg(long = "law-inf")]
    law_inf: bool,
    /// supremum-at-passage density at y > 1
    #[arg(long = "law-sup")]
    law_sup: bool,
    /// Lévy density at y
    #[arg(long)]
    levy: bool,
    /// killing rate of the Lamperti transform
    #[arg(long)]
    q: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    U1,
    Uxyz,
    Triple,
    R1,
    Rxyz,
    Rtriple,
    ExitProb,
    Epass,
    LawInf,
    LawSup,
    Levy,
    Q,
}

impl QuantityFlag {
    fn quantity(&self) -> Quantity {
        use Quantity::*;
        [
            (self.u1, U1),
            (self.uxyz, Uxyz),
            (self.triple, Triple),
            (self.r1, R1),
            (self.rxyz, Rxyz),
            (self.rtriple, Rtriple),
            (self.exit_prob, ExitProb),
            (self.epass, Epass),
            (self.law_inf, LawInf),
            (self.law_sup, LawSup),
            (self.levy, Levy),
            (self.q, Q),
        ]
        .into_iter()
        .find(|(set, _)| *set)
        .map(|(_, q)| q)
        .expect("clap enforces one quantity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    Y,
    Z,
    U,
    V,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        use Quantity::*;
        match self {
            U1 => "u1",
            Uxyz => "uxyz",
            Triple => "triple",
            R1 => "r1",
            Rxyz => "rxyz",
            Rtriple => "rtriple",
            ExitProb => "exit-prob",
            Epass => "epass",
            LawInf => "law-inf",
            LawSup => "law-sup",
            Levy => "levy",
            Q => "q",
        }
    }

    pub fn coords(self) -> &'static [Coord] {
        use Coord::*;
        use Quantity::*;
        match self {
            U1 | R1 => &[X, Y],
            Uxyz | Rxyz => &[X, Y, Z],
            Triple | Rtriple => &[X, U, V, Y],
            ExitProb | Epass => &[X],
            LawInf | LawSup | Levy => &[Y],
            Q => &[],
        }
    }

    /// Coordinate varied by `grid` unless `--over` says otherwise.
    fn default_free(self) -> Option<Coord> {
        use Quantity::*;
        match self {
            Uxyz | Rxyz => Some(Coord::Z),
            ExitProb | Epass => Some(Coord::X),
            Q => None,
            _ => Some(Coord::Y),
        }
    }

    fn formula(self) -> &'static str {
        use Quantity::*;
        match self {
            U1 => "u1(x,y) = K |x-y|^(a-1) B(t; a*rho or a*rho_hat, 1-a), K = 1/(G(a rho) G(a rho_hat))",
            Uxyz => "u(x,y,z) = K x^(a rho_hat) y^(a rho) (z-x)^(a rho-1) (z-y)^(a rho_hat-1) z^(-a)",
            Triple => "u(x,1-v,1-u) c+ (v+y)^(-a-1)",
            R1 => "r1(x,y) = u1(x,y) + I_(1-x)(a rho, a rho_hat) y^(a rho-1) (1-y)^(a rho_hat) / G(a)",
            Rxyz => "r(x,y,z) = K y^(a rho-1) (z-y)^(a rho_hat-1) [x^(a rho_hat) (z-x)^(a rho-1) z^(1-a) + a rho_hat B(1-x/z; a rho, a rho_hat)]",
            Rtriple => "r(x,1-v,1-u) c+ (v+y)^(-a-1)",
            ExitProb => "I_x(a rho_hat, a rho)",
            Epass => "[x^(a rho_hat) (1-x)^(a rho) + a rho_hat B(1-x; a rho, a rho_hat)] / G(a+1)",
            LawInf => "sin(pi a rho_hat)/pi y^(-a rho_hat) (1-y)^(a rho_hat-1)",
            LawSup => "G(a) K y^(-a) (y-1)^(a rho-1)",
            Levy => "c+ y^(-a-1) (y>0), c- |y|^(-a-1) (y<0)",
            Q => "c- / a",
        }
    }
}

#[derive(Args, Debug, Clone, Copy, Default, Serialize)]
pub struct Coords {
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<f64>,
}

impl Coords {
    fn get(&self, c: Coord) -> Option<f64> {
        match c {
            Coord::X => self.x,
            Coord::Y => self.y,
            Coord::Z => self.z,
            Coord::U => self.u,
            Coord::V => self.v,
        }
    }

    fn set(mut self, c: Coord, value: f64) -> Self {
        let slot = match c {
            Coord::X => &mut self.x,
            Coord::Y => &mut self.y,
            Coord::Z => &mut self.z,
            Coord::U => &mut self.u,
            Coord::V => &mut self.v,
        };
        *slot = Some(value);
        self
    }
}

#[derive(Args, Debug)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    rho: f64,
    /// Relative tolerance of the quadratures.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    quantity: QuantityFlag,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    coords: Coords,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[command(flatten)]
    quantity: QuantityFlag,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    coords: Coords,
    /// Coordinate to vary; the others stay fixed.
    #[arg(long, value_enum)]
    over: Option<GridCoord>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    /// Number of interior points.
    #[arg(long)]
    count: usize,
    /// Distance kept from both ends of the range.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    #[arg(long, short)]
    out: PathBuf,
    /// Also write `<out>.meta.json` describing the run.
    #[arg(long)]
    meta: bool,
    /// Also write a gnuplot script `<out>.gp`.
    #[arg(long)]
    plot_script: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridCoord {
    X,
    Y,
    Z,
    U,
    V,
}

impl From<GridCoord> for Coord {
    fn from(g: GridCoord) -> Coord {
        match g {
            GridCoord::X => Coord::X,
            GridCoord::Y => Coord::Y,
            GridCoord::Z => Coord::Z,
            GridCoord::U => Coord::U,
            GridCoord::V => Coord::V,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Mc,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Stability index; repeat together with --rho for several pairs.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho: Vec<f64>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = crate::mc::DEFAULT_PATHS)]
    paths: usize,
    #[arg(long, default_value_t = crate::mc::DEFAULT_STEP)]
    step: f64,
    /// Cap on paths times steps per path; defaults to $STABLEPOT_MC_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    /// Report file; standard output when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Formats with 15 significant digits, trailing zeros removed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn need(q: Quantity, coords: &Coords, c: Coord) -> Result<f64> {
    coords.get(c).ok_or_else(|| {
        Error::domain(format!(
            "{} needs --{}",
            q.name(),
            serde_json::to_value(c).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        ))
    })
}

/// Evaluates `q` at the given coordinates.
pub fn evaluate(q: Quantity, p: &StableParams, coords: &Coords, spec: &QuadratureSpec) -> Result<f64> {
    use Coord::*;
    let c = |k| need(q, coords, k);
    match q {
        Quantity::U1 => u1_density(p, c(X)?, c(Y)?, spec),
        Quantity::Uxyz => u_xyz_density(p, c(X)?, c(Y)?, c(Z)?),
        Quantity::Triple => exit_triple_density(p, c(X)?, c(U)?, c(V)?, c(Y)?),
        Quantity::R1 => r1_density(p, c(X)?, c(Y)?, spec),
        Quantity::Rxyz => r_xyz_density(p, c(X)?, c(Y)?, c(Z)?),
        Quantity::Rtriple => reflected_triple_density(p, c(X)?, c(U)?, c(V)?, c(Y)?),
        Quantity::ExitProb => exit_up_prob(p, c(X)?),
        Quantity::Epass => expected_passage_time(p, c(X)?, spec),
        Quantity::LawInf => infimum_before_passage_density(p, c(Y)?),
        Quantity::LawSup => supremum_at_passage_density(p, c(Y)?),
        Quantity::Levy => p.levy_density(c(Y)?),
        Quantity::Q => Ok(p.q()),
    }
}

fn provenance(p: &StableParams, seed: Option<u64>) -> String {
    let mut s = format!("# alpha={} rho={}", p.alpha(), p.rho());
    if let Some(seed) = seed {
        s += &format!(" seed={seed}");
    }
    s + &format!("\n# stablepot {VERSION}")
}

fn setup(params: &ParamArgs) -> Result<(StableParams, QuadratureSpec)> {
    let p = StableParams::new(params.alpha, params.rho)?;
    let spec = QuadratureSpec {
        rel_tol: params.rel_tol,
        ..QuadratureSpec::default()
    };
    spec.validate()?;
    Ok((p, spec))
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let q = args.quantity.quantity();
    let (p, spec) = setup(&args.params)?;
    let v = evaluate(q, &p, &args.coords, &spec)?;
    println!("{}", format_sig(v));
    println!("# {}: {}", q.name(), q.formula());
    println!("{}", provenance(&p, None));
    Ok(())
}

#[derive(Serialize)]
struct GridMeta<'a> {
    tool: &'static str,
    version: &'static str,
    quantity: Quantity,
    alpha: f64,
    rho: f64,
    rel_tol: f64,
    over: Coord,
    fixed: Coords,
    grid: GridSpec,
    data: &'a str,
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn cmd_grid(args: &GridArgs) -> Result<()> {
    let q = args.quantity.quantity();
    let (p, spec) = setup(&args.params)?;
    let over: Coord = match args.over {
        Some(g) => g.into(),
        None => q
            .default_free()
            .ok_or_else(|| Error::domain(format!("{} has no coordinate to tabulate", q.name())))?,
    };
    if !q.coords().contains(&over) {
        return Err(Error::domain(format!("{} does not depend on the chosen coordinate", q.name())));
    }
    let (lo_default, hi_default) = if q == Quantity::LawSup { (1.0, 10.0) } else { (0.0, 1.0) };
    let grid = GridSpec::new(args.lo.unwrap_or(lo_default), args.hi.unwrap_or(hi_default), args.count)
        .with_margin(args.margin);
    let table = tabulate(|t| evaluate(q, &p, &args.coords.set(over, t), &spec), &grid, [None, None])?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["abscissa", "value"])?;
    for (t, v) in table.iter() {
        w.write_record([format!("{t:?}"), format!("{v:?}")])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&args.out, &bytes)?;

    let data = args.out.file_name().and_then(|n| n.to_str()).unwrap_or("data.csv");
    if args.meta {
        let meta = GridMeta {
            tool: "stablepot",
            version: VERSION,
            quantity: q,
            alpha: p.alpha(),
            rho: p.rho(),
            rel_tol: spec.rel_tol,
            over,
            fixed: args.coords,
            grid,
            data,
        };
        let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))?;
        write_atomic(&sibling(&args.out, "meta.json"), json.as_bytes())?;
    }
    if args.plot_script {
        let script = format!(
            "# stablepot {VERSION}: {} with alpha={} rho={}\n\
             set datafile separator ','\n\
             set key off\n\
             set xlabel '{}'\n\
             plot '{data}' using 1:2 skip 1 with lines\n",
            q.name(),
            p.alpha(),
            p.rho(),
            serde_json::to_value(over).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        );
        write_atomic(&sibling(&args.out, "gp"), script.as_bytes())?;
    }
    Ok(())
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn default_pairs() -> Vec<(f64, f64)> {
    vec![(0.7, 0.6), (1.0, 0.5), (1.5, 0.4)]
}

fn budget(arg: Option<u64>) -> Result<u64> {
    if let Some(b) = arg {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("{BUDGET_ENV} must be a non-negative integer (got {s:?})"))),
        Err(_) => Ok(crate::mc::DEFAULT_BUDGET),
    }
}

/// Runs the suite; `Ok(false)` when a check failed.
fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    if args.alpha.len() != args.rho.len() {
        return Err(Error::domain(format!(
            "give --alpha and --rho the same number of times (got {} and {})",
            args.alpha.len(),
            args.rho.len()
        )));
    }
    let pairs = if args.alpha.is_empty() {
        default_pairs()
    } else {
        args.alpha.iter().copied().zip(args.rho.iter().copied()).collect()
    };
    let params = pairs
        .iter()
        .map(|&(a, r)| StableParams::new(a, r))
        .collect::<Result<Vec<_>>>()?;
    let opts = McSuiteOptions {
        n_paths: args.paths,
        step: args.step,
        seed: args.seed,
        budget: budget(args.budget)?,
        ..McSuiteOptions::default()
    };
    let mut checks = Vec::new();
    for p in &params {
        checks.extend(match args.suite {
            Suite::Identities => identities(p, &IdentityTolerances::default())?,
            Suite::Mc => mc_suite(p, &opts)?,
        });
    }
    let suite = match args.suite {
        Suite::Identities => "identities",
        Suite::Mc => "mc",
    };
    let report = Report::new(suite, checks);
    for c in &report.checks {
        eprintln!(
            "{} {} alpha={} rho={} observed={:e} threshold={:e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            c.params.alpha,
            c.params.rho,
            c.observed,
            c.threshold
        );
    }
    let json = report.to_json();
    match &args.report {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None => println!("{json}"),
    }
    Ok(report.pass)
}

/// Parses `args` and runs the command. Exit code 0 on success, 1 when a
/// verification check fails, 2 on bad arguments or domain errors.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(a).map(|_| true),
        Command::Grid(a) => cmd_grid(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("stablepot: {e}");
            ExitCode::from(2)
        }
    }
}
