//! Command-line front end: argument types, report rows and output formats.
//!
//! Each subcommand produces a [`Report`], a list of rows with a fixed key
//! order. Reports render as an aligned table, CSV, or JSON (an object for a
//! single row, an array otherwise). Floats in JSON and CSV carry 17
//! significant digits.

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cubic::{contract_h, h_eta_diagonal_closed_form};
use crate::error::Error;
use crate::geometry::{bianchi_residual, killing_identity_residual, ricci_check, EidSweep, EidVerifier, GeometryContext};
use crate::lie::{casimir_ad, eta, random_element, Basis, OrthonormalBasis};
use crate::obstruction::{
    koiso_i_eta, koiso_i_eta_exact, nu_third_variation, ClosedForms, ContractionPath, ObstructionReport,
};
use crate::scalar::Scalar;
use crate::soliton::{cubic_moment_mc, isd_report, rigidity_verdict, EigenProbe, Space};
use crate::weyl::{hom_dim, hom_dim_brute_force, zero_set_classify, HomGroup};

/// Environment variable holding the default tolerance.
pub const TOLERANCE_ENV: &str = "SUN_RIGIDITY_TOL";
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Residual bound for `Psi(Lambda, 0)`.
pub const ZERO_SET_TOLERANCE: f64 = 1e-12;
/// Monte Carlo agreement in standard errors.
pub const MC_SIGMAS: f64 = 4.0;
/// Largest `n` for which Hom dimensions are cross-checked by enumeration.
pub const BRUTE_FORCE_MAX_N: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Pass = 0,
    Usage = 1,
    Failure = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Float,
    Exact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "sun-rigidity",
    version,
    about = "Verify Einstein deformations, Koiso's obstruction and solitonic rigidity for SU(n)"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,

    /// Run every acceptance check over an n-range instead of one subcommand.
    #[arg(long)]
    pub all: bool,

    /// Range for `--all`, inclusive: `3..8` or `3..=8`.
    #[arg(long, default_value = "3..8", requires = "all")]
    pub n_range: String,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Arithmetic for the geometric checks.
    #[arg(long, value_enum, default_value_t = Mode::Float, global = true)]
    pub mode: Mode,

    /// Absolute tolerance for residual checks.
    #[arg(long, env = TOLERANCE_ENV, default_value_t = DEFAULT_TOLERANCE, global = true)]
    pub tolerance: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub output: OutputFormat,

    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,

    /// Monte Carlo seed.
    #[arg(long, default_value_t = 7, global = true)]
    pub seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub samples: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Trace, divergence and Lichnerowicz checks for every basis direction.
    Eid {
        #[arg(long)]
        n: usize,
    },
    /// Koiso's obstruction on h_eta against the closed forms.
    Obstruction {
        /// A single n or an inclusive range such as `3..8`.
        #[arg(long)]
        n: String,
        /// Contract the Hessian terms over all indices.
        #[arg(long)]
        full: bool,
    },
    /// dim Hom(s^2 g, g) from Weyl-group characters.
    Homdim {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = HomGroup::Product)]
        group: HomGroup,
    },
    /// Zero set of the quadratic map Psi on su(n) + su(n).
    Zeroset {
        #[arg(long)]
        n: usize,
    },
    /// Third variation of the nu-entropy along h_eta.
    Nu3 {
        /// A single n or an inclusive range such as `3..8`.
        #[arg(long)]
        n: String,
    },
    /// ISD bookkeeping, cubic moment and rigidity verdict.
    Soliton {
        /// `cpM`, `grK,N` or `suN`.
        #[arg(long)]
        space: String,
    },
}

/// A cell in a report row.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    /// Emitted verbatim as a JSON number, e.g. an exact rational with denominator one.
    Number(String),
    Null,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if *v == 0.0 || (1e-4..1e6).contains(&v.abs()) => v.to_string(),
            Cell::Float(v) => format!("{v:e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) | Cell::Number(s) => s.clone(),
            Cell::Null => "-".to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => json_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serialization"),
            Cell::Number(s) => s.clone(),
            Cell::Null => "null".to_string(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => json_float(*v),
            Cell::Null => String::new(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            other => other.plain(),
        }
    }
}

/// 17 significant digits; non-finite values become `null`.
pub fn json_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

pub type Row = Vec<(&'static str, Cell)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub title: String,
    pub rows: Vec<Row>,
    /// Render JSON as an array even for one row.
    pub list: bool,
    pub pass: bool,
}

impl Report {
    fn single(title: impl Into<String>, row: Row, pass: bool) -> Self {
        Self {
            title: title.into(),
            rows: vec![row],
            list: false,
            pass,
        }
    }

    pub fn status(&self) -> ExitStatus {
        if self.pass {
            ExitStatus::Pass
        } else {
            ExitStatus::Failure
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_table(),
        }
    }

    pub fn to_json(&self) -> String {
        let objects: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let fields: Vec<String> = row
                    .iter()
                    .map(|(k, v)| format!("{}: {}", serde_json::to_string(k).expect("key"), v.json()))
                    .collect();
                format!("{{{}}}", fields.join(", "))
            })
            .collect();
        if self.list || objects.len() != 1 {
            format!("[\n  {}\n]\n", objects.join(",\n  "))
        } else {
            format!("{}\n", objects[0])
        }
    }

    fn header(&self) -> Vec<&'static str> {
        let mut keys: Vec<&'static str> = Vec::new();
        for row in &self.rows {
            for (k, _) in row {
                if !keys.contains(k) {
                    keys.push(k);
                }
            }
        }
        keys
    }

    fn lookup<'r>(row: &'r Row, key: &str) -> Option<&'r Cell> {
        row.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let keys = self.header();
        let mut out = keys.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = keys
                .iter()
                .map(|k| Self::lookup(row, k).map_or(String::new(), Cell::csv))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let keys = self.header();
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| {
                keys.iter()
                    .map(|k| Self::lookup(row, k).map_or(String::new(), Cell::plain))
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = keys
            .iter()
            .enumerate()
            .map(|(c, k)| body.iter().map(|r| r[c].len()).chain([k.len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let _ = writeln!(out, "{}", line(keys.clone()));
        let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "{}", line(dashes.iter().map(String::as_str).collect()));
        for r in &body {
            let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// A command-level failure, mapped onto an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Library(e) => match e {
                Error::InvalidDimension { .. }
                | Error::UnsupportedSpace(_)
                | Error::TooFewSamples { .. }
                | Error::InvalidPartition(_)
                | Error::InvalidProbe(_) => ExitStatus::Usage,
                _ => ExitStatus::Failure,
            },
            CliError::Io(_) => ExitStatus::Usage,
        }
    }
}

/// Parses `5`, `3..8` or `3..=8`; both forms of range are inclusive.
pub fn parse_n_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid n or range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = match s.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi.strip_prefix('=').unwrap_or(hi))?,
        None => {
            let n = num(s)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(bad());
    }
    Ok(range)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

fn require_n(n: usize, min: usize, what: &str) -> Result<(), CliError> {
    if n < min {
        Err(CliError::Usage(format!("{what} needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

fn eid_sweep<S: Scalar>(basis: Basis<S>, tolerance: f64) -> Result<EidSweep, CliError> {
    let ctx = GeometryContext::new(basis);
    Ok(EidVerifier::new(&ctx).sweep(tolerance)?)
}

pub fn cmd_eid(n: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    require_n(n, 2, "eid")?;
    let sweep = match cfg.mode {
        Mode::Float => eid_sweep(OrthonormalBasis::orthonormal(n)?, cfg.tolerance)?,
        Mode::Exact => eid_sweep(Basis::<BigRational>::integral(n)?, cfg.tolerance)?,
    };
    let row: Row = vec![
        ("n", n.into()),
        ("max_trace", sweep.max_trace.into()),
        ("max_div", sweep.max_div.into()),
        ("max_lichnerowicz", sweep.max_lichnerowicz.into()),
        ("pass", sweep.pass.into()),
    ];
    Ok(Report::single(
        format!("EID checks on SU({n}), {} directions", sweep.directions),
        row,
        sweep.pass,
    ))
}

fn obstruction_row<S: Scalar>(r: &ObstructionReport<S>, number: impl Fn(&S) -> Cell) -> Row {
    let ClosedForms {
        cubic,
        hess_a,
        hess_b,
        total,
    } = r.closed;
    vec![
        ("n", r.n.into()),
        ("term_cubic", number(&r.term_cubic)),
        ("closed_cubic", cubic.into()),
        ("term_hess_a", number(&r.term_hess_a)),
        ("closed_hess_a", hess_a.into()),
        ("term_hess_b", number(&r.term_hess_b)),
        ("closed_hess_b", hess_b.into()),
        ("i_total", number(&r.i_total)),
        ("closed_total", total.into()),
        ("match_cubic", r.match_cubic.into()),
        ("match_hess_a", r.match_hess_a.into()),
        ("match_hess_b", r.match_hess_b.into()),
        ("match_total", r.match_total.into()),
        ("pass", r.all_match().into()),
    ]
}

fn rational_cell(q: &BigRational) -> Cell {
    if q.is_integer() {
        Cell::Number(q.to_integer().to_string())
    } else {
        Cell::Text(q.to_string())
    }
}

pub fn cmd_obstruction(range: RangeInclusive<usize>, full: bool, cfg: &RunConfig) -> Result<Report, CliError> {
    require_n(*range.start(), 3, "obstruction")?;
    let path = if full {
        ContractionPath::Full
    } else {
        ContractionPath::Diagonal
    };
    let list = range.start() != range.end();
    let mut rows = Vec::new();
    let mut pass = true;
    for n in range {
        let row = match cfg.mode {
            Mode::Float => {
                let r = koiso_i_eta(n, path)?;
                pass &= r.all_match();
                obstruction_row(&r, |x| Cell::Float(*x))
            }
            Mode::Exact => {
                let r = koiso_i_eta_exact(n, path)?;
                pass &= r.all_match();
                obstruction_row(&r, rational_cell)
            }
        };
        rows.push(row);
    }
    Ok(Report {
        title: "Koiso obstruction I(h_eta) per unit volume".to_string(),
        rows,
        list,
        pass,
    })
}

/// The dimensions asserted for `Hom_W(s^2 t, t)`.
pub fn expected_hom_dim(n: usize, group: HomGroup) -> i64 {
    match (n, group) {
        (2, _) => 0,
        (_, HomGroup::Product) => 2,
        (_, HomGroup::Single) => 1,
    }
}

pub fn cmd_homdim(n: usize, group: HomGroup) -> Result<Report, CliError> {
    require_n(n, 2, "homdim")?;
    let r = hom_dim(n, group)?;
    let brute = if n <= BRUTE_FORCE_MAX_N {
        Some(hom_dim_brute_force(n, group)?.dimension)
    } else {
        None
    };
    let expected = expected_hom_dim(n, group);
    let pass = r.dimension == expected && brute.is_none_or(|b| b == r.dimension);
    let row: Row = vec![
        ("n", n.into()),
        ("group", group.to_string().into()),
        ("dimension", r.dimension.into()),
        ("brute_force", brute.into()),
        ("expected", expected.into()),
        ("pass", pass.into()),
    ];
    Ok(Report::single(format!("dim Hom_W(s^2 t, t), n = {n}"), row, pass))
}

pub fn cmd_zeroset(n: usize) -> Result<Report, CliError> {
    require_n(n, 2, "zeroset")?;
    let z = zero_set_classify(n)?;
    let pass = if z.odd {
        z.trivial_only
    } else {
        !z.trivial_only && z.psi_residual.is_some_and(|r| r < ZERO_SET_TOLERANCE)
    };
    let lambda = z
        .lambda_diagonal
        .as_ref()
        .map(|d| d.iter().map(|s| if *s > 0 { "i" } else { "-i" }).collect::<Vec<_>>().join(" "));
    let row: Row = vec![
        ("n", n.into()),
        ("trivial_only", z.trivial_only.into()),
        ("sign_patterns_checked", (z.sign_patterns_checked as usize).into()),
        ("admissible_patterns", (z.admissible_patterns as usize).into()),
        ("lambda_diagonal", lambda.into()),
        ("psi_residual", z.psi_residual.into()),
        ("conjugated_residual", z.conjugated_residual.into()),
        ("zero_set", z.description.clone().into()),
        ("pass", pass.into()),
    ];
    Ok(Report::single(format!("Zero set of Psi on su({n}) + su({n})"), row, pass))
}

pub fn cmd_nu3(range: RangeInclusive<usize>) -> Result<Report, CliError> {
    require_n(*range.start(), 3, "nu3")?;
    let list = range.start() != range.end();
    let mut rows = Vec::new();
    let mut pass = true;
    for n in range {
        let r = nu_third_variation(n)?;
        pass &= r.unstable;
        rows.push(vec![
            ("n", n.into()),
            ("m", r.m.into()),
            ("tau", r.tau.into()),
            ("coefficient", r.coefficient.into()),
            ("i_per_vol", r.i_per_vol.into()),
            ("product", r.product.into()),
            ("unstable", r.unstable.into()),
        ]);
    }
    Ok(Report {
        title: "Third variation of nu along h_eta".to_string(),
        rows,
        list,
        pass,
    })
}

pub fn cmd_soliton(space: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let space: Space = space.parse()?;
    let isd = isd_report(space)?;
    let mut row: Row = vec![
        ("space", isd.space.clone().into()),
        ("eid_dim", isd.eid_dim.into()),
        ("v_minus_2lambda_dim", isd.v_minus_2lambda_dim.into()),
    ];
    let mut pass = true;
    if let Space::Grassmannian { ambient, .. } = space {
        let verdict = rigidity_verdict(space)?;
        if space.is_projective() {
            let est = cubic_moment_mc(&EigenProbe::standard(ambient)?, cfg.samples, cfg.seed)?;
            pass = est.agrees_within(MC_SIGMAS);
            row.extend([
                ("exact", est.exact.into()),
                ("mc_mean", est.mc_mean.into()),
                ("mc_stderr", est.mc_stderr.into()),
                ("z_score", est.z_score().into()),
                ("samples", est.samples.into()),
                ("seed", (est.seed as i64).into()),
            ]);
        }
        row.push(("verdict", verdict.verdict.into()));
    }
    row.push(("pass", pass.into()));
    Ok(Report::single(format!("Solitonic data for {space}"), row, pass))
}

fn criterion(id: usize, claim: &str, pass: bool, detail: String) -> Row {
    vec![
        ("criterion", id.into()),
        ("claim", claim.into()),
        ("pass", pass.into()),
        ("detail", detail.into()),
    ]
}

/// Every acceptance check over `range` (clipped below at the smallest
/// admissible n for each check).
pub fn cmd_all(range: RangeInclusive<usize>, cfg: &RunConfig) -> Result<Report, CliError> {
    let lo = *range.start();
    let hi = *range.end();
    let obs_range = lo.max(3)..=hi.max(3);
    let mut rows = Vec::new();

    let start = Instant::now();
    let float = cmd_obstruction(obs_range.clone(), false, cfg)?;
    let exact_cfg = RunConfig {
        mode: Mode::Exact,
        ..cfg.clone()
    };
    let exact = cmd_obstruction(obs_range.clone(), false, &exact_cfg)?;
    let secs = start.elapsed().as_secs_f64();
    let totals_ok = float.rows.iter().zip(&exact.rows).all(|(f, e)| {
        Report::lookup(f, "match_total") == Some(&Cell::Bool(true))
            && Report::lookup(e, "match_total") == Some(&Cell::Bool(true))
    });
    rows.push(criterion(
        1,
        "I(h_eta) = 4n^3(n-1)(n-2), float and exact",
        totals_ok && secs < 60.0,
        format!("n = {obs_range:?}, {secs:.2} s"),
    ));
    rows.push(criterion(
        2,
        "per-term closed forms",
        float.pass && exact.pass,
        format!("n = {obs_range:?}"),
    ));

    let eid_hi = hi.clamp(3, 6);
    let mut eid_ok = true;
    let mut worst = 0.0f64;
    for n in lo.max(3)..=eid_hi {
        let r = cmd_eid(n, cfg)?;
        eid_ok &= r.pass;
        for key in ["max_trace", "max_div", "max_lichnerowicz"] {
            if let Some(Cell::Float(v)) = Report::lookup(&r.rows[0], key) {
                worst = worst.max(*v);
            }
        }
    }
    rows.push(criterion(
        3,
        "EID residuals below tolerance, left and right",
        eid_ok,
        format!("n = {}..={eid_hi}, max residual {worst:e}", lo.max(3)),
    ));

    let mut geo_ok = true;
    let mut geo_worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in 2..=8 {
        let basis = OrthonormalBasis::orthonormal(n)?;
        let ric = ricci_check(&GeometryContext::new(basis.clone()))?;
        geo_ok &= (ric - n as f64 / 2.0).abs() < 1e-10;
        for a in 0..basis.len() {
            let e = basis.element(a);
            let c = casimir_ad(&basis, e)?;
            geo_worst = geo_worst.max(c.distance(&e.scale(&(-2.0 * n as f64))));
        }
    }
    let probe_basis = OrthonormalBasis::orthonormal(4)?;
    for _ in 0..100 {
        let [x, y, z] = std::array::from_fn(|_| random_element(&probe_basis, &mut rng));
        geo_worst = geo_worst
            .max(killing_identity_residual(&x, &y, &z)?)
            .max(bianchi_residual(&x, &y, &z)?);
    }
    geo_ok &= geo_worst < 1e-10;
    rows.push(criterion(
        4,
        "Ric = n/2, Killing, Bianchi, Casimir -2n",
        geo_ok,
        format!("n = 2..=8, 100 probes, max residual {geo_worst:e}"),
    ));

    let mut hom_ok = true;
    for n in lo.min(2)..=hi.max(2) {
        for group in [HomGroup::Product, HomGroup::Single] {
            hom_ok &= cmd_homdim(n, group)?.pass;
        }
    }
    rows.push(criterion(
        5,
        "dim Hom: product 0/2, single 0/1",
        hom_ok,
        format!("n = {}..={}", lo.min(2), hi.max(2)),
    ));

    let mut zs_ok = true;
    for n in 2..=7 {
        zs_ok &= cmd_zeroset(n)?.pass;
    }
    rows.push(criterion(6, "zero set of Psi by parity", zs_ok, "n = 2..=7".to_string()));

    let mut h_ok = true;
    let mut h_off = 0.0f64;
    for n in obs_range.clone() {
        let basis = Basis::<BigRational>::integral(n)?;
        let h = contract_h(&eta(n)?, &basis)?;
        h_ok &= h.is_diagonal(0.0);
        for (a, idx) in basis.indices().iter().enumerate() {
            let value = h.get(a, a).clone() * basis.weight(a).clone();
            h_ok &= value == BigRational::from_i64(h_eta_diagonal_closed_form(n, *idx));
        }
        let float = contract_h(&eta(n)?, &OrthonormalBasis::orthonormal(n)?)?;
        h_off = h_off.max(float.max_off_diagonal());
    }
    rows.push(criterion(
        7,
        "h_eta diagonal values exact, off-diagonal small",
        h_ok && h_off < 1e-10,
        format!("n = {obs_range:?}, max off-diagonal {h_off:e}"),
    ));

    let soliton = cmd_soliton("cp2", cfg)?;
    let verdicts_ok = [("cp2", "isolated"), ("cp4", "isolated"), ("gr2,5", "weakly")].iter().all(|(s, want)| {
        s.parse::<Space>()
            .ok()
            .and_then(|sp| rigidity_verdict(sp).ok())
            .is_some_and(|v| v.verdict.starts_with(want))
    });
    rows.push(criterion(
        8,
        "cubic moment MC within 4 sigma; verdicts",
        soliton.pass && verdicts_ok,
        format!("{} samples, seed {}", cfg.samples, cfg.seed),
    ));

    let nu = cmd_nu3(obs_range.clone())?;
    rows.push(criterion(9, "nu third variation nonzero", nu.pass, format!("n = {obs_range:?}")));

    rows.sort_by_key(|r| match Report::lookup(r, "criterion") {
        Some(Cell::Int(id)) => *id,
        _ => i64::MAX,
    });
    let pass = rows.iter().all(|r| Report::lookup(r, "pass") == Some(&Cell::Bool(true)));
    Ok(Report {
        title: "Acceptance sweep".to_string(),
        rows,
        list: true,
        pass,
    })
}

/// Runs the parsed command line and returns the report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    cli.run.validate()?;
    let cfg = &cli.run;
    if cli.all {
        if cli.command.is_some() {
            return Err(CliError::Usage("--all cannot be combined with a subcommand".to_string()));
        }
        return cmd_all(parse_n_range(&cli.n_range)?, cfg);
    }
    match &cli.command {
        None => Err(CliError::Usage("a subcommand or --all is required".to_string())),
        Some(Command::Eid { n }) => cmd_eid(*n, cfg),
        Some(Command::Obstruction { n, full }) => cmd_obstruction(parse_n_range(n)?, *full, cfg),
        Some(Command::Homdim { n, group }) => cmd_homdim(*n, *group),
        Some(Command::Zeroset { n }) => cmd_zeroset(*n),
        Some(Command::Nu3 { n }) => cmd_nu3(parse_n_range(n)?),
        Some(Command::Soliton { space }) => cmd_soliton(space, cfg),
    }
}

/// Executes, writes the rendered report and returns the exit status.
pub fn run(cli: &Cli) -> ExitStatus {
    let result = execute(cli).and_then(|report| {
        let text = report.render(cli.run.output);
        match &cli.run.out {
            Some(path) => std::fs::write(path, &text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(report.status())
    });
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("sun-rigidity: {e}");
            e.status()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sun-rigidity").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_n_range("3..8").unwrap(), 3..=8);
        assert_eq!(parse_n_range("3..=8").unwrap(), 3..=8);
        assert_eq!(parse_n_range("5").unwrap(), 5..=5);
        assert!(parse_n_range("8..3").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn float_formatting() {
        assert_eq!(json_float(216.0), "2.1600000000000000e2");
        assert_eq!(json_float(f64::NAN), "null");
        let digits = json_float(0.1).split('e').next().unwrap().replace(['.', '-'], "").len();
        assert_eq!(digits, 17);
    }

    #[test]
    fn eid_json_keys_in_order() {
        let r = execute(&parse(&["eid", "--n", "3"])).unwrap();
        let json = r.to_json();
        let keys = ["\"n\"", "\"max_trace\"", "\"max_div\"", "\"max_lichnerowicz\"", "\"pass\""];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 5);
    }

    #[test]
    fn usage_errors() {
        let e = execute(&parse(&["obstruction", "--n", "2"])).unwrap_err();
        assert_eq!(e.status(), ExitStatus::Usage);
        let e = execute(&parse(&["eid", "--n", "1"])).unwrap_err();
        assert_eq!(e.status(), ExitStatus::Usage);
        let e = execute(&parse(&["soliton", "--space", "so3"])).unwrap_err();
        assert_eq!(e.status(), ExitStatus::Usage);
        let e = execute(&parse(&["--tolerance=-1", "zeroset", "--n", "3"])).unwrap_err();
        assert_eq!(e.status(), ExitStatus::Usage);
    }

    #[test]
    fn csv_escapes_commas() {
        let r = execute(&parse(&["zeroset", "--n", "4"])).unwrap();
        let csv = r.to_csv();
        assert!(csv.lines().nth(1).unwrap().contains("\"G-orbit of span{(Lambda,0),(0,Lambda)}"));
    }

    #[test]
    fn exact_obstruction_row() {
        let cfg = parse(&["--mode", "exact", "obstruction", "--n", "3"]);
        let r = execute(&cfg).unwrap();
        assert!(r.pass);
        assert_eq!(Report::lookup(&r.rows[0], "i_total"), Some(&Cell::Number("216".to_string())));
    }
}
