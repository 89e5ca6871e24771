//! Command-line front end: every subcommand turns a parameter map into a
//! [`ResultTable`].
//!
//! Exit codes: 0 success, 2 invalid input, 3 computational failure (pole
//! hit, non-convergence, I/O), 4 a failed `verify` check.

mod table;
mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Arg, ArgAction};
use serde::Serialize;

use crate::error::Error;
use crate::greenfn::{g0, ComplexEnergy, SpatialPoint};
use crate::pointgreen::{bound_states, green, DeltaCenter, SearchWindow};
use crate::renorm::{
    bare_from_renormalized, friedman_report, regularized_denominator, rg_shift, transmutation_energy, CouplingSpec,
    Cutoff,
};
use crate::scatter::{
    amplitude3d_with_policy, optical_theorem_residual, transmission1d, BranchPolicy,
};

pub use table::{emit, render, Column, Metadata, ResultTable};
pub use verify::{run_suite, Check};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{failed} of {total} verification checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(e) if e.is_validation() => 2,
            CliError::Library(_) | CliError::Io { .. } => 3,
            CliError::VerifyFailed { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Library(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::VerifyFailed { .. } => "VerifyFailed",
        }
    }

    /// `{"error": {"kind", "message", "exit_code"}}`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            kind: &'a str,
            message: String,
            exit_code: i32,
        }
        let payload = BTreeMap::from([(
            "error",
            Payload {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        )]);
        serde_json::to_string(&payload).expect("error payload serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    G0,
    Green,
    Bound,
    Scatter,
    Rgflow,
    Friedman,
    Trivial,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::G0,
        Command::Green,
        Command::Bound,
        Command::Scatter,
        Command::Rgflow,
        Command::Friedman,
        Command::Trivial,
        Command::Verify,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::G0 => "g0",
            Command::Green => "green",
            Command::Bound => "bound",
            Command::Scatter => "scatter",
            Command::Rgflow => "rgflow",
            Command::Friedman => "friedman",
            Command::Trivial => "trivial",
            Command::Verify => "verify",
        }
    }

    fn about(&self) -> &'static str {
        match self {
            Command::G0 => "Free Green's function on a list of separations",
            Command::Green => "Green's function with contact centers at points x, fixed y",
            Command::Bound => "Bound-state energies of a set of centers",
            Command::Scatter => "Scattering amplitude (3D) or transmission (1D) over k",
            Command::Rgflow => "Bare coupling versus cutoff at fixed physics",
            Command::Friedman => "D = 4 bubble split into removable and non-removable parts",
            Command::Trivial => "Fixed repulsive bare coupling: correction term versus cutoff",
            Command::Verify => "Run the oracle suite",
        }
    }

    /// `(key, required, repeatable, help)`
    fn params(&self) -> &'static [(&'static str, bool, bool, &'static str)] {
        match self {
            Command::G0 => &[
                ("dim", true, false, "dimension 1..3"),
                ("energy", false, false, "real energy (exclusive with --k)"),
                ("k", false, false, "wave number for the retarded energy k² + i0"),
                ("r", true, true, "separations, comma separated or repeated"),
            ],
            Command::Green => &[
                ("dim", true, false, "dimension 1..3"),
                ("energy", false, false, "real energy (exclusive with --k)"),
                ("k", false, false, "wave number for the retarded energy k² + i0"),
                ("center", true, true, "pos:lambda=..|lambdaR=..[,mu=..]|eb=.."),
                ("x", true, true, "field point, comma-separated coordinates"),
                ("y", true, false, "source point, comma-separated coordinates"),
            ],
            Command::Bound => &[
                ("dim", true, false, "dimension 1..3"),
                ("center", true, true, "pos:lambda=..|lambdaR=..[,mu=..]|eb=.."),
                ("emin", false, false, "lower end of the energy window (default -1e4)"),
                ("emax", false, false, "upper end of the energy window (default -1e-10)"),
                ("tol", false, false, "energy tolerance (default 1e-12)"),
            ],
            Command::Scatter => &[
                ("dim", true, false, "1 or 3"),
                ("eb", false, false, "bound-state energy (3D)"),
                ("lambda", false, false, "bare coupling (1D)"),
                ("k", true, true, "wave numbers"),
            ],
            Command::Rgflow => &[
                ("dim", true, false, "2 or 3"),
                ("lambdar", true, false, "renormalized coupling"),
                ("mu", false, false, "subtraction scale (2D)"),
                ("cutoff", true, true, "momentum cutoffs"),
            ],
            Command::Friedman => &[
                ("k", true, false, "K = sqrt(-E)"),
                ("cutoff", true, true, "momentum cutoffs, increasing"),
            ],
            Command::Trivial => &[
                ("dim", true, false, "2..4"),
                ("lambda", true, false, "positive bare coupling"),
                ("energy", true, false, "negative energy"),
                ("cutoff", true, true, "momentum cutoffs"),
            ],
            Command::Verify => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(CliError::Usage(format!("format must be json or csv, got '{other}'"))),
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, Vec<String>>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            output_format: OutputFormat::default(),
            output_path: None,
        }
    }

    pub fn param(mut self, key: &str, value: &str) -> Self {
        self.params.entry(key.into()).or_default().push(value.into());
        self
    }

    /// Rejects unknown keys, missing required keys and repeated scalars.
    pub fn validate(&self) -> Result<(), CliError> {
        let spec = self.command.params();
        for (key, values) in &self.params {
            let Some(&(_, _, repeatable, _)) = spec.iter().find(|p| p.0 == key) else {
                return Err(CliError::Usage(format!("unknown parameter '{key}' for {}", self.command)));
            };
            if values.is_empty() || (!repeatable && values.len() > 1) {
                return Err(CliError::Usage(format!("parameter '{key}' takes exactly one value")));
            }
        }
        for &(key, required, _, _) in spec {
            if required && !self.params.contains_key(key) {
                return Err(CliError::Usage(format!("missing required parameter '{key}' for {}", self.command)));
            }
        }
        Ok(())
    }
}

/// Builds the clap parser from the per-command parameter tables.
pub fn clap_command() -> clap::Command {
    let mut cmd = clap::Command::new("deltagreen")
        .version(VERSION)
        .about("Green's functions, bound states and scattering for contact potentials")
        .subcommand_required(true)
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .value_parser(["json", "csv"])
                .default_value("json"),
        )
        .arg(Arg::new("output").long("output").short('o').global(true).help("write to a file instead of stdout"));
    for c in Command::ALL {
        let mut sub = clap::Command::new(c.as_str()).about(c.about());
        for &(key, required, repeatable, help) in c.params() {
            sub = sub.arg(
                Arg::new(key)
                    .long(key)
                    .help(help)
                    .required(required)
                    .allow_hyphen_values(true)
                    .action(if repeatable { ArgAction::Append } else { ArgAction::Set }),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Parses command-line arguments into a config. Help and version requests
/// come back as `Ok(Err(text))`.
pub fn parse_args<I, T>(args: I) -> Result<std::result::Result<RunConfig, String>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match clap_command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Err(e.to_string())),
                _ => {
                    let text = e.to_string();
                    let first_paragraph: Vec<&str> = text
                        .lines()
                        .take_while(|l| !l.trim().is_empty())
                        .map(str::trim)
                        .collect();
                    Err(CliError::Usage(
                        first_paragraph.join(" ").trim_start_matches("error: ").to_string(),
                    ))
                }
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command: Command = name.parse()?;
    let mut config = RunConfig::new(command);
    for &(key, _, _, _) in command.params() {
        if let Some(values) = sub.get_many::<String>(key) {
            let entry = config.params.entry(key.into()).or_default();
            entry.extend(values.cloned());
        }
    }
    config.output_format = matches.get_one::<String>("format").map(|s| s.parse()).transpose()?.unwrap_or_default();
    config.output_path = matches.get_one::<String>("output").map(PathBuf::from);
    Ok(Ok(config))
}

// ---- parameter access ----

struct Params<'a>(&'a BTreeMap<String, Vec<String>>);

fn parse_f64(key: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("parameter '{key}': '{s}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("parameter '{key}' must be finite")))
    }
}

impl Params<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).and_then(|v| v.first()).map(String::as_str)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key).map(|s| parse_f64(key, s)).transpose()
    }

    fn req_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key)?
            .ok_or_else(|| CliError::Usage(format!("missing required parameter '{key}'")))
    }

    fn dim(&self) -> Result<usize, CliError> {
        let s = self.raw("dim").ok_or_else(|| CliError::Usage("missing required parameter 'dim'".into()))?;
        s.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter 'dim': '{s}' is not an integer")))
    }

    /// All values, with comma-separated lists flattened.
    fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.0
            .get(key)
            .into_iter()
            .flatten()
            .flat_map(|s| s.split(','))
            .map(|s| parse_f64(key, s))
            .collect()
    }

    fn strings(&self, key: &str) -> Vec<&str> {
        self.0.get(key).into_iter().flatten().map(String::as_str).collect()
    }

    fn energy(&self) -> Result<ComplexEnergy, CliError> {
        match (self.f64("energy")?, self.f64("k")?) {
            (Some(e), None) => Ok(ComplexEnergy::real(e)?),
            (None, Some(k)) => Ok(ComplexEnergy::retarded(k)?),
            _ => Err(CliError::Usage("give exactly one of --energy and --k".into())),
        }
    }
}

fn parse_point(dim: usize, s: &str) -> Result<SpatialPoint, CliError> {
    let coords = s.split(',').map(|c| parse_f64("point", c)).collect::<Result<Vec<_>, _>>()?;
    if coords.len() != dim {
        return Err(CliError::Usage(format!("point '{s}' needs {dim} coordinates")));
    }
    Ok(SpatialPoint::new(coords)?)
}

/// `pos:lambda=v`, `pos:lambdaR=v[,mu=m]` or `pos:eb=v`.
pub fn parse_center(dim: usize, s: &str) -> Result<DeltaCenter, CliError> {
    let (pos, spec) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("center '{s}' must look like pos:spec")))?;
    let mut fields = BTreeMap::new();
    for part in spec.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("center spec '{spec}': expected key=value")))?;
        if fields.insert(k.trim(), parse_f64(k, v)?).is_some() {
            return Err(CliError::Usage(format!("center spec '{spec}' repeats '{k}'")));
        }
    }
    let keys: Vec<&str> = fields.keys().copied().collect();
    let coupling = match keys.as_slice() {
        ["lambda"] => CouplingSpec::Bare1D { lambda: fields["lambda"] },
        ["lambdaR"] => CouplingSpec::Ren3D { lambda_r: fields["lambdaR"] },
        ["lambdaR", "mu"] => CouplingSpec::Ren2D {
            lambda_r: fields["lambdaR"],
            mu: fields["mu"],
        },
        ["eb"] => CouplingSpec::FromBoundState { e_b: fields["eb"] },
        _ => return Err(CliError::Usage(format!("center spec '{spec}' is not lambda=, lambdaR=[,mu=] or eb="))),
    };
    Ok(DeltaCenter::new(parse_point(dim, pos)?, coupling)?)
}

fn cutoffs(p: &Params) -> Result<Vec<Cutoff>, CliError> {
    p.list("cutoff")?.into_iter().map(|c| Cutoff::new(c).map_err(CliError::from)).collect()
}

/// Executes a validated config. `verify` failures are reported in the
/// table's `passed` column; see [`verify_failures`].
pub fn run(config: &RunConfig, policy: BranchPolicy) -> Result<ResultTable, CliError> {
    config.validate()?;
    let p = Params(&config.params);
    let metadata = Metadata {
        command: config.command.as_str().into(),
        params: config.params.clone(),
        version: VERSION.into(),
        branch_policy: policy.as_str().into(),
        labels: Vec::new(),
    };
    let col = Column::new;
    let mut t;
    match config.command {
        Command::G0 => {
            let dim = p.dim()?;
            let energy = p.energy()?;
            t = ResultTable::new(
                metadata,
                vec![col("r", "length"), col("re_g0", "length^(2-D)"), col("im_g0", "length^(2-D)")],
            );
            let origin = SpatialPoint::origin(dim)?;
            for r in p.list("r")? {
                let v = g0(dim, energy, &origin, &SpatialPoint::along_first_axis(dim, r)?)?.value;
                t.push(vec![r, v.re, v.im]);
            }
        }
        Command::Green => {
            let dim = p.dim()?;
            let energy = p.energy()?;
            let centers = p.strings("center").into_iter().map(|s| parse_center(dim, s)).collect::<Result<Vec<_>, _>>()?;
            let y = parse_point(dim, p.raw("y").unwrap_or_default())?;
            let mut cols: Vec<Column> = (1..=dim).map(|i| Column::new(&format!("x{i}"), "length")).collect();
            cols.extend((1..=dim).map(|i| Column::new(&format!("y{i}"), "length")));
            cols.push(col("re_g", "length^(2-D)"));
            cols.push(col("im_g", "length^(2-D)"));
            t = ResultTable::new(metadata, cols);
            for xs in p.strings("x") {
                let x = parse_point(dim, xs)?;
                let g = green(dim, energy, &x, &y, &centers)?.value;
                let mut row: Vec<f64> = x.coords().to_vec();
                row.extend_from_slice(y.coords());
                row.extend([g.re, g.im]);
                t.push(row);
            }
        }
        Command::Bound => {
            let dim = p.dim()?;
            let centers = p.strings("center").into_iter().map(|s| parse_center(dim, s)).collect::<Result<Vec<_>, _>>()?;
            let window = SearchWindow::new(p.f64("emin")?.unwrap_or(-1e4), p.f64("emax")?.unwrap_or(-1e-10))?;
            let tol = p.f64("tol")?.unwrap_or(1e-12);
            t = ResultTable::new(metadata, vec![col("energy", "1/length^2"), col("kappa", "1/length")]);
            for s in bound_states(dim, &centers, window, tol)? {
                t.push(vec![s.energy, s.kappa()]);
            }
        }
        Command::Scatter => {
            let dim = p.dim()?;
            let ks = p.list("k")?;
            match dim {
                3 => {
                    let e_b = p.req_f64("eb")?;
                    if p.raw("lambda").is_some() {
                        return Err(CliError::Usage("--lambda applies to dim 1 only".into()));
                    }
                    t = ResultTable::new(
                        metadata,
                        vec![
                            col("k", "1/length"),
                            col("re_f", "length"),
                            col("im_f", "length"),
                            col("abs_f_squared", "length^2"),
                            col("sigma", "length^2"),
                            col("optical_residual", "length"),
                        ],
                    );
                    for k in ks {
                        let amp = amplitude3d_with_policy(k, e_b, policy)?;
                        let sigma = 4.0 * std::f64::consts::PI * amp.modulus_squared();
                        let residual = optical_theorem_residual(k, e_b, policy)?;
                        t.push(vec![k, amp.f.re, amp.f.im, amp.modulus_squared(), sigma, residual]);
                    }
                }
                1 => {
                    let lambda = p.req_f64("lambda")?;
                    if p.raw("eb").is_some() {
                        return Err(CliError::Usage("--eb applies to dim 3 only".into()));
                    }
                    t = ResultTable::new(
                        metadata,
                        vec![col("k", "1/length"), col("transmission", "1"), col("reflection", "1")],
                    );
                    for k in ks {
                        let (tt, rr) = transmission1d(k, lambda)?;
                        t.push(vec![k, tt, rr]);
                    }
                }
                d => return Err(Error::UnsupportedDim(d).into()),
            }
        }
        Command::Rgflow => {
            let dim = p.dim()?;
            let lambda_r = p.req_f64("lambdar")?;
            let caps = cutoffs(&p)?;
            match dim {
                2 => {
                    let mu = p.req_f64("mu")?;
                    let spec = CouplingSpec::Ren2D { lambda_r, mu };
                    t = ResultTable::new(
                        metadata,
                        vec![
                            col("scale", "1/length"),
                            col("bare_lambda", "1"),
                            col("lambda_r_at_scale", "1"),
                            col("e_b", "1/length^2"),
                        ],
                    );
                    for c in caps {
                        let bare = bare_from_renormalized(2, spec, c)?;
                        let shifted = rg_shift(lambda_r, mu, c.value())?;
                        let e_b = transmutation_energy(shifted, c.value())?;
                        t.push(vec![c.value(), bare, shifted, e_b]);
                    }
                }
                3 => {
                    if p.raw("mu").is_some() {
                        return Err(CliError::Usage("--mu applies to dim 2 only".into()));
                    }
                    let spec = CouplingSpec::Ren3D { lambda_r };
                    t = ResultTable::new(
                        metadata,
                        vec![
                            col("scale", "1/length"),
                            col("bare_lambda", "length"),
                            col("bare_lambda_times_scale", "1"),
                        ],
                    );
                    for c in caps {
                        let bare = bare_from_renormalized(3, spec, c)?;
                        t.push(vec![c.value(), bare, bare * c.value()]);
                    }
                }
                d => return Err(Error::UnsupportedDim(d).into()),
            }
        }
        Command::Friedman => {
            let k = p.req_f64("k")?;
            t = ResultTable::new(
                metadata,
                vec![
                    col("cutoff", "1/length"),
                    col("total_bubble", "1/length^2"),
                    col("quadratic_part", "1/length^2"),
                    col("nonremovable_part", "1/length^2"),
                ],
            );
            for row in friedman_report(k, &cutoffs(&p)?)? {
                t.push(vec![row.cutoff, row.total_bubble, row.quadratic_part, row.nonremovable_part]);
            }
        }
        Command::Trivial => {
            let dim = p.dim()?;
            if !(2..=4).contains(&dim) {
                return Err(Error::UnsupportedDim(dim).into());
            }
            let lambda = p.req_f64("lambda")?;
            if !(lambda > 0.0) {
                return Err(Error::InvalidInput(format!("trivial needs a repulsive coupling, got {lambda}")).into());
            }
            let energy = p.req_f64("energy")?;
            t = ResultTable::new(
                metadata,
                vec![col("cutoff", "1/length"), col("denominator", "length^(D-2)"), col("correction", "length^(2-D)")],
            );
            for c in cutoffs(&p)? {
                let d = regularized_denominator(dim, lambda, energy, c)?;
                t.push(vec![c.value(), d, 1.0 / d]);
            }
        }
        Command::Verify => {
            let checks = run_suite();
            let mut metadata = metadata;
            metadata.labels = checks.iter().map(|c| c.name.to_string()).collect();
            t = ResultTable::new(
                metadata,
                vec![col("check", "1"), col("error", "1"), col("tolerance", "1"), col("passed", "1")],
            );
            for (i, c) in checks.iter().enumerate() {
                // keep the JSON numeric when a check errored out
                let error = if c.error.is_finite() { c.error } else { f64::MAX };
                t.push(vec![i as f64, error, c.tolerance, if c.passed() { 1.0 } else { 0.0 }]);
            }
        }
    }
    Ok(t)
}

/// Number of failed checks in a `verify` table.
pub fn verify_failures(table: &ResultTable) -> usize {
    match table.column("passed") {
        Some(i) if table.metadata.command == "verify" => table.rows.iter().filter(|r| r[i] != 1.0).count(),
        _ => 0,
    }
}

/// Full CLI: parse, run, emit. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = (|| -> Result<Option<String>, CliError> {
        let config = match parse_args(args)? {
            Ok(c) => c,
            Err(text) => return Ok(Some(text)),
        };
        let policy = BranchPolicy::from_env()?;
        let table = run(&config, policy)?;
        emit(&table, config.output_format, config.output_path.as_deref())?;
        let failed = verify_failures(&table);
        if failed > 0 {
            return Err(CliError::VerifyFailed {
                failed,
                total: table.rows.len(),
            });
        }
        Ok(None)
    })();
    match result {
        Ok(Some(text)) => {
            print!("{text}");
            0
        }
        Ok(None) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
