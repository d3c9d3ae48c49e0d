//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on domain errors (invalid channel,
//! observable, parameters, failed verification), 2 on I/O errors. Errors
//! are reported as a single JSON line `{"error": kind, "message": ..}` on
//! stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::compatibility::{
    dual_certificate, ellipsoid_sample, is_compatible_with_tolerance, optimal_primal, s_max,
    sharpest_direction, simplex_region_sample, EllipsoidSample, VERDICT_TOL,
};
use crate::error::Error;
use crate::formats::{
    self, certificate_json, csv_number, ellipsoid_csv, family_channel, family_range, num,
    num_array, observable_json, parse_certificate, parse_channel, parse_direction, parse_hermitian,
    parse_json, parse_observable, simplex_csv, ChannelInput, FAMILY_HEADER,
};
use crate::observables::{BinaryObservable, UnbiasedBinaryObservable};
use crate::verify::{certificate_check, instrument_consistency, primal_search};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "pauli-compat",
    version,
    about = "Compatibility of unbiased qubit observables with Pauli and unital qubit channels"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for randomized commands.
    #[arg(long, global = true, env = "PAULI_COMPAT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ChannelArg {
    /// Channel as inline JSON: {"p":[..]}, {"family":..,"param":..} or {"bloch":[[..],..]}.
    #[arg(long)]
    pub channel: Option<String>,
    /// Channel JSON file (the inline form wins if both are given).
    #[arg(long)]
    pub channel_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ObsArg {
    /// Observable as inline JSON: {"s":..,"n":[x,y,z]}.
    #[arg(long)]
    pub obs: Option<String>,
    /// Observable JSON file (the inline form wins if both are given).
    #[arg(long)]
    pub obs_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DirectionArg {
    /// Bloch direction as inline JSON [x,y,z]; normalised.
    #[arg(long)]
    pub n: Option<String>,
    /// Direction JSON file (the inline form wins if both are given).
    #[arg(long)]
    pub n_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Compatibility verdict for an observable and a channel.
    Check {
        #[command(flatten)]
        channel: ChannelArg,
        #[command(flatten)]
        obs: ObsArg,
        /// Slack on s ≤ s_max.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Largest compatible sharpness along a direction, or along the best
    /// axis when no direction is given.
    Smax {
        #[command(flatten)]
        channel: ChannelArg,
        #[command(flatten)]
        n: DirectionArg,
    },
    /// Dual certificate for the bound s_max, or a feasibility check of one.
    Certify {
        #[command(flatten)]
        channel: ChannelArg,
        #[command(flatten)]
        n: DirectionArg,
        /// Certificate JSON to check instead of producing one.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Boundary of the compatible region in observable space, as CSV.
    RegionEllipsoid {
        #[command(flatten)]
        channel: ChannelArg,
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
    /// Compatible Pauli channels on a simplex grid, as CSV.
    RegionSimplex {
        #[command(flatten)]
        obs: ObsArg,
        /// Grid points per simplex edge.
        #[arg(long, default_value_t = 21)]
        resolution: usize,
    },
    /// s_max along a direction across a one-parameter channel family, as CSV.
    Family {
        /// depolarizing, phase_damping, measure_and_prepare or luders_z.
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[command(flatten)]
        n: DirectionArg,
    },
    /// Monte-Carlo check of the instrument built from an ancilla observable.
    VerifyInstrument {
        #[command(flatten)]
        channel: ChannelArg,
        #[command(flatten)]
        n: DirectionArg,
        /// Ancilla effect A′(+) as {"plus_re":[[..]],"plus_im":[[..]]};
        /// defaults to the optimal one along the direction.
        #[arg(long)]
        aprime: Option<String>,
        #[arg(long)]
        aprime_file: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Largest accepted deviation.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Randomized primal search for a lower bound on s_max.
    Search {
        #[command(flatten)]
        channel: ChannelArg,
        #[command(flatten)]
        n: DirectionArg,
        #[arg(long, default_value_t = 10_000)]
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Domain { kind: String, message: String },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 1,
            CliError::Io(_) => 2,
        }
    }

    /// One-line JSON diagnostic.
    pub fn diagnostic(&self) -> String {
        let (kind, message) = match self {
            CliError::Domain { kind, message } => (kind.as_str(), message.as_str()),
            CliError::Io(message) => ("io", message.as_str()),
        };
        json!({ "error": kind, "message": message }).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn domain(kind: &str, message: impl Into<String>) -> CliError {
    CliError::Domain {
        kind: kind.into(),
        message: message.into(),
    }
}

/// Result of a command: the document to write, plus a failure to report
/// after writing it.
pub struct CommandOutput {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for CommandOutput {
    fn from(text: String) -> Self {
        CommandOutput { text, failure: None }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load(inline: &Option<String>, file: &Option<PathBuf>, what: &str) -> Result<Option<Value>, CliError> {
    let text = match (inline, file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => return Ok(None),
    };
    Ok(Some(parse_json(&text).map_err(|e| domain("parse", format!("{what}: {e}")))?))
}

fn require(v: Option<Value>, flag: &str) -> Result<Value, CliError> {
    v.ok_or_else(|| domain("missing_argument", format!("--{flag} or --{flag}-file is required")))
}

impl ChannelArg {
    fn value(&self) -> Result<Option<Value>, CliError> {
        load(&self.channel, &self.channel_file, "channel")
    }

    fn resolve(&self) -> Result<ChannelInput, CliError> {
        Ok(parse_channel(&require(self.value()?, "channel")?)?)
    }
}

impl ObsArg {
    fn resolve(&self) -> Result<UnbiasedBinaryObservable, CliError> {
        let v = require(load(&self.obs, &self.obs_file, "observable")?, "obs")?;
        Ok(parse_observable(&v)?)
    }
}

impl DirectionArg {
    fn value(&self) -> Result<Option<Value>, CliError> {
        load(&self.n, &self.n_file, "direction")
    }

    fn resolve(&self) -> Result<Option<[f64; 3]>, CliError> {
        Ok(self.value()?.map(|v| parse_direction(&v)).transpose()?)
    }

    fn require(&self) -> Result<[f64; 3], CliError> {
        Ok(parse_direction(&require(self.value()?, "n")?)?)
    }
}

fn positive(tol: Option<f64>, default: f64) -> Result<f64, CliError> {
    match tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(domain("parameter_out_of_range", format!("tolerance must be positive, got {t}"))),
    }
}

fn json_line(doc: Map<String, Value>) -> String {
    let mut s = Value::Object(doc).to_string();
    s.push('\n');
    s
}

fn cmd_check(channel: &ChannelArg, obs: &ObsArg, tol: Option<f64>) -> Result<CommandOutput, CliError> {
    let ch = channel.resolve()?;
    let obs = obs.resolve()?;
    let tol = positive(tol, VERDICT_TOL)?;
    let seen = UnbiasedBinaryObservable::new(obs.sharpness(), ch.pauli_direction(obs.direction()))?;
    let v = is_compatible_with_tolerance(&seen, &ch.pauli, tol);
    let mut doc = Map::new();
    doc.insert("compatible".into(), Value::from(v.compatible));
    doc.insert("s_max".into(), num(v.s_max));
    doc.insert("ellipsoid_lhs".into(), num(v.ellipsoid_lhs));
    doc.insert(
        "degenerate_axes".into(),
        Value::from(v.degenerate_axes.iter().map(|j| j + 1).collect::<Vec<_>>()),
    );
    doc.insert("channel".into(), ch.echo.clone());
    doc.insert("obs".into(), observable_json(&obs));
    Ok(json_line(doc).into())
}

fn cmd_smax(channel: &ChannelArg, n: &DirectionArg) -> Result<CommandOutput, CliError> {
    let ch = channel.resolve()?;
    let mut doc = Map::new();
    match n.resolve()? {
        Some(n) => {
            doc.insert("s_max".into(), num(s_max(&ch.pauli, ch.pauli_direction(n))?));
            doc.insert("n".into(), num_array(&n));
        }
        None => {
            let best = sharpest_direction(&ch.pauli);
            let mut axis = [0.0; 3];
            axis[best.axis - 1] = 1.0;
            doc.insert("s_max".into(), num(best.s_max));
            doc.insert("axis".into(), Value::from(best.axis));
            doc.insert("tie".into(), Value::from(best.tie));
            doc.insert("n".into(), num_array(&ch.observable_direction(axis)));
        }
    }
    doc.insert("channel".into(), ch.echo.clone());
    Ok(json_line(doc).into())
}

fn cmd_certify(channel: &ChannelArg, n: &DirectionArg, check: &Option<PathBuf>) -> Result<CommandOutput, CliError> {
    if let Some(path) = check {
        let doc = parse_json(&read_file(path)?).map_err(|e| domain("parse", e.to_string()))?;
        let ch = match channel.value()? {
            Some(v) => parse_channel(&v)?,
            None => parse_channel(&doc)?,
        };
        let dir = match n.resolve()? {
            Some(d) => d,
            None => parse_direction(&doc)?,
        };
        let cert = parse_certificate(&doc)?;
        let check = certificate_check(&cert, &ch.pauli, ch.pauli_direction(dir))?;
        let mut out = Map::new();
        out.insert("feasible".into(), Value::from(check.feasible));
        out.insert("upper_bound".into(), num(check.upper_bound));
        out.insert("min_eig_lambda".into(), num(check.min_eig_lambda));
        out.insert("min_eig_gap".into(), num(check.min_eig_gap));
        out.insert("normalization_error".into(), num(check.normalization_error));
        out.insert("channel".into(), ch.echo.clone());
        out.insert("n".into(), num_array(&dir));
        return Ok(json_line(out).into());
    }
    let ch = channel.resolve()?;
    let dir = n.require()?;
    let seen = ch.pauli_direction(dir);
    let cert = dual_certificate(&ch.pauli, seen)?;
    let smax = s_max(&ch.pauli, seen)?;
    let check = certificate_check(&cert, &ch.pauli, seen)?;
    let mut doc = certificate_json(&cert, smax);
    doc.insert("upper_bound".into(), num(check.upper_bound));
    doc.insert("gap".into(), num(check.upper_bound - smax));
    doc.insert("feasible".into(), Value::from(check.feasible));
    doc.insert("channel".into(), ch.echo.clone());
    doc.insert("n".into(), num_array(&dir));
    Ok(json_line(doc).into())
}

fn rotate_sample(ch: &ChannelInput, mut sample: EllipsoidSample) -> EllipsoidSample {
    if ch.input_rotation.is_some() {
        for v in &mut sample.points {
            *v = ch.observable_direction(*v);
        }
    }
    sample
}

fn cmd_region_ellipsoid(channel: &ChannelArg, count: usize) -> Result<CommandOutput, CliError> {
    if count == 0 {
        return Err(domain("parameter_out_of_range", "--count must be at least 1"));
    }
    let ch = channel.resolve()?;
    let sample = rotate_sample(&ch, ellipsoid_sample(&ch.pauli, count));
    Ok(ellipsoid_csv(&sample).into())
}

fn cmd_region_simplex(obs: &ObsArg, resolution: usize) -> Result<CommandOutput, CliError> {
    let obs = obs.resolve()?;
    Ok(simplex_csv(&simplex_region_sample(&obs, resolution)?).into())
}

fn cmd_family(
    name: &str,
    steps: usize,
    from: Option<f64>,
    to: Option<f64>,
    n: &DirectionArg,
) -> Result<CommandOutput, CliError> {
    let (lo, hi) = family_range(name)?;
    let (a, b) = (from.unwrap_or(lo), to.unwrap_or(hi));
    if steps < 2 {
        return Err(domain("parameter_out_of_range", "--steps must be at least 2"));
    }
    let dir = n.resolve()?.unwrap_or([0.0, 0.0, 1.0]);
    let mut out = format!(
        "{FAMILY_HEADER}\n# family: {name} n={},{},{}\nparam,p0,p1,p2,p3,s_max\n",
        csv_number(dir[0]),
        csv_number(dir[1]),
        csv_number(dir[2])
    );
    for i in 0..steps {
        let t = if i + 1 == steps {
            b
        } else {
            a + (b - a) * i as f64 / (steps - 1) as f64
        };
        let ch = family_channel(name, Some(t))?;
        let p = ch.probabilities().map(csv_number);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_number(t),
            p[0],
            p[1],
            p[2],
            p[3],
            csv_number(s_max(&ch, dir)?)
        ));
    }
    Ok(out.into())
}

fn cmd_verify_instrument(
    channel: &ChannelArg,
    n: &DirectionArg,
    aprime: &Option<String>,
    aprime_file: &Option<PathBuf>,
    trials: usize,
    tol: Option<f64>,
    seed: u64,
) -> Result<CommandOutput, CliError> {
    let ch = channel.resolve()?;
    let tol = positive(tol, 1e-9)?;
    let dir = n.resolve()?;
    let mut doc = Map::new();
    let effect = match load(aprime, aprime_file, "aprime")? {
        Some(v) => {
            let effect = parse_hermitian(&v, "plus")?;
            doc.extend(formats::hermitian_json(&effect, "plus"));
            effect
        }
        None => {
            let dir = dir.ok_or_else(|| domain("missing_argument", "--n or --aprime is required"))?;
            match optimal_primal(&ch.pauli, ch.pauli_direction(dir)) {
                Ok(primal) => primal.a_prime_plus,
                Err(Error::DegenerateDirection) => crate::linalg::HermitianOp::identity(4).scale(0.5),
                Err(e) => return Err(e.into()),
            }
        }
    };
    let aprime = BinaryObservable::from_effect(effect)?;
    let check = instrument_consistency(&aprime, &ch.pauli, trials, seed)?;
    let passed = check.passes(tol);
    doc.insert("max_channel_error".into(), num(check.max_channel_error));
    doc.insert("max_probability_error".into(), num(check.max_probability_error));
    doc.insert("trials".into(), Value::from(check.trials));
    doc.insert("seed".into(), Value::from(seed));
    doc.insert("tolerance".into(), num(tol));
    doc.insert("passed".into(), Value::from(passed));
    doc.insert("channel".into(), ch.echo.clone());
    if let Some(d) = dir {
        doc.insert("n".into(), num_array(&d));
    }
    let failure = (!passed).then(|| {
        domain(
            "verification_failed",
            format!(
                "instrument deviates by {:.3e} (channel) / {:.3e} (probabilities)",
                check.max_channel_error, check.max_probability_error
            ),
        )
    });
    Ok(CommandOutput {
        text: json_line(doc),
        failure,
    })
}

fn cmd_search(channel: &ChannelArg, n: &DirectionArg, iterations: usize, seed: u64) -> Result<CommandOutput, CliError> {
    let ch = channel.resolve()?;
    let dir = n.require()?;
    let seen = ch.pauli_direction(dir);
    let report = primal_search(&ch.pauli, seen, iterations, seed)?;
    let upper = dual_certificate(&ch.pauli, seen)?.upper_bound();
    let mut doc = Map::new();
    doc.insert("best_s".into(), num(report.best_s));
    doc.insert("upper_bound".into(), num(upper));
    doc.insert("gap".into(), num(upper - report.best_s));
    doc.insert("seed".into(), Value::from(report.seed));
    doc.insert("iterations".into(), Value::from(report.iterations));
    doc.insert("channel".into(), ch.echo.clone());
    doc.insert("n".into(), num_array(&dir));
    Ok(json_line(doc).into())
}

/// Executes one command and returns its output document.
pub fn run(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    match &cfg.command {
        Command::Check { channel, obs, tol } => cmd_check(channel, obs, *tol),
        Command::Smax { channel, n } => cmd_smax(channel, n),
        Command::Certify { channel, n, check } => cmd_certify(channel, n, check),
        Command::RegionEllipsoid { channel, count } => cmd_region_ellipsoid(channel, *count),
        Command::RegionSimplex { obs, resolution } => cmd_region_simplex(obs, *resolution),
        Command::Family { name, steps, from, to, n } => cmd_family(name, *steps, *from, *to, n),
        Command::VerifyInstrument {
            channel,
            n,
            aprime,
            aprime_file,
            trials,
            tol,
        } => cmd_verify_instrument(channel, n, aprime, aprime_file, *trials, *tol, cfg.seed),
        Command::Search {
            channel,
            n,
            iterations,
        } => cmd_search(channel, n, *iterations, cfg.seed),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// Runs a parsed configuration, writing output and diagnostics; returns the
/// process exit status.
pub fn execute(cfg: &RunConfig) -> i32 {
    let result = run(cfg).and_then(|out| {
        emit(cfg, &out.text)?;
        out.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            e.exit_code()
        }
    }
}

/// Entry point for the binary: parses `std::env::args`.
pub fn main() -> i32 {
    execute(&RunConfig::parse())
}
