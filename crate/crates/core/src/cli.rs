//! Command-line front end.
//!
//! Settings are resolved in three layers: built-in defaults, then a `key = value` config file
//! (`--config`), then command-line flags.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cf::{expand, stats};
use crate::density::{
    compute_constants, iterate_ftilde, solve_ladder, write_grid_function, Grid, GridFunction, IterationPolicy,
    LadderParams,
};
use crate::empirics::{chi_square_geometric, iteration_slope, simulate, write_histogram_csv, SampleConfig};
use crate::error::{Error, Result};
use crate::gcd::{gcd_binary, gcd_extended};
use crate::mellin::{log_spaced, mellin_table, p_max, write_mellin_csv};
use crate::natural::Natural;
use crate::operators::{
    build_b2_matrix, f1_and_g1, k_from_vallee_formula, spectrum, spectrum_dense, vallee_sum, GFunction,
};
use crate::real::{BigReal, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("expected json, csv or text, got {s:?}")),
        }
    }
}

/// `auto` (iterate until the change drops below `1e-14`) or a fixed count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    Auto,
    Fixed(usize),
}

impl FromStr for Iterations {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Iterations::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Iterations::Fixed(n)),
            _ => Err(format!("expected \"auto\" or a positive integer, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub grid_level: u32,
    pub z_max: f64,
    pub extrapolations: usize,
    pub interpolation_r: usize,
    pub iterations: Iterations,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 200,
            grid_level: 12,
            z_max: 11.0,
            extrapolations: 4,
            interpolation_r: 4,
            iterations: Iterations::Auto,
            seed: 1,
            output_format: OutputFormat::Text,
            cache_dir: None,
            threads: None,
        }
    }
}

fn invalid(name: &str, value: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("invalid value {value:?} for {name}: {why}"))
}

fn parse_field<T: FromStr>(name: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| invalid(name, value, e))
}

impl RunConfig {
    /// Applies a config file: `key = value` lines, `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", no + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "precision_bits" => self.precision_bits = parse_field(key, value)?,
            "grid_level" => self.grid_level = parse_field(key, value)?,
            "z_max" => self.z_max = parse_field(key, value)?,
            "extrapolations" => self.extrapolations = parse_field(key, value)?,
            "interpolation_r" => self.interpolation_r = parse_field(key, value)?,
            "iterations" => self.iterations = parse_field(key, value)?,
            "seed" => self.seed = parse_field(key, value)?,
            "output_format" => self.output_format = parse_field(key, value)?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_field(key, value)?),
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, g: &GlobalArgs) {
        if let Some(v) = g.precision_bits {
            self.precision_bits = v;
        }
        if let Some(v) = g.grid_level {
            self.grid_level = v;
        }
        if let Some(v) = g.z_max {
            self.z_max = v;
        }
        if let Some(v) = g.extrapolations {
            self.extrapolations = v;
        }
        if let Some(v) = g.interpolation_r {
            self.interpolation_r = v;
        }
        if let Some(v) = g.iterations {
            self.iterations = v;
        }
        if let Some(v) = g.seed {
            self.seed = v;
        }
        if let Some(v) = g.format {
            self.output_format = v;
        }
        if let Some(v) = &g.cache_dir {
            self.cache_dir = Some(v.clone());
        }
        if let Some(v) = g.threads {
            self.threads = Some(v);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::Config("--precision-bits must be at least 64".into()));
        }
        if !(6..=24).contains(&self.grid_level) {
            return Err(Error::Config("--grid-level must be between 6 and 24".into()));
        }
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::Config("--z-max must be positive".into()));
        }
        if self.extrapolations as u32 >= self.grid_level {
            return Err(Error::Config("--extrapolations must be below --grid-level".into()));
        }
        if self.interpolation_r == 0 {
            return Err(Error::Config("--interpolation-r must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn policy(&self) -> IterationPolicy {
        match self.iterations {
            Iterations::Auto => IterationPolicy::desk(),
            Iterations::Fixed(n) => IterationPolicy::Fixed(n),
        }
    }

    pub fn ladder(&self) -> LadderParams {
        LadderParams {
            z_max: self.z_max,
            level: self.grid_level,
            extrapolations: self.extrapolations,
            r: self.interpolation_r,
            precision: self.precision_bits,
            policy: self.policy(),
        }
    }

    /// Decimal digits worth printing at this precision.
    fn digits(&self) -> usize {
        ((self.precision_bits as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(4).clamp(10, 60)
    }
}

#[derive(Debug, Parser)]
#[command(name = "binary-euclid", version, about = "Binary Euclidean algorithm: GCDs, binary continued fractions and the constants K and lambda")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Config file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    #[arg(long, global = true)]
    pub grid_level: Option<u32>,
    #[arg(long, global = true)]
    pub z_max: Option<f64>,
    #[arg(long, global = true)]
    pub extrapolations: Option<usize>,
    /// Interpolation half-width r (polynomial degree 2r+1).
    #[arg(long, global = true)]
    pub interpolation_r: Option<usize>,
    /// `auto` or a fixed number of iterations per grid.
    #[arg(long, global = true)]
    pub iterations: Option<Iterations>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for converged grid functions, reused across runs.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Omit timing lines so that output is byte-identical across runs.
    #[arg(long, global = true)]
    pub reproducible: bool,
}

fn parse_natural(s: &str) -> std::result::Result<Natural, String> {
    Natural::from_str(s).map_err(|_| format!("expected a non-negative integer, got {s:?}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GCD by Algorithm B.
    Gcd {
        #[arg(value_parser = parse_natural)]
        u: Natural,
        #[arg(value_parser = parse_natural)]
        v: Natural,
        /// Print the step counters.
        #[arg(long)]
        trace: bool,
    },
    /// Extended binary GCD: g and α, β with αu + βv = g.
    Xgcd {
        #[arg(value_parser = parse_natural)]
        u: Natural,
        #[arg(value_parser = parse_natural)]
        v: Natural,
    },
    /// Binary continued fraction of u/v (odd, coprime, u ≤ v).
    Cf {
        #[arg(value_parser = parse_natural)]
        u: Natural,
        #[arg(value_parser = parse_natural)]
        v: Natural,
    },
    /// Monte-Carlo statistics of Algorithm B on random odd inputs.
    Simulate {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        bound_exponent: u32,
        /// Also fit the mean step count against these bound exponents.
        #[arg(long, value_delimiter = ',')]
        exponents: Vec<u32>,
    },
    /// The distribution function F̃ on one grid.
    Density {
        /// Apply the recurrence exactly this many times to F̃₀(x) = 1 − x instead of solving for
        /// the fixed point.
        #[arg(long)]
        steps: Option<usize>,
        /// Write the grid function to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// K, λ, Kλ and 4 ln 2/π² from a ladder of grids.
    Constants,
    /// Leading eigenvalues of the discretized operator.
    Spectrum {
        #[arg(long, default_value_t = 512)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Report every eigenvalue of the nodal matrix instead of the Krylov estimates.
        #[arg(long)]
        dense: bool,
    },
    /// Partial sums of Σ_{a odd} 2^{-⌊lg a⌋} G(1/a).
    ValleeSum {
        #[arg(long, default_value_t = (1 << 20) - 1)]
        a_max: u64,
    },
    /// Direct sum of D₁ against its expansion with and without P(lg x).
    MellinCheck {
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 2.0)]
        lg_min: f64,
        #[arg(long, default_value_t = 12.0)]
        lg_max: f64,
        #[arg(long, default_value_t = 16)]
        power_terms: usize,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
    },
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// The computation finished but a quality check failed (for example a fixed point that
    /// did not converge).
    NumericalFailure,
}

impl Outcome {
    fn from_converged(converged: bool) -> Self {
        if converged {
            Outcome::Ok
        } else {
            Outcome::NumericalFailure
        }
    }
}

/// Process exit code for a run result: 0 success, 1 numerical failure, 2 invalid input.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::NumericalFailure) => 1,
        Err(Error::Io(_)) => 1,
        Err(_) => 2,
    }
}

pub fn resolve_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &global.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read --config {}: {e}", path.display())))?;
        cfg.apply_file_text(&text)?;
    }
    cfg.apply_flags(global);
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `args`, runs the command and writes its output to `out`. Returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli, out);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let cfg = resolve_config(&cli.global)?;
    if let Some(n) = cfg.threads {
        // Fails only if the global pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.command, &cfg, out)?;
    if cfg.output_format == OutputFormat::Text && !cli.global.reproducible {
        writeln!(out, "elapsed {:.3} s", start.elapsed().as_secs_f64())?;
    }
    Ok(outcome)
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn progress(msg: &str) {
    eprintln!("{msg}");
}

fn dispatch(command: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Gcd { u, v, trace } => cmd_gcd(cfg, out, u, v, *trace),
        Command::Xgcd { u, v } => cmd_xgcd(cfg, out, u, v),
        Command::Cf { u, v } => cmd_cf(cfg, out, u, v),
        Command::Simulate { samples, bound_exponent, exponents } => {
            cmd_simulate(cfg, out, *samples, *bound_exponent, exponents)
        }
        Command::Density { steps, output } => cmd_density(cfg, out, *steps, output.as_deref()),
        Command::Constants => cmd_constants(cfg, out),
        Command::Spectrum { dim, count, dense } => cmd_spectrum(cfg, out, *dim, *count, *dense),
        Command::ValleeSum { a_max } => cmd_vallee(cfg, out, *a_max),
        Command::MellinCheck { points, lg_min, lg_max, power_terms, resolution } => {
            cmd_mellin(cfg, out, *points, *lg_min, *lg_max, *power_terms, *resolution)
        }
    }
}

fn cmd_gcd(cfg: &RunConfig, out: &mut dyn Write, u: &Natural, v: &Natural, trace: bool) -> Result<Outcome> {
    let (g, t) = gcd_binary(u, v)?;
    match cfg.output_format {
        OutputFormat::Json => {
            let mut value = json!({ "u": u.to_string(), "v": v.to_string(), "gcd": g.to_string() });
            if trace {
                value["trace"] = serde_json::to_value(&t).map_err(|e| Error::Io(e.to_string()))?;
            }
            emit_json(out, &value)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "u,v,gcd,b3_count,shift_total,shift_events")?;
            writeln!(out, "{u},{v},{g},{},{},{}", t.b3_count, t.shift_total, t.shift_events)?;
        }
        OutputFormat::Text => {
            writeln!(out, "{g}")?;
            if trace {
                writeln!(out, "b3_count={} shift_total={} shift_events={}", t.b3_count, t.shift_total, t.shift_events)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_xgcd(cfg: &RunConfig, out: &mut dyn Write, u: &Natural, v: &Natural) -> Result<Outcome> {
    let (g, alpha, beta) = gcd_extended(u, v)?;
    match cfg.output_format {
        OutputFormat::Json => emit_json(
            out,
            &json!({ "u": u.to_string(), "v": v.to_string(), "gcd": g.to_string(),
                     "alpha": alpha.to_string(), "beta": beta.to_string() }),
        )?,
        OutputFormat::Csv => {
            writeln!(out, "u,v,gcd,alpha,beta")?;
            writeln!(out, "{u},{v},{g},{alpha},{beta}")?;
        }
        OutputFormat::Text => {
            writeln!(out, "{g}")?;
            writeln!(out, "{alpha}*{u} + {beta}*{v} = {g}")?;
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_cf(cfg: &RunConfig, out: &mut dyn Write, u: &Natural, v: &Natural) -> Result<Outcome> {
    let cf = expand(u, v)?;
    let s = stats(&cf);
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &json!({ "expansion": cf.to_string(), "terms": cf.terms, "stats": s }))?,
        OutputFormat::Csv => {
            writeln!(out, "index,a,k")?;
            for (i, t) in cf.terms.iter().enumerate() {
                writeln!(out, "{},{},{}", i + 1, t.a, t.k)?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "{cf}")?;
            writeln!(out, "r={}, ones={}, shifts={}", s.depth, s.ones_total, s.shifts_total)?;
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_simulate(
    cfg: &RunConfig,
    out: &mut dyn Write,
    samples: usize,
    bound_exponent: u32,
    exponents: &[u32],
) -> Result<Outcome> {
    let sample_cfg = SampleConfig { bound_exponent, sample_count: samples, seed: cfg.seed };
    let stats = simulate(&sample_cfg)?;
    let chi = chi_square_geometric(&stats.val2_step_counts).ok();
    let slope = if exponents.is_empty() { None } else { Some(iteration_slope(exponents, &sample_cfg)?) };
    match cfg.output_format {
        OutputFormat::Csv => write_histogram_csv(&stats, out)?,
        OutputFormat::Json => emit_json(
            out,
            &json!({
                "config": sample_cfg,
                "mean_b3": stats.mean_b3,
                "mean_b3_per_bit": stats.mean_b3 / bound_exponent as f64,
                "mean_shift_total": stats.mean_shift_total,
                "val2_histogram": stats.val2_histogram,
                "val2_step": stats.val2_step,
                "val2_step_counts": stats.val2_step_counts,
                "val2_chi_square": chi,
                "slope": slope,
            }),
        )?,
        OutputFormat::Text => {
            writeln!(out, "samples {samples}, bound 2^{bound_exponent}, seed {}", cfg.seed)?;
            writeln!(out, "mean_b3 {:.6} ({:.6} per bit)", stats.mean_b3, stats.mean_b3 / bound_exponent as f64)?;
            writeln!(out, "mean_shift_total {:.6}", stats.mean_shift_total)?;
            for (k, f) in stats.val2_histogram.iter().take(8) {
                writeln!(out, "val2 {k}: {f:.6} (geometric {:.6})", 2f64.powi(-(*k as i32)))?;
            }
            if let Some(chi) = chi {
                writeln!(
                    out,
                    "chi-square at step {}: statistic {:.3}, df {}, p {:.4}",
                    stats.val2_step, chi.statistic, chi.degrees_of_freedom, chi.p_value
                )?;
            }
            if let Some(fit) = slope {
                writeln!(out, "slope {:.6}, intercept {:.4}, shift slope {:.6}", fit.slope, fit.intercept, fit.shift_slope)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn solve(cfg: &RunConfig) -> Result<Vec<GridFunction>> {
    solve_ladder(&cfg.ladder(), cfg.cache_dir.as_deref(), progress)
}

fn cmd_density(cfg: &RunConfig, out: &mut dyn Write, steps: Option<usize>, output: Option<&Path>) -> Result<Outcome> {
    let f = match steps {
        Some(n) => {
            let grid = Grid::with_f64(cfg.z_max, cfg.grid_level, cfg.precision_bits)?;
            iterate_ftilde(&grid, cfg.interpolation_r, n)?
        }
        None => solve(cfg)?.swap_remove(0),
    };
    if let Some(path) = output {
        write_grid_function(&f, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    let prec = f.grid.prec();
    let samples: Vec<(f64, String)> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&x| Ok((x, f.eval_ftilde(&BigReal::with_f64(prec, x))?.to_digits(cfg.digits()))))
        .collect::<Result<_>>()?;
    match cfg.output_format {
        OutputFormat::Csv => {
            writeln!(out, "z,x,ftilde")?;
            for (i, v) in f.values.iter().enumerate() {
                let z = f.grid.z_f64(i);
                writeln!(out, "{z},{:e},{}", (-z * z).exp(), v.to_digits(cfg.digits()))?;
            }
        }
        OutputFormat::Json => emit_json(
            out,
            &json!({
                "grid": f.grid.summary(),
                "interpolation_r": f.r,
                "iterations": f.iterations,
                "converged": f.converged,
                "last_change": f.last_change,
                "shape_violation": f.shape_violation(),
                "ftilde": samples,
            }),
        )?,
        OutputFormat::Text => {
            writeln!(out, "level {}, h = {:e}, r = {}", f.grid.level, f.grid.h.to_f64(), f.r)?;
            writeln!(out, "iterations {}, converged {}, last change {:e}", f.iterations, f.converged, f.last_change.unwrap_or(f64::NAN))?;
            for (x, v) in &samples {
                writeln!(out, "F~({x}) = {v}")?;
            }
        }
    }
    Ok(if steps.is_some() { Outcome::Ok } else { Outcome::from_converged(f.converged) })
}

fn cmd_constants(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let solutions = solve(cfg)?;
    let report = compute_constants(&solutions, cfg.interpolation_r)?;
    let digits = cfg.digits();
    match cfg.output_format {
        OutputFormat::Json => emit_json(out, &report.to_json(digits))?,
        OutputFormat::Csv => {
            writeln!(out, "name,value")?;
            for (name, value) in [
                ("K", &report.k),
                ("lambda", &report.lambda),
                ("K_lambda", &report.k_lambda),
                ("four_ln2_over_pi2", &report.conjectured),
                ("difference", &report.difference),
                ("E_inf", &report.e_inf),
                ("ln2_over_E_inf", &report.k_from_e_inf),
            ] {
                writeln!(out, "{name},{}", value.to_digits(digits))?;
            }
        }
        OutputFormat::Text => {
            let mut text = String::new();
            let _ = writeln!(text, "K          = {}", report.k.to_digits(digits));
            let _ = writeln!(text, "lambda     = {}", report.lambda.to_digits(digits));
            let _ = writeln!(text, "K*lambda   = {}", report.k_lambda.to_digits(digits));
            let _ = writeln!(text, "4ln2/pi^2  = {}", report.conjectured.to_digits(digits));
            let _ = writeln!(text, "difference = {}", report.difference.to_digits(6));
            let _ = writeln!(text, "E_inf      = {}", report.e_inf.to_digits(digits));
            let _ = writeln!(text, "ln2/E_inf  = {}", report.k_from_e_inf.to_digits(digits));
            let _ = writeln!(text, "2/b (density route, double precision) = {:.15}", 2.0 / report.b_density_route);
            for (level, n) in &report.iterations {
                let _ = writeln!(text, "level {level}: {n} iterations");
            }
            write!(out, "{text}")?;
        }
    }
    Ok(Outcome::from_converged(report.converged))
}

fn cmd_spectrum(cfg: &RunConfig, out: &mut dyn Write, dim: usize, count: usize, dense: bool) -> Result<Outcome> {
    let matrix = build_b2_matrix(dim)?;
    let result = spectrum(&matrix, count)?;
    let eigenvalues = if dense {
        let mut all = spectrum_dense(&matrix);
        all.truncate(count.max(1) * 4);
        all
    } else {
        result.eigenvalues.clone()
    };
    match cfg.output_format {
        OutputFormat::Json => {
            if dense {
                emit_json(out, &json!({ "matrix_dim": dim, "dense": true, "eigenvalues": eigenvalues }))?
            } else {
                emit_json(out, &result)?
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "index,re,im,modulus,residual")?;
            for (i, e) in eigenvalues.iter().enumerate() {
                writeln!(out, "{},{},{},{},{:e}", i + 1, e.re, e.im, e.modulus(), e.residual)?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "matrix dimension {dim}{}", if dense { " (dense)" } else { "" })?;
            for (i, e) in eigenvalues.iter().enumerate() {
                writeln!(
                    out,
                    "{}: {:+.8} {:+.8}i  |.| = {:.8}  residual {:.1e}",
                    i + 1,
                    e.re,
                    e.im,
                    e.modulus(),
                    e.residual
                )?;
            }
        }
    }
    let ok = dense || result.eigenvalues.len() == count;
    Ok(Outcome::from_converged(ok))
}

fn cmd_vallee(cfg: &RunConfig, out: &mut dyn Write, a_max: u64) -> Result<Outcome> {
    let solutions = solve(cfg)?;
    let f = &solutions[0];
    let (f1, g1) = f1_and_g1(f);
    let g = GFunction::new(f);
    let sum = vallee_sum(&g, a_max)?;
    let k = k_from_vallee_formula(g1.to_f64(), sum.partial + sum.tail);
    match cfg.output_format {
        OutputFormat::Json => emit_json(
            out,
            &json!({
                "a_max": a_max,
                "partial": sum.partial,
                "deficit": sum.deficit(),
                "tail_estimate": sum.tail,
                "corrected_deficit": sum.corrected_deficit(),
                "monotone": sum.monotone(),
                "octave_partials": sum.octave_partials,
                "f1": f1.to_digits(cfg.digits()),
                "g1": g1.to_digits(cfg.digits()),
                "k_from_sum": k,
            }),
        )?,
        OutputFormat::Csv => {
            writeln!(out, "octave,partial,deficit")?;
            for (j, p) in &sum.octave_partials {
                writeln!(out, "{j},{p},{:e}", 1.0 - p)?;
            }
        }
        OutputFormat::Text => {
            writeln!(out, "partial sum to a = {a_max}: {:.15}", sum.partial)?;
            writeln!(out, "1 - partial = {:.6e}, tail estimate {:.6e}, corrected {:.3e}", sum.deficit(), sum.tail, sum.corrected_deficit())?;
            writeln!(out, "octave partial sums increasing: {}", sum.monotone())?;
            writeln!(out, "f(1) = {}, g(1) = {}", f1.to_digits(20), g1.to_digits(20))?;
            writeln!(out, "K from the sum = {k:.15}")?;
        }
    }
    Ok(Outcome::from_converged(f.converged))
}

fn cmd_mellin(
    cfg: &RunConfig,
    out: &mut dyn Write,
    points: usize,
    lg_min: f64,
    lg_max: f64,
    power_terms: usize,
    resolution: usize,
) -> Result<Outcome> {
    if points == 0 {
        return Err(Error::Config("--points must be at least 1".into()));
    }
    if !(lg_min > 1.0 && lg_max >= lg_min) {
        return Err(Error::Config("--lg-min must exceed 1 (x < 1/2) and not exceed --lg-max".into()));
    }
    let rows = mellin_table(&log_spaced(lg_min, lg_max, points), power_terms, cfg.precision_bits)?;
    match cfg.output_format {
        OutputFormat::Json => {
            let pmax = p_max(resolution, cfg.precision_bits)?;
            let table: Vec<_> = rows
                .iter()
                .map(|r| json!({ "x": r.x, "direct": r.direct, "expansion_with_P": r.with_p,
                                 "expansion_without_P": r.without_p, "discrepancy": r.discrepancy() }))
                .collect();
            emit_json(out, &json!({ "p_max": pmax, "rows": table }))?
        }
        OutputFormat::Csv => write_mellin_csv(&rows, &mut *out)?,
        OutputFormat::Text => {
            write_mellin_csv(&rows, &mut *out)?;
            let pmax = p_max(resolution, cfg.precision_bits)?;
            writeln!(out, "max |P(t)| = {} at t = {:.6}", pmax.value, pmax.t)?;
        }
    }
    Ok(Outcome::Ok)
}
