//! Command-line driver: parses flags and a config file, runs one computation
//! and writes a CSV plus a JSON manifest next to it.

pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use cascade_filter::atom::Peak;
use cascade_filter::cascade::{build_two_filter_system, solve_steady_moments, Depth};
use cascade_filter::config::{BankLabel, ConfigFile, KappaRule};
use cascade_filter::correlations::{
    filtered_spectrum, g1_filtered, g2_auto, g2_cross, intensity_ratio, scan_halfwidth, scan_initial_grid,
    unfiltered_spectrum, G1Method, DARK_THRESHOLD, G2_IMAG_TOL,
};
use cascade_filter::oracle::{Oracle, Truncation};
use cascade_filter::response::{sample_frequency_response, sample_impulse_response, ImpulseMethod};
use cascade_filter::{AtomParams, Error, FilterBank, SystemDescriptor, TwoFilterConfig};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use output::{manifest_path, write_atomic, RunManifest, Table, Tolerances};

/// Oracle agreement required by `validate`.
pub const VALIDATE_TOL: f64 = 1e-4;
pub const THREADS_ENV: &str = "CASCADE_FILTER_THREADS";

/// start:stop:count, inclusive and evenly spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn linear(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }

    pub fn logarithmic(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let r = self.stop / self.start;
        (0..self.count).map(|i| self.start * r.powf(i as f64 / (self.count - 1) as f64)).collect()
    }
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:count, got `{s}`"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2].trim().parse().map_err(|_| format!("`{}` is not a count", parts[2]))?;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(format!("invalid range `{s}`"));
        }
        Ok(Self { start, stop, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeakArg {
    Left,
    Central,
    Right,
}

impl From<PeakArg> for Peak {
    fn from(p: PeakArg) -> Self {
        match p {
            PeakArg::Left => Peak::Left,
            PeakArg::Central => Peak::Central,
            PeakArg::Right => Peak::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Numeric,
}

#[derive(Debug, Parser)]
#[command(name = "cascade-filter", version, about = "Filtered spectra and photon correlations of a driven two-level atom")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Parameter file with [atom], [filter_a] and optional [filter_b] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output CSV; the manifest goes to <out>.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Effective halfwidth K in units of gamma (sets delta_omega = K/N, kappa = 2.5 delta_omega).
    #[arg(long = "K", global = true)]
    pub k: Option<f64>,
    /// Modes per side N.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Phase index m.
    #[arg(long = "m", global = true)]
    pub m: Option<u32>,
    /// Centre filter A (and B for auto-correlations) on a Mollow peak.
    #[arg(long, global = true, value_enum)]
    pub peak: Option<PeakArg>,
    /// Filter-A centres start:stop:count in units of Omega.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<RangeSpec>,
    /// Filter-B centres start:stop:count in units of Omega.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<RangeSpec>,
    /// Worker threads (default: CASCADE_FILTER_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest delay in units of 1/gamma.
    #[arg(long = "tau-max", global = true)]
    pub tau_max: Option<f64>,
    /// Number of delay samples including tau = 0.
    #[arg(long = "tau-points", global = true)]
    pub tau_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical response of filter A: columns omega_or_t, re, im, abs2.
    Response {
        /// Impulse response in time instead of the stationary frequency response.
        #[arg(long)]
        temporal: bool,
        /// Frequency grid start:stop:count in units of gamma.
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<RangeSpec>,
    },
    /// Incoherent spectrum seen through filter A.
    Spectrum {
        /// Unfiltered Mollow spectrum instead.
        #[arg(long)]
        unfiltered: bool,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<RangeSpec>,
    },
    /// Normalized first-order correlation of filter A.
    G1 {
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
    },
    /// g2 auto-correlation with both filters equal to filter A.
    G2auto,
    /// g2 cross-correlation between filters A and B.
    G2cross,
    /// g2(0) of equal filters against K.
    ScanWidth {
        /// K grid lo:hi:count, logarithmically spaced, units of gamma.
        #[arg(long = "k-range")]
        k_range: Option<RangeSpec>,
    },
    /// g2(alpha, 0; beta, 0) over a grid of filter centres.
    ScanGrid,
    /// Incoherent-to-coherent intensity ratio of filter A, optionally against K.
    IntensityRatio {
        #[arg(long = "k-range")]
        k_range: Option<RangeSpec>,
    },
    /// Moment engine against the Fock-space oracle at N = 0 and 1.
    Validate,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Engine(Error),
    Io(String),
    /// Validation ran but exceeded tolerance.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(Error::Tolerance(_) | Error::Singular(_)) | CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
            CliError::Failed(s) => write!(f, "validation failed: {s}"),
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>, CliError> {
    if let Some(t) = cli.threads {
        return if t == 0 { Err(CliError::Usage("--threads must be >= 1".into())) } else { Ok(Some(t)) };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|t| *t > 0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cli)? {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| dispatch(cli))
}

struct Output {
    table: Table,
    parameters: Value,
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let t0 = Instant::now();
    let (name, out) = match &cli.command {
        Command::Validate => ("validate", validate()?),
        Command::Response { temporal, omega } => ("response", response(cli, *temporal, *omega)?),
        Command::Spectrum { unfiltered, omega } => ("spectrum", spectrum(cli, *unfiltered, *omega)?),
        Command::G1 { method } => ("g1", g1(cli, *method)?),
        Command::G2auto => ("g2auto", g2(cli, true)?),
        Command::G2cross => ("g2cross", g2(cli, false)?),
        Command::ScanWidth { k_range } => ("scan-width", scan_width(cli, *k_range)?),
        Command::ScanGrid => ("scan-grid", scan_grid(cli)?),
        Command::IntensityRatio { k_range } => ("intensity-ratio", ratio(cli, *k_range)?),
    };
    let path = cli.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    write_atomic(&path, out.table.render().as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let manifest = RunManifest {
        command: name.to_string(),
        parameters: out.parameters,
        outputs: vec![path.display().to_string()],
        wall_time_s: t0.elapsed().as_secs_f64(),
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances: Tolerances { dark_threshold: DARK_THRESHOLD, g2_imaginary: G2_IMAG_TOL, regression_rk4_agreement: 1e-5 },
    };
    let mpath = manifest_path(&path);
    let body = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    write_atomic(&mpath, body.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", mpath.display())))?;
    println!("wrote {} ({} rows) and {}", path.display(), out.table.rows.len(), mpath.display());
    Ok(())
}

fn load_config(cli: &Cli) -> Result<ConfigFile<f64>, CliError> {
    let path = cli.config.as_deref().ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    Ok(ConfigFile::load(path)?)
}

/// Filter A from the config with --N, --K, --m and --peak applied.
fn resolve_bank(cli: &Cli, base: &FilterBank, atom: &AtomParams, centre_from_peak: bool) -> Result<FilterBank, CliError> {
    let centre = match (centre_from_peak, cli.peak) {
        (true, Some(p)) => Peak::from(p).detuning(atom),
        _ => base.center_detuning,
    };
    let m = cli.m.unwrap_or(base.phase_index);
    if cli.k.is_some() || cli.n.is_some() {
        let n = cli.n.unwrap_or(base.n_side);
        let k = cli.k.unwrap_or_else(|| base.effective_halfwidth());
        Ok(FilterBank::from_halfwidth(n, k, m, centre, KappaRule::Overlapping, base.label)?)
    } else {
        Ok(FilterBank::new(base.n_side, base.mode_spacing, base.mode_halfwidth, m, centre, base.label)?)
    }
}

fn bank_a(cli: &Cli, cfg: &ConfigFile<f64>) -> Result<FilterBank, CliError> {
    let base = cfg.filter_a.ok_or_else(|| Error::Config("missing [filter_a] section".into()))?;
    resolve_bank(cli, &base, &cfg.atom, true)
}

fn taus(cli: &Cli) -> Result<Vec<f64>, CliError> {
    let t_max = cli.tau_max.unwrap_or(10.0);
    let n = cli.tau_points.unwrap_or(1001);
    if !(t_max > 0.0) || n < 2 {
        return Err(CliError::Usage("need --tau-max > 0 and --tau-points >= 2".into()));
    }
    Ok((0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect())
}

fn atom_json(a: &AtomParams) -> Value {
    json!({ "gamma": a.gamma, "omega_rabi": a.omega_rabi })
}

fn bank_json(b: &FilterBank) -> Value {
    json!({
        "n_side": b.n_side,
        "mode_spacing": b.mode_spacing,
        "mode_halfwidth": b.mode_halfwidth,
        "effective_halfwidth": b.effective_halfwidth(),
        "phase_index": b.phase_index,
        "center_detuning": b.center_detuning,
    })
}

fn sys_json(sys: &SystemDescriptor) -> Value {
    json!({ "atom": atom_json(&sys.atom), "filter_a": bank_json(&sys.banks.bank_a), "filter_b": bank_json(&sys.banks.bank_b) })
}

fn response(cli: &Cli, temporal: bool, omega: Option<RangeSpec>) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let bank = bank_a(cli, &cfg)?;
    let drive = Complex64::new(1.0, 0.0);
    let k = bank.effective_halfwidth();
    let (axis, curve) = if temporal {
        let t = match (cli.tau_max, cli.tau_points) {
            (None, None) => (0..=600).map(|i| 3.0 * std::f64::consts::PI / k * i as f64 / 600.0).collect(),
            _ => taus(cli)?,
        };
        ("t [1/gamma]", sample_impulse_response(&bank, drive, &t, ImpulseMethod::ModeSum))
    } else {
        let c = bank.center_detuning;
        let w = omega.unwrap_or(RangeSpec { start: c - 4.0 * k, stop: c + 4.0 * k, count: 801 }).linear();
        ("omega [gamma]", sample_frequency_response(&bank, drive, &w))
    };
    let mut t = Table::new(&[axis, "re", "im", "abs2"]);
    for (x, v) in curve.axis.iter().zip(&curve.values) {
        t.push(vec![*x, v.re, v.im, v.norm_sqr()]);
    }
    Ok(Output { table: t, parameters: json!({ "filter_a": bank_json(&bank), "drive": 1.0, "temporal": temporal }) })
}

fn default_omega(atom: &AtomParams, bank: &FilterBank) -> RangeSpec {
    let half = 1.5 * atom.omega_rabi + 4.0 * bank.effective_halfwidth() + 5.0 * atom.gamma;
    RangeSpec { start: -half, stop: half, count: 2001 }
}

fn spectrum(cli: &Cli, unfiltered: bool, omega: Option<RangeSpec>) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let mut t = Table::new(&["omega [gamma]", "S [1/gamma]"]);
    let (series, params) = if unfiltered {
        let half = 1.5 * cfg.atom.omega_rabi + 10.0 * cfg.atom.gamma;
        let w = omega.unwrap_or(RangeSpec { start: -half, stop: half, count: 2001 }).linear();
        (unfiltered_spectrum(&cfg.atom, &w)?, json!({ "atom": atom_json(&cfg.atom), "unfiltered": true }))
    } else {
        let bank = bank_a(cli, &cfg)?;
        let sys = build_two_filter_system(&TwoFilterConfig::auto(cfg.atom, bank)?)?;
        let h = solve_steady_moments(&sys, Depth::BankA);
        let w = omega.unwrap_or_else(|| default_omega(&cfg.atom, &bank)).linear();
        (filtered_spectrum(&sys, &h, &w)?, json!({ "system": sys_json(&sys), "unfiltered": false }))
    };
    for (w, s) in series.omega.iter().zip(&series.values) {
        t.push(vec![*w, *s]);
    }
    let mut params = params;
    params["coherent_weight"] = json!(series.coherent_weight);
    Ok(Output { table: t, parameters: params })
}

fn g1(cli: &Cli, method: MethodArg) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let bank = bank_a(cli, &cfg)?;
    let sys = build_two_filter_system(&TwoFilterConfig::auto(cfg.atom, bank)?)?;
    let h = solve_steady_moments(&sys, Depth::BankA);
    let tau = taus(cli)?;
    let m = match method {
        MethodArg::Analytic => G1Method::Analytic,
        MethodArg::Numeric => G1Method::Numeric,
    };
    let s = g1_filtered(&sys, &h, &tau, m)?;
    let mut t = Table::new(&["tau [1/gamma]", "re_g1", "im_g1"]);
    for (x, v) in tau.iter().zip(s.complex().expect("g1 is complex")) {
        t.push(vec![*x, v.re, v.im]);
    }
    Ok(Output { table: t, parameters: json!({ "system": sys_json(&sys), "method": format!("{method:?}").to_lowercase() }) })
}

fn g2(cli: &Cli, auto: bool) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let a = bank_a(cli, &cfg)?;
    let b = if auto {
        a.with_label(BankLabel::B)
    } else {
        let base = cfg.filter_b.ok_or_else(|| Error::Config("g2cross needs a [filter_b] section".into()))?;
        resolve_bank(cli, &base, &cfg.atom, false)?
    };
    let sys = build_two_filter_system(&TwoFilterConfig::new(cfg.atom, a, b)?)?;
    let h = solve_steady_moments(&sys, Depth::Full);
    let tau = taus(cli)?;
    let s = if auto { g2_auto(&sys, &h, &tau)? } else { g2_cross(&sys, &h, &tau)? };
    let mut t = Table::new(&["tau [1/gamma]", "g2"]);
    for (x, v) in tau.iter().zip(s.real().expect("g2 is real")) {
        t.push(vec![*x, *v]);
    }
    Ok(Output { table: t, parameters: json!({ "system": sys_json(&sys) }) })
}

fn k_grid(cli: &Cli, bank: &FilterBank, k_range: Option<RangeSpec>) -> Result<Vec<f64>, CliError> {
    let ks = match k_range {
        Some(r) => {
            if !(r.start > 0.0 && r.stop > 0.0) {
                return Err(CliError::Usage("--k-range bounds must be > 0".into()));
            }
            r.logarithmic()
        }
        None => vec![cli.k.unwrap_or_else(|| bank.effective_halfwidth())],
    };
    Ok(ks)
}

fn scan_width(cli: &Cli, k_range: Option<RangeSpec>) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let bank = bank_a(cli, &cfg)?;
    let ks = match k_range {
        Some(_) => k_grid(cli, &bank, k_range)?,
        None => RangeSpec { start: 0.1, stop: 100.0, count: 61 }.logarithmic(),
    };
    let scan = scan_halfwidth(&cfg.atom, bank.center_detuning, &ks, bank.n_side, KappaRule::Overlapping)?;
    let mut t = Table::new(&["K [gamma]", "g2_initial"]);
    for (k, g) in scan {
        t.push(vec![k, g]);
    }
    Ok(Output {
        table: t,
        parameters: json!({ "atom": atom_json(&cfg.atom), "n_side": bank.n_side, "center_detuning": bank.center_detuning, "phase_index": 1 }),
    })
}

fn scan_grid(cli: &Cli) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let bank = bank_a(cli, &cfg)?;
    let omega = cfg.atom.omega_rabi;
    if !(omega > 0.0) {
        return Err(CliError::Usage("scan-grid ranges are in units of Omega, which must be > 0".into()));
    }
    let default = RangeSpec { start: -1.5, stop: 1.5, count: 61 };
    let ua = cli.alpha.unwrap_or(default).linear();
    let ub = cli.beta.unwrap_or(default).linear();
    let alphas: Vec<f64> = ua.iter().map(|u| u * omega).collect();
    let betas: Vec<f64> = ub.iter().map(|u| u * omega).collect();
    let grid = scan_initial_grid(&cfg.atom, &bank, &alphas, &betas)?;
    let mut header = vec!["alpha [Omega] \\ beta [Omega]".to_string()];
    header.extend(ub.iter().map(|b| output::fmt_num(*b)));
    let mut t = Table { header, rows: Vec::new() };
    for (i, a) in ua.iter().enumerate() {
        let mut row = vec![*a];
        row.extend((0..ub.len()).map(|j| grid.g2_initial[(i, j)]));
        t.push(row);
    }
    Ok(Output { table: t, parameters: json!({ "atom": atom_json(&cfg.atom), "template": bank_json(&bank), "units": "Omega" }) })
}

fn ratio(cli: &Cli, k_range: Option<RangeSpec>) -> Result<Output, CliError> {
    let cfg = load_config(cli)?;
    let bank = bank_a(cli, &cfg)?;
    let mut t = Table::new(&["K [gamma]", "intensity_ratio"]);
    for k in k_grid(cli, &bank, k_range)? {
        let b = FilterBank::from_halfwidth(bank.n_side, k, bank.phase_index, bank.center_detuning, KappaRule::Overlapping, BankLabel::A)?;
        let sys = build_two_filter_system(&TwoFilterConfig::auto(cfg.atom, b)?)?;
        t.push(vec![k, intensity_ratio(&solve_steady_moments(&sys, Depth::BankA))?]);
    }
    Ok(Output { table: t, parameters: json!({ "atom": atom_json(&cfg.atom), "filter_a": bank_json(&bank) }) })
}

/// Oracle cases: (N, truncation).
const VALIDATE_CASES: [(usize, Truncation); 2] = [(0, Truncation::PerMode(4)), (1, Truncation::PerBankTotal(3))];

fn validate() -> Result<Output, CliError> {
    let atom = AtomParams::new(1.0, 2.0)?;
    let tau: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let mut t = Table::new(&["N", "dim", "rel_err_photons", "rel_err_g1", "rel_err_g2"]);
    let mut worst = 0.0f64;
    for (n, trunc) in VALIDATE_CASES {
        let bank = FilterBank::from_halfwidth(n, 1.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A)?;
        let sys = build_two_filter_system(&TwoFilterConfig::auto(atom, bank)?)?;
        let h = solve_steady_moments(&sys, Depth::Full);
        let o = Oracle::solve(&sys, trunc)?;
        let aa = h.collective_aa().re;
        let e_aa = (o.collective_aa() - aa).abs() / aa;
        let g1m = g1_filtered(&sys, &h, &tau, G1Method::Analytic)?;
        let g1m = g1m.complex().expect("complex");
        let g1o = o.g1(&tau)?;
        let e_g1 = sup_diff(g1o.iter().zip(g1m).map(|(a, b)| (a - b).norm())) / sup_diff(g1m.iter().map(|v| v.norm()));
        let g2m = g2_cross(&sys, &h, &tau)?;
        let g2m = g2m.real().expect("real");
        let g2o = o.g2(&tau)?;
        let e_g2 = sup_diff(g2o.iter().zip(g2m).map(|(a, b)| (a - b).abs())) / sup_diff(g2m.iter().map(|v| v.abs()));
        println!("N={n} dim={}: <A^dag A> {e_aa:.2e}, g1 {e_g1:.2e}, g2 {e_g2:.2e}", o.basis.total_dim());
        worst = worst.max(e_aa).max(e_g1).max(e_g2);
        t.push(vec![n as f64, o.basis.total_dim() as f64, e_aa, e_g1, e_g2]);
    }
    if worst > VALIDATE_TOL {
        return Err(CliError::Failed(format!("max relative deviation {worst:e} exceeds {VALIDATE_TOL:e}")));
    }
    Ok(Output { table: t, parameters: json!({ "atom": atom_json(&atom), "K": 1.0, "tolerance": VALIDATE_TOL }) })
}

fn sup_diff(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Convenience for tests: path of the manifest written next to `out`.
pub fn manifest_for(out: &Path) -> PathBuf {
    manifest_path(out)
}
