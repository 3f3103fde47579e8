//! Command-line front end.
//!
//! Flags resolve into a [`RunConfig`], which every report embeds, so
//! `run --config <report>` replays a run exactly. Exit status is 0 when every
//! contract check passed, 1 when one failed and 64 for unusable input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corollary::{asymmetry_penalty, solve_max_delay, solve_min_quality, DelayConstraint};
use crate::error::Error;
use crate::lattice::{
    decode_error_rate, min_product_distance, whitened_min_distance, LatticeCodebook, Noise, DEFAULT_DELTA,
};
use crate::quality::{QualityProfile, User};
use crate::region::{
    outer_bound_lemma1, region_theorem1, region_theorem2, region_theorem4, DofRegion,
};
use crate::scheme::{CommonAssignment, SchemeConfig, SchemeKind, SchemeOptions};
use crate::sim::stats::ols_slope;
use crate::sim::{log_grid, simulate_phase, SimSettings};

pub const FORMAT_VERSION: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRACT: i32 = 1;
pub const EXIT_CONFIG: i32 = 64;
/// Worker thread count for the Monte Carlo and lattice loops.
pub const THREADS_ENV: &str = "MISO_DOF_THREADS";
/// Largest quantizer overflow fraction accepted at the top of the grid.
pub const OVERFLOW_LIMIT: f64 = 1e-3;
const LEAKAGE_LIMIT: f64 = 1e-12;
const SIG_DIGITS: usize = 12;

#[derive(Debug)]
struct ConfigError(String);

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, ConfigError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Parser, Debug)]
#[command(name = "miso-dof", version, about = "DoF regions, precoding schemes and exponent checks for the two-user MISO broadcast channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Half-planes and vertices of a DoF region.
    Region(RegionArgs),
    /// Durations, allocation tables, ledger and DoF of a scheme.
    Scheme(SchemeArgs),
    /// Monte Carlo exponent measurements of a scheme.
    Simulate(SimulateArgs),
    /// Product distance, whitened distance and decoding of the lattice code.
    Lattice(LatticeArgs),
    /// Closed-form CSIT requirement solvers.
    Corollary(CorollaryArgs),
    /// Replay a config file or the config embedded in a report.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
struct OutputArgs {
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// CSV table path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InlineProfile {
    /// Profile JSON file.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Comma-separated per-slot exponents of user 1.
    #[arg(long, value_delimiter = ',')]
    alpha1: Option<Vec<f64>>,
    /// Comma-separated per-slot exponents of user 2 (defaults to alpha1).
    #[arg(long, value_delimiter = ',')]
    alpha2: Option<Vec<f64>>,
    #[arg(long)]
    beta: Option<f64>,
}

impl InlineProfile {
    fn resolve(&self) -> CliResult<QualityProfile> {
        match (&self.profile, &self.alpha1) {
            (Some(path), None) => Ok(read_profile(path)?),
            (None, Some(a1)) => {
                let a2 = self.alpha2.clone().unwrap_or_else(|| a1.clone());
                Ok(QualityProfile::new(a1.clone(), a2, self.beta.unwrap_or(1.0))?)
            }
            (Some(_), Some(_)) => config_err("give either --profile or inline exponents, not both"),
            (None, None) => config_err("a profile is required: --profile <file> or --alpha1 ..."),
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))
}

fn read_profile(path: &Path) -> CliResult<QualityProfile> {
    Ok(QualityProfile::from_json(&read_text(path)?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
enum Theorem {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
    #[value(name = "4")]
    #[serde(rename = "4")]
    Four,
    /// Outer bound with generic vertex enumeration.
    #[value(name = "outer")]
    #[serde(rename = "outer")]
    Outer,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    /// Average current exponent (of user 1 when --abar2 is given).
    #[arg(long)]
    abar: Option<f64>,
    #[arg(long)]
    abar2: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Take the averages and beta from a profile file instead.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    theorem: Theorem,
    abar1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abar2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
}

impl RegionArgs {
    fn resolve(&self) -> CliResult<RegionConfig> {
        let (abar1, abar2, beta) = match (&self.profile, self.abar) {
            (Some(path), None) => {
                let p = read_profile(path)?;
                let (a1, a2) = (p.average_exponent(User::One), p.average_exponent(User::Two));
                (a1, (a1 != a2).then_some(a2), Some(p.beta()))
            }
            (None, Some(a)) => (a, self.abar2, self.beta),
            (Some(_), Some(_)) => return config_err("give either --profile or --abar, not both"),
            (None, None) => return config_err("--abar or --profile is required"),
        };
        Ok(RegionConfig { theorem: self.theorem, abar1, abar2, beta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CommonArg {
    Split,
    User1,
    User2,
}

#[derive(Args, Debug)]
struct SchemeFlags {
    #[arg(long)]
    kind: SchemeKind,
    #[command(flatten)]
    profile: InlineProfile,
    /// Phase count.
    #[arg(long = "S", default_value_t = 3)]
    phases: usize,
    /// Duration of the first phase in blocks.
    #[arg(long = "T1", default_value_t = 1.0)]
    t1: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Who receives the fresh common information.
    #[arg(long, value_enum)]
    common: Option<CommonArg>,
    /// Round durations down to whole blocks.
    #[arg(long)]
    round: bool,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[command(flatten)]
    scheme: SchemeFlags,
    #[command(flatten)]
    out: OutputArgs,
}

/// A scheme with its profile inlined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub profile: QualityProfile,
    #[serde(rename = "S", default = "default_phases")]
    pub phases: usize,
    #[serde(rename = "T1", default = "default_t1")]
    pub t1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common: Option<CommonAssignment>,
    #[serde(default)]
    pub round: bool,
}

fn default_phases() -> usize {
    3
}

fn default_t1() -> f64 {
    1.0
}

/// Scheme file as written by hand: the profile may be a path relative to the file.
#[derive(Deserialize)]
#[serde(untagged)]
enum ProfileRef {
    Path(PathBuf),
    Inline(QualityProfile),
}

impl SchemeSpec {
    pub fn build(&self) -> crate::Result<SchemeConfig> {
        let opts = SchemeOptions {
            phases: self.phases,
            t1: self.t1,
            delta: self.delta,
            omega: self.omega,
            common: self.common,
            round_durations: self.round,
        };
        SchemeConfig::build(self.kind, &self.profile, opts)
    }

    /// Reads a scheme file whose `profile` is either inline or a path.
    pub fn from_file(path: &Path) -> std::result::Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut raw: Value = serde_json::from_str(&text).map_err(|e| format!("malformed scheme config: {e}"))?;
        let obj = raw.as_object_mut().ok_or("scheme config must be a JSON object")?;
        let profile = obj.remove("profile").ok_or("scheme config has no profile")?;
        let profile = match serde_json::from_value::<ProfileRef>(profile).map_err(|e| format!("malformed profile: {e}"))? {
            ProfileRef::Inline(p) => p,
            ProfileRef::Path(p) => {
                let p = path.parent().map_or(p.clone(), |d| d.join(&p));
                QualityProfile::from_json(&fs::read_to_string(&p).map_err(|e| format!("cannot read {}: {e}", p.display()))?)
                    .map_err(|e| e.to_string())?
            }
        };
        obj.insert("profile".into(), serde_json::to_value(profile).expect("profiles serialize"));
        serde_json::from_value(raw).map_err(|e| format!("malformed scheme config: {e}"))
    }
}

impl SchemeFlags {
    fn resolve(&self) -> CliResult<SchemeSpec> {
        let common = self.common.map(|c| match c {
            CommonArg::Split => CommonAssignment::Split { omega: self.omega.unwrap_or(0.5) },
            CommonArg::User1 => CommonAssignment::User1,
            CommonArg::User2 => CommonAssignment::User2,
        });
        Ok(SchemeSpec {
            kind: self.kind,
            profile: self.profile.resolve()?,
            phases: self.phases,
            t1: self.t1,
            delta: self.delta,
            omega: self.omega,
            common,
            round: self.round,
        })
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Scheme JSON: kind, profile (inline or path), S, T1, delta, omega, common, round.
    #[arg(long)]
    scheme_config: PathBuf,
    /// `lo:hi:n`, log-spaced.
    #[arg(long, default_value = "1e2:1e6:5")]
    grid: String,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    antennas: usize,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    /// Phases to simulate; all when omitted.
    #[arg(long, value_delimiter = ',')]
    phase: Option<Vec<usize>>,
    /// Override the expected exponent of a quantity, `LABEL=VALUE`.
    #[arg(long)]
    expect: Vec<String>,
    /// CSV report path; the summary goes to `<report>.summary.json`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub scheme: SchemeSpec,
    pub phases: Vec<usize>,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub antennas: usize,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, f64>,
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| ConfigError(format!("bad number {x:?} in grid {s:?}")));
    match parts.as_slice() {
        [lo, hi, n] => {
            let n: usize = n.trim().parse().map_err(|_| ConfigError(format!("bad point count in grid {s:?}")))?;
            let (lo, hi) = (num(lo)?, num(hi)?);
            if n < 2 || !(lo > 0.0 && hi > lo) {
                return config_err(format!("grid {s:?} must be lo:hi:n with 0 < lo < hi and n >= 2"));
            }
            Ok(log_grid(lo, hi, n))
        }
        [list] => list.split(',').map(num).collect(),
        _ => config_err(format!("grid {s:?} must be lo:hi:n or a comma list")),
    }
}

impl SimulateArgs {
    fn resolve(&self) -> CliResult<SimulateConfig> {
        let scheme = SchemeSpec::from_file(&self.scheme_config).map_err(ConfigError)?;
        let cfg = scheme.build()?;
        let phases = self.phase.clone().unwrap_or_else(|| (1..=cfg.phase_count()).collect());
        let mut expect = BTreeMap::new();
        for e in &self.expect {
            let (k, v) = e.split_once('=').ok_or_else(|| ConfigError(format!("--expect {e:?} is not LABEL=VALUE")))?;
            let v: f64 = v.parse().map_err(|_| ConfigError(format!("--expect {e:?}: bad value")))?;
            expect.insert(k.to_string(), v);
        }
        Ok(SimulateConfig {
            scheme,
            phases,
            grid: parse_grid(&self.grid)?,
            trials: self.trials,
            seed: self.seed,
            antennas: self.antennas,
            tolerance: self.tolerance,
            expect,
        })
    }
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Block length.
    #[arg(long = "T")]
    t: usize,
    /// QAM size; picked from the rate and SNR when omitted.
    #[arg(long)]
    qam: Option<usize>,
    #[arg(long = "P-grid", default_value = "1e2,1e4,1e6")]
    p_grid: String,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    /// Per-slot current exponents, one per dimension.
    #[arg(long, value_delimiter = ',', required = true)]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseArg {
    Gaussian,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qam: Option<usize>,
    pub grid: Vec<f64>,
    pub delta: f64,
    pub alphas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub noise: Noise,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Solve {
    MinQuality,
    MaxDelay,
    Asymmetry,
}

#[derive(Args, Debug)]
struct CorollaryArgs {
    #[arg(long, value_enum)]
    solve: Solve,
    #[arg(long)]
    dprime: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    abar: Option<f64>,
    #[arg(long)]
    abar_prime: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollaryConfig {
    solve: Solve,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dprime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constraint: Option<DelayConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abar_prime: Option<f64>,
}

impl CorollaryArgs {
    fn resolve(&self) -> CliResult<CorollaryConfig> {
        let constraint = match (self.alpha_max, self.beta_max) {
            (Some(_), Some(_)) => return config_err("give at most one of --alpha-max and --beta-max"),
            (Some(a), None) => Some(DelayConstraint::AlphaMax(a)),
            (None, Some(b)) => Some(DelayConstraint::BetaMax(b)),
            (None, None) => None,
        };
        Ok(CorollaryConfig { solve: self.solve, dprime: self.dprime, constraint, abar: self.abar, abar_prime: self.abar_prime })
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// A config file, or a report whose `config` field is replayed.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    out: OutputArgs,
    /// CSV report path for simulate runs.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Fully resolved run, embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum RunConfig {
    Region(RegionConfig),
    Scheme(SchemeSpec),
    Simulate(SimulateConfig),
    Lattice(LatticeConfig),
    Corollary(CorollaryConfig),
}

#[derive(Clone, Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

struct Outcome {
    result: Value,
    checks: Vec<Check>,
    csv: Option<Table>,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

/// `x` rounded to twelve significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn num(x: f64) -> String {
    format!("{}", sig12(x))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = serde_json::Number::from_f64(sig12(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn region_of(c: &RegionConfig) -> CliResult<DofRegion> {
    let same = |name: &str| -> CliResult<()> {
        match c.abar2 {
            Some(a2) if a2 != c.abar1 => config_err(format!("theorem {name} takes a single symmetric --abar")),
            _ => Ok(()),
        }
    };
    Ok(match c.theorem {
        Theorem::One => {
            same("1")?;
            region_theorem1(c.abar1)?
        }
        Theorem::Two => {
            same("2")?;
            let beta = c.beta.ok_or_else(|| ConfigError("theorem 2 needs --beta".into()))?;
            region_theorem2(c.abar1, beta)?
        }
        Theorem::Four => region_theorem4(c.abar1, c.abar2.unwrap_or(c.abar1))?,
        Theorem::Outer => outer_bound_lemma1(c.abar1, c.abar2.unwrap_or(c.abar1))?,
    })
}

fn run_region(c: &RegionConfig) -> CliResult<Outcome> {
    let region = region_of(c)?;
    let consistent = region.is_consistent();
    let rows = region.boundary().iter().map(|p| vec![num(p.d1), num(p.d2)]).collect();
    Ok(Outcome {
        result: json!({
            "halfplanes": region.halfplanes(),
            "vertices": region.vertices(),
            "status": region.status(),
        }),
        checks: vec![Check::new("vertices match half-plane enumeration", consistent, "")],
        csv: Some(Table { header: vec!["d1", "d2"], rows }),
    })
}

fn run_scheme(spec: &SchemeSpec) -> CliResult<Outcome> {
    let cfg = spec.build()?;
    let mut rows = Vec::new();
    let mut phases = Vec::new();
    for s in 1..=cfg.phase_count() {
        let mut slots = Vec::new();
        for t in 1..=cfg.slots() {
            let a = cfg.allocation(s, t)?;
            for (k, c) in a.active() {
                rows.push(vec![
                    s.to_string(),
                    t.to_string(),
                    k.label().to_string(),
                    num(c.power),
                    num(c.rate),
                    to_value(&c.precoder).as_str().unwrap_or_default().to_string(),
                ]);
            }
            slots.push(a);
        }
        phases.push(json!({ "phase": s, "role": cfg.role(s)?, "duration": cfg.durations()[s - 1], "slots": slots }));
    }
    let ledger = cfg.quantization_ledger();
    let limit = cfg.dof_limit()?;
    Ok(Outcome {
        result: json!({
            "durations": cfg.durations(),
            "rounded": cfg.is_rounded(),
            "derived": cfg.derived(),
            "common": cfg.common(),
            "phases": phases,
            "ledger": ledger,
            "dof_finite": cfg.dof_finite(),
            "dof_limit": limit,
        }),
        checks: vec![Check::new("quantization ledger balanced", ledger.balanced(), "")],
        csv: Some(Table { header: vec!["phase", "slot", "class", "power", "rate", "precoder"], rows }),
    })
}

fn run_simulate(c: &SimulateConfig) -> CliResult<Outcome> {
    let cfg = c.scheme.build()?;
    let settings = SimSettings {
        grid: c.grid.clone(),
        trials: c.trials,
        seed: c.seed,
        antennas: c.antennas,
        tolerance: c.tolerance,
    };
    settings.validate()?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut phases = Vec::new();
    let mut seen = BTreeMap::new();
    for &s in &c.phases {
        let mut report = simulate_phase(&cfg, s, &settings)?;
        for m in &mut report.measurements {
            if let Some(&v) = c.expect.get(&m.value.label) {
                m.value.expected = v;
                seen.insert(m.value.label.clone(), ());
            }
            let pass = m.value.passes(c.tolerance);
            rows.push(vec![
                m.value.label.clone(),
                to_value(&m.kind).as_str().unwrap_or_default().to_string(),
                num(m.value.expected),
                num(m.value.slope),
                num(m.value.stderr),
                if pass { "pass" } else { "fail" }.to_string(),
            ]);
            if !pass {
                checks.push(Check::new(
                    format!("{} exponent", m.value.label),
                    false,
                    format!("slope {} vs expected {}", num(m.value.slope), num(m.value.expected)),
                ));
            }
        }
        let top = report.overflow.last().copied().unwrap_or_default();
        checks.push(Check::new(
            format!("phase {s} overflow at top SNR"),
            top.fraction() < OVERFLOW_LIMIT,
            format!("{} of {}", top.overflowed, top.quantized),
        ));
        checks.push(Check::new(
            format!("phase {s} zero-forcing leakage"),
            report.max_leakage < LEAKAGE_LIMIT,
            format!("max {:e}", report.max_leakage),
        ));
        phases.push(report);
    }
    for label in c.expect.keys() {
        if !seen.contains_key(label) {
            return config_err(format!("--expect names unknown quantity {label:?}"));
        }
    }
    let failed = rows.iter().filter(|r| r[5] == "fail").count();
    checks.insert(0, Check::new("all exponents within tolerance", failed == 0, format!("{failed} of {} outside", rows.len())));
    Ok(Outcome {
        result: json!({ "phases": phases }),
        checks,
        csv: Some(Table {
            header: vec!["quantity", "kind", "expected_exponent", "measured_slope", "stderr", "pass"],
            rows,
        }),
    })
}

fn run_lattice(c: &LatticeConfig) -> CliResult<Outcome> {
    if c.alphas.len() != c.t {
        return config_err(format!("--alphas has {} entries for T = {}", c.alphas.len(), c.t));
    }
    if c.grid.is_empty() {
        return config_err("empty --P-grid");
    }
    let abar = c.alphas.iter().sum::<f64>() / c.t as f64;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut checks = Vec::new();
    let (mut ratios, mut logs, mut wmins, mut wers) = (vec![], vec![], vec![], vec![]);
    for &p in &c.grid {
        let cb = LatticeCodebook::for_common_vector(c.t, abar, p, c.delta, c.qam)?;
        let (prod, wmin) = match (min_product_distance(&cb), whitened_min_distance(&cb, &c.alphas)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::Construction(m)), _) | (_, Err(Error::Construction(m))) => {
                checks.push(Check::new("non-vanishing coordinates", false, m));
                return Ok(Outcome { result: json!({ "points": points }), checks, csv: None });
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        let ratio = prod / cb.theta().powi(2 * c.t as i32);
        let wer = decode_error_rate(&cb, &c.alphas, c.trials, c.seed, c.noise)?;
        rows.push(vec![num(p), num(cb.theta()), cb.qam().to_string(), num(prod), num(ratio), num(wmin), num(wer)]);
        points.push(json!({
            "snr": p, "theta": cb.theta(), "qam": cb.qam(), "rate": cb.rate(),
            "min_product_distance": prod, "ratio": ratio,
            "whitened_min_distance": wmin, "word_error_rate": wer,
        }));
        ratios.push(ratio);
        logs.push(p.log10());
        wmins.push(wmin.log10());
        wers.push(wer);
    }
    checks.push(Check::new("non-vanishing coordinates", true, ""));
    if c.qam.is_some() {
        let spread = ratios.iter().map(|r| (r - ratios[0]).abs() / ratios[0]).fold(0.0, f64::max);
        checks.push(Check::new("product-distance ratio independent of P", spread <= 1e-9, format!("relative spread {spread:e}")));
    }
    let slope = (logs.len() >= 2).then(|| ols_slope(&logs, &wmins, &vec![0.0; logs.len()]).0);
    if let Some(s) = slope {
        checks.push(Check::new(
            "whitened distance grows at least like P^delta",
            s >= c.delta - c.tolerance,
            format!("slope {}", num(s)),
        ));
    }
    let monotone = wers.windows(2).all(|w| w[1] <= w[0]);
    checks.push(Check::new("error rate non-increasing in P", monotone, ""));
    Ok(Outcome {
        result: json!({ "points": points, "whitened_slope": slope }),
        checks,
        csv: Some(Table {
            header: vec!["snr", "theta", "qam", "min_product_distance", "ratio", "whitened_min_distance", "word_error_rate"],
            rows,
        }),
    })
}

fn run_corollary(c: &CorollaryConfig) -> CliResult<Outcome> {
    let need = |x: Option<f64>, flag: &str| x.ok_or_else(|| ConfigError(format!("--{flag} is required")));
    let result = match c.solve {
        Solve::MinQuality => to_value(&solve_min_quality(need(c.dprime, "dprime")?)?),
        Solve::MaxDelay => {
            let r = solve_max_delay(need(c.dprime, "dprime")?, c.constraint.unwrap_or(DelayConstraint::None))?;
            json!({ "gamma": r.gamma, "witness": r.witness })
        }
        Solve::Asymmetry => {
            let (pair, shortfall) = asymmetry_penalty(need(c.abar, "abar")?, need(c.abar_prime, "abar-prime")?)?;
            json!({ "pair": pair, "shortfall": shortfall })
        }
    };
    Ok(Outcome { result, checks: vec![], csv: None })
}

fn execute(config: &RunConfig) -> CliResult<Outcome> {
    match config {
        RunConfig::Region(c) => run_region(c),
        RunConfig::Scheme(c) => run_scheme(c),
        RunConfig::Simulate(c) => run_simulate(c),
        RunConfig::Lattice(c) => run_lattice(c),
        RunConfig::Corollary(c) => run_corollary(c),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))
}

fn write_csv(path: &Path, table: &Table) -> CliResult<()> {
    let io = |e: csv::Error| ConfigError(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(&table.header).map_err(io)?;
    for r in &table.rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))
}

/// Summary path next to a simulate CSV report.
pub fn summary_path(report: &Path) -> PathBuf {
    let mut s = report.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

struct Destinations {
    output: Option<PathBuf>,
    csv: Option<PathBuf>,
}

fn finish(config: &RunConfig, dest: Destinations) -> CliResult<i32> {
    let outcome = execute(config)?;
    let passed = outcome.checks.iter().all(|c| c.passed);
    let mut report = json!({
        "format_version": FORMAT_VERSION,
        "config": config,
        "passed": passed,
        "checks": outcome.checks,
        "result": outcome.result,
    });
    round_value(&mut report);
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &dest.output {
        Some(p) => write_file(p, &text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| ConfigError(format!("cannot write stdout: {e}")))?;
        }
    }
    if let (Some(p), Some(t)) = (&dest.csv, &outcome.csv) {
        write_csv(p, t)?;
    }
    for c in outcome.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} {}", c.name, c.detail);
    }
    Ok(if passed { EXIT_OK } else { EXIT_CONTRACT })
}

fn simulate_destinations(report: Option<PathBuf>, output: Option<PathBuf>) -> Destinations {
    let output = output.or_else(|| report.as_deref().map(summary_path));
    Destinations { output, csv: report }
}

fn load_run_config(path: &Path) -> CliResult<RunConfig> {
    let v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| ConfigError(format!("malformed config: {e}")))?;
    let v = match v {
        Value::Object(mut o) if o.contains_key("format_version") => {
            o.remove("config").ok_or_else(|| ConfigError("report has no embedded config".into()))?
        }
        other => other,
    };
    serde_json::from_value(v).map_err(|e| ConfigError(format!("malformed config: {e}")))
}

fn dispatch(cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::Region(a) => {
            let c = RunConfig::Region(a.resolve()?);
            finish(&c, Destinations { output: a.out.output, csv: a.out.csv })
        }
        Command::Scheme(a) => {
            let c = RunConfig::Scheme(a.scheme.resolve()?);
            finish(&c, Destinations { output: a.out.output, csv: a.out.csv })
        }
        Command::Simulate(a) => {
            let c = RunConfig::Simulate(a.resolve()?);
            finish(&c, simulate_destinations(a.report, None))
        }
        Command::Lattice(a) => {
            let c = RunConfig::Lattice(LatticeConfig {
                t: a.t,
                qam: a.qam,
                grid: parse_grid(&a.p_grid)?,
                delta: a.delta,
                alphas: a.alphas,
                trials: a.trials,
                seed: a.seed,
                noise: match a.noise {
                    NoiseArg::Gaussian => Noise::Gaussian,
                    NoiseArg::Zero => Noise::Zero,
                },
                tolerance: a.tolerance,
            });
            finish(&c, Destinations { output: a.out.output, csv: a.out.csv })
        }
        Command::Corollary(a) => {
            let c = RunConfig::Corollary(a.resolve()?);
            finish(&c, Destinations { output: a.out.output, csv: a.out.csv })
        }
        Command::Run(a) => {
            let c = load_run_config(&a.config)?;
            let dest = match c {
                RunConfig::Simulate(_) => simulate_destinations(a.report.or(a.out.csv), a.out.output),
                _ => Destinations { output: a.out.output, csv: a.out.csv },
            };
            finish(&c, dest)
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialization in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(123456789.123456789), 123456789.123);
    }

    #[test]
    fn grid_forms() {
        let g = parse_grid("1e2:1e6:5").unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[2] - 1e4).abs() < 1e-6);
        assert_eq!(parse_grid("1,10,100").unwrap(), vec![1.0, 10.0, 100.0]);
        assert!(parse_grid("1e6:1e2:5").is_err());
    }

    #[test]
    fn run_config_round_trips() {
        let c = RunConfig::Region(RegionConfig { theorem: Theorem::Two, abar1: 0.3, abar2: None, beta: Some(0.4) });
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"subcommand\":\"region\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), c);
    }
}
