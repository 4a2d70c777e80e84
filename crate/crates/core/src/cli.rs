//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 validation failure (a check did not pass),
//! 2 usage error (bad flags, bad config, unwritable output).
//!
//! Options may also come from a flat `key = value` config file given with
//! `--config`; keys are the long flag names without dashes prefix
//! (`kappa-s = 0.2`). Command-line flags take precedence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{self, Axis, SweepSpec, PAPER_TOLERANCE};
use crate::cavity::{CavityParams, Interaction, ReflectionPair};
use crate::hilbert::fidelity_up_to_global_phase;
use crate::protocols::{
    self, BellState, BranchMode, HyperBellState, PhotonQubits, DETERMINISTIC_THRESHOLD,
};
use crate::C64;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Amplitude renormalization above this deviation is reported.
const RENORMALIZE_WARNING: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "hypercnot",
    version,
    about = "Simulate the QD-cavity spatial-polarization hyper-CNOT gate"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat key = value config file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Coupling strength g/κ.
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Side leakage κ_s/κ.
    #[arg(long = "kappa-s", global = true)]
    pub kappa_s: Option<f64>,
    /// X⁻ decay γ/κ.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Probe detuning (ω − ω_c)/κ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
    /// Sample spin outcomes with this seed instead of enumerating.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Ideal,
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run all 16 basis inputs and compare with CNOT⊗CNOT.
    TruthTable,
    /// Run the gate on one input state.
    Gate(GateArgs),
    /// Prepare the two-photon four-qubit cluster state.
    Cluster,
    /// Decode hyperentangled Bell states.
    BellAnalyze(BellArgs),
    /// Formula (and optionally simulated) F and η over a (g, κ_s) lattice.
    Sweep(SweepArgs),
    /// Compare the closed form against the reference operating points.
    PaperCheck,
}

/// Single-qubit factors: `0`, `1`, `+`, `-`, `R`, `L`, `a1`, `a2`, `b1`, `b2`
/// or two comma-separated complex amplitudes such as `0.6,0.8i`.
#[derive(Debug, Clone, Default, Args)]
pub struct GateArgs {
    #[arg(long = "a-pol", allow_hyphen_values = true)]
    pub a_pol: Option<String>,
    #[arg(long = "a-spatial", allow_hyphen_values = true)]
    pub a_spatial: Option<String>,
    #[arg(long = "b-pol", allow_hyphen_values = true)]
    pub b_pol: Option<String>,
    #[arg(long = "b-spatial", allow_hyphen_values = true)]
    pub b_spatial: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BellArgs {
    /// Polarization Bell state (phi+, phi-, psi+, psi- or 0..3); all 16 if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub pol: Option<String>,
    /// Spatial Bell state.
    #[arg(long, allow_hyphen_values = true)]
    pub spatial: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// g/κ range `lo:hi`.
    #[arg(long = "g-range")]
    pub g_range: Option<String>,
    /// κ_s/κ range `lo:hi`.
    #[arg(long = "kappa-s-range")]
    pub kappa_s_range: Option<String>,
    /// Points per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Also run the circuit simulation at every point.
    #[arg(long)]
    pub simulate: bool,
}

/// Failure of a command before its check could be evaluated.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

const CONFIG_KEYS: &[&str] = &[
    "mode",
    "g",
    "kappa-s",
    "gamma",
    "detuning",
    "seed",
    "out",
    "format",
    "tolerance",
    "a-pol",
    "a-spatial",
    "b-pol",
    "b-spatial",
    "pol",
    "spatial",
    "g-range",
    "kappa-s-range",
    "resolution",
    "simulate",
];

/// Parses flat `key = value` text. `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!("config line {}: expected `key = value`", n + 1));
        };
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return usage(format!("config line {}: unknown key `{key}`", n + 1));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Fully resolved options of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: ModeArg,
    pub params: Option<CavityParams>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Option<FormatArg>,
    pub tolerance: f64,
    #[serde(skip)]
    extra: BTreeMap<String, String>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value `{value}` for `{key}`")))
}

fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key).map(|v| parse_value(key, v)).transpose(),
    }
}

fn pick_enum<T: ValueEnum>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file
            .get(key)
            .map(|v| {
                T::from_str(v, true)
                    .map_err(|_| CliError::Usage(format!("invalid value `{v}` for `{key}`")))
            })
            .transpose(),
    }
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs, file: BTreeMap<String, String>) -> CliResult<Self> {
        let mode = pick_enum(common.mode, &file, "mode")?.unwrap_or(ModeArg::Ideal);
        let g: Option<f64> = pick(common.g, &file, "g")?;
        let kappa_s = pick(common.kappa_s, &file, "kappa-s")?.unwrap_or(0.0);
        let gamma = pick(common.gamma, &file, "gamma")?.unwrap_or(0.1);
        let detuning = pick(common.detuning, &file, "detuning")?.unwrap_or(0.5);
        let params = match (mode, g) {
            (ModeArg::Physical, None) => return usage("physical mode requires --g"),
            (_, Some(g)) => Some(CavityParams::new(g, kappa_s, gamma)?.with_detuning(detuning)?),
            (ModeArg::Ideal, None) => None,
        };
        let tolerance = pick(common.tolerance, &file, "tolerance")?.unwrap_or(PAPER_TOLERANCE);
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return usage("tolerance must be a non-negative number");
        }
        Ok(RunConfig {
            mode,
            params,
            seed: pick(common.seed, &file, "seed")?,
            out: common
                .out
                .clone()
                .or_else(|| file.get("out").map(PathBuf::from)),
            format: pick_enum(common.format, &file, "format")?,
            tolerance,
            extra: file,
        })
    }

    pub fn interaction(&self) -> Interaction {
        match (self.mode, &self.params) {
            (ModeArg::Physical, Some(p)) => Interaction::physical(p),
            _ => Interaction::Ideal,
        }
    }

    fn extra(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.extra.get(key).cloned())
    }
}

/// Parses one single-qubit factor, renormalizing if needed. Returns the
/// factor and the norm² it had before renormalization.
pub fn parse_qubit(spec: &str) -> CliResult<([C64; 2], f64)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let preset = match spec.trim() {
        "0" | "R" | "a1" | "b1" | "up" => Some([one, zero]),
        "1" | "L" | "a2" | "b2" | "down" => Some([zero, one]),
        "+" => Some([one * s, one * s]),
        "-" => Some([one * s, -one * s]),
        _ => None,
    };
    if let Some(p) = preset {
        return Ok((p, 1.0));
    }
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return usage(format!(
            "cannot parse qubit `{spec}`: expected a preset or two amplitudes"
        ));
    }
    let mut amps = [zero; 2];
    for (slot, text) in amps.iter_mut().zip(&parts) {
        *slot = text
            .parse::<C64>()
            .map_err(|_| CliError::Usage(format!("invalid amplitude `{text}`")))?;
    }
    let norm_sqr: f64 = amps.iter().map(C64::norm_sqr).sum();
    if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
        return usage(format!("qubit `{spec}` has zero norm"));
    }
    let scale = 1.0 / norm_sqr.sqrt();
    Ok(([amps[0] * scale, amps[1] * scale], norm_sqr))
}

fn parse_bell(spec: &str) -> CliResult<BellState> {
    let found = match spec.trim().to_ascii_lowercase().as_str() {
        "phi+" | "0" => Some(BellState::PhiPlus),
        "phi-" | "1" => Some(BellState::PhiMinus),
        "psi+" | "2" => Some(BellState::PsiPlus),
        "psi-" | "3" => Some(BellState::PsiMinus),
        _ => None,
    };
    found.ok_or_else(|| CliError::Usage(format!("unknown Bell state `{spec}`")))
}

fn parse_range(spec: &str) -> CliResult<(f64, f64)> {
    let Some((lo, hi)) = spec.split_once(':') else {
        return usage(format!("range `{spec}` must be `lo:hi`"));
    };
    Ok((
        parse_value("range", lo.trim())?,
        parse_value("range", hi.trim())?,
    ))
}

/// Rendered output of a command and whether its check passed.
struct Report {
    body: String,
    ok: bool,
}

fn pattern_name(pattern: [usize; 4]) -> String {
    let pol = |b| if b == 0 { "R" } else { "L" };
    format!(
        "{},a{} | {},b{}",
        pol(pattern[0]),
        pattern[1] + 1,
        pol(pattern[2]),
        pattern[3] + 1
    )
}

fn mode_line(config: &RunConfig) -> String {
    match (&config.mode, &config.params) {
        (ModeArg::Physical, Some(p)) => {
            let pair = ReflectionPair::from_params(p);
            format!(
                "mode: physical (g={}, kappa_s={}, gamma={}, detuning={}; |r0|={:.6}, |rh|={:.6}, phi0={:.6}, phih={:.6})",
                p.g,
                p.kappa_s,
                p.gamma,
                p.probe_detuning,
                pair.r_cold.norm(),
                pair.r_hot.norm(),
                pair.phi_0(),
                pair.phi_h()
            )
        }
        _ => "mode: ideal".to_string(),
    }
}

fn cmd_truth_table(config: &RunConfig) -> CliResult<Report> {
    let rows = analysis::truth_table(config.interaction())?;
    let passed = rows.iter().filter(|r| r.pass).count();
    let ok = passed == rows.len();
    let body = match config.format.unwrap_or(FormatArg::Text) {
        FormatArg::Json => {
            serde_json::to_string_pretty(&json!({
                "mode": config.mode,
                "params": config.params,
                "rows": rows,
                "passed": passed,
                "total": rows.len(),
            }))
            .expect("serializable")
                + "\n"
        }
        FormatArg::Csv => {
            let mut s = String::from("input,expected,observed,fidelity,worst_fidelity,pass\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    pattern_name(r.input),
                    pattern_name(r.expected),
                    pattern_name(r.observed),
                    r.fidelity,
                    r.worst_fidelity,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
        FormatArg::Text => {
            let mut s = mode_line(config) + "\n";
            let _ = writeln!(
                s,
                "{:<14} {:<14} {:<14} {:>14} {:>14}  result",
                "input", "expected", "observed", "fidelity", "worst"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<14} {:<14} {:<14} {:>14.10} {:>14.10}  {}",
                    pattern_name(r.input),
                    pattern_name(r.expected),
                    pattern_name(r.observed),
                    r.fidelity,
                    r.worst_fidelity,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                s,
                "{passed}/{} {}",
                rows.len(),
                if ok { "PASS" } else { "FAIL" }
            );
            s
        }
    };
    Ok(Report { body, ok })
}

#[derive(Serialize)]
struct BranchReport {
    spin_outcomes: [protocols::SpinOutcome; 2],
    feed_forward: Vec<protocols::Correction>,
    branch_probability: f64,
    survival_probability: f64,
    fidelity_vs_ideal: f64,
    final_state: String,
    amplitudes: Vec<[f64; 2]>,
}

fn cmd_gate(config: &RunConfig, args: &GateArgs, warn: &mut dyn Write) -> CliResult<Report> {
    let mut factor = |flag: &Option<String>, key: &str| -> CliResult<[C64; 2]> {
        let spec = config.extra(flag, key).unwrap_or_else(|| "+".to_string());
        let (amps, norm_sqr) = parse_qubit(&spec)?;
        if (norm_sqr - 1.0).abs() > RENORMALIZE_WARNING {
            let _ = writeln!(
                warn,
                "warning: {key} amplitudes renormalized (norm² was {norm_sqr})"
            );
        }
        Ok(amps)
    };
    let a = PhotonQubits::new(
        factor(&args.a_pol, "a-pol")?,
        factor(&args.a_spatial, "a-spatial")?,
    );
    let b = PhotonQubits::new(
        factor(&args.b_pol, "b-pol")?,
        factor(&args.b_spatial, "b-spatial")?,
    );
    let input = protocols::two_photon_product(a, b)?;
    let mode = config
        .seed
        .map_or(BranchMode::Enumerate, BranchMode::Sample);
    let runs = protocols::hyper_cnot(&input, config.interaction(), mode)?;
    let ideal = protocols::hyper_cnot(&input, Interaction::Ideal, BranchMode::Enumerate)?;
    let branches = runs
        .iter()
        .map(|run| {
            let reference = ideal
                .iter()
                .find(|r| r.spin_outcomes == run.spin_outcomes)
                .unwrap_or(&ideal[0]);
            Ok(BranchReport {
                spin_outcomes: run.spin_outcomes,
                feed_forward: run.feed_forward_ops.clone(),
                branch_probability: run.branch_probability,
                survival_probability: run.survival_probability,
                fidelity_vs_ideal: fidelity_up_to_global_phase(
                    &run.final_state,
                    &reference.final_state,
                )?,
                final_state: run.final_state.to_string(),
                amplitudes: run
                    .final_state
                    .amplitudes()
                    .iter()
                    .map(|z| [z.re, z.im])
                    .collect(),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let body = match config.format.unwrap_or(FormatArg::Text) {
        FormatArg::Json => {
            serde_json::to_string_pretty(&json!({
                "mode": config.mode,
                "params": config.params,
                "seed": config.seed,
                "input": input.to_string(),
                "branches": branches,
            }))
            .expect("serializable")
                + "\n"
        }
        FormatArg::Csv => return usage("gate supports text or json output"),
        FormatArg::Text => {
            let mut s = mode_line(config) + "\n";
            let _ = writeln!(s, "input: {input}");
            for br in &branches {
                let _ = writeln!(
                    s,
                    "spins (e1,e2) = ({:?},{:?})  p = {:.6}  survival = {:.6}  corrections = {:?}  fidelity = {:.10}",
                    br.spin_outcomes[0],
                    br.spin_outcomes[1],
                    br.branch_probability,
                    br.survival_probability,
                    br.feed_forward,
                    br.fidelity_vs_ideal
                );
                let _ = writeln!(s, "  output: {}", br.final_state);
            }
            s
        }
    };
    Ok(Report { body, ok: true })
}

fn cmd_cluster(config: &RunConfig) -> CliResult<Report> {
    let preps = protocols::prepare_cluster(config.interaction())?;
    let target = protocols::expected_cluster_state()?;
    let fidelities = preps
        .iter()
        .map(|p| fidelity_up_to_global_phase(&p.cluster, &target))
        .collect::<crate::Result<Vec<_>>>()?;
    let ok = !config.interaction().is_ideal() || fidelities.iter().all(|f| *f >= 1.0 - 1e-10);
    let body = match config.format.unwrap_or(FormatArg::Text) {
        FormatArg::Json => {
            serde_json::to_string_pretty(&json!({
                "mode": config.mode,
                "params": config.params,
                "branches": preps.iter().zip(&fidelities).map(|(p, f)| json!({
                    "spin_outcomes": p.run.spin_outcomes,
                    "branch_probability": p.run.branch_probability,
                    "fidelity": f,
                    "cluster": p.cluster.to_string(),
                })).collect::<Vec<_>>(),
                "target": target.to_string(),
            }))
            .expect("serializable")
                + "\n"
        }
        FormatArg::Csv => return usage("cluster supports text or json output"),
        FormatArg::Text => {
            let mut s = mode_line(config) + "\n";
            let _ = writeln!(s, "target: {target}");
            for (p, f) in preps.iter().zip(&fidelities) {
                let _ = writeln!(
                    s,
                    "spins ({:?},{:?})  p = {:.6}  fidelity = {:.10}",
                    p.run.spin_outcomes[0], p.run.spin_outcomes[1], p.run.branch_probability, f
                );
                let _ = writeln!(s, "  state: {}", p.cluster);
            }
            let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Report { body, ok })
}

fn cmd_bell(config: &RunConfig, args: &BellArgs) -> CliResult<Report> {
    let pol = config.extra(&args.pol, "pol");
    let spatial = config.extra(&args.spatial, "spatial");
    let inputs = match (pol, spatial) {
        (None, None) => HyperBellState::all(),
        (Some(p), Some(s)) => vec![HyperBellState::new(parse_bell(&p)?, parse_bell(&s)?)],
        _ => return usage("give both --pol and --spatial, or neither"),
    };
    let interaction = config.interaction();
    let mut rows = Vec::new();
    for h in &inputs {
        rows.push((*h, protocols::analyze_hyper_bell(*h, interaction)?));
    }
    let mut patterns: Vec<[usize; 4]> = rows.iter().map(|(_, d)| d.pattern).collect();
    patterns.sort();
    patterns.dedup();
    let collisions = rows.len() - patterns.len();
    let correct = rows
        .iter()
        .filter(|(h, d)| d.hyper_bell() == Some(*h))
        .count();
    let deterministic = rows.iter().filter(|(_, d)| d.deterministic).count();
    let ok = collisions == 0
        && correct == rows.len()
        && (!interaction.is_ideal() || deterministic == rows.len());
    let body = match config.format.unwrap_or(FormatArg::Text) {
        FormatArg::Json => {
            serde_json::to_string_pretty(&json!({
                "mode": config.mode,
                "params": config.params,
                "rows": rows.iter().map(|(h, d)| json!({
                    "input": h.name(),
                    "index": h.index(),
                    "decoding": d,
                    "correct": d.hyper_bell() == Some(*h),
                })).collect::<Vec<_>>(),
                "collisions": collisions,
                "correct": correct,
            }))
            .expect("serializable")
                + "\n"
        }
        FormatArg::Csv => return usage("bell-analyze supports text or json output"),
        FormatArg::Text => {
            let mut s = mode_line(config) + "\n";
            let _ = writeln!(
                s,
                "{:>3}  {:<24} {:<14} {:>8} {:>14}  deterministic",
                "idx", "input", "pattern", "decoded", "confidence"
            );
            for (h, d) in &rows {
                let _ = writeln!(
                    s,
                    "{:>3}  {:<24} {:<14} {:>8} {:>14.10}  {}",
                    h.index(),
                    h.name(),
                    pattern_name(d.pattern),
                    format!("({},{})", d.polarization, d.spatial),
                    d.confidence,
                    if d.confidence >= DETERMINISTIC_THRESHOLD {
                        "yes"
                    } else {
                        "no"
                    }
                );
            }
            let _ = writeln!(
                s,
                "{correct}/{} decoded, {collisions} collisions: {}",
                rows.len(),
                if ok { "PASS" } else { "FAIL" }
            );
            s
        }
    };
    Ok(Report { body, ok })
}

fn cmd_sweep(config: &RunConfig, args: &SweepArgs) -> CliResult<Report> {
    let defaults = SweepSpec::default();
    let resolution: Option<usize> = match args.resolution {
        Some(r) => Some(r),
        None => config
            .extra
            .get("resolution")
            .map(|v| parse_value("resolution", v))
            .transpose()?,
    };
    let axis = |range: Option<String>, default: Axis| -> CliResult<Axis> {
        let (lo, hi) = match range {
            Some(r) => parse_range(&r)?,
            None => (default.lo, default.hi),
        };
        let steps = match resolution {
            _ if lo == hi => 1,
            Some(n) => n,
            None => default.steps,
        };
        Ok(Axis::new(lo, hi, steps)?)
    };
    let simulate = args.simulate
        || config
            .extra
            .get("simulate")
            .map(|v| parse_value::<bool>("simulate", v))
            .transpose()?
            .unwrap_or(false);
    let spec = SweepSpec {
        g: axis(config.extra(&args.g_range, "g-range"), defaults.g)?,
        kappa_s: axis(
            config.extra(&args.kappa_s_range, "kappa-s-range"),
            defaults.kappa_s,
        )?,
        gamma: config.params.map_or(defaults.gamma, |p| p.gamma),
        probe_detuning: config
            .params
            .map_or(defaults.probe_detuning, |p| p.probe_detuning),
        simulate,
    };
    let result = analysis::sweep(&spec)?;
    let body = match config.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Json => serde_json::to_string_pretty(&result).expect("serializable") + "\n",
        FormatArg::Csv | FormatArg::Text => result.to_csv_string(),
    };
    Ok(Report { body, ok: true })
}

fn cmd_paper_check(config: &RunConfig) -> CliResult<Report> {
    let rows = analysis::paper_check(config.tolerance);
    let ok = rows.iter().all(|r| r.pass);
    let body = match config.format.unwrap_or(FormatArg::Text) {
        FormatArg::Json => {
            serde_json::to_string_pretty(&json!({
                "tolerance": config.tolerance,
                "rows": rows,
                "pass": ok,
            }))
            .expect("serializable")
                + "\n"
        }
        FormatArg::Csv => {
            let mut s = String::from(
                "point,g_over_kappa,kappa_s_over_kappa,F_reported,F_computed,dF,eta_reported,eta_computed,deta,pass\n",
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.point.label,
                    r.g_over_kappa,
                    r.point.kappa_s,
                    r.point.fidelity,
                    r.computed.fidelity,
                    r.delta_fidelity,
                    r.point.efficiency,
                    r.computed.efficiency,
                    r.delta_efficiency,
                    r.pass
                );
            }
            s
        }
        FormatArg::Text => {
            let mut s = format!("tolerance: {}\n", config.tolerance);
            let _ = writeln!(
                s,
                "{:<22} {:>6} {:>8} {:>9} {:>8} {:>8} {:>9} {:>8}  result",
                "point", "g/k", "F ref", "F", "|dF|", "eta ref", "eta", "|deta|"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<22} {:>6.3} {:>8.3} {:>9.5} {:>8.5} {:>8.3} {:>9.5} {:>8.5}  {}",
                    r.point.label,
                    r.g_over_kappa,
                    r.point.fidelity,
                    r.computed.fidelity,
                    r.delta_fidelity,
                    r.point.efficiency,
                    r.computed.efficiency,
                    r.delta_efficiency,
                    if r.pass { "PASS" } else { "FAIL" }
                );
            }
            let _ = writeln!(s, "{}", if ok { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Report { body, ok })
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<bool> {
    let file = match &cli.common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    let config = RunConfig::resolve(&cli.common, file)?;
    if let Some(warning) = config.params.and_then(|p| p.side_leakage_warning()) {
        let _ = writeln!(err, "warning: {warning}");
    }
    let report = match &cli.command {
        Command::TruthTable => cmd_truth_table(&config)?,
        Command::Gate(args) => cmd_gate(&config, args, err)?,
        Command::Cluster => cmd_cluster(&config)?,
        Command::BellAnalyze(args) => cmd_bell(&config, args)?,
        Command::Sweep(args) => cmd_sweep(&config, args)?,
        Command::PaperCheck => cmd_paper_check(&config)?,
    };
    match &config.out {
        Some(path) => fs::write(path, report.body.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => out
            .write_all(report.body.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))?,
    }
    Ok(report.ok)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_SUCCESS
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(true) => EXIT_SUCCESS,
        Ok(false) => EXIT_VALIDATION,
        Err(CliError::Validation(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VALIDATION
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
