//! Command-line front end: bound sweeps, key-rate curves, swap and chain
//! reports, and the self-test.
//!
//! CSV schemas (version 1):
//!
//! * `bounds`: `p,F,f_max,f_min_analytic,f_min_sdp,delta_star,bd_lower,bd_upper,f_werner,psi_min_outcome`
//! * `qkd`: `n,skf_postselected,skf_bd,skf_werner`
//!
//! Every float is printed with 12 significant digits, so identical arguments
//! give byte-identical files.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{sweep_f, sweep_p, BoundSweepRow, CurveOptions};
use crate::chain::{
    bd_chain, builtin_protocol, chain_fidelity_bounds, outcome_distribution_links, run_chain_postselected,
    validate_protocol, werner_chain_fidelity, BuiltinProtocol, SwapAndCorrectProtocol, Syndrome,
};
use crate::qcore::{psi00, ComplexMatrix, DensityOperator};
use crate::qkd::{chain_skf, SkfMode};
use crate::states::{bd_coeffs_of, bd_twirl, make_named, max_p, BellDiagonalCoeffs, NamedState};
use crate::swap::{all_outcomes, bd_swap, nonpostselected_swap, swap_lower_bound, swap_upper_bound};
use crate::verify::{self, SuiteReport, DEFAULT_SEED};

pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const QKD_CSV_HEADER: &str = "n,skf_postselected,skf_bd,skf_werner";
const DEFAULT_LINK: &str = r#"{"kind":"opt","p":0.5,"F":0.95}"#;
/// Slack for the bound checks in the swap and chain reports.
const CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "bellchain",
    version,
    about = "Entanglement swapping, fidelity bounds and key rates for repeater chains"
)]
pub struct RunConfig {
    /// Directory for output files without an explicit --output.
    #[arg(long, env = "BELLCHAIN_OUT_DIR", default_value = ".", global = true)]
    pub out_dir: PathBuf,
    /// Random seed (selftest sampling).
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity-bound sweep over p at fixed F, or over F at fixed p (CSV).
    Bounds(BoundsArgs),
    /// Secret-key fraction versus chain length (CSV).
    Qkd(QkdArgs),
    /// All four outcomes of one swap (JSON).
    Swap(SwapArgs),
    /// Syndrome distribution of a chain under a protocol (JSON).
    Chain(ChainArgs),
    /// Run the verification suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("sweep").required(true).args(["fix_f", "fix_p"])))]
pub struct BoundsArgs {
    /// Sweep p uniformly over [0, F].
    #[arg(long)]
    pub fix_f: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub p_steps: usize,
    /// Sweep F uniformly over [f-min, f-max].
    #[arg(long)]
    pub fix_p: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub f_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub f_max: f64,
    #[arg(long, default_value_t = 100)]
    pub f_steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub solver_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub delta_tol: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QkdArgs {
    /// Link state as JSON, e.g. '{"kind":"r_state","p":0.95}'.
    #[arg(long, default_value = DEFAULT_LINK)]
    pub link: String,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 14)]
    pub n_max: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SwapArgs {
    /// First link (B1, A1) as JSON.
    #[arg(long, default_value = DEFAULT_LINK)]
    pub state1: String,
    /// Second link (A2, B2); defaults to the first.
    #[arg(long)]
    pub state2: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Link state as JSON; repeat once per link, or give one with --n.
    #[arg(long = "link", required = true)]
    pub links: Vec<String>,
    /// Number of copies of a single --link.
    #[arg(long)]
    pub n: Option<usize>,
    /// `sequential`, `correct_at_end`, protocol JSON, or `@file` with protocol JSON.
    #[arg(long, default_value = "correct_at_end")]
    pub protocol: String,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Run the suites at acceptance sizes (several minutes).
    #[arg(long)]
    pub full: bool,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Bad arguments that clap cannot see, e.g. an empty sweep range.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one command; `Ok(false)` means it ran but a check failed.
pub fn run(config: &RunConfig) -> anyhow::Result<bool> {
    match &config.command {
        Command::Bounds(a) => cmd_bounds(config, a),
        Command::Qkd(a) => cmd_qkd(config, a),
        Command::Swap(a) => cmd_swap(a),
        Command::Chain(a) => cmd_chain(a),
        Command::Selftest(a) => cmd_selftest(config, a),
    }
}

/// `x` with 12 significant digits, shortest form.
pub fn fmt12(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    if !r.is_finite() {
        return format!("{r}");
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Rounds to 12 significant digits (negative zero becomes zero).
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(round12(x)).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn csv_line(values: &[f64]) -> String {
    values.iter().map(|&x| fmt12(x)).collect::<Vec<_>>().join(",")
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating directory {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit_json(value: Value, output: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(&round_json(value))? + "\n";
    match output {
        Some(p) => write_output(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_state(text: &str) -> anyhow::Result<(NamedState, DensityOperator)> {
    let named: NamedState =
        serde_json::from_str(text).map_err(|e| usage(format!("bad state descriptor {text}: {e}")))?;
    let rho = make_named(&named).with_context(|| format!("building state {text}"))?;
    Ok((named, rho))
}

fn fidelity(rho: &DensityOperator) -> anyhow::Result<f64> {
    Ok(rho.fidelity_to_pure(&psi00())?)
}

fn coeffs_json(c: &BellDiagonalCoeffs) -> Value {
    json!(c.lambda)
}

fn check_json(name: &str, ok: bool, detail: Value) -> Value {
    json!({ "name": name, "passed": ok, "detail": detail })
}

fn cmd_bounds(config: &RunConfig, a: &BoundsArgs) -> anyhow::Result<bool> {
    let opts = CurveOptions {
        solver_tol: a.solver_tol,
        grid_points: a.grid_points,
        delta_tol: a.delta_tol,
        ..CurveOptions::default()
    };
    let (rows, default_name) = if let Some(f) = a.fix_f {
        if a.p_steps == 0 {
            return Err(usage("--p-steps must be at least 1"));
        }
        if !(0.0..=1.0).contains(&f) {
            return Err(usage(format!("--fix-f must lie in [0, 1], got {f}")));
        }
        (sweep_p(f, a.p_steps, &opts)?, format!("bounds_fix_f_{}.csv", fmt12(f)))
    } else {
        let p = a.fix_p.expect("clap requires --fix-f or --fix-p");
        if a.f_steps == 0 {
            return Err(usage("--f-steps must be at least 1"));
        }
        if !(a.f_min <= a.f_max) || !(0.0..=1.0).contains(&a.f_min) || !(0.0..=1.0).contains(&a.f_max) {
            return Err(usage(format!("empty or invalid F range [{}, {}]", a.f_min, a.f_max)));
        }
        if p > a.f_min {
            return Err(usage(format!("--fix-p {p} exceeds --f-min {}; every point needs p <= F", a.f_min)));
        }
        (sweep_f(p, a.f_min, a.f_max, a.f_steps, &opts)?, format!("bounds_fix_p_{}.csv", fmt12(p)))
    };
    let bad: Vec<String> = rows
        .iter()
        .flat_map(|r| r.ordering_violations(1e-6).into_iter().map(move |v| format!("p = {}, F = {}: {v}", r.p, r.f)))
        .collect();
    if !bad.is_empty() {
        bail!("bound ordering violated, nothing written:\n  {}", bad.join("\n  "));
    }
    let mut text = String::from(BoundSweepRow::CSV_HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(&csv_line(&r.values()));
        text.push('\n');
    }
    let path = a.output.clone().unwrap_or_else(|| config.out_dir.join(default_name));
    write_output(&path, &text)?;
    println!("{} rows -> {}", rows.len(), path.display());
    Ok(true)
}

fn cmd_qkd(config: &RunConfig, a: &QkdArgs) -> anyhow::Result<bool> {
    if a.n_min < 2 || a.n_max < a.n_min {
        return Err(usage(format!("need 2 <= n-min <= n-max, got [{}, {}]", a.n_min, a.n_max)));
    }
    let (_, link) = parse_state(&a.link)?;
    let mut text = format!("{QKD_CSV_HEADER}\n");
    for n in a.n_min..=a.n_max {
        let post = chain_skf(&link, n, SkfMode::Postselected)?;
        let bd = chain_skf(&link, n, SkfMode::BdApprox)?;
        let werner = chain_skf(&link, n, SkfMode::WernerApprox)?;
        // postselection can only help (the rate is convex in the QBERs)
        if post < bd - 1e-12 || [post, bd, werner].iter().any(|x| !(0.0..=1.0).contains(x)) {
            bail!("inconsistent rates at n = {n}: postselected {post}, bd {bd}, werner {werner}; nothing written");
        }
        text.push_str(&format!("{n},{}\n", csv_line(&[post, bd, werner])));
    }
    let path = a.output.clone().unwrap_or_else(|| config.out_dir.join("qkd.csv"));
    write_output(&path, &text)?;
    println!("{} rows -> {}", a.n_max - a.n_min + 1, path.display());
    Ok(true)
}

fn cmd_swap(a: &SwapArgs) -> anyhow::Result<bool> {
    let (d1, rho1) = parse_state(&a.state1)?;
    let (d2, rho2) = parse_state(a.state2.as_deref().unwrap_or(&a.state1))?;
    let (f1, f2) = (fidelity(&rho1)?, fidelity(&rho2)?);
    let (p1, p2) = (max_p(&rho1)?, max_p(&rho2)?);
    let (lo, hi) = (swap_lower_bound(p1, f1, p2, f2), swap_upper_bound(p1, f1, p2, f2));

    let mut checks = vec![];
    let mut outcomes = vec![];
    let mut in_bounds = true;
    for o in all_outcomes(&rho1, &rho2)? {
        let coeffs = o.state.as_ref().map(|s| coeffs_json(&bd_coeffs_of(s.matrix())));
        if let Some(f) = o.fidelity {
            in_bounds &= f >= lo - CHECK_SLACK && f <= hi + CHECK_SLACK;
        }
        outcomes.push(json!({
            "label": o.label.name(),
            "probability": o.probability,
            "fidelity": o.fidelity,
            "bd_coeffs": coeffs,
        }));
    }
    checks.push(check_json("outcome fidelities within [lower, upper]", in_bounds, json!({ "lower": lo, "upper": hi })));

    let avg = nonpostselected_swap(&rho1, &rho2)?;
    let avg_coeffs = bd_twirl(&avg)?;
    let expect = bd_swap(&bd_twirl(&rho1)?, &bd_twirl(&rho2)?);
    let residual = avg_coeffs.max_abs_diff(&expect);
    checks.push(check_json(
        "average twirl equals bd_swap of twirls",
        residual <= 1e-10,
        json!({ "residual": residual }),
    ));
    let (plo, phi) = chain_fidelity_bounds(&[f1, f2])?;
    let fa = avg_coeffs.fidelity();
    checks.push(check_json(
        "average fidelity within [F1 F2, F1 F2 + (1 − F1)(1 − F2)]",
        fa >= plo - CHECK_SLACK && fa <= phi + CHECK_SLACK,
        json!({ "lower": plo, "upper": phi }),
    ));

    let passed = checks.iter().all(|c| c["passed"] == json!(true));
    let report = json!({
        "states": [d1, d2],
        "fidelities": [f1, f2],
        "max_p": [p1, p2],
        "outcomes": outcomes,
        "average": { "fidelity": fa, "bd_coeffs": coeffs_json(&avg_coeffs) },
        "checks": checks,
        "passed": passed,
    });
    emit_json(report, a.output.as_deref())?;
    Ok(passed)
}

fn parse_protocol(arg: &str, n: usize) -> anyhow::Result<SwapAndCorrectProtocol> {
    match arg {
        "sequential" => return Ok(builtin_protocol(BuiltinProtocol::Sequential, n)?),
        "correct_at_end" => return Ok(builtin_protocol(BuiltinProtocol::CorrectAtEnd, n)?),
        _ => {}
    }
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading protocol {path}"))?,
        None => arg.to_string(),
    };
    let p: SwapAndCorrectProtocol = serde_json::from_str(&text)
        .map_err(|e| usage(format!("bad protocol (expected sequential, correct_at_end or JSON): {e}")))?;
    if p.n_links != n {
        return Err(usage(format!("protocol is for {} links but the chain has {n}", p.n_links)));
    }
    Ok(p)
}

/// `(state, probability, members)` per distinct output, for any valid protocol.
fn distribution(
    links: &[DensityOperator],
    p: &SwapAndCorrectProtocol,
) -> anyhow::Result<(Vec<(DensityOperator, f64, u64)>, u64)> {
    if p.left_end_trivial() {
        let d = outcome_distribution_links(links, p)?;
        return Ok((d.entries.into_iter().map(|e| (e.state, e.probability, e.members)).collect(), d.null_members));
    }
    if links.len() > 5 {
        bail!("protocols that correct at node 0 are simulated per syndrome, which is limited to 5 links");
    }
    let mut out: Vec<(DensityOperator, f64, u64)> = vec![];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut null = 0;
    for s in Syndrome::all(links.len()) {
        match run_chain_postselected(links, p, &s)? {
            (Some(state), prob) => {
                let key: Vec<i64> = state
                    .matrix()
                    .data()
                    .iter()
                    .flat_map(|z| [(z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64])
                    .collect();
                match index.get(&key) {
                    Some(&i) => {
                        out[i].1 += prob;
                        out[i].2 += 1;
                    }
                    None => {
                        index.insert(key, out.len());
                        out.push((state, prob, 1));
                    }
                }
            }
            (None, _) => null += 1,
        }
    }
    Ok((out, null))
}

fn cmd_chain(a: &ChainArgs) -> anyhow::Result<bool> {
    let parsed = a.links.iter().map(|l| parse_state(l)).collect::<anyhow::Result<Vec<_>>>()?;
    let (descriptors, mut links): (Vec<NamedState>, Vec<DensityOperator>) = parsed.into_iter().unzip();
    if let Some(n) = a.n {
        if links.len() != 1 {
            return Err(usage("--n needs exactly one --link"));
        }
        links = vec![links[0].clone(); n];
    }
    let n = links.len();
    if n < 2 {
        return Err(usage(format!("a chain needs at least 2 links, got {n}")));
    }
    let protocol = parse_protocol(&a.protocol, n)?;
    let validation = validate_protocol(&protocol);
    if !validation.is_valid() {
        let report = json!({ "protocol": protocol, "validation": validation, "passed": false });
        emit_json(report, a.output.as_deref())?;
        return Err(anyhow!("invalid protocol: {}", validation.problems.join("; ")));
    }

    let (entries, null_members) = distribution(&links, &protocol)?;
    let mut avg = ComplexMatrix::zeros(4);
    let mut outcomes = vec![];
    for (state, prob, members) in &entries {
        avg = &avg + &state.matrix().scale(*prob);
        outcomes.push(json!({
            "probability": prob,
            "members": members,
            "fidelity": fidelity(state)?,
            "bd_coeffs": coeffs_json(&bd_coeffs_of(state.matrix())),
        }));
    }
    let avg_coeffs = bd_coeffs_of(&avg);
    let twirled = links.iter().map(bd_twirl).collect::<crate::Result<Vec<_>>>()?;
    let expect = bd_chain(&twirled);
    let fids = links.iter().map(fidelity).collect::<anyhow::Result<Vec<_>>>()?;
    let (lo, hi) = chain_fidelity_bounds(&fids)?;
    let fa = avg_coeffs.fidelity();

    let residual = avg_coeffs.max_abs_diff(&expect);
    let mut checks = vec![
        check_json("average twirl equals bd_chain of twirls", residual <= 1e-10, json!({ "residual": residual })),
        check_json(
            "average fidelity at least the product of link fidelities",
            fa >= lo - CHECK_SLACK,
            json!({ "lower": lo }),
        ),
    ];
    // the parity bound needs every link at fidelity one half or more
    if fids.iter().all(|&f| f >= 0.5) {
        checks.push(check_json(
            "average fidelity within the parity bound",
            fa <= hi + CHECK_SLACK,
            json!({ "upper": hi }),
        ));
    }
    let passed = checks.iter().all(|c| c["passed"] == json!(true));
    let report = json!({
        "links": descriptors,
        "n_links": n,
        "protocol": protocol,
        "outcomes": outcomes,
        "null_members": null_members,
        "average": {
            "fidelity": fa,
            "bd_coeffs": coeffs_json(&avg_coeffs),
            "probability": entries.iter().map(|e| e.1).sum::<f64>(),
        },
        "bd_chain": coeffs_json(&expect),
        "werner_fidelity": werner_chain_fidelity(&fids),
        "fidelity_bounds": [lo, hi],
        "checks": checks,
        "passed": passed,
    });
    emit_json(report, a.output.as_deref())?;
    Ok(passed)
}

fn print_suite(r: &SuiteReport) {
    let tag = if r.passed() { "PASS" } else { "FAIL" };
    println!("{tag} {:<30} {:>8.2} s", r.name, r.seconds);
    for c in &r.checks {
        println!("     {:<48} {:>12.3e}  (limit {:.1e})", c.name, c.value, c.limit);
    }
    for n in &r.notes {
        println!("     note: {n}");
    }
}

fn cmd_selftest(config: &RunConfig, a: &SelftestArgs) -> anyhow::Result<bool> {
    println!("seed {}", config.seed);
    let reports = if a.full { verify::full_suites(config.seed) } else { verify::quick_suites(config.seed) };
    for r in &reports {
        print_suite(r);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} suites, {failed} failed", reports.len());
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&reports)? + "\n";
        write_output(path, &text)?;
    }
    Ok(failed == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.1 + 0.2), "0.3");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(2.5e-9), "2.5e-9");
        assert_eq!(fmt12(100.0), "100");
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        RunConfig::command().debug_assert();
    }
}
