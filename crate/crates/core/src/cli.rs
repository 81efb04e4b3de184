//! Command-line front end.
//!
//! ```text
//! mfgl analyze --spec cw.json
//! mfgl ld-scan --spec cw.json --t 0.3 --delta 0.05
//! mfgl audit --suite appendix --format csv --out appendix.csv
//! ```
//!
//! `--spec` takes a path to a JSON Hamiltonian spec, or the JSON itself.
//! Every flag can also be set through an environment variable named
//! `MFGL_` followed by the flag in upper snake case (`MFGL_SEED`,
//! `MFGL_TRANSPORT_MAX_STATES`, ...).
//!
//! Exit codes: 0 on success, 1 on input errors (including a missing
//! large-deviation witness), 2 when an enforced audit row fails. Reports are
//! written atomically and are byte-identical for identical configurations;
//! wall-clock timings are only included with `--timings`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::boolfn::FourierExpansion;
use crate::complexity::{complexity_params, ComplexityParams};
use crate::hamiltonians::{
    build_hamiltonian, composition_params, delta_prime, ising_complexity_bounds, CompositionParams,
    HamiltonianSpec, ScalarShape,
};
use crate::meanfield::{
    curie_weiss_constant_roots, curie_weiss_roots, default_lambda_grid, default_starts, lambda_scan,
    mean_field_functional, mean_field_gradient, solve_fixed_points, xf_test, FixedPointSolution,
    IterOptions, XfTest, DEFAULT_RANDOM_STARTS,
};
use crate::verify::{
    audit_appendix_misc, audit_large_deviations, audit_main_residuals, audit_product_approx,
    audit_tanh_lemma, random_expansion, random_product_means, sample_box_thetas, sample_thetas,
    tightness_demo, AuditRow,
};
use crate::{invalid, Error, Result};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_TIGHTNESS_DIMS: [usize; 4] = [16, 64, 256, 1024];
const BUNDLED_TILTS: usize = 20;
const BUNDLED_TANH_TRIALS: usize = 10_000;

#[derive(Parser, Debug, Clone)]
#[command(name = "mfgl", version, about = "Mean-field analysis and inequality audits for Gibbs measures on the hypercube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Complexity parameters, scalar roots and fixed points of a Hamiltonian.
    Analyze,
    /// Multi-start solutions of X = tanh(λ∇f(X)).
    FixedPoints,
    /// Smoothed-cutoff construction and the λ scan over the large-deviation window.
    LdScan,
    /// Run an audit suite (bundled instances unless --spec is given).
    Audit,
    /// Analysis plus every audit suite.
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ProductApprox,
    Residuals,
    Appendix,
    LargeDeviations,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Hamiltonian spec: a JSON file path or inline JSON.
    #[arg(long, global = true, env = "MFGL_SPEC")]
    pub spec: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long, global = true, env = "MFGL_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "MFGL_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, env = "MFGL_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Gaussian draws for the width estimate.
    #[arg(long, global = true, env = "MFGL_SAMPLES", default_value_t = crate::complexity::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, global = true, env = "MFGL_TOL", default_value_t = crate::meanfield::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, env = "MFGL_DAMPING", default_value_t = crate::meanfield::DEFAULT_DAMPING)]
    pub damping: f64,
    #[arg(long, global = true, env = "MFGL_MAX_ITER", default_value_t = crate::meanfield::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, global = true, env = "MFGL_EPSILON", default_value_t = 0.2)]
    pub epsilon: f64,
    /// Large-deviation level (default: half the maximum of f / n).
    #[arg(long = "t", global = true, env = "MFGL_T", allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, global = true, env = "MFGL_DELTA", default_value_t = 0.05)]
    pub delta: f64,
    /// Scale λ for `fixed-points`.
    #[arg(long, global = true, env = "MFGL_LAMBDA", default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Comma-separated λ grid for `ld-scan`.
    #[arg(long, global = true, env = "MFGL_LAMBDA_GRID", allow_hyphen_values = true)]
    pub lambda_grid: Option<String>,
    /// Dense enumeration cap on n.
    #[arg(long, global = true, env = "MFGL_MAX_N", default_value_t = crate::DEFAULT_DENSE_CAP)]
    pub max_n: usize,
    /// Exact transport cap on the number of states 2^n.
    #[arg(long, global = true, env = "MFGL_TRANSPORT_MAX_STATES", default_value_t = 1 << crate::DEFAULT_TRANSPORT_CAP)]
    pub transport_max_states: usize,
    #[arg(long, global = true, env = "MFGL_SUITE", value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long, global = true, env = "MFGL_TIMINGS")]
    pub timings: bool,
}

/// Fully resolved configuration, embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub spec_source: Option<String>,
    pub hamiltonian: Option<HamiltonianSpec>,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub damping: f64,
    pub max_iter: usize,
    pub epsilon: f64,
    pub t: Option<f64>,
    pub delta: f64,
    pub lambda: f64,
    pub lambda_grid: Option<Vec<f64>>,
    pub max_n: usize,
    pub transport_max_states: usize,
    pub suite: Option<Suite>,
}

impl RunConfig {
    fn iter_options(&self) -> IterOptions {
        IterOptions { damping: self.damping, tol: self.tol, max_iter: self.max_iter }
    }

    /// Largest n with `2^n ≤ transport_max_states`.
    pub fn transport_cap(&self) -> usize {
        (usize::BITS - 1 - self.transport_max_states.leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamsSection {
    pub n: Option<usize>,
    pub complexity: Option<ComplexityParams>,
    pub closed_form: Option<ComplexityParams>,
    pub composition: Option<CompositionParams>,
    pub scalar_roots: Option<Vec<f64>>,
    pub constant_roots: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub delta_prime: Option<f64>,
    pub tightness_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(flatten)]
    pub solution: FixedPointSolution,
    /// Extension value `f(X)`.
    pub value: f64,
    pub xf: Option<XfTest>,
    pub functional: Option<f64>,
    pub functional_gradient_l1: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub params: ParamsSection,
    pub solutions: Vec<SolutionRecord>,
    pub audits: Vec<AuditRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.audits.iter().filter(|r| r.is_failure()).count()
    }
}

fn load_spec(source: &str) -> Result<HamiltonianSpec> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(source)
            .map_err(|e| Error::InvalidInput(format!("cannot read spec {source}: {e}")))?
    };
    let spec: HamiltonianSpec = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("malformed spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad lambda grid entry {s:?}: {e}")))
        })
        .collect()
}

pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let o = &cli.opts;
    if o.max_n == 0 || o.transport_max_states < 2 {
        return invalid("caps must be at least 1 (transport needs at least 2 states)");
    }
    if !(o.tol > 0.0) {
        return invalid(format!("--tol must be positive, got {}", o.tol));
    }
    if !(o.damping > 0.0 && o.damping <= 1.0) {
        return invalid(format!("--damping must lie in (0, 1], got {}", o.damping));
    }
    if o.samples < 2 {
        return invalid("--samples must be at least 2");
    }
    if !(o.delta > 0.0) {
        return invalid(format!("--delta must be positive, got {}", o.delta));
    }
    let hamiltonian = o.spec.as_deref().map(load_spec).transpose()?;
    let uses_suite = matches!(cli.command, Command::Audit | Command::Report);
    Ok(RunConfig {
        command: cli.command,
        spec_source: o.spec.clone(),
        hamiltonian,
        format: o.format,
        seed: o.seed,
        samples: o.samples,
        tol: o.tol,
        damping: o.damping,
        max_iter: o.max_iter,
        epsilon: o.epsilon,
        t: o.t,
        delta: o.delta,
        lambda: o.lambda,
        lambda_grid: o.lambda_grid.as_deref().map(parse_grid).transpose()?,
        max_n: o.max_n,
        transport_max_states: o.transport_max_states,
        suite: uses_suite.then_some(if cli.command == Command::Report { Suite::All } else { o.suite }),
    })
}

struct Clock {
    enabled: bool,
    entries: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f()?;
        if self.enabled {
            *self.entries.entry(name.to_string()).or_default() += start.elapsed().as_secs_f64();
        }
        Ok(out)
    }
}

fn require_spec(cfg: &RunConfig) -> Result<&HamiltonianSpec> {
    cfg.hamiltonian
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this command needs --spec".into()))
}

fn cw_spec(beta: f64, n: usize) -> HamiltonianSpec {
    HamiltonianSpec::CurieWeiss { beta, n }
}

fn spec_label(spec: &HamiltonianSpec) -> String {
    match spec {
        HamiltonianSpec::Linear { theta } => format!("linear(n={})", theta.len()),
        HamiltonianSpec::Ising { mu, .. } => format!("ising(n={})", mu.len()),
        HamiltonianSpec::CurieWeiss { beta, n } => format!("curie_weiss(beta={beta},n={n})"),
        HamiltonianSpec::TriangleCount { beta, vertices } => format!("triangle_count(beta={beta},N={vertices})"),
        HamiltonianSpec::SparseFourier { n, terms } => format!("sparse_fourier(n={n},terms={})", terms.len()),
        HamiltonianSpec::SmoothedCutoff { inner, t, delta } => {
            format!("smoothed_cutoff({},t={t},delta={delta})", spec_label(inner))
        }
    }
}

fn solution_records(
    f: &FourierExpansion,
    solutions: Vec<FixedPointSolution>,
    params: Option<&ComplexityParams>,
) -> Result<Vec<SolutionRecord>> {
    solutions
        .into_iter()
        .map(|s| {
            let x = s.cube_point()?;
            let unit_scale = s.lambda == 1.0;
            let interior = x.is_interior();
            let xf = match (params, unit_scale) {
                (Some(p), true) => Some(xf_test(f, &x, p)?),
                _ => None,
            };
            let (functional, grad) = if unit_scale && interior {
                let g = mean_field_gradient(f, &x)?;
                (Some(mean_field_functional(f, &x)?), Some(g.iter().map(|v| v.abs()).sum()))
            } else {
                (None, None)
            };
            Ok(SolutionRecord {
                value: f.eval_extension(&x)?,
                solution: s,
                xf,
                functional,
                functional_gradient_l1: grad,
            })
        })
        .collect()
}

fn analyze(cfg: &RunConfig, spec: &HamiltonianSpec, clock: &mut Clock, params: &mut ParamsSection) -> Result<Vec<SolutionRecord>> {
    let h = build_hamiltonian(spec, cfg.max_n)?;
    let f = &h.expansion;
    let cp = clock.time("complexity", || complexity_params(f, cfg.samples, cfg.seed, cfg.max_n))?;
    params.n = Some(f.n());
    params.complexity = Some(cp);
    if let Some((a, mu)) = h.ising_parts() {
        params.closed_form = Some(ising_complexity_bounds(a, mu)?);
    }
    if let HamiltonianSpec::CurieWeiss { beta, n } = spec {
        params.scalar_roots = Some(curie_weiss_roots(*beta, 1e-12)?);
        params.constant_roots = Some(curie_weiss_constant_roots(*beta, *n, 1e-12)?);
    }
    if let HamiltonianSpec::SmoothedCutoff { inner, t, delta } = spec {
        let g = build_hamiltonian(inner, cfg.max_n)?.expansion;
        let base = clock.time("complexity", || complexity_params(&g, cfg.samples, cfg.seed, cfg.max_n))?;
        let (b1, b2) = ScalarShape::cutoff_potential(g.n(), *t, *delta).derivative_bounds();
        params.composition = Some(composition_params(b1, b2, &base, g.n())?);
        params.delta_prime = Some(delta_prime(*delta));
    }
    let starts = default_starts(f.n(), DEFAULT_RANDOM_STARTS, cfg.seed);
    let sols = clock.time("fixed_points", || solve_fixed_points(f, 1.0, &starts, cfg.iter_options()))?;
    solution_records(f, sols, Some(&cp))
}

fn fixed_points(cfg: &RunConfig, spec: &HamiltonianSpec, clock: &mut Clock, params: &mut ParamsSection) -> Result<Vec<SolutionRecord>> {
    let f = build_hamiltonian(spec, cfg.max_n)?.expansion;
    let starts = default_starts(f.n(), DEFAULT_RANDOM_STARTS, cfg.seed);
    let sols = clock.time("fixed_points", || solve_fixed_points(&f, cfg.lambda, &starts, cfg.iter_options()))?;
    params.n = Some(f.n());
    let cp = if cfg.lambda == 1.0 {
        let cp = clock.time("complexity", || complexity_params(&f, cfg.samples, cfg.seed, cfg.max_n))?;
        params.complexity = Some(cp);
        Some(cp)
    } else {
        None
    };
    solution_records(&f, sols, cp.as_ref())
}

fn max_value(f: &FourierExpansion, cap: usize) -> Result<f64> {
    Ok(f.truth_table(cap)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn level_or_default(cfg: &RunConfig, f: &FourierExpansion) -> Result<f64> {
    match cfg.t {
        Some(t) => Ok(t),
        None => Ok(0.5 * max_value(f, cfg.max_n)? / f.n() as f64),
    }
}

fn ld_scan(cfg: &RunConfig, spec: &HamiltonianSpec, clock: &mut Clock, params: &mut ParamsSection) -> Result<(Vec<SolutionRecord>, Vec<AuditRow>)> {
    let f = build_hamiltonian(spec, cfg.max_n)?.expansion;
    let t = level_or_default(cfg, &f)?;
    let rows = clock.time("large_deviations", || {
        audit_large_deviations(&f, t, cfg.delta, &spec_label(spec), cfg.max_n)
    })?;
    params.n = Some(f.n());
    params.t = Some(t);
    params.delta_prime = Some(delta_prime(cfg.delta));
    let grid = cfg.lambda_grid.clone().unwrap_or_else(default_lambda_grid);
    let starts = default_starts(f.n(), DEFAULT_RANDOM_STARTS, cfg.seed);
    let sols = clock.time("lambda_scan", || lambda_scan(&f, t, cfg.delta, &grid, &starts, cfg.iter_options()))?;
    Ok((solution_records(&f, sols, None)?, rows))
}

fn suite_includes(suite: Suite, s: Suite) -> bool {
    suite == Suite::All || suite == s
}

fn audits(cfg: &RunConfig, suite: Suite, clock: &mut Clock, params: &mut ParamsSection) -> Result<Vec<AuditRow>> {
    let seed = cfg.seed;
    let user = cfg.hamiltonian.as_ref();
    let pick = |default: HamiltonianSpec| user.cloned().unwrap_or(default);
    let mut rows = Vec::new();

    if suite_includes(suite, Suite::ProductApprox) {
        let spec = pick(cw_spec(1.2, 8));
        let f = build_hamiltonian(&spec, cfg.max_n)?.expansion;
        let thetas = sample_box_thetas(f.n(), BUNDLED_TILTS, seed);
        let label = format!("{} seed={seed}", spec_label(&spec));
        rows.extend(clock.time("product_approx", || {
            audit_product_approx(&f, &thetas, &label, cfg.max_n, cfg.transport_cap())
        })?);
    }
    if suite_includes(suite, Suite::Residuals) {
        let spec = pick(cw_spec(2.0, 8));
        let f = build_hamiltonian(&spec, cfg.max_n)?.expansion;
        let cp = clock.time("complexity", || complexity_params(&f, cfg.samples, seed, cfg.max_n))?;
        let thetas = sample_thetas(f.n(), BUNDLED_TILTS, cfg.epsilon, seed);
        let label = format!("{} seed={seed}", spec_label(&spec));
        rows.extend(clock.time("residuals", || {
            audit_main_residuals(&f, &thetas, cfg.epsilon, &cp, &label, cfg.max_n)
        })?);
    }
    if suite_includes(suite, Suite::Appendix) {
        rows.push(audit_tanh_lemma(BUNDLED_TANH_TRIALS, (1.0, 5.0), seed)?);
        let (f, label) = match user {
            Some(spec) => (build_hamiltonian(spec, cfg.max_n)?.expansion, spec_label(spec)),
            None => (random_expansion(8, 2, 12, seed)?, format!("random(n=8,degree<=2,terms=12) seed={seed}")),
        };
        let means = random_product_means(f.n(), BUNDLED_TILTS, seed);
        rows.extend(clock.time("appendix", || {
            audit_appendix_misc(&f, &ScalarShape::CutoffH, &means, &label, cfg.max_n)
        })?);
        let tight = tightness_demo(&DEFAULT_TIGHTNESS_DIMS)?;
        params.tightness_slope = Some(tight.slope);
        rows.extend(tight.rows);
    }
    if suite_includes(suite, Suite::LargeDeviations) {
        let spec = pick(cw_spec(1.5, 10));
        let f = build_hamiltonian(&spec, cfg.max_n)?.expansion;
        let t = level_or_default(cfg, &f)?;
        params.t = Some(t);
        params.delta_prime = Some(delta_prime(cfg.delta));
        rows.extend(clock.time("large_deviations", || {
            audit_large_deviations(&f, t, cfg.delta, &spec_label(&spec), cfg.max_n)
        })?);
    }
    Ok(rows)
}

/// Runs a resolved configuration.
pub fn execute(cfg: &RunConfig, with_timings: bool) -> Result<Report> {
    let mut clock = Clock { enabled: with_timings, entries: BTreeMap::new() };
    let mut params = ParamsSection::default();
    let mut solutions = Vec::new();
    let mut rows = Vec::new();
    match cfg.command {
        Command::Analyze => {
            let spec = require_spec(cfg)?;
            solutions = analyze(cfg, spec, &mut clock, &mut params)?;
        }
        Command::FixedPoints => {
            let spec = require_spec(cfg)?;
            solutions = fixed_points(cfg, spec, &mut clock, &mut params)?;
        }
        Command::LdScan => {
            let spec = require_spec(cfg)?;
            (solutions, rows) = ld_scan(cfg, spec, &mut clock, &mut params)?;
        }
        Command::Audit => {
            rows = audits(cfg, cfg.suite.unwrap_or(Suite::All), &mut clock, &mut params)?;
        }
        Command::Report => {
            if let Some(spec) = cfg.hamiltonian.as_ref() {
                solutions = analyze(cfg, spec, &mut clock, &mut params)?;
            }
            rows = audits(cfg, Suite::All, &mut clock, &mut params)?;
        }
    }
    Ok(Report {
        config: cfg.clone(),
        params,
        solutions,
        audits: rows,
        timings: with_timings.then_some(clock.entries),
    })
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON (pretty, trailing newline) or the flat CSV projection of the audit rows.
pub fn serialize_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)
                .map_err(|e| Error::InvalidInput(format!("cannot serialise report: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::InvalidInput(format!("cannot write csv: {e}"));
            w.write_record(["check_id", "instance", "measured", "bound", "ratio", "pass", "enforced", "note"])
                .map_err(csv_err)?;
            for r in &report.audits {
                w.write_record([
                    r.check_id.clone(),
                    r.instance.clone(),
                    fmt_num(r.measured),
                    fmt_num(r.bound),
                    r.ratio.map(fmt_num).unwrap_or_default(),
                    r.pass.to_string(),
                    r.enforced.to_string(),
                    r.note.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::InvalidInput(format!("cannot write csv: {e}")))
        }
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<Report> {
    serde_json::from_slice(bytes).map_err(|e| Error::InvalidInput(format!("malformed report: {e}")))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Parses, runs and writes; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = resolve(cli).and_then(|cfg| {
        let report = execute(&cfg, cli.opts.timings)?;
        let bytes = serialize_report(&report, cfg.format)?;
        match &cli.opts.out {
            Some(path) => write_atomic(path, &bytes)?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            let failures = report.failures();
            if failures > 0 {
                eprintln!("{failures} enforced audit row(s) failed");
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
