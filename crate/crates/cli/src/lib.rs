//! Command-line front end: every workflow reads JSON documents, runs the
//! library checks and prints a deterministic [`Report`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use beyondcp::catalog::{self, GibbsParams, RepolarizerParams};
use beyondcp::consistency;
use beyondcp::dilation::{self, Representation};
use beyondcp::dynmap::{self, PositivityScan, SubsystemMap};
use beyondcp::io::{self, MapSpec, Report, ReportStatus, Verdict};
use beyondcp::operator::{self, bloch_state, Operator, SpaceLayout};
use beyondcp::{Error, OperatorSubspace, ToleranceConfig, C64, CVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "BEYONDCP_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "beyondcp", version, about = "Subsystem dynamics from consistent system-bath subspaces")]
struct Cli {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rank: f64,
    /// Residual threshold for consistency and map equality.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_residual: f64,
    /// Seed for every randomized step (overridden by BEYONDCP_SEED).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide U-consistency (and family consistency) of a subspace.
    CheckConsistency {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long, required_unless_present = "family")]
        unitary: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Derive the subsystem map induced by a subspace and a joint unitary.
    DeriveMap {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long)]
        unitary: PathBuf,
    },
    /// Trace/Hermiticity preservation plus optional CP, positivity and domain analysis.
    AnalyzeMap {
        #[arg(long)]
        map: PathBuf,
        /// Embed the Choi matrix.
        #[arg(long)]
        choi: bool,
        /// Complete-positivity verdict from the Choi spectrum.
        #[arg(long)]
        cp: bool,
        /// Positivity scan over N random pure states.
        #[arg(long, value_name = "N")]
        positivity: Option<usize>,
        /// Rejection-sample the positive domain with budget N.
        #[arg(long, value_name = "N")]
        positive_domain: Option<usize>,
    },
    /// Represent a map as subsystem dynamics.
    Represent {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Positive-domain states `{"states": [operator, ...]}` for the SWAP method.
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Worked examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Trace-norm and relative-entropy violations of the repolarizer.
    Violations {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Swap,
    Kraus,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Thermal state of `theta (X+Z) (x) 1 + X (x) X` and its span.
    Gibbs(GibbsArgs),
    /// Controlled-phase evolution of the thermal family.
    Example1 {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        t: f64,
    },
    /// SWAP representation of the transpose map.
    Transpose,
    /// SWAP representation and violations of the repolarizer.
    Repolarizer {
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Witness extension counterexample with an entangled bath-witness state.
    Witness,
}

#[derive(Args, Debug)]
struct GibbsArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Grid size per axis for the sampled span.
    #[arg(long, default_value_t = 7)]
    grid: usize,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI with `argv` (program name first), reading `BEYONDCP_SEED`
/// from the environment.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_seed_override(argv, std::env::var(SEED_ENV).ok())
}

/// As [`run_cli`], with the seed override passed explicitly.
pub fn run_with_seed_override<I, T>(argv: I, seed_override: Option<String>) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                CliOutput { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli, &argv, seed_override) {
        Ok((report, code)) => match render(&report, cli.format) {
            Ok(stdout) => CliOutput { code, stdout, stderr: String::new() },
            Err(e) => input_error(e),
        },
        Err(e) => input_error(e),
    }
}

fn input_error(e: Error) -> CliOutput {
    CliOutput { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") }
}

fn render(report: &Report, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(io::emit_report(report) + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| Error::Input(format!("csv output: {e}"));
            w.write_record(["command", "verdict", "pass", "residual", "status"]).map_err(io_err)?;
            let status = serde_json::to_value(report.status).expect("enum").as_str().unwrap_or_default().to_owned();
            for v in &report.verdicts {
                let residual = v.residual.map(|r| format!("{r:e}")).unwrap_or_default();
                w.write_record([report.command.as_str(), &v.name, if v.pass { "true" } else { "false" }, &residual, &status])
                    .map_err(io_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Input(format!("csv output: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
        }
    }
}

/// Verdicts accumulated by a command. A failing verdict marked as a
/// violation is the expected outcome of a demonstration, not a failed check.
struct Findings {
    verdicts: Vec<Verdict>,
    violations: Vec<bool>,
    artifacts: BTreeMap<String, Value>,
}

impl Findings {
    fn new() -> Self {
        Self { verdicts: Vec::new(), violations: Vec::new(), artifacts: BTreeMap::new() }
    }

    fn check(&mut self, v: Verdict) {
        self.verdicts.push(v);
        self.violations.push(false);
    }

    fn violation(&mut self, v: Verdict) {
        self.verdicts.push(v);
        self.violations.push(true);
    }

    fn artifact(&mut self, key: &str, value: Value) {
        self.artifacts.insert(key.to_owned(), value);
    }

    fn status(&self) -> ReportStatus {
        let failed_check = self.verdicts.iter().zip(&self.violations).any(|(v, &viol)| !v.pass && !viol);
        if failed_check {
            ReportStatus::CheckFailed
        } else if self.verdicts.iter().any(|v| !v.pass) {
            ReportStatus::ViolationDemonstrated
        } else {
            ReportStatus::Pass
        }
    }
}

struct Context {
    tol: ToleranceConfig,
    seed: u64,
    inputs: Vec<PathBuf>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<String, Error> {
        self.inputs.push(path.to_owned());
        fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
    }
}

fn execute(cli: &Cli, argv: &[OsString], seed_override: Option<String>) -> Result<(Report, i32), Error> {
    let tol = ToleranceConfig::default()
        .with_rank_cut(cli.tol_rank)
        .with_residual_tol(cli.tol_residual);
    tol.validate()?;
    let seed = match seed_override {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Input(format!("{SEED_ENV} must be an unsigned integer, got {s:?}")))?,
        None => cli.seed,
    };
    let mut ctx = Context { tol, seed, inputs: Vec::new() };
    let (name, findings) = match &cli.command {
        Command::CheckConsistency { subspace, unitary, family } => {
            ("check-consistency", check_consistency(&mut ctx, subspace, unitary.as_deref(), family.as_deref())?)
        }
        Command::DeriveMap { subspace, unitary } => ("derive-map", derive(&mut ctx, subspace, unitary)?),
        Command::AnalyzeMap { map, choi, cp, positivity, positive_domain } => (
            "analyze-map",
            analyze(&mut ctx, map, *choi, *cp, *positivity, *positive_domain)?,
        ),
        Command::Represent { map, method, omega } => ("represent", represent(&mut ctx, map, *method, omega.as_deref())?),
        Command::Catalog(c) => {
            let (name, f) = match c {
                CatalogCommand::Gibbs(a) => ("catalog gibbs", catalog_gibbs(&ctx, a)?),
                CatalogCommand::Example1 { t } => ("catalog example1", catalog_example1(&ctx, *t)?),
                CatalogCommand::Transpose => ("catalog transpose", catalog_transpose(&ctx)?),
                CatalogCommand::Repolarizer { epsilon } => ("catalog repolarizer", catalog_repolarizer(&ctx, *epsilon)?),
                CatalogCommand::Witness => ("catalog witness", catalog_witness(&ctx)?),
            };
            (name, f)
        }
        Command::Violations { epsilon, pairs } => ("violations", violations(&ctx, *epsilon, *pairs)?),
    };
    let status = findings.status();
    let code = if status == ReportStatus::Pass { EXIT_PASS } else { EXIT_CHECK };
    let report = Report {
        command: name.to_owned(),
        inputs_digest: digest(argv, &ctx.inputs)?,
        verdicts: findings.verdicts,
        artifacts: findings.artifacts,
        seed: ctx.seed,
        tolerances: ctx.tol,
        status,
    };
    Ok((report, code))
}

/// SHA-256 over the arguments (program name excluded) and the bytes of every
/// input file, each part length-prefixed.
fn digest(argv: &[OsString], inputs: &[PathBuf]) -> Result<String, Error> {
    let mut h = Sha256::new();
    let mut part = |bytes: &[u8]| {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    for a in argv.iter().skip(1) {
        part(a.to_string_lossy().as_bytes());
    }
    for p in inputs {
        let bytes = fs::read(p).map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display())))?;
        part(&bytes);
    }
    Ok(hex::encode(h.finalize()))
}

fn load_subspace(ctx: &mut Context, path: &Path) -> Result<OperatorSubspace, Error> {
    let text = ctx.read(path)?;
    io::parse_subspace(&text, ctx.tol)
}

fn load_operator(ctx: &mut Context, path: &Path) -> Result<Operator, Error> {
    let text = ctx.read(path)?;
    io::parse_operator(&text)
}

fn load_map(ctx: &mut Context, path: &Path) -> Result<(MapSpec, SubsystemMap), Error> {
    let text = ctx.read(path)?;
    let spec = io::parse_map(&text, ctx.tol)?;
    let map = spec.build(ctx.tol)?;
    Ok((spec, map))
}

/// The unitary must act on the subspace's layout; a flat operator of the
/// right size is given that layout.
fn fit_layout(u: Operator, layout: &SpaceLayout) -> Result<Operator, Error> {
    if u.layout().dims() == layout.dims() {
        return Ok(u);
    }
    if u.layout().num_factors() == 1 && u.dim() == layout.total() {
        return u.with_layout(layout.clone());
    }
    Err(Error::Input(format!(
        "unitary layout {:?} does not match subspace layout {:?}",
        u.layout().dims(),
        layout.dims()
    )))
}

fn consistency_verdict(name: &str, verdict: &consistency::ConsistencyVerdict) -> Verdict {
    let member = verdict.violating_pair.as_ref().and_then(|p| p.member);
    Verdict::new(
        name,
        verdict.consistent,
        verdict.worst_residual,
        json!({ "worst_member": member, "generator_is_worst": verdict.violating_pair.as_ref().is_some_and(|p| p.member.is_none()) }),
    )
}

fn check_consistency(
    ctx: &mut Context,
    subspace: &Path,
    unitary: Option<&Path>,
    family: Option<&Path>,
) -> Result<Findings, Error> {
    let v = load_subspace(ctx, subspace)?;
    let mut f = Findings::new();
    f.artifact("kernel_dim", json!(v.kernel_of_partial_trace()?.dim()));
    if let Some(path) = unitary {
        let u = fit_layout(load_operator(ctx, path)?, v.layout())?;
        let verdict = consistency::is_u_consistent(&v, &u)?;
        f.check(consistency_verdict("u_consistent", &verdict));
        if let (false, Some(pair)) = (verdict.consistent, &verdict.violating_pair) {
            f.artifact("violating_kernel_element", io::emit_operator(&pair.kernel_element));
        }
    }
    if let Some(path) = family {
        let text = ctx.read(path)?;
        let family = io::parse_family(&text, ctx.tol)?;
        let verdict = consistency::is_family_consistent(&v, &family)?;
        f.check(consistency_verdict("family_consistent", &verdict));
        if let (false, Some(pair)) = (verdict.consistent, &verdict.violating_pair) {
            f.artifact("family_violating_kernel_element", io::emit_operator(&pair.kernel_element));
        }
        if verdict.consistent {
            let ts = consistency::transformation_space(&v, &family)?;
            f.check(Verdict::new(
                "transformation_space",
                ts.worst_residual <= ctx.tol.residual_tol,
                ts.worst_residual,
                json!({ "dim": ts.space.dim(), "kernel_dim": ts.kernel.dim(), "kernel_contained": ts.kernel_contained }),
            ));
        }
    }
    Ok(f)
}

fn preservation_verdicts(f: &mut Findings, phi: &SubsystemMap, tol: &ToleranceConfig) -> Result<(), Error> {
    let tp = phi.trace_preservation_residual();
    f.check(Verdict::new("trace_preserving", tp <= tol.residual_tol, tp, json!({})));
    let hp = phi.hermiticity_residual(tol)?;
    f.check(Verdict::new("hermiticity_preserving", hp <= tol.residual_tol, hp, json!({})));
    Ok(())
}

fn derive(ctx: &mut Context, subspace: &Path, unitary: &Path) -> Result<Findings, Error> {
    let v = load_subspace(ctx, subspace)?;
    let u = fit_layout(load_operator(ctx, unitary)?, v.layout())?;
    let mut f = Findings::new();
    let verdict = consistency::is_u_consistent(&v, &u)?;
    f.check(consistency_verdict("u_consistent", &verdict));
    if !verdict.consistent {
        if let Some(pair) = &verdict.violating_pair {
            f.artifact("violating_kernel_element", io::emit_operator(&pair.kernel_element));
        }
        return Ok(f);
    }
    let phi = dynmap::derive_map(&v, &u)?;
    preservation_verdicts(&mut f, &phi, &ctx.tol)?;
    let comm = dynmap::commutation_residual(&phi, &u, v.basis())?;
    f.check(Verdict::new("diagram_commutes", comm <= ctx.tol.residual_tol, comm, json!({})));
    f.artifact("map", io::emit_map(&phi));
    Ok(f)
}

fn analyze(
    ctx: &mut Context,
    map: &Path,
    choi: bool,
    cp: bool,
    positivity: Option<usize>,
    positive_domain: Option<usize>,
) -> Result<Findings, Error> {
    let (_, phi) = load_map(ctx, map)?;
    let mut f = Findings::new();
    preservation_verdicts(&mut f, &phi, &ctx.tol)?;
    f.artifact("domain_dim", json!(phi.domain().dim()));
    if choi {
        f.artifact("choi", io::emit_operator(&dynmap::choi_matrix(&phi)?));
    }
    if cp {
        let v = dynmap::is_cp(&phi)?;
        f.check(Verdict::new(
            "completely_positive",
            v.completely_positive,
            v.min_choi_eigenvalue,
            json!({ "min_choi_eigenvalue": v.min_choi_eigenvalue }),
        ));
    }
    if let Some(n) = positivity {
        let scan = dynmap::positivity_scan(&phi, n, ctx.seed)?;
        let details = json!({ "summary": scan.describe() });
        match &scan {
            PositivityScan::Counterexample { state, min_eigenvalue, .. } => {
                f.violation(Verdict::new("positivity_scan", false, *min_eigenvalue, details));
                f.artifact("positivity_counterexample", io::emit_operator(state));
            }
            PositivityScan::NoViolationFound { .. } => f.check(Verdict::flag("positivity_scan", true, details)),
        }
    }
    if let Some(n) = positive_domain {
        match dynmap::sample_positive_domain(&phi, n, ctx.seed) {
            Ok(sample) => f.check(Verdict::flag(
                "positive_domain_spans_domain",
                sample.span_dim == phi.domain().dim(),
                json!({ "members": sample.members.len(), "candidates": sample.candidates, "span_dim": sample.span_dim }),
            )),
            Err(Error::EmptySample { budget }) => f.check(Verdict::flag(
                "positive_domain_spans_domain",
                false,
                json!({ "summary": format!("empty sample: positive domain not found at budget {budget}") }),
            )),
            Err(e) => return Err(e),
        }
    }
    Ok(f)
}

/// Greedy subset of positive-domain samples whose span is the map domain.
fn spanning_states(phi: &SubsystemMap, n: usize, seed: u64, tol: ToleranceConfig) -> Result<Vec<Operator>, Error> {
    let sample = dynmap::sample_positive_domain(phi, n, seed)?;
    let mut chosen: Vec<Operator> = Vec::new();
    let mut dim = 0;
    for m in sample.members {
        let mut trial = chosen.clone();
        trial.push(m.clone());
        let span = OperatorSubspace::span_from_generators(&trial, tol)?;
        if span.dim() > dim {
            dim = span.dim();
            chosen = trial;
        }
        if dim == phi.domain().dim() {
            break;
        }
    }
    Ok(chosen)
}

fn load_states(ctx: &mut Context, path: &Path) -> Result<Vec<Operator>, Error> {
    let text = ctx.read(path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Schema { pointer: "/".into(), message: e.to_string() })?;
    let states = doc
        .get("states")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema { pointer: "/states".into(), message: "expected an array of operators".into() })?;
    if states.is_empty() || states.len() > io::MAX_LIST {
        return Err(Error::Schema { pointer: "/states".into(), message: format!("expected 1 to {} states", io::MAX_LIST) });
    }
    states
        .iter()
        .enumerate()
        .map(|(i, s)| io::parse_operator_value(s, &format!("/states/{i}")))
        .collect()
}

fn representation_findings(f: &mut Findings, rep: &Representation, phi: &SubsystemMap) -> Result<(), Error> {
    let check = dilation::verify_representation(rep, phi)?;
    f.check(Verdict::new(
        "representation",
        check.pass,
        check.max_residual,
        serde_json::to_value(check).expect("plain struct"),
    ));
    f.artifact("unitary", io::emit_operator(rep.unitary()));
    f.artifact("subspace", io::emit_subspace(rep.subspace()));
    f.artifact("bath_dim", json!(rep.bath_dim()));
    Ok(())
}

fn represent(ctx: &mut Context, map: &Path, method: Method, omega: Option<&Path>) -> Result<Findings, Error> {
    let (spec, phi) = load_map(ctx, map)?;
    let mut f = Findings::new();
    let rep = match method {
        Method::Swap => {
            let states = match omega {
                Some(p) => load_states(ctx, p)?,
                None => spanning_states(&phi, 400, ctx.seed, ctx.tol)?,
            };
            f.artifact("omega_states", json!(states.len()));
            dilation::swap_representation(&phi, &states)?
        }
        Method::Kraus => {
            let kraus = match spec {
                MapSpec::Kraus(k) => k,
                _ => dynmap::kraus_from_choi(&phi)?,
            };
            let residual = dilation::kraus_completeness_residual(&kraus)?;
            f.check(Verdict::new("kraus_completeness", residual <= ctx.tol.residual_tol, residual, json!({ "operators": kraus.len() })));
            dilation::kraus_dilation(&kraus, &ctx.tol)?
        }
    };
    representation_findings(&mut f, &rep, &phi)?;
    Ok(f)
}

fn catalog_gibbs(ctx: &Context, a: &GibbsArgs) -> Result<Findings, Error> {
    let p = GibbsParams::new(a.theta, a.beta)?;
    if a.grid == 0 || a.grid > 64 {
        return Err(Error::Input("grid must be between 1 and 64".into()));
    }
    let mut f = Findings::new();
    let closed = catalog::gibbs_state_closed_form(p);
    let oracle = operator::gibbs_state(&catalog::gibbs_hamiltonian(p.theta), p.beta, 1e-12)?;
    let diff = closed.max_abs_diff(&oracle);
    f.check(Verdict::new("closed_form_matches_expm", diff <= 1e-10, diff, json!({ "lambda": p.lambda(), "gamma": p.gamma() })));
    let sampled = catalog::gibbs_sampled_subspace(a.grid, a.grid, ctx.tol)?;
    let printed = catalog::gibbs_subspace(ctx.tol);
    let res = sampled.equivalence_residual(&printed)?;
    f.check(Verdict::new(
        "sampled_span_matches",
        sampled.dim() == printed.dim() && res <= ctx.tol.residual_tol,
        res,
        json!({ "sampled_dim": sampled.dim(), "expected_dim": printed.dim() }),
    ));
    f.artifact("state", io::emit_operator(&closed));
    f.artifact("subspace", io::emit_subspace(&printed));
    Ok(f)
}

fn catalog_example1(ctx: &Context, t: f64) -> Result<Findings, Error> {
    if !t.is_finite() {
        return Err(Error::Input("t must be finite".into()));
    }
    let mut f = Findings::new();
    let v = catalog::gibbs_subspace(ctx.tol);
    let u = catalog::controlled_phase_unitary(t);
    let derived = dynmap::derive_map(&v, &u)?;
    let closed = catalog::example1_map(t);
    let dev = derived.deviation(&closed)?;
    f.check(Verdict::new("derived_equals_closed_form", dev <= ctx.tol.residual_tol, dev, json!({ "t": t })));
    let (e1, e2) = catalog::example1_kraus(t);
    let kraus = [e1, e2];
    let completeness = dilation::kraus_completeness_residual(&kraus)?;
    f.check(Verdict::new("kraus_completeness", completeness <= 1e-12, completeness, json!({})));
    let extension = SubsystemMap::from_kraus(&kraus)?.with_tol(ctx.tol);
    let ext_dev = extension.restricted_to(closed.domain())?.deviation(&closed)?;
    f.check(Verdict::new("kraus_extension_agrees", ext_dev <= ctx.tol.residual_tol, ext_dev, json!({})));
    let cp = dynmap::is_cp(&extension)?;
    f.check(Verdict::new(
        "completely_positive",
        cp.completely_positive,
        cp.min_choi_eigenvalue,
        json!({ "min_choi_eigenvalue": cp.min_choi_eigenvalue, "on": "Kraus extension to B(H_S)" }),
    ));
    f.artifact("derived_map", io::emit_map(&derived));
    f.artifact("kraus", json!([io::emit_operator(&kraus[0]), io::emit_operator(&kraus[1])]));
    Ok(f)
}

fn catalog_transpose(ctx: &Context) -> Result<Findings, Error> {
    let mut f = Findings::new();
    let phi = catalog::transpose_map(2).with_tol(ctx.tol);
    let rep = dilation::swap_representation(&phi, &dynmap::axis_states(2))?;
    let sm = catalog::transpose_subspace(ctx.tol);
    let res = rep.subspace().equivalence_residual(&sm)?;
    f.check(Verdict::new(
        "subspace_matches_basis",
        rep.subspace().dim() == sm.dim() && res <= ctx.tol.residual_tol,
        res,
        json!({ "dim": rep.subspace().dim() }),
    ));
    representation_findings(&mut f, &rep, &phi)?;
    let cp = dynmap::is_cp(&phi)?;
    f.violation(Verdict::new(
        "completely_positive",
        cp.completely_positive,
        cp.min_choi_eigenvalue,
        json!({ "min_choi_eigenvalue": cp.min_choi_eigenvalue }),
    ));
    Ok(f)
}

fn catalog_repolarizer(ctx: &Context, epsilon: f64) -> Result<Findings, Error> {
    let p = RepolarizerParams::new(epsilon)?;
    let mut f = Findings::new();
    let phi = catalog::repolarizer(p).with_tol(ctx.tol);
    let rep = dilation::swap_representation(&phi, &catalog::axis_states_at_radius(epsilon))?;
    let sm = catalog::repolarizer_subspace(p, ctx.tol);
    let res = rep.subspace().equivalence_residual(&sm)?;
    f.check(Verdict::new(
        "subspace_matches_basis",
        rep.subspace().dim() == sm.dim() && res <= ctx.tol.residual_tol,
        res,
        json!({ "dim": rep.subspace().dim() }),
    ));
    representation_findings(&mut f, &rep, &phi)?;
    let inv = dilation::inverse_representation(&rep, &phi)?;
    let dev = inv.derived_map()?.deviation(&catalog::depolarizer(p))?;
    f.check(Verdict::new("inverse_is_depolarizer", dev <= ctx.tol.residual_tol, dev, json!({})));
    let scan = dynmap::positivity_scan(&phi, 100, ctx.seed)?;
    match &scan {
        PositivityScan::Counterexample { state, min_eigenvalue, .. } => {
            f.violation(Verdict::new("positive", false, *min_eigenvalue, json!({ "summary": scan.describe() })));
            f.artifact("positivity_counterexample", io::emit_operator(state));
        }
        PositivityScan::NoViolationFound { .. } => f.violation(Verdict::flag("positive", true, json!({ "summary": scan.describe() }))),
    }
    Ok(f)
}

fn bell_state() -> Operator {
    let mut v = CVector::zeros(4);
    v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[3] = v[0];
    Operator::projector(SpaceLayout::bipartite(2, 2), &v).expect("dims")
}

fn catalog_witness(ctx: &Context) -> Result<Findings, Error> {
    let mut f = Findings::new();
    let rho_s = bloch_state([0.2, -0.1, 0.4]);
    let entangled = consistency::witness_counterexample(&rho_s, &bell_state(), &ctx.tol)?;
    f.violation(Verdict::new(
        "entangled_witness_factorizes",
        entangled.mismatch <= ctx.tol.residual_tol,
        entangled.mismatch,
        json!({ "rho_bw": "Bell state" }),
    ));
    let product = operator::tensor(&bloch_state([0.5, 0.0, 0.0]), &bloch_state([0.0, 0.3, 0.3]));
    let prod = consistency::witness_counterexample(&rho_s, &product, &ctx.tol)?;
    f.check(Verdict::new(
        "product_witness_factorizes",
        prod.mismatch <= ctx.tol.residual_tol,
        prod.mismatch,
        json!({ "rho_bw": "product state" }),
    ));
    f.artifact("entangled", serde_json::to_value(&entangled).expect("serializable"));
    Ok(f)
}

fn violations(ctx: &Context, epsilon: f64, pairs: usize) -> Result<Findings, Error> {
    let p = RepolarizerParams::new(epsilon)?;
    let suite = catalog::violation_suite(p, pairs, ctx.seed)?;
    let mut f = Findings::new();
    let max_ratio = suite.contractivity_ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    f.violation(Verdict::new(
        "trace_norm_contractive",
        max_ratio <= 1.0 + ctx.tol.residual_tol,
        max_ratio,
        json!({ "expected_ratio": 1.0 / epsilon }),
    ));
    let min_uhlmann = suite.uhlmann_ratios.iter().copied().fold(f64::INFINITY, f64::min);
    f.violation(Verdict::new(
        "relative_entropy_monotone",
        suite.uhlmann_ratios.iter().all(|&r| r <= 1.0 + ctx.tol.residual_tol),
        min_uhlmann,
        json!({ "lower_bound": 1.0 / epsilon }),
    ));
    if let Some(m) = suite.positivity_min_eigenvalue {
        f.violation(Verdict::new("positive", m >= -ctx.tol.residual_tol, m, json!({})));
    }
    f.artifact("suite", serde_json::to_value(&suite).expect("serializable"));
    Ok(f)
}
