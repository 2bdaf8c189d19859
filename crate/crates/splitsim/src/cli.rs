//! The `splitsim` command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error. Machine outputs
//! (snapshots, grids, CSV, JSON) are exact; decimals only appear in the human
//! summary on stderr, marked with `≈`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use splitsim_core::analysis::{
    ball_bounds_check, diamond_l1_check, scan_csv, shape_check, theory_constants, Polygon,
};
use splitsim_core::automata::{
    builtin_diamond, builtin_octagon, builtin_square, ca_step, text::parse_automaton, AutomatonSpec, CAState,
};
use splitsim_core::conformance::{
    builtin_mapping, cosimulate, octagon_mapping_closed, published_rule_checks, CosimOptions, MappingKind,
    RuleCheckStatus,
};
use splitsim_core::engine::dense::run_dense_parallel;
use splitsim_core::engine::{run, EngineError, EvolutionState, RunBudget, RunOutcome, SplittingOrder};
use splitsim_core::lattice::Region;
use splitsim_core::numeric::{format_rational, parse_rational, to_f64, AffineMass, HInterval, Rational};

use crate::config::RunConfig;
use crate::grid::{format_grid, parse_grid};
use crate::render::{geometry_overlay, render_labels, render_masses, Frame};
use crate::report::{to_json, BallJson, ConformanceJson, ConstantsJson, RuleCheckJson, ScanJson, ShapeJson};
use crate::scan::parallel_regime_scan;
use crate::snapshot::{load_snapshot, Snapshot};

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "SPLITSIM_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn mass_arg(s: &str) -> Result<AffineMass, String> {
    s.parse().map_err(|e: splitsim_core::numeric::NumericError| e.to_string())
}

fn interval_arg(s: &str) -> Result<HInterval, String> {
    s.parse().map_err(|e: splitsim_core::numeric::NumericError| e.to_string())
}

fn order_arg(s: &str) -> Result<SplittingOrder, String> {
    SplittingOrder::parse(s).ok_or_else(|| format!("unknown order `{s}` (parallel, lexmin, random[:seed])"))
}

#[derive(Parser, Debug)]
#[command(name = "splitsim", version, about = "Exact simulation of the splitting sandpile model")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the splitting dynamics from a point source.
    Simulate(SimulateArgs),
    /// Run a cellular automaton and emit label grids.
    Ca(CaArgs),
    /// Cosimulate an automaton with the splitting dynamics; check rule arithmetic.
    Verify(VerifyArgs),
    /// Compare a toppled set with a limiting shape or with Euclidean balls.
    Shape(ShapeArgs),
    /// Classify a grid of parameters.
    Scan(ScanArgs),
    /// Exact constants of the explosive-regime argument.
    Constants(ConstantsArgs),
    /// Render a snapshot or label grid as a plain PPM image.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct SimulateArgs {
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    /// Mass at the origin, `a + b*h`.
    #[arg(short = 'n', long = "n", value_parser = mass_arg, allow_hyphen_values = true, required_unless_present = "config")]
    n: Option<AffineMass>,
    /// Background value `p/q` or interval `[p/q,r/s)`.
    #[arg(short = 'h', long = "h", value_parser = interval_arg, allow_hyphen_values = true, required_unless_present = "config")]
    h: Option<HInterval>,
    #[arg(long, value_parser = order_arg, default_value = "parallel")]
    order: SplittingOrder,
    /// Seed for `--order random`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[arg(long)]
    max_radius: Option<i64>,
    /// Read the run from a TOML configuration instead.
    #[arg(long, conflicts_with_all = ["n", "h"])]
    config: Option<PathBuf>,
    /// Write a snapshot every this many steps.
    #[arg(long, default_value_t = 0)]
    every: u64,
    /// Record the total mass of `T ∪ ∂T` in the trace (slow).
    #[arg(long)]
    trace_mass: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CaArgs {
    /// diamond, square or octagon.
    #[arg(long, required_unless_present = "rules")]
    automaton: Option<String>,
    /// Dimension of the diamond automaton.
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    /// Automaton description file (overrides `--automaton`).
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    every: u64,
    /// Also write PPM images next to the grids.
    #[arg(long)]
    ppm: bool,
    #[arg(long, default_value_t = 4)]
    scale: usize,
    /// Print the automaton description and exit.
    #[arg(long)]
    dump_rules: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// diamond, square or octagon.
    #[arg(long)]
    automaton: String,
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    #[arg(short = 'n', long = "n", value_parser = mass_arg, allow_hyphen_values = true)]
    n: Option<AffineMass>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, requires = "h_hi")]
    h_lo: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, requires = "h_lo")]
    h_hi: Option<Rational>,
    /// Closed interval (octagon: with the closed-interval mapping).
    #[arg(long)]
    closed: bool,
    #[arg(long, required_unless_present = "ledger")]
    t_max: Option<u64>,
    #[arg(long)]
    offset: Option<u64>,
    #[arg(long, default_value_t = 16)]
    bisections: usize,
    /// Recompute the published rule arithmetic.
    #[arg(long)]
    ledger: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct ShapeArgs {
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
    /// diamond, square, octagon or ball.
    #[arg(long)]
    polygon: String,
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    #[arg(short = 'n', long = "n", value_parser = mass_arg, allow_hyphen_values = true)]
    n: AffineMass,
    #[arg(short = 'h', long = "h", value_parser = rational_arg, allow_hyphen_values = true)]
    h: Rational,
    /// Steps of the parallel dynamics (polygons).
    #[arg(short = 't', long = "t")]
    t: Option<u64>,
    /// Scaling `f`; defaults to `1/t`.
    #[arg(long, value_parser = rational_arg)]
    scale: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    /// Ball bounds: use the floating-point runner.
    #[arg(long)]
    dense: bool,
    #[arg(long, default_value_t = 100_000_000)]
    max_steps: u64,
    /// Write the polygon and its ε bands to this file.
    #[arg(long)]
    overlay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct ScanArgs {
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    #[arg(short = 'h', long = "h", value_parser = rational_arg, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    hs: Vec<Rational>,
    #[arg(short = 'n', long = "n", value_parser = rational_arg, value_delimiter = ',', required = true)]
    ns: Vec<Rational>,
    #[arg(long, value_parser = order_arg, value_delimiter = ',', default_value = "parallel")]
    orders: Vec<SplittingOrder>,
    #[arg(long, default_value_t = 10_000)]
    max_steps: u64,
    #[arg(long)]
    max_radius: Option<i64>,
    /// Skip simulation where an explosion is proven.
    #[arg(long)]
    certify: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(short = 'd', long = "dim")]
    d: usize,
    #[arg(long)]
    json: bool,
    /// Also print the sign-flipped closed form of `h*`.
    #[arg(long)]
    diagnostics: bool,
}

#[derive(Args, Debug)]
#[command(disable_help_flag = true)]
struct RenderArgs {
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    snapshot: Option<PathBuf>,
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Automaton of the grid (or `--rules`).
    #[arg(long)]
    automaton: Option<String>,
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Background value for symbolic snapshots.
    #[arg(short = 'h', long = "h", value_parser = rational_arg, allow_hyphen_values = true)]
    h: Option<Rational>,
    #[arg(long, default_value_t = 4)]
    scale: usize,
    #[arg(long, default_value_t = 1)]
    margin: i32,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// A failed command: usage problem or failed check, with a message.
enum Failure {
    Usage(String),
    Check(String),
    Io(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    out_dir: Option<PathBuf>,
}

impl Io<'_> {
    /// Writes `name` into the output directory, or `text` to stdout if there
    /// is none.
    fn emit(&mut self, name: &str, text: &str) -> Result<(), Failure> {
        match &self.out_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(name), text)?;
            }
            None => self.out.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }
}

fn resolve_out(flag: &Option<PathBuf>) -> Option<PathBuf> {
    flag.clone().or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

/// Entry point for the binary: real stdout and stderr.
pub fn cli_main(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line with `argv[0]` the program name.
pub fn cli_run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let out_flag = match &cli.cmd {
        Command::Simulate(a) => a.out.clone(),
        Command::Ca(a) => a.out.clone(),
        Command::Verify(a) => a.out.clone(),
        Command::Shape(a) => a.out.clone(),
        Command::Scan(a) => a.out.clone(),
        Command::Constants(_) | Command::Render(_) => None,
    };
    let mut io = Io { out, err, out_dir: resolve_out(&out_flag) };
    if matches!(cli.cmd, Command::Constants(_) | Command::Render(_)) {
        io.out_dir = None;
    }
    let result = match cli.cmd {
        Command::Simulate(a) => simulate(a, &mut io),
        Command::Ca(a) => ca(a, &mut io),
        Command::Verify(a) => verify(a, &mut io),
        Command::Shape(a) => shape(a, &mut io),
        Command::Scan(a) => scan(a, &mut io),
        Command::Constants(a) => constants(a, &mut io),
        Command::Render(a) => render(a, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            io.note(&format!("error: {m}"));
            EXIT_USAGE
        }
        Err(Failure::Check(m)) => {
            io.note(&format!("check failed: {m}"));
            EXIT_CHECK_FAILED
        }
        Err(Failure::Io(m)) => {
            io.note(&format!("error: {m}"));
            EXIT_USAGE
        }
    }
}

fn engine_failure(e: EngineError) -> Failure {
    match e {
        EngineError::IntervalSplit { .. } => Failure::Check(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn simulate(a: SimulateArgs, io: &mut Io) -> CmdResult {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            RunConfig::parse(&text).map_err(|e| Failure::Usage(format!("--config {}: {e}", p.display())))?
        }
        None => {
            let mut c = RunConfig::new(a.d, a.n.clone().expect("required"), a.h.clone().expect("required"), a.order);
            c.max_steps = a.max_steps;
            c.max_radius = a.max_radius;
            c.frame_every = a.every;
            c
        }
    };
    if let (Some(seed), SplittingOrder::SingleSiteRandom(_)) = (a.seed, cfg.order) {
        cfg.order = SplittingOrder::SingleSiteRandom(seed);
    }
    if io.out_dir.is_none() {
        io.out_dir = cfg.out_dir.clone();
    }
    cfg.out_dir = io.out_dir.clone();
    let tracking = splitsim_core::engine::Tracking { splits: false, window_mass: a.trace_mass };
    let mut state = EvolutionState::init_tracked(cfg.d, cfg.n.clone(), cfg.h.clone(), cfg.order, tracking)
        .map_err(engine_failure)?;
    if io.out_dir.is_some() {
        io.emit("config.toml", &cfg.to_text())?;
    }
    let budget = cfg.budget();
    let outcome = loop {
        let target = if cfg.frame_every > 0 && io.out_dir.is_some() {
            (state.time() + cfg.frame_every).min(budget.max_steps)
        } else {
            budget.max_steps
        };
        match run(state, RunBudget { max_steps: target, ..budget }) {
            RunOutcome::BudgetExhausted(s, diag)
                if target < budget.max_steps && diag.reason == splitsim_core::engine::BudgetReason::Steps =>
            {
                io.emit(&format!("frame-{:08}.snapshot", s.time()), &Snapshot::from_state(&s).to_text())?;
                state = s;
            }
            other => break other,
        }
    };
    let (final_state, summary, code) = match outcome {
        RunOutcome::Stabilized(s) => {
            let m = format!("stabilized at t={} with |T|={}", s.time(), s.toppled().len());
            (s, m, EXIT_OK)
        }
        RunOutcome::BudgetExhausted(s, d) => {
            let m = format!("budget exhausted ({:?}) at t={} with |T|={}, {} unstable", d.reason, d.t, d.toppled, d.unstable);
            (s, m, EXIT_OK)
        }
        RunOutcome::IntervalSplit { crossing, site, t, state } => {
            let m = format!(
                "instability of {site} at t={t} changes at h={}; split the interval there",
                format_rational(&crossing)
            );
            (state, m, EXIT_CHECK_FAILED)
        }
        RunOutcome::CertifiedExplosive(_) => unreachable!("certificates are off"),
    };
    io.emit("final.snapshot", &Snapshot::from_state(&final_state).to_text())?;
    if io.out_dir.is_some() {
        io.emit("trace.csv", &final_state.trace_csv())?;
    }
    io.note(&summary);
    Ok(code)
}

fn named_automaton(name: &str, d: usize) -> Result<AutomatonSpec, Failure> {
    match name {
        "diamond" => {
            if !(1..=3).contains(&d) {
                return Err(Failure::Usage(format!("--dim {d}: the diamond automaton is built for d = 1, 2, 3")));
            }
            Ok(builtin_diamond(d))
        }
        "square" => Ok(builtin_square()),
        "octagon" => Ok(builtin_octagon()),
        other => Err(Failure::Usage(format!("--automaton: unknown automaton `{other}`"))),
    }
}

fn load_automaton(name: Option<&str>, rules: Option<&Path>, d: usize) -> Result<AutomatonSpec, Failure> {
    match (rules, name) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p)?;
            parse_automaton(&text).map_err(|e| Failure::Usage(format!("--rules {}: {e}", p.display())))
        }
        (None, Some(n)) => named_automaton(n, d),
        (None, None) => Err(Failure::Usage("--automaton or --rules is required".into())),
    }
}

fn ca(a: CaArgs, io: &mut Io) -> CmdResult {
    let spec = load_automaton(a.automaton.as_deref(), a.rules.as_deref(), a.d)?;
    if a.dump_rules {
        io.out.write_all(splitsim_core::automata::text::format_automaton(&spec).as_bytes())?;
        return Ok(EXIT_OK);
    }
    let mut state: CAState = spec.initial.clone();
    let write_frame = |io: &mut Io, s: &CAState| -> Result<(), Failure> {
        let stem = format!("ca-{:08}", s.t);
        io.emit(&format!("{stem}.grid"), &format_grid(&spec, s))?;
        if a.ppm && io.out_dir.is_some() && s.dim() <= 2 {
            let frame = Frame::around(s.dim(), &s.support(), 1).map_err(|e| Failure::Usage(e.to_string()))?;
            let img = render_labels(&spec, s, frame, a.scale).map_err(|e| Failure::Usage(e.to_string()))?;
            io.emit(&format!("{stem}.ppm"), &img.to_ppm())?;
        }
        Ok(())
    };
    while state.t < a.steps {
        if a.every > 0 && io.out_dir.is_some() && state.t % a.every == 0 {
            write_frame(io, &state)?;
        }
        state = ca_step(&spec, &state).map_err(|e| Failure::Check(e.to_string()))?;
    }
    write_frame(io, &state)?;
    io.note(&format!("{} at t={}: {} cells in the growth cluster", spec.name, state.t, state.len()));
    Ok(EXIT_OK)
}

fn mapping_kind(name: &str, d: usize) -> Result<MappingKind, Failure> {
    Ok(match name {
        "diamond" => MappingKind::Diamond(d),
        "square" => MappingKind::Square,
        "octagon" => MappingKind::Octagon,
        other => return Err(Failure::Usage(format!("--automaton: unknown automaton `{other}`"))),
    })
}

#[derive(serde::Serialize)]
struct VerifyJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    conformance: Option<ConformanceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rules: Option<Vec<RuleCheckJson>>,
}

fn verify(a: VerifyArgs, io: &mut Io) -> CmdResult {
    let kind = mapping_kind(&a.automaton, a.d)?;
    let spec = named_automaton(&a.automaton, a.d)?;
    let mapping = if a.closed && kind == MappingKind::Octagon { octagon_mapping_closed() } else { builtin_mapping(kind) };
    let mut report = VerifyJson { conformance: None, rules: None };
    let mut failures = Vec::new();

    if let Some(t_max) = a.t_max {
        let n = a.n.clone().unwrap_or_else(|| match kind {
            MappingKind::Square => AffineMass::from_ints(5, -5),
            MappingKind::Octagon => AffineMass::from_ints(3, 0),
            MappingKind::Diamond(_) => AffineMass::from_ints(1, 0),
        });
        let interval = match (&a.h_lo, &a.h_hi) {
            (Some(lo), Some(hi)) => {
                let iv = if a.closed { HInterval::closed(lo.clone(), hi.clone()) } else { HInterval::half_open(lo.clone(), hi.clone()) };
                iv.map_err(|e| Failure::Usage(format!("--h-lo/--h-hi: {e}")))?
            }
            _ => mapping.validity.clone(),
        };
        let offset = a.offset.unwrap_or(if kind == MappingKind::Octagon { 8 } else { 0 });
        let opts = CosimOptions { bisection_budget: a.bisections, ..CosimOptions::new(t_max, offset) };
        let rep = cosimulate(&spec, &mapping, spec.dim, n, interval, &opts);
        if rep.success() {
            io.note(&format!(
                "{} conforms on {} up to t={} ({} subintervals)",
                rep.automaton,
                rep.interval,
                rep.t_max,
                rep.pieces.len()
            ));
        } else {
            match rep.first_failure() {
                Some((iv, t, _)) => failures.push(format!("conformance on {iv} at t={t}")),
                None => failures.push("conformance inconclusive (bisection budget exhausted)".into()),
            }
        }
        report.conformance = Some(ConformanceJson::from(&rep));
    }

    if a.ledger {
        if matches!(kind, MappingKind::Diamond(_)) {
            return Err(Failure::Usage("--ledger: the diamond automaton has no published rule list".into()));
        }
        let mut rows = Vec::new();
        for c in published_rule_checks(kind) {
            let o = c.evaluate(&mapping).map_err(|e| Failure::Check(e.to_string()))?;
            match o.status {
                RuleCheckStatus::Erratum { computed_holds, .. } => {
                    io.note(&format!("rule {} (listed as {}): published arithmetic is an erratum", c.rule, c.listed_as));
                    if !computed_holds {
                        failures.push(format!("rule {} does not hold", c.rule));
                    }
                }
                _ => {
                    if o.report.as_ref().is_some_and(|r| !r.holds_on_interval) {
                        failures.push(format!("rule {} does not hold", c.rule));
                    }
                }
            }
            rows.push(RuleCheckJson::from(&o));
        }
        report.rules = Some(rows);
    }

    io.emit("verify.json", &to_json(&report))?;
    if failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Check(failures.join("; ")))
    }
}

fn shape(a: ShapeArgs, io: &mut Io) -> CmdResult {
    if a.polygon == "ball" {
        return ball(a, io);
    }
    let t = a.t.ok_or_else(|| Failure::Usage("--t is required for polygon shapes".into()))?;
    if t == 0 {
        return Err(Failure::Usage("--t must be positive".into()));
    }
    let f = a.scale.clone().unwrap_or_else(|| Rational::new(1.into(), t.into()));
    let poly = Polygon::builtin(&a.polygon)
        .ok_or_else(|| Failure::Usage(format!("--polygon: unknown shape `{}`", a.polygon)))?;
    if a.d != 2 && a.polygon != "diamond" {
        return Err(Failure::Usage(format!("--dim {}: only the diamond is checked outside the plane", a.d)));
    }
    let mut st = EvolutionState::init(a.d, a.n.clone(), HInterval::point(a.h.clone()), SplittingOrder::Parallel)
        .map_err(engine_failure)?;
    while st.time() < t && !st.is_stable() {
        st.step().map_err(engine_failure)?;
    }
    let tset: &Region = st.toppled();
    let verdict = if a.d == 2 { shape_check(tset, &f, &poly, &a.eps) } else { diamond_l1_check(tset, a.d, &f, &a.eps) }
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(p) = &a.overlay {
        std::fs::write(p, geometry_overlay(&poly, &f, &a.eps))?;
    }
    let json = ShapeJson::new(
        &poly.name,
        a.d,
        a.n.to_string(),
        format_rational(&a.h),
        st.time(),
        format_rational(&f),
        format_rational(&a.eps),
        tset.len(),
        &verdict,
    );
    io.emit("shape.json", &to_json(&json))?;
    io.note(&format!(
        "{} at t={}: inner {}, outer {}, outer excess ≈ {:.4}",
        poly.name,
        st.time(),
        if verdict.inner_ok { "ok" } else { "FAILED" },
        if verdict.outer_ok { "ok" } else { "FAILED" },
        to_f64(&verdict.outer_excess).sqrt()
    ));
    if verdict.passed() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Check(format!("{} shape at t={}", poly.name, st.time())))
    }
}

fn ball(a: ShapeArgs, io: &mut Io) -> CmdResult {
    if !a.n.is_constant() {
        return Err(Failure::Usage("-n: ball bounds need a constant mass".into()));
    }
    let n = a.n.a.clone();
    let tset: Region = if a.dense {
        if !(1..=3).contains(&a.d) {
            return Err(Failure::Usage("--dense supports d <= 3".into()));
        }
        let r = run_dense_parallel(a.d, to_f64(&n), to_f64(&a.h), 8, a.max_steps);
        if !r.stabilized {
            return Err(Failure::Check(format!("no stabilization within {} steps", a.max_steps)));
        }
        r.toppled_region()
    } else {
        let st = EvolutionState::init_point(a.d, n.clone(), a.h.clone(), SplittingOrder::Parallel).map_err(engine_failure)?;
        match run(st, RunBudget::steps(a.max_steps)) {
            RunOutcome::Stabilized(s) => s.toppled().clone(),
            other => return Err(Failure::Check(format!("run ended as {}", other.label()))),
        }
    };
    let b = ball_bounds_check(&tset, &n, &a.h, a.d, &a.eps)
        .ok_or_else(|| Failure::Usage("ball bounds need a nonempty T and 1/2 - eps - h > 0".into()))?;
    io.emit("ball.json", &to_json(&BallJson::new(&b, tset.len())))?;
    io.note(&format!(
        "|T|={} r ≈ {:.3}, c2_obs ≈ {:.3}, c2'_obs ≈ {:.3}",
        tset.len(),
        b.r,
        b.c2_obs,
        b.c2p_obs
    ));
    Ok(EXIT_OK)
}

fn scan(a: ScanArgs, io: &mut Io) -> CmdResult {
    let budget = RunBudget { max_steps: a.max_steps, max_radius: a.max_radius, certify: a.certify };
    let rows = parallel_regime_scan(a.d, &a.hs, &a.ns, &a.orders, budget, a.threads).map_err(engine_failure)?;
    if a.json {
        let js: Vec<ScanJson> = rows.iter().map(ScanJson::from).collect();
        io.emit("scan.json", &to_json(&js))?;
    } else {
        io.emit("scan.csv", &scan_csv(&rows))?;
    }
    io.note(&format!("{} grid points", rows.len()));
    Ok(EXIT_OK)
}

fn constants(a: ConstantsArgs, io: &mut Io) -> CmdResult {
    if a.d < 2 {
        return Err(Failure::Usage("--dim: constants are defined for d >= 2".into()));
    }
    let c = theory_constants(a.d);
    if a.json {
        io.out.write_all(to_json(&ConstantsJson::from(&c)).as_bytes())?;
    } else {
        writeln!(io.out, "p={} q={} h*={} C'={}", c.p.reduced(), c.q.reduced(), c.h_star.reduced(), c.c_prime.reduced())?;
        if a.diagnostics {
            writeln!(io.out, "bound={} flipped_closed_form={}", c.upper_bound.reduced(), c.flipped_closed_form.reduced())?;
        }
    }
    io.note(&format!("h* ≈ {:.6}, C' ≈ {:.6}", to_f64(&c.h_star), to_f64(&c.c_prime)));
    Ok(EXIT_OK)
}

fn render(a: RenderArgs, io: &mut Io) -> CmdResult {
    let img = if let Some(p) = &a.snapshot {
        let snap = load_snapshot(p).map_err(|e| Failure::Usage(format!("--snapshot {}: {e}", p.display())))?;
        let h = match (&a.h, snap.interval.as_point()) {
            (Some(h), _) if snap.interval.contains(h) => h.clone(),
            (Some(h), _) => {
                return Err(Failure::Usage(format!("--h {}: outside the snapshot's {}", format_rational(h), snap.interval)))
            }
            (None, Some(h)) => h.clone(),
            (None, None) => return Err(Failure::Usage("--h is required for a snapshot over an interval".into())),
        };
        let point = snap.evaluate_at(&h);
        let frame = Frame::around(point.d, &point.config.explicit_sites(), a.margin).map_err(|e| Failure::Usage(e.to_string()))?;
        render_masses(&point.config, frame, a.scale).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        let p = a.grid.as_ref().expect("required by clap");
        let spec = load_automaton(a.automaton.as_deref(), a.rules.as_deref(), a.d)?;
        let text = std::fs::read_to_string(p)?;
        let state = parse_grid(&spec, &text).map_err(|e| Failure::Usage(format!("--grid {}: {e}", p.display())))?;
        let frame = Frame::around(state.dim(), &state.support(), a.margin).map_err(|e| Failure::Usage(e.to_string()))?;
        render_labels(&spec, &state, frame, a.scale).map_err(|e| Failure::Usage(e.to_string()))?
    };
    match &a.output {
        Some(p) => std::fs::write(p, img.to_ppm())?,
        None => io.out.write_all(img.to_ppm().as_bytes())?,
    }
    io.note(&format!("{}x{} image", img.width, img.height));
    Ok(EXIT_OK)
}
