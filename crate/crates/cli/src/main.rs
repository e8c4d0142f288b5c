//! zxcheck: evaluate diagram files, sample rule catalogs for soundness, and
//! run the bundled verification pipelines.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse or I/O error,
//! 3 validation error, 4 backend or capacity error.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zxcheck_core::euler::{
    classify_euler, enumerate_euler, euler_compose, radin_sadun_check, radin_sadun_sweep,
    two_spider_solve, Classification, EulerEquality, RadinSadunReport, RadinSadunVerdict,
    SpiderOrder,
};
use zxcheck_core::interp::{interpret, Backend, EvalConfig};
use zxcheck_core::matrix::{equal_up_to_scalar, Matrix};
use zxcheck_core::parser::{
    parse_angle_value, parse_assignments, parse_diagram_file, parse_rule_file,
};
use zxcheck_core::rules::{
    check_soundness, scaled_equality_test, RuleSchema, ScaleReport, SoundnessConfig,
    SoundnessReport, DEFAULT_SEED, DEFAULT_TOLERANCE,
};
use zxcheck_core::supcyc::verify_sup_to_cyc;
use zxcheck_core::{Angle, ZxError};

#[derive(Parser)]
#[command(
    name = "zxcheck",
    version,
    about = "Checks ZX diagram identities with exact or floating-point arithmetic"
)]
struct Cli {
    /// Emit one JSON object on stdout instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Absolute tolerance for floating-point comparisons
    #[arg(long, global = true, env = "ZXCHECK_TOLERANCE")]
    tolerance: Option<f64>,

    /// Widest allowed wire cut during evaluation
    #[arg(long, global = true, env = "ZXCHECK_WIRE_CAP")]
    wire_cap: Option<u32>,

    /// Seed for the sampling commands
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a diagram file and print its matrix
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
        backend: BackendArg,
        /// Comma-separated variable bindings, e.g. "a=pi/2,b=0.3r"
        #[arg(long)]
        assign: Option<String>,
    },
    /// Sample every rule file in a directory and report soundness
    VerifyAxioms {
        dir: PathBuf,
        #[arg(long, default_value_t = 200)]
        exact_samples: u32,
        #[arg(long, default_value_t = 200)]
        float_samples: u32,
        /// Largest denominator for sampled rational angles
        #[arg(long, default_value_t = 16)]
        max_denominator: i64,
    },
    /// Run the staged collapse pipeline for one prime
    SupToCyc {
        #[arg(long)]
        p: u64,
    },
    /// Two-spider and three-spider rotation-chain tools
    Euler {
        #[command(subcommand)]
        cmd: EulerCmd,
    },
    /// Probe alternating rotation words for scalar-identity rigidity
    RadinSadun {
        /// Longest word length for the sweep
        #[arg(long, default_value_t = 4)]
        len: usize,
        /// Largest angle denominator for the sweep
        #[arg(long = "max-den", default_value_t = 6)]
        max_den: i64,
        /// Check a single comma-separated word instead of sweeping
        #[arg(long)]
        word: Option<String>,
    },
    /// Rescale all angles by k = 1, n+1, 2n+1, ... and compare at each step
    ScaleTest {
        /// Equality file with lhs and rhs terms
        #[arg(long)]
        file: PathBuf,
        /// Step between consecutive scale factors
        #[arg(long)]
        n: u32,
        /// Largest scale factor to test
        #[arg(long, default_value_t = 50)]
        kmax: i64,
        /// Comma-separated variable bindings, e.g. "a=pi/2,b=0.3r"
        #[arg(long)]
        assign: Option<String>,
    },
}

#[derive(Subcommand)]
enum EulerCmd {
    /// Recover the two-spider chain of a one-wire diagram and swap its colors
    Solve {
        /// Closed diagram file whose 2x2 matrix defines the chain
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Match one three-angle equality against the provable families
    Classify {
        /// Comma-separated Z-X-Z phases, topmost first
        #[arg(long)]
        lhs: String,
        /// Comma-separated X-Z-X phases, topmost first
        #[arg(long)]
        rhs: String,
        /// Swap the colors of both sides before matching
        #[arg(long)]
        swapped: bool,
    },
    /// Enumerate and classify every grid equality up to a denominator bound
    Enumerate {
        #[arg(long = "max-den")]
        max_den: i64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

impl BackendArg {
    fn to_backend(self) -> Backend {
        match self {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BackendArg::Exact => "exact",
            BackendArg::Float => "float",
        }
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    In(PathBuf, ZxError),
    Zx(ZxError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::In(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Zx(e) => write!(f, "{e}"),
        }
    }
}

impl From<ZxError> for CliError {
    fn from(e: ZxError) -> Self {
        CliError::Zx(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::In(_, e) | CliError::Zx(e) => {
                if e.is_parse() {
                    2
                } else if e.is_validation() {
                    3
                } else if e.is_capacity() {
                    4
                } else {
                    2
                }
            }
        }
    }
}

/// Settings shared by every subcommand, after defaults are applied.
struct Ctx {
    json: bool,
    tolerance: f64,
    wire_cap: u32,
    seed: u64,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: u32,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

impl Ctx {
    fn emit<T: Serialize>(&self, command: &'static str, body: &T, text: &str) {
        if self.json {
            let env = Envelope { schema: 1, command, body };
            println!("{}", serde_json::to_string(&env).expect("reports serialize"));
        } else {
            print!("{text}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        json: cli.json,
        tolerance: cli.tolerance.unwrap_or(DEFAULT_TOLERANCE),
        wire_cap: cli.wire_cap.unwrap_or_else(|| EvalConfig::default().wire_cap),
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
    };
    match run(&cli.cmd, &ctx) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Result<u8, CliError> {
    match cmd {
        Cmd::Eval { file, backend, assign } => cmd_eval(ctx, file, *backend, assign.as_deref()),
        Cmd::VerifyAxioms { dir, exact_samples, float_samples, max_denominator } => {
            cmd_verify_axioms(ctx, dir, *exact_samples, *float_samples, *max_denominator)
        }
        Cmd::SupToCyc { p } => cmd_sup_to_cyc(ctx, *p),
        Cmd::Euler { cmd } => match cmd {
            EulerCmd::Solve { matrix } => cmd_euler_solve(ctx, matrix),
            EulerCmd::Classify { lhs, rhs, swapped } => cmd_euler_classify(ctx, lhs, rhs, *swapped),
            EulerCmd::Enumerate { max_den } => cmd_euler_enumerate(ctx, *max_den),
        },
        Cmd::RadinSadun { len, max_den, word } => {
            cmd_radin_sadun(ctx, *len, *max_den, word.as_deref())
        }
        Cmd::ScaleTest { file, n, kmax, assign } => {
            cmd_scale_test(ctx, file, *n, *kmax, assign.as_deref())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn in_file<T>(path: &Path, r: Result<T, ZxError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::In(path.to_path_buf(), e))
}

// ---------------------------------------------------------------- eval

#[derive(Serialize)]
struct EvalBody {
    file: String,
    name: Option<String>,
    backend: &'static str,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

fn matrix_entries(m: &Matrix) -> Vec<Vec<String>> {
    match m {
        Matrix::Exact(m) => (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
            .collect(),
        Matrix::Float(m) => (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| {
                        let v = m.get(r, c);
                        format!("{}{:+}j", v.re, v.im)
                    })
                    .collect()
            })
            .collect(),
    }
}

fn cmd_eval(
    ctx: &Ctx,
    file: &Path,
    backend: BackendArg,
    assign: Option<&str>,
) -> Result<u8, CliError> {
    let src = read(file)?;
    let df = in_file(file, parse_diagram_file(&src))?;
    let bindings = match assign {
        Some(s) => parse_assignments(s)?,
        None => BTreeMap::new(),
    };
    let term = in_file(file, df.term.substitute(&bindings))?;
    let cfg = EvalConfig { backend: backend.to_backend(), wire_cap: ctx.wire_cap };
    let m = in_file(file, interpret(&term, &cfg))?;

    let mut text = String::new();
    if let Some(name) = &df.name {
        text.push_str(&format!("# name={name}\n"));
    }
    text.push_str(&m.dump());
    let body = EvalBody {
        file: file.display().to_string(),
        name: df.name.clone(),
        backend: backend.name(),
        rows: m.rows(),
        cols: m.cols(),
        entries: matrix_entries(&m),
    };
    ctx.emit("eval", &body, &text);
    Ok(0)
}

// ------------------------------------------------------- verify-axioms

#[derive(Serialize)]
struct VerifyBody {
    dir: String,
    exact_samples: u32,
    float_samples: u32,
    max_denominator: i64,
    seed: u64,
    tolerance: f64,
    report: SoundnessReport,
}

/// Loads a catalog directory while keeping error classes intact: unreadable
/// files exit 2 and malformed rules keep their parser positions.
fn load_catalog(dir: &Path) -> Result<Vec<RuleSchema>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "zxr"))
        .collect();
    paths.sort();
    let mut rules = Vec::new();
    for p in paths {
        let src = read(&p)?;
        rules.push(in_file(&p, parse_rule_file(&src))?);
    }
    Ok(rules)
}

fn cmd_verify_axioms(
    ctx: &Ctx,
    dir: &Path,
    exact_samples: u32,
    float_samples: u32,
    max_denominator: i64,
) -> Result<u8, CliError> {
    let rules = load_catalog(dir)?;
    if rules.is_empty() {
        eprintln!("warning: no rule files found in {}", dir.display());
    }
    let cfg = SoundnessConfig {
        exact_samples,
        float_samples,
        seed: ctx.seed,
        max_denominator,
        tolerance: ctx.tolerance,
        wire_cap: ctx.wire_cap,
    };
    let report = check_soundness(&rules, &cfg)?;

    let mut text = String::new();
    for r in &report.rules {
        if r.sound {
            text.push_str(&format!(
                "rule {}: ok (exact {}, float {})\n",
                r.name, r.exact_checked, r.float_checked
            ));
        } else {
            for f in &r.failures {
                let assign: Vec<String> =
                    f.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                text.push_str(&format!(
                    "rule {}: FAIL [{}] at {}: {}\n",
                    r.name,
                    f.backend,
                    assign.join(", "),
                    f.detail
                ));
            }
        }
    }
    let sound_count = report.rules.iter().filter(|r| r.sound).count();
    text.push_str(&format!(
        "checked {} rules: {} sound, {} failing\n",
        report.rules.len(),
        sound_count,
        report.rules.len() - sound_count
    ));

    let all_sound = report.all_sound;
    let body = VerifyBody {
        dir: dir.display().to_string(),
        exact_samples,
        float_samples,
        max_denominator,
        seed: ctx.seed,
        tolerance: ctx.tolerance,
        report,
    };
    ctx.emit("verify-axioms", &body, &text);
    Ok(if all_sound { 0 } else { 1 })
}

// ----------------------------------------------------------- sup-to-cyc

fn cmd_sup_to_cyc(ctx: &Ctx, p: u64) -> Result<u8, CliError> {
    let report = verify_sup_to_cyc(p)?;

    let mut text = format!(
        "p = {}\nextraction width 2^{} (granularity {})\n",
        report.p, report.extraction_level, report.granularity
    );
    for s in &report.steps {
        let mark = if s.passed { "pass" } else { "FAIL" };
        text.push_str(&format!("step {}: {} ({})\n", s.name, mark, s.detail));
    }
    text.push_str(if report.all_passed {
        "result: all steps passed\n"
    } else {
        "result: FAILED\n"
    });

    let ok = report.all_passed;
    ctx.emit("sup-to-cyc", &report, &text);
    Ok(if ok { 0 } else { 1 })
}

// ---------------------------------------------------------------- euler

#[derive(Serialize)]
struct SwappedChain {
    x_phase: Angle,
    z_phase: Angle,
}

#[derive(Serialize)]
struct ChainPart {
    z_phase: Angle,
    x_phase: Angle,
    scalar: String,
}

#[derive(Serialize)]
struct SolveBody {
    file: String,
    chain: Option<ChainPart>,
    solvable: bool,
    swapped: Option<SwappedChain>,
}

fn cmd_euler_solve(ctx: &Ctx, file: &Path) -> Result<u8, CliError> {
    let src = read(file)?;
    let df = in_file(file, parse_diagram_file(&src))?;
    if !df.vars.is_empty() {
        return Err(CliError::In(
            file.to_path_buf(),
            ZxError::Invalid("matrix file must be closed: bind or remove its variables".into()),
        ));
    }
    let cfg = EvalConfig { backend: Backend::Float, wire_cap: ctx.wire_cap };
    let m = in_file(file, interpret(&df.term, &cfg))?;
    if m.rows() != 2 || m.cols() != 2 {
        return Err(CliError::In(
            file.to_path_buf(),
            ZxError::Invalid(format!(
                "expected a one-input one-output diagram, got a {}x{} matrix",
                m.rows(),
                m.cols()
            )),
        ));
    }

    // A chain Z(a1) X(a2) has row sums s and s*e^{i a1}, and the top row
    // determines e^{i a2}; recover both and verify before trusting them.
    let f = m.to_float();
    let (m00, m01) = (*f.get(0, 0), *f.get(0, 1));
    let (m10, m11) = (*f.get(1, 0), *f.get(1, 1));
    let s = m00 + m01;
    let not_chain = |ctx: &Ctx| {
        let body = SolveBody {
            file: file.display().to_string(),
            chain: None,
            solvable: false,
            swapped: None,
        };
        ctx.emit("euler-solve", &body, "matrix is not proportional to a Z-X spider chain\n");
        Ok(1)
    };
    if s.norm() <= ctx.tolerance {
        return not_chain(ctx);
    }
    let a1 = Angle::real(((m10 + m11) / s).arg());
    let a2 = Angle::real(((m00 - m01) / s).arg());
    let chain = euler_compose(&[a1, a2, Angle::ZERO], SpiderOrder::Zxz);
    let scalar = match equal_up_to_scalar(&m, &chain, ctx.tolerance) {
        Some(sc) => sc,
        None => return not_chain(ctx),
    };

    let solution = two_spider_solve(&a1, &a2);
    let mut text = format!("chain: Z({a1}) X({a2}), X applied first; scalar {scalar}\n");
    match &solution {
        Some((b1, b2)) => {
            text.push_str(&format!("swapped form: X({b1}) Z({b2}), Z applied first\n"));
        }
        None => {
            text.push_str("no color-swapped two-spider form exists (no phase is a multiple of pi)\n");
        }
    }
    let body = SolveBody {
        file: file.display().to_string(),
        chain: Some(ChainPart { z_phase: a1, x_phase: a2, scalar: scalar.to_string() }),
        solvable: solution.is_some(),
        swapped: solution.map(|(b1, b2)| SwappedChain { x_phase: b1, z_phase: b2 }),
    };
    ctx.emit("euler-solve", &body, &text);
    Ok(0)
}

fn parse_triple(src: &str) -> Result<[Angle; 3], CliError> {
    let parts: Vec<&str> = src.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Zx(ZxError::Invalid(format!(
            "expected three comma-separated angles, got {}",
            parts.len()
        ))));
    }
    Ok([
        parse_angle_value(parts[0])?,
        parse_angle_value(parts[1])?,
        parse_angle_value(parts[2])?,
    ])
}

#[derive(Serialize)]
struct ClassifyBody {
    equality: EulerEquality,
    classification: Classification,
}

fn describe_classification(c: &Classification) -> String {
    match c {
        Classification::Matched(m) => {
            let frees: Vec<String> =
                m.free_angles.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!(
                "family {}{} with n={}, m={}{}{}\n",
                m.family,
                if m.color_swapped { " (color-swapped)" } else { "" },
                m.n,
                m.m,
                if frees.is_empty() { "" } else { ", " },
                frees.join(", ")
            )
        }
        Classification::NotAnEquality => "not an equality: sides differ up to scalar\n".into(),
        Classification::Unclassified => {
            "UNCLASSIFIED: equality holds but matches no family\n".into()
        }
    }
}

fn cmd_euler_classify(ctx: &Ctx, lhs: &str, rhs: &str, swapped: bool) -> Result<u8, CliError> {
    let eq = EulerEquality { lhs: parse_triple(lhs)?, rhs: parse_triple(rhs)?, color_swapped: swapped };
    let classification = classify_euler(&eq, ctx.tolerance);
    let text = describe_classification(&classification);
    let failed = matches!(classification, Classification::Unclassified);
    let body = ClassifyBody { equality: eq, classification };
    ctx.emit("euler-classify", &body, &text);
    Ok(if failed { 1 } else { 0 })
}

#[derive(Serialize)]
struct EnumerateEntry {
    equality: EulerEquality,
    classification: Classification,
}

#[derive(Serialize)]
struct EnumerateBody {
    max_denominator: i64,
    total: usize,
    unclassified: usize,
    entries: Vec<EnumerateEntry>,
}

fn cmd_euler_enumerate(ctx: &Ctx, max_den: i64) -> Result<u8, CliError> {
    let found = enumerate_euler(max_den)?;
    let mut text = String::new();
    let mut unclassified = 0usize;
    for (eq, c) in &found {
        let label = match c {
            Classification::Matched(m) => format!(
                "family {}{} (n={}, m={})",
                m.family,
                if m.color_swapped { ", color-swapped" } else { "" },
                m.n,
                m.m
            ),
            Classification::NotAnEquality => "NOT-AN-EQUALITY".into(),
            Classification::Unclassified => {
                unclassified += 1;
                "UNCLASSIFIED".into()
            }
        };
        text.push_str(&format!(
            "[{}, {}, {}] = [{}, {}, {}]{} -> {}\n",
            eq.lhs[0],
            eq.lhs[1],
            eq.lhs[2],
            eq.rhs[0],
            eq.rhs[1],
            eq.rhs[2],
            if eq.color_swapped { " (swapped)" } else { "" },
            label
        ));
    }
    text.push_str(&format!(
        "enumerated {} equalities, {} unclassified\n",
        found.len(),
        unclassified
    ));
    let body = EnumerateBody {
        max_denominator: max_den,
        total: found.len(),
        unclassified,
        entries: found
            .into_iter()
            .map(|(equality, classification)| EnumerateEntry { equality, classification })
            .collect(),
    };
    ctx.emit("euler-enumerate", &body, &text);
    Ok(if unclassified == 0 { 0 } else { 1 })
}

// ----------------------------------------------------------- radin-sadun

#[derive(Serialize)]
struct WordBody {
    word: Vec<Angle>,
    verdict: RadinSadunVerdict,
}

#[derive(Serialize)]
struct SweepBody {
    report: RadinSadunReport,
}

fn cmd_radin_sadun(
    ctx: &Ctx,
    len: usize,
    max_den: i64,
    word: Option<&str>,
) -> Result<u8, CliError> {
    if let Some(word) = word {
        let mut angles = Vec::new();
        for piece in word.split(',') {
            angles.push(parse_angle_value(piece.trim())?);
        }
        let verdict = radin_sadun_check(&angles)?;
        let shown: Vec<String> = angles.iter().map(|a| a.to_string()).collect();
        let text = format!("word: [{}]\nverdict: {verdict}\n", shown.join(", "));
        let failed = verdict == RadinSadunVerdict::Counterexample;
        let body = WordBody { word: angles, verdict };
        ctx.emit("radin-sadun", &body, &text);
        return Ok(if failed { 1 } else { 0 });
    }

    let report = radin_sadun_sweep(len, max_den)?;
    let text = format!(
        "lengths 1..={}, denominators <= {}, {} distinct angles\n\
         sequences checked: {}\n\
         scalar identities: {}\n\
         conclusion holds: {}\n\
         counterexamples: {}\n",
        report.max_length,
        report.max_denominator,
        report.distinct_angles,
        report.sequences,
        report.scalar_identities,
        report.conclusion_holds,
        report.counterexamples
    );
    let failed = report.counterexamples > 0;
    let body = SweepBody { report };
    ctx.emit("radin-sadun", &body, &text);
    Ok(if failed { 1 } else { 0 })
}

// ------------------------------------------------------------ scale-test

#[derive(Serialize)]
struct ScaleBody {
    file: String,
    n: u32,
    k_max: i64,
    report: ScaleReport,
}

fn cmd_scale_test(
    ctx: &Ctx,
    file: &Path,
    n: u32,
    kmax: i64,
    assign: Option<&str>,
) -> Result<u8, CliError> {
    let src = read(file)?;
    let schema = in_file(file, parse_rule_file(&src))?;
    let bindings = match assign {
        Some(s) => parse_assignments(s)?,
        None => BTreeMap::new(),
    };
    let report = in_file(
        file,
        scaled_equality_test(
            &schema.lhs,
            &schema.rhs,
            &bindings,
            n,
            kmax,
            schema.mode,
            ctx.tolerance,
            ctx.wire_cap,
        ),
    )?;

    let mut text = String::new();
    for s in &report.steps {
        let mark = if s.equal { "equal" } else { "DIFFER" };
        text.push_str(&format!("k={}: {} ({})\n", s.k, mark, s.backend));
    }
    text.push_str(&match report.first_failure {
        None => "all scale factors agree\n".to_string(),
        Some(k) => format!("first failure at k={k}\n"),
    });
    let ok = report.all_equal;
    let body =
        ScaleBody { file: file.display().to_string(), n, k_max: kmax, report };
    ctx.emit("scale-test", &body, &text);
    Ok(if ok { 0 } else { 1 })
}
