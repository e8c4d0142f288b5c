//! Rewrite rules and the sampling soundness harness.
//!
//! A rule asserts that two diagram templates have equal interpretations for
//! every assignment of their angle variables, either exactly (`Equal`) or up
//! to a nonzero scalar (`UpToScalar`). The harness draws seeded random
//! assignments and evaluates both sides under both backends: rational angles
//! for the exact backend, uniform real angles for the float backend.
//!
//! Rules may carry a side condition restricting the admissible assignments.
//! The supported condition is the cosine balance
//! `2 e^{i t3} cos(g) = e^{i t1} cos(a) + e^{i t2} cos(b)` over the variable
//! names `alpha, beta, gamma, theta1, theta2, theta3`. Conditioned rules are
//! sampled on the constraint manifold (the sampler solves for `gamma` and
//! `theta3`), which produces real angles, so they are checked with the float
//! backend only.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::{Angle, RationalAngle};
use crate::cyclotomic::{working_order, Cyclotomic, MAX_ORDER};
use crate::diagram::Diagram;
use crate::interp::{interpret, Backend, EvalConfig};
use crate::matrix::{equal_up_to_scalar, matrices_equal};
use crate::ZxError;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    /// Interpretations must agree entrywise.
    Equal,
    /// Interpretations must agree up to a nonzero scalar.
    UpToScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCondition {
    /// The cosine balance condition described in the module docs.
    RuleA,
}

/// Canonical variable names bound by the `RuleA` sampler.
pub const RULE_A_VARS: [&str; 6] = ["alpha", "beta", "gamma", "theta1", "theta2", "theta3"];

#[derive(Debug, Clone)]
pub struct RuleSchema {
    pub name: String,
    pub mode: CompareMode,
    pub side_condition: Option<SideCondition>,
    pub vars: Vec<String>,
    pub lhs: Diagram,
    pub rhs: Diagram,
}

impl RuleSchema {
    pub fn validate(&self) -> Result<(), ZxError> {
        self.lhs.validate()?;
        self.rhs.validate()?;
        if self.lhs.arity() != self.rhs.arity() {
            return Err(ZxError::InvalidRule {
                name: self.name.clone(),
                reason: format!(
                    "sides have different shapes: {:?} vs {:?}",
                    self.lhs.arity(),
                    self.rhs.arity()
                ),
            });
        }
        for v in self.lhs.free_vars().union(&self.rhs.free_vars()) {
            if !self.vars.contains(v) {
                return Err(ZxError::UndeclaredVariable { name: v.clone() });
            }
        }
        if self.side_condition == Some(SideCondition::RuleA) {
            for v in &self.vars {
                if !RULE_A_VARS.contains(&v.as_str()) {
                    return Err(ZxError::InvalidRule {
                        name: self.name.clone(),
                        reason: format!(
                            "conditioned rules may only use the variables {RULE_A_VARS:?}, got {v:?}"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Loads every `.zxr` rule file in a directory, sorted by file name.
pub fn load_rules_dir(dir: &Path) -> Result<Vec<RuleSchema>, ZxError> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| ZxError::Invalid(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "zxr"))
        .collect();
    paths.sort();
    let mut rules = Vec::new();
    for p in paths {
        let src = fs::read_to_string(&p)
            .map_err(|e| ZxError::Invalid(format!("cannot read {}: {e}", p.display())))?;
        let rule = crate::parser::parse_rule_file(&src).map_err(|e| {
            ZxError::Invalid(format!("{}: {e}", p.display()))
        })?;
        rules.push(rule);
    }
    Ok(rules)
}

#[derive(Debug, Clone, Copy)]
pub struct SoundnessConfig {
    pub exact_samples: u32,
    pub float_samples: u32,
    pub seed: u64,
    /// Largest denominator for sampled rational angles (as fractions of pi).
    pub max_denominator: i64,
    pub tolerance: f64,
    pub wire_cap: u32,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            exact_samples: 200,
            float_samples: 200,
            seed: DEFAULT_SEED,
            max_denominator: 16,
            tolerance: DEFAULT_TOLERANCE,
            wire_cap: 14,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterExample {
    /// Variable assignment, rendered in the angle syntax.
    pub assignment: BTreeMap<String, String>,
    pub backend: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleReport {
    pub name: String,
    pub mode: CompareMode,
    pub side_condition: Option<SideCondition>,
    pub exact_checked: u32,
    pub float_checked: u32,
    pub failures: Vec<CounterExample>,
    pub sound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SoundnessReport {
    pub seed: u64,
    pub rules: Vec<RuleReport>,
    pub all_sound: bool,
}

/// Checks one rule by sampling. Deterministic for a fixed config.
pub fn check_rule(schema: &RuleSchema, cfg: &SoundnessConfig) -> Result<RuleReport, ZxError> {
    schema.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = RuleReport {
        name: schema.name.clone(),
        mode: schema.mode,
        side_condition: schema.side_condition,
        exact_checked: 0,
        float_checked: 0,
        failures: Vec::new(),
        sound: true,
    };

    match schema.side_condition {
        Some(SideCondition::RuleA) => {
            // Constraint solutions are transcendental, so only floats apply.
            for _ in 0..cfg.float_samples.max(1) {
                let bindings = sample_rule_a(&mut rng);
                report.float_checked += 1;
                if let Some(fail) = check_instance(schema, &bindings, Backend::Float, cfg)? {
                    report.failures.push(fail);
                    report.sound = false;
                    break;
                }
            }
        }
        None => {
            let exact_rounds = if schema.vars.is_empty() { 1 } else { cfg.exact_samples };
            for _ in 0..exact_rounds {
                let bindings = sample_rational(&schema.vars, cfg.max_denominator, &mut rng);
                report.exact_checked += 1;
                if let Some(fail) = check_instance(schema, &bindings, Backend::Exact, cfg)? {
                    report.failures.push(fail);
                    report.sound = false;
                    break;
                }
            }
            let float_rounds = if schema.vars.is_empty() { 1 } else { cfg.float_samples };
            if report.sound {
                for _ in 0..float_rounds {
                    let bindings: BTreeMap<String, Angle> = schema
                        .vars
                        .iter()
                        .map(|v| (v.clone(), Angle::real(rng.gen_range(0.0..std::f64::consts::TAU))))
                        .collect();
                    report.float_checked += 1;
                    if let Some(fail) = check_instance(schema, &bindings, Backend::Float, cfg)? {
                        report.failures.push(fail);
                        report.sound = false;
                        break;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Checks a whole catalog; keeps going after failures so the report names
/// every unsound rule.
pub fn check_soundness(
    rules: &[RuleSchema],
    cfg: &SoundnessConfig,
) -> Result<SoundnessReport, ZxError> {
    let mut out = SoundnessReport { seed: cfg.seed, rules: Vec::new(), all_sound: true };
    for rule in rules {
        let r = check_rule(rule, cfg)?;
        out.all_sound &= r.sound;
        out.rules.push(r);
    }
    Ok(out)
}

fn check_instance(
    schema: &RuleSchema,
    bindings: &BTreeMap<String, Angle>,
    backend: Backend,
    cfg: &SoundnessConfig,
) -> Result<Option<CounterExample>, ZxError> {
    let eval_cfg = EvalConfig { backend, wire_cap: cfg.wire_cap };
    let lhs = interpret(&schema.lhs.substitute(bindings)?, &eval_cfg)?;
    let rhs = interpret(&schema.rhs.substitute(bindings)?, &eval_cfg)?;
    let ok = match schema.mode {
        CompareMode::Equal => matrices_equal(&lhs, &rhs, cfg.tolerance),
        CompareMode::UpToScalar => equal_up_to_scalar(&lhs, &rhs, cfg.tolerance).is_some(),
    };
    if ok {
        Ok(None)
    } else {
        let detail = match schema.mode {
            CompareMode::Equal => "interpretations differ".to_owned(),
            CompareMode::UpToScalar => "interpretations are not proportional".to_owned(),
        };
        Ok(Some(CounterExample {
            assignment: bindings.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            backend: match backend {
                Backend::Exact => "exact".to_owned(),
                Backend::Float => "float".to_owned(),
            },
            detail,
        }))
    }
}

/// Random rational assignment whose combined working order stays in range.
/// Denominators that would push the order past the cap fall back to powers
/// of two, which always fit.
fn sample_rational(
    vars: &[String],
    max_den: i64,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<String, Angle> {
    let mut order: u64 = 8;
    let mut out = BTreeMap::new();
    for v in vars {
        let mut den = rng.gen_range(1..=max_den.max(1));
        if num_integer::lcm(order, 2 * den as u64) > MAX_ORDER {
            // Powers of two at most double the order's 2-part, and den = 1
            // never grows it, so a fitting fallback always exists.
            den = [16u64, 8, 4, 2, 1]
                .into_iter()
                .find(|&d| d as i64 <= max_den.max(1) && num_integer::lcm(order, 2 * d) <= MAX_ORDER)
                .unwrap_or(1) as i64;
        }
        order = num_integer::lcm(order, 2 * den as u64);
        let num = rng.gen_range(0..2 * den);
        out.insert(v.clone(), Angle::Rational(RationalAngle::of(num, den)));
    }
    out
}

/// The cosine balance predicate on concrete angles, checked exactly.
///
/// Uses `2 e^{i t} cos(x) = e^{i(t+x)} + e^{i(t-x)}` to turn both sides into
/// sums of roots of unity, then tests the difference for zero in the field.
pub fn rule_a_condition_exact(
    alpha: &RationalAngle,
    beta: &RationalAngle,
    gamma: &RationalAngle,
    theta1: &RationalAngle,
    theta2: &RationalAngle,
    theta3: &RationalAngle,
) -> Result<bool, ZxError> {
    let pairs = [
        (theta3.add(gamma), 2),
        (theta3.sub(gamma), 2),
        (theta1.add(alpha), -1),
        (theta1.sub(alpha), -1),
        (theta2.add(beta), -1),
        (theta2.sub(beta), -1),
    ];
    working_order(pairs.iter().map(|(a, _)| a.denom()))?;
    let mut acc = Cyclotomic::zero();
    for (angle, weight) in &pairs {
        acc = acc.add_ref(&Cyclotomic::root_of_unity(angle).scale_int(*weight));
    }
    Ok(acc.is_zero())
}

/// The cosine balance predicate on real angles, within `tol`.
pub fn rule_a_condition_f64(
    alpha: f64,
    beta: f64,
    gamma: f64,
    theta1: f64,
    theta2: f64,
    theta3: f64,
    tol: f64,
) -> bool {
    let lhs = 2.0 * Complex64::from_polar(1.0, theta3) * gamma.cos();
    let rhs = Complex64::from_polar(1.0, theta1) * alpha.cos()
        + Complex64::from_polar(1.0, theta2) * beta.cos();
    (lhs - rhs).norm() <= tol
}

/// Samples a point on the cosine balance manifold: `alpha`, `beta`,
/// `theta1`, `theta2` are free and `gamma`, `theta3` are solved for. The
/// right side has modulus at most 2, so a solution always exists.
pub fn sample_rule_a(rng: &mut ChaCha8Rng) -> BTreeMap<String, Angle> {
    let tau = std::f64::consts::TAU;
    let alpha = rng.gen_range(0.0..tau);
    let beta = rng.gen_range(0.0..tau);
    let theta1 = rng.gen_range(0.0..tau);
    let theta2 = rng.gen_range(0.0..tau);
    let w = Complex64::from_polar(1.0, theta1) * alpha.cos()
        + Complex64::from_polar(1.0, theta2) * beta.cos();
    let gamma = (w.norm() / 2.0).clamp(0.0, 1.0).acos();
    let theta3 = if w.norm() == 0.0 { 0.0 } else { w.arg() };
    let mut out = BTreeMap::new();
    out.insert("alpha".to_owned(), Angle::real(alpha));
    out.insert("beta".to_owned(), Angle::real(beta));
    out.insert("gamma".to_owned(), Angle::real(gamma));
    out.insert("theta1".to_owned(), Angle::real(theta1));
    out.insert("theta2".to_owned(), Angle::real(theta2));
    out.insert("theta3".to_owned(), Angle::real(theta3));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleStep {
    pub k: i64,
    pub equal: bool,
    pub backend: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleReport {
    pub steps: Vec<ScaleStep>,
    pub all_equal: bool,
    pub first_failure: Option<i64>,
}

/// Scaled equality: multiplies every angle of both concrete diagrams by
/// `k = 1, n+1, 2n+1, ...` up to `k_max` and compares at each step.
///
/// Diagrams whose angles are all rational are compared exactly; otherwise
/// the float backend is used with the given tolerance.
pub fn scaled_equality_test(
    lhs: &Diagram,
    rhs: &Diagram,
    bindings: &BTreeMap<String, Angle>,
    n: u32,
    k_max: i64,
    mode: CompareMode,
    tolerance: f64,
    wire_cap: u32,
) -> Result<ScaleReport, ZxError> {
    let lhs = lhs.substitute(bindings)?;
    let rhs = rhs.substitute(bindings)?;
    let mut report = ScaleReport { steps: Vec::new(), all_equal: true, first_failure: None };
    let mut k: i64 = 1;
    while k <= k_max {
        let l = lhs.scale_angles(k);
        let r = rhs.scale_angles(k);
        let exact_cfg = EvalConfig { backend: Backend::Exact, wire_cap };
        let (lm, rm, backend) = match (interpret(&l, &exact_cfg), interpret(&r, &exact_cfg)) {
            (Ok(a), Ok(b)) => (a, b, "exact"),
            (Err(ZxError::ExactNeedsRational), _) | (_, Err(ZxError::ExactNeedsRational)) => {
                let float_cfg = EvalConfig { backend: Backend::Float, wire_cap };
                (interpret(&l, &float_cfg)?, interpret(&r, &float_cfg)?, "float")
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let equal = match mode {
            CompareMode::Equal => matrices_equal(&lm, &rm, tolerance),
            CompareMode::UpToScalar => equal_up_to_scalar(&lm, &rm, tolerance).is_some(),
        };
        if !equal {
            report.all_equal = false;
            if report.first_failure.is_none() {
                report.first_failure = Some(k);
            }
        }
        report.steps.push(ScaleStep { k, equal, backend: backend.to_owned() });
        k += n.max(1) as i64;
    }
    Ok(report)
}
