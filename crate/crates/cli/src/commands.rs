use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use forge_core::algebra::{
    compose_series, evaluate_series, graded_invert, invertibility_witness, neumann_invert, AlgebraError, PowerSeries,
    SeriesKind, WitnessGrid, DEFAULT_ENUMERATION_CAP,
};
use forge_core::arithmetic::{
    certify_local_invertibility, decompose_p3, invert_multiplicative, ArithmeticError, FunctionSpec, PrimeSpec,
    PrimeSystem,
};
use forge_core::characters::{Character, CharacterData};
use forge_core::cones::{conv_q_contains_zero, dual_cone, ConeError, HullTest};
use forge_core::density::{approximate_functional, kronecker_t, DensityError, DensityOptions, KroneckerInstance};
use forge_core::extension::{extend_character, CharacterExtensionProblem, ExtensionOptions};
use forge_core::json::ElementJson;
use forge_core::semigroup::{LogIntegers, SemigroupBasis};
use forge_core::{scalar::Q, WeightFn};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, Command, GlobalOpts, Outcome};

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    #[arg(required_unless_present = "schema")]
    pub b: Option<PathBuf>,
    /// Exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Drop terms with |λ|₁ above this bound.
    #[arg(long)]
    pub truncate: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Neumann,
    Graded,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Neumann)]
    pub method: Method,
    #[arg(long)]
    pub exact: bool,
    /// Weight as JSON, e.g. '{"kind":"poly","c":2}'.
    #[arg(long, default_value = r#"{"kind":"one"}"#)]
    pub weight: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    /// Truncation T for graded inversion (defaults to the element's own).
    #[arg(long)]
    pub truncate: Option<f64>,
    /// Cap on enumerated elements for graded inversion.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    /// One coordinate of s as "re,im"; repeat per coordinate.
    #[arg(long = "s", allow_hyphen_values = true)]
    pub s: Vec<String>,
    #[arg(long, default_value = r#"{"kind":"one"}"#)]
    pub weight: String,
    /// Terms with |λ|₁ at or above the cutoff count as tail; defaults to
    /// just past the support.
    #[arg(long)]
    pub cutoff: Option<f64>,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    #[arg(long, default_value_t = 10.0)]
    pub sigma_max: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 21)]
    pub n_sigma: usize,
    #[arg(long, default_value_t = 201)]
    pub n_t: usize,
    #[arg(long, default_value_t = 128)]
    pub disk_radial: usize,
    #[arg(long, default_value_t = 512)]
    pub disk_angular: usize,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    /// Series as JSON: '{"kind":"exp"}', '{"kind":"log"}', '{"kind":"reciprocal"}',
    /// '{"kind":"identity"}' or '{"kind":"polynomial","coeffs":[{"re":1,"im":0}]}'.
    #[arg(long, required_unless_present = "schema")]
    pub series: Option<String>,
    /// Expansion center "re,im"; defaults to a(0).
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long, default_value = r#"{"kind":"one"}"#)]
    pub weight: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
}

#[derive(Args, Debug)]
pub struct VectorsArgs {
    /// JSON array of rational vectors, entries as "num/den" strings.
    #[arg(required_unless_present = "schema")]
    pub vectors: Option<PathBuf>,
    /// Ambient dimension, needed only when the list is empty.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[arg(required_unless_present = "schema")]
    pub problem: Option<PathBuf>,
    /// Moduli within 10^-N of one are treated as unimodular.
    #[arg(long, default_value_t = 12)]
    pub precision: u32,
    /// |ψ(γ)| at or below this counts as a zero.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tol: f64,
    #[arg(long, default_value_t = 8)]
    pub phase_multiple_bound: i64,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(required_unless_present = "schema")]
    pub a: Option<PathBuf>,
    #[arg(required_unless_present = "schema")]
    pub psi: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-2)]
    pub theta: f64,
    /// Budget in term evaluations.
    #[arg(long, default_value_t = 1e6)]
    pub budget: f64,
    #[arg(long)]
    pub sigma_max: Option<f64>,
}

#[derive(Args, Debug)]
pub struct KroneckerArgs {
    #[arg(required_unless_present = "schema")]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub budget: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EulerInvertArgs {
    #[arg(required_unless_present = "schema")]
    pub f: Option<PathBuf>,
    /// Truncation x for rational primes when the input names no system.
    #[arg(long, default_value_t = 10_000)]
    pub x: u64,
    /// Bound min |ã_p| over the closed disk for every prime.
    #[arg(long)]
    pub certify: bool,
    #[arg(long, default_value_t = 64)]
    pub radial: usize,
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
}

#[derive(Args, Debug)]
pub struct P3Args {
    #[arg(required_unless_present = "schema")]
    pub f: Option<PathBuf>,
    #[arg(long, default_value = r#"{"kind":"one"}"#)]
    pub omega: String,
    #[arg(long, default_value_t = 10_000)]
    pub x: u64,
}

#[derive(Args, Debug)]
pub struct CheckWeightArgs {
    #[arg(long, required_unless_present = "schema")]
    pub weight: Option<String>,
    /// Samples are taken on [0, x_max].
    #[arg(long, default_value_t = 50.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Point at which the root test w(kx)^{1/k} is run.
    #[arg(long, default_value_t = 1.0)]
    pub at: f64,
    #[arg(long, default_value_t = 4096)]
    pub max_k: u32,
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    /// Growth rate θ for the bound w(x) ≤ C e^{θx}.
    #[arg(long)]
    pub theta: Option<f64>,
}

/// Multiplicative function input: optional prime system plus values.
#[derive(Debug, Serialize, Deserialize)]
struct FunctionInput {
    #[serde(default)]
    system: Option<PrimeSpec>,
    #[serde(flatten)]
    spec: FunctionSpec,
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn precondition(kind: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Precondition { kind, message: e.to_string() }
}

fn algebra_err(e: AlgebraError) -> CliError {
    let kind = match &e {
        AlgebraError::NeumannInapplicable { .. } => "neumann_inapplicable",
        AlgebraError::Singular => "singular",
        AlgebraError::MaxTermsExceeded { .. } | AlgebraError::EnumerationCap { .. } => {
            return CliError::Budget { kind: "budget_exhausted", message: e.to_string() }
        }
        AlgebraError::CompositionOutOfRadius { .. } => "out_of_radius",
        AlgebraError::BasisMismatch => "basis_mismatch",
        AlgebraError::Semigroup(_) => "semigroup",
        AlgebraError::Invalid(_) => "invalid",
    };
    precondition(kind, e)
}

fn preset_basis(v: &Value) -> Result<Value, CliError> {
    let basis: Arc<SemigroupBasis> = match v.get("preset").and_then(Value::as_str) {
        Some("naturals") => SemigroupBasis::naturals(),
        Some("log_integers") => {
            let x = v.get("x").and_then(Value::as_u64).ok_or_else(|| input_err("log_integers preset needs \"x\""))?;
            LogIntegers::new(x).basis().clone()
        }
        other => return Err(input_err(format!("unknown basis preset {other:?}"))),
    };
    serde_json::to_value(&*basis).map_err(input_err)
}

/// Replaces `{"preset": ..}` bases by their full description.
fn expand_presets(v: &mut Value) -> Result<(), CliError> {
    match v {
        Value::Object(map) => {
            if let Some(b) = map.get_mut("basis") {
                if b.get("preset").is_some() {
                    *b = preset_basis(b)?;
                }
            }
            for (_, x) in map.iter_mut() {
                expand_presets(x)?;
            }
        }
        Value::Array(items) => {
            for x in items {
                expand_presets(x)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let mut v: Value = serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    expand_presets(&mut v)?;
    serde_json::from_value(v).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn parse_inline<T: DeserializeOwned>(what: &str, s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| input_err(format!("--{what}: {e}")))
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts.next().unwrap_or("").parse::<f64>().map_err(|_| input_err(format!("bad complex {s:?}")))?;
    let im = match parts.next() {
        Some(p) => p.parse::<f64>().map_err(|_| input_err(format!("bad complex {s:?}")))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(input_err(format!("bad complex {s:?}")));
    }
    Ok(Complex64::new(re, im))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn path(p: &Option<PathBuf>) -> &Path {
    p.as_deref().expect("clap enforces required inputs")
}

fn budget(x: f64) -> Result<u64, CliError> {
    if x.is_finite() && x >= 0.0 {
        Ok(x as u64)
    } else {
        Err(input_err(format!("bad budget {x}")))
    }
}

pub fn run(cmd: &Command, g: &GlobalOpts) -> Result<Outcome, CliError> {
    match cmd {
        Command::Convolve(a) => convolve(a),
        Command::Invert(a) => invert(a),
        Command::Eval(a) => eval(a),
        Command::Witness(a) => witness(a),
        Command::Compose(a) => compose(a),
        Command::Separate(a) => separate(a),
        Command::Dual(a) => dual(a),
        Command::ExtendCharacter(a) => extend(a),
        Command::DensitySearch(a) => density(a, g.seed),
        Command::Kronecker(a) => kronecker(a),
        Command::EulerInvert(a) => euler_invert(a),
        Command::P3Decompose(a) => p3(a),
        Command::CheckWeight(a) => check_weight(a),
    }
}

fn convolve(args: &ConvolveArgs) -> Result<Outcome, CliError> {
    let ja: ElementJson = read_json(path(&args.a))?;
    let jb: ElementJson = read_json(path(&args.b))?;
    let basis = Arc::new(ja.basis.clone());
    let out = if args.exact {
        let a = ja.to_exact_in(basis.clone()).map_err(algebra_err)?;
        let b = jb.to_exact_in(basis).map_err(algebra_err)?;
        let mut c = a.convolve(&b).map_err(algebra_err)?;
        if let Some(t) = args.truncate {
            c = c.with_truncation(t);
        }
        ElementJson::from_exact(&c)
    } else {
        let a = ja.to_float_in(basis.clone()).map_err(algebra_err)?;
        let b = jb.to_float_in(basis).map_err(algebra_err)?;
        let mut c = a.convolve(&b).map_err(algebra_err)?;
        if let Some(t) = args.truncate {
            c = c.with_truncation(t);
        }
        ElementJson::from_float(&c)
    };
    Ok(Outcome::Done(to_value(&out)))
}

fn invert(args: &InvertArgs) -> Result<Outcome, CliError> {
    let ja: ElementJson = read_json(path(&args.a))?;
    let w: WeightFn = parse_inline("weight", &args.weight)?;
    let t = args.truncate.or(ja.truncation);
    let value = match (args.method, args.exact) {
        (Method::Neumann, false) => {
            let a = ja.to_float().map_err(algebra_err)?;
            let (inv, cert) = neumann_invert(&a, &w, args.tol, args.max_terms).map_err(algebra_err)?;
            json!({ "element": ElementJson::from_float(&inv), "certificate": cert })
        }
        (Method::Neumann, true) => {
            let a = ja.to_exact().map_err(algebra_err)?;
            let (inv, cert) = neumann_invert(&a, &w, args.tol, args.max_terms).map_err(algebra_err)?;
            json!({ "element": ElementJson::from_exact(&inv), "certificate": cert })
        }
        (Method::Graded, exact) => {
            let t = t.ok_or_else(|| precondition("missing_truncation", "graded inversion needs --truncate"))?;
            if exact {
                let a = ja.to_exact().map_err(algebra_err)?;
                json!({ "element": ElementJson::from_exact(&graded_invert(&a, t, args.cap).map_err(algebra_err)?) })
            } else {
                let a = ja.to_float().map_err(algebra_err)?;
                json!({ "element": ElementJson::from_float(&graded_invert(&a, t, args.cap).map_err(algebra_err)?) })
            }
        }
    };
    Ok(Outcome::Done(value))
}

fn eval(args: &EvalArgs) -> Result<Outcome, CliError> {
    let a = read_json::<ElementJson>(path(&args.a))?.to_float().map_err(algebra_err)?;
    let w: WeightFn = parse_inline("weight", &args.weight)?;
    let s = args.s.iter().map(|x| parse_complex(x)).collect::<Result<Vec<_>, _>>()?;
    let cutoff = args.cutoff.unwrap_or_else(|| a.graded_support().last().map_or(0.0, |t| t.0) + 1.0);
    let v = evaluate_series(&a, &s, &w, cutoff).map_err(algebra_err)?;
    Ok(Outcome::Done(to_value(&v)))
}

fn witness(args: &WitnessArgs) -> Result<Outcome, CliError> {
    let a = read_json::<ElementJson>(path(&args.a))?.to_float().map_err(algebra_err)?;
    let grid = WitnessGrid {
        sigma_max: args.sigma_max,
        t_max: args.t_max,
        n_sigma: args.n_sigma,
        n_t: args.n_t,
        disk_radial: args.disk_radial,
        disk_angular: args.disk_angular,
    };
    let r = invertibility_witness(&a, &grid).map_err(algebra_err)?;
    Ok(Outcome::Done(to_value(&r)))
}

fn compose(args: &ComposeArgs) -> Result<Outcome, CliError> {
    let a = read_json::<ElementJson>(path(&args.a))?.to_float().map_err(algebra_err)?;
    let kind: SeriesKind = parse_inline("series", args.series.as_deref().expect("required"))?;
    let center = match &args.center {
        Some(c) => parse_complex(c)?,
        None => a.constant_term(),
    };
    let w: WeightFn = parse_inline("weight", &args.weight)?;
    let f = PowerSeries::new(kind, center).map_err(algebra_err)?;
    let (c, cert) = compose_series(&f, &a, &w, args.tol, args.max_terms).map_err(algebra_err)?;
    Ok(Outcome::Done(json!({ "element": ElementJson::from_float(&c), "certificate": cert })))
}

#[derive(Deserialize)]
struct Vectors(#[serde(with = "forge_core::scalar::serde_q::vec_vec")] Vec<Vec<Q>>);

fn cone_err(e: ConeError) -> CliError {
    precondition("cone", e)
}

fn separate(args: &VectorsArgs) -> Result<Outcome, CliError> {
    let Vectors(e) = read_json(path(&args.vectors))?;
    let r: HullTest = conv_q_contains_zero(&e).map_err(cone_err)?;
    Ok(Outcome::Done(to_value(&r)))
}

fn dual(args: &VectorsArgs) -> Result<Outcome, CliError> {
    let Vectors(e) = read_json(path(&args.vectors))?;
    let dim = match (e.first(), args.dim) {
        (Some(v), _) => v.len(),
        (None, Some(d)) => d,
        (None, None) => return Err(precondition("cone", "empty vector list needs --dim")),
    };
    let d = dual_cone(dim, &e).map_err(cone_err)?;
    Ok(Outcome::Done(to_value(&d)))
}

fn extend(args: &ExtendArgs) -> Result<Outcome, CliError> {
    let p: CharacterExtensionProblem = read_json(path(&args.problem))?;
    let opts = ExtensionOptions {
        zero_tol: args.zero_tol,
        snap_tol: 10f64.powi(-(args.precision.min(300) as i32)),
        phase_multiple_bound: args.phase_multiple_bound,
        ..ExtensionOptions::default()
    };
    let r = extend_character(&p, &opts).map_err(|e| precondition("extension", e))?;
    Ok(Outcome::Done(to_value(&r)))
}

fn density_err(e: DensityError) -> CliError {
    precondition("density", e)
}

fn density(args: &DensityArgs, seed: u64) -> Result<Outcome, CliError> {
    let a = read_json::<ElementJson>(path(&args.a))?.to_float().map_err(algebra_err)?;
    let data: CharacterData = read_json(path(&args.psi))?;
    let psi = Character::from_data(a.basis().clone(), data).map_err(|e| precondition("character", e))?;
    let opts = DensityOptions { budget: budget(args.budget)?, seed, sigma_max: args.sigma_max, ..DensityOptions::default() };
    let r = approximate_functional(&a, &psi, args.theta, &opts).map_err(density_err)?;
    let v = to_value(&r);
    Ok(if r.success { Outcome::Done(v) } else { Outcome::Exhausted(v) })
}

fn kronecker(args: &KroneckerArgs) -> Result<Outcome, CliError> {
    let mut inst: KroneckerInstance = read_json(path(&args.instance))?;
    if let Some(t) = args.theta {
        inst.theta = t;
    }
    if let Some(b) = args.budget {
        inst.budget = budget(b)?;
    }
    let r = kronecker_t(&inst).map_err(density_err)?;
    let v = to_value(&r);
    Ok(if r.success { Outcome::Done(v) } else { Outcome::Exhausted(v) })
}

fn arith_err(e: ArithmeticError) -> CliError {
    match e {
        ArithmeticError::Unachievable { .. } => precondition("unachievable", e),
        _ => precondition("arithmetic", e),
    }
}

fn load_function(p: &Path, x: u64) -> Result<forge_core::arithmetic::MultiplicativeFunction<Q>, CliError> {
    let input: FunctionInput = read_json(p)?;
    let system = match input.system {
        Some(spec) => PrimeSystem::new(spec).map_err(arith_err)?,
        None => PrimeSystem::rational(x),
    };
    input.spec.build(system).map_err(arith_err)
}

fn euler_invert(args: &EulerInvertArgs) -> Result<Outcome, CliError> {
    let f = load_function(path(&args.f), args.x)?;
    let g = invert_multiplicative(&f);
    let mut out = json!({
        "system": f.system().spec(),
        "inverse": FunctionSpec::from_function(&g),
    });
    if args.certify {
        let certs = certify_local_invertibility(&f, args.radial, args.angular);
        let failing: Vec<f64> = certs.iter().filter(|c| !c.disk.certified).map(|c| c.prime).collect();
        let min = certs.iter().map(|c| c.disk.lower_bound).fold(f64::INFINITY, f64::min);
        out["certificate"] = json!({ "uncertified_primes": failing, "min_lower_bound": min, "primes": certs.len() });
    }
    Ok(Outcome::Done(out))
}

fn p3(args: &P3Args) -> Result<Outcome, CliError> {
    let f = load_function(path(&args.f), args.x)?;
    let w: WeightFn = parse_inline("omega", &args.omega)?;
    let d = decompose_p3(&f, &w).map_err(arith_err)?;
    let local: Vec<Value> =
        d.local.iter().map(|(p, a)| json!({ "prime": p, "function": FunctionSpec::from_function(a) })).collect();
    Ok(Outcome::Done(json!({
        "system": f.system().spec(),
        "p0": d.p0,
        "local": local,
        "b": FunctionSpec::from_function(&d.b),
        "h": FunctionSpec::from_function(&d.h),
        "certificates": d.certificates,
    })))
}

fn check_weight(args: &CheckWeightArgs) -> Result<Outcome, CliError> {
    let w: WeightFn = parse_inline("weight", args.weight.as_deref().expect("required"))?;
    let n = args.samples.max(2);
    let samples: Vec<f64> = (0..n).map(|i| args.x_max * i as f64 / (n - 1) as f64).collect();
    let pairs: Vec<(f64, f64)> = samples.iter().flat_map(|&x| samples.iter().step_by(10).map(move |&y| (x, y))).collect();
    let mut out = json!({
        "weight": w,
        "condition_a": w.check_condition_a(&samples),
        "condition_b": w.check_condition_b(args.at, args.max_k, args.tol),
        "submultiplicative": w.check_submultiplicative(&pairs),
    });
    if let Some(theta) = args.theta {
        out["growth"] = to_value(&w.check_growth_bound(theta, &samples));
    }
    Ok(Outcome::Done(out))
}
