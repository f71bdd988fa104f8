//! Declarative scenario files (TOML or JSON) and their validation.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::info_geometry::{Axis, Boundary, DiscreteDistribution, Grid, GridDensity, Tolerances};
use crate::langevin::{Force, LangevinModel};
use crate::linalg::CMatrix;
use crate::markov::MarkovModel;
use crate::non_hermitian::NonHermitianModel;
use crate::quantum::{CompositeSystem, DensityOperator};

/// Input format, chosen from the file extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("toml") => Ok(Format::Toml),
            Some("json") => Ok(Format::Json),
            _ => Err(Error::Config(format!("{}: unknown config format (expected .toml or .json)", path.display()))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawFile {
    #[serde(default)]
    output_dir: Option<String>,
    #[serde(default)]
    scenario: Vec<RawScenario>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKindTag {
    Langevin,
    Markov,
    OpenQuantum,
    NonHermitian,
}

impl ScenarioKindTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKindTag::Langevin => "langevin",
            ScenarioKindTag::Markov => "markov",
            ScenarioKindTag::OpenQuantum => "open_quantum",
            ScenarioKindTag::NonHermitian => "non_hermitian",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    id: String,
    kind: ScenarioKindTag,
    tau: f64,
    dt: f64,
    #[serde(default)]
    t0: Option<f64>,
    #[serde(default)]
    tolerances: Option<Tolerances>,
    #[serde(default)]
    seed: Option<u64>,
    /// Write every n-th sample to the CSV series (default 1).
    #[serde(default)]
    csv_stride: Option<usize>,
    model: Value,
    #[serde(default)]
    initial: Option<Value>,
    #[serde(default)]
    path_fisher: Option<Value>,
}

/// Monte Carlo path-Fisher request attached to a Langevin scenario.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFisherSpec {
    pub trajectories: usize,
    pub dt: f64,
}

/// Fully validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub id: String,
    pub tau: f64,
    pub dt: f64,
    pub t0: Option<f64>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub csv_stride: usize,
    pub model: ScenarioModel,
}

#[derive(Debug, Clone)]
pub enum ScenarioModel {
    Langevin {
        model: LangevinModel,
        initial: GridDensity,
        /// Mass of an analytic initial density that fell outside the grid.
        tail_mass: f64,
        path_fisher: Option<PathFisherSpec>,
    },
    Markov {
        model: MarkovModel,
        initial: DiscreteDistribution,
    },
    OpenQuantum {
        system: CompositeSystem,
    },
    NonHermitian {
        model: NonHermitianModel,
        initial: DensityOperator,
    },
}

impl ScenarioConfig {
    pub fn kind(&self) -> ScenarioKindTag {
        match self.model {
            ScenarioModel::Langevin { .. } => ScenarioKindTag::Langevin,
            ScenarioModel::Markov { .. } => ScenarioKindTag::Markov,
            ScenarioModel::OpenQuantum { .. } => ScenarioKindTag::OpenQuantum,
            ScenarioModel::NonHermitian { .. } => ScenarioKindTag::NonHermitian,
        }
    }
}

/// Parsed file: scenarios plus the optional output directory.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub output_dir: Option<String>,
    pub scenarios: Vec<ScenarioConfig>,
}

/// Parses a config document. Syntax and unknown-field errors carry the
/// parser's line context; semantic errors name the scenario. All semantic
/// errors are collected and reported together.
pub fn parse_config(text: &str, format: Format) -> Result<ConfigFile> {
    let raw: RawFile = match format {
        Format::Toml => toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
    };
    validate(raw)
}

/// Parses a config document into a generic tree (used by parameter sweeps).
pub fn parse_value(text: &str, format: Format) -> Result<Value> {
    match format {
        Format::Toml => toml::from_str(text).map_err(|e| Error::Config(e.to_string())),
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string())),
    }
}

pub fn config_from_value(value: Value) -> Result<ConfigFile> {
    let raw: RawFile = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
    validate(raw)
}

fn validate(raw: RawFile) -> Result<ConfigFile> {
    let mut errors = Vec::new();
    let mut scenarios = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, s) in raw.scenario.into_iter().enumerate() {
        let label = format!("scenario[{i}] (id '{}')", s.id);
        if !seen.insert(s.id.clone()) {
            errors.push(format!("{label}: duplicate id"));
            continue;
        }
        match build_scenario(s) {
            Ok(c) => scenarios.push(c),
            Err(e) => errors.push(format!("{label}: {}", strip_prefix(&e))),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Config(errors.join("\n")));
    }
    Ok(ConfigFile { output_dir: raw.output_dir, scenarios })
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(m) | Error::InvalidModel(m) | Error::InvalidArgument(m) => m.clone(),
        other => other.to_string(),
    }
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn build_scenario(s: RawScenario) -> Result<ScenarioConfig> {
    if s.id.is_empty() || !s.id.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) || s.id.starts_with('.')
    {
        return Err(cfg_err("id must be non-empty and use only [A-Za-z0-9_.-]"));
    }
    if !(s.tau > 0.0) || !s.tau.is_finite() {
        return Err(cfg_err(format!("tau must be > 0, got {}", s.tau)));
    }
    if !(s.dt > 0.0) || !s.dt.is_finite() {
        return Err(cfg_err(format!("dt must be > 0, got {}", s.dt)));
    }
    if s.dt > s.tau {
        return Err(cfg_err(format!("dt = {} exceeds tau = {}", s.dt, s.tau)));
    }
    let uses_t0 = matches!(s.kind, ScenarioKindTag::Langevin | ScenarioKindTag::Markov);
    if let Some(t0) = s.t0 {
        if !uses_t0 {
            return Err(cfg_err(format!("t0 is not used by kind '{}'", s.kind.as_str())));
        }
        if !(t0 >= 0.0) || !(t0 < s.tau) {
            return Err(cfg_err(format!("need 0 ≤ t0 < tau, got t0 = {t0}, tau = {}", s.tau)));
        }
    }
    let tolerances = s.tolerances.unwrap_or_default();
    tolerances.validate().map_err(|e| cfg_err(strip_prefix(&e)))?;
    let csv_stride = s.csv_stride.unwrap_or(1);
    if csv_stride == 0 {
        return Err(cfg_err("csv_stride must be ≥ 1"));
    }
    if s.path_fisher.is_some() && s.kind != ScenarioKindTag::Langevin {
        return Err(cfg_err("path_fisher is only available for kind 'langevin'"));
    }
    let model = match s.kind {
        ScenarioKindTag::Langevin => build_langevin(&s.model, s.initial.as_ref(), s.path_fisher.as_ref())?,
        ScenarioKindTag::Markov => build_markov(&s.model, s.initial.as_ref())?,
        ScenarioKindTag::OpenQuantum => build_quantum(&s.model, s.initial.as_ref())?,
        ScenarioKindTag::NonHermitian => build_nh(&s.model, s.initial.as_ref())?,
    };
    Ok(ScenarioConfig { id: s.id, tau: s.tau, dt: s.dt, t0: s.t0, tolerances, seed: s.seed, csv_stride, model })
}

fn typed<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| cfg_err(format!("{what}: {e}")))
}

/// Splits a model table into preset and explicit forms, rejecting tables that are both.
fn preset_or_explicit<'a>(v: &'a Value, explicit_keys: &[&str], what: &str) -> Result<Option<&'a str>> {
    let obj = v.as_object().ok_or_else(|| cfg_err(format!("{what} must be a table")))?;
    let explicit: Vec<&str> = explicit_keys.iter().copied().filter(|k| obj.contains_key(*k)).collect();
    match obj.get("preset") {
        Some(p) => {
            if !explicit.is_empty() {
                return Err(cfg_err(format!("{what} is ambiguous: both 'preset' and explicit {:?} given", explicit)));
            }
            p.as_str().map(Some).ok_or_else(|| cfg_err(format!("{what}.preset must be a string")))
        }
        None => {
            if explicit.is_empty() {
                return Err(cfg_err(format!("{what} needs either 'preset' or one of {explicit_keys:?}")));
            }
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------- Langevin

#[derive(Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum ForcePreset {
    Ou { k: f64 },
    DoubleWell { a: f64, b: f64 },
    Zero,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitForce {
    coefficients: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LangevinSpec {
    force: Value,
    diffusion: f64,
    grid: Vec<Axis>,
    #[serde(default = "reflecting")]
    boundary: Boundary,
}

fn reflecting() -> Boundary {
    Boundary::Reflecting
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GridInitial {
    Gaussian { mean: Vec<f64>, variance: Vec<f64> },
    Equilibrium,
    Values { values: Vec<f64> },
}

fn build_langevin(model: &Value, initial: Option<&Value>, pf: Option<&Value>) -> Result<ScenarioModel> {
    let spec: LangevinSpec = typed(model, "model")?;
    let force = match preset_or_explicit(&spec.force, &["coefficients"], "model.force")? {
        Some(_) => match typed::<ForcePreset>(&spec.force, "model.force")? {
            ForcePreset::Ou { k } => Force::Ou { k },
            ForcePreset::DoubleWell { a, b } => Force::DoubleWell { a, b },
            ForcePreset::Zero => Force::Zero,
        },
        None => Force::Polynomial(typed::<ExplicitForce>(&spec.force, "model.force")?.coefficients),
    };
    let axes = spec.grid.iter().map(|a| Axis::new(a.lo, a.hi, a.n)).collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(axes)?;
    let lm = LangevinModel::new(force, spec.diffusion, grid.clone(), spec.boundary)?;
    let initial = initial.ok_or_else(|| cfg_err("langevin scenarios need an 'initial' table"))?;
    let (density, tail_mass) = match typed::<GridInitial>(initial, "initial")? {
        GridInitial::Gaussian { mean, variance } => {
            if mean.len() != grid.ndim() || variance.len() != grid.ndim() {
                return Err(cfg_err(format!("initial: mean/variance need {} entries", grid.ndim())));
            }
            if variance.iter().any(|v| !(*v > 0.0)) {
                return Err(cfg_err("initial: variances must be positive"));
            }
            GridDensity::from_fn(grid, spec.boundary, |x| {
                x.iter()
                    .zip(mean.iter().zip(&variance))
                    .map(|(xi, (m, v))| (-(xi - m).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt())
                    .product()
            })?
        }
        GridInitial::Equilibrium => (lm.discrete_equilibrium()?, 0.0),
        GridInitial::Values { values } => (GridDensity::new(grid, spec.boundary, values)?, 0.0),
    };
    let path_fisher = match pf {
        Some(v) => {
            let p: PathFisherSpec = typed(v, "path_fisher")?;
            if p.trajectories < crate::langevin::MIN_TRAJECTORIES {
                return Err(cfg_err(format!(
                    "path_fisher.trajectories must be ≥ {}",
                    crate::langevin::MIN_TRAJECTORIES
                )));
            }
            if !(p.dt > 0.0) {
                return Err(cfg_err("path_fisher.dt must be > 0"));
            }
            Some(p)
        }
        None => None,
    };
    Ok(ScenarioModel::Langevin { model: lm, initial: density, tail_mass, path_fisher })
}

// ---------------------------------------------------------------- Markov

#[derive(Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum MarkovPreset {
    TwoState { k12: f64, k21: f64 },
    Ring { n: usize, forward: f64, backward: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitRates {
    /// Full generator `W`, `W[i][j]` the rate of `j → i`, columns summing to zero.
    rates: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DiscreteInitial {
    Delta { state: usize },
    Probs { probs: Vec<f64> },
    Uniform,
}

fn build_markov(model: &Value, initial: Option<&Value>) -> Result<ScenarioModel> {
    let m = match preset_or_explicit(model, &["rates"], "model")? {
        Some(_) => match typed::<MarkovPreset>(model, "model")? {
            MarkovPreset::TwoState { k12, k21 } => MarkovModel::two_state(k12, k21)?,
            MarkovPreset::Ring { n, forward, backward } => MarkovModel::ring(n, forward, backward)?,
        },
        None => MarkovModel::from_generator(&typed::<ExplicitRates>(model, "model")?.rates)?,
    };
    let initial = initial.ok_or_else(|| cfg_err("markov scenarios need an 'initial' table"))?;
    let p = match typed::<DiscreteInitial>(initial, "initial")? {
        DiscreteInitial::Delta { state } => DiscreteDistribution::delta(m.n(), state)?,
        DiscreteInitial::Probs { probs } => DiscreteDistribution::new(probs)?,
        DiscreteInitial::Uniform => DiscreteDistribution::uniform(m.n()),
    };
    if p.dim() != m.n() {
        return Err(Error::DimensionMismatch { expected: m.n(), got: p.dim() });
    }
    Ok(ScenarioModel::Markov { model: m, initial: p })
}

// ---------------------------------------------------------------- quantum

/// Square complex matrix written as rows of `[re, im]` pairs.
fn complex_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(cfg_err(format!("{what} must be a non-empty square matrix of [re, im] pairs")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum QuantumPreset {
    TwoQubitXx { g: f64 },
    QubitEnv { g: f64, omega_s: f64, omega_e: f64, dim_e: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitComposite {
    h_s: Vec<Vec<[f64; 2]>>,
    h_e: Vec<Vec<[f64; 2]>>,
    h_se: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum OperatorInitial {
    Pure { psi: Vec<[f64; 2]> },
    Matrix { rho: Vec<Vec<[f64; 2]>> },
    Diagonal { probs: Vec<f64> },
    MaximallyMixed,
}

fn build_operator(v: &Value, dim: usize) -> Result<DensityOperator> {
    let rho = match typed::<OperatorInitial>(v, "initial")? {
        OperatorInitial::Pure { psi } => {
            let psi: Vec<Complex64> = psi.iter().map(|z| Complex64::new(z[0], z[1])).collect();
            DensityOperator::pure(&psi)?
        }
        OperatorInitial::Matrix { rho } => DensityOperator::new(complex_matrix(&rho, "initial.rho")?)?,
        OperatorInitial::Diagonal { probs } => DensityOperator::from_diagonal(&probs)?,
        OperatorInitial::MaximallyMixed => DensityOperator::maximally_mixed(dim),
    };
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rho.dim() });
    }
    Ok(rho)
}

fn build_quantum(model: &Value, initial: Option<&Value>) -> Result<ScenarioModel> {
    let system = match preset_or_explicit(model, &["h_s", "h_e", "h_se"], "model")? {
        Some(_) => {
            let sys = match typed::<QuantumPreset>(model, "model")? {
                QuantumPreset::TwoQubitXx { g } => CompositeSystem::two_qubit_xx(g)?,
                QuantumPreset::QubitEnv { g, omega_s, omega_e, dim_e } => {
                    if dim_e > 16 {
                        return Err(cfg_err(format!("dim_e = {dim_e} exceeds the supported 16")));
                    }
                    CompositeSystem::qubit_env(g, omega_s, omega_e, dim_e)?
                }
            };
            match initial {
                Some(v) => {
                    let n = sys.dim_s() * sys.dim_e();
                    sys.with_state(build_operator(v, n)?)?
                }
                None => sys,
            }
        }
        None => {
            let e: ExplicitComposite = typed(model, "model")?;
            let (hs, he, hse) = (
                complex_matrix(&e.h_s, "model.h_s")?,
                complex_matrix(&e.h_e, "model.h_e")?,
                complex_matrix(&e.h_se, "model.h_se")?,
            );
            let n = hs.nrows() * he.nrows();
            let v = initial.ok_or_else(|| cfg_err("explicit open_quantum models need an 'initial' state"))?;
            CompositeSystem::new(hs, he, hse, build_operator(v, n)?)?
        }
    };
    Ok(ScenarioModel::OpenQuantum { system })
}

#[derive(Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum NhPreset {
    DiagDecay { g: f64 },
    PtLike { omega: f64, g: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitNh {
    matrix: Vec<Vec<[f64; 2]>>,
}

fn build_nh(model: &Value, initial: Option<&Value>) -> Result<ScenarioModel> {
    let m = match preset_or_explicit(model, &["matrix"], "model")? {
        Some(_) => match typed::<NhPreset>(model, "model")? {
            NhPreset::DiagDecay { g } => NonHermitianModel::diag_decay(g)?,
            NhPreset::PtLike { omega, g } => NonHermitianModel::pt_like(omega, g)?,
        },
        None => NonHermitianModel::new(complex_matrix(&typed::<ExplicitNh>(model, "model")?.matrix, "model.matrix")?)?,
    };
    let initial = match initial {
        Some(v) => build_operator(v, m.dim())?,
        None => DensityOperator::maximally_mixed(m.dim()),
    };
    Ok(ScenarioModel::NonHermitian { model: m, initial })
}

/// Human-readable preset catalogue for `tfi list-presets`.
pub fn preset_catalogue() -> &'static str {
    "\
langevin (model.force):
  ou            k            F(x) = -k x
  double_well   a, b         F(x) = -a x^3 + b x
  zero                       F(x) = 0
  (explicit)    coefficients F(x) = sum_n c_n x^n
  initial kinds: gaussian{mean, variance}, equilibrium, values{values}
markov (model):
  two_state     k12, k21     k12 = rate 1->2, k21 = rate 2->1
  ring          n, forward, backward
  (explicit)    rates        full generator W[i][j] = rate j->i, columns sum to 0
  initial kinds: delta{state}, probs{probs}, uniform
open_quantum (model):
  two_qubit_xx  g            H_SE = g sx(x)sx, start |00>
  qubit_env     g, omega_s, omega_e, dim_e
                             H_S = omega_s sz/2, H_E = omega_e diag(0..dim_e-1),
                             H_SE = g sx(x)(a + a^dag), start |0>|0>
  (explicit)    h_s, h_e, h_se   rows of [re, im] pairs; needs initial
  initial kinds: pure{psi}, matrix{rho}, diagonal{probs}, maximally_mixed
non_hermitian (model):
  diag_decay    g            H = -i diag(0, g)
  pt_like       omega, g     H = omega sx - i g (I - sz)/2
  (explicit)    matrix       rows of [re, im] pairs
  initial kinds: as open_quantum (default maximally_mixed)
"
}

#[cfg(test)]
mod tests {
    use super::*;

    const MARKOV: &str = r#"
[[scenario]]
id = "two_state"
kind = "markov"
tau = 2.0
dt = 1e-3
model = { preset = "two_state", k12 = 1.0, k21 = 1.0 }
initial = { kind = "delta", state = 0 }
"#;

    #[test]
    fn minimal_markov_config() {
        let c = parse_config(MARKOV, Format::Toml).unwrap();
        assert_eq!(c.scenarios.len(), 1);
        assert_eq!(c.scenarios[0].kind(), ScenarioKindTag::Markov);
    }

    #[test]
    fn empty_config() {
        assert!(parse_config("", Format::Toml).unwrap().scenarios.is_empty());
        assert!(parse_config("{}", Format::Json).unwrap().scenarios.is_empty());
    }

    #[test]
    fn rejects_zero_tau() {
        let e = parse_config(&MARKOV.replace("tau = 2.0", "tau = 0.0"), Format::Toml).unwrap_err();
        assert!(e.to_string().contains("tau must be > 0"), "{e}");
    }

    #[test]
    fn rejects_ambiguous_model() {
        let text = MARKOV.replace("k21 = 1.0 }", "k21 = 1.0, rates = [[-1.0, 1.0], [1.0, -1.0]] }");
        let e = parse_config(&text, Format::Toml).unwrap_err();
        assert!(e.to_string().contains("ambiguous"), "{e}");
    }

    #[test]
    fn rejects_unknown_fields_with_line_context() {
        let e = parse_config(&MARKOV.replace("dt = 1e-3", "dt = 1e-3\nbogus = 1"), Format::Toml).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains("line"), "{msg}");
        let e = parse_config(&MARKOV.replace("k21 = 1.0", "k21 = 1.0, extra = 2"), Format::Toml).unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
    }

    #[test]
    fn collects_all_errors() {
        let bad1 = MARKOV.replace("tau = 2.0", "tau = -2.0");
        let bad2 = MARKOV.replace("id = \"two_state\"", "id = \"other\"").replace("dt = 1e-3", "dt = -1.0");
        let e = parse_config(&format!("{bad1}\n{bad2}"), Format::Toml).unwrap_err().to_string();
        assert_eq!(e.lines().count(), 2, "{e}");
        assert!(e.contains("scenario[0]") && e.contains("scenario[1]"));
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(parse_config(&MARKOV.replace("\"markov\"", "\"lindblad\""), Format::Toml).is_err());
    }

    #[test]
    fn json_and_explicit_models() {
        let text = r#"{"scenario": [
          {"id": "nh", "kind": "non_hermitian", "tau": 1, "dt": 0.001,
           "model": {"matrix": [[[0,0],[0,0]],[[0,0],[0,-1]]]}},
          {"id": "q", "kind": "open_quantum", "tau": 1, "dt": 0.01,
           "model": {"h_s": [[[0,0],[0,0]],[[0,0],[0,0]]], "h_e": [[[0,0],[0,0]],[[0,0],[0,0]]],
                     "h_se": [[[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[1,0],[0,0],[0,0],[0,0]]]},
           "initial": {"kind": "pure", "psi": [[1,0],[0,0],[0,0],[0,0]]}},
          {"id": "l", "kind": "langevin", "tau": 0.1, "dt": 1e-4, "seed": 3,
           "model": {"force": {"coefficients": [0.0, -1.0]}, "diffusion": 1.0, "grid": [{"lo": -6, "hi": 6, "n": 120}]},
           "initial": {"kind": "gaussian", "mean": [0.0], "variance": [0.25]},
           "path_fisher": {"trajectories": 1000, "dt": 0.01}}
        ]}"#;
        let c = parse_config(text, Format::Json).unwrap();
        assert_eq!(c.scenarios.len(), 3);
    }

    #[test]
    fn t0_only_for_classical_kinds() {
        let text = r#"
[[scenario]]
id = "nh"
kind = "non_hermitian"
tau = 1.0
dt = 1e-3
t0 = 0.1
model = { preset = "diag_decay", g = 1.0 }
"#;
        assert!(parse_config(text, Format::Toml).is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a/b.TOML")).unwrap(), Format::Toml);
        assert_eq!(Format::from_path(Path::new("x.json")).unwrap(), Format::Json);
        assert!(Format::from_path(Path::new("x.yaml")).is_err());
    }
}
