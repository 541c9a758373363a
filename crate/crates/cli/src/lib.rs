//! Command implementations behind the `qembed` binary.
//!
//! Every command is a plain function so tests can drive it without a
//! subprocess; `main.rs` only parses arguments and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qembed::classifiers::{score_all, ClassEnsembles, ClassifierKind, Label};
use qembed::metrics::{hs_distance, trace_distance, HsTerms};
use qembed::{
    capacity, embed_all, empirical_risk, gen_bands1d, gen_moons, predict, train, CapacityParams,
    CostKind, Dataset64, EmbeddingSpec, FeatureScaling, OptimizerKind, ParamVector64,
    TrainConfig64, TrainedEmbedding64,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense simulation guard.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: arguments, config, files.
    #[error("{0}")]
    User(String),
    /// A failure that valid input should never trigger.
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<qembed::Error> for CliError {
    fn from(e: qembed::Error) -> Self {
        use qembed::Error as E;
        match e {
            E::NotNormalized(_) | E::InvalidDensityMatrix(_) => CliError::Internal(e.to_string()),
            other => CliError::User(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn user(msg: impl Into<String>) -> CliError {
    CliError::User(msg.into())
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    user(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn load_dataset(path: &Path) -> CliResult<Dataset64> {
    if !path.exists() {
        return Err(user(format!("dataset not found: {}", path.display())));
    }
    Ok(Dataset64::load(path)?)
}

/// Classifier names as they appear on the command line and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierArg {
    Fidelity,
    HelstromGlobal,
    HelstromPairwise,
}

impl From<ClassifierArg> for ClassifierKind {
    fn from(c: ClassifierArg) -> Self {
        match c {
            ClassifierArg::Fidelity => ClassifierKind::Fidelity,
            ClassifierArg::HelstromGlobal => ClassifierKind::HelstromGlobal,
            ClassifierArg::HelstromPairwise => ClassifierKind::HelstromPairwise,
        }
    }
}

// ---------------------------------------------------------------- gen-data

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DatasetKind {
    Moons,
    Bands1d,
}

pub fn cmd_gen_data(
    kind: DatasetKind,
    n_per_class: usize,
    noise: f64,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let data = match kind {
        DatasetKind::Moons => gen_moons(n_per_class, noise, seed)?,
        DatasetKind::Bands1d => gen_bands1d(n_per_class, seed)?,
    };
    data.save(out)?;
    Ok(())
}

// ------------------------------------------------------------------- train

fn default_lr() -> f64 {
    0.01
}
fn default_init_scale() -> f64 {
    qembed::embedding::DEFAULT_INIT_SCALE
}
fn default_cost() -> CostKind {
    CostKind::HilbertSchmidt
}
fn default_optimizer() -> OptimizerKind {
    OptimizerKind::RmsProp
}
fn default_classifier() -> ClassifierArg {
    ClassifierArg::Fidelity
}

/// JSON run configuration for `train`. Relative paths resolve against the
/// directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_qubits: usize,
    pub n_features: usize,
    pub n_layers: usize,
    #[serde(default = "default_cost")]
    pub cost: CostKind,
    #[serde(default = "default_optimizer")]
    pub optimizer: OptimizerKind,
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    pub batch_size: usize,
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub shots: u64,
    #[serde(default = "default_init_scale")]
    pub init_scale: f64,
    pub dataset: PathBuf,
    #[serde(default = "default_classifier")]
    pub classifier: ClassifierArg,
    pub output_dir: PathBuf,
    /// Standardize each feature to mean 0, std 1 using the training data.
    #[serde(default)]
    pub standardize: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| user(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        cfg.dataset = base.join(&cfg.dataset);
        cfg.output_dir = base.join(&cfg.output_dir);
        Ok(cfg)
    }

    pub fn spec(&self) -> CliResult<EmbeddingSpec> {
        check_qubit_cap(self.n_qubits)?;
        Ok(EmbeddingSpec::new(
            self.n_qubits,
            self.n_features,
            self.n_layers,
        )?)
    }

    pub fn train_config(&self) -> CliResult<TrainConfig64> {
        Ok(TrainConfig64 {
            spec: self.spec()?,
            cost: self.cost,
            optimizer: self.optimizer,
            learning_rate: self.learning_rate,
            batch_size: self.batch_size,
            steps: self.steps,
            seed: self.seed,
            shots: self.shots,
            init_scale: self.init_scale,
        })
    }
}

fn check_qubit_cap(n: usize) -> CliResult<()> {
    if n > MAX_QUBITS {
        return Err(user(format!(
            "n_qubits = {n} exceeds the simulator cap of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub const THETA_FILE: &str = "theta.json";
pub const HISTORY_FILE: &str = "history.csv";

#[derive(Debug, Clone)]
pub struct TrainSummary {
    pub final_cost: f64,
    pub theta_path: PathBuf,
    pub history_path: PathBuf,
}

pub fn theta_json(embedding: &TrainedEmbedding64) -> CliResult<String> {
    let mut s =
        serde_json::to_string_pretty(embedding).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn load_theta(path: &Path) -> CliResult<TrainedEmbedding64> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let t: TrainedEmbedding64 =
        serde_json::from_str(&text).map_err(|e| user(format!("{}: {e}", path.display())))?;
    check_qubit_cap(t.n_qubits)?;
    t.parts()?;
    Ok(t)
}

pub fn history_csv(history: &[(usize, f64)]) -> String {
    let mut s = String::from("step,cost\n");
    for (step, c) in history {
        let _ = writeln!(s, "{step},{c}");
    }
    s
}

pub fn cmd_train(config_path: &Path, out: &mut dyn Write) -> CliResult<TrainSummary> {
    let cfg = RunConfig::load(config_path)?;
    let train_cfg = cfg.train_config()?;
    let raw = load_dataset(&cfg.dataset)?;
    let scaling = if cfg.standardize {
        Some(FeatureScaling::fit(raw.inputs())?)
    } else {
        None
    };
    let data = match &scaling {
        Some(s) => raw.map_inputs(|x| s.apply(x))?,
        None => raw,
    };
    let result = train(&data, &train_cfg)?;

    fs::create_dir_all(&cfg.output_dir).map_err(|e| io_err(&cfg.output_dir, e))?;
    let mut embedding = TrainedEmbedding64::new(train_cfg.spec, result.theta_final.clone());
    embedding.feature_scaling = scaling;
    let theta_path = cfg.output_dir.join(THETA_FILE);
    let history_path = cfg.output_dir.join(HISTORY_FILE);
    write_file(&theta_path, &theta_json(&embedding)?)?;
    write_file(&history_path, &history_csv(&result.cost_history))?;

    let kind: ClassifierKind = cfg.classifier.into();
    let ens = ensembles(&train_cfg.spec, &result.theta_final, &data)?;
    let states = embed_all(&train_cfg.spec, &result.theta_final, data.inputs())?;
    let scores = score_all(kind, &states, &ens, 0, 0)?;
    let accuracy = accuracy(&scores, data.labels());

    let w = |out: &mut dyn Write, s: String| {
        out.write_all(s.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string()))
    };
    w(out, format!("final_cost: {}\n", result.final_cost))?;
    w(out, format!("train_accuracy ({:?}): {accuracy}\n", kind))?;
    w(out, format!("theta: {}\n", theta_path.display()))?;
    w(out, format!("history: {}\n", history_path.display()))?;
    Ok(TrainSummary {
        final_cost: result.final_cost,
        theta_path,
        history_path,
    })
}

// -------------------------------------------------------------------- eval

fn ensembles(
    spec: &EmbeddingSpec,
    theta: &ParamVector64,
    data: &Dataset64,
) -> CliResult<ClassEnsembles<f64>> {
    let a = embed_all(spec, theta, &data.inputs_of(Label::A))?;
    let b = embed_all(spec, theta, &data.inputs_of(Label::B))?;
    Ok(ClassEnsembles::new(a, b)?)
}

fn accuracy(scores: &[f64], labels: &[Label]) -> f64 {
    let correct = scores
        .iter()
        .zip(labels)
        .filter(|(s, l)| predict(**s, 0.0).label == **l)
        .count();
    correct as f64 / labels.len() as f64
}

/// Loaded model: spec, parameters, optional scaling, and training ensembles.
struct Model {
    spec: EmbeddingSpec,
    theta: ParamVector64,
    scaling: Option<FeatureScaling<f64>>,
    ensembles: ClassEnsembles<f64>,
}

impl Model {
    fn load(theta_path: &Path, train_path: &Path) -> CliResult<Self> {
        let trained = load_theta(theta_path)?;
        let (spec, theta) = trained.parts()?;
        let scaling = trained.feature_scaling.clone();
        let train = load_dataset(train_path)?;
        if train.n_features() != spec.n_features {
            return Err(user(format!(
                "{} has {} features, the embedding expects {}",
                train_path.display(),
                train.n_features(),
                spec.n_features
            )));
        }
        let train = scale_dataset(&scaling, train)?;
        let ensembles = ensembles(&spec, &theta, &train)?;
        Ok(Self {
            spec,
            theta,
            scaling,
            ensembles,
        })
    }

    fn prepare(&self, x: &[f64]) -> Vec<f64> {
        match &self.scaling {
            Some(s) => s.apply(x),
            None => x.to_vec(),
        }
    }

    fn scores(
        &self,
        inputs: &[Vec<f64>],
        kind: ClassifierKind,
        shots: u64,
        seed: u64,
    ) -> CliResult<Vec<f64>> {
        let prepared: Vec<Vec<f64>> = inputs.iter().map(|x| self.prepare(x)).collect();
        let states = embed_all(&self.spec, &self.theta, &prepared)?;
        Ok(score_all(kind, &states, &self.ensembles, shots, seed)?)
    }
}

fn scale_dataset(scaling: &Option<FeatureScaling<f64>>, data: Dataset64) -> CliResult<Dataset64> {
    Ok(match scaling {
        Some(s) => data.map_inputs(|x| s.apply(x))?,
        None => data,
    })
}

/// Numbers printed by `eval`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    pub empirical_risk: f64,
    pub purity_a: f64,
    pub purity_b: f64,
    pub overlap_ab: f64,
    pub hs_distance: f64,
    pub trace_distance: f64,
}

impl EvalReport {
    pub fn render(&self) -> String {
        format!(
            "accuracy: {}\nempirical_risk: {}\ntr_rho2: {}\ntr_sigma2: {}\ntr_rho_sigma: {}\nhs_distance: {}\ntrace_distance: {}\n",
            self.accuracy,
            self.empirical_risk,
            self.purity_a,
            self.purity_b,
            self.overlap_ab,
            self.hs_distance,
            self.trace_distance
        )
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_eval(
    theta_path: &Path,
    train_path: &Path,
    eval_path: &Path,
    classifier: ClassifierKind,
    shots: u64,
    seed: u64,
    scores_out: &Path,
    out: &mut dyn Write,
) -> CliResult<EvalReport> {
    if shots > 0 && classifier != ClassifierKind::Fidelity {
        return Err(user(
            "shots are only supported with the fidelity classifier",
        ));
    }
    let model = Model::load(theta_path, train_path)?;
    let eval = load_dataset(eval_path)?;
    if eval.n_features() != model.spec.n_features {
        return Err(user(format!(
            "{} has {} features, the embedding expects {}",
            eval_path.display(),
            eval.n_features(),
            model.spec.n_features
        )));
    }
    let scores = model.scores(eval.inputs(), classifier, shots, seed)?;
    let (rho, sigma) = (model.ensembles.rho(), model.ensembles.sigma());
    let terms = HsTerms::from_densities(rho, sigma)?;
    let report = EvalReport {
        accuracy: accuracy(&scores, eval.labels()),
        empirical_risk: empirical_risk(&scores, eval.labels())?,
        purity_a: terms.purity_a,
        purity_b: terms.purity_b,
        overlap_ab: terms.cross,
        hs_distance: hs_distance(rho, sigma)?,
        trace_distance: trace_distance(rho, sigma)?,
    };

    let mut csv = String::new();
    for i in 1..=eval.n_features() {
        let _ = write!(csv, "x{i},");
    }
    csv.push_str("label,score,prediction\n");
    for ((x, l), s) in eval.inputs().iter().zip(eval.labels()).zip(&scores) {
        for v in x {
            let _ = write!(csv, "{v},");
        }
        let _ = writeln!(csv, "{},{s},{}", l.sign(), predict(*s, 0.0).label.sign());
    }
    write_file(scores_out, &csv)?;
    out.write_all(report.render().as_bytes())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(report)
}

// ---------------------------------------------------------------- boundary

/// Regular grid `xmin,xmax,ymin,ymax,steps` with `steps` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub steps: usize,
}

impl FromStr for Grid {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(user(format!(
                "grid must be xmin,xmax,ymin,ymax,steps (got {s:?})"
            )));
        }
        let num = |i: usize| -> CliResult<f64> {
            parts[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| user(format!("bad grid bound {:?}", parts[i])))
        };
        let steps: usize = parts[4]
            .parse()
            .map_err(|_| user(format!("bad grid steps {:?}", parts[4])))?;
        if steps == 0 {
            return Err(user("grid steps must be >= 1"));
        }
        Ok(Self {
            xmin: num(0)?,
            xmax: num(1)?,
            ymin: num(2)?,
            ymax: num(3)?,
            steps,
        })
    }
}

impl Grid {
    fn axis(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![lo];
        }
        (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()
    }

    /// Points in row-major order: `x1` outer, `x2` inner.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let ys = Self::axis(self.ymin, self.ymax, self.steps);
        Self::axis(self.xmin, self.xmax, self.steps)
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| vec![x, y]))
            .collect()
    }
}

pub fn cmd_boundary(
    theta_path: &Path,
    train_path: &Path,
    classifier: ClassifierKind,
    grid: &Grid,
    grid_out: &Path,
) -> CliResult<Vec<(f64, f64, f64)>> {
    let model = Model::load(theta_path, train_path)?;
    if model.spec.n_features != 2 {
        return Err(user(format!(
            "boundary export needs a 2-feature embedding (this one has {})",
            model.spec.n_features
        )));
    }
    let points = grid.points();
    let scores = model.scores(&points, classifier, 0, 0)?;
    let mut csv = String::from("x1,x2,score\n");
    let mut rows = Vec::with_capacity(points.len());
    for (p, s) in points.iter().zip(&scores) {
        let _ = writeln!(csv, "{},{},{s}", p[0], p[1]);
        rows.push((p[0], p[1], *s));
    }
    write_file(grid_out, &csv)?;
    Ok(rows)
}

// ---------------------------------------------------------------- capacity

pub fn cmd_capacity(bandwidth_hz: f64, coherence_s: f64, qubits: u64, bits: u64) -> CliResult<f64> {
    Ok(capacity(&CapacityParams {
        bandwidth_hz,
        coherence_s,
        n_qubits: qubits,
        bits_per_sample: bits,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "-1,2,-0.5,1,3".parse().unwrap();
        assert_eq!(g.steps, 3);
        assert_eq!(g.points().len(), 9);
        assert_eq!(g.points()[0], vec![-1.0, -0.5]);
        assert_eq!(g.points()[8], vec![2.0, 1.0]);
        assert!("1,2,3".parse::<Grid>().is_err());
        assert!("0,1,0,1,0".parse::<Grid>().is_err());
        assert!("0,x,0,1,2".parse::<Grid>().is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        fs::write(
            &p,
            r#"{"n_qubits":1,"n_features":1,"n_layers":1,"batch_size":1,"steps":1,
                "dataset":"d.csv","output_dir":"out","bogus":1}"#,
        )
        .unwrap();
        let err = RunConfig::load(&p).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn config_paths_are_relative_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        fs::write(
            &p,
            r#"{"n_qubits":13,"n_features":1,"n_layers":1,"batch_size":1,"steps":1,
                "dataset":"d.csv","output_dir":"out","cost":"trace_distance","optimizer":"adagrad",
                "classifier":"helstrom-global"}"#,
        )
        .unwrap();
        let cfg = RunConfig::load(&p).unwrap();
        assert_eq!(cfg.dataset, dir.path().join("d.csv"));
        assert_eq!(cfg.output_dir, dir.path().join("out"));
        assert_eq!(cfg.cost, CostKind::TraceDistance);
        assert_eq!(cfg.optimizer, OptimizerKind::Adagrad);
        assert_eq!(cfg.classifier, ClassifierArg::HelstromGlobal);
        assert!(cfg.spec().is_err(), "13 qubits exceeds the cap");
    }

    #[test]
    fn history_format() {
        assert_eq!(
            history_csv(&[(0, 0.5), (1, 0.25)]),
            "step,cost\n0,0.5\n1,0.25\n"
        );
    }
}
