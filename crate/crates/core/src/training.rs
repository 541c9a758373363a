//! Embedding training against a Hilbert-Schmidt or trace-distance cost.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::embedding::{embed_all, init_params, EmbeddingSpec, ParamVector};
use crate::error::{Error, Result};
use crate::metrics::{
    assemble_hs_terms, ensemble_densities, inversion_test, trace_distance, HsTerms,
};
use crate::rng::{derive_seed, substream};
use crate::scalar::Real;
use crate::simulator::StateVector;

/// Which ensemble distance the embedding is trained to maximize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    /// `C = 1 - D_hs / 2`
    HilbertSchmidt,
    /// `C = 1 - D_tr`
    TraceDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    #[serde(rename = "rmsprop")]
    RmsProp,
    Adagrad,
    Sgd,
}

pub const RMSPROP_DECAY: f64 = 0.99;
pub const OPTIMIZER_EPS: f64 = 1e-8;
/// Central-difference step for exact-mode finite differences.
pub const FD_STEP_EXACT: f64 = 1e-4;
/// Central-difference step when the cost is shot-noise limited.
pub const FD_STEP_SHOTS: f64 = 0.1;

/// Optimizer accumulator (`v` for RMSProp, `G` for Adagrad; unused by SGD).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState<T> {
    pub kind: OptimizerKind,
    pub accumulator: Vec<T>,
}

impl<T: Real> OptimizerState<T> {
    pub fn new(kind: OptimizerKind, n_params: usize) -> Self {
        Self {
            kind,
            accumulator: vec![T::zero(); n_params],
        }
    }
}

/// One update. Returns the new parameters and accumulator.
pub fn optimizer_step<T: Real>(
    state: &OptimizerState<T>,
    theta: &ParamVector<T>,
    grad: &[T],
    lr: T,
) -> Result<(ParamVector<T>, OptimizerState<T>)> {
    let n = theta.len();
    if grad.len() != n || state.accumulator.len() != n {
        return Err(Error::LengthMismatch {
            what: "gradient",
            expected: n,
            actual: if grad.len() != n {
                grad.len()
            } else {
                state.accumulator.len()
            },
        });
    }
    let eps = T::of(OPTIMIZER_EPS);
    let mut acc = state.accumulator.clone();
    let mut next = theta.0.clone();
    for i in 0..n {
        let g = grad[i];
        let step = match state.kind {
            OptimizerKind::Sgd => lr * g,
            OptimizerKind::RmsProp => {
                let decay = T::of(RMSPROP_DECAY);
                acc[i] = decay * acc[i] + (T::one() - decay) * g * g;
                lr * g / (acc[i].sqrt() + eps)
            }
            OptimizerKind::Adagrad => {
                acc[i] += g * g;
                lr * g / (acc[i].sqrt() + eps)
            }
        };
        next[i] -= step;
    }
    Ok((
        ParamVector(next),
        OptimizerState {
            kind: state.kind,
            accumulator: acc,
        },
    ))
}

fn check_batches<T, X: AsRef<[T]>>(batch_a: &[X], batch_b: &[X]) -> Result<()> {
    if batch_a.is_empty() || batch_b.is_empty() {
        return Err(Error::Empty("training batch"));
    }
    Ok(())
}

/// Cost of already-embedded exact states.
pub fn cost_of_states<T: Real>(
    states_a: &[StateVector<T>],
    states_b: &[StateVector<T>],
    kind: CostKind,
) -> Result<T> {
    match kind {
        CostKind::HilbertSchmidt => {
            let terms = gram_terms(states_a, states_b)?;
            Ok(hs_cost(&terms))
        }
        CostKind::TraceDistance => {
            let (rho, sigma) = ensemble_densities(states_a, states_b)?;
            Ok(T::one() - trace_distance(&rho, &sigma)?)
        }
    }
}

fn hs_cost<T: Real>(terms: &HsTerms<T>) -> T {
    let c = T::one() - T::of(0.5) * terms.hs_distance();
    c.max(T::zero()).min(T::one())
}

fn gram_terms<T: Real>(
    states_a: &[StateVector<T>],
    states_b: &[StateVector<T>],
) -> Result<HsTerms<T>> {
    let n_a = states_a.len();
    let get = |i: usize| {
        if i < n_a {
            &states_a[i]
        } else {
            &states_b[i - n_a]
        }
    };
    assemble_hs_terms(n_a, states_b.len(), |i, j| {
        Ok(get(i).inner(get(j))?.norm_sqr())
    })
}

/// Training cost of a batch pair: `1 - D_hs/2` or `1 - D_tr`, in `[0, 1]`.
///
/// With `shots > 0` (Hilbert-Schmidt only) every pairwise overlap is an
/// inversion-test estimate with `shots` shots.
pub fn cost<T: Real, X: AsRef<[T]>>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    batch_a: &[X],
    batch_b: &[X],
    kind: CostKind,
    shots: u64,
    seed: u64,
) -> Result<T> {
    check_batches(batch_a, batch_b)?;
    if shots == 0 {
        let sa = embed_all(spec, theta, batch_a)?;
        let sb = embed_all(spec, theta, batch_b)?;
        return cost_of_states(&sa, &sb, kind);
    }
    if kind == CostKind::TraceDistance {
        return Err(Error::InvalidArgument(
            "trace-distance cost is only available in exact mode (shots = 0)".into(),
        ));
    }
    let n_a = batch_a.len();
    let n = n_a + batch_b.len();
    let get = |i: usize| {
        if i < n_a {
            batch_a[i].as_ref()
        } else {
            batch_b[i - n_a].as_ref()
        }
    };
    let terms = assemble_hs_terms(n_a, batch_b.len(), |i, j| {
        let pair_seed = derive_seed(seed, (i * n + j) as u64);
        Ok(inversion_test(spec, theta, get(i), get(j), shots, pair_seed)?.value)
    })?;
    Ok(hs_cost(&terms))
}

/// Exact gradient of the Hilbert-Schmidt cost by the two-point shift rule.
///
/// Every angle enters each embedding circuit through one gate
/// `exp(-i theta G / 2)` with `G^2 = I`, so each overlap is shifted once per
/// circuit copy and the copies' contributions are summed.
pub fn gradient_param_shift<T: Real, X: AsRef<[T]>>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    batch_a: &[X],
    batch_b: &[X],
) -> Result<Vec<T>> {
    check_batches(batch_a, batch_b)?;
    let inputs: Vec<&[T]> = batch_a.iter().chain(batch_b).map(|x| x.as_ref()).collect();
    let states = embed_all(spec, theta, &inputs)?;
    let (n_a, n_b) = (batch_a.len(), batch_b.len());
    let (ma, mb) = (T::of(n_a as f64), T::of(n_b as f64));
    let two = T::of(2.0);
    // D_hs = const + sum_{i<j} w_ij F_ij
    let weight = |i: usize, j: usize| match (i < n_a, j < n_a) {
        (true, true) => two / (ma * ma),
        (false, false) => two / (mb * mb),
        _ => -two / (ma * mb),
    };
    let shift = T::FRAC_PI_2();
    let half = T::of(0.5);
    let mut grad = vec![T::zero(); theta.len()];
    for (p, g) in grad.iter_mut().enumerate() {
        let plus = theta.shifted(p, shift);
        let minus = theta.shifted(p, -shift);
        let mut d_hs = T::zero();
        for (k, x) in inputs.iter().enumerate() {
            let sp = crate::embedding::embed(spec, &plus, x)?;
            let sm = crate::embedding::embed(spec, &minus, x)?;
            for (j, other) in states.iter().enumerate() {
                if j == k {
                    continue;
                }
                let fp = sp.inner(other)?.norm_sqr();
                let fm = sm.inner(other)?.norm_sqr();
                d_hs += weight(k.min(j), k.max(j)) * half * (fp - fm);
            }
        }
        *g = -half * d_hs;
    }
    Ok(grad)
}

/// Central differences `[C(theta + h e_i) - C(theta - h e_i)] / 2h` in exact mode.
pub fn gradient_finite_diff<T: Real, X: AsRef<[T]>>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    batch_a: &[X],
    batch_b: &[X],
    kind: CostKind,
    h: T,
) -> Result<Vec<T>> {
    gradient_finite_diff_sampled(spec, theta, batch_a, batch_b, kind, h, 0, 0)
}

/// Central differences with a sampled cost; both sides of each difference
/// share one seed.
#[allow(clippy::too_many_arguments)]
pub fn gradient_finite_diff_sampled<T: Real, X: AsRef<[T]>>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    batch_a: &[X],
    batch_b: &[X],
    kind: CostKind,
    h: T,
    shots: u64,
    seed: u64,
) -> Result<Vec<T>> {
    if h.is_nan() || h <= T::zero() {
        return Err(Error::InvalidArgument(
            "finite-difference step must be > 0".into(),
        ));
    }
    check_batches(batch_a, batch_b)?;
    (0..theta.len())
        .map(|i| {
            let s = derive_seed(seed, i as u64);
            let up = cost(spec, &theta.shifted(i, h), batch_a, batch_b, kind, shots, s)?;
            let down = cost(
                spec,
                &theta.shifted(i, -h),
                batch_a,
                batch_b,
                kind,
                shots,
                s,
            )?;
            Ok((up - down) / (T::of(2.0) * h))
        })
        .collect()
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TrainConfig<T> {
    pub spec: EmbeddingSpec,
    pub cost: CostKind,
    pub optimizer: OptimizerKind,
    pub learning_rate: T,
    /// Inputs drawn per class per step.
    pub batch_size: usize,
    pub steps: usize,
    pub seed: u64,
    /// 0 trains on exact overlaps.
    pub shots: u64,
    pub init_scale: T,
}

impl<T: Real> TrainConfig<T> {
    /// Exact-mode defaults: RMSProp, Hilbert-Schmidt cost, init scale 0.1.
    pub fn new(spec: EmbeddingSpec) -> Self {
        Self {
            spec,
            cost: CostKind::HilbertSchmidt,
            optimizer: OptimizerKind::RmsProp,
            learning_rate: T::of(0.01),
            batch_size: 2,
            steps: 100,
            seed: 0,
            shots: 0,
            init_scale: T::of(crate::embedding::DEFAULT_INIT_SCALE),
        }
    }

    pub fn validate(&self, dataset: &Dataset<T>) -> Result<()> {
        self.spec.validate()?;
        if dataset.n_features() != self.spec.n_features {
            return Err(Error::LengthMismatch {
                what: "dataset features",
                expected: self.spec.n_features,
                actual: dataset.n_features(),
            });
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= T::zero() {
            return Err(Error::InvalidArgument("learning rate must be > 0".into()));
        }
        if self.init_scale.is_nan() || self.init_scale <= T::zero() {
            return Err(Error::InvalidArgument("init scale must be > 0".into()));
        }
        let smallest = dataset.count_a().min(dataset.count_b());
        if self.batch_size == 0 || self.batch_size > smallest {
            return Err(Error::InvalidArgument(format!(
                "batch size must lie in 1..={smallest} (got {})",
                self.batch_size
            )));
        }
        if self.shots > 0 && self.cost == CostKind::TraceDistance {
            return Err(Error::InvalidArgument(
                "trace-distance training requires shots = 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult<T> {
    pub theta_final: ParamVector<T>,
    /// `(step, batch cost before the update)`, one entry per step.
    pub cost_history: Vec<(usize, T)>,
    /// Exact cost of the final parameters on the whole dataset.
    pub final_cost: T,
    pub config: TrainConfig<T>,
}

/// Gradient for one batch under the configured cost and noise model.
fn batch_gradient<T: Real>(
    config: &TrainConfig<T>,
    theta: &ParamVector<T>,
    batch_a: &[&[T]],
    batch_b: &[&[T]],
    seed: u64,
) -> Result<Vec<T>> {
    let spec = &config.spec;
    if config.shots > 0 {
        return gradient_finite_diff_sampled(
            spec,
            theta,
            batch_a,
            batch_b,
            config.cost,
            T::of(FD_STEP_SHOTS),
            config.shots,
            seed,
        );
    }
    match config.cost {
        CostKind::HilbertSchmidt => gradient_param_shift(spec, theta, batch_a, batch_b),
        CostKind::TraceDistance => gradient_finite_diff(
            spec,
            theta,
            batch_a,
            batch_b,
            config.cost,
            T::of(FD_STEP_EXACT),
        ),
    }
}

/// `size` distinct rows, uniformly without replacement.
fn draw_batch<'a, T>(rng: &mut crate::rng::Rng, pool: &[&'a [T]], size: usize) -> Vec<&'a [T]> {
    sample(rng, pool.len(), size)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}

/// Stochastic minibatch training; deterministic for a fixed config.
pub fn train<T: Real>(dataset: &Dataset<T>, config: &TrainConfig<T>) -> Result<TrainResult<T>> {
    config.validate(dataset)?;
    let class_a = dataset.inputs_of(crate::classifiers::Label::A);
    let class_b = dataset.inputs_of(crate::classifiers::Label::B);

    let mut theta = init_params(&config.spec, derive_seed(config.seed, 0), config.init_scale)?;
    let mut opt = OptimizerState::new(config.optimizer, theta.len());
    let mut batch_rng = substream(config.seed, 1);
    let mut history = Vec::with_capacity(config.steps);

    for step in 0..config.steps {
        let batch_a = draw_batch(&mut batch_rng, &class_a, config.batch_size);
        let batch_b = draw_batch(&mut batch_rng, &class_b, config.batch_size);
        let step_seed = derive_seed(config.seed, 2 + step as u64);

        let c = cost(
            &config.spec,
            &theta,
            &batch_a,
            &batch_b,
            config.cost,
            config.shots,
            derive_seed(step_seed, u64::MAX),
        )?;
        history.push((step, c));

        let grad = batch_gradient(config, &theta, &batch_a, &batch_b, step_seed)?;
        let (next, next_opt) = optimizer_step(&opt, &theta, &grad, config.learning_rate)?;
        theta = next;
        opt = next_opt;
    }

    let final_cost = cost(&config.spec, &theta, &class_a, &class_b, config.cost, 0, 0)?;
    Ok(TrainResult {
        theta_final: theta,
        cost_history: history,
        final_cost,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::Label;

    fn spec1() -> EmbeddingSpec {
        EmbeddingSpec::new(1, 1, 1).unwrap()
    }

    #[test]
    fn sgd_step() {
        let st = OptimizerState::new(OptimizerKind::Sgd, 2);
        let (t, _) =
            optimizer_step(&st, &ParamVector(vec![0.0f64, 0.0]), &[1.0, -2.0], 0.1).unwrap();
        assert!((t.0[0] + 0.1).abs() < 1e-15 && (t.0[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient_changes_nothing() {
        for kind in [
            OptimizerKind::Sgd,
            OptimizerKind::RmsProp,
            OptimizerKind::Adagrad,
        ] {
            let st = OptimizerState::new(kind, 3);
            let theta = ParamVector(vec![0.3, -0.1, 2.0]);
            let (t, s) = optimizer_step(&st, &theta, &[0.0; 3], 0.5).unwrap();
            assert_eq!(t, theta);
            assert_eq!(s, st);
        }
    }

    #[test]
    fn first_rmsprop_step_is_sign_scaled() {
        let st = OptimizerState::new(OptimizerKind::RmsProp, 2);
        let (t, s) = optimizer_step(&st, &ParamVector(vec![0.0, 0.0]), &[0.5, -3.0], 0.01).unwrap();
        for (v, g) in t.0.iter().zip([0.5f64, -3.0]) {
            let want = -0.01 * g / ((0.01 * g * g).sqrt() + 1e-8);
            assert!((v - want).abs() < 1e-15);
            assert!((v + 0.1 * g.signum()).abs() < 1e-6);
        }
        assert!((s.accumulator[1] - 0.09).abs() < 1e-15);
    }

    #[test]
    fn adagrad_accumulates() {
        let st = OptimizerState::new(OptimizerKind::Adagrad, 1);
        let (t1, s1) = optimizer_step(&st, &ParamVector(vec![0.0f64]), &[2.0], 0.1).unwrap();
        let (t2, s2) = optimizer_step(&s1, &t1, &[2.0], 0.1).unwrap();
        assert!((s2.accumulator[0] - 8.0).abs() < 1e-15);
        assert!((t1.0[0] + 0.1).abs() < 1e-8);
        assert!((t2.0[0] - t1.0[0] + 0.2 / 8f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn optimizer_shape_mismatch() {
        let st = OptimizerState::new(OptimizerKind::Sgd, 2);
        assert!(optimizer_step(&st, &ParamVector(vec![0.0, 0.0]), &[1.0], 0.1).is_err());
    }

    #[test]
    fn identical_batches_cost_one() {
        let spec = EmbeddingSpec::new(2, 2, 2).unwrap();
        let theta = init_params(&spec, 1, 0.5).unwrap();
        let xs = vec![vec![0.1f64, 0.2], vec![-0.4, 0.9]];
        for kind in [CostKind::HilbertSchmidt, CostKind::TraceDistance] {
            let c = cost(&spec, &theta, &xs, &xs, kind, 0, 0).unwrap();
            assert!((c - 1.0).abs() < 1e-12, "{kind:?}: {c}");
        }
        let g = gradient_param_shift(&spec, &theta, &xs, &xs).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
        let fd =
            gradient_finite_diff(&spec, &theta, &xs, &xs, CostKind::HilbertSchmidt, 1e-4).unwrap();
        assert!(fd.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn orthogonal_embedding_costs_zero() {
        // RX(x) RY(0) RX(x) = RX(2x): x = 0 -> |0>, x = pi/2 -> -i|1>
        let theta = ParamVector(vec![0.0]);
        let a = vec![vec![0.0]];
        let b = vec![vec![std::f64::consts::FRAC_PI_2]];
        let c = cost(&spec1(), &theta, &a, &b, CostKind::HilbertSchmidt, 0, 0).unwrap();
        assert!(c.abs() < 1e-12);
        let c = cost(&spec1(), &theta, &a, &b, CostKind::TraceDistance, 0, 0).unwrap();
        assert!(c.abs() < 1e-12);
    }

    #[test]
    fn half_overlap_pure_states() {
        // RX(2x) with 2x = pi/2 gives overlap 1/2 with |0>
        let theta = ParamVector(vec![0.0]);
        let a = vec![vec![0.0]];
        let b = vec![vec![std::f64::consts::FRAC_PI_4]];
        let hs = cost(&spec1(), &theta, &a, &b, CostKind::HilbertSchmidt, 0, 0).unwrap();
        let tr = cost(&spec1(), &theta, &a, &b, CostKind::TraceDistance, 0, 0).unwrap();
        assert!((hs - 0.5).abs() < 1e-12);
        assert!((tr - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cost_errors() {
        let theta = ParamVector(vec![0.0]);
        let empty: Vec<Vec<f64>> = vec![];
        let a = vec![vec![0.0]];
        assert!(cost(&spec1(), &theta, &empty, &a, CostKind::HilbertSchmidt, 0, 0).is_err());
        assert!(cost(&spec1(), &theta, &a, &a, CostKind::TraceDistance, 10, 0).is_err());
    }

    #[test]
    fn shot_cost_is_near_exact() {
        let spec = EmbeddingSpec::new(2, 2, 1).unwrap();
        let theta = init_params(&spec, 4, 1.0).unwrap();
        let a = vec![vec![0.1f64, 0.5], vec![0.7, -0.2]];
        let b = vec![vec![1.4, 1.1], vec![-0.9, 2.0]];
        let exact = cost(&spec, &theta, &a, &b, CostKind::HilbertSchmidt, 0, 0).unwrap();
        let noisy = cost(&spec, &theta, &a, &b, CostKind::HilbertSchmidt, 20_000, 8).unwrap();
        assert!((exact - noisy).abs() < 0.02, "{exact} vs {noisy}");
        let again = cost(&spec, &theta, &a, &b, CostKind::HilbertSchmidt, 20_000, 8).unwrap();
        assert_eq!(noisy, again);
    }

    #[test]
    fn param_shift_matches_finite_difference_one_qubit() {
        let spec = EmbeddingSpec::new(1, 1, 3).unwrap();
        let theta = ParamVector(vec![0.4f64, -1.3, 2.2]);
        let a = vec![vec![0.3], vec![-0.8]];
        let b = vec![vec![1.7], vec![1.1], vec![-2.0]];
        let ps = gradient_param_shift(&spec, &theta, &a, &b).unwrap();
        let fd =
            gradient_finite_diff(&spec, &theta, &a, &b, CostKind::HilbertSchmidt, 1e-4).unwrap();
        for (p, f) in ps.iter().zip(&fd) {
            assert!((p - f).abs() < 1e-6, "{p} vs {f}");
        }
    }

    #[test]
    fn gradient_is_two_pi_shift_invariant() {
        let spec = EmbeddingSpec::new(2, 2, 1).unwrap();
        let theta = ParamVector(vec![0.2f64, 0.9, -0.4]);
        let a = vec![vec![0.3, 0.1]];
        let b = vec![vec![1.2, -0.7], vec![0.5, 0.5]];
        let g0 = gradient_param_shift(&spec, &theta, &a, &b).unwrap();
        for i in 0..theta.len() {
            let g1 =
                gradient_param_shift(&spec, &theta.shifted(i, 2.0 * std::f64::consts::PI), &a, &b)
                    .unwrap();
            for (x, y) in g0.iter().zip(&g1) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    fn toy_dataset() -> Dataset<f64> {
        Dataset::new(
            vec![
                vec![0.1],
                vec![0.2],
                vec![0.0],
                vec![1.5],
                vec![1.6],
                vec![1.4],
            ],
            vec![Label::A, Label::A, Label::A, Label::B, Label::B, Label::B],
        )
        .unwrap()
    }

    #[test]
    fn train_contract() {
        let data = toy_dataset();
        let mut cfg = TrainConfig::<f64>::new(spec1());
        cfg.steps = 0;
        assert!(train(&data, &cfg).is_err());
        cfg.steps = 1;
        let r = train(&data, &cfg).unwrap();
        assert_eq!(r.cost_history.len(), 1);
        cfg.batch_size = 4;
        assert!(train(&data, &cfg).is_err());
    }

    #[test]
    fn train_is_deterministic() {
        let data = toy_dataset();
        let mut cfg = TrainConfig::<f64>::new(EmbeddingSpec::new(1, 1, 2).unwrap());
        cfg.steps = 15;
        cfg.seed = 77;
        let a = train(&data, &cfg).unwrap();
        let b = train(&data, &cfg).unwrap();
        assert_eq!(a, b);
        cfg.cost = CostKind::TraceDistance;
        assert_eq!(train(&data, &cfg).unwrap(), train(&data, &cfg).unwrap());
        cfg.cost = CostKind::HilbertSchmidt;
        cfg.shots = 200;
        assert_eq!(train(&data, &cfg).unwrap(), train(&data, &cfg).unwrap());
    }

    #[test]
    fn trace_distance_rejects_shots() {
        let mut cfg = TrainConfig::<f64>::new(spec1());
        cfg.cost = CostKind::TraceDistance;
        cfg.shots = 100;
        assert!(cfg.validate(&toy_dataset()).is_err());
    }
}
