//! Trainable QAOA-style feature map.
//!
//! One layer is: RX(x_i) on each feature qubit, an open chain of ZZ
//! entanglers on neighbouring qubits, then RY on every qubit. After the
//! last layer the feature block is applied once more. Qubits beyond
//! `n_features` are latent: they carry no RX but are entangled and rotated.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::scalar::Real;
use crate::simulator::{Circuit, Gate, StateVector};

/// Geometry of the embedding circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub n_qubits: usize,
    pub n_features: usize,
    pub n_layers: usize,
}

impl EmbeddingSpec {
    pub fn new(n_qubits: usize, n_features: usize, n_layers: usize) -> Result<Self> {
        let spec = Self {
            n_qubits,
            n_features,
            n_layers,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be >= 1".into()));
        }
        if self.n_features == 0 || self.n_features > self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "n_features must lie in 1..={} (got {})",
                self.n_qubits, self.n_features
            )));
        }
        if self.n_layers == 0 {
            return Err(Error::InvalidArgument("n_layers must be >= 1".into()));
        }
        Ok(())
    }

    /// Trainable angles per layer: `n - 1` ZZ angles then `n` RY angles.
    pub fn params_per_layer(&self) -> usize {
        2 * self.n_qubits - 1
    }

    pub fn param_count(&self) -> usize {
        self.n_layers * self.params_per_layer()
    }

    /// Index of the ZZ angle on pair `(k, k + 1)` in `layer`.
    pub fn zz_index(&self, layer: usize, k: usize) -> usize {
        debug_assert!(k + 1 < self.n_qubits);
        layer * self.params_per_layer() + k
    }

    /// Index of the RY angle on `qubit` in `layer`.
    pub fn ry_index(&self, layer: usize, qubit: usize) -> usize {
        debug_assert!(qubit < self.n_qubits);
        layer * self.params_per_layer() + (self.n_qubits - 1) + qubit
    }

    /// Gate count of the built circuit.
    pub fn gate_count(&self) -> usize {
        self.n_layers * (self.n_features + self.params_per_layer()) + self.n_features
    }
}

/// Number of trainable angles for `spec`.
pub fn param_count(spec: &EmbeddingSpec) -> usize {
    spec.param_count()
}

/// Trainable angles, laid out per layer as `[zz_0 .. zz_{n-2}, ry_0 .. ry_{n-1}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector<T>(pub Vec<T>);

impl<T: Real> ParamVector<T> {
    pub fn zeros(spec: &EmbeddingSpec) -> Self {
        Self(vec![T::zero(); spec.param_count()])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy with entry `index` moved by `delta`.
    pub fn shifted(&self, index: usize, delta: T) -> Self {
        let mut out = self.clone();
        out.0[index] += delta;
        out
    }
}

impl<T> From<Vec<T>> for ParamVector<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

fn check_lengths<T: Real>(spec: &EmbeddingSpec, theta: &ParamVector<T>, x: &[T]) -> Result<()> {
    spec.validate()?;
    if theta.len() != spec.param_count() {
        return Err(Error::LengthMismatch {
            what: "parameter vector",
            expected: spec.param_count(),
            actual: theta.len(),
        });
    }
    if x.len() != spec.n_features {
        return Err(Error::LengthMismatch {
            what: "feature vector",
            expected: spec.n_features,
            actual: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite feature".into()));
    }
    Ok(())
}

/// The feature map circuit `Phi(x, theta)`.
pub fn build_circuit<T: Real>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    x: &[T],
) -> Result<Circuit<T>> {
    check_lengths(spec, theta, x)?;
    let n = spec.n_qubits;
    let mut circuit = Circuit::new(n);
    let feature_block = |c: &mut Circuit<T>| -> Result<()> {
        for (qubit, &angle) in x.iter().enumerate() {
            c.push(Gate::Rx { qubit, angle })?;
        }
        Ok(())
    };
    for layer in 0..spec.n_layers {
        feature_block(&mut circuit)?;
        for k in 0..n.saturating_sub(1) {
            circuit.push(Gate::Zz {
                qubits: (k, k + 1),
                angle: theta.0[spec.zz_index(layer, k)],
            })?;
        }
        for qubit in 0..n {
            circuit.push(Gate::Ry {
                qubit,
                angle: theta.0[spec.ry_index(layer, qubit)],
            })?;
        }
    }
    feature_block(&mut circuit)?;
    Ok(circuit)
}

/// `|x> = Phi(x, theta) |0...0>`.
pub fn embed<T: Real>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    x: &[T],
) -> Result<StateVector<T>> {
    build_circuit(spec, theta, x)?.apply(&StateVector::zero(spec.n_qubits))
}

/// Embeds every input in `xs`.
pub fn embed_all<T: Real, X: AsRef<[T]>>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    xs: &[X],
) -> Result<Vec<StateVector<T>>> {
    xs.iter().map(|x| embed(spec, theta, x.as_ref())).collect()
}

pub const DEFAULT_INIT_SCALE: f64 = 0.1;

/// Independent `Normal(0, scale^2)` angles.
pub fn init_params<T: Real>(spec: &EmbeddingSpec, seed: u64, scale: T) -> Result<ParamVector<T>> {
    if scale.is_nan() || scale <= T::zero() {
        return Err(Error::InvalidArgument("init scale must be > 0".into()));
    }
    let normal = Normal::new(0.0, scale.to_f64_lossy())
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = substream(seed, 0);
    Ok(ParamVector(
        (0..spec.param_count())
            .map(|_| T::of(normal.sample(&mut rng)))
            .collect(),
    ))
}

/// Serialized form of a trained embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct TrainedEmbedding<T> {
    pub n_qubits: usize,
    pub n_features: usize,
    pub n_layers: usize,
    pub theta: Vec<T>,
    /// Per-feature standardization applied before embedding, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_scaling: Option<FeatureScaling<T>>,
}

impl<T: Real> TrainedEmbedding<T> {
    pub fn new(spec: EmbeddingSpec, theta: ParamVector<T>) -> Self {
        Self {
            n_qubits: spec.n_qubits,
            n_features: spec.n_features,
            n_layers: spec.n_layers,
            theta: theta.0,
            feature_scaling: None,
        }
    }

    pub fn spec(&self) -> Result<EmbeddingSpec> {
        EmbeddingSpec::new(self.n_qubits, self.n_features, self.n_layers)
    }

    /// Validated spec and parameters.
    pub fn parts(&self) -> Result<(EmbeddingSpec, ParamVector<T>)> {
        let spec = self.spec()?;
        if self.theta.len() != spec.param_count() {
            return Err(Error::LengthMismatch {
                what: "theta",
                expected: spec.param_count(),
                actual: self.theta.len(),
            });
        }
        if let Some(s) = &self.feature_scaling {
            s.check(spec.n_features)?;
        }
        Ok((spec, ParamVector(self.theta.clone())))
    }
}

/// Affine per-feature map `x -> (x - mean) / std`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct FeatureScaling<T> {
    pub mean: Vec<T>,
    pub std: Vec<T>,
}

impl<T: Real> FeatureScaling<T> {
    /// Fits mean and population standard deviation per column. Columns with
    /// zero spread keep unit scale.
    pub fn fit<X: AsRef<[T]>>(rows: &[X]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("feature rows"))?.as_ref();
        let d = first.len();
        let m = T::of(rows.len() as f64);
        let mut mean = vec![T::zero(); d];
        for r in rows {
            for (acc, v) in mean.iter_mut().zip(r.as_ref()) {
                *acc += *v / m;
            }
        }
        let mut var = vec![T::zero(); d];
        for r in rows {
            for ((acc, v), mu) in var.iter_mut().zip(r.as_ref()).zip(&mean) {
                *acc += (*v - *mu) * (*v - *mu) / m;
            }
        }
        let std = var
            .into_iter()
            .map(|v| if v > T::zero() { v.sqrt() } else { T::one() })
            .collect();
        Ok(Self { mean, std })
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.mean.len() != d || self.std.len() != d {
            return Err(Error::LengthMismatch {
                what: "feature scaling",
                expected: d,
                actual: self.mean.len().min(self.std.len()),
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (mu, sd))| (*v - *mu) / *sd)
            .collect()
    }
}
