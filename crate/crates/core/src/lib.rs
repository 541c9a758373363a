//! Quantum metric learning on an exact small-scale simulator.
//!
//! A trainable QAOA-style circuit embeds classical inputs as qubit states.
//! Training maximizes the Hilbert-Schmidt or trace distance between the two
//! class ensembles; classification then uses the measurement that minimizes
//! the linear loss for that metric: overlaps with the training states
//! (fidelity classifier) or the Helstrøm projectors of `rho - sigma`.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod capacity;
pub mod classifiers;
pub mod data;
pub mod embedding;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod scalar;
pub mod simulator;
pub mod training;

pub use capacity::{capacity, CapacityParams};
pub use classifiers::{
    empirical_risk, fidelity_score, helstrom_global_score, helstrom_pairwise_score,
    mean_linear_loss, predict, required_shots, score_all, ClassEnsembles, ClassifierKind,
    HelstromObservable, Label, Prediction, PurePairSpectrum,
};
pub use data::{gen_bands1d, gen_moons, Dataset};
pub use embedding::{
    build_circuit, embed, embed_all, init_params, param_count, EmbeddingSpec, FeatureScaling,
    ParamVector, TrainedEmbedding,
};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use metrics::{
    dme_trotter_step, hs_distance, hs_distance_from_overlaps, inversion_test, overlap_exact,
    purity, swap_test, trace_distance, OverlapEstimate,
};
pub use scalar::{Cplx, Real};
pub use simulator::{
    apply, density_from_states, gate_matrix, sample_qubit_z, Circuit, DensityMatrix, Gate,
    StateVector,
};
pub use training::{
    cost, gradient_finite_diff, gradient_param_shift, optimizer_step, train, CostKind,
    OptimizerKind, OptimizerState, TrainConfig, TrainResult,
};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type Circuit64 = Circuit<f64>;
pub type ParamVector64 = ParamVector<f64>;
pub type Dataset64 = Dataset<f64>;
pub type ClassEnsembles64 = ClassEnsembles<f64>;
pub type TrainConfig64 = TrainConfig<f64>;
pub type TrainResult64 = TrainResult<f64>;
pub type TrainedEmbedding64 = TrainedEmbedding<f64>;
