//! Fidelity and Helstrøm classifiers over embedded class ensembles, and the
//! linear-loss empirical risk.
//!
//! Scores lie in `[-1, 1]`; class A carries label `+1`, class B `-1`.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianEigen};
use crate::metrics::{overlap_estimate, purity};
use crate::rng::derive_seed;
use crate::scalar::{cplx, Cplx, Real};
use crate::simulator::{density_from_states, DensityMatrix, StateVector};

/// Eigenvalues with `|lambda|` at or below this belong to neither
/// Helstrøm projector.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

/// Pairs with `|<a|b>|` this close to 1 are treated as identical.
pub const DEGENERATE_PAIR_TOL: f64 = 1e-12;

/// Binary label. `A` is `+1`, `B` is `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
}

impl Label {
    pub fn sign(self) -> i8 {
        match self {
            Label::A => 1,
            Label::B => -1,
        }
    }

    pub fn from_sign(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Label::A),
            -1 => Ok(Label::B),
            other => Err(Error::Data(format!("label must be +1 or -1, got {other}"))),
        }
    }
}

/// Embedded training states of both classes with their density matrices.
#[derive(Debug, Clone)]
pub struct ClassEnsembles<T> {
    states_a: Vec<StateVector<T>>,
    states_b: Vec<StateVector<T>>,
    rho: DensityMatrix<T>,
    sigma: DensityMatrix<T>,
}

impl<T: Real> ClassEnsembles<T> {
    pub fn new(states_a: Vec<StateVector<T>>, states_b: Vec<StateVector<T>>) -> Result<Self> {
        if states_a.is_empty() || states_b.is_empty() {
            return Err(Error::Empty("class ensemble"));
        }
        let rho = density_from_states(&states_a)?;
        let sigma = density_from_states(&states_b)?;
        rho.check_same(&sigma)?;
        Ok(Self {
            states_a,
            states_b,
            rho,
            sigma,
        })
    }

    pub fn states_a(&self) -> &[StateVector<T>] {
        &self.states_a
    }

    pub fn states_b(&self) -> &[StateVector<T>] {
        &self.states_b
    }

    pub fn rho(&self) -> &DensityMatrix<T> {
        &self.rho
    }

    pub fn sigma(&self) -> &DensityMatrix<T> {
        &self.sigma
    }

    pub fn n_qubits(&self) -> usize {
        self.rho.n_qubits()
    }

    /// `rho - sigma`.
    pub fn difference(&self) -> CMatrix<T> {
        self.rho.matrix() - self.sigma.matrix()
    }

    fn check_input(&self, x: &StateVector<T>) -> Result<()> {
        if x.n_qubits() != self.n_qubits() {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits(),
                actual: x.n_qubits(),
            });
        }
        Ok(())
    }
}

/// Which measurement turns an embedded input into a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierKind {
    Fidelity,
    HelstromGlobal,
    HelstromPairwise,
}

/// `<x|(rho - sigma)|x>` as a difference of mean overlaps; exact for
/// `shots == 0`, otherwise each overlap is sampled with `shots` shots.
pub fn fidelity_score<T: Real>(
    x: &StateVector<T>,
    ensembles: &ClassEnsembles<T>,
    shots: u64,
    seed: u64,
) -> Result<T> {
    ensembles.check_input(x)?;
    let mean = |states: &[StateVector<T>], offset: u64| -> Result<T> {
        let mut acc = T::zero();
        for (i, s) in states.iter().enumerate() {
            let seed = derive_seed(seed, offset + i as u64);
            acc += overlap_estimate(s, x, shots, seed)?.value;
        }
        Ok(acc / T::of(states.len() as f64))
    };
    let a = mean(&ensembles.states_a, 0)?;
    let b = mean(&ensembles.states_b, ensembles.states_a.len() as u64)?;
    Ok(a - b)
}

/// The Helstrøm observable `Pi_+ - Pi_-` of `rho - sigma`.
#[derive(Debug, Clone)]
pub struct HelstromObservable<T> {
    eigen: HermitianEigen<T>,
}

impl<T: Real> HelstromObservable<T> {
    pub fn new(ensembles: &ClassEnsembles<T>) -> Self {
        Self::from_matrix(&ensembles.difference())
    }

    pub fn from_matrix(difference: &CMatrix<T>) -> Self {
        Self {
            eigen: difference.hermitian_eigen(),
        }
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigen.values
    }

    /// `sum_j sign(lambda_j) |<d_j|x>|^2`.
    pub fn score(&self, x: &StateVector<T>) -> Result<T> {
        if x.dim() != self.eigen.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.eigen.values.len(),
                actual: x.dim(),
            });
        }
        Ok(signed_projection(
            &self.eigen,
            x.amplitudes(),
            T::of(ZERO_EIGENVALUE_TOL),
        ))
    }
}

fn signed_projection<T: Real>(eigen: &HermitianEigen<T>, x: &[Cplx<T>], tol: T) -> T {
    let n = x.len();
    let mut score = T::zero();
    for (j, &lambda) in eigen.values.iter().enumerate() {
        if lambda.abs() <= tol {
            continue;
        }
        let proj: Cplx<T> = (0..n).map(|r| eigen.vectors[(r, j)].conj() * x[r]).sum();
        let w = proj.norm_sqr();
        if lambda > T::zero() {
            score += w;
        } else {
            score -= w;
        }
    }
    score.max(-T::one()).min(T::one())
}

/// `<x|Pi_+ - Pi_-|x>` for the global ensembles.
pub fn helstrom_global_score<T: Real>(
    x: &StateVector<T>,
    ensembles: &ClassEnsembles<T>,
) -> Result<T> {
    ensembles.check_input(x)?;
    HelstromObservable::new(ensembles).score(x)
}

/// Spectral data of `|a><a| - |b><b|` restricted to `span{a, b}`.
#[derive(Debug, Clone)]
pub struct PurePairSpectrum<T> {
    /// Orthonormal basis `(e1, e2)` of the span; `e1 = a`.
    basis: [Vec<Cplx<T>>; 2],
    /// Eigenpairs of the 2x2 restriction, in the span basis.
    eigen: HermitianEigen<T>,
}

impl<T: Real> PurePairSpectrum<T> {
    /// `None` when `|<a|b>| = 1` within [`DEGENERATE_PAIR_TOL`] (then `m = 0`).
    pub fn new(a: &StateVector<T>, b: &StateVector<T>) -> Result<Option<Self>> {
        let beta = a.inner(b)?;
        if T::one() - beta.norm() <= T::of(DEGENERATE_PAIR_TOL) {
            return Ok(None);
        }
        let e1: Vec<Cplx<T>> = a.amplitudes().to_vec();
        let residual: Vec<Cplx<T>> = b
            .amplitudes()
            .iter()
            .zip(&e1)
            .map(|(bv, av)| bv - av * beta)
            .collect();
        let gamma = residual.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let e2: Vec<Cplx<T>> = residual.iter().map(|z| z / gamma).collect();
        // b = beta e1 + gamma e2, so m = [[gamma^2, -beta gamma], [-conj(beta) gamma, -gamma^2]].
        let g = cplx(gamma, T::zero());
        let m = CMatrix::from_rows(vec![g * g, -(beta * g), -(beta.conj() * g), -(g * g)])?;
        Ok(Some(Self {
            basis: [e1, e2],
            eigen: m.hermitian_eigen(),
        }))
    }

    /// Eigenvalues of `m` in ascending order: `(-lambda, +lambda)`.
    pub fn eigenvalues(&self) -> (T, T) {
        (self.eigen.values[0], self.eigen.values[1])
    }

    /// Eigenvectors of `m` lifted back to the full Hilbert space.
    pub fn eigenvectors(&self) -> [Vec<Cplx<T>>; 2] {
        let lift = |j: usize| -> Vec<Cplx<T>> {
            let (c1, c2) = (self.eigen.vectors[(0, j)], self.eigen.vectors[(1, j)]);
            self.basis[0]
                .iter()
                .zip(&self.basis[1])
                .map(|(u, v)| u * c1 + v * c2)
                .collect()
        };
        [lift(0), lift(1)]
    }

    fn coords(&self, x: &StateVector<T>) -> Vec<Cplx<T>> {
        self.basis
            .iter()
            .map(|e| {
                e.iter()
                    .zip(x.amplitudes())
                    .map(|(u, v)| u.conj() * v)
                    .sum()
            })
            .collect()
    }

    /// `sum_j sign(lambda_j) |<d_j|x>|^2`.
    pub fn sign_score(&self, x: &StateVector<T>) -> T {
        signed_projection(&self.eigen, &self.coords(x), T::of(ZERO_EIGENVALUE_TOL))
    }

    /// `sum_j lambda_j |<d_j|x>|^2 = |<a|x>|^2 - |<b|x>|^2`.
    pub fn magnitude_score(&self, x: &StateVector<T>) -> T {
        let c = self.coords(x);
        let n = c.len();
        self.eigen
            .values
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                let p: Cplx<T> = (0..n)
                    .map(|r| self.eigen.vectors[(r, j)].conj() * c[r])
                    .sum();
                l * p.norm_sqr()
            })
            .sum()
    }
}

/// Helstrøm score averaged over all pure training pairs `(a, b)`.
pub fn helstrom_pairwise_score<T: Real>(
    x: &StateVector<T>,
    ensembles: &ClassEnsembles<T>,
) -> Result<T> {
    ensembles.check_input(x)?;
    let mut acc = T::zero();
    for a in &ensembles.states_a {
        for b in &ensembles.states_b {
            if let Some(pair) = PurePairSpectrum::new(a, b)? {
                acc += pair.sign_score(x);
            }
        }
    }
    let pairs = T::of((ensembles.states_a.len() * ensembles.states_b.len()) as f64);
    Ok(acc / pairs)
}

/// Thresholded score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<T> {
    pub score: T,
    pub label: Label,
    pub threshold: T,
}

/// `+1` iff `score >= threshold`.
pub fn predict<T: Real>(score: T, threshold: T) -> Prediction<T> {
    let label = if score >= threshold {
        Label::A
    } else {
        Label::B
    };
    Prediction {
        score,
        label,
        threshold,
    }
}

/// Linear-loss empirical risk with per-class normalization:
/// `-(1/M_A) sum_{m in A} f(x_m) + (1/M_B) sum_{m in B} f(x_m)`.
///
/// On the training set this is `-tr((rho - sigma) M)` for the measurement
/// `M` behind `f`, so it equals `-D_hs` for fidelity scores and `-2 D_tr`
/// for global Helstrøm scores. Both labels must be present.
pub fn empirical_risk<T: Real>(scores: &[T], labels: &[Label]) -> Result<T> {
    check_scores(scores, labels)?;
    let (mut sum_a, mut n_a, mut sum_b, mut n_b) = (T::zero(), 0usize, T::zero(), 0usize);
    for (s, l) in scores.iter().zip(labels) {
        match l {
            Label::A => {
                sum_a += *s;
                n_a += 1;
            }
            Label::B => {
                sum_b += *s;
                n_b += 1;
            }
        }
    }
    if n_a == 0 || n_b == 0 {
        return Err(Error::Data("empirical risk needs both labels".into()));
    }
    Ok(sum_b / T::of(n_b as f64) - sum_a / T::of(n_a as f64))
}

/// Plain mean linear loss `-(1/M) sum_m f(x_m) y_m`. For balanced classes
/// this is half of [`empirical_risk`].
pub fn mean_linear_loss<T: Real>(scores: &[T], labels: &[Label]) -> Result<T> {
    check_scores(scores, labels)?;
    let sum: T = scores
        .iter()
        .zip(labels)
        .map(|(s, l)| *s * T::of(l.sign() as f64))
        .sum();
    Ok(-sum / T::of(scores.len() as f64))
}

fn check_scores<T>(scores: &[T], labels: &[Label]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            what: "labels",
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::Empty("scores"));
    }
    Ok(())
}

/// Smallest `S` with `sqrt(p (1 - p) / S) < p - q`, for `p = tr rho^2`,
/// `q = tr rho sigma`.
pub fn required_shots<T: Real>(ensembles: &ClassEnsembles<T>) -> Result<u64> {
    let p = purity(ensembles.rho());
    let q = ensembles
        .rho()
        .matrix()
        .trace_product(ensembles.sigma().matrix())
        .re;
    required_shots_for(p, q)
}

pub fn required_shots_for<T: Real>(p: T, q: T) -> Result<u64> {
    if p <= q {
        return Err(Error::Unseparated {
            purity: p.to_f64_lossy(),
            cross: q.to_f64_lossy(),
        });
    }
    let gap = p - q;
    let ratio = (p * (T::one() - p)).max(T::zero()) / (gap * gap);
    // Guard against values like 24.750000000000004 from the subtraction.
    let ratio = ratio.to_f64_lossy();
    let rounded = ratio.round();
    let ceil = if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
        rounded
    } else {
        ratio.ceil()
    };
    Ok(ceil as u64 + 1)
}

/// Scores every input with the chosen classifier.
pub fn score_all<T: Real>(
    kind: ClassifierKind,
    inputs: &[StateVector<T>],
    ensembles: &ClassEnsembles<T>,
    shots: u64,
    seed: u64,
) -> Result<Vec<T>> {
    match kind {
        ClassifierKind::Fidelity => inputs
            .iter()
            .enumerate()
            .map(|(i, x)| fidelity_score(x, ensembles, shots, derive_seed(seed, i as u64)))
            .collect(),
        ClassifierKind::HelstromGlobal => {
            let obs = HelstromObservable::new(ensembles);
            inputs.iter().map(|x| obs.score(x)).collect()
        }
        ClassifierKind::HelstromPairwise => {
            let pairs: Vec<PurePairSpectrum<T>> = ensembles
                .states_a
                .iter()
                .flat_map(|a| ensembles.states_b.iter().map(move |b| (a, b)))
                .map(|(a, b)| PurePairSpectrum::new(a, b))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            let total = T::of((ensembles.states_a.len() * ensembles.states_b.len()) as f64);
            inputs
                .iter()
                .map(|x| {
                    ensembles.check_input(x)?;
                    Ok(pairs.iter().map(|p| p.sign_score(x)).sum::<T>() / total)
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{hs_distance, trace_distance};

    fn zero() -> StateVector<f64> {
        StateVector::zero(1)
    }
    fn one() -> StateVector<f64> {
        StateVector::basis(1, 1)
    }
    fn plus() -> StateVector<f64> {
        StateVector::normalized(vec![cplx(1.0, 0.0), cplx(1.0, 0.0)]).unwrap()
    }

    fn ens(a: Vec<StateVector<f64>>, b: Vec<StateVector<f64>>) -> ClassEnsembles<f64> {
        ClassEnsembles::new(a, b).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let e = ens(vec![zero()], vec![one()]);
        assert!((fidelity_score(&zero(), &e, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        let two = StateVector::<f64>::zero(2);
        let e2 = ens(
            vec![StateVector::basis(2, 1)],
            vec![StateVector::basis(2, 2)],
        );
        assert_eq!(fidelity_score(&two, &e2, 0, 0).unwrap(), 0.0);
        let e3 = ens(vec![zero()], vec![plus()]);
        assert!((fidelity_score(&one(), &e3, 0, 0).unwrap() + 0.5).abs() < 1e-12);
        assert!(fidelity_score(&two, &e3, 0, 0).is_err());
    }

    #[test]
    fn helstrom_global_examples() {
        let e = ens(vec![zero()], vec![one()]);
        assert!((helstrom_global_score(&zero(), &e).unwrap() - 1.0).abs() < 1e-15);
        let same = ens(vec![plus(), zero()], vec![zero(), plus()]);
        for x in [zero(), one(), plus()] {
            assert_eq!(helstrom_global_score(&x, &same).unwrap(), 0.0);
        }
        let pair = ens(vec![zero()], vec![plus()]);
        let ev = HelstromObservable::new(&pair).eigenvalues().to_vec();
        assert!((ev[0] + 0.5f64.sqrt()).abs() < 1e-12);
        assert!((ev[1] - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pairwise_matches_global_for_single_pair() {
        let e = ens(vec![zero()], vec![one()]);
        for x in [zero(), one(), plus()] {
            let g = helstrom_global_score(&x, &e).unwrap();
            let p = helstrom_pairwise_score(&x, &e).unwrap();
            assert!((g - p).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_pair_contributes_nothing() {
        assert!(PurePairSpectrum::new(&plus(), &plus()).unwrap().is_none());
        let e = ens(vec![plus()], vec![plus()]);
        assert_eq!(helstrom_pairwise_score(&zero(), &e).unwrap(), 0.0);
    }

    #[test]
    fn pair_eigenvalues_and_score_relation() {
        let pair = PurePairSpectrum::new(&zero(), &plus()).unwrap().unwrap();
        let (lo, hi) = pair.eigenvalues();
        assert!((hi - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((lo + hi).abs() < 1e-12);
        let x = one();
        let fid = fidelity_score(&x, &ens(vec![zero()], vec![plus()]), 0, 0).unwrap();
        assert!((pair.magnitude_score(&x) - fid).abs() < 1e-12);
        assert!((pair.sign_score(&x) - fid / hi).abs() < 1e-12);
    }

    #[test]
    fn predict_thresholds() {
        assert_eq!(predict(0.3, 0.0).label, Label::A);
        assert_eq!(predict(-0.3, 0.0).label, Label::B);
        assert_eq!(predict(0.0, 0.0).label, Label::A);
        assert_eq!(predict(0.3, 0.5).label, Label::B);
    }

    #[test]
    fn risk_examples() {
        let labels = [Label::A, Label::B, Label::A];
        assert_eq!(mean_linear_loss(&[1.0, -1.0, 1.0], &labels).unwrap(), -1.0);
        assert_eq!(empirical_risk(&[1.0, -1.0, 1.0], &labels).unwrap(), -2.0);
        assert_eq!(empirical_risk(&[0.0; 3], &labels).unwrap(), 0.0);
        assert_eq!(mean_linear_loss(&[0.0; 3], &labels).unwrap(), 0.0);
        assert!(empirical_risk(&[0.0; 2], &labels).is_err());
        assert!(empirical_risk::<f64>(&[], &[]).is_err());
        assert!(empirical_risk(&[0.5, 0.2], &[Label::A, Label::A]).is_err());
    }

    #[test]
    fn training_set_risk_identities() {
        let a = vec![zero(), plus()];
        let b = vec![one()];
        let e = ens(a.clone(), b.clone());
        let inputs: Vec<_> = a.iter().chain(&b).cloned().collect();
        let mut labels = vec![Label::A; a.len()];
        labels.extend(vec![Label::B; b.len()]);
        let risk = |kind| {
            let s = score_all(kind, &inputs, &e, 0, 0).unwrap();
            empirical_risk(&s, &labels).unwrap()
        };
        let dhs = hs_distance(e.rho(), e.sigma()).unwrap();
        let dtr = trace_distance(e.rho(), e.sigma()).unwrap();
        assert!((risk(ClassifierKind::Fidelity) + dhs).abs() < 1e-12);
        assert!((risk(ClassifierKind::HelstromGlobal) + 2.0 * dtr).abs() < 1e-12);
    }

    #[test]
    fn shots_required() {
        assert_eq!(required_shots_for(1.0f64, 0.0).unwrap(), 1);
        assert_eq!(required_shots_for(0.9f64, 0.1).unwrap(), 2);
        assert_eq!(required_shots_for(0.55f64, 0.45).unwrap(), 26);
        assert!(matches!(
            required_shots_for(0.4f64, 0.5),
            Err(Error::Unseparated { .. })
        ));
        let e = ens(vec![zero()], vec![one()]);
        assert_eq!(required_shots(&e).unwrap(), 1);
    }

    #[test]
    fn labels_from_signs() {
        assert_eq!(Label::from_sign(1).unwrap(), Label::A);
        assert_eq!(Label::from_sign(-1).unwrap(), Label::B);
        assert!(Label::from_sign(0).is_err());
    }
}
