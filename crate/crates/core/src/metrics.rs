//! Overlap estimators and distances between class ensembles.

use crate::embedding::{build_circuit, EmbeddingSpec, ParamVector};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::derive_seed;
use crate::scalar::{cplx, Real};
use crate::simulator::{
    density_from_states, sample_binomial, sample_qubit_z, Circuit, DensityMatrix, Gate, StateVector,
};

/// A fidelity estimate. `shots == 0` marks an exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate<T> {
    pub value: T,
    pub shots: u64,
    pub stderr: T,
}

impl<T: Real> OverlapEstimate<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value: value.max(T::zero()).min(T::one()),
            shots: 0,
            stderr: T::zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }
}

/// `sqrt(F (1 - F) / k)`: the binomial accuracy of a `k`-shot fidelity estimate.
pub fn fidelity_accuracy<T: Real>(fidelity: T, shots: u64) -> T {
    let f = fidelity.max(T::zero()).min(T::one());
    (f * (T::one() - f) / T::of(shots as f64)).sqrt()
}

/// Smoothed plug-in success rate `(k + 1/2) / (n + 1)`, never exactly 0 or 1.
fn smoothed_rate<T: Real>(successes: u64, trials: u64) -> T {
    T::of((successes as f64 + 0.5) / (trials as f64 + 1.0))
}

/// `|<psi|phi>|^2`.
pub fn overlap_exact<T: Real>(psi: &StateVector<T>, phi: &StateVector<T>) -> Result<T> {
    Ok(psi.inner(phi)?.norm_sqr().min(T::one()))
}

/// Exact or sampled overlap of two states.
///
/// With `shots > 0` the estimate is the empirical all-zeros frequency of the
/// inversion test, whose success probability is exactly `|<psi|phi>|^2`.
pub fn overlap_estimate<T: Real>(
    psi: &StateVector<T>,
    phi: &StateVector<T>,
    shots: u64,
    seed: u64,
) -> Result<OverlapEstimate<T>> {
    let f = overlap_exact(psi, phi)?;
    if shots == 0 {
        return Ok(OverlapEstimate::exact(f));
    }
    let hits = sample_binomial(f, shots, seed)?;
    Ok(zero_outcome_estimate(hits, shots))
}

fn zero_outcome_estimate<T: Real>(hits: u64, shots: u64) -> OverlapEstimate<T> {
    let smoothed: T = smoothed_rate(hits, shots);
    OverlapEstimate {
        value: T::of(hits as f64 / shots as f64),
        shots,
        stderr: fidelity_accuracy(smoothed, shots),
    }
}

/// The `2n + 1`-qubit SWAP-test circuit; the ancilla is qubit 0, the first
/// register is qubits `1..=n`, the second `n+1..=2n`.
pub fn swap_test_circuit<T: Real>(n: usize) -> Circuit<T> {
    let mut c = Circuit::new(2 * n + 1);
    let push = |c: &mut Circuit<T>, g| {
        c.push(g).expect("swap-test gates are in range");
    };
    push(&mut c, Gate::H { qubit: 0 });
    for i in 0..n {
        push(
            &mut c,
            Gate::Cswap {
                control: 0,
                targets: (1 + i, 1 + n + i),
            },
        );
    }
    push(&mut c, Gate::H { qubit: 0 });
    c
}

/// Output state of the SWAP test on `|0> ⊗ psi ⊗ phi`.
pub fn swap_test_state<T: Real>(
    psi: &StateVector<T>,
    phi: &StateVector<T>,
) -> Result<StateVector<T>> {
    psi.check_same(phi)?;
    let input = StateVector::zero(1).tensor(psi).tensor(phi);
    swap_test_circuit(psi.n_qubits()).apply(&input)
}

/// Shot-based SWAP test. Returns `F = 2 p0 - 1` clamped to `[0, 1]`.
///
/// `stderr` propagates the binomial error of the ancilla frequency:
/// `2 sqrt(p0 (1 - p0) / k)`, with a smoothed plug-in `p0`.
pub fn swap_test<T: Real>(
    psi: &StateVector<T>,
    phi: &StateVector<T>,
    shots: u64,
    seed: u64,
) -> Result<OverlapEstimate<T>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("swap test needs shots >= 1".into()));
    }
    let out = swap_test_state(psi, phi)?;
    let (n0, _) = sample_qubit_z(&out, 0, shots, seed)?;
    let k = T::of(shots as f64);
    let raw = T::of(2.0) * T::of(n0 as f64) / k - T::one();
    let p0: T = smoothed_rate(n0, shots);
    Ok(OverlapEstimate {
        value: raw.max(T::zero()).min(T::one()),
        shots,
        stderr: T::of(2.0) * (p0 * (T::one() - p0) / k).sqrt(),
    })
}

/// Inversion test: `Phi(x')^† Phi(x) |0...0>`, reading the all-zeros outcome.
/// `shots == 0` returns the exact probability.
pub fn inversion_test<T: Real>(
    spec: &EmbeddingSpec,
    theta: &ParamVector<T>,
    x: &[T],
    x_prime: &[T],
    shots: u64,
    seed: u64,
) -> Result<OverlapEstimate<T>> {
    let mut circuit = build_circuit(spec, theta, x)?;
    circuit.extend(&build_circuit(spec, theta, x_prime)?.adjoint())?;
    let out = circuit.apply(&StateVector::zero(spec.n_qubits))?;
    let p = out.amplitudes()[0].norm_sqr().min(T::one());
    if shots == 0 {
        return Ok(OverlapEstimate::exact(p));
    }
    let hits = sample_binomial(p, shots, seed)?;
    Ok(zero_outcome_estimate(hits, shots))
}

/// `D_hs = tr((rho - sigma)^2)`.
pub fn hs_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.check_same(sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    Ok(diff.trace_product(&diff).re.max(T::zero()))
}

/// The three trace terms of the Hilbert-Schmidt distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsTerms<T> {
    /// `tr rho^2`
    pub purity_a: T,
    /// `tr sigma^2`
    pub purity_b: T,
    /// `tr rho sigma`
    pub cross: T,
}

impl<T: Real> HsTerms<T> {
    pub fn from_densities(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<Self> {
        rho.check_same(sigma)?;
        Ok(Self {
            purity_a: purity(rho),
            purity_b: purity(sigma),
            cross: rho.matrix().trace_product(sigma.matrix()).re,
        })
    }

    pub fn hs_distance(&self) -> T {
        (self.purity_a + self.purity_b - T::of(2.0) * self.cross).max(T::zero())
    }
}

/// Averages pairwise overlaps over the combined index list `[A.., B..]`.
/// Self-overlaps are 1; each unordered pair is queried once.
pub(crate) fn assemble_hs_terms<T: Real>(
    n_a: usize,
    n_b: usize,
    mut overlap: impl FnMut(usize, usize) -> Result<T>,
) -> Result<HsTerms<T>> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::Empty("class ensemble"));
    }
    let n = n_a + n_b;
    let (mut aa, mut bb, mut ab) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        for j in (i + 1)..n {
            let f = overlap(i, j)?;
            match (i < n_a, j < n_a) {
                (true, true) => aa += f,
                (false, false) => bb += f,
                _ => ab += f,
            }
        }
    }
    let two = T::of(2.0);
    let (ma, mb) = (T::of(n_a as f64), T::of(n_b as f64));
    Ok(HsTerms {
        purity_a: (ma + two * aa) / (ma * ma),
        purity_b: (mb + two * bb) / (mb * mb),
        cross: ab / (ma * mb),
    })
}

/// Hilbert-Schmidt terms from pairwise state overlaps (exact, or sampled
/// with `shots` per pair).
pub fn hs_terms_from_overlaps<T: Real>(
    states_a: &[StateVector<T>],
    states_b: &[StateVector<T>],
    shots: u64,
    seed: u64,
) -> Result<HsTerms<T>> {
    let n_a = states_a.len();
    let n = n_a + states_b.len();
    let get = |i: usize| {
        if i < n_a {
            &states_a[i]
        } else {
            &states_b[i - n_a]
        }
    };
    assemble_hs_terms(n_a, states_b.len(), |i, j| {
        let pair = (i * n + j) as u64;
        Ok(overlap_estimate(get(i), get(j), shots, derive_seed(seed, pair))?.value)
    })
}

/// `D_hs` assembled from overlaps:
/// `tr rho^2 + tr sigma^2 - 2 tr rho sigma`.
pub fn hs_distance_from_overlaps<T: Real>(
    states_a: &[StateVector<T>],
    states_b: &[StateVector<T>],
    shots: u64,
    seed: u64,
) -> Result<T> {
    Ok(hs_terms_from_overlaps(states_a, states_b, shots, seed)?.hs_distance())
}

/// `D_tr = 1/2 tr |rho - sigma|`.
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    rho.check_same(sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let sum: T = diff.hermitian_eigen().values.iter().map(|l| l.abs()).sum();
    Ok((sum * T::of(0.5)).min(T::one()))
}

/// `tr rho^2`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.matrix().trace_product(rho.matrix()).re
}

/// Count of eigenvalues above the numerical-rank cutoff.
pub fn numerical_rank<T: Real>(rho: &DensityMatrix<T>) -> usize {
    rho.matrix().hermitian_eigen().rank(T::rank_cutoff())
}

/// `rank(rho) rank(sigma) / (rank(rho) + rank(sigma))`, the upper constant
/// of `D_tr^2 <= r D_hs`.
pub fn rank_ratio<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> T {
    let (ra, rb) = (numerical_rank(rho) as f64, numerical_rank(sigma) as f64);
    T::of(ra * rb / (ra + rb))
}

/// `exp(-i t S)` for the swap `S` on two `d`-dimensional registers.
fn partial_swap<T: Real>(d: usize, t: T) -> CMatrix<T> {
    let (s, c) = t.sin_cos();
    let dd = d * d;
    let mut u = CMatrix::zeros(dd);
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            u[(row, row)] += cplx(c, T::zero());
            u[(row, j * d + i)] += cplx(T::zero(), -s);
        }
    }
    u
}

fn swap_substep<T: Real>(eta: &CMatrix<T>, env: &CMatrix<T>, t: T) -> Result<CMatrix<T>> {
    let u = partial_swap(eta.dim(), t);
    let joint = eta.kron(env);
    let evolved = &(&u * &joint) * &u.adjoint();
    evolved.partial_trace_trailing(env.dim())
}

/// One density-matrix-exponentiation Trotter step approximating
/// `exp(-i delta (rho - sigma)) eta exp(i delta (rho - sigma))` to `O(delta^2)`.
///
/// Partial swap `exp(-i delta S)` against a copy of `rho`, then
/// `exp(+i delta S)` against a copy of `sigma`, tracing out each copy.
pub fn dme_trotter_step<T: Real>(
    eta: &DensityMatrix<T>,
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    delta: T,
) -> Result<DensityMatrix<T>> {
    eta.check_same(rho)?;
    eta.check_same(sigma)?;
    if delta.abs() > T::one() {
        return Err(Error::InvalidArgument("|delta| must be <= 1".into()));
    }
    let first = swap_substep(eta.matrix(), rho.matrix(), delta)?;
    let second = swap_substep(&first, sigma.matrix(), -delta)?;
    let half = T::of(0.5);
    let hermitian = CMatrix::from_fn(second.dim(), |r, c| {
        (second[(r, c)] + second[(c, r)].conj()) * half
    });
    Ok(DensityMatrix::new_unchecked(hermitian))
}

/// The exact conjugation `exp(-i t (rho - sigma)) eta exp(i t (rho - sigma))`.
pub fn exact_difference_evolution<T: Real>(
    eta: &DensityMatrix<T>,
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    t: T,
) -> Result<DensityMatrix<T>> {
    eta.check_same(rho)?;
    eta.check_same(sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let u = diff.hermitian_map(|l| crate::scalar::phase(-t * l));
    let out = &(&u * eta.matrix()) * &u.adjoint();
    Ok(DensityMatrix::new_unchecked(out))
}

/// Convenience: densities of two state sets.
pub fn ensemble_densities<T: Real>(
    states_a: &[StateVector<T>],
    states_b: &[StateVector<T>],
) -> Result<(DensityMatrix<T>, DensityMatrix<T>)> {
    Ok((
        density_from_states(states_a)?,
        density_from_states(states_b)?,
    ))
}
