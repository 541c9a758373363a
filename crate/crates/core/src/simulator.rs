//! Dense statevector and density-matrix simulation of the gate set
//! {RX, RY, ZZ, H, CSWAP}, plus seeded single-qubit measurement sampling.
//!
//! Basis indices are big-endian: qubit 0 is the most significant bit.
//! Rotations use the halved-generator convention `exp(-i angle G / 2)`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::substream;
use crate::scalar::{cplx, Cplx, Real};

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<Cplx<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits >= 1, "at least one qubit");
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps amplitudes, checking length `2^n` and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Cplx<T>>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state length {dim} is not a power of two >= 2"
            )));
        }
        let norm_sqr: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - T::one()).abs() > T::check_tol() {
            return Err(Error::NotNormalized(norm_sqr.to_f64_lossy()));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Cplx<T>>) -> Result<Self> {
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::min_positive_value() {
            return Err(Error::NotNormalized(0.0));
        }
        Self::from_amplitudes(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Cplx<T>> {
        self.check_same(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self> ⊗ |other>`, `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> CMatrix<T> {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// Probability that `qubit` reads 0 in the computational basis.
    pub fn prob_zero(&self, qubit: usize) -> Result<T> {
        self.check_qubit(qubit)?;
        let bit = self.bit(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    #[inline]
    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }
}

/// Mixed state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates the density-matrix invariants.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidDensityMatrix(format!(
                "dimension {dim} is not a power of two >= 2"
            )));
        }
        let tol = T::check_tol();
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} != 1",
                tr.re.to_f64_lossy()
            )));
        }
        let min = matrix.hermitian_eigen().values[0];
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {}",
                min.to_f64_lossy()
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(matrix: CMatrix<T>) -> Self {
        Self {
            n_qubits: matrix.dim().trailing_zeros() as usize,
            matrix,
        }
    }

    pub fn pure(state: &StateVector<T>) -> Self {
        Self::new_unchecked(state.projector())
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::new_unchecked(CMatrix::identity(dim).scale(T::one() / T::of(dim as f64)))
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }
}

/// Uniform mixture `(1/M) sum_i |psi_i><psi_i|`.
pub fn density_from_states<T: Real>(states: &[StateVector<T>]) -> Result<DensityMatrix<T>> {
    let first = states.first().ok_or(Error::Empty("state ensemble"))?;
    let dim = first.dim();
    let weight = T::one() / T::of(states.len() as f64);
    let mut acc = CMatrix::zeros(dim);
    for s in states {
        first.check_same(s)?;
        let amps = s.amplitudes();
        for r in 0..dim {
            let ar = amps[r] * weight;
            for c in 0..dim {
                acc[(r, c)] += ar * amps[c].conj();
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(acc))
}

/// One gate of the simulated gate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    Rx {
        qubit: usize,
        angle: T,
    },
    Ry {
        qubit: usize,
        angle: T,
    },
    Zz {
        qubits: (usize, usize),
        angle: T,
    },
    H {
        qubit: usize,
    },
    Cswap {
        control: usize,
        targets: (usize, usize),
    },
}

impl<T: Real> Gate<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::H { qubit } => vec![qubit],
            Gate::Zz { qubits: (a, b), .. } => vec![a, b],
            Gate::Cswap {
                control,
                targets: (a, b),
            } => vec![control, a, b],
        }
    }

    pub fn angle(&self) -> Option<T> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Zz { angle, .. } => Some(angle),
            Gate::H { .. } | Gate::Cswap { .. } => None,
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Self {
        match *self {
            Gate::Rx { qubit, angle } => Gate::Rx {
                qubit,
                angle: -angle,
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit,
                angle: -angle,
            },
            Gate::Zz { qubits, angle } => Gate::Zz {
                qubits,
                angle: -angle,
            },
            g @ (Gate::H { .. } | Gate::Cswap { .. }) => g,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        Ok(())
    }
}

/// Local unitary of a gate on its own qubits, in the order of
/// [`Gate::qubits`] (first listed qubit most significant).
pub fn gate_matrix<T: Real>(gate: &Gate<T>) -> CMatrix<T> {
    let z = Cplx::<T>::zero();
    let half = T::of(0.5);
    match *gate {
        Gate::Rx { angle, .. } => {
            let (s, c) = (angle * half).sin_cos();
            CMatrix::from_rows(vec![
                cplx(c, T::zero()),
                cplx(T::zero(), -s),
                cplx(T::zero(), -s),
                cplx(c, T::zero()),
            ])
            .expect("2x2")
        }
        Gate::Ry { angle, .. } => {
            let (s, c) = (angle * half).sin_cos();
            CMatrix::from_rows(vec![
                cplx(c, T::zero()),
                cplx(-s, T::zero()),
                cplx(s, T::zero()),
                cplx(c, T::zero()),
            ])
            .expect("2x2")
        }
        Gate::Zz { angle, .. } => {
            let minus = crate::scalar::phase(-angle * half);
            let plus = minus.conj();
            CMatrix::diagonal(&[minus, plus, plus, minus])
        }
        Gate::H { .. } => {
            let h = cplx(T::FRAC_1_SQRT_2(), T::zero());
            CMatrix::from_rows(vec![h, h, h, -h]).expect("2x2")
        }
        Gate::Cswap { .. } => {
            let mut m = CMatrix::identity(8);
            // |1 0 1> <-> |1 1 0>
            m[(5, 5)] = z;
            m[(6, 6)] = z;
            m[(5, 6)] = Complex::one();
            m[(6, 5)] = Complex::one();
            m
        }
    }
}

/// Ordered gate sequence on a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    ops: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn from_ops(n_qubits: usize, ops: Vec<Gate<T>>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in ops {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`.
    pub fn extend(&mut self, other: &Circuit<T>) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn ops(&self) -> &[Gate<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reversed order with every gate inverted.
    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Runs the circuit on `state`.
    pub fn apply(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        apply(self, state)
    }
}

/// `U_c |s>`.
pub fn apply<T: Real>(circuit: &Circuit<T>, state: &StateVector<T>) -> Result<StateVector<T>> {
    if circuit.n_qubits != state.n_qubits {
        return Err(Error::QubitMismatch {
            expected: circuit.n_qubits,
            actual: state.n_qubits,
        });
    }
    let mut out = state.clone();
    for gate in &circuit.ops {
        apply_gate_in_place(&mut out, gate);
    }
    Ok(out)
}

fn apply_gate_in_place<T: Real>(state: &mut StateVector<T>, gate: &Gate<T>) {
    let n = state.n_qubits;
    let half = T::of(0.5);
    let amps = &mut state.amplitudes;
    let bit = |q: usize| 1usize << (n - 1 - q);
    match *gate {
        Gate::Rx { qubit, angle } => {
            let (s, c) = (angle * half).sin_cos();
            let mis = cplx(T::zero(), -s);
            let b = bit(qubit);
            for i in (0..amps.len()).filter(|i| i & b == 0) {
                let (a0, a1) = (amps[i], amps[i | b]);
                amps[i] = a0 * c + a1 * mis;
                amps[i | b] = a0 * mis + a1 * c;
            }
        }
        Gate::Ry { qubit, angle } => {
            let (s, c) = (angle * half).sin_cos();
            let b = bit(qubit);
            for i in (0..amps.len()).filter(|i| i & b == 0) {
                let (a0, a1) = (amps[i], amps[i | b]);
                amps[i] = a0 * c - a1 * s;
                amps[i | b] = a0 * s + a1 * c;
            }
        }
        Gate::Zz {
            qubits: (q0, q1),
            angle,
        } => {
            let even = crate::scalar::phase(-angle * half);
            let odd = even.conj();
            let (b0, b1) = (bit(q0), bit(q1));
            for (i, a) in amps.iter_mut().enumerate() {
                let parity = ((i & b0) != 0) ^ ((i & b1) != 0);
                *a *= if parity { odd } else { even };
            }
        }
        Gate::H { qubit } => {
            let h = T::FRAC_1_SQRT_2();
            let b = bit(qubit);
            for i in (0..amps.len()).filter(|i| i & b == 0) {
                let (a0, a1) = (amps[i], amps[i | b]);
                amps[i] = (a0 + a1) * h;
                amps[i | b] = (a0 - a1) * h;
            }
        }
        Gate::Cswap {
            control,
            targets: (t0, t1),
        } => {
            let (bc, b0, b1) = (bit(control), bit(t0), bit(t1));
            for i in 0..amps.len() {
                // visit each swapped pair once, from its |..1..0..> member
                if i & bc != 0 && i & b0 != 0 && i & b1 == 0 {
                    amps.swap(i, (i & !b0) | b1);
                }
            }
        }
    }
}

/// Samples `shots` computational-basis measurements of one qubit.
///
/// Returns `(n0, n1)`; the zero count is binomial with the exact marginal
/// probability.
pub fn sample_qubit_z<T: Real>(
    state: &StateVector<T>,
    qubit: usize,
    shots: u64,
    seed: u64,
) -> Result<(u64, u64)> {
    let p0 = state.prob_zero(qubit)?;
    let n0 = sample_binomial(p0, shots, seed)?;
    Ok((n0, shots - n0))
}

/// Number of successes in `trials` Bernoulli(p) draws, from stream `seed`.
pub(crate) fn sample_binomial<T: Real>(p: T, trials: u64, seed: u64) -> Result<u64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let p = p.to_f64_lossy().clamp(0.0, 1.0);
    let dist = Binomial::new(trials, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = substream(seed, 0);
    Ok(dist.sample(&mut rng))
}
