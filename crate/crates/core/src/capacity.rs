//! Bit-count estimate for how much classical data a device can embed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Device parameters for the capacity estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CapacityParams<T> {
    /// Control bandwidth in Hz.
    pub bandwidth_hz: T,
    /// Coherence time in seconds.
    pub coherence_s: T,
    pub n_qubits: u64,
    pub bits_per_sample: u64,
}

/// `2 Ω t n b` bits: Nyquist-rate samples of `b` bits on each of `n` control
/// lines during the coherence time.
pub fn capacity<T: Real>(p: &CapacityParams<T>) -> Result<T> {
    if !p.bandwidth_hz.is_finite() || p.bandwidth_hz <= T::zero() {
        return Err(Error::InvalidArgument("bandwidth must be > 0".into()));
    }
    if !p.coherence_s.is_finite() || p.coherence_s <= T::zero() {
        return Err(Error::InvalidArgument("coherence time must be > 0".into()));
    }
    if p.n_qubits == 0 || p.bits_per_sample == 0 {
        return Err(Error::InvalidArgument(
            "qubits and bits per sample must be >= 1".into(),
        ));
    }
    Ok(T::of(2.0)
        * p.bandwidth_hz
        * p.coherence_s
        * T::of(p.n_qubits as f64)
        * T::of(p.bits_per_sample as f64))
}
