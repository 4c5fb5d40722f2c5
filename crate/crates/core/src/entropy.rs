//! Entropy functionals of the `(1 - sum p_i^q) / phi(q)` family.
//!
//! All kernels skip zero-probability entries (`0^q = 0` for every `q > 0`),
//! which makes appending impossible outcomes an exact no-op. The numerator
//! `1 - sum p_i^q` is always formed as `-sum p_i expm1((q - 1) ln p_i)`, so
//! it carries full relative accuracy as `q` approaches 1 instead of
//! cancelling to rounding noise.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::phi::PhiSpec;

/// Half-width of the window around `q = 1` in which the limit form is used.
pub const Q_SWITCH: f64 = 1e-8;

/// `|phi'(1)|` below this is treated as a vanishing derivative.
pub const PHI_DERIVATIVE_FLOOR: f64 = 1e-12;

/// The entropic index `q`, a positive finite real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q > 0.0 && q.is_finite() {
            Ok(Self(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// True inside the `|q - 1| < Q_SWITCH` window.
    pub fn near_one(self) -> bool {
        (self.0 - 1.0).abs() < Q_SWITCH
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(q: QParam) -> f64 {
        q.0
    }
}

/// `1 - sum p_i^q` evaluated without cancellation.
pub fn q_deficit(d: &Distribution, q: QParam) -> f64 {
    let delta = q.get() - 1.0;
    -d.support().map(|p| p * (delta * p.ln()).exp_m1()).sum::<f64>()
}

/// `sum p_i^q` over the support, with `p^q = exp(q ln p)`.
pub fn power_sum(d: &Distribution, q: QParam) -> f64 {
    let q = q.get();
    d.support().map(|p| (q * p.ln()).exp()).sum()
}

/// Shannon entropy in nats, `-sum p_i ln p_i` with `0 ln 0 = 0`.
pub fn shannon(d: &Distribution) -> f64 {
    d.support().map(|p| -p * p.ln()).sum::<f64>() + 0.0
}

/// Original Tsallis entropy `(1 - sum p_i^q) / (q - 1)`; Shannon at `q = 1`.
pub fn tsallis(d: &Distribution, q: QParam) -> f64 {
    let delta = q.get() - 1.0;
    if delta == 0.0 {
        return shannon(d);
    }
    q_deficit(d, q) / delta
}

/// Normalized Tsallis entropy `(1 - sum p^q) / ((q - 1) sum p^q)`.
pub fn normalized_tsallis(d: &Distribution, q: QParam) -> f64 {
    if q.get() == 1.0 {
        return shannon(d);
    }
    tsallis(d, q) / power_sum(d, q)
}

/// `(1 - sum p_i^q) / phi(q)`.
///
/// Inside the `q -> 1` window the value is `shannon(d) / phi'(1)`, the
/// l'Hopital limit, which is finite for any `phi` with a nonzero slope at 1
/// whether or not that slope equals 1.
pub fn generalized_entropy(d: &Distribution, q: QParam, phi: &PhiSpec) -> Result<f64> {
    if q.near_one() {
        return Ok(shannon(d) / limit_slope(phi)?);
    }
    let f = nonzero_phi(phi, q)?;
    Ok(q_deficit(d, q) / f + 0.0)
}

/// `f_q(n) = (1 - n^(1-q)) / phi(q)`, the entropy of the uniform
/// distribution on `n` outcomes.
pub fn uniform_entropy(n: usize, q: QParam, phi: &PhiSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let ln_n = (n as f64).ln();
    if q.near_one() {
        return Ok(ln_n / limit_slope(phi)? + 0.0);
    }
    let f = nonzero_phi(phi, q)?;
    Ok(-((1.0 - q.get()) * ln_n).exp_m1() / f + 0.0)
}

/// Havrda-Charvat / Daroczy entropy `(1 - sum p^q) / (1 - 2^(1-q))`.
/// At `q = 1` this is the Shannon entropy in bits.
pub fn havrda_charvat(d: &Distribution, q: QParam) -> f64 {
    if q.near_one() {
        return shannon(d) / LN_2;
    }
    let denom = -((1.0 - q.get()) * LN_2).exp_m1();
    q_deficit(d, q) / denom + 0.0
}

fn limit_slope(phi: &PhiSpec) -> Result<f64> {
    let slope = phi.derivative(1.0)?;
    if slope.abs() < PHI_DERIVATIVE_FLOOR {
        return Err(Error::PhiDerivativeZero { derivative: slope });
    }
    Ok(slope)
}

fn nonzero_phi(phi: &PhiSpec, q: QParam) -> Result<f64> {
    let f = phi.try_eval(q.get())?;
    if f == 0.0 {
        return Err(Error::PhiZero { q: q.get() });
    }
    Ok(f)
}
