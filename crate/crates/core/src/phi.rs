//! The normalizing function `phi(q)` of the entropy family, its derivative,
//! and a grid-based validator for the four admissibility conditions:
//!
//! 1. sign: `phi(q) > 0` for `q > 1` and `phi(q) < 0` for `q < 1`;
//! 2. differentiability on the positive reals;
//! 3. `phi'(q) -> 1` as `q -> 1`;
//! 4. `phi(1) = 0` and `phi(q) != 0` elsewhere.
//!
//! Conditions 2 and 3 are statements about limits, so they are checked
//! numerically on a finite grid with explicit tolerances.

use std::f64::consts::LN_2;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Evaluable real function of `q`.
pub type PhiFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Names accepted by [`PhiSpec::builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["tsallis", "cubic", "havrda_charvat"];

/// A named `phi(q)` with an optional closed-form derivative.
#[derive(Clone)]
pub struct PhiSpec {
    name: String,
    eval: PhiFn,
    derivative: Option<PhiFn>,
}

impl fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiSpec")
            .field("name", &self.name)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl PhiSpec {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    /// `phi(q) = q - 1`, the original Tsallis normalization.
    pub fn tsallis() -> Self {
        Self::new("tsallis", |q| q - 1.0).with_derivative(|_| 1.0)
    }

    /// `phi(q) = (q - 1)(q^2 + 1) / 2`.
    pub fn cubic() -> Self {
        Self::new("cubic", |q| (q - 1.0) * (q * q + 1.0) / 2.0)
            .with_derivative(|q| (q * q + 1.0) / 2.0 + (q - 1.0) * q)
    }

    /// `phi(q) = 1 - 2^(1-q)`, giving the Havrda-Charvat / Daroczy entropy.
    /// Its derivative at 1 is `ln 2`, not 1.
    pub fn havrda_charvat() -> Self {
        // -expm1 keeps full relative accuracy near q = 1; `+ 0.0` clears -0.0.
        Self::new("havrda_charvat", |q| -((1.0 - q) * LN_2).exp_m1() + 0.0)
            .with_derivative(|q| LN_2 * ((1.0 - q) * LN_2).exp())
    }

    /// `phi(q) = (q - 1) * P(q)` with `P(q) = sum_k coeffs[k] q^k`.
    ///
    /// The `(q - 1)` factor pins `phi(1) = 0`; the other conditions depend
    /// on `P` and are left to [`validate_phi`].
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty("polynomial coefficients"));
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        let name = format!(
            "poly({})",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let c = Arc::new(coeffs);
        let c2 = Arc::clone(&c);
        let horner = |c: &[f64], q: f64| c.iter().rev().fold(0.0, |acc, &ck| acc * q + ck);
        let dhorner = |c: &[f64], q: f64| {
            c.iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * q + k as f64 * ck)
        };
        Ok(Self::new(name, move |q| (q - 1.0) * horner(&c, q))
            .with_derivative(move |q| horner(&c2, q) + (q - 1.0) * dhorner(&c2, q)))
    }

    /// Looks up one of [`BUILTIN_NAMES`].
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "tsallis" => Ok(Self::tsallis()),
            "cubic" => Ok(Self::cubic()),
            "havrda_charvat" | "havrda-charvat" => Ok(Self::havrda_charvat()),
            other => Err(Error::UnknownPhi(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Raw evaluation, no checks.
    pub fn eval(&self, q: f64) -> f64 {
        (self.eval)(q)
    }

    /// Evaluation that rejects non-finite results.
    pub fn try_eval(&self, q: f64) -> Result<f64> {
        let v = (self.eval)(q);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinitePhi { q })
        }
    }

    /// `phi'(q)` from the closed form if available, else by central
    /// difference with the default step.
    pub fn derivative(&self, q: f64) -> Result<f64> {
        phi_derivative(self, q, None)
    }
}

fn default_step(q: f64) -> f64 {
    (1e-6 * q.abs().max(1.0)).min(q / 2.0)
}

/// Central difference `(phi(q+h) - phi(q-h)) / 2h`, ignoring any analytic
/// derivative.
pub fn central_difference(spec: &PhiSpec, q: f64, h: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidQ(q));
    }
    if h.is_nan() || h <= 0.0 || q - h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step {h} must be positive and smaller than q = {q}"
        )));
    }
    let d = (spec.try_eval(q + h)? - spec.try_eval(q - h)?) / (2.0 * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinitePhi { q })
    }
}

/// `phi'(q)`: the analytic derivative when the spec carries one, otherwise a
/// central difference with step `h` (default `1e-6 * max(1, q)`).
pub fn phi_derivative(spec: &PhiSpec, q: f64, h: Option<f64>) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidQ(q));
    }
    match &spec.derivative {
        Some(d) => {
            let v = d(q);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinitePhi { q })
            }
        }
        None => central_difference(spec, q, h.unwrap_or_else(|| default_step(q))),
    }
}

/// Tolerances used by [`validate_phi`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiTolerances {
    /// Derivative comparisons: step-size agreement and distance of `phi'` from 1.
    pub derivative: f64,
    /// Zero test for `phi(1)` and nonvanishing elsewhere.
    pub zero: f64,
}

impl Default for PhiTolerances {
    fn default() -> Self {
        Self {
            derivative: 1e-3,
            zero: 1e-9,
        }
    }
}

/// Verdict for one admissibility condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub passed: bool,
    /// Grid points that violate the condition, or the points used when the
    /// condition is a limit.
    pub witness_q: Vec<f64>,
    pub measured: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiValidationReport {
    pub phi: String,
    pub condition_i: ConditionVerdict,
    pub condition_ii: ConditionVerdict,
    pub condition_iii: ConditionVerdict,
    pub condition_iv: ConditionVerdict,
    pub tolerances: PhiTolerances,
    pub grid: Vec<f64>,
}

impl PhiValidationReport {
    pub fn all_passed(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.passed)
    }

    pub fn conditions(&self) -> [(&'static str, &ConditionVerdict); 4] {
        [
            ("condition_i", &self.condition_i),
            ("condition_ii", &self.condition_ii),
            ("condition_iii", &self.condition_iii),
            ("condition_iv", &self.condition_iv),
        ]
    }
}

/// `{1 +- 10^-k : k = 1..6}` together with 50 log-spaced points in
/// `(0.01, 10)`, sorted ascending.
pub fn default_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=6)
        .flat_map(|k| {
            let d = 10f64.powi(-k);
            [1.0 - d, 1.0 + d]
        })
        .collect();
    let (lo, hi) = (0.01f64.ln(), 10f64.ln());
    grid.extend((0..50).map(|i| (lo + (i as f64 + 0.5) / 50.0 * (hi - lo)).exp()));
    grid.sort_by(f64::total_cmp);
    grid
}

const NEAR_ONE: f64 = 1e-2;

/// Checks the four conditions on `phi` over `q_grid`.
///
/// The grid must contain points on both sides of 1 and at least one point
/// within `1e-2` of 1 on each side.
pub fn validate_phi(spec: &PhiSpec, q_grid: &[f64], tol: PhiTolerances) -> Result<PhiValidationReport> {
    if let Some(bad) = q_grid.iter().find(|q| !(**q > 0.0 && q.is_finite())) {
        return Err(Error::BadGrid(format!("grid point {bad} is not a positive real")));
    }
    let below_one = q_grid.iter().copied().filter(|&q| q < 1.0).fold(None, |m: Option<f64>, q| {
        Some(m.map_or(q, |m| m.max(q)))
    });
    let above_one = q_grid.iter().copied().filter(|&q| q > 1.0).fold(None, |m: Option<f64>, q| {
        Some(m.map_or(q, |m| m.min(q)))
    });
    let (q_lo, q_hi) = match (below_one, above_one) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(Error::BadGrid(
                "grid must cover both q < 1 and q > 1".into(),
            ))
        }
    };
    if 1.0 - q_lo > NEAR_ONE || q_hi - 1.0 > NEAR_ONE {
        return Err(Error::BadGrid(format!(
            "grid must approach 1 from both sides within {NEAR_ONE}; closest points are {q_lo} and {q_hi}"
        )));
    }

    // (i) sign
    let mut sign_violations = Vec::new();
    for &q in q_grid {
        let v = spec.eval(q);
        let ok = if q > 1.0 {
            v > 0.0
        } else if q < 1.0 {
            v < 0.0
        } else {
            true
        };
        if !ok {
            sign_violations.push(q);
        }
    }
    let condition_i = ConditionVerdict {
        passed: sign_violations.is_empty(),
        detail: if sign_violations.is_empty() {
            "phi > 0 above 1 and phi < 0 below 1 on every grid point".into()
        } else {
            format!("wrong sign at {} grid point(s)", sign_violations.len())
        },
        witness_q: sign_violations,
        measured: None,
    };

    // (ii) differentiability: two central-difference steps must agree
    let mut unstable = Vec::new();
    let mut worst: f64 = 0.0;
    for &q in q_grid {
        let h = (1e-6 * q.max(1.0)).min(q / 20.0);
        let fine = central_difference(spec, q, h);
        let coarse = central_difference(spec, q, 10.0 * h);
        match (fine, coarse) {
            (Ok(a), Ok(b)) => {
                let gap = (a - b).abs() / a.abs().max(1.0);
                worst = worst.max(gap);
                if gap > tol.derivative {
                    unstable.push(q);
                }
            }
            _ => unstable.push(q),
        }
    }
    let condition_ii = ConditionVerdict {
        passed: unstable.is_empty(),
        detail: format!("max relative gap between step sizes h and 10h: {worst:e}"),
        witness_q: unstable,
        measured: Some(worst),
    };

    // (iii) derivative limit at the grid points closest to 1
    let d_lo = phi_derivative(spec, q_lo, None);
    let d_hi = phi_derivative(spec, q_hi, None);
    let condition_iii = match (d_lo, d_hi) {
        (Ok(a), Ok(b)) => {
            let measured = 0.5 * (a + b);
            let passed = (a - 1.0).abs() <= tol.derivative && (b - 1.0).abs() <= tol.derivative;
            ConditionVerdict {
                passed,
                witness_q: vec![q_lo, q_hi],
                measured: Some(measured),
                detail: format!("phi'({q_lo}) = {a}, phi'({q_hi}) = {b}; limit must be 1"),
            }
        }
        _ => ConditionVerdict {
            passed: false,
            witness_q: vec![q_lo, q_hi],
            measured: None,
            detail: "derivative not finite next to q = 1".into(),
        },
    };

    // (iv) vanishing exactly at 1 and nowhere else
    let at_one = spec.eval(1.0);
    let mut vanishing: Vec<f64> = q_grid
        .iter()
        .copied()
        .filter(|&q| {
            let v = spec.eval(q).abs();
            q != 1.0 && (v.is_nan() || v <= tol.zero)
        })
        .collect();
    let zero_ok = at_one.abs() <= tol.zero;
    if !zero_ok {
        vanishing.insert(0, 1.0);
    }
    let condition_iv = ConditionVerdict {
        passed: zero_ok && vanishing.is_empty(),
        detail: format!("phi(1) = {at_one}; {} grid point(s) violate the zero test", vanishing.len()),
        witness_q: vanishing,
        measured: Some(at_one),
    };

    Ok(PhiValidationReport {
        phi: spec.name.clone(),
        condition_i,
        condition_ii,
        condition_iii,
        condition_iv,
        tolerances: tol,
        grid: q_grid.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        assert_eq!(PhiSpec::tsallis().eval(2.0), 1.0);
        assert_eq!(PhiSpec::cubic().eval(2.0), 2.5);
        assert!((PhiSpec::havrda_charvat().eval(2.0) - 0.5).abs() <= 1e-15);
        for name in BUILTIN_NAMES {
            let phi = PhiSpec::builtin(name).unwrap();
            assert_eq!(phi.eval(1.0), 0.0, "{name}");
            assert!(phi.eval(1.0).is_sign_positive(), "{name}");
        }
        assert_eq!(
            PhiSpec::builtin("renyi").unwrap_err(),
            Error::UnknownPhi("renyi".into())
        );
    }

    #[test]
    fn derivatives() {
        let ts = PhiSpec::tsallis();
        for q in [0.1, 1.0, 3.7] {
            assert_eq!(phi_derivative(&ts, q, None).unwrap(), 1.0);
        }
        let hc = PhiSpec::havrda_charvat();
        assert!((phi_derivative(&hc, 1.0, None).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(PhiSpec::cubic().derivative(1.0).unwrap(), 1.0);
        assert_eq!(phi_derivative(&ts, 0.0, None), Err(Error::InvalidQ(0.0)));
    }

    #[test]
    fn numeric_derivative_without_closed_form() {
        let phi = PhiSpec::new("square-ish", |q| (q - 1.0) * q);
        let d = phi_derivative(&phi, 1.0, None).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
        assert!(central_difference(&phi, 0.5, 0.6).is_err());
        let nan = PhiSpec::new("nan", |_| f64::NAN);
        assert!(matches!(nan.derivative(2.0), Err(Error::NonFinitePhi { .. })));
    }

    #[test]
    fn polynomial_phi() {
        let phi = PhiSpec::polynomial(vec![0.5, 0.0, 0.5]).unwrap();
        let cubic = PhiSpec::cubic();
        for q in [0.3, 1.0, 2.0, 4.5] {
            assert!((phi.eval(q) - cubic.eval(q)).abs() < 1e-14);
            assert!((phi.derivative(q).unwrap() - cubic.derivative(q).unwrap()).abs() < 1e-13);
        }
        assert_eq!(phi.name(), "poly(0.5,0,0.5)");
        assert!(PhiSpec::polynomial(vec![]).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 62);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().all(|&q| q > 0.01 && q < 10.0));
        assert!(!g.contains(&1.0));
    }

    #[test]
    fn classifications() {
        let g = default_grid();
        let tol = PhiTolerances::default();
        assert!(validate_phi(&PhiSpec::tsallis(), &g, tol).unwrap().all_passed());
        assert!(validate_phi(&PhiSpec::cubic(), &g, tol).unwrap().all_passed());

        let r = validate_phi(&PhiSpec::havrda_charvat(), &g, tol).unwrap();
        assert!(r.condition_i.passed && r.condition_ii.passed && r.condition_iv.passed);
        assert!(!r.condition_iii.passed);
        assert!((r.condition_iii.measured.unwrap() - LN_2).abs() < 1e-4);

        let flipped = PhiSpec::polynomial(vec![-1.0]).unwrap();
        let r = validate_phi(&flipped, &g, tol).unwrap();
        assert!(!r.condition_i.passed);
        assert_eq!(r.condition_i.witness_q.len(), g.len());
        assert!(!r.condition_iii.passed);
        assert!(r.condition_iv.passed);

        let shifted = PhiSpec::new("shifted", |q| q - 1.0 + 1e-3).with_derivative(|_| 1.0);
        let r = validate_phi(&shifted, &g, tol).unwrap();
        assert!(!r.condition_iv.passed);
        assert_eq!(r.condition_iv.witness_q[0], 1.0);
    }

    #[test]
    fn bad_grids() {
        let tol = PhiTolerances::default();
        let phi = PhiSpec::tsallis();
        assert!(matches!(validate_phi(&phi, &[0.5, 0.9], tol), Err(Error::BadGrid(_))));
        assert!(matches!(validate_phi(&phi, &[0.5, 2.0], tol), Err(Error::BadGrid(_))));
        assert!(matches!(validate_phi(&phi, &[0.0, 0.999, 1.001], tol), Err(Error::BadGrid(_))));
        assert!(validate_phi(&phi, &[0.999, 1.001], tol).is_ok());
    }
}
