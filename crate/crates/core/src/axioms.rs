//! Numerical checkers for the axioms and composition identities satisfied by
//! `S_q = (1 - sum p_i^q) / phi(q)`.
//!
//! Continuity in the distribution and in `q` has no checker of its own; no
//! finite sample can falsify it. It is exercised by the `q` sweeps instead.
//!
//! Inside the `q -> 1` window the entropy kernels return the `q = 1` limit,
//! so the identities are checked in their `q = 1` form there (escort weights
//! `p_i` instead of `p_i^q`, no `phi(q)` cross term).

use serde_json::json;

use crate::distributions::{Distribution, ProductSystem, Refinement};
use crate::entropy::{generalized_entropy, shannon, uniform_entropy, QParam};
use crate::error::{Error, Result};
use crate::phi::{default_grid, PhiSpec};
use crate::report::{relative_residual, CheckReport};
use crate::sampling::{random_permutation, seeded_rng};

/// Relative tolerance for the additivity identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Absolute slack allowed on `S_q(d) <= f_q(n)`.
pub const MAXIMALITY_TOL: f64 = 1e-12;
/// Absolute tolerance on permutation invariance (summation order only).
pub const SYMMETRY_TOL: f64 = 1e-14;
/// Default finest step `10^-k` for the `q -> 1` limit check.
pub const LIMIT_K_MAX: i32 = 8;
/// Random permutations tried by [`check_symmetry`], besides the reversal.
pub const SYMMETRY_TRIALS: usize = 16;

fn escort_weight(p: f64, q: QParam) -> f64 {
    if q.near_one() {
        p
    } else {
        (q.get() * p.ln()).exp()
    }
}

/// Generalized Shannon additivity:
/// `S(p_11..p_nm) = S(p_1..p_n) + sum_i p_i^q S(p_i1/p_i, ..)`.
///
/// Blocks with zero marginal contribute nothing to the sum.
pub fn check_shannon_additivity(r: &Refinement, q: QParam, phi: &PhiSpec, tol: f64) -> Result<CheckReport> {
    let lhs = generalized_entropy(&r.flatten(), q, phi)?;
    let mut rhs = generalized_entropy(r.marginals(), q, phi)?;
    for (i, &pi) in r.marginals().as_slice().iter().enumerate() {
        if pi > 0.0 {
            rhs += escort_weight(pi, q) * generalized_entropy(&r.conditional(i)?, q, phi)?;
        }
    }
    Ok(CheckReport::new("shannon_additivity", relative_residual(lhs, rhs), tol, true).with_witness(json!({
        "q": q.get(),
        "phi": phi.name(),
        "blocks": r.blocks(),
        "lhs": lhs,
        "rhs": rhs,
    })))
}

/// Pseudoadditivity for independent systems:
/// `S(A,B) = S(A) + S(B) - phi(q) S(A) S(B)`.
pub fn check_pseudoadditivity(s: &ProductSystem, q: QParam, phi: &PhiSpec, tol: f64) -> Result<CheckReport> {
    let lhs = generalized_entropy(s.joint(), q, phi)?;
    let sa = generalized_entropy(s.a(), q, phi)?;
    let sb = generalized_entropy(s.b(), q, phi)?;
    let coupling = if q.near_one() { 0.0 } else { phi.try_eval(q.get())? };
    let rhs = sa + sb - coupling * sa * sb;
    Ok(CheckReport::new("pseudoadditivity", relative_residual(lhs, rhs), tol, true).with_witness(json!({
        "q": q.get(),
        "phi": phi.name(),
        "a": s.a(),
        "b": s.b(),
        "lhs": lhs,
        "rhs": rhs,
    })))
}

/// True when `phi` has the right sign on every point of the default grid.
pub fn sign_condition_holds(phi: &PhiSpec) -> bool {
    default_grid().into_iter().all(|q| {
        let v = phi.eval(q);
        if q > 1.0 {
            v > 0.0
        } else {
            v < 0.0
        }
    })
}

/// Maximality at the uniform distribution: `S_q(d) <= f_q(n)`.
///
/// Under a `phi` with the wrong sign the bound does not hold in general and
/// the report is marked inapplicable instead of failed.
pub fn check_maximality(d: &Distribution, q: QParam, phi: &PhiSpec, tol: f64) -> Result<CheckReport> {
    let s = generalized_entropy(d, q, phi)?;
    let bound = uniform_entropy(d.len(), q, phi)?;
    let report = CheckReport::new("maximality", (s - bound).max(0.0), tol, false).with_witness(json!({
        "q": q.get(),
        "phi": phi.name(),
        "p": d,
        "entropy": s,
        "uniform_entropy": bound,
    }));
    if sign_condition_holds(phi) {
        Ok(report)
    } else {
        Ok(report.mark_inapplicable(format!(
            "phi `{}` violates the sign condition; maximality is not implied",
            phi.name()
        )))
    }
}

/// Expandability: appending an impossible outcome leaves `S_q` unchanged.
pub fn check_expandability(d: &Distribution, q: QParam, phi: &PhiSpec, tol: f64) -> Result<CheckReport> {
    let base = generalized_entropy(d, q, phi)?;
    let expanded = generalized_entropy(&d.expand(), q, phi)?;
    Ok(
        CheckReport::new("expandability", (expanded - base).abs(), tol, false).with_witness(json!({
            "q": q.get(),
            "phi": phi.name(),
            "p": d,
            "entropy": base,
            "expanded_entropy": expanded,
        })),
    )
}

/// Convergence of `S_q(d)` to `shannon(d) / phi'(1)` along
/// `q = 1 +- 10^-k`, `k = 2..=k_max`.
///
/// Passes when the residual is non-increasing in `k` on both sides and the
/// final residual is at most `10 * 10^-k_max * shannon(d) + 1e-12`. When
/// `phi'(1) != 1` the limit is a rescaled Shannon entropy and the report
/// says so.
pub fn check_shannon_limit(d: &Distribution, phi: &PhiSpec, k_max: i32) -> Result<CheckReport> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max must be at least 2, got {k_max}")));
    }
    let h = shannon(d);
    let slope = phi.derivative(1.0)?;
    if slope.abs() < crate::entropy::PHI_DERIVATIVE_FLOOR {
        return Err(Error::PhiDerivativeZero { derivative: slope });
    }
    let target = h / slope;

    let mut above = Vec::new();
    let mut below = Vec::new();
    for k in 2..=k_max {
        let step = 10f64.powi(-k);
        for (side, q) in [(&mut above, 1.0 + step), (&mut below, 1.0 - step)] {
            let s = generalized_entropy(d, QParam::new(q)?, phi)?;
            side.push(if s.is_finite() { (s - target).abs() } else { f64::INFINITY });
        }
    }
    let monotone = |r: &[f64]| r.windows(2).all(|w| w[1] <= w[0]);
    let is_monotone = monotone(&above) && monotone(&below);
    let residual = above.last().unwrap().max(*below.last().unwrap());
    let tol = 10.0 * 10f64.powi(-k_max) * h.abs() + 1e-12;

    let mut report = CheckReport::new("shannon_limit", residual, tol, false).with_witness(json!({
        "phi": phi.name(),
        "p": d,
        "shannon": h,
        "phi_slope_at_1": slope,
        "target": target,
        "k": (2..=k_max).collect::<Vec<_>>(),
        "residuals_above": above,
        "residuals_below": below,
    }));
    if !is_monotone {
        report = report.mark_failed("residual does not decrease monotonically as q -> 1");
    } else if (slope - 1.0).abs() > 1e-3 {
        report = report.with_note(format!(
            "phi'(1) = {slope}: S_q converges to shannon / {slope}, not to the Shannon entropy itself"
        ));
    }
    Ok(report)
}

/// Permutation invariance over the reversal and [`SYMMETRY_TRIALS`] random
/// permutations drawn from `seed`.
pub fn check_symmetry(d: &Distribution, q: QParam, phi: &PhiSpec, seed: u64) -> Result<CheckReport> {
    let base = generalized_entropy(d, q, phi)?;
    let n = d.len();
    let mut rng = seeded_rng(seed);
    let mut perms = vec![(0..n).rev().collect::<Vec<_>>()];
    perms.extend((0..SYMMETRY_TRIALS).map(|_| random_permutation(&mut rng, n)));

    let mut worst = 0.0f64;
    let mut worst_perm = perms[0].clone();
    for perm in perms {
        let s = generalized_entropy(&d.permuted(&perm)?, q, phi)?;
        let r = (s - base).abs();
        if r > worst || !r.is_finite() {
            worst = if r.is_finite() { r } else { f64::INFINITY };
            worst_perm = perm;
        }
    }
    Ok(CheckReport::new("symmetry", worst, SYMMETRY_TOL, false)
        .with_seed(seed)
        .with_witness(json!({
            "q": q.get(),
            "phi": phi.name(),
            "p": d,
            "permutation": worst_perm,
        })))
}
