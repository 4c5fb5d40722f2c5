//! Rebuilds `S_q` on rational distributions from uniform values alone.
//!
//! With `f_q(n)` the entropy of the uniform distribution on `n` outcomes,
//! splitting each of `M = sum m_i` equally likely outcomes into blocks of
//! sizes `m_i` and applying generalized Shannon additivity gives
//!
//! ```text
//! f_q(M) = S_q(m_1/M, ..., m_n/M) + sum_i (m_i/M)^q f_q(m_i)
//! ```
//!
//! so `S_q` at a rational point is determined by `f_q` at integers. This
//! module evaluates that right-hand side without touching the closed form on
//! the full distribution, which makes it an independent oracle for
//! [`generalized_entropy`].

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::json;

use crate::distributions::{rational_approx, Distribution};
use crate::entropy::{generalized_entropy, uniform_entropy, QParam};
use crate::error::{Error, Result};
use crate::phi::PhiSpec;
use crate::report::{relative_residual, CheckReport};
use crate::sampling::seeded_rng;

/// Multiplicities `m_i` describing the rational point `p_i = m_i / M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalDistribution {
    m: Vec<u64>,
    total: u64,
}

impl RationalDistribution {
    pub fn new(m: Vec<u64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Empty("multiplicities"));
        }
        let total = m
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::InvalidArgument("multiplicities overflow u64".into()))?;
        if total == 0 {
            return Err(Error::ZeroTotalMass);
        }
        Ok(Self { m, total })
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.m
    }

    /// `M = sum m_i`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn to_distribution(&self) -> Distribution {
        let total = self.total as f64;
        Distribution::from_raw(self.m.iter().map(|&k| k as f64 / total).collect())
    }

    // Zero multiplicities are dropped: an impossible outcome does not change
    // S_q, and f_q(0) is never needed.
    fn positive(&self) -> impl Iterator<Item = u64> + '_ {
        self.m.iter().copied().filter(|&k| k > 0)
    }
}

fn power_weight(p: f64, q: QParam) -> f64 {
    if q.near_one() {
        p
    } else {
        (q.get() * p.ln()).exp()
    }
}

fn int_power(n: u64, exponent: f64) -> f64 {
    (exponent * (n as f64).ln()).exp()
}

/// `f_q(mn) = f_q(n) + n^(1-q) f_q(m)`, the functional equation obeyed by
/// uniform entropies. Residual is relative to `max(1, |f_q(mn)|)`.
pub fn check_functional_equation(m: u64, n: u64, q: QParam, phi: &PhiSpec, tol: f64) -> Result<CheckReport> {
    if m == 0 || n == 0 {
        return Err(Error::ZeroSize);
    }
    let mn = m
        .checked_mul(n)
        .ok_or_else(|| Error::InvalidArgument("m * n overflows".into()))?;
    let f = |k: u64| uniform_entropy(k as usize, q, phi);
    let lhs = f(mn)?;
    let scale = if q.near_one() { 1.0 } else { int_power(n, 1.0 - q.get()) };
    let rhs = f(n)? + scale * f(m)?;
    Ok(
        CheckReport::new("functional_equation", relative_residual(lhs, rhs), tol, true).with_witness(json!({
            "m": m,
            "n": n,
            "q": q.get(),
            "phi": phi.name(),
            "lhs": lhs,
            "rhs": rhs,
        })),
    )
}

/// `f_q(n) / (1 - n^(1-q))`, which is `1 / phi(q)` for every `n >= 2`.
pub fn uniform_ratio(n: u64, q: QParam, phi: &PhiSpec) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("ratio needs n >= 2".into()));
    }
    if q.near_one() {
        return Err(Error::InvalidArgument("ratio is 0/0 at q = 1".into()));
    }
    let denom = -((1.0 - q.get()) * (n as f64).ln()).exp_m1();
    Ok(uniform_entropy(n as usize, q, phi)? / denom)
}

/// `f_q(M) - sum_i p_i^q f_q(m_i)`: `S_q` at the rational point, computed
/// from uniform entropies only.
pub fn reconstruct_rational(rd: &RationalDistribution, q: QParam, phi: &PhiSpec) -> Result<f64> {
    let total = rd.total as f64;
    let mut s = uniform_entropy(rd.total as usize, q, phi)?;
    for k in rd.positive() {
        s -= power_weight(k as f64 / total, q) * uniform_entropy(k as usize, q, phi)?;
    }
    Ok(s)
}

/// Relative deviation of `sum p_i^q m_i^(1-q)` from `M^(1-q)`.
pub fn proof_identity_residual(rd: &RationalDistribution, q: QParam) -> f64 {
    let total = rd.total as f64;
    let exponent = 1.0 - q.get();
    let lhs: f64 = rd
        .positive()
        .map(|k| power_weight(k as f64 / total, q) * int_power(k, exponent))
        .sum();
    let rhs = int_power(rd.total, exponent);
    (lhs - rhs).abs() / rhs
}

/// Local Lipschitz estimate of `S_q` at `d`: central differences along
/// `2n` random unit directions tangent to the simplex (restricted to the
/// support), maximum absolute slope times `sqrt(2)`.
pub fn lipschitz_estimate(d: &Distribution, q: QParam, phi: &PhiSpec, seed: u64) -> Result<f64> {
    let p = d.as_slice();
    let support: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    if support.len() < 2 {
        return Ok(0.0);
    }
    let min_p = support.iter().map(|&i| p[i]).fold(f64::INFINITY, f64::min);
    let mut rng = seeded_rng(seed);
    let mut slope = 0.0f64;
    for _ in 0..2 * p.len() {
        let mut v: Vec<f64> = support.iter().map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let h = 1e-6f64.min(0.5 * min_p / vmax);
        let shifted = |sign: f64| {
            let mut out = p.to_vec();
            for (&i, &vi) in support.iter().zip(&v) {
                out[i] += sign * h * vi;
            }
            Distribution::from_raw(out)
        };
        let up = generalized_entropy(&shifted(1.0), q, phi)?;
        let down = generalized_entropy(&shifted(-1.0), q, phi)?;
        slope = slope.max(((up - down) / (2.0 * h)).abs());
    }
    Ok(slope * std::f64::consts::SQRT_2)
}

/// Compares the reconstruction at the nearest rational point with
/// denominator `denominator` against the closed form at `d`. Passes when
/// the gap is within `L * n / M + 1e-10`, `L` from [`lipschitz_estimate`].
pub fn uniqueness_check(d: &Distribution, q: QParam, phi: &PhiSpec, denominator: u64, seed: u64) -> Result<CheckReport> {
    let m = rational_approx(d, denominator)?;
    let rd = RationalDistribution::new(m)?;
    let reconstructed = reconstruct_rational(&rd, q, phi)?;
    let direct = generalized_entropy(d, q, phi)?;
    let lipschitz = lipschitz_estimate(d, q, phi, seed)?;
    let tol = lipschitz * d.len() as f64 / denominator as f64 + 1e-10;
    Ok(CheckReport::new("uniqueness", (reconstructed - direct).abs(), tol, false)
        .with_seed(seed)
        .with_witness(json!({
            "q": q.get(),
            "phi": phi.name(),
            "p": d,
            "denominator": denominator,
            "multiplicities": rd.multiplicities(),
            "reconstructed": reconstructed,
            "closed_form": direct,
            "lipschitz": lipschitz,
        })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn rational_distribution_validation() {
        assert!(RationalDistribution::new(vec![]).is_err());
        assert_eq!(RationalDistribution::new(vec![0, 0]), Err(Error::ZeroTotalMass));
        let rd = RationalDistribution::new(vec![2, 0, 1]).unwrap();
        assert_eq!(rd.total(), 3);
        assert_eq!(rd.to_distribution().len(), 3);
    }

    #[test]
    fn functional_equation_instances() {
        let ts = PhiSpec::tsallis();
        let rep = check_functional_equation(2, 2, q(2.0), &ts, 1e-12).unwrap();
        assert!(rep.is_ok());
        assert!((rep.witness["lhs"].as_f64().unwrap() - 0.75).abs() < 1e-15);
        let rep = check_functional_equation(7, 1, q(0.4), &PhiSpec::cubic(), 1e-12).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert!(check_functional_equation(3, 5, q(1.0), &PhiSpec::havrda_charvat(), 1e-12).unwrap().is_ok());
        assert_eq!(check_functional_equation(0, 2, q(2.0), &ts, 1e-12).unwrap_err(), Error::ZeroSize);
    }

    #[test]
    fn ratio_equals_inverse_phi() {
        for phi in [PhiSpec::tsallis(), PhiSpec::cubic(), PhiSpec::havrda_charvat()] {
            for qq in [0.3, 2.0, 5.0] {
                let inv = 1.0 / phi.eval(qq);
                for n in [2, 3, 10, 1000] {
                    let r = uniform_ratio(n, q(qq), &phi).unwrap();
                    assert!((r - inv).abs() <= 1e-12 * inv.abs(), "{} q={qq} n={n}", phi.name());
                }
            }
        }
        assert!(uniform_ratio(1, q(2.0), &PhiSpec::tsallis()).is_err());
        assert!(uniform_ratio(3, q(1.0), &PhiSpec::tsallis()).is_err());
    }

    #[test]
    fn reconstruction_hand_values() {
        let ts = PhiSpec::tsallis();
        let r = reconstruct_rational(&RationalDistribution::new(vec![1, 1]).unwrap(), q(2.0), &ts).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let r = reconstruct_rational(&RationalDistribution::new(vec![2, 1]).unwrap(), q(2.0), &ts).unwrap();
        assert!((r - 4.0 / 9.0).abs() < 1e-15);
        let r = reconstruct_rational(&RationalDistribution::new(vec![9]).unwrap(), q(0.6), &ts).unwrap();
        assert!(r.abs() < 1e-15);
        // zeros are dropped
        let with_zero = reconstruct_rational(&RationalDistribution::new(vec![2, 0, 1]).unwrap(), q(2.0), &ts).unwrap();
        assert!((with_zero - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn proof_identity_holds() {
        let rd = RationalDistribution::new(vec![3, 1, 4, 1, 5]).unwrap();
        for qq in [0.3, 1.0, 2.0, 5.0] {
            assert!(proof_identity_residual(&rd, q(qq)) < 1e-12);
        }
    }

    #[test]
    fn uniqueness_examples() {
        let ts = PhiSpec::tsallis();
        let d = Distribution::from_probs([0.5, 0.25, 0.25]).unwrap();
        let rep = uniqueness_check(&d, q(2.0), &ts, 8, 1).unwrap();
        assert!(rep.residual <= 1e-10);
        let rep = uniqueness_check(&Distribution::uniform(3).unwrap(), q(0.5), &ts, 3, 1).unwrap();
        assert!(rep.residual <= 1e-10);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let d = Distribution::from_probs([golden, 1.0 - golden]).unwrap();
        let rep = uniqueness_check(&d, q(2.0), &ts, 10_000, 1).unwrap();
        assert!(rep.is_ok(), "{rep:?}");
        let l = rep.witness["lipschitz"].as_f64().unwrap();
        assert!(l > 0.0 && rep.residual <= l * 2.0 / 1e4);
        assert!(matches!(
            uniqueness_check(&d, q(2.0), &ts, 1, 1),
            Err(Error::DenominatorTooSmall { .. })
        ));
    }
}
