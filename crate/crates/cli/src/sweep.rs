//! Entropy as a function of `q` over an evenly spaced range.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use nonext::CheckReport;

/// `LO:HI:STEP` with `0 < LO <= HI` and `STEP > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

const MAX_POINTS: usize = 1_000_000;

impl FromStr for QRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected LO:HI:STEP, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
        let range = QRange {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(range.lo > 0.0 && range.lo.is_finite() && range.hi.is_finite()) {
            return Err("q values must be positive and finite".into());
        }
        if range.hi < range.lo {
            return Err("HI must not be below LO".into());
        }
        if !(range.step > 0.0 && range.step.is_finite()) {
            return Err("STEP must be positive".into());
        }
        if (range.hi - range.lo) / range.step >= MAX_POINTS as f64 {
            return Err(format!("range has more than {MAX_POINTS} points"));
        }
        Ok(range)
    }
}

impl fmt::Display for QRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl QRange {
    /// `lo + i * step` for every `i` that stays within `hi` (with a small
    /// allowance so that an endpoint hit by rounding is kept).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

/// Smoothness of a sweep across `q = 1`.
///
/// Every interval touching `q = 1` must change by no more than twice the
/// step times the steepest slope on the intervals adjacent to it, and no
/// value may be NaN or infinite.
pub fn continuity_report(qs: &[f64], values: &[f64]) -> CheckReport {
    let name = "q_continuity";
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return CheckReport::new(name, f64::MAX, 0.0, false)
            .with_witness(json!({ "q": qs[i] }))
            .mark_failed(format!("non-finite entropy at q = {}", qs[i]));
    }
    let crossing: Vec<usize> = (0..qs.len().saturating_sub(1))
        .filter(|&k| qs[k] <= 1.0 && 1.0 <= qs[k + 1])
        .collect();
    if crossing.is_empty() {
        return CheckReport::new(name, 0.0, 0.0, false).with_note("range does not cross q = 1");
    }
    let (first, last) = (crossing[0], *crossing.last().unwrap());
    let slope = |k: usize| ((values[k + 1] - values[k]) / (qs[k + 1] - qs[k])).abs();
    let mut neighbours = Vec::new();
    if first > 0 {
        neighbours.push(first - 1);
    }
    if last + 2 < qs.len() {
        neighbours.push(last + 1);
    }
    let jump = crossing
        .iter()
        .map(|&k| (values[k + 1] - values[k]).abs())
        .fold(0.0f64, f64::max);
    let widest = crossing
        .iter()
        .map(|&k| qs[k + 1] - qs[k])
        .fold(0.0f64, f64::max);
    let witness = json!({
        "crossing_q": crossing.iter().map(|&k| [qs[k], qs[k + 1]]).collect::<Vec<_>>(),
        "jump": jump,
    });
    if neighbours.is_empty() {
        return CheckReport::new(name, jump, 0.0, false)
            .with_witness(witness)
            .mark_inapplicable("no intervals beside the q = 1 crossing to estimate the slope from");
    }
    let max_slope = neighbours.iter().map(|&k| slope(k)).fold(0.0f64, f64::max);
    CheckReport::new(name, jump, 2.0 * widest * max_slope, false).with_witness(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ranges() {
        let r: QRange = "0.5:1.5:0.25".parse().unwrap();
        assert_eq!(r.points(), vec![0.5, 0.75, 1.0, 1.25, 1.5]);
        let r: QRange = "0.1:0.3:0.1".parse().unwrap();
        assert_eq!(r.points().len(), 3);
        assert!("0:1:0.1".parse::<QRange>().is_err());
        assert!("1:0.5:0.1".parse::<QRange>().is_err());
        assert!("0.5:1:0".parse::<QRange>().is_err());
        assert!("0.5:1".parse::<QRange>().is_err());
        assert!("a:1:0.1".parse::<QRange>().is_err());
    }

    #[test]
    fn smooth_and_broken_sweeps() {
        let qs = [0.8, 0.9, 1.0, 1.1, 1.2];
        let smooth: Vec<f64> = qs.iter().map(|q| 2.0 - q).collect();
        assert!(continuity_report(&qs, &smooth).is_ok());

        let mut broken = smooth.clone();
        broken[2] += 0.5;
        assert!(!continuity_report(&qs, &broken).is_ok());

        let mut nan = smooth.clone();
        nan[1] = f64::NAN;
        assert!(!continuity_report(&qs, &nan).is_ok());

        let away = [2.0, 3.0];
        assert!(continuity_report(&away, &[1.0, 0.5]).is_ok());
    }
}
