//! Finite probability distributions, two-level refinements and independent
//! product systems.
//!
//! Every value here is immutable once built. Derived objects (marginals,
//! conditionals, joints) own copies of their data.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on `|sum(p) - 1|` accepted by every constructor.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A point of the probability simplex: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    p: Vec<f64>,
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Empty("weights"));
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Error::NonFiniteInput { index });
        }
        if w < 0.0 {
            return Err(Error::NegativeWeight { index, value: w });
        }
    }
    Ok(())
}

fn check_total(sum: f64) -> Result<()> {
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotNormalized {
            sum,
            tol: SIMPLEX_TOL,
        });
    }
    Ok(())
}

impl Distribution {
    /// Builds a distribution from raw weights.
    ///
    /// With `normalize` set, weights are divided by their total; otherwise
    /// they must already sum to one within [`SIMPLEX_TOL`].
    pub fn new(weights: Vec<f64>, normalize: bool) -> Result<Self> {
        check_weights(&weights)?;
        let total: f64 = weights.iter().sum();
        if normalize {
            if total == 0.0 {
                return Err(Error::ZeroTotalMass);
            }
            if !total.is_finite() {
                return Err(Error::NonFiniteInput { index: 0 });
            }
            let p = weights.into_iter().map(|w| w / total).collect();
            return Ok(Self { p });
        }
        check_total(total)?;
        Ok(Self { p: weights })
    }

    /// Shorthand for `Distribution::new(probs, false)`.
    pub fn from_probs(probs: impl Into<Vec<f64>>) -> Result<Self> {
        Self::new(probs.into(), false)
    }

    /// The uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Self {
            p: vec![1.0 / n as f64; n],
        })
    }

    // Callers guarantee the simplex invariants.
    pub(crate) fn from_raw(p: Vec<f64>) -> Self {
        debug_assert!(!p.is_empty());
        Self { p }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    /// Always false; a distribution has at least one outcome.
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.p.iter().copied()
    }

    /// Entries with positive mass, in order.
    pub fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.p.iter().copied().filter(|&x| x > 0.0)
    }

    /// Appends one zero-probability outcome.
    pub fn expand(&self) -> Self {
        let mut p = Vec::with_capacity(self.p.len() + 1);
        p.extend_from_slice(&self.p);
        p.push(0.0);
        Self { p }
    }

    /// Reorders entries by `perm`, which must be a permutation of `0..len`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.p.len();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for distribution of length {n}",
                perm.len()
            )));
        }
        for &i in perm {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Self {
            p: perm.iter().map(|&i| self.p[i]).collect(),
        })
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidArgument(
                "mixing distributions of different lengths".into(),
            ));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        let p = self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Self { p })
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.p
    }
}

/// A two-level grouping `p_ij` whose block sums give the coarse marginals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    blocks: Vec<Vec<f64>>,
    marginals: Distribution,
}

impl Refinement {
    pub fn new(blocks: Vec<Vec<f64>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty("refinement blocks"));
        }
        let mut offset = 0;
        let mut marginals = Vec::with_capacity(blocks.len());
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Empty("refinement block"));
            }
            check_weights(block).map_err(|e| match e {
                Error::NegativeWeight { index, value } => Error::NegativeWeight {
                    index: offset + index,
                    value,
                },
                Error::NonFiniteInput { index } => Error::NonFiniteInput {
                    index: offset + index,
                },
                other => other,
            })?;
            offset += block.len();
            marginals.push(block.iter().sum::<f64>());
        }
        check_total(marginals.iter().sum())?;
        Ok(Self {
            blocks,
            marginals: Distribution::from_raw(marginals),
        })
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Coarse distribution `p_i = sum_j p_ij`.
    pub fn marginals(&self) -> &Distribution {
        &self.marginals
    }

    /// All `p_ij` in block order.
    pub fn flatten(&self) -> Distribution {
        Distribution::from_raw(self.blocks.iter().flatten().copied().collect())
    }

    /// The conditional distribution `p_ij / p_i` of block `i` (zero-based).
    pub fn conditional(&self, i: usize) -> Result<Distribution> {
        let block = self.blocks.get(i).ok_or(Error::BlockOutOfRange {
            index: i,
            len: self.blocks.len(),
        })?;
        let pi = self.marginals.p[i];
        if pi <= 0.0 {
            return Err(Error::ZeroMarginal { block: i });
        }
        Ok(Distribution::from_raw(
            block.iter().map(|x| x / pi).collect(),
        ))
    }
}

/// Joint distribution of two independent systems, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSystem {
    a: Distribution,
    b: Distribution,
    joint: Distribution,
}

impl ProductSystem {
    pub fn a(&self) -> &Distribution {
        &self.a
    }

    pub fn b(&self) -> &Distribution {
        &self.b
    }

    pub fn joint(&self) -> &Distribution {
        &self.joint
    }

    /// The joint viewed as a refinement whose blocks are the rows `a_i * b`.
    pub fn as_refinement(&self) -> Refinement {
        let m = self.b.len();
        let blocks: Vec<Vec<f64>> = self.joint.p.chunks(m).map(<[f64]>::to_vec).collect();
        let marginals = blocks.iter().map(|row| row.iter().sum()).collect();
        Refinement {
            blocks,
            marginals: Distribution::from_raw(marginals),
        }
    }
}

/// Independent product `joint[i * m + j] = a_i * b_j`.
pub fn product(a: &Distribution, b: &Distribution) -> ProductSystem {
    let joint = a
        .p
        .iter()
        .flat_map(|&ai| b.p.iter().map(move |&bj| ai * bj))
        .collect();
    ProductSystem {
        a: a.clone(),
        b: b.clone(),
        joint: Distribution::from_raw(joint),
    }
}

/// Integer multiplicities `m_i` with `sum m_i = denominator` approximating
/// `d`, by largest-remainder apportionment. Ties go to the lower index.
pub fn rational_approx(d: &Distribution, denominator: u64) -> Result<Vec<u64>> {
    let n = d.len();
    if denominator < n as u64 {
        return Err(Error::DenominatorTooSmall { denominator, n });
    }
    let total: f64 = d.p.iter().sum();
    let scale = denominator as f64 / total;
    let quotas: Vec<f64> = d.p.iter().map(|&p| p * scale).collect();
    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();

    let mut order: Vec<usize> = (0..n).collect();
    let frac = |i: usize| quotas[i] - quotas[i].floor();
    if assigned <= denominator {
        let mut remaining = denominator - assigned;
        order.sort_by(|&i, &j| frac(j).total_cmp(&frac(i)).then(i.cmp(&j)));
        for &i in order.iter().cycle() {
            if remaining == 0 {
                break;
            }
            counts[i] += 1;
            remaining -= 1;
        }
    } else {
        // Only reachable through rounding when the sum is slightly above 1.
        let mut excess = assigned - denominator;
        order.sort_by(|&i, &j| frac(i).total_cmp(&frac(j)).then(j.cmp(&i)));
        while excess > 0 {
            for &i in &order {
                if excess == 0 {
                    break;
                }
                if counts[i] > 0 {
                    counts[i] -= 1;
                    excess -= 1;
                }
            }
        }
    }
    Ok(counts)
}
