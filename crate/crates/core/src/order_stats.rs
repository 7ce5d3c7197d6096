//! Validated ordered samples with 1-indexed order-statistic access
//! (`X_{(1,n)} <= ... <= X_{(n,n)}`) and the `n = (s+1)k - 1` design map.

use crate::distributions::SeedSpec;
use crate::error::{Error, Result};

/// An ascending-sorted sample of strictly positive, finite observations.
///
/// Ties are kept as-is (stable sort): the sampled laws are continuous so
/// ties have probability zero, but user data may contain them; downstream
/// estimators then report a degenerate ratio rather than silently jittering
/// the data.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedSample {
    values: Vec<f64>,
}

impl OrderedSample {
    /// Sorts a copy of `raw`, rejecting empty, non-finite or non-positive
    /// input.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        for (idx, &v) in raw.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { index: idx + 1 });
            }
            if v <= 0.0 {
                return Err(Error::NonPositiveEntry {
                    index: idx + 1,
                    value: v,
                });
            }
        }
        let mut values = raw.to_vec();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Ok(Self { values })
    }

    /// Wraps a vector that is already ascending; the same validation as
    /// [`OrderedSample::new`] applies, plus an order check.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { index: idx + 1 });
            }
            if v <= 0.0 {
                return Err(Error::NonPositiveEntry {
                    index: idx + 1,
                    value: v,
                });
            }
            if idx > 0 && values[idx - 1] > v {
                return Err(Error::domain(format!(
                    "values not ascending at position {}",
                    idx + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty() // construction rejects empty samples
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `i`-th smallest value, 1-indexed.
    pub fn order_stat(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.values.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.values.len(),
            });
        }
        Ok(self.values[i - 1])
    }
}

/// The `(k, lower, upper)` design implied by a sample of size
/// `n = (s+1)k - 1`: the estimators read `X_{(k,n)}` and `X_{(ks,n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignIndices {
    pub k: usize,
    pub lower: usize,
    pub upper: usize,
}

/// Solves `n = (s+1)k - 1` for `k`; errors when `n + 1` is not divisible by
/// `s + 1`.
pub fn design_indices(n: usize, s: u32) -> Result<DesignIndices> {
    if s < 2 {
        return Err(Error::domain(format!("s must be >= 2, got {s}")));
    }
    if n < 2 {
        return Err(Error::IncompatibleSampleSize { n, s });
    }
    let div = s as usize + 1;
    if !(n + 1).is_multiple_of(div) {
        return Err(Error::IncompatibleSampleSize { n, s });
    }
    let k = (n + 1) / div;
    Ok(DesignIndices {
        k,
        lower: k,
        upper: k * s as usize,
    })
}

/// Number of observations that must be dropped so the remainder has a size
/// of the form `(s+1)k - 1`.
pub fn discard_count(n: usize, s: u32) -> usize {
    (n + 1) % (s as usize + 1)
}

/// Drops `discard_count(n, s)` observations chosen uniformly at random
/// (partial Fisher-Yates keyed by `seed`), returning the kept values in
/// their original relative order plus the discard count.
///
/// The raw design requires an exact sample size; discarding at random keeps
/// the remaining observations an i.i.d. subsample, which truncating the
/// largest values would not.
pub fn truncate_to_design(raw: &[f64], s: u32, seed: SeedSpec) -> (Vec<f64>, usize) {
    use rand_chacha::rand_core::Rng;

    let n = raw.len();
    let drop = discard_count(n, s).min(n);
    if drop == 0 {
        return (raw.to_vec(), 0);
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = seed.rng();
    for i in 0..drop {
        let j = i + (rng.next_u64() % (n - i) as u64) as usize;
        indices.swap(i, j);
    }
    let mut dropped = vec![false; n];
    for &i in &indices[..drop] {
        dropped[i] = true;
    }
    let kept = raw
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(&v, _)| v)
        .collect();
    (kept, drop)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_validates() {
        let s = OrderedSample::new(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        let single = OrderedSample::new(&[5.0]).unwrap();
        assert_eq!(single.values(), &[5.0]);
        assert_eq!(
            OrderedSample::new(&[1.0, -2.0]),
            Err(Error::NonPositiveEntry {
                index: 2,
                value: -2.0
            })
        );
        assert_eq!(OrderedSample::new(&[]), Err(Error::EmptySample));
        assert_eq!(
            OrderedSample::new(&[1.0, f64::NAN]),
            Err(Error::NonFiniteEntry { index: 2 })
        );
        assert_eq!(
            OrderedSample::new(&[1.0, 0.0]),
            Err(Error::NonPositiveEntry {
                index: 2,
                value: 0.0
            })
        );
    }

    #[test]
    fn from_sorted_checks_order() {
        assert!(OrderedSample::from_sorted(vec![1.0, 2.0, 2.0]).is_ok());
        assert!(OrderedSample::from_sorted(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn order_stat_access() {
        let s = OrderedSample::new(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.order_stat(1).unwrap(), 1.0);
        assert_eq!(s.order_stat(3).unwrap(), 3.0);
        assert_eq!(
            s.order_stat(4),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
        assert_eq!(
            s.order_stat(0),
            Err(Error::IndexOutOfRange { index: 0, n: 3 })
        );
    }

    #[test]
    fn order_stats_monotone() {
        let s = OrderedSample::new(&[5.0, 1.0, 4.0, 2.0, 3.0]).unwrap();
        for i in 1..s.len() {
            assert!(s.order_stat(i).unwrap() <= s.order_stat(i + 1).unwrap());
        }
    }

    #[test]
    fn design_indices_examples() {
        let d = design_indices(5, 2).unwrap();
        assert_eq!((d.k, d.lower, d.upper), (2, 2, 4));
        let d = design_indices(1499, 2).unwrap();
        assert_eq!((d.k, d.lower, d.upper), (500, 500, 1000));
        assert_eq!(
            design_indices(6, 2),
            Err(Error::IncompatibleSampleSize { n: 6, s: 2 })
        );
        assert!(design_indices(5, 1).is_err());
    }

    #[test]
    fn design_indices_structure() {
        for s in 2u32..=6 {
            for k in 1usize..=50 {
                let n = (s as usize + 1) * k - 1;
                let d = design_indices(n, s).unwrap();
                assert_eq!(d.k, k);
                assert_eq!(d.upper, d.lower * s as usize);
                assert!(d.upper <= n);
            }
        }
    }

    #[test]
    fn truncation_counts_and_determinism() {
        let raw: Vec<f64> = (1..=7).map(|i| i as f64).collect();
        let seed = SeedSpec::new(20170823, u64::MAX);
        let (kept, dropped) = truncate_to_design(&raw, 2, seed);
        assert_eq!(dropped, 2);
        assert_eq!(kept.len(), 5);
        assert!(design_indices(kept.len(), 2).is_ok());
        // every kept value came from the input
        assert!(kept.iter().all(|v| raw.contains(v)));
        // deterministic for a fixed seed
        let (kept2, _) = truncate_to_design(&raw, 2, seed);
        assert_eq!(kept, kept2);
        // already-compatible sizes are untouched
        let (kept3, dropped3) = truncate_to_design(&raw[..5], 2, seed);
        assert_eq!(dropped3, 0);
        assert_eq!(kept3, &raw[..5]);
    }

    #[test]
    fn discard_count_matches_largest_compatible_size() {
        for s in 2u32..=5 {
            // n = s is the smallest size with a design (k = 1)
            for n in (s as usize)..200 {
                let d = discard_count(n, s);
                let kept = n - d;
                assert!((kept + 1).is_multiple_of(s as usize + 1));
                // minimal: dropping fewer leaves an incompatible size
                if d > 0 {
                    assert!(!(n - (d - 1) + 1).is_multiple_of(s as usize + 1));
                }
            }
        }
    }
}
