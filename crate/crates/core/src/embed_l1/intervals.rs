//! Finite unions of open intervals with exact rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sorted, pairwise disjoint open intervals `(a, b)` with `a < b`.
///
/// Neighbouring intervals may share an endpoint; they stay separate
/// components because the shared point is not in the set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalIntervalSet {
    intervals: Vec<(Rat, Rat)>,
}

impl RationalIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates ordering and disjointness; empty intervals are dropped.
    pub fn new(intervals: Vec<(Rat, Rat)>) -> Result<Self> {
        let intervals: Vec<_> = intervals.into_iter().filter(|(a, b)| a < b).collect();
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::Usage(format!(
                    "intervals ({}, {}) and ({}, {}) overlap or are out of order",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(RationalIntervalSet { intervals })
    }

    /// `(lo, lo+1) ∪ ... ∪ (hi-1, hi)`.
    pub fn unit_cells(lo: u64, hi: u64) -> Self {
        RationalIntervalSet {
            intervals: (lo..hi).map(|t| (int(t), int(t + 1))).collect(),
        }
    }

    pub fn intervals(&self) -> &[(Rat, Rat)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rat {
        self.intervals.iter().fold(Rat::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = &self.intervals[i];
            let (b0, b1) = &other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 <= b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        RationalIntervalSet { intervals: out }
    }

    pub fn intersection_measure(&self, other: &Self) -> Rat {
        let mut total = Rat::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = &self.intervals[i];
            let (b0, b1) = &other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                total += hi - lo;
            }
            if a1 <= b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// `self ∖ clos(other)`.
    pub fn minus_closure(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, b) in &self.intervals {
            let mut start = a.clone();
            while j < other.intervals.len() && &other.intervals[j].1 <= a {
                j += 1;
            }
            let mut k = j;
            while k < other.intervals.len() && &other.intervals[k].0 < b {
                let (c, d) = &other.intervals[k];
                if &start < c {
                    out.push((start.clone(), c.clone()));
                }
                if d > &start {
                    start = d.clone();
                }
                k += 1;
            }
            if &start < b {
                out.push((start, b.clone()));
            }
        }
        RationalIntervalSet { intervals: out }
    }

    /// Least `N` for which every component is `(qD/D^{N+1}, (qD+r)/D^{N+1})`
    /// with `1 <= r <= D`, scanning `N` up to `max_level`.
    pub fn grid_level(&self, d: u64, max_level: u32) -> Result<u32> {
        if self.intervals.is_empty() {
            return Ok(0);
        }
        let d_big = BigInt::from(d);
        let mut scale = BigInt::one(); // D^N
        for n in 0..=max_level {
            let fits = self.intervals.iter().all(|(a, b)| {
                let start = a * Rat::from_integer(scale.clone());
                let parts = (b - a) * Rat::from_integer(&scale * &d_big);
                start.is_integer()
                    && parts.is_integer()
                    && parts.is_positive()
                    && parts <= Rat::from_integer(d_big.clone())
            });
            if fits {
                return Ok(n);
            }
            scale *= &d_big;
        }
        Err(Error::NotGridRepresentable { base: d })
    }

    /// Splits every component into `D^θ` blocks of `D` parts each and keeps
    /// the first `k` parts of every block.
    pub fn subdivide_keep(&self, d: u64, theta: u32, k: u64, limit: usize) -> Result<Self> {
        if k > d {
            return Err(Error::SelectionOutOfRange { k, max: d });
        }
        if k == 0 {
            return Ok(Self::empty());
        }
        let blocks = d
            .checked_pow(theta)
            .filter(|b| (*b as u128) * (self.intervals.len() as u128) <= limit as u128)
            .ok_or(Error::SizeGuard {
                count: format!("{}^{theta} x {}", d, self.intervals.len()),
                limit: limit as u64,
            })?;
        let parts = Rat::from_integer(BigInt::from(blocks) * BigInt::from(d));
        let mut out = Vec::with_capacity(self.intervals.len() * blocks as usize);
        for (a, b) in &self.intervals {
            let step = (b - a) / &parts;
            for m in 0..blocks {
                let lo = a + &step * int(m * d);
                let hi = a + &step * int(m * d + k);
                out.push((lo, hi));
            }
        }
        Ok(RationalIntervalSet { intervals: out })
    }
}

impl fmt::Display for RationalIntervalSet {
    /// One component per line as `a/b .. c/d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.intervals {
            writeln!(f, "{} .. {}", frac(a), frac(b))?;
        }
        Ok(())
    }
}

fn frac(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(i64, i64, i64, i64)]) -> RationalIntervalSet {
        RationalIntervalSet::new(v.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect()).unwrap()
    }

    #[test]
    fn grid_levels() {
        assert_eq!(RationalIntervalSet::unit_cells(0, 2).grid_level(2, 10).unwrap(), 0);
        assert_eq!(set(&[(0, 1, 1, 2)]).grid_level(2, 10).unwrap(), 0);
        assert_eq!(set(&[(0, 1, 1, 4)]).grid_level(2, 10).unwrap(), 1);
        assert!(set(&[(0, 1, 1, 3)]).grid_level(2, 10).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = RationalIntervalSet::unit_cells(0, 2);
        let b = set(&[(1, 2, 3, 2)]);
        assert_eq!(a.intersection_measure(&b), rat(1, 1));
        assert_eq!(a.intersect(&b), set(&[(1, 2, 1, 1), (1, 1, 3, 2)]));
        assert_eq!(a.minus_closure(&b), set(&[(0, 1, 1, 2), (3, 2, 2, 1)]));
        assert_eq!(a.minus_closure(&a), RationalIntervalSet::empty());
        assert!(RationalIntervalSet::new(vec![(rat(0, 1), rat(2, 1)), (rat(1, 1), rat(3, 1))]).is_err());
    }

    #[test]
    fn subdivision() {
        let a = RationalIntervalSet::unit_cells(0, 2);
        let half = a.subdivide_keep(2, 1, 1, 1000).unwrap();
        assert_eq!(half, set(&[(0, 1, 1, 4), (1, 2, 3, 4), (1, 1, 5, 4), (3, 2, 7, 4)]));
        assert_eq!(half.measure(), rat(1, 1));
        assert_eq!(a.subdivide_keep(2, 3, 0, 1000).unwrap().measure(), rat(0, 1));
        assert_eq!(a.subdivide_keep(2, 3, 2, 1000).unwrap().measure(), rat(2, 1));
        assert!(a.subdivide_keep(2, 3, 3, 1000).is_err());
        assert!(a.subdivide_keep(2, 20, 1, 1000).is_err());
    }

    #[test]
    fn dump_format() {
        assert_eq!(set(&[(0, 1, 1, 2)]).to_string(), "0/1 .. 1/2\n");
    }
}
