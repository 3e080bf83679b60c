//! Digit cylinders: subsets of `[0, M+1)` fixed by an integer-part range and
//! ranges for finitely many base-`D` digits of the fractional part.
//!
//! Up to null sets, every set the separated construction produces has this
//! shape. Digits at distinct positions are independent and uniform under
//! Lebesgue measure, which is exactly what the intersection formulas need.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::intervals::{int, Rat, RationalIntervalSet};
use crate::error::{Error, Result};

/// `{t + 0.d₁d₂… : lo ≤ t < hi, d_p ∈ [a_p, b_p) for every constrained p}`.
///
/// Empty cylinders are normalized to `lo = hi = 0` with no digits, and
/// unconstrained digit ranges `[0, D)` are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    base: u64,
    lo: u64,
    hi: u64,
    digits: BTreeMap<u32, (u64, u64)>,
}

impl Cylinder {
    pub fn empty(base: u64) -> Self {
        Cylinder {
            base,
            lo: 0,
            hi: 0,
            digits: BTreeMap::new(),
        }
    }

    /// Integer parts in `lo..hi`, all digits free.
    pub fn range(base: u64, lo: u64, hi: u64) -> Self {
        Cylinder {
            base,
            lo,
            hi,
            digits: BTreeMap::new(),
        }
        .normalized()
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn integer_range(&self) -> (u64, u64) {
        (self.lo, self.hi)
    }

    pub fn digits(&self) -> &BTreeMap<u32, (u64, u64)> {
        &self.digits
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    /// Deepest constrained digit position, 0 when only the integer part is.
    pub fn depth(&self) -> u32 {
        self.digits.keys().next_back().copied().unwrap_or(0)
    }

    fn digit_range(&self, p: u32) -> (u64, u64) {
        self.digits.get(&p).copied().unwrap_or((0, self.base))
    }

    fn normalized(mut self) -> Self {
        let base = self.base;
        self.digits.retain(|_, r| *r != (0, base));
        if self.lo >= self.hi || self.digits.values().any(|(a, b)| a >= b) {
            return Cylinder::empty(base);
        }
        self
    }

    /// Adds the constraint `digit_p ∈ [a, b)`.
    pub fn constrain(&self, p: u32, a: u64, b: u64) -> Self {
        let (x, y) = self.digit_range(p);
        let mut out = self.clone();
        out.digits.insert(p, (x.max(a), y.min(b)));
        out.normalized()
    }

    pub fn measure(&self) -> Rat {
        if self.is_empty() {
            return Rat::zero();
        }
        let mut num = BigInt::from(self.hi - self.lo);
        let mut den = BigInt::one();
        for (a, b) in self.digits.values() {
            num *= b - a;
            den *= self.base;
        }
        Rat::new(num, den)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.base, other.base);
        let mut out = Cylinder {
            base: self.base,
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
            digits: self.digits.clone(),
        };
        for (&p, &(a, b)) in &other.digits {
            let (x, y) = self.digit_range(p);
            out.digits.insert(p, (x.max(a), y.min(b)));
        }
        out.normalized()
    }

    pub fn intersection_measure(&self, other: &Self) -> Rat {
        self.intersect(other).measure()
    }

    /// `self ∖ other` up to a null set, when the result is again a cylinder.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        let common = self.intersect(other);
        if common.is_empty() {
            return Ok(self.clone());
        }
        let mut differing = Vec::new();
        if (common.lo, common.hi) != (self.lo, self.hi) {
            differing.push(None);
        }
        let positions: std::collections::BTreeSet<u32> =
            self.digits.keys().chain(common.digits.keys()).copied().collect();
        for p in positions {
            if common.digit_range(p) != self.digit_range(p) {
                differing.push(Some(p));
            }
        }
        let cut = |(a, b): (u64, u64), (c, d): (u64, u64)| -> Result<(u64, u64)> {
            if c == a {
                Ok((d, b))
            } else if d == b {
                Ok((a, c))
            } else {
                Err(Error::NotCylinder(format!("removing [{c}, {d}) from [{a}, {b}) splits it")))
            }
        };
        match differing.as_slice() {
            [] => Ok(Cylinder::empty(self.base)),
            [None] => {
                let (lo, hi) = cut((self.lo, self.hi), (common.lo, common.hi))?;
                Ok(Cylinder { lo, hi, ..self.clone() }.normalized())
            }
            [Some(p)] => {
                let r = cut(self.digit_range(*p), common.digit_range(*p))?;
                let mut out = self.clone();
                out.digits.insert(*p, r);
                Ok(out.normalized())
            }
            _ => Err(Error::NotCylinder(format!(
                "difference differs in {} coordinates",
                differing.len()
            ))),
        }
    }

    /// `self ⊆ other` up to a null set.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.is_empty() || self.intersect(other) == *self
    }

    /// Explicit open intervals; fails above `limit` cells.
    pub fn to_intervals(&self, limit: usize) -> Result<RationalIntervalSet> {
        if self.is_empty() {
            return Ok(RationalIntervalSet::empty());
        }
        let depth = self.depth();
        let cells_per_unit = (self.base as u128).checked_pow(depth);
        let total = cells_per_unit.map(|c| c * (self.hi - self.lo) as u128);
        let total = match total {
            Some(t) if t <= limit as u128 => t as u64,
            _ => {
                return Err(Error::SizeGuard {
                    count: format!("{}^{depth} cells", self.base),
                    limit: limit as u64,
                })
            }
        };
        let per = cells_per_unit.unwrap() as u64;
        let width = Rat::new(BigInt::one(), BigInt::from(per));
        let mut out: Vec<(Rat, Rat)> = Vec::new();
        let mut prev_cell: Option<u64> = None;
        for cell in 0..total {
            let t = self.lo + cell / per;
            let mut rem = cell % per;
            let mut keep = true;
            for p in (1..=depth).rev() {
                let digit = rem % self.base;
                rem /= self.base;
                let (a, b) = self.digit_range(p);
                if digit < a || digit >= b {
                    keep = false;
                    break;
                }
            }
            if !keep {
                continue;
            }
            let start = int(t) + &width * int(cell % per);
            let end = &start + &width;
            // adjacent cells inside one unit are merged; the shared endpoint is null
            match (prev_cell, out.last_mut()) {
                (Some(pc), Some(last)) if pc + 1 == cell && cell % per != 0 => last.1 = end,
                _ => out.push((start, end)),
            }
            prev_cell = Some(cell);
        }
        RationalIntervalSet::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed_l1::intervals::rat;

    #[test]
    fn measure_and_intersection() {
        let c = Cylinder::range(2, 0, 2);
        assert_eq!(c.measure(), rat(2, 1));
        let a = c.constrain(1, 0, 1);
        let b = c.constrain(2, 0, 1);
        assert_eq!(a.measure(), rat(1, 1));
        assert_eq!(a.intersection_measure(&b), rat(1, 2));
        assert!(a.constrain(1, 1, 2).is_empty());
        assert_eq!(c.constrain(1, 0, 2), c);
    }

    #[test]
    fn difference() {
        let c = Cylinder::range(3, 0, 4);
        let a = c.constrain(5, 0, 2);
        assert_eq!(a.minus(&a.constrain(5, 0, 1)).unwrap(), c.constrain(5, 1, 2));
        assert_eq!(c.minus(&Cylinder::range(3, 0, 1)).unwrap(), Cylinder::range(3, 1, 4));
        assert!(c.minus(&Cylinder::range(3, 1, 2)).is_err());
        assert!(c.minus(&c.constrain(1, 0, 1).constrain(2, 0, 1)).is_err());
        assert!(a.minus(&a).unwrap().is_empty());
        assert_eq!(a.minus(&Cylinder::empty(3)).unwrap(), a);
    }

    #[test]
    fn explicit_intervals() {
        let c = Cylinder::range(2, 0, 2).constrain(2, 0, 1);
        let iv = c.to_intervals(100).unwrap();
        assert_eq!(iv.len(), 4);
        assert_eq!(iv.measure(), c.measure());
        let d = Cylinder::range(2, 0, 2).constrain(1, 0, 1).constrain(2, 1, 2);
        assert_eq!(d.to_intervals(100).unwrap().intersection_measure(&iv), c.intersection_measure(&d));
        assert!(Cylinder::range(2, 0, 1).constrain(40, 0, 1).to_intervals(100).is_err());
    }
}
