//! Depth words, addresses and the coefficient functions derived from them.
//!
//! A [`Code`] `(w_0, ..., w_{M+1})` records the depth of every height of a
//! bundle graph. Together with a branching number it determines the graph
//! completely, so most metric quantities are computed here without ever
//! materializing vertices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of branch indices; the empty address is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<u32>);

impl Address {
    pub fn new(entries: Vec<u32>) -> Self {
        Address(entries)
    }

    pub fn empty() -> Self {
        Address(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// The prefix of length `m`, or the whole address when `m >= len`.
    pub fn restrict(&self, m: usize) -> Address {
        Address(self.0[..m.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Longest common prefix.
    pub fn meet(&self, other: &Address) -> Address {
        let n = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        Address(self.0[..n].to_vec())
    }

    /// Length of the longest common prefix, without allocating.
    pub fn meet_len(&self, other: &Address) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn concat(&self, other: &Address) -> Address {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Address(v)
    }

    pub fn max_entry(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }
}

/// Longest common prefix of two addresses.
pub fn meet(a: &Address, b: &Address) -> Address {
    a.meet(b)
}

impl From<Vec<u32>> for Address {
    fn from(v: Vec<u32>) -> Self {
        Address(v)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Address {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "address",
            input: s.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?
            .trim();
        if inner.is_empty() {
            return Ok(Address::empty());
        }
        inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| err()))
            .collect::<Result<Vec<_>>>()
            .map(Address)
    }
}

/// The depth word `W = (w_0, ..., w_{M+1})` of a bundle graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Code {
    depths: Vec<usize>,
}

impl Code {
    /// Validates the boundary conditions `len >= 2` and `w_0 = w_{M+1} = 0`.
    pub fn new(depths: Vec<usize>) -> Result<Self> {
        if depths.len() < 2 {
            return Err(Error::InvalidCode(format!(
                "need at least two depths, got {}",
                depths.len()
            )));
        }
        if depths[0] != 0 || depths[depths.len() - 1] != 0 {
            return Err(Error::InvalidCode(
                "first and last depth must be 0".to_string(),
            ));
        }
        Ok(Code { depths })
    }

    /// The single edge `(0, 0)`.
    pub fn edge() -> Self {
        Code { depths: vec![0, 0] }
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// `w_r`; panics when `r > height()`.
    pub fn depth(&self, r: usize) -> usize {
        self.depths[r]
    }

    /// `M + 1`, the distance from bottom to top.
    pub fn height(&self) -> usize {
        self.depths.len() - 1
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_height(&self, r: usize) -> Result<()> {
        if r > self.height() {
            return Err(Error::HeightOutOfRange {
                height: r,
                max: self.height(),
            });
        }
        Ok(())
    }

    /// Checks `|address| = w_height` and, if given, that entries are below `kappa`.
    pub fn check_vertex(&self, v: &Vertex, kappa: Option<u32>) -> Result<()> {
        let bad = |reason: String| Error::InvalidVertex {
            vertex: v.to_string(),
            reason,
        };
        if v.height > self.height() {
            return Err(bad(format!("height above {}", self.height())));
        }
        let w = self.depths[v.height];
        if v.address.len() != w {
            return Err(bad(format!(
                "address length {} but depth at height {} is {w}",
                v.address.len(),
                v.height
            )));
        }
        if let (Some(k), Some(m)) = (kappa, v.address.max_entry()) {
            if m >= k {
                return Err(bad(format!("entry {m} not below kappa = {k}")));
            }
        }
        Ok(())
    }

    /// `(x(r,i), y(r,i))` without range checks.
    pub(crate) fn xy(&self, r: usize, i: usize) -> (usize, usize) {
        if i == 0 {
            return (0, self.height());
        }
        let x = (0..=r).rev().find(|&t| self.depths[t] < i).unwrap_or(0);
        let y = (r..self.depths.len())
            .find(|&t| self.depths[t] < i)
            .unwrap_or(self.height());
        (x, y)
    }

    /// `table[i][r] = (x(r,i), y(r,i))` for `i = 0..=max_i`, in one sweep per `i`.
    pub(crate) fn xy_table(&self, max_i: usize) -> Vec<Vec<(usize, usize)>> {
        let n = self.depths.len();
        (0..=max_i)
            .map(|i| {
                if i == 0 {
                    return vec![(0, self.height()); n];
                }
                let mut row = vec![(0, 0); n];
                let mut last = 0;
                for t in 0..n {
                    if self.depths[t] < i {
                        last = t;
                    }
                    row[t].0 = last;
                }
                let mut next = self.height();
                for t in (0..n).rev() {
                    if self.depths[t] < i {
                        next = t;
                    }
                    row[t].1 = next;
                }
                row
            })
            .collect()
    }

    pub(crate) fn x(&self, r: usize, i: usize) -> usize {
        self.xy(r, i).0
    }

    pub(crate) fn y(&self, r: usize, i: usize) -> usize {
        self.xy(r, i).1
    }

    pub(crate) fn z(&self, r: usize, i: usize) -> usize {
        if i == 0 {
            return r;
        }
        let (x, y) = self.xy(r, i);
        (r - x).min(y - r)
    }

    /// The nearest low-depth heights around `r` and the distance to them.
    pub fn xyz(&self, r: usize, i: usize) -> Result<Xyz> {
        self.check_height(r)?;
        let (x, y) = self.xy(r, i);
        Ok(Xyz {
            x,
            y,
            z: self.z(r, i),
        })
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.depths.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let depths = t
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| Error::Parse {
                    what: "code",
                    input: s.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Code::new(depths)
    }
}

impl TryFrom<String> for Code {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Code> for String {
    fn from(c: Code) -> String {
        c.to_string()
    }
}

/// A vertex `(r, A)` of `T_{W,κ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub height: usize,
    pub address: Address,
}

impl Vertex {
    pub fn new(height: usize, address: impl Into<Address>) -> Self {
        Vertex {
            height,
            address: address.into(),
        }
    }

    pub fn bottom() -> Self {
        Vertex::new(0, Address::empty())
    }

    pub fn top(code: &Code) -> Self {
        Vertex::new(code.height(), Address::empty())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.height, self.address)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (h, a) = s.trim().split_once(':').ok_or_else(|| Error::Parse {
            what: "vertex",
            input: s.to_string(),
        })?;
        let height = h.trim().parse().map_err(|_| Error::Parse {
            what: "vertex",
            input: s.to_string(),
        })?;
        Ok(Vertex {
            height,
            address: a.parse()?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Xyz {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// `u ⇕ v`: some height between the two has depth at most `|A ∧ B|`.
pub fn updown(code: &Code, u: &Vertex, v: &Vertex) -> bool {
    let k = u.address.meet_len(&v.address);
    let (lo, hi) = ordered(u.height, v.height);
    code.depths[lo..=hi].iter().any(|&w| w <= k)
}

/// Heights of the highest common ancestor and lowest common descendant.
pub fn nm(code: &Code, u: &Vertex, v: &Vertex) -> (usize, usize) {
    let k = u.address.meet_len(&v.address);
    let (lo, hi) = ordered(u.height, v.height);
    let n = (0..=lo).rev().find(|&t| code.depths[t] <= k).unwrap_or(0);
    let m = (hi..code.depths.len())
        .find(|&t| code.depths[t] <= k)
        .unwrap_or(code.height());
    (n, m)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Which depth thresholds `i` the `p_W` conditions quantify over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexConvention {
    /// `i >= 1`, the range every use site of `p_W` needs.
    #[default]
    Positive,
    /// `i >= 0`.
    IncludeZero,
}

impl fmt::Display for IndexConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexConvention::Positive => "positive",
            IndexConvention::IncludeZero => "include_zero",
        })
    }
}

impl FromStr for IndexConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "positive" => Ok(IndexConvention::Positive),
            "include_zero" => Ok(IndexConvention::IncludeZero),
            _ => Err(Error::Parse {
                what: "index convention",
                input: s.to_string(),
            }),
        }
    }
}

/// Smallest `p` for which moving `p` depth levels up always lands in the
/// near half of the surrounding low-depth bracket.
///
/// `i` ranges up to `max W + 1`; beyond that `x(r,i) = y(r,i) = r` so the
/// conditions are trivially satisfied.
pub fn p_param(code: &Code, convention: IndexConvention) -> Result<usize> {
    let cap = code.max_depth() + 1;
    let first_i = match convention {
        IndexConvention::Positive => 1,
        IndexConvention::IncludeZero => 0,
    };
    let table = code.xy_table(2 * cap);
    (1..=cap)
        .find(|&p| p_condition_table(&table, p, first_i, cap))
        .ok_or_else(|| Error::NoPParam {
            code: code.to_string(),
            cap,
        })
}

#[cfg(test)]
fn p_condition_holds(code: &Code, p: usize, first_i: usize, cap: usize) -> bool {
    p_condition_table(&code.xy_table(cap + p), p, first_i, cap)
}

fn p_condition_table(table: &[Vec<(usize, usize)>], p: usize, first_i: usize, cap: usize) -> bool {
    (first_i..=cap).all(|i| {
        table[i].iter().zip(&table[i + p]).enumerate().all(|(r, (&(x, y), &(xp, yp)))| {
            // midpoint doubled to stay in integers
            let mid2 = x + y;
            (2 * r < mid2 || 2 * xp >= mid2) && (2 * r > mid2 || 2 * yp <= mid2)
        })
    })
}
