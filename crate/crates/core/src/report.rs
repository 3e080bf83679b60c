//! Distortion reports and their JSON and CSV encodings.
//!
//! Ratios stay exact; decimals (12 significant digits) are produced only
//! when serializing, next to the exact `a/b` form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coding::{Code, IndexConvention};
use crate::embed_l1::{Rat, ScaleMode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Linf,
    L1,
    Esa,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 3] = [EmbeddingKind::Linf, EmbeddingKind::L1, EmbeddingKind::Esa];
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Linf => "linf",
            EmbeddingKind::L1 => "l1",
            EmbeddingKind::Esa => "esa",
        })
    }
}

impl FromStr for EmbeddingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linf" | "l_inf" | "ellinf" => Ok(EmbeddingKind::Linf),
            "l1" => Ok(EmbeddingKind::L1),
            "esa" => Ok(EmbeddingKind::Esa),
            _ => Err(Error::Parse {
                what: "embedding",
                input: s.to_string(),
            }),
        }
    }
}

/// Which unordered vertex pairs to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairPolicy {
    All,
    Sample { n: usize, seed: u64 },
}

impl fmt::Display for PairPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairPolicy::All => f.write_str("all"),
            PairPolicy::Sample { n, seed } => write!(f, "sample:{n}:{seed}"),
        }
    }
}

impl FromStr for PairPolicy {
    type Err = Error;

    /// `all`, `sample:N` or `sample:N:SEED` (seed defaults to 0).
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "pair policy",
            input: s.to_string(),
        };
        let t = s.trim();
        if t == "all" {
            return Ok(PairPolicy::All);
        }
        let rest = t.strip_prefix("sample:").ok_or_else(err)?;
        let mut parts = rest.split(':');
        let n = parts.next().and_then(|p| p.parse().ok()).ok_or_else(err)?;
        let seed = match parts.next() {
            Some(p) => p.parse().map_err(|_| err())?,
            None => 0,
        };
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(PairPolicy::Sample { n, seed })
    }
}

/// Optional diagnostics that depend on the embedding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportExtra {
    pub vertices: u64,
    pub pair_policy: Option<PairPolicy>,
    /// `p_W` and its convention, for the ESA bound.
    pub p_w: Option<(usize, IndexConvention)>,
    pub scale_mode: Option<ScaleMode>,
    /// ℓ∞ only: whether every pair also met `d/3`.
    pub third_bound_holds: Option<bool>,
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionReport {
    pub code: Code,
    pub kappa: u32,
    pub embedding: EmbeddingKind,
    pub pairs: u64,
    /// Smallest ratio `‖ψu − ψv‖ / d(u,v)`.
    pub c1: Rat,
    /// Largest ratio.
    pub c2: Rat,
    /// `c2 / c1`, `None` when some pair collapsed.
    pub distortion: Option<Rat>,
    pub bound: Rat,
    pub comparable_equality: bool,
    pub pass: bool,
    pub extra: ReportExtra,
}

/// Exact `a/b` text for a rational.
pub fn exact(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_exact(s: &str) -> Result<Rat> {
    let err = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// Decimal rendering with 12 significant digits, rounding half away from
/// zero and trimming trailing zeros.
pub fn decimal12(r: &Rat) -> String {
    const DIGITS: i64 = 12;
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let x = r.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= x < 10^(e+1)
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let pow = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rat::new(BigInt::from(1), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while x < pow(e) {
        e -= 1;
    }
    while x >= pow(e + 1) {
        e += 1;
    }
    let shift = DIGITS - 1 - e;
    let scaled = &x * pow(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if rem * 2 >= *scaled.denom() { q + 1 } else { q };
    let mut shift = shift;
    if digits.to_string().len() as i64 > DIGITS {
        digits /= 10;
        shift -= 1;
    }
    let s = digits.to_string();
    let body = if shift <= 0 {
        format!("{s}{}", "0".repeat((-shift) as usize))
    } else if (shift as usize) < s.len() {
        let (int_part, frac) = s.split_at(s.len() - shift as usize);
        format!("{int_part}.{frac}")
    } else {
        format!("0.{}{s}", "0".repeat(shift as usize - s.len()))
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ExtraJson {
    vertices: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pair_policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p_w: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p_w_convention: Option<IndexConvention>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    scale_mode: Option<ScaleMode>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    third_bound_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    first_violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ReportJson {
    code: String,
    kappa: u32,
    embedding: EmbeddingKind,
    pairs: u64,
    c1: String,
    c2: String,
    c1_exact: String,
    c2_exact: String,
    distortion: String,
    distortion_exact: String,
    bound: String,
    bound_exact: String,
    comparable_equality: bool,
    pass: bool,
    extra: ExtraJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    meta: Option<serde_json::Value>,
}

const INFINITE: &str = "inf";

impl DistortionReport {
    fn to_wire(&self, meta: Option<serde_json::Value>) -> ReportJson {
        let (dist, dist_exact) = match &self.distortion {
            Some(d) => (decimal12(d), exact(d)),
            None => (INFINITE.into(), INFINITE.into()),
        };
        ReportJson {
            code: self.code.to_string(),
            kappa: self.kappa,
            embedding: self.embedding,
            pairs: self.pairs,
            c1: decimal12(&self.c1),
            c2: decimal12(&self.c2),
            c1_exact: exact(&self.c1),
            c2_exact: exact(&self.c2),
            distortion: dist,
            distortion_exact: dist_exact,
            bound: decimal12(&self.bound),
            bound_exact: exact(&self.bound),
            comparable_equality: self.comparable_equality,
            pass: self.pass,
            extra: ExtraJson {
                vertices: self.extra.vertices,
                pair_policy: self.extra.pair_policy.map(|p| p.to_string()),
                p_w: self.extra.p_w.map(|p| p.0),
                p_w_convention: self.extra.p_w.map(|p| p.1),
                scale_mode: self.extra.scale_mode,
                third_bound_holds: self.extra.third_bound_holds,
                first_violation: self.extra.first_violation.clone(),
            },
            meta,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_wire(None)).expect("report serializes")
    }

    /// Pretty JSON; `meta` (timings, version) is kept apart from the data.
    pub fn to_json(&self, meta: Option<serde_json::Value>) -> String {
        serde_json::to_string_pretty(&self.to_wire(meta)).expect("report serializes")
    }

    /// Parses the exact fields back; decimal fields are ignored.
    pub fn from_json(s: &str) -> Result<Self> {
        let w: ReportJson = serde_json::from_str(s).map_err(|e| Error::Parse {
            what: "report",
            input: e.to_string(),
        })?;
        Self::from_wire(w)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let w: ReportJson = serde_json::from_value(v).map_err(|e| Error::Parse {
            what: "report",
            input: e.to_string(),
        })?;
        Self::from_wire(w)
    }

    fn from_wire(w: ReportJson) -> Result<Self> {
        let distortion = if w.distortion_exact == INFINITE {
            None
        } else {
            Some(parse_exact(&w.distortion_exact)?)
        };
        let p_w = match (w.extra.p_w, w.extra.p_w_convention) {
            (Some(p), Some(c)) => Some((p, c)),
            (None, None) => None,
            _ => {
                return Err(Error::Parse {
                    what: "report",
                    input: "p_w and p_w_convention must appear together".into(),
                })
            }
        };
        Ok(DistortionReport {
            code: w.code.parse()?,
            kappa: w.kappa,
            embedding: w.embedding,
            pairs: w.pairs,
            c1: parse_exact(&w.c1_exact)?,
            c2: parse_exact(&w.c2_exact)?,
            distortion,
            bound: parse_exact(&w.bound_exact)?,
            comparable_equality: w.comparable_equality,
            pass: w.pass,
            extra: ReportExtra {
                vertices: w.extra.vertices,
                pair_policy: w.extra.pair_policy.as_deref().map(str::parse).transpose()?,
                p_w,
                scale_mode: w.extra.scale_mode,
                third_bound_holds: w.extra.third_bound_holds,
                first_violation: w.extra.first_violation,
            },
        })
    }
}

pub const CSV_HEADER: &str = "code,kappa,k,embedding,distortion_exact,bound_exact,vertices,seconds";

/// One sweep row; `k` is the family index, empty when not a sweep.
pub fn csv_row(report: &DistortionReport, k: Option<usize>, seconds: f64) -> String {
    let dist = report.distortion.as_ref().map_or_else(|| INFINITE.to_string(), exact);
    format!(
        "\"{}\",{},{},{},{},{},{},{:.6}",
        report.code,
        report.kappa,
        k.map(|k| k.to_string()).unwrap_or_default(),
        report.embedding,
        dist,
        exact(&report.bound),
        report.extra.vertices,
        seconds
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed_l1::intervals::rat;

    #[test]
    fn decimals() {
        assert_eq!(decimal12(&rat(2, 1)), "2");
        assert_eq!(decimal12(&rat(1, 2)), "0.5");
        assert_eq!(decimal12(&rat(1, 3)), "0.333333333333");
        assert_eq!(decimal12(&rat(2, 3)), "0.666666666667");
        assert_eq!(decimal12(&rat(32, 7)), "4.57142857143");
        assert_eq!(decimal12(&rat(-1, 8)), "-0.125");
        assert_eq!(decimal12(&rat(1, 1000)), "0.001");
        assert_eq!(decimal12(&rat(999_999_999_999_9, 10)), "1000000000000");
        assert_eq!(decimal12(&rat(1, 1)), "1");
    }

    #[test]
    fn exact_text() {
        assert_eq!(exact(&rat(4, 2)), "2");
        assert_eq!(exact(&rat(3, 6)), "1/2");
        assert_eq!(parse_exact("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_exact("8").unwrap(), rat(8, 1));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("x").is_err());
    }

    #[test]
    fn policies_and_kinds() {
        assert_eq!("all".parse::<PairPolicy>().unwrap(), PairPolicy::All);
        assert_eq!("sample:10:3".parse::<PairPolicy>().unwrap(), PairPolicy::Sample { n: 10, seed: 3 });
        assert_eq!("sample:10".parse::<PairPolicy>().unwrap(), PairPolicy::Sample { n: 10, seed: 0 });
        assert!("sample".parse::<PairPolicy>().is_err());
        assert!("sample:1:2:3".parse::<PairPolicy>().is_err());
        for k in EmbeddingKind::ALL {
            assert_eq!(k.to_string().parse::<EmbeddingKind>().unwrap(), k);
        }
    }
}
