//! Embedding into `L₁[0, M+1]` by characteristic functions of sets built
//! from independent selections.
//!
//! Two representations are available. [`ScaleMode::Separated`] stores sets
//! as digit cylinders and gives every selection its own base-`D` digit;
//! [`ScaleMode::PaperExact`] stores explicit interval lists and subdivides
//! with `θ(i,j) = 2^i·3^j − N(P_j)`, which is only feasible for tiny codes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use crate::coding::{nm, updown, Address, Code, Vertex};
use crate::error::{CheckOutcome, Error, Result};
use crate::graph::{self, addresses};

pub mod cylinder;
pub mod intervals;

pub use cylinder::Cylinder;
pub use intervals::{Rat, RationalIntervalSet};

use intervals::int;

pub const DEFAULT_INTERVAL_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    #[default]
    Separated,
    PaperExact,
}

impl fmt::Display for ScaleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleMode::Separated => "separated",
            ScaleMode::PaperExact => "paper_exact",
        })
    }
}

impl FromStr for ScaleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "separated" => Ok(ScaleMode::Separated),
            "paper_exact" | "paper" => Ok(ScaleMode::PaperExact),
            _ => Err(Error::Parse {
                what: "scale mode",
                input: s.to_string(),
            }),
        }
    }
}

/// A set in either representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum L1Set {
    Cylinder(Cylinder),
    Intervals(RationalIntervalSet),
}

impl L1Set {
    pub fn measure(&self) -> Rat {
        match self {
            L1Set::Cylinder(c) => c.measure(),
            L1Set::Intervals(s) => s.measure(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            L1Set::Cylinder(c) => c.is_empty(),
            L1Set::Intervals(s) => s.is_empty(),
        }
    }

    pub fn intersection_measure(&self, other: &L1Set) -> Rat {
        match (self, other) {
            (L1Set::Cylinder(a), L1Set::Cylinder(b)) => a.intersection_measure(b),
            (L1Set::Intervals(a), L1Set::Intervals(b)) => a.intersection_measure(b),
            _ => panic!("intersection of sets from different scale modes"),
        }
    }

    /// `self ∖ clos(other)`; for cylinders this is exact up to a null set.
    pub fn minus_closure(&self, other: &L1Set) -> Result<L1Set> {
        match (self, other) {
            (L1Set::Cylinder(a), L1Set::Cylinder(b)) => a.minus(b).map(L1Set::Cylinder),
            (L1Set::Intervals(a), L1Set::Intervals(b)) => Ok(L1Set::Intervals(a.minus_closure(b))),
            _ => panic!("difference of sets from different scale modes"),
        }
    }

    /// Grid level: `N(P)` for interval lists, the deepest constrained digit
    /// for cylinders.
    pub fn level(&self, d: u64, max_level: u32) -> Result<u32> {
        match self {
            L1Set::Cylinder(c) => Ok(c.depth()),
            L1Set::Intervals(s) => s.grid_level(d, max_level),
        }
    }

    pub fn to_intervals(&self, limit: usize) -> Result<RationalIntervalSet> {
        match self {
            L1Set::Cylinder(c) => c.to_intervals(limit),
            L1Set::Intervals(s) => Ok(s.clone()),
        }
    }
}

/// `lcm(1, ..., M+1)`.
pub fn grid_base(code: &Code) -> Result<u64> {
    (1..=code.height() as u64).try_fold(1u64, |acc, n| {
        (acc / acc.gcd(&n)).checked_mul(n).ok_or(Error::Overflow("lcm(1..M+1)"))
    })
}

/// Position of `a` in `κ^{≤max W}` ordered by length, then lexicographically.
pub fn node_index(kappa: u32, a: &Address) -> usize {
    let k = kappa as usize;
    let shorter: usize = (0..a.len()).map(|l| k.pow(l as u32)).sum();
    let rank = a.entries().iter().fold(0usize, |acc, &e| acc * k + e as usize);
    shorter + rank
}

/// One evaluation of `f(σ_i, P_j, k)`.
#[derive(Clone, Debug)]
pub struct SelectionCall {
    pub sigma: usize,
    pub base: usize,
    pub k: u64,
    pub scale: u32,
    pub output: L1Set,
}

/// The enumeration `(P_j)` of base sets met during construction and the
/// scale assigned to every `(σ_i, P_j)` pair.
#[derive(Clone, Debug)]
pub struct ScaleRegistry {
    mode: ScaleMode,
    d: u64,
    interval_limit: usize,
    index: HashMap<L1Set, usize>,
    bases: BTreeMap<usize, (L1Set, u32)>,
    next_index: usize,
    scales: BTreeMap<(usize, usize), u32>,
    bands: u32,
    memo: HashMap<(usize, usize, u64), L1Set>,
    calls: Vec<SelectionCall>,
}

impl ScaleRegistry {
    pub fn new(mode: ScaleMode, d: u64) -> Self {
        ScaleRegistry {
            mode,
            d,
            interval_limit: DEFAULT_INTERVAL_LIMIT,
            index: HashMap::new(),
            bases: BTreeMap::new(),
            next_index: 1,
            scales: BTreeMap::new(),
            bands: 0,
            memo: HashMap::new(),
            calls: Vec::new(),
        }
    }

    pub fn with_interval_limit(mut self, limit: usize) -> Self {
        self.interval_limit = limit;
        self
    }

    pub fn mode(&self) -> ScaleMode {
        self.mode
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Index of `set` in the enumeration, registering it if new. The empty
    /// set is `P_0`; in exact mode indices also satisfy `N(P_j) ≤ j`.
    pub fn register(&mut self, set: &L1Set) -> Result<usize> {
        if set.is_empty() {
            return Ok(0);
        }
        if let Some(&j) = self.index.get(set) {
            return Ok(j);
        }
        let level = set.level(self.d, 64)?;
        let j = match self.mode {
            ScaleMode::Separated => self.next_index,
            ScaleMode::PaperExact => self.next_index.max(level as usize),
        };
        self.next_index = j + 1;
        self.index.insert(set.clone(), j);
        self.bases.insert(j, (set.clone(), level));
        Ok(j)
    }

    pub fn index_of(&self, set: &L1Set) -> Option<usize> {
        if set.is_empty() {
            return Some(0);
        }
        self.index.get(set).copied()
    }

    /// Registered bases as `(j, set, N(P_j))`.
    pub fn bases(&self) -> impl Iterator<Item = (usize, &L1Set, u32)> {
        self.bases.iter().map(|(&j, (s, n))| (j, s, *n))
    }

    pub fn calls(&self) -> &[SelectionCall] {
        &self.calls
    }

    /// Total scale of `(σ_i, P_j)`: `2^i·3^j` in exact mode, otherwise a
    /// fresh multiple of 4 per new pair.
    pub fn scale(&mut self, sigma: usize, j: usize) -> Result<u32> {
        if let Some(&s) = self.scales.get(&(sigma, j)) {
            return Ok(s);
        }
        let s = match self.mode {
            ScaleMode::PaperExact => u32::try_from(sigma)
                .ok()
                .and_then(|i| 2u32.checked_pow(i))
                .zip(u32::try_from(j).ok().and_then(|j| 3u32.checked_pow(j)))
                .and_then(|(a, b)| a.checked_mul(b))
                .ok_or(Error::Overflow("2^i 3^j"))?,
            ScaleMode::Separated => {
                self.bands += 1;
                self.bands.checked_mul(4).ok_or(Error::Overflow("scale band"))?
            }
        };
        self.scales.insert((sigma, j), s);
        Ok(s)
    }

    /// `f(σ_i, P_j, k)`, memoized on `(i, j, k)`.
    pub fn select(&mut self, sigma: usize, j: usize, k: u64) -> Result<L1Set> {
        if k > self.d {
            return Err(Error::SelectionOutOfRange { k, max: self.d });
        }
        if let Some(out) = self.memo.get(&(sigma, j, k)) {
            return Ok(out.clone());
        }
        let scale = self.scale(sigma, j)?;
        let output = self.evaluate(j, scale, k)?;
        self.memo.insert((sigma, j, k), output.clone());
        self.calls.push(SelectionCall {
            sigma,
            base: j,
            k,
            scale,
            output: output.clone(),
        });
        Ok(output)
    }

    /// Recomputes `f` for an already scaled pair without recording it.
    pub fn preview(&self, sigma: usize, j: usize, k: u64) -> Result<L1Set> {
        let scale = *self.scales.get(&(sigma, j)).ok_or(Error::UnregisteredBase)?;
        self.evaluate(j, scale, k)
    }

    fn evaluate(&self, j: usize, scale: u32, k: u64) -> Result<L1Set> {
        if k > self.d {
            return Err(Error::SelectionOutOfRange { k, max: self.d });
        }
        if j == 0 {
            return Ok(self.empty_set());
        }
        let (base, level) = self.bases.get(&j).ok_or(Error::UnregisteredBase)?;
        Ok(match base {
            L1Set::Cylinder(c) => {
                let position = scale + 1;
                debug_assert!(!c.digits().contains_key(&position));
                L1Set::Cylinder(c.constrain(position, 0, k))
            }
            L1Set::Intervals(s) => {
                let theta = scale.checked_sub(*level).ok_or(Error::Overflow("theta(i,j)"))?;
                L1Set::Intervals(s.subdivide_keep(self.d, theta, k, self.interval_limit)?)
            }
        })
    }

    fn empty_set(&self) -> L1Set {
        match self.mode {
            ScaleMode::Separated => L1Set::Cylinder(Cylinder::empty(self.d)),
            ScaleMode::PaperExact => L1Set::Intervals(RationalIntervalSet::empty()),
        }
    }

    fn unit_range(&self, hi: u64) -> L1Set {
        match self.mode {
            ScaleMode::Separated => L1Set::Cylinder(Cylinder::range(self.d, 0, hi)),
            ScaleMode::PaperExact => L1Set::Intervals(RationalIntervalSet::unit_cells(0, hi)),
        }
    }
}

/// `f(σ_i, P, k)` for a base set that is already registered.
pub fn f_select(registry: &mut ScaleRegistry, sigma_index: usize, base: &L1Set, k: u64) -> Result<L1Set> {
    let j = registry.index_of(base).ok_or(Error::UnregisteredBase)?;
    registry.select(sigma_index, j, k)
}

#[derive(Clone, Copy, Debug)]
pub struct L1Options {
    pub mode: ScaleMode,
    pub vertex_limit: u64,
    pub interval_limit: usize,
}

impl Default for L1Options {
    fn default() -> Self {
        L1Options {
            mode: ScaleMode::Separated,
            vertex_limit: graph::DEFAULT_VERTEX_LIMIT,
            interval_limit: DEFAULT_INTERVAL_LIMIT,
        }
    }
}

/// The sets `S_x(v,i)`, `S_y(v,i)` for every vertex.
#[derive(Clone, Debug)]
pub struct L1Embedding {
    code: Code,
    kappa: u32,
    d: u64,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    sx: Vec<Vec<L1Set>>,
    sy: Vec<Vec<L1Set>>,
    registry: ScaleRegistry,
}

pub fn build_l1(code: &Code, kappa: u32) -> Result<L1Embedding> {
    build_l1_with(code, kappa, L1Options::default())
}

pub fn build_l1_with(code: &Code, kappa: u32, opts: L1Options) -> Result<L1Embedding> {
    if kappa == 0 {
        return Err(Error::Usage("kappa must be at least 1".into()));
    }
    let count = graph::vertex_count(code, kappa).ok_or(Error::Overflow("vertex count"))?;
    if count > opts.vertex_limit {
        return Err(Error::SizeGuard {
            count: count.to_string(),
            limit: opts.vertex_limit,
        });
    }
    let d = grid_base(code)?;
    let mut registry = ScaleRegistry::new(opts.mode, d).with_interval_limit(opts.interval_limit);
    let mut vertices = Vec::with_capacity(count as usize);
    let mut sx = Vec::with_capacity(count as usize);
    let mut sy = Vec::with_capacity(count as usize);

    for r in 0..=code.height() {
        for a in addresses(kappa, code.depth(r)) {
            let v = Vertex::new(r, a);
            let (x, y) = (code.x(r, 1) as u64, code.y(r, 1) as u64);
            let mut vx = vec![registry.unit_range(x)];
            let mut vy = vec![registry.unit_range(y)];
            for i in 1..=code.depth(r) {
                let base = vy[i - 1].minus_closure(&vx[i - 1])?;
                let j = registry.register(&base)?;
                let sigma = node_index(kappa, &v.address.restrict(i));
                let (xi, yi) = code.xy(r, i);
                let span = (yi - xi) as u64;
                let kx = selection_count((code.x(r, i + 1) - xi) as u64, span, d)?;
                let ky = selection_count((code.y(r, i + 1) - xi) as u64, span, d)?;
                vx.push(registry.select(sigma, j, kx)?);
                vy.push(registry.select(sigma, j, ky)?);
            }
            vertices.push(v);
            sx.push(vx);
            sy.push(vy);
        }
    }
    let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(L1Embedding {
        code: code.clone(),
        kappa,
        d,
        vertices,
        index,
        sx,
        sy,
        registry,
    })
}

fn selection_count(numer: u64, span: u64, d: u64) -> Result<u64> {
    let num = numer.checked_mul(d).ok_or(Error::Overflow("selection count"))?;
    if num % span != 0 {
        return Err(Error::NonIntegerSelection { num, den: span });
    }
    Ok(num / span)
}

impl L1Embedding {
    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn grid_base(&self) -> u64 {
        self.d
    }

    pub fn mode(&self) -> ScaleMode {
        self.registry.mode()
    }

    pub fn registry(&self) -> &ScaleRegistry {
        &self.registry
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &Vertex) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::InvalidVertex {
            vertex: v.to_string(),
            reason: format!("not a vertex of T_({}),{}", self.code, self.kappa),
        })
    }

    /// `S_x(v, i)` for `i = 0..=w_r`, by vertex index.
    pub fn sx(&self, idx: usize) -> &[L1Set] {
        &self.sx[idx]
    }

    pub fn sy(&self, idx: usize) -> &[L1Set] {
        &self.sy[idx]
    }

    /// `λ(S(v))`, summing the disjoint pieces.
    pub fn measure(&self, idx: usize) -> Rat {
        self.sx[idx].iter().fold(Rat::zero(), |acc, s| acc + s.measure())
    }

    /// `λ(S(u) ∩ S(v))`, summing over pairs of pieces.
    pub fn intersection(&self, a: usize, b: usize) -> Rat {
        let mut total = Rat::zero();
        for p in &self.sx[a] {
            for q in &self.sx[b] {
                total += p.intersection_measure(q);
            }
        }
        total
    }

    pub fn dist_by_index(&self, a: usize, b: usize) -> Rat {
        if a == b {
            return Rat::zero();
        }
        self.measure(a) + self.measure(b) - self.intersection(a, b) * int(2)
    }

    /// `‖χ_{S(u)} − χ_{S(v)}‖₁`.
    pub fn dist_l1(&self, u: &Vertex, v: &Vertex) -> Result<Rat> {
        Ok(self.dist_by_index(self.index_of(u)?, self.index_of(v)?))
    }

    /// Per-vertex dump: the measure of every `S_x` piece and of `S(v)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let pieces: Vec<String> = self.sx[i].iter().map(|s| s.measure().to_string()).collect();
            out.push_str(&format!("{v} measure={} pieces=[{}]\n", self.measure(i), pieces.join(",")));
        }
        out
    }
}

/// Closed form for `λ(S(u) ∩ S(v))`.
pub fn intersection_formula(code: &Code, u: &Vertex, v: &Vertex) -> Rat {
    let (r, s) = (u.height as i64, v.height as i64);
    if updown(code, u, v) {
        return int(r.min(s) as u64);
    }
    let (n, m) = nm(code, u, v);
    let (n, m) = (n as i64, m as i64);
    int(n as u64) + Rat::new(((r - n) * (s - n)).into(), (m - n).into())
}

/// Lemma-level checks on every recorded selection: nesting in `k`, the
/// measure identity, grid levels (exact mode) and the conditional
/// independence identity against every shallower registered base.
pub fn check_selection_lemma(emb: &L1Embedding) -> CheckOutcome {
    let reg = &emb.registry;
    let d = reg.d();
    let dr = int(d);
    let mut checks = 0u64;
    let mut seen = std::collections::HashSet::new();
    for call in reg.calls() {
        if call.base == 0 {
            continue;
        }
        let (_, base, base_level) = reg
            .bases()
            .find(|(j, _, _)| *j == call.base)
            .ok_or_else(|| format!("call refers to unregistered base {}", call.base))?;
        let lam_base = base.measure();
        if call.output.measure() != int(call.k) * &lam_base / &dr {
            return Err(format!(
                "measure of f(σ_{}, P_{}, {}) is {} not {}·{}/{d}",
                call.sigma,
                call.base,
                call.k,
                call.output.measure(),
                call.k,
                lam_base
            ));
        }
        checks += 1;

        if seen.insert((call.sigma, call.base)) {
            // nesting over the counts in use plus both extremes
            let mut ks: Vec<u64> = reg
                .calls()
                .iter()
                .filter(|c| (c.sigma, c.base) == (call.sigma, call.base))
                .map(|c| c.k)
                .chain([0, d])
                .collect();
            ks.sort_unstable();
            ks.dedup();
            let family: Vec<L1Set> = ks
                .iter()
                .map(|&k| reg.preview(call.sigma, call.base, k))
                .collect::<Result<_>>()
                .map_err(|e| e.to_string())?;
            for w in 0..family.len() - 1 {
                let (a, b) = (&family[w], &family[w + 1]);
                if a.intersection_measure(b) != a.measure() || b.intersection_measure(base) != b.measure() {
                    return Err(format!(
                        "f(σ_{}, P_{}, k) not nested between k = {} and {}",
                        call.sigma,
                        call.base,
                        ks[w],
                        ks[w + 1]
                    ));
                }
                checks += 1;
            }
        }

        let out_level = call.output.level(d, call.scale + 3).map_err(|e| e.to_string())?;
        if call.k != 0 {
            let ok = match emb.mode() {
                ScaleMode::PaperExact => out_level + 1 >= call.scale && out_level <= call.scale + 2,
                ScaleMode::Separated => out_level == call.scale + 1 && base_level < out_level,
            };
            if !ok {
                return Err(format!(
                    "f(σ_{}, P_{}, {}) has level {out_level} against scale {}",
                    call.sigma, call.base, call.k, call.scale
                ));
            }
            checks += 1;
        }

        let position_level = match emb.mode() {
            ScaleMode::PaperExact => base_level,
            ScaleMode::Separated => call.scale + 1,
        };
        for (_, p, p_level) in reg.bases() {
            if p_level >= position_level {
                continue;
            }
            let lhs = p.intersection_measure(&call.output);
            let rhs = int(call.k) * p.intersection_measure(base) / &dr;
            if lhs != rhs {
                return Err(format!(
                    "λ(P ∩ f(σ_{}, P_{}, {})) = {lhs}, expected {rhs}",
                    call.sigma, call.base, call.k
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

/// Measure identities and disjointness of the `S_x` pieces of every vertex.
pub fn check_piece_lemma(emb: &L1Embedding) -> CheckOutcome {
    let code = &emb.code;
    let mut checks = 0u64;
    for (idx, v) in emb.vertices.iter().enumerate() {
        let r = v.height;
        let mut cumulative = Rat::zero();
        for i in 0..=code.depth(r) {
            let (sx, sy) = (&emb.sx[idx][i], &emb.sy[idx][i]);
            let xi = code.x(r, i.max(1)) as i64;
            // S_x(v,0) starts at 0 rather than at x(r,0)
            let x_lo = if i == 0 { 0 } else { xi };
            let x_hi = code.x(r, i + 1) as i64;
            let y_hi = code.y(r, i + 1) as i64;
            let expect = [
                ("S_x", sx.measure(), x_hi - x_lo),
                ("S_y", sy.measure(), y_hi - x_lo),
            ];
            for (name, got, want) in expect {
                if got != Rat::from_integer(want.into()) {
                    return Err(format!("{v}: λ({name}(v,{i})) = {got}, expected {want}"));
                }
            }
            let rest = sy.minus_closure(sx).map_err(|e| e.to_string())?;
            if rest.measure() != Rat::from_integer((y_hi - x_hi).into()) {
                return Err(format!("{v}: λ(S_y ∖ S_x) at level {i} is {}", rest.measure()));
            }
            for j in 0..i {
                if !sx.intersection_measure(&emb.sx[idx][j]).is_zero() {
                    return Err(format!("{v}: S_x(v,{i}) meets S_x(v,{j})"));
                }
            }
            cumulative += sx.measure();
            if cumulative != Rat::from_integer(x_hi.into()) {
                return Err(format!("{v}: cumulative measure {cumulative} at level {i}"));
            }
            checks += 5 + i as u64;
        }
    }
    Ok(checks)
}

/// `λ(S(u) ∩ S(v))` against the closed form for every unordered pair.
pub fn check_intersection_lemma(emb: &L1Embedding) -> CheckOutcome {
    let n = emb.vertices.len();
    let mut checks = 0u64;
    for a in 0..n {
        for b in a..n {
            let (u, v) = (&emb.vertices[a], &emb.vertices[b]);
            let got = emb.intersection(a, b);
            let want = intersection_formula(&emb.code, u, v);
            if got != want {
                return Err(format!("λ(S({u}) ∩ S({v})) = {got}, formula gives {want}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
