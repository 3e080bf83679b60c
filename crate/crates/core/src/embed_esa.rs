//! Embedding into the summing-basis sequence space.
//!
//! The target norm is `‖Σ a_n e_n‖ = max_k |a_1 + ... + a_k|`, an
//! equal-signs-additive norm. Every vertex gets, for each of the `2^μ`
//! blocks, an integer set built by the same recursion as the `L₁` sets but
//! with selections driven by explicit Bernoulli functions `Y_i`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coding::{updown, Address, Code, Vertex};
use crate::embed_l1::{node_index, Rat};
use crate::error::{CheckOutcome, Error, Result};
use crate::graph::{self, addresses, dist_formula};

pub const DEFAULT_LENGTH_CAP: u64 = 10_000_000;

/// Finitely supported integer vector with a rational normalizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummingVector {
    coefficients: BTreeMap<u64, i64>,
    normalizer: Rat,
}

impl Default for SummingVector {
    fn default() -> Self {
        SummingVector {
            coefficients: BTreeMap::new(),
            normalizer: Rat::one(),
        }
    }
}

impl SummingVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Coefficients at positions `1, 2, ...`.
    pub fn from_coefficients(coefficients: &[i64]) -> Self {
        Self::from_pairs(coefficients.iter().enumerate().map(|(i, &c)| (i as u64 + 1, c)))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut v = SummingVector::new();
        for (p, c) in pairs {
            v.add(p, c);
        }
        v
    }

    pub fn with_normalizer(mut self, normalizer: Rat) -> Self {
        self.normalizer = normalizer;
        self
    }

    pub fn add(&mut self, position: u64, c: i64) {
        let e = self.coefficients.entry(position).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coefficients.remove(&position);
        }
    }

    pub fn get(&self, position: u64) -> i64 {
        self.coefficients.get(&position).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.coefficients.iter().map(|(&p, &c)| (p, c))
    }

    pub fn normalizer(&self) -> &Rat {
        &self.normalizer
    }

    /// Largest absolute partial sum, before scaling.
    pub fn raw_norm(&self) -> u64 {
        let mut sum = 0i64;
        let mut best = 0u64;
        for &c in self.coefficients.values() {
            sum += c;
            best = best.max(sum.unsigned_abs());
        }
        best
    }

    pub fn norm(&self) -> Rat {
        Rat::from_integer(BigInt::from(self.raw_norm())) * &self.normalizer
    }

    /// `self − other`; both must share a normalizer.
    pub fn minus(&self, other: &SummingVector) -> SummingVector {
        let mut out = self.clone();
        for (p, c) in other.support() {
            out.add(p, -c);
        }
        out
    }
}

/// `‖Σ a_n e_n‖` for coefficients at positions `1, 2, ...`.
pub fn summing_norm(coefficients: &[i64]) -> u64 {
    SummingVector::from_coefficients(coefficients).raw_norm()
}

/// `‖Σ_{j=1}^{2^μ} (e_{2j−1} − e_{2j})‖`.
pub fn eta(mu: u32) -> Rat {
    let pairs = 1u64 << mu;
    let v = SummingVector::from_pairs((1..=pairs).flat_map(|j| [(2 * j - 1, 1), (2 * j, -1)]));
    Rat::from_integer(v.raw_norm().into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub coefficients: Vec<i64>,
    pub detail: String,
}

/// Random trials of the equal-signs-additive, subadditive and spreading
/// properties of the summing norm.
pub fn check_esa_axioms(trials: usize, seed: u64) -> std::result::Result<(), AxiomViolation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let len: usize = rng.gen_range(1..=12);
        let a: Vec<i64> = (0..len).map(|_| rng.gen_range(-6..=6)).collect();
        let base = summing_norm(&a);
        let fail = |axiom, detail: String| AxiomViolation {
            axiom,
            coefficients: a.clone(),
            detail,
        };
        for k in 0..len.saturating_sub(1) {
            let mut merged = a.clone();
            merged[k] += merged[k + 1];
            merged.remove(k + 1);
            let m = summing_norm(&merged);
            if a[k] * a[k + 1] >= 0 && m != base {
                return Err(fail("ESA", format!("merging at {} changes {base} to {m}", k + 1)));
            }
            if m > base {
                return Err(fail("SA", format!("merging at {} raises {base} to {m}", k + 1)));
            }
        }
        let mut slots: Vec<u64> = (1..=4 * len as u64).collect();
        slots.shuffle(&mut rng);
        let mut positions = slots[..len].to_vec();
        positions.sort_unstable();
        let spread = SummingVector::from_pairs(positions.iter().copied().zip(a.iter().copied())).raw_norm();
        if spread != base {
            return Err(fail("IS", format!("spreading to {positions:?} gives {spread}, not {base}")));
        }
    }
    Ok(())
}

/// The functions `Y_1, ..., Y_μ` on `{1, ..., 2^μ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BernoulliFamily {
    mu: u32,
}

impl BernoulliFamily {
    pub fn new(mu: u32) -> Self {
        assert!(mu < 63, "2^mu must fit in u64");
        BernoulliFamily { mu }
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn points(&self) -> u64 {
        1u64 << self.mu
    }

    /// `Y_i(j) = 1` iff `j mod 2^{μ−i+1}` lies in `1..=2^{μ−i}`.
    pub fn y(&self, i: u32, j: u64) -> bool {
        debug_assert!((1..=self.mu).contains(&i));
        let period = 1u64 << (self.mu - i + 1);
        let rem = j % period;
        rem >= 1 && rem <= period / 2
    }

    /// Exhaustive check that every assignment to at most `max_subset` of the
    /// `Y_i` has exactly `2^{μ−|S|}` solutions.
    pub fn check_independence(&self, max_subset: usize) -> CheckOutcome {
        let mut checks = 0u64;
        let mut subset = Vec::new();
        self.check_subsets(1, max_subset, &mut subset, &mut checks)?;
        Ok(checks)
    }

    fn check_subsets(&self, from: u32, left: usize, subset: &mut Vec<u32>, checks: &mut u64) -> std::result::Result<(), String> {
        if !subset.is_empty() {
            let s = subset.len();
            for pattern in 0..(1u32 << s) {
                let hits = (1..=self.points())
                    .filter(|&j| subset.iter().enumerate().all(|(b, &i)| self.y(i, j) == (pattern >> b & 1 == 1)))
                    .count() as u64;
                if hits != 1u64 << (self.mu as usize - s) {
                    return Err(format!("Y{subset:?} with pattern {pattern:b} has {hits} solutions"));
                }
                *checks += 1;
            }
        }
        if left == 0 {
            return Ok(());
        }
        for i in from..=self.mu {
            subset.push(i);
            self.check_subsets(i + 1, left - 1, subset, checks)?;
            subset.pop();
        }
        Ok(())
    }
}

/// Half-open offset range `[lo, hi)` inside a block; offset `t` is the
/// element `(j−1)(M+1) + t + 1` of `I_j`.
pub type Run = (u32, u32);

fn run_len(r: Run) -> u32 {
    r.1 - r.0
}

#[derive(Clone, Copy, Debug)]
pub struct EsaOptions {
    pub length_cap: u64,
    pub vertex_limit: u64,
}

impl Default for EsaOptions {
    fn default() -> Self {
        EsaOptions {
            length_cap: DEFAULT_LENGTH_CAP,
            vertex_limit: graph::DEFAULT_VERTEX_LIMIT,
        }
    }
}

/// `|κ^{≤max W}|`.
pub fn mu(code: &Code, kappa: u32) -> Option<u64> {
    (0..=code.max_depth() as u32).try_fold(0u64, |acc, l| acc.checked_add((kappa as u64).checked_pow(l)?))
}

#[derive(Clone, Debug)]
pub struct EsaEmbedding {
    code: Code,
    kappa: u32,
    family: BernoulliFamily,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    // per vertex, block-major: entry `j * (w_r + 1) + i` for block j+1, level i
    sx: Vec<Vec<Run>>,
    sy: Vec<Vec<Run>>,
    eta: Rat,
}

pub fn build_esa(code: &Code, kappa: u32) -> Result<EsaEmbedding> {
    build_esa_with(code, kappa, EsaOptions::default())
}

pub fn build_esa_with(code: &Code, kappa: u32, opts: EsaOptions) -> Result<EsaEmbedding> {
    if kappa == 0 {
        return Err(Error::Usage("kappa must be at least 1".into()));
    }
    let mu_val = mu(code, kappa).ok_or(Error::Overflow("mu"))?;
    let block = code.height() as u64;
    let len = (mu_val < 62)
        .then(|| (1u64 << (mu_val + 1)).checked_mul(block))
        .flatten();
    match len {
        Some(l) if l <= opts.length_cap => {}
        _ => {
            return Err(Error::EsaCap {
                mu: mu_val,
                len: len.map_or_else(|| format!("2^{} * {block}", mu_val + 1), |l| l.to_string()),
                cap: opts.length_cap,
            })
        }
    }
    let count = graph::vertex_count(code, kappa).ok_or(Error::Overflow("vertex count"))?;
    if count > opts.vertex_limit {
        return Err(Error::SizeGuard {
            count: count.to_string(),
            limit: opts.vertex_limit,
        });
    }
    let family = BernoulliFamily::new(mu_val as u32);
    let blocks = family.points();

    let mut vertices = Vec::new();
    let mut sx = Vec::new();
    let mut sy = Vec::new();
    for r in 0..=code.height() {
        let w = code.depth(r);
        for a in addresses(kappa, w) {
            let ys: Vec<u32> = (1..=w).map(|i| y_index(kappa, &a.restrict(i))).collect();
            let mut vx = Vec::with_capacity(blocks as usize * (w + 1));
            let mut vy = Vec::with_capacity(blocks as usize * (w + 1));
            for j in 1..=blocks {
                let mut cur_x: Run = (0, code.x(r, 1) as u32);
                let mut cur_y: Run = (0, code.y(r, 1) as u32);
                vx.push(cur_x);
                vy.push(cur_y);
                for i in 1..=w {
                    let p = run_minus(cur_y, cur_x);
                    let xi = code.x(r, i);
                    let kx = (code.x(r, i + 1) - xi) as u32;
                    let ky = (code.y(r, i + 1) - xi) as u32;
                    let first = family.y(ys[i - 1], j);
                    cur_x = select(p, kx, first)?;
                    cur_y = select(p, ky, first)?;
                    vx.push(cur_x);
                    vy.push(cur_y);
                }
            }
            vertices.push(Vertex::new(r, a));
            sx.push(vx);
            sy.push(vy);
        }
    }
    let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(EsaEmbedding {
        code: code.clone(),
        kappa,
        family,
        vertices,
        index,
        sx,
        sy,
        eta: eta(mu_val as u32),
    })
}

/// 1-based index of the Bernoulli function assigned to node `a`.
fn y_index(kappa: u32, a: &Address) -> u32 {
    node_index(kappa, a) as u32 + 1
}

/// `y ∖ x` for `x` a run sharing an end with `y`.
fn run_minus(y: Run, x: Run) -> Run {
    if run_len(x) == 0 {
        y
    } else if x.0 == y.0 {
        (x.1, y.1)
    } else {
        (y.0, x.0)
    }
}

/// `f_j`: the first `k` elements of `p` when `first`, else the last `k`.
fn select(p: Run, k: u32, first: bool) -> Result<Run> {
    if k > run_len(p) {
        return Err(Error::SelectionOutOfRange {
            k: k as u64,
            max: run_len(p) as u64,
        });
    }
    Ok(if first { (p.0, p.0 + k) } else { (p.1 - k, p.1) })
}

impl EsaEmbedding {
    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn family(&self) -> &BernoulliFamily {
        &self.family
    }

    pub fn mu(&self) -> u32 {
        self.family.mu()
    }

    pub fn eta(&self) -> &Rat {
        &self.eta
    }

    pub fn blocks(&self) -> u64 {
        self.family.points()
    }

    pub fn block_len(&self) -> u64 {
        self.code.height() as u64
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

    fn levels(&self, idx: usize) -> usize {
        self.code.depth(self.vertices[idx].height) + 1
    }

    /// `S_{x,j}(v,i)` as an offset run, `j` 1-based.
    pub fn sx(&self, idx: usize, j: u64, i: usize) -> Run {
        self.sx[idx][(j as usize - 1) * self.levels(idx) + i]
    }

    pub fn sy(&self, idx: usize, j: u64, i: usize) -> Run {
        self.sy[idx][(j as usize - 1) * self.levels(idx) + i]
    }

    fn block_contains(&self, idx: usize, j: u64, offset: u32) -> bool {
        let l = self.levels(idx);
        self.sx[idx][(j as usize - 1) * l..j as usize * l]
            .iter()
            .any(|&(a, b)| a <= offset && offset < b)
    }

    /// `S_j(v)` as absolute elements of `I_j`.
    pub fn s_j(&self, idx: usize, j: u64) -> Vec<u64> {
        let base = (j - 1) * self.block_len();
        (0..self.block_len() as u32)
            .filter(|&t| self.block_contains(idx, j, t))
            .map(|t| base + t as u64 + 1)
            .collect()
    }

    /// `(S_{j,+}(v), S_{j,−}(v))`, ascending.
    pub fn placed(&self, idx: usize, j: u64) -> (Vec<u64>, Vec<u64>) {
        let m1 = self.block_len();
        let s = self.s_j(idx, j);
        let plus = s.iter().map(|n| (j - 1) * m1 + n).collect();
        let mut minus: Vec<u64> = s.iter().map(|n| (3 * j - 1) * m1 + 1 - n).collect();
        minus.sort_unstable();
        (plus, minus)
    }

    /// `ψ(v) = η⁻¹ Σ_j (Σ_{S_{j,+}} e_n − Σ_{S_{j,−}} e_n)`.
    pub fn psi(&self, idx: usize) -> SummingVector {
        let mut v = SummingVector::new().with_normalizer(self.eta.recip());
        for j in 1..=self.blocks() {
            let (plus, minus) = self.placed(idx, j);
            for p in plus {
                v.add(p, 1);
            }
            for p in minus {
                v.add(p, -1);
            }
        }
        v
    }

    pub fn psi_esa(&self, v: &Vertex) -> Result<SummingVector> {
        Ok(self.psi(self.index_of(v)?))
    }

    /// `‖ψ(u) − ψ(v)‖` by one pass over positions, without building vectors.
    pub fn dist_by_index(&self, a: usize, b: usize) -> Rat {
        let m1 = self.block_len() as u32;
        let mut sum = 0i64;
        let mut best = 0u64;
        let mut diff = vec![0i64; m1 as usize];
        for j in 1..=self.blocks() {
            for t in 0..m1 {
                diff[t as usize] = self.block_contains(a, j, t) as i64 - self.block_contains(b, j, t) as i64;
            }
            // I_{2j-1} holds offsets in order, I_{2j} holds them mirrored
            for &c in diff.iter() {
                sum += c;
                best = best.max(sum.unsigned_abs());
            }
            for &c in diff.iter().rev() {
                sum -= c;
                best = best.max(sum.unsigned_abs());
            }
        }
        Rat::from_integer(best.into()) / &self.eta
    }

    pub fn dist_esa(&self, u: &Vertex, v: &Vertex) -> Result<Rat> {
        Ok(self.dist_by_index(self.index_of(u)?, self.index_of(v)?))
    }

    /// Per-vertex dump of `S_j(v)` offsets for the first `max_blocks` blocks.
    pub fn dump(&self, max_blocks: u64) -> String {
        let mut out = String::new();
        for (idx, v) in self.vertices.iter().enumerate() {
            let blocks: Vec<String> = (1..=self.blocks().min(max_blocks))
                .map(|j| {
                    let base = (j - 1) * self.block_len();
                    let s: Vec<String> = self.s_j(idx, j).iter().map(|n| (n - base).to_string()).collect();
                    format!("{{{}}}", s.join(","))
                })
                .collect();
            out.push_str(&format!("{v} {}\n", blocks.join(" ")));
        }
        out
    }
}

/// Cardinality, disjointness, placement and contiguity identities for every
/// vertex, block and level.
pub fn check_block_lemma(emb: &EsaEmbedding) -> CheckOutcome {
    let code = &emb.code;
    let m1 = emb.block_len();
    let mut checks = 0u64;
    for (idx, v) in emb.vertices.iter().enumerate() {
        let r = v.height;
        let w = code.depth(r);
        let ys: Vec<u32> = (1..=w).map(|i| y_index(emb.kappa, &v.address.restrict(i))).collect();
        for j in 1..=emb.blocks() {
            let fail = |what: String| Err(format!("{v}, block {j}: {what}"));
            let mut cumulative = 0u32;
            for i in 0..=w {
                let (sx, sy) = (emb.sx(idx, j, i), emb.sy(idx, j, i));
                let x_lo = if i == 0 { 0 } else { code.x(r, i) };
                let (x_hi, y_hi) = (code.x(r, i + 1), code.y(r, i + 1));
                if run_len(sx) as usize != x_hi - x_lo {
                    return fail(format!("|S_x(v,{i})| = {}", run_len(sx)));
                }
                if run_len(sy) as usize != y_hi - x_lo {
                    return fail(format!("|S_y(v,{i})| = {}", run_len(sy)));
                }
                if run_len(run_minus(sy, sx)) as usize != y_hi - x_hi || !(sy.0 <= sx.0 && sx.1 <= sy.1) {
                    return fail(format!("S_y(v,{i}) ∖ S_x(v,{i}) has the wrong size"));
                }
                for k in 0..i {
                    let other = emb.sx(idx, j, k);
                    if sx.0.max(other.0) < sx.1.min(other.1) {
                        return fail(format!("S_x(v,{i}) meets S_x(v,{k})"));
                    }
                }
                cumulative += run_len(sx);
                if cumulative as usize != x_hi {
                    return fail(format!("cumulative size {cumulative} at level {i}"));
                }
                checks += 5;
            }
            let (plus, minus) = emb.placed(idx, j);
            let odd = (2 * j - 2) * m1 + 1..=(2 * j - 1) * m1;
            let even = (2 * j - 1) * m1 + 1..=2 * j * m1;
            if plus.len() != r || minus.len() != r {
                return fail(format!("|S_+| = {}, |S_-| = {}", plus.len(), minus.len()));
            }
            if !plus.iter().all(|p| odd.contains(p)) || !minus.iter().all(|p| even.contains(p)) {
                return fail("placed copies leave their blocks".into());
            }
            checks += 2;

            // runs of equal Y values above level i keep selections contiguous
            for i in 0..w {
                let p = run_minus(emb.sy(idx, j, i), emb.sx(idx, j, i));
                for i2 in i + 1..=w {
                    let pattern: Vec<bool> = (i + 1..=i2).map(|n| emb.family.y(ys[n - 1], j)).collect();
                    if !(pattern.iter().all(|&b| b) || pattern.iter().all(|&b| !b)) {
                        continue;
                    }
                    let first = pattern[0];
                    let a = (code.x(r, i2 + 1) - code.x(r, i + 1)) as u32;
                    let b = (code.y(r, i2 + 1) - code.x(r, i + 1)) as u32;
                    let (union_want, rest_want) = if first {
                        ((p.0, p.0 + a), (p.0 + a, p.0 + b))
                    } else {
                        ((p.1 - a, p.1), (p.1 - b, p.1 - a))
                    };
                    let mut union: Vec<u32> = (i + 1..=i2)
                        .flat_map(|k| {
                            let s = emb.sx(idx, j, k);
                            s.0..s.1
                        })
                        .collect();
                    union.sort_unstable();
                    let want: Vec<u32> = (union_want.0..union_want.1).collect();
                    let rest = run_minus(emb.sy(idx, j, i2), emb.sx(idx, j, i2));
                    if union != want || (run_len(rest) > 0 && rest != rest_want) || (run_len(rest) == 0 && rest_want.0 != rest_want.1) {
                        return fail(format!("contiguity fails between levels {i} and {i2}"));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

/// Result of the separation check on one incomparable pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub blocks: u64,
    pub nu: u32,
    pub min_count: u64,
    pub distance: u64,
}

/// For an incomparable pair, finds the blocks where the Bernoulli values
/// separate the two branches for `p` levels and counts elements of the
/// `v` selections that precede every `u` selection.
pub fn esa_separation_check(emb: &EsaEmbedding, u: &Vertex, v: &Vertex, p: usize) -> std::result::Result<Separation, String> {
    let code = &emb.code;
    if updown(code, u, v) {
        return Err(format!("{u} and {v} are comparable"));
    }
    let (u, v) = if u.height <= v.height { (u, v) } else { (v, u) };
    let (ui, vi) = (emb.index_of(u).map_err(|e| e.to_string())?, emb.index_of(v).map_err(|e| e.to_string())?);
    let k = u.address.meet_len(&v.address);
    let d = dist_formula(code, u, v) as u64;
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for n in 1..=p {
        ones.push(y_index(emb.kappa, &v.address.restrict(k + n)));
        zeros.push(y_index(emb.kappa, &u.address.restrict(k + n)));
    }
    let mut constrained: Vec<u32> = ones.iter().chain(&zeros).copied().collect();
    constrained.sort_unstable();
    constrained.dedup();
    let nu = constrained.len() as u32;
    if nu as usize > 2 * p || ones.iter().any(|i| zeros.contains(i)) {
        return Err(format!("constrained nodes overlap for {u}, {v}"));
    }
    let fam = &emb.family;
    let good: Vec<u64> = (1..=emb.blocks())
        .filter(|&j| ones.iter().all(|&i| fam.y(i, j)) && zeros.iter().all(|&i| !fam.y(i, j)))
        .collect();
    if good.len() as u64 != 1u64 << (emb.mu() - nu) {
        return Err(format!("{} separating blocks, expected 2^({} - {nu})", good.len(), emb.mu()));
    }
    let (wu, wv) = (code.depth(u.height), code.depth(v.height));
    let mut min_count = u64::MAX;
    for &j in &good {
        let u_min = (k + 1..=wu)
            .map(|l| emb.sx(ui, j, l))
            .filter(|s| run_len(*s) > 0)
            .map(|s| s.0)
            .min()
            .ok_or_else(|| format!("block {j}: u selects nothing above level {k}"))?;
        let count: u64 = (k + 1..=wv)
            .map(|l| {
                let s = emb.sx(vi, j, l);
                (s.0..s.1).filter(|&t| t < u_min).count() as u64
            })
            .sum();
        if 2 * count < d {
            return Err(format!("block {j}: only {count} elements precede u's selections, d = {d}"));
        }
        min_count = min_count.min(count);
    }
    Ok(Separation {
        blocks: good.len() as u64,
        nu,
        min_count,
        distance: d,
    })
}

/// Runs [`esa_separation_check`] on every incomparable pair.
pub fn check_separation(emb: &EsaEmbedding, p: usize) -> CheckOutcome {
    let n = emb.vertices.len();
    let mut checks = 0;
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (&emb.vertices[a], &emb.vertices[b]);
            if updown(&emb.code, u, v) {
                continue;
            }
            esa_separation_check(emb, u, v, p)?;
            checks += 1;
        }
    }
    Ok(checks)
}

/// `2^{2p+1}`.
pub fn esa_bound(p: usize) -> Rat {
    Rat::from_integer(BigInt::one() << (2 * p + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed_l1::intervals::rat;

    fn c(s: &str) -> Code {
        s.parse().unwrap()
    }

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(summing_norm(&[1, -1]), 1);
        assert_eq!(summing_norm(&[1, 1]), 2);
        assert_eq!(summing_norm(&[2, 3]), summing_norm(&[5]));
        assert!(summing_norm(&[-1]) <= summing_norm(&[2, -3]));
        let spread = SummingVector::from_pairs([(2, 1), (5, -2), (9, 1)]);
        assert_eq!(spread.raw_norm(), summing_norm(&[1, -2, 1]));
        assert_eq!(eta(3), rat(1, 1));
        assert_eq!(check_esa_axioms(2000, 11), Ok(()));
    }

    #[test]
    fn bernoulli_family() {
        let f = BernoulliFamily::new(3);
        let ones: Vec<u64> = (1..=8).filter(|&j| f.y(1, j)).collect();
        assert_eq!(ones, vec![1, 2, 3, 4]);
        let ones: Vec<u64> = (1..=8).filter(|&j| f.y(3, j)).collect();
        assert_eq!(ones, vec![1, 3, 5, 7]);
        assert!(f.check_independence(3).is_ok());
    }

    #[test]
    fn diamond_embedding() {
        let d = c("0,1,0");
        let emb = build_esa(&d, 2).unwrap();
        assert_eq!(emb.mu(), 3);
        let a = emb.index_of(&v("1:(0)")).unwrap();
        let fam = *emb.family();
        for j in 1..=8 {
            let s = emb.s_j(a, j);
            let base = (j - 1) * 2;
            let expect = if fam.y(2, j) { base + 1 } else { base + 2 };
            assert_eq!(s, vec![expect]);
        }
        let top = emb.index_of(&Vertex::top(&d)).unwrap();
        for j in 1..=8 {
            assert!(emb.s_j(0, j).is_empty());
            assert_eq!(emb.s_j(top, j), vec![2 * j - 1, 2 * j]);
        }
        assert!(emb.psi(0).support().next().is_none());
        assert_eq!(emb.dist_by_index(0, top), rat(2, 1));
        let b = emb.index_of(&v("1:(1)")).unwrap();
        assert_eq!(emb.dist_by_index(a, b), rat(1, 1));
        assert_eq!(emb.psi(a).minus(&emb.psi(b)).norm(), rat(1, 1));
        check_block_lemma(&emb).unwrap();
        let sep = esa_separation_check(&emb, &v("1:(0)"), &v("1:(1)"), 1).unwrap();
        assert_eq!((sep.blocks, sep.nu, sep.min_count), (2, 2, 1));
        assert!(esa_separation_check(&emb, &v("1:(0)"), &Vertex::top(&d), 1).is_err());
    }

    #[test]
    fn deeper_separation() {
        let w = c("0,2,0");
        let p = crate::coding::p_param(&w, crate::coding::IndexConvention::Positive).unwrap();
        assert_eq!(p, 2);
        let emb = build_esa(&w, 2).unwrap();
        let sep = esa_separation_check(&emb, &v("1:(0,0)"), &v("1:(1,1)"), p).unwrap();
        assert!(sep.min_count >= 1);
        assert_eq!(sep.nu, 4);
        check_separation(&emb, p).unwrap();
        check_block_lemma(&emb).unwrap();
    }

    #[test]
    fn length_cap() {
        let err = build_esa_with(&c("0,3,0"), 3, EsaOptions { length_cap: 1000, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::EsaCap { mu: 40, .. }));
    }
}
