//! Edge-replacement products of bundle graphs, computed on codes.
//!
//! `oslash` uses the closed form over all levels at once. The explicit
//! edge-replacement graph and the vertex map into `T_{W'',κ}` exist so the
//! closed forms can be certified against a direct construction.

use std::collections::{HashSet, VecDeque};

use crate::coding::{Code, Vertex};
use crate::error::{CheckOutcome, Error, Result};
use crate::graph::{dist_formula, BundleGraph};

pub const DEFAULT_FAMILY_LENGTH_LIMIT: usize = 1_000_000;

/// Replaces the edges between heights `n` and `n+1` by copies of `T_{W'}`.
pub fn oslash_n(w: &Code, wp: &Code, n: usize) -> Result<Code> {
    let m = w.height() - 1;
    if n > m {
        return Err(Error::HeightOutOfRange { height: n, max: m });
    }
    let mp1 = wp.height(); // M' + 1
    let k = w.depth(n).max(w.depth(n + 1));
    let len = w.len() + mp1 - 1;
    let depths = (0..len)
        .map(|r| {
            if r <= n {
                w.depth(r)
            } else if r < n + mp1 {
                k + wp.depth(r - n)
            } else {
                w.depth(r - (mp1 - 1))
            }
        })
        .collect();
    Code::new(depths)
}

/// Replaces every edge of `T_W` by a copy of `T_{W'}`.
pub fn oslash(w: &Code, wp: &Code) -> Code {
    let mp1 = wp.height();
    let mut depths = Vec::with_capacity(w.height() * mp1 + 1);
    depths.push(0);
    for n in 0..w.height() {
        let k = w.depth(n).max(w.depth(n + 1));
        depths.extend((1..mp1).map(|t| k + wp.depth(t)));
        depths.push(w.depth(n + 1));
    }
    Code::new(depths).expect("product of valid codes is valid")
}

/// `k`-fold iterated product; `family(w, 1) = w`.
pub fn family(w: &Code, k: usize) -> Result<Code> {
    family_with_limit(w, k, DEFAULT_FAMILY_LENGTH_LIMIT)
}

pub fn family_with_limit(w: &Code, k: usize, limit: usize) -> Result<Code> {
    if k == 0 {
        return Err(Error::Usage("family index must be at least 1".into()));
    }
    let mut cur = w.clone();
    for _ in 1..k {
        let len = cur
            .height()
            .checked_mul(w.height())
            .and_then(|x| x.checked_add(1))
            .ok_or(Error::Overflow("family code length"))?;
        if len > limit {
            return Err(Error::SizeGuard {
                count: len.to_string(),
                limit: limit as u64,
            });
        }
        cur = oslash(&cur, w);
    }
    Ok(cur)
}

/// Which edge levels an edge replacement acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Levels {
    Single(usize),
    All,
}

/// A vertex of an edge-replacement graph: an original vertex of `G`, or an
/// interior vertex of the copy of `H` sitting on the edge `lower -- upper`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompositeVertex {
    Original(Vertex),
    Interior {
        lower: Vertex,
        upper: Vertex,
        inner: Vertex,
    },
}

/// The level isomorphism (one level) or its composition over all levels.
///
/// Original vertices above the replaced level move up by `M'`, the height
/// `T_{W'}` adds to each replaced edge.
pub fn map_composite(w: &Code, wp: &Code, levels: Levels, v: &CompositeVertex) -> Result<Vertex> {
    let mp1 = wp.height();
    match v {
        CompositeVertex::Original(Vertex { height, address }) => {
            if *height > w.height() || address.len() != w.depth(*height) {
                return Err(Error::MalformedComposite(format!("{height}:{address} is not in T_W")));
            }
            let h = match levels {
                Levels::Single(n) if *height <= n => *height,
                Levels::Single(_) => height + mp1 - 1,
                Levels::All => height * mp1,
            };
            Ok(Vertex::new(h, address.clone()))
        }
        CompositeVertex::Interior {
            lower,
            upper,
            inner,
        } => {
            let n = lower.height;
            if upper.height != n + 1 || n >= w.height() {
                return Err(Error::MalformedComposite(format!(
                    "{lower} -- {upper} is not an edge between consecutive heights"
                )));
            }
            if let Levels::Single(level) = levels {
                if level != n {
                    return Err(Error::MalformedComposite(format!(
                        "edge at level {n} is not replaced by the level-{level} product"
                    )));
                }
            }
            if inner.height == 0 || inner.height >= mp1 || inner.address.len() != wp.depth(inner.height) {
                return Err(Error::MalformedComposite(format!("{inner} is not an interior vertex of T_W'")));
            }
            let (a, b) = (&lower.address, &upper.address);
            let longer = if a.is_prefix_of(b) {
                b
            } else if b.is_prefix_of(a) {
                a
            } else {
                return Err(Error::MalformedComposite(format!("{lower} -- {upper} is not an edge")));
            };
            let base = match levels {
                Levels::Single(_) => n,
                Levels::All => n * mp1,
            };
            Ok(Vertex::new(base + inner.height, longer.concat(&inner.address)))
        }
    }
}

/// The map `F` for the product over level `n`.
pub fn isomorphism_f(w: &Code, wp: &Code, n: usize, v: &CompositeVertex) -> Result<Vertex> {
    map_composite(w, wp, Levels::Single(n), v)
}

/// The graph obtained by literally replacing edges of `g` by copies of `h`.
#[derive(Clone, Debug)]
pub struct EdgeReplacement {
    pub vertices: Vec<CompositeVertex>,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeReplacement {
    pub fn build(g: &BundleGraph, h: &BundleGraph, levels: Levels) -> Self {
        let mut vertices: Vec<CompositeVertex> = g
            .vertices()
            .iter()
            .cloned()
            .map(CompositeVertex::Original)
            .collect();
        let (hb, ht) = (0, h.vertex_count() - 1);
        let mut edges = Vec::new();
        for (a, b) in g.edges() {
            let (lo, hi) = if g.vertices()[a].height < g.vertices()[b].height { (a, b) } else { (b, a) };
            let replaced = match levels {
                Levels::All => true,
                Levels::Single(n) => g.vertices()[lo].height == n,
            };
            if !replaced {
                edges.push((lo, hi));
                continue;
            }
            let mut local = vec![0usize; h.vertex_count()];
            for (i, inner) in h.vertices().iter().enumerate() {
                local[i] = if i == hb {
                    lo
                } else if i == ht {
                    hi
                } else {
                    vertices.push(CompositeVertex::Interior {
                        lower: g.vertices()[lo].clone(),
                        upper: g.vertices()[hi].clone(),
                        inner: inner.clone(),
                    });
                    vertices.len() - 1
                };
            }
            edges.extend(h.edges().into_iter().map(|(p, q)| (local[p], local[q])));
        }
        EdgeReplacement { vertices, edges }
    }

    pub fn bfs_from(&self, start: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for &n in &adj[c] {
                if dist[n] == usize::MAX {
                    dist[n] = dist[c] + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }
}

/// Outcome of carrying an edge-replacement graph onto `T_{W'',κ}`.
#[derive(Clone, Debug)]
pub struct IsomorphismCheck {
    pub target: Code,
    pub vertices: usize,
    pub edges: usize,
    pub mismatch: Option<String>,
}

impl IsomorphismCheck {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Builds the edge replacement of `T_{W,κ}` by `T_{W',κ}`, maps it through
/// [`map_composite`] and checks it is a bijection onto the vertices of the
/// closed-form product that carries edges exactly onto edges.
pub fn check_isomorphism(w: &Code, wp: &Code, levels: Levels, kappa: u32) -> Result<IsomorphismCheck> {
    let target = match levels {
        Levels::Single(n) => oslash_n(w, wp, n)?,
        Levels::All => oslash(w, wp),
    };
    let g = BundleGraph::materialize(w, kappa)?;
    let h = BundleGraph::materialize(wp, kappa)?;
    let t = BundleGraph::materialize(&target, kappa)?;
    let er = EdgeReplacement::build(&g, &h, levels);
    let mut check = IsomorphismCheck {
        target,
        vertices: er.vertices.len(),
        edges: er.edges.len(),
        mismatch: None,
    };

    let mut image = Vec::with_capacity(er.vertices.len());
    let mut seen = HashSet::new();
    for v in &er.vertices {
        let mapped = map_composite(w, wp, levels, v)?;
        let Some(idx) = t.index_of(&mapped) else {
            check.mismatch = Some(format!("{v:?} maps to {mapped}, not a vertex of the product"));
            return Ok(check);
        };
        if !seen.insert(idx) {
            check.mismatch = Some(format!("{mapped} is hit twice"));
            return Ok(check);
        }
        image.push(idx);
    }
    if seen.len() != t.vertex_count() {
        check.mismatch = Some(format!(
            "map hits {} of {} product vertices",
            seen.len(),
            t.vertex_count()
        ));
        return Ok(check);
    }
    let mut mapped_edges = HashSet::new();
    for &(a, b) in &er.edges {
        let (x, y) = (image[a], image[b]);
        if !t.has_edge(x, y) {
            check.mismatch = Some(format!(
                "edge {:?} -- {:?} maps to non-edge {} -- {}",
                er.vertices[a],
                er.vertices[b],
                t.vertices()[x],
                t.vertices()[y]
            ));
            return Ok(check);
        }
        mapped_edges.insert((x.min(y), x.max(y)));
    }
    if mapped_edges.len() != t.edge_count() || er.edges.len() != t.edge_count() {
        check.mismatch = Some(format!(
            "{} replacement edges against {} product edges",
            er.edges.len(),
            t.edge_count()
        ));
    }
    Ok(check)
}

/// Evaluates the case formulas for `x''` and `y''` over the composed range
/// and compares them with a direct scan of `oslash(w, wp)`.
///
/// Returns the first `(r, i)` where they disagree.
pub fn check_composed_xy(w: &Code, wp: &Code) -> std::result::Result<(), (usize, usize)> {
    let prod = oslash(w, wp);
    let mp1 = wp.height();
    let cap = prod.max_depth() + 1;
    let table = prod.xy_table(cap);
    let (tw, twp) = (w.xy_table(cap), wp.xy_table(cap));
    let x = |t: &Vec<Vec<(usize, usize)>>, r: usize, i: usize| t[i][r].0;
    let y = |t: &Vec<Vec<(usize, usize)>>, r: usize, i: usize| t[i][r].1;
    for n in 0..w.height() {
        let k = w.depth(n).max(w.depth(n + 1));
        for r in n * mp1 + 1..=(n + 1) * mp1 {
            let at_joint = r == (n + 1) * mp1;
            for i in 0..=cap {
                let x_formula = if at_joint {
                    mp1 * x(&tw, n + 1, i)
                } else if i <= k {
                    mp1 * x(&tw, n, i)
                } else {
                    n * mp1 + x(&twp, r - n * mp1, i - k)
                };
                let y_formula = if at_joint || i <= k {
                    mp1 * y(&tw, n + 1, i)
                } else {
                    n * mp1 + y(&twp, r - n * mp1, i - k)
                };
                if (x_formula, y_formula) != table[i][r] {
                    return Err((r, i));
                }
            }
        }
    }
    Ok(())
}

/// Iterates the single-level products from the top level down; used to
/// cross-check the all-levels closed form.
pub fn oslash_by_levels(w: &Code, wp: &Code) -> Result<Code> {
    let mut cur = w.clone();
    for n in (0..w.height()).rev() {
        cur = oslash_n(&cur, wp, n)?;
    }
    Ok(cur)
}

/// The three named families: diamonds, Laakso graphs and parasols.
pub fn named_base(name: &str) -> Option<Code> {
    let depths = match name {
        "diamond" => vec![0, 1, 0],
        "laakso" => vec![0, 0, 1, 0, 0],
        "parasol" => vec![0, 0, 1, 0],
        _ => return None,
    };
    Code::new(depths).ok()
}

/// Compares BFS distances on the edge-replacement graph with the closed-form
/// metric of the product code, carried through [`map_composite`].
pub fn check_metric_consistency(w: &Code, wp: &Code, levels: Levels, kappa: u32) -> Result<CheckOutcome> {
    let target = match levels {
        Levels::Single(n) => oslash_n(w, wp, n)?,
        Levels::All => oslash(w, wp),
    };
    let g = BundleGraph::materialize(w, kappa)?;
    let h = BundleGraph::materialize(wp, kappa)?;
    let er = EdgeReplacement::build(&g, &h, levels);
    let image = er
        .vertices
        .iter()
        .map(|v| map_composite(w, wp, levels, v))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = 0u64;
    for a in 0..er.vertices.len() {
        let bfs = er.bfs_from(a);
        for b in a + 1..er.vertices.len() {
            let formula = dist_formula(&target, &image[a], &image[b]);
            if bfs[b] != formula {
                return Ok(Err(format!(
                    "{:?} -- {:?}: BFS {} but formula on {} gives {formula}",
                    er.vertices[a], er.vertices[b], bfs[b], target
                )));
            }
            checks += 1;
        }
    }
    Ok(Ok(checks))
}
