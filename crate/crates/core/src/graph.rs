//! Explicit bundle graphs, the closed-form metric and a BFS oracle.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::coding::{nm, updown, Address, Code, Vertex};
use crate::error::{Error, Result};

pub mod script;

pub const DEFAULT_VERTEX_LIMIT: u64 = 1_000_000;

/// `Σ_r κ^{w_r}`, or `None` on overflow.
pub fn vertex_count(code: &Code, kappa: u32) -> Option<u64> {
    code.depths().iter().try_fold(0u64, |acc, &w| {
        let layer = (kappa as u64).checked_pow(u32::try_from(w).ok()?)?;
        acc.checked_add(layer)
    })
}

/// All addresses of length `len` over `0..kappa`, in lexicographic order.
pub fn addresses(kappa: u32, len: usize) -> impl Iterator<Item = Address> {
    let total = (kappa as u64).pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut entries = vec![0u32; len];
        for slot in entries.iter_mut().rev() {
            *slot = (idx % kappa as u64) as u32;
            idx /= kappa as u64;
        }
        Address::new(entries)
    })
}

/// The nodes of `κ^{≤max_len}`, shortest first, lexicographic within a length.
pub fn tree_nodes(kappa: u32, max_len: usize) -> impl Iterator<Item = Address> {
    (0..=max_len).flat_map(move |l| addresses(kappa, l))
}

/// Shortest-path distance from the closed form; valid for any branching
/// number since only the addresses matter.
pub fn dist_formula(code: &Code, u: &Vertex, v: &Vertex) -> usize {
    let (r, s) = (u.height, v.height);
    if updown(code, u, v) {
        r.abs_diff(s)
    } else {
        let (n, m) = nm(code, u, v);
        (r + s - 2 * n).min(2 * m - (r + s))
    }
}

/// `T_{W,κ}` with vertices in height-major, address-lexicographic order.
#[derive(Clone, Debug)]
pub struct BundleGraph {
    code: Code,
    kappa: u32,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl BundleGraph {
    pub fn materialize(code: &Code, kappa: u32) -> Result<Self> {
        Self::materialize_with_limit(code, kappa, DEFAULT_VERTEX_LIMIT)
    }

    pub fn materialize_with_limit(code: &Code, kappa: u32, limit: u64) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::Usage("kappa must be at least 1".into()));
        }
        let count = vertex_count(code, kappa).ok_or(Error::SizeGuard {
            count: "overflow".into(),
            limit,
        })?;
        if count > limit {
            return Err(Error::SizeGuard {
                count: count.to_string(),
                limit,
            });
        }

        let mut vertices = Vec::with_capacity(count as usize);
        let mut layer_start = Vec::with_capacity(code.len());
        for (r, &w) in code.depths().iter().enumerate() {
            layer_start.push(vertices.len());
            vertices.extend(addresses(kappa, w).map(|a| Vertex::new(r, a)));
        }
        layer_start.push(vertices.len());
        let index: HashMap<Vertex, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut adjacency = vec![Vec::new(); vertices.len()];
        for r in 0..code.height() {
            let (wl, wh) = (code.depth(r), code.depth(r + 1));
            // Every vertex on the deeper layer has exactly one neighbour on the
            // shallower one: its prefix of the shallower length.
            let (deep, shallow_len) = if wh >= wl { (r + 1, wl) } else { (r, wh) };
            let deep_range = layer_start[deep]..layer_start[deep + 1];
            let other = if deep == r { r + 1 } else { r };
            for a in deep_range {
                let prefix = Vertex::new(other, vertices[a].address.restrict(shallow_len));
                let b = index[&prefix];
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }

        Ok(BundleGraph {
            code: code.clone(),
            kappa,
            vertices,
            index,
            adjacency,
        })
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// BFS distances from vertex index `start` to every vertex.
    pub fn bfs_from(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for &n in &self.adjacency[cur] {
                if dist[n] == usize::MAX {
                    dist[n] = dist[cur] + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    pub fn dist_bfs(&self, u: &Vertex, v: &Vertex) -> Result<usize> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        Ok(self.bfs_from(a)[b])
    }

    fn require(&self, v: &Vertex) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::InvalidVertex {
            vertex: v.to_string(),
            reason: format!("not a vertex of T_({}),{}", self.code, self.kappa),
        })
    }

    /// Line-oriented dump: `r:(a,..)` per vertex, then `u -- v` per edge.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "{v}");
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{} -- {}", self.vertices[a], self.vertices[b]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Code {
        "0,0,1,0,0,2,1,1,1,2,1,0".parse().unwrap()
    }

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn diamond_shape() {
        let g = BundleGraph::materialize(&"0,1,0".parse().unwrap(), 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(
            g.dump(),
            "0:()\n1:(0)\n1:(1)\n2:()\n0:() -- 1:(0)\n0:() -- 1:(1)\n1:(0) -- 2:()\n1:(1) -- 2:()\n"
        );
    }

    #[test]
    fn figure_one_counts() {
        let g = BundleGraph::materialize(&fig1(), 2).unwrap();
        assert_eq!(g.vertex_count(), 23);
        assert_eq!(g.edge_count(), 28);
    }

    #[test]
    fn worked_distances() {
        let c = fig1();
        let g = BundleGraph::materialize(&c, 2).unwrap();
        for (a, b, d) in [("5:(1,1)", "9:(1,0)", 4), ("5:(1,1)", "9:(0,1)", 6), ("2:(0)", "2:(1)", 2)] {
            assert_eq!(dist_formula(&c, &v(a), &v(b)), d);
            assert_eq!(g.dist_bfs(&v(a), &v(b)).unwrap(), d);
        }
    }

    #[test]
    fn bfs_basics() {
        let c: Code = "0,1,0".parse().unwrap();
        let g = BundleGraph::materialize(&c, 2).unwrap();
        assert_eq!(g.dist_bfs(&Vertex::bottom(), &Vertex::top(&c)).unwrap(), 2);
        assert_eq!(g.dist_bfs(&v("1:(1)"), &v("1:(1)")).unwrap(), 0);
        assert!(g.dist_bfs(&v("1:(2)"), &v("1:(1)")).is_err());
    }

    #[test]
    fn size_guard() {
        let c: Code = "0,3,0".parse().unwrap();
        let err = BundleGraph::materialize_with_limit(&c, 10, 100).unwrap_err();
        assert_eq!(
            err,
            Error::SizeGuard {
                count: "1002".into(),
                limit: 100
            }
        );
        assert_eq!(vertex_count(&"0,64,0".parse().unwrap(), 2), None);
    }

    #[test]
    fn kappa_one_is_a_path() {
        let c: Code = "0,2,1,0".parse().unwrap();
        let g = BundleGraph::materialize(&c, 1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
    }
}
