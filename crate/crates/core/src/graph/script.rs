//! Recursive construction of bundle graphs from initialization, parallel and
//! series steps, with depth and address labels recorded along the way.

use std::collections::BTreeSet;

use crate::coding::{Address, Code, Vertex};
use crate::error::{Error, Result};
use crate::graph::BundleGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildScript {
    /// A single edge.
    Init,
    /// Top of the first graph glued to the bottom of the second.
    Parallel(Box<BuildScript>, Box<BuildScript>),
    /// `k` copies sharing bottom and top.
    Series(Box<BuildScript>, u32),
}

impl BuildScript {
    pub fn parallel(a: BuildScript, b: BuildScript) -> Self {
        BuildScript::Parallel(Box::new(a), Box::new(b))
    }

    pub fn series(inner: BuildScript, k: u32) -> Self {
        BuildScript::Series(Box::new(inner), k)
    }

    /// The set of multiplicities used by series steps.
    pub fn multiplicities(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_multiplicities(&mut out);
        out
    }

    fn collect_multiplicities(&self, out: &mut BTreeSet<u32>) {
        match self {
            BuildScript::Init => {}
            BuildScript::Parallel(a, b) => {
                a.collect_multiplicities(out);
                b.collect_multiplicities(out);
            }
            BuildScript::Series(inner, k) => {
                out.insert(*k);
                inner.collect_multiplicities(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledVertex {
    pub height: usize,
    pub depth: usize,
    pub address: Address,
}

#[derive(Clone, Debug)]
pub struct LabelledGraph {
    pub vertices: Vec<LabelledVertex>,
    /// Index pairs into `vertices`.
    pub edges: Vec<(usize, usize)>,
    pub bottom: usize,
    pub top: usize,
}

impl LabelledGraph {
    pub fn height(&self) -> usize {
        self.vertices[self.top].height
    }

    /// Depth per height; fails if two vertices at one height disagree.
    pub fn derived_code(&self) -> Result<Code> {
        let mut depths: Vec<Option<usize>> = vec![None; self.height() + 1];
        for v in &self.vertices {
            match depths[v.height] {
                None => depths[v.height] = Some(v.depth),
                Some(d) if d != v.depth => {
                    return Err(Error::InvalidCode(format!(
                        "height {} carries depths {d} and {}",
                        v.height, v.depth
                    )))
                }
                Some(_) => {}
            }
        }
        let depths = depths
            .into_iter()
            .enumerate()
            .map(|(h, d)| d.ok_or_else(|| Error::InvalidCode(format!("no vertex at height {h}"))))
            .collect::<Result<Vec<_>>>()?;
        Code::new(depths)
    }
}

/// Builds the labelled graph bottom-up.
///
/// A series step prepends the copy index to the addresses of interior
/// vertices, so the outermost copy is the first address entry. That is the
/// order under which adjacency coincides with the prefix relation.
pub fn build_recursive(script: &BuildScript) -> LabelledGraph {
    match script {
        BuildScript::Init => LabelledGraph {
            vertices: vec![
                LabelledVertex {
                    height: 0,
                    depth: 0,
                    address: Address::empty(),
                },
                LabelledVertex {
                    height: 1,
                    depth: 0,
                    address: Address::empty(),
                },
            ],
            edges: vec![(0, 1)],
            bottom: 0,
            top: 1,
        },
        BuildScript::Parallel(a, b) => {
            let g1 = build_recursive(a);
            let g2 = build_recursive(b);
            let shift = g1.height();
            let mut vertices = g1.vertices.clone();
            let mut remap = vec![0usize; g2.vertices.len()];
            for (i, v) in g2.vertices.iter().enumerate() {
                if i == g2.bottom {
                    remap[i] = g1.top;
                } else {
                    remap[i] = vertices.len();
                    vertices.push(LabelledVertex {
                        height: v.height + shift,
                        ..v.clone()
                    });
                }
            }
            let mut edges = g1.edges.clone();
            edges.extend(g2.edges.iter().map(|&(x, y)| (remap[x], remap[y])));
            LabelledGraph {
                vertices,
                edges,
                bottom: g1.bottom,
                top: remap[g2.top],
            }
        }
        BuildScript::Series(inner, k) => {
            let g = build_recursive(inner);
            let mut vertices = vec![g.vertices[g.bottom].clone(), g.vertices[g.top].clone()];
            let (bottom, top) = (0, 1);
            let mut edges = Vec::new();
            for copy in 0..*k {
                let mut remap = vec![0usize; g.vertices.len()];
                for (i, v) in g.vertices.iter().enumerate() {
                    remap[i] = if i == g.bottom {
                        bottom
                    } else if i == g.top {
                        top
                    } else {
                        vertices.push(LabelledVertex {
                            height: v.height,
                            depth: v.depth + 1,
                            address: Address::new(vec![copy]).concat(&v.address),
                        });
                        vertices.len() - 1
                    };
                }
                edges.extend(g.edges.iter().map(|&(x, y)| (remap[x], remap[y])));
            }
            LabelledGraph {
                vertices,
                edges,
                bottom,
                top,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundtripOutcome {
    Match,
    Mismatch(String),
}

impl RoundtripOutcome {
    pub fn is_match(&self) -> bool {
        matches!(self, RoundtripOutcome::Match)
    }
}

/// Rebuilds the graph from its derived code and compares labels and edges.
pub fn verify_code_roundtrip(script: &BuildScript) -> RoundtripOutcome {
    let mults = script.multiplicities();
    if mults.len() > 1 {
        return RoundtripOutcome::Mismatch(format!(
            "series steps use several multiplicities {mults:?}; a single kappa is required"
        ));
    }
    let kappa = mults.into_iter().next().unwrap_or(1);
    let built = build_recursive(script);
    let code = match built.derived_code() {
        Ok(c) => c,
        Err(e) => return RoundtripOutcome::Mismatch(e.to_string()),
    };
    let reference = match BundleGraph::materialize(&code, kappa) {
        Ok(g) => g,
        Err(e) => return RoundtripOutcome::Mismatch(e.to_string()),
    };

    let as_vertex = |v: &LabelledVertex| Vertex::new(v.height, v.address.clone());
    let ours: BTreeSet<Vertex> = built.vertices.iter().map(as_vertex).collect();
    if ours.len() != built.vertices.len() {
        return RoundtripOutcome::Mismatch("duplicate vertex labels".into());
    }
    let theirs: BTreeSet<Vertex> = reference.vertices().iter().cloned().collect();
    if let Some(v) = ours.symmetric_difference(&theirs).next() {
        return RoundtripOutcome::Mismatch(format!("vertex {v} present in only one construction"));
    }

    let norm = |a: Vertex, b: Vertex| if a <= b { (a, b) } else { (b, a) };
    let our_edges: BTreeSet<(Vertex, Vertex)> = built
        .edges
        .iter()
        .map(|&(x, y)| norm(as_vertex(&built.vertices[x]), as_vertex(&built.vertices[y])))
        .collect();
    let ref_edges: BTreeSet<(Vertex, Vertex)> = reference
        .edges()
        .into_iter()
        .map(|(x, y)| norm(reference.vertices()[x].clone(), reference.vertices()[y].clone()))
        .collect();
    if let Some((a, b)) = our_edges.symmetric_difference(&ref_edges).next() {
        return RoundtripOutcome::Mismatch(format!("edge {a} -- {b} present in only one construction"));
    }
    if our_edges.len() != built.edges.len() {
        return RoundtripOutcome::Mismatch("duplicate edges".into());
    }
    RoundtripOutcome::Match
}
