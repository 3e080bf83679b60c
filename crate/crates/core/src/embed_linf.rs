//! Embedding into the canonical good ℓ∞-tree model.
//!
//! Every node of `κ^{≤max W}` owns its own coordinate, so the norm of a
//! coefficient map is the largest absolute coefficient. Coefficients are the
//! integer `z` values, which keeps every comparison exact.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coding::{Address, Code, Vertex};
use crate::error::Result;

/// Coefficients on tree nodes; missing nodes are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeCoefficients(BTreeMap<Address, i64>);

impl NodeCoefficients {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, node: &Address) -> i64 {
        self.0.get(node).copied().unwrap_or(0)
    }

    /// Sets a coefficient; zero removes the node.
    pub fn set(&mut self, node: Address, value: i64) {
        if value == 0 {
            self.0.remove(&node);
        } else {
            self.0.insert(node, value);
        }
    }

    /// Nonzero entries in node order.
    pub fn iter(&self) -> impl Iterator<Item = (&Address, i64)> {
        self.0.iter().map(|(a, &c)| (a, c))
    }

    pub fn norm(&self) -> u64 {
        self.0.values().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }
}

impl FromIterator<(Address, i64)> for NodeCoefficients {
    fn from_iter<T: IntoIterator<Item = (Address, i64)>>(iter: T) -> Self {
        let mut out = NodeCoefficients::new();
        for (a, c) in iter {
            out.set(a, c);
        }
        out
    }
}

/// `ψ(r, A) = Σ_{B ⪯ A} z(r, |B|) y_B`.
pub fn psi_linf(code: &Code, v: &Vertex) -> Result<NodeCoefficients> {
    code.check_vertex(v, None)?;
    Ok((0..=v.address.len())
        .map(|l| (v.address.restrict(l), code.z(v.height, l) as i64))
        .collect())
}

/// Sup-norm distance between two coefficient maps.
pub fn dist_linf(a: &NodeCoefficients, b: &NodeCoefficients) -> u64 {
    let mut best = 0;
    for (node, ca) in a.iter() {
        best = best.max(ca.abs_diff(b.get(node)));
    }
    for (node, cb) in b.iter() {
        best = best.max(cb.abs_diff(a.get(node)));
    }
    best
}

/// Failure of a model-validity trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelViolation {
    pub branch: Address,
    pub coefficients: Vec<i64>,
    pub reason: String,
}

/// Random checks that branches behave like the ℓ∞ basis (constant 1) and
/// that truncating a branch combination never increases its norm.
pub fn check_model(kappa: u32, max_depth: usize, trials: usize, seed: u64) -> std::result::Result<(), ModelViolation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let branch = Address::new((0..max_depth).map(|_| rng.gen_range(0..kappa.max(1))).collect());
        let coefficients: Vec<i64> = (0..=max_depth).map(|_| rng.gen_range(-50..=50)).collect();
        let combo: NodeCoefficients = coefficients
            .iter()
            .enumerate()
            .map(|(l, &c)| (branch.restrict(l), c))
            .collect();
        let expected = coefficients.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        let fail = |reason: String| ModelViolation {
            branch: branch.clone(),
            coefficients: coefficients.clone(),
            reason,
        };
        if combo.norm() != expected {
            return Err(fail(format!("norm {} but max coefficient {expected}", combo.norm())));
        }
        for k in 0..=max_depth {
            let trunc: NodeCoefficients = combo.iter().filter(|(a, _)| a.len() <= k).map(|(a, c)| (a.clone(), c)).collect();
            if trunc.norm() > combo.norm() {
                return Err(fail(format!("truncation at {k} has norm {}", trunc.norm())));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Code {
        s.parse().unwrap()
    }

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn psi_examples() {
        let d = c("0,1,0");
        let p = psi_linf(&d, &v("1:(0)")).unwrap();
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![(&Address::empty(), 1), (&Address::new(vec![0]), 1)]);
        assert_eq!(psi_linf(&d, &Vertex::bottom()).unwrap(), NodeCoefficients::new());
        let f = c("0,0,1,0,0,2,1,1,1,2,1,0");
        let p = psi_linf(&f, &v("5:(1,1)")).unwrap();
        assert_eq!(p.get(&Address::empty()), 5);
        assert_eq!(p.get(&Address::new(vec![1])), 1);
        assert_eq!(p.get(&Address::new(vec![1, 1])), 1);
        assert_eq!(p.iter().count(), 3);
    }

    #[test]
    fn dist_examples() {
        let d = c("0,1,0");
        let a = psi_linf(&d, &v("1:(0)")).unwrap();
        let b = psi_linf(&d, &v("1:(1)")).unwrap();
        assert_eq!(dist_linf(&a, &b), 1);
        assert_eq!(dist_linf(&a, &a), 0);
        let bottom = psi_linf(&d, &Vertex::bottom()).unwrap();
        let top = psi_linf(&d, &Vertex::top(&d)).unwrap();
        assert_eq!(dist_linf(&bottom, &top), 2);
    }

    #[test]
    fn model_checks() {
        assert_eq!(check_model(3, 4, 200, 7), Ok(()));
    }
}
