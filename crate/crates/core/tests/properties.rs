use bundle_embed::coding::{meet, p_param, updown, Address, Code, IndexConvention, Vertex};
use bundle_embed::embed_esa::check_esa_axioms;
use bundle_embed::embed_linf::check_model;
use bundle_embed::graph::{addresses, dist_formula, BundleGraph};
use bundle_embed::harness::{code_vertices, Corpus};
use proptest::prelude::*;

fn address(kappa: u32, max_len: usize) -> impl Strategy<Value = Address> {
    prop::collection::vec(0..kappa, 0..=max_len).prop_map(Address::new)
}

fn code(max_interior: usize, max_depth: usize) -> impl Strategy<Value = Code> {
    prop::collection::vec(0..=max_depth, 0..=max_interior).prop_map(|mid| {
        let mut d = vec![0];
        d.extend(mid);
        d.push(0);
        Code::new(d).unwrap()
    })
}

/// A code, a branching number and three vertex indices into its graph.
fn graph_triple() -> impl Strategy<Value = (Code, u32, usize, usize, usize)> {
    (code(5, 2), 2u32..=3).prop_flat_map(|(c, k)| {
        let n = code_vertices(&c, k).len();
        (Just(c), Just(k), 0..n, 0..n, 0..n)
    })
}

proptest! {
    #[test]
    fn meet_laws(a in address(3, 6), b in address(3, 6)) {
        let m = meet(&a, &b);
        prop_assert_eq!(meet(&a, &a), a.clone());
        prop_assert_eq!(meet(&b, &a), m.clone());
        prop_assert!(m.len() <= a.len().min(b.len()));
        prop_assert!(m.is_prefix_of(&a) && m.is_prefix_of(&b));
        prop_assert_eq!(m.len(), a.meet_len(&b));
        // maximality: one more entry of a is not shared with b
        if m.len() < a.len() && m.len() < b.len() {
            prop_assert_ne!(a.entries()[m.len()], b.entries()[m.len()]);
        }
    }

    #[test]
    fn prefix_stability(a1 in address(2, 4), tail in address(2, 4), b in address(2, 6)) {
        prop_assume!(!a1.is_prefix_of(&b));
        let a2 = a1.concat(&tail);
        prop_assert_eq!(meet(&a2, &b), meet(&a1, &b));
    }

    #[test]
    fn xy_monotone(c in code(8, 3)) {
        let top = c.max_depth() + 1;
        for r in 0..=c.height() {
            for i in 1..top {
                let (lo, hi) = (c.xyz(r, i).unwrap(), c.xyz(r, i + 1).unwrap());
                prop_assert!(lo.x <= hi.x && lo.y >= hi.y);
                prop_assert!(lo.x <= r && r <= lo.y);
            }
            let end = c.xyz(r, top).unwrap();
            prop_assert_eq!((end.x, end.y, end.z), (r, r, 0));
        }
    }

    #[test]
    fn formula_is_the_graph_metric((c, k, a, b, t) in graph_triple()) {
        let g = BundleGraph::materialize(&c, k).unwrap();
        let vs = g.vertices();
        let (u, v, w) = (&vs[a], &vs[b], &vs[t]);
        let d = |x: &Vertex, y: &Vertex| dist_formula(&c, x, y);
        prop_assert_eq!(d(u, v), g.bfs_from(a)[b]);
        prop_assert_eq!(d(u, v), d(v, u));
        prop_assert_eq!(d(u, v) == 0, a == b);
        prop_assert!(d(u, w) <= d(u, v) + d(v, w));
        prop_assert!(d(u, v) >= u.height.abs_diff(v.height));
        if updown(&c, u, v) {
            prop_assert_eq!(d(u, v), u.height.abs_diff(v.height));
        }
    }

    #[test]
    fn linf_model_is_valid(kappa in 1u32..=4, depth in 0usize..=5, seed in any::<u64>()) {
        prop_assert!(check_model(kappa, depth, 50, seed).is_ok());
    }
}

#[test]
fn binary_tree_sits_in_the_lower_half() {
    let c: Code = "0,1,2,3,2,1,0".parse().unwrap();
    let g = BundleGraph::materialize(&c, 2).unwrap();
    let tree: Vec<Vertex> = (0..=3).flat_map(|h| addresses(2, h).map(move |a| Vertex::new(h, a))).collect();
    assert_eq!(tree.len(), 15);
    for u in &tree {
        let from_u = g.bfs_from(g.index_of(u).unwrap());
        for v in &tree {
            // path length in the rooted binary tree
            let want = u.address.len() + v.address.len() - 2 * u.address.meet_len(&v.address);
            assert_eq!(dist_formula(&c, u, v), want, "{u} {v}");
            assert_eq!(from_u[g.index_of(v).unwrap()], want, "{u} {v}");
        }
    }
}

#[test]
fn p_conventions_are_ordered_on_the_corpus() {
    for c in Corpus::enumerate(6, 2, &[2]).codes {
        let pos = p_param(&c, IndexConvention::Positive).unwrap();
        let zero = p_param(&c, IndexConvention::IncludeZero).unwrap();
        assert!(pos <= zero && zero <= c.max_depth() + 1, "({c}): {pos} {zero}");
    }
}

#[test]
fn summing_norm_axioms() {
    for seed in 0..4 {
        check_esa_axioms(2_500, seed).unwrap();
    }
}
