use std::collections::{BTreeSet, HashMap};

use grsn::closed_forms::cyclic_count;
use grsn::counting::{Counter, ElementIndex};
use grsn::{reflections, DecoratedGraph, GroupElement, GroupParams, Reflection};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;

const GROUPS: [(u32, u32, u32); 8] =
    [(1, 1, 4), (2, 1, 3), (2, 2, 3), (3, 1, 3), (4, 2, 3), (6, 2, 3), (4, 4, 3), (6, 3, 2)];

fn group() -> impl Strategy<Value = GroupParams> {
    proptest::sample::select(GROUPS.to_vec()).prop_map(|(r, s, n)| GroupParams::new(r, s, n).unwrap())
}

fn element_of(p: GroupParams) -> impl Strategy<Value = GroupElement> {
    let idx = ElementIndex::new(p).unwrap();
    (0..idx.size()).prop_map(move |i| idx.unrank(i))
}

fn triple() -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    group().prop_flat_map(|p| (element_of(p), element_of(p), element_of(p)))
}

fn tuple() -> impl Strategy<Value = DecoratedGraph> {
    group().prop_flat_map(|p| {
        let refl = reflections(p);
        proptest::collection::vec(proptest::sample::select(refl), 0..9)
            .prop_map(move |t| DecoratedGraph::from_tuple(p, &t).unwrap())
    })
}

/// Vertex orbits of the subgroup generated by the tuple, by closing the
/// underlying permutations under composition on vertex sets.
fn orbits(p: GroupParams, tuple: &[Reflection]) -> usize {
    let n = p.n() as usize;
    let perms: Vec<Vec<u32>> = tuple.iter().map(|r| r.to_element(p).unwrap().perm().to_vec()).collect();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for perm in &perms {
                let w = perm[v] as usize;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms((a, b, c) in triple()) {
        let id = GroupElement::identity(a.params());
        prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        prop_assert_eq!(a.multiply(&id).unwrap(), a.clone());
        prop_assert_eq!(id.multiply(&a).unwrap(), a.clone());
        prop_assert_eq!(a.multiply(&a.inverse()).unwrap(), id.clone());
        let s = a.params().s();
        prop_assert_eq!(a.exps().iter().sum::<u32>() % s, 0);
    }

    #[test]
    fn projections_are_homomorphisms((a, b, _c) in triple()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.project_pi(), a.project_pi().multiply(&b.project_pi()).unwrap());
        let q = a.params().q();
        prop_assert_eq!(ab.project_phi(), (a.project_phi() + b.project_phi()) % q);
        prop_assert_eq!(ab.delta(), u8::from(ab.project_phi() == 0));
    }

    #[test]
    fn apply_matches_composition((a, b, _c) in triple()) {
        let r = a.params().r();
        let ab = a.multiply(&b).unwrap();
        for i in 1..=a.n() {
            let (j, e1) = b.apply(i).unwrap();
            let (k, e2) = a.apply(j).unwrap();
            prop_assert_eq!(ab.apply(i).unwrap(), (k, (e1 + e2) % r));
        }
    }

    #[test]
    fn partitions_are_invariant_and_admissible((a, _b, _c) in triple()) {
        let s = a.params().s();
        for part in a.partitions() {
            let covered: BTreeSet<u32> = part.blocks.iter().flatten().copied().collect();
            prop_assert_eq!(covered.len(), a.n());
            for (block, dense) in part.blocks.iter().zip(part.dense_restrictions(&a)) {
                let set: BTreeSet<u32> = block.iter().copied().collect();
                let mut exp_sum = 0;
                for &v in block {
                    let (w, e) = a.apply(v as usize).unwrap();
                    prop_assert!(set.contains(&(w as u32)));
                    exp_sum += e;
                }
                prop_assert_eq!(exp_sum % s, 0);
                prop_assert_eq!(dense.n(), block.len());
            }
        }
    }

    #[test]
    fn graph_tuple_bijection(g in tuple()) {
        let t = g.to_tuple();
        prop_assert_eq!(DecoratedGraph::from_tuple(g.params(), &t).unwrap(), g.clone());
        let js = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<DecoratedGraph>(&js).unwrap(), g);
    }

    #[test]
    fn walks_evaluate_to_product_and_cover_edges_once(g in tuple()) {
        prop_assert_eq!(g.evaluate_walks(), g.evaluate_product());
        let mut uses: HashMap<(usize, u32, u32), usize> = HashMap::new();
        for w in g.ordered_walks() {
            for st in &w.steps {
                *uses.entry((st.edge, st.tail, st.head)).or_default() += 1;
            }
        }
        let (e1, e2) = g.split();
        prop_assert_eq!(uses.len(), 2 * e1 + e2);
        prop_assert!(uses.values().all(|&c| c == 1));
    }

    #[test]
    fn weight_sum_law(g in tuple()) {
        let p = g.params();
        let total: i64 = g.ordered_walks().iter().map(|w| g.walk_weight(w)).sum();
        let loops: i64 = g.edges().iter().filter(|e| e.is_loop()).map(|e| e.label as i64).sum();
        prop_assert_eq!(total, p.s() as i64 * loops);
        let exps: i64 = g.evaluate().exps().iter().map(|&e| e as i64).sum();
        prop_assert_eq!((total - exps).rem_euclid(p.r() as i64), 0);
    }

    #[test]
    fn connectivity_is_transitivity(g in tuple()) {
        prop_assert_eq!(g.is_connected(), orbits(g.params(), &g.to_tuple()) == 1);
    }

    #[test]
    fn cyclic_recursion(q in 1u32..9, t_seed in 0u32..100, m in 1u32..16) {
        let t = t_seed % q;
        let lhs = BigInt::from(cyclic_count(q, t, m).unwrap());
        let rhs = BigInt::from(q - 1).pow(m - 1) - BigInt::from(cyclic_count(q, t, m - 1).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn parity_vanishing_in_symmetric_groups() {
    let c = Counter::default();
    for n in 1..=4u32 {
        let p = GroupParams::new(1, 1, n).unwrap();
        let idx = ElementIndex::new(p).unwrap();
        for i in 0..idx.size() {
            let w = idx.unrank(i);
            let parity = (n as usize - w.cycle_type().len()) % 2;
            let counts = c.total_counts(&w, 7).unwrap();
            for (m, f) in counts.iter().enumerate() {
                if m % 2 != parity {
                    assert!(f.is_zero(), "{w:?} m={m}: {f}");
                }
            }
        }
    }
}

#[test]
fn connected_counts_are_class_functions() {
    let c = Counter::default();
    for (r, s, n) in [(2, 1, 3), (2, 2, 3), (3, 1, 2), (4, 2, 2), (3, 3, 3), (1, 1, 4)] {
        let p = GroupParams::new(r, s, n).unwrap();
        let idx = ElementIndex::new(p).unwrap();
        let mut by_class: HashMap<(Vec<u32>, u8), Vec<BigUint>> = HashMap::new();
        for i in 0..idx.size() {
            let w = idx.unrank(i);
            let counts = c.connected_counts(&w, 5).unwrap();
            let key = (w.cycle_type().parts().to_vec(), w.delta());
            match by_class.get(&key) {
                Some(prev) => assert_eq!(prev, &counts, "G({r},{s},{n}) class {key:?} at {w:?}"),
                None => {
                    by_class.insert(key, counts);
                }
            }
        }
    }
}
