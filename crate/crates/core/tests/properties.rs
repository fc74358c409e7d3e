use dicycle::io::{decode_digraph6, decode_trn, encode_digraph6, encode_trn};
use dicycle::{
    condense, critical_core, hamiltonian_path, outdegree_critical_reduce, Tournament, VertexSet,
};
use dicycle_oracle as oracle;
use proptest::prelude::*;

fn tournament(max_n: usize) -> impl Strategy<Value = Tournament> {
    (1..=max_n, any::<u64>()).prop_map(|(n, bits)| oracle::from_bits(n, bits))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn degree_sums(t in tournament(11)) {
        let n = t.order();
        let out = t.out_degrees();
        prop_assert_eq!(out.iter().sum::<usize>(), n * (n - 1) / 2);
        prop_assert_eq!(t.arc_count(), n * (n - 1) / 2);
        for v in 0..n {
            prop_assert_eq!(t.out_degree(v).unwrap() + t.in_degree(v).unwrap(), n - 1);
        }
        prop_assert!(t.min_out_degree().unwrap() <= (n - 1) / 2);
        prop_assert!(t.max_out_degree().unwrap() >= (n - 1).div_ceil(2));
    }

    #[test]
    fn formats_roundtrip(t in tournament(11)) {
        prop_assert_eq!(&decode_trn(&encode_trn(&t)).unwrap(), &t);
        prop_assert_eq!(&decode_digraph6(&encode_digraph6(&t)).unwrap(), &t);
        prop_assert_eq!(t.reversed().reversed(), t);
    }

    #[test]
    fn induced_composes(t in tournament(11), a in any::<u16>(), b in any::<u16>()) {
        let n = t.order();
        let outer: Vec<usize> = (0..n).filter(|&v| a >> v & 1 == 1).collect();
        let inner: Vec<usize> = outer.iter().copied().filter(|&v| b >> v & 1 == 1).collect();
        let s = t.induced(&VertexSet::from_vertices(n, outer.iter().copied())).unwrap();
        let local: Vec<usize> = inner.iter().map(|&v| s.to_local(v).unwrap()).collect();
        let s2 = s.tournament.induced(&VertexSet::from_vertices(outer.len(), local)).unwrap();
        let direct = t.induced(&VertexSet::from_vertices(n, inner.iter().copied())).unwrap();
        prop_assert_eq!(s.compose(&s2), direct.clone());
        for (i, &u) in direct.to_original.iter().enumerate() {
            for (j, &v) in direct.to_original.iter().enumerate() {
                prop_assert_eq!(direct.tournament.dominates(i, j), t.dominates(u, v));
            }
        }
    }

    #[test]
    fn hamiltonian_path_is_valid(t in tournament(11)) {
        let p = hamiltonian_path(&t).unwrap();
        prop_assert!(p.is_valid_in(&t));
        let mut seen = p.order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..t.order()).collect::<Vec<_>>());
    }

    #[test]
    fn condensation_is_transitive_order(t in tournament(11)) {
        check_condensation(&t)?;
    }

    #[test]
    fn critical_core_is_critical(t in tournament(11), pick in any::<usize>()) {
        let delta = t.min_out_degree().unwrap();
        prop_assume!(delta >= 1);
        let r = 1 + pick % delta;
        let red = outdegree_critical_reduce(&t, r).unwrap();
        check_non_deletable(&red.core.tournament, r)?;
        let core = critical_core(&t, r).unwrap();
        let m = core.min_out_degree;
        prop_assert!(m >= r);
        check_non_deletable(&core.core.tournament, m)?;
        prop_assert!(oracle::strongly_connected(&core.core.tournament));
    }
}

fn check_condensation(t: &Tournament) -> Result<(), TestCaseError> {
    let d = condense(t).unwrap();
    let n = t.order();
    let mut seen = vec![false; n];
    for comp in &d.components {
        prop_assert!(!comp.is_empty());
        for v in comp.iter() {
            prop_assert!(!std::mem::replace(&mut seen[v], true));
        }
        let sub = t.induced(comp).unwrap();
        prop_assert!(comp.len() == 1 || oracle::strongly_connected(&sub.tournament));
    }
    prop_assert!(seen.iter().all(|&s| s));
    for u in 0..n {
        for v in 0..n {
            let (cu, cv) = (d.component_of(u).unwrap(), d.component_of(v).unwrap());
            if cu < cv {
                prop_assert!(t.dominates(u, v));
            }
        }
    }
    prop_assert_eq!(d.len() == 1, oracle::strongly_connected(t));
    Ok(())
}

/// Every vertex of a critical core is needed: deleting it drops the
/// minimum out-degree below `r`.
fn check_non_deletable(core: &Tournament, r: usize) -> Result<(), TestCaseError> {
    let m = core.order();
    prop_assert!(core.min_out_degree().unwrap() >= r);
    if m == 1 {
        return Ok(());
    }
    for v in 0..m {
        let rest = VertexSet::from_vertices(m, (0..m).filter(|&u| u != v));
        let sub = core.induced(&rest).unwrap().tournament;
        prop_assert!(sub.min_out_degree().unwrap() < r, "vertex {} deletable", v);
    }
    Ok(())
}

#[test]
fn condensation_exhaustive_small() {
    for n in 1..=6usize {
        for bits in 0..1u64 << (n * (n - 1) / 2) {
            check_condensation(&oracle::from_bits(n, bits)).unwrap();
        }
    }
}
