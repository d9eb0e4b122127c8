use num_bigint::BigInt;
use proptest::prelude::*;

use newton_forest::analysis::analyze;
use newton_forest::audit::audit;
use newton_forest::generate::{generate, GeneratorConfig};
use newton_forest::io::{parse, serialize};
use newton_forest::oracle::{oracle_c, oracle_delta_tilde_n, oracle_n};
use newton_forest::tree::{build_tree, validate_axioms, CellSpec, EdgeSpec, Tree};

fn tree(seed: u64, max_cells: usize) -> Tree {
    generate(&GeneratorConfig { seed, max_cells, ..Default::default() }).unwrap()
}

/// Same tree with every id prefixed, so ids sort differently.
fn relabel(t: &Tree) -> Tree {
    let rename = |id: &str| format!("z{}", id.chars().rev().collect::<String>());
    let cells: Vec<CellSpec> = t.cell_specs().into_iter().map(|c| CellSpec { id: rename(&c.id), ..c }).collect();
    let edges: Vec<EdgeSpec> = t
        .edge_specs()
        .into_iter()
        .rev()
        .map(|e| EdgeSpec { ends: [rename(&e.ends[0]), rename(&e.ends[1])], q: e.q })
        .collect();
    build_tree(&cells, &edges, &rename(t.id(t.root()))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_trees_are_valid_and_reproducible(seed in any::<u64>(), cells in 4usize..30) {
        let t = tree(seed, cells);
        prop_assert!(validate_axioms(&t).is_empty());
        prop_assert!(t.cell_count() <= cells);
        prop_assert_eq!(&t, &tree(seed, cells));
    }

    #[test]
    fn audits_pass(seed in any::<u64>()) {
        let a = analyze(tree(seed, 30)).unwrap();
        let r = audit(&a);
        let bad: Vec<_> = r.failures().collect();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn engine_matches_oracle(seed in any::<u64>()) {
        let a = analyze(tree(seed, 24)).unwrap();
        let t = &a.tree;
        for (&c, n) in &a.multiplicities.n {
            prop_assert_eq!(&oracle_n(t, c), n);
        }
        for (i, p) in a.table.poset.pairs.iter().enumerate() {
            prop_assert_eq!(&oracle_c(t, p.u, p.e), &a.table.at(i).c);
        }
        prop_assert_eq!(&oracle_delta_tilde_n(t), a.delta_tilde());
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let t = tree(seed, 30);
        let text = serialize(&t).unwrap();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize(&back).unwrap(), text);
    }

    #[test]
    fn invariants_ignore_cell_names(seed in any::<u64>()) {
        let t = tree(seed, 30);
        let (a, b) = (analyze(t.clone()).unwrap(), analyze(relabel(&t)).unwrap());
        prop_assert_eq!(a.delta_tilde(), b.delta_tilde());
        prop_assert_eq!(a.ledger.xi_total, b.ledger.xi_total);
        prop_assert_eq!(a.structure.omega.len(), b.structure.omega.len());
        prop_assert_eq!(a.structure.skeleton.len(), b.structure.skeleton.len());
        let combs = |x: &newton_forest::analysis::Analysis| {
            let mut v: Vec<usize> = x.decompositions.iter().map(|d| d.classes.len()).collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(combs(&a), combs(&b));
    }

    #[test]
    fn delta_tilde_is_two_minus_m_minus_d(seed in any::<u64>()) {
        let a = analyze(tree(seed, 30)).unwrap();
        let want = BigInt::from(2) - &a.multiplicities.m_of_t - &a.ledger.degree_sum;
        prop_assert_eq!(a.delta_tilde(), &want);
    }
}
