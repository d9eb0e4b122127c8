//! The generator must reach every structural case the audits distinguish.

use newton_forest::analysis::analyze;
use newton_forest::generate::{generate, GeneratorConfig};

#[test]
fn thousand_seeds_cover_the_structural_cases() {
    let (mut single, mut brush) = (0, 0);
    let mut omega = [0usize; 3];
    let mut many_combs = 0;
    for seed in 0..1000 {
        let t = generate(&GeneratorConfig { seed, max_cells: 40, ..Default::default() }).unwrap();
        let a = analyze(t).unwrap();
        single += usize::from(a.ledger.n_set.len() == 1);
        brush += usize::from(a.structure.is_brush);
        omega[a.structure.omega.len()] += 1;
        many_combs += usize::from(a.decompositions.iter().any(|d| d.classes.len() >= 2));
    }
    assert!(single > 0, "no tree with a single vertex of positive multiplicity");
    assert!(brush > 0, "no brush");
    assert!(omega.iter().all(|&k| k > 0), "loose-end counts {omega:?}");
    assert!(many_combs > 0, "no decomposition with two combs");
}

#[test]
fn filters_are_honoured() {
    for seed in 0..20 {
        let t = generate(&GeneratorConfig { seed, max_cells: 30, rational: true, ..Default::default() }).unwrap();
        let a = analyze(t).unwrap();
        assert_eq!(a.delta_tilde(), &0.into());
        assert!(num_traits::One::is_one(&a.ledger.degree_gcd));
        let t = generate(&GeneratorConfig { seed, max_cells: 30, target_delta_tilde: Some(2), ..Default::default() })
            .unwrap();
        assert_eq!(analyze(t).unwrap().delta_tilde(), &2.into());
    }
}
