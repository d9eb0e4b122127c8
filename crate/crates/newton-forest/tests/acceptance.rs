//! The six acceptance criteria, one printed line each.
//!
//! Two criteria cannot be met as worded; their lines print FAIL together with the reason, and the
//! process only fails if the observed shortfall differs from that known one.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use newton_forest::analysis::{analyze, Analysis};
use newton_forest::audit::audit;
use newton_forest::classify::{is_rational_tree, rational_structure_report, recognize_canonical, RationalShape};
use newton_forest::generate::{generate, GeneratorConfig};
use newton_forest::io::fixtures::load;
use newton_forest::oracle::{oracle_c, oracle_delta_tilde_n, oracle_n};
use newton_forest::AnalysisError;

const CORPUS: u64 = 1000;
const MAX_CELLS: usize = 40;

/// What a criterion found.
enum Verdict {
    Pass(String),
    /// Failed in the way already understood; the text says why.
    KnownFail(String),
    Fail(String),
}

fn corpus() -> Vec<Analysis> {
    (0..CORPUS)
        .map(|seed| {
            let t = generate(&GeneratorConfig { seed, max_cells: MAX_CELLS, ..Default::default() }).expect("generator");
            analyze(t).expect("generated trees analyze")
        })
        .collect()
}

fn fixture_exactness() -> Verdict {
    let start = Instant::now();
    let expected = [
        ("t_a", 0),
        ("t_b_1_1", 0),
        ("t_b_1_2", 0),
        ("t_b_2_3", 0),
        ("t_c_1_1_1", 2),
        ("t_c_1_1_2", 2),
        ("t_c_1_2_3", 2),
    ];
    let mut wrong = vec![];
    for (name, dt) in expected {
        match analyze(load(name)) {
            Ok(a) => {
                if !a.info.minimally_complete || !a.ledger.degree_gcd.is_one() || *a.delta_tilde() != BigInt::from(dt) {
                    wrong.push(format!("{name}: Δ̃ = {}, gcd = {}", a.delta_tilde(), a.ledger.degree_gcd));
                }
            }
            Err(e) => wrong.push(format!("{name}: {e}")),
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(1) {
        wrong.push(format!("took {took:?}"));
    }
    if wrong.is_empty() {
        Verdict::Pass(format!("7 fixtures exact in {took:?}"))
    } else {
        Verdict::Fail(wrong.join("; "))
    }
}

fn t_d_ledger() -> Verdict {
    let a = analyze(load("t_d")).expect("T_D analyzes");
    let t = &a.tree;
    let (v0, w) = (t.root(), t.find("w").unwrap());
    let e = t.edge_between(v0, w).unwrap();
    let at = |u| a.table.lookup(u, e).unwrap();
    let ratio = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let int = |x: i64| BigInt::from(x);
    let mut wrong = vec![];
    let mut check = |label: &str, ok: bool| {
        if !ok {
            wrong.push(label.to_string());
        }
    };
    // the oracle rederives the values first; the engine must then match both
    check("oracle N(v0)", oracle_n(t, v0) == int(6) && oracle_n(t, w) == int(6));
    check("oracle c", oracle_c(t, w, e) == ratio(6, 1) && oracle_c(t, v0, e) == ratio(3, 2));
    check("oracle Δ̃(𝒩)", oracle_delta_tilde_n(t) == int(-4));
    check("N", a.ledger.v(v0).n == int(6) && a.ledger.v(w).n == int(6));
    check("M(T)", a.multiplicities.m_of_t == int(3));
    check("Δ̃(v0)", *a.ledger.delta_tilde(v0) == int(-5));
    check("Δ̃(w)", *a.ledger.delta_tilde(w) == int(1));
    check("c(w,e)", at(w).c == ratio(6, 1));
    check("c(v0,e)", at(v0).c == ratio(3, 2));
    check("M(v0,e)", at(v0).m == int(4));
    check("η(v0,e)", at(v0).eta == ratio(3, 2));
    check("η(w,e)", at(w).eta.is_zero());
    check("Ω", a.structure.omega == BTreeSet::from([v0]));
    match a.decomposition(v0) {
        Some(d) => {
            check("|Ō|", d.classes.len() == 1);
            check("ċ(C0)", d.c0.is_some_and(|c| d.classes[c].c_dot.is_zero()));
        }
        None => check("decomposition at v0", false),
    }
    if wrong.is_empty() {
        Verdict::Pass("all 12 values exact".into())
    } else {
        Verdict::Fail(wrong.join(", "))
    }
}

/// Audit ids covering the identities listed in the criterion.
const SUITE: [&str; 14] = [
    "characteristic-divides",
    "characteristic-divisibility-chain",
    "pair-identity",
    "vertex-identity",
    "eta-growth",
    "monotone-on-comparable-pairs",
    "omega-size",
    "skeleton",
    "comb-relation",
    "comb-totals",
    "comb-statistics",
    "xi-bound",
    "root-fan",
    "root-valency-bound",
];

fn theorem_suite(trees: &[Analysis], built: Duration) -> Verdict {
    let start = Instant::now();
    let mut failures = vec![];
    let mut other = 0;
    let mut odd_single = 0;
    let mut h_wrong = 0;
    // the bound as worded, with no condition on the root valency
    let mut root_bound_breaks = 0;
    let mut root_bound_breaks_explained = 0;
    for (seed, a) in trees.iter().enumerate() {
        let report = audit(a);
        for o in report.failures() {
            if SUITE.contains(&o.id.as_str()) {
                failures.push(format!("seed {seed}: {}", o.id));
            } else {
                other += 1;
            }
        }
        if a.ledger.n_set.len() == 1 && !(a.delta_tilde() % 2u32).is_zero() {
            odd_single += 1;
        }
        for d in a.decompositions.iter().filter(|d| d.classes.len() > 1) {
            match &d.stats {
                Some(st) if st.h == st.b + 2 * (st.leaves - 2) + st.o2 as i64 => {}
                _ => h_wrong += 1,
            }
        }
        let delta = a.tree.valency(a.tree.root()) as i64;
        if *a.delta_tilde() < BigInt::from((delta - 1) * (delta - 2)) {
            root_bound_breaks += 1;
            if delta <= 2 && *a.delta_tilde() < BigInt::zero() {
                root_bound_breaks_explained += 1;
            }
        }
    }
    let took = built + start.elapsed();
    let rest_ok =
        failures.is_empty() && other == 0 && odd_single == 0 && h_wrong == 0 && took < Duration::from_secs(60);
    let summary = format!(
        "{CORPUS} trees in {took:?}: {} suite failures, {other} other audit failures, {odd_single} odd Δ̃ with |𝒩| = 1, {h_wrong} H mismatches",
        failures.len()
    );
    if !rest_ok {
        let sample: Vec<&String> = failures.iter().take(5).collect();
        return Verdict::Fail(format!("{summary}; {sample:?}"));
    }
    if root_bound_breaks == 0 {
        Verdict::Pass(summary)
    } else if root_bound_breaks == root_bound_breaks_explained {
        Verdict::KnownFail(format!(
            "{summary}; Δ̃ ≥ (δ−1)(δ−2) without a condition on δ fails on {root_bound_breaks} trees, all with δ(v0) ≤ 2 \
             and Δ̃ < 0 (as for T_D); the audited form with δ ≥ 3 passes"
        ))
    } else {
        Verdict::Fail(format!("{summary}; root valency bound fails on {root_bound_breaks} trees"))
    }
}

fn oracle_equivalence(trees: &[Analysis]) -> Verdict {
    let mut wrong = vec![];
    let (mut cells, mut pairs) = (0, 0);
    for (seed, a) in trees.iter().enumerate() {
        let t = &a.tree;
        for (&c, n) in &a.multiplicities.n {
            cells += 1;
            if oracle_n(t, c) != *n {
                wrong.push(format!("seed {seed}: N({})", t.id(c)));
            }
        }
        for (i, p) in a.table.poset.pairs.iter().enumerate() {
            pairs += 1;
            if oracle_c(t, p.u, p.e) != a.table.at(i).c {
                wrong.push(format!("seed {seed}: c at {}", t.id(p.u)));
            }
        }
        if oracle_delta_tilde_n(t) != *a.delta_tilde() {
            wrong.push(format!("seed {seed}: Δ̃(𝒩)"));
        }
    }
    if wrong.is_empty() {
        Verdict::Pass(format!("{cells} multiplicities, {pairs} characteristic numbers, {CORPUS} totals agree"))
    } else {
        Verdict::Fail(format!("{} disagreements, e.g. {:?}", wrong.len(), &wrong[..wrong.len().min(5)]))
    }
}

fn rational_structure(trees: &[Analysis]) -> Verdict {
    let mut wrong = vec![];
    let mut rational: Vec<&Analysis> = trees.iter().filter(|a| is_rational_tree(a)).collect();
    let extra: Vec<Analysis> = (0..200)
        .filter_map(|seed| {
            generate(&GeneratorConfig { seed, max_cells: 30, rational: true, ..Default::default() }).ok()
        })
        .map(|t| analyze(t).expect("generated trees analyze"))
        .collect();
    rational.extend(extra.iter());
    let mut chains = 0;
    for a in &rational {
        match rational_structure_report(a) {
            Ok(r) => {
                if let Some(o) = r.failures().next() {
                    wrong.push(format!("{}: {:?}", o.id, o.witnesses));
                }
                match r.shape {
                    RationalShape::Chain(_) => chains += 1,
                    RationalShape::Canonical(_) => {}
                    RationalShape::Unrecognized => wrong.push("unrecognized shape".into()),
                }
            }
            Err(e) => wrong.push(e.to_string()),
        }
    }
    for name in ["t_a", "t_b_1_1", "t_b_1_2", "t_b_2_3", "t_c_1_1_1", "t_c_1_1_2", "t_c_1_2_3"] {
        if recognize_canonical(&analyze(load(name)).unwrap()).is_none() {
            wrong.push(format!("{name} not recognized"));
        }
    }
    if wrong.is_empty() {
        Verdict::Pass(format!("{} rational trees ({chains} chains), all canonical fixtures recognized", rational.len()))
    } else {
        Verdict::Fail(format!("{} problems, e.g. {:?}", wrong.len(), &wrong[..wrong.len().min(3)]))
    }
}

fn fault_injection() -> Verdict {
    let t = load("t_d");
    let (mut total, mut caught) = (0, 0);
    let mut missed = vec![];
    let mut missed_are_valid_trees = true;
    for e in t.edge_refs() {
        for &end in &t.edge(e).ends {
            for step in [-1, 1] {
                total += 1;
                let value = t.q(e, end) + step;
                let label = format!("{} near {} set to {value}", t.edge_label(e), t.id(end));
                match analyze(t.with_decoration(e, end, value)) {
                    Err(AnalysisError::Invalid(_) | AnalysisError::NotMinimallyComplete(_)) => caught += 1,
                    Err(err) => {
                        caught += 1;
                        missed.push(format!("{label}: unexpected error {err}"));
                        missed_are_valid_trees = false;
                    }
                    Ok(a) => {
                        if audit(&a).is_clean() {
                            // an undetected change must at least be a genuine tree the engine agrees on
                            missed_are_valid_trees &=
                                a.info.minimally_complete && oracle_delta_tilde_n(&a.tree) == *a.delta_tilde();
                            missed.push(label);
                        } else {
                            caught += 1;
                        }
                    }
                }
            }
        }
    }
    let summary = format!("{caught} of {total} perturbations rejected");
    if missed.is_empty() {
        Verdict::Pass(summary)
    } else if missed_are_valid_trees {
        Verdict::KnownFail(format!(
            "{summary}; undetected: {}; each yields another valid minimally complete tree, which no audit can reject",
            missed.join(", ")
        ))
    } else {
        Verdict::Fail(format!("{summary}; {missed:?}"))
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let trees = corpus();
    let built = start.elapsed();
    let results = [
        ("1 fixture exactness", fixture_exactness()),
        ("2 T_D ledger", t_d_ledger()),
        ("3 theorem identities on generated trees", theorem_suite(&trees, built)),
        ("4 oracle equivalence", oracle_equivalence(&trees)),
        ("5 rational-tree structure", rational_structure(&trees)),
        ("6 fault injection on T_D", fault_injection()),
    ];
    let mut unexpected = false;
    for (name, v) in &results {
        match v {
            Verdict::Pass(m) => println!("criterion {name}: PASS ({m})"),
            Verdict::KnownFail(m) => println!("criterion {name}: FAIL ({m})"),
            Verdict::Fail(m) => {
                unexpected = true;
                println!("criterion {name}: FAIL ({m})");
            }
        }
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
