use sepbound_core::constructions::{
    cp_triangle, gl7_linear_relations, gl7_quintic_relations, gl7_relation_labeling, gl7_scenario, removal_checks,
    v2_candidates, verify_triangle, Labeling,
};
use sepbound_core::separation::SearchOutcome;
use sepbound_core::{search_separating, verify_separating, MultiPoly, VerifyConfig};

#[test]
fn triangle_sums_separate_and_are_tight() {
    for (p, n) in [(2, 2), (3, 2), (3, 3), (5, 3)] {
        let (g, t) = cp_triangle(p, n).unwrap();
        let rep = verify_triangle(&g, &t, &VerifyConfig::with_extensions(&[1])).unwrap();
        assert!(rep.is_separating(), "p = {p}, n = {n}");
        let cands = t.candidates();
        for r in removal_checks(&g, &cands, &VerifyConfig::default()).unwrap() {
            assert!(r.refuted_at.is_some(), "p = {p}, n = {n}, removed {}", r.removed);
        }
    }
}

#[test]
fn v2_sums_separate() {
    for (p, n) in [(2, 2), (3, 2)] {
        let v = v2_candidates(p, n).unwrap();
        let rep = verify_separating(&v.group, &v.candidates, &VerifyConfig::with_extensions(&[1, 2])).unwrap();
        assert!(rep.is_separating(), "p = {p}, n = {n}");
    }
}

#[test]
fn gl7_nine_separate() {
    let s = gl7_scenario(Some(&VerifyConfig::with_extensions(&[1, 2]))).unwrap();
    assert!(s.report.as_ref().unwrap().is_separating());
    assert_eq!(s.labeling, Labeling::IDENTITY);
    assert_eq!(s.labelings_tried, 1);
}

#[test]
fn gl7_relations() {
    let s = gl7_scenario(None).unwrap();
    let linear = gl7_linear_relations(&s).unwrap();
    let holds: Vec<(bool, bool)> = linear.iter().map(|r| (r.stated, r.holds)).collect();
    // the stated squares relation fails; its index-swapped variant holds
    assert_eq!(holds, vec![(true, true), (true, false), (true, false), (false, true), (false, true), (true, true)]);
    assert_eq!(gl7_relation_labeling(&s).unwrap(), None);
    assert!(gl7_quintic_relations(&s).unwrap().iter().all(|r| r.holds));
}

#[test]
fn gl7_search_finds_nine_not_eight() {
    let s = gl7_scenario(None).unwrap();
    let k = s.group.field().clone();
    let base: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(&k, 7, i)).collect();
    let mut pool: Vec<MultiPoly> = s.cubics.iter().chain(&s.quartics).cloned().collect();
    for f in &s.cubics {
        for g in &s.quartics {
            pool.push(f.add(g));
        }
    }
    let cfg = VerifyConfig::with_extensions(&[1, 2]);
    let found = search_separating(&s.group, &base, &pool, 9, 100_000, &cfg).unwrap();
    assert!(matches!(found, SearchOutcome::Found { .. }));
    let none = search_separating(&s.group, &base, &pool, 8, 100_000, &cfg).unwrap();
    assert!(matches!(none, SearchOutcome::Exhausted { .. }));
}
