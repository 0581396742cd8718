//! Structural invariants on groups generated by random invertible matrices.

use proptest::prelude::*;

use sepbound_core::poset::oracle;
use sepbound_core::topology::DEFAULT_CHAIN_BUDGET;
use sepbound_core::{agz_report, classify, lower_bound, thm34_bound, Field, FiniteMatrixGroup, Matrix, Subspace};
use sepbound_core::{SepPoset, SubspaceLattice};

fn invertible(p: u32, d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(0..p as i64, d), d)
        .prop_filter("singular", move |rows| Matrix::from_i64(&Field::prime(p).unwrap(), rows).unwrap().rank() == d)
}

/// Subgroups of `GL_2(F_2)`, `GL_3(F_2)` or `GL_2(F_3)`.
fn small_group() -> impl Strategy<Value = FiniteMatrixGroup> {
    prop_oneof![Just((2u32, 2usize)), Just((2, 3)), Just((3, 2))]
        .prop_flat_map(|(p, d)| (Just(p), Just(d), proptest::collection::vec(invertible(p, d), 1..3)))
        .prop_map(|(p, d, gens)| {
            let f = Field::prime(p).unwrap();
            let gens: Vec<Matrix> = gens.iter().map(|r| Matrix::from_i64(&f, r).unwrap()).collect();
            FiniteMatrixGroup::close(&f, d, &gens, 1000).unwrap()
        })
}

/// A Sylow 2-subgroup of `GL_2(F_3)`. Its four reflecting lines are the minimal
/// reflecting subspaces, but `G_0 = G` is not generated by its reflections.
#[test]
fn rigidity_criteria_can_diverge() {
    let f = Field::prime(3).unwrap();
    let gens: Vec<Matrix> = [vec![vec![0, 2], vec![1, 0]], vec![vec![2, 1], vec![0, 1]]]
        .iter()
        .map(|r| Matrix::from_i64(&f, r).unwrap())
        .collect();
    let g = FiniteMatrixGroup::close(&f, 2, &gens, 100).unwrap();
    let c = classify(&g, &SubspaceLattice::build(&g));
    assert_eq!((g.order(), c.generating_r), (16, 2));
    assert_eq!(c.minimal_codims(), vec![1, 1, 1, 1]);
    assert!(c.rigid_by_minimal[1] && !c.rigid_by_isotropy[1]);
    assert_eq!(c.divergences(), vec![1]);
    assert!(!c.is_rigid_reflection_group());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_and_conjugation(g in small_group()) {
        let n = g.order();
        for s in 0..n {
            let si = g.inv(s);
            prop_assert!(g.element(g.mul(s, si)).is_identity());
            for t in 0..n {
                prop_assert!(g.index_of(&g.element(s).mul(g.element(t)).unwrap()).is_some());
                prop_assert_eq!(g.codim(g.mul(g.mul(s, t), si)), g.codim(t));
            }
        }
        prop_assert!((1..n).all(|s| g.codim(s) > 0));
    }

    #[test]
    fn reflection_codim_is_convention_free(rows in invertible(3, 3)) {
        let f = Field::prime(3).unwrap();
        let b = Matrix::from_i64(&f, &rows).unwrap();
        let id = Matrix::identity(&f, 3);
        let bt = b.inverse().unwrap().transpose();
        prop_assert_eq!(b.sub(&id).unwrap().rank(), bt.sub(&id).unwrap().rank());
    }

    #[test]
    fn lattice_nodes_are_fixed_spaces(g in small_group()) {
        let l = SubspaceLattice::build(&g);
        for i in 0..l.len() {
            let full = Subspace::full(g.field(), g.dim());
            let fixed = l.isotropy(i).iter().fold(full, |w, &s| w.meet(g.fixed_space(s)).unwrap());
            prop_assert_eq!(&fixed, l.node(i));
        }
        let mut prev = false;
        for r in 0..=g.dim() {
            let now = g.is_r_reflection_group(r);
            prop_assert!(now || !prev);
            prev = now;
        }
        prop_assert!(g.is_r_reflection_group(g.dim()));
    }

    #[test]
    fn poset_matches_geometry(g in small_group()) {
        prop_assume!(g.order() <= 24);
        let l = SubspaceLattice::build(&g);
        let p = SepPoset::build(&g, &l);
        prop_assert!(oracle::compare(&g, &l, &p).agrees());
        let comps = p.components();
        prop_assert_eq!(comps.len(), g.order());
        for &c in &comps {
            prop_assert_eq!(p.node(c).codim, g.dim());
            prop_assert!(oracle::down_set_matches_lattice(&p, &l, c));
        }
        for r in 1..=g.dim() {
            prop_assert_eq!(p.connectivity_in_codim(r), g.is_r_reflection_group(r));
        }
        let expected: usize = (0..l.len()).map(|i| g.order() / l.isotropy(i).len()).sum();
        prop_assert_eq!(p.len(), expected);
    }

    #[test]
    fn bounds_are_ordered(g in small_group()) {
        prop_assume!(g.order() <= 24);
        let d = g.dim();
        let l = SubspaceLattice::build(&g);
        let p = SepPoset::build(&g, &l);
        let rep = agz_report(&p, g.field().characteristic(), DEFAULT_CHAIN_BUDGET).unwrap();
        prop_assert!(rep.q.contains(&d));
        prop_assert!(rep.q.iter().all(|&k| d <= k && k < 2 * d));
        let c = classify(&g, &l);
        for r in 0..=d {
            prop_assert!(!c.rigid_by_isotropy[r] || c.rigid_by_minimal[r]);
        }
        prop_assert!(thm34_bound(&c, d).bound <= lower_bound(&rep));
        if c.is_rigid_reflection_group() {
            prop_assert_eq!(rep.q.iter().copied().collect::<Vec<_>>(), vec![d]);
        }
    }
}
