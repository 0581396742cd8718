//! Nonvanishing degrees of local cohomology of the separating ideal from poset homology,
//! and the resulting lower bounds on separating sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::poset::SepPoset;
use crate::reflection::ReflectionClassification;
use crate::topology::{order_complex, reduced_betti, BettiVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeHomology {
    pub node_id: usize,
    pub subspace_id: usize,
    pub coset_rep: usize,
    pub codim: usize,
    /// Reduced Betti numbers of the open interval above the node, from degree `-1`.
    pub betti: BettiVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonvanishingReport {
    pub dim: usize,
    pub characteristic: u32,
    pub per_node: Vec<NodeHomology>,
    /// Degrees `q` with a nonzero graded piece of `H^q_I(R)`.
    #[serde(rename = "Q")]
    pub q: BTreeSet<usize>,
    /// Node ids contributing to each `q`.
    pub contributors: BTreeMap<usize, Vec<usize>>,
}

impl NonvanishingReport {
    pub fn degrees(&self) -> Vec<usize> {
        self.q.iter().copied().collect()
    }
}

/// Computes `Q` from the homology of every open upper interval.
///
/// On a full poset the homology is computed once per lattice node and shared across its
/// cosets, which are carried onto each other by the automorphisms `1⊗σ`.
pub fn agz_report(p: &SepPoset, characteristic: u32, budget: usize) -> Result<NonvanishingReport> {
    agz_report_with(p, characteristic, budget, p.is_full())
}

pub fn agz_report_with(
    p: &SepPoset,
    characteristic: u32,
    budget: usize,
    share_cosets: bool,
) -> Result<NonvanishingReport> {
    let mut representative: HashMap<usize, usize> = HashMap::new();
    let targets: Vec<usize> = if share_cosets {
        for i in 0..p.len() {
            representative.entry(p.node(i).subspace_id).or_insert(i);
        }
        let mut t: Vec<usize> = representative.values().copied().collect();
        t.sort_unstable();
        t
    } else {
        (0..p.len()).collect()
    };
    let computed: Vec<(usize, BettiVector)> = targets
        .par_iter()
        .map(|&i| {
            let above = p.open_interval_above(i)?;
            let c = order_complex(&above, budget)?;
            Ok((i, reduced_betti(&c, characteristic)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let by_node: HashMap<usize, BettiVector> = computed.into_iter().collect();

    let mut per_node = Vec::with_capacity(p.len());
    let mut q = BTreeSet::new();
    let mut contributors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..p.len() {
        let n = p.node(i);
        let source = if share_cosets { representative[&n.subspace_id] } else { i };
        let betti = by_node[&source].clone();
        for deg in betti.nonzero_degrees() {
            let qq = (n.codim as isize - deg - 1) as usize;
            q.insert(qq);
            contributors.entry(qq).or_default().push(i);
        }
        per_node.push(NodeHomology {
            node_id: i,
            subspace_id: n.subspace_id,
            coset_rep: n.coset_rep,
            codim: n.codim,
            betti,
        });
    }
    Ok(NonvanishingReport { dim: p.dim(), characteristic, per_node, q, contributors })
}

/// Certified lower bound on the size of a geometric separating set: `max Q`.
pub fn lower_bound(rep: &NonvanishingReport) -> usize {
    rep.q.iter().copied().max().unwrap_or(rep.dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm34Bound {
    pub bound: usize,
    /// `d + r_i - 1` over the minimal reflecting codimensions `r_i`.
    pub degrees: Vec<usize>,
}

/// `d + r* - 1`, or `d` when there is no minimal reflecting subspace.
pub fn thm34_bound(c: &ReflectionClassification, d: usize) -> Thm34Bound {
    let degrees: BTreeSet<usize> = c.minimal.iter().map(|m| d + m.codim - 1).collect();
    let bound = degrees.iter().copied().max().unwrap_or(d);
    Thm34Bound { bound, degrees: degrees.into_iter().collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn consistency_checks(rep: &NonvanishingReport, c: &ReflectionClassification, d: usize) -> Vec<Check> {
    let thm = thm34_bound(c, d);
    let missing: Vec<usize> = thm.degrees.iter().copied().filter(|q| !rep.q.contains(q)).collect();
    let rigid = c.is_rigid_reflection_group() && c.generating_r <= 1;
    let only_d = rep.q.len() == 1 && rep.q.contains(&d);
    vec![
        Check {
            name: "top_degree_vanishes".into(),
            passed: !rep.q.contains(&(2 * d)),
            detail: format!("2d = {} not in Q = {:?}", 2 * d, rep.degrees()),
        },
        Check {
            name: "minimal_reflecting_degrees_in_q".into(),
            passed: missing.is_empty(),
            detail: if missing.is_empty() {
                format!("{:?} ⊆ {:?}", thm.degrees, rep.degrees())
            } else {
                format!("missing {missing:?}")
            },
        },
        Check {
            name: "rigid_implies_cohen_macaulay".into(),
            passed: !rigid || only_d,
            detail: if rigid {
                format!("rigid reflection group, Q = {:?}", rep.degrees())
            } else {
                "not a rigid reflection group".into()
            },
        },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatingBound {
    pub bound_cohomological: usize,
    pub bound_thm34: usize,
    /// Lower bound on the embedding dimension of the invariant ring.
    pub bound_embedding_dimension: usize,
    pub thm34_degrees: Vec<usize>,
    pub checks: Vec<Check>,
}

impl SeparatingBound {
    pub fn new(rep: &NonvanishingReport, c: &ReflectionClassification) -> SeparatingBound {
        let thm = thm34_bound(c, rep.dim);
        let lb = lower_bound(rep);
        SeparatingBound {
            bound_cohomological: lb,
            bound_thm34: thm.bound,
            bound_embedding_dimension: lb,
            thm34_degrees: thm.degrees,
            checks: consistency_checks(rep, c, rep.dim),
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::Field;
    use crate::group::FiniteMatrixGroup;
    use crate::reflection::{classify, SubspaceLattice};
    use crate::topology::DEFAULT_CHAIN_BUDGET;

    fn run(g: &FiniteMatrixGroup, ch: u32) -> (NonvanishingReport, ReflectionClassification) {
        let l = SubspaceLattice::build(g);
        let p = SepPoset::build(g, &l);
        (agz_report(&p, ch, DEFAULT_CHAIN_BUDGET).unwrap(), classify(g, &l))
    }

    #[test]
    fn trivial_group() {
        let (rep, c) = run(&catalog::trivial(&Field::rationals(), 2), 0);
        assert_eq!(rep.degrees(), vec![2]);
        assert_eq!(thm34_bound(&c, 2).bound, 2);
    }

    #[test]
    fn s3_single_and_double() {
        let (rep, c) = run(&catalog::s3_perm(), 0);
        assert_eq!(rep.degrees(), vec![3]);
        assert!(consistency_checks(&rep, &c, 3).iter().all(|k| k.passed));
        let bottom = rep.per_node.iter().find(|n| n.codim == 5).unwrap();
        assert_eq!(bottom.betti.get(1), 4);

        let g = catalog::s3_diag(&Field::rationals(), 2).unwrap();
        let (rep, c) = run(&g, 0);
        assert_eq!(rep.degrees(), vec![6, 7, 8]);
        assert_eq!(lower_bound(&rep), 8);
        assert_eq!(thm34_bound(&c, 6).bound, 7);
        assert!(SeparatingBound::new(&rep, &c).all_checks_pass());
    }

    #[test]
    fn coset_sharing_matches_direct() {
        for g in [catalog::s3_perm(), catalog::c2c2_2n1(2).unwrap(), catalog::cp_vn(3, 3).unwrap()] {
            let l = SubspaceLattice::build(&g);
            let p = SepPoset::build(&g, &l);
            let ch = g.field().characteristic();
            let a = agz_report_with(&p, ch, DEFAULT_CHAIN_BUDGET, true).unwrap();
            let b = agz_report_with(&p, ch, DEFAULT_CHAIN_BUDGET, false).unwrap();
            assert_eq!(a.per_node, b.per_node);
        }
    }

    #[test]
    fn cyclic_families() {
        for (p, n) in [(3, 2), (3, 3), (5, 3), (5, 4)] {
            let (rep, _) = run(&catalog::cp_vn(p, n).unwrap(), p);
            assert_eq!(rep.q, BTreeSet::from([n, 2 * n - 2]), "C_{p} on V_{n}");
        }
        for (p, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            let g = catalog::cp_v2_vec(p, n).unwrap();
            let (rep, c) = run(&g, p);
            assert_eq!(lower_bound(&rep), 3 * n - 1);
            assert_eq!(thm34_bound(&c, 2 * n).bound, 3 * n - 1);
        }
    }

    #[test]
    fn c2c2_example_bounds() {
        let (rep, c) = run(&catalog::c2c2_2n1(2).unwrap(), 0);
        assert_eq!(thm34_bound(&c, 5).bound, 8);
        assert!(lower_bound(&rep) >= 8);
        assert!(SeparatingBound::new(&rep, &c).all_checks_pass());
    }

    #[test]
    fn gl7_bound_is_nine() {
        let (rep, c) = run(&catalog::gl7_f2(), 2);
        assert_eq!(lower_bound(&rep), 9);
        assert_eq!(rep.degrees(), vec![7, 9]);
        assert_eq!(thm34_bound(&c, 7).bound, 9);
    }
}
