//! The end-to-end pipeline for one group and its machine-readable report.

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{agz_report, lower_bound, NonvanishingReport, SeparatingBound};
use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::io::matrix_to_json;
use crate::poset::SepPoset;
use crate::reflection::{classify, ReflectionClassification, SubspaceLattice};
use crate::separation::SeparationReport;
use crate::shelling::{shelling_separating, verify_shelling, ShellingOrder};
use crate::topology::{order_complex, reduced_betti, DEFAULT_CHAIN_BUDGET};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// Coefficient characteristic for homology; the field characteristic when unset.
    pub characteristic: Option<u32>,
    pub chain_budget: usize,
    pub shelling: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { characteristic: None, chain_budget: DEFAULT_CHAIN_BUDGET, shelling: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShellingOutcome {
    pub applicable: bool,
    pub verified: bool,
    pub facets: usize,
    /// Reduced homology of the whole order complex lives only in its top degree.
    pub top_degree_only: Option<bool>,
    pub reason: Option<String>,
    #[serde(skip)]
    pub order: Option<ShellingOrder>,
}

pub struct Analysis {
    pub group: FiniteMatrixGroup,
    pub lattice: SubspaceLattice,
    pub classification: ReflectionClassification,
    pub poset: SepPoset,
    pub homology: NonvanishingReport,
    pub bounds: SeparatingBound,
    pub shelling: ShellingOutcome,
}

pub fn analyze(g: &FiniteMatrixGroup, opts: &AnalysisOptions) -> Result<Analysis> {
    let lattice = SubspaceLattice::build(g);
    let classification = classify(g, &lattice);
    let poset = SepPoset::build(g, &lattice);
    let ch = opts.characteristic.unwrap_or_else(|| g.field().characteristic());
    let homology = agz_report(&poset, ch, opts.chain_budget)?;
    let bounds = SeparatingBound::new(&homology, &classification);
    let shelling = if opts.shelling {
        shell(g, &lattice, &poset, ch, opts.chain_budget)?
    } else {
        ShellingOutcome {
            applicable: false,
            verified: false,
            facets: 0,
            top_degree_only: None,
            reason: Some("not requested".into()),
            order: None,
        }
    };
    Ok(Analysis { group: g.clone(), lattice, classification, poset, homology, bounds, shelling })
}

pub fn shell(
    g: &FiniteMatrixGroup,
    l: &SubspaceLattice,
    p: &SepPoset,
    ch: u32,
    budget: usize,
) -> Result<ShellingOutcome> {
    match shelling_separating(p, g, l) {
        Ok(order) => {
            let c = order_complex(p, budget)?;
            let verified = verify_shelling(&c, &order.facets)?.is_valid();
            let b = reduced_betti(&c, ch)?;
            Ok(ShellingOutcome {
                applicable: true,
                verified,
                facets: order.facets.len(),
                top_degree_only: Some(b.nonzero_degrees().iter().all(|&k| k == c.dimension())),
                reason: None,
                order: Some(order),
            })
        }
        Err(Error::Precondition(reason)) => Ok(ShellingOutcome {
            applicable: false,
            verified: false,
            facets: 0,
            top_degree_only: None,
            reason: Some(reason),
            order: None,
        }),
        Err(e) => Err(e),
    }
}

impl Analysis {
    /// The unique minimal node, when there is one.
    pub fn bottom(&self) -> Option<usize> {
        match self.poset.minimal_nodes().as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    /// `β̃_0, …, β̃_top` of the open interval above the bottom node.
    pub fn betti_above_bottom(&self) -> Option<Vec<usize>> {
        let b = self.bottom()?;
        let betti = &self.homology.per_node[b].betti;
        let top = betti.values.len() as isize - 1;
        Some((0..top).map(|k| betti.get(k)).collect())
    }

    pub fn lower_bound(&self) -> usize {
        lower_bound(&self.homology)
    }

    pub fn classification_json(&self) -> Value {
        let c = &self.classification;
        json!({
            "order": c.order,
            "dimension": c.dim,
            "codim_profile": c.codim_profile,
            "generating_r": c.generating_r,
            "minimal_reflecting": c.minimal.iter().zip(&c.minimal_subspaces).map(|(m, w)| json!({
                "codim": m.codim,
                "basis": matrix_to_json(w.basis()),
            })).collect::<Vec<_>>(),
            "rigid_r": c.rigid_r(),
            "rigid_reflection_group": c.is_rigid_reflection_group(),
            "rigid_by_minimal": c.rigid_by_minimal,
            "rigid_by_isotropy": c.rigid_by_isotropy,
            "rigidity_divergences": c.divergences(),
        })
    }

    pub fn poset_json(&self) -> Value {
        let p = &self.poset;
        json!({
            "nodes": p.len(),
            "layers": p.layer_sizes().iter().map(|&(codim, count)| json!({"codim": codim, "count": count})).collect::<Vec<_>>(),
            "covers": p.covers().len(),
            "components": p.components().len(),
            "lattice_nodes": self.lattice.len(),
            "connected_in_codim": (1..=p.dim()).map(|r| p.connectivity_in_codim(r)).collect::<Vec<_>>(),
        })
    }

    pub fn homology_json(&self) -> Value {
        let h = &self.homology;
        json!({
            "characteristic": h.characteristic,
            "Q": h.q,
            "betti_above_bottom": self.betti_above_bottom(),
            "contributors": h.contributors,
            "per_node": h.per_node.iter().filter(|n| !n.betti.is_zero()).map(|n| json!({
                "node": n.node_id,
                "codim": n.codim,
                "betti_from_minus_one": n.betti.values,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn bounds_json(&self) -> Value {
        serde_json::to_value(&self.bounds).expect("bounds serialize")
    }

    pub fn shelling_json(&self) -> Value {
        serde_json::to_value(&self.shelling).expect("shelling serialize")
    }

    pub fn report(&self, scenario: &str, separating: Option<&SeparationReport>) -> Report {
        Report {
            tool_version: TOOL_VERSION.into(),
            scenario: scenario.into(),
            classification: self.classification_json(),
            poset: self.poset_json(),
            homology: self.homology_json(),
            bounds: json!({
                "lower_bound": self.lower_bound(),
                "detail": self.bounds_json(),
                "shelling": self.shelling_json(),
            }),
            separating: separating.map(|s| serde_json::to_value(s).expect("report serializes")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub scenario: String,
    pub classification: Value,
    pub poset: Value,
    pub homology: Value,
    pub bounds: Value,
    pub separating: Option<Value>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn s3_pipeline() {
        let a = analyze(&catalog::s3_perm(), &AnalysisOptions::default()).unwrap();
        assert_eq!(a.betti_above_bottom(), Some(vec![0, 4]));
        assert_eq!(a.lower_bound(), 3);
        assert!(a.shelling.verified && a.shelling.top_degree_only == Some(true));
        let r = serde_json::to_value(a.report("s3-perm", None)).unwrap();
        assert_eq!(r["poset"]["nodes"], 16);
        assert_eq!(r["homology"]["Q"], json!([3]));
    }

    #[test]
    fn non_rigid_shelling_not_applicable() {
        let a = analyze(&catalog::c2c2_2n1(2).unwrap(), &AnalysisOptions::default()).unwrap();
        assert!(!a.shelling.applicable);
        assert!(a.shelling.reason.is_some());
    }
}
