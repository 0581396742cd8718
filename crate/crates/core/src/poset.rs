//! The intersection poset of the separating variety `S_{V,G} = ∪_σ (1⊗σ)(V) ⊂ V×V`.
//!
//! Every intersection of components is `(1⊗γ)(W)` for a lattice node `W` and a coset
//! `γ·G_W`, so nodes are stored abstractly as (lattice node, least coset element) pairs.
//! [`oracle`] rebuilds the poset from explicit subspaces of `V×V` for cross-checking.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::reflection::SubspaceLattice;

/// A finite poset on `0..size()`.
pub trait FinitePoset {
    fn size(&self) -> usize;
    /// Strict order.
    fn less(&self, a: usize, b: usize) -> bool;
}

impl FinitePoset for SubspaceLattice {
    fn size(&self) -> usize {
        self.len()
    }

    fn less(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }
}

impl FinitePoset for SepPoset {
    fn size(&self) -> usize {
        self.len()
    }

    fn less(&self, a: usize, b: usize) -> bool {
        self.lt(a, b)
    }
}

/// Poset given by an explicit strict relation, for tests and small examples.
#[derive(Clone, Debug)]
pub struct ExplicitPoset {
    less: Vec<BitSet>,
}

impl ExplicitPoset {
    /// Transitive closure of the given cover pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> ExplicitPoset {
        let mut less = vec![BitSet::new(n); n];
        for &(a, b) in covers {
            less[a].insert(b);
        }
        for k in 0..n {
            for i in 0..n {
                if less[i].contains(k) {
                    let above: Vec<usize> = less[k].iter().collect();
                    above.into_iter().for_each(|b| less[i].insert(b));
                }
            }
        }
        ExplicitPoset { less }
    }
}

impl FinitePoset for ExplicitPoset {
    fn size(&self) -> usize {
        self.less.len()
    }

    fn less(&self, a: usize, b: usize) -> bool {
        self.less[a].contains(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SepNode {
    /// Index into the reflecting lattice.
    pub subspace_id: usize,
    /// Least element index of the coset `γ·G_W`.
    pub coset_rep: usize,
    /// Codimension in `V×V`, i.e. `2d - dim W`.
    pub codim: usize,
    #[serde(skip)]
    pub is_component: bool,
}

#[derive(Clone, Debug)]
pub struct SepPoset {
    dim: usize,
    nodes: Vec<SepNode>,
    /// `leq[a]` holds every `b` with `a ≤ b`.
    leq: Vec<BitSet>,
    covers: Vec<(usize, usize)>,
    /// Index of each node in the poset it was cut from (identity for a full poset).
    origin: Vec<usize>,
    full: bool,
}

#[derive(Serialize)]
struct PosetJson<'a> {
    nodes: &'a [SepNode],
    covers: Vec<[usize; 2]>,
}

impl SepPoset {
    /// Builds the intersection poset from the group and its reflecting lattice.
    pub fn build(g: &FiniteMatrixGroup, lattice: &SubspaceLattice) -> SepPoset {
        let d = g.dim();
        let n_el = g.order();
        let mut nodes = Vec::new();
        let mut member: Vec<BitSet> = Vec::with_capacity(lattice.len());
        for li in 0..lattice.len() {
            let iso = lattice.isotropy(li);
            let mut set = BitSet::new(n_el);
            iso.iter().for_each(|&h| set.insert(h));
            member.push(set);
            // lattice nodes other than V always have nontrivial isotropy; anything
            // else is not an intersection of components
            if li != 0 && iso.len() < 2 {
                continue;
            }
            let mut reps: Vec<usize> =
                (0..n_el).map(|gamma| iso.iter().map(|&h| g.mul(gamma, h)).min().expect("nonempty")).collect();
            reps.sort_unstable();
            reps.dedup();
            let codim = 2 * d - lattice.node(li).dim();
            for rep in reps {
                nodes.push(SepNode { subspace_id: li, coset_rep: rep, codim, is_component: li == 0 });
            }
        }
        let n = nodes.len();
        let mut leq = vec![BitSet::new(n); n];
        for (a, na) in nodes.iter().enumerate() {
            for (b, nb) in nodes.iter().enumerate() {
                if lattice.leq(na.subspace_id, nb.subspace_id)
                    && member[na.subspace_id].contains(g.mul(g.inv(nb.coset_rep), na.coset_rep))
                {
                    leq[a].insert(b);
                }
            }
        }
        let mut poset = SepPoset { dim: d, nodes, leq, covers: Vec::new(), origin: (0..n).collect(), full: true };
        poset.prune_unrealized();
        poset.covers = poset.compute_covers();
        poset
    }

    /// Drops non-component nodes lying under fewer than two components.
    fn prune_unrealized(&mut self) {
        let keep: Vec<usize> = (0..self.nodes.len())
            .filter(|&a| {
                self.nodes[a].is_component || self.leq[a].iter().filter(|&b| self.nodes[b].is_component).count() >= 2
            })
            .collect();
        if keep.len() != self.nodes.len() {
            *self = self.induced(&keep, true);
        }
    }

    fn induced(&self, keep: &[usize], full: bool) -> SepPoset {
        let n = keep.len();
        let nodes = keep.iter().map(|&a| self.nodes[a]).collect();
        let mut leq = vec![BitSet::new(n); n];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.leq[a].contains(b) {
                    leq[i].insert(j);
                }
            }
        }
        let origin = keep.iter().map(|&a| self.origin[a]).collect();
        let mut out = SepPoset { dim: self.dim, nodes, leq, covers: Vec::new(), origin, full };
        out.covers = out.compute_covers();
        out
    }

    fn compute_covers(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        for a in 0..self.len() {
            let above: Vec<usize> = self.leq[a].iter().filter(|&b| b != a).collect();
            for &b in &above {
                if !above.iter().any(|&c| c != b && self.leq[c].contains(b)) {
                    covers.push((a, b));
                }
            }
        }
        covers
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Dimension `d` of `V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[SepNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &SepNode {
        &self.nodes[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Cover pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn origin(&self, i: usize) -> usize {
        self.origin[i]
    }

    /// Whether this is the whole intersection poset of a group (not a sub-interval).
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn find(&self, subspace_id: usize, coset_rep: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.subspace_id == subspace_id && n.coset_rep == coset_rep)
    }

    pub fn components(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].is_component).collect()
    }

    pub fn minimal_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| !(0..self.len()).any(|b| self.lt(b, a))).collect()
    }

    /// Node counts grouped by codimension, ascending codimension.
    pub fn layer_sizes(&self) -> Vec<(usize, usize)> {
        let mut codims: Vec<usize> = self.nodes.iter().map(|n| n.codim).collect();
        codims.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for c in codims {
            match out.last_mut() {
                Some((lc, cnt)) if *lc == c => *cnt += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Induced subposet on `{m : m > n}`.
    pub fn open_interval_above(&self, n: usize) -> Result<SepPoset> {
        if n >= self.len() {
            return Err(Error::NodeNotFound(n));
        }
        let keep: Vec<usize> = self.leq[n].iter().filter(|&b| b != n).collect();
        Ok(self.induced(&keep, false))
    }

    /// Induced subposet on `{m : m ≤ n}`.
    pub fn down_set(&self, n: usize) -> Result<SepPoset> {
        if n >= self.len() {
            return Err(Error::NodeNotFound(n));
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&a| self.leq(a, n)).collect();
        Ok(self.induced(&keep, false))
    }

    /// Whether the graph on components, joined when their intersection has
    /// codimension at most `r` in `V`, is connected.
    pub fn connectivity_in_codim(&self, r: usize) -> bool {
        let comps = self.components();
        let mut parent: Vec<usize> = (0..comps.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let (a, b) = (comps[i], comps[j]);
                // the intersection is the common lower bound of least codimension
                let meet_codim =
                    (0..self.len()).filter(|&c| self.leq(c, a) && self.leq(c, b)).map(|c| self.nodes[c].codim).min();
                if let Some(c) = meet_codim {
                    if c - self.dim <= r {
                        let (ra, rb) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ra] = rb;
                    }
                }
            }
        }
        let roots: std::collections::HashSet<usize> = (0..comps.len()).map(|i| find(&mut parent, i)).collect();
        roots.len() <= 1
    }

    pub fn node_label(&self, i: usize) -> String {
        let n = &self.nodes[i];
        if n.is_component {
            format!("g{}·V (codim {})", n.coset_rep, n.codim)
        } else {
            format!("g{}·V^H{} (codim {})", n.coset_rep, n.subspace_id, n.codim)
        }
    }

    /// Graphviz rendering of the Hasse diagram, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph sep_poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", self.node_label(i));
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "  n{a} -- n{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let covers = self.covers.iter().map(|&(a, b)| [a, b]).collect();
        serde_json::to_value(PosetJson { nodes: &self.nodes, covers }).expect("serializable")
    }
}

pub mod oracle {
    //! Brute-force construction from explicit subspaces of `V×V`.

    use std::collections::HashMap;

    use super::SepPoset;
    use crate::group::FiniteMatrixGroup;
    use crate::reflection::SubspaceLattice;
    use crate::subspace::Subspace;

    /// `(1⊗γ)(W) = {(w, γw)}` as a subspace of `V×V`.
    pub fn graph_piece(g: &FiniteMatrixGroup, w: &Subspace, gamma: usize) -> Subspace {
        let f = g.field();
        let d = g.dim();
        let rho = g.element(gamma);
        let vectors = (0..w.dim())
            .map(|r| {
                let v = w.basis().row(r).to_vec();
                let mut out = v.clone();
                out.extend(rho.mul_vec(&v));
                out
            })
            .collect();
        Subspace::span(f, 2 * d, vectors)
    }

    /// Intersection closure of the components `(1⊗σ)(V)`.
    pub fn explicit_intersections(g: &FiniteMatrixGroup) -> Vec<Subspace> {
        let full = Subspace::full(g.field(), g.dim());
        let comps: Vec<Subspace> = (0..g.order()).map(|s| graph_piece(g, &full, s)).collect();
        let mut all = comps.clone();
        let mut seen: HashMap<Subspace, ()> = all.iter().cloned().map(|s| (s, ())).collect();
        let mut i = 0;
        while i < all.len() {
            for c in &comps {
                let m = all[i].meet(c).expect("same ambient");
                if !seen.contains_key(&m) {
                    seen.insert(m.clone(), ());
                    all.push(m);
                }
            }
            i += 1;
        }
        all
    }

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct OracleComparison {
        pub explicit_nodes: usize,
        pub abstract_nodes: usize,
        pub bijective: bool,
        pub order_agrees: bool,
        pub codims_agree: bool,
    }

    impl OracleComparison {
        pub fn agrees(&self) -> bool {
            self.explicit_nodes == self.abstract_nodes && self.bijective && self.order_agrees && self.codims_agree
        }
    }

    pub fn compare(g: &FiniteMatrixGroup, lattice: &SubspaceLattice, poset: &SepPoset) -> OracleComparison {
        let explicit = explicit_intersections(g);
        let mapped: Vec<Subspace> =
            poset.nodes().iter().map(|n| graph_piece(g, lattice.node(n.subspace_id), n.coset_rep)).collect();
        let index: HashMap<&Subspace, usize> = explicit.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let images: Vec<Option<usize>> = mapped.iter().map(|s| index.get(s).copied()).collect();
        let mut hit = vec![false; explicit.len()];
        let mut bijective = images.iter().all(Option::is_some);
        for &i in images.iter().flatten() {
            bijective &= !std::mem::replace(&mut hit[i], true);
        }
        bijective &= hit.iter().all(|&h| h);
        let codims_agree = mapped.iter().zip(poset.nodes()).all(|(s, n)| s.codim() == n.codim);
        let n = poset.len();
        let order_agrees = (0..n).all(|a| (0..n).all(|b| mapped[a].leq(&mapped[b]).unwrap() == poset.leq(a, b)));
        OracleComparison { explicit_nodes: explicit.len(), abstract_nodes: n, bijective, order_agrees, codims_agree }
    }

    /// Checks that the down-set of a component maps isomorphically onto the
    /// reflecting lattice via `(W, γ) ↦ W`.
    pub fn down_set_matches_lattice(poset: &SepPoset, lattice: &SubspaceLattice, component: usize) -> bool {
        let Ok(down) = poset.down_set(component) else {
            return false;
        };
        if down.len() != lattice.len() {
            return false;
        }
        let ids: Vec<usize> = down.nodes().iter().map(|n| n.subspace_id).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lattice.len() {
            return false;
        }
        (0..down.len()).all(|a| (0..down.len()).all(|b| down.leq(a, b) == lattice.leq(ids[a], ids[b])))
    }
}
