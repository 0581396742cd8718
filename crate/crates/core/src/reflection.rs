//! Reflecting subspaces: the intersection lattice of fixed spaces, minimal
//! reflecting subspaces and rigidity.

use std::collections::HashMap;

use crate::group::FiniteMatrixGroup;
use crate::subspace::Subspace;

/// Intersection closure of the fixed spaces `V^σ`, `σ ≠ 1`, together with `V`.
///
/// Nodes are sorted by codimension and then by basis, so node 0 is `V`.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    nodes: Vec<Subspace>,
    isotropy: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    index: HashMap<Subspace, usize>,
}

impl SubspaceLattice {
    pub fn build(g: &FiniteMatrixGroup) -> SubspaceLattice {
        let full = Subspace::full(g.field(), g.dim());
        let mut generators: Vec<Subspace> = (1..g.order()).map(|i| g.fixed_space(i).clone()).collect();
        generators.sort_by(|a, b| (a.codim(), a.basis().data()).cmp(&(b.codim(), b.basis().data())));
        generators.dedup();

        let mut nodes = vec![full];
        let mut seen: HashMap<Subspace, usize> = HashMap::from([(nodes[0].clone(), 0)]);
        let mut i = 0;
        while i < nodes.len() {
            for gen in &generators {
                let m = nodes[i].meet(gen).expect("same ambient");
                if !seen.contains_key(&m) {
                    seen.insert(m.clone(), nodes.len());
                    nodes.push(m);
                }
            }
            i += 1;
        }
        nodes.sort_by(|a, b| (a.codim(), a.basis().data()).cmp(&(b.codim(), b.basis().data())));
        let index: HashMap<Subspace, usize> = nodes.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let isotropy = nodes.iter().map(|w| g.isotropy(w)).collect();
        let n = nodes.len();
        let leq: Vec<Vec<bool>> =
            (0..n).map(|a| (0..n).map(|b| nodes[a].leq(&nodes[b]).expect("same ambient")).collect()).collect();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] && !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        SubspaceLattice { nodes, isotropy, leq, covers, index }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Subspace {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Subspace] {
        &self.nodes
    }

    pub fn index_of(&self, w: &Subspace) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Isotropy subgroup of node `i`, ascending element indices.
    pub fn isotropy(&self, i: usize) -> &[usize] {
        &self.isotropy[i]
    }

    /// `node(a) ⊆ node(b)`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Cover pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// The least node, `V^G`.
    pub fn bottom(&self) -> usize {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[a][b])).expect("lattice has a bottom")
    }

    /// Codimension-one nodes.
    pub fn hyperplanes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].codim() == 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalReflecting {
    pub node: usize,
    pub codim: usize,
}

/// Lattice nodes `W ≠ V` with nontrivial isotropy that are not cut out by the
/// fixed spaces of their isotropy elements of smaller codimension.
pub fn minimal_reflecting_subspaces(g: &FiniteMatrixGroup, lattice: &SubspaceLattice) -> Vec<MinimalReflecting> {
    let mut out = Vec::new();
    for i in 1..lattice.len() {
        let w = lattice.node(i);
        let iso = lattice.isotropy(i);
        if iso.len() < 2 {
            continue;
        }
        let mut cut = Subspace::full(g.field(), g.dim());
        for &s in iso.iter().filter(|&&s| s != 0 && g.codim(s) < w.codim()) {
            cut = cut.meet(g.fixed_space(s)).expect("same ambient");
        }
        if &cut != w {
            out.push(MinimalReflecting { node: i, codim: w.codim() });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ReflectionClassification {
    pub order: usize,
    pub dim: usize,
    pub codim_profile: Vec<usize>,
    /// Least `r` such that the group is generated by `(≤ r)`-reflections.
    pub generating_r: usize,
    pub minimal: Vec<MinimalReflecting>,
    pub minimal_subspaces: Vec<Subspace>,
    /// Largest codimension of a minimal reflecting subspace (0 if there are none).
    pub r_star: usize,
    /// Rigidity at each `r = 0..=dim`: every minimal reflecting subspace has codim `≤ r`.
    pub rigid_by_minimal: Vec<bool>,
    /// Rigidity at each `r`: every isotropy subgroup is generated by its `(≤ r)`-reflections.
    pub rigid_by_isotropy: Vec<bool>,
}

impl ReflectionClassification {
    pub fn rigid_r(&self) -> usize {
        self.r_star
    }

    /// Both criteria. The isotropy one implies the minimal one but not conversely, so
    /// this is the isotropy criterion; consumers that need `G_W` generated by
    /// `r`-reflections rely on that.
    pub fn is_rigid(&self, r: usize) -> bool {
        let by = |v: &[bool]| v.get(r).copied().unwrap_or(true);
        by(&self.rigid_by_minimal) && by(&self.rigid_by_isotropy)
    }

    pub fn is_rigid_reflection_group(&self) -> bool {
        self.is_rigid(1)
    }

    /// Values of `r` where the two rigidity criteria disagree.
    pub fn divergences(&self) -> Vec<usize> {
        (0..self.rigid_by_minimal.len()).filter(|&r| self.rigid_by_minimal[r] != self.rigid_by_isotropy[r]).collect()
    }

    pub fn minimal_codims(&self) -> Vec<usize> {
        self.minimal.iter().map(|m| m.codim).collect()
    }
}

pub fn classify(g: &FiniteMatrixGroup, lattice: &SubspaceLattice) -> ReflectionClassification {
    let d = g.dim();
    let minimal = minimal_reflecting_subspaces(g, lattice);
    let r_star = minimal.iter().map(|m| m.codim).max().unwrap_or(0);
    let rigid_by_minimal = (0..=d).map(|r| minimal.iter().all(|m| m.codim <= r)).collect();
    let rigid_by_isotropy =
        (0..=d).map(|r| (0..lattice.len()).all(|i| g.generated_by_reflections(lattice.isotropy(i), r))).collect();
    ReflectionClassification {
        order: g.order(),
        dim: d,
        codim_profile: g.codim_profile(),
        generating_r: g.generating_r(),
        minimal_subspaces: minimal.iter().map(|m| lattice.node(m.node).clone()).collect(),
        minimal,
        r_star,
        rigid_by_minimal,
        rigid_by_isotropy,
    }
}
