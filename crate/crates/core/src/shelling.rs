//! Shellings: the EL shelling of a rigid reflecting lattice and the glued shelling of
//! the separating poset of a rigid reflection group.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::poset::SepPoset;
use crate::reflection::{classify, SubspaceLattice};
use crate::topology::OrderComplex;

/// Facets in shelling order. Each facet lists vertices in ascending index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellingOrder {
    pub facets: Vec<Vec<u32>>,
    /// `certificate[i][j] = k`: `F_i ∩ F_j ⊆ F_i ∩ F_k` with `k < i` and `|F_i ∩ F_k| = |F_i| - 1`.
    pub certificate: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ShellingVerdict {
    Valid { certificate: Vec<Vec<usize>> },
    NotPure { facet: usize },
    Fails { i: usize, j: usize },
}

impl ShellingVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ShellingVerdict::Valid { .. })
    }
}

/// Lattice chain from `V` down to the bottom, with its EL label word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledChain {
    pub nodes: Vec<usize>,
    pub labels: Vec<usize>,
}

/// Maximal chains of the reflecting lattice sorted by EL label word, atoms ordered with
/// `first` leading and the other hyperplanes by node index. Labels are 1-based atom positions.
pub fn el_chains(l: &SubspaceLattice, first: usize) -> Result<Vec<LabelledChain>> {
    let atoms = l.hyperplanes();
    if !atoms.contains(&first) {
        return Err(Error::Precondition(format!("node {first} is not a reflecting hyperplane")));
    }
    for i in 0..l.len() {
        let cut = atoms
            .iter()
            .filter(|&&h| l.leq(i, h))
            .map(|&h| l.node(h))
            .try_fold(crate::subspace::Subspace::full(l.node(0).field(), l.node(0).ambient()), |acc, h| acc.meet(h))?;
        if &cut != l.node(i) {
            return Err(Error::Precondition(format!(
                "lattice node {i} is not an intersection of hyperplanes; the group is not a rigid reflection group"
            )));
        }
    }
    let mut order = vec![first];
    order.extend(atoms.iter().copied().filter(|&h| h != first));
    let meet_index = |x: usize, h: usize| -> usize {
        let m = l.node(x).meet(l.node(h)).expect("same ambient");
        l.index_of(&m).expect("lattice is closed under meets")
    };
    let below: Vec<Vec<usize>> =
        (0..l.len()).map(|x| l.covers().iter().filter(|c| c.1 == x).map(|c| c.0).collect()).collect();
    let mut chains = Vec::new();
    let mut stack = vec![(vec![0usize], Vec::new())];
    while let Some((nodes, labels)) = stack.pop() {
        let x = *nodes.last().expect("nonempty");
        if below[x].is_empty() {
            chains.push(LabelledChain { nodes, labels });
            continue;
        }
        for &y in &below[x] {
            let label = order
                .iter()
                .position(|&h| meet_index(x, h) == y)
                .ok_or_else(|| Error::Shelling(format!("no atom realizes the cover {x} > {y}")))?;
            let mut n = nodes.clone();
            n.push(y);
            let mut lab = labels.clone();
            lab.push(label + 1);
            stack.push((n, lab));
        }
    }
    chains.sort_by(|a, b| a.labels.cmp(&b.labels));
    Ok(chains)
}

/// Shelling of the order complex of the whole reflecting lattice.
pub fn el_shelling_reflecting(l: &SubspaceLattice, first: usize) -> Result<ShellingOrder> {
    let facets = el_chains(l, first)?
        .into_iter()
        .map(|c| {
            let mut f: Vec<u32> = c.nodes.iter().map(|&x| x as u32).collect();
            f.sort_unstable();
            f
        })
        .collect();
    certified(facets)
}

fn certified(facets: Vec<Vec<u32>>) -> Result<ShellingOrder> {
    match check_order(&facets) {
        ShellingVerdict::Valid { certificate } => Ok(ShellingOrder { facets, certificate }),
        ShellingVerdict::NotPure { facet } => Err(Error::Shelling(format!("facet {facet} breaks purity"))),
        ShellingVerdict::Fails { i, j } => {
            Err(Error::Shelling(format!("facet {i} meets earlier facet {j} outside a codimension-one face")))
        }
    }
}

/// Group elements in reflection-BFS order with the least earlier witness of each.
pub fn reflection_bfs(g: &FiniteMatrixGroup) -> Vec<(usize, Option<usize>)> {
    let reflections: Vec<usize> = (1..g.order()).filter(|&s| g.codim(s) == 1).collect();
    let mut pos: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut out = vec![(0usize, None)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let sigma = out[i].0;
        for &t in &reflections {
            let next = g.mul(t, sigma);
            if let std::collections::hash_map::Entry::Vacant(e) = pos.entry(next) {
                e.insert(out.len());
                queue.push_back(out.len());
                out.push((next, Some(i)));
            }
        }
    }
    out
}

/// The glued shelling of the separating poset of a rigid reflection group.
pub fn shelling_separating(p: &SepPoset, g: &FiniteMatrixGroup, l: &SubspaceLattice) -> Result<ShellingOrder> {
    let c = classify(g, l);
    if !c.is_rigid_reflection_group() || !g.is_r_reflection_group(1) {
        return Err(Error::Precondition("shelling needs a rigid reflection group".into()));
    }
    if !p.is_full() {
        return Err(Error::Precondition("shelling needs the full separating poset".into()));
    }
    let order = reflection_bfs(g);
    if order.len() != g.order() {
        return Err(Error::Shelling("reflections do not reach every element".into()));
    }
    let iso_rep = |w: usize, sigma: usize| -> usize {
        l.isotropy(w).iter().map(|&h| g.mul(sigma, h)).min().expect("isotropy nonempty")
    };
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for &(sigma, witness) in &order {
        let chains = if l.len() == 1 {
            vec![LabelledChain { nodes: vec![0], labels: vec![] }]
        } else {
            let first = match witness {
                None => l.hyperplanes()[0],
                Some(i) => {
                    let t = g.mul(g.inv(order[i].0), sigma);
                    l.index_of(g.fixed_space(t))
                        .ok_or_else(|| Error::Shelling("reflecting hyperplane missing from lattice".into()))?
                }
            };
            el_chains(l, first)?
        };
        for chain in chains {
            let mut f = chain
                .nodes
                .iter()
                .map(|&w| {
                    p.find(w, iso_rep(w, sigma))
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Shelling(format!("node ({w}, {sigma}) missing")))
                })
                .collect::<Result<Vec<u32>>>()?;
            f.sort_unstable();
            facets.push(f);
        }
    }
    certified(facets)
}

/// Checks the shelling condition for facets in the given order.
pub fn check_order(facets: &[Vec<u32>]) -> ShellingVerdict {
    let Some(size) = facets.first().map(Vec::len) else {
        return ShellingVerdict::Valid { certificate: Vec::new() };
    };
    if let Some(facet) = facets.iter().position(|f| f.len() != size) {
        return ShellingVerdict::NotPure { facet };
    }
    // codimension-one faces of earlier facets, mapped to the earliest owner
    let mut ridges: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut certificate = Vec::with_capacity(facets.len());
    for (i, f) in facets.iter().enumerate() {
        // vertices v with F_i \ {v} inside an earlier facet
        let mut removable: Vec<(u32, usize)> = Vec::new();
        for idx in 0..f.len() {
            let mut r = f.clone();
            let v = r.remove(idx);
            if let Some(&k) = ridges.get(&r) {
                removable.push((v, k));
            }
        }
        let mut row = Vec::with_capacity(i);
        for (j, fj) in facets[..i].iter().enumerate() {
            match removable.iter().find(|(v, _)| fj.binary_search(v).is_err()) {
                Some(&(_, k)) => row.push(k),
                None => return ShellingVerdict::Fails { i, j },
            }
        }
        certificate.push(row);
        for idx in 0..f.len() {
            let mut r = f.clone();
            r.remove(idx);
            ridges.entry(r).or_insert(i);
        }
    }
    ShellingVerdict::Valid { certificate }
}

/// Verifies that `order` is a permutation of the facets of `c` and a shelling.
pub fn verify_shelling(c: &OrderComplex, order: &[Vec<u32>]) -> Result<ShellingVerdict> {
    let mut expected = c.facets();
    let mut given: Vec<Vec<u32>> = order.to_vec();
    expected.sort();
    given.sort();
    if expected != given {
        return Err(Error::Precondition("order is not a permutation of the facets".into()));
    }
    Ok(check_order(order))
}

impl ShellingOrder {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "facets": self.facets,
            "certificate": self.certificate,
        })
    }
}
