//! Explicit separating sets: the triangle of norms and traces for `C_p` on `V_n`,
//! the diagonal sums for `C_p` on `V_2^{⊕n}`, user-supplied triangles, and the
//! `GL_7(F_2)` scenario.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::bits::BitSet;
use crate::catalog;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::group::FiniteMatrixGroup;
use crate::invariants::{graded_invariants, is_invariant, norm_trace, GradedInvariants, InvariantSpace};
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::separation::{verify_separating, SeparationReport, VerifyConfig};
use crate::subspace::Subspace;

/// Invariants `u_{i,j}`, `1 ≤ i ≤ j ≤ n`, arranged in a triangle.
#[derive(Clone, Debug)]
pub struct TriangleFamily {
    pub n: usize,
    pub entries: BTreeMap<(usize, usize), MultiPoly>,
}

impl TriangleFamily {
    pub fn new(n: usize, entries: BTreeMap<(usize, usize), MultiPoly>) -> Result<TriangleFamily> {
        if let Some(&(i, j)) = entries.keys().find(|&&(i, j)| i == 0 || i > j || j > n) {
            return Err(Error::Precondition(format!("position ({i}, {j}) is outside the triangle of size {n}")));
        }
        Ok(TriangleFamily { n, entries })
    }

    /// `(k, S_k)` for every nonempty anti-diagonal `i + j = k`, ascending `k`.
    pub fn diagonal_sums(&self) -> Vec<(usize, MultiPoly)> {
        let mut sums: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        for (&(i, j), u) in &self.entries {
            sums.entry(i + j).and_modify(|s| *s = s.add(u)).or_insert_with(|| u.clone());
        }
        sums.into_iter().collect()
    }

    pub fn candidates(&self) -> Vec<MultiPoly> {
        self.diagonal_sums().into_iter().map(|(_, s)| s).collect()
    }

    pub fn check_invariant(&self, g: &FiniteMatrixGroup) -> Result<()> {
        for (&(i, j), u) in &self.entries {
            if !is_invariant(g, u)? {
                return Err(Error::Precondition(format!("u_{{{i},{j}}} is not invariant")));
            }
        }
        Ok(())
    }
}

/// Verifies a user-supplied triangle: invariance of every entry, then separation by
/// the diagonal sums.
pub fn verify_triangle(g: &FiniteMatrixGroup, t: &TriangleFamily, cfg: &VerifyConfig) -> Result<SeparationReport> {
    t.check_invariant(g)?;
    verify_separating(g, &t.candidates(), cfg)
}

/// Norms `N(x_i)`, traces `Tr(x_i x_j^{p-1})` and `x_n^p` for `C_p` on `V_n`, `2 ≤ n ≤ p`.
pub fn cp_triangle(p: u32, n: usize) -> Result<(FiniteMatrixGroup, TriangleFamily)> {
    if n < 2 || n > p as usize {
        return Err(Error::Precondition(format!("need 2 <= n <= p, got n = {n}, p = {p}")));
    }
    let g = catalog::cp_vn(p, n)?;
    let sigma = g.generators()[0];
    let x = |i: usize| MultiPoly::var(g.field(), n, i - 1);
    let mut entries = BTreeMap::new();
    for i in 1..n {
        entries.insert((i, i), norm_trace(&g, sigma, &x(i))?.0);
        for j in i + 1..n {
            let mono = x(i).mul(&x(j).pow(p - 1));
            entries.insert((i, j), norm_trace(&g, sigma, &mono)?.1);
        }
    }
    entries.insert((n, n), x(n).pow(p));
    let t = TriangleFamily::new(n, entries)?;
    Ok((g, t))
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub instances: usize,
    pub vanishes: bool,
}

#[derive(Clone, Debug)]
pub struct V2Candidates {
    pub group: FiniteMatrixGroup,
    pub n: usize,
    /// `x_1..x_n` then `S_2..S_{2n}`.
    pub candidates: Vec<MultiPoly>,
    pub triangle: TriangleFamily,
    pub relations: Vec<RelationCheck>,
}

/// `C_p` on `V_2^{⊕n}` with coordinates `x_1, y_1, …, x_n, y_n`: the `x_i` and the
/// diagonal sums of `u_{i,i} = y_i^p - x_i^{p-1} y_i`, `u_{i,j} = x_i y_j - x_j y_i`.
pub fn v2_candidates(p: u32, n: usize) -> Result<V2Candidates> {
    let g = catalog::cp_v2_vec(p, n)?;
    let f = g.field().clone();
    let d = 2 * n;
    let x = |i: usize| MultiPoly::var(&f, d, 2 * (i - 1));
    let y = |i: usize| MultiPoly::var(&f, d, 2 * (i - 1) + 1);
    let mut entries = BTreeMap::new();
    for i in 1..=n {
        entries.insert((i, i), y(i).pow(p).sub(&x(i).pow(p - 1).mul(&y(i))));
        for j in i + 1..=n {
            entries.insert((i, j), x(i).mul(&y(j)).sub(&x(j).mul(&y(i))));
        }
    }
    let triangle = TriangleFamily::new(n, entries)?;
    let u = |i: usize, j: usize| triangle.entries[&(i, j)].clone();

    let mut first = RelationCheck { name: "x_i u_jk - x_j u_ik + x_k u_ij".into(), instances: 0, vanishes: true };
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let r = x(i).mul(&u(j, k)).sub(&x(j).mul(&u(i, k))).add(&x(k).mul(&u(i, j)));
                first.instances += 1;
                first.vanishes &= r.is_zero();
            }
        }
    }
    let mut second = RelationCheck {
        name: "x_i^p u_jj - x_j^p u_ii + x_i^(p-1) x_j^(p-1) u_ij - u_ij^p".into(),
        instances: 0,
        vanishes: true,
    };
    let mut literal = RelationCheck {
        name: "x_i u_jj - x_j u_ii + x_i^(p-1) x_j^(p-1) u_ij - u_ij^p (as printed)".into(),
        instances: 0,
        vanishes: true,
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let tail = x(i).pow(p - 1).mul(&x(j).pow(p - 1)).mul(&u(i, j)).sub(&u(i, j).pow(p));
            let r = x(i).pow(p).mul(&u(j, j)).sub(&x(j).pow(p).mul(&u(i, i))).add(&tail);
            second.instances += 1;
            second.vanishes &= r.is_zero();
            let r = x(i).mul(&u(j, j)).sub(&x(j).mul(&u(i, i))).add(&tail);
            literal.instances += 1;
            literal.vanishes &= r.is_zero();
        }
    }
    let mut candidates: Vec<MultiPoly> = (1..=n).map(x).collect();
    candidates.extend(triangle.candidates());
    Ok(V2Candidates { group: g, n, candidates, triangle, relations: vec![first, second, literal] })
}

/// Result of dropping one candidate from a separating set.
#[derive(Clone, Debug, Serialize)]
pub struct RemovalCheck {
    pub removed: usize,
    /// Extension degree at which a witness was found, if any.
    pub refuted_at: Option<u32>,
    pub report: SeparationReport,
}

/// Drops each candidate in turn and looks for a witness over `F_q`, then `F_{q^2}`.
pub fn removal_checks(
    g: &FiniteMatrixGroup,
    candidates: &[MultiPoly],
    cfg: &VerifyConfig,
) -> Result<Vec<RemovalCheck>> {
    (0..candidates.len())
        .map(|k| {
            let rest: Vec<MultiPoly> =
                candidates.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| c.clone()).collect();
            let mut report = verify_separating(g, &rest, &VerifyConfig { extensions: vec![1], ..cfg.clone() })?;
            if !report.is_refuted() {
                report = verify_separating(g, &rest, &VerifyConfig { extensions: vec![2], ..cfg.clone() })?;
            }
            let refuted_at = report.witness().map(|(e, _)| e);
            Ok(RemovalCheck { removed: k, refuted_at, report })
        })
        .collect()
}

/// Which of the three cubics and three quartics carry the labels `f_3` and `g_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Labeling {
    pub f_order: [usize; 3],
    pub g_order: [usize; 3],
}

impl Labeling {
    pub const IDENTITY: Labeling = Labeling { f_order: [0, 1, 2], g_order: [0, 1, 2] };
}

#[derive(Clone, Debug)]
pub struct Gl7Scenario {
    pub group: FiniteMatrixGroup,
    pub invariants: GradedInvariants,
    /// Canonical cubics and quartics before labeling.
    pub cubics: [MultiPoly; 3],
    pub quartics: [MultiPoly; 3],
    pub quintic: MultiPoly,
    pub labeling: Labeling,
    /// Labelings tried before `labeling` was accepted.
    pub labelings_tried: usize,
    /// `x_1..x_4, f_1, f_2, g_1, g_2, f_3 + g_3`.
    pub candidates: Vec<MultiPoly>,
    pub report: Option<SeparationReport>,
}

impl Gl7Scenario {
    pub fn f(&self, i: usize) -> &MultiPoly {
        &self.cubics[self.labeling.f_order[i - 1]]
    }

    pub fn g(&self, i: usize) -> &MultiPoly {
        &self.quartics[self.labeling.g_order[i - 1]]
    }
}

/// First row of the echelon basis of the invariants of `space` that avoid `vars`.
fn leading_free_of(space: &InvariantSpace, vars: &[usize]) -> Result<MultiPoly> {
    let f = space.space.field();
    let allowed: Vec<Vec<Scalar>> = space
        .monomials
        .iter()
        .enumerate()
        .filter(|(_, m)| vars.iter().all(|&v| m[v] == 0))
        .map(|(i, _)| {
            let mut e = vec![f.zero(); space.monomials.len()];
            e[i] = f.one();
            e
        })
        .collect();
    let coord = Subspace::span(f, space.monomials.len(), allowed);
    let meet = space.space.meet(&coord)?;
    if meet.dim() == 0 {
        return Err(Error::Precondition(format!("no degree-{} invariant avoids {vars:?}", space.degree)));
    }
    let n = space.monomials[0].len();
    Ok(MultiPoly::from_coefficient_vector(f, n, &space.monomials, meet.basis().row(0)))
}

fn gl7_candidates(cubics: &[MultiPoly; 3], quartics: &[MultiPoly; 3], l: Labeling) -> Vec<MultiPoly> {
    let f = cubics[0].field().clone();
    let mut c: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(&f, 7, i)).collect();
    let fl = |i: usize| cubics[l.f_order[i]].clone();
    let gl = |i: usize| quartics[l.g_order[i]].clone();
    c.extend([fl(0), fl(1), gl(0), gl(1), fl(2).add(&gl(2))]);
    c
}

/// Builds the scenario. `f_i` is the leading echelon cubic invariant free of `x_{4+i}`;
/// `g_i` is the leading echelon quartic invariant free of the other two of `x_5, x_6, x_7`.
/// With `verify`, labelings are tried (identity first, then every choice of the `f_3`
/// and `g_3` slots) until the nine candidates separate at every configured extension.
pub fn gl7_scenario(verify: Option<&VerifyConfig>) -> Result<Gl7Scenario> {
    let group = catalog::gl7_f2();
    let invariants = graded_invariants(&group, 5, 5)?;
    let cubic_space = &invariants.spaces[2];
    let quartic_space = &invariants.spaces[3];
    let cubics =
        [leading_free_of(cubic_space, &[4])?, leading_free_of(cubic_space, &[5])?, leading_free_of(cubic_space, &[6])?];
    let quartics = [
        leading_free_of(quartic_space, &[5, 6])?,
        leading_free_of(quartic_space, &[4, 6])?,
        leading_free_of(quartic_space, &[4, 5])?,
    ];
    let quintic = invariants.new_generators[4]
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("no new quintic generator".into()))?;
    let mut scenario = Gl7Scenario {
        candidates: gl7_candidates(&cubics, &quartics, Labeling::IDENTITY),
        group,
        invariants,
        cubics,
        quartics,
        quintic,
        labeling: Labeling::IDENTITY,
        labelings_tried: 0,
        report: None,
    };
    let Some(cfg) = verify else {
        return Ok(scenario);
    };
    let mut labelings = vec![Labeling::IDENTITY];
    for f3 in 0..3 {
        for g3 in 0..3 {
            let rest = |k: usize| -> [usize; 3] {
                let others: Vec<usize> = (0..3).filter(|&x| x != k).collect();
                [others[0], others[1], k]
            };
            let l = Labeling { f_order: rest(f3), g_order: rest(g3) };
            if l != Labeling::IDENTITY {
                labelings.push(l);
            }
        }
    }
    for l in labelings {
        scenario.labelings_tried += 1;
        let cands = gl7_candidates(&scenario.cubics, &scenario.quartics, l);
        let report = verify_separating(&scenario.group, &cands, cfg)?;
        if report.is_separating() {
            scenario.labeling = l;
            scenario.candidates = cands;
            scenario.report = Some(report);
            return Ok(scenario);
        }
        scenario.report = Some(report);
    }
    Ok(scenario)
}

/// Replaces each variable `x_{v+1}` in `targets` by `x_{to+1}`.
fn identify(p: &MultiPoly, targets: &[usize], to: usize) -> Result<MultiPoly> {
    let n = p.nvars();
    let images: Vec<MultiPoly> =
        (0..n).map(|i| MultiPoly::var(p.field(), n, if targets.contains(&i) { to } else { i })).collect();
    p.substitute(&images)
}

#[derive(Clone, Debug, Serialize)]
pub struct Gl7Relation {
    pub name: String,
    /// False for diagnostic variants that are not among the stated relations.
    pub stated: bool,
    pub holds: bool,
}

/// The linear relations among `f_i`, `g_3` and the coordinates. Membership in ideals
/// generated by linear forms is tested by substitution.
pub fn gl7_linear_relations(s: &Gl7Scenario) -> Result<Vec<Gl7Relation>> {
    let k = s.group.field().clone();
    let x = |i: usize| MultiPoly::var(&k, 7, i - 1);
    let a = |i: usize| x(i).add(&x(4));
    let lhs = a(3).mul(s.f(3));
    let rhs = s.f(2).mul(&a(2)).add(&s.f(1).mul(&a(1)));
    let mut out =
        vec![Gl7Relation { name: "(x3+x4) f3 = f2 (x2+x4) + f1 (x1+x4)".into(), stated: true, holds: lhs == rhs }];
    for i in 1..=2 {
        let h = a(i).pow(2).mul(s.g(3)).sub(&s.f(i).pow(2));
        out.push(Gl7Relation {
            name: format!("(x{i}+x4)^2 g3 = f{i}^2 mod (x3+x4)"),
            stated: true,
            holds: identify(&h, &[2], 3)?.is_zero(),
        });
    }
    for i in 1..=2 {
        let h = a(3 - i).pow(2).mul(s.g(3)).sub(&s.f(i).pow(2));
        out.push(Gl7Relation {
            name: format!("(x{}+x4)^2 g3 = f{i}^2 mod (x3+x4)", 3 - i),
            stated: false,
            holds: identify(&h, &[2], 3)?.is_zero(),
        });
    }
    out.push(Gl7Relation {
        name: "f3 = 0 mod (x1+x4, x2+x4, x3+x4)".into(),
        stated: true,
        holds: identify(s.f(3), &[0, 1, 2], 3)?.is_zero(),
    });
    Ok(out)
}

/// Searches all relabelings of the cubics and quartics for one satisfying every stated
/// linear relation, identity first.
pub fn gl7_relation_labeling(s: &Gl7Scenario) -> Result<Option<Labeling>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut probe = s.clone();
    for f_order in PERMS {
        for g_order in PERMS {
            probe.labeling = Labeling { f_order, g_order };
            if gl7_linear_relations(&probe)?.iter().all(|r| r.holds || !r.stated) {
                return Ok(Some(probe.labeling));
            }
        }
    }
    Ok(None)
}

/// Membership of a homogeneous form in the span of `spanning`, all of one degree.
/// Over `F_2` the rows are bit-packed.
fn in_span(target: &MultiPoly, spanning: &[MultiPoly]) -> Result<bool> {
    let k = target.field().clone();
    let deg = target.total_degree().unwrap_or(0);
    let mons = crate::poly::monomials(target.nvars(), deg);
    if k.order() == Some(2) {
        let index: HashMap<&[u32], usize> = mons.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let pack = |p: &MultiPoly| {
            let mut bits = BitSet::new(mons.len());
            for (m, _) in p.terms() {
                bits.insert(index[m.as_slice()]);
            }
            bits
        };
        let mut basis: HashMap<usize, BitSet> = HashMap::new();
        fn reduce(mut v: BitSet, basis: &HashMap<usize, BitSet>) -> BitSet {
            loop {
                let piv = v.iter().find(|i| basis.contains_key(i));
                match piv {
                    Some(piv) => v.xor_with(&basis[&piv]),
                    None => return v,
                }
            }
        }
        for p in spanning {
            let v = reduce(pack(p), &basis);
            let lead = v.iter().next();
            if let Some(piv) = lead {
                basis.insert(piv, v);
            }
        }
        return Ok(reduce(pack(target), &basis).count() == 0);
    }
    let rows: Vec<Vec<Scalar>> = spanning.iter().map(|p| p.coefficient_vector(&mons)).collect();
    if rows.is_empty() {
        return Ok(target.is_zero());
    }
    let base = Matrix::from_rows(&k, rows.clone())?.rank();
    let mut with = rows;
    with.push(target.coefficient_vector(&mons));
    Ok(Matrix::from_rows(&k, with)?.rank() == base)
}

/// The relations involving the quintic `r`: `f_i r` lies in the subalgebra generated
/// by the other generators, and `r^2 ≡ (x1+x4)^2 g2 g3` modulo `(f1, f2, f3)`.
/// Both are decided by linear algebra in a single degree.
pub fn gl7_quintic_relations(s: &Gl7Scenario) -> Result<Vec<Gl7Relation>> {
    let k = s.group.field().clone();
    let x = |i: usize| MultiPoly::var(&k, 7, i - 1);
    let gens: Vec<(u32, MultiPoly)> = (1..=4)
        .map(|i| (1, x(i)))
        .chain((1..=3).map(|i| (3, s.f(i).clone())))
        .chain((1..=3).map(|i| (4, s.g(i).clone())))
        .collect();
    // products of generators of weighted degree 8
    let mut products = Vec::new();
    fn rec(gens: &[(u32, MultiPoly)], start: usize, left: u32, acc: MultiPoly, out: &mut Vec<MultiPoly>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..gens.len() {
            if gens[i].0 <= left {
                rec(gens, i, left - gens[i].0, acc.mul(&gens[i].1), out);
            }
        }
    }
    rec(&gens, 0, 8, MultiPoly::one(&k, 7), &mut products);
    let mut out = Vec::new();
    for i in 1..=3 {
        out.push(Gl7Relation {
            name: format!("f{i} r in k[x, f, g]"),
            stated: true,
            holds: in_span(&s.f(i).mul(&s.quintic), &products)?,
        });
    }
    let target = s.quintic.pow(2).sub(&x(1).add(&x(4)).pow(2).mul(s.g(2)).mul(s.g(3)));
    let multiples: Vec<MultiPoly> = crate::poly::monomials(7, 7)
        .into_iter()
        .flat_map(|m| {
            let mono = MultiPoly::monomial(&k, m, k.one());
            (1..=3).map(move |i| (mono.clone(), i))
        })
        .map(|(mono, i)| mono.mul(s.f(i)))
        .collect();
    out.push(Gl7Relation {
        name: "r^2 = (x1+x4)^2 g2 g3 mod (f1, f2, f3)".into(),
        stated: true,
        holds: target.is_zero() || in_span(&target, &multiples)?,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn cp_triangle_shapes() {
        let (g, t) = cp_triangle(3, 2).unwrap();
        let c = t.candidates();
        assert_eq!(c.len(), 2);
        let x1 = MultiPoly::var(g.field(), 2, 0);
        let x2 = MultiPoly::var(g.field(), 2, 1);
        assert_eq!(c[1], x2.pow(3));
        assert_eq!(c[0], norm_trace(&g, g.generators()[0], &x1).unwrap().0);
        for (p, n) in [(3, 3), (5, 3), (5, 4), (5, 5)] {
            let (g, t) = cp_triangle(p, n).unwrap();
            assert_eq!(t.candidates().len(), 2 * n - 2);
            assert!(t.diagonal_sums().iter().all(|(k, _)| *k != 2 * n - 1));
            t.check_invariant(&g).unwrap();
        }
        assert!(cp_triangle(3, 4).is_err());
        assert!(cp_triangle(3, 1).is_err());
    }

    #[test]
    fn traces_are_nonzero_forms() {
        for (p, n) in [(3u32, 3usize), (5, 4)] {
            let (g, t) = cp_triangle(p, n).unwrap();
            for ((i, j), u) in &t.entries {
                assert!(!u.is_zero(), "u_{i}{j}");
                assert!(u.is_homogeneous());
                assert_eq!(u.total_degree(), Some(p));
            }
            assert!(!is_invariant(&g, &MultiPoly::var(g.field(), n, 0).pow(p)).unwrap());
        }
    }

    #[test]
    fn power_sums() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let k = Field::prime(p).unwrap();
            for j in 0..3 * p {
                let s = (1..p).fold(k.zero(), |acc, a| k.add(&acc, &k.pow(&k.from_i64(a as i64), j as u64)));
                let expected = if j > 0 && j % (p - 1) == 0 {
                    k.from_i64(-1)
                } else if j == 0 {
                    k.from_i64(p as i64 - 1)
                } else {
                    k.zero()
                };
                assert_eq!(s, expected, "p = {p}, j = {j}");
            }
        }
    }

    #[test]
    fn v2_relations_and_counts() {
        for p in [2u32, 3, 5] {
            for n in 1..=4 {
                if p == 5 && n == 4 {
                    continue;
                }
                let v = v2_candidates(p, n).unwrap();
                assert_eq!(v.candidates.len(), 3 * n - 1);
                assert!(v.relations[0].vanishes && v.relations[1].vanishes, "p = {p}, n = {n}");
                if n >= 2 {
                    assert!(!v.relations[2].vanishes);
                }
                for c in &v.candidates {
                    assert!(is_invariant(&v.group, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn triangle_rejects_bad_positions() {
        let k = Field::prime(2).unwrap();
        let e = BTreeMap::from([((2, 1), MultiPoly::one(&k, 1))]);
        assert!(TriangleFamily::new(2, e).is_err());
    }

    #[test]
    fn gl7_designation() {
        let s = gl7_scenario(None).unwrap();
        assert_eq!(s.candidates.len(), 9);
        for c in s.cubics.iter().chain(&s.quartics) {
            assert!(is_invariant(&s.group, c).unwrap());
        }
        // f_i avoids x_{4+i}; g_i involves only x_{4+i} among x5..x7
        for i in 0..3 {
            assert!(s.cubics[i].terms().iter().all(|(m, _)| m[4 + i] == 0));
            assert_eq!(s.quartics[i].leading_monomial().unwrap()[4 + i], 4);
        }
    }
}
