//! Named scenarios with expected results.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::constructions::{cp_triangle, gl7_scenario, v2_candidates};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{FiniteMatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::invariants::minimal_generator_profile;
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::report::{analyze, Analysis, AnalysisOptions};
use crate::separation::{verify_separating, SeparationReport, VerifyConfig};

pub const NAMES: [&str; 8] =
    ["trivial-d", "c2-sign", "s3-perm", "s3-diag-n", "c2c2-2n1", "cp-vn", "cp-v2-vec", "gl7-f2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the published source.
    Published,
    Trivial,
    /// Computed by an independent route.
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub key: String,
    pub expected: Value,
    pub provenance: Provenance,
    pub basis: String,
}

fn expect(key: &str, expected: Value, provenance: Provenance, basis: &str) -> Expectation {
    Expectation { key: key.into(), expected, provenance, basis: basis.into() }
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub params: BTreeMap<String, u32>,
    pub group: FiniteMatrixGroup,
    pub candidates: Option<Vec<MultiPoly>>,
    /// Extension degrees the candidates are verified over.
    pub extensions: Vec<u32>,
    /// Highest degree for the minimal generator profile, when expected.
    pub profile_degree: Option<u32>,
    pub expectations: Vec<Expectation>,
}

fn param(params: &BTreeMap<String, u32>, key: &str, default: u32) -> u32 {
    params.get(key).copied().unwrap_or(default)
}

fn field_param(params: &BTreeMap<String, u32>) -> Result<Field> {
    match param(params, "p", 3) {
        0 => Ok(Field::rationals()),
        p => Field::prime(p),
    }
}

fn coordinates(g: &FiniteMatrixGroup) -> Vec<MultiPoly> {
    (0..g.dim()).map(|i| MultiPoly::var(g.field(), g.dim(), i)).collect()
}

/// Builds a gallery entry. Recognized parameters: `d` for trivial-d, `n` for the
/// families, `p` for the prime (0 selects the rationals where allowed).
pub fn gallery(name: &str, params: &BTreeMap<String, u32>) -> Result<GalleryEntry> {
    use Provenance::*;
    let mut used = params.clone();
    let entry = match name {
        "trivial-d" => {
            let d = param(params, "d", 3) as usize;
            let f = field_param(params)?;
            let group = catalog::trivial(&f, d);
            used.insert("d".into(), d as u32);
            GalleryEntry {
                name: name.into(),
                candidates: Some(coordinates(&group)),
                extensions: vec![1, 2],
                profile_degree: Some(2),
                expectations: vec![
                    expect("order", json!(1), Trivial, "no generators"),
                    expect("poset_nodes", json!(1), Trivial, "the diagonal is the only component"),
                    expect("Q", json!([d]), Trivial, "a single component is Cohen-Macaulay"),
                    expect("bound", json!(d), Trivial, "coordinates are needed"),
                    expect("generator_profile", json!([d, 0]), Trivial, "the invariant ring is polynomial"),
                    expect("separating", json!(true), Trivial, "coordinates separate points"),
                ],
                group,
                params: used,
            }
        }
        "c2-sign" => {
            let f = field_param(params)?;
            if f.characteristic() == 2 {
                return Err(Error::Precondition("the sign action needs characteristic other than 2".into()));
            }
            let m = Matrix::from_i64(&f, &[vec![-1]])?;
            let group = FiniteMatrixGroup::close(&f, 1, &[m], DEFAULT_CLOSURE_CAP)?;
            let x2 = MultiPoly::var(&f, 1, 0).pow(2);
            GalleryEntry {
                name: name.into(),
                candidates: Some(vec![x2]),
                extensions: vec![1, 2, 3],
                profile_degree: Some(4),
                expectations: vec![
                    expect("order", json!(2), Trivial, "x -> -x"),
                    expect("poset_nodes", json!(3), Derived, "two components meeting in the origin"),
                    expect("Q", json!([1]), Derived, "the line is a rigid reflection representation"),
                    expect("bound", json!(1), Trivial, "one invariant x^2 generates"),
                    expect("generator_profile", json!([0, 1, 0, 0]), Derived, "invariants are k[x^2]"),
                    expect("separating", json!(true), Derived, "x^2 separates x from y unless y = ±x"),
                ],
                group,
                params: used,
            }
        }
        "s3-perm" => GalleryEntry {
            name: name.into(),
            group: catalog::s3_perm(),
            candidates: None,
            extensions: vec![],
            profile_degree: None,
            expectations: vec![
                expect("order", json!(6), Trivial, "symmetric group on three letters"),
                expect(
                    "poset_nodes",
                    json!(16),
                    Published,
                    "intersection poset drawing: six tops, nine middles, one bottom",
                ),
                expect("layers", json!([6, 9, 1]), Published, "intersection poset drawing"),
                expect(
                    "betti_above_bottom",
                    json!([0, 4]),
                    Published,
                    "interval above the bottom has top homology of rank four",
                ),
                expect("Q", json!([3]), Published, "rigid reflection groups give a Cohen-Macaulay separating ideal"),
                expect("bound", json!(3), Published, "rigid reflection group"),
                expect("generating_r", json!(1), Published, "generated by transpositions"),
                expect(
                    "rigid_reflection_group",
                    json!(true),
                    Published,
                    "every minimal reflecting subspace is a hyperplane",
                ),
                expect(
                    "shelling_verified",
                    json!(true),
                    Derived,
                    "glued lexicographic shelling, checked facet by facet",
                ),
            ],
            params: used,
        },
        "s3-diag-n" => {
            let n = param(params, "n", 2) as usize;
            used.insert("n".into(), n as u32);
            let group = catalog::s3_diag(&Field::rationals(), n)?;
            let mut expectations = vec![
                expect("order", json!(6), Trivial, "diagonal copy of the symmetric group"),
                expect("bound", json!(5 * n - 2), Published, "at least 5n-2 elements"),
                expect("bound_thm34", json!(4 * n - 1), Published, "the minimal reflecting bound is 4n-1"),
            ];
            if n == 2 {
                expectations.push(expect(
                    "Q",
                    json!([6, 7, 8]),
                    Published,
                    "degrees 5n-2 and 4n-1 plus the component degree d",
                ));
            }
            GalleryEntry {
                name: name.into(),
                group,
                candidates: None,
                extensions: vec![],
                profile_degree: None,
                expectations,
                params: used,
            }
        }
        "c2c2-2n1" => {
            let n = param(params, "n", 2) as usize;
            used.insert("n".into(), n as u32);
            let group = catalog::c2c2_2n1(n)?;
            let d = 2 * n + 1;
            let connected: Vec<bool> = (1..=d).map(|r| r > n).collect();
            GalleryEntry {
                name: name.into(),
                group,
                candidates: None,
                extensions: vec![],
                profile_degree: None,
                expectations: vec![
                    expect("order", json!(4), Published, "C2 x C2"),
                    expect("generating_r", json!(n + 1), Published, "generated by (n+1)-reflections"),
                    expect("r_star", json!(2 * n), Published, "the product fixes a subspace of codimension 2n"),
                    expect("rigid_reflection_group", json!(false), Published, "not rigid"),
                    expect("bound_thm34", json!(d + 2 * n - 1), Derived, "d + r* - 1"),
                    expect(
                        "connected_in_codim",
                        json!(connected),
                        Derived,
                        "components meet in codimension n+1 at best",
                    ),
                ],
                params: used,
            }
        }
        "cp-vn" => {
            let p = param(params, "p", 3);
            let n = param(params, "n", 3) as usize;
            used.insert("p".into(), p);
            used.insert("n".into(), n as u32);
            let (group, t) = cp_triangle(p, n)?;
            let q: Vec<usize> = if n == 2 { vec![2] } else { vec![n, 2 * n - 2] };
            GalleryEntry {
                name: name.into(),
                group,
                candidates: Some(t.candidates()),
                extensions: vec![1],
                profile_degree: None,
                expectations: vec![
                    expect("order", json!(p), Trivial, "cyclic of prime order"),
                    expect("generating_r", json!(n - 1), Derived, "every nontrivial power fixes the same line"),
                    expect("r_star", json!(n - 1), Derived, "the fixed line is the only proper reflecting subspace"),
                    expect("Q", json!(q), Derived, "components give d, the fixed line gives 2n-2"),
                    expect("bound", json!(2 * n - 2), Published, "the triangle sums are optimal"),
                    expect("bound_thm34", json!(2 * n - 2), Derived, "d + r* - 1"),
                    expect("candidate_count", json!(2 * n - 2), Derived, "the anti-diagonal i + j = 2n-1 is empty"),
                    expect("separating", json!(true), Published, "the diagonal sums separate"),
                ],
                params: used,
            }
        }
        "cp-v2-vec" => {
            let p = param(params, "p", 3);
            let n = param(params, "n", 2) as usize;
            used.insert("p".into(), p);
            used.insert("n".into(), n as u32);
            let v = v2_candidates(p, n)?;
            GalleryEntry {
                name: name.into(),
                group: v.group,
                candidates: Some(v.candidates),
                extensions: vec![1, 2],
                profile_degree: None,
                expectations: vec![
                    expect("order", json!(p), Trivial, "cyclic of prime order"),
                    expect("bound", json!(3 * n - 1), Published, "at least 3n-1 elements"),
                    expect("bound_thm34", json!(3 * n - 1), Derived, "d + r* - 1 with r* = n"),
                    expect("candidate_count", json!(3 * n - 1), Published, "n coordinates and 2n-1 diagonal sums"),
                    expect("separating", json!(true), Published, "coordinates and diagonal sums separate"),
                ],
                params: used,
            }
        }
        "gl7-f2" => {
            let s = gl7_scenario(None)?;
            GalleryEntry {
                name: name.into(),
                group: s.group,
                candidates: Some(s.candidates),
                extensions: vec![1, 2],
                profile_degree: Some(5),
                expectations: vec![
                    expect("order", json!(16), Published, "isomorphic to C2^4"),
                    expect("generator_profile", json!([4, 0, 3, 3, 1]), Published, "generator degrees 1, 3, 4, 5"),
                    expect(
                        "minimal_codims_include",
                        json!(3),
                        Published,
                        "a minimal reflecting subspace of codimension 3",
                    ),
                    expect("Q", json!([7, 9]), Derived, "components give 7, the codimension-3 subspace gives 9"),
                    expect("bound", json!(9), Published, "at least nine elements"),
                    expect("bound_thm34", json!(9), Derived, "d + r* - 1 = 7 + 3 - 1"),
                    expect(
                        "candidate_count",
                        json!(9),
                        Published,
                        "four coordinates, two cubics, two quartics, one sum",
                    ),
                    expect("separating", json!(true), Published, "the nine invariants separate"),
                ],
                params: used,
            }
        }
        other => return Err(Error::UnknownGallery(other.into())),
    };
    Ok(entry)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    #[serde(flatten)]
    pub expectation: Expectation,
    pub actual: Value,
    pub passed: bool,
}

pub struct GalleryRun {
    pub entry: GalleryEntry,
    pub analysis: Analysis,
    pub separation: Option<SeparationReport>,
    pub profile: Option<Vec<usize>>,
    pub results: Vec<ExpectationResult>,
}

impl GalleryRun {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn summary(&self) -> Value {
        let a = &self.analysis;
        json!({
            "name": self.entry.name,
            "params": self.entry.params,
            "order": a.group.order(),
            "dimension": a.group.dim(),
            "field": a.group.field().to_string(),
            "poset_nodes": a.poset.len(),
            "layers": a.poset.layer_sizes().iter().map(|&(_, c)| c).collect::<Vec<_>>(),
            "betti_above_bottom": a.betti_above_bottom(),
            "Q": a.homology.q,
            "bound": a.lower_bound(),
            "bound_thm34": a.bounds.bound_thm34,
            "generating_r": a.classification.generating_r,
            "r_star": a.classification.r_star,
            "shelling_verified": a.shelling.verified,
            "generator_profile": self.profile,
            "candidate_count": self.entry.candidates.as_ref().map(Vec::len),
            "separating": self.separation.as_ref().map(SeparationReport::is_separating),
            "expectations": self.results,
            "all_passed": self.all_passed(),
        })
    }

    /// One part of the output: classify, poset, homology, bounds, shelling,
    /// separating, expectations, or the whole summary.
    pub fn section(&self, name: Option<&str>) -> Result<Value> {
        let a = &self.analysis;
        Ok(match name {
            None | Some("summary") => self.summary(),
            Some("classify") => a.classification_json(),
            Some("poset") => a.poset_json(),
            Some("homology") => a.homology_json(),
            Some("bounds") => a.bounds_json(),
            Some("shelling") => a.shelling_json(),
            Some("separating") => serde_json::to_value(&self.separation).expect("serializes"),
            Some("expectations") => serde_json::to_value(&self.results).expect("serializes"),
            Some(other) => return Err(Error::Parse(format!("unknown section {other:?}"))),
        })
    }
}

fn actual(key: &str, run: &GalleryRun) -> Value {
    let a = &run.analysis;
    let c = &a.classification;
    match key {
        "order" => json!(a.group.order()),
        "poset_nodes" => json!(a.poset.len()),
        "layers" => json!(a.poset.layer_sizes().iter().map(|&(_, n)| n).collect::<Vec<_>>()),
        "betti_above_bottom" => json!(a.betti_above_bottom()),
        "Q" => json!(a.homology.q),
        "bound" => json!(a.lower_bound()),
        "bound_thm34" => json!(a.bounds.bound_thm34),
        "generating_r" => json!(c.generating_r),
        "r_star" => json!(c.r_star),
        "rigid_reflection_group" => json!(c.is_rigid_reflection_group()),
        "shelling_verified" => json!(a.shelling.verified),
        "connected_in_codim" => {
            json!((1..=a.poset.dim()).map(|r| a.poset.connectivity_in_codim(r)).collect::<Vec<_>>())
        }
        "minimal_codims_include" => json!(c.minimal_codims().into_iter().max()),
        "generator_profile" => json!(run.profile),
        "candidate_count" => json!(run.entry.candidates.as_ref().map(Vec::len)),
        "separating" => json!(run.separation.as_ref().map(SeparationReport::is_separating)),
        _ => Value::Null,
    }
}

/// Runs the full pipeline for an entry and evaluates its expectations. The
/// extension degrees in `cfg` are replaced by the entry's own.
pub fn run_gallery(entry: GalleryEntry, cfg: &VerifyConfig, opts: &AnalysisOptions) -> Result<GalleryRun> {
    let analysis = analyze(&entry.group, opts)?;
    let separation = match &entry.candidates {
        Some(c) if entry.group.field().finite().is_some() => {
            let cfg = VerifyConfig { extensions: entry.extensions.clone(), ..cfg.clone() };
            Some(verify_separating(&entry.group, c, &cfg)?)
        }
        _ => None,
    };
    let profile = match entry.profile_degree {
        Some(k) => Some(minimal_generator_profile(&entry.group, k, k)?),
        None => None,
    };
    let mut run = GalleryRun { entry, analysis, separation, profile, results: Vec::new() };
    run.results = run
        .entry
        .expectations
        .iter()
        .map(|e| {
            let actual = actual(&e.key, &run);
            let passed = match e.key.as_str() {
                "minimal_codims_include" => {
                    run.analysis.classification.minimal_codims().contains(&(e.expected.as_u64().unwrap_or(0) as usize))
                }
                _ => actual == e.expected,
            };
            ExpectationResult { expectation: e.clone(), actual, passed }
        })
        .collect();
    Ok(run)
}
