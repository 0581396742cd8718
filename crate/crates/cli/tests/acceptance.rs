//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use sepbound_core::bounds::thm34_bound;
use sepbound_core::catalog;
use sepbound_core::constructions::{cp_triangle, gl7_scenario, removal_checks, v2_candidates};
use sepbound_core::gallery::{gallery, run_gallery, NAMES};
use sepbound_core::invariants::minimal_generator_profile;
use sepbound_core::io::{poly_to_json, GroupSpecFile};
use sepbound_core::poset::oracle;
use sepbound_core::report::{analyze, AnalysisOptions};
use sepbound_core::{verify_separating, Field, MultiPoly, VerifyConfig};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn char0() -> AnalysisOptions {
    AnalysisOptions { characteristic: Some(0), ..AnalysisOptions::default() }
}

fn s3_poset() -> Outcome {
    let a = analyze(&catalog::s3_perm(), &char0()).map_err(|e| e.to_string())?;
    let layers: Vec<usize> = a.poset.layer_sizes().iter().map(|&(_, n)| n).collect();
    ensure(a.poset.len() == 16, || format!("{} nodes", a.poset.len()))?;
    ensure(layers == [6, 9, 1], || format!("layers {layers:?}"))?;
    let betti = a.betti_above_bottom();
    ensure(betti == Some(vec![0, 4]), || format!("betti above bottom {betti:?}"))?;
    ensure(a.homology.q == BTreeSet::from([3]), || format!("Q = {:?}", a.homology.q))?;
    ensure(a.shelling.verified, || "shelling not verified".into())?;
    Ok(format!("16 nodes, layers {layers:?}, betti_1 = 4, Q = {{3}}, {} facets shelled", a.shelling.facets))
}

fn s3_diagonal() -> Outcome {
    let mut parts = Vec::new();
    for n in [1usize, 2] {
        let g = catalog::s3_diag(&Field::rationals(), n).map_err(|e| e.to_string())?;
        let a = analyze(&g, &AnalysisOptions { shelling: false, ..char0() }).map_err(|e| e.to_string())?;
        let (lb, thm) = (a.lower_bound(), a.bounds.bound_thm34);
        ensure(lb == 5 * n - 2 && thm == 4 * n - 1, || format!("n = {n}: lower bound {lb}, thm34 {thm}"))?;
        parts.push(format!("n={n}: {lb}/{thm}"));
    }
    Ok(format!("lower bound / thm34 bound {}", parts.join(", ")))
}

fn c2c2() -> Outcome {
    let g = catalog::c2c2_2n1(2).map_err(|e| e.to_string())?;
    let a = analyze(&g, &AnalysisOptions { shelling: false, ..char0() }).map_err(|e| e.to_string())?;
    let c = &a.classification;
    ensure(c.generating_r == 3, || format!("r = {}", c.generating_r))?;
    ensure(c.r_star == 4, || format!("r* = {}", c.r_star))?;
    ensure((1..4).all(|r| !c.is_rigid(r)) && c.is_rigid(4), || format!("rigidity {:?}", c.rigid_by_minimal))?;
    ensure(a.bounds.bound_thm34 == 8, || format!("thm34 {}", a.bounds.bound_thm34))?;
    Ok("r = 3, r* = 4, rigid only from 4, thm34 = 8".into())
}

fn triangle() -> Outcome {
    let mut parts = Vec::new();
    for (p, n) in [(2u32, 2usize), (3, 2), (3, 3), (5, 3), (5, 4)] {
        let (g, t) = cp_triangle(p, n).map_err(|e| e.to_string())?;
        let cands = t.candidates();
        let rep = verify_separating(&g, &cands, &VerifyConfig::with_extensions(&[1])).map_err(|e| e.to_string())?;
        ensure(rep.is_separating(), || format!("p = {p}, n = {n}: not separating"))?;
        let a = analyze(&g, &AnalysisOptions { shelling: false, ..AnalysisOptions::default() })
            .map_err(|e| e.to_string())?;
        let floor = thm34_bound(&a.classification, n).bound;
        ensure(cands.len() == 2 * n - 2 && floor == 2 * n - 2, || {
            format!("p = {p}, n = {n}: {} candidates, floor {floor}", cands.len())
        })?;
        let removals = removal_checks(&g, &cands, &VerifyConfig::default()).map_err(|e| e.to_string())?;
        for r in &removals {
            ensure(r.report.witness().is_some(), || {
                format!("p = {p}, n = {n}: dropping {} leaves a separating set", r.removed)
            })?;
        }
        let ext: Vec<u32> = removals.iter().filter_map(|r| r.refuted_at).collect();
        parts.push(format!("({p},{n}) size {} witnesses at {ext:?}", cands.len()));
    }
    Ok(parts.join("; "))
}

fn v2() -> Outcome {
    let mut parts = Vec::new();
    for (p, n) in [(2u32, 2usize), (3, 2), (3, 3)] {
        let v = v2_candidates(p, n).map_err(|e| e.to_string())?;
        ensure(v.relations[0].vanishes && v.relations[1].vanishes, || format!("p = {p}, n = {n}: relation fails"))?;
        ensure(v.candidates.len() == 3 * n - 1, || format!("{} candidates", v.candidates.len()))?;
        let rep = verify_separating(&v.group, &v.candidates, &VerifyConfig::with_extensions(&[1, 2]))
            .map_err(|e| e.to_string())?;
        ensure(rep.is_separating(), || format!("p = {p}, n = {n}: not separating"))?;
        let a = analyze(&v.group, &AnalysisOptions { shelling: false, ..AnalysisOptions::default() })
            .map_err(|e| e.to_string())?;
        ensure(a.lower_bound() == 3 * n - 1, || format!("p = {p}, n = {n}: lower bound {}", a.lower_bound()))?;
        parts.push(format!("({p},{n}) {} = bound", 3 * n - 1));
    }
    Ok(parts.join("; "))
}

fn gl7() -> Outcome {
    let cfg = VerifyConfig::with_extensions(&[1, 2]);
    let s = gl7_scenario(Some(&cfg)).map_err(|e| e.to_string())?;
    let g = &s.group;
    ensure(g.order() == 16, || format!("|G| = {}", g.order()))?;
    let profile = minimal_generator_profile(g, 5, 5).map_err(|e| e.to_string())?;
    ensure(profile == [4, 0, 3, 3, 1], || format!("profile {profile:?}"))?;
    let a =
        analyze(g, &AnalysisOptions { shelling: false, ..AnalysisOptions::default() }).map_err(|e| e.to_string())?;
    ensure(a.classification.minimal_codims().contains(&3), || "no codim-3 minimal subspace".into())?;
    ensure(a.lower_bound() == 9, || format!("lower bound {}", a.lower_bound()))?;
    let degrees: Vec<Option<u32>> = s.candidates.iter().map(MultiPoly::total_degree).collect();
    let shape = degrees[..8] == [Some(1), Some(1), Some(1), Some(1), Some(3), Some(3), Some(4), Some(4)]
        && !s.candidates[8].is_homogeneous()
        && s.candidates.len() == 9;
    ensure(shape, || format!("candidate degrees {degrees:?}"))?;
    let rep = s.report.as_ref().ok_or("no report")?;
    ensure(rep.is_separating(), || "nine candidates do not separate".into())?;
    Ok(format!("|G| = 16, profile {profile:?}, lower bound 9, nine invariants separate over F2 and F4"))
}

fn properties() -> Outcome {
    let mut cases: Vec<(&str, BTreeMap<String, u32>)> = NAMES.iter().map(|&n| (n, BTreeMap::new())).collect();
    for (name, k, v) in [("s3-diag-n", "n", 1), ("c2c2-2n1", "n", 1), ("cp-vn", "n", 2), ("cp-v2-vec", "p", 2)] {
        cases.push((name, BTreeMap::from([(k.to_owned(), v)])));
    }
    let mut oracle_checked = 0;
    for (name, params) in &cases {
        let entry = gallery(name, params).map_err(|e| e.to_string())?;
        let run =
            run_gallery(entry, &VerifyConfig::default(), &AnalysisOptions::default()).map_err(|e| e.to_string())?;
        let a = &run.analysis;
        let (g, p, c, d) = (&a.group, &a.poset, &a.classification, a.group.dim());
        for r in 1..=d {
            ensure(p.connectivity_in_codim(r) == g.is_r_reflection_group(r), || {
                format!("{name}: connectivity and reflection generation differ at r = {r}")
            })?;
        }
        ensure(!a.homology.q.contains(&(2 * d)), || format!("{name}: 2d in Q"))?;
        let thm = thm34_bound(c, d);
        ensure(thm.degrees.iter().all(|q| a.homology.q.contains(q)), || format!("{name}: {:?} not in Q", thm.degrees))?;
        if c.is_rigid_reflection_group() {
            ensure(a.homology.q == BTreeSet::from([d]), || format!("{name}: rigid but Q = {:?}", a.homology.q))?;
        }
        if a.shelling.verified {
            ensure(a.shelling.top_degree_only == Some(true), || format!("{name}: shelled but homology below the top"))?;
        }
        ensure(c.divergences().is_empty(), || format!("{name}: rigidity criteria diverge at {:?}", c.divergences()))?;
        if let (Some(s), Some(cands)) = (&run.separation, &run.entry.candidates) {
            if s.is_separating() {
                ensure(cands.len() >= a.lower_bound(), || {
                    format!("{name}: {} separating below the bound", cands.len())
                })?;
            }
        }
        if g.order() <= 8 && d <= 5 {
            let cmp = oracle::compare(g, &a.lattice, p);
            ensure(cmp.agrees(), || format!("{name}: geometric oracle disagrees: {cmp:?}"))?;
            oracle_checked += 1;
        }
    }
    Ok(format!("{} gallery cases, {oracle_checked} oracle comparisons", cases.len()))
}

fn negative_control() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let v = v2_candidates(3, 2).map_err(|e| e.to_string())?;
    let group = dir.path().join("group.json");
    let cands = dir.path().join("coords.json");
    let spec = GroupSpecFile::from_group(&v.group, Some("C3 on V2+V2"));
    std::fs::write(&group, serde_json::to_string_pretty(&spec).unwrap()).map_err(|e| e.to_string())?;
    let xs: Vec<serde_json::Value> = v.candidates[..2].iter().map(poly_to_json).collect();
    std::fs::write(&cands, serde_json::json!({ "candidates": xs }).to_string()).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_sepbound"))
        .args(["separating", "verify", "--witness", "--extensions", "1", "--group"])
        .arg(&group)
        .arg("--candidates")
        .arg(&cands)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(2), || format!("exit {:?}: {stderr}", out.status.code()))?;
    let report: serde_json::Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    let w = &report["extensions"][0]["witness"];
    ensure(w["a"].is_array() && w["b"].is_array() && w["a"] != w["b"], || format!("witness {w}"))?;
    Ok(format!("exit 2, {}", stderr.trim()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("S3 permutation poset, homology, Q and shelling", Duration::from_secs(5), s3_poset),
        ("S3 diagonal bounds, n = 1, 2", Duration::from_secs(30), s3_diagonal),
        ("C2 x C2 on a 5-space: classification and thm34 bound", Duration::from_secs(5), c2c2),
        ("Cp on Vn: triangle sums separate, are tight, and are irredundant", Duration::from_secs(60), triangle),
        ("Cp on V2^n: relations vanish, 3n-1 sums separate and meet the bound", Duration::from_secs(120), v2),
        ("GL7(F2): order, profile, bound 9, nine separating invariants", Duration::from_secs(600), gl7),
        ("property suites over the gallery", Duration::from_secs(600), properties),
        ("negative control exits 2 with a witness", Duration::from_secs(60), negative_control),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} [{elapsed:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
