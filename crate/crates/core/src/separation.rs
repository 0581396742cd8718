//! Orbit-separation verification over finite extensions of the ground field.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::FiniteMatrixGroup;
use crate::invariants::is_invariant;
use crate::poly::{CompiledPoly, MultiPoly};

pub const DEFAULT_POINT_BUDGET: u64 = 1 << 24;
pub const DEFAULT_EXTENSIONS: [u32; 3] = [1, 2, 3];
const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overflow {
    /// Skip extensions whose point count exceeds the budget.
    Skip,
    /// Check a seeded random sample instead.
    Sample,
    /// Report a budget error.
    Fail,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub extensions: Vec<u32>,
    pub budget: u64,
    pub overflow: Overflow,
    pub seed: u64,
    pub samples: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            extensions: DEFAULT_EXTENSIONS.to_vec(),
            budget: DEFAULT_POINT_BUDGET,
            overflow: Overflow::Sample,
            seed: 0,
            samples: 1 << 16,
        }
    }
}

impl VerifyConfig {
    pub fn with_extensions(extensions: &[u32]) -> VerifyConfig {
        VerifyConfig { extensions: extensions.to_vec(), ..VerifyConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Coordinates of two points in distinct orbits, written in the extension field.
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Separating,
    NotSeparating {
        witness: Witness,
    },
    /// No collision among sampled points; not a proof.
    ProbablySeparating {
        samples: u64,
        seed: u64,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionResult {
    pub degree: u32,
    pub field: String,
    pub points: u64,
    pub orbits: u64,
    /// `Σ |orbit|` over the orbits met; equals `points` for exhaustive runs.
    pub orbit_size_sum: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub candidates: Vec<String>,
    pub extensions: Vec<ExtensionResult>,
}

impl SeparationReport {
    /// Exhaustively separating at every requested degree.
    pub fn is_separating(&self) -> bool {
        self.extensions.iter().all(|e| matches!(e.verdict, Verdict::Separating))
    }

    pub fn witness(&self) -> Option<(u32, &Witness)> {
        self.extensions.iter().find_map(|e| match &e.verdict {
            Verdict::NotSeparating { witness } => Some((e.degree, witness)),
            _ => None,
        })
    }

    pub fn is_refuted(&self) -> bool {
        self.witness().is_some()
    }
}

/// The orbit representatives of a set of points of `F_{q^e}^d`.
struct PointSpace {
    big: FiniteField,
    dim: usize,
    /// Least encoding in each orbit met, ascending.
    reps: Vec<u64>,
    points: u64,
    orbit_size_sum: u64,
    sampled: bool,
}

fn field_label(ff: &FiniteField) -> String {
    if ff.degree() == 1 {
        format!("F_{}", ff.characteristic())
    } else {
        format!("F_{}^{}", ff.characteristic(), ff.degree())
    }
}

fn format_element(ff: &FiniteField, a: u32) -> String {
    if ff.degree() == 1 {
        return a.to_string();
    }
    let terms: Vec<String> = ff
        .coefficients(a)
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl PointSpace {
    fn decode(&self, mut x: u64) -> Vec<u32> {
        let q = self.big.size() as u64;
        (0..self.dim)
            .map(|_| {
                let c = (x % q) as u32;
                x /= q;
                c
            })
            .collect()
    }

    fn build(g: &FiniteMatrixGroup, e: u32, cfg: &VerifyConfig) -> Result<std::result::Result<PointSpace, String>> {
        let small =
            g.field().finite().ok_or_else(|| Error::InvalidField("verification needs a finite field".into()))?;
        let big = FiniteField::new(small.characteristic(), small.degree() * e, None)?;
        let emb = small.embedding_into(&big)?;
        let d = g.dim();
        let q = big.size() as u64;
        let total = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(q));
        let mats: Vec<Vec<u32>> =
            g.elements().iter().map(|m| m.data().iter().map(|s| emb[s.as_fin() as usize]).collect()).collect();
        let canonical = |x: u64| -> (u64, u64) {
            let mut v = Vec::with_capacity(d);
            let mut y = x;
            for _ in 0..d {
                v.push((y % q) as u32);
                y /= q;
            }
            let mut best = u64::MAX;
            let mut stab = 0;
            for m in &mats {
                let mut code = 0u64;
                for i in (0..d).rev() {
                    let mut s = 0u32;
                    for j in 0..d {
                        s = big.add(s, big.mul(m[i * d + j], v[j]));
                    }
                    code = code * q + s as u64;
                }
                best = best.min(code);
                if code == x {
                    stab += 1;
                }
            }
            (best, stab)
        };
        let order = g.order() as u64;
        match total {
            Some(n) if n <= cfg.budget => {
                let chunks: Vec<(Vec<u64>, u64)> = (0..n.div_ceil(CHUNK))
                    .into_par_iter()
                    .map(|c| {
                        let mut reps = Vec::new();
                        let mut sum = 0;
                        for x in c * CHUNK..((c + 1) * CHUNK).min(n) {
                            let (rep, stab) = canonical(x);
                            if rep == x {
                                reps.push(x);
                                sum += order / stab;
                            }
                        }
                        (reps, sum)
                    })
                    .collect();
                let orbit_size_sum = chunks.iter().map(|c| c.1).sum();
                let reps = chunks.into_iter().flat_map(|c| c.0).collect();
                Ok(Ok(PointSpace { big, dim: d, reps, points: n, orbit_size_sum, sampled: false }))
            }
            _ => match cfg.overflow {
                Overflow::Skip => Ok(Err(format!("{}^{d} points exceed the budget {}", field_label(&big), cfg.budget))),
                Overflow::Fail => {
                    Err(Error::Budget(format!("{}^{d} points exceed the budget {}", field_label(&big), cfg.budget)))
                }
                Overflow::Sample => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((e as u64) << 32));
                    let samples: Vec<u64> = (0..cfg.samples)
                        .map(|_| (0..d).rev().fold(0u64, |acc, _| acc * q + rng.random_range(0..q)))
                        .collect();
                    let mut found: Vec<(u64, u64)> = samples.par_iter().map(|&x| canonical(x)).collect();
                    found.sort_unstable();
                    found.dedup_by_key(|r| r.0);
                    let orbit_size_sum = found.iter().map(|r| {
                        // stabilizer of the representative equals that of the sample
                        order / r.1
                    });
                    let orbit_size_sum = orbit_size_sum.sum();
                    let reps = found.into_iter().map(|r| r.0).collect();
                    Ok(Ok(PointSpace { big, dim: d, reps, points: cfg.samples, orbit_size_sum, sampled: true }))
                }
            },
        }
    }

    /// Values of a compiled polynomial at every representative.
    fn values(&self, p: &CompiledPoly) -> Vec<u32> {
        let maxe = p.max_exponent();
        self.reps
            .par_iter()
            .map(|&x| {
                let coords = self.decode(x);
                let powers: Vec<Vec<u32>> = coords
                    .iter()
                    .map(|&c| {
                        let mut row = Vec::with_capacity(maxe + 1);
                        let mut acc = 1;
                        for _ in 0..=maxe {
                            row.push(acc);
                            acc = self.big.mul(acc, c);
                        }
                        row
                    })
                    .collect();
                p.eval_powers(&self.big, &powers)
            })
            .collect()
    }

    /// First pair of representatives sharing all value columns, in representative order.
    fn collision(&self, columns: &[&[u32]]) -> Option<(usize, usize)> {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::with_capacity(self.reps.len());
        for i in 0..self.reps.len() {
            let key: Vec<u32> = columns.iter().map(|c| c[i]).collect();
            if let Some(&j) = seen.get(&key) {
                return Some((j, i));
            }
            seen.insert(key, i);
        }
        None
    }

    fn witness(&self, i: usize, j: usize, columns: &[&[u32]]) -> Witness {
        let fmt = |x: u64| self.decode(x).into_iter().map(|c| format_element(&self.big, c)).collect();
        Witness {
            a: fmt(self.reps[i]),
            b: fmt(self.reps[j]),
            values: columns.iter().map(|c| format_element(&self.big, c[i])).collect(),
        }
    }

    fn result(&self, e: u32, verdict: Verdict) -> ExtensionResult {
        ExtensionResult {
            degree: e,
            field: field_label(&self.big),
            points: self.points,
            orbits: self.reps.len() as u64,
            orbit_size_sum: self.orbit_size_sum,
            verdict,
        }
    }

    fn judge(&self, e: u32, columns: &[&[u32]], cfg: &VerifyConfig) -> ExtensionResult {
        let verdict = match self.collision(columns) {
            Some((i, j)) => Verdict::NotSeparating { witness: self.witness(i, j, columns) },
            None if self.sampled => Verdict::ProbablySeparating { samples: cfg.samples, seed: cfg.seed },
            None => Verdict::Separating,
        };
        self.result(e, verdict)
    }
}

fn check_candidates(g: &FiniteMatrixGroup, candidates: &[MultiPoly]) -> Result<()> {
    for (i, c) in candidates.iter().enumerate() {
        if c.field() != g.field() || c.nvars() != g.dim() {
            return Err(Error::DimensionMismatch(format!("candidate {i} does not live on this representation")));
        }
        if !is_invariant(g, c)? {
            return Err(Error::Precondition(format!("candidate {i} ({c}) is not invariant")));
        }
    }
    Ok(())
}

/// Checks that equal candidate values force equal orbits over each `F_{q^e}`.
pub fn verify_separating(
    g: &FiniteMatrixGroup,
    candidates: &[MultiPoly],
    cfg: &VerifyConfig,
) -> Result<SeparationReport> {
    check_candidates(g, candidates)?;
    let mut extensions = Vec::new();
    for &e in &cfg.extensions {
        let space = match PointSpace::build(g, e, cfg)? {
            Ok(s) => s,
            Err(reason) => {
                let small = g.field().finite().expect("checked finite");
                let label = format!("F_{}^{}", small.characteristic(), small.degree() * e);
                extensions.push(ExtensionResult {
                    degree: e,
                    field: label,
                    points: 0,
                    orbits: 0,
                    orbit_size_sum: 0,
                    verdict: Verdict::Skipped { reason },
                });
                continue;
            }
        };
        let compiled = candidates.iter().map(|c| c.compile(&space.big)).collect::<Result<Vec<_>>>()?;
        let cols: Vec<Vec<u32>> = compiled.iter().map(|c| space.values(c)).collect();
        let refs: Vec<&[u32]> = cols.iter().map(Vec::as_slice).collect();
        extensions.push(space.judge(e, &refs, cfg));
    }
    Ok(SeparationReport { candidates: candidates.iter().map(ToString::to_string).collect(), extensions })
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_subset(chosen: &mut [usize], n: usize) -> bool {
    let k = chosen.len();
    for i in (0..k).rev() {
        if chosen[i] < n - k + i {
            chosen[i] += 1;
            for j in i + 1..k {
                chosen[j] = chosen[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// Pool indices added to the base, and the full verification.
    Found { pool_indices: Vec<usize>, report: SeparationReport },
    /// Every subset of the requested size was rejected.
    Exhausted { tried: u64 },
}

/// Depth-first search over subsets of `pool` completing `base` to `target_size`
/// candidates. Leaves are screened over the ground field, then verified at every
/// configured extension. Subsets are visited in lexicographic index order.
pub fn search_separating(
    g: &FiniteMatrixGroup,
    base: &[MultiPoly],
    pool: &[MultiPoly],
    target_size: usize,
    max_leaves: u64,
    cfg: &VerifyConfig,
) -> Result<SearchOutcome> {
    check_candidates(g, base)?;
    check_candidates(g, pool)?;
    if target_size < base.len() || target_size - base.len() > pool.len() {
        return Ok(SearchOutcome::Exhausted { tried: 0 });
    }
    let screen_cfg = VerifyConfig { extensions: vec![1], overflow: Overflow::Fail, ..cfg.clone() };
    let space = PointSpace::build(g, 1, &screen_cfg)?.expect("fail mode never skips");
    let col = |p: &MultiPoly| -> Result<Vec<u32>> { Ok(space.values(&p.compile(&space.big)?)) };
    let base_cols = base.iter().map(col).collect::<Result<Vec<_>>>()?;
    let pool_cols = pool.iter().map(col).collect::<Result<Vec<_>>>()?;
    let k = target_size - base.len();
    let mut tried = 0u64;
    let mut chosen: Vec<usize> = (0..k).collect();
    loop {
        tried += 1;
        if tried > max_leaves {
            return Err(Error::Budget(format!("search visited more than {max_leaves} subsets")));
        }
        let mut refs: Vec<&[u32]> = base_cols.iter().map(Vec::as_slice).collect();
        refs.extend(chosen.iter().map(|&i| pool_cols[i].as_slice()));
        if space.collision(&refs).is_none() {
            let mut cands: Vec<MultiPoly> = base.to_vec();
            cands.extend(chosen.iter().map(|&i| pool[i].clone()));
            let report = verify_separating(g, &cands, cfg)?;
            if report.is_separating() {
                return Ok(SearchOutcome::Found { pool_indices: chosen, report });
            }
        }
        if !next_subset(&mut chosen, pool.len()) {
            break;
        }
    }
    Ok(SearchOutcome::Exhausted { tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::Field;
    use crate::invariants::norm_trace;

    fn coords(g: &FiniteMatrixGroup) -> Vec<MultiPoly> {
        (0..g.dim()).map(|i| MultiPoly::var(g.field(), g.dim(), i)).collect()
    }

    #[test]
    fn coordinates_separate_for_trivial_group() {
        let g = catalog::trivial(&Field::prime(3).unwrap(), 2);
        let r = verify_separating(&g, &coords(&g), &VerifyConfig::default()).unwrap();
        assert!(r.is_separating());
        assert_eq!(r.extensions.len(), 3);
        assert_eq!(r.extensions[2].points, 729);
        assert!(r.extensions.iter().all(|e| e.orbit_size_sum == e.points));
    }

    #[test]
    fn empty_set_fails_with_witness() {
        let g = catalog::trivial(&Field::prime(2).unwrap(), 1);
        let r = verify_separating(&g, &[], &VerifyConfig::with_extensions(&[1])).unwrap();
        let (e, w) = r.witness().unwrap();
        assert_eq!(e, 1);
        assert_ne!(w.a, w.b);
    }

    #[test]
    fn non_invariant_candidates_rejected() {
        let g = catalog::cp_vn(3, 2).unwrap();
        let x1 = MultiPoly::var(g.field(), 2, 0);
        assert!(matches!(verify_separating(&g, &[x1], &VerifyConfig::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn orbit_sizes_divide_and_sum() {
        let g = catalog::cp_vn(3, 3).unwrap();
        let x3 = MultiPoly::var(g.field(), 3, 2);
        let (n1, _) = norm_trace(&g, g.generators()[0], &MultiPoly::var(g.field(), 3, 0)).unwrap();
        let r = verify_separating(&g, &[x3, n1], &VerifyConfig::with_extensions(&[1, 2])).unwrap();
        for e in &r.extensions {
            assert_eq!(e.orbit_size_sum, e.points);
        }
        assert!(r.is_refuted());
    }

    #[test]
    fn budget_modes() {
        let g = catalog::trivial(&Field::prime(2).unwrap(), 3);
        let c = coords(&g);
        let skip =
            VerifyConfig { extensions: vec![1, 2], budget: 10, overflow: Overflow::Skip, ..VerifyConfig::default() };
        let r = verify_separating(&g, &c, &skip).unwrap();
        assert!(matches!(r.extensions[1].verdict, Verdict::Skipped { .. }));
        let fail = VerifyConfig { overflow: Overflow::Fail, ..skip.clone() };
        assert!(matches!(verify_separating(&g, &c, &fail), Err(Error::Budget(_))));
        let sample = VerifyConfig { overflow: Overflow::Sample, samples: 100, seed: 7, ..skip };
        let r1 = verify_separating(&g, &c, &sample).unwrap();
        let r2 = verify_separating(&g, &c, &sample).unwrap();
        assert!(matches!(r1.extensions[1].verdict, Verdict::ProbablySeparating { .. }));
        assert_eq!(r1.extensions, r2.extensions);
        // sampling still finds collisions for a bad set
        let r = verify_separating(&g, &c[..1], &sample).unwrap();
        assert!(r.is_refuted());
    }

    #[test]
    fn search_finds_coordinates() {
        let g = catalog::trivial(&Field::prime(2).unwrap(), 2);
        let pool = coords(&g);
        let x = &pool[0];
        let pool = vec![x.pow(2), pool[1].clone(), x.mul(&pool[1])];
        match search_separating(&g, std::slice::from_ref(x), &pool, 2, 100, &VerifyConfig::with_extensions(&[1, 2]))
            .unwrap()
        {
            SearchOutcome::Found { pool_indices, .. } => assert_eq!(pool_indices, vec![1]),
            other => panic!("{other:?}"),
        }
        let out = search_separating(&g, &[], &pool[..1], 1, 100, &VerifyConfig::default()).unwrap();
        assert!(matches!(out, SearchOutcome::Exhausted { tried: 1 }));
    }
}
