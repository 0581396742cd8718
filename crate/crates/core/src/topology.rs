//! Order complexes and reduced simplicial homology with field coefficients.

use std::collections::HashMap;

use num::{BigRational, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::poset::FinitePoset;

pub const DEFAULT_CHAIN_BUDGET: usize = 1_000_000;

/// Simplicial complex of chains. Each face lists its vertices in ascending index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    vertices: usize,
    /// `faces[k]` holds the `k`-simplices, sorted.
    faces: Vec<Vec<Vec<u32>>>,
}

impl OrderComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Dimension, `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn faces(&self, k: usize) -> &[Vec<u32>] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    /// Face counts `f_0, f_1, …`.
    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Maximal faces, in (dimension, lexicographic) order.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for k in 0..self.faces.len() {
            let covered: std::collections::HashSet<Vec<u32>> = self
                .faces
                .get(k + 1)
                .into_iter()
                .flatten()
                .flat_map(|f| (0..f.len()).map(move |i| drop_index(f, i)))
                .collect();
            out.extend(self.faces[k].iter().filter(|f| !covered.contains(*f)).cloned());
        }
        out
    }

    /// `Σ_{k ≥ -1} (-1)^k f_k` with `f_{-1} = 1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut chi = -1i64;
        for (k, f) in self.faces.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi += sign * f.len() as i64;
        }
        chi
    }
}

fn drop_index(face: &[u32], i: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(face.len() - 1);
    out.extend_from_slice(&face[..i]);
    out.extend_from_slice(&face[i + 1..]);
    out
}

/// Enumerates all chains of `p`, failing once more than `budget` faces appear.
pub fn order_complex<P: FinitePoset + ?Sized>(p: &P, budget: usize) -> Result<OrderComplex> {
    let n = p.size();
    let up: Vec<Vec<u32>> = (0..n).map(|a| (0..n).filter(|&b| p.less(a, b)).map(|b| b as u32).collect()).collect();
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut total = 0usize;
    let mut stack: Vec<u32> = Vec::new();

    fn extend(
        up: &[Vec<u32>],
        stack: &mut Vec<u32>,
        faces: &mut Vec<Vec<Vec<u32>>>,
        total: &mut usize,
        budget: usize,
    ) -> Result<()> {
        *total += 1;
        if *total > budget {
            return Err(Error::ChainBudget(budget));
        }
        let k = stack.len() - 1;
        if faces.len() <= k {
            faces.push(Vec::new());
        }
        let mut face = stack.clone();
        face.sort_unstable();
        faces[k].push(face);
        let last = *stack.last().expect("nonempty") as usize;
        for &b in &up[last] {
            stack.push(b);
            extend(up, stack, faces, total, budget)?;
            stack.pop();
        }
        Ok(())
    }

    for v in 0..n as u32 {
        stack.push(v);
        extend(&up, &mut stack, &mut faces, &mut total, budget)?;
        stack.pop();
    }
    faces.iter_mut().for_each(|f| f.sort_unstable());
    Ok(OrderComplex { vertices: n, faces })
}

/// Reduced Betti numbers; `values[0]` is `β̃_{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub characteristic: u32,
    pub values: Vec<usize>,
}

impl BettiVector {
    pub fn get(&self, degree: isize) -> usize {
        if degree < -1 {
            return 0;
        }
        self.values.get((degree + 1) as usize).copied().unwrap_or(0)
    }

    /// Degrees `i ≥ -1` with `β̃_i ≠ 0`.
    pub fn nonzero_degrees(&self) -> Vec<isize> {
        (0..self.values.len()).filter(|&i| self.values[i] != 0).map(|i| i as isize - 1).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&b| b == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.values.iter().enumerate().map(|(i, &b)| if i % 2 == 1 { b as i64 } else { -(b as i64) }).sum()
    }
}

trait Coeff {
    type E: Clone;
    fn unit(&self, negative: bool) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `x / y`.
    fn ratio(&self, x: &Self::E, y: &Self::E) -> Self::E;
    /// `a - f·b`.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
}

struct PrimeCoeff(u64);

impl PrimeCoeff {
    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % self.0, self.0 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.0;
            }
            b = b * b % self.0;
            e >>= 1;
        }
        r
    }
}

impl Coeff for PrimeCoeff {
    type E = u64;
    fn unit(&self, negative: bool) -> u64 {
        if negative {
            self.0 - 1
        } else {
            1
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn ratio(&self, x: &u64, y: &u64) -> u64 {
        x * self.inv(*y) % self.0
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        (a + self.0 - f * b % self.0) % self.0
    }
    fn neg_mul(&self, f: &u64, b: &u64) -> u64 {
        (self.0 - f * b % self.0) % self.0
    }
}

struct RationalCoeff;

impl Coeff for RationalCoeff {
    type E = BigRational;
    fn unit(&self, negative: bool) -> BigRational {
        if negative {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn ratio(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x / y
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn neg_mul(&self, f: &BigRational, b: &BigRational) -> BigRational {
        -(f * b)
    }
}

/// Rank of a sparse matrix given by columns of `(row, ±1)` entries, by column reduction
/// on the largest row index.
fn sparse_rank<C: Coeff>(c: &C, columns: Vec<Vec<(u32, bool)>>) -> usize {
    let mut pivots: HashMap<u32, Vec<(u32, C::E)>> = HashMap::new();
    for col in columns {
        let mut v: Vec<(u32, C::E)> = col.into_iter().map(|(r, neg)| (r, c.unit(neg))).collect();
        v.sort_by_key(|e| e.0);
        loop {
            let Some((low, lowval)) = v.last().cloned() else { break };
            let Some(p) = pivots.get(&low) else {
                pivots.insert(low, v);
                break;
            };
            let f = c.ratio(&lowval, &p.last().expect("pivot nonempty").1);
            v = sub_scaled(c, &v, &f, p);
        }
    }
    pivots.len()
}

fn sub_scaled<C: Coeff>(c: &C, a: &[(u32, C::E)], f: &C::E, b: &[(u32, C::E)]) -> Vec<(u32, C::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.neg_mul(f, &b[j].1)));
            j += 1;
        } else {
            let v = c.sub_mul(&a[i].1, f, &b[j].1);
            if !c.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn boundary_columns(lower: &[Vec<u32>], upper: &[Vec<u32>]) -> Vec<Vec<(u32, bool)>> {
    let index: HashMap<&[u32], u32> = lower.iter().enumerate().map(|(i, f)| (f.as_slice(), i as u32)).collect();
    upper.iter().map(|f| (0..f.len()).map(|i| (index[drop_index(f, i).as_slice()], i % 2 == 1)).collect()).collect()
}

/// Rank of `∂_k : C_k → C_{k-1}` for `k ≥ 1`.
fn boundary_rank(c: &OrderComplex, k: usize, characteristic: u32) -> usize {
    let cols = boundary_columns(c.faces(k - 1), c.faces(k));
    if characteristic == 0 {
        sparse_rank(&RationalCoeff, cols)
    } else {
        sparse_rank(&PrimeCoeff(characteristic as u64), cols)
    }
}

/// Reduced Betti numbers over `F_p` (`characteristic = p`) or `Q` (`characteristic = 0`).
pub fn reduced_betti(c: &OrderComplex, characteristic: u32) -> Result<BettiVector> {
    if characteristic != 0 && !is_prime(characteristic as u64) {
        return Err(Error::NotPrime(characteristic as u64));
    }
    let top = c.faces.len();
    // ranks[k + 1] = rank ∂_k for k = -1..=top
    let mut ranks = vec![0usize; top + 2];
    if top > 0 {
        ranks[1] = 1;
    }
    for k in 1..top {
        ranks[k + 1] = boundary_rank(c, k, characteristic);
    }
    let mut values = Vec::with_capacity(top + 1);
    for k in -1..top as isize {
        let dim_c = if k == -1 { 1 } else { c.faces[k as usize].len() };
        values.push(dim_c - ranks[(k + 1) as usize] - ranks[(k + 2) as usize]);
    }
    Ok(BettiVector { characteristic, values })
}
