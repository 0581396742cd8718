//! Exact scalar fields: prime fields, extension fields `F_{p^k}` and the rationals.
//!
//! Finite field elements are encoded as `u32` holding the base-`p` digits of their
//! coefficient vector (digit `i` is the coefficient of `t^i`). Prime field elements
//! are plain residues.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest finite field we are willing to tabulate.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Field descriptor, as it appears in input files.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Finite { p: u32, k: u32, modulus: Option<Vec<u32>> },
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec::Finite { p, k: 1, modulus: None }
    }

    pub fn extension(p: u32, k: u32) -> Self {
        FieldSpec::Finite { p, k, modulus: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fin(u32),
    Rat(BigRational),
}

impl Scalar {
    pub fn as_fin(&self) -> u32 {
        match self {
            Scalar::Fin(a) => *a,
            Scalar::Rat(_) => panic!("rational scalar used in finite field"),
        }
    }

    pub fn as_rat(&self) -> &BigRational {
        match self {
            Scalar::Rat(a) => a,
            Scalar::Fin(_) => panic!("finite scalar used in rational field"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    size: u32,
    /// Monic modulus, coefficients from `t^0` to `t^k`. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial helpers over F_p, coefficient vectors low -> high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

fn digits_of(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

fn encode_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// True iff the monic polynomial `m` (low -> high) has no monic factor of degree
/// `1..=deg/2` over F_p. Exhaustive trial division.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for code in 0..count {
            let mut f = digits_of(code as u32, p, fd as u32);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let size = (p as u64)
            .checked_pow(k)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::InvalidField(format!("F_{p}^{k} exceeds the supported size {MAX_FIELD_SIZE}")))?
            as u32;
        if k == 1 {
            if let Some(m) = &modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::InvalidField(format!("modulus {m:?} is not monic linear")));
                }
            }
            return Ok(FiniteField { p, k, size, modulus: vec![0, 1], exp: Vec::new(), log: Vec::new() });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus {m:?} is not a monic degree-{k} polynomial over F_{p}"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(m, p));
                }
                m
            }
            None => Self::least_irreducible(p, k)?,
        };
        let mut ff = FiniteField { p, k, size, modulus, exp: Vec::new(), log: Vec::new() };
        ff.build_tables()?;
        Ok(ff)
    }

    /// Least monic irreducible of degree `k`, ordering candidates by the integer
    /// whose base-`p` digits are the lower coefficients (constant term least significant).
    pub fn least_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
        let count = (p as u64).pow(k);
        for code in 0..count {
            let mut m = digits_of(code as u32, p, k);
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(m);
            }
        }
        Err(Error::NoModulus { p, k })
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let mut da = digits_of(a, self.p, self.k);
        let mut db = digits_of(b, self.p, self.k);
        poly_trim(&mut da);
        poly_trim(&mut db);
        encode_digits(&poly_mul_mod(&da, &db, &self.modulus, self.p), self.p)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = self.size as u64 - 1;
        let factors = prime_factors(order);
        let generator = (2..self.size)
            .find(|&g| factors.iter().all(|&q| self.slow_pow(g, order / q) != 1))
            .ok_or_else(|| Error::InvalidField("no primitive element".into()))?;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let n = self.size as usize - 1;
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[if s >= n { s - n } else { s }]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.k == 1 {
            return Some(mod_inv(a, self.p));
        }
        let n = self.size as usize - 1;
        let l = self.log[a as usize] as usize;
        Some(self.exp[(n - l) % n])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.k == 1 {
            return mod_pow(a as u64, e, self.p as u64) as u32;
        }
        let n = self.size as u64 - 1;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    pub fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Coefficient vector (length `k`) of an element.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits_of(a, self.p, self.k)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.k as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::Parse(format!("{c:?} is not an element of F_{}^{}", self.p, self.k)));
        }
        Ok(encode_digits(c, self.p))
    }

    /// Images of the elements of `self` under a field embedding into `big`,
    /// indexed by element code. Sends `t` to the least root of the modulus in `big`.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Vec<u32>> {
        if big.p != self.p || !big.k.is_multiple_of(self.k) {
            return Err(Error::FieldMismatch(format!(
                "F_{}^{} does not embed in F_{}^{}",
                self.p, self.k, big.p, big.k
            )));
        }
        let root = if self.k == 1 {
            0
        } else {
            (0..big.size)
                .find(|&x| {
                    let mut acc = 0u32;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, x), c);
                    }
                    acc == 0
                })
                .ok_or_else(|| Error::FieldMismatch("modulus has no root in extension".into()))?
        };
        Ok((0..self.size)
            .map(|a| {
                let coeffs = self.coefficients(a);
                let mut acc = 0u32;
                for &c in coeffs.iter().rev() {
                    acc = big.add(big.mul(acc, root), c);
                }
                acc
            })
            .collect())
    }
}

#[derive(Debug)]
pub enum FieldKind {
    Rationals,
    Finite(FiniteField),
}

/// Shared handle on a field. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (FieldKind::Rationals, FieldKind::Rationals) => true,
            (FieldKind::Finite(a), FieldKind::Finite(b)) => a.p == b.p && a.k == b.k && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Finite(ff) if ff.k == 1 => write!(f, "F_{}", ff.p),
            FieldKind::Finite(ff) => write!(f, "F_{}^{}", ff.p, ff.k),
        }
    }
}

impl Field {
    pub fn make(spec: &FieldSpec) -> Result<Field> {
        match spec {
            FieldSpec::Rationals => Ok(Field::rationals()),
            FieldSpec::Finite { p, k, modulus } => {
                Ok(Field(Arc::new(FieldKind::Finite(FiniteField::new(*p, *k, modulus.clone())?))))
            }
        }
    }

    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::make(&FieldSpec::prime(p))
    }

    pub fn extension(p: u32, k: u32) -> Result<Field> {
        Field::make(&FieldSpec::extension(p, k))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    pub fn finite(&self) -> Option<&FiniteField> {
        match &*self.0 {
            FieldKind::Finite(ff) => Some(ff),
            FieldKind::Rationals => None,
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldKind::Rationals)
    }

    pub fn spec(&self) -> FieldSpec {
        match &*self.0 {
            FieldKind::Rationals => FieldSpec::Rationals,
            FieldKind::Finite(ff) => {
                FieldSpec::Finite { p: ff.p, k: ff.k, modulus: if ff.k == 1 { None } else { Some(ff.modulus.clone()) } }
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.finite().map_or(0, |ff| ff.p)
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        self.finite().map(|ff| ff.size as u64)
    }

    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.finite().map(|ff| (0..ff.size).map(Scalar::Fin).collect())
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(BigRational::zero()),
            FieldKind::Finite(_) => Scalar::Fin(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(BigRational::one()),
            FieldKind::Finite(_) => Scalar::Fin(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &*self.0 {
            FieldKind::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Finite(ff) => Scalar::Fin(ff.from_i64(n)),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        match &*self.0 {
            FieldKind::Rationals => Ok(Scalar::Rat(BigRational::new(num.into(), den.into()))),
            FieldKind::Finite(_) => self.div(&self.from_i64(num), &self.from_i64(den)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(x) => *x == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Finite(ff), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(ff.add(*x, *y)),
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Finite(ff), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(ff.sub(*x, *y)),
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (FieldKind::Finite(ff), Scalar::Fin(x)) => Scalar::Fin(ff.neg(*x)),
            (FieldKind::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (FieldKind::Finite(ff), Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(ff.mul(*x, *y)),
            (FieldKind::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (&*self.0, a) {
            (FieldKind::Finite(ff), Scalar::Fin(x)) => ff.inv(*x).map(Scalar::Fin).ok_or(Error::DivisionByZero),
            (FieldKind::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: u64) -> Scalar {
        match (&*self.0, a) {
            (FieldKind::Finite(ff), Scalar::Fin(x)) => Scalar::Fin(ff.pow(*x, e)),
            (FieldKind::Rationals, Scalar::Rat(x)) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= x;
                }
                Scalar::Rat(acc)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Human readable form: residues, coefficient lists, or `a/b`.
    pub fn format(&self, a: &Scalar) -> String {
        match (&*self.0, a) {
            (FieldKind::Finite(ff), Scalar::Fin(x)) if ff.k == 1 => x.to_string(),
            (FieldKind::Finite(ff), Scalar::Fin(x)) => format!("{:?}", ff.coefficients(*x)),
            (_, Scalar::Rat(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn parse_rational(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("{s:?} is not a rational number"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = BigRational::new(n, d);
        match &*self.0 {
            FieldKind::Rationals => Ok(Scalar::Rat(r)),
            FieldKind::Finite(ff) => {
                let p = BigInt::from(ff.p);
                let num = (r.numer() % &p + &p) % &p;
                let den = (r.denom() % &p + &p) % &p;
                let num = num.to_i64().ok_or_else(bad)?;
                let den = den.to_i64().ok_or_else(bad)?;
                self.from_ratio(num, den)
            }
        }
    }

    /// Sign-aware integer view of a rational scalar, used for serialization.
    pub fn rational_parts(a: &Scalar) -> Option<(BigInt, BigInt)> {
        match a {
            Scalar::Rat(r) => Some((r.numer().clone(), r.denom().abs())),
            Scalar::Fin(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(field: &Field, elems: &[Scalar]) {
        let zero = field.zero();
        let one = field.one();
        for a in elems {
            assert_eq!(field.add(a, &zero), *a);
            assert_eq!(field.mul(a, &one), *a);
            assert!(field.is_zero(&field.add(a, &field.neg(a))));
            if !field.is_zero(a) {
                assert_eq!(field.mul(a, &field.inv(a).unwrap()), one);
            }
            for b in elems {
                assert_eq!(field.add(a, b), field.add(b, a));
                assert_eq!(field.mul(a, b), field.mul(b, a));
                for c in elems {
                    assert_eq!(field.add(&field.add(a, b), c), field.add(a, &field.add(b, c)));
                    assert_eq!(field.mul(&field.mul(a, b), c), field.mul(a, &field.mul(b, c)));
                    assert_eq!(field.mul(a, &field.add(b, c)), field.add(&field.mul(a, b), &field.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)] {
            let f = Field::extension(p, k).unwrap();
            let elems = f.elements().unwrap();
            check_axioms(&f, &elems);
        }
    }

    #[test]
    fn f4_modulus_is_unique_irreducible() {
        let f = Field::extension(2, 2).unwrap();
        assert_eq!(f.finite().unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f8_least_modulus() {
        // t^3 + t + 1 precedes t^3 + t^2 + 1
        let f = Field::extension(2, 3).unwrap();
        assert_eq!(f.finite().unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn f9_supplied_modulus() {
        // t^2 + 1 has no root mod 3: 0 -> 1, 1 -> 2, 2 -> 5 = 2
        for t in 0..3u32 {
            assert_ne!((t * t + 1) % 3, 0);
        }
        let f = Field::make(&FieldSpec::Finite { p: 3, k: 2, modulus: Some(vec![1, 0, 1]) }).unwrap();
        assert_eq!(f.order(), Some(9));
        assert_eq!(Field::extension(3, 2).unwrap().finite().unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Field::prime(4).unwrap_err(), Error::NotPrime(4));
        let reducible = FieldSpec::Finite { p: 2, k: 2, modulus: Some(vec![1, 0, 1]) };
        assert!(matches!(Field::make(&reducible), Err(Error::ReducibleModulus(..))));
        let not_monic = FieldSpec::Finite { p: 3, k: 2, modulus: Some(vec![1, 0, 2]) };
        assert!(Field::make(&not_monic).is_err());
    }

    #[test]
    fn rationals_arithmetic() {
        let q = Field::rationals();
        let a = q.parse_rational("3/4").unwrap();
        let b = q.parse_rational("-1/4").unwrap();
        assert_eq!(q.add(&a, &b), q.parse_rational("1/2").unwrap());
        assert_eq!(q.format(&q.mul(&a, &b)), "-3/16");
        assert_eq!(q.inv(&q.zero()), Err(Error::DivisionByZero));
        let elems: Vec<Scalar> = ["0", "1", "-2", "7/3", "-5/9"].iter().map(|s| q.parse_rational(s).unwrap()).collect();
        check_axioms(&q, &elems);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Field::extension(2, 2).unwrap();
        let big = Field::extension(2, 4).unwrap();
        let (s, b) = (small.finite().unwrap(), big.finite().unwrap());
        let emb = s.embedding_into(b).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(emb[s.add(x, y) as usize], b.add(emb[x as usize], emb[y as usize]));
                assert_eq!(emb[s.mul(x, y) as usize], b.mul(emb[x as usize], emb[y as usize]));
            }
        }
        assert!(s.embedding_into(Field::extension(2, 3).unwrap().finite().unwrap()).is_err());
    }

    #[test]
    fn parse_into_prime_field() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.parse_rational("1/2").unwrap(), Scalar::Fin(3));
        assert_eq!(f.parse_rational("-1").unwrap(), Scalar::Fin(4));
    }
}
