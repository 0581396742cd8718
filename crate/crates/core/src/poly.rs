//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FiniteField, Scalar};

pub type Monomial = Vec<u32>;

/// Graded lexicographic order with `x_1 < x_2 < … < x_n`.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// All monomials of total degree `deg` in `n` variables, descending in graded-lex order.
pub fn monomials(n: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == 0 {
            cur[0] = left;
            out.push(cur.clone());
            cur[0] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i - 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n - 1, deg, &mut vec![0; n], &mut out);
    out
}

/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly::constant(field, nvars, field.one())
    }

    /// The coordinate `x_{i+1}`.
    pub fn var(field: &Field, nvars: usize, i: usize) -> MultiPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::monomial(field, e, field.one())
    }

    pub fn monomial(field: &Field, exps: Monomial, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(field, exps.len());
        p.add_term(exps, c);
        p
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(field: &Field, coeffs: &[Scalar]) -> MultiPoly {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: Vec<(Monomial, Scalar)>) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!("monomial {e:?} in {nvars} variables")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut t: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_cmp(b.0, a.0));
        t
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().max_by(|a, b| grlex_cmp(a, b))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn add_term(&mut self, e: Monomial, c: Scalar) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = self.field.add(v, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check(&self, other: &MultiPoly) {
        assert!(self.nvars == other.nvars && self.field == other.field, "incompatible polynomials");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(c))).collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check(other);
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.field, self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        let m = images.first().map_or(0, MultiPoly::nvars);
        let mut out = MultiPoly::zero(&self.field, m);
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&self.field, m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let pw = cache.entry((i, k)).or_insert_with(|| images[i].pow(k));
                    term = term.mul(pw);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Coefficients on the given monomial list.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<Scalar> {
        basis.iter().map(|e| self.coefficient(e)).collect()
    }

    pub fn from_coefficient_vector(field: &Field, nvars: usize, basis: &[Monomial], v: &[Scalar]) -> MultiPoly {
        let mut p = MultiPoly::zero(field, nvars);
        for (e, c) in basis.iter().zip(v) {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    /// Compiles to a form evaluable in an extension of the (finite) coefficient field.
    pub fn compile(&self, big: &FiniteField) -> Result<CompiledPoly> {
        let small = self.field.finite().ok_or_else(|| Error::InvalidField("evaluation needs a finite field".into()))?;
        let emb = small.embedding_into(big)?;
        Ok(CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|&k| k as u8).collect(), emb[c.as_fin() as usize]))
                .collect(),
        })
    }
}

/// Polynomial with coefficients embedded in a fixed finite field.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Vec<u8>, u32)>,
}

impl CompiledPoly {
    /// `powers[i][k] = x_i^k`.
    pub fn eval_powers(&self, ff: &FiniteField, powers: &[Vec<u32>]) -> u32 {
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = ff.mul(t, powers[i][k as usize]);
                }
            }
            acc = ff.add(acc, t);
        }
        acc
    }

    pub fn max_exponent(&self) -> usize {
        self.terms.iter().flat_map(|(e, _)| e.iter()).map(|&k| k as usize).max().unwrap_or(0)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(out, "{}", self.field.format(c))?;
            } else if self.field.is_one(c) {
                write!(out, "{}", vars.join("*"))?;
            } else {
                write!(out, "{}*{}", self.field.format(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}
