//! The contragredient action on polynomials and graded invariant spaces.

use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::matrix::Matrix;
use crate::poly::{monomials, Monomial, MultiPoly};
use crate::subspace::Subspace;

pub const DEFAULT_DEGREE_CAP: u32 = 6;

/// Images of the coordinates under `σ`: `σ·x_i` is row `i` of `ρ(σ)^{-1}`.
pub fn coordinate_images(g: &FiniteMatrixGroup, sigma: usize) -> Vec<MultiPoly> {
    let inv = g.element(g.inv(sigma));
    (0..g.dim()).map(|i| MultiPoly::linear(g.field(), inv.row(i))).collect()
}

/// `σ·f`, with `(σ·f)(v) = f(σ^{-1} v)`.
pub fn act(g: &FiniteMatrixGroup, sigma: usize, f: &MultiPoly) -> Result<MultiPoly> {
    if f.nvars() != g.dim() {
        return Err(Error::DimensionMismatch(format!("{} variables for a {}-dimensional action", f.nvars(), g.dim())));
    }
    f.substitute(&coordinate_images(g, sigma))
}

pub fn is_invariant(g: &FiniteMatrixGroup, f: &MultiPoly) -> Result<bool> {
    for &s in g.generators() {
        if &act(g, s, f)? != f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbit product and orbit sum of `f` under the cyclic subgroup generated by `sigma`.
pub fn norm_trace(g: &FiniteMatrixGroup, sigma: usize, f: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    let mut norm = MultiPoly::one(g.field(), g.dim());
    let mut trace = MultiPoly::zero(g.field(), g.dim());
    for s in g.powers(sigma) {
        let h = act(g, s, f)?;
        norm = norm.mul(&h);
        trace = trace.add(&h);
    }
    Ok((norm, trace))
}

/// Homogeneous invariants of one degree, as a subspace of the coefficient space on
/// `monomials(d, degree)`.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    pub space: Subspace,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Echelon basis; leading monomials strictly decrease.
    pub fn basis(&self) -> Vec<MultiPoly> {
        let f = self.space.field();
        let n = self.monomials.first().map_or(0, Vec::len);
        self.space
            .basis()
            .row_vecs()
            .iter()
            .map(|v| MultiPoly::from_coefficient_vector(f, n, &self.monomials, v))
            .collect()
    }
}

/// Kernel of `f ↦ (σ·f − f)_σ` over the generators on degree-`degree` forms.
pub fn invariant_space(g: &FiniteMatrixGroup, degree: u32, cap: u32) -> Result<InvariantSpace> {
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    let field = g.field();
    let mons = monomials(g.dim(), degree);
    let n = mons.len();
    let index: std::collections::HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<crate::field::Scalar>> = Vec::new();
    for &s in g.generators() {
        let images = coordinate_images(g, s);
        let mut block = vec![vec![field.zero(); n]; n];
        for (col, m) in mons.iter().enumerate() {
            let image = MultiPoly::monomial(field, m.clone(), field.one()).substitute(&images)?;
            for (e, c) in image.terms() {
                block[index[e]][col] = c.clone();
            }
            block[col][col] = field.sub(&block[col][col], &field.one());
        }
        rows.extend(block);
    }
    let space = if rows.is_empty() { Subspace::full(field, n) } else { Matrix::from_rows(field, rows)?.kernel() };
    Ok(InvariantSpace { degree, monomials: mons, space })
}

/// Invariants of degree `1..=max_degree` split into decomposables and a canonical
/// complement of new generators.
#[derive(Clone, Debug)]
pub struct GradedInvariants {
    pub spaces: Vec<InvariantSpace>,
    /// `decomposable[k]` spans the products in degree `k + 1`.
    pub decomposable: Vec<Subspace>,
    /// Echelon basis of the invariants reduced modulo the decomposables.
    pub new_generators: Vec<Vec<MultiPoly>>,
}

impl GradedInvariants {
    /// Minimal generator counts per degree (graded Nakayama).
    pub fn profile(&self) -> Vec<usize> {
        self.new_generators.iter().map(Vec::len).collect()
    }
}

pub fn graded_invariants(g: &FiniteMatrixGroup, max_degree: u32, cap: u32) -> Result<GradedInvariants> {
    let field = g.field();
    let d = g.dim();
    let mut spaces: Vec<InvariantSpace> = Vec::new();
    let mut bases: Vec<Vec<MultiPoly>> = Vec::new();
    let mut decomposable = Vec::new();
    let mut new_generators = Vec::new();
    for deg in 1..=max_degree {
        let sp = invariant_space(g, deg, cap)?;
        let mut products = Vec::new();
        for a in 1..=deg / 2 {
            for x in &bases[a as usize - 1] {
                for y in &bases[(deg - a) as usize - 1] {
                    products.push(x.mul(y).coefficient_vector(&sp.monomials));
                }
            }
        }
        let dec = Subspace::span(field, sp.monomials.len(), products);
        // reduce invariants modulo the decomposable echelon basis, then echelonize
        let dec_rref = dec.basis().rref();
        let reduced: Vec<Vec<crate::field::Scalar>> = sp
            .space
            .basis()
            .row_vecs()
            .into_iter()
            .map(|mut v| {
                for (r, &pc) in dec_rref.pivots.iter().enumerate() {
                    let c = v[pc].clone();
                    if !field.is_zero(&c) {
                        let row = dec.basis().row(r);
                        for (x, y) in v.iter_mut().zip(row) {
                            *x = field.sub(x, &field.mul(&c, y));
                        }
                    }
                }
                v
            })
            .collect();
        let fresh = Subspace::span(field, sp.monomials.len(), reduced);
        new_generators.push(
            fresh
                .basis()
                .row_vecs()
                .iter()
                .map(|v| MultiPoly::from_coefficient_vector(field, d, &sp.monomials, v))
                .collect(),
        );
        bases.push(sp.basis());
        decomposable.push(dec);
        spaces.push(sp);
    }
    Ok(GradedInvariants { spaces, decomposable, new_generators })
}

pub fn minimal_generator_profile(g: &FiniteMatrixGroup, max_degree: u32, cap: u32) -> Result<Vec<usize>> {
    Ok(graded_invariants(g, max_degree, cap)?.profile())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::Field;

    #[test]
    fn jordan_action_on_coordinates() {
        let g = catalog::cp_vn(5, 3).unwrap();
        let f = g.field().clone();
        let sigma = g.generators()[0];
        let x = |i| MultiPoly::var(&f, 3, i);
        assert_eq!(act(&g, sigma, &x(0)).unwrap(), x(0).add(&x(1)));
        assert_eq!(act(&g, sigma, &x(1)).unwrap(), x(1).add(&x(2)));
        assert_eq!(act(&g, sigma, &x(2)).unwrap(), x(2));
        assert_eq!(act(&g, 0, &x(0).mul(&x(1))).unwrap(), x(0).mul(&x(1)));
    }

    #[test]
    fn left_action() {
        let g = catalog::s3_diag(&Field::prime(5).unwrap(), 1).unwrap();
        let f = g.field().clone();
        let p = MultiPoly::var(&f, 3, 0).pow(2).mul(&MultiPoly::var(&f, 3, 1));
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = act(&g, g.mul(a, b), &p).unwrap();
                let rhs = act(&g, a, &act(&g, b, &p).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn norms() {
        let g = catalog::cp_vn(2, 2).unwrap();
        let f = g.field().clone();
        let (n, t) = norm_trace(&g, g.generators()[0], &MultiPoly::var(&f, 2, 0)).unwrap();
        let x1 = MultiPoly::var(&f, 2, 0);
        let x2 = MultiPoly::var(&f, 2, 1);
        assert_eq!(n, x1.pow(2).add(&x1.mul(&x2)));
        assert_eq!(t, x2);
        assert!(is_invariant(&g, &n).unwrap());
        let g = catalog::cp_vn(5, 3).unwrap();
        let x3 = MultiPoly::var(g.field(), 3, 2);
        assert_eq!(norm_trace(&g, g.generators()[0], &x3).unwrap().0, x3.pow(5));
    }

    #[test]
    fn profiles() {
        let g = catalog::trivial(&Field::prime(3).unwrap(), 3);
        assert_eq!(minimal_generator_profile(&g, 3, 6).unwrap(), vec![3, 0, 0]);
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_i64(&f, &[vec![-1]]).unwrap();
        let sign = FiniteMatrixGroup::close(&f, 1, &[m], 10).unwrap();
        assert_eq!(minimal_generator_profile(&sign, 4, 6).unwrap(), vec![0, 1, 0, 0]);
        assert!(matches!(invariant_space(&g, 7, 6), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn gl7_profile() {
        let g = catalog::gl7_f2();
        let gi = graded_invariants(&g, 5, 6).unwrap();
        assert_eq!(gi.profile(), vec![4, 0, 3, 3, 1]);
        assert_eq!(gi.spaces[0].dim(), 4);
        for gens in &gi.new_generators {
            for p in gens {
                assert!(is_invariant(&g, p).unwrap());
            }
        }
    }
}
