//! Constructors for the standard groups used throughout the gallery and tests.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{FiniteMatrixGroup, MatrixConvention, DEFAULT_CLOSURE_CAP};
use crate::matrix::Matrix;

fn diagonal(field: &Field, entries: &[i64]) -> Matrix {
    let d = entries.len();
    let mut m = Matrix::zeros(field, d, d);
    for (i, &e) in entries.iter().enumerate() {
        m.set(i, i, field.from_i64(e));
    }
    m
}

pub fn trivial(field: &Field, d: usize) -> FiniteMatrixGroup {
    FiniteMatrixGroup::trivial(field, d)
}

/// `C_2` acting on the line by `x ↦ -x`, over the rationals.
pub fn c2_sign() -> FiniteMatrixGroup {
    let q = Field::rationals();
    FiniteMatrixGroup::close(&q, 1, &[diagonal(&q, &[-1])], DEFAULT_CLOSURE_CAP).expect("closes")
}

/// `C_2 × C_2` acting on the plane by independent coordinate sign changes.
pub fn c2c2_boolean() -> FiniteMatrixGroup {
    let q = Field::rationals();
    let gens = [diagonal(&q, &[-1, 1]), diagonal(&q, &[1, -1])];
    FiniteMatrixGroup::close(&q, 2, &gens, DEFAULT_CLOSURE_CAP).expect("closes")
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
fn permutation(field: &Field, perm: &[usize]) -> Matrix {
    let n = perm.len();
    let mut m = Matrix::zeros(field, n, n);
    for (j, &i) in perm.iter().enumerate() {
        m.set(i, j, field.one());
    }
    m
}

/// `S_3` acting diagonally on `n` copies of its permutation representation.
pub fn s3_diag(field: &Field, n: usize) -> Result<FiniteMatrixGroup> {
    if n == 0 {
        return Err(Error::Precondition("need at least one copy".into()));
    }
    let swap = permutation(field, &[1, 0, 2]).direct_power(n);
    let cycle = permutation(field, &[1, 2, 0]).direct_power(n);
    FiniteMatrixGroup::close(field, 3 * n, &[swap, cycle], DEFAULT_CLOSURE_CAP)
}

pub fn s3_perm() -> FiniteMatrixGroup {
    s3_diag(&Field::rationals(), 1).expect("closes")
}

/// `C_2 × C_2 = ⟨α, β⟩` on a `(2n+1)`-space with basis `u_1..u_n, v_1..v_n, w`:
/// α negates the `u_i` and `w`, β negates the `v_i` and `w`.
pub fn c2c2_2n1(n: usize) -> Result<FiniteMatrixGroup> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let q = Field::rationals();
    let d = 2 * n + 1;
    let alpha: Vec<i64> = (0..d).map(|i| if i < n || i == 2 * n { -1 } else { 1 }).collect();
    let beta: Vec<i64> = (0..d).map(|i| if i >= n { -1 } else { 1 }).collect();
    FiniteMatrixGroup::close(&q, d, &[diagonal(&q, &alpha), diagonal(&q, &beta)], DEFAULT_CLOSURE_CAP)
}

/// Substitution matrix of the generator of `C_p` on `V_n`: `σ·x_i = x_i + x_{i+1}`, `σ·x_n = x_n`.
pub fn jordan_substitution(field: &Field, n: usize) -> Matrix {
    let mut m = Matrix::identity(field, n);
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, field.one());
    }
    m
}

/// The `n`-dimensional indecomposable representation `V_n` of `C_p` over `F_p`, `n ≤ p`.
pub fn cp_vn(p: u32, n: usize) -> Result<FiniteMatrixGroup> {
    if n == 0 || n > p as usize {
        return Err(Error::Precondition(format!("need 1 <= n <= p, got n = {n}, p = {p}")));
    }
    let f = Field::prime(p)?;
    let s = jordan_substitution(&f, n);
    FiniteMatrixGroup::from_convention(&f, n, &[s], MatrixConvention::Substitution, DEFAULT_CLOSURE_CAP)
}

/// `C_p` acting diagonally on `V_2^{⊕n}` with coordinates `x_1, y_1, …, x_n, y_n`:
/// `σ·x_i = x_i`, `σ·y_i = x_i + y_i`.
pub fn cp_v2_vec(p: u32, n: usize) -> Result<FiniteMatrixGroup> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let f = Field::prime(p)?;
    let mut s = Matrix::identity(&f, 2);
    s.set(1, 0, f.one());
    let s = s.direct_power(n);
    FiniteMatrixGroup::from_convention(&f, 2 * n, &[s], MatrixConvention::Substitution, DEFAULT_CLOSURE_CAP)
}

/// Point matrix of the block-triangular element of `GL_7(F_2)` with parameters `α_1..α_4`.
pub fn gl7_element(field: &Field, alpha: [i64; 4]) -> Matrix {
    let mut m = Matrix::identity(field, 7);
    for i in 0..3 {
        m.set(4 + i, i, field.from_i64(alpha[i]));
        m.set(4 + i, 3, field.from_i64(alpha[3]));
    }
    m
}

/// The elementary abelian group of order 16 in `GL_7(F_2)`, generated by the four
/// elements with exactly one nonzero `α_i`.
pub fn gl7_f2() -> FiniteMatrixGroup {
    let f = Field::prime(2).expect("F_2");
    let gens: Vec<Matrix> = (0..4)
        .map(|i| {
            let mut a = [0; 4];
            a[i] = 1;
            gl7_element(&f, a)
        })
        .collect();
    FiniteMatrixGroup::close(&f, 7, &gens, DEFAULT_CLOSURE_CAP).expect("closes")
}
