//! Linear subspaces stored by a canonical RREF basis, so that equality and hashing
//! are structural.

use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    /// RREF rows, no zero rows.
    basis: Matrix,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.basis.rows() == other.basis.rows()
            && self.basis.data() == other.basis.data()
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.rows().hash(state);
        self.basis.data().hash(state);
    }
}

impl Subspace {
    /// Span of the given vectors in `field^ambient`.
    pub fn span(field: &Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        let rows = vectors.len();
        let data: Vec<Scalar> = vectors.into_iter().flatten().collect();
        let m = Matrix::new(field, rows, ambient, data).expect("vectors of ambient length");
        Subspace::row_space(&m)
    }

    pub fn row_space(m: &Matrix) -> Subspace {
        let red = m.rref();
        let rank = red.rank;
        let basis =
            Matrix::new(m.field(), rank, m.cols(), red.matrix.data()[..rank * m.cols()].to_vec()).expect("rank rows");
        Subspace { ambient: m.cols(), basis }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(field, ambient) }
    }

    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(field, 0, ambient) }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient, other.ambient
            )));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field(), other.field())));
        }
        Ok(())
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix {
        let k = self.basis.kernel();
        k.basis
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(self.annihilator().stack(&other.annihilator())?.kernel())
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::row_space(&self.basis.stack(&other.basis)?))
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        let ann = other.annihilator();
        let f = self.field();
        Ok((0..self.dim()).all(|r| ann.mul_vec(self.basis.row(r)).iter().all(|x| f.is_zero(x))))
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let f = self.field();
        self.annihilator().mul_vec(v).iter().all(|x| f.is_zero(x))
    }

    /// Image under a linear map given by a square matrix acting on column vectors.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vectors = (0..self.dim()).map(|r| m.mul_vec(self.basis.row(r))).collect();
        Subspace::span(self.field(), m.rows(), vectors)
    }
}
