//! Finite matrix groups given by generators, closed by breadth-first search.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;
const TABLE_LIMIT: usize = 256;

/// How input matrices act.
///
/// `Point` matrices act on coordinate column vectors. `Substitution` matrices list
/// in row `i` the coefficients of `σ·x_i`; they are the inverses of the point matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatrixConvention {
    #[default]
    Point,
    Substitution,
}

impl MatrixConvention {
    pub fn to_point(self, m: &Matrix) -> Result<Matrix> {
        match self {
            MatrixConvention::Point => Ok(m.clone()),
            MatrixConvention::Substitution => m.inverse(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    field: Field,
    dim: usize,
    generators: Vec<usize>,
    elements: Vec<Matrix>,
    index: HashMap<Vec<Scalar>, usize>,
    inverse: Vec<usize>,
    table: Option<Vec<u32>>,
    fixed: Vec<Subspace>,
}

impl FiniteMatrixGroup {
    /// Closes the group generated by point matrices.
    ///
    /// Element 0 is the identity; the rest follow breadth-first discovery order,
    /// multiplying by the sorted, deduplicated generators on the left.
    pub fn close(field: &Field, dim: usize, generators: &[Matrix], cap: usize) -> Result<FiniteMatrixGroup> {
        let cap = cap.max(1);
        for g in generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            if g.field() != field {
                return Err(Error::FieldMismatch(format!("generator over {} in group over {field}", g.field())));
            }
            if g.rank() < dim {
                return Err(Error::Singular);
            }
        }
        let mut gens: Vec<Matrix> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        gens.sort_by(|a, b| a.data().cmp(b.data()));
        gens.dedup();

        let identity = Matrix::identity(field, dim);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity.data().to_vec(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.mul(&elements[x])?;
                if !index.contains_key(y.data()) {
                    if elements.len() == cap {
                        return Err(Error::ClosureCap(cap));
                    }
                    index.insert(y.data().to_vec(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let generators = gens.iter().map(|g| index[g.data()]).collect();

        let n = elements.len();
        let inverse = elements.iter().map(|m| Ok(index[m.inverse()?.data()])).collect::<Result<Vec<usize>>>()?;
        let fixed = elements.par_iter().map(|m| m.fixed_space()).collect::<Result<Vec<_>>>()?;
        let mut group =
            FiniteMatrixGroup { field: field.clone(), dim, generators, elements, index, inverse, table: None, fixed };
        if n <= TABLE_LIMIT {
            let table = (0..n * n).into_par_iter().map(|ij| group.mul_uncached(ij / n, ij % n) as u32).collect();
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn from_convention(
        field: &Field,
        dim: usize,
        generators: &[Matrix],
        convention: MatrixConvention,
        cap: usize,
    ) -> Result<FiniteMatrixGroup> {
        let points = generators.iter().map(|g| convention.to_point(g)).collect::<Result<Vec<_>>>()?;
        FiniteMatrixGroup::close(field, dim, &points, cap)
    }

    pub fn trivial(field: &Field, dim: usize) -> FiniteMatrixGroup {
        FiniteMatrixGroup::close(field, dim, &[], 1).expect("trivial group closes")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// Element indices of the (deduplicated, non-identity) generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m.data()).copied()
    }

    fn mul_uncached(&self, a: usize, b: usize) -> usize {
        let prod = self.elements[a].mul(&self.elements[b]).expect("square matrices");
        self.index[prod.data()]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.mul_uncached(a, b),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn fixed_space(&self, i: usize) -> &Subspace {
        &self.fixed[i]
    }

    pub fn codim(&self, i: usize) -> usize {
        self.fixed[i].codim()
    }

    /// Elements fixing `w` pointwise, ascending.
    pub fn isotropy(&self, w: &Subspace) -> Vec<usize> {
        (0..self.order()).filter(|&i| w.leq(&self.fixed[i]).expect("same ambient")).collect()
    }

    /// Subgroup generated by the given elements, ascending. Products stay inside the
    /// element table.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = HashSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// True iff the elements with fixed-space codimension at most `r` generate the group.
    pub fn is_r_reflection_group(&self, r: usize) -> bool {
        self.generated_by_reflections(&(0..self.order()).collect::<Vec<_>>(), r)
    }

    /// True iff `subgroup` (ascending element list) is generated by its members of
    /// codimension at most `r`.
    pub fn generated_by_reflections(&self, subgroup: &[usize], r: usize) -> bool {
        let gens: Vec<usize> = subgroup.iter().copied().filter(|&i| self.codim(i) <= r).collect();
        self.subgroup_generated(&gens).len() == subgroup.len()
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut x = i;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// `[1, σ, σ², …]` up to the order of σ.
    pub fn powers(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = i;
        while x != 0 {
            out.push(x);
            x = self.mul(x, i);
        }
        out
    }

    /// Number of elements per fixed-space codimension, `0..=dim`.
    pub fn codim_profile(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim + 1];
        for i in 0..self.order() {
            out[self.codim(i)] += 1;
        }
        out
    }

    /// Least `r` such that the group is generated by `(≤ r)`-reflections.
    pub fn generating_r(&self) -> usize {
        (0..=self.dim).find(|&r| self.is_r_reflection_group(r)).unwrap_or(self.dim)
    }
}
