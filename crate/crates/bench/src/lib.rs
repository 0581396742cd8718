//! Fixed workloads shared by the criterion benches.

use sepbound_core::constructions::{cp_triangle, TriangleFamily};
use sepbound_core::{catalog, FiniteMatrixGroup, MultiPoly, Result, VerifyConfig};

/// Groups whose posets span a few hundred nodes at most, in increasing cost.
pub fn poset_fixtures() -> Result<Vec<(&'static str, FiniteMatrixGroup)>> {
    Ok(vec![
        ("s3-perm", catalog::s3_perm()),
        ("c2c2-2n1", catalog::c2c2_2n1(2)?),
        ("cp-vn-3-3", catalog::cp_vn(3, 3)?),
        ("gl7-f2", catalog::gl7_f2()),
    ])
}

pub fn triangle_fixture(p: u32, n: usize) -> Result<(FiniteMatrixGroup, TriangleFamily, Vec<MultiPoly>)> {
    let (g, t) = cp_triangle(p, n)?;
    let c = t.candidates();
    Ok((g, t, c))
}

/// Exhaustive check over the base field only.
pub fn base_field_config() -> VerifyConfig {
    VerifyConfig { extensions: vec![1], ..VerifyConfig::default() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(poset_fixtures().unwrap().len(), 4);
        let (_, t, c) = triangle_fixture(3, 3).unwrap();
        assert_eq!(c.len(), t.candidates().len());
    }
}
