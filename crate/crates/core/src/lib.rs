pub mod bits;
pub mod bounds;
pub mod catalog;
pub mod constructions;
pub mod error;
pub mod field;
pub mod gallery;
pub mod group;
pub mod invariants;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod poset;
pub mod reflection;
pub mod report;
pub mod separation;
pub mod shelling;
pub mod subspace;
pub mod topology;

pub use bounds::{agz_report, lower_bound, thm34_bound, NonvanishingReport, SeparatingBound};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Scalar};
pub use group::{FiniteMatrixGroup, MatrixConvention};
pub use matrix::Matrix;
pub use poly::MultiPoly;
pub use poset::{FinitePoset, SepNode, SepPoset};
pub use reflection::{classify, ReflectionClassification, SubspaceLattice};
pub use separation::{search_separating, verify_separating, SeparationReport, VerifyConfig};
pub use shelling::{shelling_separating, verify_shelling, ShellingOrder};
pub use subspace::Subspace;
pub use topology::{order_complex, reduced_betti, BettiVector, OrderComplex};

pub use constructions::{cp_triangle, gl7_scenario, Gl7Scenario, TriangleFamily};
pub use gallery::{gallery, run_gallery, GalleryEntry, GalleryRun};
pub use io::{load_candidates, load_group, GroupSpecFile};
pub use report::{analyze, Analysis, AnalysisOptions, Report};
