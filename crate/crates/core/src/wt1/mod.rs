//! Weight-one forms mod p from weight-p parabolic cohomology.

pub mod character;
pub mod eps;
pub mod pipeline;
pub mod sturm;

pub use character::{standard_generators, CharacterData};
pub use eps::{epsilon_eigenspace, EpsilonSpace};
pub use pipeline::{
    eigenspace_structure_check, weight_one_algebra, weight_one_with_character, EigenformDiagnostic, EigenspaceStructureReport,
    Route, StructureRow, WeightOneOptions, WeightOneResult,
};
pub use sturm::{sturm_bound, SturmData, SturmKind};
