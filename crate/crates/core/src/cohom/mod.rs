//! Group cohomology of congruence subgroups via the coinduced module.

pub mod presentation;
pub mod space;

pub use presentation::{build_cohomology, evaluate_cocycle, parabolic_inclusion, CocycleRep, CohomPresentation, WalkTerm};
pub use space::{CoinducedSpace, Gen, RhoCache};
