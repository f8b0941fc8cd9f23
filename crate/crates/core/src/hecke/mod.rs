//! Hecke and diamond operators on cohomology, Hecke algebras and their eigenvalue systems.

pub mod algebra;
pub mod checks;
pub mod eigen;
pub mod ops;

pub use algebra::{algebra_closure, ActsOn, FpAlgebra};
pub use eigen::{eigen_systems, simultaneous_systems, Embedding, EigenSystem, SystemBlock};
pub use ops::{
    diamond_m_op, diamond_op, factorize, hecke_composite, hecke_matrix, hecke_matrix_shapiro, invertible_part,
    scalar_op, HeckeEngine, HeckeKind, HeckeOp,
};
pub use checks::*;
