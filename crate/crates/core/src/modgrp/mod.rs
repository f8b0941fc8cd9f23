//! Integer matrices, PSL2(Z) words, coset tables and Hecke coset representatives.

pub mod coset;
pub mod hecke_cosets;
pub mod intmat;
pub mod word;

pub use coset::{build_coset_table, coset_lookup, CosetTable, GroupTag};
pub use hecke_cosets::{crt, diamond_matrix, hecke_cosets, lift_diagonal, sigma_a, HeckeCosets, SigmaMode};
pub use intmat::{main_involution, IntMat2, IDENTITY, SIGMA, T, TAU};
pub use word::{decompose_word, Letter, Psl2Word};
