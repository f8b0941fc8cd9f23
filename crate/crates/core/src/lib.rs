//! Parabolic group cohomology of congruence subgroups over finite fields,
//! Hecke operators on it, and weight-one Hecke eigensystems in positive
//! characteristic.

pub mod error;
pub mod fflin;
pub mod modgrp;
pub mod coeff;
pub mod cohom;
pub mod hecke;
pub mod wt1;

pub use error::{Error, Result};
