//! Coefficient modules carrying a left action of the semigroup of integer
//! matrices with nonzero determinant.

mod sym;
mod ud;
mod wmod;

use std::fmt::Debug;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use sym::{sym_action, vn_gram, vn_pairing, SymPower};
pub use ud::{ud_action, ud_exact_sequence, UdModule};
pub use wmod::{mult_n_map, primitive_pairs, w_module_action, WModule};

use crate::error::{Error, Result};
use crate::fflin::{Matrix, PrimeField};
use crate::modgrp::IntMat2;

pub trait CoeffModule: Debug + Send + Sync {
    fn field(&self) -> PrimeField;
    fn dim(&self) -> usize;
    /// Matrix of `A` acting on column vectors.
    fn act(&self, a: &IntMat2) -> Result<Matrix<PrimeField>>;
    /// The action only depends on the matrix modulo this number.
    fn period(&self) -> u64;
    /// `w` such that the scalar matrix `l I` acts as `l^w`, if there is one.
    fn scalar_weight(&self) -> Option<u32>;
    fn spec(&self) -> ModuleSpec;
}

/// Serializable description of a coefficient module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    /// `V_n = Sym^n`
    Sym { n: u32 },
    /// `U_d`, functions of degree class `d` on `F_p^2 \ {0}`
    Ud { d: u32 },
    /// `W(M, V)`
    W { m: u64, inner: Box<ModuleSpec> },
}

impl ModuleSpec {
    pub fn build(&self, field: PrimeField) -> Result<Arc<dyn CoeffModule>> {
        Ok(match self {
            ModuleSpec::Sym { n } => Arc::new(SymPower::new(*n, field)),
            ModuleSpec::Ud { d } => Arc::new(UdModule::new(*d, field)?),
            ModuleSpec::W { m, inner } => Arc::new(WModule::new(*m, inner.build(field)?)?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            ModuleSpec::Sym { n } => format!("V_{n}"),
            ModuleSpec::Ud { d } => format!("U_{d}"),
            ModuleSpec::W { m, inner } => format!("W({m},{})", inner.label()),
        }
    }
}

/// Twist exponent `d`: `T_l` becomes `l^d T_l` on `M[d]`, and `M(d)` is the
/// part where `<l>_p` acts by `l^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTag {
    pub d: u32,
}

impl TwistTag {
    pub fn new(d: u32, p: u64) -> Result<Self> {
        if d as u64 >= p {
            return Err(Error::Precondition(format!("twist exponent {d} must lie in [0, {})", p)));
        }
        Ok(TwistTag { d })
    }
}

pub(crate) fn check_det(a: &IntMat2) -> Result<()> {
    if a.det() == 0 {
        Err(Error::DeterminantZero)
    } else {
        Ok(())
    }
}
