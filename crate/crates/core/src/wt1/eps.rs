//! Character eigenspaces of the diamond action.

use crate::cohom::CohomPresentation;
use crate::error::{Error, Result};
use crate::fflin::{Field, FieldExt, Matrix, PrimeField, Subspace};
use crate::hecke::{diamond_op, Embedding};
use crate::modgrp::GroupTag;

use super::character::CharacterData;

/// `{x : (<d> - eps(d))^k x = 0 for all d}` inside `H^1_par`, over the field of values of `eps`.
#[derive(Clone, Debug)]
pub struct EpsilonSpace {
    pub field: FieldExt,
    /// Rows in `H^1_par` coordinates.
    pub space: Subspace<FieldExt>,
    pub character: CharacterData,
    embedding: Embedding,
}

impl EpsilonSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn embed(&self, m: &Matrix<PrimeField>) -> Matrix<FieldExt> {
        self.embedding.matrix(&m.field().clone(), m)
    }

    /// An operator on `H^1_par` restricted to the eigenspace.
    pub fn restrict(&self, m: &Matrix<PrimeField>) -> Matrix<FieldExt> {
        self.space.restrict(&self.embed(m))
    }
}

/// Generalised kernel of `m - lambda` inside `s`, as a subspace of the ambient space.
pub(crate) fn generalised_kernel<F: Field>(s: &Subspace<F>, m: &Matrix<F>, lambda: u64) -> Subspace<F> {
    let d = s.dim();
    if d == 0 {
        return s.clone();
    }
    let f = s.field().clone();
    let r = s.restrict(m).sub(&Matrix::scalar(f, d, lambda)).pow(d as u64);
    let ker = r.kernel();
    Subspace::from_rows(ker.basis().mul(s.basis()))
}

pub fn epsilon_eigenspace(pres: &CohomPresentation, chi: &CharacterData) -> Result<EpsilonSpace> {
    let level = pres.table().level();
    if pres.table().group() != GroupTag::Gamma1 {
        return Err(Error::Precondition("character eigenspaces are taken in the cohomology of Gamma_1(N)".into()));
    }
    if chi.modulus != level {
        return Err(Error::Precondition(format!(
            "the character has modulus {} but the level is {level}",
            chi.modulus
        )));
    }
    let f = pres.field();
    if chi.p() != f.p() {
        return Err(Error::Precondition("the character takes values in another characteristic".into()));
    }
    if level.is_multiple_of(f.p()) {
        return Err(Error::Precondition("eigenspaces need p not dividing N".into()));
    }
    let k = chi.field_ext()?;
    let embedding = Embedding::new(&f, &k)?;
    let mut space = Subspace::full(k.clone(), pres.dim_par());
    for &g in &chi.generators {
        let dia = diamond_op(pres, g as i64)?;
        let m = embedding.matrix(&f, &dia.par_matrix);
        space = generalised_kernel(&space, &m, chi.value(g as i64)?);
    }
    Ok(EpsilonSpace {
        field: k,
        space,
        character: chi.clone(),
        embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::SymPower;
    use crate::cohom::build_cohomology;
    use crate::hecke::hecke_matrix;
    use std::sync::Arc;

    #[test]
    fn eigenspaces_decompose_parabolic_cohomology() {
        // (Z/7)^* has order 6 and F_25 contains the sixth roots of unity
        let f = PrimeField::new(5).unwrap();
        let pres = build_cohomology(GroupTag::Gamma1, 7, Arc::new(SymPower::new(3, f))).unwrap();
        let k = FieldExt::canonical(f, 2).unwrap();
        let mut total = 0;
        let t2 = hecke_matrix(&pres, 2).unwrap();
        for chi in CharacterData::all(7, &k).unwrap() {
            let e = epsilon_eigenspace(&pres, &chi).unwrap();
            if chi.is_even().unwrap() {
                assert_eq!(e.dim(), 0, "odd weight kills even characters");
            }
            assert!(e.space.is_invariant(&e.embed(&t2.par_matrix)));
            total += e.dim();
        }
        assert_eq!(total, pres.dim_par());
    }

    #[test]
    fn trivial_character_gives_gamma0_invariants() {
        let f = PrimeField::new(7).unwrap();
        let p1 = build_cohomology(GroupTag::Gamma1, 11, Arc::new(SymPower::new(2, f))).unwrap();
        let p0 = build_cohomology(GroupTag::Gamma0, 11, Arc::new(SymPower::new(2, f))).unwrap();
        let e = epsilon_eigenspace(&p1, &CharacterData::trivial(11, 7).unwrap()).unwrap();
        assert_eq!(e.dim(), p0.dim_par());
    }
}
