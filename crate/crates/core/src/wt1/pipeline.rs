//! Weight-one Hecke algebras from the weight-`p` algebra on parabolic cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::character::CharacterData;
use super::eps::{epsilon_eigenspace, generalised_kernel};
use super::sturm::{sturm_bound, SturmData, SturmKind};
use crate::coeff::SymPower;
use crate::cohom::build_cohomology;
use crate::error::{Error, Result};
use crate::fflin::{Field, FieldExt, Matrix, Poly, PrimeField, QuotientMap, Subspace};
use crate::hecke::eigen::{descriptor, element_coeffs};
use crate::hecke::{algebra_closure, eigen_systems, invertible_part, simultaneous_systems, EigenSystem, Embedding, HeckeEngine, SystemBlock};
use crate::modgrp::GroupTag;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[derive(Default)]
pub struct WeightOneOptions {
    /// Replaces the default operator count.
    pub operator_bound: Option<u64>,
    /// Operators added on top of the bound.
    pub extra_operators: u64,
    /// Largest `n` with a reported `a_n`; defaults to the operator bound.
    pub output_bound: Option<u64>,
    pub seed: u64,
}


#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// `Gamma_1(N)` without a character.
    Gamma1,
    /// The eigenspace of a character.
    Character,
}

/// Weight-`p` data attached to one weight-one eigenform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenformDiagnostic {
    /// Common eigenspace of the prime-to-`p` operators in the ordinary cohomology.
    pub weight_p_eigenspace_dim: usize,
    pub weight_p_generalised_dim: usize,
    /// Radical of the characteristic polynomial of `T_p` there, low to high.
    pub tp_radical: Vec<Vec<u64>>,
    /// The roots `u`, `eps(p)/u` when they lie in the coefficient field.
    pub u_pair: Option<[Vec<u64>; 2]>,
    pub eps_p: Option<Vec<u64>>,
    /// `u u' = eps(p)`.
    pub product_matches_eps_p: bool,
    /// `u` and `u'` are nonzero.
    pub weight_p_ordinary: bool,
}

/// One simultaneous eigenvalue system of the prime-to-`p` operators in weight `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureRow {
    pub degree: usize,
    pub eigenspace_dim: usize,
    pub generalised_dim: usize,
    pub from_weight_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightOneResult {
    pub p: u64,
    pub level: u64,
    pub route: Route,
    pub character: Option<CharacterData>,
    pub sturm: SturmData,
    pub operator_bound: u64,
    pub output_bound: u64,
    pub dim_par: usize,
    /// Dimension of the character eigenspace (equal to `dim_par` without a character).
    pub dim_space: usize,
    pub dim_ordinary: usize,
    pub dim_weight_p_algebra: usize,
    pub dim_prime_to_p: usize,
    #[serde(rename = "dim_T1")]
    pub dim_t1: usize,
    pub eigenforms: Vec<EigenSystem>,
    pub diagnostics: Vec<EigenformDiagnostic>,
    pub weight_p_systems: Vec<EigenSystem>,
    pub structure: Vec<StructureRow>,
    /// `p = 3` on `Gamma_1(N)`.
    pub experimental: bool,
}

struct Prepared<F: Field> {
    field: F,
    /// `T_n` on the ordinary part.
    ops: BTreeMap<u64, Matrix<F>>,
    tp: Matrix<F>,
    diamond_p: Option<Matrix<F>>,
    eps_p: Option<u64>,
}

struct Outcome {
    dim_weight_p_algebra: usize,
    dim_prime_to_p: usize,
    dim_t1: usize,
    eigenforms: Vec<EigenSystem>,
    diagnostics: Vec<EigenformDiagnostic>,
    weight_p_systems: Vec<EigenSystem>,
    structure: Vec<StructureRow>,
}

fn check_common(level: u64, p: u64) -> Result<()> {
    if !crate::fflin::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if level < 5 {
        return Err(Error::Precondition(format!("weight one needs N >= 5, got N = {level}")));
    }
    if level.is_multiple_of(p) {
        return Err(Error::Precondition(format!("p | N: weight one needs p not dividing N (N = {level}, p = {p})")));
    }
    Ok(())
}

fn labels(bound: u64, output: u64, p: u64) -> Vec<u64> {
    (1..=bound.max(output)).filter(|&n| n <= bound || n % p != 0).collect()
}

/// The weight-one Hecke algebra of `Gamma_1(N)` over `F_p`.
pub fn weight_one_algebra(level: u64, p: u64, opts: &WeightOneOptions) -> Result<WeightOneResult> {
    check_common(level, p)?;
    if p < 3 {
        return Err(Error::Precondition("weight one needs p >= 3".into()));
    }
    let f = PrimeField::new(p)?;
    let sturm = sturm_bound(level, SturmKind::WithoutCharacter)?;
    let bound = opts.operator_bound.unwrap_or_else(|| sturm.operator_count(p + 2)) + opts.extra_operators;
    let output = opts.output_bound.unwrap_or(bound);
    let pres = build_cohomology(GroupTag::Gamma1, level, Arc::new(SymPower::new(p as u32 - 2, f)))?;
    let mut engine = HeckeEngine::new(&pres);
    let tp_full = engine.t(p)?.par_matrix;
    let ord = invertible_part(&tp_full);
    let mut ops = BTreeMap::new();
    for n in labels(bound, output, p) {
        ops.insert(n, ord.restrict(&engine.t(n)?.par_matrix));
    }
    let diamond_p = ord.restrict(&engine.diamond(p % level)?.par_matrix);
    let prep = Prepared {
        field: f,
        tp: ord.restrict(&tp_full),
        ops,
        diamond_p: Some(diamond_p),
        eps_p: None,
    };
    let out = run(&prep, p, bound, output, opts.seed)?;
    Ok(assemble(level, p, Route::Gamma1, None, sturm, bound, output, pres.dim_par(), pres.dim_par(), ord.dim(), out, p == 3))
}

/// The weight-one Hecke algebra with character `chi`, computed on the
/// `chi`-eigenspace of the weight-`p` parabolic cohomology.
pub fn weight_one_with_character(level: u64, p: u64, chi: &CharacterData, opts: &WeightOneOptions) -> Result<WeightOneResult> {
    check_common(level, p)?;
    if p < 5 {
        return Err(Error::Precondition(format!("the character route needs p >= 5, got p = {p}")));
    }
    if chi.p() != p || chi.modulus != level {
        return Err(Error::Precondition("the character must be modulo N with values in characteristic p".into()));
    }
    chi.check_parity(p)?;
    let f = PrimeField::new(p)?;
    let sturm = sturm_bound(level, SturmKind::WithCharacter)?;
    let bound = opts.operator_bound.unwrap_or_else(|| sturm.operator_count(p + 2)) + opts.extra_operators;
    let output = opts.output_bound.unwrap_or(bound);
    let pres = build_cohomology(GroupTag::Gamma1, level, Arc::new(SymPower::new(p as u32 - 2, f)))?;
    let eps = epsilon_eigenspace(&pres, chi)?;
    let k = eps.field.clone();
    let mut engine = HeckeEngine::new(&pres);
    let tp_eps = eps.restrict(&engine.t(p)?.par_matrix);
    let ord = invertible_part(&tp_eps);
    let mut ops = BTreeMap::new();
    for n in labels(bound, output, p) {
        ops.insert(n, ord.restrict(&eps.restrict(&engine.t(n)?.par_matrix)));
    }
    let prep = Prepared {
        field: k,
        tp: ord.restrict(&tp_eps),
        ops,
        diamond_p: None,
        eps_p: Some(chi.value(p as i64)?),
    };
    let out = run(&prep, p, bound, output, opts.seed)?;
    Ok(assemble(
        level,
        p,
        Route::Character,
        Some(chi.clone()),
        sturm,
        bound,
        output,
        pres.dim_par(),
        eps.dim(),
        ord.dim(),
        out,
        false,
    ))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    level: u64,
    p: u64,
    route: Route,
    character: Option<CharacterData>,
    sturm: SturmData,
    operator_bound: u64,
    output_bound: u64,
    dim_par: usize,
    dim_space: usize,
    dim_ordinary: usize,
    out: Outcome,
    experimental: bool,
) -> WeightOneResult {
    WeightOneResult {
        p,
        level,
        route,
        character,
        sturm,
        operator_bound,
        output_bound,
        dim_par,
        dim_space,
        dim_ordinary,
        dim_weight_p_algebra: out.dim_weight_p_algebra,
        dim_prime_to_p: out.dim_prime_to_p,
        dim_t1: out.dim_t1,
        eigenforms: out.eigenforms,
        diagnostics: out.diagnostics,
        weight_p_systems: out.weight_p_systems,
        structure: out.structure,
        experimental,
    }
}

fn run<F: Field>(prep: &Prepared<F>, p: u64, bound: u64, output: u64, seed: u64) -> Result<Outcome> {
    let dim = prep.tp.rows();
    if dim == 0 {
        return Ok(Outcome {
            dim_weight_p_algebra: 0,
            dim_prime_to_p: 0,
            dim_t1: 0,
            eigenforms: Vec::new(),
            diagnostics: Vec::new(),
            weight_p_systems: Vec::new(),
            structure: Vec::new(),
        });
    }
    let f = prep.field.clone();
    let t_gens: Vec<(u64, Matrix<F>)> = (1..=bound).map(|n| (n, prep.ops[&n].clone())).collect();
    let a_gens: Vec<(u64, Matrix<F>)> = t_gens.iter().filter(|(n, _)| n % p != 0).cloned().collect();
    let t_alg = algebra_closure(&t_gens, seed)?;
    let a_alg = algebra_closure(&a_gens, seed)?;
    let coords = a_alg
        .basis()
        .iter()
        .map(|b| t_alg.coordinates(b).ok_or_else(|| Error::Precondition("prime-to-p algebra is not a subalgebra".into())))
        .collect::<Result<Vec<_>>>()?;
    let quotient = QuotientMap::new(&Subspace::from_vectors(f.clone(), t_alg.dim(), coords));

    let weight_p_systems = eigen_systems(&t_alg, bound, seed)?;
    let blocks = simultaneous_systems(&a_gens.iter().map(|g| g.1.clone()).collect::<Vec<_>>(), seed)?;

    let mut eigenforms = Vec::new();
    let mut diagnostics = Vec::new();
    let mut matched = vec![false; blocks.len()];
    let mut dim_t1 = 0;
    if quotient.dim() > 0 {
        let mut w_gens = Vec::new();
        for (&n, m) in &prep.ops {
            if n % p == 0 {
                continue;
            }
            if n > bound && !a_alg.contains(m) {
                return Err(Error::Precondition(format!("T_{n} lies outside the algebra of the first {bound} operators")));
            }
            w_gens.push((n, quotient.induced(&t_alg.regular(m)?)));
        }
        let w_alg = algebra_closure(&w_gens, seed)?;
        dim_t1 = w_alg.dim();
        for sys in eigen_systems(&w_alg, u64::MAX, seed)? {
            let (form, diag, block) = weight_one_form(prep, &sys, &a_gens, &blocks, p, output)?;
            if let Some(b) = block {
                matched[b] = true;
            }
            eigenforms.push(form);
            diagnostics.push(diag);
        }
    }
    let structure = blocks
        .iter()
        .zip(&matched)
        .map(|(b, &m)| {
            let rel = b.residue.degree() / f.degree();
            StructureRow {
                degree: b.residue.degree(),
                eigenspace_dim: b.eigenvectors.rows(),
                generalised_dim: b.block.dim() / rel.max(1),
                from_weight_one: m,
            }
        })
        .collect();
    Ok(Outcome {
        dim_weight_p_algebra: t_alg.dim(),
        dim_prime_to_p: a_alg.dim(),
        dim_t1,
        eigenforms,
        diagnostics,
        weight_p_systems,
        structure,
    })
}

/// Index of the block whose system is conjugate over the working field to `values`.
fn find_block<F: Field>(field: &F, blocks: &[SystemBlock<F>], residue: &FieldExt, values: &[u64]) -> Option<usize> {
    let q = field.order() as u128;
    let rel = residue.degree() / field.degree();
    blocks.iter().position(|b| {
        if b.residue != *residue {
            return false;
        }
        let mut conj = b.values.clone();
        for _ in 0..rel.max(1) {
            if conj == values {
                return true;
            }
            conj = conj.iter().map(|&x| residue.pow(x, q)).collect();
        }
        false
    })
}

/// `a_n` for all `n <= output` and the weight-`p` diagnostics of one weight-one system.
fn weight_one_form<F: Field>(
    prep: &Prepared<F>,
    sys: &EigenSystem,
    a_gens: &[(u64, Matrix<F>)],
    blocks: &[SystemBlock<F>],
    p: u64,
    output: u64,
) -> Result<(EigenSystem, EigenformDiagnostic, Option<usize>)> {
    let f = &prep.field;
    let r = crate::hecke::eigen::field_of(&sys.field)?;
    let value = |n: u64| -> Option<u64> { sys.values.get(&n).map(|c| r.from_coeffs(c)) };
    let a_values: Vec<u64> = a_gens.iter().map(|(n, _)| value(*n).unwrap_or(0)).collect();

    let emb = Embedding::new(f, &r)?;
    let block = find_block(f, blocks, &r, &a_values);
    let mut diag = EigenformDiagnostic {
        weight_p_eigenspace_dim: 0,
        weight_p_generalised_dim: 0,
        tp_radical: Vec::new(),
        u_pair: None,
        eps_p: None,
        product_matches_eps_p: false,
        weight_p_ordinary: false,
    };
    let mut a_p = None;
    let mut eps_p = prep.eps_p.map(|e| emb.map(f, e));
    if let Some(bi) = block {
        let s = Subspace::from_rows(blocks[bi].block.basis.clone());
        let sr = Subspace::full(r.clone(), s.dim());
        let mut gen = sr.clone();
        let mut eig = sr;
        for ((_, m), &lambda) in a_gens.iter().zip(&a_values) {
            let mr = emb.matrix(f, &s.restrict(m));
            gen = generalised_kernel(&gen, &mr, lambda);
            let shifted = mr.sub(&Matrix::scalar(r.clone(), mr.rows(), lambda));
            eig = eig.intersection(&shifted.kernel());
        }
        diag.weight_p_generalised_dim = gen.dim();
        diag.weight_p_eigenspace_dim = eig.dim();
        let tp = gen.restrict(&emb.matrix(f, &s.restrict(&prep.tp)));
        let radical: Vec<Poly<FieldExt>> = tp.charpoly()?.factor().into_iter().map(|x| x.0).collect();
        let rad = radical.iter().fold(Poly::one(r.clone()), |acc, x| acc.mul(x));
        diag.tp_radical = rad.coeffs().iter().map(|&c| element_coeffs(&r, c)).collect();
        if eps_p.is_none() {
            if let Some(d) = &prep.diamond_p {
                let dm = gen.restrict(&emb.matrix(f, &s.restrict(d)));
                let roots = dm.charpoly()?.roots();
                if roots.len() == 1 {
                    eps_p = Some(roots[0].0);
                }
            }
        }
        let roots = rad.roots();
        match rad.degree() {
            2 => {
                a_p = Some(r.neg(rad.coeff(1)));
                diag.product_matches_eps_p = eps_p == Some(rad.coeff(0));
                diag.weight_p_ordinary = rad.coeff(0) != 0;
                if roots.len() == 2 {
                    diag.u_pair = Some([element_coeffs(&r, roots[0].0), element_coeffs(&r, roots[1].0)]);
                }
            }
            1 => {
                let u = roots[0].0;
                a_p = Some(r.add(u, u));
                diag.product_matches_eps_p = eps_p == Some(r.mul(u, u));
                diag.weight_p_ordinary = u != 0;
                diag.u_pair = Some([element_coeffs(&r, u), element_coeffs(&r, u)]);
            }
            _ => {}
        }
    }
    diag.eps_p = eps_p.map(|e| element_coeffs(&r, e));

    let mut values = BTreeMap::new();
    for n in 1..=output {
        let mut m = n;
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let Some(am) = value(m) else { continue };
        let ape = match (e, a_p, eps_p) {
            (0, _, _) => Some(r.one()),
            (_, Some(ap), Some(ep)) => {
                // a_{p^{j+1}} = a_p a_{p^j} - eps(p) a_{p^{j-1}}
                let (mut prev, mut cur) = (r.one(), ap);
                for _ in 1..e {
                    let next = r.sub(r.mul(ap, cur), r.mul(ep, prev));
                    prev = cur;
                    cur = next;
                }
                Some(cur)
            }
            (1, Some(ap), None) => Some(ap),
            _ => None,
        };
        if let Some(x) = ape {
            values.insert(n, element_coeffs(&r, r.mul(x, am)));
        }
    }
    let form = EigenSystem {
        field: descriptor(&r),
        values,
        ordinary_flag: a_p.map(|x| x != 0),
        multiplicity: sys.multiplicity,
    };
    Ok((form, diag, block))
}

/// Checks the weight-`p` picture of every weight-one system against the
/// shape predicted by the Hasse and Frobenius images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceStructureReport {
    /// Cohomology doubles every space of forms.
    pub cohomological_multiplicity: usize,
    pub weight_one_two_dimensional: bool,
    pub others_at_most_one_dimensional: bool,
    pub products_match: bool,
    pub ordinary: bool,
}

impl EigenspaceStructureReport {
    pub fn passed(&self) -> bool {
        self.weight_one_two_dimensional && self.others_at_most_one_dimensional && self.products_match && self.ordinary
    }
}

pub fn eigenspace_structure_check(res: &WeightOneResult) -> EigenspaceStructureReport {
    let c = 2;
    EigenspaceStructureReport {
        cohomological_multiplicity: c,
        weight_one_two_dimensional: res.diagnostics.iter().all(|d| d.weight_p_eigenspace_dim == 2 * c),
        others_at_most_one_dimensional: res.structure.iter().filter(|r| !r.from_weight_one).all(|r| r.eigenspace_dim <= c),
        products_match: res.diagnostics.iter().all(|d| d.product_matches_eps_p),
        ordinary: res.diagnostics.iter().all(|d| d.weight_p_ordinary),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `q prod (1 - q^n)(1 - q^{23 n})` up to `q^len`.
    fn eta_23(len: usize) -> Vec<i64> {
        let mut c = vec![0i64; len + 1];
        c[1] = 1;
        for n in 1..=len {
            for step in [n, 23 * n] {
                if step > len {
                    continue;
                }
                for i in (step..=len).rev() {
                    c[i] -= c[i - step];
                }
            }
        }
        c
    }

    #[test]
    fn eta_oracle_head() {
        let c = eta_23(16);
        assert_eq!(&c[1..=8], &[1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(c[13], -1);
    }

    #[test]
    fn dihedral_form_of_level_23() {
        let chi = CharacterData::quadratic(23, 5).unwrap();
        let opts = WeightOneOptions {
            output_bound: Some(20),
            ..Default::default()
        };
        let r = weight_one_with_character(23, 5, &chi, &opts).unwrap();
        assert_eq!(r.operator_bound, 14);
        assert_eq!(r.dim_t1, 1);
        let g = &r.eigenforms[0];
        assert!(g.is_multiplicative().unwrap());
        let eta = eta_23(20);
        for n in 1..=20u64 {
            assert_eq!(g.value_fp(n).unwrap() as i64, eta[n as usize].rem_euclid(5), "a_{n}");
        }
        let d = &r.diagnostics[0];
        assert!(d.product_matches_eps_p && d.weight_p_ordinary);
        assert!(eigenspace_structure_check(&r).passed());
    }

    #[test]
    fn no_weight_one_forms_at_level_11() {
        let r = weight_one_algebra(11, 5, &WeightOneOptions::default()).unwrap();
        assert_eq!(r.dim_t1, 0);
        assert!(r.eigenforms.is_empty());
        assert!(eigenspace_structure_check(&r).passed());
    }

    #[test]
    fn preconditions() {
        let o = WeightOneOptions::default();
        assert!(matches!(weight_one_algebra(10, 5, &o), Err(Error::Precondition(_))));
        assert!(matches!(weight_one_algebra(4, 5, &o), Err(Error::Precondition(_))));
        let triv = CharacterData::trivial(23, 5).unwrap();
        assert!(matches!(weight_one_with_character(23, 5, &triv, &o), Err(Error::Parity(_))));
        let chi = CharacterData::quadratic(23, 3).unwrap();
        assert!(weight_one_with_character(23, 3, &chi, &o).is_err());
    }
}
