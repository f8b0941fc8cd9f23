//! Cross-checks between cohomology groups: Shapiro transport, weight shifting, support.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::eigen::{field_of, Embedding, EigenSystem};
use super::ops::{diamond_m_op, diamond_op, hecke_matrix, hecke_matrix_shapiro, HeckeEngine, HeckeOp};
use crate::coeff::{CoeffModule, SymPower, UdModule, WModule};
use crate::cohom::{build_cohomology, CohomPresentation};
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, Poly, PrimeField, Subspace};
use crate::modgrp::hecke_cosets::crt;
use crate::modgrp::intmat::gcd;
use crate::modgrp::{sigma_a, GroupTag, SigmaMode};

/// Matrix of `Sh: H^1(Gamma_1(N), W(M, V)) -> H^1(Gamma_1(NM), V)`, induced by `f -> f((0, 1))`.
pub fn shapiro_map(src: &CohomPresentation, w: &WModule, dst: &CohomPresentation) -> Result<Matrix<PrimeField>> {
    let k = w.inner().dim();
    let slot = w.pair_index(0, 1).expect("(0, 1) is primitive");
    let cache = std::cell::RefCell::new(src.rho_cache());
    let f = src.field();
    let mut out = Matrix::zeros(f, dst.dim_h1(), src.dim_h1());
    for j in 0..src.dim_h1() {
        let mut x = vec![0u64; src.dim_h1()];
        x[j] = 1;
        let m = src.lift_class(&x);
        let u = |g: &crate::modgrp::IntMat2| -> Result<Vec<u64>> {
            let v = src.eval_gamma_cocycle(&m, g, &mut cache.borrow_mut())?;
            Ok(v[slot * k..(slot + 1) * k].to_vec())
        };
        let c = dst.shapiro_up(&u)?;
        let cls = dst.class_of_cocycle(&c)?;
        for (i, &v) in cls.iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Matrix on `H^1` of a module endomorphism commuting with the group action, given blockwise.
pub fn induced_by_module_map(pres: &CohomPresentation, block: &Matrix<PrimeField>) -> Matrix<PrimeField> {
    let k = pres.space().block();
    let h = pres.dim_h1();
    let mut out = Matrix::zeros(pres.field(), h, h);
    for j in 0..h {
        let mut x = vec![0u64; h];
        x[j] = 1;
        let m = pres.lift_class(&x);
        let mut img = vec![0u64; m.len()];
        for (r, chunk) in m.chunks(k).enumerate() {
            img[r * k..(r + 1) * k].copy_from_slice(&block.mul_vec(chunk));
        }
        for (i, &v) in pres.h1_map().project(&img).iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapiroReport {
    pub level_n: u64,
    pub level_m: u64,
    pub n: u64,
    pub d: u64,
    pub mult: u64,
    pub dim_source: usize,
    pub dim_target: usize,
    pub sh_injective: bool,
    pub hecke_commutes: bool,
    pub diamond_n_commutes: bool,
    pub diamond_m_matches_mult: bool,
}

impl ShapiroReport {
    pub fn passed(&self) -> bool {
        self.sh_injective && self.hecke_commutes && self.diamond_n_commutes && self.diamond_m_matches_mult
    }
}

/// Compares `T_n`, `<d>_N` and `<mult>_M` across the Shapiro isomorphism.
/// `mult` must be coprime to `M`.
pub fn shapiro_hecke_check(
    level_n: u64,
    level_m: u64,
    inner: Arc<dyn CoeffModule>,
    n: u64,
    d: u64,
    mult: u64,
) -> Result<ShapiroReport> {
    if gcd(level_n as i128, level_m as i128) != 1 || level_n < 4 {
        return Err(Error::Precondition(format!(
            "Shapiro comparison needs gcd(N, M) = 1 and N >= 4, got N = {level_n}, M = {level_m}"
        )));
    }
    if gcd(mult as i128, level_m as i128) != 1 || gcd(d as i128, level_n as i128) != 1 {
        return Err(Error::Precondition("<d>_N needs gcd(d, N) = 1 and mult_n needs gcd(n, M) = 1".into()));
    }
    let w = WModule::new(level_m, inner.clone())?;
    let src = build_cohomology(GroupTag::Gamma1, level_n, Arc::new(w.clone()))?;
    let dst = build_cohomology(GroupTag::Gamma1, level_n * level_m, inner)?;
    let sh = shapiro_map(&src, &w, &dst)?;
    let sh_injective = sh.rank() == src.dim_h1();

    let t_src = hecke_matrix_shapiro(&src, n, level_m)?;
    let t_dst = hecke_matrix(&dst, n)?;
    let hecke_commutes = t_dst.matrix.mul(&sh) == sh.mul(&t_src.matrix);

    // <d>_N with a matrix congruent to the identity modulo M
    let dd = crt(d as i128, level_n as i128, 1, level_m as i128);
    let alpha = sigma_a(dd as i64, level_n, level_m, SigmaMode::Shapiro)?;
    let mut cache = src.rho_cache();
    let dia_src = src.conjugation(&alpha, &mut cache)?;
    let dia_dst = diamond_m_op(&dst, d as i64, level_n)?;
    let diamond_n_commutes = dia_dst.matrix.mul(&sh) == sh.mul(&dia_src);

    let mult_src = induced_by_module_map(&src, &w.mult_n(mult as i64)?);
    let dia_m = diamond_m_op(&dst, mult as i64, level_m)?;
    let diamond_m_matches_mult = dia_m.matrix.mul(&sh) == sh.mul(&mult_src);

    Ok(ShapiroReport {
        level_n,
        level_m,
        n,
        d,
        mult,
        dim_source: src.dim_h1(),
        dim_target: dst.dim_h1(),
        sh_injective,
        hecke_commutes,
        diamond_n_commutes,
        diamond_m_matches_mult,
    })
}

/// The subspace of `H^1_par` where `<x>` acts by `lambda`.
pub fn diamond_eigenspace(pres: &CohomPresentation, x: u64, lambda: u64) -> Result<Subspace<PrimeField>> {
    let dia = diamond_op(pres, x as i64)?;
    let d = dia.par_matrix.rows();
    Ok(dia.par_matrix.sub(&Matrix::scalar(pres.field(), d, lambda)).kernel())
}

/// Least generator of `(Z/p)^*`.
pub fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let fs = crate::modgrp::intmat::prime_divisors(phi);
    let f = PrimeField::new(p).expect("prime");
    (2..p)
        .find(|&g| fs.iter().all(|&q| f.pow(g, (phi / q) as u128) != 1))
        .unwrap_or(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    pub level: u64,
    pub p: u64,
    pub d: u32,
    pub dim_eigenspace: usize,
    pub dim_vd: usize,
    pub dim_complement: usize,
    pub dim_ud: usize,
    pub dims_match: bool,
    /// `(l, characteristic polynomials agree)`
    pub hecke_multisets: Vec<(u64, bool)>,
    /// `T_p` on `H^1_par(Gamma_1(N), U_d)` vanishes on the twisted quotient.
    pub tp_kills_quotient: bool,
}

impl TwistReport {
    pub fn passed(&self) -> bool {
        self.dims_match && self.hecke_multisets.iter().all(|x| x.1) && self.tp_kills_quotient
    }
}

fn sym(n: u32, f: PrimeField) -> Arc<dyn CoeffModule> {
    Arc::new(SymPower::new(n, f))
}

/// `H^1_par(Gamma_1(Np), F_p)(d)` against `H^1_par(Gamma_1(N), V_d)` and the
/// `[d]`-twist of `H^1_par(Gamma_1(N), V_{p-1-d})`.
pub fn twist_check(level: u64, p: u64, d: u32, primes: &[u64]) -> Result<TwistReport> {
    if level.is_multiple_of(p) || level < 4 || d == 0 || d as u64 > p - 1 {
        return Err(Error::Precondition(format!(
            "weight shifting needs p not dividing N, N >= 4 and 0 < d <= p - 1 (N = {level}, p = {p}, d = {d})"
        )));
    }
    let f = PrimeField::new(p)?;
    let big = build_cohomology(GroupTag::Gamma1, level * p, sym(0, f))?;
    let g = primitive_root(p);
    let x = crt(g as i128, p as i128, 1, level as i128) as u64;
    let eig = diamond_eigenspace(&big, x, f.pow(g, d as u128))?;
    let vd = build_cohomology(GroupTag::Gamma1, level, sym(d, f))?;
    let ve = build_cohomology(GroupTag::Gamma1, level, sym(p as u32 - 1 - d, f))?;
    let ud = build_cohomology(GroupTag::Gamma1, level, Arc::new(UdModule::new(d, f)?))?;
    let dims_match = eig.dim() == vd.dim_par() + ve.dim_par() && ud.dim_par() == eig.dim();
    let mut hecke_multisets = Vec::new();
    for &l in primes {
        if l == p || level.is_multiple_of(l) {
            continue;
        }
        let tb = hecke_matrix(&big, l)?;
        let left = eig.restrict(&tb.par_matrix).charpoly()?;
        let a = hecke_matrix(&vd, l)?.par_matrix.charpoly()?;
        let twist = f.pow(f.from_int(l as i64), d as u128);
        let b = hecke_matrix(&ve, l)?.par_matrix.scale(twist).charpoly()?;
        hecke_multisets.push((l, left == a.mul(&b)));
    }
    let tp_u = hecke_matrix(&ud, p)?.par_matrix.charpoly()?;
    let tp_v = hecke_matrix(&vd, p)?.par_matrix.charpoly()?;
    let mut xpow = vec![0u64; ve.dim_par() + 1];
    xpow[ve.dim_par()] = 1;
    let tp_kills_quotient = tp_u == tp_v.mul(&Poly::new(f, xpow));
    Ok(TwistReport {
        level,
        p,
        d,
        dim_eigenspace: eig.dim(),
        dim_vd: vd.dim_par(),
        dim_complement: ve.dim_par(),
        dim_ud: ud.dim_par(),
        dims_match,
        hecke_multisets,
        tp_kills_quotient,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    pub weight: u32,
    pub complementary_weight: u32,
    /// Dimension of the matching twisted eigenspace in the complementary weight.
    pub matching_dim: usize,
    pub in_support: bool,
}

/// Whether a weight-`k` system also occurs, twisted by `l^{k-1}`, in
/// `H^1_par(Gamma_1(N), V_{p+1-k})`. Uses the prime labels of `sys`.
pub fn support_diagnostic(level: u64, p: u64, k: u32, sys: &EigenSystem) -> Result<SupportReport> {
    if k < 2 || k as u64 > p + 1 {
        return Err(Error::Precondition(format!("weight {k} outside 2..=p+1")));
    }
    let f = PrimeField::new(p)?;
    let comp = build_cohomology(GroupTag::Gamma1, level, sym(p as u32 + 1 - k, f))?;
    let kf = field_of(&sys.field)?;
    let emb = Embedding::new(&f, &kf)?;
    let dim = comp.dim_par();
    let mut space = Subspace::full(kf.clone(), dim);
    for (&l, coeffs) in &sys.values {
        if l == 1 || l == p || level.is_multiple_of(l) || !crate::fflin::is_prime(l) {
            continue;
        }
        let t: HeckeOp = hecke_matrix(&comp, l)?;
        let tk = emb.matrix(&f, &t.par_matrix);
        let scale = kf.pow(kf.from_int(l as i64), (k - 1) as u128);
        let lam = kf.from_coeffs(coeffs);
        let m = tk.scale(scale).sub(&Matrix::scalar(kf.clone(), dim, lam));
        let ker = m.kernel();
        space = space.intersection(&ker);
        if space.dim() == 0 {
            break;
        }
    }
    Ok(SupportReport {
        weight: k,
        complementary_weight: p as u32 + 3 - k,
        matching_dim: space.dim(),
        in_support: space.dim() > 0,
    })
}


#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    /// `T_2 T_3 = T_6` with `T_6` from its own coset list.
    pub product_relation: bool,
    /// `T_4` from its cosets against `T_2^2 - 2^{k-1}<2>`, or `T_2^2` when `2 | N`.
    pub prime_power_relation: bool,
    /// The recursive and direct `T_4`, `T_6` coincide.
    pub recursion_matches_direct: bool,
    pub pairwise_commute: bool,
    pub parabolic_stable: bool,
}

impl EulerReport {
    pub fn passed(&self) -> bool {
        self.product_relation
            && self.prime_power_relation
            && self.recursion_matches_direct
            && self.pairwise_commute
            && self.parabolic_stable
    }
}

/// Hecke relations in `n = 4, 6` by two independent routes.
pub fn euler_check(pres: &CohomPresentation) -> Result<EulerReport> {
    let Some(w) = pres.module().scalar_weight() else {
        return Err(Error::Precondition("the relations are checked on modules with a scalar weight".into()));
    };
    let f = pres.field();
    let level = pres.table().level();
    let mut e = HeckeEngine::new(pres);
    let t2 = e.prime(2)?.clone();
    let t3 = e.prime(3)?.clone();
    let t4 = e.direct(4)?;
    let t6 = e.direct(6)?;
    let product_relation = t2.matrix.mul(&t3.matrix) == t6.matrix;
    let sq = t2.matrix.mul(&t2.matrix);
    let mut ops = vec![t2.clone(), t3, t4.clone(), t6.clone()];
    let prime_power_relation = if level.is_multiple_of(2) {
        sq == t4.matrix
    } else {
        let d2 = e.diamond(2)?.clone();
        let rhs = sq.sub(&d2.matrix.scale(f.pow(2, (w + 1) as u128)));
        ops.push(d2);
        rhs == t4.matrix
    };
    let recursion_matches_direct = e.t(4)?.matrix == t4.matrix && e.t(6)?.matrix == t6.matrix;
    let pairwise_commute = ops.iter().all(|a| {
        ops.iter()
            .all(|b| a.matrix.commutes_with(&b.matrix) && a.par_matrix.commutes_with(&b.par_matrix))
    });
    let parabolic_stable = ops.iter().all(|a| a.check_parabolic(pres));
    Ok(EulerReport {
        product_relation,
        prime_power_relation,
        recursion_matches_direct,
        pairwise_commute,
        parabolic_stable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub group: GroupTag,
    pub level: u64,
    pub weight: u32,
    pub p: u64,
    pub dim_h1: usize,
    pub dim_par: usize,
    pub genus: u64,
    pub cusps: usize,
    /// `2g` in weight two.
    pub expected_par: Option<usize>,
    /// `dim H^1 - dim H^0 = index * dim V / 6` when the elliptic elements act freely.
    pub euler_identity: Option<bool>,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.expected_par.is_none_or(|d| d == self.dim_par) && self.euler_identity.unwrap_or(true)
    }
}

pub fn dimension_check(group: GroupTag, level: u64, weight: u32, p: u64) -> Result<DimensionReport> {
    if weight < 2 {
        return Err(Error::Precondition(format!("weight must be at least 2, got {weight}")));
    }
    let f = PrimeField::new(p)?;
    let pres = build_cohomology(group, level, sym(weight - 2, f))?;
    let table = pres.table();
    let (e2, e3) = table.elliptic_counts();
    let euler_identity = (e2 == 0 && e3 == 0).then(|| pres.dim_h1() == pres.space().dim() / 6 + pres.coinvariant_dim());
    Ok(DimensionReport {
        group,
        level,
        weight,
        p,
        dim_h1: pres.dim_h1(),
        dim_par: pres.dim_par(),
        genus: table.genus(),
        cusps: table.cusp_count(),
        expected_par: (weight == 2).then(|| 2 * table.genus() as usize),
        euler_identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapiro_small() {
        let f = PrimeField::new(7).unwrap();
        let r = shapiro_hecke_check(4, 3, sym(0, f), 2, 3, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        // d = 1: both diamonds are the identity
        let r1 = shapiro_hecke_check(4, 3, sym(0, f), 1, 1, 1).unwrap();
        assert!(r1.passed());
        assert!(shapiro_hecke_check(4, 2, sym(0, f), 2, 1, 1).is_err());
    }

    #[test]
    fn shapiro_criterion_levels() {
        let f = PrimeField::new(7).unwrap();
        let r = shapiro_hecke_check(4, 5, sym(0, f), 2, 3, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = shapiro_hecke_check(5, 4, sym(0, f), 2, 2, 3).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn twist_small_levels() {
        assert!(twist_check(5, 5, 1, &[2]).is_err());
        for d in 1..=4 {
            let r = twist_check(7, 5, d, &[2, 3]).unwrap();
            eprintln!("{r:?}");
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn relations_and_dimensions() {
        let f = PrimeField::new(7).unwrap();
        let pres = build_cohomology(GroupTag::Gamma1, 5, sym(2, f)).unwrap();
        assert!(euler_check(&pres).unwrap().passed());
        let even = build_cohomology(GroupTag::Gamma1, 8, sym(1, f)).unwrap();
        assert!(euler_check(&even).unwrap().passed());
        let d = dimension_check(GroupTag::Gamma1, 13, 2, 5).unwrap();
        assert_eq!((d.dim_par, d.genus), (4, 2));
        assert!(d.passed());
        let d0 = dimension_check(GroupTag::Gamma0, 37, 2, 7).unwrap();
        assert_eq!(d0.dim_par, 4);
        assert_eq!(d0.euler_identity, None);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(23), 5);
    }
}
