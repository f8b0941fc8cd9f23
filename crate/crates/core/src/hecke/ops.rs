use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohom::{CohomPresentation, RhoCache};
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, PrimeField};
use crate::modgrp::hecke_cosets::crt;
use crate::modgrp::intmat::{gcd, prime_divisors};
use crate::modgrp::{diamond_matrix, sigma_a, HeckeCosets, IntMat2, SigmaMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeckeKind {
    T,
    Diamond { d: u64 },
    /// The part of `<d>` living on the factor `m` of the level.
    DiamondM { d: u64, m: u64 },
    /// `T_{l,l}`: the double coset of `l` times the identity.
    Scalar { l: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeOp {
    pub n: u64,
    pub kind: HeckeKind,
    pub matrix: Matrix<PrimeField>,
    pub par_matrix: Matrix<PrimeField>,
}

impl HeckeOp {
    fn from_matrix(pres: &CohomPresentation, n: u64, kind: HeckeKind, matrix: Matrix<PrimeField>) -> Result<Self> {
        let par = pres.par_subspace();
        if !par.is_invariant(&matrix) {
            return Err(Error::CocycleCheck(format!("{kind:?} (n = {n}) does not preserve the parabolic subspace")));
        }
        let par_matrix = par.restrict(&matrix);
        Ok(HeckeOp {
            n,
            kind,
            matrix,
            par_matrix,
        })
    }

    /// `inclusion * par_matrix == matrix * inclusion`
    pub fn check_parabolic(&self, pres: &CohomPresentation) -> bool {
        let inc = pres.parabolic_inclusion();
        inc.mul(&self.par_matrix) == self.matrix.mul(&inc)
    }

    pub fn identity(pres: &CohomPresentation) -> Self {
        let f = pres.field();
        HeckeOp {
            n: 1,
            kind: HeckeKind::T,
            matrix: Matrix::identity(f, pres.dim_h1()),
            par_matrix: Matrix::identity(f, pres.dim_par()),
        }
    }

    fn compose(&self, o: &Self, n: u64, kind: HeckeKind) -> Self {
        HeckeOp {
            n,
            kind,
            matrix: self.matrix.mul(&o.matrix),
            par_matrix: self.par_matrix.mul(&o.par_matrix),
        }
    }

    fn sub_scaled(&mut self, a: u64, o: &Self) {
        let f = *self.matrix.field();
        let na = f.neg(a);
        self.matrix.add_scaled(na, &o.matrix);
        self.par_matrix.add_scaled(na, &o.par_matrix);
    }
}

/// `T_n` from the coset representatives of the determinant-`n` matrices.
pub fn hecke_matrix(pres: &CohomPresentation, n: u64) -> Result<HeckeOp> {
    let mut cache = pres.rho_cache();
    hecke_matrix_cached(pres, n, &mut cache)
}

fn hecke_matrix_cached(pres: &CohomPresentation, n: u64, cache: &mut RhoCache) -> Result<HeckeOp> {
    if n == 1 {
        return Ok(HeckeOp::identity(pres));
    }
    let t = pres.table();
    let cosets = HeckeCosets::build(n, t.level(), t.group())?;
    let m = pres.correspondence(&cosets.reps, &|y| cosets.locate(y), cache)?;
    HeckeOp::from_matrix(pres, n, HeckeKind::T, m)
}

/// `T_n` on `H^1(Gamma_1(N), W(M, V))` with representatives `sigma_a` also fixed modulo `M`.
pub fn hecke_matrix_shapiro(pres: &CohomPresentation, n: u64, m: u64) -> Result<HeckeOp> {
    if n == 1 {
        return Ok(HeckeOp::identity(pres));
    }
    let t = pres.table();
    let cosets = HeckeCosets::build_with(n, t.level(), m, SigmaMode::Shapiro, t.group())?;
    let mut cache = pres.rho_cache();
    let mat = pres.correspondence(&cosets.reps, &|y| cosets.locate(y), &mut cache)?;
    HeckeOp::from_matrix(pres, n, HeckeKind::T, mat)
}

pub fn diamond_op(pres: &CohomPresentation, d: i64) -> Result<HeckeOp> {
    let mut cache = pres.rho_cache();
    diamond_cached(pres, d, &mut cache)
}

fn diamond_cached(pres: &CohomPresentation, d: i64, cache: &mut RhoCache) -> Result<HeckeOp> {
    let level = pres.table().level();
    let alpha = diamond_matrix(d, level)?;
    let m = pres.conjugation(&alpha, cache)?;
    let dd = (d as i128).rem_euclid(level as i128) as u64;
    HeckeOp::from_matrix(pres, dd, HeckeKind::Diamond { d: dd }, m)
}

/// `<d>_M` for a factor `M` of the level coprime to its cofactor: `<d'>` with
/// `d' = d mod M` and `d' = 1` modulo the cofactor.
pub fn diamond_m_op(pres: &CohomPresentation, d: i64, m: u64) -> Result<HeckeOp> {
    let level = pres.table().level();
    if m == 0 || !level.is_multiple_of(m) || gcd(m as i128, (level / m) as i128) != 1 {
        return Err(Error::Precondition(format!("{m} must be a unitary divisor of the level {level}")));
    }
    let dd = crt((d as i128).rem_euclid(m as i128), m as i128, 1, (level / m) as i128);
    let mut op = diamond_op(pres, dd as i64)?;
    op.kind = HeckeKind::DiamondM {
        d: (d as i128).rem_euclid(m as i128) as u64,
        m,
    };
    Ok(op)
}

/// `T_{l,l}`, given by the single representative `l sigma_l`.
pub fn scalar_op(pres: &CohomPresentation, l: u64) -> Result<HeckeOp> {
    let mut cache = pres.rho_cache();
    scalar_cached(pres, l, &mut cache)
}

fn scalar_cached(pres: &CohomPresentation, l: u64, cache: &mut RhoCache) -> Result<HeckeOp> {
    let level = pres.table().level();
    let s = sigma_a(l as i64, level, 1, SigmaMode::Plain)?;
    let li = l as i128;
    let delta = IntMat2::new(li * s.a, li * s.b, li * s.c, li * s.d);
    let si = s.inverse_sl2()?;
    let n2 = li * li;
    let m = pres.correspondence(
        &[delta],
        &|y: &IntMat2| {
            if y.det() != n2 {
                return Err(Error::Precondition("determinant mismatch".into()));
            }
            let z = y.div_exact(li).ok_or_else(|| Error::Precondition("not divisible".into()))?;
            Ok((0, z.try_mul(&si)?))
        },
        cache,
    )?;
    HeckeOp::from_matrix(pres, l, HeckeKind::Scalar { l }, m)
}

/// Factorisation as `(prime, exponent)` pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    prime_divisors(n)
        .into_iter()
        .map(|l| {
            let mut e = 0;
            let mut m = n;
            while m.is_multiple_of(l) {
                m /= l;
                e += 1;
            }
            (l, e)
        })
        .collect()
}

/// `T_n` from prime operators by `T_nT_m = T_{nm}` for coprime `n, m` and
/// `T_{l^{r+1}} = T_{l^r} T_l - l^{k-1} <l> T_{l^{r-1}}` (the last term absent when `l | N`).
pub fn hecke_composite(
    primes: &BTreeMap<u64, HeckeOp>,
    diamonds: &BTreeMap<u64, HeckeOp>,
    n: u64,
    k: u32,
    level: u64,
) -> Result<HeckeOp> {
    let any = primes
        .values()
        .next()
        .ok_or_else(|| Error::MissingOperator("no prime operators supplied".into()))?;
    let f = *any.matrix.field();
    let mut acc = HeckeOp {
        n: 1,
        kind: HeckeKind::T,
        matrix: Matrix::identity(f, any.matrix.rows()),
        par_matrix: Matrix::identity(f, any.par_matrix.rows()),
    };
    for (l, e) in factorize(n) {
        let tl = primes.get(&l).ok_or_else(|| Error::MissingOperator(format!("T_{l}")))?;
        let scalar = if level.is_multiple_of(l) || e == 1 {
            None
        } else {
            let dia = diamonds
                .get(&(l % level))
                .ok_or_else(|| Error::MissingOperator(format!("<{l}>")))?;
            Some((f.pow(f.from_int(l as i64), (k as u128).saturating_sub(1)), dia))
        };
        let mut prev = acc.clone();
        prev.matrix = Matrix::identity(f, tl.matrix.rows());
        prev.par_matrix = Matrix::identity(f, tl.par_matrix.rows());
        let mut cur = tl.clone();
        let mut q = l;
        for _ in 1..e {
            q *= l;
            let mut next = cur.compose(tl, q, HeckeKind::T);
            if let Some((c, dia)) = scalar {
                next.sub_scaled(c, &dia.compose(&prev, q, HeckeKind::T));
            }
            prev = cur;
            cur = next;
        }
        acc = acc.compose(&cur, acc.n * q, HeckeKind::T);
    }
    acc.n = n;
    Ok(acc)
}

/// Computes and memoises prime, diamond and composite operators on one presentation.
#[derive(Debug)]
pub struct HeckeEngine<'a> {
    pres: &'a CohomPresentation,
    cache: RhoCache,
    primes: BTreeMap<u64, HeckeOp>,
    diamonds: BTreeMap<u64, HeckeOp>,
    scalars: BTreeMap<u64, HeckeOp>,
    composites: BTreeMap<u64, HeckeOp>,
}

impl<'a> HeckeEngine<'a> {
    pub fn new(pres: &'a CohomPresentation) -> Self {
        HeckeEngine {
            pres,
            cache: pres.rho_cache(),
            primes: BTreeMap::new(),
            diamonds: BTreeMap::new(),
            scalars: BTreeMap::new(),
            composites: BTreeMap::new(),
        }
    }

    pub fn presentation(&self) -> &'a CohomPresentation {
        self.pres
    }

    pub fn prime(&mut self, l: u64) -> Result<&HeckeOp> {
        if !self.primes.contains_key(&l) {
            let op = hecke_matrix_cached(self.pres, l, &mut self.cache)?;
            self.primes.insert(l, op);
        }
        Ok(&self.primes[&l])
    }

    pub fn diamond(&mut self, d: u64) -> Result<&HeckeOp> {
        let level = self.pres.table().level();
        let key = d % level;
        if !self.diamonds.contains_key(&key) {
            let op = diamond_cached(self.pres, key as i64, &mut self.cache)?;
            self.diamonds.insert(key, op);
        }
        Ok(&self.diamonds[&key])
    }

    fn scalar(&mut self, l: u64) -> Result<&HeckeOp> {
        if !self.scalars.contains_key(&l) {
            let op = scalar_cached(self.pres, l, &mut self.cache)?;
            self.scalars.insert(l, op);
        }
        Ok(&self.scalars[&l])
    }

    /// Direct computation from the coset representatives, bypassing recursion.
    pub fn direct(&mut self, n: u64) -> Result<HeckeOp> {
        hecke_matrix_cached(self.pres, n, &mut self.cache)
    }

    /// `T_n`, by recursion from prime operators.
    pub fn t(&mut self, n: u64) -> Result<HeckeOp> {
        if n == 0 {
            return Err(Error::Precondition("T_0 is undefined".into()));
        }
        if n == 1 {
            return Ok(HeckeOp::identity(self.pres));
        }
        if let Some(op) = self.composites.get(&n) {
            return Ok(op.clone());
        }
        let level = self.pres.table().level();
        let fac = factorize(n);
        for &(l, e) in &fac {
            self.prime(l)?;
            if e > 1 && !level.is_multiple_of(l) {
                match self.pres.module().scalar_weight() {
                    Some(_) => {
                        self.diamond(l)?;
                    }
                    None => {
                        self.scalar(l)?;
                    }
                }
            }
        }
        let op = match self.pres.module().scalar_weight() {
            Some(w) => hecke_composite(&self.primes, &self.diamonds, n, w + 2, level)?,
            None => self.composite_general(n)?,
        };
        self.composites.insert(n, op.clone());
        Ok(op)
    }

    /// The recursion with `l T_{l,l}` in place of `l^{k-1} <l>`.
    fn composite_general(&mut self, n: u64) -> Result<HeckeOp> {
        let level = self.pres.table().level();
        let f = self.pres.field();
        let mut acc = HeckeOp::identity(self.pres);
        for (l, e) in factorize(n) {
            let tl = self.primes[&l].clone();
            let mut prev = HeckeOp::identity(self.pres);
            let mut cur = tl.clone();
            let mut q = l;
            for _ in 1..e {
                q *= l;
                let mut next = cur.compose(&tl, q, HeckeKind::T);
                if !level.is_multiple_of(l) {
                    let s = self.scalars[&l].compose(&prev, q, HeckeKind::T);
                    next.sub_scaled(f.from_int(l as i64), &s);
                }
                prev = cur;
                cur = next;
            }
            acc = acc.compose(&cur, acc.n * q, HeckeKind::T);
        }
        acc.n = n;
        Ok(acc)
    }

    pub fn primes(&self) -> &BTreeMap<u64, HeckeOp> {
        &self.primes
    }
    pub fn diamonds(&self) -> &BTreeMap<u64, HeckeOp> {
        &self.diamonds
    }
}

/// Fitting decomposition: the largest subspace on which `a` is invertible, as columns.
pub fn invertible_part<F: Field>(a: &Matrix<F>) -> crate::fflin::Subspace<F> {
    let n = a.rows();
    let mut m = a.clone();
    let mut e = 1usize;
    while e < n.max(1) {
        m = m.mul(&m);
        e *= 2;
    }
    m.image()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::SymPower;
    use crate::cohom::build_cohomology;
    use crate::modgrp::GroupTag;
    use std::sync::Arc;

    fn pres(g: GroupTag, n: u64, k: u32, p: u64) -> CohomPresentation {
        build_cohomology(g, n, Arc::new(SymPower::new(k, PrimeField::new(p).unwrap()))).unwrap()
    }

    /// `a_l = l + 1 - #E(F_l)` for `y^2 + y = x^3 - x^2 - 10x - 20`.
    fn a_l_11a(l: i64) -> i64 {
        let mut count = 1;
        for x in 0..l {
            for y in 0..l {
                let lhs = (y * y + y).rem_euclid(l);
                let rhs = (x * x * x - x * x - 10 * x - 20).rem_euclid(l);
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        l + 1 - count
    }

    #[test]
    fn elliptic_curve_eigenvalues() {
        assert_eq!(a_l_11a(2), -2);
        assert_eq!(a_l_11a(3), -1);
        for p in [5u64, 7] {
            let c = pres(GroupTag::Gamma1, 11, 0, p);
            let f = c.field();
            for l in [2u64, 3, 7, 13] {
                if l == p {
                    continue;
                }
                let t = hecke_matrix(&c, l).unwrap();
                let a = f.from_int(a_l_11a(l as i64));
                assert_eq!(t.par_matrix, Matrix::scalar(f, 2, a), "p={p} l={l}");
                assert!(t.check_parabolic(&c));
            }
        }
    }

    #[test]
    fn t1_is_identity_and_diamonds() {
        let c = pres(GroupTag::Gamma1, 11, 2, 7);
        assert!(hecke_matrix(&c, 1).unwrap().matrix.is_identity());
        assert!(diamond_op(&c, 1).unwrap().matrix.is_identity());
        assert!(diamond_op(&c, 10).unwrap().matrix.is_identity());
        let d2 = diamond_op(&c, 2).unwrap();
        // 2 generates (Z/11)^*; the action factors through (Z/11)^*/{+-1} of order 5
        assert!(d2.matrix.pow(5).is_identity());
        assert!(diamond_op(&c, 11).is_err());
        let odd = pres(GroupTag::Gamma1, 11, 1, 7);
        let m = diamond_op(&odd, 10).unwrap();
        assert_eq!(m.matrix, Matrix::scalar(odd.field(), odd.dim_h1(), 6));
    }

    fn check_relations(c: &CohomPresentation, k: u32) {
        let f = c.field();
        let mut e = HeckeEngine::new(c);
        let t2 = e.prime(2).unwrap().clone();
        let t3 = e.prime(3).unwrap().clone();
        let d2 = e.diamond(2).unwrap().clone();
        let t4 = e.direct(4).unwrap();
        let t6 = e.direct(6).unwrap();
        assert_eq!(t2.matrix.mul(&t3.matrix), t6.matrix);
        let rec = t2.matrix.mul(&t2.matrix).sub(&d2.matrix.scale(f.from_int(1 << (k - 1))));
        assert_eq!(rec, t4.matrix);
        assert_eq!(e.t(4).unwrap(), t4);
        assert_eq!(e.t(6).unwrap().matrix, t6.matrix);
        let all = [&t2, &t3, &d2, &t4, &t6];
        for a in all {
            for b in all {
                assert!(a.matrix.commutes_with(&b.matrix));
                assert!(a.par_matrix.commutes_with(&b.par_matrix));
            }
            assert!(a.check_parabolic(c));
        }
    }

    #[test]
    fn euler_relations_dual_path() {
        check_relations(&pres(GroupTag::Gamma1, 5, 2, 7), 4);
        check_relations(&pres(GroupTag::Gamma1, 7, 2, 5), 4);
        check_relations(&pres(GroupTag::Gamma1, 5, 4, 7), 6);
    }

    #[test]
    fn general_recursion_matches_direct() {
        // without a scalar weight the recursion goes through T_{l,l}
        let f = PrimeField::new(5).unwrap();
        let u = Arc::new(crate::coeff::UdModule::new(2, f).unwrap());
        let c = build_cohomology(GroupTag::Gamma1, 7, u).unwrap();
        let mut e = HeckeEngine::new(&c);
        assert_eq!(e.t(4).unwrap().matrix, e.direct(4).unwrap().matrix);
        assert_eq!(e.t(9).unwrap().matrix, e.direct(9).unwrap().matrix);
        // on V_n, T_{l,l} = l^n <l>
        let c2 = pres(GroupTag::Gamma1, 7, 3, 11);
        let s = scalar_op(&c2, 2).unwrap();
        let d = diamond_op(&c2, 2).unwrap();
        assert_eq!(s.matrix, d.matrix.scale(8));
    }

    #[test]
    fn level_dividing_prime() {
        let c = pres(GroupTag::Gamma1, 10, 1, 7);
        let mut e = HeckeEngine::new(&c);
        let t5 = e.prime(5).unwrap().clone();
        assert_eq!(e.direct(25).unwrap().matrix, t5.matrix.mul(&t5.matrix));
        let t2 = e.prime(2).unwrap().clone();
        assert!(t2.matrix.commutes_with(&t5.matrix));
    }

    #[test]
    fn coset_order_does_not_matter() {
        // reversing the representative list gives the same operator
        let c = pres(GroupTag::Gamma1, 7, 2, 5);
        let t = c.table();
        let cosets = HeckeCosets::build(3, t.level(), t.group()).unwrap();
        let mut rev = cosets.clone();
        rev.reps.reverse();
        let idx: Vec<usize> = (0..cosets.len()).rev().collect();
        let mut cache = c.rho_cache();
        let a = c.correspondence(&cosets.reps, &|y| cosets.locate(y), &mut cache).unwrap();
        let b = c
            .correspondence(
                &rev.reps,
                &|y| {
                    let (j, z) = cosets.locate(y)?;
                    Ok((idx[j], z))
                },
                &mut cache,
            )
            .unwrap();
        assert_eq!(a, b);
        // other choices of sigma_a: multiply each representative by an element of Gamma
        let g = IntMat2::new(1, 1, 0, 1);
        let shifted: Vec<IntMat2> = cosets.reps.iter().map(|r| g * *r).collect();
        let d = c
            .correspondence(
                &shifted,
                &|y| {
                    let (j, z) = cosets.locate(y)?;
                    Ok((j, z * g.inverse_sl2()?))
                },
                &mut cache,
            )
            .unwrap();
        assert_eq!(a, d);
    }

    #[test]
    fn gamma0_hecke() {
        let c = pres(GroupTag::Gamma0, 11, 0, 5);
        let t2 = hecke_matrix(&c, 2).unwrap();
        assert_eq!(t2.par_matrix, Matrix::scalar(c.field(), 2, 3));
    }
}
