//! The coinduced module `M = Coind_Gamma^{PSL2(Z)}(V)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coeff::CoeffModule;
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, PrimeField};
use crate::modgrp::{CosetTable, GroupTag, IntMat2, IDENTITY, SIGMA, T, TAU};

/// Memoised `rho(A)` keyed by `A` modulo the module's period.
#[derive(Debug)]
pub struct RhoCache {
    module: Arc<dyn CoeffModule>,
    period: i128,
    map: HashMap<[i128; 4], Arc<Matrix<PrimeField>>>,
}

impl RhoCache {
    pub fn new(module: Arc<dyn CoeffModule>) -> Self {
        let period = module.period() as i128;
        RhoCache {
            module,
            period,
            map: HashMap::new(),
        }
    }

    pub fn get(&mut self, a: &IntMat2) -> Result<Arc<Matrix<PrimeField>>> {
        let key = a.reduce_mod(self.period);
        if let Some(m) = self.map.get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.module.act(a)?);
        self.map.insert(key, m.clone());
        Ok(m)
    }
}

/// Which generator of PSL2(Z) an action table refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    Sigma,
    Tau,
    T,
}

impl Gen {
    pub fn matrix(self) -> IntMat2 {
        match self {
            Gen::Sigma => SIGMA,
            Gen::Tau => TAU,
            Gen::T => T,
        }
    }
}

#[derive(Clone, Debug)]
struct GenAction {
    target: Vec<usize>,
    gamma: Vec<IntMat2>,
    rho: Vec<Arc<Matrix<PrimeField>>>,
}

/// `M = V^{cosets}` with `(g f)_r = rho(gamma(r, g)) f_{r g}`, where
/// `rep_r g = gamma(r, g) rep_{r g}` in PSL2(Z).
#[derive(Clone, Debug)]
pub struct CoinducedSpace {
    table: Arc<CosetTable>,
    inner: Arc<dyn CoeffModule>,
    k: usize,
    actions: [GenAction; 3],
}

impl CoinducedSpace {
    pub fn new(table: Arc<CosetTable>, inner: Arc<dyn CoeffModule>) -> Result<Self> {
        let k = inner.dim();
        let mut cache = RhoCache::new(inner.clone());
        if table.group() == GroupTag::Gamma0 {
            let minus = cache.get(&-IDENTITY)?;
            if !minus.is_identity() {
                return Err(Error::Precondition(
                    "-1 lies in Gamma_0(N) and must act trivially on the coefficients (odd weight)".into(),
                ));
            }
        }
        let mut build = |g: Gen| -> Result<GenAction> {
            let mut target = Vec::with_capacity(table.len());
            let mut gamma = Vec::with_capacity(table.len());
            let mut rho = Vec::with_capacity(table.len());
            for r in 0..table.len() {
                let (j, gm) = match g {
                    Gen::Sigma => table.act_sigma(r),
                    Gen::Tau => table.act_tau(r),
                    Gen::T => table.act(r, &T),
                };
                target.push(j);
                gamma.push(gm);
                rho.push(cache.get(&gm)?);
            }
            Ok(GenAction { target, gamma, rho })
        };
        let actions = [build(Gen::Sigma)?, build(Gen::Tau)?, build(Gen::T)?];
        Ok(CoinducedSpace {
            table,
            inner,
            k,
            actions,
        })
    }

    pub fn table(&self) -> &Arc<CosetTable> {
        &self.table
    }
    pub fn inner(&self) -> &Arc<dyn CoeffModule> {
        &self.inner
    }
    pub fn field(&self) -> PrimeField {
        self.inner.field()
    }
    /// Dimension of the coefficient module.
    pub fn block(&self) -> usize {
        self.k
    }
    pub fn dim(&self) -> usize {
        self.table.len() * self.k
    }
    pub fn cosets(&self) -> usize {
        self.table.len()
    }

    fn action(&self, g: Gen) -> &GenAction {
        &self.actions[g as usize]
    }

    /// `(r g, gamma(r, g))`
    pub fn step(&self, r: usize, g: Gen) -> (usize, IntMat2) {
        let a = self.action(g);
        (a.target[r], a.gamma[r])
    }

    pub fn rho_at(&self, r: usize, g: Gen) -> &Matrix<PrimeField> {
        &self.action(g).rho[r]
    }

    pub fn apply(&self, g: Gen, v: &[u64]) -> Vec<u64> {
        let a = self.action(g);
        let k = self.k;
        let mut out = vec![0u64; self.dim()];
        for r in 0..self.cosets() {
            let s = a.target[r];
            let src = &v[s * k..(s + 1) * k];
            if src.iter().all(|&x| x == 0) {
                continue;
            }
            let img = a.rho[r].mul_vec(src);
            out[r * k..(r + 1) * k].copy_from_slice(&img);
        }
        out
    }

    /// Dense matrix of a generator (for tests and small cases).
    pub fn matrix(&self, g: Gen) -> Matrix<PrimeField> {
        let n = self.dim();
        let k = self.k;
        let a = self.action(g);
        let mut m = Matrix::zeros(self.field(), n, n);
        for r in 0..self.cosets() {
            let s = a.target[r];
            for i in 0..k {
                for j in 0..k {
                    m.set(r * k + i, s * k + j, a.rho[r].get(i, j));
                }
            }
        }
        m
    }

    /// `(orbits, fixed)` of a generator's permutation on cosets; each orbit
    /// starts at its least element.
    pub fn orbits(&self, g: Gen) -> Vec<Vec<usize>> {
        let a = self.action(g);
        let mut seen = vec![false; self.cosets()];
        let mut out = Vec::new();
        for r in 0..self.cosets() {
            if seen[r] {
                continue;
            }
            let mut orb = vec![r];
            seen[r] = true;
            let mut s = a.target[r];
            while s != r {
                seen[s] = true;
                orb.push(s);
                s = a.target[s];
            }
            out.push(orb);
        }
        out
    }

    /// Schreier generators `gamma(r, g)`, `g` in `{sigma, tau}`; they generate the group image.
    pub fn schreier_generators(&self) -> Vec<IntMat2> {
        let mut v: Vec<IntMat2> = Vec::new();
        for g in [Gen::Sigma, Gen::Tau] {
            for r in 0..self.cosets() {
                let gm = self.action(g).gamma[r];
                if !gm.is_pm_identity() && !v.contains(&gm) {
                    v.push(gm);
                }
            }
        }
        v
    }

    /// `dim V_Gamma`, the coinvariants of the coefficient module.
    pub fn coinvariant_dim(&self) -> Result<usize> {
        let f = self.field();
        let k = self.k;
        let mut cache = RhoCache::new(self.inner.clone());
        let id = Matrix::identity(f, k);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for g in self.schreier_generators() {
            let m = cache.get(&g)?.sub(&id);
            for j in 0..k {
                let c = m.column(j);
                if c.iter().any(|&x| x != 0) {
                    cols.push(c);
                }
            }
        }
        if cols.is_empty() {
            return Ok(k);
        }
        let span = crate::fflin::Subspace::from_vectors(f, k, cols);
        Ok(k - span.dim())
    }

    /// `(1 + g + ... + g^{o-1}) e` for a unit vector `e = e_{r,i}`.
    pub fn norm_of_unit(&self, g: Gen, order: usize, r: usize, i: usize) -> Vec<u64> {
        let f = self.field();
        let mut e = vec![0u64; self.dim()];
        e[r * self.k + i] = 1;
        let mut acc = e.clone();
        let mut cur = e;
        for _ in 1..order {
            cur = self.apply(g, &cur);
            for (a, &b) in acc.iter_mut().zip(&cur) {
                *a = f.add(*a, b);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::SymPower;
    use crate::modgrp::build_coset_table;

    fn space(group: GroupTag, n: u64, k: u32, p: u64) -> CoinducedSpace {
        let t = Arc::new(build_coset_table(group, n).unwrap());
        CoinducedSpace::new(t, Arc::new(SymPower::new(k, PrimeField::new(p).unwrap()))).unwrap()
    }

    #[test]
    fn generator_relations_on_m() {
        for (g, n, k, p) in [(GroupTag::Gamma1, 5u64, 3u32, 7u64), (GroupTag::Gamma1, 7, 2, 5), (GroupTag::Gamma0, 11, 2, 7)] {
            let m = space(g, n, k, p);
            let s = m.matrix(Gen::Sigma);
            let t = m.matrix(Gen::Tau);
            let tt = m.matrix(Gen::T);
            assert!(s.mul(&s).is_identity());
            assert!(t.mul(&t).mul(&t).is_identity());
            assert_eq!(t.mul(&s), tt);
        }
    }

    #[test]
    fn odd_weight_gamma0_refused() {
        let t = Arc::new(build_coset_table(GroupTag::Gamma0, 11).unwrap());
        let r = CoinducedSpace::new(t, Arc::new(SymPower::new(3, PrimeField::new(7).unwrap())));
        assert!(r.is_err());
    }

    #[test]
    fn coinvariants_of_trivial_module() {
        assert_eq!(space(GroupTag::Gamma1, 11, 0, 5).coinvariant_dim().unwrap(), 1);
        assert_eq!(space(GroupTag::Gamma1, 11, 2, 5).coinvariant_dim().unwrap(), 0);
    }
}
