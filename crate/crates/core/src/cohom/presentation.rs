//! `H^1(Gamma, V) = M / (M^sigma + M^tau)` and its parabolic subspace.

use std::sync::Arc;

use super::space::{CoinducedSpace, Gen, RhoCache};
use crate::coeff::CoeffModule;
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, PrimeField, QuotientMap, Subspace};
use crate::modgrp::word::{decompose_word, Letter};
use crate::modgrp::{build_coset_table, CosetTable, GroupTag, IntMat2, IDENTITY};

/// A cocycle on PSL2(Z) with values in `M`, given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleRep {
    pub value_sigma: Vec<u64>,
    pub value_tau: Vec<u64>,
}

/// One summand `sign * rho(gamma) m_coset` of a cocycle value at the identity coset.
#[derive(Clone, Copy, Debug)]
pub struct WalkTerm {
    pub coset: usize,
    pub gamma: IntMat2,
    pub negative: bool,
}

#[derive(Clone, Debug)]
pub struct CohomPresentation {
    space: CoinducedSpace,
    h1: QuotientMap<PrimeField>,
    /// per coset: `(component, H^1 index)` of the lifting unit vectors
    lift_pos: Vec<Vec<(usize, usize)>>,
    cusp: QuotientMap<PrimeField>,
    boundary: Matrix<PrimeField>,
    par: Subspace<PrimeField>,
    sigma_orbits: Vec<Vec<usize>>,
    tau_orbits: Vec<Vec<usize>>,
    coinvariant_dim: usize,
}

fn check_torsion_regime(group: GroupTag, level: u64, p: u64) -> Result<()> {
    match group {
        GroupTag::Gamma1 if level < 4 => Err(Error::Precondition(format!(
            "Gamma_1({level}) has torsion in PSL2(Z); level N >= 4 is required"
        ))),
        GroupTag::Gamma0 if p < 5 => Err(Error::Precondition(format!(
            "Gamma_0(N) needs the stabiliser orders 2 and 3 invertible: characteristic p >= 5, got p = {p}"
        ))),
        _ => Ok(()),
    }
}

pub fn build_cohomology(group: GroupTag, level: u64, inner: Arc<dyn CoeffModule>) -> Result<CohomPresentation> {
    check_torsion_regime(group, level, inner.field().p())?;
    let table = Arc::new(build_coset_table(group, level)?);
    CohomPresentation::build(table, inner)
}

impl CohomPresentation {
    pub fn build(table: Arc<CosetTable>, inner: Arc<dyn CoeffModule>) -> Result<Self> {
        check_torsion_regime(table.group(), table.level(), inner.field().p())?;
        let space = CoinducedSpace::new(table, inner)?;
        let f = space.field();
        let n = space.dim();
        let k = space.block();
        let sigma_orbits = space.orbits(Gen::Sigma);
        let tau_orbits = space.orbits(Gen::Tau);

        // M^sigma + M^tau = (1 + sigma) M + (1 + tau + tau^2) M
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for orb in &sigma_orbits {
            for i in 0..k {
                rows.push(space.norm_of_unit(Gen::Sigma, 2, orb[0], i));
            }
        }
        for orb in &tau_orbits {
            for i in 0..k {
                rows.push(space.norm_of_unit(Gen::Tau, 3, orb[0], i));
            }
        }
        let rel = Subspace::from_vectors(f, n, rows);
        let h1 = QuotientMap::new(&rel);
        let mut lift_pos = vec![Vec::new(); space.cosets()];
        for (j, &idx) in h1.lift_indices.iter().enumerate() {
            lift_pos[idx / k].push((idx % k, j));
        }

        // boundary into M / (1 - T) M, m -> tau (1 - sigma) m
        let mut trows = Vec::with_capacity(n);
        for idx in 0..n {
            let mut e = vec![0u64; n];
            e[idx] = 1;
            let te = space.apply(Gen::T, &e);
            trows.push(e.iter().zip(&te).map(|(&a, &b)| f.sub(a, b)).collect());
        }
        let cusp = QuotientMap::new(&Subspace::from_vectors(f, n, trows));
        let h = h1.dim();
        let mut boundary = Matrix::zeros(f, cusp.dim(), h);
        for j in 0..h {
            let e = h1.lift(j);
            let se = space.apply(Gen::Sigma, &e);
            let d: Vec<u64> = e.iter().zip(&se).map(|(&a, &b)| f.sub(a, b)).collect();
            let td = space.apply(Gen::Tau, &d);
            let img = cusp.project(&td);
            for (i, &v) in img.iter().enumerate() {
                boundary.set(i, j, v);
            }
        }
        let par = boundary.kernel();
        let coinvariant_dim = space.coinvariant_dim()?;
        Ok(CohomPresentation {
            space,
            h1,
            lift_pos,
            cusp,
            boundary,
            par,
            sigma_orbits,
            tau_orbits,
            coinvariant_dim,
        })
    }

    pub fn space(&self) -> &CoinducedSpace {
        &self.space
    }
    pub fn field(&self) -> PrimeField {
        self.space.field()
    }
    pub fn table(&self) -> &Arc<CosetTable> {
        self.space.table()
    }
    pub fn module(&self) -> &Arc<dyn CoeffModule> {
        self.space.inner()
    }
    pub fn dim_h1(&self) -> usize {
        self.h1.dim()
    }
    pub fn dim_par(&self) -> usize {
        self.par.dim()
    }
    pub fn dims(&self) -> (usize, usize) {
        (self.dim_h1(), self.dim_par())
    }
    pub fn h1_map(&self) -> &QuotientMap<PrimeField> {
        &self.h1
    }
    pub fn boundary(&self) -> &Matrix<PrimeField> {
        &self.boundary
    }
    pub fn cusp_quotient_dim(&self) -> usize {
        self.cusp.dim()
    }
    pub fn coinvariant_dim(&self) -> usize {
        self.coinvariant_dim
    }
    /// `H^1_par` inside `H^1` coordinates.
    pub fn par_subspace(&self) -> &Subspace<PrimeField> {
        &self.par
    }

    /// Columns form a basis of `H^1_par` in `H^1` coordinates.
    pub fn parabolic_inclusion(&self) -> Matrix<PrimeField> {
        self.par.basis().transpose()
    }

    /// Representative in `M` of an `H^1` class.
    pub fn lift_class(&self, x: &[u64]) -> Vec<u64> {
        let mut m = vec![0u64; self.space.dim()];
        for (j, &v) in x.iter().enumerate() {
            m[self.h1.lift_indices[j]] = v;
        }
        m
    }

    /// `c(sigma) = (1 - sigma) m`, `c(tau) = 0`.
    pub fn cocycle_of_class(&self, x: &[u64]) -> CocycleRep {
        let f = self.field();
        let m = self.lift_class(x);
        let sm = self.space.apply(Gen::Sigma, &m);
        CocycleRep {
            value_sigma: m.iter().zip(&sm).map(|(&a, &b)| f.sub(a, b)).collect(),
            value_tau: vec![0; m.len()],
        }
    }

    pub fn check_cocycle(&self, c: &CocycleRep) -> Result<()> {
        let f = self.field();
        let s = self.space.apply(Gen::Sigma, &c.value_sigma);
        if c.value_sigma.iter().zip(&s).any(|(&a, &b)| f.add(a, b) != 0) {
            return Err(Error::CocycleCheck("(1 + sigma) c(sigma) != 0".into()));
        }
        let t1 = self.space.apply(Gen::Tau, &c.value_tau);
        let t2 = self.space.apply(Gen::Tau, &t1);
        if (0..t1.len()).any(|i| f.add(f.add(c.value_tau[i], t1[i]), t2[i]) != 0) {
            return Err(Error::CocycleCheck("(1 + tau + tau^2) c(tau) != 0".into()));
        }
        Ok(())
    }

    /// `m` with `c ~ c_m`; `c` must satisfy the generator relations.
    fn solve_cocycle(&self, x_sigma: &[u64], x_tau: &[u64]) -> Vec<u64> {
        let f = self.field();
        let k = self.space.block();
        let mut m = vec![0u64; self.space.dim()];
        let half = f.inv(2).unwrap_or(0);
        let third = f.inv(3).unwrap_or(0);
        for orb in &self.sigma_orbits {
            let r = orb[0];
            if orb.len() == 2 {
                m[r * k..(r + 1) * k].copy_from_slice(&x_sigma[r * k..(r + 1) * k]);
            } else {
                for i in 0..k {
                    m[r * k + i] = f.mul(half, x_sigma[r * k + i]);
                }
            }
        }
        let sub_block = |m: &mut [u64], r: usize, v: &[u64]| {
            for i in 0..k {
                m[r * k + i] = f.sub(m[r * k + i], v[i]);
            }
        };
        for orb in &self.tau_orbits {
            if orb.len() == 3 {
                let (b, c) = (orb[1], orb[2]);
                let xc = &x_tau[c * k..(c + 1) * k];
                let xb = &x_tau[b * k..(b + 1) * k];
                let rb = self.space.rho_at(b, Gen::Tau).mul_vec(xc);
                let yb: Vec<u64> = xb.iter().zip(&rb).map(|(&u, &v)| f.add(u, v)).collect();
                sub_block(&mut m, c, xc);
                sub_block(&mut m, b, &yb);
            } else {
                let a = orb[0];
                let xa = &x_tau[a * k..(a + 1) * k];
                let ax = self.space.rho_at(a, Gen::Tau).mul_vec(xa);
                let y: Vec<u64> = xa
                    .iter()
                    .zip(&ax)
                    .map(|(&u, &v)| f.mul(third, f.add(f.add(u, u), v)))
                    .collect();
                sub_block(&mut m, a, &y);
            }
        }
        m
    }

    /// The `H^1` class of a cocycle.
    pub fn class_of_cocycle(&self, c: &CocycleRep) -> Result<Vec<u64>> {
        self.check_cocycle(c)?;
        Ok(self.h1.project(&self.solve_cocycle(&c.value_sigma, &c.value_tau)))
    }

    /// `c(g)` in `M` for `g` of determinant one (its class in PSL2(Z)).
    pub fn evaluate_cocycle(&self, c: &CocycleRep, g: &IntMat2) -> Result<Vec<u64>> {
        let w = decompose_word(g)?;
        let f = self.field();
        let mut v = vec![0u64; self.space.dim()];
        for l in w.letters().iter().rev() {
            let (gen, val) = match l {
                Letter::S => (Gen::Sigma, &c.value_sigma),
                Letter::U => (Gen::Tau, &c.value_tau),
            };
            let gv = self.space.apply(gen, &v);
            v = val.iter().zip(&gv).map(|(&a, &b)| f.add(a, b)).collect();
        }
        Ok(v)
    }

    /// Terms of `c_m(z)` at the identity coset, for the cocycle `c_m(sigma) = (1 - sigma) m`, `c_m(tau) = 0`.
    pub fn walk(&self, z: &IntMat2) -> Result<Vec<WalkTerm>> {
        let w = decompose_word(z)?;
        let mut out = Vec::new();
        let mut r = 0usize;
        let mut gamma = IDENTITY;
        for l in w.letters() {
            match l {
                Letter::S => {
                    let (r2, gs) = self.space.step(r, Gen::Sigma);
                    let g2 = gamma.try_mul(&gs)?;
                    out.push(WalkTerm {
                        coset: r,
                        gamma,
                        negative: false,
                    });
                    out.push(WalkTerm {
                        coset: r2,
                        gamma: g2,
                        negative: true,
                    });
                    r = r2;
                    gamma = g2;
                }
                Letter::U => {
                    let (r2, gt) = self.space.step(r, Gen::Tau);
                    gamma = gamma.try_mul(&gt)?;
                    r = r2;
                }
            }
        }
        Ok(out)
    }

    /// Value at `z` of the Gamma-cocycle `shapiro_down(c_m)`.
    pub fn eval_gamma_cocycle(&self, m: &[u64], z: &IntMat2, cache: &mut RhoCache) -> Result<Vec<u64>> {
        let f = self.field();
        let k = self.space.block();
        let mut out = vec![0u64; k];
        for t in self.walk(z)? {
            let blk = &m[t.coset * k..(t.coset + 1) * k];
            if blk.iter().all(|&x| x == 0) {
                continue;
            }
            let v = cache.get(&t.gamma)?.mul_vec(blk);
            for i in 0..k {
                out[i] = if t.negative { f.sub(out[i], v[i]) } else { f.add(out[i], v[i]) };
            }
        }
        Ok(out)
    }

    pub fn rho_cache(&self) -> RhoCache {
        RhoCache::new(self.module().clone())
    }

    /// `gamma -> c(gamma)` at the identity coset.
    pub fn shapiro_down<'a>(&'a self, c: &'a CocycleRep) -> impl Fn(&IntMat2) -> Result<Vec<u64>> + 'a {
        let k = self.space.block();
        move |g: &IntMat2| {
            let v = self.evaluate_cocycle(c, g)?;
            Ok(v[..k].to_vec())
        }
    }

    /// The coinduced cocycle of a Gamma-cocycle `u`: `c(g)_r = u(gamma(r, g))`.
    /// The cocycle identity of `u` is checked on products of Schreier generators.
    pub fn shapiro_up(&self, u: &dyn Fn(&IntMat2) -> Result<Vec<u64>>) -> Result<CocycleRep> {
        let f = self.field();
        let k = self.space.block();
        let n = self.space.dim();
        let mut vs = vec![0u64; n];
        let mut vt = vec![0u64; n];
        for r in 0..self.space.cosets() {
            let (_, gs) = self.space.step(r, Gen::Sigma);
            let (_, gt) = self.space.step(r, Gen::Tau);
            vs[r * k..(r + 1) * k].copy_from_slice(&u(&gs)?);
            vt[r * k..(r + 1) * k].copy_from_slice(&u(&gt)?);
        }
        let gens = self.space.schreier_generators();
        let mut cache = self.rho_cache();
        for w in gens.windows(2).take(8) {
            let (g, h) = (w[0], w[1]);
            let lhs = u(&(g * h))?;
            let ug = u(&g)?;
            let gh = cache.get(&g)?.mul_vec(&u(&h)?);
            if (0..k).any(|i| lhs[i] != f.add(ug[i], gh[i])) {
                return Err(Error::CocycleCheck("u(gh) != u(g) + g u(h) on sampled generators".into()));
            }
        }
        let c = CocycleRep {
            value_sigma: vs,
            value_tau: vt,
        };
        self.check_cocycle(&c)?;
        Ok(c)
    }

    /// Matrix on `H^1` of `c -> (g -> sum_i delta_i^iota c(delta_i g delta_{j(i)}^{-1}))`,
    /// where `locate(y)` returns `(j, y delta_j^{-1})`.
    pub fn correspondence(
        &self,
        deltas: &[IntMat2],
        locate: &dyn Fn(&IntMat2) -> Result<(usize, IntMat2)>,
        cache: &mut RhoCache,
    ) -> Result<Matrix<PrimeField>> {
        let f = self.field();
        let k = self.space.block();
        let n = self.space.dim();
        let h = self.dim_h1();
        let iotas: Vec<IntMat2> = deltas.iter().map(|d| d.main_involution()).collect();
        // columns of x_sigma and x_tau for each H^1 basis class
        let mut xs = vec![vec![0u64; n]; h];
        let mut xt = vec![vec![0u64; n]; h];
        for r in 0..self.space.cosets() {
            for gen in [Gen::Sigma, Gen::Tau] {
                let (_, x) = self.space.step(r, gen);
                let target = if gen == Gen::Sigma { &mut xs } else { &mut xt };
                for (i, d) in deltas.iter().enumerate() {
                    let y = d.try_mul(&x)?;
                    let (_, z) = locate(&y)?;
                    for t in self.walk(&z)? {
                        let lp = &self.lift_pos[t.coset];
                        if lp.is_empty() {
                            continue;
                        }
                        let rho = cache.get(&iotas[i].try_mul(&t.gamma)?)?;
                        for &(comp, j) in lp {
                            let col = &mut target[j][r * k..(r + 1) * k];
                            for a in 0..k {
                                let v = rho.get(a, comp);
                                if v != 0 {
                                    col[a] = if t.negative { f.sub(col[a], v) } else { f.add(col[a], v) };
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut out = Matrix::zeros(f, h, h);
        for j in 0..h {
            let m = self.solve_cocycle(&xs[j], &xt[j]);
            let cls = self.h1.project(&m);
            for (i, &v) in cls.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Matrix on `H^1` of the action of `alpha` normalising the group, `c -> alpha^iota c(alpha g alpha^{-1})`.
    pub fn conjugation(&self, alpha: &IntMat2, cache: &mut RhoCache) -> Result<Matrix<PrimeField>> {
        let ai = alpha.inverse_sl2()?;
        self.correspondence(&[*alpha], &|y| Ok((0, y.try_mul(&ai)?)), cache)
    }

    /// Matrix of `u -> shapiro_down(shapiro_up(u))` composed back to classes; the identity.
    pub fn shapiro_round_trip(&self) -> Result<Matrix<PrimeField>> {
        let h = self.dim_h1();
        let f = self.field();
        let mut out = Matrix::zeros(f, h, h);
        for j in 0..h {
            let mut x = vec![0u64; h];
            x[j] = 1;
            let c = self.cocycle_of_class(&x);
            let down = self.shapiro_down(&c);
            let up = self.shapiro_up(&down)?;
            let cls = self.class_of_cocycle(&up)?;
            for (i, &v) in cls.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

pub fn evaluate_cocycle(pres: &CohomPresentation, c: &CocycleRep, g: &IntMat2) -> Result<Vec<u64>> {
    pres.evaluate_cocycle(c, g)
}

pub fn parabolic_inclusion(pres: &CohomPresentation) -> Matrix<PrimeField> {
    pres.parabolic_inclusion()
}
