//! Commutative matrix algebras generated by Hecke operators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, Subspace};

/// Which part of the cohomology an algebra acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActsOn {
    Full,
    Parabolic,
}

/// The span of all products of the generators, with a fully reduced basis.
///
/// Elements are tracked through `psi(a) = (a v_1, ..., a v_r)` for probe
/// vectors `v_i` generating the ambient space as a module, which makes `psi`
/// injective on the algebra.
#[derive(Clone, Debug)]
pub struct FpAlgebra<F: Field> {
    field: F,
    ambient_dim: usize,
    basis: Vec<Matrix<F>>,
    psi: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    probes: Vec<Vec<u64>>,
    labels: Vec<u64>,
    generators: Vec<Matrix<F>>,
    /// `structure[i][j]`: coordinates of `basis[i] * basis[j]`.
    structure: Vec<Vec<Vec<u64>>>,
    identity: Vec<u64>,
}

impl<F: Field> FpAlgebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Matrix<F>] {
        &self.basis
    }
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }
    pub fn generators(&self) -> &[Matrix<F>] {
        &self.generators
    }
    pub fn structure(&self) -> &[Vec<Vec<u64>>] {
        &self.structure
    }
    /// Coordinates of the identity.
    pub fn identity_coordinates(&self) -> &[u64] {
        &self.identity
    }

    fn psi_of(&self, a: &Matrix<F>) -> Vec<u64> {
        psi(a, &self.probes)
    }

    /// `psi(a b)` from `psi(b)` without forming the product.
    fn left_mul_psi(&self, a: &Matrix<F>, psi_b: &[u64]) -> Vec<u64> {
        let n = self.ambient_dim;
        let mut out = Vec::with_capacity(psi_b.len());
        for chunk in psi_b.chunks(n.max(1)) {
            out.extend(a.mul_vec(chunk));
        }
        out
    }

    fn reduce(&self, v: &mut [u64]) -> Vec<u64> {
        let f = &self.field;
        let mut coords = vec![0u64; self.basis.len()];
        for (i, &p) in self.pivots.iter().enumerate() {
            let a = v[p];
            if a != 0 {
                coords[i] = a;
                f.axpy(v, f.neg(a), &self.psi[i]);
            }
        }
        coords
    }

    /// Coordinates of `psi(a)` in the basis, if `a` lies in the algebra.
    pub fn coordinates_psi(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut r = v.to_vec();
        let c = self.reduce(&mut r);
        if r.iter().all(|&x| x == 0) {
            Some(c)
        } else {
            None
        }
    }

    pub fn coordinates(&self, a: &Matrix<F>) -> Option<Vec<u64>> {
        self.coordinates_psi(&self.psi_of(a))
    }

    pub fn contains(&self, a: &Matrix<F>) -> bool {
        self.coordinates(a).is_some()
    }

    /// Coordinates of `a * basis[j]` for `a` in the algebra.
    pub fn left_mul_coordinates(&self, a: &Matrix<F>, j: usize) -> Result<Vec<u64>> {
        let v = self.left_mul_psi(a, &self.psi[j]);
        self.coordinates_psi(&v)
            .ok_or_else(|| Error::Precondition("product left the algebra".into()))
    }

    /// Matrix of left multiplication by `a` in the basis (column convention).
    pub fn regular(&self, a: &Matrix<F>) -> Result<Matrix<F>> {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field.clone(), d, d);
        for j in 0..d {
            let c = self.left_mul_coordinates(a, j)?;
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn element(&self, coords: &[u64]) -> Matrix<F> {
        let mut m = Matrix::zeros(self.field.clone(), self.ambient_dim, self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                m.add_scaled(*c, b);
            }
        }
        m
    }

    fn insert(&mut self, mut mat: Matrix<F>, mut v: Vec<u64>) -> bool {
        let f = self.field.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            let a = v[p];
            if a != 0 {
                f.axpy(&mut v, f.neg(a), &self.psi[i]);
                mat.add_scaled(f.neg(a), &self.basis[i]);
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[piv]).expect("nonzero");
        f.scale(&mut v, inv);
        mat = mat.scale(inv);
        for i in 0..self.psi.len() {
            let a = self.psi[i][piv];
            if a != 0 {
                let row = v.clone();
                f.axpy(&mut self.psi[i], f.neg(a), &row);
                let b = std::mem::replace(&mut self.basis[i], Matrix::zeros(f.clone(), 0, 0));
                let mut b = b;
                b.add_scaled(f.neg(a), &mat);
                self.basis[i] = b;
            }
        }
        self.psi.push(v);
        self.basis.push(mat);
        self.pivots.push(piv);
        true
    }

    /// The submodule of the ambient space generated by the probes.
    fn probe_span_dim(&self) -> usize {
        let n = self.ambient_dim;
        let mut rows = Vec::new();
        for v in &self.psi {
            for chunk in v.chunks(n.max(1)) {
                rows.push(chunk.to_vec());
            }
        }
        Subspace::from_vectors(self.field.clone(), n, rows).dim()
    }

    /// Every basis product re-expands in the basis, and the algebra is commutative.
    pub fn check_closed_commutative(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if self.structure[i][j] != self.structure[j][i] {
                    return false;
                }
            }
        }
        true
    }

    /// Exact pairwise commutation of the generators as matrices.
    pub fn generators_commute(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutes_with(&g[j])))
    }
}

fn psi<F: Field>(a: &Matrix<F>, probes: &[Vec<u64>]) -> Vec<u64> {
    let mut out = Vec::new();
    for v in probes {
        out.extend(a.mul_vec(v));
    }
    out
}

/// The algebra generated by commuting matrices (labelled by operator index).
pub fn algebra_closure<F: Field>(ops: &[(u64, Matrix<F>)], seed: u64) -> Result<FpAlgebra<F>> {
    let Some((_, first)) = ops.first() else {
        return Err(Error::Precondition("at least one generator is needed".into()));
    };
    let f = first.field().clone();
    let n = first.rows();
    if ops.iter().any(|(_, m)| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch("generators must be square of one size".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<Vec<u64>> = (0..2.min(n.max(1))).map(|_| (0..n).map(|_| f.random(&mut rng)).collect()).collect();
    loop {
        let mut alg = FpAlgebra {
            field: f.clone(),
            ambient_dim: n,
            basis: Vec::new(),
            psi: Vec::new(),
            pivots: Vec::new(),
            probes: probes.clone(),
            labels: ops.iter().map(|(l, _)| *l).collect(),
            generators: ops.iter().map(|(_, m)| m.clone()).collect(),
            structure: Vec::new(),
            identity: Vec::new(),
        };
        let id = Matrix::identity(f.clone(), n);
        let pid = alg.psi_of(&id);
        alg.insert(id.clone(), pid);
        for (_, g) in ops {
            let v = alg.psi_of(g);
            alg.insert(g.clone(), v);
        }
        // close under left multiplication by generators until a full pass adds nothing
        loop {
            let mut added = false;
            let mut i = 0;
            while i < alg.basis.len() {
                for (_, g) in ops {
                    let mut v = alg.left_mul_psi(g, &alg.psi[i]);
                    alg.reduce(&mut v);
                    if v.iter().any(|&x| x != 0) {
                        let prod = g.mul(&alg.basis[i]);
                        let pv = alg.psi_of(&prod);
                        if alg.insert(prod, pv) {
                            added = true;
                        }
                    }
                }
                i += 1;
            }
            if !added {
                break;
            }
        }
        if n == 0 || alg.probe_span_dim() == n {
            finish(&mut alg)?;
            return Ok(alg);
        }
        // probes do not generate: add a vector outside their span and redo
        let span = {
            let mut rows = Vec::new();
            for v in &alg.psi {
                for chunk in v.chunks(n) {
                    rows.push(chunk.to_vec());
                }
            }
            Subspace::from_vectors(f.clone(), n, rows)
        };
        let extra = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                e
            })
            .find(|e| !span.contains(e))
            .expect("span is proper");
        probes.push(extra);
    }
}

fn finish<F: Field>(alg: &mut FpAlgebra<F>) -> Result<()> {
    let d = alg.dim();
    let mut structure = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let v = alg.left_mul_psi(&alg.basis[i], &alg.psi[j]);
            structure[i][j] = alg
                .coordinates_psi(&v)
                .ok_or_else(|| Error::Precondition("algebra is not closed".into()))?;
        }
    }
    alg.structure = structure;
    let id = Matrix::identity(alg.field.clone(), alg.ambient_dim);
    alg.identity = alg.coordinates(&id).expect("identity lies in the algebra");
    Ok(())
}
