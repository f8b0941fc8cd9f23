//! Simultaneous eigenvalues of commuting matrices over finite fields.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::FpAlgebra;
use crate::error::{Error, Result};
use crate::fflin::{Field, FieldDescriptor, FieldExt, Matrix, Poly, PrimeField, Subspace};

/// Images of `1, t, ..., t^{m-1}` of a field `F_p[t]/(mu)` inside a larger field.
#[derive(Clone, Debug)]
pub struct Embedding {
    images: Vec<u64>,
    target: FieldExt,
}

impl Embedding {
    pub fn new<F: Field>(from: &F, target: &FieldExt) -> Result<Self> {
        let m = from.degree();
        if !target.degree().is_multiple_of(m) || target.characteristic() != from.characteristic() {
            return Err(Error::Precondition("no embedding between these fields".into()));
        }
        let images = if m == 1 {
            vec![1]
        } else {
            let modulus = from.descriptor().modulus.expect("extension has a modulus");
            let poly = Poly::new(target.clone(), modulus.iter().map(|&c| target.from_int(c as i64)).collect());
            let root = poly
                .roots()
                .first()
                .map(|r| r.0)
                .ok_or_else(|| Error::Precondition("modulus has no root in the target".into()))?;
            let mut v = Vec::with_capacity(m);
            let mut acc = target.one();
            for _ in 0..m {
                v.push(acc);
                acc = target.mul(acc, root);
            }
            v
        };
        Ok(Embedding {
            images,
            target: target.clone(),
        })
    }

    pub fn map<F: Field>(&self, from: &F, x: u64) -> u64 {
        let t = &self.target;
        let mut acc = t.zero();
        for (c, &img) in from.coeffs(x).iter().zip(&self.images) {
            if *c != 0 {
                acc = t.add(acc, t.mul(t.from_int(*c as i64), img));
            }
        }
        acc
    }

    pub fn matrix<F: Field>(&self, from: &F, m: &Matrix<F>) -> Matrix<FieldExt> {
        Matrix::from_fn(self.target.clone(), m.rows(), m.cols(), |i, j| self.map(from, m.get(i, j)))
    }
}

/// A subspace stable under all matrices, with their restrictions.
#[derive(Clone, Debug)]
pub struct Block<F: Field> {
    /// Rows span the block inside the ambient space.
    pub basis: Matrix<F>,
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> Block<F> {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    fn sub(&self, sub: &Subspace<F>) -> Self {
        let basis = sub.basis().mul(&self.basis);
        let mats = self.mats.iter().map(|m| sub.restrict(m)).collect();
        Block { basis, mats }
    }

    /// Splits along the distinct irreducible factors of the characteristic polynomial of `a`.
    fn split_by(&self, a: &Matrix<F>) -> Result<Vec<Self>> {
        let cp = a.charpoly()?;
        let fac = cp.factor();
        if fac.len() <= 1 {
            return Ok(vec![self.clone()]);
        }
        let mut out = Vec::new();
        for (pi, e) in fac {
            let ker = a.eval_poly(&pi).pow(e as u64).kernel();
            out.push(self.sub(&ker));
        }
        Ok(out)
    }
}

/// One Galois orbit of simultaneous eigenvalue systems.
#[derive(Clone, Debug)]
pub struct SystemBlock<F: Field> {
    pub block: Block<F>,
    /// Field generated by the eigenvalues (canonical modulus).
    pub residue: FieldExt,
    /// Eigenvalue of each matrix, in `residue`.
    pub values: Vec<u64>,
    /// Common eigenvectors over `residue`, as rows in ambient coordinates.
    pub eigenvectors: Matrix<FieldExt>,
}

fn random_combination<F: Field>(mats: &[Matrix<F>], rng: &mut ChaCha8Rng) -> Matrix<F> {
    let f = mats[0].field().clone();
    let n = mats[0].rows();
    let mut c = Matrix::zeros(f.clone(), n, n);
    for m in mats {
        c.add_scaled(f.random(rng), m);
    }
    c
}

fn single_root(p: &Poly<FieldExt>) -> Option<u64> {
    let r = p.roots();
    if r.len() == 1 && r[0].1 == p.degree() {
        Some(r[0].0)
    } else {
        None
    }
}

/// Eigenvalues over the residue field, or `None` when `c` does not separate.
fn characterise<F: Field>(block: &Block<F>, c: &Matrix<F>, pi: &Poly<F>) -> Result<Option<SystemBlock<F>>> {
    let f = block.basis.field().clone();
    let p = f.characteristic();
    let base = PrimeField::new(p)?;
    let l = pi.degree() * f.degree();
    let residue = FieldExt::canonical(base, l)?;
    let emb = Embedding::new(&f, &residue)?;
    let pik = Poly::new(residue.clone(), pi.coeffs().iter().map(|&x| emb.map(&f, x)).collect());
    let Some(&(alpha, _)) = pik.roots().first() else {
        return Err(Error::Precondition("irreducible factor has no root in its splitting field".into()));
    };
    let ck = emb.matrix(&f, c);
    let d = ck.rows();
    let mut u = ck.sub(&Matrix::scalar(residue.clone(), d, alpha)).kernel();
    let mut values = Vec::with_capacity(block.mats.len());
    for m in &block.mats {
        let mk = emb.matrix(&f, m);
        let r = u.restrict(&mk);
        let Some(lambda) = single_root(&r.charpoly()?) else {
            return Ok(None);
        };
        let shifted = r.sub(&Matrix::scalar(residue.clone(), r.rows(), lambda));
        let ker = shifted.kernel();
        // back to block coordinates
        let rows = ker.basis().mul(u.basis());
        u = Subspace::from_rows(rows);
        values.push(lambda);
    }
    let eigenvectors = u.basis().mul(&emb.matrix(&f, &block.basis));
    Ok(Some(SystemBlock {
        block: block.clone(),
        residue,
        values,
        eigenvectors,
    }))
}

/// Decomposes the ambient space into blocks, one per Galois orbit of
/// simultaneous eigenvalue systems of the commuting `mats`.
pub fn simultaneous_systems<F: Field>(mats: &[Matrix<F>], seed: u64) -> Result<Vec<SystemBlock<F>>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let f = first.field().clone();
    let n = first.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut blocks = vec![Block {
        basis: Matrix::identity(f.clone(), n),
        mats: mats.to_vec(),
    }];
    for g in 0..mats.len() {
        let mut next = Vec::new();
        for b in &blocks {
            next.extend(b.split_by(&b.mats[g])?);
        }
        blocks = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut stack = blocks;
    while let Some(b) = stack.pop() {
        let mut done = false;
        for _attempt in 0..8 {
            let c = random_combination(&b.mats, &mut rng);
            let fac = c.charpoly()?.factor();
            if fac.len() > 1 {
                let mut pieces = Vec::new();
                for (pi, e) in fac {
                    let ker = c.eval_poly(&pi).pow(e as u64).kernel();
                    pieces.push(b.sub(&ker));
                }
                stack.extend(pieces);
                done = true;
                break;
            }
            if let Some(sys) = characterise(&b, &c, &fac[0].0)? {
                out.push(sys);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Precondition(
                "could not separate eigenvalue systems after 8 random combinations".into(),
            ));
        }
    }
    out.sort_by_key(|s| std::cmp::Reverse(s.block.basis.rows()));
    out.sort_by(|a, b| a.residue.degree().cmp(&b.residue.degree()).then(a.values.cmp(&b.values)));
    Ok(out)
}

/// A system of Hecke eigenvalues `n -> a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub field: FieldDescriptor,
    /// Coefficient arrays (low to high) of `a_n` in the field.
    #[serde(with = "index_keys")]
    pub values: BTreeMap<u64, Vec<u64>>,
    pub ordinary_flag: Option<bool>,
    /// Dimension of the generalised eigenspace of this orbit.
    pub multiplicity: usize,
}

impl EigenSystem {
    pub fn degree(&self) -> usize {
        self.field.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }

    /// `a_n` when the system is defined over the prime field.
    pub fn value_fp(&self, n: u64) -> Option<u64> {
        let v = self.values.get(&n)?;
        if self.degree() == 1 {
            Some(v.first().copied().unwrap_or(0))
        } else {
            None
        }
    }

    /// `a_{nm} = a_n a_m` for coprime stored indices.
    pub fn is_multiplicative(&self) -> Result<bool> {
        let k = field_of(&self.field)?;
        let get = |n: &u64| self.values.get(n).map(|c| k.from_coeffs(c));
        for n in self.values.keys() {
            for m in self.values.keys() {
                if crate::modgrp::intmat::gcd(*n as i128, *m as i128) != 1 {
                    continue;
                }
                if let (Some(a), Some(b), Some(c)) = (get(n), get(m), get(&(n * m))) {
                    if k.mul(a, b) != c {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Agreement up to Frobenius on the indices both systems carry.
    pub fn conjugate_to(&self, other: &EigenSystem) -> Result<bool> {
        if self.field != other.field {
            return Ok(false);
        }
        let k = field_of(&self.field)?;
        let common: Vec<(u64, u64)> = self
            .values
            .iter()
            .filter_map(|(n, c)| other.values.get(n).map(|d| (k.from_coeffs(c), k.from_coeffs(d))))
            .collect();
        for j in 0..self.degree() {
            let q = (k.characteristic() as u128).pow(j as u32);
            if common.iter().all(|&(a, b)| k.pow(a, q) == b) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// JSON object keys are strings; read them back as integers even when the
/// map has been buffered inside a tagged enum.
mod index_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, Vec<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        m.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u64, Vec<u64>>, D::Error> {
        BTreeMap::<String, Vec<u64>>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }
}

pub(crate) fn field_of(d: &FieldDescriptor) -> Result<FieldExt> {
    let base = PrimeField::new(d.p)?;
    match &d.modulus {
        None => FieldExt::canonical(base, 1),
        Some(m) => FieldExt::new(base, m.clone()),
    }
}

pub(crate) fn descriptor(k: &FieldExt) -> FieldDescriptor {
    if k.degree() == 1 {
        FieldDescriptor {
            p: k.characteristic(),
            modulus: None,
        }
    } else {
        FieldDescriptor {
            p: k.characteristic(),
            modulus: Some(k.modulus().to_vec()),
        }
    }
}

pub(crate) fn element_coeffs(k: &FieldExt, x: u64) -> Vec<u64> {
    if k.degree() == 1 {
        vec![x]
    } else {
        k.coeffs(x)
    }
}

/// Characters of a commutative algebra, one per Galois orbit, evaluated on
/// the labelled generators with label at most `bound`.
pub fn eigen_systems<F: Field>(alg: &FpAlgebra<F>, bound: u64, seed: u64) -> Result<Vec<EigenSystem>> {
    if !alg.check_closed_commutative() {
        return Err(Error::Precondition("the algebra is not commutative".into()));
    }
    let p = alg.field().characteristic();
    // characters are common eigenvectors of the transposed regular representation
    let mut mats = Vec::new();
    for g in alg.generators() {
        mats.push(alg.regular(g)?.transpose());
    }
    let systems = simultaneous_systems(&mats, seed)?;
    let mut out = Vec::new();
    for s in systems {
        let mut values = BTreeMap::new();
        for (i, &l) in alg.labels().iter().enumerate() {
            if l <= bound {
                values.insert(l, element_coeffs(&s.residue, s.values[i]));
            }
        }
        let ordinary_flag = alg
            .labels()
            .iter()
            .position(|&l| l == p)
            .map(|i| s.values[i] != 0);
        out.push(EigenSystem {
            field: descriptor(&s.residue),
            values,
            ordinary_flag,
            multiplicity: s.block.dim(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn diagonal_systems() {
        let f = fp(7);
        let a = Matrix::from_int_rows(f, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        let b = Matrix::from_int_rows(f, &[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let s = simultaneous_systems(&[a, b], 0).unwrap();
        assert_eq!(s.len(), 3);
        let mut vals: Vec<Vec<u64>> = s.iter().map(|x| x.values.clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![vec![1, 3], vec![2, 3], vec![2, 5]]);
    }

    #[test]
    fn conjugate_pairs_are_separated() {
        // two commuting rotations on F_3^4 with eigenvalues i and pairing that differs
        let f = fp(3);
        let j = Matrix::from_int_rows(f, &[vec![0, -1], vec![1, 0]]);
        let z = Matrix::zeros(f, 2, 2);
        let a = j.hstack(&z).vstack(&z.hstack(&j));
        let jt = j.transpose();
        let b = j.hstack(&z).vstack(&z.hstack(&jt));
        let s = simultaneous_systems(&[a.clone(), b.clone()], 3).unwrap();
        // (i, i) and (i, -i) lie in different Galois orbits
        assert_eq!(s.len(), 2);
        for sys in &s {
            assert_eq!(sys.residue.degree(), 2);
            let k = &sys.residue;
            assert_eq!(k.mul(sys.values[0], sys.values[0]), k.neg(k.one()));
            let v = sys.eigenvectors.row(0).to_vec();
            let ak = Embedding::new(&f, k).unwrap().matrix(&f, &a);
            let col = ak.mul_vec(&v);
            let expect: Vec<u64> = v.iter().map(|&x| k.mul(x, sys.values[0])).collect();
            assert_eq!(col, expect);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let base = fp(5);
        let k2 = FieldExt::canonical(base, 2).unwrap();
        let k4 = FieldExt::canonical(base, 4).unwrap();
        let e = Embedding::new(&k2, &k4).unwrap();
        for x in 0..25u64 {
            for y in [3u64, 7, 11, 24] {
                assert_eq!(e.map(&k2, k2.mul(x, y)), k4.mul(e.map(&k2, x), e.map(&k2, y)));
                assert_eq!(e.map(&k2, k2.add(x, y)), k4.add(e.map(&k2, x), e.map(&k2, y)));
            }
        }
    }
}
