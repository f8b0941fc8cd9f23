use std::collections::HashMap;
use std::sync::Arc;

use super::{check_det, CoeffModule, ModuleSpec};
use crate::error::{Error, Result};
use crate::fflin::{Matrix, PrimeField};
use crate::modgrp::intmat::gcd;
use crate::modgrp::IntMat2;

/// Pairs `(u, v)` modulo `m` generating `Z/m`, in lexicographic order.
pub fn primitive_pairs(m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for u in 0..m {
        for v in 0..m {
            if gcd(gcd(u as i128, v as i128), m as i128) == 1 {
                out.push((u, v));
            }
        }
    }
    out
}

/// `W(M, V)`: `V`-valued functions on the primitive pairs modulo `M`, with
/// `(g f)(u, v) = g f((u, v) g)`. Coordinates are pair-major.
#[derive(Debug, Clone)]
pub struct WModule {
    m: u64,
    inner: Arc<dyn CoeffModule>,
    pairs: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
}

impl WModule {
    pub fn new(m: u64, inner: Arc<dyn CoeffModule>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("W(M, V) needs M >= 1".into()));
        }
        let pairs = primitive_pairs(m);
        let index = pairs.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Ok(WModule {
            m,
            inner,
            pairs,
            index,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn inner(&self) -> &Arc<dyn CoeffModule> {
        &self.inner
    }
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }
    pub fn pair_index(&self, u: u64, v: u64) -> Option<usize> {
        self.index.get(&(u % self.m, v % self.m)).copied()
    }

    /// Permutation-with-blocks matrix: block `(i, j)` is `inner(g)` when `pair_i g = pair_j`.
    fn assemble(&self, inner: &Matrix<PrimeField>, target: impl Fn(u64, u64) -> (u64, u64)) -> Matrix<PrimeField> {
        let k = self.inner.dim();
        let n = self.pairs.len() * k;
        let mut out = Matrix::zeros(self.inner.field(), n, n);
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            let (x, y) = target(u, v);
            if let Some(j) = self.pair_index(x, y) {
                for r in 0..k {
                    for c in 0..k {
                        out.set(i * k + r, j * k + c, inner.get(r, c));
                    }
                }
            }
        }
        out
    }

    pub fn mult_n(&self, n: i64) -> Result<Matrix<PrimeField>> {
        let m = self.m as i128;
        if gcd(n as i128, m) != 1 {
            return Err(Error::NotCoprime { a: n, n: self.m as i64 });
        }
        let nn = (n as i128).rem_euclid(m) as u64;
        let id = Matrix::identity(self.inner.field(), self.inner.dim());
        Ok(self.assemble(&id, |u, v| (nn * u % self.m, nn * v % self.m)))
    }
}

impl CoeffModule for WModule {
    fn field(&self) -> PrimeField {
        self.inner.field()
    }
    fn dim(&self) -> usize {
        self.pairs.len() * self.inner.dim()
    }
    fn act(&self, g: &IntMat2) -> Result<Matrix<PrimeField>> {
        check_det(g)?;
        let rho = self.inner.act(g)?;
        let m = self.m as i128;
        let [a, b, c, d] = g.reduce_mod(m).map(|x| x as u64);
        let mm = self.m;
        Ok(self.assemble(&rho, |u, v| ((u * a + v * c) % mm, (u * b + v * d) % mm)))
    }
    fn period(&self) -> u64 {
        self.m * self.inner.period()
    }
    fn scalar_weight(&self) -> Option<u32> {
        if self.m == 1 {
            self.inner.scalar_weight()
        } else {
            None
        }
    }
    fn spec(&self) -> ModuleSpec {
        ModuleSpec::W {
            m: self.m,
            inner: Box::new(self.inner.spec()),
        }
    }
}

pub fn w_module_action(w: &WModule, a: &IntMat2) -> Result<Matrix<PrimeField>> {
    w.act(a)
}

pub fn mult_n_map(w: &WModule, n: i64) -> Result<Matrix<PrimeField>> {
    w.mult_n(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::SymPower;
    use crate::modgrp::IDENTITY;
    use proptest::prelude::*;

    fn w(m: u64, n: u32, p: u64) -> WModule {
        WModule::new(m, Arc::new(SymPower::new(n, PrimeField::new(p).unwrap()))).unwrap()
    }

    fn arb_mat() -> impl Strategy<Value = IntMat2> {
        (-12i128..12, -12i128..12, -12i128..12, -12i128..12)
            .prop_map(|(a, b, c, d)| IntMat2::new(a, b, c, d))
            .prop_filter("nonsingular", |m| m.det() != 0)
    }

    #[test]
    fn dimensions_and_identity() {
        for p in [5u64, 7] {
            assert_eq!(w(p, 0, p).dim() as u64, p * p - 1);
        }
        assert_eq!(w(6, 2, 7).dim(), 24 * 3);
        let m = w(4, 2, 5);
        assert!(m.act(&IDENTITY).unwrap().is_identity());
        assert!(m.mult_n(5).unwrap().is_identity());
        assert!(m.mult_n(2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn functorial(a in arb_mat(), b in arb_mat()) {
            let m = w(4, 2, 7);
            prop_assert_eq!(m.act(&a).unwrap().mul(&m.act(&b).unwrap()), m.act(&(a * b)).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn mult_n_commutes(a in arb_mat(), n in prop::sample::select(vec![1i64, 2, 3, 4, 6, 7, 8, 9])) {
            let m = w(5, 1, 7);
            let mn = m.mult_n(n).unwrap();
            prop_assert!(mn.inverse().is_some());
            let g = m.act(&a).unwrap();
            prop_assert_eq!(mn.mul(&g), g.mul(&mn));
            let mm = m.mult_n(3).unwrap();
            prop_assert_eq!(mn.mul(&mm), m.mult_n(3 * n).unwrap());
        }
    }
}
