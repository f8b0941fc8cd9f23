use super::{check_det, CoeffModule, ModuleSpec};
use crate::error::{Error, Result};
use crate::fflin::{Field, Matrix, PrimeField};
use crate::modgrp::IntMat2;

/// `V_n = Sym^n` of the standard representation, basis `X^n, X^{n-1}Y, ..., Y^n`.
///
/// `(A f)(X, Y) = f((X, Y) A)`, i.e. `X -> aX + cY`, `Y -> bX + dY`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPower {
    n: u32,
    field: PrimeField,
}

impl SymPower {
    pub fn new(n: u32, field: PrimeField) -> Self {
        SymPower { n, field }
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Coefficients (indexed by the power of `Y`) of `(x X + y Y)^k`.
fn linear_power(f: &PrimeField, x: u64, y: u64, k: u32) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..k {
        let mut next = vec![0u64; acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] = f.add(next[i], f.mul(c, x));
            next[i + 1] = f.add(next[i + 1], f.mul(c, y));
        }
        acc = next;
    }
    acc
}

pub fn sym_action(n: u32, field: PrimeField, a: &IntMat2) -> Result<Matrix<PrimeField>> {
    check_det(a)?;
    let f = field;
    let (ea, eb, ec, ed) = (f.from_i128(a.a), f.from_i128(a.b), f.from_i128(a.c), f.from_i128(a.d));
    let dim = n as usize + 1;
    let mut m = Matrix::zeros(f, dim, dim);
    for j in 0..=n {
        let px = linear_power(&f, ea, ec, n - j);
        let py = linear_power(&f, eb, ed, j);
        for (s, &u) in px.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (t, &v) in py.iter().enumerate() {
                let i = s + t;
                let cur = m.get(i, j as usize);
                m.set(i, j as usize, f.add(cur, f.mul(u, v)));
            }
        }
    }
    Ok(m)
}

fn binomial_mod(n: u32, k: u32, f: &PrimeField) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = f.mul(num, f.from_int((n - i) as i64));
        den = f.mul(den, f.from_int((i + 1) as i64));
    }
    f.mul(num, f.inv(den).unwrap_or(0))
}

/// Gram matrix of the invariant pairing on `V_n`:
/// `<X^{n-i}Y^i, X^i Y^{n-i}> = (-1)^i / binom(n, i)`, all other pairs zero.
pub fn vn_gram(n: u32, field: PrimeField) -> Result<Matrix<PrimeField>> {
    if n as u64 >= field.p() {
        return Err(Error::Precondition(format!(
            "the pairing on V_{n} needs n! invertible, i.e. n < p = {}",
            field.p()
        )));
    }
    let dim = n as usize + 1;
    let mut g = Matrix::zeros(field, dim, dim);
    for i in 0..=n {
        let b = field.inv(binomial_mod(n, i, &field)).unwrap();
        let v = if i % 2 == 0 { b } else { field.neg(b) };
        g.set(i as usize, (n - i) as usize, v);
    }
    Ok(g)
}

/// `<v, w>` with `<A v, w> = <v, A^iota w>`.
pub fn vn_pairing(n: u32, field: PrimeField, v: &[u64], w: &[u64]) -> Result<u64> {
    let g = vn_gram(n, field)?;
    if v.len() != g.rows() || w.len() != g.rows() {
        return Err(Error::DimensionMismatch(format!("vectors must have length {}", g.rows())));
    }
    Ok(field.dot(v, &g.mul_vec(w)))
}

impl CoeffModule for SymPower {
    fn field(&self) -> PrimeField {
        self.field
    }
    fn dim(&self) -> usize {
        self.n as usize + 1
    }
    fn act(&self, a: &IntMat2) -> Result<Matrix<PrimeField>> {
        sym_action(self.n, self.field, a)
    }
    fn period(&self) -> u64 {
        self.field.p()
    }
    fn scalar_weight(&self) -> Option<u32> {
        Some(self.n)
    }
    fn spec(&self) -> ModuleSpec {
        ModuleSpec::Sym { n: self.n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgrp::{GroupTag, IDENTITY, SIGMA, T, TAU};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn arb_mat() -> impl Strategy<Value = IntMat2> {
        (-30i128..30, -30i128..30, -30i128..30, -30i128..30)
            .prop_map(|(a, b, c, d)| IntMat2::new(a, b, c, d))
            .prop_filter("nonsingular", |m| m.det() != 0)
    }

    #[test]
    fn small_cases() {
        let f = fp(7);
        assert!(sym_action(4, f, &IDENTITY).unwrap().is_identity());
        let a = IntMat2::new(2, 3, 5, 4);
        assert_eq!(sym_action(1, f, &a).unwrap(), Matrix::from_int_rows(f, &[vec![2, 3], vec![5, 4]]));
        assert!(sym_action(2, f, &IntMat2::new(1, 2, 2, 4)).is_err());
    }

    #[test]
    fn unipotent_invariants_are_x_power() {
        // kernel of t - 1 on V_n is spanned by X^n when p does not divide n! N
        for (p, n, level) in [(7u64, 4u32, 5i128), (11, 6, 3), (13, 10, 4)] {
            let f = fp(p);
            let t = sym_action(n, f, &IntMat2::new(1, level, 0, 1)).unwrap();
            let k = t.sub(&Matrix::identity(f, n as usize + 1)).kernel();
            assert_eq!(k.dim(), 1);
            let mut xn = vec![0; n as usize + 1];
            xn[0] = 1;
            assert!(k.contains(&xn));
            // coinvariants V_n / (t - 1) V_n are one-dimensional
            let img = t.sub(&Matrix::identity(f, n as usize + 1)).image();
            assert_eq!(n as usize + 1 - img.dim(), 1);
        }
    }

    #[test]
    fn no_invariants_under_sl2_fp() {
        // Gamma_1(N) surjects onto SL2(F_p); T and its transpose generate SL2(F_p).
        for p in [5u64, 7, 11] {
            let f = fp(p);
            for n in 1..=p as u32 {
                let d = n as usize + 1;
                let g1 = sym_action(n, f, &T).unwrap().sub(&Matrix::identity(f, d));
                let g2 = sym_action(n, f, &IntMat2::new(1, 0, 1, 1)).unwrap().sub(&Matrix::identity(f, d));
                assert_eq!(g1.vstack(&g2).kernel().dim(), 0, "p={p} n={n}");
                assert_eq!(g1.hstack(&g2).rank(), d, "coinvariants p={p} n={n}");
            }
        }
        let _ = GroupTag::Gamma1;
    }

    /// Gram matrix of the pairing obtained by averaging monomials into the
    /// tensor power and pairing factorwise with the determinant.
    fn tensor_gram(n: u32, f: PrimeField) -> Matrix<PrimeField> {
        let dim = n as usize + 1;
        let words: Vec<u32> = (0..1u32 << n).collect();
        let ones = |w: u32| w.count_ones();
        let mut g = Matrix::zeros(f, dim, dim);
        for &v in &words {
            for &w in &words {
                let mut val: i64 = 1;
                for k in 0..n {
                    let (x, y) = ((v >> k) & 1, (w >> k) & 1);
                    val *= match (x, y) {
                        (0, 1) => 1,
                        (1, 0) => -1,
                        _ => 0,
                    };
                }
                if val == 0 {
                    continue;
                }
                let (i, j) = (ones(v) as usize, ones(w) as usize);
                let cur = g.get(i, j);
                g.set(i, j, f.add(cur, f.from_int(val)));
            }
        }
        // averaging: divide by binom(n,i) binom(n,j)
        for i in 0..dim {
            for j in 0..dim {
                let s = f.mul(binomial_mod(n, i as u32, &f), binomial_mod(n, j as u32, &f));
                let v = f.mul(g.get(i, j), f.inv(s).unwrap());
                g.set(i, j, v);
            }
        }
        g
    }

    #[test]
    fn gram_matches_tensor_oracle() {
        let f = fp(11);
        for n in 0..=4 {
            assert_eq!(vn_gram(n, f).unwrap(), tensor_gram(n, f), "n={n}");
        }
        assert_eq!(vn_pairing(1, f, &[1, 0], &[0, 1]).unwrap(), 1);
        assert_eq!(vn_pairing(1, f, &[1, 0], &[1, 0]).unwrap(), 0);
        assert!(vn_gram(11, f).is_err());
        for n in 0..11 {
            assert!(vn_gram(n, f).unwrap().inverse().is_some());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn functorial(p in prop::sample::select(vec![2u64, 3, 5, 13]), n in 0u32..=10, a in arb_mat(), b in arb_mat()) {
            let f = fp(p);
            let lhs = sym_action(n, f, &a).unwrap().mul(&sym_action(n, f, &b).unwrap());
            prop_assert_eq!(lhs, sym_action(n, f, &(a * b)).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn pairing_equivariant(n in 0u32..7, a in arb_mat(), seed in any::<u64>()) {
            let f = fp(13);
            let d = n as usize + 1;
            let v: Vec<u64> = (0..d).map(|i| (seed >> (i * 4)) % 13).collect();
            let w: Vec<u64> = (0..d).map(|i| (seed >> (i * 4 + 2)) % 13).collect();
            let av = sym_action(n, f, &a).unwrap().mul_vec(&v);
            let aiw = sym_action(n, f, &a.main_involution()).unwrap().mul_vec(&w);
            prop_assert_eq!(vn_pairing(n, f, &av, &w).unwrap(), vn_pairing(n, f, &v, &aiw).unwrap());
        }
    }

    #[test]
    fn generator_orders_on_vn() {
        let f = fp(5);
        let s = sym_action(3, f, &SIGMA).unwrap();
        let t = sym_action(3, f, &TAU).unwrap();
        // -1 acts by (-1)^3
        let minus = Matrix::scalar(f, 4, 4);
        assert_eq!(s.mul(&s), minus);
        assert_eq!(t.mul(&t).mul(&t), minus);
    }
}
