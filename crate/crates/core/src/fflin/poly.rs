//! Dense univariate polynomials over a finite field and their factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;

/// Coefficients are stored low-to-high with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    c: Vec<u64>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, c: vec![] }
    }

    pub fn one(field: F) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: F, a: u64) -> Self {
        Self::new(field, vec![a])
    }

    pub fn x(field: F) -> Self {
        Self::new(field, vec![0, 1])
    }

    /// `prod (x - r)`
    pub fn from_roots(field: F, roots: &[u64]) -> Self {
        let mut p = Self::one(field.clone());
        for &r in roots {
            p = p.mul(&Self::new(field.clone(), vec![field.neg(r), 1]));
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Self::new(f.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        Self::new(f.clone(), c)
    }

    pub fn scale(&self, a: u64) -> Self {
        let f = &self.field;
        Self::new(f.clone(), self.c.iter().map(|&x| f.mul(a, x)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a != 0 {
                f.axpy(&mut c[i..i + o.c.len()], a, &o.c);
            }
        }
        Self::new(f.clone(), c)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return (Self::zero(f.clone()), self.clone());
        }
        let li = f.inv(d.lead()).unwrap();
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = f.mul(r[k + dd], li);
            if t == 0 {
                continue;
            }
            q[k] = t;
            let nt = f.neg(t);
            f.axpy(&mut r[k..k + dd + 1], nt, &d.c);
        }
        r.truncate(dd);
        (Self::new(f.clone(), q), Self::new(f.clone(), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()).unwrap())
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
            .collect();
        Self::new(f.clone(), c)
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.field.clone()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.order() as u128;
        let x = Self::x(self.field.clone());
        let divisors: Vec<usize> = prime_factors(n).into_iter().map(|r| n / r).collect();
        let mut h = x.clone();
        for k in 1..=n {
            h = h.powmod(q, &f);
            if divisors.contains(&k) && !h.sub(&x).gcd(&f).is_one() {
                return false;
            }
        }
        h == x.rem(&f)
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree and then coefficients. The leading coefficient is dropped.
    pub fn factor(&self) -> Vec<(Self, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        self.factor_with_rng(&mut rng)
    }

    pub fn factor_with_rng<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(Self, usize)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut out = Vec::new();
        for (sq, mult) in self.monic().squarefree() {
            for (g, d) in sq.distinct_degree() {
                for h in g.equal_degree(d, rng) {
                    out.push((h, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.degree(), a.0.c.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.degree(), b.0.c.iter().rev().collect::<Vec<_>>()))
        });
        let mut merged: Vec<(Self, usize)> = Vec::new();
        for (h, m) in out {
            match merged.last_mut() {
                Some(last) if last.0 == h => last.1 += m,
                _ => merged.push((h, m)),
            }
        }
        merged
    }

    /// Roots in the coefficient field, with multiplicity, sorted.
    pub fn roots(&self) -> Vec<(u64, usize)> {
        let f = &self.field;
        let mut r: Vec<(u64, usize)> = self
            .factor()
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, m)| (f.neg(g.coeff(0)), m))
            .collect();
        r.sort();
        r
    }

    fn squarefree(&self) -> Vec<(Self, usize)> {
        let f = &self.field;
        let mut res = Vec::new();
        if self.degree() == 0 {
            return res;
        }
        let d = self.derivative();
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.divrem(&y).0;
            if !fac.is_one() {
                res.push((fac.monic(), i));
            }
            w = y;
            c = c.divrem(&w).0;
            i += 1;
        }
        if !c.is_one() {
            let p = f.characteristic() as usize;
            let root_exp = (f.order() / f.characteristic()) as u128;
            let rc: Vec<u64> = (0..=c.degree() / p)
                .map(|k| f.pow(c.coeff(k * p), root_exp))
                .collect();
            for (g, m) in Self::new(f.clone(), rc).squarefree() {
                res.push((g, m * p));
            }
        }
        res
    }

    fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let q = self.field.order() as u128;
        let x = Self::x(self.field.clone());
        let mut res = Vec::new();
        let mut f = self.clone();
        let mut h = x.rem(&f);
        let mut i = 1;
        while f.degree() >= 2 * i {
            h = h.powmod(q, &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                res.push((g, i));
            }
            i += 1;
        }
        if f.degree() > 0 {
            let d = f.degree();
            res.push((f.monic(), d));
        }
        res
    }

    fn equal_degree<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<Self> {
        let n = self.degree();
        if n == d {
            return vec![self.clone()];
        }
        let f = &self.field;
        let q = f.order() as u128;
        loop {
            let a = Self::new(f.clone(), (0..n).map(|_| f.random(rng)).collect());
            if a.degree() == 0 {
                continue;
            }
            let b = if f.characteristic() == 2 {
                // absolute trace from F_{q^d} to F_2
                let steps = f.degree() * d;
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..steps {
                    t = t.mulmod(&t, self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let mut t = a.rem(self);
                let mut norm = t.clone();
                for _ in 1..d {
                    t = t.powmod(q, self);
                    norm = norm.mulmod(&t, self);
                }
                norm.powmod((q - 1) / 2, self).sub(&Self::one(f.clone()))
            };
            let g = b.gcd(self);
            if g.degree() > 0 && g.degree() < n {
                let h = self.divrem(&g).0.monic();
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }
}

pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fflin::field::{FieldExt, PrimeField};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn brute_irreducible(f: &Poly<PrimeField>) -> bool {
        let p = f.field().p();
        let n = f.degree();
        for d in 1..=n / 2 {
            for v in 0..p.pow(d as u32) {
                let mut c = Vec::new();
                let mut x = v;
                for _ in 0..d {
                    c.push(x % p);
                    x /= p;
                }
                c.push(1);
                if f.rem(&Poly::new(*f.field(), c)).is_zero() {
                    return false;
                }
            }
        }
        n > 0
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for p in [2u64, 3, 5] {
            for v in 0..p.pow(4) {
                let mut c = Vec::new();
                let mut x = v;
                for _ in 0..4 {
                    c.push(x % p);
                    x /= p;
                }
                c.push(1);
                let f = Poly::new(fp(p), c);
                assert_eq!(f.is_irreducible(), brute_irreducible(&f), "{:?}", f);
            }
        }
    }

    #[test]
    fn x_to_the_q_minus_x_splits_completely() {
        let f = fp(7);
        let mut c = vec![0u64; 8];
        c[7] = 1;
        c[1] = 6;
        let fac = Poly::new(f, c).factor();
        assert_eq!(fac.len(), 7);
        assert!(fac.iter().all(|(g, m)| g.degree() == 1 && *m == 1));
    }

    #[test]
    fn repeated_factors_in_char_p() {
        let f = fp(3);
        // (x^3 + 2x + 1)^3 (x + 1)^2
        let a = Poly::new(f, vec![1, 2, 0, 1]);
        let b = Poly::new(f, vec![1, 1]);
        let g = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fac = g.factor();
        assert_eq!(fac, vec![(b, 2), (a, 3)]);
    }

    #[test]
    fn factor_over_extension() {
        let k = FieldExt::canonical(fp(5), 2).unwrap();
        // x^2 - 2 is irreducible over F_5 but splits over F_25.
        let g = Poly::new(k.clone(), vec![3, 0, 1]);
        let r = g.roots();
        assert_eq!(r.len(), 2);
        for (a, _) in r {
            assert_eq!(k.mul(a, a), 2);
        }
    }

    #[test]
    fn char_two_extension_factoring() {
        let k = FieldExt::canonical(fp(2), 3).unwrap();
        let mut c = vec![0u64; 9];
        c[8] = 1;
        c[1] = 1;
        let fac = Poly::new(k, c).factor();
        assert_eq!(fac.len(), 8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn factor_remultiplies(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), c in proptest::collection::vec(0u64..13, 1..14)) {
            let f = fp(p);
            let mut c: Vec<u64> = c.into_iter().map(|x| x % p).collect();
            c.push(1);
            let g = Poly::new(f, c);
            let fac = g.factor();
            let mut prod = Poly::one(f);
            for (h, m) in &fac {
                prop_assert!(h.is_irreducible());
                prop_assert_eq!(h.lead(), 1);
                for _ in 0..*m {
                    prod = prod.mul(h);
                }
            }
            prop_assert_eq!(prod, g);
        }

        #[test]
        fn divrem_identity(a in proptest::collection::vec(0u64..101, 0..20), b in proptest::collection::vec(0u64..101, 1..10)) {
            let f = fp(101);
            let a = Poly::new(f, a);
            let mut b = b;
            b.push(1);
            let b = Poly::new(f, b);
            let (q, r) = a.divrem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }
    }
}
