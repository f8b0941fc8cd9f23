//! Finite fields with elements packed into `u64`.
//!
//! Prime field elements are their least non-negative residue. Elements of an
//! extension `F_p[t]/(mu)` of degree `m` are packed as base-`p` digits,
//! `sum c_i p^i`, so the prime subfield embeds as the same integers.

use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    /// Number of elements.
    fn order(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn coeffs(&self, a: u64) -> Vec<u64>;
    fn from_coeffs(&self, c: &[u64]) -> u64;
    fn descriptor(&self) -> FieldDescriptor;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }

    /// Image of an integer in the prime subfield.
    fn from_int(&self, x: i64) -> u64 {
        let p = self.characteristic() as i128;
        (x as i128).rem_euclid(p) as u64
    }

    fn from_i128(&self, x: i128) -> u64 {
        let p = self.characteristic() as i128;
        x.rem_euclid(p) as u64
    }

    fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() as u128 - 2))
        }
    }

    fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.characteristic() as u128)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.order())
    }

    fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `y += alpha * x`
    fn axpy(&self, y: &mut [u64], alpha: u64, x: &[u64]) {
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(alpha, xi));
            }
        }
    }

    fn scale(&self, y: &mut [u64], alpha: u64) {
        for yi in y.iter_mut() {
            *yi = self.mul(alpha, *yi);
        }
    }
}

/// Serializable description of a finite field: the prime and, for proper
/// extensions, the monic modulus (low-to-high coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub modulus: Option<Vec<u64>>,
}

impl FieldDescriptor {
    pub fn degree(&self) -> usize {
        self.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = 17u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::FieldTooLarge { p, degree: 1 });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }
}

impl Field for PrimeField {
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn order(&self) -> u64 {
        self.p
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i64) as u64)
    }
    fn frobenius(&self, a: u64) -> u64 {
        a
    }
    fn coeffs(&self, a: u64) -> Vec<u64> {
        vec![a]
    }
    fn from_coeffs(&self, c: &[u64]) -> u64 {
        c.first().copied().unwrap_or(0) % self.p
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            modulus: None,
        }
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let pm = self.p - 1;
        let limit = u64::MAX - pm * pm;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc += x * y;
            if acc > limit {
                acc %= self.p;
            }
        }
        acc % self.p
    }

    fn axpy(&self, y: &mut [u64], alpha: u64, x: &[u64]) {
        if alpha == 0 {
            return;
        }
        let p = self.p;
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = (*yi + alpha * xi) % p;
        }
    }
}

#[derive(Debug)]
struct ExtInner {
    base: PrimeField,
    /// Monic modulus, low-to-high, length `m + 1`.
    modulus: Vec<u64>,
    pows: Vec<u64>,
}

/// `F_{p^m} = F_p[t]/(mu)`.
#[derive(Clone, Debug)]
pub struct FieldExt {
    inner: Arc<ExtInner>,
}

impl PartialEq for FieldExt {
    fn eq(&self, other: &Self) -> bool {
        self.inner.base == other.inner.base && self.inner.modulus == other.inner.modulus
    }
}
impl Eq for FieldExt {}

impl FieldExt {
    /// Builds `F_p[t]/(modulus)`; the modulus must be monic and irreducible.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let p = base.p();
        let m = modulus.len().saturating_sub(1);
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::Precondition("modulus must be monic of positive degree".into()));
        }
        let pows = Self::digit_powers(p, m)?;
        let poly = crate::fflin::poly::Poly::new(base, modulus.iter().map(|&c| c % p).collect());
        if !poly.is_irreducible() {
            return Err(Error::NotIrreducible(p));
        }
        Ok(FieldExt {
            inner: Arc::new(ExtInner {
                base,
                modulus: poly.coeffs().to_vec(),
                pows,
            }),
        })
    }

    fn digit_powers(p: u64, m: usize) -> Result<Vec<u64>> {
        let mut pows = Vec::with_capacity(m + 1);
        let mut acc: u64 = 1;
        pows.push(1);
        for _ in 0..m {
            acc = acc
                .checked_mul(p)
                .filter(|&v| v < 1 << 63)
                .ok_or(Error::FieldTooLarge { p, degree: m })?;
            pows.push(acc);
        }
        Ok(pows)
    }

    /// The degree-`m` extension whose modulus is the least monic irreducible
    /// polynomial, ordering coefficient vectors `(c_{m-1}, ..., c_0)`
    /// lexicographically.
    pub fn canonical(base: PrimeField, m: usize) -> Result<Self> {
        let p = base.p();
        let pows = Self::digit_powers(p, m)?;
        let q = pows[m];
        for v in 0..q {
            let mut c = Vec::with_capacity(m + 1);
            let mut x = v;
            for _ in 0..m {
                c.push(x % p);
                x /= p;
            }
            if m > 1 && c[0] == 0 {
                continue;
            }
            c.push(1);
            if crate::fflin::poly::Poly::new(base, c.clone()).is_irreducible() {
                return Ok(FieldExt {
                    inner: Arc::new(ExtInner {
                        base,
                        modulus: c,
                        pows,
                    }),
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The class of `t`.
    pub fn generator(&self) -> u64 {
        if self.degree() == 1 {
            self.inner.base.neg(self.inner.modulus[0])
        } else {
            self.characteristic()
        }
    }

    fn m(&self) -> usize {
        self.inner.modulus.len() - 1
    }
}

impl Field for FieldExt {
    fn characteristic(&self) -> u64 {
        self.inner.base.p()
    }
    fn degree(&self) -> usize {
        self.m()
    }
    fn order(&self) -> u64 {
        self.inner.pows[self.m()]
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        if self.m() == 1 {
            return self.inner.base.add(a, b);
        }
        let p = self.characteristic();
        let (mut x, mut y, mut r) = (a, b, 0u64);
        for &w in &self.inner.pows[..self.m()] {
            let d = (x % p + y % p) % p;
            r += d * w;
            x /= p;
            y /= p;
        }
        r
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
    fn neg(&self, a: u64) -> u64 {
        if self.m() == 1 {
            return self.inner.base.neg(a);
        }
        let p = self.characteristic();
        let (mut x, mut r) = (a, 0u64);
        for &w in &self.inner.pows[..self.m()] {
            let d = x % p;
            if d != 0 {
                r += (p - d) * w;
            }
            x /= p;
        }
        r
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        let m = self.m();
        if m == 1 {
            return self.inner.base.mul(a, b);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let p = self.characteristic();
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y % p) % p;
            }
        }
        let md = &self.inner.modulus;
        for k in (m..2 * m - 1).rev() {
            let t = prod[k];
            if t == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..m {
                let s = t * md[j] % p;
                prod[k - m + j] = (prod[k - m + j] + p - s) % p;
            }
        }
        self.from_coeffs(&prod[..m])
    }
    fn coeffs(&self, a: u64) -> Vec<u64> {
        let p = self.characteristic();
        let mut x = a;
        (0..self.m())
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }
    fn from_coeffs(&self, c: &[u64]) -> u64 {
        let p = self.characteristic();
        c.iter()
            .zip(&self.inner.pows[..self.m()])
            .map(|(&d, &w)| (d % p) * w)
            .sum()
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.characteristic(),
            modulus: Some(self.inner.modulus.clone()),
        }
    }
}
