//! 2x2 integer matrices.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(a b; c d)` with `i128` entries. Products panic on overflow rather than wrap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

pub const IDENTITY: IntMat2 = IntMat2::new(1, 0, 0, 1);
/// `(0 -1; 1 0)`, order 4 in SL2, 2 in PSL2.
pub const SIGMA: IntMat2 = IntMat2::new(0, -1, 1, 0);
/// `(1 -1; 1 0)`, order 6 in SL2, 3 in PSL2.
pub const TAU: IntMat2 = IntMat2::new(1, -1, 1, 0);
/// `(1 1; 0 1)`; `TAU * SIGMA = -T`, so the two agree in PSL2(Z).
pub const T: IntMat2 = IntMat2::new(1, 1, 0, 1);

impl IntMat2 {
    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        IntMat2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    /// `(d -b; -c a)`
    pub fn main_involution(&self) -> Self {
        IntMat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let e = |x: i128, y: i128, z: i128, w: i128| -> Option<i128> {
            x.checked_mul(y)?.checked_add(z.checked_mul(w)?)
        };
        Ok(IntMat2::new(
            e(self.a, o.a, self.b, o.c).ok_or(Error::Overflow)?,
            e(self.a, o.b, self.b, o.d).ok_or(Error::Overflow)?,
            e(self.c, o.a, self.d, o.c).ok_or(Error::Overflow)?,
            e(self.c, o.b, self.d, o.d).ok_or(Error::Overflow)?,
        ))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Result<Self> {
        match self.det() {
            1 => Ok(self.main_involution()),
            d => Err(Error::DeterminantNotOne(d)),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = IDENTITY;
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }

    /// `T^k`
    pub fn t_power(k: i128) -> Self {
        IntMat2::new(1, k, 0, 1)
    }

    /// Entries reduced into `[0, n)`.
    pub fn reduce_mod(&self, n: i128) -> [i128; 4] {
        [
            self.a.rem_euclid(n),
            self.b.rem_euclid(n),
            self.c.rem_euclid(n),
            self.d.rem_euclid(n),
        ]
    }

    pub fn congruent(&self, o: &Self, n: i128) -> bool {
        self.reduce_mod(n) == o.reduce_mod(n)
    }

    pub fn is_pm_identity(&self) -> bool {
        *self == IDENTITY || *self == -IDENTITY
    }

    /// Exact division of every entry, if possible.
    pub fn div_exact(&self, n: i128) -> Option<Self> {
        let ok = |x: i128| x % n == 0;
        (ok(self.a) && ok(self.b) && ok(self.c) && ok(self.d))
            .then(|| IntMat2::new(self.a / n, self.b / n, self.c / n, self.d / n))
    }

    pub fn to_array(&self) -> [i128; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;
    fn mul(self, o: IntMat2) -> IntMat2 {
        self.try_mul(&o).expect("IntMat2 product overflowed i128")
    }
}

impl Neg for IntMat2 {
    type Output = IntMat2;
    fn neg(self) -> IntMat2 {
        IntMat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

pub fn main_involution(m: &IntMat2) -> IntMat2 {
    m.main_involution()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn inv_mod(a: i128, n: i128) -> Option<i128> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(n), n);
    (g == 1).then(|| x.rem_euclid(n))
}

/// Prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
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

pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generator_relations() {
        assert_eq!(SIGMA * SIGMA, -IDENTITY);
        assert_eq!(TAU * TAU * TAU, -IDENTITY);
        assert_eq!(TAU * SIGMA, -T);
    }

    #[test]
    fn involution_examples() {
        assert_eq!(IDENTITY.main_involution(), IDENTITY);
        assert_eq!(T.main_involution(), IntMat2::new(1, -1, 0, 1));
    }

    #[test]
    fn overflow_is_reported() {
        let big = IntMat2::new(i128::MAX / 2, 0, 0, 1);
        assert_eq!(big.try_mul(&big), Err(Error::Overflow));
    }

    proptest! {
        #[test]
        fn involution_gives_determinant(a in -1000i128..1000, b in -1000i128..1000, c in -1000i128..1000, d in -1000i128..1000) {
            let m = IntMat2::new(a, b, c, d);
            let n = m.det();
            prop_assert_eq!(m * m.main_involution(), IntMat2::new(n, 0, 0, n));
            prop_assert_eq!(m.main_involution().main_involution(), m);
        }

        #[test]
        fn ext_gcd_bezout(a in -10_000i128..10_000, b in -10_000i128..10_000) {
            let (g, x, y) = ext_gcd(a, b);
            prop_assert_eq!(a * x + b * y, g);
            prop_assert_eq!(g, gcd(a, b));
        }
    }
}
