//! Coset representatives for Hecke operators and diamond matrices.

use serde::{Deserialize, Serialize};

use super::coset::GroupTag;
use super::intmat::{ext_gcd, gcd, inv_mod, IntMat2, IDENTITY};
use crate::error::{Error, Result};

/// Extra congruence imposed on `sigma_a` modulo an auxiliary modulus `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaMode {
    /// Only the condition modulo `N`.
    Plain,
    /// Also `(a^-1 0; 0 a)` modulo `M` when `gcd(a, M) = 1`, identity modulo `M` otherwise.
    Shapiro,
}

/// A matrix in SL2(Z) congruent to `(x^-1 0; 0 x)` modulo `l`.
pub fn lift_diagonal(x: i128, l: i128) -> Result<IntMat2> {
    let x = x.rem_euclid(l.max(1));
    if l == 1 || x == 1 {
        return Ok(IDENTITY);
    }
    if x == l - 1 {
        return Ok(-IDENTITY);
    }
    let xi = inv_mod(x, l).ok_or(Error::NotCoprime { a: x as i64, n: l as i64 })?;
    // bottom row (l, x) is primitive; complete it, then fix the top row mod l
    let (_, u, v) = ext_gcd(x, l);
    // u x + v l = 1, so (u, -v; l, x) has determinant one
    let base = IntMat2::new(u, -v, l, x);
    // top row must become (xi, 0) = base top + t * (l, x) mod l, i.e. t x = -v mod l
    let t = (-base.b * xi).rem_euclid(l);
    let m = IntMat2::new(base.a + t * l, base.b + t * x, l, x);
    debug_assert_eq!(m.det(), 1);
    debug_assert_eq!(m.a.rem_euclid(l), xi);
    Ok(m)
}

/// `sigma_a` in SL2(Z) reducing to `(a^-1 0; 0 a)` modulo `N`, with the
/// additional condition modulo `M` selected by `mode`.
pub fn sigma_a(a: i64, n: u64, m: u64, mode: SigmaMode) -> Result<IntMat2> {
    let (a, n, m) = (a as i128, n as i128, m.max(1) as i128);
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime { a: a as i64, n: n as i64 });
    }
    match mode {
        SigmaMode::Plain => lift_diagonal(a, n),
        SigmaMode::Shapiro => {
            if gcd(n, m) != 1 {
                return Err(Error::Precondition(format!("levels {n} and {m} must be coprime")));
            }
            let target_m = if gcd(a, m) == 1 { a } else { 1 };
            // x = a mod N, x = target_m mod M
            let x = crt(a, n, target_m, m);
            lift_diagonal(x, n * m)
        }
    }
}

/// Solution modulo `n m` of `x = a mod n`, `x = b mod m` for coprime moduli.
pub fn crt(a: i128, n: i128, b: i128, m: i128) -> i128 {
    let (_, u, _) = ext_gcd(n, m);
    // x = a + n * k with n k = b - a mod m
    let k = ((b - a) * u).rem_euclid(m);
    (a + n * k).rem_euclid(n * m)
}

pub fn diamond_matrix(d: i64, n: u64) -> Result<IntMat2> {
    sigma_a(d, n, 1, SigmaMode::Plain)
}

/// The representatives `sigma_a (a b; 0 d)` of the left cosets in the
/// determinant-`n` double coset, ordered by `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeCosets {
    pub n: u64,
    pub level: u64,
    pub group: GroupTag,
    pub reps: Vec<IntMat2>,
    /// `(a, b)` for each representative.
    pub ab: Vec<(u64, u64)>,
}

impl HeckeCosets {
    pub fn build(n: u64, level: u64, group: GroupTag) -> Result<Self> {
        Self::build_with(n, level, 1, SigmaMode::Plain, group)
    }

    pub fn build_with(n: u64, level: u64, m: u64, mode: SigmaMode, group: GroupTag) -> Result<Self> {
        if n == 0 || level == 0 {
            return Err(Error::Precondition("n and N must be positive".into()));
        }
        let mut reps = Vec::new();
        let mut ab = Vec::new();
        for a in (1..=n).filter(|a| n.is_multiple_of(*a)) {
            if gcd(a as i128, level as i128) != 1 {
                continue;
            }
            let d = n / a;
            let s = sigma_a(a as i64, level, m, mode)?;
            for b in 0..d {
                reps.push(s * IntMat2::new(a as i128, b as i128, 0, d as i128));
                ab.push((a, b));
            }
        }
        Ok(HeckeCosets {
            n,
            level,
            group,
            reps,
            ab,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// For `y` of determinant `n` in a coset `Gamma delta_j`, returns `j` and
    /// `y delta_j^{-1}`.
    pub fn locate(&self, y: &IntMat2) -> Result<(usize, IntMat2)> {
        let n = self.n as i128;
        if y.det() != n {
            return Err(Error::Precondition(format!("determinant {} differs from {}", y.det(), n)));
        }
        // Hermite normal form under SL2(Z) acting on the left
        let (g, u, v) = ext_gcd(y.a, y.c);
        let top_b = u * y.b + v * y.d;
        let d = n / g;
        let key = (g as u64, top_b.rem_euclid(d) as u64);
        let j = self
            .ab
            .binary_search(&key)
            .map_err(|_| Error::Precondition(format!("{y} lies in no listed coset")))?;
        let z = (*y * self.reps[j].main_involution())
            .div_exact(n)
            .ok_or_else(|| Error::Precondition("coset quotient is not integral".into()))?;
        Ok((j, z))
    }
}

pub fn hecke_cosets(n: u64, level: u64, group: GroupTag) -> Result<HeckeCosets> {
    HeckeCosets::build(n, level, group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_diag_mod(m: &IntMat2, x: i128, l: i128) -> bool {
        let xi = inv_mod(x, l).unwrap();
        m.reduce_mod(l) == [xi % l, 0, 0, x.rem_euclid(l)]
    }

    #[test]
    fn sigma_examples() {
        assert!(sigma_a(1, 7, 1, SigmaMode::Plain).unwrap().is_pm_identity());
        let s = sigma_a(2, 5, 1, SigmaMode::Plain).unwrap();
        assert_eq!(s.det(), 1);
        assert_eq!(s.reduce_mod(5), [3, 0, 0, 2]);
        let s = sigma_a(3, 4, 5, SigmaMode::Shapiro).unwrap();
        assert_eq!(s.det(), 1);
        assert_eq!(s.reduce_mod(4), [3, 0, 0, 3]);
        assert_eq!(s.reduce_mod(5), [2, 0, 0, 3]);
        let s = sigma_a(5, 4, 5, SigmaMode::Shapiro).unwrap();
        assert_eq!(s.reduce_mod(5), [1, 0, 0, 1]);
        assert!(sigma_a(2, 4, 1, SigmaMode::Plain).is_err());
    }

    #[test]
    fn diamond_examples() {
        let m = diamond_matrix(2, 5).unwrap();
        assert_eq!((m.det(), m.reduce_mod(5)), (1, [3, 0, 0, 2]));
        let d3 = diamond_matrix(3, 5).unwrap();
        assert!(GroupTag::Gamma1.contains(5, &(m * d3)));
        assert!(diamond_matrix(6, 5).unwrap().is_pm_identity());
        assert!(diamond_matrix(5, 5).is_err());
    }

    #[test]
    fn coset_counts() {
        let h = hecke_cosets(1, 5, GroupTag::Gamma1).unwrap();
        assert_eq!(h.reps, vec![IDENTITY]);
        let h = hecke_cosets(2, 5, GroupTag::Gamma1).unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h.reps[0], IntMat2::new(1, 0, 0, 2));
        assert_eq!(h.reps[1], IntMat2::new(1, 1, 0, 2));
        assert_eq!(h.reps[2], sigma_a(2, 5, 1, SigmaMode::Plain).unwrap() * IntMat2::new(2, 0, 0, 1));
        assert_eq!(hecke_cosets(4, 5, GroupTag::Gamma1).unwrap().len(), 7);
        for l in [2u64, 3, 5, 7, 11, 13] {
            for n in [5u64, 7, 11, 12] {
                let expect = if n % l == 0 { l } else { l + 1 };
                assert_eq!(hecke_cosets(l, n, GroupTag::Gamma1).unwrap().len() as u64, expect);
            }
        }
    }

    #[test]
    fn representatives_pairwise_distinct() {
        for (n, level) in [(4u64, 5u64), (6, 7), (9, 4), (12, 5)] {
            let h = hecke_cosets(n, level, GroupTag::Gamma1).unwrap();
            for (i, x) in h.reps.iter().enumerate() {
                assert_eq!(x.det(), n as i128);
                assert!(x.reduce_mod(level as i128)[2] == 0 && x.reduce_mod(level as i128)[0] == 1);
                for (j, y) in h.reps.iter().enumerate() {
                    let q = (*x * y.main_involution()).div_exact(n as i128);
                    let same = q.is_some_and(|q| GroupTag::Gamma1.contains(level, &q));
                    assert_eq!(same, i == j);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn locate_inverts_left_multiplication(j in 0usize..64, x in -20i128..20, y in -20i128..20) {
            let h = hecke_cosets(12, 5, GroupTag::Gamma1).unwrap();
            let j = j % h.len();
            let g = IntMat2::t_power(x) * IntMat2::new(1, 0, 5, 1) * IntMat2::t_power(y);
            let m = g * h.reps[j];
            let (k, z) = h.locate(&m).unwrap();
            prop_assert_eq!(k, j);
            prop_assert_eq!(z, g);
        }

        #[test]
        fn lifted_diagonal_congruences(x in 1i128..500, l in 2i128..200) {
            prop_assume!(gcd(x, l) == 1);
            let m = lift_diagonal(x, l).unwrap();
            prop_assert_eq!(m.det(), 1);
            prop_assert!(is_diag_mod(&m, x, l));
        }
    }
}
