//! Dirichlet characters with values in finite fields.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fflin::{Field, FieldDescriptor, FieldExt, PrimeField};
use crate::hecke::eigen::{descriptor, element_coeffs, field_of};
use crate::modgrp::hecke_cosets::crt;
use crate::modgrp::intmat::{euler_phi, gcd, prime_divisors};

/// Generators of `(Z/N)^*` with their orders: one per odd prime power, and
/// `-1`, `5` for powers of two. Each is congruent to 1 at the other factors.
pub fn standard_generators(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in prime_divisors(n) {
        let mut qe = 1;
        while n.is_multiple_of(qe * q) {
            qe *= q;
        }
        let rest = n / qe;
        let lift = |g: u64| crt(g as i128, qe as i128, 1, rest as i128).rem_euclid(n as i128) as u64;
        if q == 2 {
            if qe >= 4 {
                out.push((lift(qe - 1), 2));
            }
            if qe >= 8 {
                out.push((lift(5), qe / 4));
            }
        } else {
            let phi = euler_phi(qe);
            let fs = prime_divisors(phi);
            let g = (2..qe)
                .find(|&g| gcd(g as i128, q as i128) == 1 && fs.iter().all(|&r| pow_mod(g, phi / r, qe) != 1))
                .expect("odd prime powers have primitive roots");
            out.push((lift(g), phi));
        }
    }
    out
}

fn pow_mod(a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b = a as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// `eps: (Z/N)^* -> K^*`, given by its values on [`standard_generators`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterData {
    pub modulus: u64,
    pub field: FieldDescriptor,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    /// Coefficient arrays of the values on the generators.
    pub values: Vec<Vec<u64>>,
}

impl CharacterData {
    pub fn new(modulus: u64, field: &FieldExt, values: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Precondition("the modulus must be positive".into()));
        }
        let gens = standard_generators(modulus);
        if gens.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "(Z/{modulus})^* has {} standard generators, got {} values",
                gens.len(),
                values.len()
            )));
        }
        for (&(g, o), &v) in gens.iter().zip(values) {
            if v >= field.order() || field.pow(v, o as u128) != field.one() {
                return Err(Error::Precondition(format!(
                    "the value at the generator {g} must be a root of unity of order dividing {o}"
                )));
            }
        }
        Ok(CharacterData {
            modulus,
            field: descriptor(field),
            generators: gens.iter().map(|g| g.0).collect(),
            orders: gens.iter().map(|g| g.1).collect(),
            values: values.iter().map(|&v| element_coeffs(field, v)).collect(),
        })
    }

    /// Values in the prime field, given as integers.
    pub fn from_fp_values(modulus: u64, p: u64, values: &[i64]) -> Result<Self> {
        let k = FieldExt::canonical(PrimeField::new(p)?, 1)?;
        let v: Vec<u64> = values.iter().map(|&x| k.from_int(x)).collect();
        Self::new(modulus, &k, &v)
    }

    pub fn trivial(modulus: u64, p: u64) -> Result<Self> {
        let n = standard_generators(modulus).len();
        Self::from_fp_values(modulus, p, &vec![1; n])
    }

    /// The Legendre symbol modulo an odd prime.
    pub fn quadratic(modulus: u64, p: u64) -> Result<Self> {
        if modulus < 3 || !crate::fflin::is_prime(modulus) {
            return Err(Error::Precondition(format!("the quadratic character needs an odd prime modulus, got {modulus}")));
        }
        Self::from_fp_values(modulus, p, &[-1])
    }

    pub fn field_ext(&self) -> Result<FieldExt> {
        field_of(&self.field)
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    /// Exponents of `x` in terms of the generators, or `None` if `x` is not a unit.
    fn log_table(&self) -> HashMap<u64, Vec<u64>> {
        let n = self.modulus;
        let mut table = HashMap::new();
        table.insert(1 % n, vec![0u64; self.generators.len()]);
        for (i, (&g, &o)) in self.generators.iter().zip(&self.orders).enumerate() {
            let prev: Vec<(u64, Vec<u64>)> = table.drain().collect();
            for (x, e) in prev {
                let mut y = x;
                for k in 0..o {
                    let mut e2 = e.clone();
                    e2[i] = k;
                    table.insert(y, e2);
                    y = (y as u128 * g as u128 % n as u128) as u64;
                }
            }
        }
        table
    }

    /// `eps(x)`, zero when `gcd(x, N) > 1`.
    pub fn value(&self, x: i64) -> Result<u64> {
        let k = self.field_ext()?;
        let n = self.modulus;
        let r = (x as i128).rem_euclid(n as i128) as u64;
        if gcd(r as i128, n as i128) != 1 {
            return Ok(k.zero());
        }
        let table = self.log_table();
        let e = &table[&r];
        let mut acc = k.one();
        for (c, &ei) in self.values.iter().zip(e) {
            acc = k.mul(acc, k.pow(k.from_coeffs(c), ei as u128));
        }
        Ok(acc)
    }

    /// All values, indexed by residues coprime to `N`.
    pub fn table(&self) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        for x in 1..=self.modulus {
            let r = x % self.modulus;
            if gcd(r as i128, self.modulus as i128) == 1 {
                out.push((r, self.value(r as i64)?));
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn is_even(&self) -> Result<bool> {
        let k = self.field_ext()?;
        Ok(self.value(-1)? == k.one())
    }

    /// `eps(-1) = (-1)^k`.
    pub fn check_parity(&self, k: u64) -> Result<()> {
        let f = self.field_ext()?;
        let want = if k.is_multiple_of(2) { f.one() } else { f.neg(f.one()) };
        if self.value(-1)? != want {
            return Err(Error::Parity(format!(
                "eps(-1) = {} but weight {k} needs eps(-1) = (-1)^{k}",
                if self.value(-1)? == f.one() { "1" } else { "-1" }
            )));
        }
        Ok(())
    }

    /// Every character modulo `N` with values in `field` (which must contain
    /// the relevant roots of unity).
    pub fn all(modulus: u64, field: &FieldExt) -> Result<Vec<Self>> {
        let gens = standard_generators(modulus);
        let mut choices: Vec<Vec<u64>> = Vec::new();
        for &(_, o) in &gens {
            let roots: Vec<u64> = (1..field.order()).filter(|&x| field.pow(x, o as u128) == field.one()).collect();
            if roots.len() as u64 != o {
                return Err(Error::Precondition(format!("the field does not contain the {o}-th roots of unity")));
            }
            choices.push(roots);
        }
        let mut out = vec![Vec::new()];
        for c in &choices {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    c.iter().map(move |&x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.iter().map(|v| Self::new(modulus, field, v)).collect()
    }
}
