//! Job descriptions and their validation.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use parcohom_core::hecke::ActsOn;
use parcohom_core::modgrp::intmat::gcd;
use parcohom_core::modgrp::GroupTag;
use parcohom_core::wt1::{standard_generators, CharacterData};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Cohomology,
    HeckeMatrix,
    HeckeAlgebra,
    EigenSystems,
    WeightOne,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Shapiro,
    Euler,
    Twist,
    EigenspaceStructure,
    Dimension,
}

/// Everything needed to reproduce one computation.
///
/// `out` and `cache` only say where results go and are left out of the
/// serialized form (and hence of the cache key).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub level: u64,
    /// The coefficient module is `V_{k-2}`.
    pub weight: u32,
    pub prime: u64,
    pub group: GroupTag,
    /// Values in `F_p` on the standard generators of `(Z/N)^*`.
    pub character: Option<Vec<u64>>,
    pub ops: Vec<u64>,
    pub bound: Option<u64>,
    pub output_bound: Option<u64>,
    pub seed: u64,
    pub acts_on: ActsOn,
    pub suite: Option<Suite>,
    /// Second level `M` for the Shapiro comparison.
    pub modulus: Option<u64>,
    pub diamond: Option<u64>,
    pub mult: Option<u64>,
    pub twist: Option<u32>,
    pub primes: Vec<u64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub cache: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command, level: u64, weight: u32, prime: u64) -> Self {
        JobSpec {
            command,
            level,
            weight,
            prime,
            group: GroupTag::Gamma1,
            character: None,
            ops: Vec::new(),
            bound: None,
            output_bound: None,
            seed: 0,
            acts_on: ActsOn::Parabolic,
            suite: None,
            modulus: None,
            diamond: None,
            mult: None,
            twist: None,
            primes: Vec::new(),
            out: None,
            cache: None,
        }
    }

    pub fn character_data(&self) -> Result<Option<CharacterData>, CliError> {
        match &self.character {
            None => Ok(None),
            Some(v) => {
                let vals: Vec<i64> = v.iter().map(|&x| x as i64).collect();
                Ok(Some(CharacterData::from_fp_values(self.level, self.prime, &vals)?))
            }
        }
    }

    /// Parameter domains, checked before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let pre = |s: String| Err(CliError::Precondition(s));
        if !parcohom_core::fflin::is_prime(self.prime) {
            return pre(format!("--prime {} is not a prime", self.prime));
        }
        if self.level == 0 {
            return pre("--level must be positive".into());
        }
        if self.weight < 2 {
            return pre(format!("--weight {} must be at least 2", self.weight));
        }
        if self.command != Command::Verify && self.suite.is_some() {
            return pre("--suite only applies to verify".into());
        }
        if self.character.is_some() {
            self.character_data()?;
        }
        match self.command {
            Command::Cohomology | Command::HeckeMatrix | Command::HeckeAlgebra | Command::EigenSystems => self.check_group()?,
            Command::WeightOne => self.check_weight_one()?,
            Command::Verify => match self.suite {
                None => return pre("verify needs --suite".into()),
                Some(Suite::Shapiro) => {
                    let Some(m) = self.modulus else {
                        return pre("the Shapiro comparison needs --modulus M".into());
                    };
                    if self.level < 4 || gcd(self.level as i128, m as i128) != 1 {
                        return pre(format!("Shapiro needs N >= 4 and gcd(N, M) = 1 (N = {}, M = {m})", self.level));
                    }
                }
                Some(Suite::Twist) => {
                    if self.level < 4 || self.level.is_multiple_of(self.prime) {
                        return pre(format!(
                            "weight shifting needs N >= 4 and p not dividing N (N = {}, p = {})",
                            self.level, self.prime
                        ));
                    }
                    if let Some(d) = self.twist {
                        if d == 0 || d as u64 > self.prime - 1 {
                            return pre(format!("--twist {d} must lie in 1..=p-1"));
                        }
                    }
                }
                Some(Suite::EigenspaceStructure) => self.check_weight_one()?,
                Some(Suite::Euler) | Some(Suite::Dimension) => self.check_group()?,
            },
        }
        if matches!(self.command, Command::HeckeMatrix) && self.ops.is_empty() {
            return pre("hecke-matrix needs --op".into());
        }
        if self.ops.contains(&0) {
            return pre("T_0 is undefined".into());
        }
        Ok(())
    }

    fn check_group(&self) -> Result<(), CliError> {
        match self.group {
            GroupTag::Gamma1 if self.level < 4 => Err(CliError::Precondition(format!(
                "Gamma_1(N) needs N >= 4 so that it is torsion free, got N = {}",
                self.level
            ))),
            GroupTag::Gamma0 if self.prime < 5 => Err(CliError::Precondition(format!(
                "Gamma_0(N) needs p >= 5 so that the torsion orders are invertible, got p = {}",
                self.prime
            ))),
            _ => Ok(()),
        }
    }

    fn check_weight_one(&self) -> Result<(), CliError> {
        if self.level < 5 {
            return Err(CliError::Precondition(format!("weight one needs N >= 5, got N = {}", self.level)));
        }
        if self.level.is_multiple_of(self.prime) {
            return Err(CliError::Precondition(format!(
                "p | N: weight one needs p not dividing N (N = {}, p = {})",
                self.level, self.prime
            )));
        }
        if self.prime < 3 {
            return Err(CliError::Precondition("weight one needs p >= 3".into()));
        }
        if let Some(chi) = self.character_data()? {
            if self.prime < 5 {
                return Err(CliError::Precondition("the character route needs p >= 5".into()));
            }
            chi.check_parity(self.prime)?;
        }
        Ok(())
    }
}

/// `"5"`, `"2..10"` (inclusive) or `"2,3,5"`.
pub fn parse_ops(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Precondition(format!("cannot read operator list `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// `quadratic`, `trivial`, or comma-separated integers (values on the standard generators).
pub fn parse_character(s: &str, level: u64, p: u64) -> Result<Vec<u64>, CliError> {
    let chi = match s.trim() {
        "quadratic" => CharacterData::quadratic(level, p)?,
        "trivial" => CharacterData::trivial(level, p)?,
        list => {
            let vals = list
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Precondition(format!("cannot read character values `{s}`")))?;
            let n = standard_generators(level).len();
            if vals.len() != n {
                return Err(CliError::Precondition(format!(
                    "(Z/{level})^* has {n} standard generators, got {} values",
                    vals.len()
                )));
            }
            CharacterData::from_fp_values(level, p, &vals)?
        }
    };
    Ok(chi.values.iter().map(|c| c.first().copied().unwrap_or(0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_lists() {
        assert_eq!(parse_ops("5").unwrap(), vec![5]);
        assert_eq!(parse_ops("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_ops("2, 3,5").unwrap(), vec![2, 3, 5]);
        assert!(parse_ops("4..2").is_err());
        assert!(parse_ops("x").is_err());
    }

    #[test]
    fn characters() {
        assert_eq!(parse_character("quadratic", 23, 5).unwrap(), vec![4]);
        assert_eq!(parse_character("-1", 23, 5).unwrap(), vec![4]);
        assert!(parse_character("1,1", 23, 5).is_err());
    }

    #[test]
    fn validation() {
        let mut j = JobSpec::new(Command::WeightOne, 10, 2, 5);
        assert!(matches!(j.validate(), Err(CliError::Precondition(_))));
        j.level = 23;
        assert!(j.validate().is_ok());
        j.character = Some(vec![1]);
        assert!(matches!(j.validate(), Err(CliError::Precondition(_))));
        let mut v = JobSpec::new(Command::Verify, 4, 2, 7);
        assert!(v.validate().is_err());
        v.suite = Some(Suite::Shapiro);
        v.modulus = Some(6);
        assert!(v.validate().is_err());
        v.modulus = Some(5);
        assert!(v.validate().is_ok());
    }
}
