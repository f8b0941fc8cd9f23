//! Operator-count bounds for generating Hecke algebras.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modgrp::intmat::prime_divisors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SturmKind {
    /// `(N/12) prod (1 + 1/l)`, used with a character.
    WithCharacter,
    /// `(N^2/24) prod (1 - 1/l^2)`, used for `Gamma_1(N)` without a character.
    WithoutCharacter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmData {
    pub level: u64,
    pub kind: SturmKind,
    pub value: Ratio<u64>,
}

impl SturmData {
    /// `ceil(k * value)`.
    pub fn operator_count(&self, k: u64) -> u64 {
        (self.value * k).ceil().to_integer()
    }
}

pub fn sturm_bound(level: u64, kind: SturmKind) -> Result<SturmData> {
    if level == 0 {
        return Err(Error::Precondition("the level must be positive".into()));
    }
    let mut value = match kind {
        SturmKind::WithCharacter => Ratio::new(level, 12),
        SturmKind::WithoutCharacter => Ratio::new(level * level, 24),
    };
    for l in prime_divisors(level) {
        value *= match kind {
            SturmKind::WithCharacter => Ratio::new(l + 1, l),
            SturmKind::WithoutCharacter => Ratio::new(l * l - 1, l * l),
        };
    }
    Ok(SturmData { level, kind, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn level_23() {
        let b = sturm_bound(23, SturmKind::WithCharacter).unwrap();
        assert_eq!(b.value, Ratio::from_integer(2));
        assert_eq!(b.operator_count(7), 14);
        let b2 = sturm_bound(23, SturmKind::WithoutCharacter).unwrap();
        assert_eq!(b2.value, Ratio::from_integer(22));
        assert_eq!(b2.operator_count(7), 154);
    }

    #[test]
    fn level_one_and_zero() {
        assert_eq!(sturm_bound(1, SturmKind::WithCharacter).unwrap().value, Ratio::new(1, 12));
        assert_eq!(sturm_bound(1, SturmKind::WithCharacter).unwrap().operator_count(2), 1);
        assert!(sturm_bound(0, SturmKind::WithCharacter).is_err());
    }

    // the Euler products are multiplicative in coprime levels, up to the leading factor
    fn euler(level: u64, kind: SturmKind) -> Ratio<u64> {
        let lead = match kind {
            SturmKind::WithCharacter => Ratio::from_integer(level),
            SturmKind::WithoutCharacter => Ratio::from_integer(level * level),
        };
        sturm_bound(level, kind).unwrap().value * Ratio::from_integer(match kind {
            SturmKind::WithCharacter => 12,
            SturmKind::WithoutCharacter => 24,
        }) / lead
    }

    proptest! {
        #[test]
        fn operator_count_monotone(n in 1u64..300, k in 1u64..40) {
            for kind in [SturmKind::WithCharacter, SturmKind::WithoutCharacter] {
                let b = sturm_bound(n, kind).unwrap();
                prop_assert!(b.operator_count(k) <= b.operator_count(k + 1));
            }
        }

        #[test]
        fn euler_product_multiplicative(a in 1u64..60, b in 1u64..60) {
            prop_assume!(crate::modgrp::intmat::gcd(a as i128, b as i128) == 1);
            for kind in [SturmKind::WithCharacter, SturmKind::WithoutCharacter] {
                prop_assert_eq!(euler(a * b, kind), euler(a, kind) * euler(b, kind));
            }
        }
    }
}
