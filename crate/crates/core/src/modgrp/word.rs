//! Words in the free product PSL2(Z) = <S> * <U>, S the class of SIGMA and U of TAU.

use serde::{Deserialize, Serialize};

use super::intmat::{IntMat2, IDENTITY, SIGMA, TAU};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    U,
}

impl Letter {
    pub fn matrix(self) -> IntMat2 {
        match self {
            Letter::S => SIGMA,
            Letter::U => TAU,
        }
    }
}

/// A reduced word: no `SS` and no `UUU`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Psl2Word {
    letters: Vec<Letter>,
}

impl Psl2Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut w = Self::empty();
        for l in it {
            w.push(l);
        }
        w
    }

    pub fn push(&mut self, l: Letter) {
        let s = &mut self.letters;
        s.push(l);
        match l {
            Letter::S => {
                let n = s.len();
                if n >= 2 && s[n - 2] == Letter::S {
                    s.truncate(n - 2);
                }
            }
            Letter::U => {
                let n = s.len();
                if n >= 3 && s[n - 2] == Letter::U && s[n - 3] == Letter::U {
                    s.truncate(n - 3);
                }
            }
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        let l = &self.letters;
        !l.windows(2).any(|w| w == [Letter::S, Letter::S])
            && !l.windows(3).any(|w| w == [Letter::U, Letter::U, Letter::U])
    }

    /// Product of the letter matrices in SL2(Z).
    pub fn matrix(&self) -> IntMat2 {
        self.letters.iter().fold(IDENTITY, |acc, l| acc * l.matrix())
    }

    pub fn to_string_compact(&self) -> String {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::S => 'S',
                Letter::U => 'U',
            })
            .collect()
    }
}

/// Rounded quotient `a / c` (ties towards zero are fine).
fn nearest_quotient(a: i128, c: i128) -> i128 {
    let q = a.div_euclid(c);
    let r = a - q * c;
    if 2 * r.abs() > c.abs() {
        if (r > 0) == (c > 0) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Writes `m = T^{k1} S T^{k2} S ... T^{kr} S (+-T^b)`, returning the list of
/// `k_i` (with an implicit `S` after each) and the tail exponent `b`.
pub fn t_s_expansion(m: &IntMat2) -> Result<(Vec<i128>, i128)> {
    if m.det() != 1 {
        return Err(Error::DeterminantNotOne(m.det()));
    }
    let mut cur = *m;
    let mut ks = Vec::new();
    while cur.c != 0 {
        let k = nearest_quotient(cur.a, cur.c);
        cur = IntMat2::t_power(-k) * cur;
        // SIGMA^{-1} * cur
        cur = IntMat2::new(cur.c, cur.d, -cur.a, -cur.b);
        ks.push(k);
    }
    // cur = (e b; 0 e) with e = +-1
    Ok((ks, cur.a * cur.b))
}

fn push_t_power(w: &mut Psl2Word, k: i128) {
    let (seq, n): (&[Letter], i128) = if k >= 0 {
        (&[Letter::U, Letter::S], k)
    } else {
        (&[Letter::S, Letter::U, Letter::U], -k)
    };
    for _ in 0..n {
        for &l in seq {
            w.push(l);
        }
    }
}

/// Reduced word whose matrix is `+-m`.
pub fn decompose_word(m: &IntMat2) -> Result<Psl2Word> {
    let (ks, b) = t_s_expansion(m)?;
    let mut w = Psl2Word::empty();
    for k in ks {
        push_t_power(&mut w, k);
        w.push(Letter::S);
    }
    push_t_power(&mut w, b);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgrp::intmat::T;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert!(decompose_word(&IDENTITY).unwrap().is_empty());
        let w = decompose_word(&T).unwrap();
        assert_eq!(w.letters(), &[Letter::U, Letter::S]);
        assert!(decompose_word(&IntMat2::new(2, 0, 0, 1)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn multiply_back(raw in proptest::collection::vec(any::<bool>(), 0..=60)) {
            let input = Psl2Word::from_letters(raw.into_iter().map(|b| if b { Letter::S } else { Letter::U }));
            let m = input.matrix();
            let w = decompose_word(&m).unwrap();
            prop_assert!(w.is_reduced());
            let back = w.matrix();
            prop_assert!(back == m || back == -m);
            // normal forms in a free product are unique
            prop_assert_eq!(w, input);
        }
    }
}
