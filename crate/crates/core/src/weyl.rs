//! Reduced words in the Weyl group and the root sequences they determine.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{Root, RootSystem, RootType};

/// A word `s_{i_1} ... s_{i_L}` in the simple reflections. Letters are
/// 1-based simple-root indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord {
    pub letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(letters: Vec<usize>) -> ReducedWord {
        ReducedWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl From<&[usize]> for ReducedWord {
    fn from(letters: &[usize]) -> Self {
        ReducedWord::new(letters.to_vec())
    }
}

/// `beta_j = s_{i_1} ... s_{i_{j-1}} (alpha_{i_j})` and
/// `gamma_j = -w^{-1} beta_j` for a reduced word of `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSequence {
    pub betas: Vec<Root>,
    pub gammas: Vec<Root>,
}

/// Apply `s_{letters[0]} s_{letters[1]} ... ` (rightmost first) to `v`.
fn apply_word(rs: &RootSystem, letters: &[usize], v: &Root) -> Root {
    letters
        .iter()
        .rev()
        .fold(v.clone(), |acc, &i| rs.reflect_root(i - 1, &acc))
}

/// The canonical reduced word for the longest element.
///
/// Type `A_r` uses `(1)(2,1)(3,2,1)...(r,...,1)`. Other types walk `rho` to
/// `-rho`, at each step reflecting in the lowest-indexed simple root that
/// still pairs positively with the current vector.
pub fn canonical_longest_word(rs: &RootSystem) -> ReducedWord {
    if rs.root_type() == RootType::A {
        let letters = (1..=rs.rank()).flat_map(|k| (1..=k).rev()).collect();
        return ReducedWord::new(letters);
    }
    let mut v = rs.rho().to_vec();
    let mut letters = Vec::new();
    loop {
        let next = (0..rs.rank()).find(|&i| {
            let alpha = rs.simple_roots()[i].to_rational();
            rs.pairing(&v, &alpha).is_positive()
        });
        match next {
            Some(i) => {
                v = rs.reflect(i, &v);
                letters.push(i + 1);
            }
            None => break,
        }
    }
    // s_{i_k} ... s_{i_1} rho = -rho, so the recorded letters spell w0^{-1} = w0.
    ReducedWord::new(letters)
}

/// Compute the beta and gamma sequences, checking that the word is reduced.
pub fn beta_sequence(rs: &RootSystem, word: &ReducedWord) -> Result<BetaSequence> {
    let rank = rs.rank();
    if let Some(&bad) = word.letters.iter().find(|&&i| i == 0 || i > rank) {
        return Err(Error::IndexOutOfRange(format!(
            "letter {bad} in word {:?} for a rank {rank} root system",
            word.letters
        )));
    }
    let letters = &word.letters;
    let mut betas = Vec::with_capacity(letters.len());
    let mut seen = BTreeSet::new();
    for (j, &i) in letters.iter().enumerate() {
        let beta = apply_word(rs, &letters[..j], &Root::simple(rank, i - 1));
        if !beta.is_positive() {
            return Err(Error::NotReduced {
                letters: letters.clone(),
                reason: format!("beta_{} = {:?} is not positive", j + 1, beta.0),
            });
        }
        if !seen.insert(beta.clone()) {
            return Err(Error::NotReduced {
                letters: letters.clone(),
                reason: format!("beta_{} = {:?} repeats", j + 1, beta.0),
            });
        }
        betas.push(beta);
    }
    let gammas: Vec<Root> = letters
        .iter()
        .enumerate()
        .map(|(j, &i)| {
            // s_{i_L} ... s_{i_{j+1}} (alpha_{i_j})
            let tail: Vec<usize> = letters[j + 1..].iter().rev().copied().collect();
            apply_word(rs, &tail, &Root::simple(rank, i - 1))
        })
        .collect();
    if letters.len() == rs.positive_roots().len() {
        let all: BTreeSet<Root> = rs.positive_roots().iter().cloned().collect();
        if seen != all {
            return Err(Error::Internal(format!(
                "betas of {letters:?} do not exhaust the positive roots"
            )));
        }
    }
    Ok(BetaSequence { betas, gammas })
}

/// Validate that `word` is a reduced word for the longest element.
pub fn longest_beta_sequence(rs: &RootSystem, word: &ReducedWord) -> Result<BetaSequence> {
    let expected = rs.positive_roots().len();
    if word.len() != expected {
        return Err(Error::NotLongest {
            letters: word.letters.clone(),
            expected,
            got: word.len(),
        });
    }
    beta_sequence(rs, word)
}
