use std::collections::BTreeSet;

use super::word::{words_of_length, Word};
use crate::error::{Error, Result};

/// The conjugating letter `t = x_{a_rank+1}`.
pub fn stable_letter(a_rank: u8) -> u8 {
    a_rank + 1
}

/// `t w^k t⁻¹` in the ambient group of rank `a_rank + 1`.
pub fn conjugated_power(a_rank: u8, w: &Word, k: i32) -> Result<Word> {
    let rank = a_rank + 1;
    let t = Word::generator(rank, stable_letter(a_rank))?;
    Ok(t.mul(&w.with_rank(rank)?.pow(k)).mul(&t.inverse()))
}

/// Every nontrivial element of `A ∗ ⟨t w t⁻¹⟩` of length at most `max_len`,
/// where `A` is generated by `x_1..x_{a_rank}` and `t = x_{a_rank+1}`.
/// Elements are alternating products of nontrivial `A`-words and
/// `t w^k t⁻¹` with `k ≠ 0`; no cancellation happens between syllables, so
/// lengths add. Sorted by length, then letters.
pub fn enumerate_factor_product(a_rank: u8, w: &Word, max_len: usize) -> Result<Vec<Word>> {
    let t = stable_letter(a_rank);
    if w.uses_generator(t) || w.letters().iter().any(|l| l.unsigned_abs() > a_rank) {
        return Err(Error::StableLetterInTwist(t));
    }
    if w.is_empty() {
        return Err(Error::TrivialWord);
    }
    let rank = a_rank + 1;
    let a_syllables: Vec<Word> = (1..=max_len)
        .flat_map(|n| words_of_length(a_rank, n))
        .map(|x| x.with_rank(rank))
        .collect::<Result<_>>()?;
    let mut t_syllables = Vec::new();
    for sign in [1, -1] {
        for k in 1.. {
            let s = conjugated_power(a_rank, w, sign * k)?;
            if s.len() > max_len {
                break;
            }
            t_syllables.push(s);
        }
    }

    let mut out = BTreeSet::new();
    // (word so far, last syllable was an A-syllable)
    let mut stack: Vec<(Word, Option<bool>)> = vec![(Word::identity(rank), None)];
    while let Some((prefix, last_a)) = stack.pop() {
        let room = max_len - prefix.len();
        if last_a != Some(true) {
            for s in a_syllables.iter().filter(|s| s.len() <= room) {
                let next = prefix.mul(s);
                out.insert((next.len(), next.letters().to_vec()));
                stack.push((next, Some(true)));
            }
        }
        if last_a != Some(false) {
            for s in t_syllables.iter().filter(|s| s.len() <= room) {
                let next = prefix.mul(s);
                out.insert((next.len(), next.letters().to_vec()));
                stack.push((next, Some(false)));
            }
        }
    }
    out.into_iter().map(|(_, letters)| Word::new(rank, letters)).collect()
}

/// Whether the cyclic reduction of `g` only uses `x_1..x_{a_rank}`.
pub fn conjugate_into_factor(g: &Word, a_rank: u8) -> Result<bool> {
    if g.rank() < a_rank + 1 {
        return Err(Error::Precondition(format!("ambient rank {} below {}", g.rank(), a_rank + 1)));
    }
    Ok(g.cyclic_reduce().letters().iter().all(|l| l.unsigned_abs() <= a_rank))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: u8, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn length_one_gives_generators() {
        let out = enumerate_factor_product(2, &w(2, "x1x2X1X2"), 1).unwrap();
        assert_eq!(out.len(), 4);
    }

    #[test]
    fn contains_conjugated_word() {
        let c = w(2, "x1x2X1X2");
        let out = enumerate_factor_product(2, &c, 6).unwrap();
        assert!(out.contains(&w(3, "x3x1x2X1X2X3")));
        assert!(out.contains(&w(3, "x3x2x1X2X1X3")));
        assert!(!out.iter().any(|g| g.len() > 6));
    }

    #[test]
    fn stable_letter_is_balanced() {
        let out = enumerate_factor_product(2, &w(2, "x1x2X1X2"), 8).unwrap();
        for g in &out {
            assert_eq!(g.exponent_sum(3), 0, "{g}");
        }
        let uniq: BTreeSet<_> = out.iter().map(|g| g.letters().to_vec()).collect();
        assert_eq!(uniq.len(), out.len());
    }

    #[test]
    fn rejects_stable_letter() {
        assert!(enumerate_factor_product(2, &w(3, "x3"), 4).is_err());
    }

    #[test]
    fn factor_membership_examples() {
        assert!(conjugate_into_factor(&w(3, "x3x1X3"), 2).unwrap());
        assert!(!conjugate_into_factor(&w(3, "x3x1"), 2).unwrap());
        assert!(conjugate_into_factor(&w(3, "x3x1x2X1X2X3"), 2).unwrap());
        assert!(conjugate_into_factor(&w(2, "x1"), 2).is_err());
    }
}
