use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter `x_i^{±1}`, stored as a nonzero signed index.
pub type Letter = i8;

/// Position of a letter in the order `x1 < X1 < x2 < X2 < ...`.
pub fn letter_code(l: Letter) -> u32 {
    let i = l.unsigned_abs() as u32 - 1;
    2 * i + u32::from(l < 0)
}

pub fn letter_from_code(code: u32) -> Letter {
    let i = (code / 2 + 1) as Letter;
    if code % 2 == 0 {
        i
    } else {
        -i
    }
}

/// A freely reduced word in the free group of the given rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WordRepr", into = "WordRepr")]
pub struct Word {
    rank: u8,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    rank: u8,
    letters: Vec<Letter>,
}

impl TryFrom<WordRepr> for Word {
    type Error = Error;
    fn try_from(r: WordRepr) -> Result<Word> {
        Word::new(r.rank, r.letters)
    }
}

impl From<Word> for WordRepr {
    fn from(w: Word) -> WordRepr {
        WordRepr { rank: w.rank, letters: w.letters }
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    /// Validates the letters and freely reduces them.
    pub fn new(rank: u8, letters: Vec<Letter>) -> Result<Word> {
        if let Some(&l) = letters.iter().find(|&&l| l == 0 || l.unsigned_abs() > rank) {
            return Err(Error::GeneratorOutOfRange { index: l as i32, rank });
        }
        let mut out = Vec::with_capacity(letters.len());
        for l in letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn identity(rank: u8) -> Word {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: u8, i: u8) -> Result<Word> {
        Word::new(rank, vec![i as Letter])
    }

    /// Accepts `x<i>` and `X<i>` tokens; whitespace is ignored, `1` or the
    /// empty string is the identity.
    pub fn parse(rank: u8, s: &str) -> Result<Word> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(Word::identity(rank));
        }
        let bad = || Error::ParseWord(s.to_string());
        let mut letters = Vec::new();
        let mut chars = compact.chars().peekable();
        while let Some(c) = chars.next() {
            let sign: Letter = match c {
                'x' => 1,
                'X' => -1,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let i: u8 = digits.parse().map_err(|_| bad())?;
            if i == 0 || i > rank {
                return Err(Error::GeneratorOutOfRange { index: i as i32, rank });
            }
            letters.push(sign * i as Letter);
        }
        Word::new(rank, letters)
    }

    pub fn rank(&self) -> u8 {
        self.rank
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

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word { rank: self.rank.max(other.rank), letters: out }
    }

    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(self.rank), |acc, _| acc.mul(&base))
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Same letters viewed in a larger free group.
    pub fn with_rank(&self, rank: u8) -> Result<Word> {
        Word::new(rank, self.letters.clone())
    }

    pub fn uses_generator(&self, i: u8) -> bool {
        self.letters.iter().any(|l| l.unsigned_abs() == i)
    }

    /// Sum of the exponents of `x_i`.
    pub fn exponent_sum(&self, i: u8) -> i32 {
        self.letters.iter().filter(|l| l.unsigned_abs() == i).map(|&l| l.signum() as i32).sum()
    }

    pub fn cyclic_reduce(&self) -> Word {
        let l = &self.letters;
        let mut lo = 0;
        let mut hi = l.len();
        while hi - lo >= 2 && l[lo] == -l[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word { rank: self.rank, letters: l[lo..hi].to_vec() }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1]
    }

    pub fn cyclic(&self) -> CyclicWord {
        CyclicWord::new(self)
    }

    pub fn is_conjugate(&self, other: &Word) -> bool {
        self.cyclic() == other.cyclic()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.letters {
            let c = if l > 0 { 'x' } else { 'X' };
            write!(f, "{c}{}", l.unsigned_abs())?;
        }
        Ok(())
    }
}

pub fn is_conjugate(u: &Word, v: &Word) -> Result<bool> {
    if u.rank != v.rank {
        return Err(Error::RankMismatch(u.rank, v.rank));
    }
    Ok(u.is_conjugate(v))
}

/// Conjugacy class of a word: the least rotation (in letter-code order) of
/// its cyclic reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn new(w: &Word) -> CyclicWord {
        let r = w.cyclic_reduce();
        let n = r.letters.len();
        let l = &r.letters;
        let key = |k: usize| (0..n).map(move |j| letter_code(l[(k + j) % n]));
        let best = (0..n).min_by(|&a, &b| key(a).cmp(key(b))).unwrap_or(0);
        let letters = (0..n).map(|j| l[(best + j) % n]).collect();
        CyclicWord(Word { rank: r.rank, letters })
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |w: &CyclicWord| w.0.letters.iter().map(|&l| letter_code(l)).collect::<Vec<_>>();
        (self.len(), key(self)).cmp(&(other.len(), key(other)))
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All freely reduced words of exactly the given length, in letter-code order.
pub fn words_of_length(rank: u8, len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (0..2 * rank as u32).map(letter_from_code).collect();
    let mut acc: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        acc = acc
            .into_iter()
            .flat_map(|w| {
                alphabet
                    .iter()
                    .filter(|&&l| w.last() != Some(&-l))
                    .map(|&l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    acc.into_iter().map(|letters| Word { rank, letters }).collect()
}

/// Cyclically reduced words with `1 <= length <= max_len`.
pub fn cyclically_reduced_words(rank: u8, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|n| words_of_length(rank, n)).filter(Word::is_cyclically_reduced).collect()
}
