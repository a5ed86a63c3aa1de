use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{letter_code, letter_from_code, Letter, Word};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// An automorphism given by the images of the basis, stored with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeAutomorphism {
    rank: u8,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn substitute(images: &[Word], rank: u8, w: &Word) -> Word {
    let mut out = Word::identity(rank);
    for &l in w.letters() {
        let img = &images[l.unsigned_abs() as usize - 1];
        out = if l > 0 { out.mul(img) } else { out.mul(&img.inverse()) };
    }
    out
}

impl FreeAutomorphism {
    pub fn identity(rank: u8) -> FreeAutomorphism {
        let images: Vec<Word> = (1..=rank).map(|i| Word::generator(rank, i).expect("in range")).collect();
        FreeAutomorphism { rank, inverse_images: images.clone(), images }
    }

    /// Builds from both image lists, checking that they are mutually inverse.
    pub fn from_images(rank: u8, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<FreeAutomorphism> {
        if images.len() != rank as usize || inverse_images.len() != rank as usize {
            return Err(Error::Precondition(format!("need {rank} images")));
        }
        let phi = FreeAutomorphism { rank, images, inverse_images };
        for i in 1..=rank {
            let x = Word::generator(rank, i)?;
            if phi.apply_inverse(&phi.apply(&x)) != x || phi.apply(&phi.apply_inverse(&x)) != x {
                return Err(Error::Precondition("images are not mutually inverse".into()));
            }
        }
        Ok(phi)
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, self.rank, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, self.rank, w)
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism { rank: self.rank, images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self.inverse_images.iter().map(|w| other.apply_inverse(w)).collect(),
        }
    }

    /// `x_i ↦ x_i x_j` (right) or `x_i ↦ x_j x_i` (left).
    pub fn nielsen(rank: u8, i: u8, j: u8, side: Side) -> Result<FreeAutomorphism> {
        for k in [i, j] {
            if k == 0 || k > rank {
                return Err(Error::GeneratorOutOfRange { index: k as i32, rank });
            }
        }
        if i == j {
            return Err(Error::SameGenerator(i));
        }
        let mut phi = FreeAutomorphism::identity(rank);
        let (xi, xj) = (i as Letter, j as Letter);
        let (img, inv) = match side {
            Side::Right => (vec![xi, xj], vec![xi, -xj]),
            Side::Left => (vec![xj, xi], vec![-xj, xi]),
        };
        phi.images[i as usize - 1] = Word::new(rank, img)?;
        phi.inverse_images[i as usize - 1] = Word::new(rank, inv)?;
        Ok(phi)
    }

    /// Fixes every generator but `t = x_stable`, which goes to `z t` (left)
    /// or `t z` (right).
    pub fn twist(rank: u8, stable: u8, z: &Word, side: Side) -> Result<FreeAutomorphism> {
        if stable == 0 || stable > rank {
            return Err(Error::GeneratorOutOfRange { index: stable as i32, rank });
        }
        if z.uses_generator(stable) {
            return Err(Error::StableLetterInTwist(stable));
        }
        let z = z.with_rank(rank)?;
        let t = Word::generator(rank, stable)?;
        let (img, inv) = match side {
            Side::Left => (z.mul(&t), z.inverse().mul(&t)),
            Side::Right => (t.mul(&z), t.mul(&z.inverse())),
        };
        let mut phi = FreeAutomorphism::identity(rank);
        phi.images[stable as usize - 1] = img;
        phi.inverse_images[stable as usize - 1] = inv;
        Ok(phi)
    }

    pub fn whitehead(m: &WhiteheadMove) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: m.rank,
            images: m.images(),
            inverse_images: m.inverse().images(),
        }
    }
}

impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().enumerate().map(|(i, w)| format!("x{} -> {w}", i + 1)).collect();
        f.write_str(&parts.join(", "))
    }
}

/// A Whitehead automorphism `(A, a)`: `a ∈ A`, `a⁻¹ ∉ A`; for each other
/// generator `x`, `x ↦ x a` when only `x ∈ A`, `x ↦ a⁻¹ x` when only
/// `x⁻¹ ∈ A`, `x ↦ a⁻¹ x a` when both. `A` is a mask over letter codes.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WhiteheadMove {
    rank: u8,
    multiplier: Letter,
    set: u32,
}

impl WhiteheadMove {
    pub fn new(rank: u8, multiplier: Letter, set: u32) -> Result<WhiteheadMove> {
        if multiplier == 0 || multiplier.unsigned_abs() > rank {
            return Err(Error::GeneratorOutOfRange { index: multiplier as i32, rank });
        }
        let full = (1u32 << (2 * rank as u32)) - 1;
        let a = 1 << letter_code(multiplier);
        let a_inv = 1 << letter_code(-multiplier);
        if set & !full != 0 || set & a == 0 || set & a_inv != 0 {
            return Err(Error::Precondition("Whitehead set must contain a and not a^-1".into()));
        }
        Ok(WhiteheadMove { rank, multiplier, set })
    }

    pub fn multiplier(&self) -> Letter {
        self.multiplier
    }

    pub fn set(&self) -> u32 {
        self.set
    }

    /// Identity (`A = {a}`) or conjugation by `a` (`A` = all but `a⁻¹`).
    pub fn is_trivial(&self) -> bool {
        let full = (1u32 << (2 * self.rank as u32)) - 1;
        let a = 1 << letter_code(self.multiplier);
        let a_inv = 1 << letter_code(-self.multiplier);
        self.set == a || self.set == full & !a_inv
    }

    fn contains(&self, l: Letter) -> bool {
        self.set & (1 << letter_code(l)) != 0
    }

    pub fn image(&self, i: u8) -> Word {
        let x = i as Letter;
        let a = self.multiplier;
        let letters = if x.abs() == a.abs() {
            vec![x]
        } else {
            match (self.contains(x), self.contains(-x)) {
                (true, false) => vec![x, a],
                (false, true) => vec![-a, x],
                (true, true) => vec![-a, x, a],
                (false, false) => vec![x],
            }
        };
        Word::new(self.rank, letters).expect("letters in range")
    }

    pub fn images(&self) -> Vec<Word> {
        (1..=self.rank).map(|i| self.image(i)).collect()
    }

    pub fn inverse(&self) -> WhiteheadMove {
        let a = self.multiplier;
        let set = (self.set & !(1 << letter_code(a))) | (1 << letter_code(-a));
        WhiteheadMove { rank: self.rank, multiplier: -a, set }
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images(), self.rank, w)
    }

    /// Every nontrivial Whitehead move of the given rank, ordered by
    /// `(multiplier code, set)`.
    pub fn all(rank: u8) -> Vec<WhiteheadMove> {
        let letters = 2 * rank as u32;
        let mut out = Vec::new();
        for code in 0..letters {
            let a = letter_from_code(code);
            for set in 0..(1u32 << letters) {
                if let Ok(m) = WhiteheadMove::new(rank, a, set) {
                    if !m.is_trivial() {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for WhiteheadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = Word::new(self.rank, vec![self.multiplier]).expect("in range");
        let members: Vec<String> = (0..2 * self.rank as u32)
            .filter(|c| self.set & (1 << c) != 0)
            .map(|c| Word::new(self.rank, vec![letter_from_code(c)]).expect("in range").to_string())
            .collect();
        write!(f, "({{{}}}, {a})", members.join(","))
    }
}
