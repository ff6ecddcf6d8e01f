//! Words over the gluing-pair generators of a schema.
//!
//! A letter is a generator index plus an inversion flag. Words are serialized
//! as ASCII strings: lowercase for a generator, uppercase for its inverse,
//! `1` (or the empty string) for the empty word.

use crate::error::{Error, Result};

/// One letter of a word: a generator, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A based word: a plain sequence of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn single(letter: Letter) -> Self {
        Word {
            letters: vec![letter],
        }
    }

    /// Parse an ASCII word over the given lowercase alphabet.
    pub fn parse(text: &str, alphabet: &[char]) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(trimmed.len());
        for ch in trimmed.chars() {
            if ch.is_whitespace() {
                continue;
            }
            let lower = ch.to_ascii_lowercase();
            let gen = alphabet
                .iter()
                .position(|&a| a == lower)
                .ok_or_else(|| Error::UnknownLetter {
                    letter: ch.to_string(),
                })?;
            letters.push(Letter::new(gen, ch.is_ascii_uppercase()));
        }
        Ok(Word { letters })
    }

    /// ASCII rendering; the empty word prints as `1`.
    pub fn display(&self, alphabet: &[char]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let ch = alphabet[l.gen];
                if l.inv {
                    ch.to_ascii_uppercase()
                } else {
                    ch
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn repeated(&self, times: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * times);
        for _ in 0..times {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    pub fn rotated(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::empty();
        }
        let n = self.letters.len();
        let k = k % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Cancel adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &letter in &self.letters {
            if stack.last().is_some_and(|&top| top.is_inverse_of(letter)) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { letters: stack }
    }

    /// Freely and cyclically reduce; returns `(core, c)` with
    /// `self = c · core · c⁻¹` in the free group.
    pub fn cyclic_reduce_with_conjugator(&self) -> (Word, Word) {
        let mut core = self.free_reduce();
        let mut conj = Word::empty();
        while core.len() >= 2 {
            let first = core.letters[0];
            let last = *core.letters.last().expect("length checked");
            if first.is_inverse_of(last) {
                conj.push(first);
                core.letters.remove(0);
                core.letters.pop();
            } else {
                break;
            }
        }
        (core, conj)
    }

    pub fn cyclic_free_reduce(&self) -> Word {
        self.cyclic_reduce_with_conjugator().0
    }

    /// Lexicographically least word among all rotations of `self` and all
    /// rotations of the inverse. Used only for printing relators in a stable
    /// shape; group computations never rely on it.
    pub fn display_normal_form(&self) -> Word {
        if self.letters.is_empty() {
            return Word::empty();
        }
        let key = |w: &Word| -> Vec<(usize, bool)> {
            w.letters.iter().map(|l| (l.gen, l.inv)).collect()
        };
        let mut best: Option<Word> = None;
        for candidate_base in [self.clone(), self.invert()] {
            for k in 0..candidate_base.len() {
                let rot = candidate_base.rotated(k);
                if best.as_ref().is_none_or(|b| key(&rot) < key(b)) {
                    best = Some(rot);
                }
            }
        }
        best.expect("nonempty word has a best rotation")
    }

    /// Exponent sum of each generator, indexed by generator id.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for l in &self.letters {
            sums[l.gen] += if l.inv { -1 } else { 1 };
        }
        sums
    }
}
