use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::Matrix;
use super::ExactError;

/// One generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A group word; the empty word is the identity.
///
/// Text form: space-separated `+i` / `-i` tokens, e.g. `"+0 -1 +0"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![Letter::new(i, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// Free reduction: cancels adjacent `x x^-1` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Replace letter `i` by `images[i]` (and its inverse by the inverse word).
    pub fn substitute(&self, images: &[Word]) -> Result<Word, ExactError> {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = images.get(l.generator).ok_or(ExactError::IndexOutOfRange {
                index: l.generator,
                count: images.len(),
            })?;
            if l.inverse {
                out = out.concat(&img.inverse());
            } else {
                out = out.concat(img);
            }
        }
        Ok(out)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("{}{}", if l.inverse { '-' } else { '+' }, l.generator))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(s.to_string());
        s.split_whitespace()
            .map(|tok| {
                let (inverse, rest) = match tok.as_bytes().first() {
                    Some(b'+') => (false, &tok[1..]),
                    Some(b'-') => (true, &tok[1..]),
                    _ => return Err(bad()),
                };
                let generator: usize = rest.parse().map_err(|_| bad())?;
                Ok(Letter { generator, inverse })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generators together with their exact inverses.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    mats: Vec<Matrix>,
    invs: Vec<Matrix>,
}

impl GeneratorSet {
    pub fn new(mats: Vec<Matrix>) -> Result<Self, ExactError> {
        let n = mats.first().map(|m| m.dim()).ok_or(ExactError::NoGenerators)?;
        let mut invs = Vec::with_capacity(mats.len());
        for (i, m) in mats.iter().enumerate() {
            if m.dim() != n {
                return Err(ExactError::Shape {
                    expected: n,
                    got: m.dim(),
                });
            }
            invs.push(m.inverse().ok_or(ExactError::Singular(i))?);
        }
        Ok(GeneratorSet { mats, invs })
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn letter(&self, l: Letter) -> Result<&Matrix, ExactError> {
        let set = if l.inverse { &self.invs } else { &self.mats };
        set.get(l.generator).ok_or(ExactError::IndexOutOfRange {
            index: l.generator,
            count: self.mats.len(),
        })
    }

    /// Alphabet in the fixed search order `g0, g0^-1, g1, g1^-1, ...`.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..self.mats.len())
            .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
            .collect()
    }

    pub fn evaluate(&self, w: &Word) -> Result<Matrix, ExactError> {
        let mut acc = Matrix::identity(self.dim());
        for &l in w.letters() {
            acc = &acc * self.letter(l)?;
        }
        Ok(acc)
    }
}

/// Exact product of the word's letters, left to right.
pub fn evaluate_word(w: &Word, gens: &[Matrix]) -> Result<Matrix, ExactError> {
    let n = gens.first().map(|m| m.dim()).ok_or(ExactError::NoGenerators)?;
    let mut acc = Matrix::identity(n);
    for l in w.letters() {
        let g = gens.get(l.generator).ok_or(ExactError::IndexOutOfRange {
            index: l.generator,
            count: gens.len(),
        })?;
        if l.inverse {
            let gi = g.inverse().ok_or(ExactError::Singular(l.generator))?;
            acc = &acc * &gi;
        } else {
            acc = &acc * g;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sanov() -> Vec<Matrix> {
        vec![
            Matrix::from_i64(&[&[1, 2], &[0, 1]]),
            Matrix::from_i64(&[&[1, 0], &[2, 1]]),
        ]
    }

    #[test]
    fn evaluate_examples() {
        let g = sanov();
        assert!(evaluate_word(&Word::empty(), &g).unwrap().is_identity());
        let w: Word = "+0 -0".parse().unwrap();
        assert!(evaluate_word(&w, &g).unwrap().is_identity());
        let w: Word = "+0 +1".parse().unwrap();
        assert_eq!(
            evaluate_word(&w, &g).unwrap(),
            Matrix::from_i64(&[&[5, 2], &[2, 1]])
        );
        let w: Word = "+2".parse().unwrap();
        assert!(matches!(
            evaluate_word(&w, &g),
            Err(ExactError::IndexOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn text_form_round_trip() {
        let w: Word = "+0 -1 +3".parse().unwrap();
        assert_eq!(w.to_string(), "+0 -1 +3");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("0".parse::<Word>().is_err());
    }

    #[test]
    fn reduction_and_substitution() {
        let w: Word = "+0 +1 -1 -0 +1".parse().unwrap();
        assert_eq!(w.reduced().to_string(), "+1");
        let a: Word = "+0 +1".parse().unwrap();
        let b: Word = "+0".parse().unwrap();
        let pattern: Word = "+1 +0 +0 +1".parse().unwrap();
        let s = pattern.substitute(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.to_string(), "+0 +0 +1 +0 +1 +0");
        let inv: Word = "-0".parse().unwrap();
        assert_eq!(inv.substitute(&[a, b]).unwrap().to_string(), "-1 -0");
    }
}
