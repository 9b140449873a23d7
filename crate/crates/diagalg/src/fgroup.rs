//! Free groups `F_m` as reduced words, and homomorphisms between them.
//!
//! Words are kept reduced at all times: constructors cancel adjacent
//! inverse pairs, so equal group elements have equal representations and
//! words can be used as map keys.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FGroupError {
    #[error("rank mismatch: expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("letter index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("bad word syntax: {0}")]
    Parse(String),
}

/// A reduced word in the free group `F_m` on `x_1, ..., x_m`.
///
/// Letters are pairs `(index, exponent)` with `index` in `1..=rank` and
/// exponent `+1` or `-1`; powers are expanded letter by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// Single generator `x_index^sign`.
    pub fn gen(rank: usize, index: usize, sign: i8) -> Result<Self, FGroupError> {
        FreeWord::from_letters(rank, vec![(index, sign)])
    }

    /// Builds a word from raw letters, reducing eagerly.
    pub fn from_letters(rank: usize, letters: Vec<(usize, i8)>) -> Result<Self, FGroupError> {
        let mut reduced: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
        for (index, sign) in letters {
            if index == 0 || index > rank {
                return Err(FGroupError::IndexOutOfRange { index, rank });
            }
            assert!(sign == 1 || sign == -1, "exponent must be +1 or -1");
            match reduced.last() {
                Some(&(j, s)) if j == index && s == -sign => {
                    reduced.pop();
                }
                _ => reduced.push((index, sign)),
            }
        }
        Ok(FreeWord { rank, letters: reduced })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product `self * rhs`, reduced.
    pub fn mul(&self, rhs: &FreeWord) -> Result<FreeWord, FGroupError> {
        if self.rank != rhs.rank {
            return Err(FGroupError::RankMismatch { expected: self.rank, got: rhs.rank });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        FreeWord::from_letters(self.rank, letters)
    }

    /// Group inverse: reverse the word and flip exponents.
    pub fn inv(&self) -> FreeWord {
        let letters = self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect();
        FreeWord { rank: self.rank, letters }
    }

    /// Reinterprets the word in a larger ambient rank.
    pub fn with_rank(&self, rank: usize) -> Result<FreeWord, FGroupError> {
        for &(i, _) in &self.letters {
            if i > rank {
                return Err(FGroupError::IndexOutOfRange { index: i, rank });
            }
        }
        Ok(FreeWord { rank, letters: self.letters.clone() })
    }

    /// Parses the `x1 x2^-1 x1` syntax (whitespace separated, `^-1` suffix).
    pub fn parse(rank: usize, text: &str) -> Result<FreeWord, FGroupError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (base, sign) = match tok.strip_suffix("^-1") {
                Some(b) => (b, -1),
                None => match tok.strip_suffix("^1") {
                    Some(b) => (b, 1),
                    None => (tok, 1),
                },
            };
            let idx = base
                .strip_prefix('x')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| FGroupError::Parse(format!("bad letter `{tok}`")))?;
            letters.push((idx, sign));
        }
        FreeWord::from_letters(rank, letters)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(i, s) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if s == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^-1")?;
            }
        }
        Ok(())
    }
}

/// A homomorphism `F_n -> F_m`, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    source_rank: usize,
    target_rank: usize,
    images: Vec<FreeWord>,
}

impl GroupHom {
    pub fn new(source_rank: usize, target_rank: usize, images: Vec<FreeWord>) -> Result<Self, FGroupError> {
        if images.len() != source_rank {
            return Err(FGroupError::RankMismatch { expected: source_rank, got: images.len() });
        }
        for w in &images {
            if w.rank() != target_rank {
                return Err(FGroupError::RankMismatch { expected: target_rank, got: w.rank() });
            }
        }
        Ok(GroupHom { source_rank, target_rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        let images = (1..=rank).map(|i| FreeWord::gen(rank, i, 1).unwrap()).collect();
        GroupHom { source_rank: rank, target_rank: rank, images }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    /// Image of a word under the homomorphism (substitute and reduce).
    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord, FGroupError> {
        if w.rank() != self.source_rank {
            return Err(FGroupError::RankMismatch { expected: self.source_rank, got: w.rank() });
        }
        let mut acc = FreeWord::identity(self.target_rank);
        for &(i, s) in w.letters() {
            let img = &self.images[i - 1];
            let factor = if s == 1 { img.clone() } else { img.inv() };
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// Composite `self ∘ rhs` (first apply `rhs`, then `self`).
    pub fn compose(&self, rhs: &GroupHom) -> Result<GroupHom, FGroupError> {
        if rhs.target_rank != self.source_rank {
            return Err(FGroupError::RankMismatch {
                expected: self.source_rank,
                got: rhs.target_rank,
            });
        }
        let images = rhs
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        GroupHom::new(rhs.source_rank, self.target_rank, images)
    }
}

impl fmt::Display for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{} -> {}", i + 1, w)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> FreeWord {
        FreeWord::parse(rank, s).unwrap()
    }

    #[test]
    fn mul_cancels_inverse_pair() {
        let a = w(1, "x1");
        let b = w(1, "x1^-1");
        assert!(a.mul(&b).unwrap().is_empty());
    }

    #[test]
    fn mul_no_reduction() {
        let a = w(2, "x1");
        let b = w(2, "x2");
        assert_eq!(a.mul(&b).unwrap(), w(2, "x1 x2"));
    }

    #[test]
    fn mul_brute_force_oracle() {
        // (x1 x2)(x2^-1 x1) -> x1 x1, checked against a naive pairwise
        // cancellation loop on the concatenation.
        let a = w(2, "x1 x2");
        let b = w(2, "x2^-1 x1");
        let got = a.mul(&b).unwrap();

        let mut raw: Vec<(usize, i8)> = a.letters().to_vec();
        raw.extend_from_slice(b.letters());
        loop {
            let mut cancelled = false;
            for i in 0..raw.len().saturating_sub(1) {
                if raw[i].0 == raw[i + 1].0 && raw[i].1 == -raw[i + 1].1 {
                    raw.drain(i..=i + 1);
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                break;
            }
        }
        assert_eq!(got.letters(), &raw[..]);
        assert_eq!(got, w(2, "x1 x1"));
    }

    #[test]
    fn hom_apply_substitutes() {
        let h = GroupHom::new(1, 2, vec![w(2, "x1 x2")]).unwrap();
        assert_eq!(h.apply(&w(1, "x1")).unwrap(), w(2, "x1 x2"));
    }

    #[test]
    fn hom_identity_fixes_words() {
        let h = GroupHom::identity(3);
        let v = w(3, "x2 x3^-1 x1");
        assert_eq!(h.apply(&v).unwrap(), v);
    }

    #[test]
    fn hom_apply_reduces() {
        let h = GroupHom::new(2, 1, vec![w(1, "x1"), w(1, "x1^-1")]).unwrap();
        assert!(h.apply(&w(2, "x1 x2")).unwrap().is_empty());
    }

    #[test]
    fn hom_compose_examples() {
        let g = GroupHom::new(1, 1, vec![w(1, "x1 x1")]).unwrap();
        let id = GroupHom::identity(1);
        assert_eq!(g.compose(&id).unwrap(), g);

        let h = GroupHom::new(1, 1, vec![w(1, "x1^-1")]).unwrap();
        // x1 -> x1^2 after x1 -> x1^-1 sends x1 to x1^-2.
        let gh = g.compose(&h).unwrap();
        assert_eq!(gh.images()[0], w(1, "x1^-1 x1^-1"));

        let trivial = GroupHom::new(2, 1, vec![FreeWord::identity(1), FreeWord::identity(1)]).unwrap();
        let any = GroupHom::new(1, 2, vec![w(2, "x1 x2 x1^-1")]).unwrap();
        let z = trivial.compose(&any).unwrap();
        assert!(z.images().iter().all(|im| im.is_empty()));
    }

    #[test]
    fn rank_mismatch_errors() {
        let a = w(1, "x1");
        let b = w(2, "x2");
        assert!(matches!(a.mul(&b), Err(FGroupError::RankMismatch { .. })));
        let h = GroupHom::identity(2);
        assert!(h.apply(&a).is_err());
    }
}
