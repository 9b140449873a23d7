//! Tensor words: the strand-wise symbol presentation of beaded chord
//! diagrams.
//!
//! A word has `m` handle colors and one symbol sequence per skeleton
//! component. Symbols are beads `x_j^{±1}` or chord halves. Strand
//! sequences are stored in reading order (inverse to the strand
//! orientation), so concatenation of contents matches convolution order.
//!
//! Canonical form:
//!   * chords are numbered by first occurrence in reading order
//!     (strand 1 first, then strand 2, ...), the first-met half is `L`;
//!   * no adjacent cancelling bead pair survives (reduction to a fixed
//!     point, which is confluent).

use crate::fgroup::{FreeWord, GroupHom};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("chord {0} occurs {1} times, expected exactly 2")]
    BadChordCount(usize, usize),
    #[error("chord {0} must occur once as L and once as R")]
    BadChordHalves(usize),
    #[error("bead handle {handle} out of range for m={m}")]
    HandleOutOfRange { handle: usize, m: usize },
    #[error("bad serialization: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Half {
    L,
    R,
}

impl Half {
    pub fn other(self) -> Half {
        match self {
            Half::L => Half::R,
            Half::R => Half::L,
        }
    }
}

/// One symbol on a strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sym {
    /// Bead `x_handle^sign`, handle in `1..=m`, sign `±1`.
    Bead { handle: usize, sign: i8 },
    /// One endpoint of chord `chord` (1-based).
    End { chord: usize, half: Half },
}

impl Sym {
    pub fn bead(handle: usize, sign: i8) -> Sym {
        assert!(sign == 1 || sign == -1);
        Sym::Bead { handle, sign }
    }

    pub fn end(chord: usize, half: Half) -> Sym {
        Sym::End { chord, half }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Sym::End { .. })
    }
}

/// A tensor word: `m` handle colors, one symbol sequence per component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TensorWord {
    m: usize,
    strands: Vec<Vec<Sym>>,
}

impl TensorWord {
    /// Builds and canonicalizes. Errors if a chord id does not occur
    /// exactly twice or a bead handle is out of range.
    pub fn new(m: usize, strands: Vec<Vec<Sym>>) -> Result<TensorWord, WordError> {
        let w = TensorWord { m, strands };
        w.validate()?;
        Ok(w.canonicalize())
    }

    /// Builds without canonicalizing (still validates).
    pub fn raw(m: usize, strands: Vec<Vec<Sym>>) -> Result<TensorWord, WordError> {
        let w = TensorWord { m, strands };
        w.validate()?;
        Ok(w)
    }

    pub fn empty(m: usize, n: usize) -> TensorWord {
        TensorWord { m, strands: vec![Vec::new(); n] }
    }

    fn validate(&self) -> Result<(), WordError> {
        let mut counts: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
        for s in &self.strands {
            for sym in s {
                match *sym {
                    Sym::Bead { handle, .. } => {
                        if handle == 0 || handle > self.m {
                            return Err(WordError::HandleOutOfRange { handle, m: self.m });
                        }
                    }
                    Sym::End { chord, half } => {
                        let e = counts.entry(chord).or_insert((0, 0));
                        match half {
                            Half::L => e.0 += 1,
                            Half::R => e.1 += 1,
                        }
                    }
                }
            }
        }
        for (chord, (l, r)) in counts {
            if l + r != 2 {
                return Err(WordError::BadChordCount(chord, l + r));
            }
            if l != 1 || r != 1 {
                return Err(WordError::BadChordHalves(chord));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_strands(&self) -> usize {
        self.strands.len()
    }

    pub fn strands(&self) -> &[Vec<Sym>] {
        &self.strands
    }

    /// Number of chords.
    pub fn degree(&self) -> usize {
        self.strands.iter().flatten().filter(|s| s.is_end()).count() / 2
    }

    pub fn max_strand_len(&self) -> usize {
        self.strands.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Bead letters present, as (handle, sign) pairs.
    pub fn bead_letters(&self) -> std::collections::BTreeSet<(usize, i8)> {
        let mut set = std::collections::BTreeSet::new();
        for s in &self.strands {
            for sym in s {
                if let Sym::Bead { handle, sign } = *sym {
                    set.insert((handle, sign));
                }
            }
        }
        set
    }

    /// Canonical form: cancel adjacent bead pairs to a fixed point, then
    /// renumber chords by first occurrence with first-met half `L`.
    pub fn canonicalize(&self) -> TensorWord {
        let mut strands: Vec<Vec<Sym>> = Vec::with_capacity(self.strands.len());
        for s in &self.strands {
            // Free reduction with a stack; chord ends block adjacency.
            let mut out: Vec<Sym> = Vec::with_capacity(s.len());
            for &sym in s {
                match (out.last(), sym) {
                    (Some(&Sym::Bead { handle: h0, sign: s0 }), Sym::Bead { handle, sign })
                        if h0 == handle && s0 == -sign =>
                    {
                        out.pop();
                    }
                    _ => out.push(sym),
                }
            }
            strands.push(out);
        }
        // Renumber chords in reading order.
        let mut next = 1usize;
        let mut map: std::collections::BTreeMap<usize, usize> = Default::default();
        for s in &mut strands {
            for sym in s.iter_mut() {
                if let Sym::End { chord, half } = *sym {
                    match map.get(&chord) {
                        None => {
                            map.insert(chord, next);
                            *sym = Sym::End { chord: next, half: Half::L };
                            next += 1;
                        }
                        Some(&new) => {
                            let _ = half;
                            *sym = Sym::End { chord: new, half: Half::R };
                        }
                    }
                }
            }
        }
        TensorWord { m: self.m, strands }
    }

    pub fn is_canonical(&self) -> bool {
        self == &self.canonicalize()
    }

    /// The underlying homomorphism: strand `i`'s bead product gives the
    /// image of `x_i`.
    pub fn homotopy_class(&self) -> GroupHom {
        let images = self
            .strands
            .iter()
            .map(|s| {
                let letters = s
                    .iter()
                    .filter_map(|sym| match *sym {
                        Sym::Bead { handle, sign } => Some((handle, sign)),
                        Sym::End { .. } => None,
                    })
                    .collect();
                FreeWord::from_letters(self.m, letters).expect("validated handles")
            })
            .collect();
        GroupHom::new(self.strands.len(), self.m, images).expect("ranks consistent")
    }

    /// Positions `(strand, index)` of the two halves of `chord`.
    pub fn chord_positions(&self, chord: usize) -> Option<((usize, usize), (usize, usize))> {
        let mut found = Vec::new();
        for (si, s) in self.strands.iter().enumerate() {
            for (pi, sym) in s.iter().enumerate() {
                if let Sym::End { chord: c, half } = *sym {
                    if c == chord {
                        found.push(((si, pi), half));
                    }
                }
            }
        }
        if found.len() != 2 {
            return None;
        }
        // L half first.
        if found[0].1 == Half::L {
            Some((found[0].0, found[1].0))
        } else {
            Some((found[1].0, found[0].0))
        }
    }

    /// Canonical text form, e.g. `m=2; s1=[b1+ e1L b2+]; s2=[e1R e2L e2R]`.
    pub fn serialize_text(&self) -> String {
        let mut out = format!("m={}", self.m);
        for (i, s) in self.strands.iter().enumerate() {
            out.push_str(&format!("; s{}=[", i + 1));
            for (k, sym) in s.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                match *sym {
                    Sym::Bead { handle, sign } => {
                        out.push_str(&format!("b{}{}", handle, if sign == 1 { '+' } else { '-' }))
                    }
                    Sym::End { chord, half } => {
                        out.push_str(&format!("e{}{}", chord, if half == Half::L { 'L' } else { 'R' }))
                    }
                }
            }
            out.push(']');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<TensorWord, WordError> {
        let mut m = None;
        let mut strands: Vec<(usize, Vec<Sym>)> = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if let Some(v) = part.strip_prefix("m=") {
                m = Some(v.trim().parse::<usize>().map_err(|e| WordError::Parse(e.to_string()))?);
            } else if let Some(rest) = part.strip_prefix('s') {
                let (idx, body) = rest
                    .split_once('=')
                    .ok_or_else(|| WordError::Parse(format!("bad strand `{part}`")))?;
                let idx: usize = idx.trim().parse().map_err(|e: std::num::ParseIntError| {
                    WordError::Parse(e.to_string())
                })?;
                let body = body.trim();
                let inner = body
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| WordError::Parse(format!("missing brackets in `{part}`")))?;
                let mut syms = Vec::new();
                for tok in inner.split_whitespace() {
                    syms.push(parse_sym(tok)?);
                }
                strands.push((idx, syms));
            } else {
                return Err(WordError::Parse(format!("unknown field `{part}`")));
            }
        }
        let m = m.ok_or_else(|| WordError::Parse("missing m=".into()))?;
        strands.sort_by_key(|(i, _)| *i);
        for (k, (i, _)) in strands.iter().enumerate() {
            if *i != k + 1 {
                return Err(WordError::Parse(format!("strand indices must be 1..n, got s{i}")));
            }
        }
        TensorWord::new(m, strands.into_iter().map(|(_, s)| s).collect())
    }
}

fn parse_sym(tok: &str) -> Result<Sym, WordError> {
    if let Some(rest) = tok.strip_prefix('b') {
        let (num, sign) = rest.split_at(rest.len() - 1);
        let sign = match sign {
            "+" => 1,
            "-" => -1,
            _ => return Err(WordError::Parse(format!("bad bead `{tok}`"))),
        };
        let handle = num.parse().map_err(|_| WordError::Parse(format!("bad bead `{tok}`")))?;
        Ok(Sym::Bead { handle, sign })
    } else if let Some(rest) = tok.strip_prefix('e') {
        let (num, half) = rest.split_at(rest.len() - 1);
        let half = match half {
            "L" => Half::L,
            "R" => Half::R,
            _ => return Err(WordError::Parse(format!("bad end `{tok}`"))),
        };
        let chord = num.parse().map_err(|_| WordError::Parse(format!("bad end `{tok}`")))?;
        Ok(Sym::End { chord, half })
    } else {
        Err(WordError::Parse(format!("unknown symbol `{tok}`")))
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: usize, h: Half) -> Sym {
        Sym::end(c, h)
    }
    fn b(h: usize, s: i8) -> Sym {
        Sym::bead(h, s)
    }

    #[test]
    fn canonical_renumbering() {
        let w = TensorWord::new(
            0,
            vec![vec![e(2, Half::R), e(1, Half::L), e(2, Half::L), e(1, Half::R)]],
        )
        .unwrap();
        let expect = TensorWord::raw(
            0,
            vec![vec![e(1, Half::L), e(2, Half::L), e(1, Half::R), e(2, Half::R)]],
        )
        .unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn cancellation_single_pair() {
        let w = TensorWord::new(1, vec![vec![b(1, 1), b(1, -1)]]).unwrap();
        assert_eq!(w, TensorWord::empty(1, 1));
    }

    #[test]
    fn cancellation_nested_to_fixed_point() {
        // Compare the stack reduction against an all-orders oracle: apply
        // every possible single cancellation repeatedly; all paths end at
        // the same word (confluence).
        let start = vec![b(1, 1), b(2, 1), b(2, -1), b(1, -1)];
        let w = TensorWord::new(2, vec![start.clone()]).unwrap();
        assert_eq!(w, TensorWord::empty(2, 1));

        fn all_reductions(s: &[Sym]) -> Vec<Vec<Sym>> {
            let mut out = Vec::new();
            for i in 0..s.len().saturating_sub(1) {
                if let (Sym::Bead { handle: h0, sign: s0 }, Sym::Bead { handle: h1, sign: s1 }) =
                    (s[i], s[i + 1])
                {
                    if h0 == h1 && s0 == -s1 {
                        let mut t = s.to_vec();
                        t.drain(i..=i + 1);
                        out.push(t);
                    }
                }
            }
            out
        }
        let mut frontier = vec![start];
        let mut finals = std::collections::BTreeSet::new();
        while let Some(s) = frontier.pop() {
            let next = all_reductions(&s);
            if next.is_empty() {
                finals.insert(s);
            } else {
                frontier.extend(next);
            }
        }
        assert_eq!(finals.len(), 1);
        assert!(finals.iter().next().unwrap().is_empty());
    }

    #[test]
    fn canonicalize_idempotent() {
        let w = TensorWord::new(
            2,
            vec![
                vec![b(1, 1), e(3, Half::R), b(2, -1)],
                vec![e(3, Half::L), b(2, 1), b(2, -1), e(7, Half::L), e(7, Half::R)],
            ],
        )
        .unwrap();
        assert_eq!(w, w.canonicalize());
    }

    #[test]
    fn bad_chord_counts_rejected() {
        assert!(matches!(
            TensorWord::new(0, vec![vec![e(1, Half::L)]]),
            Err(WordError::BadChordCount(1, 1))
        ));
        assert!(matches!(
            TensorWord::new(0, vec![vec![e(1, Half::L), e(1, Half::L)]]),
            Err(WordError::BadChordHalves(1))
        ));
    }

    #[test]
    fn text_round_trip() {
        let w = TensorWord::new(
            2,
            vec![vec![b(1, 1), e(1, Half::L), b(2, 1)], vec![e(1, Half::R), e(2, Half::L), e(2, Half::R)]],
        )
        .unwrap();
        let s = w.serialize_text();
        assert_eq!(s, "m=2; s1=[b1+ e1L b2+]; s2=[e1R e2L e2R]");
        assert_eq!(TensorWord::parse_text(&s).unwrap(), w);
    }

    #[test]
    fn homotopy_class_of_mu_word() {
        let w = TensorWord::new(2, vec![vec![b(1, 1), b(2, 1)]]).unwrap();
        let h = w.homotopy_class();
        assert_eq!(h.images()[0], FreeWord::parse(2, "x1 x2").unwrap());
    }
}
