//! The hair substitution: beads become exponential series of labeled
//! legs, landing in diagrams on caps whose dashed legs either pair into
//! chords or end in a handle label.

use crate::linalg::{sparse_from_pairs, RowSpace, SparseVec};
use crate::morab::MorAB;
use crate::rat::{inv_factorial, qi, Q};
use crate::word::{Half, Sym, TensorWord};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One symbol on a strand of a labeled diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HSym {
    End { chord: usize, half: Half },
    /// A leg ending in the label `i⁺`.
    Leg { label: usize },
}

/// A labeled diagram: chords and labeled legs on `n` strands. Degree is
/// chords plus legs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HWord {
    strands: Vec<Vec<HSym>>,
}

impl HWord {
    pub fn new(strands: Vec<Vec<HSym>>) -> HWord {
        HWord { strands }.canonicalize()
    }

    pub fn strands(&self) -> &[Vec<HSym>] {
        &self.strands
    }

    pub fn degree(&self) -> usize {
        let mut ends = 0;
        let mut legs = 0;
        for s in &self.strands {
            for sym in s {
                match sym {
                    HSym::End { .. } => ends += 1,
                    HSym::Leg { .. } => legs += 1,
                }
            }
        }
        ends / 2 + legs
    }

    pub fn max_strand_len(&self) -> usize {
        self.strands.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    fn canonicalize(&self) -> HWord {
        let mut next = 1usize;
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let strands = self
            .strands
            .iter()
            .map(|s| {
                s.iter()
                    .map(|sym| match *sym {
                        HSym::Leg { label } => HSym::Leg { label },
                        HSym::End { chord, .. } => match map.get(&chord) {
                            None => {
                                map.insert(chord, next);
                                let out = HSym::End { chord: next, half: Half::L };
                                next += 1;
                                out
                            }
                            Some(&c) => HSym::End { chord: c, half: Half::R },
                        },
                    })
                    .collect()
            })
            .collect();
        HWord { strands }
    }

    fn chord_positions(&self, chord: usize) -> Option<((usize, usize), (usize, usize))> {
        let mut found = Vec::new();
        for (si, s) in self.strands.iter().enumerate() {
            for (pi, sym) in s.iter().enumerate() {
                if let HSym::End { chord: c, half } = *sym {
                    if c == chord {
                        found.push(((si, pi), half));
                    }
                }
            }
        }
        if found.len() != 2 {
            return None;
        }
        if found[0].1 == Half::L {
            Some((found[0].0, found[1].0))
        } else {
            Some((found[1].0, found[0].0))
        }
    }
}

impl fmt::Display for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.strands.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "s{}=[", i + 1)?;
            for (k, sym) in s.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                match *sym {
                    HSym::End { chord, half } => {
                        write!(f, "e{}{}", chord, if half == Half::L { 'L' } else { 'R' })?
                    }
                    HSym::Leg { label } => write!(f, "leg({label}+)")?,
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// A truncated combination of labeled diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledLin {
    trunc: usize,
    terms: BTreeMap<HWord, Q>,
}

impl LabeledLin {
    pub fn zero(trunc: usize) -> LabeledLin {
        LabeledLin { trunc, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, w: HWord, c: Q) {
        if c.is_zero() || w.degree() > self.trunc {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &LabeledLin) -> LabeledLin {
        assert_eq!(self.trunc, rhs.trunc);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> LabeledLin {
        if c.is_zero() {
            return LabeledLin::zero(self.trunc);
        }
        LabeledLin {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &LabeledLin) -> LabeledLin {
        self.add(&rhs.scale(&qi(-1)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HWord, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_term_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.degree()).min()
    }
}

/// Replaces each bead `x_i^{±1}` by the exponential of `i⁺`-labeled legs
/// at its position, truncated by total degree.
pub fn hair_chi(v: &MorAB, trunc: usize) -> LabeledLin {
    let mut out = LabeledLin::zero(trunc);
    for (w, coef) in v.lin().terms() {
        let base_degree = w.degree();
        if base_degree > trunc {
            continue;
        }
        // Positions of beads, flattened, with their signs.
        let beads: Vec<(usize, usize, usize, i8)> = w
            .strands()
            .iter()
            .enumerate()
            .flat_map(|(si, s)| {
                s.iter().enumerate().filter_map(move |(pi, sym)| match *sym {
                    Sym::Bead { handle, sign } => Some((si, pi, handle, sign)),
                    _ => None,
                })
            })
            .collect();
        let budget = trunc - base_degree;
        // Enumerate leg counts per bead with total <= budget.
        let mut counts = vec![0usize; beads.len()];
        loop {
            let total: usize = counts.iter().sum();
            if total <= budget {
                let mut c = coef.clone();
                for (ct, (_, _, _, sign)) in counts.iter().zip(&beads) {
                    c *= inv_factorial(*ct);
                    if *sign == -1 && ct % 2 == 1 {
                        c = -c;
                    }
                }
                // Build the labeled word.
                let mut strands: Vec<Vec<HSym>> = vec![Vec::new(); w.n_strands()];
                let mut bead_idx = 0;
                for (si, s) in w.strands().iter().enumerate() {
                    for sym in s {
                        match *sym {
                            Sym::End { chord, half } => {
                                strands[si].push(HSym::End { chord, half })
                            }
                            Sym::Bead { handle, .. } => {
                                for _ in 0..counts[bead_idx] {
                                    strands[si].push(HSym::Leg { label: handle });
                                }
                                bead_idx += 1;
                            }
                        }
                    }
                }
                out.add_term(HWord::new(strands), c);
            }
            // Increment with early cut: counts beyond the budget are
            // useless, so cap each digit at budget.
            let mut i = 0;
            loop {
                if i == counts.len() {
                    break;
                }
                counts[i] += 1;
                if counts[i] <= budget {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
        }
    }
    out
}

/// Relation oracle on the labeled space: chord 4T moves plus the
/// leg-across-chord relation (the two resolutions of a one-labeled
/// tripod agree), closed over the reachable component.
pub fn eq_mod_labeled(a: &LabeledLin, b: &LabeledLin, max_len: usize) -> bool {
    let diff = a.sub(b);
    if diff.is_zero() {
        return true;
    }
    let mut index: BTreeMap<HWord, usize> = BTreeMap::new();
    let mut space = RowSpace::new();
    let mut closed: BTreeSet<HWord> = BTreeSet::new();
    let mut frontier: Vec<HWord> = diff.terms().map(|(w, _)| w.clone()).collect();
    while let Some(w) = frontier.pop() {
        if !closed.insert(w.clone()) {
            continue;
        }
        let next = index.len();
        index.entry(w.clone()).or_insert(next);
        for words in labeled_moves(&w, max_len) {
            for (nw, _) in &words {
                if !index.contains_key(nw) {
                    let next = index.len();
                    index.insert(nw.clone(), next);
                }
                if !closed.contains(nw) {
                    frontier.push(nw.clone());
                }
            }
            let vec: SparseVec =
                sparse_from_pairs(words.into_iter().map(|(nw, c)| (index[&nw], c)));
            space.insert(vec);
        }
    }
    let probe = sparse_from_pairs(diff.terms().map(|(w, c)| (index[w], c.clone())));
    space.contains(&probe)
}

fn labeled_moves(w: &HWord, max_len: usize) -> Vec<Vec<(HWord, Q)>> {
    let mut out = Vec::new();
    let one = || qi(1);
    for (si, strand) in w.strands().iter().enumerate() {
        for pi in 0..strand.len().saturating_sub(1) {
            let (a, b) = (strand[pi], strand[pi + 1]);
            match (a, b) {
                (HSym::End { chord: ca, .. }, HSym::End { chord: cb, .. }) if ca != cb => {
                    for &(mv, fixed) in &[((si, pi), (si, pi + 1)), ((si, pi + 1), (si, pi))] {
                        if let Some(v) = fourt_move_h(w, mv, fixed, max_len) {
                            out.push(v);
                        }
                    }
                }
                (HSym::Leg { .. }, HSym::End { .. }) => {
                    if let Some(v) = leg_move(w, (si, pi), (si, pi + 1), max_len) {
                        out.push(v);
                    }
                }
                (HSym::End { .. }, HSym::Leg { .. }) => {
                    if let Some(v) = leg_move(w, (si, pi + 1), (si, pi), max_len) {
                        out.push(v);
                    }
                }
                _ => {}
            }
        }
    }
    let _ = one;
    out
}

/// `[legL@E] - [legR@E] + [legL@partner] - [legR@partner] = 0`: the two
/// resolutions of the tripod with one labeled end agree.
fn leg_move(w: &HWord, leg: (usize, usize), end: (usize, usize), max_len: usize) -> Option<Vec<(HWord, Q)>> {
    let leg_sym = w.strands()[leg.0][leg.1];
    let HSym::End { chord, .. } = w.strands()[end.0][end.1] else { return None };
    let (l, r) = w.chord_positions(chord)?;
    let fixed = end;
    let partner = if l == fixed { r } else { l };

    let mut base: Vec<Vec<HSym>> = w.strands().to_vec();
    base[leg.0].remove(leg.1);
    let adjust = |(s, p): (usize, usize)| -> (usize, usize) {
        if s == leg.0 && p > leg.1 {
            (s, p - 1)
        } else {
            (s, p)
        }
    };
    let fixed_a = adjust(fixed);
    let partner_a = adjust(partner);
    let place = |at: (usize, usize), left: bool| -> Option<HWord> {
        let mut strands = base.clone();
        let ins = if left { at.1 } else { at.1 + 1 };
        strands[at.0].insert(ins, leg_sym);
        if strands[at.0].len() > max_len {
            return None;
        }
        Some(HWord::new(strands))
    };
    let w1 = place(fixed_a, true)?;
    let w2 = place(fixed_a, false)?;
    let w3 = place(partner_a, true)?;
    let w4 = place(partner_a, false)?;
    Some(vec![(w1, qi(1)), (w2, qi(-1)), (w3, qi(1)), (w4, qi(-1))])
}

fn fourt_move_h(
    w: &HWord,
    mv: (usize, usize),
    fixed: (usize, usize),
    max_len: usize,
) -> Option<Vec<(HWord, Q)>> {
    let moving_sym = w.strands()[mv.0][mv.1];
    let HSym::End { chord: fixed_chord, .. } = w.strands()[fixed.0][fixed.1] else { return None };
    let (l, r) = w.chord_positions(fixed_chord)?;
    let partner = if l == fixed { r } else { l };
    let mut base: Vec<Vec<HSym>> = w.strands().to_vec();
    base[mv.0].remove(mv.1);
    let adjust = |(s, p): (usize, usize)| -> (usize, usize) {
        if s == mv.0 && p > mv.1 {
            (s, p - 1)
        } else {
            (s, p)
        }
    };
    let fixed_a = adjust(fixed);
    let partner_a = adjust(partner);
    let place = |at: (usize, usize), left: bool| -> Option<HWord> {
        let mut strands = base.clone();
        let ins = if left { at.1 } else { at.1 + 1 };
        strands[at.0].insert(ins, moving_sym);
        if strands[at.0].len() > max_len {
            return None;
        }
        Some(HWord::new(strands))
    };
    let w1 = place(fixed_a, true)?;
    let w2 = place(fixed_a, false)?;
    let w3 = place(partner_a, false)?;
    let w4 = place(partner_a, true)?;
    Some(vec![(w1, qi(1)), (w2, qi(-1)), (w3, qi(-1)), (w4, qi(1))])
}

/// Linearity and degree-filtration checks: the substitution is additive
/// and never lowers degree.
pub fn hair_linearity_check(v: &MorAB, w: &MorAB, trunc: usize) -> bool {
    let sum = hair_chi(&v.add(w), trunc);
    let parts = hair_chi(v, trunc).add(&hair_chi(w, trunc));
    if sum != parts {
        return false;
    }
    for (word, _) in v.lin().terms() {
        let single = MorAB::from_word(v.trunc(), v.n(), word.clone());
        if let Some(min) = hair_chi(&single, trunc).min_term_degree() {
            if min < word.degree() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morab::{convolve, generator, identity, Gen, MorAB};
    use crate::rat::q;

    #[test]
    fn beadless_diagram_fixed() {
        let c = generator(Gen::Casimir, 2);
        let h = hair_chi(&c, 2);
        assert_eq!(h.terms().count(), 1);
        let (w, coef) = h.terms().next().unwrap();
        assert_eq!(coef, &qi(1));
        assert_eq!(w.degree(), 1);
    }

    #[test]
    fn identity_strand_exponential() {
        let idm = identity(1, 2);
        let h = hair_chi(&idm, 2);
        // strand + leg + (1/2) two legs.
        let mut expect = LabeledLin::zero(2);
        expect.add_term(HWord::new(vec![vec![]]), qi(1));
        expect.add_term(HWord::new(vec![vec![HSym::Leg { label: 1 }]]), qi(1));
        expect.add_term(
            HWord::new(vec![vec![HSym::Leg { label: 1 }, HSym::Leg { label: 1 }]]),
            q(1, 2),
        );
        assert_eq!(h, expect);
    }

    #[test]
    fn antipode_strand_at_degree_1() {
        let s = generator(Gen::Antipode, 1);
        let h = hair_chi(&s, 1);
        let mut expect = LabeledLin::zero(1);
        expect.add_term(HWord::new(vec![vec![]]), qi(1));
        expect.add_term(HWord::new(vec![vec![HSym::Leg { label: 1 }]]), qi(-1));
        assert_eq!(h, expect);
    }

    #[test]
    fn linearity_and_degree_filtration() {
        let c = generator(Gen::Casimir, 2);
        let idm = identity(2, 2);
        let v = crate::morab::lconv(&c, &idm).unwrap();
        let w = identity(2, 2).scale(&q(3, 7));
        assert!(hair_linearity_check(&v, &w, 2));
    }

    #[test]
    fn respects_slide_relation() {
        // Bead before both chord halves vs after: their hair images agree
        // modulo the labeled relations.
        let mk = |before: bool| {
            let s1 = if before {
                vec![Sym::bead(1, 1), Sym::end(1, Half::L)]
            } else {
                vec![Sym::end(1, Half::L), Sym::bead(1, 1)]
            };
            let s2 = if before {
                vec![Sym::bead(1, 1), Sym::end(1, Half::R)]
            } else {
                vec![Sym::end(1, Half::R), Sym::bead(1, 1)]
            };
            MorAB::from_word(2, 2, TensorWord::new(1, vec![s1, s2]).unwrap())
        };
        let a = mk(true);
        let b = mk(false);
        assert!(a.is_eq_mod(&b));
        let ha = hair_chi(&a, 2);
        let hb = hair_chi(&b, 2);
        assert_ne!(ha, hb, "images differ as raw sums");
        assert!(eq_mod_labeled(&ha, &hb, 8), "images differ modulo labeled relations");
    }

    #[test]
    fn respects_4t() {
        // A 4T combination maps to zero in the labeled space.
        let e = |c, h| Sym::end(c, h);
        use Half::{L, R};
        let mk = |s1: Vec<Sym>, s2: Vec<Sym>| {
            MorAB::from_word(2, 2, TensorWord::new(0, vec![s1, s2]).unwrap())
        };
        let w1 = mk(vec![e(1, L), e(1, R), e(2, L)], vec![e(2, R)]);
        let w2 = mk(vec![e(1, L), e(2, L), e(1, R)], vec![e(2, R)]);
        let w3 = mk(vec![e(1, L), e(2, L)], vec![e(2, R), e(1, R)]);
        let w4 = mk(vec![e(1, L), e(2, L)], vec![e(1, R), e(2, R)]);
        let combo = w1.sub(&w2).sub(&w3).add(&w4);
        let h = hair_chi(&combo, 2);
        assert!(eq_mod_labeled(&h, &LabeledLin::zero(2), 7));
    }

    #[test]
    fn forgetting_legs_matches_projection_on_beaded_input() {
        // Setting all legs to zero (keeping only leg-free terms) recovers
        // the bead-stripped part for homotopically trivial colorings and
        // kills nothing else on bead-free diagrams.
        let c = generator(Gen::Casimir, 2);
        let cc = convolve(&c, &c).unwrap();
        let h = hair_chi(&cc, 2);
        let legfree: Vec<_> = h
            .terms()
            .filter(|(w, _)| {
                w.strands()
                    .iter()
                    .all(|s| s.iter().all(|sym| matches!(sym, HSym::End { .. })))
            })
            .collect();
        assert_eq!(legfree.len(), cc.lin().len());
    }
}
