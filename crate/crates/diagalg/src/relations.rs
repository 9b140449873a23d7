//! The finite-window relation oracle: decides equality of linear
//! combinations of canonical tensor words modulo the bead-slide and 4T
//! relations (chord orientation and bead cancellation are already
//! absorbed by the canonical form).
//!
//! `Equal` is sound unconditionally: every spanning vector is a
//! consequence of the defining relations. `UnknownAtWindow` is
//! inconclusive; enlarging the window may resolve it.

use crate::fgroup::FreeWord;
use crate::lin::DiagLin;
use crate::linalg::{sparse_from_pairs, RowSpace};
use crate::rat::Q;
use crate::word::{Half, Sym, TensorWord};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Enumeration bounds for the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    /// Maximum symbols per strand.
    pub max_len: usize,
    /// Bead alphabet, as (handle, sign) pairs.
    pub alphabet: BTreeSet<(usize, i8)>,
}

impl Window {
    /// Default window for a set of inputs: max strand length + 4, and the
    /// handles present in the inputs with both signs (the relations never
    /// introduce new handles, but padded slides need the inverse
    /// letters).
    pub fn auto(inputs: &[&DiagLin]) -> Window {
        let mut max_len = 0;
        let mut alphabet = BTreeSet::new();
        for d in inputs {
            for (w, _) in d.terms() {
                max_len = max_len.max(w.max_strand_len());
                for (h, _) in w.bead_letters() {
                    alphabet.insert((h, 1));
                    alphabet.insert((h, -1));
                }
            }
        }
        Window { max_len: max_len + 4, alphabet }
    }

    pub fn widen(&self, extra: usize) -> Window {
        Window { max_len: self.max_len + extra, alphabet: self.alphabet.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    UnknownAtWindow { max_len: usize },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Decides `a == b` modulo relations, degree by degree.
pub fn eq_mod_relations(a: &DiagLin, b: &DiagLin, m: usize, n: usize, win: Option<Window>) -> Verdict {
    assert_eq!(a.trunc(), b.trunc(), "truncation mismatch");
    let win = win.unwrap_or_else(|| Window::auto(&[a, b]));
    let diff = a.sub(b);
    if diff.is_zero() {
        return Verdict::Equal;
    }
    let _ = (m, n);
    for k in 0..=diff.max_degree() {
        let dk = diff.degree_part(k);
        if dk.is_zero() {
            continue;
        }
        if !degree_part_in_span(&dk, k, &win) {
            return Verdict::UnknownAtWindow { max_len: win.max_len };
        }
    }
    Verdict::Equal
}

fn degree_part_in_span(dk: &DiagLin, k: usize, win: &Window) -> bool {
    // Degree 0: canonical words are a basis outright (no slide or 4T
    // relation applies without chords), so a nonzero combination is
    // never in the span.
    if k == 0 {
        return false;
    }
    let terms: Vec<(TensorWord, Q)> = dk.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    class_in_span(&terms, win)
}

/// A growing relation span: words reachable from queried supports by
/// relation moves, with their vectors reduced into a row space. Because
/// every spanning vector is anchored at one of its own support words,
/// membership of a combination only depends on the connected components
/// of its support, so closing over reachable words gives the same
/// verdict as enumerating the whole window.
struct SpanStore {
    index: BTreeMap<TensorWord, usize>,
    space: RowSpace,
    closed: BTreeSet<TensorWord>,
}

type StoreKey = (usize, Vec<(usize, i8)>);

fn span_stores() -> &'static Mutex<HashMap<StoreKey, Arc<Mutex<SpanStore>>>> {
    static CACHE: OnceLock<Mutex<HashMap<StoreKey, Arc<Mutex<SpanStore>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn store_for(win: &Window) -> Arc<Mutex<SpanStore>> {
    let key: StoreKey = (win.max_len, win.alphabet.iter().copied().collect());
    let mut map = span_stores().lock().unwrap();
    Arc::clone(map.entry(key).or_insert_with(|| {
        Arc::new(Mutex::new(SpanStore {
            index: BTreeMap::new(),
            space: RowSpace::new(),
            closed: BTreeSet::new(),
        }))
    }))
}

fn close_from(store: &mut SpanStore, seeds: &[TensorWord], win: &Window) {
    let mut frontier: Vec<TensorWord> = seeds
        .iter()
        .filter(|w| !store.closed.contains(*w))
        .cloned()
        .collect();
    while let Some(w) = frontier.pop() {
        if !store.closed.insert(w.clone()) {
            continue;
        }
        let next = store.index.len();
        store.index.entry(w.clone()).or_insert(next);
        for words in relation_moves(&w, win) {
            for (nw, _) in &words {
                if !store.index.contains_key(nw) {
                    let next = store.index.len();
                    store.index.insert(nw.clone(), next);
                }
                if !store.closed.contains(nw) {
                    frontier.push(nw.clone());
                }
            }
            let vec = sparse_from_pairs(words.into_iter().map(|(nw, c)| (store.index[&nw], c)));
            store.space.insert(vec);
        }
    }
}

/// Reduces a combination against the (closed) relation span, returning
/// its canonical residual as word/coefficient pairs. Zero residual means
/// the combination is a relation consequence.
pub fn residual(d: &DiagLin, win: &Window) -> Vec<(TensorWord, Q)> {
    let store = store_for(win);
    let mut store = store.lock().unwrap();
    let seeds: Vec<TensorWord> = d.terms().map(|(w, _)| w.clone()).collect();
    close_from(&mut store, &seeds, win);
    let mut probe = sparse_from_pairs(d.terms().map(|(w, c)| (store.index[w], c.clone())));
    store.space.reduce(&mut probe);
    let back: BTreeMap<usize, &TensorWord> = store.index.iter().map(|(w, i)| (*i, w)).collect();
    probe.into_iter().map(|(i, c)| (back[&i].clone(), c)).collect()
}

fn class_in_span(terms: &[(TensorWord, Q)], win: &Window) -> bool {
    let store = store_for(win);
    let mut store = store.lock().unwrap();
    let seeds: Vec<TensorWord> = terms.iter().map(|(w, _)| w.clone()).collect();
    close_from(&mut store, &seeds, win);
    let probe = sparse_from_pairs(terms.iter().map(|(w, c)| (store.index[w], c.clone())));
    store.space.contains(&probe)
}

/// All canonical tensor words on `n` strands with `k` chords, strand
/// length at most `win.max_len`, beads from the window alphabet, and the
/// given per-strand homotopy class.
pub fn enumerate_words(
    m: usize,
    n: usize,
    k: usize,
    win: &Window,
    class: &[FreeWord],
) -> Vec<TensorWord> {
    assert_eq!(class.len(), n);
    // Per strand: sequences over {beads, end-slots}, no adjacent
    // cancelling bead pair, grouped by slot count.
    let per_strand: Vec<Vec<Vec<Pattern>>> = (0..n)
        .map(|i| {
            let mut groups: Vec<Vec<Pattern>> = vec![Vec::new(); 2 * k + 1];
            let mut cur = Pattern::new();
            strand_dfs(&mut cur, &FreeWord::identity(m), &class[i], win, 2 * k, &mut groups);
            groups
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<&Pattern> = Vec::with_capacity(n);
    distribute(&per_strand, 0, 2 * k, &mut chosen, &mut |pats| {
        // Collect global slot positions.
        let mut slots: Vec<(usize, usize)> = Vec::with_capacity(2 * k);
        for (si, p) in pats.iter().enumerate() {
            for (pi, sym) in p.syms.iter().enumerate() {
                if sym.is_none() {
                    slots.push((si, pi));
                }
            }
        }
        // Every perfect matching of the slots is a distinct chord pattern.
        let mut pairing = vec![usize::MAX; slots.len()];
        matchings(&mut pairing, &mut |pairing| {
            let mut strands: Vec<Vec<Sym>> = pats
                .iter()
                .map(|p| {
                    p.syms
                        .iter()
                        .map(|s| match s {
                            Some(b) => Sym::bead(b.0, b.1),
                            None => Sym::end(1, Half::L),
                        })
                        .collect()
                })
                .collect();
            // Write chord ids: pairing[i] = j means slots i and j matched.
            let mut chord = 0usize;
            for (i, &j) in pairing.iter().enumerate() {
                if j > i {
                    chord += 1;
                    let (s1, p1) = slots[i];
                    let (s2, p2) = slots[j];
                    strands[s1][p1] = Sym::end(chord, Half::L);
                    strands[s2][p2] = Sym::end(chord, Half::R);
                }
            }
            let w = TensorWord::raw(m, strands).expect("valid by construction");
            debug_assert!(w.is_canonical(), "enumerated word not canonical: {w}");
            out.push(w);
        });
    });
    out.sort();
    out
}

#[derive(Clone)]
struct Pattern {
    /// None = chord-end slot, Some = bead letter.
    syms: Vec<Option<(usize, i8)>>,
    slots: usize,
}

impl Pattern {
    fn new() -> Pattern {
        Pattern { syms: Vec::new(), slots: 0 }
    }
}

fn strand_dfs(
    cur: &mut Pattern,
    prefix: &FreeWord,
    target: &FreeWord,
    win: &Window,
    max_slots: usize,
    groups: &mut Vec<Vec<Pattern>>,
) {
    let dist = prefix.inv().mul(target).expect("same rank").len();
    let remaining = win.max_len - cur.syms.len();
    // Prune: the remaining symbols must be able to finish the bead word.
    if dist > remaining {
        return;
    }
    if dist == 0 {
        groups[cur.slots].push(cur.clone());
    }
    if remaining == 0 {
        return;
    }
    // Place a chord-end slot.
    if cur.slots < max_slots {
        cur.syms.push(None);
        cur.slots += 1;
        strand_dfs(cur, prefix, target, win, max_slots, groups);
        cur.slots -= 1;
        cur.syms.pop();
    }
    // Place a bead (no adjacent cancelling pair).
    for &(h, s) in &win.alphabet {
        if let Some(Some((h0, s0))) = cur.syms.last() {
            if *h0 == h && *s0 == -s {
                continue;
            }
        }
        let next = prefix
            .mul(&FreeWord::gen(target.rank(), h, s).expect("alphabet letter in range"))
            .expect("same rank");
        cur.syms.push(Some((h, s)));
        strand_dfs(cur, &next, target, win, max_slots, groups);
        cur.syms.pop();
    }
}

fn distribute<'a>(
    per_strand: &'a [Vec<Vec<Pattern>>],
    strand: usize,
    slots_left: usize,
    chosen: &mut Vec<&'a Pattern>,
    f: &mut impl FnMut(&[&Pattern]),
) {
    if strand == per_strand.len() {
        if slots_left == 0 {
            f(chosen);
        }
        return;
    }
    let max_usable = per_strand[strand].len().min(slots_left + 1);
    for cnt in 0..max_usable {
        for p in &per_strand[strand][cnt] {
            chosen.push(p);
            distribute(per_strand, strand + 1, slots_left - cnt, chosen, f);
            chosen.pop();
        }
    }
}

fn matchings(pairing: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let first = match pairing.iter().position(|&x| x == usize::MAX) {
        None => {
            f(pairing);
            return;
        }
        Some(i) => i,
    };
    for j in (first + 1)..pairing.len() {
        if pairing[j] == usize::MAX {
            pairing[first] = j;
            pairing[j] = first;
            matchings(pairing, f);
            pairing[first] = usize::MAX;
            pairing[j] = usize::MAX;
        }
    }
}

/// Relation vectors anchored at one basis word: generalized bead slides
/// (conjugating a chord by a letter) and 4T moves.
/// Relation moves anchored at one canonical word, as word/coefficient
/// lists: generalized bead slides (conjugating a chord by a letter) and
/// 4T moves.
fn relation_moves(w: &TensorWord, win: &Window) -> Vec<Vec<(TensorWord, Q)>> {
    let mut out = Vec::new();
    let k = w.degree();
    let one = || num::one::<Q>();
    // Slides: for chord p and letter x, insert x^-1 before and x after
    // both halves, then reduce. This is the bead-slide relation padded
    // with cancelling pairs, so it is a consequence of the defining
    // relations whenever both sides stay within the window. Negative
    // letters generate the same pairs, so only positive ones are used.
    for chord in 1..=k {
        let Some((h1, h2)) = w.chord_positions(chord) else { continue };
        for &(h, s) in win.alphabet.iter().filter(|&&(_, s)| s == 1) {
            let mut strands: Vec<Vec<Sym>> = w.strands().to_vec();
            let mut inserts = [h1, h2];
            inserts.sort();
            for &(si, pi) in inserts.iter().rev() {
                strands[si].insert(pi + 1, Sym::bead(h, s));
                strands[si].insert(pi, Sym::bead(h, -s));
            }
            let w2 = TensorWord::raw(w.m(), strands).expect("still valid").canonicalize();
            if w2 == *w || w2.max_strand_len() > win.max_len {
                continue;
            }
            out.push(vec![(w.clone(), one()), (w2, -one())]);
        }
    }
    // 4T: for each adjacent pair of ends of distinct chords, the moving
    // half placed on either side of the fixed half equals it placed on
    // either side of the fixed chord's partner half.
    for (si, strand) in w.strands().iter().enumerate() {
        for pi in 0..strand.len().saturating_sub(1) {
            let (a, b) = (strand[pi], strand[pi + 1]);
            let (Sym::End { chord: ca, .. }, Sym::End { chord: cb, .. }) = (a, b) else { continue };
            if ca == cb {
                continue;
            }
            for &(mv_pos, fixed_pos) in &[((si, pi), (si, pi + 1)), ((si, pi + 1), (si, pi))] {
                if let Some(words) = fourt_move(w, mv_pos, fixed_pos, win) {
                    out.push(words);
                }
            }
        }
    }
    out
}

/// Builds `[m-left-of-f] - [m-right-of-f] - [m-right-of-partner] +
/// [m-left-of-partner]` as a word list, if all four words fit the
/// window. `mv` and `fixed` must be adjacent ends of distinct chords.
fn fourt_move(
    w: &TensorWord,
    mv: (usize, usize),
    fixed: (usize, usize),
    win: &Window,
) -> Option<Vec<(TensorWord, Q)>> {
    let moving_sym = w.strands()[mv.0][mv.1];
    let Sym::End { chord: fixed_chord, .. } = w.strands()[fixed.0][fixed.1] else { return None };
    let (l, r) = w.chord_positions(fixed_chord)?;
    debug_assert!(l == fixed || r == fixed);
    let partner = if l == fixed { r } else { l };

    let mut base: Vec<Vec<Sym>> = w.strands().to_vec();
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

    let place = |at: (usize, usize), left: bool| -> Option<TensorWord> {
        let mut strands = base.clone();
        let ins = if left { at.1 } else { at.1 + 1 };
        strands[at.0].insert(ins, moving_sym);
        if strands[at.0].len() > win.max_len {
            return None;
        }
        Some(TensorWord::raw(w.m(), strands).expect("valid").canonicalize())
    };

    let w1 = place(fixed_a, true)?;
    let w2 = place(fixed_a, false)?;
    let w3 = place(partner_a, false)?;
    let w4 = place(partner_a, true)?;
    let one = num::one::<Q>();
    Some(vec![(w1, one.clone()), (w2, -one.clone()), (w3, -one.clone()), (w4, one)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn lin(trunc: usize, items: &[(&TensorWord, i64)]) -> DiagLin {
        let mut d = DiagLin::zero(trunc);
        for (w, c) in items {
            d.add_term((*w).clone(), qi(*c));
        }
        d
    }

    fn ends(pattern: &[&[i64]]) -> TensorWord {
        // Positive entries are chord ids (first occurrence L); build raw.
        let mut seen = std::collections::BTreeSet::new();
        let strands = pattern
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&c| {
                        let c = c as usize;
                        if seen.insert(c) {
                            Sym::end(c, Half::L)
                        } else {
                            Sym::end(c, Half::R)
                        }
                    })
                    .collect()
            })
            .collect();
        TensorWord::new(0, strands).unwrap()
    }

    #[test]
    fn syntactic_equality_is_equal() {
        let w = ends(&[&[1, 1]]);
        let a = lin(2, &[(&w, 3)]);
        assert!(eq_mod_relations(&a, &a, 0, 1, None).is_equal());
    }

    #[test]
    fn one_strand_two_chords_4t() {
        // (1122) = (1221) modulo 4T, but neither equals (1212).
        let w1122 = ends(&[&[1, 1, 2, 2]]);
        let w1221 = ends(&[&[1, 2, 2, 1]]);
        let w1212 = ends(&[&[1, 2, 1, 2]]);
        let a = lin(2, &[(&w1122, 1)]);
        let b = lin(2, &[(&w1221, 1)]);
        let c = lin(2, &[(&w1212, 1)]);
        assert!(eq_mod_relations(&a, &b, 0, 1, None).is_equal());
        assert!(!eq_mod_relations(&a, &c, 0, 1, None).is_equal());
        assert!(!eq_mod_relations(&b, &c, 0, 1, None).is_equal());
    }

    #[test]
    fn paper_4t_combination_is_zero() {
        // w1 - w2 - w3 + w4 with the halves arranged per the defining 4T
        // pattern, all on one strand plus a spectator strand.
        let w1 = ends(&[&[1, 1, 2], &[2]]);
        let w2 = ends(&[&[1, 2, 1], &[2]]);
        // moving chord-1's R half next to chord 2's other half (strand 2)
        let w3 = TensorWord::new(
            0,
            vec![
                vec![Sym::end(1, Half::L), Sym::end(2, Half::L)],
                vec![Sym::end(2, Half::R), Sym::end(1, Half::R)],
            ],
        )
        .unwrap();
        let w4 = TensorWord::new(
            0,
            vec![
                vec![Sym::end(1, Half::L), Sym::end(2, Half::L)],
                vec![Sym::end(1, Half::R), Sym::end(2, Half::R)],
            ],
        )
        .unwrap();
        let v = lin(2, &[(&w1, 1), (&w2, -1), (&w3, -1), (&w4, 1)]);
        let zero = DiagLin::zero(2);
        assert!(eq_mod_relations(&v, &zero, 0, 2, None).is_equal());
    }

    #[test]
    fn bead_slide_identity() {
        // x before both halves == x after both halves (two strands).
        let m = 1;
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
            TensorWord::new(m, vec![s1, s2]).unwrap()
        };
        let a = lin(1, &[(&mk(true), 1)]);
        let b = lin(1, &[(&mk(false), 1)]);
        assert!(eq_mod_relations(&a, &b, 1, 2, None).is_equal());
    }

    #[test]
    fn chord_block_slides_past_bead() {
        // <x e1L e1R> == <e1L e1R x> via a padded slide.
        let a_w = TensorWord::new(1, vec![vec![Sym::bead(1, 1), Sym::end(1, Half::L), Sym::end(1, Half::R)]]).unwrap();
        let b_w = TensorWord::new(1, vec![vec![Sym::end(1, Half::L), Sym::end(1, Half::R), Sym::bead(1, 1)]]).unwrap();
        let a = lin(1, &[(&a_w, 1)]);
        let b = lin(1, &[(&b_w, 1)]);
        assert!(eq_mod_relations(&a, &b, 1, 1, None).is_equal());
        // But a straddling chord is a different class.
        let c_w = TensorWord::new(1, vec![vec![Sym::end(1, Half::L), Sym::bead(1, 1), Sym::end(1, Half::R)]]).unwrap();
        let c = lin(1, &[(&c_w, 1)]);
        assert!(!eq_mod_relations(&a, &c, 1, 1, None).is_equal());
    }

    #[test]
    fn degree_zero_distinct_words_differ() {
        let a_w = TensorWord::new(1, vec![vec![Sym::bead(1, 1)]]).unwrap();
        let b_w = TensorWord::new(1, vec![vec![Sym::bead(1, -1)]]).unwrap();
        let a = lin(0, &[(&a_w, 1)]);
        let b = lin(0, &[(&b_w, 1)]);
        assert!(!eq_mod_relations(&a, &b, 1, 1, None).is_equal());
    }

    #[test]
    fn window_stability_under_enlargement() {
        let w1122 = ends(&[&[1, 1, 2, 2]]);
        let w1221 = ends(&[&[1, 2, 2, 1]]);
        let a = lin(2, &[(&w1122, 1)]);
        let b = lin(2, &[(&w1221, 1)]);
        let base = Window::auto(&[&a, &b]);
        assert!(eq_mod_relations(&a, &b, 0, 1, Some(base.clone())).is_equal());
        assert!(eq_mod_relations(&a, &b, 0, 1, Some(base.widen(2))).is_equal());
    }
}
