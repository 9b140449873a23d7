//! Formal rational linear combinations of canonical tensor words, graded
//! by chord degree and truncated.

use crate::rat::Q;
use crate::word::TensorWord;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A truncated linear combination. Keys are canonical words; zero
/// coefficients are never stored; all keys share `m` and strand count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagLin {
    trunc: usize,
    terms: BTreeMap<TensorWord, Q>,
}

impl DiagLin {
    pub fn zero(trunc: usize) -> DiagLin {
        DiagLin { trunc, terms: BTreeMap::new() }
    }

    pub fn single(trunc: usize, w: TensorWord, c: Q) -> DiagLin {
        let mut d = DiagLin::zero(trunc);
        d.add_term(w, c);
        d
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorWord, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &TensorWord) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c * w`, canonicalizing the key and truncating by degree.
    pub fn add_term(&mut self, w: TensorWord, c: Q) {
        if c.is_zero() {
            return;
        }
        let w = if w.is_canonical() { w } else { w.canonicalize() };
        if w.degree() > self.trunc {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &DiagLin) -> DiagLin {
        assert_eq!(self.trunc, rhs.trunc, "truncation mismatch");
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &DiagLin) -> DiagLin {
        self.add(&rhs.scale(&-num::one::<Q>()))
    }

    pub fn scale(&self, c: &Q) -> DiagLin {
        if c.is_zero() {
            return DiagLin::zero(self.trunc);
        }
        let terms = self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect();
        DiagLin { trunc: self.trunc, terms }
    }

    /// The degree-`k` slice.
    pub fn degree_part(&self, k: usize) -> DiagLin {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree() == k)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        DiagLin { trunc: self.trunc, terms }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    /// Retruncates to a (smaller or larger) degree cap.
    pub fn retrunc(&self, trunc: usize) -> DiagLin {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree() <= trunc)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        DiagLin { trunc, terms }
    }

    /// Deterministic listing sorted by (degree, canonical text).
    pub fn sorted_terms(&self) -> Vec<(TensorWord, Q)> {
        let mut v: Vec<(TensorWord, Q)> = self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        v.sort_by_key(|(w, _)| (w.degree(), w.serialize_text()));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};
    use crate::word::{Half, Sym};

    #[test]
    fn terms_merge_and_cancel() {
        let w = TensorWord::new(0, vec![vec![Sym::end(1, Half::L), Sym::end(1, Half::R)]]).unwrap();
        let mut d = DiagLin::zero(2);
        d.add_term(w.clone(), q(1, 2));
        d.add_term(w.clone(), q(1, 2));
        assert_eq!(d.coeff(&w), qi(1));
        d.add_term(w.clone(), qi(-1));
        assert!(d.is_zero());
    }

    #[test]
    fn truncation_drops_high_degree() {
        let w2 = TensorWord::new(
            0,
            vec![vec![
                Sym::end(1, Half::L),
                Sym::end(1, Half::R),
                Sym::end(2, Half::L),
                Sym::end(2, Half::R),
            ]],
        )
        .unwrap();
        let mut d = DiagLin::zero(1);
        d.add_term(w2, qi(1));
        assert!(d.is_zero());
    }
}
