//! Truncated noncommutative power series, enveloping algebras of the
//! Kohno–Drinfeld Lie algebras, and associator validation.

use crate::linalg::{RowSpace, SparseVec};
use crate::morab::{conv_unit, convolve, MorAB};
use crate::rat::{inv_factorial, q, qi, Q};
use crate::word::{Sym, TensorWord};
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("arity mismatch: series has {expected} letters, got {got} arguments")]
    Arity { expected: usize, got: usize },
    #[error("series is not invertible (degree-0 part is not 1)")]
    NotInvertible,
    #[error("no closed-form coefficients beyond degree 2; supply a coefficient table")]
    DegreeTooHigh,
    #[error("bad associator table: {0}")]
    Parse(String),
    #[error("associator is not group-like at degree {0}")]
    NotGroupLike(usize),
}

/// A truncated series in the free associative algebra on `n_gens`
/// letters. Monomials are sequences of 0-based letter indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCSeries {
    n_gens: usize,
    trunc: usize,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl NCSeries {
    pub fn zero(n_gens: usize, trunc: usize) -> NCSeries {
        NCSeries { n_gens, trunc, terms: BTreeMap::new() }
    }

    pub fn one(n_gens: usize, trunc: usize) -> NCSeries {
        let mut s = NCSeries::zero(n_gens, trunc);
        s.add_term(vec![], qi(1));
        s
    }

    pub fn gen(n_gens: usize, trunc: usize, i: usize) -> NCSeries {
        assert!(i < n_gens);
        let mut s = NCSeries::zero(n_gens, trunc);
        s.add_term(vec![i], qi(1));
        s
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[usize]) -> Q {
        self.terms.get(mono).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, mono: Vec<usize>, c: Q) {
        if c.is_zero() || mono.len() > self.trunc {
            return;
        }
        assert!(mono.iter().all(|&i| i < self.n_gens));
        let e = self.terms.entry(mono).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &NCSeries) -> NCSeries {
        assert_eq!(self.n_gens, rhs.n_gens);
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &NCSeries) -> NCSeries {
        self.add(&rhs.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> NCSeries {
        if c.is_zero() {
            return NCSeries::zero(self.n_gens, self.trunc);
        }
        NCSeries {
            n_gens: self.n_gens,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &NCSeries) -> NCSeries {
        assert_eq!(self.n_gens, rhs.n_gens);
        let mut out = NCSeries::zero(self.n_gens, self.trunc.min(rhs.trunc));
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                if m1.len() + m2.len() > out.trunc {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &NCSeries) -> NCSeries {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplicative inverse when the constant term is nonzero.
    pub fn inverse(&self) -> Result<NCSeries, SeriesError> {
        let c0 = self.coeff(&[]);
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = qi(1) / c0;
        let x = self.scale(&inv0).sub(&NCSeries::one(self.n_gens, self.trunc));
        let mut acc = NCSeries::one(self.n_gens, self.trunc);
        let mut pow = NCSeries::one(self.n_gens, self.trunc);
        for _ in 0..self.trunc {
            pow = pow.mul(&x).scale(&qi(-1));
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc.scale(&inv0))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> NCSeries {
        assert!(self.coeff(&[]).is_zero(), "exp needs zero constant term");
        let mut acc = NCSeries::one(self.n_gens, self.trunc);
        let mut pow = NCSeries::one(self.n_gens, self.trunc);
        for k in 1..=self.trunc {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale(&inv_factorial(k)));
        }
        acc
    }

    /// Group-likeness up to the truncation: the letterwise-primitive
    /// comultiplication of the series equals its square.
    pub fn is_group_like(&self) -> bool {
        if self.coeff(&[]) != qi(1) {
            return false;
        }
        let mut delta: BTreeMap<(Vec<usize>, Vec<usize>), Q> = BTreeMap::new();
        for (m, c) in self.terms() {
            let k = m.len();
            for mask in 0u64..(1 << k) {
                let mut l = Vec::new();
                let mut r = Vec::new();
                for (i, &g) in m.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        l.push(g);
                    } else {
                        r.push(g);
                    }
                }
                let e = delta.entry((l, r)).or_insert_with(Q::zero);
                *e += c.clone();
            }
        }
        delta.retain(|_, v| !v.is_zero());
        let mut square: BTreeMap<(Vec<usize>, Vec<usize>), Q> = BTreeMap::new();
        for (m1, c1) in self.terms() {
            for (m2, c2) in self.terms() {
                if m1.len() + m2.len() > self.trunc {
                    continue;
                }
                let e = square.entry((m1.clone(), m2.clone())).or_insert_with(Q::zero);
                *e += c1 * c2;
            }
        }
        square.retain(|_, v| !v.is_zero());
        delta.retain(|(l, r), _| l.len() + r.len() <= self.trunc);
        delta == square
    }
}

/// Substitution targets: anything with a unit, products, sums and
/// rational scaling.
pub trait SubstTarget: Clone {
    fn mul(&self, rhs: &Self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl SubstTarget for NCSeries {
    fn mul(&self, rhs: &Self) -> Self {
        NCSeries::mul(self, rhs)
    }
    fn add(&self, rhs: &Self) -> Self {
        NCSeries::add(self, rhs)
    }
    fn scale(&self, c: &Q) -> Self {
        NCSeries::scale(self, c)
    }
}

impl SubstTarget for MorAB {
    fn mul(&self, rhs: &Self) -> Self {
        convolve(self, rhs).expect("convolution shapes match")
    }
    fn add(&self, rhs: &Self) -> Self {
        MorAB::add(self, rhs)
    }
    fn scale(&self, c: &Q) -> Self {
        MorAB::scale(self, c)
    }
}

/// Monomial-wise substitution; `unit` is the target's multiplicative
/// unit.
pub fn subst<T: SubstTarget>(series: &NCSeries, unit: &T, args: &[T]) -> Result<T, SeriesError> {
    if args.len() != series.n_gens {
        return Err(SeriesError::Arity { expected: series.n_gens, got: args.len() });
    }
    let mut acc = unit.scale(&Q::zero());
    for (m, c) in series.terms() {
        let mut prod = unit.clone();
        for &g in m {
            prod = prod.mul(&args[g]);
        }
        acc = acc.add(&prod.scale(c));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssociatorSource {
    BuiltinDegree2,
    UserSupplied,
}

/// A two-letter series with the associator sanity constraints checked on
/// construction (unit constant term, group-like up to the truncation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatorSpec {
    pub series: NCSeries,
    pub source: AssociatorSource,
}

impl AssociatorSpec {
    pub fn new(series: NCSeries, source: AssociatorSource) -> Result<AssociatorSpec, SeriesError> {
        if series.coeff(&[]) != qi(1) {
            return Err(SeriesError::NotInvertible);
        }
        if !series.is_group_like() {
            return Err(SeriesError::NotGroupLike(series.trunc()));
        }
        Ok(AssociatorSpec { series, source })
    }
}

/// The degree-2 rational associator `1 + [X,Y]/24`.
pub fn default_associator(trunc: usize) -> Result<AssociatorSpec, SeriesError> {
    if trunc > 2 {
        return Err(SeriesError::DegreeTooHigh);
    }
    let mut s = NCSeries::one(2, trunc);
    s.add_term(vec![0, 1], q(1, 24));
    s.add_term(vec![1, 0], q(-1, 24));
    AssociatorSpec::new(s, AssociatorSource::BuiltinDegree2)
}

/// Parses the coefficient-table format: one term per line,
/// `degree monomial numerator/denominator`, monomials over `{X,Y}`
/// (degree 0 uses monomial `1`).
pub fn parse_associator_table(text: &str, trunc: usize) -> Result<AssociatorSpec, SeriesError> {
    let mut s = NCSeries::zero(2, trunc);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(SeriesError::Parse(format!("line {}: expected 3 fields", lineno + 1)));
        }
        let degree: usize = parts[0]
            .parse()
            .map_err(|_| SeriesError::Parse(format!("line {}: bad degree", lineno + 1)))?;
        let mono: Vec<usize> = if parts[1] == "1" {
            Vec::new()
        } else {
            parts[1]
                .chars()
                .map(|ch| match ch {
                    'X' => Ok(0),
                    'Y' => Ok(1),
                    _ => Err(SeriesError::Parse(format!("line {}: bad monomial", lineno + 1))),
                })
                .collect::<Result<_, _>>()?
        };
        if mono.len() != degree {
            return Err(SeriesError::Parse(format!(
                "line {}: degree does not match monomial",
                lineno + 1
            )));
        }
        let (num, den) = parts[2].split_once('/').unwrap_or((parts[2], "1"));
        let num: i64 =
            num.parse().map_err(|_| SeriesError::Parse(format!("line {}: bad numerator", lineno + 1)))?;
        let den: i64 =
            den.parse().map_err(|_| SeriesError::Parse(format!("line {}: bad denominator", lineno + 1)))?;
        s.add_term(mono, q(num, den));
    }
    AssociatorSpec::new(s, AssociatorSource::UserSupplied)
}

/// The enveloping algebra of the Kohno–Drinfeld Lie algebra on `n`
/// strands, truncated: the free algebra on the `t_ij` (i < j) together
/// with per-degree reduced spans of the relation ideal.
pub struct TnAlgebra {
    pub n: usize,
    pub trunc: usize,
    pub pairs: Vec<(usize, usize)>,
    monomials: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
    spans: Vec<RowSpace>,
}

impl TnAlgebra {
    pub fn new(n: usize, trunc: usize) -> TnAlgebra {
        assert!(n >= 2);
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                pairs.push((i, j));
            }
        }
        let g = pairs.len();
        let mut monomials: Vec<Vec<Vec<usize>>> = Vec::with_capacity(trunc + 1);
        monomials.push(vec![vec![]]);
        for d in 1..=trunc {
            let mut level = Vec::new();
            for m in &monomials[d - 1] {
                for gi in 0..g {
                    let mut mm = m.clone();
                    mm.push(gi);
                    level.push(mm);
                }
            }
            monomials.push(level);
        }
        let index: Vec<BTreeMap<Vec<usize>, usize>> = monomials
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
            .collect();
        // Degree-2 relation polynomials.
        let pair_idx: BTreeMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let t = |i: usize, j: usize| {
            let key = if i < j { (i, j) } else { (j, i) };
            NCSeries::gen(g, trunc, pair_idx[&key])
        };
        let mut rels: Vec<NCSeries> = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in 1..=n {
                    if i != k && j != k {
                        rels.push(t(i, j).commutator(&t(i, k).add(&t(j, k))));
                    }
                }
            }
        }
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                if i != k && i != l && j != k && j != l && (i, j) < (k, l) {
                    rels.push(t(i, j).commutator(&t(k, l)));
                }
            }
        }
        // Per-degree spans: monomial * relation * monomial.
        let mut spans: Vec<RowSpace> = (0..=trunc).map(|_| RowSpace::new()).collect();
        for d in 2..=trunc {
            for outer in &monomials[d - 2] {
                for split in 0..=outer.len() {
                    let (u, v) = outer.split_at(split);
                    for r in &rels {
                        let mut vec = SparseVec::new();
                        for (m, c) in r.terms() {
                            let mut mono = u.to_vec();
                            mono.extend_from_slice(m);
                            mono.extend_from_slice(v);
                            let col = index[d][&mono];
                            let e = vec.entry(col).or_insert_with(Q::zero);
                            *e += c.clone();
                        }
                        vec.retain(|_, c| !c.is_zero());
                        spans[d].insert(vec);
                    }
                }
            }
        }
        TnAlgebra { n, trunc, pairs, monomials, index, spans }
    }

    pub fn gen(&self, i: usize, j: usize) -> NCSeries {
        let key = if i < j { (i, j) } else { (j, i) };
        let gi = self.pairs.iter().position(|&p| p == key).expect("valid pair");
        NCSeries::gen(self.pairs.len(), self.trunc, gi)
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.monomials[degree].len() - self.spans[degree].rank()
    }

    /// Zero test in the quotient.
    pub fn is_zero(&self, s: &NCSeries) -> bool {
        assert_eq!(s.n_gens(), self.pairs.len());
        for d in 0..=self.trunc {
            let mut vec = SparseVec::new();
            for (m, c) in s.terms() {
                if m.len() == d {
                    let e = vec.entry(self.index[d][m]).or_insert_with(Q::zero);
                    *e += c.clone();
                }
            }
            vec.retain(|_, c| !c.is_zero());
            if !self.spans[d].contains(&vec) {
                return false;
            }
        }
        true
    }

    pub fn eq(&self, a: &NCSeries, b: &NCSeries) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// Projection onto the per-degree complement of the relation span:
    /// reduces each degree slice to its canonical coset representative.
    /// Idempotent, and an algebra map modulo the ideal.
    pub fn project(&self, s: &NCSeries) -> NCSeries {
        let mut out = NCSeries::zero(s.n_gens(), s.trunc());
        for d in 0..=self.trunc.min(s.trunc()) {
            let mut vec = SparseVec::new();
            for (m, c) in s.terms() {
                if m.len() == d {
                    let e = vec.entry(self.index[d][m]).or_insert_with(Q::zero);
                    *e += c.clone();
                }
            }
            vec.retain(|_, c| !c.is_zero());
            self.spans[d].reduce(&mut vec);
            for (col, c) in vec {
                out.add_term(self.monomials[d][col].clone(), c);
            }
        }
        out
    }
}

/// Report of the pentagon/hexagon checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatorReport {
    pub pentagon: bool,
    pub hexagon1: bool,
    pub hexagon2: bool,
}

impl AssociatorReport {
    pub fn pass(&self) -> bool {
        self.pentagon && self.hexagon1 && self.hexagon2
    }
}

/// Evaluates the pentagon in `U(t_4)` and both hexagons in `U(t_3)` at
/// the given truncation.
pub fn check_associator(phi: &AssociatorSpec, trunc: usize) -> AssociatorReport {
    let phi = &phi.series;

    // Pentagon in U(t_4).
    let t4 = TnAlgebra::new(4, trunc);
    let tt = |i, j| t4.gen(i, j);
    let sub4 = |a: &NCSeries, b: &NCSeries| {
        subst(phi, &NCSeries::one(a.n_gens(), trunc), &[a.clone(), b.clone()]).unwrap()
    };
    let lhs = sub4(&tt(1, 2), &tt(2, 3).add(&tt(2, 4))).mul(&sub4(&tt(1, 3).add(&tt(2, 3)), &tt(3, 4)));
    let rhs = sub4(&tt(2, 3), &tt(3, 4))
        .mul(&sub4(&tt(1, 2).add(&tt(1, 3)), &tt(2, 4).add(&tt(3, 4))))
        .mul(&sub4(&tt(1, 2), &tt(2, 3)));
    let pentagon = t4.eq(&lhs, &rhs);

    // Hexagons in U(t_3).
    let t3 = TnAlgebra::new(3, trunc);
    let s = |i, j| t3.gen(i, j);
    let half = q(1, 2);
    let sub3 = |a: &NCSeries, b: &NCSeries| {
        subst(phi, &NCSeries::one(a.n_gens(), trunc), &[a.clone(), b.clone()]).unwrap()
    };

    let lhs1 = s(1, 3).add(&s(2, 3)).scale(&half).exp();
    let rhs1 = sub3(&s(1, 3), &s(1, 2))
        .mul(&s(1, 3).scale(&half).exp())
        .mul(&sub3(&s(1, 3), &s(2, 3)).inverse().unwrap())
        .mul(&s(2, 3).scale(&half).exp())
        .mul(&sub3(&s(1, 2), &s(2, 3)));
    let hexagon1 = t3.eq(&lhs1, &rhs1);

    let lhs2 = s(1, 2).add(&s(1, 3)).scale(&half).exp();
    let rhs2 = sub3(&s(2, 3), &s(1, 3))
        .inverse()
        .unwrap()
        .mul(&s(1, 3).scale(&half).exp())
        .mul(&sub3(&s(1, 2), &s(1, 3)))
        .mul(&s(1, 2).scale(&half).exp())
        .mul(&sub3(&s(1, 2), &s(2, 3)).inverse().unwrap());
    let hexagon2 = t3.eq(&lhs2, &rhs2);

    AssociatorReport { pentagon, hexagon1, hexagon2 }
}

/// The chord `c_ij: 0 -> n` joining strands `i` and `j`.
pub fn chord_ij(n: usize, i: usize, j: usize, trunc: usize) -> MorAB {
    assert!(i < j && j <= n);
    let strands = (1..=n)
        .map(|s| {
            if s == i {
                vec![Sym::end(1, crate::word::Half::L)]
            } else if s == j {
                vec![Sym::end(1, crate::word::Half::R)]
            } else {
                Vec::new()
            }
        })
        .collect();
    MorAB::from_word(trunc, n, TensorWord::new(0, strands).unwrap())
}

/// The cap-closing isomorphism on elements written in the `t_ij` chord
/// basis: monomials map to convolution products of the chords.
pub fn iota(u: &NCSeries, n: usize, trunc: usize) -> MorAB {
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                v.push((i, j));
            }
        }
        v
    };
    assert_eq!(u.n_gens(), pairs.len(), "series letters must be the t_ij of {n} strands");
    let args: Vec<MorAB> = pairs.iter().map(|&(i, j)| chord_ij(n, i, j, trunc)).collect();
    subst(u, &conv_unit(n, trunc), &args).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_arithmetic() {
        let x = NCSeries::gen(2, 3, 0);
        let y = NCSeries::gen(2, 3, 1);
        let xy = x.mul(&y);
        assert_eq!(xy.coeff(&[0, 1]), qi(1));
        let com = x.commutator(&y);
        assert_eq!(com.coeff(&[0, 1]), qi(1));
        assert_eq!(com.coeff(&[1, 0]), qi(-1));
        let e = x.exp();
        assert_eq!(e.coeff(&[]), qi(1));
        assert_eq!(e.coeff(&[0, 0, 0]), q(1, 6));
        let inv = e.inverse().unwrap();
        assert_eq!(e.mul(&inv), NCSeries::one(2, 3));
    }

    #[test]
    fn default_associator_coefficients() {
        let a0 = default_associator(0).unwrap();
        assert_eq!(a0.series, NCSeries::one(2, 0));
        let a1 = default_associator(1).unwrap();
        assert_eq!(a1.series, NCSeries::one(2, 1));
        let a2 = default_associator(2).unwrap();
        assert_eq!(a2.series.coeff(&[0, 1]), q(1, 24));
        assert_eq!(a2.series.coeff(&[1, 0]), q(-1, 24));
        assert!(default_associator(3).is_err());
    }

    #[test]
    fn group_like_checks() {
        assert!(default_associator(2).unwrap().series.is_group_like());
        let mut s = NCSeries::one(2, 2);
        s.add_term(vec![0, 1], qi(1));
        assert!(!s.is_group_like());
        let x = NCSeries::gen(2, 2, 0);
        assert!(x.exp().is_group_like());
    }

    #[test]
    fn utn_dimensions() {
        let t2 = TnAlgebra::new(2, 3);
        assert_eq!(t2.dim(0), 1);
        assert_eq!(t2.dim(1), 1);
        assert_eq!(t2.dim(2), 1);
        assert_eq!(t2.dim(3), 1);
        let t3 = TnAlgebra::new(3, 2);
        assert_eq!(t3.dim(1), 3);
        // Independent brute-force oracle for dim U(t_3)_2: all 9 products
        // of the three generators modulo the literal degree-2 relation
        // list, reduced by dense elimination.
        let oracle_dim = {
            // columns: products gg' over gens a=t12, b=t13, c=t23.
            let idx = |i: usize, j: usize| 3 * i + j;
            let mut rows: Vec<Vec<Q>> = Vec::new();
            let mut rel = |p1: (usize, usize), p2: (usize, usize), m1: (usize, usize), m2: (usize, usize)| {
                let mut row = vec![Q::zero(); 9];
                row[idx(p1.0, p1.1)] += qi(1);
                row[idx(p2.0, p2.1)] += qi(1);
                row[idx(m1.0, m1.1)] -= qi(1);
                row[idx(m2.0, m2.1)] -= qi(1);
                rows.push(row);
            };
            // [a, b+c] = ab + ac - ba - ca = 0
            rel((0, 1), (0, 2), (1, 0), (2, 0));
            // [b, a+c] = ba + bc - ab - cb = 0
            rel((1, 0), (1, 2), (0, 1), (2, 1));
            // [c, a+b] = ca + cb - ac - bc = 0
            rel((2, 0), (2, 1), (0, 2), (1, 2));
            let mut rank = 0;
            for col in 0..9 {
                let piv = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
                if let Some(p) = piv {
                    rows.swap(rank, p);
                    let head = rows[rank][col].clone();
                    for r in 0..rows.len() {
                        if r != rank && !rows[r][col].is_zero() {
                            let f = rows[r][col].clone() / head.clone();
                            for c in 0..9 {
                                let s = rows[rank][c].clone();
                                rows[r][c] -= f.clone() * s;
                            }
                        }
                    }
                    rank += 1;
                }
            }
            9 - rank
        };
        assert_eq!(t3.dim(2), oracle_dim);
        assert_eq!(oracle_dim, 7);
    }

    #[test]
    fn utn_projection_is_algebra_map() {
        let t3 = TnAlgebra::new(3, 2);
        let a = t3.gen(1, 2);
        let b = t3.gen(1, 3).add(&t3.gen(2, 3).scale(&q(1, 2)));
        let pa = t3.project(&a);
        let pb = t3.project(&b);
        assert!(t3.eq(&t3.project(&a.mul(&b)), &t3.project(&pa.mul(&pb))));
        assert_eq!(t3.project(&pa.mul(&pb)), t3.project(&t3.project(&pa.mul(&pb))));
    }

    #[test]
    fn default_associator_passes_checks() {
        let phi = default_associator(2).unwrap();
        let report = check_associator(&phi, 2);
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn trivial_series_fails_hexagons() {
        let one = AssociatorSpec::new(NCSeries::one(2, 2), AssociatorSource::UserSupplied).unwrap();
        let report = check_associator(&one, 2);
        assert!(report.pentagon);
        assert!(!report.hexagon1 || !report.hexagon2, "{report:?}");
    }

    #[test]
    fn degree3_perturbation_invisible_at_2() {
        let base = default_associator(2).unwrap().series;
        let mut s3 = NCSeries::zero(2, 3);
        for (m, c) in base.terms() {
            s3.add_term(m.clone(), c.clone());
        }
        s3.add_term(vec![0, 1, 0], q(5, 7));
        let spec = AssociatorSpec { series: s3, source: AssociatorSource::UserSupplied };
        let report = check_associator(&spec, 2);
        assert!(report.pass());
    }

    #[test]
    fn subst_examples() {
        let phi = default_associator(2).unwrap().series;
        let one = NCSeries::one(2, 2);
        let t3 = TnAlgebra::new(3, 2);
        let a = t3.gen(1, 2);
        let b = t3.gen(2, 3);
        let u = NCSeries::one(a.n_gens(), 2);
        assert_eq!(subst(&one, &u, &[a.clone(), b.clone()]).unwrap(), u);
        let x = NCSeries::gen(2, 2, 0);
        assert_eq!(subst(&x, &u, &[a.clone(), b.clone()]).unwrap(), a);
        assert!(subst(&phi, &u, &[a.clone()]).is_err());
    }

    #[test]
    fn iota_maps_generators_to_chords() {
        let one = NCSeries::one(3, 2);
        assert_eq!(iota(&one, 3, 2), conv_unit(3, 2));
        let t12 = NCSeries::gen(3, 2, 0);
        assert_eq!(iota(&t12, 3, 2), chord_ij(3, 1, 2, 2));
        let t23 = NCSeries::gen(3, 2, 2);
        let prod = iota(&t12.mul(&t23), 3, 2);
        let conv = convolve(&iota(&t12, 3, 2), &iota(&t23, 3, 2)).unwrap();
        assert_eq!(prod, conv);
    }
}
