//! Generator expressions for bottom tangles and the values of the
//! extended integral on them.

use crate::fgroup::{FreeWord, GroupHom};
use crate::morab::{
    compose, delta_iter, generator, identity, lconv, rconv, tensor, tensor3, Gen, MorAB, MorError,
};
use crate::quasihopf::{a_from_phi, gamma1, gamma2_plain, theta_chain, HphiError, HphiStructure};
use crate::rat::{q, qi};
use crate::word::{Sym, TensorWord};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("type error: {0}")]
    Type(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("morphism error: {0}")]
    Mor(#[from] MorError),
    #[error("structure error: {0}")]
    Hphi(#[from] HphiError),
}

/// Parenthesized words in one letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MagWord {
    Empty,
    Dot,
    Pair(Box<MagWord>, Box<MagWord>),
}

impl MagWord {
    pub fn len(&self) -> usize {
        match self {
            MagWord::Empty => 0,
            MagWord::Dot => 1,
            MagWord::Pair(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn graft(a: &MagWord, b: &MagWord) -> MagWord {
        if a.is_empty() {
            return b.clone();
        }
        if b.is_empty() {
            return a.clone();
        }
        MagWord::Pair(Box::new(a.clone()), Box::new(b.clone()))
    }

    pub fn pair(a: MagWord, b: MagWord) -> MagWord {
        MagWord::graft(&a, &b)
    }

    /// Parses `.`, `0`, and `( .. )` groups (left-folded inside parens).
    pub fn parse(text: &str) -> Result<MagWord, String> {
        fn inner(chars: &mut std::iter::Peekable<std::str::Chars>) -> Result<MagWord, String> {
            match chars.peek() {
                Some('.') => {
                    chars.next();
                    Ok(MagWord::Dot)
                }
                Some('(') => {
                    chars.next();
                    let mut items = Vec::new();
                    while chars.peek() != Some(&')') {
                        if chars.peek().is_none() {
                            return Err("unbalanced brackets in word".into());
                        }
                        items.push(inner(chars)?);
                    }
                    chars.next();
                    if items.is_empty() {
                        return Err("empty group".into());
                    }
                    let mut acc = items.remove(0);
                    for it in items {
                        acc = MagWord::Pair(Box::new(acc), Box::new(it));
                    }
                    Ok(acc)
                }
                other => Err(format!("unexpected {other:?} in word")),
            }
        }
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "0" {
            return Ok(MagWord::Empty);
        }
        let mut chars = t.chars().peekable();
        let mut items = Vec::new();
        while chars.peek().is_some() {
            items.push(inner(&mut chars)?);
        }
        let mut acc = items.remove(0);
        for it in items {
            acc = MagWord::Pair(Box::new(acc), Box::new(it));
        }
        Ok(acc)
    }
}

impl std::fmt::Display for MagWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MagWord::Empty => write!(f, "0"),
            MagWord::Dot => write!(f, "."),
            MagWord::Pair(a, b) => write!(f, "({a}{b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenName {
    Psi,
    PsiInv,
    Mu,
    Eta,
    Eps,
    Delta,
    S,
    SInv,
    RPlus,
    RMinus,
}

impl GenName {
    pub fn signature(&self) -> (MagWord, MagWord) {
        use MagWord::{Dot, Empty};
        let dd = MagWord::pair(Dot, Dot);
        match self {
            GenName::Psi | GenName::PsiInv => (dd.clone(), dd),
            GenName::Mu => (dd, Dot),
            GenName::Eta | GenName::RPlus | GenName::RMinus => (Empty, Dot),
            GenName::Eps => (Dot, Empty),
            GenName::Delta => (Dot, dd),
            GenName::S | GenName::SInv => (Dot, Dot),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            GenName::Psi => "psi",
            GenName::PsiInv => "psi-",
            GenName::Mu => "mu",
            GenName::Eta => "eta",
            GenName::Eps => "eps",
            GenName::Delta => "Delta",
            GenName::S => "S",
            GenName::SInv => "S-",
            GenName::RPlus => "r+",
            GenName::RMinus => "r-",
        }
    }
}

/// Expressions in the generators, typed by parenthesized boundary
/// words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenExpr {
    Id(MagWord),
    Gen(GenName),
    Assoc { u: MagWord, v: MagWord, w: MagWord, inverse: bool },
    Compose(Box<GenExpr>, Box<GenExpr>),
    Tensor(Box<GenExpr>, Box<GenExpr>),
}

impl GenExpr {
    /// Source and target words; errors on a composition mismatch.
    pub fn boundaries(&self) -> Result<(MagWord, MagWord), ExprError> {
        match self {
            GenExpr::Id(w) => Ok((w.clone(), w.clone())),
            GenExpr::Gen(g) => Ok(g.signature()),
            GenExpr::Assoc { u, v, w, inverse } => {
                let l = MagWord::graft(&MagWord::graft(u, v), w);
                let r = MagWord::graft(u, &MagWord::graft(v, w));
                Ok(if *inverse { (r, l) } else { (l, r) })
            }
            GenExpr::Compose(a, b) => {
                let (bs, bt) = b.boundaries()?;
                let (as_, at) = a.boundaries()?;
                if bt != as_ {
                    return Err(ExprError::Type(format!(
                        "compose: inner words differ ({bt} vs {as_})"
                    )));
                }
                Ok((bs, at))
            }
            GenExpr::Tensor(a, b) => {
                let (as_, at) = a.boundaries()?;
                let (bs, bt) = b.boundaries()?;
                Ok((MagWord::graft(&as_, &bs), MagWord::graft(&at, &bt)))
            }
        }
    }

    pub fn compose(a: GenExpr, b: GenExpr) -> GenExpr {
        GenExpr::Compose(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: GenExpr, b: GenExpr) -> GenExpr {
        GenExpr::Tensor(Box::new(a), Box::new(b))
    }
}

/// The hairpin closure behind the antipode value: each term of a chord
/// element on one strand is looped through a reversed handle passage,
/// with its ends distributed over the two passes.
fn s_closure(u: &MorAB) -> MorAB {
    assert_eq!((u.m(), u.n()), (0, 1));
    let trunc = u.trunc();
    let mut out = MorAB::zero(1, 1, trunc);
    let mut lin = crate::lin::DiagLin::zero(trunc);
    for (w, c) in u.lin().terms() {
        let syms = &w.strands()[0];
        let nn = syms.len();
        for mask in 0u64..(1 << nn) {
            let mut first: Vec<Sym> = Vec::new();
            let mut second: Vec<Sym> = Vec::new();
            for (i, &sym) in syms.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    first.push(sym);
                } else {
                    second.push(sym);
                }
            }
            second.reverse();
            let sign = if second.len() % 2 == 1 { qi(-1) } else { qi(1) };
            let mut strand = first;
            strand.push(Sym::bead(1, -1));
            strand.extend(second);
            lin.add_term(TensorWord::raw(1, vec![strand]).unwrap(), c * sign);
        }
    }
    out = out.add(&MorAB::from_lin(1, 1, lin));
    out
}

/// Values of the integral on the generators, assembled from the
/// associator structure.
pub fn z_gen(name: GenName, h: &HphiStructure) -> Result<MorAB, ExprError> {
    let t = h.trunc;
    Ok(match name {
        GenName::Eta => generator(Gen::Eta, t),
        GenName::Eps => generator(Gen::Eps, t),
        GenName::RPlus => crate::morab::conv_power(&h.r_elt, -1)?,
        GenName::RMinus => h.r_elt.clone(),
        GenName::Psi | GenName::PsiInv => {
            // The braiding: swap dressed by the adjoint action of the
            // R-matrix, (x ⊗ y) -> P((R¹ ▷ x) ⊗ (R² ▷ y)). The adjoint
            // form is what makes the braiding natural.
            let r = if name == GenName::Psi {
                h.r_mat.clone()
            } else {
                crate::morab::conv_inverse(&h.r_mat)?
            };
            let ad = generator(Gen::Ad, t);
            let id2 = identity(2, t);
            let start = tensor(&r, &id2)?;
            let routed = compose(&crate::morab::permutation(&[0, 2, 1, 3], t), &start)?;
            let dress = compose(&tensor(&ad, &ad)?, &routed)?;
            let p = crate::morab::symmetry(1, 1, t);
            if name == GenName::Psi {
                compose(&p, &dress)?
            } else {
                compose(&dress, &p)?
            }
        }
        GenName::S | GenName::SInv => {
            let mu_c = compose(&generator(Gen::Mu, t), &generator(Gen::Casimir, t))?;
            let sign = if name == GenName::S { q(1, 4) } else { q(-1, 4) };
            let half = crate::morab::exp_conv(&mu_c.scale(&sign))?;
            s_closure(&half)
        }
        GenName::Mu => {
            let g1 = gamma1(h)?;
            let g2 = gamma2_plain(h)?;
            let core = compose(&generator(Gen::Mu, t), &compose(&g2, &g1)?)?;
            rconv(&core, &h.nu)?
        }
        GenName::Delta => {
            let a = a_from_phi(h)?;
            let th = theta_chain(h)?;
            let start = lconv(&a, &generator(Gen::Delta, t))?;
            let x = compose(&th.t2, &start)?;
            let x = compose(&th.t3, &x)?;
            let x = compose(&th.t4, &x)?;
            compose(&th.t5, &x)?
        }
    })
}

/// The regrouping value: the associator fanned out over the three
/// blocks and multiplied onto the identity.
pub fn z_assoc(u: &MagWord, v: &MagWord, w: &MagWord, inverse: bool, h: &HphiStructure) -> Result<MorAB, ExprError> {
    let t = h.trunc;
    let n = u.len() + v.len() + w.len();
    let phi = if inverse { &h.phi_inv } else { &h.phi };
    let fan = tensor3(&delta_iter(u.len(), t), &delta_iter(v.len(), t), &delta_iter(w.len(), t))?;
    let spread = compose(&fan, phi)?;
    Ok(lconv(&spread, &identity(n, t))?)
}

/// Structural evaluation of an expression.
pub fn z_eval(e: &GenExpr, h: &HphiStructure) -> Result<MorAB, ExprError> {
    e.boundaries()?;
    z_eval_rec(e, h)
}

fn z_eval_rec(e: &GenExpr, h: &HphiStructure) -> Result<MorAB, ExprError> {
    Ok(match e {
        GenExpr::Id(w) => identity(w.len(), h.trunc),
        GenExpr::Gen(g) => z_gen(*g, h)?,
        GenExpr::Assoc { u, v, w, inverse } => z_assoc(u, v, w, *inverse, h)?,
        GenExpr::Compose(a, b) => compose(&z_eval_rec(a, h)?, &z_eval_rec(b, h)?)?,
        GenExpr::Tensor(a, b) => tensor(&z_eval_rec(a, h)?, &z_eval_rec(b, h)?)?,
    })
}

/// Group-likeness: the comultiplication equals the square, compared on
/// the doubled skeleton, and the counit is 1.
pub fn check_grouplike(v: &MorAB) -> bool {
    if crate::morab::counit(v) != qi(1) {
        return false;
    }
    let mut lhs = MorAB::zero(2 * v.m(), 2 * v.n(), v.trunc());
    for (c, l, r) in crate::morab::comultiply(v) {
        let piece = tensor(
            &MorAB::from_word(v.trunc(), v.n(), l),
            &MorAB::from_word(v.trunc(), v.n(), r),
        )
        .expect("same truncation");
        lhs = lhs.add(&piece.scale(&c));
    }
    let rhs = tensor(v, v).expect("same truncation");
    lhs.is_eq_mod(&rhs)
}

/// The underlying homomorphisms of the generators, composed over the
/// expression.
pub fn expected_homotopy(e: &GenExpr) -> Result<GroupHom, ExprError> {
    let w = |rank: usize, letters: &[(usize, i8)]| FreeWord::from_letters(rank, letters.to_vec()).unwrap();
    Ok(match e {
        GenExpr::Id(word) => GroupHom::identity(word.len()),
        GenExpr::Assoc { u, v, w, .. } => GroupHom::identity(u.len() + v.len() + w.len()),
        GenExpr::Gen(g) => match g {
            // Crossings are invisible to the underlying homotopy: the
            // braid swaps the handles plainly.
            GenName::Psi | GenName::PsiInv => {
                GroupHom::new(2, 2, vec![w(2, &[(2, 1)]), w(2, &[(1, 1)])]).unwrap()
            }
            GenName::Mu => GroupHom::new(1, 2, vec![w(2, &[(1, 1), (2, 1)])]).unwrap(),
            GenName::Delta => GroupHom::new(2, 1, vec![w(1, &[(1, 1)]), w(1, &[(1, 1)])]).unwrap(),
            GenName::S | GenName::SInv => GroupHom::new(1, 1, vec![w(1, &[(1, -1)])]).unwrap(),
            GenName::Eta | GenName::RPlus | GenName::RMinus => {
                GroupHom::new(1, 0, vec![FreeWord::identity(0)]).unwrap()
            }
            GenName::Eps => GroupHom::new(0, 1, vec![]).unwrap(),
        },
        GenExpr::Compose(a, b) => {
            // h(a ∘ b) = h(b) ∘ h(a).
            expected_homotopy(b)?.compose(&expected_homotopy(a)?).map_err(|e| {
                ExprError::Type(format!("homotopy composition: {e}"))
            })?
        }
        GenExpr::Tensor(a, b) => {
            let ha = expected_homotopy(a)?;
            let hb = expected_homotopy(b)?;
            let m = ha.target_rank();
            let mm = m + hb.target_rank();
            let mut images: Vec<FreeWord> = ha
                .images()
                .iter()
                .map(|im| im.with_rank(mm).unwrap())
                .collect();
            for im in hb.images() {
                let letters = im.letters().iter().map(|&(i, s)| (i + m, s)).collect();
                images.push(FreeWord::from_letters(mm, letters).unwrap());
            }
            GroupHom::new(ha.source_rank() + hb.source_rank(), mm, images).unwrap()
        }
    })
}

/// Degree-0 of the value is a single diagram whose class matches the
/// composed generator homomorphisms.
pub fn homotopy_check(e: &GenExpr, h: &HphiStructure) -> Result<bool, ExprError> {
    let v = z_eval(e, h)?;
    let d0 = v.degree_part(0);
    if d0.lin().len() != 1 {
        return Ok(false);
    }
    let got = v.homotopy_class().expect("single degree-0 term");
    Ok(got == expected_homotopy(e)?)
}

/// Parses the expression language: `.` composes, `(x)` tensors,
/// generators by name, `id[w]`, `assoc(u;v;w)` / `assoc-(u;v;w)`.
pub fn parse_expr(text: &str) -> Result<GenExpr, ExprError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.parse_compose()?;
    if p.pos != p.tokens.len() {
        return Err(ExprError::Parse { pos: p.pos, msg: "trailing input".into() });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Dot,
    TensorOp,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' {
            // `(x)` is the tensor operator.
            if i + 2 < chars.len() && chars[i + 1] == 'x' && chars[i + 2] == ')' {
                out.push(Tok::TensorOp);
                i += 3;
                continue;
            }
            out.push(Tok::LParen);
            i += 1;
            continue;
        }
        if c == ')' {
            out.push(Tok::RParen);
            i += 1;
            continue;
        }
        if c == '.' {
            out.push(Tok::Dot);
            i += 1;
            continue;
        }
        // Name token: letters plus optional +/- suffix, and bracketed
        // payloads for id[...] and assoc(...).
        let start = i;
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        if i == start {
            return Err(ExprError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
        let mut name: String = chars[start..i].iter().collect();
        if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            name.push(chars[i]);
            i += 1;
        }
        if i < chars.len() && chars[i] == '[' {
            let mut depth = 0;
            let payload_start = i;
            while i < chars.len() {
                if chars[i] == '[' {
                    depth += 1;
                } else if chars[i] == ']' {
                    depth -= 1;
                    if depth == 0 {
                        i += 1;
                        break;
                    }
                }
                i += 1;
            }
            if depth != 0 {
                return Err(ExprError::Parse { pos: payload_start, msg: "unbalanced `[`".into() });
            }
            name.extend(chars[payload_start..i].iter());
        } else if (name.starts_with("assoc")) && i < chars.len() && chars[i] == '(' {
            let mut depth = 0;
            let payload_start = i;
            while i < chars.len() {
                if chars[i] == '(' {
                    depth += 1;
                } else if chars[i] == ')' {
                    depth -= 1;
                    if depth == 0 {
                        i += 1;
                        break;
                    }
                }
                i += 1;
            }
            if depth != 0 {
                return Err(ExprError::Parse { pos: payload_start, msg: "unbalanced `(`".into() });
            }
            name.extend(chars[payload_start..i].iter());
        }
        out.push(Tok::Name(name));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn parse_compose(&mut self) -> Result<GenExpr, ExprError> {
        let mut items = vec![self.parse_tensor()?];
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            items.push(self.parse_tensor()?);
        }
        // `a . b . c` = a ∘ b ∘ c (left to right, applied right first).
        let mut acc = items.remove(0);
        for it in items {
            acc = GenExpr::compose(acc, it);
        }
        Ok(acc)
    }

    fn parse_tensor(&mut self) -> Result<GenExpr, ExprError> {
        let mut acc = self.parse_atom()?;
        while self.peek() == Some(&Tok::TensorOp) {
            self.pos += 1;
            let rhs = self.parse_atom()?;
            acc = GenExpr::tensor(acc, rhs);
        }
        Ok(acc)
    }

    fn parse_atom(&mut self) -> Result<GenExpr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.parse_compose()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ExprError::Parse { pos: self.pos, msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                atom_from_name(&name).map_err(|msg| ExprError::Parse { pos: self.pos, msg })
            }
            other => Err(ExprError::Parse {
                pos: self.pos,
                msg: format!("expected expression, got {other:?}"),
            }),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }
}

fn atom_from_name(name: &str) -> Result<GenExpr, String> {
    let gen = match name {
        "psi" => Some(GenName::Psi),
        "psi-" => Some(GenName::PsiInv),
        "mu" => Some(GenName::Mu),
        "eta" => Some(GenName::Eta),
        "eps" => Some(GenName::Eps),
        "Delta" => Some(GenName::Delta),
        "S" => Some(GenName::S),
        "S-" => Some(GenName::SInv),
        "r+" => Some(GenName::RPlus),
        "r-" => Some(GenName::RMinus),
        _ => None,
    };
    if let Some(g) = gen {
        return Ok(GenExpr::Gen(g));
    }
    if let Some(body) = name.strip_prefix("id[").and_then(|b| b.strip_suffix(']')) {
        let w = MagWord::parse(body)?;
        return Ok(GenExpr::Id(w));
    }
    for (prefix, inverse) in [("assoc-(", true), ("assoc(", false)] {
        if let Some(body) = name.strip_prefix(prefix).and_then(|b| b.strip_suffix(')')) {
            let parts: Vec<&str> = body.split(';').collect();
            if parts.len() != 3 {
                return Err(format!("assoc needs three `;`-separated words, got `{name}`"));
            }
            let u = MagWord::parse(parts[0])?;
            let v = MagWord::parse(parts[1])?;
            let w = MagWord::parse(parts[2])?;
            return Ok(GenExpr::Assoc { u, v, w, inverse });
        }
    }
    Err(format!("unknown name `{name}`"))
}

pub fn render_expr(e: &GenExpr) -> String {
    match e {
        GenExpr::Id(w) => format!("id[{w}]"),
        GenExpr::Gen(g) => g.text().into(),
        GenExpr::Assoc { u, v, w, inverse } => {
            format!("assoc{}({u};{v};{w})", if *inverse { "-" } else { "" })
        }
        GenExpr::Compose(a, b) => format!("({} . {})", render_expr(a), render_expr(b)),
        GenExpr::Tensor(a, b) => format!("({} (x) {})", render_expr(a), render_expr(b)),
    }
}

/// A random type-correct expression built by extending a seed atom with
/// tensor factors and compatible compositions.
pub fn random_expr(rng: &mut impl Rng, steps: usize) -> GenExpr {
    let seeds = [
        GenExpr::Gen(GenName::Eta),
        GenExpr::Gen(GenName::Delta),
        GenExpr::Gen(GenName::Mu),
        GenExpr::Gen(GenName::Psi),
        GenExpr::Gen(GenName::S),
        GenExpr::Gen(GenName::RPlus),
        GenExpr::Id(MagWord::Dot),
    ];
    let mut e = seeds[rng.gen_range(0..seeds.len())].clone();
    for _ in 0..steps {
        let (_, tgt) = e.boundaries().expect("stays well typed");
        let choice = rng.gen_range(0..4);
        match choice {
            0 => {
                // Tensor with a small atom on a random side.
                let atom = seeds[rng.gen_range(0..seeds.len())].clone();
                e = if rng.gen_bool(0.5) {
                    GenExpr::tensor(e, atom)
                } else {
                    GenExpr::tensor(atom, e)
                };
            }
            1 | 2 => {
                // Post-compose with something accepting `tgt`.
                let candidates = atoms_with_source(&tgt);
                if candidates.is_empty() {
                    continue;
                }
                let f = candidates[rng.gen_range(0..candidates.len())].clone();
                e = GenExpr::compose(f, e);
            }
            _ => {
                // Pre-compose with something producing the source.
                let (src, _) = e.boundaries().expect("typed");
                let candidates = atoms_with_target(&src);
                if candidates.is_empty() {
                    continue;
                }
                let f = candidates[rng.gen_range(0..candidates.len())].clone();
                e = GenExpr::compose(e, f);
            }
        }
    }
    e
}

fn atoms_with_source(wanted: &MagWord) -> Vec<GenExpr> {
    let mut out = vec![GenExpr::Id(wanted.clone())];
    for g in [
        GenName::Psi,
        GenName::PsiInv,
        GenName::Mu,
        GenName::Eps,
        GenName::Delta,
        GenName::S,
        GenName::SInv,
    ] {
        if &g.signature().0 == wanted {
            out.push(GenExpr::Gen(g));
        }
    }
    if let MagWord::Pair(ab, w) = wanted {
        if let MagWord::Pair(u, v) = &**ab {
            out.push(GenExpr::Assoc {
                u: (**u).clone(),
                v: (**v).clone(),
                w: (**w).clone(),
                inverse: false,
            });
        }
    }
    if let MagWord::Pair(u, vw) = wanted {
        if let MagWord::Pair(v, w) = &**vw {
            out.push(GenExpr::Assoc {
                u: (**u).clone(),
                v: (**v).clone(),
                w: (**w).clone(),
                inverse: true,
            });
        }
    }
    out
}

fn atoms_with_target(wanted: &MagWord) -> Vec<GenExpr> {
    let mut out = vec![GenExpr::Id(wanted.clone())];
    for g in [
        GenName::Psi,
        GenName::PsiInv,
        GenName::Mu,
        GenName::Eta,
        GenName::Delta,
        GenName::S,
        GenName::SInv,
        GenName::RPlus,
        GenName::RMinus,
    ] {
        if &g.signature().1 == wanted {
            out.push(GenExpr::Gen(g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morab::{conv_unit, convolve};
    use crate::ncseries::default_associator;
    use crate::quasihopf::{build_hphi, transmute_delta, transmute_mu};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hphi(n: usize) -> HphiStructure {
        build_hphi(&default_associator(n.min(2)).unwrap(), n, None).unwrap()
    }

    #[test]
    fn parser_round_trips() {
        let e = parse_expr("mu . (id[.] (x) S) . Delta").unwrap();
        let (src, tgt) = e.boundaries().unwrap();
        assert_eq!(src, MagWord::Dot);
        assert_eq!(tgt, MagWord::Dot);
        let again = parse_expr(&render_expr(&e)).unwrap();
        assert_eq!(e, again);

        let a = parse_expr("assoc(.;.;.)").unwrap();
        let (src, tgt) = a.boundaries().unwrap();
        assert_eq!(format!("{src}"), "((..).)");
        assert_eq!(format!("{tgt}"), "(.(..))");

        assert!(parse_expr("mu . mu").unwrap().boundaries().is_err());
        assert!(parse_expr("frobnicate").is_err());
    }

    #[test]
    fn z_eval_identity_and_units() {
        let h = hphi(2);
        let e = parse_expr("id[(..)]").unwrap();
        assert_eq!(z_eval(&e, &h).unwrap(), identity(2, 2));
        assert_eq!(z_eval(&parse_expr("eta").unwrap(), &h).unwrap(), generator(Gen::Eta, 2));
        assert_eq!(z_eval(&parse_expr("eps").unwrap(), &h).unwrap(), generator(Gen::Eps, 2));
    }

    #[test]
    fn antipode_axiom_image() {
        // mu ∘ (id ⊗ S) ∘ Δ = eta ∘ eps in the source category, so the
        // values agree.
        let h = hphi(2);
        let lhs = z_eval(&parse_expr("mu . (id[.] (x) S) . Delta").unwrap(), &h).unwrap();
        let rhs = z_eval(&parse_expr("eta . eps").unwrap(), &h).unwrap();
        assert!(lhs.is_eq_mod(&rhs), "lhs {:?}\nrhs {:?}", lhs.lin().sorted_terms(), rhs.lin().sorted_terms());
    }

    #[test]
    fn ribbon_inverse_pair() {
        // mu ∘ (r- ⊗ r+) = eta.
        let h = hphi(2);
        let lhs = z_eval(&parse_expr("mu . (r- (x) r+)").unwrap(), &h).unwrap();
        let rhs = generator(Gen::Eta, 2);
        assert!(lhs.is_eq_mod(&rhs));
    }

    #[test]
    fn psi_degree_0_and_inverse() {
        let h = hphi(2);
        let z = z_gen(GenName::Psi, &h).unwrap();
        let h0 = z.homotopy_class().unwrap();
        assert_eq!(h0, expected_homotopy(&GenExpr::Gen(GenName::Psi)).unwrap());
        // Inverse braid composes to the identity.
        let e = parse_expr("psi . psi-").unwrap();
        assert!(homotopy_check(&e, &h).unwrap());
        let z2 = z_eval(&e, &h).unwrap();
        assert!(z2.is_eq_mod(&identity(2, 2)), "psi psi-: {:?}", z2.lin().sorted_terms());
        let e = parse_expr("psi- . psi").unwrap();
        let z3 = z_eval(&e, &h).unwrap();
        assert!(z3.is_eq_mod(&identity(2, 2)));
    }

    #[test]
    fn braiding_naturality_sample() {
        // ψ ∘ (f ⊗ g) = (g ⊗ f) ∘ ψ on generators.
        let h = hphi(2);
        let lhs = z_eval(&parse_expr("psi . (S (x) id[.])").unwrap(), &h).unwrap();
        let rhs = z_eval(&parse_expr("(id[.] (x) S) . psi").unwrap(), &h).unwrap();
        assert!(lhs.is_eq_mod(&rhs));
        let lhs = z_eval(&parse_expr("psi . (id[.] (x) S-)").unwrap(), &h).unwrap();
        let rhs = z_eval(&parse_expr("(S- (x) id[.]) . psi").unwrap(), &h).unwrap();
        assert!(lhs.is_eq_mod(&rhs));
    }

    #[test]
    fn transmutation_matches_values() {
        let h = hphi(2);
        let zmu = z_gen(GenName::Mu, &h).unwrap();
        let tmu = transmute_mu(&h).unwrap();
        assert!(zmu.is_eq_mod(&tmu), "zmu {:?}\ntmu {:?}", zmu.lin().sorted_terms(), tmu.lin().sorted_terms());
        let zd = z_gen(GenName::Delta, &h).unwrap();
        let td = transmute_delta(&h).unwrap();
        assert!(zd.is_eq_mod(&td), "zd {:?}\ntd {:?}", zd.lin().sorted_terms(), td.lin().sorted_terms());
    }

    #[test]
    fn group_like_values() {
        let h = hphi(2);
        assert!(check_grouplike(&identity(2, 2)));
        assert!(check_grouplike(&z_gen(GenName::Psi, &h).unwrap()));
        assert!(check_grouplike(&z_gen(GenName::Mu, &h).unwrap()));
        // η + c is not group-like.
        let c = generator(Gen::Casimir, 2);
        let bad = conv_unit(2, 2).add(&c);
        assert!(!check_grouplike(&bad));
    }

    #[test]
    fn mu_r_identities() {
        // μ(r+ ⊗ r+) = μ ĉ where ĉ = (μ(r-⊗id) ⊗ μ(id⊗r-)) Δ r+.
        let h = hphi(2);
        let lhs = z_eval(&parse_expr("mu . (r+ (x) r+)").unwrap(), &h).unwrap();
        let chat = parse_expr("((mu . (r- (x) id[.])) (x) (mu . (id[.] (x) r-))) . Delta . r+").unwrap();
        let rhs = z_eval(&GenExpr::compose(GenExpr::Gen(GenName::Mu), chat), &h).unwrap();
        assert!(lhs.is_eq_mod(&rhs), "lhs {:?}\nrhs {:?}", lhs.lin().sorted_terms(), rhs.lin().sorted_terms());
    }

    #[test]
    fn random_corpus_group_like_and_graded() {
        let h = hphi(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 8 {
            let e = random_expr(&mut rng, 3);
            let (src, tgt) = e.boundaries().unwrap();
            if src.len() > 2 || tgt.len() > 2 {
                continue;
            }
            let v = z_eval(&e, &h).unwrap();
            assert!(check_grouplike(&v), "not group-like: {}", render_expr(&e));
            assert!(homotopy_check(&e, &h).unwrap(), "homotopy: {}", render_expr(&e));
            checked += 1;
        }
    }
}
