//! Beaded unitrivalent graphs on strand skeletons and their resolution
//! into chord diagrams.
//!
//! A `JacobiGraph` has legs (univalent vertices) interleaved with beads
//! on the strands, trivalent vertices with a cyclic port order, and
//! edges carrying an orientation and a free-group bead word. STU
//! resolution repeatedly rewrites a trivalent vertex adjacent to a leg
//! as a difference of two reattachments, producing a combination of
//! chord diagrams.

use crate::fgroup::FreeWord;
use crate::lin::DiagLin;
use crate::morab::MorAB;
use crate::rat::{qi, Q};
use crate::word::{Half, Sym, TensorWord};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacobiError {
    #[error("dashed component without univalent vertex")]
    NoUnivalentVertex,
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// One endpoint of a dashed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Port {
    /// A leg on a strand, by leg id.
    Leg(usize),
    /// Port `slot` (0..3, in cyclic order) of trivalent vertex `vertex`.
    Vert { vertex: usize, slot: usize },
    /// Unattached; only used transiently by box expansion.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Oriented from `a` to `b`; the bead word is read along the
    /// orientation.
    pub a: Port,
    pub b: Port,
    pub bead: FreeWord,
}

/// Strand items: beads or legs (attachment points), in reading order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GSym {
    Bead { handle: usize, sign: i8 },
    Leg { leg: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiGraph {
    pub m: usize,
    pub strands: Vec<Vec<GSym>>,
    /// Number of trivalent vertices; ports are `Vert { vertex, slot }`
    /// with `vertex < n_vertices` and `slot < 3`.
    pub n_vertices: usize,
    pub edges: Vec<Edge>,
}

impl JacobiGraph {
    /// A chord diagram as a graph (no trivalent vertices).
    pub fn from_word(w: &TensorWord) -> JacobiGraph {
        let mut strands = Vec::new();
        let mut half_pos: BTreeMap<(usize, Half), usize> = BTreeMap::new();
        let mut next_leg = 0usize;
        for s in w.strands() {
            let mut items = Vec::new();
            for sym in s {
                match *sym {
                    Sym::Bead { handle, sign } => items.push(GSym::Bead { handle, sign }),
                    Sym::End { chord, half } => {
                        items.push(GSym::Leg { leg: next_leg });
                        half_pos.insert((chord, half), next_leg);
                        next_leg += 1;
                    }
                }
            }
            strands.push(items);
        }
        let mut edges = Vec::new();
        let k = w.degree();
        for chord in 1..=k {
            edges.push(Edge {
                a: Port::Leg(half_pos[&(chord, Half::L)]),
                b: Port::Leg(half_pos[&(chord, Half::R)]),
                bead: FreeWord::identity(w.m()),
            });
        }
        JacobiGraph { m: w.m(), strands, n_vertices: 0, edges }
    }

    fn port_of_leg(&self, leg: usize) -> Option<(usize, bool)> {
        for (ei, e) in self.edges.iter().enumerate() {
            if e.a == Port::Leg(leg) {
                return Some((ei, true));
            }
            if e.b == Port::Leg(leg) {
                return Some((ei, false));
            }
        }
        None
    }

    fn edge_at(&self, port: Port) -> Option<(usize, bool)> {
        for (ei, e) in self.edges.iter().enumerate() {
            if e.a == port {
                return Some((ei, true));
            }
            if e.b == port {
                return Some((ei, false));
            }
        }
        None
    }

    fn validate(&self) -> Result<(), JacobiError> {
        // Every leg and every vertex port appears on exactly one edge.
        let mut seen: BTreeMap<Port, usize> = BTreeMap::new();
        for e in &self.edges {
            for p in [e.a, e.b] {
                if p != Port::Open {
                    *seen.entry(p).or_insert(0) += 1;
                }
            }
        }
        for s in &self.strands {
            for item in s {
                if let GSym::Leg { leg } = item {
                    if seen.get(&Port::Leg(*leg)) != Some(&1) {
                        return Err(JacobiError::Malformed(format!("leg {leg} not matched once")));
                    }
                }
            }
        }
        for v in 0..self.n_vertices {
            for slot in 0..3 {
                if seen.get(&Port::Vert { vertex: v, slot }) != Some(&1) {
                    return Err(JacobiError::Malformed(format!(
                        "vertex {v} slot {slot} not matched once"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that every dashed component touches a strand.
    fn every_component_has_leg(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for e in &self.edges {
            if let (Port::Vert { vertex: v1, .. }, Port::Vert { vertex: v2, .. }) = (e.a, e.b) {
                let (r1, r2) = (find(&mut parent, v1), find(&mut parent, v2));
                if r1 != r2 {
                    parent[r1] = r2;
                }
            }
        }
        let mut has_leg = vec![false; self.n_vertices.max(1)];
        for e in &self.edges {
            match (e.a, e.b) {
                (Port::Vert { vertex, .. }, Port::Leg(_)) | (Port::Leg(_), Port::Vert { vertex, .. }) => {
                    let r = find(&mut parent, vertex);
                    has_leg[r] = true;
                }
                _ => {}
            }
        }
        (0..self.n_vertices).all(|v| {
            let r = find(&mut parent, v);
            has_leg[r]
        })
    }
}

/// Resolves all trivalent vertices via STU at deterministically chosen
/// legs, returning a chord-diagram combination.
pub fn stu_resolve(g: &JacobiGraph, trunc: usize) -> Result<DiagLin, JacobiError> {
    g.validate()?;
    if !g.every_component_has_leg() {
        return Err(JacobiError::NoUnivalentVertex);
    }
    let mut out = DiagLin::zero(trunc);
    resolve_rec(g.clone(), qi(1), &mut out)?;
    Ok(out)
}

fn resolve_rec(mut g: JacobiGraph, coef: Q, out: &mut DiagLin) -> Result<(), JacobiError> {
    if g.n_vertices == 0 {
        emit_chords(&mut g, coef, out)?;
        return Ok(());
    }
    // Find the first leg (lowest strand, lowest position) adjacent to a
    // trivalent vertex.
    let mut site: Option<(usize, usize, usize, usize, bool)> = None;
    'outer: for (si, s) in g.strands.iter().enumerate() {
        for (pi, item) in s.iter().enumerate() {
            if let GSym::Leg { leg } = item {
                let (ei, at_a) = g
                    .port_of_leg(*leg)
                    .ok_or_else(|| JacobiError::Malformed(format!("leg {leg} unmatched")))?;
                let far = if at_a { g.edges[ei].b } else { g.edges[ei].a };
                if let Port::Vert { vertex, .. } = far {
                    site = Some((si, pi, ei, vertex, at_a));
                    break 'outer;
                }
            }
        }
    }
    let Some((si, pi, ei, vertex, leg_at_a)) = site else {
        return Err(JacobiError::NoUnivalentVertex);
    };

    // Push the connecting edge's bead onto the strand: conjugate the
    // attachment. Reading outward from the strand the edge word is `w`;
    // insert `w` before the leg and `w^{-1}` after it in reading order.
    let outward = if leg_at_a { g.edges[ei].bead.clone() } else { g.edges[ei].bead.inv() };
    if !outward.is_empty() {
        push_bead_at(&mut g, si, pi, &outward);
        g.edges[ei].bead = FreeWord::identity(g.m);
        return resolve_rec(g, coef, out);
    }

    // The vertex's other two ports, in cyclic order after the connecting
    // port.
    let p0 = match if leg_at_a { g.edges[ei].b } else { g.edges[ei].a } {
        Port::Vert { slot, .. } => slot,
        _ => unreachable!(),
    };
    let p1 = (p0 + 1) % 3;
    let p2 = (p0 + 2) % 3;
    let max_leg = max_leg_id(&g);

    for (swap, sgn) in [(false, 1i64), (true, -1i64)] {
        let mut h = g.clone();
        // Replace the leg with two fresh legs at positions pi, pi+1.
        let la = max_leg + 1;
        let lb = max_leg + 2;
        h.strands[si].splice(pi..=pi, [GSym::Leg { leg: la }, GSym::Leg { leg: lb }]);
        // Reattach the vertex's other edges to the new legs: without the
        // swap, the port after the stem goes to the earlier position.
        let (slot_to_a, slot_to_b) = if !swap { (p1, p2) } else { (p2, p1) };
        for (slot, new_leg) in [(slot_to_a, la), (slot_to_b, lb)] {
            let (eidx, at_a) = h
                .edge_at(Port::Vert { vertex, slot })
                .ok_or_else(|| JacobiError::Malformed("dangling vertex port".into()))?;
            if at_a {
                h.edges[eidx].a = Port::Leg(new_leg);
            } else {
                h.edges[eidx].b = Port::Leg(new_leg);
            }
        }
        // Drop the connecting edge; renumber the last vertex into the
        // removed slot.
        h.edges.remove(ei);
        let last = h.n_vertices - 1;
        if vertex != last {
            for e in h.edges.iter_mut() {
                for p in [&mut e.a, &mut e.b] {
                    if let Port::Vert { vertex: v, slot } = *p {
                        if v == last {
                            *p = Port::Vert { vertex, slot };
                        }
                    }
                }
            }
        }
        h.n_vertices = last;
        resolve_rec(h, &coef * qi(sgn), out)?;
    }
    Ok(())
}

fn max_leg_id(g: &JacobiGraph) -> usize {
    g.strands
        .iter()
        .flatten()
        .filter_map(|it| match it {
            GSym::Leg { leg } => Some(*leg),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn push_bead_at(g: &mut JacobiGraph, si: usize, pi: usize, outward: &FreeWord) {
    let before: Vec<GSym> = outward
        .letters()
        .iter()
        .map(|&(h, s)| GSym::Bead { handle: h, sign: s })
        .collect();
    let after: Vec<GSym> = outward
        .inv()
        .letters()
        .iter()
        .map(|&(h, s)| GSym::Bead { handle: h, sign: s })
        .collect();
    let strand = &mut g.strands[si];
    let mut rebuilt = Vec::with_capacity(strand.len() + before.len() + after.len());
    rebuilt.extend_from_slice(&strand[..pi]);
    rebuilt.extend(before);
    rebuilt.push(strand[pi]);
    rebuilt.extend(after);
    rebuilt.extend_from_slice(&strand[pi + 1..]);
    *strand = rebuilt;
}

fn emit_chords(g: &mut JacobiGraph, coef: Q, out: &mut DiagLin) -> Result<(), JacobiError> {
    // Push remaining beads off chords (both endpoints are legs).
    for ei in 0..g.edges.len() {
        if g.edges[ei].bead.is_empty() {
            continue;
        }
        let leg = match g.edges[ei].a {
            Port::Leg(l) => l,
            _ => return Err(JacobiError::Malformed("chord endpoint is not a leg".into())),
        };
        let (si, pi) = locate_leg(g, leg)?;
        let outward = g.edges[ei].bead.clone();
        push_bead_at(g, si, pi, &outward);
        g.edges[ei].bead = FreeWord::identity(g.m);
    }
    // Convert to a tensor word.
    let mut chord_of_leg: BTreeMap<usize, (usize, Half)> = BTreeMap::new();
    for (ci, e) in g.edges.iter().enumerate() {
        match (e.a, e.b) {
            (Port::Leg(l1), Port::Leg(l2)) => {
                chord_of_leg.insert(l1, (ci + 1, Half::L));
                chord_of_leg.insert(l2, (ci + 1, Half::R));
            }
            _ => return Err(JacobiError::Malformed("unresolved non-chord edge".into())),
        }
    }
    let strands = g
        .strands
        .iter()
        .map(|s| {
            s.iter()
                .map(|item| match *item {
                    GSym::Bead { handle, sign } => Sym::bead(handle, sign),
                    GSym::Leg { leg } => {
                        let (c, h) = chord_of_leg[&leg];
                        Sym::end(c, h)
                    }
                })
                .collect()
        })
        .collect();
    let w = TensorWord::raw(g.m, strands).map_err(|e| JacobiError::Malformed(e.to_string()))?;
    out.add_term(w, coef);
    Ok(())
}

fn locate_leg(g: &JacobiGraph, leg: usize) -> Result<(usize, usize), JacobiError> {
    for (si, s) in g.strands.iter().enumerate() {
        for (pi, item) in s.iter().enumerate() {
            if *item == (GSym::Leg { leg }) {
                return Ok((si, pi));
            }
        }
    }
    Err(JacobiError::Malformed(format!("leg {leg} not on any strand")))
}

/// What a box crosses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoxItem {
    /// Attach to a strand in the gap before position `pos` (0 ..= len);
    /// `against` when the strand orientation opposes the box direction.
    Arc { strand: usize, pos: usize, against: bool },
    /// Attach to a dashed edge by splitting it with a new trivalent
    /// vertex.
    Dashed { edge: usize },
}

/// Box notation: the graph's `Open` port sweeps across the listed items;
/// each item contributes one summand (arcs signed by orientation, dashed
/// edges with a new oriented trivalent vertex).
pub fn expand_box(base: &JacobiGraph, items: &[BoxItem], trunc: usize) -> Result<DiagLin, JacobiError> {
    let (open_edge, open_at_a) = base
        .edges
        .iter()
        .enumerate()
        .find_map(|(ei, e)| {
            if e.a == Port::Open {
                Some((ei, true))
            } else if e.b == Port::Open {
                Some((ei, false))
            } else {
                None
            }
        })
        .ok_or_else(|| JacobiError::Malformed("no open port for the box".into()))?;
    let mut out = DiagLin::zero(trunc);
    let max_leg = max_leg_id(base);
    for item in items {
        let mut g = base.clone();
        let coef;
        match *item {
            BoxItem::Arc { strand, pos, against } => {
                let leg = max_leg + 1;
                g.strands[strand].insert(pos, GSym::Leg { leg });
                let p = Port::Leg(leg);
                if open_at_a {
                    g.edges[open_edge].a = p;
                } else {
                    g.edges[open_edge].b = p;
                }
                coef = if against { qi(-1) } else { qi(1) };
            }
            BoxItem::Dashed { edge } => {
                if edge == open_edge {
                    return Err(JacobiError::Malformed("box cannot cross its own edge".into()));
                }
                // Split `edge` at a new vertex; the cyclic order (first
                // part, second part, box edge) is fixed by the box
                // direction.
                let v = g.n_vertices;
                g.n_vertices += 1;
                let old_b = g.edges[edge].b;
                let bead = g.edges[edge].bead.clone();
                g.edges[edge].b = Port::Vert { vertex: v, slot: 0 };
                g.edges.push(Edge { a: Port::Vert { vertex: v, slot: 1 }, b: old_b, bead });
                g.edges[edge].bead = FreeWord::identity(g.m);
                let p = Port::Vert { vertex: v, slot: 2 };
                if open_at_a {
                    g.edges[open_edge].a = p;
                } else {
                    g.edges[open_edge].b = p;
                }
                coef = qi(1);
            }
        }
        let resolved = stu_resolve(&g, trunc)?;
        out = out.add(&resolved.scale(&coef));
    }
    Ok(out)
}

/// Kills diagrams whose coloring is homotopically nontrivial and strips
/// the beads of the rest: the retraction onto beadless diagrams.
pub fn project_trivial(v: &MorAB) -> MorAB {
    let mut out = DiagLin::zero(v.trunc());
    for (w, c) in v.lin().terms() {
        if coloring_is_trivial(w) {
            let strands = w
                .strands()
                .iter()
                .map(|s| s.iter().filter(|sym| sym.is_end()).copied().collect())
                .collect();
            out.add_term(TensorWord::raw(w.m(), strands).unwrap(), c.clone());
        }
    }
    MorAB::from_lin(v.m(), v.n(), out)
}

/// Evaluates the coloring homomorphism on every loop of the diagram
/// collapsed at the strand endpoints, via a spanning tree.
fn coloring_is_trivial(w: &TensorWord) -> bool {
    // Vertices: 0 = basepoint, then one per chord end (strand, pos).
    let mut vid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 1usize;
    for (si, s) in w.strands().iter().enumerate() {
        for (pi, sym) in s.iter().enumerate() {
            if sym.is_end() {
                vid.insert((si, pi), next);
                next += 1;
            }
        }
    }
    // Edges (u, v, word): strand segments and chords.
    let mut edges: Vec<(usize, usize, FreeWord)> = Vec::new();
    for (si, s) in w.strands().iter().enumerate() {
        let mut from = 0usize;
        let mut word: Vec<(usize, i8)> = Vec::new();
        for (pi, sym) in s.iter().enumerate() {
            match *sym {
                Sym::Bead { handle, sign } => word.push((handle, sign)),
                Sym::End { .. } => {
                    let to = vid[&(si, pi)];
                    edges.push((from, to, FreeWord::from_letters(w.m(), std::mem::take(&mut word)).unwrap()));
                    from = to;
                }
            }
        }
        edges.push((from, 0, FreeWord::from_letters(w.m(), word).unwrap()));
    }
    let mut ends_of_chord: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (si, s) in w.strands().iter().enumerate() {
        for (pi, sym) in s.iter().enumerate() {
            if let Sym::End { chord, .. } = sym {
                ends_of_chord.entry(*chord).or_default().push(vid[&(si, pi)]);
            }
        }
    }
    for (_, vs) in ends_of_chord {
        edges.push((vs[0], vs[1], FreeWord::identity(w.m())));
    }
    // Label vertices along a spanning tree from the basepoint.
    let nv = next;
    let mut label: Vec<Option<FreeWord>> = vec![None; nv];
    label[0] = Some(FreeWord::identity(w.m()));
    let mut in_tree = vec![false; edges.len()];
    let mut progress = true;
    while progress {
        progress = false;
        for (ei, (u, v, word)) in edges.iter().enumerate() {
            if in_tree[ei] {
                continue;
            }
            match (label[*u].clone(), label[*v].clone()) {
                (Some(gu), None) => {
                    label[*v] = Some(gu.mul(word).unwrap());
                    in_tree[ei] = true;
                    progress = true;
                }
                (None, Some(gv)) => {
                    label[*u] = Some(gv.mul(&word.inv()).unwrap());
                    in_tree[ei] = true;
                    progress = true;
                }
                _ => {}
            }
        }
    }
    debug_assert!(label.iter().all(|l| l.is_some()));
    for (ei, (u, v, word)) in edges.iter().enumerate() {
        if in_tree[ei] {
            continue;
        }
        let gu = label[*u].clone().unwrap();
        let gv = label[*v].clone().unwrap();
        if gu.mul(word).unwrap() != gv {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morab;
    use crate::relations::eq_mod_relations;

    fn tripod_one_strand() -> JacobiGraph {
        // One strand, three legs at positions 0, 1, 2, all meeting at a
        // single trivalent vertex.
        JacobiGraph {
            m: 0,
            strands: vec![vec![GSym::Leg { leg: 0 }, GSym::Leg { leg: 1 }, GSym::Leg { leg: 2 }]],
            n_vertices: 1,
            edges: vec![
                Edge { a: Port::Leg(0), b: Port::Vert { vertex: 0, slot: 0 }, bead: FreeWord::identity(0) },
                Edge { a: Port::Leg(1), b: Port::Vert { vertex: 0, slot: 1 }, bead: FreeWord::identity(0) },
                Edge { a: Port::Leg(2), b: Port::Vert { vertex: 0, slot: 2 }, bead: FreeWord::identity(0) },
            ],
        }
    }

    #[test]
    fn chord_diagram_resolves_to_itself() {
        let w = TensorWord::new(
            1,
            vec![vec![Sym::bead(1, 1), Sym::end(1, Half::L), Sym::end(1, Half::R)]],
        )
        .unwrap();
        let g = JacobiGraph::from_word(&w);
        let r = stu_resolve(&g, 2).unwrap();
        assert_eq!(r, DiagLin::single(2, w, qi(1)));
    }

    #[test]
    fn tripod_resolves_to_two_chord_difference() {
        let g = tripod_one_strand();
        let r = stu_resolve(&g, 2).unwrap();
        assert_eq!(r.terms().count(), 2);
        let coefs: Vec<i64> = r
            .sorted_terms()
            .iter()
            .map(|(_, c)| if c == &qi(1) { 1 } else { -1 })
            .collect();
        assert_eq!(coefs.iter().sum::<i64>(), 0);
    }

    #[test]
    fn as_combination_vanishes() {
        // AS: the tripod plus the same tripod with the vertex orientation
        // flipped resolves to zero.
        let g = tripod_one_strand();
        let mut flipped = g.clone();
        for e in flipped.edges.iter_mut() {
            if let Port::Vert { vertex: 0, slot } = e.b {
                if slot == 1 {
                    e.b = Port::Vert { vertex: 0, slot: 2 };
                } else if slot == 2 {
                    e.b = Port::Vert { vertex: 0, slot: 1 };
                }
            }
        }
        let sum = stu_resolve(&g, 2).unwrap().add(&stu_resolve(&flipped, 2).unwrap());
        let zero = DiagLin::zero(2);
        assert!(eq_mod_relations(&sum, &zero, 0, 1, None).is_equal());
    }

    #[test]
    fn no_univalent_vertex_rejected() {
        // Theta graph: two vertices joined by three edges, no legs.
        let g = JacobiGraph {
            m: 0,
            strands: vec![vec![]],
            n_vertices: 2,
            edges: (0..3)
                .map(|slot| Edge {
                    a: Port::Vert { vertex: 0, slot },
                    b: Port::Vert { vertex: 1, slot },
                    bead: FreeWord::identity(0),
                })
                .collect(),
        };
        assert_eq!(stu_resolve(&g, 2), Err(JacobiError::NoUnivalentVertex));
    }

    #[test]
    fn box_over_arcs_signs() {
        // Base: a single edge from a leg on strand 1 to the open port;
        // skeleton has two strands.
        let base = JacobiGraph {
            m: 0,
            strands: vec![vec![GSym::Leg { leg: 0 }], vec![]],
            n_vertices: 0,
            edges: vec![Edge { a: Port::Leg(0), b: Port::Open, bead: FreeWord::identity(0) }],
        };
        let with = expand_box(&base, &[BoxItem::Arc { strand: 1, pos: 0, against: false }], 2).unwrap();
        let against = expand_box(&base, &[BoxItem::Arc { strand: 1, pos: 0, against: true }], 2).unwrap();
        assert_eq!(with.scale(&qi(-1)), against);
        let both = expand_box(
            &base,
            &[
                BoxItem::Arc { strand: 1, pos: 0, against: false },
                BoxItem::Arc { strand: 0, pos: 1, against: false },
            ],
            2,
        )
        .unwrap();
        assert_eq!(both.terms().count(), 2);
    }

    #[test]
    fn box_over_dashed_edge_makes_vertex() {
        // Base: a chord between two strands, plus an open edge hanging
        // from a third leg; crossing the chord creates a tripod.
        let base = JacobiGraph {
            m: 0,
            strands: vec![
                vec![GSym::Leg { leg: 0 }, GSym::Leg { leg: 2 }],
                vec![GSym::Leg { leg: 1 }],
            ],
            n_vertices: 0,
            edges: vec![
                Edge { a: Port::Leg(0), b: Port::Leg(1), bead: FreeWord::identity(0) },
                Edge { a: Port::Leg(2), b: Port::Open, bead: FreeWord::identity(0) },
            ],
        };
        let d = expand_box(&base, &[BoxItem::Dashed { edge: 0 }], 2).unwrap();
        // An STU difference: two 2-chord terms.
        assert_eq!(d.terms().count(), 2);
    }

    #[test]
    fn project_trivial_cases() {
        let c = morab::generator(morab::Gen::Casimir, 2);
        assert_eq!(project_trivial(&c), c);
        let w = TensorWord::new(1, vec![vec![Sym::bead(1, 1)]]).unwrap();
        let d = MorAB::from_word(2, 1, w);
        assert!(project_trivial(&d).is_zero());
        // A chord reaching across a single handle passage picks up a
        // nontrivial loop word and dies.
        let w = TensorWord::new(
            1,
            vec![
                vec![Sym::bead(1, 1), Sym::end(1, Half::L), Sym::bead(1, -1)],
                vec![Sym::end(1, Half::R)],
            ],
        )
        .unwrap();
        let d = MorAB::from_word(2, 2, w);
        assert!(project_trivial(&d).is_zero());
        // Both chord ends inside the conjugated stretch: every loop word
        // cancels, so the diagram survives stripped.
        let w = TensorWord::new(
            1,
            vec![
                vec![Sym::bead(1, 1), Sym::end(1, Half::L), Sym::end(1, Half::R), Sym::bead(1, -1)],
                vec![],
            ],
        )
        .unwrap();
        let d = MorAB::from_word(2, 2, w);
        let stripped = project_trivial(&d);
        let expect = MorAB::from_word(
            2,
            2,
            TensorWord::new(1, vec![vec![Sym::end(1, Half::L), Sym::end(1, Half::R)], vec![]]).unwrap(),
        );
        assert_eq!(stripped, expect);
        let cc = morab::convolve(&c, &c).unwrap();
        assert_eq!(project_trivial(&cc), cc);
    }

    #[test]
    fn pushed_bead_preserves_homotopy_class() {
        // A beaded chord between two strands conjugates its attachment;
        // strand homotopy classes stay trivial.
        let g = JacobiGraph {
            m: 1,
            strands: vec![vec![GSym::Leg { leg: 0 }], vec![GSym::Leg { leg: 1 }]],
            n_vertices: 0,
            edges: vec![Edge {
                a: Port::Leg(0),
                b: Port::Leg(1),
                bead: FreeWord::gen(1, 1, 1).unwrap(),
            }],
        };
        let r = stu_resolve(&g, 2).unwrap();
        assert_eq!(r.terms().count(), 1);
        for (w, _) in r.terms() {
            let h = w.homotopy_class();
            assert!(h.images().iter().all(|im| im.is_empty()));
        }
    }
}
