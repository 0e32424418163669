//! Real structures on a curve whose ends have weight 1 or 2.
//!
//! The even subgraph `Γ_even` is the closure of the even ends under the
//! extendable-vertex rule. A real structure is fixed by an admissible set: an
//! antichain of `Γ_even` edges (oriented away from the stem of their
//! component) covering every even end. Everything beyond the chosen points is
//! doubled and exchanged by the involution.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::lattice::{lattice_length, omega, LatticeVec};
use crate::tropcurve::{Point, TropCurve};
use crate::{Error, Rat, Result};

/// One connected component of `Γ_even`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenComponent {
    /// The unique non-extendable vertex.
    pub stem: usize,
    /// Edges (by head node of the base curve), sorted.
    pub edges: Vec<usize>,
}

/// `Γ_even` with each edge oriented away from the stem of its component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenSubgraph {
    pub components: Vec<EvenComponent>,
    /// `(tail, head)` per base edge in the stem orientation; `None` outside `Γ_even`.
    oriented: Vec<Option<(usize, usize)>>,
}

impl EvenSubgraph {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.oriented.get(e).is_some_and(|o| o.is_some())
    }

    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.components.iter().flat_map(|c| c.edges.iter().copied()).collect();
        e.sort_unstable();
        e
    }

    /// `(tail, head)` of an edge of `Γ_even`, away from the stem.
    pub fn endpoints(&self, e: usize) -> Option<(usize, usize)> {
        self.oriented.get(e).copied().flatten()
    }

    /// Edges of `Γ_even` leaving the head of `e`.
    pub fn successors(&self, e: usize) -> Vec<usize> {
        let (_, h) = self.endpoints(e).expect("edge of the even subgraph");
        self.leaving(h)
    }

    /// Edges of `Γ_even` whose tail is `v`.
    pub fn leaving(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.oriented.len())
            .filter(|&e| matches!(self.oriented[e], Some((t, _)) if t == v))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Edges at a node, each named by its head in the base orientation.
fn incident(curve: &TropCurve, v: usize) -> Vec<usize> {
    let mut out = curve.children(v);
    if curve.parent(v).is_some() {
        out.push(v);
    }
    out
}

fn other_end(curve: &TropCurve, e: usize, v: usize) -> usize {
    let p = curve.parent(e).expect("edge has a tail");
    if p == v {
        e
    } else {
        p
    }
}

fn is_even_end(curve: &TropCurve, leaf: usize) -> Result<bool> {
    match lattice_length(curve.ends()[leaf])? {
        1 => Ok(false),
        2 => Ok(true),
        _ => Err(Error::BadEndWeight(leaf)),
    }
}

/// Closure of the even ends under the extendable-vertex rule.
///
/// `order` permutes the vertex scan; the result does not depend on it.
pub fn compute_even_subgraph_with_order(curve: &TropCurve, order: &[usize]) -> Result<EvenSubgraph> {
    let m = curve.leaves();
    let n = curve.comb().node_count();
    let mut inside = alloc::vec![false; n];
    let mut any_odd = false;
    for leaf in 0..m {
        if is_even_end(curve, leaf)? {
            inside[leaf] = true;
        } else {
            any_odd = true;
        }
    }
    if !any_odd {
        return Err(Error::NoOddEnd);
    }
    loop {
        let mut changed = false;
        for &v in order {
            let inc = incident(curve, v);
            let missing: Vec<usize> = inc.iter().copied().filter(|&e| !inside[e]).collect();
            if missing.len() == 1 {
                inside[missing[0]] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // components and stems
    let mut oriented = alloc::vec![None; n];
    let mut components = Vec::new();
    let mut assigned = alloc::vec![false; n];
    for start in 0..n {
        if !inside[start] || assigned[start] {
            continue;
        }
        // flood fill over shared interior vertices
        let mut edges = Vec::new();
        let mut stack = alloc::vec![start];
        assigned[start] = true;
        let mut verts = BTreeSet::new();
        while let Some(e) = stack.pop() {
            edges.push(e);
            let p = curve.parent(e).expect("edge has a tail");
            for v in [p, e] {
                if v < m {
                    continue;
                }
                verts.insert(v);
                for f in incident(curve, v) {
                    if inside[f] && !assigned[f] {
                        assigned[f] = true;
                        stack.push(f);
                    }
                }
            }
        }
        edges.sort_unstable();
        let stems: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| incident(curve, v).iter().any(|&f| !inside[f]))
            .collect();
        if stems.len() != 1 {
            return Err(Error::InvalidInput("even component without a unique stem".into()));
        }
        let stem = stems[0];
        let mut frontier = alloc::vec![stem];
        while let Some(v) = frontier.pop() {
            for f in incident(curve, v) {
                if inside[f] && oriented[f].is_none() {
                    let w = other_end(curve, f, v);
                    oriented[f] = Some((v, w));
                    frontier.push(w);
                }
            }
        }
        components.push(EvenComponent { stem, edges });
    }
    Ok(EvenSubgraph { components, oriented })
}

pub fn compute_even_subgraph(curve: &TropCurve) -> Result<EvenSubgraph> {
    let order: Vec<usize> = curve.vertices().collect();
    compute_even_subgraph_with_order(curve, &order)
}

/// Where a point of an admissible set sits on its edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Placement {
    /// At the tail vertex: the whole edge is doubled.
    #[default]
    Tail,
    /// Inside the edge, at half its length (offset 1 on an unbounded end).
    Midpoint,
}

/// A covering antichain of `Γ_even` edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AdmissibleSet {
    /// Chosen edges, sorted.
    pub edges: Vec<usize>,
}

impl AdmissibleSet {
    /// Offset of each point from the tail of its edge.
    pub fn points(&self, curve: &TropCurve, placement: Placement) -> Vec<(usize, Rat)> {
        self.edges
            .iter()
            .map(|&e| {
                let off = match (placement, curve.length(e)) {
                    (Placement::Tail, _) => Rat::zero(),
                    (Placement::Midpoint, Some(l)) => l / crate::rat(2),
                    (Placement::Midpoint, None) => crate::rat(1),
                };
                (e, off)
            })
            .collect()
    }

    /// The splitting graph: chosen edges and everything beyond them.
    pub fn splitting_graph(&self, even: &EvenSubgraph) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = self.edges.clone();
        while let Some(e) = stack.pop() {
            out.push(e);
            stack.extend(even.successors(e));
        }
        out.sort_unstable();
        out
    }
}

fn edge_choices(even: &EvenSubgraph, e: usize) -> Vec<Vec<usize>> {
    let mut out = alloc::vec![alloc::vec![e]];
    let succ = even.successors(e);
    if !succ.is_empty() {
        out.extend(product(succ.iter().map(|&f| edge_choices(even, f)).collect()));
    }
    out
}

fn product(parts: Vec<Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            for p in &part {
                let mut x = a.clone();
                x.extend_from_slice(p);
                next.push(x);
            }
        }
        acc = next;
    }
    acc
}

/// All admissible sets, one per splitting graph.
pub fn enumerate_admissible(even: &EvenSubgraph) -> Vec<AdmissibleSet> {
    let parts: Vec<Vec<Vec<usize>>> = even
        .components
        .iter()
        .map(|c| product(even.leaving(c.stem).iter().map(|&e| edge_choices(even, e)).collect()))
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut edges in product(parts) {
        edges.sort_unstable();
        let set = AdmissibleSet { edges };
        if seen.insert(set.splitting_graph(even)) {
            out.push(set);
        }
    }
    out
}

/// Whether `edges` is an antichain meeting every stem-to-even-end path once.
pub fn is_admissible(curve: &TropCurve, even: &EvenSubgraph, edges: &[usize]) -> bool {
    let chosen: BTreeSet<usize> = edges.iter().copied().collect();
    if chosen.iter().any(|&e| !even.contains(e)) {
        return false;
    }
    for leaf in 0..curve.leaves() {
        if !even.contains(leaf) {
            continue;
        }
        // walk from the end back to the stem
        let mut hits = 0;
        let mut e = leaf;
        loop {
            if chosen.contains(&e) {
                hits += 1;
            }
            let (t, _) = even.endpoints(e).expect("path stays in the component");
            match (0..curve.comb().node_count()).find(|&f| matches!(even.endpoints(f), Some((_, h)) if h == t)) {
                Some(f) => e = f,
                None => break,
            }
        }
        if hits != 1 {
            return false;
        }
    }
    true
}

/// Edge of a real curve, oriented away from the fixed part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealEdge {
    pub tail: usize,
    /// For an unbounded end, the leaf node.
    pub head: usize,
    pub slope: LatticeVec,
    pub length: Option<Rat>,
    pub base_edge: usize,
    pub fixed: bool,
}

/// Node of a real curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealNode {
    /// Base node it maps to, or `None` for an inserted splitting point.
    pub base: Option<usize>,
    pub leaf: bool,
    pub fixed: bool,
    pub pos: Point,
}

/// Kind of a fixed vertex of a real curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RealVertexKind {
    /// Three fixed edges.
    Trivalent,
    /// Two fixed edges and one exchanged pair, given by its base edge.
    Quadrivalent { pair: usize },
    /// One fixed edge and two exchanged pairs.
    Pentavalent { pairs: (usize, usize) },
    Other,
}

/// `Γ(ℛ)` with its involution and map to the plane.
#[derive(Clone, Debug)]
pub struct RealTropCurve {
    pub nodes: Vec<RealNode>,
    pub edges: Vec<RealEdge>,
    pub sigma_node: Vec<usize>,
    pub sigma_edge: Vec<usize>,
    /// Base edges that are doubled.
    pub doubled: Vec<usize>,
}

/// Builds the real curve of an admissible set.
pub fn build_real_curve(
    base: &TropCurve,
    even: &EvenSubgraph,
    rset: &AdmissibleSet,
    placement: Placement,
) -> RealTropCurve {
    let n = base.comb().node_count();
    let doubled = rset.splitting_graph(even);
    let mut is_doubled = alloc::vec![false; n];
    for &e in &doubled {
        is_doubled[e] = true;
    }
    // a node is doubled when it is the head of a doubled edge
    let mut node_doubled = alloc::vec![false; n];
    for &e in &doubled {
        let (_, h) = even.endpoints(e).expect("doubled edges lie in the even subgraph");
        node_doubled[h] = true;
    }
    let mut nodes = Vec::new();
    let mut copies = alloc::vec![[0usize; 2]; n];
    for v in 0..n {
        let node = RealNode {
            base: Some(v),
            leaf: v < base.leaves(),
            fixed: !node_doubled[v],
            pos: base.position(v).clone(),
        };
        copies[v][0] = nodes.len();
        nodes.push(node.clone());
        if node_doubled[v] {
            copies[v][1] = nodes.len();
            nodes.push(node);
        } else {
            copies[v][1] = copies[v][0];
        }
    }
    let mut edges = Vec::new();
    let chosen: BTreeSet<usize> = rset.edges.iter().copied().collect();
    for e in base.all_edges() {
        let p = base.parent(e).expect("edge has a tail");
        let (t, h) = even.endpoints(e).unwrap_or((p, e));
        let slope = if t == p { base.slope(e) } else { -base.slope(e) };
        let len = base.length(e).cloned();
        if !is_doubled[e] {
            edges.push(RealEdge {
                tail: copies[t][0],
                head: copies[h][0],
                slope,
                length: len,
                base_edge: e,
                fixed: true,
            });
            continue;
        }
        let half = LatticeVec::new(slope.x / 2, slope.y / 2);
        let mut start = [copies[t][0], copies[t][1]];
        let mut rest = len.clone();
        if placement == Placement::Midpoint && chosen.contains(&e) {
            let off = match &len {
                Some(l) => l / crate::rat(2),
                None => crate::rat(1),
            };
            let s = nodes.len();
            nodes.push(RealNode {
                base: None,
                leaf: false,
                fixed: true,
                pos: base.position(t).offset(slope, &off),
            });
            edges.push(RealEdge {
                tail: copies[t][0],
                head: s,
                slope,
                length: Some(off.clone()),
                base_edge: e,
                fixed: true,
            });
            start = [s, s];
            rest = len.map(|l| l - off);
        }
        for k in 0..2 {
            edges.push(RealEdge {
                tail: start[k],
                head: copies[h][k],
                slope: half,
                length: rest.as_ref().map(|l| l * crate::rat(2)),
                base_edge: e,
                fixed: false,
            });
        }
    }
    // leaf copies sit at the end of their ray's finite edge
    for ed in &edges {
        if nodes[ed.head].leaf {
            nodes[ed.head].pos = nodes[ed.tail].pos.clone();
        }
    }
    let mut sigma_node: Vec<usize> = (0..nodes.len()).collect();
    for c in &copies {
        sigma_node[c[0]] = c[1];
        sigma_node[c[1]] = c[0];
    }
    let sigma_edge: Vec<usize> = (0..edges.len())
        .map(|i| {
            let (t, h) = (sigma_node[edges[i].tail], sigma_node[edges[i].head]);
            (0..edges.len())
                .find(|&j| edges[j].tail == t && edges[j].head == h)
                .expect("image edge exists")
        })
        .collect();
    RealTropCurve {
        nodes,
        edges,
        sigma_node,
        sigma_edge,
        doubled,
    }
}

impl RealTropCurve {
    /// Outgoing slopes at a node.
    pub fn outgoing(&self, v: usize) -> Vec<LatticeVec> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.tail == v {
                    Some(e.slope)
                } else if e.head == v {
                    Some(-e.slope)
                } else {
                    None
                }
            })
            .collect()
    }

    fn incident(&self, v: usize) -> Vec<&RealEdge> {
        self.edges.iter().filter(|e| e.tail == v || e.head == v).collect()
    }

    /// Vertices whose adjacent slopes are all collinear.
    pub fn has_flat_vertex(&self) -> bool {
        (0..self.nodes.len()).filter(|&v| !self.nodes[v].leaf).any(|v| {
            let out = self.outgoing(v);
            out.iter().all(|&u| omega(u, out[0]) == 0)
        })
    }

    pub fn check_balancing(&self) -> Result<()> {
        for v in 0..self.nodes.len() {
            if self.nodes[v].leaf {
                continue;
            }
            if self.outgoing(v).into_iter().sum::<LatticeVec>() != LatticeVec::ZERO {
                return Err(Error::BalancingViolated(v));
            }
        }
        Ok(())
    }

    /// `σ` is an involution preserving the map to the plane.
    pub fn check_sigma(&self) -> bool {
        let inv = (0..self.nodes.len()).all(|v| self.sigma_node[self.sigma_node[v]] == v)
            && (0..self.edges.len()).all(|e| self.sigma_edge[self.sigma_edge[e]] == e);
        let nodes = (0..self.nodes.len()).all(|v| self.nodes[self.sigma_node[v]].pos == self.nodes[v].pos);
        let edges = (0..self.edges.len()).all(|e| {
            let f = &self.edges[self.sigma_edge[e]];
            f.slope == self.edges[e].slope && f.length == self.edges[e].length
        });
        inv && nodes && edges
    }

    /// Bounded edges reach their head: `pos(head) = pos(tail) + length·slope`.
    pub fn check_lengths(&self) -> bool {
        self.edges.iter().all(|e| match &e.length {
            Some(l) => self.nodes[e.tail].pos.offset(e.slope, l) == self.nodes[e.head].pos,
            None => true,
        })
    }

    /// Fixed interior vertices with their kind, by node index.
    pub fn fixed_vertices(&self) -> Vec<(usize, RealVertexKind)> {
        let mut out = Vec::new();
        for v in 0..self.nodes.len() {
            let node = &self.nodes[v];
            if node.leaf || !node.fixed {
                continue;
            }
            let inc = self.incident(v);
            let fixed = inc.iter().filter(|e| e.fixed).count();
            let mut pairs: Vec<usize> = inc.iter().filter(|e| !e.fixed).map(|e| e.base_edge).collect();
            pairs.sort_unstable();
            pairs.dedup();
            let kind = match (fixed, pairs.len(), inc.len()) {
                (3, 0, 3) => RealVertexKind::Trivalent,
                (2, 1, 4) => RealVertexKind::Quadrivalent { pair: pairs[0] },
                (1, 2, 5) => RealVertexKind::Pentavalent {
                    pairs: (pairs[0], pairs[1]),
                },
                _ => RealVertexKind::Other,
            };
            out.push((v, kind));
        }
        out
    }

    /// Number of fixed edges (for comparing `Fix(σ)` across structures).
    pub fn fixed_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.fixed).count()
    }
}
