//! Parametrized rational tropical curves.
//!
//! A curve is a tree whose nodes `0..m` are the leaves (unbounded ends, in
//! degree order) and whose remaining nodes are interior vertices. It is rooted
//! at the vertex adjacent to leaf 0; every edge is oriented away from the root
//! and identified by its head node. The slope of an edge is the sum of the
//! end vectors beyond it, so balancing holds by construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::lattice::{lattice_length, omega, LatticeVec};
use crate::{Error, QLaurent, Rat, Result};

/// Point of `N_ℝ` with rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(Rat::zero(), Rat::zero())
    }

    /// `self + t·v`
    pub fn offset(&self, v: LatticeVec, t: &Rat) -> Point {
        Point::new(
            &self.x + t * Rat::from_integer(v.x.into()),
            &self.y + t * Rat::from_integer(v.y.into()),
        )
    }
}

/// `ω(n, p)` for a lattice vector and a rational point.
pub fn omega_point(n: LatticeVec, p: &Point) -> Rat {
    Rat::from_integer(n.x.into()) * &p.y - Rat::from_integer(n.y.into()) * &p.x
}

/// Combinatorial type: a tree with `m` labeled leaves `0..m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CombType {
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl CombType {
    /// Builds a type from an undirected edge list. Nodes `0..m` must be the
    /// leaves; all other nodes must have valence at least 3.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0).max(m);
        let mut adj = alloc::vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidInput("loop edge".into()));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let ct = CombType { m, adj };
        ct.validate(edges.len())?;
        Ok(ct)
    }

    fn validate(&self, n_edges: usize) -> Result<()> {
        let n = self.adj.len();
        if n_edges + 1 != n {
            return Err(Error::InvalidInput("not a tree".into()));
        }
        for (v, a) in self.adj.iter().enumerate() {
            let ok = if v < self.m { a.len() == 1 } else { a.len() >= 3 };
            if !ok {
                return Err(Error::InvalidInput("bad valence".into()));
            }
        }
        // connectivity
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidInput("not connected".into()));
        }
        Ok(())
    }

    /// Number of leaves.
    pub fn leaves(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_trivalent(&self) -> bool {
        (self.m..self.adj.len()).all(|v| self.adj[v].len() == 3)
    }

    /// Undirected edges with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = (0..self.adj.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        e.sort_unstable();
        e
    }

    /// The vertex adjacent to leaf 0.
    pub fn root(&self) -> usize {
        self.adj[0][0]
    }

    /// Parent of every node for the orientation away from the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        self.parents_from(self.root())
    }

    /// Parent of every node for the orientation away from `root`.
    pub fn parents_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = alloc::vec![None; self.adj.len()];
        let mut stack = alloc::vec![root];
        let mut seen = alloc::vec![false; self.adj.len()];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        parent
    }

    /// Leaf bitmask on the side of each edge away from the root, indexed by
    /// head node (zero for the root).
    pub fn subtree_masks(&self) -> Vec<u128> {
        assert!(self.m <= 128, "at most 128 leaves");
        let parent = self.parents();
        let order = self.dfs_order();
        let mut mask = alloc::vec![0u128; self.adj.len()];
        for &v in order.iter().rev() {
            if v < self.m {
                mask[v] |= 1u128 << v;
            }
            if let Some(p) = parent[v] {
                let mv = mask[v];
                mask[p] |= mv;
            }
        }
        mask[self.root()] = 0;
        mask
    }

    /// Preorder from the root, children in increasing node order.
    pub fn dfs_order(&self) -> Vec<usize> {
        let parent = self.parents();
        let mut out = Vec::with_capacity(self.adj.len());
        let mut stack = alloc::vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in self.adj[v].iter().rev() {
                if parent[w] == Some(v) {
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Canonical key: the sorted list of nontrivial splits, each normalized
    /// to the side not containing leaf 0.
    pub fn split_key(&self) -> Vec<u128> {
        let masks = self.subtree_masks();
        let mut key: Vec<u128> = (self.m..self.adj.len())
            .filter(|&v| v != self.root())
            .map(|v| masks[v])
            .collect();
        key.sort_unstable();
        key
    }
}

/// Parametrized rational tropical curve.
#[derive(Clone, Debug)]
pub struct TropCurve {
    comb: CombType,
    ends: Vec<LatticeVec>,
    parent: Vec<Option<usize>>,
    slope: Vec<LatticeVec>,
    length: Vec<Option<Rat>>,
    pos: Vec<Point>,
}

impl TropCurve {
    /// Builds a curve. `ends[i]` is the vector of leaf `i`; `lengths` lists
    /// bounded edge lengths in the order of [`TropCurve::bounded_edges`].
    pub fn new(comb: CombType, ends: Vec<LatticeVec>, lengths: &[Rat], root_pos: Point) -> Result<Self> {
        let mut c = Self::unmetrized(comb, ends)?;
        let bounded = c.bounded_edges();
        if lengths.len() != bounded.len() {
            return Err(Error::InvalidInput("wrong number of lengths".into()));
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(Error::NonPositiveLength);
        }
        for (e, l) in bounded.iter().zip(lengths) {
            c.length[*e] = Some(l.clone());
        }
        c.place(root_pos);
        Ok(c)
    }

    /// Slopes only; lengths unset and all positions at the origin.
    pub(crate) fn unmetrized(comb: CombType, ends: Vec<LatticeVec>) -> Result<Self> {
        if ends.len() != comb.leaves() {
            return Err(Error::InvalidInput("end count differs from leaf count".into()));
        }
        if ends.iter().any(|v| v.is_zero()) {
            return Err(Error::ZeroVector);
        }
        if ends.iter().copied().sum::<LatticeVec>() != LatticeVec::ZERO {
            return Err(Error::Unbalanced);
        }
        let parent = comb.parents();
        let n = comb.node_count();
        let mut slope = alloc::vec![LatticeVec::ZERO; n];
        for &v in comb.dfs_order().iter().rev() {
            if v < comb.leaves() {
                slope[v] = ends[v];
            }
            if let Some(p) = parent[v] {
                if parent[p].is_some() {
                    let s = slope[v];
                    slope[p] = slope[p] + s;
                }
            }
        }
        Ok(TropCurve {
            comb,
            ends,
            parent,
            slope,
            length: alloc::vec![None; n],
            pos: alloc::vec![Point::origin(); n],
        })
    }

    fn place(&mut self, root_pos: Point) {
        let root = self.comb.root();
        self.pos[root] = root_pos;
        for v in self.comb.dfs_order() {
            if let Some(p) = self.parent[v] {
                self.pos[v] = match &self.length[v] {
                    Some(l) => self.pos[p].offset(self.slope[v], l),
                    None => self.pos[p].clone(),
                };
            }
        }
    }

    pub fn comb(&self) -> &CombType {
        &self.comb
    }

    pub fn ends(&self) -> &[LatticeVec] {
        &self.ends
    }

    pub fn leaves(&self) -> usize {
        self.comb.leaves()
    }

    pub fn root(&self) -> usize {
        self.comb.root()
    }

    pub fn root_pos(&self) -> &Point {
        &self.pos[self.root()]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Children of `v` in increasing order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        self.comb
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&w| self.parent[w] == Some(v))
            .collect()
    }

    /// Interior vertices.
    pub fn vertices(&self) -> core::ops::Range<usize> {
        self.comb.leaves()..self.comb.node_count()
    }

    /// Bounded edges, by head node.
    pub fn bounded_edges(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.parent[v].is_some()).collect()
    }

    /// All edges (bounded and unbounded), by head node.
    pub fn all_edges(&self) -> Vec<usize> {
        (0..self.comb.node_count()).filter(|&v| self.parent[v].is_some()).collect()
    }

    /// Slope of edge `e` oriented away from the root.
    pub fn slope(&self, e: usize) -> LatticeVec {
        self.slope[e]
    }

    pub fn length(&self, e: usize) -> Option<&Rat> {
        self.length[e].as_ref()
    }

    /// Image of a node; for a leaf, the finite endpoint of its ray.
    pub fn position(&self, v: usize) -> &Point {
        &self.pos[v]
    }

    /// Outgoing slopes at an interior vertex.
    pub fn outgoing(&self, v: usize) -> Vec<LatticeVec> {
        self.comb
            .neighbours(v)
            .iter()
            .map(|&w| if self.parent[w] == Some(v) { self.slope[w] } else { -self.slope[v] })
            .collect()
    }

    /// `μ_e = ω(n_e, p)` with the full end vector.
    pub fn moment(&self, end: usize) -> Rat {
        omega_point(self.ends[end], &self.pos[end])
    }

    pub fn moments(&self) -> Vec<Rat> {
        (0..self.leaves()).map(|e| self.moment(e)).collect()
    }

    /// Whether the end moments sum to zero.
    pub fn menelaus_check(&self) -> bool {
        self.moments().iter().fold(Rat::zero(), |a, b| a + b).is_zero()
    }

    pub fn check_balancing(&self) -> Result<()> {
        for v in self.vertices() {
            if self.outgoing(v).into_iter().sum::<LatticeVec>() != LatticeVec::ZERO {
                return Err(Error::BalancingViolated(v));
            }
        }
        Ok(())
    }

    /// `|ω(u, v)|` for two outgoing slopes of a trivalent vertex.
    pub fn vertex_mult(&self, v: usize) -> Result<u64> {
        let out = self.outgoing(v);
        if out.len() != 3 {
            return Err(Error::NotTrivalent);
        }
        Ok(omega(out[0], out[1]).unsigned_abs())
    }

    pub fn has_flat_vertex(&self) -> bool {
        self.vertices().any(|v| {
            let out = self.outgoing(v);
            out.iter().all(|&u| omega(u, out[0]) == 0)
        })
    }

    /// `∏_V m_V`.
    pub fn complex_mult(&self) -> Result<u64> {
        self.vertices().map(|v| self.vertex_mult(v)).product()
    }

    /// `∏_V [m_V]_q`.
    pub fn refined_mult(&self) -> Result<QLaurent> {
        let mut acc = QLaurent::one();
        for v in self.vertices() {
            let m = self.vertex_mult(v)?;
            if m == 0 {
                return Err(Error::FlatVertex);
            }
            acc = &acc * &QLaurent::q_analog(m);
        }
        Ok(acc)
    }

    /// Same curve moved by `t`.
    pub fn translated(&self, t: &Point) -> TropCurve {
        let mut c = self.clone();
        for p in c.pos.iter_mut() {
            p.x += &t.x;
            p.y += &t.y;
        }
        c
    }

    /// Image in the plane, with coinciding segments and rays merged.
    pub fn image_plane_curve(&self) -> PlaneCurve {
        let mut pc = PlaneCurve::default();
        for e in self.all_edges() {
            let p = self.parent[e].expect("edge has a tail");
            let w = lattice_length(self.slope[e]).expect("nonzero slope");
            let dir = self.slope[e].primitive().expect("nonzero slope");
            let a = pc.vertex(&self.pos[p]);
            if e < self.leaves() {
                pc.add_ray(a, dir, w);
            } else {
                let b = pc.vertex(&self.pos[e]);
                pc.add_segment(a, b, w);
            }
        }
        pc
    }
}

/// Embedded weighted rectilinear graph.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlaneCurve {
    pub vertices: Vec<Point>,
    /// `(a, b) → weight` with `a < b`.
    pub segments: BTreeMap<(usize, usize), u64>,
    /// `(vertex, primitive direction) → weight`.
    pub rays: BTreeMap<(usize, LatticeVec), u64>,
}

impl PlaneCurve {
    fn vertex(&mut self, p: &Point) -> usize {
        match self.vertices.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                self.vertices.push(p.clone());
                self.vertices.len() - 1
            }
        }
    }

    fn add_segment(&mut self, a: usize, b: usize, w: u64) {
        if a == b {
            return;
        }
        *self.segments.entry((a.min(b), a.max(b))).or_insert(0) += w;
    }

    fn add_ray(&mut self, a: usize, dir: LatticeVec, w: u64) {
        *self.rays.entry((a, dir)).or_insert(0) += w;
    }

    /// Weighted balancing `Σ w_E u_E = 0` at every vertex.
    pub fn check_balancing(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut acc = alloc::vec![(Rat::zero(), Rat::zero()); n];
        for (&(a, b), &w) in &self.segments {
            let dx = &self.vertices[b].x - &self.vertices[a].x;
            let dy = &self.vertices[b].y - &self.vertices[a].y;
            // primitive direction scaled by w: normalize by the lattice length of the difference
            let g = num_integer::Integer::gcd(
                &(&dx * Rat::from_integer(dy.denom() * dx.denom())).to_integer(),
                &(&dy * Rat::from_integer(dy.denom() * dx.denom())).to_integer(),
            );
            let scale = Rat::from_integer(dy.denom() * dx.denom()) / Rat::from_integer(g)
                * Rat::from_integer(w.into());
            acc[a].0 += &dx * &scale;
            acc[a].1 += &dy * &scale;
            acc[b].0 -= &dx * &scale;
            acc[b].1 -= &dy * &scale;
        }
        for (&(a, d), &w) in &self.rays {
            acc[a].0 += Rat::from_integer((d.x * w as i64).into());
            acc[a].1 += Rat::from_integer((d.y * w as i64).into());
        }
        for (i, (x, y)) in acc.iter().enumerate() {
            if !x.is_zero() || !y.is_zero() {
                return Err(Error::BalancingViolated(i));
            }
        }
        Ok(())
    }
}
