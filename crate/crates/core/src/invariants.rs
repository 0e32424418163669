//! From tropical counts to refined real invariants.
//!
//! A curve `Γ₀` of degree `Δ(s)` contributes `¼·m′_{Γ₀}` to the real count.
//! `m′` is computed here twice: by summing local lifts over every real
//! structure, and by the branch recursion on `(R, C, Θ)`. Both are checked
//! against the product formula.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::lattice::{Degree, SplitSpec};
use crate::localcount::{s_closed, Angle};
use crate::qlaurent::{AffineExp, Exponent, Frac, Laurent};
use crate::realstruct::{
    build_real_curve, compute_even_subgraph, enumerate_admissible, EvenSubgraph, Placement, RealVertexKind,
};
use crate::tropcurve::TropCurve;
use crate::{ratio, Error, QFrac, QLaurent, Rat, Result};

fn half_int(m: u64) -> Rat {
    ratio(m as i64, 2)
}

fn bm_half<E: Exponent>(m: u64) -> Laurent<E> {
    Laurent::bracket_minus(E::from_rat(half_int(m)))
}

/// `⟨2θ−1⟩₊`.
fn bp_theta<E: Exponent>(t: &Angle<E>) -> Laurent<E> {
    Laurent::bracket_plus(t.affine(2, -Rat::one()))
}

/// First-order data of a branch behind an edge.
#[derive(Clone, Debug)]
pub struct BranchData<E: Exponent> {
    /// Count when the edge lifts to a fixed edge.
    pub r: Frac<E>,
    /// Count when it lifts to an exchanged pair.
    pub c: Rat,
    /// Attainable moment arguments, one per `±e^{±iπθ}`.
    pub theta: Vec<Angle<E>>,
}

pub fn leaf_branch<E: Exponent>(theta: Angle<E>) -> BranchData<E> {
    BranchData {
        r: Frac::zero(),
        c: Rat::one(),
        theta: alloc::vec![theta],
    }
}

/// `{θ₁+θ₂, |θ₁−θ₂|}` reduced into `(0,1)`, for every pair.
pub fn merge_thetas<E: Exponent>(t1: &[Angle<E>], t2: &[Angle<E>]) -> Result<Vec<Angle<E>>> {
    let mut out = Vec::with_capacity(2 * t1.len() * t2.len());
    for a in t1 {
        for b in t2 {
            let d = if a.value > b.value { a.minus(b) } else { b.minus(a) };
            for x in [a.plus(b).reduced(), d] {
                if x.value.is_zero() {
                    return Err(Error::OnRegionBoundary);
                }
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// `Σ_{θ∈Θ} ⟨2θ−1⟩₊`.
fn theta_sum<E: Exponent>(ts: &[Angle<E>]) -> Laurent<E> {
    ts.iter().map(bp_theta).sum()
}

/// One step of the recursion at a vertex of multiplicity `m`.
pub fn merge_branches<E: Exponent>(b1: &BranchData<E>, b2: &BranchData<E>, m: u64) -> Result<BranchData<E>> {
    let bmv = bm_half::<E>(m);
    let triv = b1.r.mul(&b2.r).mul_laurent(&bmv);
    let mut penta = Frac::zero();
    for t in &b1.theta {
        for p in &b2.theta {
            penta = penta.add(&s_closed(m, t, p)?);
        }
    }
    let penta = penta.scale(&(&b1.c * &b2.c));
    let quad1 = b2.r.mul(&Frac::new(&theta_sum(&b1.theta) * &bmv, 1)).scale(&b1.c);
    let quad2 = b1.r.mul(&Frac::new(&theta_sum(&b2.theta) * &bmv, 1)).scale(&b2.c);
    Ok(BranchData {
        r: triv.add(&penta).add(&quad1).add(&quad2),
        c: &b1.c * &b2.c * half_int(m),
        theta: merge_thetas(&b1.theta, &b2.theta)?,
    })
}

/// `R + (C/⟨1⟩₋)·Σ_Θ⟨2θ−1⟩₊`.
pub fn branch_invariant<E: Exponent>(b: &BranchData<E>) -> Frac<E> {
    b.r.add(&Frac::new(theta_sum(&b.theta), 1).scale(&b.c))
}

/// Even leaves of `curve` in increasing order; `thetas` follows this order.
pub fn complex_ends(curve: &TropCurve) -> Vec<usize> {
    (0..curve.leaves())
        .filter(|&i| {
            let v = curve.ends()[i];
            v.x % 2 == 0 && v.y % 2 == 0
        })
        .collect()
}

/// Symbolic angles `tᵢ` with numeric values `thetas`.
pub fn symbolic_angles(thetas: &[Rat]) -> Vec<Angle<AffineExp>> {
    thetas
        .iter()
        .enumerate()
        .map(|(i, t)| Angle::symbolic(i, t.clone()))
        .collect()
}

fn leaf_angles<E: Exponent>(curve: &TropCurve, angles: &[Angle<E>]) -> Result<BTreeMap<usize, Angle<E>>> {
    let ends = complex_ends(curve);
    if ends.len() != angles.len() {
        return Err(Error::InvalidInput("one angle per even end".into()));
    }
    if angles.iter().any(|a| !(a.value > Rat::zero() && a.value < Rat::one())) {
        return Err(Error::OnRegionBoundary);
    }
    Ok(ends.into_iter().zip(angles.iter().cloned()).collect())
}

/// `(C, Θ)` behind each doubled edge of `Γ_even`.
fn pair_data<E: Exponent>(
    curve: &TropCurve,
    even: &EvenSubgraph,
    leaf: &BTreeMap<usize, Angle<E>>,
    e: usize,
    memo: &mut BTreeMap<usize, (Rat, Vec<Angle<E>>)>,
) -> Result<(Rat, Vec<Angle<E>>)> {
    if let Some(d) = memo.get(&e) {
        return Ok(d.clone());
    }
    let (_, h) = even.endpoints(e).expect("edge of the even subgraph");
    let out = if h < curve.leaves() {
        (Rat::one(), alloc::vec![leaf[&h].clone()])
    } else {
        let succ = even.successors(e);
        debug_assert_eq!(succ.len(), 2);
        let (c1, t1) = pair_data(curve, even, leaf, succ[0], memo)?;
        let (c2, t2) = pair_data(curve, even, leaf, succ[1], memo)?;
        let m = curve.vertex_mult(h)?;
        (c1 * c2 * half_int(m), merge_thetas(&t1, &t2)?)
    };
    memo.insert(e, out.clone());
    Ok(out)
}

/// `m′` summed over the real structures of `curve`, before normalization.
///
/// Structures with a flat vertex admit no lift and are skipped.
pub fn first_order_by_structures<E: Exponent>(curve: &TropCurve, angles: &[Angle<E>]) -> Result<Frac<E>> {
    let leaf = leaf_angles(curve, angles)?;
    let even = compute_even_subgraph(curve)?;
    let mut memo = BTreeMap::new();
    let mut total = Frac::zero();
    for rset in enumerate_admissible(&even) {
        let real = build_real_curve(curve, &even, &rset, Placement::Tail);
        if real.has_flat_vertex() {
            continue;
        }
        let mut term = Frac::new(Laurent::from_int(4), 0);
        for (v, kind) in real.fixed_vertices() {
            let base = real.nodes[v].base.expect("tail placement adds no nodes");
            let m = curve.vertex_mult(base)?;
            let bmv = bm_half::<E>(m);
            let local = match kind {
                RealVertexKind::Trivalent => Frac::new(bmv, 0),
                RealVertexKind::Quadrivalent { pair } => {
                    let (c, ts) = pair_data(curve, &even, &leaf, pair, &mut memo)?;
                    Frac::new(&theta_sum(&ts) * &bmv, 1).scale(&c)
                }
                RealVertexKind::Pentavalent { pairs: (e1, e2) } => {
                    let (c1, t1) = pair_data(curve, &even, &leaf, e1, &mut memo)?;
                    let (c2, t2) = pair_data(curve, &even, &leaf, e2, &mut memo)?;
                    let mut s = Frac::zero();
                    for t in &t1 {
                        for p in &t2 {
                            s = s.add(&s_closed(m, t, p)?);
                        }
                    }
                    s.scale(&(c1 * c2))
                }
                RealVertexKind::Other => return Err(Error::InvalidInput("unexpected real vertex".into())),
            };
            term = term.mul(&local);
        }
        total = total.add(&term);
    }
    Ok(total)
}

fn branch_of<E: Exponent>(
    curve: &TropCurve,
    even: &EvenSubgraph,
    leaf: &BTreeMap<usize, Angle<E>>,
    e: usize,
) -> Result<BranchData<E>> {
    let (_, h) = even.endpoints(e).expect("edge of the even subgraph");
    if h < curve.leaves() {
        return Ok(leaf_branch(leaf[&h].clone()));
    }
    let succ = even.successors(e);
    let b1 = branch_of(curve, even, leaf, succ[0])?;
    let b2 = branch_of(curve, even, leaf, succ[1])?;
    merge_branches(&b1, &b2, curve.vertex_mult(h)?)
}

/// `m′` through the branch recursion, one component of `Γ_even` at a time.
pub fn first_order_by_recursion<E: Exponent>(curve: &TropCurve, angles: &[Angle<E>]) -> Result<Frac<E>> {
    let leaf = leaf_angles(curve, angles)?;
    let even = compute_even_subgraph(curve)?;
    let mut inner = alloc::vec![false; curve.comb().node_count()];
    for e in even.edges() {
        inner[even.endpoints(e).expect("even edge").1] = true;
    }
    let mut total = Frac::new(Laurent::from_int(4), 0);
    for v in curve.vertices() {
        if inner[v] {
            continue;
        }
        let m = curve.vertex_mult(v)?;
        total = total.mul_laurent(&bm_half(m));
    }
    for comp in &even.components {
        let roots = even.leaving(comp.stem);
        if roots.len() != 1 {
            return Err(Error::InvalidInput("stem with several even edges".into()));
        }
        total = total.mul(&branch_invariant(&branch_of(curve, &even, &leaf, roots[0])?));
    }
    Ok(total)
}

/// `4·∏ᵢ⟨2θᵢ−1⟩₊/⟨1⟩₋^{|s|}·∏_V⟨m_V/2⟩₋`.
pub fn first_order_closed<E: Exponent>(curve: &TropCurve, angles: &[Angle<E>]) -> Result<Frac<E>> {
    leaf_angles(curve, angles)?;
    let mut num = Laurent::from_int(4);
    for a in angles {
        num = &num * &bp_theta(a);
    }
    for v in curve.vertices() {
        num = &num * &bm_half(curve.vertex_mult(v)?);
    }
    Ok(Frac::new(num, angles.len() as u32))
}

/// `m′_{Γ₀}` at `θᵢ = 1/2`.
///
/// The sum over real structures is formed with symbolic `θᵢ` (worth
/// `thetas` when deciding regions) and only then specialized, since
/// `θᵢ = 1/2` itself sits on every region boundary.
pub fn first_order_multiplicity(curve: &TropCurve, thetas: &[Rat]) -> Result<QFrac> {
    if curve.has_flat_vertex() {
        return Err(Error::FlatVertex);
    }
    let sym = first_order_by_structures(curve, &symbolic_angles(thetas))?;
    Ok(sym.substitute(&alloc::vec![ratio(1, 2); thetas.len()]))
}

/// `4·2^{|s|}/⟨1⟩₋^{|s|}·∏_V⟨m_V/2⟩₋`.
pub fn first_order_target(curve: &TropCurve) -> Result<QFrac> {
    let k = complex_ends(curve).len();
    let mut num = QLaurent::from_int(4 << k);
    for v in curve.vertices() {
        num = &num * &bm_half(curve.vertex_mult(v)?);
    }
    Ok(Frac::new(num, k as u32))
}

fn bracket_pow(plus: bool, e: Rat, k: i64) -> (QLaurent, QLaurent) {
    let b = if plus {
        QLaurent::bracket_plus(e)
    } else {
        QLaurent::bracket_minus(e)
    };
    let p = b.pow(k.unsigned_abs() as u32);
    if k >= 0 {
        (p, QLaurent::one())
    } else {
        (QLaurent::one(), p)
    }
}

fn split_sizes(delta: &Degree, s: &SplitSpec) -> Result<(i64, i64)> {
    s.remainders(delta)?;
    Ok((delta.len() as i64, s.total() as i64))
}

/// `R_{Δ,s} = 2^{|s|}⟨½⟩₋^{m−2−|s|}/⟨1⟩₋^{|s|}·N`.
pub fn classical_invariant_first_form(delta: &Degree, s: &SplitSpec, n_trop: &QLaurent) -> Result<QLaurent> {
    let (m, k) = split_sizes(delta, s)?;
    let (a, b) = bracket_pow(false, ratio(1, 2), m - 2 - k);
    let num = &(&a * n_trop) * &QLaurent::from_int(1 << k);
    let den = &b * &QLaurent::bracket_minus(Rat::one()).pow(k as u32);
    num.div_exact(&den)
}

/// `R_{Δ,s} = 2^{|s|}⟨½⟩₋^{m−2−2|s|}/⟨½⟩₊^{|s|}·N`.
pub fn classical_invariant_second_form(delta: &Degree, s: &SplitSpec, n_trop: &QLaurent) -> Result<QLaurent> {
    let (m, k) = split_sizes(delta, s)?;
    let (a, b) = bracket_pow(false, ratio(1, 2), m - 2 - 2 * k);
    let num = &(&a * n_trop) * &QLaurent::from_int(1 << k);
    let den = &b * &QLaurent::bracket_plus(ratio(1, 2)).pow(k as u32);
    num.div_exact(&den)
}

/// Both forms of the conversion; they must agree.
pub fn classical_invariant(delta: &Degree, s: &SplitSpec, n_trop: &QLaurent) -> Result<QLaurent> {
    let a = classical_invariant_first_form(delta, s, n_trop)?;
    let b = classical_invariant_second_form(delta, s, n_trop)?;
    if a != b {
        return Err(Error::NotDivisible);
    }
    Ok(a)
}

/// `R_{Δ,s}` from a Göttsche–Schroeter count: `⟨½⟩₋^{m−2−2|s|}/⟨1⟩₊^{|s|}·BG`.
pub fn classical_from_bg(delta: &Degree, s: &SplitSpec, bg: &QLaurent) -> Result<QLaurent> {
    let (m, k) = split_sizes(delta, s)?;
    let (a, b) = bracket_pow(false, ratio(1, 2), m - 2 - 2 * k);
    let den = &b * &QLaurent::bracket_plus(Rat::one()).pow(k as u32);
    (&a * bg).div_exact(&den)
}
