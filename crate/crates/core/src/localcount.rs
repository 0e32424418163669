//! Refined counts of the three vertex-local problems.
//!
//! A real tropical vertex lifts to a trivalent, quadrivalent (parabola) or
//! pentavalent (tangent ellipse) local piece. Each closed form here comes with
//! the literal finite sum it is supposed to equal.

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::lattice::{omega, LatticeVec};
use crate::qlaurent::{AffineExp, Exponent, Frac, Laurent};
use crate::{ratio, Error, QLaurent, Rat, Result};

fn bp(e: Rat) -> QLaurent {
    QLaurent::bracket_plus(e)
}

fn bm(e: Rat) -> QLaurent {
    QLaurent::bracket_minus(e)
}

fn half(n: u64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(2))
}

fn r(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn check_open_unit(t: &Rat) -> Result<()> {
    if t.is_positive() && *t < Rat::one() {
        Ok(())
    } else {
        Err(Error::InvalidInput("angle must lie in (0,1)".into()))
    }
}

/// `m_Δ = |ω(n1,n2)|`: the number of complex curves through two fixed moments.
pub fn trivalent_complex_count(n1: LatticeVec, n2: LatticeVec) -> Result<u64> {
    match omega(n1, n2) {
        0 => Err(Error::CollinearInput),
        w => Ok(w.unsigned_abs()),
    }
}

/// How the `m_Δ` complex solutions meet the third divisor.
///
/// Solutions differ by torus elements `ξ ∈ (ℚ/ℤ)²` trivial on `ι_{n1}ω` and
/// `ι_{n2}ω`; each one is tagged with `⟨ξ, ι_{n3/l3}ω⟩ mod 1`. The map sends
/// that tag to how many solutions carry it.
pub fn trivalent_intersection_distribution(n1: LatticeVec, n2: LatticeVec) -> Result<BTreeMap<Rat, u64>> {
    let d = trivalent_complex_count(n1, n2)? as i64;
    let n3 = -(n1 + n2);
    let g = n3.primitive()?.iota_omega();
    let (a, b) = (n1.iota_omega(), n2.iota_omega());
    let mut out = BTreeMap::new();
    for p in 0..d {
        for q in 0..d {
            let on = |v: LatticeVec| (p * v.x + q * v.y).mod_floor(&d);
            if on(a) != 0 || on(b) != 0 {
                continue;
            }
            *out.entry(ratio(on(g), d)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Order of `ι_{n3/l3}ω` in `M / (ℤι_{n1}ω + ℤι_{n2}ω)`.
pub fn third_divisor_order(n1: LatticeVec, n2: LatticeVec) -> Result<u64> {
    let d = omega(n1, n2);
    if d == 0 {
        return Err(Error::CollinearInput);
    }
    let g = (-(n1 + n2)).primitive()?.iota_omega();
    let (a, b) = (n1.iota_omega(), n2.iota_omega());
    // g = x a + y b by Cramer
    let x = ratio(omega(g, b), omega(a, b));
    let y = ratio(omega(a, g), omega(a, b));
    let o = x.denom().lcm(y.denom());
    Ok(o.try_into().expect("order fits in u64"))
}

/// `4⟨m_Δ/2⟩₋`.
pub fn trivalent_real_count(m_delta: u64) -> QLaurent {
    bm(half(m_delta)).scale(&r(4))
}

/// `2⟨l1(2θ−1)⟩₊⟨m_Δ/2⟩₋/⟨l1⟩₋`, for `m_Δ = 2 l1 h1`.
pub fn parabola_count_primitive(l1: u64, m_delta: u64, theta: &Rat) -> Result<QLaurent> {
    check_open_unit(theta)?;
    if l1 == 0 || m_delta == 0 || m_delta % (2 * l1) != 0 {
        return Err(Error::NotDivisible);
    }
    let l = r(l1 as i64);
    let quot = bm(half(m_delta)).div_exact(&bm(l.clone()))?;
    Ok((&bp(&l * (theta * r(2) - r(1))) * &quot).scale(&r(2)))
}

/// `2Σ_{k<h1} q^{l1(2θ+2k−h1)}` plus the same at `1−θ`.
pub fn parabola_bruteforce(l1: u64, h1: u64, theta: &Rat) -> QLaurent {
    let l = r(l1 as i64);
    let mut acc = QLaurent::zero();
    for t in [theta.clone(), r(1) - theta] {
        for k in 0..h1 {
            let e = &l * (&t * r(2) + r(2 * k as i64) - r(h1 as i64));
            acc = &acc + &QLaurent::monomial(r(2), e);
        }
    }
    acc
}

/// `4⟨2θ−1⟩₊⟨m_Δ/2⟩₋/⟨1⟩₋`, moments `±e^{±iπθ}` without fixing a root.
pub fn parabola_count_full(m_delta: u64, theta: &Rat) -> Result<QLaurent> {
    check_open_unit(theta)?;
    if m_delta == 0 || m_delta % 2 != 0 {
        return Err(Error::NotDivisible);
    }
    let quot = bm(half(m_delta)).div_exact(&bm(r(1)))?;
    Ok((&bp(theta * r(2) - r(1)) * &quot).scale(&r(4)))
}

/// `Σ_{k<l} ⟨2θ+2k−l⟩₊`.
pub fn root_sum(l: u64, theta: &Rat) -> QLaurent {
    (0..l)
        .map(|k| bp(theta * r(2) + r(2 * k as i64) - r(l as i64)))
        .sum()
}

/// `⟨2θ−1⟩₊⟨l⟩₋/⟨1⟩₋`.
pub fn root_sum_closed(l: u64, theta: &Rat) -> Result<QLaurent> {
    let quot = bm(r(l as i64)).div_exact(&bm(r(1)))?;
    Ok(&bp(theta * r(2) - r(1)) * &quot)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

fn signed_monomial(acc: &mut QLaurent, coeff: i64, e: Rat) -> Result<()> {
    let s = match e.signum() {
        s if s.is_zero() => return Err(Error::DegenerateArgument),
        s => s,
    };
    *acc = &*acc + &QLaurent::monomial(s * r(coeff), e);
    Ok(())
}

/// Signed count for the tangent-ellipse problem with primitive moments.
///
/// `parity` is that of `m1/l3`. In the even case only half the `(k1,k3)`
/// pairs admit a solution, each twice.
pub fn ellipse_count_primitive(
    l1: u64,
    l3: u64,
    h1: u64,
    h3: u64,
    parity: Parity,
    theta1: &Rat,
    theta3: &Rat,
) -> Result<QLaurent> {
    check_open_unit(theta1)?;
    check_open_unit(theta3)?;
    if l1 * h1 != l3 * h3 || l1 * h1 == 0 {
        return Err(Error::InvalidInput("need l1*h1 = l3*h3 > 0".into()));
    }
    let (l1r, l3r) = (r(l1 as i64), r(l3 as i64));
    let flip = |t: &Rat, f: bool| if f { r(1) - t } else { t.clone() };
    let mut acc = QLaurent::zero();
    for f1 in [false, true] {
        for f3 in [false, true] {
            let (a, b) = (flip(theta1, f1), flip(theta3, f3));
            let eps = u64::from(f1 != f3);
            for k1 in 0..h1 {
                for k3 in 0..h3 {
                    let (coeff, keep) = match parity {
                        Parity::Odd => (1, true),
                        Parity::Even => (2, (k1 + k3) % 2 == eps),
                    };
                    if !keep {
                        continue;
                    }
                    let e = r(2) * &l3r * (&b + r(k3 as i64)) - r(2) * &l1r * (&a + r(k1 as i64));
                    signed_monomial(&mut acc, coeff, e)?;
                }
            }
        }
    }
    Ok(acc)
}

/// Literal `S(θ,φ)` over `0 ≤ i,j < n`, each term signed by its exponent.
pub fn s_sum_bruteforce(n: u64, theta: &Rat, varphi: &Rat) -> Result<QLaurent> {
    region(theta, varphi)?;
    let d = varphi - theta;
    let s = r(1) - varphi - theta;
    let base = [&d * r(2), -&d * r(2), &s * r(2), -&s * r(2)];
    let mut acc = QLaurent::zero();
    for i in 0..n {
        for j in 0..n {
            for b in &base {
                signed_monomial(&mut acc, 1, b + r(2 * j as i64 - 2 * i as i64))
                    .map_err(|_| Error::OnRegionBoundary)?;
            }
        }
    }
    Ok(acc)
}

/// The four open regions cut out of `(0,1)²` by `θ = φ` and `θ + φ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    /// `θ < φ`, `θ + φ < 1`
    Left,
    /// `θ > φ`, `θ + φ > 1`
    Right,
    /// `θ > φ`, `θ + φ < 1`
    Bottom,
    /// `θ < φ`, `θ + φ > 1`
    Top,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::Left, Region::Right, Region::Bottom, Region::Top];

    pub fn name(self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Right => "right",
            Region::Bottom => "bottom",
            Region::Top => "top",
        }
    }
}

pub fn region(theta: &Rat, varphi: &Rat) -> Result<Region> {
    let inside = |t: &Rat| t.is_positive() && *t < Rat::one();
    if !inside(theta) || !inside(varphi) || theta == varphi {
        return Err(Error::OnRegionBoundary);
    }
    let s = theta + varphi;
    let one = Rat::one();
    if s == one {
        return Err(Error::OnRegionBoundary);
    }
    Ok(match (theta < varphi, s < one) {
        (true, true) => Region::Left,
        (false, false) => Region::Right,
        (false, true) => Region::Bottom,
        (true, false) => Region::Top,
    })
}

/// A moment argument: a formal exponent together with its numeric value.
///
/// With `E = Rat` the two agree. With `E = AffineExp` the exponent is kept
/// symbolic in parameters `tᵢ` while `value` decides region membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Angle<E: Exponent> {
    pub exp: E,
    pub value: Rat,
}

impl Angle<Rat> {
    pub fn exact(value: Rat) -> Self {
        Angle {
            exp: value.clone(),
            value,
        }
    }
}

impl Angle<AffineExp> {
    /// The parameter `t_i`, currently worth `value`.
    pub fn symbolic(i: usize, value: Rat) -> Self {
        Angle {
            exp: AffineExp::param(i),
            value,
        }
    }
}

impl<E: Exponent> Angle<E> {
    pub fn plus(&self, o: &Self) -> Self {
        Angle {
            exp: self.exp.plus(&o.exp),
            value: &self.value + &o.value,
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        Angle {
            exp: self.exp.minus(&o.exp),
            value: &self.value - &o.value,
        }
    }

    /// `kθ + c`.
    pub fn affine(&self, k: i64, c: Rat) -> E {
        self.exp.scaled(&r(k)).plus(&E::from_rat(c))
    }

    /// Representative of `θ mod 1` in `[0,1)`.
    pub fn reduced(&self) -> Self {
        let f = self.value.floor();
        Angle {
            exp: self.exp.minus(&E::from_rat(f.clone())),
            value: &self.value - f,
        }
    }
}

fn bpe<E: Exponent>(e: E) -> Laurent<E> {
    Laurent::bracket_plus(e)
}

/// Closed form of `S(θ,φ)` at a vertex of multiplicity `m`, over `⟨1⟩₋²`.
///
/// Agrees with [`s_sum_bruteforce`] with `n = m/4` when `4 | m`.
pub fn s_closed<E: Exponent>(m: u64, theta: &Angle<E>, varphi: &Angle<E>) -> Result<Frac<E>> {
    let reg = region(&theta.value, &varphi.value)?;
    let one = || Rat::one();
    let main = &(&bpe(varphi.affine(2, -one())) * &bpe(theta.affine(2, -one())))
        * &Laurent::bracket_minus(E::from_rat(half(m)));
    let g = match reg {
        Region::Left => &bpe(varphi.affine(2, -one())) * &bpe(theta.affine(2, Rat::zero())),
        Region::Right => &bpe(varphi.affine(2, -one())) * &bpe(theta.affine(-2, r(2))),
        Region::Bottom => &bpe(varphi.affine(2, Rat::zero())) * &bpe(theta.affine(2, -one())),
        Region::Top => &bpe(varphi.affine(-2, r(2))) * &bpe(theta.affine(2, -one())),
    };
    let corr = (&g * &Laurent::bracket_minus(E::from_rat(one()))).scale(&half(m));
    Ok(Frac::new(&main - &corr, 2))
}

/// Moments `±e^{±iπθ1}`, `±e^{±iπθ3}` on a pentavalent piece with `4 | m_Δ`.
pub fn ellipse_count_full(m_delta: u64, theta1: &Rat, theta3: &Rat) -> Result<QLaurent> {
    if m_delta == 0 || m_delta % 4 != 0 {
        return Err(Error::NotDivisible);
    }
    s_closed(m_delta, &Angle::exact(theta1.clone()), &Angle::exact(theta3.clone()))?.to_laurent()
}

/// Random rational in `(0,1)` with denominator at most `max_den`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rat {
    let d = rng.gen_range(2..=max_den);
    ratio(rng.gen_range(1..d), d)
}

/// Random `(θ,φ)` strictly inside `reg`.
pub fn random_pair_in<R: Rng>(rng: &mut R, reg: Region, max_den: i64) -> (Rat, Rat) {
    loop {
        let t = random_unit_rational(rng, max_den);
        let p = random_unit_rational(rng, max_den);
        if region(&t, &p) == Ok(reg) {
            return (t, p);
        }
    }
}
