//! Log-areas and quantum indices of oriented real rational curves.
//!
//! A curve is given by its parametrization
//! `t ↦ χ ∏ (t − αᵢ)^{nᵢ} ∏ (t² − 2t Re βⱼ + |βⱼ|²)^{n′ⱼ}` with the last real
//! point at infinity. The area of the upper half-plane is a pairwise sum:
//!
//! * real/real: `ω(nᵢ, n_{i′}) π²/2 · sgn(α_{i′} − αᵢ)` over finite `α`,
//! * real/complex: `ω(nᵢ, n′ⱼ) 2π · arctan((Re βⱼ − αᵢ)/Im βⱼ)`,
//! * complex/complex: `ω(n′ⱼ, n′_{j′}) 4π · arctan((Re β_{j′} − Re βⱼ)/(Im βⱼ + Im β_{j′}))`.
//!
//! The point at infinity takes part in none of them.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::lattice::{omega, LatticeVec};
use crate::{Error, Rat, Result};

/// Largest residual `|2k − round(2k)|` accepted for a quantum index.
pub const HALF_INTEGER_TOLERANCE: f64 = 1e-9;

/// Boundary arguments closer than this to `0` or `π` are rejected.
pub const ARGUMENT_TOLERANCE: f64 = 1e-9;

/// Complex number with rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    pub re: Rat,
    pub im: Rat,
}

impl Complex {
    pub fn new(re: Rat, im: Rat) -> Self {
        Complex { re, im }
    }

    /// Rational point `((1−s²)/(1+s²), 2s/(1+s²))` of the unit circle, of
    /// argument `2 arctan s`.
    pub fn unit_circle(s: &Rat) -> Self {
        let d = Rat::one() + s * s;
        Complex::new((Rat::one() - s * s) / &d, (s + s) / d)
    }

    fn to_f64(&self) -> (f64, f64) {
        (f(&self.re), f(&self.im))
    }
}

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parametrization data of an oriented real rational curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealParam {
    /// `(α, n)`; `None` stands for the point at infinity.
    pub real_points: Vec<(Option<Rat>, LatticeVec)>,
    pub complex_pairs: Vec<(Complex, LatticeVec)>,
    /// Signs of the constant `χ` on the standard basis of `M`.
    pub chi_signs: [i8; 2],
}

impl RealParam {
    pub fn new(real_points: Vec<(Option<Rat>, LatticeVec)>, complex_pairs: Vec<(Complex, LatticeVec)>) -> Self {
        RealParam {
            real_points,
            complex_pairs,
            chi_signs: [1, 1],
        }
    }

    /// Checks balancing, distinctness, `Im β > 0`, and `α_r = ∞`.
    pub fn validate(&self) -> Result<()> {
        match self.real_points.last() {
            Some((None, _)) => {}
            _ => return Err(Error::MissingInfinity),
        }
        let finite: Vec<&Rat> = self.real_points.iter().filter_map(|(a, _)| a.as_ref()).collect();
        if finite.len() + 1 != self.real_points.len() {
            return Err(Error::InvalidParam("several points at infinity".into()));
        }
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                if finite[i] == finite[j] {
                    return Err(Error::InvalidParam("repeated real point".into()));
                }
            }
        }
        for (i, (b, _)) in self.complex_pairs.iter().enumerate() {
            if !b.im.is_positive() {
                return Err(Error::InvalidParam("complex point off the upper half-plane".into()));
            }
            if self.complex_pairs[..i].iter().any(|(c, _)| c == b) {
                return Err(Error::InvalidParam("repeated complex point".into()));
            }
        }
        let total: LatticeVec = self.real_points.iter().map(|(_, n)| *n).sum::<LatticeVec>()
            + self.complex_pairs.iter().map(|(_, n)| n.scaled(2)).sum::<LatticeVec>();
        if total != LatticeVec::ZERO {
            return Err(Error::Unbalanced);
        }
        if self.real_points.iter().any(|(_, n)| n.is_zero()) || self.complex_pairs.iter().any(|(_, n)| n.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(())
    }

    fn finite_reals(&self) -> impl Iterator<Item = (&Rat, LatticeVec)> {
        self.real_points.iter().filter_map(|(a, n)| a.as_ref().map(|a| (a, *n)))
    }
}

/// `coeff · π · arctan(arg)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArctanTerm {
    pub coeff: i64,
    pub arg: Rat,
}

/// Logarithmic area of the upper half-plane.
#[derive(Clone, PartialEq, Debug)]
pub struct LogArea {
    /// Coefficient of `π²/2`.
    pub half_units: Rat,
    pub arctan_terms: Vec<ArctanTerm>,
    /// `A/π²`.
    pub value_over_pi2: f64,
}

impl LogArea {
    pub fn value(&self) -> f64 {
        self.value_over_pi2 * PI * PI
    }
}

pub fn log_area(p: &RealParam) -> Result<LogArea> {
    p.validate()?;
    let fin: Vec<(&Rat, LatticeVec)> = p.finite_reals().collect();
    let mut half = Rat::zero();
    for i in 0..fin.len() {
        for k in i + 1..fin.len() {
            let w = omega(fin[i].1, fin[k].1);
            let s = if fin[k].0 > fin[i].0 { 1 } else { -1 };
            half += crate::rat(w * s);
        }
    }
    let mut terms = Vec::new();
    for (a, n) in &fin {
        for (b, nb) in &p.complex_pairs {
            let w = omega(*n, *nb);
            if w != 0 {
                terms.push(ArctanTerm {
                    coeff: 2 * w,
                    arg: (&b.re - *a) / &b.im,
                });
            }
        }
    }
    let cp = &p.complex_pairs;
    for j in 0..cp.len() {
        for k in j + 1..cp.len() {
            let w = omega(cp[j].1, cp[k].1);
            if w != 0 {
                terms.push(ArctanTerm {
                    coeff: 4 * w,
                    arg: (&cp[k].0.re - &cp[j].0.re) / (&cp[j].0.im + &cp[k].0.im),
                });
            }
        }
    }
    let value = f(&half) / 2.0 + terms.iter().map(|t| t.coeff as f64 * libm::atan(f(&t.arg))).sum::<f64>() / PI;
    Ok(LogArea {
        half_units: half,
        arctan_terms: terms,
        value_over_pi2: value,
    })
}

/// `(ε, θ)` per complex pair: `εθ` is the argument of the boundary
/// coordinate `χ^{ι_{n′}ω}` at `β`, with `θ ∈ (0, π)`.
pub fn boundary_arguments(p: &RealParam) -> Result<Vec<(i8, f64)>> {
    p.validate()?;
    let mut out = Vec::with_capacity(p.complex_pairs.len());
    for (j, (b, nj)) in p.complex_pairs.iter().enumerate() {
        let (bx, by) = b.to_f64();
        let m = nj.iota_omega();
        let mut arg = 0.0;
        if (p.chi_signs[0] < 0 && m.x % 2 != 0) != (p.chi_signs[1] < 0 && m.y % 2 != 0) {
            arg += PI;
        }
        for (a, n) in p.finite_reals() {
            arg += omega(*nj, n) as f64 * libm::atan2(by, bx - f(a));
        }
        for (k, (c, nk)) in p.complex_pairs.iter().enumerate() {
            if k == j {
                continue;
            }
            let (cx, cy) = c.to_f64();
            let w = omega(*nj, *nk) as f64;
            arg += w * (libm::atan2(by - cy, bx - cx) + libm::atan2(by + cy, bx - cx));
        }
        let x = libm::remainder(arg, 2.0 * PI);
        let th = x.abs();
        if th < ARGUMENT_TOLERANCE || PI - th < ARGUMENT_TOLERANCE {
            return Err(Error::RealMomentDegenerate { pair: j });
        }
        out.push((if x > 0.0 { 1 } else { -1 }, th));
    }
    Ok(out)
}

/// A certified quantum index.
#[derive(Clone, PartialEq, Debug)]
pub struct QuantumIndex {
    /// Exact half-integer.
    pub k: Rat,
    pub area_over_pi2: f64,
    pub residual: f64,
}

/// `k` with `kπ² = A − π Σ εⱼ(2θⱼ − π)`.
pub fn quantum_index(p: &RealParam) -> Result<QuantumIndex> {
    let area = log_area(p)?;
    let args = boundary_arguments(p)?;
    let corr: f64 = args.iter().map(|&(e, t)| e as f64 * (2.0 * t - PI)).sum();
    let k = area.value_over_pi2 - corr / PI;
    let twice = libm::round(2.0 * k);
    let residual = (2.0 * k - twice).abs();
    if residual > HALF_INTEGER_TOLERANCE {
        return Err(Error::NotHalfInteger { residual });
    }
    Ok(QuantumIndex {
        k: Rat::new((twice as i64).into(), 2.into()),
        area_over_pi2: area.value_over_pi2,
        residual,
    })
}

/// Composes with the monomial map of `a`.
pub fn monomial_pushforward(p: &RealParam, a: &[[i64; 2]; 2]) -> Result<RealParam> {
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] == 0 {
        return Err(Error::SingularMatrix);
    }
    Ok(RealParam {
        real_points: p.real_points.iter().map(|(x, n)| (x.clone(), n.transform(a))).collect(),
        complex_pairs: p.complex_pairs.iter().map(|(b, n)| (b.clone(), n.transform(a))).collect(),
        chi_signs: p.chi_signs,
    })
}

/// Precomposes with `t ↦ −t`, which reverses the orientation of the upper
/// half-plane: `α ↦ −α`, `β ↦ −β̄`.
pub fn reflect(p: &RealParam) -> RealParam {
    RealParam {
        real_points: p.real_points.iter().map(|(x, n)| (x.as_ref().map(|a| -a), *n)).collect(),
        complex_pairs: p
            .complex_pairs
            .iter()
            .map(|(b, n)| (Complex::new(-&b.re, b.im.clone()), *n))
            .collect(),
        chi_signs: p.chi_signs,
    }
}

/// The line `t ↦ (t, t − 1)` up to the standard degree.
pub fn line() -> RealParam {
    RealParam::new(
        alloc::vec![
            (Some(crate::rat(0)), LatticeVec::new(-1, 0)),
            (Some(crate::rat(1)), LatticeVec::new(0, -1)),
            (None, LatticeVec::new(1, 1)),
        ],
        Vec::new(),
    )
}

/// `t ↦ (t − c, (t² + 1)/(t − c))`.
pub fn parabola(c: Rat) -> RealParam {
    RealParam::new(
        alloc::vec![(Some(c), LatticeVec::new(1, -1)), (None, LatticeVec::new(-1, -1))],
        alloc::vec![(Complex::new(Rat::zero(), Rat::one()), LatticeVec::new(0, 1))],
    )
}

/// Tangent ellipse with its pair for the first coordinate at `e^{iφ}` and
/// for the second at `e^{iθ}`, given as unit-circle parameters
/// (`φ = 2 arctan s_phi`, `θ = 2 arctan s_theta`).
pub fn tangent_ellipse(s_theta: &Rat, s_phi: &Rat) -> RealParam {
    RealParam::new(
        alloc::vec![(None, LatticeVec::new(-2, -2))],
        alloc::vec![
            (Complex::unit_circle(s_phi), LatticeVec::new(1, 0)),
            (Complex::unit_circle(s_theta), LatticeVec::new(0, 1)),
        ],
    )
}

/// Random curve with `1..=max_real` real points and `0..=max_pairs` pairs.
pub fn random_real_param<R: Rng>(rng: &mut R, max_real: usize, max_pairs: usize) -> RealParam {
    loop {
        let r = rng.gen_range(1..=max_real.max(1));
        let s = rng.gen_range(0..=max_pairs);
        let mut vec = || LatticeVec::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let ns: Vec<LatticeVec> = (0..r - 1).map(|_| vec()).collect();
        let cs: Vec<LatticeVec> = (0..s).map(|_| vec()).collect();
        let last = -(ns.iter().copied().sum::<LatticeVec>() + cs.iter().map(|n| n.scaled(2)).sum::<LatticeVec>());
        if last.is_zero() || ns.iter().chain(cs.iter()).any(|n| n.is_zero()) {
            continue;
        }
        let mut q = |lo: i64, hi: i64| Rat::new(rng.gen_range(lo * 997..=hi * 997).into(), 997.into());
        let mut reals: Vec<(Option<Rat>, LatticeVec)> = ns.into_iter().map(|n| (Some(q(-3, 3)), n)).collect();
        reals.push((None, last));
        let pairs = cs
            .into_iter()
            .map(|n| {
                let re = q(-3, 3);
                let im = q(0, 3) + Rat::new(1.into(), 10.into());
                (Complex::new(re, im), n)
            })
            .collect();
        let p = RealParam::new(reals, pairs);
        if p.validate().is_ok() && boundary_arguments(&p).is_ok() {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn line_area() {
        let a = log_area(&line()).unwrap();
        assert_eq!(a.half_units, rat(1));
        assert!(a.arctan_terms.is_empty());
        assert_eq!(quantum_index(&line()).unwrap().k, ratio(1, 2));
    }

    #[test]
    fn parabola_area() {
        for c in -3..=3 {
            let p = parabola(rat(c));
            let a = log_area(&p).unwrap().value();
            assert!((a + 2.0 * PI * libm::atan(c as f64)).abs() < 1e-10);
            let r = log_area(&reflect(&p)).unwrap().value();
            assert!((r - 2.0 * PI * libm::atan(c as f64)).abs() < 1e-10);
        }
        let q = quantum_index(&parabola(rat(0))).unwrap();
        assert_eq!(q.k, rat(0));
        assert_eq!(boundary_arguments(&parabola(rat(0))).unwrap()[0].1, PI / 2.0);
    }

    #[test]
    fn ellipse_area() {
        let (st, sp) = (ratio(1, 5), ratio(2, 3));
        let th = 2.0 * libm::atan(0.2);
        let ph = 2.0 * libm::atan(2.0 / 3.0);
        let a = log_area(&tangent_ellipse(&st, &sp)).unwrap().value();
        assert!((a - 2.0 * PI * (ph - th)).abs() < 1e-10);
        quantum_index(&tangent_ellipse(&st, &sp)).unwrap();
    }

    #[test]
    fn missing_infinity() {
        let mut p = line();
        p.real_points.rotate_left(1);
        assert_eq!(log_area(&p).unwrap_err(), Error::MissingInfinity);
    }

    #[test]
    fn pushforward() {
        let a = [[2, 1], [0, 1]];
        let p = monomial_pushforward(&line(), &a).unwrap();
        assert!((log_area(&p).unwrap().value_over_pi2 - 1.0).abs() < 1e-12);
        assert_eq!(monomial_pushforward(&line(), &[[1, 2], [2, 4]]).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn reflection_negates_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = random_real_param(&mut rng, 4, 3);
            let k = quantum_index(&p).unwrap().k;
            let mut r = reflect(&p);
            let mut found = false;
            for signs in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
                r.chi_signs = signs;
                if let Ok(q) = quantum_index(&r) {
                    found |= q.k == -k.clone();
                }
            }
            assert!(found);
        }
    }

    #[test]
    fn random_half_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random_real_param(&mut rng, 4, 3);
            let q = quantum_index(&p).unwrap();
            assert!(q.residual < HALF_INTEGER_TOLERANCE);
        }
    }

    proptest! {
        #[test]
        fn reflection_negates(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_real_param(&mut rng, 4, 3);
            let a = log_area(&p).unwrap().value_over_pi2;
            let b = log_area(&reflect(&p)).unwrap().value_over_pi2;
            prop_assert!((a + b).abs() < 1e-10);
        }

        #[test]
        fn functorial(seed in any::<u64>(), m in prop::array::uniform4(-3i64..=3)) {
            let a = [[m[0], m[1]], [m[2], m[3]]];
            let det = m[0] * m[3] - m[1] * m[2];
            prop_assume!(det != 0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_real_param(&mut rng, 4, 3);
            let x = log_area(&p).unwrap().value_over_pi2;
            let y = log_area(&monomial_pushforward(&p, &a).unwrap()).unwrap().value_over_pi2;
            prop_assert!((y - det as f64 * x).abs() <= 1e-10 * (1.0 + (det as f64 * x).abs()));
        }
    }
}
