//! Laurent polynomials in `q` with rational exponents and rational coefficients.
//!
//! The exponent type is generic: [`QLaurent`] uses exact rationals, while
//! `Laurent<AffineExp>` carries exponents that are affine in a few formal
//! parameters (used to keep moment arguments symbolic until substitution).
//!
//! Brackets follow the usual shorthand `⟨a⟩₊ = q^a + q^-a`, `⟨a⟩₋ = q^a - q^-a`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Rat, Result};

/// Exponent domain of a Laurent polynomial.
pub trait Exponent: Clone + Ord + fmt::Debug {
    fn zero_exp() -> Self;
    fn from_rat(r: Rat) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, k: &Rat) -> Self;
    fn write_exp(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

impl Exponent for Rat {
    fn zero_exp() -> Self {
        Zero::zero()
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, k: &Rat) -> Self {
        self * k
    }
    fn write_exp(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Exponent `c + Σ aᵢ tᵢ`, affine in formal parameters `t₀, t₁, …`.
///
/// Trailing zero coefficients are trimmed so equality is structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct AffineExp {
    constant: Rat,
    coeffs: Vec<Rat>,
}

impl AffineExp {
    pub fn constant(c: Rat) -> Self {
        AffineExp {
            constant: c,
            coeffs: Vec::new(),
        }
    }

    /// The formal parameter `tᵢ`.
    pub fn param(i: usize) -> Self {
        let mut coeffs = alloc::vec![Rat::zero(); i + 1];
        coeffs[i] = Rat::one();
        AffineExp {
            constant: Rat::zero(),
            coeffs,
        }
    }

    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value after substituting `tᵢ := values[i]`. Missing values count as 0.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut v = self.constant.clone();
        for (a, t) in self.coeffs.iter().zip(values) {
            v += a * t;
        }
        v
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }
}

impl Exponent for AffineExp {
    fn zero_exp() -> Self {
        AffineExp::constant(Rat::zero())
    }
    fn from_rat(r: Rat) -> Self {
        AffineExp::constant(r)
    }
    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rat::zero);
            coeffs.push(a + b);
        }
        AffineExp {
            constant: &self.constant + &other.constant,
            coeffs,
        }
        .trimmed()
    }
    fn negated(&self) -> Self {
        AffineExp {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn scaled(&self, k: &Rat) -> Self {
        AffineExp {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
        .trimmed()
    }
    fn write_exp(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.constant.write_exp(f)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "+{}/{}*t{}", c.numer(), c.denom(), i)?;
            }
        }
        Ok(())
    }
}

/// Laurent polynomial: finite map exponent → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<E: Exponent> {
    terms: BTreeMap<E, Rat>,
}

/// Laurent polynomial with rational exponents.
pub type QLaurent = Laurent<Rat>;

impl<E: Exponent> Default for Laurent<E> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<E: Exponent> Laurent<E> {
    pub fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, E::zero_exp())
    }

    /// `c·q^e`
    pub fn monomial(c: Rat, e: E) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(crate::rat(n))
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

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&E, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &E) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, e: E, c: Rat) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(e, c);
                return;
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: &E) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.plus(e), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of coefficients, the specialization `q = 1`.
    pub fn eval_at_one(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |a, c| a + c)
    }

    /// The substitution `q ↦ q⁻¹`.
    pub fn invert_q(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.negated(), c.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_q()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `⟨a⟩₊ = q^a + q^-a`
    pub fn bracket_plus(a: E) -> Self {
        let mut p = Self::monomial(Rat::one(), a.negated());
        p.add_term(a, Rat::one());
        p
    }

    /// `⟨a⟩₋ = q^a - q^-a`
    pub fn bracket_minus(a: E) -> Self {
        let mut p = Self::monomial(-Rat::one(), a.negated());
        p.add_term(a, Rat::one());
        p
    }

    pub fn map_exponents<F: Exponent>(&self, mut f: impl FnMut(&E) -> F) -> Laurent<F> {
        let mut out = Laurent::zero();
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }
}

impl QLaurent {
    /// `[a]_q = ⟨a/2⟩₋ / ⟨1/2⟩₋`, the symmetric polynomial with `a` terms.
    pub fn q_analog(a: u64) -> Self {
        assert!(a >= 1, "q-analog needs a positive integer");
        let mut p = Self::zero();
        let top = crate::ratio(a as i64 - 1, 2);
        for k in 0..a {
            p.add_term(&top - crate::rat(k as i64), Rat::one());
        }
        p
    }

    pub fn min_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    pub fn max_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next_back()
    }

    /// Exact quotient `self / b`.
    ///
    /// All exponents lie in `(1/2D)ℤ` for `D` the lcm of exponent denominators,
    /// so this is univariate Laurent division in `u = q^(1/2D)`. The division is
    /// run sparsely from the top term; the quotient exponents are bounded
    /// below by `min(self) - min(b)`, which makes the loop finite.
    pub fn div_exact(&self, b: &QLaurent) -> Result<QLaurent> {
        let (bmax, blead) = match b.terms.iter().next_back() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let bmin = b.min_exponent().cloned().unwrap_or_else(Rat::zero);
        let lowest = self.min_exponent().cloned().unwrap_or_else(Rat::zero) - bmin;
        let mut rem = self.terms.clone();
        let mut quot = Self::zero();
        while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe = &e - &bmax;
            if qe < lowest {
                return Err(Error::NotDivisible);
            }
            let qc = &c / &blead;
            for (be, bc) in &b.terms {
                let key = be + &qe;
                let delta = -(bc * &qc);
                let remove = match rem.get_mut(&key) {
                    Some(v) => {
                        *v += delta;
                        v.is_zero()
                    }
                    None => {
                        rem.insert(key.clone(), delta);
                        false
                    }
                };
                if remove {
                    rem.remove(&key);
                }
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Serialized form: ascending list of
    /// `(exp numerator, exp denominator, coef numerator, coef denominator)`.
    pub fn to_terms(&self) -> Vec<(BigInt, BigInt, BigInt, BigInt)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                (
                    e.numer().clone(),
                    e.denom().clone(),
                    c.numer().clone(),
                    c.denom().clone(),
                )
            })
            .collect()
    }

    pub fn from_terms(terms: &[(BigInt, BigInt, BigInt, BigInt)]) -> Result<Self> {
        let mut p = Self::zero();
        for (en, ed, cn, cd) in terms {
            if ed.is_zero() || cd.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            p.add_term(
                Rat::new(en.clone(), ed.clone()),
                Rat::new(cn.clone(), cd.clone()),
            );
        }
        Ok(p)
    }

    /// Embeds into the symbolic-exponent ring.
    pub fn to_affine(&self) -> Laurent<AffineExp> {
        self.map_exponents(|e| AffineExp::constant(e.clone()))
    }

    /// Value at a positive real `q`, in floating point.
    pub fn eval_f64(&self, q: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * libm::pow(q, e.to_f64().unwrap_or(f64::NAN)))
            .sum()
    }
}

impl Laurent<AffineExp> {
    /// Substitutes numeric values for the formal parameters.
    pub fn substitute(&self, values: &[Rat]) -> QLaurent {
        self.map_exponents(|e| e.eval(values))
    }
}

impl<E: Exponent> fmt::Display for Laurent<E> {
    /// `c*q^(n/d)` terms joined by ` + `, ascending exponents; `0` if empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*q^(", c)?;
            e.write_exp(f)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl<E: Exponent> fmt::Debug for Laurent<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl QLaurent {
    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut p = Self::zero();
        if s == "0" {
            return Ok(p);
        }
        let bad = || Error::InvalidInput(String::from("malformed polynomial text"));
        for term in s.split(" + ") {
            let (c, rest) = term.split_once("*q^(").ok_or_else(bad)?;
            let e = rest.strip_suffix(')').ok_or_else(bad)?;
            let c: Rat = c.trim().parse().map_err(|_| bad())?;
            let e: Rat = e.trim().parse().map_err(|_| bad())?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<E: Exponent> $tr<Laurent<E>> for Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: Laurent<E>) -> Laurent<E> {
                (&self).$m(&rhs)
            }
        }
        impl<E: Exponent> $tr<&Laurent<E>> for Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: &Laurent<E>) -> Laurent<E> {
                (&self).$m(rhs)
            }
        }
        impl<E: Exponent> $tr<Laurent<E>> for &Laurent<E> {
            type Output = Laurent<E>;
            fn $m(self, rhs: Laurent<E>) -> Laurent<E> {
                self.$m(&rhs)
            }
        }
    };
}

impl<E: Exponent> Add<&Laurent<E>> for &Laurent<E> {
    type Output = Laurent<E>;
    fn add(self, rhs: &Laurent<E>) -> Laurent<E> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<E: Exponent> Sub<&Laurent<E>> for &Laurent<E> {
    type Output = Laurent<E>;
    fn sub(self, rhs: &Laurent<E>) -> Laurent<E> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<E: Exponent> Mul<&Laurent<E>> for &Laurent<E> {
    type Output = Laurent<E>;
    fn mul(self, rhs: &Laurent<E>) -> Laurent<E> {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.plus(e2), c1 * c2);
            }
        }
        out
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<E: Exponent> Neg for Laurent<E> {
    type Output = Laurent<E>;
    fn neg(self) -> Laurent<E> {
        self.scale(&-Rat::one())
    }
}

impl<E: Exponent> Neg for &Laurent<E> {
    type Output = Laurent<E>;
    fn neg(self) -> Laurent<E> {
        self.scale(&-Rat::one())
    }
}

impl<E: Exponent> core::iter::Sum for Laurent<E> {
    fn sum<I: Iterator<Item = Laurent<E>>>(iter: I) -> Self {
        iter.fold(Laurent::zero(), |a, b| &a + &b)
    }
}

/// `num / ⟨1⟩₋^den_pow`, a quotient kept unevaluated.
#[derive(Clone, Debug)]
pub struct Frac<E: Exponent> {
    pub num: Laurent<E>,
    pub den_pow: u32,
}

pub type QFrac = Frac<Rat>;

fn minus_one_pow<E: Exponent>(k: u32) -> Laurent<E> {
    Laurent::bracket_minus(E::from_rat(Rat::one())).pow(k)
}

impl<E: Exponent> Frac<E> {
    pub fn new(num: Laurent<E>, den_pow: u32) -> Self {
        Frac { num, den_pow }
    }

    pub fn zero() -> Self {
        Frac::new(Laurent::zero(), 0)
    }

    pub fn one() -> Self {
        Frac::new(Laurent::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Same value written over `⟨1⟩₋^k`, `k ≥ den_pow`.
    pub fn raised(&self, k: u32) -> Laurent<E> {
        assert!(k >= self.den_pow);
        &self.num * &minus_one_pow::<E>(k - self.den_pow)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.den_pow.max(other.den_pow);
        Frac::new(&self.raised(k) + &other.raised(k), k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Frac::new(&self.num * &other.num, self.den_pow + other.den_pow)
    }

    pub fn mul_laurent(&self, p: &Laurent<E>) -> Self {
        Frac::new(&self.num * p, self.den_pow)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Frac::new(self.num.scale(k), self.den_pow)
    }

    /// Exact equality as rational functions.
    pub fn same_value(&self, other: &Self) -> bool {
        let k = self.den_pow.max(other.den_pow);
        self.raised(k) == other.raised(k)
    }
}

impl Frac<AffineExp> {
    pub fn substitute(&self, values: &[Rat]) -> QFrac {
        Frac::new(self.num.substitute(values), self.den_pow)
    }
}

impl QFrac {
    /// Clears the denominator, failing if it does not divide.
    pub fn to_laurent(&self) -> Result<QLaurent> {
        self.num.div_exact(&minus_one_pow::<Rat>(self.den_pow))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn q(e: Rat) -> QLaurent {
        QLaurent::monomial(Rat::one(), e)
    }

    fn bm(e: Rat) -> QLaurent {
        QLaurent::bracket_minus(e)
    }

    fn bp(e: Rat) -> QLaurent {
        QLaurent::bracket_plus(e)
    }

    #[test]
    fn add_examples() {
        assert!((q(rat(1)) + q(rat(1)).scale(&rat(-1))).is_zero());
        let a = q(ratio(1, 2)) + q(ratio(-1, 2));
        let s = a + q(ratio(1, 2));
        assert_eq!(s.coeff(&ratio(1, 2)), rat(2));
        assert_eq!(s.coeff(&ratio(-1, 2)), rat(1));
        assert_eq!(bm(rat(1)) + bp(rat(1)), q(rat(1)).scale(&rat(2)));
    }

    #[test]
    fn mul_examples() {
        let p = bm(ratio(1, 3)) + QLaurent::from_int(5);
        assert_eq!(QLaurent::one() * &p, p);
        assert_eq!(bm(ratio(1, 2)) * bp(ratio(1, 2)), bm(rat(1)));
        let two = QLaurent::q_analog(2);
        let expect = q(rat(1)) + QLaurent::from_int(2) + q(rat(-1));
        assert_eq!(&two * &two, expect);
    }

    #[test]
    fn div_examples() {
        let three = bm(ratio(3, 2)).div_exact(&bm(ratio(1, 2))).unwrap();
        assert_eq!(three, q(rat(1)) + QLaurent::one() + q(rat(-1)));
        assert_eq!(three, QLaurent::q_analog(3));
        let p = bm(ratio(2, 7)) + q(ratio(5, 3));
        assert_eq!(p.div_exact(&p).unwrap(), QLaurent::one());
        assert_eq!(bm(rat(1)).div_exact(&bp(ratio(1, 2))).unwrap(), bm(ratio(1, 2)));
    }

    #[test]
    fn div_rejects() {
        assert_eq!(bm(ratio(1, 2)).div_exact(&bm(rat(1))), Err(Error::NotDivisible));
        assert_eq!(QLaurent::one().div_exact(&QLaurent::zero()), Err(Error::DivisionByZero));
        // incommensurable exponents
        let b = QLaurent::one() + q(ratio(1, 7));
        assert_eq!(q(ratio(1, 3)).div_exact(&b), Err(Error::NotDivisible));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bp(rat(0)), QLaurent::from_int(2));
        assert!(bm(rat(0)).is_zero());
        assert_eq!(bm(rat(1)), q(rat(1)) - q(rat(-1)));
    }

    #[test]
    fn q_analog_examples() {
        assert_eq!(QLaurent::q_analog(1), QLaurent::one());
        assert_eq!(QLaurent::q_analog(2), q(ratio(1, 2)) + q(ratio(-1, 2)));
        assert_eq!(QLaurent::q_analog(3), q(rat(1)) + QLaurent::one() + q(rat(-1)));
        for a in 1..=10u64 {
            let p = QLaurent::q_analog(a);
            assert_eq!(p.len() as u64, a);
            assert!(p.is_symmetric());
            assert_eq!(p.eval_at_one(), rat(a as i64));
            let def = bm(ratio(a as i64, 2)).div_exact(&bm(ratio(1, 2))).unwrap();
            assert_eq!(p, def);
        }
    }

    #[test]
    fn eval_at_one_examples() {
        assert_eq!(QLaurent::zero().eval_at_one(), rat(0));
        assert_eq!(bp(ratio(3, 11)).eval_at_one(), rat(2));
    }

    #[test]
    fn text_round_trip() {
        let p = bm(ratio(1, 2)).scale(&ratio(3, 4)) + QLaurent::from_int(7);
        let s = p.to_string();
        assert_eq!(s, "-3/4*q^(-1/2) + 7*q^(0/1) + 3/4*q^(1/2)");
        assert_eq!(QLaurent::parse(&s).unwrap(), p);
        assert_eq!(QLaurent::parse("0").unwrap(), QLaurent::zero());
        assert_eq!(QLaurent::from_terms(&p.to_terms()).unwrap(), p);
    }

    #[test]
    fn affine_substitution() {
        let t = AffineExp::param(0);
        let two_t_minus_one = t.scaled(&rat(2)).plus(&AffineExp::constant(rat(-1)));
        let p = Laurent::<AffineExp>::bracket_plus(two_t_minus_one);
        assert_eq!(p.substitute(&[ratio(1, 2)]), QLaurent::from_int(2));
        assert_eq!(p.substitute(&[rat(1)]), bp(rat(1)));
        // t and 1 - t give the same bracket
        let other = Laurent::<AffineExp>::bracket_plus(
            AffineExp::constant(rat(1)).minus(&t.scaled(&rat(2))),
        );
        assert_eq!(p, other);
    }

    #[test]
    fn frac_clearing() {
        let f = QFrac::new(bm(rat(2)), 1);
        assert_eq!(f.to_laurent().unwrap(), bp(rat(1)));
        let g = QFrac::new(bm(ratio(1, 2)), 1);
        assert_eq!(g.to_laurent(), Err(Error::NotDivisible));
        let s = f.add(&g);
        assert!(s.same_value(&QFrac::new(bm(rat(2)) + bm(ratio(1, 2)), 1)));
    }

    fn arb_laurent() -> impl Strategy<Value = QLaurent> {
        prop::collection::vec((-6i64..=6, 1i64..=3, -5i64..=5), 0..5).prop_map(|v| {
            let mut p = QLaurent::zero();
            for (n, d, c) in v {
                p.add_term(ratio(n, d), rat(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn div_inverts_mul(a in arb_laurent(), b in arb_laurent()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        }

        #[test]
        fn bracket_addition_formula(a in 1i64..12, b in 1i64..12) {
            let lhs = bm(ratio(a, 2)) * bp(ratio(b, 2)) + bm(ratio(b, 2)) * bp(ratio(a, 2));
            prop_assert_eq!(lhs, bm(ratio(a + b, 2)).scale(&rat(2)));
        }

        #[test]
        fn q_analog_at_one(a in 1u64..40) {
            prop_assert_eq!(QLaurent::q_analog(a).eval_at_one(), rat(a as i64));
        }
    }
}
