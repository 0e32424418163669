//! Lattice vectors, degrees and the splitting `Δ ↦ Δ(s)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::{Error, Result};

/// Element of the lattice `N = ℤ²`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LatticeVec {
    pub x: i64,
    pub y: i64,
}

impl LatticeVec {
    pub const ZERO: LatticeVec = LatticeVec { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVec { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// `ι_v ω = ω(v, ·)` written as a vector of `M`: `(-y, x)`.
    pub fn iota_omega(&self) -> LatticeVec {
        LatticeVec::new(-self.y, self.x)
    }

    /// Divides out the lattice length.
    pub fn primitive(&self) -> Result<LatticeVec> {
        let l = lattice_length(*self)? as i64;
        Ok(LatticeVec::new(self.x / l, self.y / l))
    }

    pub fn scaled(&self, k: i64) -> LatticeVec {
        LatticeVec::new(self.x * k, self.y * k)
    }

    /// Matrix action `A·v` with `A = [[a, b], [c, d]]`.
    pub fn transform(&self, a: &[[i64; 2]; 2]) -> LatticeVec {
        LatticeVec::new(
            a[0][0] * self.x + a[0][1] * self.y,
            a[1][0] * self.x + a[1][1] * self.y,
        )
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticeVec {
    type Output = LatticeVec;
    fn add(self, o: LatticeVec) -> LatticeVec {
        LatticeVec::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVec {
    type Output = LatticeVec;
    fn sub(self, o: LatticeVec) -> LatticeVec {
        LatticeVec::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        LatticeVec::new(-self.x, -self.y)
    }
}

impl Mul<LatticeVec> for i64 {
    type Output = LatticeVec;
    fn mul(self, v: LatticeVec) -> LatticeVec {
        v.scaled(self)
    }
}

impl core::iter::Sum for LatticeVec {
    fn sum<I: Iterator<Item = LatticeVec>>(iter: I) -> Self {
        iter.fold(LatticeVec::ZERO, |a, b| a + b)
    }
}

/// `ω(u, v) = u.x·v.y − u.y·v.x`.
pub fn omega(u: LatticeVec, v: LatticeVec) -> i64 {
    u.x * v.y - u.y * v.x
}

/// `gcd(|x|, |y|)`.
pub fn lattice_length(v: LatticeVec) -> Result<u64> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.x.unsigned_abs().gcd(&v.y.unsigned_abs()))
}

/// A side of the polygon: a primitive outward direction with the indices of
/// the degree vectors pointing that way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Side {
    pub direction: LatticeVec,
    pub members: Vec<usize>,
    /// Lattice length of the side, the sum of lattice lengths of members.
    pub length: u64,
}

/// Multiset of nonzero lattice vectors summing to zero. End labels follow
/// list order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Degree {
    vectors: Vec<LatticeVec>,
    sides: Vec<Side>,
}

impl Degree {
    pub fn new(vectors: Vec<LatticeVec>) -> Result<Self> {
        if vectors.iter().any(|v| v.is_zero()) {
            return Err(Error::ZeroVector);
        }
        if vectors.iter().copied().sum::<LatticeVec>() != LatticeVec::ZERO {
            return Err(Error::Unbalanced);
        }
        let mut sides: Vec<Side> = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let dir = v.primitive()?;
            let len = lattice_length(*v)?;
            match sides.iter_mut().find(|s| s.direction == dir) {
                Some(s) => {
                    s.members.push(i);
                    s.length += len;
                }
                None => sides.push(Side {
                    direction: dir,
                    members: alloc::vec![i],
                    length: len,
                }),
            }
        }
        Ok(Degree { vectors, sides })
    }

    /// `Δ_d = {(−1,0)^d, (0,−1)^d, (1,1)^d}`.
    pub fn standard(d: u32) -> Self {
        assert!(d >= 1, "degree must be positive");
        let mut v = Vec::new();
        for n in [LatticeVec::new(-1, 0), LatticeVec::new(0, -1), LatticeVec::new(1, 1)] {
            v.extend(core::iter::repeat(n).take(d as usize));
        }
        Degree::new(v).expect("standard degree is balanced")
    }

    pub fn vectors(&self) -> &[LatticeVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Sides in order of first occurrence.
    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn is_primitive(&self) -> bool {
        self.vectors.iter().all(|v| lattice_length(*v) == Ok(1))
    }

    /// Indices of ends of even lattice length.
    pub fn even_ends(&self) -> Vec<usize> {
        (0..self.vectors.len())
            .filter(|&i| lattice_length(self.vectors[i]).unwrap_or(1) % 2 == 0)
            .collect()
    }
}

/// Numbers of complex pairs per side.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitSpec {
    pub s: Vec<u64>,
}

impl SplitSpec {
    pub fn new(s: Vec<u64>) -> Self {
        SplitSpec { s }
    }

    pub fn zero(sides: usize) -> Self {
        SplitSpec {
            s: alloc::vec![0; sides],
        }
    }

    /// `|s| = Σ sᵢ`.
    pub fn total(&self) -> u64 {
        self.s.iter().sum()
    }

    /// `rᵢ = l(Eᵢ) − 2sᵢ`, checking the constraints against `delta`.
    pub fn remainders(&self, delta: &Degree) -> Result<Vec<u64>> {
        let sides = delta.sides();
        if self.s.len() != sides.len() {
            return Err(Error::InvalidSplit(format!(
                "{} entries for {} sides",
                self.s.len(),
                sides.len()
            )));
        }
        let mut r = Vec::with_capacity(sides.len());
        for (i, (side, &si)) in sides.iter().zip(&self.s).enumerate() {
            if 2 * si > side.length {
                return Err(Error::InsufficientMultiplicity {
                    side: i,
                    needed: 2 * si as usize,
                    available: side.length as usize,
                });
            }
            r.push(side.length - 2 * si);
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::InvalidSplit("no real boundary point is left".into()));
        }
        Ok(r)
    }
}

/// Builds `Δ(s)`: on side `i`, `2sᵢ` copies of the primitive vector are
/// removed and `sᵢ` copies of its double are appended at the end.
pub fn make_delta_s(delta: &Degree, s: &SplitSpec) -> Result<Degree> {
    if s.s.len() != delta.sides().len() {
        return Err(Error::InvalidSplit(format!(
            "{} entries for {} sides",
            s.s.len(),
            delta.sides().len()
        )));
    }
    let mut drop = alloc::vec![false; delta.len()];
    let mut appended = Vec::new();
    for (i, (side, &si)) in delta.sides().iter().zip(&s.s).enumerate() {
        let need = 2 * si as usize;
        let prims: Vec<usize> = side
            .members
            .iter()
            .copied()
            .filter(|&k| delta.vectors()[k] == side.direction)
            .collect();
        if prims.len() < need {
            return Err(Error::InsufficientMultiplicity {
                side: i,
                needed: need,
                available: prims.len(),
            });
        }
        // drop the last copies so that surviving labels keep their order
        for &k in prims.iter().rev().take(need) {
            drop[k] = true;
        }
        appended.extend(core::iter::repeat(side.direction.scaled(2)).take(si as usize));
    }
    let mut out: Vec<LatticeVec> = delta
        .vectors()
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(v, _)| *v)
        .collect();
    out.extend(appended);
    Degree::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> LatticeVec {
        LatticeVec::new(x, y)
    }

    fn sorted(mut a: Vec<LatticeVec>) -> Vec<LatticeVec> {
        a.sort();
        a
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(v(1, 0), v(0, 1)), 1);
        assert_eq!(omega(v(3, -7), v(3, -7)), 0);
        assert_eq!(omega(v(-1, 0), v(0, -1)), 1);
    }

    #[test]
    fn length_examples() {
        assert_eq!(lattice_length(v(2, 4)), Ok(2));
        assert_eq!(lattice_length(v(1, 1)), Ok(1));
        assert_eq!(lattice_length(v(0, -6)), Ok(6));
        assert_eq!(lattice_length(v(0, 0)), Err(Error::ZeroVector));
    }

    #[test]
    fn standard_degrees() {
        for d in 1..=3 {
            let deg = Degree::standard(d);
            assert_eq!(deg.len(), 3 * d as usize);
            assert_eq!(deg.vectors().iter().copied().sum::<LatticeVec>(), LatticeVec::ZERO);
            assert_eq!(deg.sides().len(), 3);
            assert!(deg.sides().iter().all(|s| s.length == d as u64));
        }
    }

    #[test]
    fn delta_s_examples() {
        let d1 = Degree::standard(1);
        assert_eq!(make_delta_s(&d1, &SplitSpec::zero(3)).unwrap(), d1);

        let par = Degree::new(vec![v(-1, 1), v(1, 1), v(0, -1), v(0, -1)]).unwrap();
        let out = make_delta_s(&par, &SplitSpec::new(vec![0, 0, 1])).unwrap();
        assert_eq!(out.vectors(), &[v(-1, 1), v(1, 1), v(0, -2)]);

        let d2 = Degree::standard(2);
        let out = make_delta_s(&d2, &SplitSpec::new(vec![1, 0, 0])).unwrap();
        assert_eq!(
            sorted(out.vectors().to_vec()),
            sorted(vec![v(-2, 0), v(0, -1), v(0, -1), v(1, 1), v(1, 1)])
        );
    }

    #[test]
    fn delta_s_errors() {
        let d1 = Degree::standard(1);
        assert!(matches!(
            make_delta_s(&d1, &SplitSpec::new(vec![1, 0, 0])),
            Err(Error::InsufficientMultiplicity { side: 0, .. })
        ));
        assert!(matches!(
            make_delta_s(&d1, &SplitSpec::new(vec![0, 0])),
            Err(Error::InvalidSplit(_))
        ));
    }

    #[test]
    fn remainders() {
        let d2 = Degree::standard(2);
        assert_eq!(SplitSpec::new(vec![1, 0, 0]).remainders(&d2).unwrap(), vec![0, 2, 2]);
        let par = Degree::new(vec![v(0, 1), v(0, 1), v(1, -1), v(-1, -1)]).unwrap();
        assert!(SplitSpec::new(vec![1, 0, 0]).remainders(&par).is_ok());
    }

    #[test]
    fn unbalanced_rejected() {
        assert_eq!(Degree::new(vec![v(1, 0), v(0, 1)]), Err(Error::Unbalanced));
        assert_eq!(Degree::new(vec![v(0, 0)]), Err(Error::ZeroVector));
    }

    fn arb_vec() -> impl Strategy<Value = LatticeVec> {
        (-50i64..50, -50i64..50).prop_map(|(x, y)| v(x, y))
    }

    proptest! {
        #[test]
        fn omega_bilinear_antisymmetric(a in arb_vec(), b in arb_vec(), c in arb_vec(), k in -5i64..5) {
            prop_assert_eq!(omega(a, b), -omega(b, a));
            prop_assert_eq!(omega(a + b, c), omega(a, c) + omega(b, c));
            prop_assert_eq!(omega(k * a, c), k * omega(a, c));
        }

        #[test]
        fn length_scales(a in arb_vec()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(lattice_length(2 * a).unwrap(), 2 * lattice_length(a).unwrap());
        }

        #[test]
        fn split_balanced(d in 1u32..5, s0 in 0u64..3, s1 in 0u64..3, s2 in 0u64..3) {
            let deg = Degree::standard(d);
            let spec = SplitSpec::new(vec![s0, s1, s2]);
            if let Ok(out) = make_delta_s(&deg, &spec) {
                prop_assert_eq!(out.vectors().iter().copied().sum::<LatticeVec>(), LatticeVec::ZERO);
                prop_assert_eq!(out.len() as u64, 3 * d as u64 - spec.total());
            } else {
                prop_assert!(2 * s0.max(s1).max(s2) > d as u64);
            }
        }
    }
}
