//! Curves of a given degree with prescribed boundary moments.
//!
//! Each trivalent type is a cone of the moduli space on which the evaluation
//! map `(lengths, root position) ↦ (μ₂, …, μ_m)` is linear. A type contributes
//! when the unique preimage has strictly positive lengths.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{omega, Degree};
use crate::linalg;
use crate::tropcurve::{CombType, Point, TropCurve};
use crate::{Error, QLaurent, Rat, Result};

/// All trivalent trees with leaves `0..m`, each once.
///
/// Built by inserting leaves one at a time into an edge of the previous tree,
/// which yields `(2m−5)!!` types. Duplicates are filtered by split key.
pub fn enumerate_comb_types(m: usize) -> Vec<CombType> {
    assert!(m >= 3, "need at least three ends");
    let mut level: Vec<Vec<(usize, usize)>> = alloc::vec![alloc::vec![(0, m), (1, m), (2, m)]];
    for leaf in 3..m {
        let node = m + leaf - 2;
        let mut next = Vec::with_capacity(level.len() * (2 * leaf - 3));
        for edges in &level {
            for k in 0..edges.len() {
                let mut e = edges.clone();
                let (a, b) = e[k];
                e[k] = (a, node);
                e.push((b, node));
                e.push((leaf, node));
                next.push(e);
            }
        }
        level = next;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(level.len());
    for edges in level {
        let ct = CombType::from_edges(m, &edges).expect("insertion keeps a trivalent tree");
        if seen.insert(ct.split_key()) {
            out.push(ct);
        }
    }
    out
}

/// A solved cone: the curve and `|det|` of its evaluation system.
#[derive(Clone, Debug)]
pub struct Solution {
    pub curve: TropCurve,
    pub det: BigInt,
}

/// Solves the evaluation system on one type.
///
/// `mu` holds the moments of ends `1..m` (the moment of end 0 is then forced).
/// Returns `None` if the type has a flat vertex or a negative length.
pub fn solve_cone(comb: &CombType, degree: &Degree, mu: &[Rat]) -> Result<Option<Solution>> {
    let m = degree.len();
    if mu.len() + 1 != m || comb.leaves() != m {
        return Err(Error::InvalidInput("moment count must be m-1".into()));
    }
    let shape = TropCurve::unmetrized(comb.clone(), degree.vectors().to_vec())?;
    if shape.has_flat_vertex() {
        return Ok(None);
    }
    let bounded = shape.bounded_edges();
    let nb = bounded.len();
    let mut col = alloc::vec![usize::MAX; comb.node_count()];
    for (i, &e) in bounded.iter().enumerate() {
        col[e] = i;
    }
    let int = |k: i64| Rat::from_integer(k.into());
    let mut a = Vec::with_capacity(m - 1);
    for end in 1..m {
        let n = degree.vectors()[end];
        let mut row = alloc::vec![Rat::zero(); nb + 2];
        row[nb] = int(-n.y);
        row[nb + 1] = int(n.x);
        let mut v = shape.parent(end).expect("leaf has a parent");
        while let Some(p) = shape.parent(v) {
            row[col[v]] = int(omega(n, shape.slope(v)));
            v = p;
        }
        a.push(row);
    }
    let (x, det) = linalg::solve(a, mu.to_vec()).map_err(|_| Error::DegenerateConfig { topology: 0 })?;
    let lengths = &x[..nb];
    if lengths.iter().any(|l| l.is_zero()) {
        return Err(Error::DegenerateConfig { topology: 0 });
    }
    if lengths.iter().any(|l| l.is_negative()) {
        return Ok(None);
    }
    let root = Point::new(x[nb].clone(), x[nb + 1].clone());
    let curve = TropCurve::new(comb.clone(), degree.vectors().to_vec(), lengths, root)?;
    debug_assert!(det.is_integer());
    Ok(Some(Solution {
        curve,
        det: det.abs().to_integer(),
    }))
}

fn tag(e: Error, topology: usize) -> Error {
    match e {
        Error::DegenerateConfig { .. } => Error::DegenerateConfig { topology },
        other => other,
    }
}

/// Every solution over all trivalent types of `degree`.
pub fn solutions(degree: &Degree, mu: &[Rat]) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    for (i, comb) in enumerate_comb_types(degree.len()).iter().enumerate() {
        if let Some(s) = solve_cone(comb, degree, mu).map_err(|e| tag(e, i))? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Solutions on a slice of types; `offset` is the index of `combs[0]`.
pub fn solutions_in(combs: &[CombType], offset: usize, degree: &Degree, mu: &[Rat]) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    for (i, comb) in combs.iter().enumerate() {
        if let Some(s) = solve_cone(comb, degree, mu).map_err(|e| tag(e, offset + i))? {
            out.push(s);
        }
    }
    Ok(out)
}

/// `Σ_Γ m^q_Γ` over the solutions.
pub fn count_refined(degree: &Degree, mu: &[Rat]) -> Result<QLaurent> {
    sum_refined(&solutions(degree, mu)?)
}

pub fn sum_refined(sols: &[Solution]) -> Result<QLaurent> {
    let mut acc = QLaurent::zero();
    for s in sols {
        acc = &acc + &s.curve.refined_mult()?;
    }
    Ok(acc)
}

/// Moments of ends `1..m` with 64-bit-plus numerators, resampled until every
/// type solves without degeneracy.
pub fn random_generic_moments(degree: &Degree, seed: u64) -> Result<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_generic_moments_with(degree, &mut rng)
}

pub const GENERICITY_ATTEMPTS: usize = 16;

pub fn random_generic_moments_with<R: Rng>(degree: &Degree, rng: &mut R) -> Result<Vec<Rat>> {
    let combs = enumerate_comb_types(degree.len());
    for _ in 0..GENERICITY_ATTEMPTS {
        let mu: Vec<Rat> = (1..degree.len()).map(|_| random_rational(rng)).collect();
        if solutions_in(&combs, 0, degree, &mu).is_ok() {
            return Ok(mu);
        }
    }
    Err(Error::GenericityFailure {
        attempts: GENERICITY_ATTEMPTS,
    })
}

fn random_rational<R: Rng>(rng: &mut R) -> Rat {
    let num: i128 = rng.gen_range(-(1i128 << 64)..=(1i128 << 64));
    let den: u64 = rng.gen_range(1..=u32::MAX as u64);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_delta_s, LatticeVec, SplitSpec};
    use crate::rat;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_comb_types(3).len(), 1);
        assert_eq!(enumerate_comb_types(4).len(), 3);
        assert_eq!(enumerate_comb_types(5).len(), 15);
        assert_eq!(enumerate_comb_types(6).len(), 105);
        assert!(enumerate_comb_types(6).iter().all(|c| c.is_trivalent()));
    }

    #[test]
    fn line_solve() {
        let d1 = Degree::standard(1);
        let comb = &enumerate_comb_types(3)[0];
        let s = solve_cone(comb, &d1, &[rat(1), rat(1)]).unwrap().unwrap();
        assert_eq!(s.det, BigInt::from(1));
        assert_eq!(&s.curve.moments()[1..], &[rat(1), rat(1)]);
        assert_eq!(s.curve.moment(0), rat(-2));
    }

    #[test]
    fn flat_type_rejected() {
        let d = Degree::new(vec![
            LatticeVec::new(1, 0),
            LatticeVec::new(-1, 0),
            LatticeVec::new(0, 1),
            LatticeVec::new(0, -1),
        ])
        .unwrap();
        // {0,1} | {2,3} has collinear slopes at both vertices
        let comb = CombType::from_edges(4, &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]).unwrap();
        assert!(solve_cone(&comb, &d, &[rat(1), rat(2), rat(3)]).unwrap().is_none());
    }

    #[test]
    fn zero_length_is_degenerate() {
        let d = Degree::new(vec![
            LatticeVec::new(-1, 0),
            LatticeVec::new(0, -1),
            LatticeVec::new(1, 0),
            LatticeVec::new(0, 1),
        ])
        .unwrap();
        // a quadrivalent vertex at the origin has every moment zero
        let mu = vec![rat(0), rat(0), rat(0)];
        let r = solutions(&d, &mu);
        assert!(matches!(r, Err(Error::DegenerateConfig { .. })));
    }

    #[test]
    fn line_count() {
        let d1 = Degree::standard(1);
        for seed in 0..5 {
            let mu = random_generic_moments(&d1, seed).unwrap();
            assert_eq!(count_refined(&d1, &mu).unwrap(), QLaurent::one());
        }
    }

    #[test]
    fn parabola_count() {
        let par = Degree::new(vec![
            LatticeVec::new(-1, 1),
            LatticeVec::new(1, 1),
            LatticeVec::new(0, -1),
            LatticeVec::new(0, -1),
        ])
        .unwrap();
        let ds = make_delta_s(&par, &SplitSpec::new(vec![0, 0, 1])).unwrap();
        let mu = random_generic_moments(&ds, 7).unwrap();
        assert_eq!(count_refined(&ds, &mu).unwrap(), QLaurent::q_analog(2));
    }

    #[test]
    fn distinct_seeds_distinct_moments() {
        let d1 = Degree::standard(1);
        let a = random_generic_moments(&d1, 1).unwrap();
        let b = random_generic_moments(&d1, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, random_generic_moments(&d1, 1).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn det_factorizes(seed in any::<u64>()) {
            let d = make_delta_s(&Degree::standard(2), &SplitSpec::new(vec![1, 0, 0])).unwrap();
            let mu = random_generic_moments(&d, seed).unwrap();
            for s in solutions(&d, &mu).unwrap() {
                prop_assert_eq!(s.det, BigInt::from(s.curve.complex_mult().unwrap()));
                prop_assert!(s.curve.menelaus_check());
            }
        }
    }
}
