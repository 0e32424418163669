//! Exact Gaussian elimination over the rationals.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::{Error, Rat, Result};

/// Solves `A x = b` for square `A`. Returns `(x, det A)`.
pub(crate) fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Result<(Vec<Rat>, Rat)> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut det = Rat::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        if piv != col {
            a.swap(piv, col);
            b.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    let mut x = alloc::vec![Rat::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Ok((x, det))
}

/// Determinant; zero for singular matrices.
#[cfg(test)]
pub(crate) fn det(a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    match solve(a, alloc::vec![Rat::zero(); n]) {
        Ok((_, d)) => d,
        Err(_) => Rat::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use alloc::vec;

    #[test]
    fn small_system() {
        let a = vec![vec![rat(0), rat(2)], vec![rat(3), rat(1)]];
        let (x, d) = solve(a, vec![rat(4), rat(5)]).unwrap();
        assert_eq!(d, rat(-6));
        assert_eq!(x, vec![rat(1), rat(2)]);
    }

    #[test]
    fn singular() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(solve(a.clone(), vec![rat(0), rat(0)]), Err(Error::SingularMatrix));
        assert_eq!(det(a), rat(0));
    }
}
