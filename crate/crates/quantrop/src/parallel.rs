//! Topology-parallel solving. Results are returned in topology order, so the
//! output does not depend on the worker count.

use quantrop_core::enumerate::{enumerate_comb_types, solve_cone, Solution, GENERICITY_ATTEMPTS};
use quantrop_core::lattice::Degree;
use quantrop_core::tropcurve::CombType;
use quantrop_core::{Error, QLaurent, Rat};
use rand::Rng;
use rayon::prelude::*;

pub const WORKERS_ENV: &str = "QUANTROP_WORKERS";

/// Worker count from `QUANTROP_WORKERS`, else the machine's parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

pub fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// Solutions tagged with their topology index.
pub fn solutions_par(
    pool: &rayon::ThreadPool,
    combs: &[CombType],
    degree: &Degree,
    mu: &[Rat],
) -> Result<Vec<(usize, Solution)>, Error> {
    let per: Vec<Result<Option<(usize, Solution)>, Error>> = pool.install(|| {
        combs
            .par_iter()
            .enumerate()
            .map(|(i, c)| match solve_cone(c, degree, mu) {
                Ok(s) => Ok(s.map(|s| (i, s))),
                Err(Error::DegenerateConfig { .. }) => Err(Error::DegenerateConfig { topology: i }),
                Err(e) => Err(e),
            })
            .collect()
    });
    let mut out = Vec::new();
    for r in per {
        if let Some(s) = r? {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn refined_sum(sols: &[(usize, Solution)]) -> Result<QLaurent, Error> {
    let mut acc = QLaurent::zero();
    for (_, s) in sols {
        acc = &acc + &s.curve.refined_mult()?;
    }
    Ok(acc)
}

/// Draws moments until every topology solves cleanly.
pub fn generic_solve<R: Rng>(
    pool: &rayon::ThreadPool,
    degree: &Degree,
    rng: &mut R,
) -> Result<(Vec<Rat>, Vec<(usize, Solution)>), Error> {
    let combs = enumerate_comb_types(degree.len());
    for _ in 0..GENERICITY_ATTEMPTS {
        let mu: Vec<Rat> = (1..degree.len()).map(|_| random_moment(rng)).collect();
        match solutions_par(pool, &combs, degree, &mu) {
            Ok(s) => return Ok((mu, s)),
            Err(Error::DegenerateConfig { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityFailure {
        attempts: GENERICITY_ATTEMPTS,
    })
}

fn random_moment<R: Rng>(rng: &mut R) -> Rat {
    let num: i128 = rng.gen_range(-(1i128 << 64)..=(1i128 << 64));
    let den: u64 = rng.gen_range(1..=u32::MAX as u64);
    Rat::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantrop_core::enumerate::count_refined;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_serial() {
        let d = Degree::standard(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for workers in [1, 3] {
            let p = pool(workers);
            let (mu, sols) = generic_solve(&p, &d, &mut rng).unwrap();
            assert_eq!(refined_sum(&sols).unwrap(), count_refined(&d, &mu).unwrap());
            assert!(sols.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }
}
