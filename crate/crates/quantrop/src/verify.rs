//! The oracle suite behind `quantrop verify`.
//!
//! Every check draws from one seeded generator, in a fixed order, so a seed
//! reproduces the same table byte for byte.

use quantrop_core::enumerate::Solution;
use quantrop_core::invariants::{
    branch_invariant, first_order_by_recursion, first_order_by_structures, first_order_closed,
    first_order_multiplicity, first_order_target, leaf_branch, merge_branches, symbolic_angles, BranchData,
};
use quantrop_core::lattice::{make_delta_s, Degree, SplitSpec};
use quantrop_core::localcount::{
    ellipse_count_full, parabola_bruteforce, parabola_count_primitive, random_pair_in, random_unit_rational,
    root_sum, root_sum_closed, s_sum_bruteforce, Angle, Region,
};
use quantrop_core::qindex::{self, log_area, monomial_pushforward, quantum_index, random_real_param};
use quantrop_core::qlaurent::Frac;
use quantrop_core::{Error, Rat};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::formats::{rat_str, LaurentJson, RealParamJson};
use crate::parallel::{generic_solve, pool, refined_sum, worker_count};

/// Relative tolerance of the log-area functoriality check.
pub const FUNCTORIALITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    /// Input of the first failing case.
    pub reproducer: Option<Value>,
}

impl CheckOutcome {
    fn pass(name: &str, cases: usize, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            cases,
            detail: detail.into(),
            reproducer: None,
        }
    }

    fn fail(name: &str, cases: usize, detail: impl Into<String>, rep: Value) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            cases,
            detail: detail.into(),
            reproducer: Some(rep),
        }
    }
}

pub const CHECKS: [&str; 10] = [
    "s-lemma",
    "parabola",
    "simplification",
    "det",
    "menelaus",
    "invariance",
    "functoriality",
    "qindex",
    "first-order",
    "fixtures",
];

pub fn s_lemma_region(rng: &mut ChaCha8Rng, reg: Region, per_n: usize) -> CheckOutcome {
    let name = format!("s-lemma/{}", reg.name());
    let mut cases = 0;
    for n in 1..=6u64 {
        for _ in 0..per_n {
            let (t, p) = random_pair_in(rng, reg, 200);
            let closed = ellipse_count_full(4 * n, &t, &p);
            let brute = s_sum_bruteforce(n, &t, &p);
            cases += 1;
            if closed.is_err() || closed != brute {
                let rep = json!({"n": n, "theta": rat_str(&t), "varphi": rat_str(&p)});
                return CheckOutcome::fail(&name, cases, "closed form differs from the literal sum", rep);
            }
        }
    }
    CheckOutcome::pass(&name, cases, "closed form = literal sum")
}

pub fn s_lemma(rng: &mut ChaCha8Rng, split_regions: bool) -> Vec<CheckOutcome> {
    let per: Vec<CheckOutcome> = Region::ALL.iter().map(|&r| s_lemma_region(rng, r, 20)).collect();
    if split_regions {
        return per;
    }
    let cases = per.iter().map(|c| c.cases).sum();
    match per.into_iter().find(|c| !c.passed) {
        Some(mut f) => {
            f.name = "s-lemma".into();
            vec![f]
        }
        None => vec![CheckOutcome::pass("s-lemma", cases, "4 regions x n=1..6")],
    }
}

pub fn parabola(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut cases = 0;
    for l1 in 1..=3u64 {
        for h1 in 1..=3u64 {
            for _ in 0..10 {
                let t = random_unit_rational(rng, 500);
                cases += 1;
                let closed = parabola_count_primitive(l1, 2 * l1 * h1, &t);
                if closed.as_ref().ok() != Some(&parabola_bruteforce(l1, h1, &t)) {
                    let rep = json!({"l1": l1, "h1": h1, "theta": rat_str(&t)});
                    return CheckOutcome::fail("parabola", cases, "primitive count differs from k-sum", rep);
                }
                if root_sum_closed(l1 * h1, &t).ok() != Some(root_sum(l1 * h1, &t)) {
                    let rep = json!({"l": l1 * h1, "theta": rat_str(&t)});
                    return CheckOutcome::fail("parabola", cases, "root aggregation identity fails", rep);
                }
            }
        }
    }
    CheckOutcome::pass("parabola", cases, "(l1,h1) in {1,2,3}^2")
}

/// A random branch tree with `leaves` complex ends; checks that the branch
/// invariant is multiplicative at each merge and returns the first failing
/// vertex if any.
pub fn random_branch(rng: &mut ChaCha8Rng, leaves: usize) -> Result<BranchData<Rat>, Value> {
    if leaves == 1 {
        return Ok(leaf_branch(Angle::exact(random_unit_rational(rng, 997))));
    }
    let k = rng.gen_range(1..leaves);
    let a = random_branch(rng, k)?;
    let b = random_branch(rng, leaves - k)?;
    let m = rng.gen_range(1..=6u64);
    let merged = match merge_branches(&a, &b, m) {
        Ok(x) => x,
        Err(Error::OnRegionBoundary) => return Err(Value::Null),
        Err(e) => return Err(json!({"error": e.to_string()})),
    };
    let lhs = branch_invariant(&merged);
    let rhs = branch_invariant(&a)
        .mul(&branch_invariant(&b))
        .mul_laurent(&quantrop_core::QLaurent::bracket_minus(Rat::new(m.into(), 2.into())));
    if !lhs.same_value(&rhs) {
        let thetas = |b: &BranchData<Rat>| b.theta.iter().map(|t| rat_str(&t.value)).collect::<Vec<_>>();
        return Err(json!({"m": m, "theta1": thetas(&a), "theta2": thetas(&b)}));
    }
    Ok(merged)
}

pub fn simplification(rng: &mut ChaCha8Rng, trees: usize) -> CheckOutcome {
    let mut done = 0;
    let mut attempts = 0;
    while done < trees {
        attempts += 1;
        if attempts > 20 * trees {
            return CheckOutcome::fail("simplification", done, "too many boundary draws", Value::Null);
        }
        let leaves = rng.gen_range(2..=5);
        match random_branch(rng, leaves) {
            Ok(_) => done += 1,
            Err(Value::Null) => continue,
            Err(rep) => return CheckOutcome::fail("simplification", done, "branch invariant not multiplicative", rep),
        }
    }
    CheckOutcome::pass("simplification", done, "random trees, <=5 leaves, m<=6")
}

/// Curves for the structural checks: `Δ₂` with `s = 0` and `s = (1,0,0)`.
pub fn sample_curves(rng: &mut ChaCha8Rng, runs: usize) -> Result<Vec<(String, Solution)>, Error> {
    let p = pool(worker_count());
    let mut out = Vec::new();
    for s in [vec![0, 0, 0], vec![1, 0, 0]] {
        let ds = make_delta_s(&Degree::standard(2), &SplitSpec::new(s.clone()))?;
        for _ in 0..runs {
            let (_, sols) = generic_solve(&p, &ds, rng)?;
            for (i, sol) in sols {
                out.push((format!("d=2 s={s:?} topology {i}"), sol));
            }
        }
    }
    Ok(out)
}

pub fn det(curves: &[(String, Solution)]) -> CheckOutcome {
    for (tag, s) in curves {
        let ok = s.curve.complex_mult().map(|m| s.det == m.into()).unwrap_or(false);
        if !ok {
            return CheckOutcome::fail("det", curves.len(), "|det ev| differs from the vertex product", json!({"curve": tag}));
        }
    }
    CheckOutcome::pass("det", curves.len(), "|det ev| = prod m_V")
}

pub fn menelaus(curves: &[(String, Solution)]) -> CheckOutcome {
    for (tag, s) in curves {
        if !s.curve.menelaus_check() || s.curve.check_balancing().is_err() {
            return CheckOutcome::fail("menelaus", curves.len(), "moments do not sum to zero", json!({"curve": tag}));
        }
    }
    CheckOutcome::pass("menelaus", curves.len(), "sum of moments = 0, balanced")
}

pub fn invariance(rng: &mut ChaCha8Rng, runs: usize) -> CheckOutcome {
    let p = pool(worker_count());
    let mut cases = 0;
    for s in [vec![0, 0, 0], vec![1, 0, 0]] {
        let ds = make_delta_s(&Degree::standard(2), &SplitSpec::new(s.clone())).expect("valid split");
        let mut first = None;
        for _ in 0..runs {
            cases += 1;
            let n = generic_solve(&p, &ds, rng).and_then(|(_, sols)| refined_sum(&sols));
            let n = match n {
                Ok(n) => n,
                Err(e) => return CheckOutcome::fail("invariance", cases, e.to_string(), json!({"s": s})),
            };
            match &first {
                None => first = Some(n),
                Some(f) if *f != n => {
                    let rep = json!({"s": s, "first": LaurentJson::from_laurent(f), "now": LaurentJson::from_laurent(&n)});
                    return CheckOutcome::fail("invariance", cases, "count depends on the moments", rep);
                }
                _ => {}
            }
        }
    }
    CheckOutcome::pass("invariance", cases, "d=2, s=0 and s=(1,0,0)")
}

fn random_matrix(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    loop {
        let a = [[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]];
        if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 0 {
            return a;
        }
    }
}

pub fn functoriality(rng: &mut ChaCha8Rng, pairs: usize) -> CheckOutcome {
    let mut done = 0;
    while done < pairs {
        let p = random_real_param(rng, 4, 2);
        let a = random_matrix(rng);
        let d = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) as f64;
        let (Ok(before), Ok(after)) = (log_area(&p), monomial_pushforward(&p, &a).and_then(|q| log_area(&q))) else {
            continue;
        };
        done += 1;
        let (x, y) = (after.value(), d * before.value());
        if (x - y).abs() > FUNCTORIALITY_TOLERANCE * y.abs().max(1.0) {
            let rep = json!({"curve": RealParamJson::from_param(&p), "matrix": a});
            return CheckOutcome::fail("functoriality", done, format!("{x} vs {y}"), rep);
        }
    }
    CheckOutcome::pass("functoriality", done, "A(f_A) = det(A) A(f), rel 1e-10")
}

pub fn qindex_half_integer(rng: &mut ChaCha8Rng, curves: usize) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for i in 0..curves {
        let p = random_real_param(rng, 5, 2);
        match quantum_index(&p) {
            Ok(q) => worst = worst.max(q.residual),
            Err(e) => {
                let rep = json!({"curve": RealParamJson::from_param(&p), "error": e.to_string()});
                return CheckOutcome::fail("qindex", i + 1, "not a half-integer", rep);
            }
        }
    }
    CheckOutcome::pass("qindex", curves, format!("max residual {worst:.1e}"))
}

pub fn first_order(rng: &mut ChaCha8Rng, min_curves: usize) -> CheckOutcome {
    let p = pool(worker_count());
    let mut done = 0;
    let configs: [(u32, Vec<u64>); 4] =
        [(2, vec![0, 0, 0]), (2, vec![1, 0, 0]), (2, vec![1, 1, 0]), (3, vec![1, 1, 1])];
    // one pass over every configuration, then more draws until enough curves
    for (round, (d, s)) in configs.iter().cycle().take(12).enumerate() {
        if round >= configs.len() && done >= min_curves {
            break;
        }
        let ds = make_delta_s(&Degree::standard(*d), &SplitSpec::new(s.clone())).expect("valid split");
        let sols = match generic_solve(&p, &ds, rng) {
            Ok((_, s)) => s,
            Err(e) => return CheckOutcome::fail("first-order", done, e.to_string(), json!({"d": d, "s": s})),
        };
        for (i, sol) in sols {
            let c = &sol.curve;
            if c.vertices().any(|v| c.vertex_mult(v).map_or(true, |m| m > 4)) {
                continue;
            }
            let k = s.iter().sum::<u64>() as usize;
            let thetas: Vec<Rat> = (0..k).map(|_| random_unit_rational(rng, 499)).collect();
            let ang = symbolic_angles(&thetas);
            let ok = (|| -> Result<bool, Error> {
                let closed = first_order_closed(c, &ang)?;
                let a = first_order_by_structures(c, &ang)?.same_value(&closed);
                let b = first_order_by_recursion(c, &ang)?.same_value(&closed);
                let fm: Frac<Rat> = first_order_multiplicity(c, &thetas)?;
                Ok(a && b && fm.same_value(&first_order_target(c)?))
            })();
            done += 1;
            if ok != Ok(true) {
                let rep = json!({"d": d, "s": s, "topology": i, "thetas": thetas.iter().map(rat_str).collect::<Vec<_>>()});
                return CheckOutcome::fail("first-order", done, format!("{ok:?}"), rep);
            }
        }
    }
    CheckOutcome::pass("first-order", done, "structures = recursion = closed form")
}

/// Model curves: line index, parabola area, tangent-ellipse area.
pub fn fixtures() -> CheckOutcome {
    use std::f64::consts::PI;
    let mut cases = 1;
    match quantum_index(&qindex::line()) {
        Ok(q) if q.k == Rat::new(1.into(), 2.into()) => {}
        other => return CheckOutcome::fail("fixtures", cases, format!("line: {other:?}"), Value::Null),
    }
    for c in -3..=3i64 {
        cases += 1;
        let p = qindex::reflect(&qindex::parabola(Rat::from_integer(c.into())));
        let a = log_area(&p).map(|a| a.value()).unwrap_or(f64::NAN);
        let want = 2.0 * PI * (c as f64).atan();
        if (a - want).abs() > 1e-10 {
            return CheckOutcome::fail("fixtures", cases, format!("parabola c={c}: {a} vs {want}"), json!({"c": c}));
        }
    }
    for (st, sp) in [(1i64, 5i64, 2i64, 3i64), (1, 2, 3, 1), (1, 7, 1, 1)].map(|(a, b, c, d)| {
        (Rat::new(a.into(), b.into()), Rat::new(c.into(), d.into()))
    }) {
        cases += 1;
        let angle = |s: &Rat| 2.0 * s.to_f64().unwrap_or(f64::NAN).atan();
        let want = 2.0 * PI * (angle(&sp) - angle(&st));
        let a = log_area(&qindex::tangent_ellipse(&st, &sp)).map(|a| a.value()).unwrap_or(f64::NAN);
        if (a - want).abs() > 1e-10 {
            let rep = json!({"s_theta": rat_str(&st), "s_phi": rat_str(&sp)});
            return CheckOutcome::fail("fixtures", cases, format!("ellipse: {a} vs {want}"), rep);
        }
    }
    CheckOutcome::pass("fixtures", cases, "line k=1/2; parabola 2pi atan c; ellipse 2pi(phi-theta)")
}

/// Runs the selected checks in a fixed order.
pub fn run(seed: u64, only: Option<&str>, regions: bool) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let want = |n: &str| only.is_none_or(|o| o == n);
    let mut out = Vec::new();
    if want("s-lemma") {
        out.extend(s_lemma(&mut rng, regions));
    }
    if want("parabola") {
        out.push(parabola(&mut rng));
    }
    if want("simplification") {
        out.push(simplification(&mut rng, 100));
    }
    if want("det") || want("menelaus") {
        match sample_curves(&mut rng, 2) {
            Ok(curves) => {
                if want("det") {
                    out.push(det(&curves));
                }
                if want("menelaus") {
                    out.push(menelaus(&curves));
                }
            }
            Err(e) => out.push(CheckOutcome::fail("det", 0, e.to_string(), Value::Null)),
        }
    }
    if want("invariance") {
        out.push(invariance(&mut rng, 3));
    }
    if want("functoriality") {
        out.push(functoriality(&mut rng, 50));
    }
    if want("qindex") {
        out.push(qindex_half_integer(&mut rng, 200));
    }
    if want("first-order") {
        out.push(first_order(&mut rng, 20));
    }
    if want("fixtures") {
        out.push(fixtures());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_checks_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        assert!(s_lemma_region(&mut rng, Region::Top, 2).passed);
        assert!(parabola(&mut rng).passed);
        assert!(simplification(&mut rng, 5).passed);
        assert!(functoriality(&mut rng, 5).passed);
        assert!(qindex_half_integer(&mut rng, 10).passed);
        assert!(fixtures().passed);
    }

    #[test]
    fn deterministic() {
        let a: Vec<String> = run(7, Some("parabola"), false).iter().map(|c| c.detail.clone()).collect();
        let b: Vec<String> = run(7, Some("parabola"), false).iter().map(|c| c.detail.clone()).collect();
        assert_eq!(a, b);
    }
}
