use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quantrop_core::enumerate::{enumerate_comb_types, Solution};
use quantrop_core::invariants::{classical_invariant, complex_ends, first_order_multiplicity};
use quantrop_core::lattice::{make_delta_s, Degree, LatticeVec, SplitSpec};
use quantrop_core::localcount::{self, random_unit_rational, Parity};
use quantrop_core::qindex::quantum_index;
use quantrop_core::realstruct::{build_real_curve, compute_even_subgraph, enumerate_admissible, Placement};
use quantrop_core::{Error, QLaurent, Rat};
use quantrop::exit;
use quantrop::formats::{
    parse_degree, parse_rat, parse_split, rat_str, CountReport, CurveJson, DegreeFile, InvariantReport, LaurentJson,
    PerCurveJson, QIndexJson, RealParamInput, RealParamJson,
};
use quantrop::parallel::{generic_solve, pool, refined_sum, solutions_par, worker_count, WORKERS_ENV};
use quantrop::verify;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const DEFAULT_SEED: u64 = 0x5eed;

/// Refined tropical boundary counts, quantum indices and real invariants.
#[derive(Parser)]
#[command(name = "quantrop", version, after_help = "Exit codes: 0 ok, 1 property failure, 2 input error, 3 invariance violation.")]
struct Cli {
    /// Worker threads (also read from QUANTROP_WORKERS).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct DegreeArgs {
    /// `d=N` for the standard degree, or `x,y;x,y;...`.
    #[arg(long, conflicts_with = "degree_file", allow_hyphen_values = true)]
    degree: Option<String>,
    /// JSON file `{"vectors": [[x,y],...], "s": [...]}`.
    #[arg(long)]
    degree_file: Option<PathBuf>,
    /// Complex pairs per side, e.g. `1,0,0`.
    #[arg(long)]
    s: Option<String>,
}

impl DegreeArgs {
    fn load(&self) -> Result<(Degree, SplitSpec)> {
        let (degree, file_s) = match (&self.degree, &self.degree_file) {
            (Some(d), _) => (parse_degree(d)?, None),
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let f: DegreeFile = serde_json::from_str(&text).context("degree file")?;
                (f.degree()?, f.s.map(SplitSpec::new))
            }
            (None, None) => bail!("give --degree or --degree-file"),
        };
        let s = match (&self.s, file_s) {
            (Some(s), _) => parse_split(s)?,
            (None, Some(s)) => s,
            (None, None) => SplitSpec::zero(degree.sides().len()),
        };
        s.remainders(&degree)?;
        Ok((degree, s))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// N^{∂,trop} of Δ(s) and the resulting R_{Δ,s}.
    Count {
        #[command(flatten)]
        degree: DegreeArgs,
        /// Recompute over this many generic moment vectors and require equality.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the curves through generic moments.
    Enumerate {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Moments of ends 2..m as rationals, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Quantum indices of curves given as parametrization JSON.
    Qindex {
        /// Read from this file instead of stdin.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Closed-form local counts.
    Local {
        #[command(subcommand)]
        problem: LocalCmd,
    },
    /// Even subgraph, admissible sets and vertex kinds of each curve.
    RealStructures {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the oracle suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Run a single check.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(verify::CHECKS))]
        only: Option<String>,
        /// Report the S-lemma per region.
        #[arg(long)]
        regions: bool,
        /// Where to write reproducers of failing checks.
        #[arg(long, default_value = "verify_failures.json")]
        dump: PathBuf,
    },
    /// N^{∂,trop}, R_{Δ,s} and per-curve first-order multiplicities as JSON.
    Invariant {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

#[derive(Subcommand)]
enum LocalCmd {
    TrivalentComplex {
        #[arg(long, allow_hyphen_values = true)]
        n1: String,
        #[arg(long, allow_hyphen_values = true)]
        n2: String,
    },
    TrivalentReal {
        #[arg(long)]
        m: u64,
    },
    ParabolaPrimitive {
        #[arg(long)]
        l1: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        theta: String,
    },
    ParabolaFull {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        theta: String,
    },
    EllipsePrimitive {
        #[arg(long)]
        l1: u64,
        #[arg(long)]
        l3: u64,
        #[arg(long)]
        h1: u64,
        #[arg(long)]
        h3: u64,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        theta1: String,
        #[arg(long)]
        theta3: String,
    },
    EllipseFull {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        theta1: String,
        #[arg(long)]
        theta3: String,
    },
    SSum {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        varphi: String,
    },
}

/// An error with its exit code.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(exit::INPUT_ERROR, e.into())
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.unwrap_or_else(worker_count);
    match run(cli.cmd, workers) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd, workers: usize) -> Outcome {
    match cmd {
        Cmd::Count {
            degree,
            trials,
            seed,
            json,
        } => cmd_count(&degree, trials, seed, json, workers),
        Cmd::Enumerate { degree, seed, mu, json } => cmd_enumerate(&degree, seed, mu.as_deref(), json, workers),
        Cmd::Qindex { file } => cmd_qindex(file),
        Cmd::Local { problem } => cmd_local(problem),
        Cmd::RealStructures { degree, seed } => cmd_real_structures(&degree, seed, workers),
        Cmd::Verify {
            seed,
            only,
            regions,
            dump,
        } => cmd_verify(seed, only.as_deref(), regions, &dump),
        Cmd::Invariant { degree, seed } => cmd_invariant(&degree, seed, workers),
    }
}

fn solve_generic(ds: &Degree, rng: &mut ChaCha8Rng, workers: usize) -> Result<(Vec<Rat>, Vec<(usize, Solution)>), Failure> {
    generic_solve(&pool(workers), ds, rng).map_err(|e| Failure(exit::INPUT_ERROR, e.into()))
}

fn cmd_count(args: &DegreeArgs, trials: usize, seed: u64, json: bool, workers: usize) -> Outcome {
    let (degree, s) = args.load()?;
    let ds = make_delta_s(&degree, &s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_trop: Option<QLaurent> = None;
    for t in 0..trials.max(1) {
        let (_, sols) = solve_generic(&ds, &mut rng, workers)?;
        let n = refined_sum(&sols)?;
        if let Some(prev) = &n_trop {
            if *prev != n {
                return Err(Failure(
                    exit::INVARIANCE_VIOLATION,
                    anyhow!("trial {t} gives {n}, earlier trials gave {prev}"),
                ));
            }
        }
        n_trop = Some(n);
    }
    let n_trop = n_trop.expect("at least one trial");
    let r = classical_invariant(&degree, &s, &n_trop)?;
    if json {
        let report = CountReport {
            degree: DegreeFile::from_degree(&degree, Some(&s)),
            delta_s: ds.vectors().iter().map(|v| [v.x, v.y]).collect(),
            seed,
            trials: trials.max(1),
            n_trop: LaurentJson::from_laurent(&n_trop),
            r_delta_s: LaurentJson::from_laurent(&r),
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("seed {seed}");
        println!("N_trop = {n_trop}");
        println!("R = {r}");
    }
    Ok(exit::OK)
}

fn curve_json(topology: usize, sol: &Solution) -> Result<CurveJson> {
    let c = &sol.curve;
    let bounded = c.bounded_edges();
    Ok(CurveJson {
        topology,
        edges: bounded.iter().map(|&e| [c.parent(e).expect("bounded edge"), e]).collect(),
        lengths: bounded.iter().map(|&e| rat_str(c.length(e).expect("bounded"))).collect(),
        root_pos: [rat_str(&c.root_pos().x), rat_str(&c.root_pos().y)],
        vertex_mults: c.vertices().map(|v| c.vertex_mult(v)).collect::<Result<_, _>>()?,
        refined_mult: LaurentJson::from_laurent(&c.refined_mult()?),
    })
}

fn cmd_enumerate(args: &DegreeArgs, seed: u64, mu: Option<&str>, json: bool, workers: usize) -> Outcome {
    let (degree, s) = args.load()?;
    let ds = make_delta_s(&degree, &s)?;
    let (mu, sols) = match mu {
        Some(text) => {
            let mu: Vec<Rat> = text.split(',').map(parse_rat).collect::<Result<_>>()?;
            let combs = enumerate_comb_types(ds.len());
            let sols = solutions_par(&pool(workers), &combs, &ds, &mu)?;
            (mu, sols)
        }
        None => solve_generic(&ds, &mut ChaCha8Rng::seed_from_u64(seed), workers)?,
    };
    let curves: Vec<CurveJson> = sols.iter().map(|(i, s)| curve_json(*i, s)).collect::<Result<_>>()?;
    if json {
        let out = json!({
            "delta_s": ds.vectors().iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
            "mu": mu.iter().map(rat_str).collect::<Vec<_>>(),
            "curves": curves,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("mu = [{}]", mu.iter().map(rat_str).collect::<Vec<_>>().join(", "));
        for c in &curves {
            println!("topology {:>4}  m_V = {:?}  m^q = {}", c.topology, c.vertex_mults, c.refined_mult.text);
        }
        println!("{} curves", curves.len());
    }
    Ok(exit::OK)
}

fn cmd_qindex(file: Option<PathBuf>) -> Outcome {
    let text = match file {
        Some(p) => std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let mut out = Vec::new();
    let mut code = exit::OK;
    for (i, p) in parse_curves(&text)?.iter().enumerate() {
        let p = p.to_param()?;
        match quantum_index(&p) {
            Ok(q) => out.push(serde_json::to_value(QIndexJson::from(&q))?),
            Err(e @ Error::NotHalfInteger { .. }) => {
                code = exit::PROPERTY_FAILURE;
                out.push(json!({"index": i, "error": e.to_string()}));
            }
            Err(e) => return Err(Failure(exit::INPUT_ERROR, anyhow!("curve {i}: {e}"))),
        }
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(code)
}

/// A JSON document (one curve or an array), else one curve per line.
fn parse_curves(text: &str) -> Result<Vec<RealParamJson>> {
    if let Ok(input) = serde_json::from_str::<RealParamInput>(text) {
        return Ok(input.into_vec());
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).with_context(|| format!("parametrization JSON, line {}", n + 1)))
        .collect()
}

fn parse_vec(s: &str) -> Result<LatticeVec> {
    let xy: Vec<i64> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?;
    match xy[..] {
        [x, y] => Ok(LatticeVec::new(x, y)),
        _ => bail!("expected x,y"),
    }
}

fn cmd_local(problem: LocalCmd) -> Outcome {
    let poly = match problem {
        LocalCmd::TrivalentComplex { n1, n2 } => {
            let (a, b) = (parse_vec(&n1)?, parse_vec(&n2)?);
            let m = localcount::trivalent_complex_count(a, b)?;
            let dist = localcount::trivalent_intersection_distribution(a, b)?;
            println!("m_delta = {m}");
            for (v, c) in dist {
                println!("third divisor value {}: {c}", rat_str(&v));
            }
            return Ok(exit::OK);
        }
        LocalCmd::TrivalentReal { m } => localcount::trivalent_real_count(m),
        LocalCmd::ParabolaPrimitive { l1, m, theta } => localcount::parabola_count_primitive(l1, m, &parse_rat(&theta)?)?,
        LocalCmd::ParabolaFull { m, theta } => localcount::parabola_count_full(m, &parse_rat(&theta)?)?,
        LocalCmd::EllipsePrimitive {
            l1,
            l3,
            h1,
            h3,
            parity,
            theta1,
            theta3,
        } => {
            let parity = match parity {
                ParityArg::Odd => Parity::Odd,
                ParityArg::Even => Parity::Even,
            };
            localcount::ellipse_count_primitive(l1, l3, h1, h3, parity, &parse_rat(&theta1)?, &parse_rat(&theta3)?)?
        }
        LocalCmd::EllipseFull { m, theta1, theta3 } => {
            localcount::ellipse_count_full(m, &parse_rat(&theta1)?, &parse_rat(&theta3)?)?
        }
        LocalCmd::SSum { n, theta, varphi } => localcount::s_sum_bruteforce(n, &parse_rat(&theta)?, &parse_rat(&varphi)?)?,
    };
    println!("{poly}");
    Ok(exit::OK)
}

fn cmd_real_structures(args: &DegreeArgs, seed: u64, workers: usize) -> Outcome {
    let (degree, s) = args.load()?;
    let ds = make_delta_s(&degree, &s)?;
    let (_, sols) = solve_generic(&ds, &mut ChaCha8Rng::seed_from_u64(seed), workers)?;
    let mut out = Vec::new();
    for (i, sol) in &sols {
        let c = &sol.curve;
        let even = compute_even_subgraph(c)?;
        let mut structures = Vec::new();
        for rset in enumerate_admissible(&even) {
            let real = build_real_curve(c, &even, &rset, Placement::Tail);
            let kinds: Vec<String> = real.fixed_vertices().iter().map(|(v, k)| format!("{v}:{k:?}")).collect();
            structures.push(json!({
                "edges": rset.edges,
                "doubled": real.doubled,
                "flat": real.has_flat_vertex(),
                "fixed_vertices": kinds,
            }));
        }
        out.push(json!({
            "topology": i,
            "components": even.components.iter().map(|c| json!({"stem": c.stem, "edges": c.edges})).collect::<Vec<_>>(),
            "structures": structures,
        }));
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(exit::OK)
}

fn cmd_verify(seed: u64, only: Option<&str>, regions: bool, dump: &PathBuf) -> Outcome {
    println!("seed {seed}");
    let results = verify::run(seed, only, regions);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:<width$}  {:>5} cases  {}", r.name, r.cases, r.detail);
    }
    let failures: Vec<_> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| json!({"check": r.name, "detail": r.detail, "input": r.reproducer}))
        .collect();
    if failures.is_empty() {
        return Ok(exit::OK);
    }
    std::fs::write(dump, serde_json::to_string_pretty(&json!({"seed": seed, "failures": failures}))?)?;
    eprintln!("reproducers written to {}", dump.display());
    Ok(exit::PROPERTY_FAILURE)
}

fn cmd_invariant(args: &DegreeArgs, seed: u64, workers: usize) -> Outcome {
    let (degree, s) = args.load()?;
    let ds = make_delta_s(&degree, &s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, sols) = solve_generic(&ds, &mut rng, workers)?;
    let n_trop = refined_sum(&sols)?;
    let r = classical_invariant(&degree, &s, &n_trop)?;
    let mut per_curve = Vec::new();
    for (i, sol) in &sols {
        let c = &sol.curve;
        let thetas: Vec<Rat> = complex_ends(c).iter().map(|_| random_unit_rational(&mut rng, 997)).collect();
        let fm = first_order_multiplicity(c, &thetas)?.to_laurent()?;
        per_curve.push(PerCurveJson {
            topology: *i,
            complex_mult: c.complex_mult()?,
            refined_mult: LaurentJson::from_laurent(&c.refined_mult()?),
            first_order: LaurentJson::from_laurent(&fm),
        });
    }
    let report = InvariantReport {
        n_trop: LaurentJson::from_laurent(&n_trop),
        r_delta_s: LaurentJson::from_laurent(&r),
        per_curve,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(exit::OK)
}
