//! JSON shapes read and written by the CLI. Rationals travel as `"n/d"`
//! strings so nothing is rounded.

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use quantrop_core::lattice::{Degree, LatticeVec, SplitSpec};
use quantrop_core::qindex::{Complex, QuantumIndex, RealParam};
use quantrop_core::{QLaurent, Rat};
use serde::{Deserialize, Serialize};

pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| anyhow!("bad rational {s:?}: {e}"))
}

pub fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `{"vectors": [[x,y],...], "s": [..]}`; `s` is optional.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeFile {
    pub vectors: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<u64>>,
}

impl DegreeFile {
    pub fn from_degree(d: &Degree, s: Option<&SplitSpec>) -> Self {
        DegreeFile {
            vectors: d.vectors().iter().map(|v| [v.x, v.y]).collect(),
            s: s.map(|s| s.s.clone()),
        }
    }

    pub fn degree(&self) -> Result<Degree> {
        Ok(Degree::new(self.vectors.iter().map(|&[x, y]| LatticeVec::new(x, y)).collect())?)
    }
}

/// Accepts `d=3` or a list `x,y;x,y;...`.
pub fn parse_degree(spec: &str) -> Result<Degree> {
    let spec = spec.trim();
    if let Some(d) = spec.strip_prefix("d=") {
        let d: u32 = d.parse().context("degree after d=")?;
        if d == 0 {
            bail!("d must be positive");
        }
        return Ok(Degree::standard(d));
    }
    let mut out = Vec::new();
    for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
        let xy: Vec<&str> = part.split(',').collect();
        if xy.len() != 2 {
            bail!("vector {part:?} is not x,y");
        }
        out.push(LatticeVec::new(xy[0].trim().parse()?, xy[1].trim().parse()?));
    }
    Ok(Degree::new(out)?)
}

pub fn parse_split(spec: &str) -> Result<SplitSpec> {
    let s: Result<Vec<u64>, _> = spec.split(',').map(|x| x.trim().parse::<u64>()).collect();
    Ok(SplitSpec::new(s.context("split spec is a comma list of integers")?))
}

/// One monomial `coeff·q^exp`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LaurentJson {
    pub text: String,
    pub terms: Vec<TermJson>,
}

impl LaurentJson {
    pub fn from_laurent(p: &QLaurent) -> Self {
        LaurentJson {
            text: p.to_string(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: rat_str(e),
                    coeff: rat_str(c),
                })
                .collect(),
        }
    }

    pub fn to_laurent(&self) -> Result<QLaurent> {
        let mut acc = QLaurent::zero();
        for t in &self.terms {
            acc = &acc + &QLaurent::monomial(parse_rat(&t.coeff)?, parse_rat(&t.exp)?);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RealPointJson {
    /// `null` for the point at infinity.
    pub alpha: Option<String>,
    pub n: [i64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexPairJson {
    pub beta: [String; 2],
    pub n: [i64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RealParamJson {
    pub real_points: Vec<RealPointJson>,
    #[serde(default)]
    pub complex_pairs: Vec<ComplexPairJson>,
    #[serde(default = "default_signs")]
    pub chi_signs: [i8; 2],
}

fn default_signs() -> [i8; 2] {
    [1, 1]
}

impl RealParamJson {
    pub fn from_param(p: &RealParam) -> Self {
        RealParamJson {
            real_points: p
                .real_points
                .iter()
                .map(|(a, n)| RealPointJson {
                    alpha: a.as_ref().map(rat_str),
                    n: [n.x, n.y],
                })
                .collect(),
            complex_pairs: p
                .complex_pairs
                .iter()
                .map(|(b, n)| ComplexPairJson {
                    beta: [rat_str(&b.re), rat_str(&b.im)],
                    n: [n.x, n.y],
                })
                .collect(),
            chi_signs: p.chi_signs,
        }
    }

    pub fn to_param(&self) -> Result<RealParam> {
        let mut real = Vec::new();
        for p in &self.real_points {
            let a = p.alpha.as_deref().map(parse_rat).transpose()?;
            real.push((a, LatticeVec::new(p.n[0], p.n[1])));
        }
        let mut pairs = Vec::new();
        for c in &self.complex_pairs {
            let b = Complex::new(parse_rat(&c.beta[0])?, parse_rat(&c.beta[1])?);
            pairs.push((b, LatticeVec::new(c.n[0], c.n[1])));
        }
        let mut p = RealParam::new(real, pairs);
        p.chi_signs = self.chi_signs;
        Ok(p)
    }
}

/// Either a single curve or a list of them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealParamInput {
    One(RealParamJson),
    Many(Vec<RealParamJson>),
}

impl RealParamInput {
    pub fn into_vec(self) -> Vec<RealParamJson> {
        match self {
            RealParamInput::One(p) => vec![p],
            RealParamInput::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QIndexJson {
    pub area_over_pi2: f64,
    pub k: String,
    pub residual: f64,
}

impl From<&QuantumIndex> for QIndexJson {
    fn from(q: &QuantumIndex) -> Self {
        QIndexJson {
            area_over_pi2: q.area_over_pi2,
            k: rat_str(&q.k),
            residual: q.residual,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub topology: usize,
    pub edges: Vec<[usize; 2]>,
    pub lengths: Vec<String>,
    pub root_pos: [String; 2],
    pub vertex_mults: Vec<u64>,
    pub refined_mult: LaurentJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CountReport {
    pub degree: DegreeFile,
    pub delta_s: Vec<[i64; 2]>,
    pub seed: u64,
    pub trials: usize,
    #[serde(rename = "N_trop")]
    pub n_trop: LaurentJson,
    #[serde(rename = "R_delta_s")]
    pub r_delta_s: LaurentJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PerCurveJson {
    pub topology: usize,
    pub complex_mult: u64,
    pub refined_mult: LaurentJson,
    pub first_order: LaurentJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InvariantReport {
    #[serde(rename = "N_trop")]
    pub n_trop: LaurentJson,
    #[serde(rename = "R_delta_s")]
    pub r_delta_s: LaurentJson,
    pub per_curve: Vec<PerCurveJson>,
}
