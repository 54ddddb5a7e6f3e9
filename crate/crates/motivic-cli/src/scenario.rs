//! Scenario file formats and their translation into core types.
//!
//! Everything is JSON-compatible text. Classes are serialised as
//! `[p, q, coeff]` triples, monodromy-graded classes as `[num, den,
//! epoly]` entries, partitions as nested integer lists, and local factors
//! as `[index_vector, epoly]` pairs.

use std::collections::BTreeMap;

use motivic_core::counting::CountAvatar;
use motivic_core::epoly::EPoly;
use motivic_core::euler::{BaseCurve, BaseKind, Factor, LocalFactorFamily, RatPoint};
use motivic_core::fourier::FamilyLevels;
use motivic_core::height::{BadPlace, CompactificationData, PlaceRecord};
use motivic_core::localfield::PlaceId;
use motivic_core::monclass::{Alpha, MonClass};
use motivic_core::num::Int;
use motivic_core::series::MotSeries;
use motivic_core::vanishing::{ResolutionData, Stratum};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type EPolyRepr = Vec<(i64, i64, i64)>;
pub type MonClassRepr = Vec<(i64, i64, EPolyRepr)>;
pub type FactorRepr = Vec<(Vec<u32>, EPolyRepr)>;

pub fn epoly_from(repr: &EPolyRepr) -> EPoly {
    let mut out = EPoly::new();
    for &(p, q, c) in repr {
        out.insert_term(p, q, Int::from(c));
    }
    out
}

pub fn epoly_to(e: &EPoly) -> serde_json::Value {
    serde_json::Value::Array(
        e.to_triples()
            .into_iter()
            .map(|(p, q, c)| serde_json::json!([p, q, c.to_string()]))
            .collect(),
    )
}

pub fn monclass_from(repr: &MonClassRepr) -> MonClass {
    let mut out = MonClass::new();
    for (num, den, e) in repr {
        out.insert(Alpha::new(*num, *den), epoly_from(e));
    }
    out
}

pub fn monclass_to(m: &MonClass) -> serde_json::Value {
    serde_json::Value::Array(
        m.components()
            .map(|(a, e)| serde_json::json!([a.numer(), a.denom(), epoly_to(e)]))
            .collect(),
    )
}

pub fn factor_from(repr: &FactorRepr, dims: usize) -> Result<Factor, CliError> {
    let mut f = Factor::new();
    for (idx, e) in repr {
        if idx.len() != dims {
            return Err(CliError::parse("factor index has the wrong dimension"));
        }
        f.insert(idx.clone(), epoly_from(e));
    }
    Ok(f)
}

/// Catalog variety descriptors: `{"kind": "elliptic", "a": 1}` and
/// friends.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VarietySpec {
    Point,
    Points { k: u64 },
    Affine { n: u32 },
    Projective { n: u32 },
    Gm,
    TildeE,
    Elliptic { a: i64 },
    Fermat { n: u32, affine: bool },
    WeilCurve { numer: Vec<i64> },
    /// Brute-force affine spec: equations as term lists
    /// `[exponents..., coeff]`, optional per-variable invertibility.
    Spec {
        nvars: u32,
        equations: Vec<Vec<Vec<i64>>>,
        #[serde(default)]
        invertible: Vec<bool>,
    },
}

impl VarietySpec {
    pub fn to_avatar(&self) -> CountAvatar {
        match self {
            VarietySpec::Point => CountAvatar::Point,
            VarietySpec::Points { k } => CountAvatar::Points(*k),
            VarietySpec::Affine { n } => CountAvatar::Affine(*n),
            VarietySpec::Projective { n } => CountAvatar::Projective(*n),
            VarietySpec::Gm => CountAvatar::Gm,
            VarietySpec::TildeE => CountAvatar::TildeE,
            VarietySpec::Elliptic { a } => CountAvatar::Elliptic { a: *a },
            VarietySpec::Fermat { n, affine } => CountAvatar::Fermat {
                n: *n,
                affine: *affine,
            },
            VarietySpec::WeilCurve { numer } => CountAvatar::WeilCurve {
                numer: numer.iter().map(|&c| Int::from(c)).collect(),
            },
            VarietySpec::Spec {
                nvars,
                equations,
                invertible,
            } => {
                let eqs = equations
                    .iter()
                    .map(|terms| motivic_core::counting::MultiPoly {
                        nvars: *nvars,
                        terms: terms
                            .iter()
                            .map(|t| {
                                let (exps, coeff) = t.split_at(t.len() - 1);
                                (exps.iter().map(|&e| e as u32).collect(), coeff[0])
                            })
                            .collect(),
                    })
                    .collect();
                let mut spec = motivic_core::counting::AffineSpec::new(*nvars, eqs);
                for (i, &inv) in invertible.iter().enumerate() {
                    if i < spec.invertible.len() {
                        spec.invertible[i] = inv;
                    }
                }
                CountAvatar::BruteForce(spec)
            }
        }
    }

    pub fn parse_name(name: &str, a: Option<i64>, n: Option<u32>) -> Result<Self, CliError> {
        Ok(match name {
            "point" => VarietySpec::Point,
            "affine" | "a1" => VarietySpec::Affine { n: n.unwrap_or(1) },
            "projective" | "p1" => VarietySpec::Projective { n: n.unwrap_or(1) },
            "gm" => VarietySpec::Gm,
            "tilde-e" => VarietySpec::TildeE,
            "elliptic" => VarietySpec::Elliptic {
                a: a.ok_or_else(|| CliError::parse("elliptic needs --a <trace>"))?,
            },
            "fermat0" => VarietySpec::Fermat {
                n: n.unwrap_or(2),
                affine: false,
            },
            "fermat1" => VarietySpec::Fermat {
                n: n.unwrap_or(2),
                affine: true,
            },
            other => {
                return Err(CliError::parse(&format!("unknown variety kind: {other}")))
            }
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSpec {
    Finite(u32),
    Infinity,
}

impl PointSpec {
    fn to_rat_point(&self) -> RatPoint {
        match self {
            PointSpec::Finite(c) => RatPoint::Finite(*c),
            PointSpec::Infinity => RatPoint::Infinity,
        }
    }

    fn to_place(&self, q: u32) -> PlaceId {
        match self {
            PointSpec::Finite(c) => motivic_core::localfield::place_rational(q, *c),
            PointSpec::Infinity => PlaceId::Infinity,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyScenario {
    pub base: String,
    #[serde(default)]
    pub removed: Vec<PointSpec>,
    #[serde(default = "one")]
    pub dims: usize,
    pub coeffs: FactorRepr,
    #[serde(default)]
    pub overrides: Vec<(PointSpec, FactorRepr)>,
}

fn one() -> usize {
    1
}

pub fn base_kind(name: &str) -> Result<BaseKind, CliError> {
    Ok(match name {
        "point" => BaseKind::Point,
        "a1" | "affine" => BaseKind::Affine1,
        "p1" | "projective" => BaseKind::Proj1,
        "gm" => BaseKind::Gm,
        other => return Err(CliError::parse(&format!("unknown base curve: {other}"))),
    })
}

impl FamilyScenario {
    pub fn to_family(&self) -> Result<LocalFactorFamily, CliError> {
        let base = BaseCurve::new(base_kind(&self.base)?).without(
            &self
                .removed
                .iter()
                .map(|p| p.to_rat_point())
                .collect::<Vec<_>>(),
        );
        let mut fam =
            LocalFactorFamily::new(base, self.dims, factor_from(&self.coeffs, self.dims)?);
        for (p, f) in &self.overrides {
            fam = fam.with_override(p.to_rat_point(), factor_from(f, self.dims)?);
        }
        Ok(fam)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratumScenario {
    pub label: String,
    pub cover: MonClassRepr,
    pub mults: Vec<u32>,
    pub jac: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionScenario {
    pub strata: Vec<StratumScenario>,
    pub ambient: MonClassRepr,
}

impl ResolutionScenario {
    pub fn to_core(&self) -> ResolutionData {
        ResolutionData {
            strata: self
                .strata
                .iter()
                .map(|s| Stratum::new(&s.label, monclass_from(&s.cover), &s.mults, &s.jac))
                .collect(),
            ambient: monclass_from(&self.ambient),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaceRecordScenario {
    pub subset: Vec<String>,
    pub beta: String,
    pub class: EPolyRepr,
    #[serde(default)]
    pub e: BTreeMap<String, u32>,
    #[serde(default)]
    pub rho_beta: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BadPlaceScenario {
    pub label: String,
    pub records: Vec<PlaceRecordScenario>,
    pub clemens_dim: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompactificationScenario {
    pub alphas: Vec<String>,
    #[serde(default)]
    pub boundary_d: Vec<String>,
    pub rho: BTreeMap<String, u32>,
    pub dim_n: u32,
    pub good_strata: Vec<(Vec<String>, EPolyRepr)>,
    #[serde(default)]
    pub bad_places: Vec<BadPlaceScenario>,
}

impl CompactificationScenario {
    pub fn to_core(&self) -> CompactificationData {
        CompactificationData {
            alphas: self.alphas.clone(),
            boundary_d: self.boundary_d.clone(),
            rho: self.rho.clone(),
            dim_n: self.dim_n,
            good_strata: self
                .good_strata
                .iter()
                .map(|(a, e)| (a.clone(), epoly_from(e)))
                .collect(),
            bad_places: self
                .bad_places
                .iter()
                .map(|b| BadPlace {
                    label: b.label.clone(),
                    records: b
                        .records
                        .iter()
                        .map(|r| PlaceRecord {
                            subset: r.subset.clone(),
                            beta: r.beta.clone(),
                            class: epoly_from(&r.class),
                            e: r.e.clone(),
                            rho_beta: r.rho_beta,
                        })
                        .collect(),
                    clemens_dim: b.clemens_dim,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyLevelScenario {
    pub sigma: Vec<(PointSpec, (i32, i32))>,
    pub offsets: Vec<(Vec<u32>, (u32, u32))>,
}

impl FamilyLevelScenario {
    pub fn to_core(&self, q: u32) -> FamilyLevels {
        FamilyLevels {
            sigma: self
                .sigma
                .iter()
                .map(|(p, l)| (p.to_place(q), *l))
                .collect(),
            offsets: self.offsets.iter().cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesScenario {
    pub bounds: Vec<u32>,
    pub coeffs: Vec<(Vec<u32>, EPolyRepr)>,
}

impl SeriesScenario {
    pub fn to_core(&self) -> MotSeries<EPoly> {
        let vars: Vec<String> = (0..self.bounds.len())
            .map(|i| format!("T{}", i + 1))
            .collect();
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let mut s = MotSeries::new(&var_refs, &self.bounds);
        for (e, c) in &self.coeffs {
            s.set_coeff(e, epoly_from(c));
        }
        s
    }
}

/// One local Schwartz–Bruhat factor given by an explicit value table in
/// carrier order (lexicographic in the coefficients `x_M, ..., x_{N-1}`
/// per copy). Each value is a list of `[exponent, multiplier]` pairs
/// denoting `sum multiplier * zeta_p^exponent`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SBFactorScenario {
    pub place: PlaceSpec,
    pub level: (i32, i32),
    pub values: Vec<Vec<(u32, i64)>>,
}

/// A place of `P^1`: a rational point, infinity, or an explicit monic
/// irreducible polynomial (coefficients low-to-high).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceSpec {
    Finite(u32),
    Infinity,
    Poly(Vec<u32>),
}

impl PlaceSpec {
    pub fn to_place(&self, q: u32) -> PlaceId {
        match self {
            PlaceSpec::Finite(c) => motivic_core::localfield::place_rational(q, *c),
            PlaceSpec::Infinity => PlaceId::Infinity,
            PlaceSpec::Poly(pi) => PlaceId::Finite(pi.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoissonScenario {
    pub q: u32,
    #[serde(default = "one_u32")]
    pub n: u32,
    pub factors: Vec<SBFactorScenario>,
}

fn one_u32() -> u32 {
    1
}

/// Either an inline JSON string or a path to a file containing it.
pub fn load_json<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T, CliError> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| CliError::parse(&format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::parse(&format!("bad scenario: {e}")))
}

pub fn series_to_json<C>(s: &MotSeries<C>, enc: impl Fn(&C) -> serde_json::Value) -> serde_json::Value
where
    C: motivic_core::num::Ring,
{
    serde_json::Value::Array(
        s.terms()
            .map(|(e, c)| serde_json::json!([e, enc(c)]))
            .collect(),
    )
}

pub fn rat_to_json(r: &motivic_core::num::Rat) -> serde_json::Value {
    serde_json::json!(r.to_string())
}

pub fn cyclo_to_json(v: &motivic_core::cyclo::CycloValue) -> serde_json::Value {
    serde_json::json!({
        "conductor": v.conductor(),
        "coords": v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}
