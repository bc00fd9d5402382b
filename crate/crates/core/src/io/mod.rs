//! Instance and solution files.
//!
//! All files are UTF-8 JSON in a canonical layout (see [`json`]). Rationals
//! are strings, `"p/q"` or an integer, reduced on output; parsing also accepts
//! JSON integers and exact decimal strings such as `"-0.25"`.

use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{Group, Hyperplane, PointConfig, Rational};
use crate::greedy::GreedyStep;
use crate::instances::{
    DemandSet, FaceViolation, PcmsInstance, PtdInstance, PtdViolation, RmcInstance, SetSystem,
    Shortfall, TargetSet,
};

pub mod generate;
pub mod json;
pub mod svg;

pub use generate::{
    generate_instance, generate_pcms, generate_rmc, AbstractParams, GeneratorParams, TargetRule,
};
pub use svg::emit_svg;

/// Parses `"p/q"`, an integer, or a finite decimal without exponent.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |why: &str| Error::Parse {
        location: format!("rational {text:?}"),
        message: why.to_string(),
    };
    let s = text.trim();
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("expected an integer, p/q, or exact decimal"));
        }
        t.parse::<BigInt>().map_err(|_| bad("malformed integer"))
    };
    if let Some((num, den)) = s.split_once('/') {
        let den = int(den)?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(int(num)?, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("malformed decimal"));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            int(whole)?
        };
        let scale = num::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad("malformed decimal"))?;
        let magnitude = Rational::new(whole.abs() * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Rational::from_integer(int(s)?))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

struct RawRational(Rational);

impl<'de> Deserialize<'de> for RawRational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = RawRational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string such as \"3/4\"")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<RawRational, E> {
                Ok(RawRational(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<RawRational, E> {
                Ok(RawRational(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<RawRational, E> {
                Err(E::custom(format!(
                    "floating-point literal {v} is not exact; quote it as a decimal or p/q string"
                )))
            }

            fn visit_str<E: serde::de::Error>(
                self,
                v: &str,
            ) -> std::result::Result<RawRational, E> {
                parse_rational(v).map(RawRational).map_err(|e| match e {
                    Error::Parse { location, message } => {
                        E::custom(format!("{location}: {message}"))
                    }
                    e => E::custom(e),
                })
            }
        }
        de.deserialize_any(Visitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Geometric,
    Pcms,
    Ptd,
    Rmc,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Geometric => "geometric",
            InstanceKind::Pcms => "pcms",
            InstanceKind::Ptd => "ptd",
            InstanceKind::Rmc => "rmc",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(InstanceKind::Geometric),
            "pcms" => Ok(InstanceKind::Pcms),
            "ptd" => Ok(InstanceKind::Ptd),
            "rmc" => Ok(InstanceKind::Rmc),
            other => Err(Error::invalid(
                "kind",
                format!("unknown instance kind {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceFile {
    Geometric(PointConfig),
    Pcms(PcmsInstance),
    Ptd(PtdInstance),
    Rmc(RmcInstance),
}

impl InstanceFile {
    pub fn kind(&self) -> InstanceKind {
        match self {
            InstanceFile::Geometric(_) => InstanceKind::Geometric,
            InstanceFile::Pcms(_) => InstanceKind::Pcms,
            InstanceFile::Ptd(_) => InstanceKind::Ptd,
            InstanceFile::Rmc(_) => InstanceKind::Rmc,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometric {
    #[allow(dead_code)]
    #[serde(default)]
    kind: Option<String>,
    dim: usize,
    points: Vec<Vec<RawRational>>,
    groups: Vec<RawGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    name: String,
    members: Vec<usize>,
    mu: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPcms {
    #[allow(dead_code)]
    kind: Option<String>,
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    ground_sets: Vec<RawDemandSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDemandSet {
    members: Vec<usize>,
    demand: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPtd {
    #[allow(dead_code)]
    kind: Option<String>,
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    demands: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRmc {
    #[allow(dead_code)]
    kind: Option<String>,
    universe_size: usize,
    edges: Vec<Vec<usize>>,
    ground_sets: Vec<RawTargetSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTargetSet {
    members: Vec<usize>,
    target: usize,
}

fn position(err: &serde_json::Error) -> String {
    format!("line {} column {}", err.line(), err.column())
}

/// serde_json's message without its trailing position.
fn bare_message(err: &serde_json::Error) -> String {
    let text = err.to_string();
    let suffix = format!(" at {}", position(err));
    text.strip_suffix(&suffix).unwrap_or(&text).to_string()
}

fn syntax(err: serde_json::Error) -> Error {
    Error::Parse {
        location: position(&err),
        message: bare_message(&err),
    }
}

fn typed<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        let location = if path == "." {
            position(&inner)
        } else {
            format!("`{path}` ({})", position(&inner))
        };
        Error::Parse {
            location,
            message: bare_message(&inner),
        }
    })?;
    de.end().map_err(syntax)?;
    Ok(value)
}

/// Parses an instance file. The kind comes from `kind_override`, else the
/// file's `kind` field, else the presence of `dim` (geometric).
pub fn parse_instance(text: &str, kind_override: Option<InstanceKind>) -> Result<InstanceFile> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    let kind = match kind_override {
        Some(k) => k,
        None => match value.get("kind") {
            Some(Value::String(k)) => k.parse()?,
            Some(_) => return Err(Error::invalid("kind", "must be a string")),
            None if value.get("dim").is_some() => InstanceKind::Geometric,
            None => {
                return Err(Error::invalid(
                    "kind",
                    "missing, and no `dim` field to infer it",
                ))
            }
        },
    };
    Ok(match kind {
        InstanceKind::Geometric => {
            let raw: RawGeometric = typed(text)?;
            let points = raw
                .points
                .into_iter()
                .map(|p| p.into_iter().map(|x| x.0).collect())
                .collect();
            let groups = raw
                .groups
                .into_iter()
                .map(|g| Group {
                    name: g.name,
                    members: g.members,
                    mu: g.mu,
                })
                .collect();
            InstanceFile::Geometric(PointConfig::new(raw.dim, points, groups)?)
        }
        InstanceKind::Pcms => {
            let raw: RawPcms = typed(text)?;
            let ground_sets = raw
                .ground_sets
                .into_iter()
                .map(|g| DemandSet {
                    members: g.members,
                    demand: g.demand,
                })
                .collect();
            InstanceFile::Pcms(PcmsInstance::new(
                raw.universe_size,
                raw.edges,
                ground_sets,
            )?)
        }
        InstanceKind::Ptd => {
            let raw: RawPtd = typed(text)?;
            let system = SetSystem::new(raw.universe_size, raw.edges)?;
            InstanceFile::Ptd(PtdInstance::new(system, raw.demands)?)
        }
        InstanceKind::Rmc => {
            let raw: RawRmc = typed(text)?;
            let ground_sets = raw
                .ground_sets
                .into_iter()
                .map(|g| TargetSet {
                    members: g.members,
                    target: g.target,
                })
                .collect();
            InstanceFile::Rmc(RmcInstance::new(raw.universe_size, raw.edges, ground_sets)?)
        }
    })
}

fn rationals(xs: &[Rational]) -> Value {
    Value::Array(
        xs.iter()
            .map(|x| Value::String(format_rational(x)))
            .collect(),
    )
}

pub fn emit_instance(file: &InstanceFile) -> String {
    let value = match file {
        InstanceFile::Geometric(cfg) => json!({
            "kind": "geometric",
            "dim": cfg.dim(),
            "points": cfg.points().iter().map(|p| rationals(p)).collect::<Vec<_>>(),
            "groups": cfg.groups().iter().map(|g| json!({
                "name": g.name,
                "members": g.members,
                "mu": g.mu,
            })).collect::<Vec<_>>(),
        }),
        InstanceFile::Pcms(inst) => json!({
            "kind": "pcms",
            "universe_size": inst.universe_size(),
            "edges": inst.edges(),
            "ground_sets": inst.ground_sets().iter().map(|g| json!({
                "members": g.members,
                "demand": g.demand,
            })).collect::<Vec<_>>(),
        }),
        InstanceFile::Ptd(inst) => json!({
            "kind": "ptd",
            "universe_size": inst.system().ground_size(),
            "edges": inst.system().edges(),
            "demands": inst.demands(),
        }),
        InstanceFile::Rmc(inst) => json!({
            "kind": "rmc",
            "universe_size": inst.universe_size(),
            "edges": inst.edges(),
            "ground_sets": inst.ground_sets().iter().map(|g| json!({
                "members": g.members,
                "target": g.target,
            })).collect::<Vec<_>>(),
        }),
    };
    json::to_canonical_string(&value)
}

/// One recorded violation; the variant follows the instance kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationRecord {
    Face(FaceViolation),
    Shortfall(Shortfall),
    Demand(PtdViolation),
}

impl fmt::Display for ViolationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationRecord::Face(v) => write!(
                f,
                "face {:?} holds {} points of group {} (limit {})",
                v.face, v.count, v.group, v.limit
            ),
            ViolationRecord::Shortfall(s) => write!(
                f,
                "ground set {} covered {} of demanded {}",
                s.ground_set, s.covered, s.demand
            ),
            ViolationRecord::Demand(d) => write!(
                f,
                "element {} lies in a face of size {} (demand {})",
                d.element, d.face_size, d.demand
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub kind: InstanceKind,
    /// Chosen edge indices; for geometric instances, indices into the
    /// enumerated halfspace classes.
    pub chosen: Vec<usize>,
    /// Witness hyperplanes of the chosen classes (geometric only).
    pub hyperplanes: Vec<Hyperplane>,
    pub trace: Vec<GreedyStep>,
    pub f_max: u64,
    pub final_value: u64,
    pub feasible: bool,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolution {
    kind: String,
    chosen: Vec<usize>,
    hyperplanes: Vec<RawHyperplane>,
    trace: Vec<RawStep>,
    f_max: u64,
    final_value: u64,
    feasible: bool,
    violations: Vec<RawViolation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHyperplane {
    a: Vec<RawRational>,
    b: RawRational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    edge: usize,
    gain: u64,
    deficiency: u64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawViolation {
    Face {
        face: Vec<usize>,
        group: usize,
        count: usize,
        limit: usize,
    },
    Shortfall {
        ground_set: usize,
        demand: usize,
        covered: usize,
    },
    Demand {
        element: usize,
        face_size: usize,
        demand: usize,
    },
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let raw: RawSolution = typed(text)?;
    let kind: InstanceKind = raw.kind.parse()?;
    let hyperplanes = raw
        .hyperplanes
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            Hyperplane::new(h.a.into_iter().map(|x| x.0).collect(), h.b.0).map_err(|_| {
                Error::invalid(format!("hyperplanes[{i}].a"), "normal must be nonzero")
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = raw
        .violations
        .into_iter()
        .map(|v| match v {
            RawViolation::Face {
                face,
                group,
                count,
                limit,
            } => ViolationRecord::Face(FaceViolation {
                face,
                group,
                count,
                limit,
            }),
            RawViolation::Shortfall {
                ground_set,
                demand,
                covered,
            } => ViolationRecord::Shortfall(Shortfall {
                ground_set,
                demand,
                covered,
            }),
            RawViolation::Demand {
                element,
                face_size,
                demand,
            } => ViolationRecord::Demand(PtdViolation {
                element,
                face_size,
                demand,
            }),
        })
        .collect();
    Ok(SolutionFile {
        kind,
        chosen: raw.chosen,
        hyperplanes,
        trace: raw
            .trace
            .into_iter()
            .map(|s| GreedyStep {
                edge: s.edge,
                gain: s.gain,
                deficiency: s.deficiency,
            })
            .collect(),
        f_max: raw.f_max,
        final_value: raw.final_value,
        feasible: raw.feasible,
        violations,
    })
}

fn violation_value(v: &ViolationRecord) -> Value {
    match v {
        ViolationRecord::Face(v) => json!({
            "face": v.face, "group": v.group, "count": v.count, "limit": v.limit,
        }),
        ViolationRecord::Shortfall(s) => json!({
            "ground_set": s.ground_set, "demand": s.demand, "covered": s.covered,
        }),
        ViolationRecord::Demand(d) => json!({
            "element": d.element, "face_size": d.face_size, "demand": d.demand,
        }),
    }
}

pub fn emit_solution(sol: &SolutionFile) -> String {
    let value = json!({
        "kind": sol.kind.as_str(),
        "chosen": sol.chosen,
        "hyperplanes": sol.hyperplanes.iter().map(|h| json!({
            "a": rationals(h.normal()),
            "b": format_rational(h.offset()),
        })).collect::<Vec<_>>(),
        "trace": sol.trace.iter().map(|s| json!({
            "edge": s.edge, "gain": s.gain, "deficiency": s.deficiency,
        })).collect::<Vec<_>>(),
        "f_max": sol.f_max,
        "final_value": sol.final_value,
        "feasible": sol.feasible,
        "violations": sol.violations.iter().map(violation_value).collect::<Vec<_>>(),
    });
    json::to_canonical_string(&value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn rational_forms() {
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("3/-4").unwrap()), "-3/4");
        assert_eq!(format_rational(&parse_rational("0.25").unwrap()), "1/4");
        assert_eq!(format_rational(&parse_rational("-1.5").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("-0.5").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational("17").unwrap()), "17");
        assert_eq!(format_rational(&parse_rational(".5").unwrap()), "1/2");
        for bad in [
            "", "1e3", "NaN", "inf", "1/0", "1.", "1.2.3", "a/b", "--1", "0x10",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    const GEO: &str = r#"{
  "dim": 2,
  "groups": [
    {
      "members": [0, 1, 2],
      "mu": 1,
      "name": "g"
    }
  ],
  "kind": "geometric",
  "points": [
    ["0", "0"],
    ["1/2", "0"],
    ["0", "1"]
  ]
}
"#;

    #[test]
    fn geometric_round_trip() {
        let parsed = parse_instance(GEO, None).unwrap();
        assert_eq!(parsed.kind(), InstanceKind::Geometric);
        assert_eq!(emit_instance(&parsed), GEO);
    }

    #[test]
    fn kind_inferred_from_dim_and_numbers_accepted() {
        let text = r#"{"dim": 1, "points": [[0], ["2/4"], [-3]], "groups": [{"name": "a", "members": [0, 1, 2], "mu": 2}]}"#;
        let InstanceFile::Geometric(cfg) = parse_instance(text, None).unwrap() else {
            panic!("expected geometric");
        };
        assert_eq!(cfg.points()[1][0], parse_rational("1/2").unwrap());
        assert_eq!(cfg.points()[2][0], rat(-3));
    }

    #[test]
    fn float_literal_rejected() {
        let text =
            r#"{"dim": 1, "points": [[0.1]], "groups": [{"name": "a", "members": [0], "mu": 1}]}"#;
        let err = parse_instance(text, None).unwrap_err();
        assert!(
            matches!(err, Error::Parse { ref message, .. } if message.contains("not exact")),
            "{err}"
        );
    }

    #[test]
    fn duplicate_points_rejected() {
        let text = r#"{"dim": 1, "points": [["1"], ["2/2"]], "groups": [{"name": "a", "members": [0, 1], "mu": 1}]}"#;
        let err = parse_instance(text, None).unwrap_err();
        assert!(err.to_string().contains("points must be distinct"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_instance("{\n  \"dim\": 1,\n  oops\n}", None).unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_and_kind() {
        assert!(parse_instance(
            r#"{"kind": "pcms", "universe_size": 1, "edges": [], "ground_sets": [], "extra": 1}"#,
            None
        )
        .is_err());
        assert!(parse_instance(r#"{"kind": "nope"}"#, None).is_err());
        assert!(parse_instance(r#"{"universe_size": 2}"#, None).is_err());
    }

    #[test]
    fn abstract_kinds_round_trip() {
        for text in [
            "{\n  \"edges\": [\n    [0, 2],\n    [1, 3]\n  ],\n  \"ground_sets\": [\n    {\n      \"demand\": 2,\n      \"members\": [0, 1]\n    }\n  ],\n  \"kind\": \"pcms\",\n  \"universe_size\": 4\n}\n",
            "{\n  \"demands\": [1, 1],\n  \"edges\": [\n    [0]\n  ],\n  \"kind\": \"ptd\",\n  \"universe_size\": 2\n}\n",
            "{\n  \"edges\": [],\n  \"ground_sets\": [\n    {\n      \"members\": [0, 1, 2],\n      \"target\": 3\n    }\n  ],\n  \"kind\": \"rmc\",\n  \"universe_size\": 3\n}\n",
        ] {
            assert_eq!(emit_instance(&parse_instance(text, None).unwrap()), text);
        }
    }

    #[test]
    fn validation_error_names_field() {
        let text = r#"{"kind": "rmc", "universe_size": 2, "edges": [], "ground_sets": [{"members": [0, 1], "target": 0}]}"#;
        match parse_instance(text, None).unwrap_err() {
            Error::Invalid { field, .. } => assert_eq!(field, "ground_sets[0].target"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solution_round_trip() {
        let sol = SolutionFile {
            kind: InstanceKind::Geometric,
            chosen: vec![1, 4],
            hyperplanes: vec![Hyperplane::new(
                vec![rat(1), parse_rational("-1/3").unwrap()],
                parse_rational("2/4").unwrap(),
            )
            .unwrap()],
            trace: vec![GreedyStep {
                edge: 4,
                gain: 3,
                deficiency: 1,
            }],
            f_max: 4,
            final_value: 3,
            feasible: false,
            violations: vec![ViolationRecord::Face(FaceViolation {
                face: vec![0, 2],
                group: 0,
                count: 2,
                limit: 1,
            })],
        };
        let text = emit_solution(&sol);
        assert!(text.contains("\"b\": \"1/2\""));
        let back = parse_solution(&text).unwrap();
        assert_eq!(back, sol);
        assert_eq!(emit_solution(&back), text);
    }

    #[test]
    fn solution_violation_variants() {
        for v in [
            ViolationRecord::Shortfall(Shortfall {
                ground_set: 1,
                demand: 3,
                covered: 2,
            }),
            ViolationRecord::Demand(PtdViolation {
                element: 0,
                face_size: 2,
                demand: 1,
            }),
        ] {
            let sol = SolutionFile {
                kind: InstanceKind::Pcms,
                chosen: vec![],
                hyperplanes: vec![],
                trace: vec![],
                f_max: 0,
                final_value: 0,
                feasible: false,
                violations: vec![v.clone()],
            };
            assert_eq!(
                parse_solution(&emit_solution(&sol)).unwrap().violations,
                vec![v]
            );
        }
    }
}
