//! TOML system documents.
//!
//! ```toml
//! variables = ["x1", "x2"]
//! equalities = ["x1^2 + x2^2 - 1"]
//! inequalities = []
//! objective = "x1"
//!
//! [component]
//! seed = ["1", "0"]
//! box = [["-2", "2"], ["-2", "2"]]
//! resolution = 16
//! ```
//!
//! A polynomial is either an expression string or a list of terms
//! `{ coef = "-1", exp = [0, 0] }`. Every number is a decimal string, so no
//! binary float ever reaches a coefficient. Two-system documents (for
//! `separate`) put each system in its own `[[system]]` table.

use minbound::oracle::ComponentSpec;
use minbound::perturb::SemialgSystem;
use minbound::polycore::{parse_polynomial, parse_rational, IntPolynomial, Monomial, RationalPoint};
use minbound::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub coef: String,
    pub exp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawPoly {
    Expr(String),
    Terms(Vec<RawTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub seed: Vec<String>,
    #[serde(rename = "box")]
    pub bbox: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub variables: Vec<String>,
    #[serde(default)]
    pub equalities: Vec<RawPoly>,
    #[serde(default)]
    pub inequalities: Vec<RawPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<RawPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<RawComponent>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equalities: Vec<RawPoly>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inequalities: Vec<RawPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<RawPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<RawComponent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub system: Vec<RawSystem>,
}

/// A validated system with its names and optional component.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub names: Vec<String>,
    pub system: SemialgSystem,
    pub d_override: Option<u32>,
    /// Whether the objective was given (otherwise the first variable is used).
    pub explicit_objective: bool,
    pub component: Option<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub systems: Vec<SystemSpec>,
}

/// A diagnostic with the field path it refers to.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct InputError {
    pub path: String,
    pub message: String,
}

fn err(path: &str, e: impl ToString) -> InputError {
    InputError {
        path: path.to_string(),
        message: e.to_string(),
    }
}

pub const DEFAULT_RESOLUTION: u32 = 16;

fn parse_poly(raw: &RawPoly, names: &[String], path: &str) -> Result<IntPolynomial, InputError> {
    match raw {
        RawPoly::Expr(s) => parse_polynomial(s, names).map_err(|e| err(path, e)),
        RawPoly::Terms(terms) => {
            let mut p = IntPolynomial::zero(names.len());
            for (k, t) in terms.iter().enumerate() {
                let tp = format!("{path}[{k}]");
                let c: BigInt = t
                    .coef
                    .trim()
                    .parse()
                    .map_err(|_| err(&format!("{tp}.coef"), format!("not an integer: {:?}", t.coef)))?;
                if t.exp.len() != names.len() {
                    return Err(err(
                        &format!("{tp}.exp"),
                        format!("{} exponents for {} variables", t.exp.len(), names.len()),
                    ));
                }
                p.add_term(Monomial::new(t.exp.clone()), c);
            }
            if p.is_zero() {
                return Err(err(path, "zero polynomial"));
            }
            Ok(p)
        }
    }
}

fn parse_component(raw: &RawComponent, n: usize, path: &str) -> Result<ComponentSpec, InputError> {
    if raw.seed.len() != n {
        return Err(err(&format!("{path}.seed"), format!("{} coordinates for {n} variables", raw.seed.len())));
    }
    if raw.bbox.len() != n {
        return Err(err(&format!("{path}.box"), format!("{} sides for {n} variables", raw.bbox.len())));
    }
    let seed = raw
        .seed
        .iter()
        .enumerate()
        .map(|(j, s)| parse_rational(s).map_err(|e| err(&format!("{path}.seed[{j}]"), e)))
        .collect::<Result<Vec<_>, _>>()?;
    let bbox = raw
        .bbox
        .iter()
        .enumerate()
        .map(|(j, [lo, hi])| {
            let p = format!("{path}.box[{j}]");
            Ok((parse_rational(lo).map_err(|e| err(&p, e))?, parse_rational(hi).map_err(|e| err(&p, e))?))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let res = raw.resolution.unwrap_or(DEFAULT_RESOLUTION);
    ComponentSpec::new(RationalPoint::new(seed), bbox, res).map_err(|e| err(path, e))
}

fn build_system(raw: &RawSystem, path: &str) -> Result<SystemSpec, InputError> {
    let names = raw.variables.clone();
    let vpath = if path.is_empty() { "variables".to_string() } else { format!("{path}.variables") };
    let field = |f: &str| if path.is_empty() { f.to_string() } else { format!("{path}.{f}") };
    if names.is_empty() {
        return Err(err(&vpath, "no variables"));
    }
    for (i, v) in names.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(err(&format!("{vpath}[{i}]"), format!("bad variable name {v:?}")));
        }
        if names[..i].contains(v) {
            return Err(err(&format!("{vpath}[{i}]"), format!("duplicate variable {v:?}")));
        }
    }
    let eqs = raw
        .equalities
        .iter()
        .enumerate()
        .map(|(k, p)| parse_poly(p, &names, &format!("{}[{k}]", field("equalities"))))
        .collect::<Result<Vec<_>, _>>()?;
    let ineqs = raw
        .inequalities
        .iter()
        .enumerate()
        .map(|(k, p)| parse_poly(p, &names, &format!("{}[{k}]", field("inequalities"))))
        .collect::<Result<Vec<_>, _>>()?;
    let objective = match &raw.objective {
        Some(p) => parse_poly(p, &names, &field("objective"))?,
        None => IntPolynomial::var(names.len(), 0),
    };
    let system = SemialgSystem::new(names.len(), eqs, ineqs, objective, raw.d).map_err(|e| match e {
        Error::OddDegree(d) => err(&field("d"), format!("d must be even, got {d}")),
        other => err(if path.is_empty() { "document" } else { path }, other),
    })?;
    let component = raw
        .component
        .as_ref()
        .map(|c| parse_component(c, names.len(), &field("component")))
        .transpose()?;
    Ok(SystemSpec {
        names,
        system,
        d_override: raw.d,
        explicit_objective: raw.objective.is_some(),
        component,
    })
}

impl RawDocument {
    fn top_level(&self) -> Option<RawSystem> {
        let empty = self.variables.is_empty()
            && self.equalities.is_empty()
            && self.inequalities.is_empty()
            && self.objective.is_none()
            && self.d.is_none()
            && self.component.is_none();
        (!empty).then(|| RawSystem {
            variables: self.variables.clone(),
            equalities: self.equalities.clone(),
            inequalities: self.inequalities.clone(),
            objective: self.objective.clone(),
            d: self.d,
            component: self.component.clone(),
        })
    }
}

/// Parses and validates a document; the first problem found is reported.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| err("document", e.to_string().trim_end()))?;
    let systems = match (raw.top_level(), raw.system.is_empty()) {
        (Some(_), false) => {
            return Err(err("document", "give either top-level system fields or [[system]] tables, not both"))
        }
        (Some(sys), true) => vec![build_system(&sys, "")?],
        (None, false) => raw
            .system
            .iter()
            .enumerate()
            .map(|(i, s)| build_system(s, &format!("system[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        (None, true) => return Err(err("document", "no system given")),
    };
    if systems.len() > 2 {
        return Err(err("system", format!("{} systems given, at most 2 supported", systems.len())));
    }
    if systems.len() == 2 && systems[0].names.len() != systems[1].names.len() {
        return Err(err("system[1].variables", "both systems need the same number of variables"));
    }
    Ok(InputDocument { systems })
}

fn raw_system(spec: &SystemSpec) -> RawSystem {
    let poly = |p: &IntPolynomial| RawPoly::Expr(p.to_canonical_string(&spec.names));
    RawSystem {
        variables: spec.names.clone(),
        equalities: spec.system.equalities().iter().map(poly).collect(),
        inequalities: spec.system.inequalities().iter().map(poly).collect(),
        objective: spec.explicit_objective.then(|| poly(spec.system.objective())),
        d: spec.d_override,
        component: spec.component.as_ref().map(|c| RawComponent {
            seed: c.seed.coords.iter().map(|v| v.to_string()).collect(),
            bbox: c.bbox.iter().map(|(lo, hi)| [lo.to_string(), hi.to_string()]).collect(),
            resolution: Some(c.resolution),
        }),
    }
}

/// Canonical TOML text for a validated document.
pub fn serialize(doc: &InputDocument) -> String {
    let raw = if doc.systems.len() == 1 {
        let s = raw_system(&doc.systems[0]);
        RawDocument {
            variables: s.variables,
            equalities: s.equalities,
            inequalities: s.inequalities,
            objective: s.objective,
            d: s.d,
            component: s.component,
            system: Vec::new(),
        }
    } else {
        RawDocument {
            system: doc.systems.iter().map(raw_system).collect(),
            ..RawDocument::default()
        }
    };
    toml::to_string(&raw).expect("documents serialize")
}
