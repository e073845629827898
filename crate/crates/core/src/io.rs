//! JSON file formats.
//!
//! Rationals serialize as exact strings `"p/q"` (integers may appear
//! plain); no floating point appears anywhere on the exact path. One file
//! per instance, one per molecule/operator, one per certificate.
//!
//! Instance:
//! `{"metric": {"labels": [...], "d": [[...]]},
//!   "space": {"dim": k, "norm": "l1" | "linf" | {"facets": [[...]]}}}`
//!
//! Molecule: `{"terms": [{"x": i, "y": j, "e": [...]}]}` or
//! `{"coeffs": {"1": [...]}}`. Operator: `{"values": [[...], ...]}` with
//! row 0 all zeros. Functional: `{"values": [...]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cert::NormResult;
use crate::laws::LawReport;
use crate::lp::lp_verify;
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::molecule::{FormalRepresentation, Instance, Molecule, MoleculeError, RepTerm};
use crate::operator::{LipFunctional, LipOperator};
use crate::rat::Rat;
use crate::space::{NormSpec, PolyhedralSpace, SpaceError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid metric: {0}")]
    Metric(#[from] MetricError),
    #[error("invalid space: {0}")]
    Space(#[from] SpaceError),
    #[error("invalid data: {0}")]
    Molecule(#[from] MoleculeError),
    #[error("{0}")]
    Other(String),
}

fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, IoError> {
    serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct MetricJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    d: Vec<Vec<Rat>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NormJson {
    Named(String),
    Facets { facets: Vec<Vec<Rat>> },
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    dim: usize,
    norm: NormJson,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    metric: MetricJson,
    space: SpaceJson,
}

pub fn parse_instance(json: &str) -> Result<Instance, IoError> {
    let raw: InstanceJson = from_json(json)?;
    let metric = match raw.metric.labels {
        Some(labels) => FiniteMetricSpace::with_labels(labels, raw.metric.d)?,
        None => FiniteMetricSpace::validate_metric(raw.metric.d)?,
    };
    let spec = match raw.space.norm {
        NormJson::Named(name) => match name.as_str() {
            "l1" => NormSpec::L1,
            "linf" => NormSpec::LInf,
            other => {
                return Err(IoError::Other(format!(
                    "unknown norm name `{other}` (expected \"l1\", \"linf\" or facets)"
                )))
            }
        },
        NormJson::Facets { facets } => NormSpec::Facets(facets),
    };
    let space = PolyhedralSpace::build_space(raw.space.dim, &spec)?;
    Ok(Instance::new(metric, space))
}

pub fn instance_to_json(instance: &Instance) -> String {
    let raw = InstanceJson {
        metric: MetricJson {
            labels: Some(instance.metric.labels().to_vec()),
            d: instance.metric.matrix().clone(),
        },
        space: SpaceJson {
            dim: instance.dim(),
            norm: NormJson::Facets {
                facets: instance.space.facets().to_vec(),
            },
        },
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MoleculeJson {
    Terms { terms: Vec<RepTerm> },
    Coeffs { coeffs: BTreeMap<String, Vec<Rat>> },
}

pub fn parse_molecule(json: &str, instance: &Instance) -> Result<Molecule, IoError> {
    let raw: MoleculeJson = from_json(json)?;
    match raw {
        MoleculeJson::Terms { terms } => Ok(Molecule::from_representation(
            instance.clone(),
            &FormalRepresentation::new(terms),
        )?),
        MoleculeJson::Coeffs { coeffs } => {
            let mut map = BTreeMap::new();
            for (k, v) in coeffs {
                let idx: usize = k
                    .parse()
                    .map_err(|_| IoError::Other(format!("bad point index `{k}`")))?;
                map.insert(idx, v);
            }
            Ok(Molecule::from_coeffs(instance.clone(), map)?)
        }
    }
}

pub fn molecule_to_json(u: &Molecule) -> String {
    let coeffs: BTreeMap<String, Vec<Rat>> = u
        .coeffs()
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    serde_json::to_string_pretty(&MoleculeJson::Coeffs { coeffs }).expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    values: Vec<Vec<Rat>>,
}

pub fn parse_operator(json: &str, instance: &Instance) -> Result<LipOperator, IoError> {
    let raw: OperatorJson = from_json(json)?;
    Ok(LipOperator::new(instance.clone(), raw.values)?)
}

pub fn operator_to_json(f: &LipOperator) -> String {
    serde_json::to_string_pretty(&OperatorJson {
        values: f.values().to_vec(),
    })
    .expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct FunctionalJson {
    values: Vec<Rat>,
}

pub fn parse_functional(json: &str, instance: &Instance) -> Result<LipFunctional, IoError> {
    let raw: FunctionalJson = from_json(json)?;
    Ok(LipFunctional::new(instance.metric.clone(), raw.values)?)
}

/// A norm certificate as written by the CLI: the norm tag plus the full
/// result with witnesses and solved LPs.
#[derive(Serialize, Deserialize)]
pub struct NormCertificate {
    pub norm: String,
    pub result: NormResult,
}

pub fn certificate_to_json(cert: &NormCertificate) -> String {
    serde_json::to_string_pretty(cert).expect("serializable")
}

pub fn parse_certificate(json: &str) -> Result<NormCertificate, IoError> {
    from_json(json)
}

pub fn report_to_json(report: &LawReport) -> String {
    serde_json::to_string_pretty(report).expect("serializable")
}

pub fn parse_report(json: &str) -> Result<LawReport, IoError> {
    from_json(json)
}

/// Re-checks a certificate against the instance and molecule it claims to
/// describe: every embedded LP re-verifies, the primal witness is a valid
/// representation of the molecule, and the dual witness attains what it
/// claims. Returns the first failing condition.
pub fn check_certificate(u: &Molecule, cert: &NormCertificate) -> Result<(), String> {
    let r = &cert.result;
    if r.value.lower() > r.value.upper() {
        return Err("interval bounds are crossed".into());
    }
    for lp in &r.lp_certificates {
        lp_verify(&lp.problem, &lp.solution)
            .map_err(|e| format!("LP certificate `{}` fails: {e}", lp.label))?;
    }
    if let Some(pw) = &r.primal_witness {
        let rebuilt = Molecule::from_representation(
            u.instance().clone(),
            &FormalRepresentation::new(pw.terms.clone()),
        )
        .map_err(|e| format!("primal witness does not parse: {e}"))?;
        if !rebuilt.same_element(u) {
            return Err("primal witness does not represent the molecule".into());
        }
        if let Some(w) = &pw.weights {
            if w.len() != pw.terms.len() || w.iter().any(|x| !x.is_positive()) {
                return Err("primal witness weights must be positive per term".into());
            }
        }
        if pw.cost < *r.value.upper() && cert.norm == "pi" {
            return Err("primal witness cost below the reported value".into());
        }
    }
    if let Some(dw) = &r.dual_witness {
        let f = LipOperator::new(u.instance().clone(), dw.values.clone())
            .map_err(|e| format!("dual witness does not parse: {e}"))?;
        let attained = u
            .pairing(&f)
            .map_err(|e| format!("dual witness pairing fails: {e}"))?;
        if attained.abs() != dw.attained {
            return Err("dual witness pairing differs from the recorded value".into());
        }
        if dw.attained > &dw.bound * r.value.upper() {
            return Err("dual witness violates its own bound".into());
        }
    }
    if cert.norm == "pi" {
        let (Some(pw), Some(dw)) = (&r.primal_witness, &r.dual_witness) else {
            return Err("projective certificate must carry both witnesses".into());
        };
        let exact = r
            .value
            .lower()
            .clone();
        let rep_cost =
            FormalRepresentation::new(pw.terms.clone()).projective_cost(u.instance());
        if rep_cost != exact {
            return Err("primal representation cost differs from the value".into());
        }
        if dw.attained != exact {
            return Err("dual witness does not attain the value".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::pi_norm;

    fn sample_instance_json() -> &'static str {
        r#"{
            "metric": {"d": [["0","1","2"],["1","0","1"],["2","1","0"]]},
            "space": {"dim": 1, "norm": "linf"}
        }"#
    }

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(sample_instance_json()).unwrap();
        assert_eq!(inst.n_points(), 3);
        assert_eq!(inst.dim(), 1);
        let json = instance_to_json(&inst);
        let back = parse_instance(&json).unwrap();
        assert_eq!(back.metric, inst.metric);
        assert_eq!(back.space, inst.space);
    }

    #[test]
    fn molecule_both_schemas() {
        let inst = parse_instance(sample_instance_json()).unwrap();
        let via_terms =
            parse_molecule(r#"{"terms": [{"x": 1, "y": 0, "e": ["1"]}]}"#, &inst).unwrap();
        let via_coeffs = parse_molecule(r#"{"coeffs": {"1": ["1"]}}"#, &inst).unwrap();
        assert!(via_terms.same_element(&via_coeffs));
        let json = molecule_to_json(&via_terms);
        let back = parse_molecule(&json, &inst).unwrap();
        assert!(back.same_element(&via_terms));
    }

    #[test]
    fn operator_round_trip() {
        let inst = parse_instance(sample_instance_json()).unwrap();
        let f = parse_operator(r#"{"values": [["0"],["1"],["2"]]}"#, &inst).unwrap();
        let back = parse_operator(&operator_to_json(&f), &inst).unwrap();
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn bad_inputs_are_diagnosed() {
        assert!(matches!(
            parse_instance("{"),
            Err(IoError::Json(_))
        ));
        let bad_metric = r#"{
            "metric": {"d": [["0","1","3"],["1","0","1"],["3","1","0"]]},
            "space": {"dim": 1, "norm": "linf"}
        }"#;
        match parse_instance(bad_metric) {
            Err(IoError::Metric(MetricError::TriangleViolation(0, 1, 2))) => {}
            other => panic!("expected triangle violation, got {other:?}"),
        }
        let inst = parse_instance(sample_instance_json()).unwrap();
        assert!(parse_operator(r#"{"values": [["1"],["0"],["0"]]}"#, &inst).is_err());
    }

    #[test]
    fn certificate_round_trip_and_check() {
        let inst = parse_instance(sample_instance_json()).unwrap();
        let u = parse_molecule(r#"{"coeffs": {"1": ["1"], "2": ["1"]}}"#, &inst).unwrap();
        let result = pi_norm(&u).unwrap();
        let cert = NormCertificate {
            norm: "pi".into(),
            result,
        };
        let json = certificate_to_json(&cert);
        let back = parse_certificate(&json).unwrap();
        check_certificate(&u, &back).unwrap();
    }

    #[test]
    fn tampered_certificate_rejected() {
        let inst = parse_instance(sample_instance_json()).unwrap();
        let u = parse_molecule(r#"{"coeffs": {"1": ["1"], "2": ["1"]}}"#, &inst).unwrap();
        let mut cert = NormCertificate {
            norm: "pi".into(),
            result: pi_norm(&u).unwrap(),
        };
        if let Some(dw) = &mut cert.result.dual_witness {
            dw.attained += Rat::new(1, 1_000_000);
        }
        assert!(check_certificate(&u, &cert).is_err());
    }
}
