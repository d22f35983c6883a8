//! Command-line front end: JSON job documents in, JSON reports out.
//!
//! A job document looks like
//!
//! ```json
//! {
//!   "command": "classify",
//!   "surface": {"n": 6, "model": "general-position"},
//!   "A": ["3", "-1", "-1", "-1", "-1", "-1", "-1/16"],
//!   "options": {}
//! }
//! ```
//!
//! Rationals are always `"p"` or `"p/q"` strings with positive `q`; reports
//! never contain floating-point numbers. Exit status is 0 for a successful
//! computation or passing verification, 1 for a failed verification or a
//! violated check, 2 for invalid input.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{self, CylinderCertificate};
use crate::classify::{classify, explain};
use crate::cone::{
    fujita_data_from_certificate, fujita_face, FujitaData, PeThresholdCertificate,
};
use crate::families::{
    build_auxiliary, build_dp2, nine_points_default_certificate, AuxiliaryParams, Dp2Params,
};
use crate::negcurves::{minus_one_classes, minus_two_classes, star_check, StarReport};
use crate::picard::{DivisorClass, SurfaceSpec};
use crate::rational::parse_rational;
use crate::{Error, Result};

pub const COMMANDS: &[&str] = &[
    "classify",
    "fujita",
    "rays",
    "star-check",
    "verify-example",
    "verify-certificate",
];

/// Command-specific options. Rationals stay as strings until the command
/// handler validates them, so documents round-trip byte-identically.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CylinderCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_certificate: Option<PeThresholdCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobDocument {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobDocument {
    fn surface(&self) -> Result<&SurfaceSpec> {
        self.surface
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing field `surface`".into()))
    }

    fn polarization(&self) -> Result<DivisorClass> {
        let surface = self.surface()?;
        let raw = self
            .a
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing field `A`".into()))?;
        if raw.len() != surface.rank() {
            return Err(Error::InvalidInput(format!(
                "field `A` has {} entries, surface rank is {}",
                raw.len(),
                surface.rank()
            )));
        }
        let coeffs = raw
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s)
                    .map_err(|e| Error::InvalidInput(format!("field `A[{i}]`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass::new(coeffs))
    }

    fn option_rational(&self, field: &str, value: &Option<String>) -> Result<crate::rational::Rational> {
        let raw = value
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("missing field `options.{field}`")))?;
        parse_rational(raw)
            .map_err(|e| Error::InvalidInput(format!("field `options.{field}`: {e}")))
    }
}

/// Parses and validates a job document.
pub fn parse_job_document(input: &str) -> Result<JobDocument> {
    if input.len() > 1 << 20 {
        return Err(Error::InvalidInput("document exceeds 1 MiB".into()));
    }
    let doc: JobDocument = serde_json::from_str(input)
        .map_err(|e| Error::InvalidInput(format!("malformed document: {e}")))?;
    if !COMMANDS.contains(&doc.command.as_str()) {
        return Err(Error::InvalidInput(format!(
            "field `command`: unknown command `{}` (expected one of {})",
            doc.command,
            COMMANDS.join(", ")
        )));
    }
    if let Some(surface) = &doc.surface {
        surface
            .validate()
            .map_err(|e| Error::InvalidInput(format!("field `surface`: {e}")))?;
        if let Some(a) = &doc.a {
            if a.len() != surface.rank() {
                return Err(Error::InvalidInput(format!(
                    "field `A` has {} entries, surface rank is {}",
                    a.len(),
                    surface.rank()
                )));
            }
        }
    }
    if let Some(a) = &doc.a {
        for (i, s) in a.iter().enumerate() {
            parse_rational(s)
                .map_err(|e| Error::InvalidInput(format!("field `A[{i}]`: {e}")))?;
        }
    }
    Ok(doc)
}

/// Canonical serialization: compact JSON with fixed field order.
pub fn serialize_job_document(doc: &JobDocument) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

#[derive(Debug)]
pub struct RunOutput {
    pub report: Value,
    pub exit_code: i32,
}

/// Runs a parsed document and produces the report envelope.
pub fn run_job(doc: &JobDocument) -> RunOutput {
    let command = doc.command.clone();
    match dispatch(doc) {
        Ok((result, exit_code)) => RunOutput {
            report: json!({
                "command": command,
                "status": if exit_code == 0 { "ok" } else { "fail" },
                "result": result,
            }),
            exit_code,
        },
        Err(err) => RunOutput {
            report: json!({
                "command": command,
                "status": "error",
                "error": err.to_string(),
            }),
            exit_code: err.exit_code(),
        },
    }
}

/// Parse-and-run convenience used by the binary.
pub fn run_input(input: &str) -> RunOutput {
    match parse_job_document(input) {
        Ok(doc) => run_job(&doc),
        Err(err) => RunOutput {
            report: json!({
                "status": "error",
                "error": err.to_string(),
            }),
            exit_code: err.exit_code(),
        },
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn dispatch(doc: &JobDocument) -> Result<(Value, i32)> {
    match doc.command.as_str() {
        "classify" => cmd_classify(doc),
        "fujita" => cmd_fujita(doc),
        "rays" => cmd_rays(doc),
        "star-check" => cmd_star_check(doc),
        "verify-example" => cmd_verify_example(doc),
        "verify-certificate" => cmd_verify_certificate(doc),
        other => Err(Error::InvalidInput(format!("unknown command `{other}`"))),
    }
}

/// The standard nine-point certificate is supplied implicitly when the
/// pattern matches and the document does not carry one.
fn threshold_certificate_for(
    doc: &JobDocument,
    spec: &SurfaceSpec,
    a: &DivisorClass,
) -> Option<PeThresholdCertificate> {
    doc.options
        .threshold_certificate
        .clone()
        .or_else(|| nine_points_default_certificate(spec, a))
}

fn cmd_classify(doc: &JobDocument) -> Result<(Value, i32)> {
    let spec = doc.surface()?;
    let a = doc.polarization()?;
    let cert = threshold_certificate_for(doc, spec, &a);
    let verdict = classify(spec, &a, cert.as_ref())?;
    let mut result = to_value(&verdict);
    result["explanation"] = Value::String(explain(&verdict));
    Ok((result, 0))
}

fn fujita_result(data: &FujitaData, spec: &SurfaceSpec) -> Value {
    json!({
        "mu": crate::rational::format_rational(&data.mu),
        "r": data.rank,
        "k_squared": spec.k_squared(),
        "face": to_value(&data.face_classes),
    })
}

fn cmd_fujita(doc: &JobDocument) -> Result<(Value, i32)> {
    let spec = doc.surface()?;
    let a = doc.polarization()?;
    let data = if spec.is_general_position() && spec.blowups() == 9 {
        let cert = threshold_certificate_for(doc, spec, &a).ok_or_else(|| {
            Error::InvalidInput(
                "nine blow-ups need `options.threshold_certificate` (or the standard \
                 nine-point pattern)"
                    .into(),
            )
        })?;
        fujita_data_from_certificate(spec, &a, &cert)?
    } else {
        fujita_face(spec, &a)?
    };
    Ok((fujita_result(&data, spec), 0))
}

fn cmd_rays(doc: &JobDocument) -> Result<(Value, i32)> {
    let spec = doc.surface()?;
    if !spec.is_general_position() {
        return Err(Error::InvalidInput(
            "ray enumeration runs on the general-position model".into(),
        ));
    }
    let kind = doc.options.kind.as_deref().unwrap_or("minus-one");
    let classes = match kind {
        "minus-one" => minus_one_classes(spec.blowups())?,
        "minus-two" => minus_two_classes(spec.blowups())?,
        other => {
            return Err(Error::InvalidInput(format!(
                "field `options.kind`: expected `minus-one` or `minus-two`, got `{other}`"
            )))
        }
    };
    Ok((
        json!({
            "n": spec.blowups(),
            "kind": kind,
            "count": classes.len(),
            "classes": to_value(&classes),
        }),
        0,
    ))
}

fn cmd_star_check(doc: &JobDocument) -> Result<(Value, i32)> {
    let spec = doc.surface()?;
    let report = star_check(spec)?;
    let exit = match report {
        StarReport::Violated { .. } => 1,
        _ => 0,
    };
    Ok((to_value(&report), exit))
}

fn cmd_verify_example(doc: &JobDocument) -> Result<(Value, i32)> {
    let example = doc
        .options
        .example
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("missing field `options.example`".into()))?;
    match example {
        "auxiliary" => {
            let params = AuxiliaryParams {
                k: doc
                    .options
                    .k
                    .ok_or_else(|| Error::InvalidInput("missing field `options.k`".into()))?,
                eps1: doc.option_rational("eps1", &doc.options.eps1)?,
                eps2: doc.option_rational("eps2", &doc.options.eps2)?,
                x: doc.option_rational("x", &doc.options.x)?,
            };
            let build = build_auxiliary(&params)?;
            let verification = certify::verify_certificate(&build.spec, &build.certificate)?;
            let exit = if verification.pass { 0 } else { 1 };
            Ok((
                json!({
                    "example": "auxiliary",
                    "n": build.spec.blowups(),
                    "polarization": to_value(&build.polarization),
                    "certificate": to_value(&build.certificate),
                    "verification": to_value(&verification),
                }),
                exit,
            ))
        }
        "dp2" => {
            let params = Dp2Params {
                eps: doc.option_rational("eps", &doc.options.eps)?,
                x: doc.option_rational("x", &doc.options.x)?,
            };
            let report = build_dp2(&params)?;
            let ok = report.identities.iter().all(|i| i.ok);
            Ok((to_value(&report), if ok { 0 } else { 1 }))
        }
        other => Err(Error::InvalidInput(format!(
            "field `options.example`: expected `auxiliary` or `dp2`, got `{other}`"
        ))),
    }
}

fn cmd_verify_certificate(doc: &JobDocument) -> Result<(Value, i32)> {
    let spec = doc.surface()?;
    let cert = doc
        .options
        .certificate
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("missing field `options.certificate`".into()))?;
    let report = certify::verify_certificate(spec, cert)?;
    let exit = if report.pass { 0 } else { 1 };
    Ok((to_value(&report), exit))
}
