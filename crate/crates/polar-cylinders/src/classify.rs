//! The verdict engine: combines `K^2`, the threshold data, and the
//! generality check into a cylinder-existence decision. Every verdict
//! carries a closed reason tag and an echo of the computed inputs so the
//! answer is auditable.

use num::{One, Signed};
use serde::Serialize;

use crate::certify::{verify_certificate, CylinderCertificate};
use crate::cone::{fujita_data_from_certificate, fujita_face, FujitaData, PeThresholdCertificate};
use crate::families::{build_auxiliary_at, match_auxiliary, nine_points_pattern};
use crate::negcurves::{is_ample, star_check};
use crate::picard::{DivisorClass, SurfaceSpec};
use crate::rational::{format_rational, rat, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoCylinderReason {
    /// Generality holds and `r + K^2 <= 3`.
    TheoremMain,
    /// Nine-point pattern with offset at most 1/4.
    NinePointsLemma,
}

impl NoCylinderReason {
    pub fn tag(self) -> &'static str {
        match self {
            NoCylinderReason::TheoremMain => "theorem-main",
            NoCylinderReason::NinePointsLemma => "nine-points-lemma",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CylinderReason {
    /// Anticanonical polarization on degree at least 4.
    DelPezzo1,
    /// Non-anticanonical polarization on degree at least 3.
    DelPezzo2,
    /// Explicit tangent-pencil construction with certificate.
    ExampleAuxiliary,
}

impl CylinderReason {
    pub fn tag(self) -> &'static str {
        match self {
            CylinderReason::DelPezzo1 => "del-pezzo-1",
            CylinderReason::DelPezzo2 => "del-pezzo-2",
            CylinderReason::ExampleAuxiliary => "example-auxiliary",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    NoCylinder {
        reason: NoCylinderReason,
    },
    Cylinder {
        reason: CylinderReason,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<CylinderCertificate>,
    },
    Unknown {
        note: String,
    },
}

/// Echo of everything the decision consumed.
#[derive(Clone, Debug, Serialize)]
pub struct InputsEcho {
    pub n: usize,
    pub k_squared: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub star: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderVerdict {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub inputs: InputsEcho,
}

/// Decides cylinder existence for an ample polarization on a
/// general-position surface. `n <= 8` computes threshold data by LP;
/// `n = 9` requires the nine-point pattern together with a threshold
/// certificate (`aux`, or the standard one built on demand).
pub fn classify(
    spec: &SurfaceSpec,
    a: &DivisorClass,
    aux: Option<&PeThresholdCertificate>,
) -> Result<CylinderVerdict> {
    spec.validate()?;
    if !spec.is_general_position() {
        return Err(Error::InvalidInput(
            "classification runs on the general-position model".into(),
        ));
    }
    if a.rank() != spec.rank() {
        return Err(Error::DimensionMismatch(spec.rank(), a.rank()));
    }
    let n = spec.blowups();
    let k_squared = spec.k_squared();

    // Generality first: the decision table is vacuous without it.
    let star = star_check(spec)?;
    if !star.admissible() {
        return Ok(CylinderVerdict {
            verdict: Verdict::Unknown {
                note: "generality condition unverified; the decision table does not apply".into(),
            },
            inputs: InputsEcho {
                n,
                k_squared,
                mu: None,
                rank: None,
                star: star.tag(),
            },
        });
    }

    // Threshold data: LP for n <= 8, certificate for n = 9.
    let nine_pattern = nine_points_pattern(spec, a);
    let data: FujitaData = if n <= 8 {
        let report = is_ample(spec, a)?;
        if !report.ample {
            let detail = report
                .witness
                .map(|w| format!("{} pairs to {}", w.label, format_rational(&w.pairing)))
                .unwrap_or_default();
            return Err(Error::NotAmple(detail));
        }
        fujita_face(spec, a)?
    } else {
        let Some((_, ref x)) = nine_pattern else {
            return Err(Error::InvalidInput(
                "nine blow-ups are classified only for polarizations of the form \
                 -K + x(E_a + E_b + E_c + E_d) with 0 < x < 1"
                    .into(),
            ));
        };
        debug_assert!(x.is_positive() && x < &Rational::one());
        let cert = aux.ok_or_else(|| {
            Error::InvalidInput(
                "a pseudo-effective threshold certificate is required when n = 9".into(),
            )
        })?;
        fujita_data_from_certificate(spec, a, cert)?
    };

    let echo = InputsEcho {
        n,
        k_squared,
        mu: Some(format_rational(&data.mu)),
        rank: Some(data.rank),
        star: star.tag(),
    };
    let verdict = decide(spec, a, &data, nine_pattern)?;
    Ok(CylinderVerdict {
        verdict,
        inputs: echo,
    })
}

fn decide(
    spec: &SurfaceSpec,
    a: &DivisorClass,
    data: &FujitaData,
    nine_pattern: Option<(Vec<usize>, Rational)>,
) -> Result<Verdict> {
    let k_squared = spec.k_squared();
    let r = data.rank as i64;

    if r + k_squared <= 3 {
        return Ok(Verdict::NoCylinder {
            reason: NoCylinderReason::TheoremMain,
        });
    }

    // Exact proportionality to -K, not inferred from the rank alone.
    let proportional = {
        let minus_k = -&spec.canonical_class();
        let t = a.degree() / minus_k.degree();
        t.is_positive() && a == &minus_k.scaled(&t)
    };
    if proportional {
        if data.rank != 0 {
            return Ok(Verdict::Unknown {
                note: "anticanonical polarization with nonzero face rank; refusing to guess".into(),
            });
        }
        if k_squared >= 4 {
            return Ok(Verdict::Cylinder {
                reason: CylinderReason::DelPezzo1,
                certificate: None,
            });
        }
        // k_squared <= 3 with r = 0 was already caught above.
        return Ok(Verdict::Unknown {
            note: "anticanonical polarization outside the decision table".into(),
        });
    }
    if data.rank == 0 {
        return Ok(Verdict::Unknown {
            note: "face rank 0 but the polarization is not proportional to -K; \
                   refusing to guess"
                .into(),
        });
    }

    // Constructive branch first among the cylinder cases: when the
    // tangent-pencil family applies it comes with a checkable certificate,
    // which subsumes the bare existence statement.
    if let Some(m) = match_auxiliary(spec, a) {
        let build = build_auxiliary_at(&m.params, &m.tails)?;
        debug_assert!(verify_certificate(spec, &build.certificate)?.pass);
        return Ok(Verdict::Cylinder {
            reason: CylinderReason::ExampleAuxiliary,
            certificate: Some(build.certificate),
        });
    }

    if r >= 1 && k_squared >= 3 {
        return Ok(Verdict::Cylinder {
            reason: CylinderReason::DelPezzo2,
            certificate: None,
        });
    }

    if let Some((_, x)) = nine_pattern {
        if x <= rat(1, 4) {
            return Ok(Verdict::NoCylinder {
                reason: NoCylinderReason::NinePointsLemma,
            });
        }
        return Ok(Verdict::Unknown {
            note: format!(
                "nine-point pattern with x = {} in the open window (1/4, 7/8]: \
                 no decision rule applies",
                format_rational(&x)
            ),
        });
    }

    Ok(Verdict::Unknown {
        note: "no decision rule applies to this polarization".into(),
    })
}

/// Human-readable trace of a verdict.
pub fn explain(v: &CylinderVerdict) -> String {
    let mut out = String::new();
    let inputs = &v.inputs;
    out.push_str(&format!(
        "surface: {} blow-ups, K^2 = {}\n",
        inputs.n, inputs.k_squared
    ));
    if let (Some(mu), Some(rank)) = (&inputs.mu, inputs.rank) {
        out.push_str(&format!(
            "threshold mu = {mu}, face rank r = {rank}, r + K^2 = {}\n",
            rank as i64 + inputs.k_squared
        ));
    }
    out.push_str(&format!("generality: {}\n", inputs.star));
    match &v.verdict {
        Verdict::NoCylinder { reason } => {
            out.push_str(&format!("verdict: no polar cylinder ({})\n", reason.tag()));
        }
        Verdict::Cylinder {
            reason,
            certificate,
        } => {
            out.push_str(&format!("verdict: polar cylinder exists ({})\n", reason.tag()));
            if let Some(cert) = certificate {
                out.push_str(&format!(
                    "certificate: {}\n",
                    crate::certify::summarize_components(cert)
                ));
                out.push_str(&format!("removed curves: {}\n", cert.removed_set_note));
            }
        }
        Verdict::Unknown { note } => {
            out.push_str(&format!("verdict: unknown ({note})\n"));
        }
    }
    out
}
