//! Builders and exact verifiers for the explicit cylinder constructions:
//! the tangent-pencil family on surfaces of degree at most 3, its
//! nine-point specialization, and the four-step tower whose contraction
//! violates the generality condition.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::certify::{CertComponent, CylinderCertificate};
use crate::cone::{PeThresholdCertificate, WeightedClass};
use crate::negcurves::{star_check, AmpleReport, AmpleWitness, StarReport};
use crate::picard::{
    canonical_class, contract, CenterKind, CenterSpec, CurveDecl, DivisorClass, SurfaceSpec,
    Tower,
};
use crate::rational::{format_rational, rat, Rational};
use crate::{Error, Result};

/// Parameters of the tangent-pencil family: a conic through five of the
/// blown-up points, a tangent line, and one pencil conic through each of
/// the remaining `k` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryParams {
    pub k: usize,
    pub eps1: Rational,
    pub eps2: Rational,
    pub x: Rational,
}

impl AuxiliaryParams {
    /// Checks `1/2 > eps1 > eps2/2 > 0` and `1 > x > 1 - (1-2 eps1)/(2k)`,
    /// reporting the first violated inequality.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::ParameterWindow("k must be at least 1".into()));
        }
        if self.k > 4 {
            return Err(Error::ParameterWindow(
                "k at most 4: the construction needs 5 + k <= 9 blow-ups".into(),
            ));
        }
        let half = rat(1, 2);
        if !(self.eps1 < half) {
            return Err(Error::ParameterWindow(format!(
                "requires eps1 < 1/2, got eps1 = {}",
                format_rational(&self.eps1)
            )));
        }
        let half_eps2 = &self.eps2 * &half;
        if !(self.eps1 > half_eps2) {
            return Err(Error::ParameterWindow(format!(
                "requires eps1 > eps2/2, got eps1 = {}, eps2 = {}",
                format_rational(&self.eps1),
                format_rational(&self.eps2)
            )));
        }
        if !self.eps2.is_positive() {
            return Err(Error::ParameterWindow(format!(
                "requires eps2 > 0, got eps2 = {}",
                format_rational(&self.eps2)
            )));
        }
        if !(self.x < Rational::one()) {
            return Err(Error::ParameterWindow(format!(
                "requires x < 1, got x = {}",
                format_rational(&self.x)
            )));
        }
        let lower = Rational::one() - self.pencil_share();
        if !(self.x > lower) {
            return Err(Error::ParameterWindow(format!(
                "requires x > 1 - (1 - 2 eps1)/(2k) = {}, got x = {}",
                format_rational(&lower),
                format_rational(&self.x)
            )));
        }
        Ok(())
    }

    /// `(1 - 2 eps1) / (2k)`: the coefficient each pencil conic carries.
    fn pencil_share(&self) -> Rational {
        let numer = Rational::one() - &self.eps1 * &rat(2, 1);
        numer / rat(2 * self.k as i64, 1)
    }
}

/// A built family instance: the surface, the polarization, and the
/// class-level cylinder certificate.
#[derive(Clone, Debug)]
pub struct AuxiliaryBuild {
    pub spec: SurfaceSpec,
    pub polarization: DivisorClass,
    pub certificate: CylinderCertificate,
}

/// Canonical layout: the conic passes through the first five points, the
/// tails sit at indices `6..=5+k`.
pub fn build_auxiliary(params: &AuxiliaryParams) -> Result<AuxiliaryBuild> {
    let n = 5 + params.k;
    let tails: Vec<usize> = (6..=n).collect();
    build_auxiliary_at(params, &tails)
}

/// Same construction with the tail exceptionals at arbitrary (1-based)
/// indices; the conic runs through the complementary five points.
pub fn build_auxiliary_at(params: &AuxiliaryParams, tails: &[usize]) -> Result<AuxiliaryBuild> {
    params.validate()?;
    let n = 5 + params.k;
    if tails.len() != params.k {
        return Err(Error::InvalidInput(format!(
            "{} tail indices for k = {}",
            tails.len(),
            params.k
        )));
    }
    let mut seen = vec![false; n + 1];
    for &t in tails {
        if t == 0 || t > n || seen[t] {
            return Err(Error::InvalidInput(format!("bad tail index {t}")));
        }
        seen[t] = true;
    }
    let conic_points: Vec<usize> = (1..=n).filter(|i| !seen[*i]).collect();
    debug_assert_eq!(conic_points.len(), 5);

    let spec = SurfaceSpec::general_position(n);
    let minus_k = -&canonical_class(n);
    let x_tail: DivisorClass = tails.iter().fold(DivisorClass::zero(n), |acc, &t| {
        &acc + &DivisorClass::exceptional(n, t)
    });
    let polarization = &minus_k + &x_tail.scaled(&params.x);

    let conic_class = conic_points.iter().fold(
        DivisorClass::line(n).scaled(&rat(2, 1)),
        |acc, &i| &acc - &DivisorClass::exceptional(n, i),
    );
    let pencil_share = params.pencil_share();
    let half = rat(1, 2);
    let conic_coeff = Rational::one() + &params.eps1 - &params.eps2 * &half;
    let point_coeff = &params.eps1 - &(&params.eps2 * &half);
    let tail_coeff = &params.x + &pencil_share - Rational::one();

    let mut components = vec![
        CertComponent {
            label: "C".into(),
            class: conic_class,
            coeff: conic_coeff,
        },
        CertComponent {
            label: "L".into(),
            class: DivisorClass::line(n),
            coeff: params.eps2.clone(),
        },
    ];
    for &i in &conic_points {
        components.push(CertComponent {
            label: format!("E{i}"),
            class: DivisorClass::exceptional(n, i),
            coeff: point_coeff.clone(),
        });
    }
    for &t in tails {
        // Pencil member through the t-th point: 2H - E_t.
        components.push(CertComponent {
            label: format!("C{t}"),
            class: &DivisorClass::line(n).scaled(&rat(2, 1)) - &DivisorClass::exceptional(n, t),
            coeff: pencil_share.clone(),
        });
    }
    for &t in tails {
        components.push(CertComponent {
            label: format!("E{t}"),
            class: DivisorClass::exceptional(n, t),
            coeff: tail_coeff.clone(),
        });
    }

    let certificate = CylinderCertificate {
        target: polarization.clone(),
        components,
        removed_set_note: format!(
            "conic through points {conic_points:?}, a tangent line, the pencil \
             conics through points {tails:?}, and all {n} exceptional curves"
        ),
    };
    let sum = certificate
        .components
        .iter()
        .fold(DivisorClass::zero(n), |acc, c| {
            &acc + &c.class.scaled(&c.coeff)
        });
    if sum != polarization {
        return Err(Error::IdentityResidual {
            name: "tangent-pencil decomposition".into(),
            residual: format!("{}", &sum - &polarization),
        });
    }
    Ok(AuxiliaryBuild {
        spec,
        polarization,
        certificate,
    })
}

/// Outcome of recognizing a polarization as a tangent-pencil instance.
#[derive(Clone, Debug)]
pub struct AuxiliaryMatch {
    pub params: AuxiliaryParams,
    /// 1-based indices of the offset exceptionals.
    pub tails: Vec<usize>,
}

/// Splits `A + K` as an equal offset `x` over a set of basis exceptionals,
/// when it has that shape.
fn equal_exceptional_offset(a: &DivisorClass) -> Option<(Vec<usize>, Rational)> {
    let offset = a + &canonical_class(a.blowups());
    if !offset.degree().is_zero() {
        return None;
    }
    let mut positions = Vec::new();
    let mut value: Option<Rational> = None;
    for i in 1..a.rank() {
        let c = offset.coeff(i);
        if c.is_zero() {
            continue;
        }
        match &value {
            None => value = Some(c.clone()),
            Some(v) if v == c => {}
            _ => return None,
        }
        positions.push(i);
    }
    value.map(|v| (positions, v))
}

/// Recognizes `A = -K + x (E_{t_1} + ... + E_{t_k})` with `k = n - 5` equal
/// offsets and `x` above the family threshold `1 - 1/(2k)`; the witness
/// parameters `eps1 = eps2 = (1 - 2k(1-x))/4` then satisfy the full window.
pub fn match_auxiliary(spec: &SurfaceSpec, a: &DivisorClass) -> Option<AuxiliaryMatch> {
    if !spec.is_general_position() || a.rank() != spec.rank() {
        return None;
    }
    let n = spec.blowups();
    if !(6..=9).contains(&n) {
        return None;
    }
    let k = n - 5;
    let (tails, x) = equal_exceptional_offset(a)?;
    if tails.len() != k || !x.is_positive() || x >= Rational::one() {
        return None;
    }
    // Threshold: x > 1 - 1/(2k).
    let threshold = Rational::one() - rat(1, 2 * k as i64);
    if x <= threshold {
        return None;
    }
    let one = Rational::one();
    let eps1 = (&one - &(rat(2 * k as i64, 1) * (&one - &x))) / rat(4, 1);
    let params = AuxiliaryParams {
        k,
        eps1: eps1.clone(),
        eps2: eps1,
        x,
    };
    debug_assert!(params.validate().is_ok());
    Some(AuxiliaryMatch { params, tails })
}

/// Recognizes the nine-point pattern `A = -K + x(E_a + E_b + E_c + E_d)`
/// with `0 < x < 1`.
pub fn nine_points_pattern(spec: &SurfaceSpec, a: &DivisorClass) -> Option<(Vec<usize>, Rational)> {
    if !spec.is_general_position() || spec.blowups() != 9 || a.rank() != spec.rank() {
        return None;
    }
    let (tails, x) = equal_exceptional_offset(a)?;
    if tails.len() == 4 && x.is_positive() && x < Rational::one() {
        Some((tails, x))
    } else {
        None
    }
}

/// The standard threshold certificate for the nine-point pattern:
/// `mu = 1`, boundary class `x (E_a + ... + E_d)` decomposed over the four
/// exceptionals, nef witness `H`.
pub fn nine_points_default_certificate(
    spec: &SurfaceSpec,
    a: &DivisorClass,
) -> Option<PeThresholdCertificate> {
    let (tails, x) = nine_points_pattern(spec, a)?;
    Some(PeThresholdCertificate {
        mu: Rational::one(),
        decomposition: tails
            .iter()
            .map(|&t| WeightedClass {
                class: DivisorClass::exceptional(9, t),
                coeff: x.clone(),
            })
            .collect(),
        nef_witness: DivisorClass::line(9),
    })
}

/// Parameters of the tower example: `0 < eps < 1/3`, `eps > x > 3 eps - 1`,
/// `x > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dp2Params {
    pub eps: Rational,
    pub x: Rational,
}

impl Dp2Params {
    pub fn validate(&self) -> Result<()> {
        if !self.eps.is_positive() {
            return Err(Error::ParameterWindow(format!(
                "requires eps > 0, got {}",
                format_rational(&self.eps)
            )));
        }
        if !(self.eps < rat(1, 3)) {
            return Err(Error::ParameterWindow(format!(
                "requires eps < 1/3, got {}",
                format_rational(&self.eps)
            )));
        }
        if !self.x.is_positive() {
            return Err(Error::ParameterWindow(format!(
                "requires x > 0, got {}",
                format_rational(&self.x)
            )));
        }
        if !(self.x < self.eps) {
            return Err(Error::ParameterWindow(format!(
                "requires x < eps, got x = {}, eps = {}",
                format_rational(&self.x),
                format_rational(&self.eps)
            )));
        }
        let lower = &self.eps * &rat(3, 1) - Rational::one();
        if !(self.x > lower) {
            return Err(Error::ParameterWindow(format!(
                "requires x > 3 eps - 1 = {}, got x = {}",
                format_rational(&lower),
                format_rational(&self.x)
            )));
        }
        Ok(())
    }
}

/// The ten-step tower: two lines, seven points (one on the first line, six
/// on the second), then three infinitely-near blow-ups over the first
/// point. The center of `e` is a general point of `H`; building `e` over
/// the surface carrying `H` is the only reading under which the
/// anticanonical decomposition closes exactly.
pub fn dp2_tower() -> SurfaceSpec {
    let on = |names: &[&str]| CenterKind::OnCurves {
        curves: names.iter().map(|s| s.to_string()).collect(),
    };
    let centers = vec![
        CenterSpec {
            name: "F1".into(),
            kind: on(&["L1", "L12"]),
        },
        CenterSpec {
            name: "F2".into(),
            kind: on(&["L2", "L12"]),
        },
        CenterSpec {
            name: "F3".into(),
            kind: on(&["L2"]),
        },
        CenterSpec {
            name: "F4".into(),
            kind: on(&["L2"]),
        },
        CenterSpec {
            name: "F5".into(),
            kind: on(&["L2"]),
        },
        CenterSpec {
            name: "F6".into(),
            kind: on(&["L2"]),
        },
        CenterSpec {
            name: "F7".into(),
            kind: on(&["L2"]),
        },
        CenterSpec {
            name: "G".into(),
            kind: CenterKind::IntersectionOf {
                a: "F1".into(),
                b: "L1".into(),
            },
        },
        CenterSpec {
            name: "H".into(),
            kind: CenterKind::IntersectionOf {
                a: "F1".into(),
                b: "G".into(),
            },
        },
        CenterSpec {
            name: "E".into(),
            kind: on(&["H"]),
        },
    ];
    let curves = vec![
        CurveDecl {
            name: "L1".into(),
            plane_degree: 1,
        },
        CurveDecl {
            name: "L2".into(),
            plane_degree: 1,
        },
        CurveDecl {
            name: "L12".into(),
            plane_degree: 1,
        },
    ];
    SurfaceSpec::tower(centers, curves)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: DivisorClass,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionStepReport {
    pub curve: String,
    #[serde(with = "crate::rational::serde_str")]
    pub self_intersection: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushedCurve {
    pub curve: String,
    pub class: DivisorClass,
    #[serde(with = "crate::rational::serde_str")]
    pub self_intersection: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Dp2Report {
    pub identities: Vec<IdentityCheck>,
    pub contraction_steps: Vec<ContractionStepReport>,
    /// Pushforwards of the non-contracted tracked curves, in ambient
    /// coordinates of the orthogonal complement.
    pub pushforward: Vec<PushedCurve>,
    #[serde(with = "crate::rational::serde_str")]
    pub k_squared_contracted: Rational,
    /// `A = -K + x * (pushed L12)` on the contracted surface.
    pub polarization: DivisorClass,
    pub ample_partial: AmpleReport,
    pub star: StarReport,
}

/// Builds the tower, verifies the three decomposition identities exactly,
/// contracts `L1, G, H`, and reports the contracted-side arithmetic.
pub fn build_dp2(params: &Dp2Params) -> Result<Dp2Report> {
    params.validate()?;
    let spec = dp2_tower();
    let tower = Tower::elaborate(&spec)?;
    let n = spec.blowups();
    let eps = &params.eps;
    let x = &params.x;
    let one = Rational::one();

    let class = |name: &str| -> DivisorClass {
        tower
            .class_of(name)
            .cloned()
            .expect("tower tracks every named curve")
    };
    let minus_k = -&canonical_class(n);

    let two_m_eps = rat(2, 1) - eps;
    let one_p_eps = &one + eps;
    let one_m_eps = &one - eps;
    let two_m_2eps = rat(2, 1) - &(eps * &rat(2, 1));
    let two_m_3eps = rat(2, 1) - &(eps * &rat(3, 1));
    let one_m_3eps = &one - &(eps * &rat(3, 1));

    let mut identities = Vec::new();
    let mut check = |name: &str, target: &DivisorClass, parts: &[(Rational, DivisorClass)]| {
        let sum = parts.iter().fold(DivisorClass::zero(target.blowups()), |acc, (c, cl)| {
            &acc + &cl.scaled(c)
        });
        let residual = &sum - target;
        identities.push(IdentityCheck {
            name: name.into(),
            ok: residual.is_zero(),
            residual,
        });
    };

    // Anticanonical decomposition over the eleven tracked curves.
    let mut parts1: Vec<(Rational, DivisorClass)> = vec![
        (two_m_eps.clone(), class("L1")),
        (one_p_eps.clone(), class("L2")),
        (one_m_eps.clone(), class("F1")),
        (two_m_2eps.clone(), class("G")),
        (two_m_3eps.clone(), class("H")),
        (one_m_3eps.clone(), class("E")),
    ];
    for i in 2..=7 {
        parts1.push((eps.clone(), class(&format!("F{i}"))));
    }
    check("anticanonical", &minus_k, &parts1);

    // Polarized decomposition of -K + x L12. The eleven curves are a lattice
    // basis, so the coefficients are forced: L12 = L1 + G + H + E - F2,
    // which puts the extra x on L1, G, H, E and takes it off F2.
    let target2 = &minus_k + &class("L12").scaled(x);
    let mut parts2: Vec<(Rational, DivisorClass)> = vec![
        (&two_m_eps + x, class("L1")),
        (one_p_eps.clone(), class("L2")),
        (one_m_eps.clone(), class("F1")),
        (eps - x, class("F2")),
        (&two_m_2eps + x, class("G")),
        (&two_m_3eps + x, class("H")),
        (&one_m_3eps + x, class("E")),
    ];
    for i in 3..=7 {
        parts2.push((eps.clone(), class(&format!("F{i}"))));
    }
    check("polarized", &target2, &parts2);

    // Contract L1, G, H and push everything forward.
    let map = contract(&spec, &["L1", "G", "H"])?;
    let contraction_steps = map
        .steps()
        .iter()
        .map(|s| ContractionStepReport {
            curve: s.name.clone(),
            self_intersection: s.self_intersection.clone(),
        })
        .collect();

    let push = |name: &str| -> Result<DivisorClass> { map.push_ambient(&class(name)) };
    let polarization = {
        let k_pushed = map.push_ambient(&minus_k)?;
        &k_pushed + &push("L12")?.scaled(x)
    };

    let mut parts3: Vec<(Rational, DivisorClass)> = vec![
        (one_p_eps.clone(), push("L2")?),
        (one_m_eps.clone(), push("F1")?),
        (eps - x, push("F2")?),
        (&one_m_3eps + x, push("E")?),
    ];
    for i in 3..=7 {
        parts3.push((eps.clone(), push(&format!("F{i}"))?));
    }
    check("contracted", &polarization, &parts3);

    for identity in &identities {
        if !identity.ok {
            return Err(Error::IdentityResidual {
                name: identity.name.clone(),
                residual: format!("{}", identity.residual),
            });
        }
    }

    let survivors = [
        "L2", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "E", "L12",
    ];
    let mut pushforward = Vec::new();
    for name in survivors {
        let pushed = push(name)?;
        pushforward.push(PushedCurve {
            curve: name.into(),
            self_intersection: pushed.self_intersection(),
            class: pushed,
        });
    }

    let k_pushed = map.push_ambient(&canonical_class(n))?;
    let k_squared_contracted = k_pushed.self_intersection();

    // Partial ampleness of A on the contracted surface, over the tracked
    // survivors only.
    let mut ample = AmpleReport {
        ample: true,
        partial: true,
        witness: None,
    };
    let square = polarization.self_intersection();
    if !square.is_positive() {
        ample.ample = false;
        ample.witness = Some(AmpleWitness {
            label: "self-intersection".into(),
            class: polarization.clone(),
            pairing: square,
        });
    } else {
        for pc in &pushforward {
            let pairing = polarization.intersect(&pc.class)?;
            if !pairing.is_positive() {
                ample.ample = false;
                ample.witness = Some(AmpleWitness {
                    label: format!("pushforward of {}", pc.curve),
                    class: pc.class.clone(),
                    pairing,
                });
                break;
            }
        }
    }

    let star = star_check(&spec)?;

    Ok(Dp2Report {
        identities,
        contraction_steps,
        pushforward,
        k_squared_contracted,
        polarization,
        ample_partial: ample,
        star,
    })
}

/// Exceptional coefficient of a log pullback under one point blow-up:
/// `sum lambda_i mult_i - 1` for components of multiplicity `mult_i`
/// carrying coefficient `lambda_i`.
pub fn log_pullback_coeff(parts: &[(Rational, u32)]) -> Rational {
    let mut acc = -Rational::one();
    for (lambda, mult) in parts {
        acc = acc + lambda * &Rational::from_integer((*mult).into());
    }
    acc
}
