//! Exact queries against the effective cone: membership, the
//! pseudo-effective threshold mu_A, the smallest face containing `K + mu A`
//! and its dimension (the Fujita rank), plus the certificate machinery that
//! stands in for the threshold LP when the cone is not finitely generated
//! (nine blow-ups).
//!
//! For general-position surfaces with `n <= 8` the effective cone is closed,
//! rational and polyhedral and coincides with the span of the Mori
//! generators, so the threshold is one LP rather than a limit.

mod lp;

pub use lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Objective, Rel, Sense};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::negcurves::{is_ample, mori_generators};
use crate::picard::{DivisorClass, SurfaceSpec};
use crate::rational::Rational;
use crate::{linalg, Error, Result};

/// Membership answer for the effective cone, with one explicit decomposition
/// when feasible.
#[derive(Clone, Debug)]
pub struct EffectiveMembership {
    pub member: bool,
    /// Pairs `(generator index, coefficient)` with positive coefficients.
    pub decomposition: Option<Vec<(usize, Rational)>>,
}

/// Threshold and face data of an ample divisor: `K + mu A` lies exactly on
/// the boundary, `face_generators` index the Mori generators spanning the
/// smallest extremal face containing it, and `rank` is that face's
/// dimension.
#[derive(Clone, Debug, Serialize)]
pub struct FujitaData {
    #[serde(with = "crate::rational::serde_str")]
    pub mu: Rational,
    pub face_generators: Vec<usize>,
    pub face_classes: Vec<DivisorClass>,
    pub rank: usize,
}

fn general_position_generators(spec: &SurfaceSpec, context: &'static str) -> Result<Vec<DivisorClass>> {
    spec.validate()?;
    if !spec.is_general_position() {
        return Err(Error::InvalidInput(format!(
            "{context} requires the general-position model"
        )));
    }
    if spec.blowups() == 9 {
        return Err(Error::UnsupportedBlowups {
            n: 9,
            max: 8,
            context: "finitely generated effective cone (use certificate mode)",
        });
    }
    mori_generators(spec.blowups())
}

/// Is `target` a nonnegative rational combination of `generators`?
/// Feasibility LP; returns one witness combination.
pub(crate) fn nonneg_combination(
    generators: &[DivisorClass],
    target: &DivisorClass,
) -> Result<Option<Vec<Rational>>> {
    let rank = target.rank();
    let n = generators.len();
    let mut lp = LinearProgram::minimize(n, vec![Rational::zero(); n]);
    for coord in 0..rank {
        let coeffs: Vec<Rational> = generators.iter().map(|g| g.coeff(coord).clone()).collect();
        lp.constrain(coeffs, Rel::Eq, target.coeff(coord).clone());
    }
    match lp_solve(&lp)? {
        LpOutcome::Optimal { assignment, .. } => Ok(Some(assignment)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("feasibility program cannot be unbounded")),
    }
}

/// Effective-cone membership for general position, `n <= 8`.
pub fn in_effective_cone(spec: &SurfaceSpec, d: &DivisorClass) -> Result<EffectiveMembership> {
    let generators = general_position_generators(spec, "effective-cone membership")?;
    if d.rank() != spec.rank() {
        return Err(Error::DimensionMismatch(spec.rank(), d.rank()));
    }
    match nonneg_combination(&generators, d)? {
        Some(assignment) => sized_decomposition(assignment).map(|dec| EffectiveMembership {
            member: true,
            decomposition: Some(dec),
        }),
        None => Ok(EffectiveMembership {
            member: false,
            decomposition: None,
        }),
    }
}

fn sized_decomposition(assignment: Vec<Rational>) -> Result<Vec<(usize, Rational)>> {
    Ok(assignment
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// The threshold LP: minimize `lambda` with `K + lambda A` effective.
/// Returns the optimum and the decomposition coefficients at the optimum.
fn threshold_lp(
    generators: &[DivisorClass],
    spec: &SurfaceSpec,
    a: &DivisorClass,
) -> Result<(Rational, Vec<Rational>)> {
    let rank = spec.rank();
    let n = generators.len();
    // Variables: [lambda, c_1..c_n]; minimize lambda subject to
    // lambda * A - sum c_i g_i = -K, coordinatewise.
    let mut objective = vec![Rational::zero(); n + 1];
    objective[0] = Rational::one();
    let mut lp = LinearProgram::minimize(n + 1, objective);
    let k = spec.canonical_class();
    for coord in 0..rank {
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(a.coeff(coord).clone());
        for g in generators {
            coeffs.push(-g.coeff(coord));
        }
        lp.constrain(coeffs, Rel::Eq, -k.coeff(coord));
    }
    match lp_solve(&lp)? {
        LpOutcome::Optimal { value, assignment } => Ok((value, assignment[1..].to_vec())),
        LpOutcome::Infeasible => Err(Error::Internal(
            "threshold program infeasible for an ample divisor",
        )),
        LpOutcome::Unbounded => Err(Error::Internal("threshold program unbounded below zero")),
    }
}

fn require_ample(spec: &SurfaceSpec, a: &DivisorClass) -> Result<()> {
    let report = is_ample(spec, a)?;
    if !report.ample {
        let detail = report
            .witness
            .map(|w| format!("{} pairs to {}", w.label, crate::rational::format_rational(&w.pairing)))
            .unwrap_or_else(|| "no witness".into());
        return Err(Error::NotAmple(detail));
    }
    Ok(())
}

/// Smallest `lambda > 0` with `K + lambda A` pseudo-effective, for ample `A`
/// on a general-position surface with `n <= 8`.
pub fn fujita_invariant(spec: &SurfaceSpec, a: &DivisorClass) -> Result<Rational> {
    let generators = general_position_generators(spec, "threshold computation")?;
    if a.rank() != spec.rank() {
        return Err(Error::DimensionMismatch(spec.rank(), a.rank()));
    }
    require_ample(spec, a)?;
    Ok(threshold_lp(&generators, spec, a)?.0)
}

/// Threshold plus smallest-face data.
///
/// A generator belongs to the smallest face containing `x = K + mu A`
/// exactly when some decomposition of `x` gives it a positive coefficient.
/// The set of decompositions is convex, so the union of supports is realized
/// by a single relative-interior decomposition; we grow one by repeatedly
/// maximizing the mass outside the current support (each such LP either
/// certifies maximality or strictly enlarges the support).
pub fn fujita_face(spec: &SurfaceSpec, a: &DivisorClass) -> Result<FujitaData> {
    let generators = general_position_generators(spec, "face computation")?;
    if a.rank() != spec.rank() {
        return Err(Error::DimensionMismatch(spec.rank(), a.rank()));
    }
    require_ample(spec, a)?;
    let (mu, mut combo) = threshold_lp(&generators, spec, a)?;

    let x = &spec.canonical_class() + &a.scaled(&mu);
    if x.is_zero() {
        let data = FujitaData {
            mu,
            face_generators: Vec::new(),
            face_classes: Vec::new(),
            rank: 0,
        };
        return Ok(data);
    }

    let rank_amb = spec.rank();
    let n = generators.len();
    let half = Rational::new(1.into(), 2.into());
    loop {
        let support: Vec<bool> = combo.iter().map(|c| !c.is_zero()).collect();
        // Maximize the total coefficient mass outside the support. The mass
        // is bounded: pairing with -K fixes a positive-weighted sum of all
        // coefficients.
        let objective: Vec<Rational> = support
            .iter()
            .map(|&inside| if inside { Rational::zero() } else { Rational::one() })
            .collect();
        if objective.iter().all(Zero::is_zero) {
            break;
        }
        let mut lp = LinearProgram::maximize(n, objective);
        for coord in 0..rank_amb {
            let coeffs: Vec<Rational> =
                generators.iter().map(|g| g.coeff(coord).clone()).collect();
            lp.constrain(coeffs, Rel::Eq, x.coeff(coord).clone());
        }
        match lp_solve(&lp)? {
            LpOutcome::Optimal { value, assignment } => {
                if value.is_zero() {
                    break;
                }
                for (c, extra) in combo.iter_mut().zip(assignment) {
                    *c = (&*c + &extra) * &half;
                }
            }
            LpOutcome::Infeasible => {
                return Err(Error::Internal("face program lost feasibility"))
            }
            LpOutcome::Unbounded => {
                return Err(Error::Internal("face program unbounded on a pointed cone"))
            }
        }
    }

    let face_generators: Vec<usize> = combo
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect();
    let face_classes: Vec<DivisorClass> = face_generators
        .iter()
        .map(|&i| generators[i].clone())
        .collect();
    let rank = linalg::rank(
        &face_classes
            .iter()
            .map(|c| c.coeffs().to_vec())
            .collect::<Vec<_>>(),
    );
    let data = FujitaData {
        mu,
        face_generators,
        face_classes,
        rank,
    };
    debug_assert!(data.rank as i64 + spec.k_squared() <= 9);
    Ok(data)
}

/// Literal per-generator membership test: generator `i` lies in the face
/// iff `maximize c_i` over all decompositions of `x` is positive. Quadratic
/// in the generator count; kept as the reference route for the batched
/// computation above.
pub fn face_support_per_generator(
    spec: &SurfaceSpec,
    x: &DivisorClass,
) -> Result<Vec<usize>> {
    let generators = general_position_generators(spec, "face computation")?;
    let n = generators.len();
    let rank_amb = spec.rank();
    let mut support = Vec::new();
    for i in 0..n {
        let mut objective = vec![Rational::zero(); n];
        objective[i] = Rational::one();
        let mut lp = LinearProgram::maximize(n, objective);
        for coord in 0..rank_amb {
            let coeffs: Vec<Rational> =
                generators.iter().map(|g| g.coeff(coord).clone()).collect();
            lp.constrain(coeffs, Rel::Eq, x.coeff(coord).clone());
        }
        match lp_solve(&lp)? {
            LpOutcome::Optimal { value, .. } => {
                if value.is_positive() {
                    support.push(i);
                }
            }
            LpOutcome::Unbounded => support.push(i),
            LpOutcome::Infeasible => {
                return Err(Error::InvalidInput(
                    "face query target is not effective".into(),
                ))
            }
        }
    }
    Ok(support)
}

/// A weighted class entry in certificates and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedClass {
    pub class: DivisorClass,
    #[serde(with = "crate::rational::serde_str")]
    pub coeff: Rational,
}

/// Certificate that `mu` is the pseudo-effective threshold of `A`:
/// an effectivity decomposition of `K + mu A` over classes known to be
/// effective, plus a nef witness vanishing on `K + mu A` and positive on
/// `A`, which excludes every smaller threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeThresholdCertificate {
    #[serde(with = "crate::rational::serde_str")]
    pub mu: Rational,
    pub decomposition: Vec<WeightedClass>,
    pub nef_witness: DivisorClass,
}

/// Built-in nef attestor classes for a general-position surface: `H`,
/// `H - E_i`, and `-K` when `n = 9` (where the anticanonical pencil is
/// assumed base-point free).
pub fn nef_attestors(spec: &SurfaceSpec) -> Result<Vec<DivisorClass>> {
    spec.validate()?;
    if !spec.is_general_position() {
        return Err(Error::InvalidInput(
            "nef attestors are defined for the general-position model".into(),
        ));
    }
    let n = spec.blowups();
    let h = DivisorClass::line(n);
    let mut out = vec![h.clone()];
    for i in 1..=n {
        out.push(&h - &DivisorClass::exceptional(n, i));
    }
    if n == 9 {
        out.push(-&spec.canonical_class());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCertReport {
    pub valid: bool,
    pub checks: Vec<ThresholdCheck>,
}

/// Verifies a threshold certificate for `A` on a general-position surface.
///
/// Checks: positive `mu`; nonnegative decomposition coefficients over
/// permitted effective classes (basis exceptionals); exact identity
/// `sum coeff * class = K + mu A`; witness expressible as a nonnegative
/// combination of the built-in nef attestors; `witness . (K + mu A) = 0`
/// and `witness . A > 0`.
pub fn verify_pe_threshold_certificate(
    spec: &SurfaceSpec,
    a: &DivisorClass,
    cert: &PeThresholdCertificate,
) -> Result<ThresholdCertReport> {
    spec.validate()?;
    let rank = spec.rank();
    if a.rank() != rank {
        return Err(Error::DimensionMismatch(rank, a.rank()));
    }
    for entry in &cert.decomposition {
        if entry.class.rank() != rank {
            return Err(Error::DimensionMismatch(rank, entry.class.rank()));
        }
    }
    if cert.nef_witness.rank() != rank {
        return Err(Error::DimensionMismatch(rank, cert.nef_witness.rank()));
    }

    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool, detail: String| {
        checks.push(ThresholdCheck { name, pass, detail });
        pass
    };

    let mut valid = push(
        "positive-threshold",
        cert.mu.is_positive(),
        format!("mu = {}", crate::rational::format_rational(&cert.mu)),
    );

    let nonneg = cert
        .decomposition
        .iter()
        .all(|e| !e.coeff.is_negative());
    valid &= push(
        "effectivity",
        nonneg,
        "all decomposition coefficients are nonnegative".into(),
    );

    // Decomposition classes must be visibly effective; for general position
    // that means basis exceptionals.
    let n = spec.blowups();
    let allowed = |c: &DivisorClass| (1..=n).any(|i| c == &DivisorClass::exceptional(n, i));
    let classes_ok = cert.decomposition.iter().all(|e| allowed(&e.class));
    valid &= push(
        "known-effective-classes",
        classes_ok,
        "decomposition classes are basis exceptionals".into(),
    );

    let target = &spec.canonical_class() + &a.scaled(&cert.mu);
    let sum = cert.decomposition.iter().fold(
        DivisorClass::zero(n),
        |acc, e| &acc + &e.class.scaled(&e.coeff),
    );
    let identity_ok = sum == target;
    valid &= push(
        "identity",
        identity_ok,
        if identity_ok {
            "decomposition reproduces K + mu A exactly".into()
        } else {
            format!("residual {}", &sum - &target)
        },
    );

    let attestors = nef_attestors(spec)?;
    let expressible = nonneg_combination(&attestors, &cert.nef_witness)?.is_some();
    valid &= push(
        "witness-nef",
        expressible,
        "witness is a nonnegative combination of the nef attestors".into(),
    );
    if !expressible {
        return Err(Error::InvalidCertificate(
            "nef witness is not expressible over the built-in attestors".into(),
        ));
    }

    let vanish = cert.nef_witness.intersect(&target)?;
    valid &= push(
        "witness-vanishes-on-boundary",
        vanish.is_zero(),
        format!(
            "witness . (K + mu A) = {}",
            crate::rational::format_rational(&vanish)
        ),
    );
    let positive = cert.nef_witness.intersect(a)?;
    valid &= push(
        "witness-positive-on-polarization",
        positive.is_positive(),
        format!(
            "witness . A = {}",
            crate::rational::format_rational(&positive)
        ),
    );

    Ok(ThresholdCertReport { valid, checks })
}

/// Fujita data certified by a threshold certificate: the face is spanned by
/// the decomposition classes with positive coefficient, its dimension is
/// their span's rank.
pub fn fujita_data_from_certificate(
    spec: &SurfaceSpec,
    a: &DivisorClass,
    cert: &PeThresholdCertificate,
) -> Result<FujitaData> {
    let report = verify_pe_threshold_certificate(spec, a, cert)?;
    if !report.valid {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect();
        return Err(Error::InvalidCertificate(format!(
            "threshold certificate rejected: {}",
            failing.join(", ")
        )));
    }
    let mut face_classes: Vec<DivisorClass> = Vec::new();
    let mut face_generators = Vec::new();
    for (i, entry) in cert.decomposition.iter().enumerate() {
        if entry.coeff.is_positive() && !face_classes.contains(&entry.class) {
            face_classes.push(entry.class.clone());
            face_generators.push(i);
        }
    }
    let rank = linalg::rank(
        &face_classes
            .iter()
            .map(|c| c.coeffs().to_vec())
            .collect::<Vec<_>>(),
    );
    Ok(FujitaData {
        mu: cert.mu.clone(),
        face_generators,
        face_classes,
        rank,
    })
}
