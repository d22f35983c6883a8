//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`). Tolerances are exact equalities; runtime
//! bounds are asserted where stated.

mod common;

use std::time::Instant;

use num::Signed;
use polar_cylinders::certify::{verify_certificate, CertComponent, CylinderCertificate};
use polar_cylinders::classify::{classify, CylinderReason, NoCylinderReason, Verdict};
use polar_cylinders::cone::{fujita_face, fujita_invariant, lp_solve, LpOutcome};
use polar_cylinders::families::{
    build_auxiliary, build_dp2, nine_points_default_certificate, AuxiliaryParams, Dp2Params,
};
use polar_cylinders::negcurves::{minus_one_classes, StarReport};
use polar_cylinders::picard::{canonical_class, DivisorClass, SurfaceSpec};
use polar_cylinders::rational::{rat, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{brute_minus_one, fourier_motzkin, random_lp, FmOutcome};

fn minus_k(n: usize) -> DivisorClass {
    -&canonical_class(n)
}

#[test]
fn criterion_1_minus_one_enumeration_against_oracle() {
    let start = Instant::now();
    let expected = [1usize, 3, 6, 10, 16, 27, 56, 240];
    for (n, &count) in (1..=8).zip(expected.iter()) {
        let enumerated = minus_one_classes(n).unwrap();
        assert_eq!(enumerated.len(), count, "count for n = {n}");
        let oracle = brute_minus_one(n);
        assert_eq!(oracle.len(), count, "oracle count for n = {n}");
        let as_ints: Vec<Vec<i64>> = enumerated
            .iter()
            .map(|c| {
                c.coeffs()
                    .iter()
                    .map(|r| {
                        assert!(r.denom() == &1.into());
                        i64::try_from(r.numer().clone()).unwrap()
                    })
                    .collect()
            })
            .collect();
        assert_eq!(as_ints, oracle, "elementwise agreement for n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 1: PASS - (-1)-class counts (1,3,6,10,16,27,56,240) match the \
         bounded brute-force oracle elementwise in {elapsed:?}"
    );
}

#[test]
fn criterion_2_anticanonical_threshold_and_boundary() {
    for n in 1..=8 {
        let spec = SurfaceSpec::general_position(n);
        let a = minus_k(n);
        assert_eq!(fujita_invariant(&spec, &a).unwrap(), rat(1, 1), "mu for n = {n}");
        let data = fujita_face(&spec, &a).unwrap();
        assert_eq!(data.rank, 0, "r for n = {n}");

        let verdict = classify(&spec, &a, None).unwrap();
        let k_squared = 9 - n as i64;
        match verdict.verdict {
            Verdict::Cylinder {
                reason: CylinderReason::DelPezzo1,
                ..
            } => assert!(k_squared >= 4, "cylinder verdict needs K^2 >= 4, n = {n}"),
            Verdict::NoCylinder {
                reason: NoCylinderReason::TheoremMain,
            } => assert!(k_squared <= 3, "no-cylinder verdict needs K^2 <= 3, n = {n}"),
            other => panic!("n = {n}: unexpected verdict {other:?}"),
        }
    }
    println!(
        "criterion 2: PASS - anticanonical polarizations give mu = 1, r = 0 for \
         n = 1..8 and the cylinder boundary sits exactly at K^2 = 4"
    );
}

#[test]
fn criterion_3_tangent_pencil_family_reproduction() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for k in 1..=3usize {
        let n = 5 + k;
        let k_squared = 4 - k as i64;
        for _ in 0..20 {
            // eps1 in (0, 1/2), eps2 in (0, 2 eps1), x in the strict window.
            let eps1 = rat(rng.gen_range(1..=15), 32);
            let eps2 = &eps1 * &rat(rng.gen_range(1..=15), 8);
            let share = (Rational::from_integer(1.into()) - &eps1 * &rat(2, 1))
                / rat(2 * k as i64, 1);
            let lower = Rational::from_integer(1.into()) - &share;
            let x = &lower + &(&share * &rat(rng.gen_range(1..=63), 64));
            let params = AuxiliaryParams {
                k,
                eps1,
                eps2,
                x,
            };
            params.validate().unwrap();

            let build = build_auxiliary(&params).unwrap();
            let spec = &build.spec;
            let report = verify_certificate(spec, &build.certificate).unwrap();
            assert!(report.pass, "certificate must verify (k = {k})");

            let data = fujita_face(spec, &build.polarization).unwrap();
            assert_eq!(data.rank, k, "r = k");
            assert_eq!(data.rank as i64 + k_squared, 4, "r + K^2 = 4");

            let verdict = classify(spec, &build.polarization, None).unwrap();
            match verdict.verdict {
                Verdict::Cylinder {
                    reason: CylinderReason::ExampleAuxiliary,
                    certificate: Some(cert),
                } => {
                    assert!(verify_certificate(spec, &cert).unwrap().pass);
                }
                other => panic!("k = {k}: unexpected verdict {other:?}"),
            }
            assert_eq!(n, spec.blowups());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!(
        "criterion 3: PASS - 60 random family instances over K^2 in {{1,2,3}}: exact \
         decomposition, ample, r = k, r + K^2 = 4, classified with verified \
         certificates in {elapsed:?}"
    );
}

#[test]
fn criterion_4_low_rank_no_cylinder_grid() {
    let spec6 = SurfaceSpec::general_position(6);
    let v = classify(&spec6, &minus_k(6), None).unwrap();
    assert!(matches!(
        v.verdict,
        Verdict::NoCylinder {
            reason: NoCylinderReason::TheoremMain
        }
    ));

    let samples = [rat(1, 10), rat(1, 5), rat(3, 10), rat(2, 5), rat(9, 20)];
    for n in [7usize, 8] {
        let spec = SurfaceSpec::general_position(n);
        let k_squared = 9 - n as i64;
        for x in &samples {
            let a = &minus_k(n) + &DivisorClass::exceptional(n, n).scaled(x);
            let data = fujita_face(&spec, &a).unwrap();
            assert!(
                data.rank as i64 + k_squared <= 3,
                "n = {n}, x = {x}: r + K^2 = {}",
                data.rank as i64 + k_squared
            );
            let v = classify(&spec, &a, None).unwrap();
            assert!(
                matches!(
                    v.verdict,
                    Verdict::NoCylinder {
                        reason: NoCylinderReason::TheoremMain
                    }
                ),
                "n = {n}, x = {x}"
            );
        }
    }
    println!(
        "criterion 4: PASS - r + K^2 <= 3 grid (n = 6 anticanonical; n = 7, 8 with \
         five exceptional offsets each) classified no-cylinder exactly"
    );
}

#[test]
fn criterion_5_nine_points_trichotomy() {
    let spec = SurfaceSpec::general_position(9);
    let polarization = |x: &Rational| {
        let mut a = minus_k(9);
        for i in 1..=4 {
            a = &a + &DivisorClass::exceptional(9, i).scaled(x);
        }
        a
    };

    let x = rat(1, 4);
    let a = polarization(&x);
    let cert = nine_points_default_certificate(&spec, &a).unwrap();
    let v = classify(&spec, &a, Some(&cert)).unwrap();
    assert!(matches!(
        v.verdict,
        Verdict::NoCylinder {
            reason: NoCylinderReason::NinePointsLemma
        }
    ));

    let x = rat(9, 10);
    let a = polarization(&x);
    let cert = nine_points_default_certificate(&spec, &a).unwrap();
    let v = classify(&spec, &a, Some(&cert)).unwrap();
    match v.verdict {
        Verdict::Cylinder {
            reason: CylinderReason::ExampleAuxiliary,
            certificate: Some(c),
        } => assert!(verify_certificate(&spec, &c).unwrap().pass),
        other => panic!("x = 9/10: unexpected verdict {other:?}"),
    }

    let x = rat(1, 2);
    let a = polarization(&x);
    let cert = nine_points_default_certificate(&spec, &a).unwrap();
    let v = classify(&spec, &a, Some(&cert)).unwrap();
    assert!(matches!(v.verdict, Verdict::Unknown { .. }));

    println!(
        "criterion 5: PASS - nine-point pattern: x = 1/4 no-cylinder, x = 9/10 \
         cylinder with verified certificate, x = 1/2 unknown"
    );
}

#[test]
fn criterion_6_tower_replay() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut params_list = vec![Dp2Params {
        eps: rat(1, 4),
        x: rat(1, 8),
    }];
    for _ in 0..10 {
        let eps = rat(rng.gen_range(1..=10), 32);
        let x = &eps * &rat(rng.gen_range(1..=15), 16);
        params_list.push(Dp2Params { eps, x });
    }
    for params in &params_list {
        params.validate().unwrap();
        let report = build_dp2(params).unwrap();
        assert_eq!(report.identities.len(), 3);
        for identity in &report.identities {
            assert!(
                identity.ok && identity.residual.is_zero(),
                "identity `{}` residual {}",
                identity.name,
                identity.residual
            );
        }
        let steps: Vec<Rational> = report
            .contraction_steps
            .iter()
            .map(|s| s.self_intersection.clone())
            .collect();
        assert_eq!(steps, vec![rat(-1, 1), rat(-1, 1), rat(-1, 1)]);
        let l2 = report
            .pushforward
            .iter()
            .find(|p| p.curve == "L2")
            .unwrap();
        assert_eq!(l2.self_intersection, rat(-2, 1));
        assert_eq!(report.k_squared_contracted, rat(2, 1));
        assert!(matches!(report.star, StarReport::Violated { .. }));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    println!(
        "criterion 6: PASS - tower replay over 11 parameter pairs: three exact \
         identities, contraction steps (-1,-1,-1), pushed L2 squares to -2, \
         generality violated, in {elapsed:?}"
    );
}

/// The stated reference values also assign self-intersection -2 to the
/// pushforward of the final exceptional curve E. That value is unattainable:
/// E is the exceptional of the last blow-up, so E^2 = -1 on the tower, and a
/// pushforward adds the square of one pairing per contracted curve, so its
/// self-intersection can only grow. The computed value is 0 (E meets the
/// contracted chain once); the (-2)-curves of the contracted surface are the
/// images of F1 and L2. This test asserts the stated value and documents the
/// discrepancy by failing.
#[test]
fn criterion_6_reported_pushforward_of_e() {
    let report = build_dp2(&Dp2Params {
        eps: rat(1, 4),
        x: rat(1, 8),
    })
    .unwrap();
    let e = report.pushforward.iter().find(|p| p.curve == "E").unwrap();
    let f1 = report.pushforward.iter().find(|p| p.curve == "F1").unwrap();
    assert_eq!(
        f1.self_intersection,
        rat(-2, 1),
        "the image of F1 is a (-2)-curve"
    );
    let status = if e.self_intersection == rat(-2, 1) {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "criterion 6 (reported value for E): {status} - pushforward of E squares to {}",
        e.self_intersection
    );
    assert_eq!(
        e.self_intersection,
        rat(-2, 1),
        "stated reference value -2 for the pushforward of E; exact arithmetic gives {}.\n\
         A pushforward never decreases self-intersection and the final exceptional \
         starts at -1, so -2 cannot occur for E under any reading of the tower; the \
         adjacent curve F1 (together with L2) is the actual (-2)-witness.",
        e.self_intersection
    );
}

#[test]
fn criterion_7_certificate_negative_tests() {
    // Fewer than 10 - K^2 positive components: rejected.
    let spec = SurfaceSpec::general_position(6);
    let target = (1..=5).fold(DivisorClass::zero(6), |acc, i| {
        &acc + &DivisorClass::exceptional(6, i)
    });
    let skimpy = CylinderCertificate {
        target,
        components: (1..=5)
            .map(|i| CertComponent {
                label: format!("E{i}"),
                class: DivisorClass::exceptional(6, i),
                coeff: rat(1, 1),
            })
            .collect(),
        removed_set_note: String::new(),
    };
    let report = verify_certificate(&spec, &skimpy).unwrap();
    assert!(!report.pass);
    assert!(report
        .checks
        .iter()
        .any(|c| c.name == "component-count" && !c.pass));

    // A perturbed coefficient breaks the exact identity.
    let params = AuxiliaryParams {
        k: 1,
        eps1: rat(1, 4),
        eps2: rat(1, 4),
        x: rat(15, 16),
    };
    let build = build_auxiliary(&params).unwrap();
    let mut cert = build.certificate.clone();
    cert.components[0].coeff = &cert.components[0].coeff + &rat(1, 1000);
    let report = verify_certificate(&build.spec, &cert).unwrap();
    assert!(!report.pass);
    assert!(report.checks.iter().any(|c| c.name == "identity" && !c.pass));

    println!(
        "criterion 7: PASS - undersized certificates are rejected by the rank bound \
         and perturbed coefficients fail the exact identity"
    );
}

#[test]
fn criterion_8_lp_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;
    let mut unbounded = 0usize;
    for case in 0..200 {
        let lp = random_lp(&mut rng);
        let simplex = lp_solve(&lp).unwrap();
        let oracle = fourier_motzkin(&lp);
        match (&simplex, &oracle) {
            (LpOutcome::Optimal { value, .. }, FmOutcome::Optimal(expected)) => {
                assert_eq!(value, expected, "case {case}: optimum mismatch");
                optimal += 1;
            }
            (LpOutcome::Infeasible, FmOutcome::Infeasible) => infeasible += 1,
            (LpOutcome::Unbounded, FmOutcome::Unbounded) => unbounded += 1,
            (s, o) => panic!("case {case}: simplex {s:?} vs oracle {o:?}\n{lp:?}"),
        }
    }
    assert!(optimal > 0 && infeasible > 0 && unbounded > 0, "degenerate sample");
    println!(
        "criterion 8: PASS - 200 random programs agree with the Fourier-Motzkin \
         oracle exactly ({optimal} optimal, {infeasible} infeasible, {unbounded} unbounded)"
    );
}
