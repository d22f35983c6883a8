//! Independent oracles for the integration suites: bounded brute-force
//! enumeration of negative classes and a Fourier-Motzkin eliminator for
//! small linear programs. Nothing here shares code with the implementation
//! paths it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num::{Signed, Zero};
use polar_cylinders::cone::{LinearProgram, Rel, Sense};
use polar_cylinders::rational::{rat, Rational};
use rand::Rng;

/// Bounded brute-force (-1)-class search: degrees 0..=17, multiplicities
/// `0..=d`, constrained by `sum m = 3d - 1` and `sum m^2 = d^2 + 1`, plus
/// the pure exceptionals. Returns stored coefficient vectors, sorted.
pub fn brute_minus_one(n: usize) -> Vec<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    for i in 0..n {
        let mut v = vec![0i64; n + 1];
        v[i + 1] = 1;
        out.insert(v);
    }
    for d in 1..=17i64 {
        let mut mults = vec![0i64; n];
        search_mults(
            d,
            3 * d - 1,
            d * d + 1,
            0,
            &mut mults,
            &mut |mults: &[i64]| {
                let mut v = vec![0i64; n + 1];
                v[0] = d;
                for (i, &m) in mults.iter().enumerate() {
                    v[i + 1] = -m;
                }
                out.insert(v);
            },
        );
    }
    out.into_iter().collect()
}

/// Recursive search over multiplicity vectors with sum/square-sum pruning.
fn search_mults(
    max_each: i64,
    sum_left: i64,
    sq_left: i64,
    idx: usize,
    mults: &mut Vec<i64>,
    emit: &mut impl FnMut(&[i64]),
) {
    let k = (mults.len() - idx) as i64;
    if sum_left < 0 || sq_left < 0 {
        return;
    }
    if idx == mults.len() {
        if sum_left == 0 && sq_left == 0 {
            emit(mults);
        }
        return;
    }
    // Feasibility: k values in 0..=max_each must reach the remaining sum,
    // and by Cauchy-Schwarz the square sum is at least sum^2 / k.
    if sum_left > k * max_each || sq_left > k * max_each * max_each {
        return;
    }
    if sum_left * sum_left > k * sq_left {
        return;
    }
    for m in 0..=max_each {
        mults[idx] = m;
        search_mults(max_each, sum_left - m, sq_left - m * m, idx + 1, mults, emit);
        mults[idx] = 0;
    }
}

/// Bounded brute-force root search (`c^2 = -2`, `c.K = 0`) over signed
/// coordinates, reduced to sign representatives (`d >= 0`; for `d = 0`
/// first nonzero coordinate positive).
pub fn brute_minus_two(n: usize) -> Vec<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    for d in 0..=17i64 {
        // Stored coordinates e_i satisfy sum e = -3d and sum e^2 = d^2 + 2.
        let mut coords = vec![0i64; n];
        search_signed(-3 * d, d * d + 2, 0, &mut coords, &mut |coords: &[i64]| {
            let mut v = vec![0i64; n + 1];
            v[0] = d;
            v[1..].copy_from_slice(coords);
            if d == 0 {
                match coords.iter().find(|&&e| e != 0) {
                    Some(&first) if first > 0 => {
                        out.insert(v);
                    }
                    _ => {}
                }
            } else {
                out.insert(v);
            }
        });
    }
    out.into_iter().collect()
}

fn search_signed(
    sum_left: i64,
    sq_left: i64,
    idx: usize,
    coords: &mut Vec<i64>,
    emit: &mut impl FnMut(&[i64]),
) {
    if sq_left < 0 {
        return;
    }
    let k = (coords.len() - idx) as i64;
    if idx == coords.len() {
        if sum_left == 0 && sq_left == 0 {
            emit(coords);
        }
        return;
    }
    if sum_left * sum_left > k * sq_left {
        return;
    }
    let limit = (sq_left as f64).sqrt() as i64 + 1;
    for e in -limit..=limit {
        if e * e > sq_left {
            continue;
        }
        coords[idx] = e;
        search_signed(sum_left - e, sq_left - e * e, idx + 1, coords, emit);
        coords[idx] = 0;
    }
}

/// Fourier-Motzkin outcome; mirrors the simplex statuses without an
/// assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FmOutcome {
    Optimal(Rational),
    Infeasible,
    Unbounded,
}

/// Solves a small program by projection: encode everything as
/// `sum a_i x_i + a_z z <= b` with `z = objective`, eliminate the x
/// variables, and read the optimum off the interval left for `z`.
pub fn fourier_motzkin(lp: &LinearProgram) -> FmOutcome {
    let n = lp.num_vars;
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let push_le = |rows: &mut Vec<(Vec<Rational>, Rational)>, coeffs: Vec<Rational>, rhs: Rational| {
        rows.push((coeffs, rhs));
    };

    for c in &lp.constraints {
        let mut ext = c.coeffs.clone();
        ext.push(Rational::zero());
        match c.rel {
            Rel::Le => push_le(&mut rows, ext, c.rhs.clone()),
            Rel::Ge => push_le(&mut rows, ext.iter().map(|v| -v).collect(), -&c.rhs),
            Rel::Eq => {
                push_le(&mut rows, ext.clone(), c.rhs.clone());
                push_le(&mut rows, ext.iter().map(|v| -v).collect(), -&c.rhs);
            }
        }
    }
    for i in 0..n {
        let mut v = vec![Rational::zero(); n + 1];
        v[i] = rat(-1, 1);
        push_le(&mut rows, v, Rational::zero());
    }
    // z - c.x = 0.
    let mut zdef: Vec<Rational> = lp.objective.coeffs.iter().map(|v| -v).collect();
    zdef.push(rat(1, 1));
    push_le(&mut rows, zdef.clone(), Rational::zero());
    push_le(&mut rows, zdef.iter().map(|v| -v).collect(), Rational::zero());

    // Eliminate x_0..x_{n-1}.
    for var in 0..n {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for row in rows {
            if row.0[var].is_positive() {
                pos.push(row);
            } else if row.0[var].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        let mut next: BTreeSet<(Vec<Rational>, Rational)> = rest.into_iter().collect();
        for p in &pos {
            for q in &neg {
                // Scale p by 1/a_p and q by -1/a_q, then add.
                let ap = &p.0[var];
                let aq = &q.0[var];
                let mut coeffs = Vec::with_capacity(n + 1);
                for j in 0..=n {
                    coeffs.push(&p.0[j] / ap - &q.0[j] / aq);
                }
                let rhs = &p.1 / ap - &q.1 / aq;
                debug_assert!(coeffs[var].is_zero());
                if let Some(row) = normalize_row(coeffs, rhs) {
                    next.insert(row);
                } else {
                    return FmOutcome::Infeasible;
                }
            }
        }
        rows = next.into_iter().collect();
        // Constant rows may have appeared among `rest`.
        let mut filtered = Vec::new();
        for (coeffs, rhs) in rows {
            if coeffs.iter().all(Zero::is_zero) {
                if rhs.is_negative() {
                    return FmOutcome::Infeasible;
                }
            } else {
                filtered.push((coeffs, rhs));
            }
        }
        rows = filtered;
    }

    // Only z remains.
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for (coeffs, rhs) in &rows {
        let a = &coeffs[n];
        if a.is_zero() {
            if rhs.is_negative() {
                return FmOutcome::Infeasible;
            }
            continue;
        }
        let bound = rhs / a;
        if a.is_positive() {
            upper = Some(match upper {
                None => bound,
                Some(u) => u.min(bound),
            });
        } else {
            lower = Some(match lower {
                None => bound,
                Some(l) => l.max(bound),
            });
        }
    }
    if let (Some(l), Some(u)) = (&lower, &upper) {
        if l > u {
            return FmOutcome::Infeasible;
        }
    }
    match lp.objective.sense {
        Sense::Minimize => match lower {
            Some(l) => FmOutcome::Optimal(l),
            None => FmOutcome::Unbounded,
        },
        Sense::Maximize => match upper {
            Some(u) => FmOutcome::Optimal(u),
            None => FmOutcome::Unbounded,
        },
    }
}

/// Drops rows `0 <= rhs`; returns `None` on a contradictory constant row.
fn normalize_row(coeffs: Vec<Rational>, rhs: Rational) -> Option<(Vec<Rational>, Rational)> {
    if coeffs.iter().all(Zero::is_zero) {
        if rhs.is_negative() {
            return None;
        }
        // Trivially true; represent canonically so dedup can drop it.
        return Some((coeffs, Rational::zero().max(rhs)));
    }
    let scale = coeffs
        .iter()
        .find(|c| !c.is_zero())
        .expect("nonzero row")
        .abs();
    Some((
        coeffs.iter().map(|c| c / &scale).collect(),
        rhs / &scale,
    ))
}

fn small_rat<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// Random program with at most 4 variables and 8 constraints, small
/// rational data.
pub fn random_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    let num_vars = rng.gen_range(1..=4);
    let num_cons = rng.gen_range(0..=8);
    let objective: Vec<Rational> = (0..num_vars).map(|_| small_rat(rng)).collect();
    let mut lp = if rng.gen_bool(0.5) {
        LinearProgram::minimize(num_vars, objective)
    } else {
        LinearProgram::maximize(num_vars, objective)
    };
    for _ in 0..num_cons {
        let coeffs: Vec<Rational> = (0..num_vars).map(|_| small_rat(rng)).collect();
        let rel = match rng.gen_range(0..3) {
            0 => Rel::Le,
            1 => Rel::Ge,
            _ => Rel::Eq,
        };
        let rhs = small_rat(rng);
        lp.constrain(coeffs, rel, rhs);
    }
    lp
}
