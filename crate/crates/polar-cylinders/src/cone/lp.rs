//! Exact rational linear programming: a dense two-phase simplex over
//! arbitrary-precision rationals with Bland's pivot rule.
//!
//! All variables are implicitly nonnegative; the cone queries in this crate
//! never need free variables. Bland's rule makes the solver deterministic
//! and immune to cycling, and with exact arithmetic there are no tolerances:
//! a reduced cost is negative or it is not.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<Rational>,
}

/// `optimize c.x  subject to  A x (<=|=|>=) b, x >= 0`, everything rational.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
}

impl LinearProgram {
    pub fn minimize(num_vars: usize, objective: Vec<Rational>) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: Objective {
                sense: Sense::Minimize,
                coeffs: objective,
            },
        }
    }

    pub fn maximize(num_vars: usize, objective: Vec<Rational>) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: Objective {
                sense: Sense::Maximize,
                coeffs: objective,
            },
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, rel: Rel, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        assignment: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m rows of length `ncols + 1`; the last entry is the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for c in 0..=self.ncols {
            self.rows[row][c] = &self.rows[row][c] / &inv;
        }
        for r in 0..self.rows.len() {
            if r != row && !self.rows[r][col].is_zero() {
                let factor = self.rows[r][col].clone();
                for c in 0..=self.ncols {
                    let sub = &factor * &self.rows[row][c];
                    self.rows[r][c] = &self.rows[r][c] - &sub;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost` with Bland's rule over the allowed columns.
    /// Returns false on unboundedness.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // Reduced costs d_j = c_j - c_B . column_j, recomputed exactly.
            let mut entering = None;
            'candidates: for j in 0..self.ncols {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[r][j].is_zero() {
                        d = d - &cost[b] * &self.rows[r][j];
                    }
                }
                if d.is_negative() {
                    entering = Some(j);
                    break 'candidates; // Bland: smallest improving index
                }
            }
            let Some(col) = entering else { return true };

            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col].is_positive() {
                    let ratio = self.rhs(r) / &self.rows[r][col];
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((br, best)) => {
                            if ratio < best
                                || (ratio == best && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, best))
                            }
                        }
                    };
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        let mut v = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                v = v + &cost[b] * self.rhs(r);
            }
        }
        v
    }
}

/// Solves the program exactly. Deterministic under Bland's rule.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    if lp.objective.coeffs.len() != lp.num_vars {
        return Err(Error::MalformedProgram(format!(
            "objective has {} coefficients for {} variables",
            lp.objective.coeffs.len(),
            lp.num_vars
        )));
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != lp.num_vars {
            return Err(Error::MalformedProgram(format!(
                "constraint {i} has {} coefficients for {} variables",
                c.coeffs.len(),
                lp.num_vars
            )));
        }
    }

    let m = lp.constraints.len();
    let n = lp.num_vars;

    // Normalize rows to nonnegative rhs, then lay out columns as
    // [structural | slack/surplus | artificial].
    let mut rows_raw: Vec<(Vec<Rational>, Rel, Rational)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        if c.rhs.is_negative() {
            let coeffs: Vec<Rational> = c.coeffs.iter().map(|x| -x).collect();
            let rel = match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            rows_raw.push((coeffs, rel, -&c.rhs));
        } else {
            rows_raw.push((c.coeffs.clone(), c.rel, c.rhs.clone()));
        }
    }

    let num_slack = rows_raw
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Rel::Le | Rel::Ge))
        .count();
    let num_artificial = rows_raw
        .iter()
        .filter(|(_, rel, _)| matches!(rel, Rel::Ge | Rel::Eq))
        .count();
    let ncols = n + num_slack + num_artificial;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut next_slack = n;
    let mut next_artificial = n + num_slack;
    for (coeffs, rel, rhs) in &rows_raw {
        let mut row = vec![Rational::zero(); ncols + 1];
        row[..n].clone_from_slice(coeffs);
        row[ncols] = rhs.clone();
        match rel {
            Rel::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Rel::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Rel::Eq => {
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        rows.push(row);
    }

    let mut tableau = Tableau { rows, basis, ncols };
    let artificial_start = n + num_slack;

    // Phase 1: drive the artificial variables to zero.
    if num_artificial > 0 {
        let mut cost = vec![Rational::zero(); ncols];
        for c in artificial_start..ncols {
            cost[c] = Rational::one();
        }
        let bounded = tableau.optimize(&cost, &|_| true);
        debug_assert!(bounded, "phase-1 objective is bounded below by zero");
        if !tableau.objective_value(&cost).is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot artificials out of the basis; rows that cannot pivot are
        // redundant and get dropped.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= artificial_start {
                let col = (0..artificial_start).find(|&c| !tableau.rows[r][c].is_zero());
                match col {
                    Some(c) => tableau.pivot(r, c),
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2 over structural and slack columns only.
    let mut cost = vec![Rational::zero(); ncols];
    let negate = lp.objective.sense == Sense::Maximize;
    for j in 0..n {
        cost[j] = if negate {
            -&lp.objective.coeffs[j]
        } else {
            lp.objective.coeffs[j].clone()
        };
    }
    let bounded = tableau.optimize(&cost, &|j| j < artificial_start);
    if !bounded {
        return Ok(LpOutcome::Unbounded);
    }

    let mut assignment = vec![Rational::zero(); n];
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b < n {
            assignment[b] = tableau.rhs(r).clone();
        }
    }
    let mut value = tableau.objective_value(&cost);
    if negate {
        value = -value;
    }
    Ok(LpOutcome::Optimal { value, assignment })
}
