//! Contraction (blow-down) of chains of (-1)-curves as pushforward maps on
//! the Picard lattice.
//!
//! Contracting a curve of class `C` with `C^2 = -1` projects onto the
//! orthogonal complement: `D -> D + (D.C) C`. Composites keep every class in
//! ambient coordinates, where the restricted form computes intersection
//! numbers on the contracted surface directly; an integral basis of the
//! complement provides target-lattice coordinates.

use num::bigint::BigInt;
use num::{One, Signed};

use super::{DivisorClass, SurfaceSpec, Tower};
use crate::linalg;
use crate::rational::{rat, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ContractionStep {
    pub name: String,
    /// Class of the contracted curve at its step (pushed past the earlier
    /// contractions), in ambient coordinates.
    pub class: DivisorClass,
    /// Self-intersection checked at the step; always -1 on success.
    pub self_intersection: Rational,
}

/// Linear pushforward map onto the orthogonal complement of the contracted
/// classes.
#[derive(Clone, Debug)]
pub struct ContractionMap {
    ambient_rank: usize,
    steps: Vec<ContractionStep>,
    basis: Vec<DivisorClass>,
}

impl ContractionMap {
    pub fn steps(&self) -> &[ContractionStep] {
        &self.steps
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Rank of the target lattice, `ambient_rank - #steps`.
    pub fn target_rank(&self) -> usize {
        self.ambient_rank - self.steps.len()
    }

    /// Integral basis of the target lattice inside the ambient one.
    pub fn basis(&self) -> &[DivisorClass] {
        &self.basis
    }

    /// Pushforward in ambient coordinates; the image lies in the orthogonal
    /// complement of every contracted class and pairs there exactly as on
    /// the contracted surface.
    pub fn push_ambient(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if d.rank() != self.ambient_rank {
            return Err(Error::DimensionMismatch(self.ambient_rank, d.rank()));
        }
        let mut cur = d.clone();
        for step in &self.steps {
            let pairing = cur.intersect(&step.class)?;
            cur = &cur + &step.class.scaled(&pairing);
        }
        Ok(cur)
    }

    /// Coordinates of the pushforward in [`ContractionMap::basis`].
    pub fn push_coordinates(&self, d: &DivisorClass) -> Result<Vec<Rational>> {
        let pushed = self.push_ambient(d)?;
        let columns: Vec<Vec<Rational>> = self.basis.iter().map(|b| b.coeffs().to_vec()).collect();
        linalg::solve_columns(&columns, pushed.coeffs())
            .ok_or_else(|| Error::Internal("pushforward escaped the contracted lattice"))
    }

    /// Intersection number of two pushforwards on the contracted surface.
    pub fn pushed_pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        self.push_ambient(a)?.intersect(&self.push_ambient(b)?)
    }

    /// Gram matrix of the target basis under the restricted form.
    pub fn gram(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|a| {
                self.basis
                    .iter()
                    .map(|b| a.intersect(b).expect("basis ranks agree"))
                    .collect()
            })
            .collect()
    }

    /// |det| of the Gram matrix; 1 exactly when the target lattice is
    /// unimodular, as a blow-down target must be.
    pub fn gram_determinant_abs(&self) -> BigInt {
        let gram = self.gram();
        let as_int: Vec<Vec<BigInt>> = gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|r| {
                        debug_assert!(r.denom().is_one());
                        r.numer().clone()
                    })
                    .collect()
            })
            .collect();
        linalg::integer_determinant(&as_int).abs()
    }
}

/// Contracts the named curves in order. Each curve must, at its step, be a
/// (-1)-class that is rational in class (`C.(C+K) = -2`); violations report
/// the step index and the offending value.
pub fn contract(spec: &SurfaceSpec, order: &[&str]) -> Result<ContractionMap> {
    let tower = Tower::elaborate(spec)?;
    let rank = tower.rank();
    let canonical = spec.canonical_class();

    let mut steps: Vec<ContractionStep> = Vec::new();
    let mut pushed_k = canonical.clone();
    for (idx, name) in order.iter().enumerate() {
        let original = tower
            .class_of(name)
            .cloned()
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))?;
        // Push past the earlier contractions.
        let mut class = original;
        for step in &steps {
            let pairing = class.intersect(&step.class)?;
            class = &class + &step.class.scaled(&pairing);
        }
        let self_int = class.self_intersection();
        if self_int != rat(-1, 1) {
            return Err(Error::ContractionStep {
                step: idx + 1,
                name: name.to_string(),
                value: self_int,
            });
        }
        let genus_pairing = class.intersect(&(&class + &pushed_k))?;
        if genus_pairing != rat(-2, 1) {
            return Err(Error::InvalidInput(format!(
                "contraction step {} (`{name}`): class is not rational in class \
                 (C.(C+K) = {genus_pairing}, expected -2)",
                idx + 1
            )));
        }
        let pairing_k = pushed_k.intersect(&class)?;
        pushed_k = &pushed_k + &class.scaled(&pairing_k);
        steps.push(ContractionStep {
            name: name.to_string(),
            class,
            self_intersection: self_int,
        });
    }

    // Integral basis of the common orthogonal complement. Each contracted
    // class is integral, so its pairing functional has integer entries
    // (c_0, -c_1, ..., -c_n).
    let rows: Vec<Vec<BigInt>> = steps
        .iter()
        .map(|s| {
            s.class
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    debug_assert!(c.denom().is_one());
                    if i == 0 {
                        c.numer().clone()
                    } else {
                        -c.numer().clone()
                    }
                })
                .collect()
        })
        .collect();
    let kernel = linalg::integer_kernel(&rows, rank);
    if kernel.len() != rank - steps.len() {
        return Err(Error::Internal("contraction kernel has unexpected rank"));
    }
    let basis = kernel
        .into_iter()
        .map(|v| {
            DivisorClass::new(
                v.into_iter()
                    .map(|e| Rational::from_integer(e))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();

    Ok(ContractionMap {
        ambient_rank: rank,
        steps,
        basis,
    })
}
