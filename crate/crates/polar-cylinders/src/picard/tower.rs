//! Elaboration of blow-up towers: multiplicity bookkeeping for declared
//! plane curves and exceptional chains, driven entirely by the incidence
//! declarations of the centers.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::{CenterKind, DivisorClass, SurfaceModel, SurfaceSpec};
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrackedKind {
    /// Declared plane curve of the given degree.
    Plane { degree: u32 },
    /// Exceptional curve created by the blow-up at `center` (0-based).
    Exceptional { center: usize },
}

/// A curve tracked through the tower: its multiplicity at every center and
/// its proper-transform class on the final surface.
#[derive(Clone, Debug)]
pub struct TrackedCurve {
    pub name: String,
    pub kind: TrackedKind,
    /// Multiplicity at each center; entry `j` counts incidences declared at
    /// blow-up `j`.
    pub multiplicities: Vec<u32>,
    pub class: DivisorClass,
}

/// An elaborated tower: every declared curve and every exceptional with its
/// final proper-transform class.
#[derive(Clone, Debug)]
pub struct Tower {
    pub blowups: usize,
    items: Vec<TrackedCurve>,
    index: BTreeMap<String, usize>,
}

impl Tower {
    /// Runs the incidence bookkeeping. For a general-position surface the
    /// exceptionals are auto-named `E1..En` and nothing else is tracked.
    pub fn elaborate(spec: &SurfaceSpec) -> Result<Tower> {
        spec.validate()?;
        match &spec.model {
            SurfaceModel::GeneralPosition => {
                let n = spec.n;
                let items: Vec<TrackedCurve> = (0..n)
                    .map(|j| TrackedCurve {
                        name: format!("E{}", j + 1),
                        kind: TrackedKind::Exceptional { center: j },
                        multiplicities: vec![0; n],
                        class: DivisorClass::exceptional(n, j + 1),
                    })
                    .collect();
                Ok(Tower::from_items(n, items))
            }
            SurfaceModel::Tower { tower, curves } => {
                let n = tower.len();
                let mut items: Vec<TrackedCurve> = Vec::new();
                let mut index: BTreeMap<String, usize> = BTreeMap::new();
                let mut center_item: Vec<usize> = Vec::new();

                for decl in curves {
                    if index.contains_key(&decl.name) {
                        return Err(Error::DuplicateName(decl.name.clone()));
                    }
                    index.insert(decl.name.clone(), items.len());
                    items.push(TrackedCurve {
                        name: decl.name.clone(),
                        kind: TrackedKind::Plane {
                            degree: decl.plane_degree,
                        },
                        multiplicities: vec![0; n],
                        class: DivisorClass::zero(n),
                    });
                }

                for (j, center) in tower.iter().enumerate() {
                    // Resolve which tracked objects pass through this center.
                    let incident: Vec<usize> = match &center.kind {
                        CenterKind::GeneralPoint => Vec::new(),
                        CenterKind::OnCurves { curves } => {
                            let mut ids = Vec::new();
                            for name in curves {
                                ids.push(resolve(&index, name)?);
                            }
                            ids.sort_unstable();
                            ids.dedup();
                            ids
                        }
                        CenterKind::IntersectionOf { a, b } => {
                            let ia = resolve(&index, a)?;
                            let ib = resolve(&index, b)?;
                            if ia == ib {
                                return Err(Error::InvalidInput(format!(
                                    "center `{}` intersects `{a}` with itself",
                                    center.name
                                )));
                            }
                            let ca = class_at_stage(&items[ia], j, n);
                            let cb = class_at_stage(&items[ib], j, n);
                            let pairing = ca.intersect(&cb)?;
                            if pairing <= Rational::zero() {
                                return Err(Error::InvalidInput(format!(
                                    "center `{}`: proper transforms of `{a}` and `{b}` \
                                     have intersection number {} at this stage, expected > 0",
                                    center.name, pairing
                                )));
                            }
                            vec![ia, ib]
                        }
                        CenterKind::OnExceptional { index: idx } => {
                            if *idx >= j {
                                return Err(Error::InvalidInput(format!(
                                    "center `{}` references exceptional {idx}, \
                                     which is not earlier in the tower",
                                    center.name
                                )));
                            }
                            vec![center_item[*idx]]
                        }
                    };
                    for id in incident {
                        items[id].multiplicities[j] += 1;
                    }
                    if index.contains_key(&center.name) {
                        return Err(Error::DuplicateName(center.name.clone()));
                    }
                    index.insert(center.name.clone(), items.len());
                    center_item.push(items.len());
                    items.push(TrackedCurve {
                        name: center.name.clone(),
                        kind: TrackedKind::Exceptional { center: j },
                        multiplicities: vec![0; n],
                        class: DivisorClass::zero(n),
                    });
                }

                // Final classes: total transform minus multiplicity-weighted
                // exceptionals.
                for item in items.iter_mut() {
                    let mut coeffs = vec![Rational::zero(); n + 1];
                    match item.kind {
                        TrackedKind::Plane { degree } => {
                            coeffs[0] = Rational::from_integer(degree.into());
                        }
                        TrackedKind::Exceptional { center } => {
                            coeffs[center + 1] = Rational::one();
                        }
                    }
                    for (j, &m) in item.multiplicities.iter().enumerate() {
                        if m > 0 {
                            coeffs[j + 1] = &coeffs[j + 1] - Rational::from_integer(m.into());
                        }
                    }
                    item.class = DivisorClass::new(coeffs);
                }

                Ok(Tower {
                    blowups: n,
                    items,
                    index,
                })
            }
        }
    }

    fn from_items(blowups: usize, items: Vec<TrackedCurve>) -> Tower {
        let index = items
            .iter()
            .enumerate()
            .map(|(i, it)| (it.name.clone(), i))
            .collect();
        Tower {
            blowups,
            items,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.blowups + 1
    }

    pub fn items(&self) -> &[TrackedCurve] {
        &self.items
    }

    pub fn class_of(&self, name: &str) -> Option<&DivisorClass> {
        self.index.get(name).map(|&i| &self.items[i].class)
    }

    pub fn curve(&self, name: &str) -> Option<&TrackedCurve> {
        self.index.get(name).map(|&i| &self.items[i])
    }
}

fn resolve(index: &BTreeMap<String, usize>, name: &str) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::UnknownCurve(name.to_string()))
}

/// Proper-transform class of a tracked curve just before blow-up `stage`:
/// only multiplicities at centers `< stage` are subtracted. Represented in
/// the full-rank lattice (later coordinates are zero), which pairs
/// identically.
fn class_at_stage(item: &TrackedCurve, stage: usize, n: usize) -> DivisorClass {
    let mut coeffs = vec![Rational::zero(); n + 1];
    match item.kind {
        TrackedKind::Plane { degree } => coeffs[0] = Rational::from_integer(degree.into()),
        TrackedKind::Exceptional { center } => coeffs[center + 1] = Rational::one(),
    }
    for j in 0..stage {
        let m = item.multiplicities[j];
        if m > 0 {
            coeffs[j + 1] = &coeffs[j + 1] - Rational::from_integer(m.into());
        }
    }
    DivisorClass::new(coeffs)
}
