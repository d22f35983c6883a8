//! Divisor-class arithmetic on blow-ups of the projective plane.
//!
//! Classes live in the total-transform exceptional basis `(H, E_1, ..., E_n)`
//! where `H` is the pullback of a line and `E_i` the total transform of the
//! i-th exceptional curve. The intersection form is `diag(1, -1, ..., -1)`,
//! so all lattice arithmetic is closed-form: proper transforms and
//! contractions are derived classes, never basis changes.

mod contraction;
mod tower;

pub use contraction::{contract, ContractionMap, ContractionStep};
pub use tower::{Tower, TrackedCurve, TrackedKind};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::{Error, Result};

/// An element of the Picard lattice with rational coefficients, stored as
/// `(d; m_1, ..., m_n)` in the basis `(H, E_1, ..., E_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coeffs: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "divisor class needs at least the H coefficient");
        DivisorClass { coeffs }
    }

    pub fn zero(blowups: usize) -> Self {
        DivisorClass::new(vec![Rational::zero(); blowups + 1])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        DivisorClass::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    /// The class of a general line, `H`.
    pub fn line(blowups: usize) -> Self {
        let mut c = Self::zero(blowups);
        c.coeffs[0] = Rational::one();
        c
    }

    /// The class of the i-th exceptional curve `E_i` (1-based).
    pub fn exceptional(blowups: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= blowups, "exceptional index out of range");
        let mut c = Self::zero(blowups);
        c.coeffs[i] = Rational::one();
        c
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    /// Coefficient of `H` (the plane degree for effective classes).
    pub fn degree(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Lattice rank `n + 1`.
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Number of blow-ups `n` of the owning surface.
    pub fn blowups(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        DivisorClass::new(self.coeffs.iter().map(|c| c * t).collect())
    }

    /// Intersection pairing `a.b = a_0 b_0 - sum_i a_i b_i`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<Rational> {
        intersect(self, other)
    }

    pub fn self_intersection(&self) -> Rational {
        intersect(self, self).expect("same class, same rank")
    }

    /// Nonnegative linear combination helper used by the family builders.
    pub fn combination(parts: &[(Rational, &DivisorClass)]) -> Result<DivisorClass> {
        let rank = parts
            .first()
            .map(|(_, c)| c.rank())
            .ok_or_else(|| Error::InvalidInput("empty combination".into()))?;
        let mut acc = DivisorClass::zero(rank - 1);
        for (coeff, class) in parts {
            if class.rank() != rank {
                return Err(Error::DimensionMismatch(rank, class.rank()));
            }
            acc = &acc + &class.scaled(coeff);
        }
        Ok(acc)
    }

    pub(crate) fn as_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.as_strings().join("; "))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.as_strings().join("; "))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        DivisorClass::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        DivisorClass::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<&Rational> for &DivisorClass {
    type Output = DivisorClass;
    fn mul(self, t: &Rational) -> DivisorClass {
        self.scaled(t)
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        if raw.is_empty() {
            return Err(D::Error::custom("divisor class must not be empty"));
        }
        if raw.len() > crate::MAX_RANK {
            return Err(D::Error::custom(format!(
                "divisor class too long ({} entries)",
                raw.len()
            )));
        }
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(DivisorClass::new(coeffs))
    }
}

/// The intersection form `a.b = a_0 b_0 - sum_{i>=1} a_i b_i`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
    if a.rank() != b.rank() {
        return Err(Error::DimensionMismatch(a.rank(), b.rank()));
    }
    let mut acc = &a.coeffs[0] * &b.coeffs[0];
    for i in 1..a.rank() {
        acc = acc - &a.coeffs[i] * &b.coeffs[i];
    }
    Ok(acc)
}

/// Canonical class `K = (-3; 1, ..., 1)`, so `K^2 = 9 - n`.
pub fn canonical_class(blowups: usize) -> DivisorClass {
    let mut coeffs = vec![Rational::one(); blowups + 1];
    coeffs[0] = rat(-3, 1);
    DivisorClass::new(coeffs)
}

/// How a blow-up center sits relative to earlier objects. Incidence is
/// declared, not inferred: the builder trusts these declarations, and only
/// `IntersectionOf` is sanity-checked (the two proper transforms must still
/// meet when the center is declared).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CenterKind {
    /// A point on no tracked curve.
    GeneralPoint,
    /// A point lying on the proper transforms of the named objects
    /// (declared plane curves or earlier exceptionals) and nothing else.
    OnCurves { curves: Vec<String> },
    /// The intersection point of two named proper transforms.
    IntersectionOf { a: String, b: String },
    /// A general point of the exceptional curve of an earlier blow-up
    /// (0-based index into the tower).
    OnExceptional { index: usize },
}

/// One blow-up in a tower. `name` names the exceptional curve it creates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterSpec {
    pub name: String,
    pub kind: CenterKind,
}

/// A plane curve tracked through a tower; multiplicities at the centers are
/// derived from the incidence declarations, one per membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDecl {
    pub name: String,
    pub plane_degree: u32,
}

/// A blow-up of the plane: either at points in general position, or an
/// explicit tower with incidence declarations (centers may be infinitely
/// near).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum SurfaceModel {
    GeneralPosition,
    Tower {
        tower: Vec<CenterSpec>,
        curves: Vec<CurveDecl>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub n: usize,
    #[serde(flatten)]
    pub model: SurfaceModel,
}

impl SurfaceSpec {
    pub fn general_position(n: usize) -> Self {
        SurfaceSpec {
            n,
            model: SurfaceModel::GeneralPosition,
        }
    }

    pub fn tower(centers: Vec<CenterSpec>, curves: Vec<CurveDecl>) -> Self {
        SurfaceSpec {
            n: centers.len(),
            model: SurfaceModel::Tower {
                tower: centers,
                curves,
            },
        }
    }

    /// Number of blow-ups; the lattice rank is `n + 1`.
    pub fn blowups(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn is_general_position(&self) -> bool {
        matches!(self.model, SurfaceModel::GeneralPosition)
    }

    pub fn canonical_class(&self) -> DivisorClass {
        canonical_class(self.n)
    }

    /// `K^2 = 9 - n`.
    pub fn k_squared(&self) -> i64 {
        9 - self.n as i64
    }

    /// Structural validation; tower incidence checks happen in
    /// [`Tower::elaborate`].
    pub fn validate(&self) -> Result<()> {
        match &self.model {
            SurfaceModel::GeneralPosition => {
                if self.n > 9 {
                    return Err(Error::UnsupportedBlowups {
                        n: self.n,
                        max: 9,
                        context: "general-position model",
                    });
                }
                Ok(())
            }
            SurfaceModel::Tower { tower, curves } => {
                if tower.len() != self.n {
                    return Err(Error::InvalidInput(format!(
                        "surface.n is {} but the tower lists {} centers",
                        self.n,
                        tower.len()
                    )));
                }
                if self.n + 1 > crate::MAX_RANK {
                    return Err(Error::UnsupportedBlowups {
                        n: self.n,
                        max: crate::MAX_RANK - 1,
                        context: "tower model",
                    });
                }
                if curves.len() > crate::MAX_RANK {
                    return Err(Error::InvalidInput(format!(
                        "too many declared curves ({})",
                        curves.len()
                    )));
                }
                Ok(())
            }
        }
    }

    /// Proper transform of a named tower curve (or exceptional) on the final
    /// surface.
    pub fn proper_transform(&self, name: &str) -> Result<DivisorClass> {
        let tower = Tower::elaborate(self)?;
        tower
            .class_of(name)
            .cloned()
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_basics() {
        let h = DivisorClass::line(6);
        assert_eq!(intersect(&h, &h).unwrap(), rat(1, 1));
        let k = canonical_class(6);
        assert_eq!(intersect(&k, &k).unwrap(), rat(3, 1));
        // Conic through five points.
        let conic = DivisorClass::from_integers(&[2, -1, -1, -1, -1, -1, 0]);
        assert_eq!(conic.self_intersection(), rat(-1, 1));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_class(0), DivisorClass::from_integers(&[-3]));
        assert_eq!(
            canonical_class(6),
            DivisorClass::from_integers(&[-3, 1, 1, 1, 1, 1, 1])
        );
        assert_eq!(canonical_class(9).self_intersection(), rat(0, 1));
        for n in 0..=9 {
            assert_eq!(canonical_class(n).self_intersection(), rat(9 - n as i64, 1));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = DivisorClass::line(2);
        let b = DivisorClass::line(3);
        assert!(matches!(
            intersect(&a, &b),
            Err(Error::DimensionMismatch(3, 4))
        ));
    }

    #[test]
    fn signature_on_basis() {
        let n = 8;
        let h = DivisorClass::line(n);
        assert_eq!(h.self_intersection(), rat(1, 1));
        for i in 1..=n {
            let e = DivisorClass::exceptional(n, i);
            assert_eq!(e.self_intersection(), rat(-1, 1));
            assert_eq!(intersect(&h, &e).unwrap(), rat(0, 1));
            for j in i + 1..=n {
                let f = DivisorClass::exceptional(n, j);
                assert_eq!(intersect(&e, &f).unwrap(), rat(0, 1));
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let c = DivisorClass::new(vec![rat(3, 1), rat(-1, 1), rat(-1, 16)]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"["3","-1","-1/16"]"#);
        let back: DivisorClass = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
