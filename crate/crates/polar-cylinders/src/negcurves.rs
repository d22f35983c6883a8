//! Negative curve classes on general-position blow-ups: (-1)-classes,
//! (-2)-root representatives, ampleness tests, and the generality check
//! used by the verdict engine.

use num::Zero;
use serde::Serialize;

use crate::picard::{canonical_class, DivisorClass, SurfaceSpec, Tower};
use crate::rational::{rat, Rational};
use crate::{Error, Result};

/// All subsets of `0..n` of size `k`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for i in start..=n.saturating_sub(remaining) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn class_from_pattern(n: usize, degree: i64, mults: &[(usize, i64)]) -> DivisorClass {
    let mut coeffs = vec![0i64; n + 1];
    coeffs[0] = degree;
    for &(i, m) in mults {
        coeffs[i + 1] = -m;
    }
    DivisorClass::from_integers(&coeffs)
}

/// Complete list of (-1)-classes (`c^2 = -1`, `c.K = -1`) for `1 <= n <= 8`,
/// canonically ordered. Built from the standard combinatorial types:
/// exceptionals, lines through two points, conics through five, and the
/// higher-degree types that appear once eight points are available.
pub fn minus_one_classes(n: usize) -> Result<Vec<DivisorClass>> {
    if n == 0 || n > 8 {
        return Err(Error::UnsupportedBlowups {
            n,
            max: 8,
            context: "(-1)-class enumeration",
        });
    }
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(DivisorClass::exceptional(n, i));
    }
    for pair in combinations(n, 2) {
        out.push(class_from_pattern(n, 1, &[(pair[0], 1), (pair[1], 1)]));
    }
    for five in combinations(n, 5) {
        let mults: Vec<_> = five.iter().map(|&i| (i, 1)).collect();
        out.push(class_from_pattern(n, 2, &mults));
    }
    // Degree 3: one double point plus six simple points.
    for a in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != a).collect();
        for six in combinations(rest.len(), 6) {
            let mut mults = vec![(a, 2)];
            mults.extend(six.iter().map(|&j| (rest[j], 1)));
            out.push(class_from_pattern(n, 3, &mults));
        }
    }
    // Degree 4: three double points plus five simple points.
    for triple in combinations(n, 3) {
        let rest: Vec<usize> = (0..n).filter(|i| !triple.contains(i)).collect();
        for five in combinations(rest.len(), 5) {
            let mut mults: Vec<_> = triple.iter().map(|&i| (i, 2)).collect();
            mults.extend(five.iter().map(|&j| (rest[j], 1)));
            out.push(class_from_pattern(n, 4, &mults));
        }
    }
    // Degree 5: six double points plus two simple points.
    for six in combinations(n, 6) {
        let rest: Vec<usize> = (0..n).filter(|i| !six.contains(i)).collect();
        for two in combinations(rest.len(), 2) {
            let mut mults: Vec<_> = six.iter().map(|&i| (i, 2)).collect();
            mults.extend(two.iter().map(|&j| (rest[j], 1)));
            out.push(class_from_pattern(n, 5, &mults));
        }
    }
    // Degree 6: one triple point plus seven double points.
    for a in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != a).collect();
        for seven in combinations(rest.len(), 7) {
            let mut mults = vec![(a, 3)];
            mults.extend(seven.iter().map(|&j| (rest[j], 2)));
            out.push(class_from_pattern(n, 6, &mults));
        }
    }
    out.sort();
    out.dedup();

    let k = canonical_class(n);
    for c in &out {
        debug_assert_eq!(c.self_intersection(), rat(-1, 1));
        debug_assert_eq!(c.intersect(&k).unwrap(), rat(-1, 1));
    }
    Ok(out)
}

/// Root classes (`c^2 = -2`, `c.K = 0`) up to sign for `1 <= n <= 8`;
/// representatives have `d >= 0` and, for `d = 0`, first nonzero coefficient
/// positive.
pub fn minus_two_classes(n: usize) -> Result<Vec<DivisorClass>> {
    if n == 0 || n > 8 {
        return Err(Error::UnsupportedBlowups {
            n,
            max: 8,
            context: "(-2)-class enumeration",
        });
    }
    let mut out = Vec::new();
    // E_i - E_j with i < j.
    for pair in combinations(n, 2) {
        let mut coeffs = vec![0i64; n + 1];
        coeffs[pair[0] + 1] = 1;
        coeffs[pair[1] + 1] = -1;
        out.push(DivisorClass::from_integers(&coeffs));
    }
    for three in combinations(n, 3) {
        let mults: Vec<_> = three.iter().map(|&i| (i, 1)).collect();
        out.push(class_from_pattern(n, 1, &mults));
    }
    for six in combinations(n, 6) {
        let mults: Vec<_> = six.iter().map(|&i| (i, 1)).collect();
        out.push(class_from_pattern(n, 2, &mults));
    }
    for a in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != a).collect();
        for seven in combinations(rest.len(), 7) {
            let mut mults = vec![(a, 2)];
            mults.extend(seven.iter().map(|&j| (rest[j], 1)));
            out.push(class_from_pattern(n, 3, &mults));
        }
    }
    out.sort();
    out.dedup();

    let k = canonical_class(n);
    for c in &out {
        debug_assert_eq!(c.self_intersection(), rat(-2, 1));
        debug_assert_eq!(c.intersect(&k).unwrap(), rat(0, 1));
    }
    Ok(out)
}

/// Negative classes of a general-position surface, canonically ordered and
/// duplicate-free.
#[derive(Clone, Debug)]
pub struct NegClassSet {
    pub n: usize,
    pub minus_one: Vec<DivisorClass>,
    pub minus_two: Vec<DivisorClass>,
}

impl NegClassSet {
    pub fn new(n: usize) -> Result<NegClassSet> {
        Ok(NegClassSet {
            n,
            minus_one: minus_one_classes(n)?,
            minus_two: minus_two_classes(n)?,
        })
    }
}

/// Extremal-ray generators of the Mori (equivalently effective) cone of a
/// general-position blow-up.
///
/// For `2 <= n <= 8` the (-1)-classes generate. `n = 0` is the single ray
/// `H`. `n = 1` needs the fiber class `H - E_1` as well: the cone of the
/// ruled surface is spanned by the exceptional section and the fiber, and
/// the fiber is a 0-curve, not a (-1)-class.
pub fn mori_generators(n: usize) -> Result<Vec<DivisorClass>> {
    match n {
        0 => Ok(vec![DivisorClass::line(0)]),
        1 => Ok(vec![
            DivisorClass::exceptional(1, 1),
            &DivisorClass::line(1) - &DivisorClass::exceptional(1, 1),
        ]),
        2..=8 => minus_one_classes(n),
        _ => Err(Error::UnsupportedBlowups {
            n,
            max: 8,
            context: "Mori cone generators",
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmpleWitness {
    pub label: String,
    pub class: DivisorClass,
    #[serde(with = "crate::rational::serde_str")]
    pub pairing: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmpleReport {
    pub ample: bool,
    /// True when only the tracked curves of a tower were checked.
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AmpleWitness>,
}

impl AmpleReport {
    fn pass(partial: bool) -> Self {
        AmpleReport {
            ample: true,
            partial,
            witness: None,
        }
    }

    fn fail(partial: bool, label: String, class: DivisorClass, pairing: Rational) -> Self {
        AmpleReport {
            ample: false,
            partial,
            witness: Some(AmpleWitness {
                label,
                class,
                pairing,
            }),
        }
    }
}

/// Ampleness test. General position with `n <= 8` is a full Nakai-type
/// check against the Mori generators; towers only check the tracked curves
/// and flag the result as partial.
pub fn is_ample(spec: &SurfaceSpec, a: &DivisorClass) -> Result<AmpleReport> {
    spec.validate()?;
    if a.rank() != spec.rank() {
        return Err(Error::DimensionMismatch(spec.rank(), a.rank()));
    }
    if spec.is_general_position() {
        let n = spec.blowups();
        if n == 0 {
            return Ok(if a.degree() > &Rational::zero() {
                AmpleReport::pass(false)
            } else {
                AmpleReport::fail(false, "H".into(), DivisorClass::line(0), a.degree().clone())
            });
        }
        if n > 8 {
            return Err(Error::UnsupportedBlowups {
                n,
                max: 8,
                context: "full ampleness check",
            });
        }
        let square = a.self_intersection();
        if square <= Rational::zero() {
            return Ok(AmpleReport::fail(
                false,
                "self-intersection".into(),
                a.clone(),
                square,
            ));
        }
        for gen in mori_generators(n)? {
            let pairing = a.intersect(&gen)?;
            if pairing <= Rational::zero() {
                return Ok(AmpleReport::fail(false, format!("{gen}"), gen, pairing));
            }
        }
        Ok(AmpleReport::pass(false))
    } else {
        let tower = Tower::elaborate(spec)?;
        let square = a.self_intersection();
        if square <= Rational::zero() {
            return Ok(AmpleReport::fail(
                true,
                "self-intersection".into(),
                a.clone(),
                square,
            ));
        }
        for item in tower.items() {
            let pairing = a.intersect(&item.class)?;
            if pairing <= Rational::zero() {
                return Ok(AmpleReport::fail(
                    true,
                    item.name.clone(),
                    item.class.clone(),
                    pairing,
                ));
            }
        }
        Ok(AmpleReport::pass(true))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StarWitness {
    pub label: String,
    pub class: DivisorClass,
    #[serde(with = "crate::rational::serde_str")]
    pub self_intersection: Rational,
}

/// Outcome of the generality check: does every smooth rational curve have
/// self-intersection at least -1?
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum StarReport {
    Holds { note: String },
    Conditional { assumptions: String },
    Violated { witnesses: Vec<StarWitness> },
    Inconclusive { note: String },
}

impl StarReport {
    pub fn tag(&self) -> &'static str {
        match self {
            StarReport::Holds { .. } => "holds",
            StarReport::Conditional { .. } => "conditional",
            StarReport::Violated { .. } => "violated",
            StarReport::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Holds or Conditional: good enough for the verdict engine.
    pub fn admissible(&self) -> bool {
        matches!(self, StarReport::Holds { .. } | StarReport::Conditional { .. })
    }
}

/// Generality check. General-position blow-ups with `n <= 8` satisfy it
/// outright; nine points satisfy it when every anticanonical member is
/// irreducible. Towers are scanned: any tracked class that is rational in
/// class (`c.(c+K) = -2`) with `c^2 <= -2` is a violation witness; finding
/// none proves nothing, so the result is inconclusive.
pub fn star_check(spec: &SurfaceSpec) -> Result<StarReport> {
    spec.validate()?;
    if spec.is_general_position() {
        let n = spec.blowups();
        if n <= 8 {
            return Ok(StarReport::Holds {
                note: format!(
                    "blow-up of the plane at {n} points in general position: \
                     no smooth rational curve has self-intersection below -1"
                ),
            });
        }
        return Ok(StarReport::Conditional {
            assumptions: "nine general points: holds when every member of the \
                          anticanonical pencil is irreducible"
                .into(),
        });
    }
    let tower = Tower::elaborate(spec)?;
    let k = spec.canonical_class();
    let mut witnesses = Vec::new();
    for item in tower.items() {
        let square = item.class.self_intersection();
        let genus_pairing = item.class.intersect(&(&item.class + &k))?;
        if square <= rat(-2, 1) && genus_pairing == rat(-2, 1) {
            witnesses.push(StarWitness {
                label: item.name.clone(),
                class: item.class.clone(),
                self_intersection: square,
            });
        }
    }
    if witnesses.is_empty() {
        Ok(StarReport::Inconclusive {
            note: "no tracked rational class with self-intersection at most -2; \
                   untracked curves may still violate the bound"
                .into(),
        })
    } else {
        Ok(StarReport::Violated { witnesses })
    }
}
