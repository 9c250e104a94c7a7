//! Holonomy bookkeeping and rational invariants of model spaces.
//!
//! The holonomy table and the rank-1 symmetric-space stabilizers are data;
//! the computations here are dimension accounting, Poincaré-polynomial
//! products, and the exact exponential growth test. Anything that needs an
//! actual chain complex lives in the other modules and is only cross-checked
//! against these closed forms in the tests.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use thiserror::Error;

use crate::poly::GradedPolynomial;

pub type BigRational = Ratio<BigInt>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpacesError {
    #[error("unknown holonomy group {name:?}")]
    UnknownGroup { name: String },
    #[error("{group} is not an entry of the irreducible non-symmetric holonomy table")]
    NotInBergerTable { group: String },
    #[error("holonomy parameter must be at least 1 in {name:?}")]
    BadParameter { name: String },
    #[error("factor list is empty")]
    EmptyFactors,
    #[error("factor dimensions sum to {sum}, expected total dimension {expected}")]
    DimensionMismatch { sum: usize, expected: usize },
    #[error("unknown space label {label:?} (expected S(n), CP(n), HP(n), or OP2)")]
    UnknownSpaceLabel { label: String },
    #[error("space parameter must be at least 1 in {label:?}")]
    BadSpaceParameter { label: String },
    #[error("growth base must be greater than 1, got {alpha}")]
    AlphaNotAboveOne { alpha: String },
    #[error("growth window start must satisfy 1 <= N <= {len}, got {start}")]
    BadGrowthWindow { start: usize, len: usize },
}

/// One factor of a holonomy decomposition: an entry of the irreducible
/// non-symmetric table or the stabilizer of a rank-1 symmetric space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HolonomyFactor {
    /// SO(n), acting on dimension n.
    SpecialOrthogonal(u32),
    /// U(n), dimension 2n.
    Unitary(u32),
    /// SU(n), dimension 2n.
    SpecialUnitary(u32),
    /// Sp(n)·Sp(1), dimension 4n.
    QuaternionKahler(u32),
    /// Sp(n), dimension 4n.
    Hyperkahler(u32),
    /// G2, dimension 7.
    G2,
    /// Spin(7), dimension 8.
    Spin7,
    /// S(U(1)×U(n)), stabilizer of complex projective space, dimension 2n.
    ComplexProjectiveStabilizer(u32),
    /// SO(1)×SO(n), stabilizer of the sphere, dimension n.
    SphereStabilizer(u32),
    /// Sp(1)×Sp(n), stabilizer of quaternionic projective space, dim 4n.
    QuaternionicProjectiveStabilizer(u32),
    /// Spin(9), stabilizer of the Cayley plane, dimension 16.
    Spin9,
}

impl HolonomyFactor {
    /// Real dimension of the manifold carrying this holonomy factor.
    pub fn real_dimension(&self) -> usize {
        use HolonomyFactor::*;
        match *self {
            SpecialOrthogonal(n) => n as usize,
            Unitary(n) | SpecialUnitary(n) => 2 * n as usize,
            QuaternionKahler(n) | Hyperkahler(n) => 4 * n as usize,
            G2 => 7,
            Spin7 => 8,
            ComplexProjectiveStabilizer(n) => 2 * n as usize,
            SphereStabilizer(n) => n as usize,
            QuaternionicProjectiveStabilizer(n) => 4 * n as usize,
            Spin9 => 16,
        }
    }
}

impl fmt::Display for HolonomyFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use HolonomyFactor::*;
        match *self {
            SpecialOrthogonal(n) => write!(f, "SO({n})"),
            Unitary(n) => write!(f, "U({n})"),
            SpecialUnitary(n) => write!(f, "SU({n})"),
            QuaternionKahler(n) => write!(f, "Sp({n})·Sp(1)"),
            Hyperkahler(n) => write!(f, "Sp({n})"),
            G2 => write!(f, "G2"),
            Spin7 => write!(f, "Spin(7)"),
            ComplexProjectiveStabilizer(n) => write!(f, "S(U(1)×U({n}))"),
            SphereStabilizer(n) => write!(f, "SO(1)×SO({n})"),
            QuaternionicProjectiveStabilizer(n) => write!(f, "Sp(1)×Sp({n})"),
            Spin9 => write!(f, "Spin(9)"),
        }
    }
}

impl FromStr for HolonomyFactor {
    type Err = SpacesError;

    /// Accepts the display forms plus ASCII aliases: `*` for `·`, `x` for
    /// `×`, e.g. `Sp(2)*Sp(1)`, `S(U(1)xU(3))`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim();
        let unknown = || SpacesError::UnknownGroup {
            name: raw.to_string(),
        };
        let canon: String = raw
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .replace('·', "*")
            .replace(['×', 'X'], "x");
        let param = |text: &str, prefix: &str, suffix: &str| -> Option<u32> {
            text.strip_prefix(prefix)?
                .strip_suffix(suffix)?
                .parse()
                .ok()
        };
        let require_positive = |n: u32| -> Result<u32, SpacesError> {
            if n == 0 {
                Err(SpacesError::BadParameter {
                    name: raw.to_string(),
                })
            } else {
                Ok(n)
            }
        };
        match canon.as_str() {
            "G2" | "G_2" => return Ok(HolonomyFactor::G2),
            "Spin(7)" => return Ok(HolonomyFactor::Spin7),
            "Spin(9)" => return Ok(HolonomyFactor::Spin9),
            _ => {}
        }
        if let Some(n) = param(&canon, "S(U(1)xU(", "))") {
            return Ok(HolonomyFactor::ComplexProjectiveStabilizer(
                require_positive(n)?,
            ));
        }
        if let Some(n) = param(&canon, "SO(1)xSO(", ")") {
            return Ok(HolonomyFactor::SphereStabilizer(require_positive(n)?));
        }
        if let Some(n) = param(&canon, "Sp(1)xSp(", ")") {
            return Ok(HolonomyFactor::QuaternionicProjectiveStabilizer(
                require_positive(n)?,
            ));
        }
        if let Some(n) = param(&canon, "Sp(", ")*Sp(1)") {
            return Ok(HolonomyFactor::QuaternionKahler(require_positive(n)?));
        }
        if let Some(n) = param(&canon, "SO(", ")") {
            return Ok(HolonomyFactor::SpecialOrthogonal(require_positive(n)?));
        }
        if let Some(n) = param(&canon, "SU(", ")") {
            return Ok(HolonomyFactor::SpecialUnitary(require_positive(n)?));
        }
        if let Some(n) = param(&canon, "U(", ")") {
            return Ok(HolonomyFactor::Unitary(require_positive(n)?));
        }
        if let Some(n) = param(&canon, "Sp(", ")") {
            return Ok(HolonomyFactor::Hyperkahler(require_positive(n)?));
        }
        Err(unknown())
    }
}

/// A row of the irreducible non-symmetric holonomy table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BergerEntry {
    pub group: String,
    pub real_dimension: usize,
    pub dimension_formula: &'static str,
    pub g_structure: &'static str,
    pub description: &'static str,
}

/// Looks up the table row for an irreducible non-symmetric holonomy group.
/// Symmetric-space stabilizers are not table entries and are rejected.
pub fn berger_lookup(group: &HolonomyFactor) -> Result<BergerEntry, SpacesError> {
    use HolonomyFactor::*;
    let (dimension_formula, g_structure, description) = match group {
        SpecialOrthogonal(_) => ("n", "Orientable manifold", "-"),
        Unitary(_) => ("2n", "Kähler", "Kähler"),
        SpecialUnitary(_) => ("2n", "Calabi-Yau Manifold", "Ricci-flat, Kähler"),
        QuaternionKahler(_) => ("4n", "Quaternion-Kähler manifold", "Einstein"),
        Hyperkahler(_) => ("4n", "Hyperkähler manifold", "Ricci-flat, Kähler"),
        G2 => ("7", "G₂ manifold", "Ricci-flat"),
        Spin7 => ("8", "Spin(7) manifold", "Ricci-flat"),
        ComplexProjectiveStabilizer(_)
        | SphereStabilizer(_)
        | QuaternionicProjectiveStabilizer(_)
        | Spin9 => {
            return Err(SpacesError::NotInBergerTable {
                group: group.to_string(),
            })
        }
    };
    Ok(BergerEntry {
        group: group.to_string(),
        real_dimension: group.real_dimension(),
        dimension_formula,
        g_structure,
        description,
    })
}

/// Result of checking a candidate product-holonomy decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyReport {
    pub factors: Vec<HolonomyFactor>,
    pub total_dimension: usize,
    /// A reducible decomposition needs at least two irreducible factors.
    pub reducible_valid: bool,
    /// The cohomology two-generator conclusion; asserted exactly when the
    /// decomposition is a valid product.
    pub two_generators: Option<bool>,
    pub product: String,
}

/// Checks dimension accounting and the two-factor requirement for a
/// holonomy decomposition. Dimension mismatches are errors; a single factor
/// yields a report that is simply not a valid reducible decomposition.
pub fn decompose_holonomy(
    factors: &[HolonomyFactor],
    total_dimension: usize,
) -> Result<HolonomyReport, SpacesError> {
    if factors.is_empty() {
        return Err(SpacesError::EmptyFactors);
    }
    let sum: usize = factors.iter().map(HolonomyFactor::real_dimension).sum();
    if sum != total_dimension {
        return Err(SpacesError::DimensionMismatch {
            sum,
            expected: total_dimension,
        });
    }
    let reducible_valid = factors.len() >= 2;
    let product = factors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" × ");
    Ok(HolonomyReport {
        factors: factors.to_vec(),
        total_dimension,
        reducible_valid,
        two_generators: reducible_valid.then_some(true),
        product,
    })
}

/// Product of Poincaré polynomials (the field-coefficient Künneth formula).
/// The empty product is the constant polynomial 1.
pub fn kunneth_poincare(polys: &[GradedPolynomial]) -> GradedPolynomial {
    polys
        .iter()
        .fold(GradedPolynomial::one(), |acc, p| acc.mul(p))
}

/// The four rank-1 symmetric space families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetricSpace {
    Sphere(u32),
    ComplexProjective(u32),
    QuaternionicProjective(u32),
    CayleyPlane,
}

impl SymmetricSpace {
    /// Poincaré polynomial of the minimal cell structure: one cell per
    /// listed degree, zero boundaries.
    pub fn poincare_polynomial(&self) -> GradedPolynomial {
        match *self {
            SymmetricSpace::Sphere(n) => {
                GradedPolynomial::from_coefficients([(0, 1), (n as usize, 1)])
            }
            SymmetricSpace::ComplexProjective(n) => {
                GradedPolynomial::from_coefficients((0..=n as usize).map(|i| (2 * i, 1)))
            }
            SymmetricSpace::QuaternionicProjective(n) => {
                GradedPolynomial::from_coefficients((0..=n as usize).map(|i| (4 * i, 1)))
            }
            SymmetricSpace::CayleyPlane => {
                GradedPolynomial::from_coefficients([(0, 1), (8, 1), (16, 1)])
            }
        }
    }

    /// Cell dimensions of the minimal structure.
    pub fn cell_dimensions(&self) -> Vec<usize> {
        self.poincare_polynomial().terms().map(|(d, _)| d).collect()
    }
}

impl FromStr for SymmetricSpace {
    type Err = SpacesError;

    /// Accepts `S(n)`, `CP(n)`, `HP(n)`, and `OP2` (also `OP(2)`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim();
        let param = |prefix: &str| -> Option<u32> {
            raw.strip_prefix(prefix)?
                .strip_suffix(')')?
                .parse()
                .ok()
        };
        let positive = |label: &str, n: u32| -> Result<u32, SpacesError> {
            if n == 0 {
                Err(SpacesError::BadSpaceParameter {
                    label: label.to_string(),
                })
            } else {
                Ok(n)
            }
        };
        if raw == "OP2" || raw == "OP(2)" {
            return Ok(SymmetricSpace::CayleyPlane);
        }
        if let Some(n) = param("S(") {
            return Ok(SymmetricSpace::Sphere(positive(raw, n)?));
        }
        if let Some(n) = param("CP(") {
            return Ok(SymmetricSpace::ComplexProjective(positive(raw, n)?));
        }
        if let Some(n) = param("HP(") {
            return Ok(SymmetricSpace::QuaternionicProjective(positive(raw, n)?));
        }
        Err(SpacesError::UnknownSpaceLabel {
            label: raw.to_string(),
        })
    }
}

impl fmt::Display for SymmetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymmetricSpace::Sphere(n) => write!(f, "S({n})"),
            SymmetricSpace::ComplexProjective(n) => write!(f, "CP({n})"),
            SymmetricSpace::QuaternionicProjective(n) => write!(f, "HP({n})"),
            SymmetricSpace::CayleyPlane => write!(f, "OP2"),
        }
    }
}

/// Outcome of the exponential growth test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    /// True iff sum_{i<=n} dims_i >= alpha^n for every n in the window.
    pub holds: bool,
    /// Smallest violating n when the test fails.
    pub first_violation: Option<usize>,
}

/// Exact test of sum_{i=1..n} dims_i >= alpha^n for all window_start <= n
/// <= dims.len(), with alpha an exact rational > 1. Indices are 1-based as
/// in the statement.
pub fn classify_growth(
    dims: &[u64],
    alpha: &BigRational,
    window_start: usize,
) -> Result<GrowthReport, SpacesError> {
    if *alpha <= BigRational::from_integer(BigInt::from(1)) {
        return Err(SpacesError::AlphaNotAboveOne {
            alpha: alpha.to_string(),
        });
    }
    if window_start < 1 || window_start > dims.len() {
        return Err(SpacesError::BadGrowthWindow {
            start: window_start,
            len: dims.len(),
        });
    }
    let mut partial = BigInt::from(0);
    for (i, &d) in dims.iter().enumerate() {
        let n = i + 1;
        partial += BigInt::from(d);
        if n < window_start {
            continue;
        }
        let bound = alpha.pow(n as i32);
        if BigRational::from_integer(partial.clone()) < bound {
            return Ok(GrowthReport {
                holds: false,
                first_violation: Some(n),
            });
        }
    }
    Ok(GrowthReport {
        holds: true,
        first_violation: None,
    })
}
