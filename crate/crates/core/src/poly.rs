//! Graded polynomials with nonnegative integer coefficients.
//!
//! Used as Poincaré polynomials: the coefficient of t^k is a Betti number.
//! Only nonzero coefficients are stored.

use std::collections::BTreeMap;
use std::fmt;

/// A finitely supported map degree -> nonnegative coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedPolynomial {
    coeffs: BTreeMap<usize, u64>,
}

impl GradedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1 (unit of the product).
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(degree: usize, coefficient: u64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coefficient != 0 {
            coeffs.insert(degree, coefficient);
        }
        Self { coeffs }
    }

    pub fn from_coefficients<I: IntoIterator<Item = (usize, u64)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (d, c) in iter {
            p.add_term(d, c);
        }
        p
    }

    pub fn add_term(&mut self, degree: usize, coefficient: u64) {
        if coefficient == 0 {
            return;
        }
        *self.coeffs.entry(degree).or_insert(0) += coefficient;
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coeffs.get(&degree).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&d, &c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient-wise convolution (polynomial product).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (da, ca) in self.terms() {
            for (db, cb) in other.terms() {
                out.add_term(da + db, ca * cb);
            }
        }
        out
    }

    /// Evaluation at t = -1, i.e. the alternating coefficient sum.
    pub fn eval_at_minus_one(&self) -> i64 {
        self.terms()
            .map(|(d, c)| {
                let c = c as i64;
                if d % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Sparse `degree:coefficient` rendering, e.g. `0:1 2:1 3:1 5:1`.
    pub fn sparse_pairs(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(d, c)| format!("{d}:{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for GradedPolynomial {
    /// Human form, e.g. `1 + 2t + t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (d, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (d, 1) => write!(f, "t^{d}")?,
                (d, c) => write!(f, "{c}t^{d}")?,
            }
        }
        Ok(())
    }
}
