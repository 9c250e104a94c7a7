//! Exact decimal filtration values.
//!
//! Critical values and sublevel thresholds are compared exactly as the
//! decimals read from input; no floating point is involved, so "a equals a
//! critical value" is a well-defined question. A level is stored as a
//! normalized integer mantissa and a base-10 scale: `mantissa / 10^scale`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelError {
    #[error("invalid decimal literal {literal:?}: expected an optional sign, digits, and at most one decimal point")]
    InvalidLiteral { literal: String },
}

/// An exact decimal number, totally ordered and hashable.
#[derive(Clone, Debug)]
pub struct Level {
    mantissa: BigInt,
    scale: u32,
}

impl Level {
    pub fn from_integer(n: i64) -> Self {
        Self {
            mantissa: BigInt::from(n),
            scale: 0,
        }
        .normalized()
    }

    /// `mantissa * 10^(-scale)`.
    pub fn from_mantissa_scale(mantissa: BigInt, scale: u32) -> Self {
        Self { mantissa, scale }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.scale = 0;
            return self;
        }
        let ten = BigInt::from(10);
        while self.scale > 0 && (&self.mantissa % &ten).is_zero() {
            self.mantissa /= &ten;
            self.scale -= 1;
        }
        self
    }

    /// Exact midpoint of two levels; the result is again a finite decimal.
    pub fn midpoint(a: &Level, b: &Level) -> Level {
        let scale = a.scale.max(b.scale);
        let ma = &a.mantissa * pow10(scale - a.scale);
        let mb = &b.mantissa * pow10(scale - b.scale);
        let sum = ma + mb;
        if (&sum % 2i32).is_zero() {
            Level::from_mantissa_scale(sum / 2, scale)
        } else {
            Level::from_mantissa_scale(sum * 5, scale + 1)
        }
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Level {}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        let a = &self.mantissa * pow10(scale - self.scale);
        let b = &other.mantissa * pow10(scale - other.scale);
        a.cmp(&b)
    }
}

impl std::hash::Hash for Level {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // Normalized form is canonical, so field-wise hashing is consistent
        // with Eq.
        self.mantissa.hash(state);
        self.scale.hash(state);
    }
}

impl FromStr for Level {
    type Err = LevelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LevelError::InvalidLiteral {
            literal: s.to_string(),
        };
        let trimmed = s.trim();
        let (sign, digits) = match trimmed.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, trimmed.strip_prefix('+').unwrap_or(trimmed)),
        };
        if digits.is_empty() {
            return Err(err());
        }
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return Err(err());
        }
        let joined = format!("{int_part}{frac_part}");
        let mantissa: BigInt = if joined.is_empty() {
            BigInt::zero()
        } else {
            joined.parse().map_err(|_| err())?
        };
        let scale = u32::try_from(frac_part.len()).map_err(|_| err())?;
        Ok(Level::from_mantissa_scale(BigInt::from(sign) * mantissa, scale))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let abs = self.mantissa.abs().to_string();
        let scale = self.scale as usize;
        if abs.len() > scale {
            let (int, frac) = abs.split_at(abs.len() - scale);
            write!(f, "{sign}{int}.{frac}")
        } else {
            write!(f, "{sign}0.{}{abs}", "0".repeat(scale - abs.len()))
        }
    }
}
