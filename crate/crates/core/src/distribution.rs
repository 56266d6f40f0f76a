use std::ops::RangeInclusive;

use num_traits::{One, Signed, Zero};

use crate::exact::{to_f64, Rational};
use crate::{Error, Result};

/// Masses of a distribution on `offset, offset+1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub enum Masses {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// A probability distribution on a contiguous range of integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    offset: usize,
    masses: Masses,
}

pub const FLOAT_TOLERANCE: f64 = 1e-12;

impl Distribution {
    /// Nonnegative rational masses summing to exactly 1.
    pub fn exact(offset: usize, masses: Vec<Rational>) -> Result<Self> {
        if masses.iter().any(|m| m.is_negative()) {
            return Err(Error::Invariant("negative probability mass".into()));
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::Invariant(format!("masses sum to {total}, not 1")));
        }
        Ok(Self {
            offset,
            masses: Masses::Exact(masses),
        })
    }

    /// Nonnegative float masses summing to 1 within [`FLOAT_TOLERANCE`].
    pub fn float(offset: usize, masses: Vec<f64>) -> Result<Self> {
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::Invariant("negative or non-finite probability mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > FLOAT_TOLERANCE {
            return Err(Error::Invariant(format!("masses sum to {total}, not 1")));
        }
        Ok(Self {
            offset,
            masses: Masses::Float(masses),
        })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(offset: usize, weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidParameter("all weights vanish".into()));
        }
        Self::exact(offset, weights.into_iter().map(|w| w / &total).collect())
    }

    pub fn from_float_weights(offset: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("all weights vanish".into()));
        }
        Self::float(offset, weights.into_iter().map(|w| w / total).collect())
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn len(&self) -> usize {
        match &self.masses {
            Masses::Exact(v) => v.len(),
            Masses::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn support(&self) -> RangeInclusive<usize> {
        self.offset..=self.offset + self.len().saturating_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.masses, Masses::Exact(_))
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn exact_masses(&self) -> Option<&[Rational]> {
        match &self.masses {
            Masses::Exact(v) => Some(v),
            Masses::Float(_) => None,
        }
    }

    /// Exact mass at `k`, zero outside the support.
    pub fn exact_at(&self, k: usize) -> Option<Rational> {
        let v = self.exact_masses()?;
        Some(k.checked_sub(self.offset).and_then(|i| v.get(i)).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match &self.masses {
            Masses::Exact(v) => v.iter().map(to_f64).collect(),
            Masses::Float(v) => v.clone(),
        }
    }

    /// Mass at `k` as a float, zero outside the support.
    pub fn at(&self, k: usize) -> f64 {
        match k.checked_sub(self.offset) {
            Some(i) if i < self.len() => match &self.masses {
                Masses::Exact(v) => to_f64(&v[i]),
                Masses::Float(v) => v[i],
            },
            _ => 0.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.probabilities()
            .iter()
            .enumerate()
            .map(|(i, p)| (i + self.offset) as f64 * p)
            .sum()
    }

    /// Total variation distance to another distribution.
    pub fn total_variation(&self, other: &Distribution) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = (*self.support().end()).max(*other.support().end());
        0.5 * (lo..=hi).map(|k| (self.at(k) - other.at(k)).abs()).sum::<f64>()
    }
}
