//! The orthogonal Ramanujan periodic transform on `Z_N`.
//!
//! The basis matrix `R_N` has one column per ORS with period dividing `N`:
//! divisors ascending, and within a divisor the order of
//! [`labels_for_divisor`]. Columns are mutually orthogonal integer vectors, so
//! `R_N^-1 = diag(1 / ||c||^2) R_N^T` and no linear solve is needed.

use std::collections::BTreeMap;

use crate::error::{check_len, Error, Result};
use crate::number_theory::{divisors, lcm};
use crate::ors::{labels_for_divisor, ors_divisor, OrsLabel, OrsVector};

/// Relative energy above which a divisor counts as a detected period.
pub const DEFAULT_PERIOD_THRESHOLD: f64 = 1e-6;

/// Scaling of the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `beta_c = <x, c> / ||c||^2`, so `x = R_N beta`.
    #[default]
    Integer,
    /// `beta_c = <x, c> / ||c||`, energy preserving.
    Orthonormal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrptBasis {
    len: usize,
    columns: Vec<OrsVector>,
}

impl OrptBasis {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Zero { what: "N" });
        }
        let mut columns = Vec::with_capacity(len);
        for d in divisors(len)? {
            for label in labels_for_divisor(d)? {
                columns.push(ors_divisor(d, &label.phases, &label.shifts, len)?);
            }
        }
        debug_assert_eq!(columns.len(), len);
        Ok(OrptBasis { len, columns })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn columns(&self) -> &[OrsVector] {
        &self.columns
    }

    pub fn labels(&self) -> impl Iterator<Item = &OrsLabel> {
        self.columns.iter().map(|c| c.label())
    }

    pub fn sq_norms(&self) -> Vec<i64> {
        self.columns.iter().map(|c| c.sq_norm()).collect()
    }

    /// `R_N` as rows: `matrix()[n][c]` is sample `n` of column `c`.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.len)
            .map(|n| self.columns.iter().map(|c| c.samples()[n]).collect())
            .collect()
    }

    pub fn forward(&self, x: &[f64], norm: Normalization) -> Result<OrptCoefficients> {
        check_len(self.len, x.len())?;
        let beta = self
            .columns
            .iter()
            .map(|c| {
                let ip: f64 = c.samples().iter().zip(x).map(|(&s, &v)| s as f64 * v).sum();
                ip / scale(c, norm)
            })
            .collect();
        Ok(OrptCoefficients { norm, beta })
    }

    pub fn inverse(&self, coeffs: &OrptCoefficients) -> Result<Vec<f64>> {
        self.synthesize(&coeffs.beta, coeffs.norm)
    }

    /// `x = sum_c beta_c c` (integer form) or `sum_c beta_c c / ||c||`.
    pub fn synthesize(&self, beta: &[f64], norm: Normalization) -> Result<Vec<f64>> {
        check_len(self.len, beta.len())?;
        let mut x = vec![0.0; self.len];
        for (c, &b) in self.columns.iter().zip(beta) {
            if b == 0.0 {
                continue;
            }
            let w = match norm {
                Normalization::Integer => b,
                Normalization::Orthonormal => b / scale(c, norm),
            };
            for (xn, &s) in x.iter_mut().zip(c.samples()) {
                *xn += w * s as f64;
            }
        }
        Ok(x)
    }

    /// Energy of `x` in each divisor subspace, summed over the orthonormal
    /// coefficients of that divisor. The values add up to `||x||^2`.
    pub fn period_energies(&self, x: &[f64]) -> Result<BTreeMap<usize, f64>> {
        let coeffs = self.forward(x, Normalization::Orthonormal)?;
        let mut out = BTreeMap::new();
        for (c, b) in self.columns.iter().zip(&coeffs.beta) {
            *out.entry(c.period()).or_insert(0.0) += b * b;
        }
        Ok(out)
    }

    /// Divisors whose share of the signal energy exceeds `threshold`.
    pub fn detect_periods(&self, x: &[f64], threshold: f64) -> Result<PeriodReport> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::Invalid(format!(
                "threshold {threshold} not in (0, 1)"
            )));
        }
        let energies = self.period_energies(x)?;
        let total: f64 = x.iter().map(|v| v * v).sum();
        let divisors = if total == 0.0 {
            Vec::new()
        } else {
            energies
                .iter()
                .filter(|&(_, &e)| e / total > threshold)
                .map(|(&d, _)| d)
                .collect()
        };
        let period = if divisors.is_empty() {
            None
        } else {
            Some(divisors.iter().fold(1, |acc, &d| lcm(acc, d)))
        };
        Ok(PeriodReport {
            divisors,
            period,
            energies,
            total,
        })
    }
}

fn scale(c: &OrsVector, norm: Normalization) -> f64 {
    match norm {
        Normalization::Integer => c.sq_norm() as f64,
        Normalization::Orthonormal => (c.sq_norm() as f64).sqrt(),
    }
}

/// Coefficients in basis column order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrptCoefficients {
    pub norm: Normalization,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodReport {
    /// Detected divisors, ascending.
    pub divisors: Vec<usize>,
    /// lcm of the detected divisors, `None` for the zero signal.
    pub period: Option<usize>,
    pub energies: BTreeMap<usize, f64>,
    pub total: f64,
}
