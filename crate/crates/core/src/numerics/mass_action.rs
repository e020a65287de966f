use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::network::{RateAssignment, ReactionNetwork};
use crate::structure::ConservationBasis;

/// A network compiled for repeated evaluation at fixed rates.
#[derive(Debug, Clone)]
pub struct MassAction {
    n: usize,
    rates: Vec<f64>,
    sources: Vec<Vec<(usize, i32)>>,
    columns: Vec<Vec<(usize, f64)>>,
}

impl MassAction {
    pub fn new(net: &ReactionNetwork, rates: &RateAssignment) -> Result<Self> {
        let rates = rates.to_vec(net)?;
        if let Some(k) = rates.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::InvalidRates(format!("rate {k} is not positive")));
        }
        let gamma = net.stoichiometric_matrix();
        let sources = net
            .reactions()
            .iter()
            .map(|r| net.source(r).terms().map(|(i, c)| (i, c as i32)).collect())
            .collect();
        let columns = (0..net.reactions().len())
            .map(|j| {
                (0..net.num_species())
                    .filter(|&i| gamma[i][j] != 0)
                    .map(|i| (i, gamma[i][j] as f64))
                    .collect()
            })
            .collect();
        Ok(MassAction {
            n: net.num_species(),
            rates,
            sources,
            columns,
        })
    }

    pub fn num_species(&self) -> usize {
        self.n
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Reaction fluxes `κ_j x^{y_j}`.
    pub fn fluxes(&self, x: &[f64]) -> Vec<f64> {
        self.sources
            .iter()
            .zip(&self.rates)
            .map(|(src, k)| src.iter().fold(*k, |acc, &(i, c)| acc * x[i].powi(c)))
            .collect()
    }

    pub fn rhs(&self, x: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.n];
        for (col, v) in self.columns.iter().zip(self.fluxes(x)) {
            for &(i, g) in col {
                f[i] += g * v;
            }
        }
        f
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.n, self.n);
        for ((src, k), col) in self.sources.iter().zip(&self.rates).zip(&self.columns) {
            for (a, &(s, c)) in src.iter().enumerate() {
                // d/dx_s of κ ∏ x_i^{c_i}
                let mut d = *k * c as f64 * x[s].powi(c - 1);
                for (b, &(i, ci)) in src.iter().enumerate() {
                    if a != b {
                        d *= x[i].powi(ci);
                    }
                }
                for &(i, g) in col {
                    j[(i, s)] += g * d;
                }
            }
        }
        j
    }

    /// Per-equation scale `1 + max_j |Γ_ij κ_j x^{y_j}|`.
    pub fn scales(&self, x: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0f64; self.n];
        for (col, v) in self.columns.iter().zip(self.fluxes(x)) {
            for &(i, g) in col {
                s[i] = s[i].max((g * v).abs());
            }
        }
        s.iter_mut().for_each(|v| *v += 1.0);
        s
    }

    pub fn scaled_residual(&self, x: &[f64]) -> f64 {
        self.rhs(x)
            .iter()
            .zip(self.scales(x))
            .map(|(f, s)| f.abs() / s)
            .fold(0.0, f64::max)
    }
}

/// Mass-action right-hand side `f(κ, x) = Γ ν(x)`.
pub fn rhs(net: &ReactionNetwork, rates: &RateAssignment, x: &[f64]) -> Result<Vec<f64>> {
    let m = MassAction::new(net, rates)?;
    m.check_dim(x)?;
    Ok(m.rhs(x))
}

/// Analytic Jacobian of `f` with respect to `x`.
pub fn jacobian(net: &ReactionNetwork, rates: &RateAssignment, x: &[f64]) -> Result<DMatrix<f64>> {
    let m = MassAction::new(net, rates)?;
    m.check_dim(x)?;
    Ok(m.jacobian(x))
}

/// `max_i |f_i| / (1 + max_j |Γ_ij κ_j x^{y_j}|)`.
pub fn scaled_residual(net: &ReactionNetwork, rates: &RateAssignment, x: &[f64]) -> Result<f64> {
    let m = MassAction::new(net, rates)?;
    m.check_dim(x)?;
    Ok(m.scaled_residual(x))
}

/// Conserved totals `W x`.
pub fn totals(basis: &ConservationBasis, x: &[f64]) -> Vec<f64> {
    basis
        .to_f64()
        .iter()
        .map(|w| w.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}
