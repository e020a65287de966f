use nalgebra::{DMatrix, DVector};

use super::mass_action::MassAction;
use crate::error::{Error, Result};
use crate::network::{RateAssignment, ReactionNetwork};
use crate::structure::{conservation_laws, ConservationBasis};

const RANK_TAU: f64 = 1e-9;
const MAX_HALVINGS: usize = 30;
const FLOOR: f64 = 1e-12;

/// Newton solver for the square system `{f(x) = 0, W x = T}`: the species
/// row of each conservation-law pivot is replaced by that law.
#[derive(Debug, Clone)]
pub struct ClassSolver {
    pub ma: MassAction,
    pub basis: ConservationBasis,
    w: Vec<Vec<f64>>,
    law_of_row: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    /// Max-norm of the scaled residual of the square system.
    pub merit: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ClassSolver {
    pub fn new(net: &ReactionNetwork, rates: &RateAssignment) -> Result<Self> {
        let ma = MassAction::new(net, rates)?;
        let basis = conservation_laws(net);
        let w = basis.to_f64();
        let mut law_of_row = vec![None; net.num_species()];
        for (k, &p) in basis.pivots().iter().enumerate() {
            law_of_row[p] = Some(k);
        }
        Ok(ClassSolver {
            ma,
            basis,
            w,
            law_of_row,
        })
    }

    pub fn num_species(&self) -> usize {
        self.ma.num_species()
    }

    pub fn laws(&self) -> &[Vec<f64>] {
        &self.w
    }

    pub fn totals(&self, x: &[f64]) -> Vec<f64> {
        self.w
            .iter()
            .map(|w| w.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn system(&self, x: &[f64], t: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let f = self.ma.rhs(x);
        let scales = self.ma.scales(x);
        let mut g = f;
        let mut s = scales;
        for (i, law) in self.law_of_row.iter().enumerate() {
            if let Some(k) = *law {
                let w = &self.w[k];
                g[i] = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - t[k];
                s[i] = 1.0 + w.iter().zip(x).map(|(a, b)| (a * b).abs()).fold(0.0, f64::max);
            }
        }
        (g, s)
    }

    fn merit(&self, x: &[f64], t: &[f64]) -> f64 {
        let (g, s) = self.system(x, t);
        g.iter().zip(&s).map(|(a, b)| a.abs() / b).fold(0.0, f64::max)
    }

    /// Jacobian of the square system.
    pub fn system_jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = self.ma.jacobian(x);
        for (i, law) in self.law_of_row.iter().enumerate() {
            if let Some(k) = *law {
                for (c, v) in self.w[k].iter().enumerate() {
                    j[(i, c)] = *v;
                }
            }
        }
        j
    }

    /// Damped Newton with backtracking (up to 30 halvings) and a positivity
    /// floor of `1e-12 x_i` on every step.
    pub fn solve(&self, x0: &[f64], t: &[f64], tol: f64, max_iters: usize) -> NewtonOutcome {
        let mut x = x0.to_vec();
        let mut merit = self.merit(&x, t);
        for it in 0..max_iters {
            if merit <= tol {
                return NewtonOutcome {
                    x,
                    merit,
                    iterations: it,
                    converged: true,
                };
            }
            let (g, _) = self.system(&x, t);
            let j = self.system_jacobian(&x);
            let rhs = DVector::from_iterator(g.len(), g.iter().map(|v| -v));
            let Some(dx) = solve_linear(j, rhs) else {
                break;
            };
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(dx.iter())
                    .map(|(xi, di)| (xi + lambda * di).max(FLOOR * xi))
                    .collect();
                let m = self.merit(&trial, t);
                if m.is_finite() && m <= (1.0 - 1e-4 * lambda) * merit {
                    accepted = Some((trial, m));
                    break;
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((trial, m)) => {
                    x = trial;
                    merit = m;
                }
                None => {
                    return NewtonOutcome {
                        converged: merit <= tol,
                        x,
                        merit,
                        iterations: it + 1,
                    }
                }
            }
        }
        NewtonOutcome {
            converged: merit <= tol,
            x,
            merit,
            iterations: max_iters,
        }
    }

    /// Minimum-norm Gauss–Newton projection of `x0` onto `{f = 0}` without
    /// fixing the class; used to refine rounded steady states.
    pub fn project_to_steady_state(&self, x0: &[f64], tol: f64, max_iters: usize) -> NewtonOutcome {
        let mut x = x0.to_vec();
        let mut merit = self.ma.scaled_residual(&x);
        let mut iterations = 0;
        while iterations < max_iters && merit > tol {
            iterations += 1;
            let f = DVector::from_vec(self.ma.rhs(&x));
            let j = self.ma.jacobian(&x);
            let svd = j.svd(true, true);
            let smax = svd.singular_values.max();
            let Ok(dx) = svd.solve(&(-f), RANK_TAU * smax.max(f64::MIN_POSITIVE)) else {
                break;
            };
            let mut lambda = 1.0;
            let mut moved = false;
            for _ in 0..=MAX_HALVINGS {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(dx.iter())
                    .map(|(xi, di)| (xi + lambda * di).max(FLOOR * xi))
                    .collect();
                let m = self.ma.scaled_residual(&trial);
                if m.is_finite() && m < merit {
                    x = trial;
                    merit = m;
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !moved {
                break;
            }
        }
        NewtonOutcome {
            converged: merit <= tol,
            x,
            merit,
            iterations,
        }
    }

    /// `n - rank` of `W` stacked on the non-pivot rows of `J`, with rows
    /// normalised and singular values thresholded at `1e-9 σ_max`.
    pub fn rank_gap(&self, x: &[f64]) -> usize {
        let n = self.num_species();
        let j = self.ma.jacobian(x);
        let mut rows: Vec<Vec<f64>> = self.w.clone();
        for i in 0..n {
            if self.law_of_row[i].is_none() {
                rows.push(j.row(i).iter().copied().collect());
            }
        }
        // Right-multiplying by diag(x) keeps the rank for positive x and
        // removes the spread of concentration magnitudes; rows are then
        // normalised so the threshold is relative per equation.
        for r in rows.iter_mut() {
            r.iter_mut().zip(x).for_each(|(v, xi)| *v *= xi);
            let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                r.iter_mut().for_each(|v| *v /= norm);
            }
        }
        let m = DMatrix::from_fn(n, n, |i, c| rows[i][c]);
        n - numerical_rank(&m)
    }
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TAU * smax).count()
}

fn solve_linear(j: DMatrix<f64>, rhs: DVector<f64>) -> Option<DVector<f64>> {
    if let Some(dx) = j.clone().lu().solve(&rhs) {
        if dx.iter().all(|v| v.is_finite()) {
            return Some(dx);
        }
    }
    let svd = j.svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(&rhs, RANK_TAU * smax)
        .ok()
        .filter(|dx| dx.iter().all(|v| v.is_finite()))
}

/// Rank deficiency of the augmented system at `x` (0 means nondegenerate).
pub fn rank_gap(net: &ReactionNetwork, rates: &RateAssignment, x: &[f64]) -> Result<usize> {
    let s = ClassSolver::new(net, rates)?;
    s.ma.check_dim(x)?;
    Ok(s.rank_gap(x))
}

/// Nondegeneracy verdict and rank gap at a steady state whose scaled residual
/// is at most `tol`.
pub fn is_nondegenerate(net: &ReactionNetwork, rates: &RateAssignment, x: &[f64], tol: f64) -> Result<(bool, usize)> {
    let s = ClassSolver::new(net, rates)?;
    s.ma.check_dim(x)?;
    let residual = s.ma.scaled_residual(x);
    if !(residual <= tol) {
        return Err(Error::NotSteadyState {
            residual,
            tolerance: tol,
        });
    }
    let gap = s.rank_gap(x);
    Ok((gap == 0, gap))
}
