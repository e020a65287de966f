use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::newton::ClassSolver;
use super::relative_distance;
use crate::error::{Error, Result};
use crate::network::{RateAssignment, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub num_starts: usize,
    pub seed: u64,
    /// Base-10 exponent range for start sampling.
    pub log_range: (f64, f64),
    pub newton_tol: f64,
    pub max_iters: usize,
    pub dedup_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            num_starts: 200,
            seed: 0,
            log_range: (-3.0, 3.0),
            newton_tol: 1e-12,
            max_iters: 100,
            dedup_tol: 1e-6,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.log_range;
        if !(lo < hi) || !(self.newton_tol > 0.0) || !(self.dedup_tol > 0.0) {
            return Err(Error::InvalidArgument("search configuration out of range".into()));
        }
        Ok(())
    }
}

/// A verified steady state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateRecord {
    pub x: Vec<f64>,
    pub residual: f64,
    pub totals: Vec<f64>,
    pub nondegenerate: bool,
    pub rank_gap: usize,
}

impl ClassSolver {
    pub fn record(&self, x: Vec<f64>) -> SteadyStateRecord {
        let residual = self.ma.scaled_residual(&x);
        let totals = self.totals(&x);
        let rank_gap = self.rank_gap(&x);
        SteadyStateRecord {
            x,
            residual,
            totals,
            nondegenerate: rank_gap == 0,
            rank_gap,
        }
    }

    /// Newton from `x0` in class `t`; `Some` only for a positive point with
    /// scaled residual `<= tol` and totals within `1e-8` relative of `t`.
    pub fn refine(&self, x0: &[f64], t: &[f64], tol: f64, max_iters: usize) -> Option<SteadyStateRecord> {
        let out = self.solve(x0, t, tol, max_iters);
        if !out.converged || !out.x.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return None;
        }
        let rec = self.record(out.x);
        (rec.residual <= tol && totals_match(&rec.totals, t, 1e-8)).then_some(rec)
    }

    /// Least-squares correction of `x` onto `{W x = t}`; entries that become
    /// nonpositive are reset to a small fraction of their original value.
    pub fn project_to_class(&self, x: &[f64], t: &[f64]) -> Vec<f64> {
        let d = self.laws().len();
        if d == 0 {
            return x.to_vec();
        }
        let n = x.len();
        let w = DMatrix::from_fn(d, n, |i, j| self.laws()[i][j]);
        let r = DVector::from_iterator(d, self.totals(x).iter().zip(t).map(|(a, b)| a - b));
        let gram = &w * w.transpose();
        let Some(y) = gram.lu().solve(&r) else {
            return x.to_vec();
        };
        let corr = w.transpose() * y;
        x.iter()
            .zip(corr.iter())
            .map(|(xi, ci)| {
                let v = xi - ci;
                if v > 0.0 {
                    v
                } else {
                    xi * 1e-3
                }
            })
            .collect()
    }

    /// Some positive `x` with `W x = t`, found by Gauss–Newton on
    /// `W exp(u) = t`; `None` when the totals look infeasible.
    pub fn feasible_point(&self, t: &[f64]) -> Option<Vec<f64>> {
        let d = self.laws().len();
        let n = self.num_species();
        if d == 0 {
            return Some(vec![1.0; n]);
        }
        let w = DMatrix::from_fn(d, n, |i, j| self.laws()[i][j]);
        let tv = DVector::from_column_slice(t);
        let scale = 1.0 + tv.amax();
        let mut u = DVector::from_element(n, (scale / n as f64).ln());
        for _ in 0..200 {
            let x = u.map(f64::exp);
            let r = &w * &x - &tv;
            if r.amax() <= 1e-12 * scale {
                return Some(x.iter().copied().collect());
            }
            let jac = &w * DMatrix::from_diagonal(&x);
            let svd = jac.svd(true, true);
            let smax = svd.singular_values.max();
            let Ok(du) = svd.solve(&(-&r), 1e-12 * smax) else {
                return None;
            };
            let step = du.amax().max(1.0);
            u += du / step;
        }
        None
    }
}

impl ClassSolver {
    /// Refines rounded steady states that are meant to share a class: each is
    /// first projected onto `{f = 0}` by minimum-norm Gauss–Newton, then all
    /// are solved by Newton in the class whose totals are the mean of the
    /// projected totals. Returns those totals and one entry per input.
    pub fn refine_in_common_class(
        &self,
        states: &[Vec<f64>],
        tol: f64,
        max_iters: usize,
    ) -> (Vec<f64>, Vec<Option<SteadyStateRecord>>) {
        let projected: Vec<Vec<f64>> = states
            .iter()
            .map(|x| self.project_to_steady_state(x, tol, max_iters).x)
            .collect();
        let d = self.laws().len();
        let mut t = vec![0.0; d];
        for x in &projected {
            for (acc, v) in t.iter_mut().zip(self.totals(x)) {
                *acc += v / projected.len() as f64;
            }
        }
        let refined = projected
            .iter()
            .map(|x| self.refine(x, &t, tol, max_iters))
            .collect();
        (t, refined)
    }
}

pub fn totals_match(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= rel * (1.0 + x.abs().max(y.abs())))
}

fn start_point(cfg: &SearchConfig, n: usize, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let (lo, hi) = cfg.log_range;
    (0..n)
        .map(|_| 10f64.powf(rng.random_range(lo..hi)))
        .collect()
}

/// Sorts by first coordinate (ties broken lexicographically) and drops
/// records within `tol` relative ℓ∞ distance of an earlier one.
pub(crate) fn dedup(mut records: Vec<SteadyStateRecord>, tol: f64) -> Vec<SteadyStateRecord> {
    records.sort_by(|a, b| {
        a.x.iter()
            .zip(&b.x)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<SteadyStateRecord> = Vec::new();
    for r in records {
        if kept.iter().all(|k| relative_distance(&k.x, &r.x) > tol) {
            kept.push(r);
        }
    }
    kept
}

impl ClassSolver {
    pub fn search(&self, t: &[f64], cfg: &SearchConfig) -> Result<Vec<SteadyStateRecord>> {
        cfg.validate()?;
        if t.len() != self.laws().len() {
            return Err(Error::DimensionMismatch {
                expected: self.laws().len(),
                got: t.len(),
            });
        }
        if self.feasible_point(t).is_none() {
            return Err(Error::InfeasibleTotals);
        }
        let n = self.num_species();
        let found: Vec<Option<SteadyStateRecord>> = (0..cfg.num_starts as u64)
            .into_par_iter()
            .map(|k| {
                let x0 = self.project_to_class(&start_point(cfg, n, k), t);
                self.refine(&x0, t, cfg.newton_tol, cfg.max_iters)
            })
            .collect();
        Ok(dedup(found.into_iter().flatten().collect(), cfg.dedup_tol))
    }
}

/// Multistart Newton search for positive steady states in the class `W x = t`.
///
/// Start `k` is drawn from a ChaCha stream keyed by `(cfg.seed, k)`, so the
/// result does not depend on thread scheduling. An empty list means no state
/// was found, not that none exists.
pub fn search_steady_states(
    net: &ReactionNetwork,
    rates: &RateAssignment,
    t: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<SteadyStateRecord>> {
    ClassSolver::new(net, rates)?.search(t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_document;

    fn doc(text: &str) -> (ReactionNetwork, RateAssignment) {
        let d = parse_document(text).unwrap();
        let r = RateAssignment::for_network(&d.network, d.rates).unwrap();
        (d.network, r)
    }

    #[test]
    fn unique_state_of_linear_network() {
        let (net, k) = doc("A <-> B @ r = 2, 1");
        let cfg = SearchConfig {
            num_starts: 20,
            ..Default::default()
        };
        let found = search_steady_states(&net, &k, &[3.0], &cfg).unwrap();
        assert_eq!(found.len(), 1);
        assert!((found[0].x[0] - 1.0).abs() < 1e-10);
        assert!(found[0].nondegenerate);
    }

    #[test]
    fn bistable_switch_has_three_states() {
        // f = -(x-1)(x-2)(x-3) = -x^3 + 6x^2 - 11x + 6
        let (net, k) = doc("0 -> A @ a = 6\nA -> 0 @ b = 11\n2A -> 3A @ c = 6\n3A -> 2A @ d = 1");
        let cfg = SearchConfig {
            num_starts: 100,
            seed: 7,
            ..Default::default()
        };
        let found = search_steady_states(&net, &k, &[], &cfg).unwrap();
        let xs: Vec<f64> = found.iter().map(|r| r.x[0]).collect();
        assert_eq!(xs.len(), 3, "{xs:?}");
        for (x, e) in xs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_totals_are_reported() {
        let (net, k) = doc("A <-> B @ r = 2, 1");
        assert!(matches!(
            search_steady_states(&net, &k, &[-1.0], &SearchConfig::default()),
            Err(Error::InfeasibleTotals)
        ));
    }

    #[test]
    fn same_seed_same_records() {
        let (net, k) = doc("A + B <-> C @ r = 2, 1\nC -> A + D @ s = 1\nD -> B @ t = 3");
        let s = ClassSolver::new(&net, &k).unwrap();
        let x = [1.0, 2.0, 0.5, 0.3];
        let t = s.totals(&x);
        let cfg = SearchConfig {
            num_starts: 40,
            seed: 11,
            ..Default::default()
        };
        let a = s.search(&t, &cfg).unwrap();
        let b = s.search(&t, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
