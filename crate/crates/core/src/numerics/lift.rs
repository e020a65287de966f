use serde::Serialize;

use super::newton::ClassSolver;
use super::search::{dedup, SearchConfig, SteadyStateRecord};
use crate::error::{Error, Result};
use crate::families::phosphorylation_cycle;
use crate::modifications::open_species;
use crate::network::{Complex, RateAssignment, ReactionNetwork};

/// `P^n_{S_i<->0}` extended by `S_n + E -> S_{n+1} + E` and
/// `S_{n+1} + F -> S_n + F`, both at rate `a`, together with the lifted state.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "LiftJson")]
pub struct LiftResult {
    pub n: usize,
    pub site: usize,
    pub extended_net: ReactionNetwork,
    pub extended_rates: RateAssignment,
    /// `x` followed by `x_{S_{n+1}} = x_{S_n} x_E / x_F`.
    pub lifted_state: Vec<f64>,
    pub a: f64,
    pub residual: f64,
    pub base_rank_gap: usize,
    pub rank_gap: usize,
}

#[derive(Serialize)]
struct LiftJson {
    n: usize,
    site: usize,
    a: f64,
    extended_network: String,
    extended_rates: RateAssignment,
    species: Vec<String>,
    lifted_state: Vec<f64>,
    residual: f64,
    base_rank_gap: usize,
    rank_gap: usize,
    nondegenerate: bool,
}

impl From<LiftResult> for LiftJson {
    fn from(l: LiftResult) -> Self {
        LiftJson {
            n: l.n,
            site: l.site,
            a: l.a,
            extended_network: crate::dsl::canonical_serialize(&l.extended_net),
            extended_rates: l.extended_rates,
            species: l.extended_net.species_names().iter().map(|s| s.to_string()).collect(),
            lifted_state: l.lifted_state,
            residual: l.residual,
            base_rank_gap: l.base_rank_gap,
            rank_gap: l.rank_gap,
            nondegenerate: l.rank_gap == 0,
        }
    }
}

fn open_cycle(n: usize, site: usize) -> Result<ReactionNetwork> {
    if site > n {
        return Err(Error::InvalidArgument(format!("site {site} out of range 0..={n}")));
    }
    open_species(&phosphorylation_cycle(n)?, &[format!("S{site}")])
}

/// Extends a steady state of `P^n_{S_i<->0}` to the network with the two
/// direct catalytic reactions `liftE<n>` and `liftF<n+1>`.
///
/// Both added fluxes equal `a x_{S_n} x_E`, so they cancel and every old
/// coordinate keeps its value.
pub fn lift_steady_state(
    n: usize,
    site: usize,
    rates: &RateAssignment,
    x: &[f64],
    a: f64,
    tol: f64,
) -> Result<LiftResult> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("lift rate must be positive, got {a}")));
    }
    let base = open_cycle(n, site)?;
    let rates = rates.restrict(&base)?;
    let solver = ClassSolver::new(&base, &rates)?;
    solver.ma.check_dim(x)?;
    if x.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument("state must be strictly positive".into()));
    }
    let base_residual = solver.ma.scaled_residual(x);
    if !(base_residual <= tol) {
        return Err(Error::NotSteadyState {
            residual: base_residual,
            tolerance: tol,
        });
    }
    let base_rank_gap = solver.rank_gap(x);

    let mut names: Vec<String> = base.species_names().iter().map(|s| s.to_string()).collect();
    names.push(format!("S{}", n + 1));
    let idx = |s: &str| names.iter().position(|m| m == s).expect("species present");
    let (sn, sn1, e, f) = (idx(&format!("S{n}")), names.len() - 1, idx("E"), idx("F"));
    let mut triples = base.reaction_triples();
    triples.push((
        Complex::from_terms([(sn, 1), (e, 1)]),
        Complex::from_terms([(sn1, 1), (e, 1)]),
        format!("liftE{n}"),
    ));
    triples.push((
        Complex::from_terms([(sn1, 1), (f, 1)]),
        Complex::from_terms([(sn, 1), (f, 1)]),
        format!("liftF{}", n + 1),
    ));
    let extended_net = ReactionNetwork::new(&names, triples)?;
    let mut extended_rates = rates.clone();
    extended_rates.insert(format!("liftE{n}"), a);
    extended_rates.insert(format!("liftF{}", n + 1), a);

    let mut lifted_state = x.to_vec();
    lifted_state.push(x[sn] * x[e] / x[f]);
    let ext = ClassSolver::new(&extended_net, &extended_rates)?;
    let residual = ext.ma.scaled_residual(&lifted_state);
    let rank_gap = ext.rank_gap(&lifted_state);
    Ok(LiftResult {
        n,
        site,
        extended_net,
        extended_rates,
        lifted_state,
        a,
        residual,
        base_rank_gap,
        rank_gap,
    })
}

/// Catalytic rate making the chain `S + E <-> ES -> S' + E` (bind `on`,
/// unbind `off`) reproduce the direct rate `a` under quasi-steady state:
/// `on * cat / (off + cat) = a`. Requires `on > a`.
pub fn intermediate_cat_rate(a: f64, on: f64, off: f64) -> Result<f64> {
    if !(on > a && off > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "intermediate rates need on > a and off > 0 (a = {a}, on = {on}, off = {off})"
        )));
    }
    Ok(a * off / (on - a))
}

/// Steady states of `P^{n+1}_{S_i<->0}` continued from lifted states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Continuation {
    pub n: usize,
    pub site: usize,
    #[serde(serialize_with = "serialize_net")]
    pub network: ReactionNetwork,
    pub species: Vec<String>,
    pub rates: RateAssignment,
    pub totals: Vec<f64>,
    /// Seeds that converged, before deduplication.
    pub seeds_converged: usize,
    pub states: Vec<SteadyStateRecord>,
}

fn serialize_net<S: serde::Serializer>(net: &ReactionNetwork, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::dsl::canonical_serialize(net))
}

impl Continuation {
    /// Distinct nondegenerate states.
    pub fn nondegenerate(&self) -> usize {
        self.states.iter().filter(|s| s.nondegenerate).count()
    }
}

/// Replaces the direct reactions of each lift by intermediate chains, seeds
/// Newton at the quasi-steady-state extension of each lifted state, and
/// solves every seed in the class of the first one. When
/// `cfg.num_starts > 0` a multistart search in that class is merged in.
///
/// All lifts must share `n`, the site and the base rates.
pub fn continue_to_next_cycle(
    lifts: &[LiftResult],
    intermediate: (f64, f64),
    cfg: &SearchConfig,
) -> Result<Continuation> {
    let first = lifts
        .first()
        .ok_or_else(|| Error::InvalidArgument("no lifted states to continue".into()))?;
    let (n, site, a) = (first.n, first.site, first.a);
    if lifts.iter().any(|l| l.n != n || l.site != site || l.extended_rates != first.extended_rates) {
        return Err(Error::InvalidArgument("lifts come from different networks".into()));
    }
    let (on, off) = intermediate;
    let cat = intermediate_cat_rate(a, on, off)?;

    let next = open_cycle(n + 1, site)?;
    let mut rates = first.extended_rates.clone();
    let mut drop = |l: String| {
        rates = rates
            .as_map()
            .iter()
            .filter(|(k, _)| **k != l)
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    };
    drop(format!("liftE{n}"));
    drop(format!("liftF{}", n + 1));
    rates.insert(format!("bindE{n}"), on);
    rates.insert(format!("unbindE{n}"), off);
    rates.insert(format!("catE{n}"), cat);
    rates.insert(format!("bindF{}", n + 1), on);
    rates.insert(format!("unbindF{}", n + 1), off);
    rates.insert(format!("catF{}", n + 1), cat);
    let rates = RateAssignment::for_network(&next, rates.as_map().clone())?;
    let solver = ClassSolver::new(&next, &rates)?;

    let names = next.species_names();
    let seeds: Vec<Vec<f64>> = lifts
        .iter()
        .map(|l| {
            let get = |s: &str| {
                let i = l.extended_net.species_index(s).expect("lifted species");
                l.lifted_state[i]
            };
            let qss = on / (off + cat);
            names
                .iter()
                .map(|s| {
                    if *s == format!("ES{n}") {
                        qss * get(&format!("S{n}")) * get("E")
                    } else if *s == format!("FS{}", n + 1) {
                        qss * get(&format!("S{}", n + 1)) * get("F")
                    } else {
                        get(s)
                    }
                })
                .collect()
        })
        .collect();
    let totals = solver.totals(&seeds[0]);
    let mut found: Vec<SteadyStateRecord> = seeds
        .iter()
        .filter_map(|x0| solver.refine(x0, &totals, cfg.newton_tol, cfg.max_iters))
        .collect();
    let seeds_converged = found.len();
    if cfg.num_starts > 0 {
        found.extend(solver.search(&totals, cfg)?);
    }
    Ok(Continuation {
        n: n + 1,
        site,
        species: names.iter().map(|s| s.to_string()).collect(),
        network: next,
        rates,
        totals,
        seeds_converged,
        states: dedup(found, cfg.dedup_tol),
    })
}
