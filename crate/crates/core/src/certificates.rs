//! Certificates for monostationarity and multistationarity.
//!
//! A certificate is a verdict plus the chain of rules that produced it. Each
//! trace step records its inputs (networks as canonical text) and outputs, so
//! [`Certificate::replay`] can recompute every step independently.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dsl::{canonical_serialize, parse_network};
use crate::error::{Error, Result};
use crate::linalg::format_rational;
use crate::modifications::{collapse_parallel, open_species, project_complement};
use crate::network::{Complex, RateAssignment, ReactionNetwork};
use crate::numerics::{ClassSolver, SteadyStateRecord};
use crate::structure::{deficiency, independently_conserved, is_weakly_reversible};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Monostationary,
    UniquePositiveSsPerClass,
    NoPositiveSs,
    MultistationaryWitness,
    Undecided,
}

impl Verdict {
    /// At most one positive steady state in every compatibility class.
    pub fn is_monostationary(self) -> bool {
        matches!(
            self,
            Verdict::Monostationary | Verdict::UniquePositiveSsPerClass | Verdict::NoPositiveSs
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DefZero,
    WeakRev,
    IndepConserved,
    Projection,
    AcrEmergence,
    RateTransfer,
    Monomolecular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub inputs: Value,
    pub outputs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[SteadyStateRecord; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Certificate {
    fn new(verdict: Verdict, trace: Vec<TraceStep>) -> Self {
        Certificate {
            verdict,
            trace,
            witness: None,
            reason: None,
        }
    }

    pub fn step(&self, rule: Rule) -> Option<&TraceStep> {
        self.trace.iter().find(|s| s.rule == rule)
    }

    /// Recomputes every trace step from its recorded inputs and compares with
    /// the recorded outputs. Witness certificates re-verify their records
    /// against `rates` when given.
    pub fn replay(&self) -> Result<bool> {
        for step in &self.trace {
            if !replay_step(step)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verifies two steady states of `(net, rates)` and wraps them as a
    /// multistationarity witness: both residuals `<= tol`, both nondegenerate,
    /// totals equal within `1e-8` relative, and the states distinct.
    pub fn from_witness(
        net: &ReactionNetwork,
        rates: &RateAssignment,
        first: &[f64],
        second: &[f64],
        tol: f64,
    ) -> Result<Self> {
        let solver = ClassSolver::new(net, rates)?;
        solver.ma.check_dim(first)?;
        solver.ma.check_dim(second)?;
        let a = solver.record(first.to_vec());
        let b = solver.record(second.to_vec());
        for r in [&a, &b] {
            if !(r.residual <= tol) {
                return Err(Error::NotSteadyState {
                    residual: r.residual,
                    tolerance: tol,
                });
            }
            if !r.nondegenerate || r.x.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::Numeric("witness state is degenerate or not positive".into()));
            }
        }
        if !crate::numerics::search_totals_match(&a.totals, &b.totals, 1e-8) {
            return Err(Error::Numeric("witness states lie in different classes".into()));
        }
        if crate::numerics::relative_distance(&a.x, &b.x) <= 1e-6 {
            return Err(Error::Numeric("witness states coincide".into()));
        }
        let mut c = Certificate::new(Verdict::MultistationaryWitness, Vec::new());
        c.witness = Some([a, b]);
        Ok(c)
    }
}

fn laws_json(rows: &[Vec<crate::linalg::Rational>]) -> Value {
    json!(rows
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn def_zero_step(net: &ReactionNetwork) -> (TraceStep, usize) {
    let r = deficiency(net);
    (
        TraceStep {
            rule: Rule::DefZero,
            inputs: json!({ "network": canonical_serialize(net) }),
            outputs: json!({
                "complexes": r.complexes,
                "linkage_classes": r.linkage_classes,
                "stoich_dim": r.stoich_dim,
                "deficiency": r.deficiency,
            }),
        },
        r.deficiency,
    )
}

fn weak_rev_step(net: &ReactionNetwork) -> (TraceStep, bool) {
    let wr = is_weakly_reversible(net);
    (
        TraceStep {
            rule: Rule::WeakRev,
            inputs: json!({ "network": canonical_serialize(net) }),
            outputs: json!({ "weakly_reversible": wr }),
        },
        wr,
    )
}

fn monomolecular_step(net: &ReactionNetwork) -> (TraceStep, bool) {
    let mono = crate::structure::is_monomolecular(net);
    (
        TraceStep {
            rule: Rule::Monomolecular,
            inputs: json!({ "network": canonical_serialize(net) }),
            outputs: json!({ "monomolecular": mono, "deficiency_zero": mono }),
        },
        mono,
    )
}

fn indep_step(net: &ReactionNetwork, set: &[String]) -> Result<(TraceStep, bool)> {
    let idx = net.resolve_species(set)?;
    let w = independently_conserved(net, &idx);
    let ok = w.is_some();
    Ok((
        TraceStep {
            rule: Rule::IndepConserved,
            inputs: json!({ "network": canonical_serialize(net), "species": set }),
            outputs: json!({
                "independently_conserved": ok,
                "witnesses": w.as_deref().map(laws_json).unwrap_or(Value::Null),
            }),
        },
        ok,
    ))
}

fn projection_step(net: &ReactionNetwork, set: &[String]) -> Result<(TraceStep, ReactionNetwork)> {
    let p = project_complement(net, set)?;
    let simple = p.collapsed();
    Ok((
        TraceStep {
            rule: Rule::Projection,
            inputs: json!({ "network": canonical_serialize(net), "species": set }),
            outputs: json!({
                "network": canonical_serialize(&simple),
                "dropped_self_loops": p.dropped,
                "parallel_edges_merged": p.network.reactions().len() - simple.reactions().len(),
            }),
        },
        simple,
    ))
}

fn replay_step(step: &TraceStep) -> Result<bool> {
    let net = match step.inputs.get("network").and_then(Value::as_str) {
        Some(text) => parse_network(text)?,
        None => return Ok(step.rule == Rule::AcrEmergence || step.rule == Rule::RateTransfer),
    };
    let species: Vec<String> = step
        .inputs
        .get("species")
        .and_then(|v| serde_json::from_value(v.clone()).ok())
        .unwrap_or_default();
    let recomputed = match step.rule {
        Rule::DefZero => def_zero_step(&net).0,
        Rule::WeakRev => weak_rev_step(&net).0,
        Rule::Monomolecular => monomolecular_step(&net).0,
        Rule::IndepConserved => indep_step(&net, &species)?.0,
        Rule::Projection => projection_step(&net, &species)?.0,
        Rule::AcrEmergence | Rule::RateTransfer => return Ok(true),
    };
    Ok(recomputed.outputs == step.outputs)
}

/// Deficiency Zero Theorem: δ = 0 and weakly reversible gives exactly one
/// positive steady state per class; δ = 0 without weak reversibility gives
/// none; δ > 0 is undecided.
pub fn certify_deficiency_zero(net: &ReactionNetwork) -> Certificate {
    let (d_step, delta) = def_zero_step(net);
    let (w_step, wr) = weak_rev_step(net);
    let verdict = match (delta, wr) {
        (0, true) => Verdict::UniquePositiveSsPerClass,
        (0, false) => Verdict::NoPositiveSs,
        _ => Verdict::Undecided,
    };
    let mut c = Certificate::new(verdict, vec![d_step, w_step]);
    if verdict == Verdict::Undecided {
        c.reason = Some(format!("deficiency {delta} > 0"));
    }
    c
}

/// Opening independently conserved enzymes: `G_{E<->0}` is monostationary
/// when `G_{-E}` is, and the latter is checked with the Deficiency Zero
/// Theorem on the collapsed projection.
pub fn certify_enzyme_open<S: AsRef<str>>(net: &ReactionNetwork, set: &[S]) -> Result<Certificate> {
    let set: Vec<String> = set.iter().map(|s| s.as_ref().to_string()).collect();
    if set.is_empty() {
        return Err(Error::EmptySpeciesSet);
    }
    let opened = open_species(net, &set)?;
    let (i_step, ok) = indep_step(net, &set)?;
    if !ok {
        let mut c = Certificate::new(Verdict::Undecided, vec![i_step]);
        c.reason = Some("not independently conserved".into());
        return Ok(c);
    }
    let (p_step, projected) = projection_step(&opened, &set)?;
    let mut trace = vec![i_step, p_step];
    let (m_step, mono) = monomolecular_step(&projected);
    if mono {
        trace.push(m_step);
    }
    let inner = certify_deficiency_zero(&projected);
    trace.extend(inner.trace);
    let mut c = Certificate::new(
        if inner.verdict.is_monostationary() {
            Verdict::Monostationary
        } else {
            Verdict::Undecided
        },
        trace,
    );
    if c.verdict == Verdict::Undecided {
        c.reason = Some(format!(
            "projection not certified: {}",
            inner.reason.unwrap_or_else(|| "deficiency theorem inconclusive".into())
        ));
    }
    Ok(c)
}

/// `P^n` with `E`, `F` and some substrates opened: the substrates are opened
/// first, which leaves `E` and `F` independently conserved, and the enzyme
/// pipeline runs on the result with its projection recomputed directly.
pub fn certify_enzyme_substrate_open<S: AsRef<str>>(net: &ReactionNetwork, set: &[S]) -> Result<Certificate> {
    let set: Vec<String> = set.iter().map(|s| s.as_ref().to_string()).collect();
    if !(set.iter().any(|s| s == "E") && set.iter().any(|s| s == "F")) {
        return Err(Error::InvalidArgument("species set must contain E and F".into()));
    }
    let substrates: Vec<&String> = set.iter().filter(|s| *s != "E" && *s != "F").collect();
    let partly = open_species(net, &substrates)?;
    certify_enzyme_open(&partly, &["E", "F"])
}

/// Certifies `G_{set<->0}` by searching for a split `set = pre + K` such that
/// opening `pre` first leaves `K` independently conserved. Larger `K` are
/// tried first; the first monostationary certificate wins, otherwise the
/// certificate for the full set is returned.
pub fn certify_open<S: AsRef<str>>(net: &ReactionNetwork, set: &[S]) -> Result<Certificate> {
    let set: Vec<String> = set.iter().map(|s| s.as_ref().to_string()).collect();
    let full = certify_enzyme_open(net, &set)?;
    if full.verdict.is_monostationary() || set.len() > 12 {
        return Ok(full);
    }
    let mut masks: Vec<u32> = (1..(1u32 << set.len()) - 1).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    for mask in masks {
        let (k, pre): (Vec<_>, Vec<_>) = set.iter().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
        let pre: Vec<&String> = pre.into_iter().map(|p| p.1).collect();
        let k: Vec<&String> = k.into_iter().map(|p| p.1).collect();
        let c = certify_enzyme_open(&open_species(net, &pre)?, &k)?;
        if c.verdict.is_monostationary() {
            return Ok(c);
        }
    }
    Ok(full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcrStatus {
    Acr,
    NoSteadyStates,
    BoundaryOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcrEntry {
    pub species: String,
    pub status: AcrStatus,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcrReport {
    pub entries: Vec<AcrEntry>,
    /// Some species has inflow without outflow, so the network has no steady
    /// state at all.
    pub no_steady_states: bool,
}

impl AcrReport {
    pub fn value(&self, species: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.species == species).and_then(|e| e.value)
    }
}

/// Summed rates of the flow reactions `0 -> X` and `X -> 0`.
fn flow_rates(net: &ReactionNetwork, rates: &RateAssignment, i: usize) -> Result<(f64, f64)> {
    let single = Complex::from_terms([(i, 1)]);
    let (mut kin, mut kout) = (0.0, 0.0);
    for r in net.reactions() {
        let (s, p) = (net.source(r), net.product(r));
        let k = || {
            rates
                .get(&r.label)
                .ok_or_else(|| Error::InvalidRates(format!("missing rate for `{}`", r.label)))
        };
        if s.is_zero() && *p == single {
            kin += k()?;
        } else if p.is_zero() && *s == single {
            kout += k()?;
        }
    }
    Ok((kin, kout))
}

/// Removes every flow reaction of the listed species.
fn closed_core(net: &ReactionNetwork, idx: &[usize]) -> Result<ReactionNetwork> {
    let triples = net
        .reaction_triples()
        .into_iter()
        .filter(|(s, p, _)| {
            !idx.iter().any(|&i| {
                let single = Complex::from_terms([(i, 1)]);
                (s.is_zero() && *p == single) || (p.is_zero() && *s == single)
            })
        })
        .collect();
    ReactionNetwork::new(&net.species_names(), triples)
}

/// ACR emergence for opened, independently conserved species: a fully opened
/// `E_i` takes the value `κ_in / κ_out` at every positive steady state; an
/// inflow-only species rules out steady states; an outflow-only species can
/// only vanish.
pub fn acr_report<S: AsRef<str>>(net: &ReactionNetwork, set: &[S], rates: &RateAssignment) -> Result<AcrReport> {
    if set.is_empty() {
        return Err(Error::EmptySpeciesSet);
    }
    let idx = net.resolve_species(set)?;
    let core = closed_core(net, &idx)?;
    if independently_conserved(&core, &idx).is_none() {
        let names: Vec<&str> = set.iter().map(AsRef::as_ref).collect();
        return Err(Error::NotIndependentlyConserved(names.join(",")));
    }
    let mut entries = Vec::new();
    let mut none = false;
    for (&i, name) in idx.iter().zip(set) {
        let species = name.as_ref().to_string();
        let entry = match net.flow_status(i) {
            (true, true) => {
                let (kin, kout) = flow_rates(net, rates, i)?;
                AcrEntry {
                    species,
                    status: AcrStatus::Acr,
                    value: Some(kin / kout),
                }
            }
            (true, false) => {
                none = true;
                AcrEntry {
                    species,
                    status: AcrStatus::NoSteadyStates,
                    value: None,
                }
            }
            (false, true) => AcrEntry {
                species,
                status: AcrStatus::BoundaryOnly,
                value: None,
            },
            (false, false) => {
                return Err(Error::InvalidArgument(format!("species `{species}` has no flow reaction")))
            }
        };
        entries.push(entry);
    }
    Ok(AcrReport {
        entries,
        no_steady_states: none,
    })
}

/// Rates on the collapsed projection `G_{-E}`: each projected edge receives
/// `Σ κ_{y->y'} ∏_i a_i^{y_{E_i}}` over the original reactions mapping onto it.
pub fn transfer_rates<S: AsRef<str>>(
    net: &ReactionNetwork,
    set: &[S],
    rates: &RateAssignment,
    acr_values: &BTreeMap<String, f64>,
) -> Result<(ReactionNetwork, RateAssignment)> {
    let idx = net.resolve_species(set)?;
    let mut a = Vec::with_capacity(idx.len());
    for name in set {
        match acr_values.get(name.as_ref()) {
            Some(&v) if v > 0.0 && v.is_finite() => a.push(v),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "missing or nonpositive ACR value for `{}`",
                    name.as_ref()
                )))
            }
        }
    }
    let projected = project_complement(net, set)?;
    let mut single = BTreeMap::new();
    for r in projected.network.reactions() {
        let original = net.reaction(&r.label).expect("projection keeps labels");
        let k = rates
            .get(&r.label)
            .ok_or_else(|| Error::InvalidRates(format!("missing rate for `{}`", r.label)))?;
        let factor: f64 = idx
            .iter()
            .zip(&a)
            .map(|(&i, ai)| ai.powi(net.source(original).coefficient(i) as i32))
            .product();
        single.insert(r.label.clone(), k * factor);
    }
    let (simple, groups) = collapse_parallel(&projected.network);
    let merged = groups
        .iter()
        .map(|(label, members)| (label.clone(), members.iter().map(|m| single[m]).sum::<f64>()))
        .collect();
    Ok((simple.clone(), RateAssignment::for_network(&simple, merged)?))
}

/// Coordinates of `z` on the species of `set`.
pub fn project_steady_state<S: AsRef<str>>(net: &ReactionNetwork, z: &[f64], set: &[S]) -> Result<Vec<f64>> {
    if z.len() != net.num_species() {
        return Err(Error::DimensionMismatch {
            expected: net.num_species(),
            got: z.len(),
        });
    }
    Ok(net.resolve_species(set)?.into_iter().map(|i| z[i]).collect())
}
