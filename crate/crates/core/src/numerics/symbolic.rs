use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::modifications::SpeciesRelabeling;
use crate::network::{RateAssignment, ReactionNetwork};

/// Monomial (sorted `(species, exponent)` pairs) to coefficient.
pub type Polynomial = BTreeMap<Vec<(String, u32)>, f64>;

/// The mass-action right-hand side as one polynomial per species name, with
/// species renamed through `rename`.
fn polynomials_with(
    net: &ReactionNetwork,
    rates: &RateAssignment,
    rename: &dyn Fn(&str) -> String,
) -> Result<BTreeMap<String, Polynomial>> {
    let k = rates.to_vec(net)?;
    let names: Vec<String> = net.species_names().iter().map(|s| rename(s)).collect();
    let gamma = net.stoichiometric_matrix();
    let mut out: BTreeMap<String, Polynomial> = names.iter().map(|s| (s.clone(), Polynomial::new())).collect();
    for (j, r) in net.reactions().iter().enumerate() {
        let mut mono: Vec<(String, u32)> = net.source(r).terms().map(|(i, c)| (names[i].clone(), c)).collect();
        mono.sort();
        for (i, name) in names.iter().enumerate() {
            if gamma[i][j] != 0 {
                *out.get_mut(name).expect("species").entry(mono.clone()).or_insert(0.0) += gamma[i][j] as f64 * k[j];
            }
        }
    }
    for p in out.values_mut() {
        p.retain(|_, c| *c != 0.0);
    }
    Ok(out)
}

pub fn rhs_polynomials(net: &ReactionNetwork, rates: &RateAssignment) -> Result<BTreeMap<String, Polynomial>> {
    polynomials_with(net, rates, &|s| s.to_string())
}

/// Whether `f^A`, with species renamed by `relabel`, equals `f^B`
/// coefficient by coefficient (relative tolerance `1e-12`).
pub fn symbolic_rhs_equal(
    net_a: &ReactionNetwork,
    rates_a: &RateAssignment,
    net_b: &ReactionNetwork,
    rates_b: &RateAssignment,
    relabel: &SpeciesRelabeling,
) -> Result<bool> {
    let image: BTreeSet<String> = net_a
        .species_names()
        .iter()
        .map(|s| {
            relabel
                .map
                .get(*s)
                .cloned()
                .ok_or_else(|| Error::UnknownSpecies(s.to_string()))
        })
        .collect::<Result<_>>()?;
    let target: BTreeSet<String> = net_b.species_names().iter().map(|s| s.to_string()).collect();
    if image != target {
        return Err(Error::InvalidArgument("relabeling does not map species onto species".into()));
    }
    let pa = polynomials_with(net_a, rates_a, &|s| relabel.get(s).to_string())?;
    let pb = rhs_polynomials(net_b, rates_b)?;
    Ok(pa.iter().all(|(species, poly)| {
        let other = &pb[species];
        poly.len() == other.len()
            && poly.iter().all(|(m, c)| {
                other
                    .get(m)
                    .is_some_and(|d| (c - d).abs() <= 1e-12 * c.abs().max(d.abs()))
            })
    }))
}
