use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crn_core::{parse_document, RateAssignment, ReactionNetwork};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::exit::{Failure, Outcome};

/// Reads input files and remembers their hashes for the run manifest.
#[derive(Default)]
pub struct Inputs {
    pub hashes: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Outcome<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        self.hashes
            .insert(path.display().to_string(), hex::encode(Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    /// Network plus any rates annotated inline.
    pub fn network(&mut self, path: &Path) -> Outcome<(ReactionNetwork, BTreeMap<String, f64>)> {
        let text = self.read(path)?;
        let doc = parse_document(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok((doc.network, doc.rates))
    }

    /// Rates from a `.rates.json` object, or the inline rates when absent.
    pub fn rates(
        &mut self,
        net: &ReactionNetwork,
        path: Option<&PathBuf>,
        inline: BTreeMap<String, f64>,
    ) -> Outcome<RateAssignment> {
        let map = match path {
            Some(p) => serde_json::from_str::<BTreeMap<String, f64>>(&self.read(p)?)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
            None => inline,
        };
        Ok(RateAssignment::for_network(net, map)?)
    }

    /// States in the network's species order.
    pub fn states(&mut self, path: &Path, net: &ReactionNetwork) -> Outcome<Vec<Vec<f64>>> {
        let file: StateFile = serde_json::from_str(&self.read(path)?)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        file.into_states(net)
    }
}

/// Accepted `.state.json` layouts.
#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    One(Vec<f64>),
    Many(Vec<Vec<f64>>),
    NamedOne { species: Vec<String>, x: Vec<f64> },
    NamedMany { species: Vec<String>, states: Vec<Vec<f64>> },
}

impl StateFile {
    fn into_states(self, net: &ReactionNetwork) -> Outcome<Vec<Vec<f64>>> {
        let (species, states) = match self {
            StateFile::One(x) => (None, vec![x]),
            StateFile::Many(xs) => (None, xs),
            StateFile::NamedOne { species, x } => (Some(species), vec![x]),
            StateFile::NamedMany { species, states } => (Some(species), states),
        };
        let n = net.num_species();
        let states = match species {
            None => states,
            Some(species) => {
                let mut sorted = species.clone();
                sorted.sort();
                let mut names: Vec<String> = net.species_names().iter().map(|s| s.to_string()).collect();
                names.sort();
                if sorted != names {
                    return Err(Failure::input("state species do not match the network"));
                }
                let perm: Vec<usize> = net
                    .species_names()
                    .iter()
                    .map(|s| species.iter().position(|t| t == s).expect("checked above"))
                    .collect();
                states
                    .into_iter()
                    .map(|x| {
                        if x.len() != n {
                            return Err(Failure::input(format!("state has {} entries, expected {n}", x.len())));
                        }
                        Ok(perm.iter().map(|&i| x[i]).collect())
                    })
                    .collect::<Outcome<Vec<_>>>()?
            }
        };
        if states.is_empty() {
            return Err(Failure::input("state file holds no states"));
        }
        if let Some(x) = states.iter().find(|x| x.len() != n) {
            return Err(Failure::input(format!("state has {} entries, expected {n}", x.len())));
        }
        Ok(states)
    }
}

/// Splits `A,B,C` into names.
pub fn species_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

pub fn number_list(s: &str) -> Outcome<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::input(format!("not a number: `{t}`")))
        })
        .collect()
}
