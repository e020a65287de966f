//! Network operations: opening, projection onto the complement of a species
//! set, union, and the substrate-reversal symmetry of phosphorylation cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Complex, ReactionNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowDirection {
    Inflow,
    Outflow,
}

pub fn inflow_label(species: &str) -> String {
    format!("in_{species}")
}

pub fn outflow_label(species: &str) -> String {
    format!("out_{species}")
}

/// Appends `0 -> X` and `X -> 0` (labels `in_X`, `out_X`) for every `X` in
/// `set`. Every listed species must be closed.
pub fn open_species<S: AsRef<str>>(net: &ReactionNetwork, set: &[S]) -> Result<ReactionNetwork> {
    let idx = net.resolve_species(set)?;
    let mut triples = net.reaction_triples();
    for (&i, name) in idx.iter().zip(set) {
        if !net.is_closed(i) {
            return Err(Error::NotClosed(name.as_ref().to_string()));
        }
        let x = Complex::from_terms([(i, 1)]);
        triples.push((Complex::zero(), x.clone(), inflow_label(name.as_ref())));
        triples.push((x, Complex::zero(), outflow_label(name.as_ref())));
    }
    ReactionNetwork::new(&net.species_names(), triples)
}

/// Adds a single flow reaction for `species`. Fails only if that flow is
/// already present, so an outflow followed by an inflow equals a full opening.
pub fn open_partial(net: &ReactionNetwork, species: &str, direction: FlowDirection) -> Result<ReactionNetwork> {
    let i = net
        .species_index(species)
        .ok_or_else(|| Error::UnknownSpecies(species.to_string()))?;
    let (has_in, has_out) = net.flow_status(i);
    let x = Complex::from_terms([(i, 1)]);
    let mut triples = net.reaction_triples();
    match direction {
        FlowDirection::Inflow if !has_in => triples.push((Complex::zero(), x, inflow_label(species))),
        FlowDirection::Outflow if !has_out => triples.push((x, Complex::zero(), outflow_label(species))),
        _ => return Err(Error::NotClosed(species.to_string())),
    }
    ReactionNetwork::new(&net.species_names(), triples)
}

/// `G_{-E}`: the network with the species of `E` deleted from every complex.
///
/// Projected reactions keep the label of the reaction they come from, so
/// parallel edges stay distinguishable; reactions that become self-loops are
/// recorded in `dropped`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedNetwork {
    pub network: ReactionNetwork,
    pub removed: Vec<String>,
    pub dropped: Vec<String>,
    /// Original index of each kept species.
    pub kept_species: Vec<usize>,
}

impl ProjectedNetwork {
    /// The simple graph used for structural analysis.
    pub fn collapsed(&self) -> ReactionNetwork {
        collapse_parallel(&self.network).0
    }
}

pub fn project_complement<S: AsRef<str>>(net: &ReactionNetwork, set: &[S]) -> Result<ProjectedNetwork> {
    if set.is_empty() {
        return Err(Error::EmptySpeciesSet);
    }
    let idx: BTreeSet<usize> = net.resolve_species(set)?.into_iter().collect();
    if idx.len() == net.num_species() {
        return Err(Error::EmptyProjection);
    }
    let mut map = vec![None; net.num_species()];
    let mut kept_species = Vec::new();
    let mut names = Vec::new();
    for (i, s) in net.species().iter().enumerate() {
        if !idx.contains(&i) {
            map[i] = Some(kept_species.len());
            kept_species.push(i);
            names.push(s.name().to_string());
        }
    }
    let mut triples = Vec::new();
    let mut dropped = Vec::new();
    for r in net.reactions() {
        let s = net.source(r).remap(&map);
        let p = net.product(r).remap(&map);
        if s == p {
            dropped.push(r.label.clone());
        } else {
            triples.push((s, p, r.label.clone()));
        }
    }
    let network = ReactionNetwork::new(&names, triples)?;
    Ok(ProjectedNetwork {
        network,
        removed: idx.iter().map(|&i| net.species()[i].name().to_string()).collect(),
        dropped,
        kept_species,
    })
}

/// Merges parallel edges (same source and product) into one reaction carrying
/// the first label. Returns the simple network and `label -> merged labels`.
pub fn collapse_parallel(net: &ReactionNetwork) -> (ReactionNetwork, BTreeMap<String, Vec<String>>) {
    let mut first: HashMap<(usize, usize), String> = HashMap::new();
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut triples = Vec::new();
    for r in net.reactions() {
        let key = (r.source, r.product);
        match first.get(&key) {
            Some(label) => groups.get_mut(label).expect("group exists").push(r.label.clone()),
            None => {
                first.insert(key, r.label.clone());
                groups.insert(r.label.clone(), vec![r.label.clone()]);
                triples.push((net.source(r).clone(), net.product(r).clone(), r.label.clone()));
            }
        }
    }
    let simple = ReactionNetwork::new(&net.species_names(), triples).expect("subset of a valid network");
    (simple, groups)
}

/// `G ∪ H` over the species of `G`. Reactions present in both (same source,
/// product and label) appear once; a label clash between different edges is
/// resolved by suffixing the label from `h`.
pub fn union(net: &ReactionNetwork, h: &ReactionNetwork) -> Result<ReactionNetwork> {
    let map: Vec<Option<usize>> = h
        .species_names()
        .iter()
        .map(|s| {
            net.species_index(s)
                .map(Some)
                .ok_or_else(|| Error::UnknownSpecies(s.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut triples = net.reaction_triples();
    let mut labels: BTreeSet<String> = triples.iter().map(|t| t.2.clone()).collect();
    for r in h.reactions() {
        let s = h.source(r).remap(&map);
        let p = h.product(r).remap(&map);
        if triples.iter().any(|t| t.0 == s && t.1 == p && t.2 == r.label) {
            continue;
        }
        let mut label = r.label.clone();
        let mut k = 1;
        while labels.contains(&label) {
            label = if k == 1 {
                format!("{}_h", r.label)
            } else {
                format!("{}_h{k}", r.label)
            };
            k += 1;
        }
        labels.insert(label.clone());
        triples.push((s, p, label));
    }
    ReactionNetwork::new(&net.species_names(), triples)
}

/// A bijection between species names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesRelabeling {
    pub map: BTreeMap<String, String>,
}

impl SpeciesRelabeling {
    pub fn new(map: BTreeMap<String, String>) -> Result<Self> {
        let image: BTreeSet<&String> = map.values().collect();
        let domain: BTreeSet<&String> = map.keys().collect();
        if image.len() != map.len() || image != domain {
            return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
        }
        Ok(SpeciesRelabeling { map })
    }

    pub fn identity<S: AsRef<str>>(names: &[S]) -> Self {
        SpeciesRelabeling {
            map: names
                .iter()
                .map(|s| (s.as_ref().to_string(), s.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn get<'a>(&'a self, name: &'a str) -> &'a str {
        self.map.get(name).map_or(name, String::as_str)
    }

    pub fn inverse(&self) -> Self {
        SpeciesRelabeling {
            map: self.map.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        }
    }

    /// Renames the species of `net`, keeping reaction labels.
    pub fn apply(&self, net: &ReactionNetwork) -> Result<ReactionNetwork> {
        for s in net.species_names() {
            if !self.map.contains_key(s) {
                return Err(Error::UnknownSpecies(s.to_string()));
            }
        }
        net.rename_species(&self.map)
    }
}

/// Substrate reversal on `P^n`: `S_j -> S_{n-j}`, `E <-> F`,
/// `ES_j -> FS_{n-j}`, `FS_j -> ES_{n-j}`. The site `i` only selects which
/// opened network the caller intends to map (`S_i` onto `S_{n-i}`).
pub fn symmetry_relabel(n: usize, i: usize) -> Result<SpeciesRelabeling> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if i > n {
        return Err(Error::InvalidArgument(format!("site {i} out of range 0..={n}")));
    }
    let mut map = BTreeMap::new();
    for j in 0..=n {
        map.insert(format!("S{j}"), format!("S{}", n - j));
    }
    map.insert("E".into(), "F".into());
    map.insert("F".into(), "E".into());
    for j in 0..n {
        map.insert(format!("ES{j}"), format!("FS{}", n - j));
        map.insert(format!("FS{}", n - j), format!("ES{j}"));
    }
    SpeciesRelabeling::new(map)
}
