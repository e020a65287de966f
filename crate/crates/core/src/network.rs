//! Reaction networks as Euclidean embedded graphs.
//!
//! A network owns an ordered species list (the coordinate order used by every
//! matrix in this crate), a deduplicated set of complexes, and a list of
//! labeled directed reactions between complexes. Complexes are compared
//! structurally, so `0` (the empty complex) is an ordinary vertex.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A species name. Valid names match `[A-Za-z][A-Za-z0-9_*]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Species(String);

impl Species {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Species(name))
        } else {
            Err(Error::InvalidSpeciesName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '*')
}

/// A complex: a sparse nonnegative integer vector over species indices.
///
/// Only strictly positive coefficients are stored; the empty map is the zero
/// complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Complex(BTreeMap<usize, u32>);

impl Complex {
    pub fn zero() -> Self {
        Complex(BTreeMap::new())
    }

    /// Builds a complex from `(species index, coefficient)` pairs; repeated
    /// indices add up and zero coefficients are dropped.
    pub fn from_terms<I: IntoIterator<Item = (usize, u32)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (idx, c) in terms {
            if c > 0 {
                *map.entry(idx).or_insert(0) += c;
            }
        }
        Complex(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, species: usize) -> u32 {
        self.0.get(&species).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    /// Sum of coefficients (molecularity).
    pub fn order(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn to_dense(&self, num_species: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_species];
        for (i, c) in self.terms() {
            v[i] = c as i64;
        }
        v
    }

    /// Re-indexes the complex through `map` (old index -> new index),
    /// dropping species mapped to `None`.
    pub(crate) fn remap(&self, map: &[Option<usize>]) -> Complex {
        Complex::from_terms(self.terms().filter_map(|(i, c)| map[i].map(|j| (j, c))))
    }
}

/// A labeled reaction between two complexes of the owning network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub source: usize,
    pub product: usize,
    pub label: String,
}

/// A validated reaction network `(species, complexes, reactions)`.
///
/// Parallel edges (same source and product, different labels) are allowed;
/// they arise from projections and unions and are merged only on request.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
    species_index: HashMap<String, usize>,
    label_index: HashMap<String, usize>,
}

/// `(source terms, product terms, label)` with species given by name.
pub type NamedReaction<'a> = (&'a [(&'a str, u32)], &'a [(&'a str, u32)], &'a str);

/// A complex as sorted `(species name, coefficient)` pairs.
type NamedComplex = Vec<(String, u32)>;

impl ReactionNetwork {
    /// Builds a network from species names and `(source, product, label)`
    /// triples expressed over indices into `species`.
    pub fn new<S: AsRef<str>>(
        species: &[S],
        reactions: Vec<(Complex, Complex, String)>,
    ) -> Result<Self> {
        let mut sp = Vec::with_capacity(species.len());
        let mut species_index = HashMap::new();
        for (i, s) in species.iter().enumerate() {
            let s = Species::new(s.as_ref())?;
            if species_index.insert(s.name().to_string(), i).is_some() {
                return Err(Error::DuplicateSpecies(s.name().to_string()));
            }
            sp.push(s);
        }
        let mut net = ReactionNetwork {
            species: sp,
            complexes: Vec::new(),
            reactions: Vec::with_capacity(reactions.len()),
            species_index,
            label_index: HashMap::new(),
        };
        let mut complex_index: HashMap<Complex, usize> = HashMap::new();
        for (source, product, label) in reactions {
            if !is_identifier(&label) {
                return Err(Error::InvalidArgument(format!("invalid reaction label `{label}`")));
            }
            for c in [&source, &product] {
                if let Some((i, _)) = c.terms().find(|&(i, _)| i >= net.species.len()) {
                    return Err(Error::UnknownSpecies(format!("#{i}")));
                }
            }
            if source == product {
                return Err(Error::SelfLoop(label));
            }
            if net.label_index.contains_key(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            let mut intern = |c: Complex| -> usize {
                *complex_index.entry(c.clone()).or_insert_with(|| {
                    net.complexes.push(c);
                    net.complexes.len() - 1
                })
            };
            let s = intern(source);
            let p = intern(product);
            net.label_index.insert(label.clone(), net.reactions.len());
            net.reactions.push(Reaction {
                source: s,
                product: p,
                label,
            });
        }
        Ok(net)
    }

    /// Builds a network from named complexes, e.g.
    /// `[(&[("A", 1)], &[("B", 1)], "r1")]`. Species are taken in order of
    /// first appearance unless `species` is given.
    pub fn from_named(species: Option<&[&str]>, reactions: &[NamedReaction<'_>]
    ) -> Result<Self> {
        let mut names: Vec<String> = species
            .map(|s| s.iter().map(|x| x.to_string()).collect())
            .unwrap_or_default();
        let mut index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let fixed = species.is_some();
        let mut resolve = |name: &str| -> Result<usize> {
            if let Some(&i) = index.get(name) {
                return Ok(i);
            }
            if fixed {
                return Err(Error::UnknownSpecies(name.to_string()));
            }
            names.push(name.to_string());
            index.insert(name.to_string(), names.len() - 1);
            Ok(names.len() - 1)
        };
        let mut rs = Vec::new();
        for (src, prod, label) in reactions {
            let mut s = Vec::new();
            for (n, c) in src.iter() {
                s.push((resolve(n)?, *c));
            }
            let mut p = Vec::new();
            for (n, c) in prod.iter() {
                p.push((resolve(n)?, *c));
            }
            rs.push((Complex::from_terms(s), Complex::from_terms(p), label.to_string()));
        }
        ReactionNetwork::new(&names, rs)
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn species_names(&self) -> Vec<&str> {
        self.species.iter().map(|s| s.name()).collect()
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species_index.get(name).copied()
    }

    /// Resolves a list of names to indices, failing on the first unknown one.
    pub fn resolve_species<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.species_index(n.as_ref())
                    .ok_or_else(|| Error::UnknownSpecies(n.as_ref().to_string()))
            })
            .collect()
    }

    pub fn reaction_index(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn reaction(&self, label: &str) -> Option<&Reaction> {
        self.reaction_index(label).map(|i| &self.reactions[i])
    }

    pub fn source(&self, r: &Reaction) -> &Complex {
        &self.complexes[r.source]
    }

    pub fn product(&self, r: &Reaction) -> &Complex {
        &self.complexes[r.product]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.reactions.iter().map(|r| r.label.as_str())
    }

    /// Reaction triples over complexes, suitable for rebuilding a network.
    pub fn reaction_triples(&self) -> Vec<(Complex, Complex, String)> {
        self.reactions
            .iter()
            .map(|r| {
                (
                    self.complexes[r.source].clone(),
                    self.complexes[r.product].clone(),
                    r.label.clone(),
                )
            })
            .collect()
    }

    /// The zero complex index, if present.
    pub fn zero_complex(&self) -> Option<usize> {
        self.complexes.iter().position(Complex::is_zero)
    }

    /// Whether `0 -> X` (inflow) and `X -> 0` (outflow) are present.
    pub fn flow_status(&self, species: usize) -> (bool, bool) {
        let single = Complex::from_terms([(species, 1)]);
        let mut inflow = false;
        let mut outflow = false;
        for r in &self.reactions {
            let (s, p) = (&self.complexes[r.source], &self.complexes[r.product]);
            if s.is_zero() && *p == single {
                inflow = true;
            }
            if p.is_zero() && *s == single {
                outflow = true;
            }
        }
        (inflow, outflow)
    }

    pub fn is_closed(&self, species: usize) -> bool {
        self.flow_status(species) == (false, false)
    }

    /// Stoichiometric matrix Γ (species × reactions); column j is
    /// `product - source` of reaction j.
    pub fn stoichiometric_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_species();
        let mut gamma = vec![vec![0i64; self.reactions.len()]; n];
        for (j, r) in self.reactions.iter().enumerate() {
            for (i, c) in self.complexes[r.source].terms() {
                gamma[i][j] -= c as i64;
            }
            for (i, c) in self.complexes[r.product].terms() {
                gamma[i][j] += c as i64;
            }
        }
        gamma
    }

    /// Human-readable form of a complex, e.g. `S0 + E` or `0`.
    pub fn format_complex(&self, c: &Complex) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        c.terms()
            .map(|(i, k)| {
                if k == 1 {
                    self.species[i].name().to_string()
                } else {
                    format!("{k}{}", self.species[i].name())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn named(&self, c: &Complex) -> Vec<(String, u32)> {
        let mut v: Vec<_> = c
            .terms()
            .map(|(i, k)| (self.species[i].name().to_string(), k))
            .collect();
        v.sort();
        v
    }

    /// Name-based edge list, sorted, optionally with labels.
    fn edge_multiset(&self, with_labels: bool) -> Vec<(NamedComplex, NamedComplex, String)> {
        let mut edges: Vec<_> = self
            .reactions
            .iter()
            .map(|r| {
                (
                    self.named(&self.complexes[r.source]),
                    self.named(&self.complexes[r.product]),
                    if with_labels { r.label.clone() } else { String::new() },
                )
            })
            .collect();
        edges.sort();
        edges
    }

    fn species_set(&self) -> Vec<&str> {
        let mut s = self.species_names();
        s.sort_unstable();
        s
    }

    /// Equal as labeled multigraphs over named species, ignoring orderings.
    pub fn same_labeled_graph(&self, other: &ReactionNetwork) -> bool {
        self.species_set() == other.species_set()
            && self.edge_multiset(true) == other.edge_multiset(true)
    }

    /// Equal as (unlabeled) multigraphs over named species.
    pub fn is_isomorphic(&self, other: &ReactionNetwork) -> bool {
        self.species_set() == other.species_set()
            && self.edge_multiset(false) == other.edge_multiset(false)
    }

    /// Renames species through `map` (old name -> new name); names missing
    /// from the map are kept.
    pub fn rename_species(&self, map: &BTreeMap<String, String>) -> Result<ReactionNetwork> {
        let names: Vec<String> = self
            .species
            .iter()
            .map(|s| map.get(s.name()).cloned().unwrap_or_else(|| s.name().to_string()))
            .collect();
        let seen: HashSet<&String> = names.iter().collect();
        if seen.len() != names.len() {
            return Err(Error::InvalidArgument("renaming is not injective".into()));
        }
        ReactionNetwork::new(&names, self.reaction_triples())
    }

    /// Matches reactions of `self` to reactions of `other` with the same named
    /// source and product. Returns `self label -> other label`, or `None` when
    /// the edge multisets differ.
    pub fn reaction_correspondence(&self, other: &ReactionNetwork) -> Option<BTreeMap<String, String>> {
        let mut pool: HashMap<(NamedComplex, NamedComplex), Vec<&str>> = HashMap::new();
        for r in &other.reactions {
            pool.entry((other.named(other.source(r)), other.named(other.product(r))))
                .or_default()
                .push(&r.label);
        }
        for v in pool.values_mut() {
            v.reverse();
        }
        let mut out = BTreeMap::new();
        for r in &self.reactions {
            let key = (self.named(self.source(r)), self.named(self.product(r)));
            let target = pool.get_mut(&key)?.pop()?;
            out.insert(r.label.clone(), target.to_string());
        }
        if pool.values().any(|v| !v.is_empty()) {
            return None;
        }
        Some(out)
    }
}

/// Strictly positive rate constants keyed by reaction label.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RateAssignment {
    rates: BTreeMap<String, f64>,
}

impl RateAssignment {
    /// Validates `rates` against the labels of `net`.
    pub fn for_network(net: &ReactionNetwork, rates: BTreeMap<String, f64>) -> Result<Self> {
        for label in net.labels() {
            match rates.get(label) {
                None => return Err(Error::InvalidRates(format!("missing rate for `{label}`"))),
                Some(&k) if !(k > 0.0 && k.is_finite()) => {
                    return Err(Error::InvalidRates(format!("rate for `{label}` must be positive, got {k}")))
                }
                _ => {}
            }
        }
        if let Some(extra) = rates.keys().find(|k| net.reaction_index(k).is_none()) {
            return Err(Error::InvalidRates(format!("unknown reaction label `{extra}`")));
        }
        Ok(RateAssignment { rates })
    }

    /// Unchecked constructor; validation happens when paired with a network.
    pub fn from_map(rates: BTreeMap<String, f64>) -> Self {
        RateAssignment { rates }
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.rates.get(label).copied()
    }

    pub fn insert(&mut self, label: impl Into<String>, value: f64) {
        self.rates.insert(label.into(), value);
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Rates in the reaction order of `net`.
    pub fn to_vec(&self, net: &ReactionNetwork) -> Result<Vec<f64>> {
        net.labels()
            .map(|l| {
                self.get(l)
                    .ok_or_else(|| Error::InvalidRates(format!("missing rate for `{l}`")))
            })
            .collect()
    }

    /// Restricts to the labels of `net`.
    pub fn restrict(&self, net: &ReactionNetwork) -> Result<Self> {
        let map = net
            .labels()
            .map(|l| {
                self.get(l)
                    .map(|v| (l.to_string(), v))
                    .ok_or_else(|| Error::InvalidRates(format!("missing rate for `{l}`")))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(RateAssignment { rates: map })
    }

    /// Relabels reactions through `map` (old label -> new label).
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Self {
        RateAssignment {
            rates: self
                .rates
                .iter()
                .map(|(k, v)| (map.get(k).cloned().unwrap_or_else(|| k.clone()), *v))
                .collect(),
        }
    }
}

impl FromIterator<(String, f64)> for RateAssignment {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        RateAssignment {
            rates: iter.into_iter().collect(),
        }
    }
}
