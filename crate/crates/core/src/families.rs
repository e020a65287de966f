//! Generators for the sequential multisite phosphorylation cycle, a two-layer
//! cascade and the three-layer MAPK cascade.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modifications::{open_partial, open_species, FlowDirection};
use crate::network::{Complex, ReactionNetwork};

/// `P^n`: species `S0..Sn, E, F, ES0..ES{n-1}, FS1..FSn`; reactions
/// `bindE<i>/unbindE<i>/catE<i>` for `i = 0..n-1`, then
/// `bindF<i>/unbindF<i>/catF<i>` for `i = n..1`.
pub fn phosphorylation_cycle(n: usize) -> Result<ReactionNetwork> {
    if n == 0 {
        return Err(Error::InvalidArgument("phosphorylation cycle needs n >= 1".into()));
    }
    let mut names: Vec<String> = (0..=n).map(|i| format!("S{i}")).collect();
    names.push("E".into());
    names.push("F".into());
    names.extend((0..n).map(|i| format!("ES{i}")));
    names.extend((1..=n).map(|i| format!("FS{i}")));
    let s = |i: usize| i;
    let e = n + 1;
    let f = n + 2;
    let es = |i: usize| n + 3 + i;
    let fs = |i: usize| 2 * n + 2 + i;
    let pair = |a: usize, b: usize| Complex::from_terms([(a, 1), (b, 1)]);
    let one = |a: usize| Complex::from_terms([(a, 1)]);
    let mut rs = Vec::with_capacity(6 * n);
    for i in 0..n {
        rs.push((pair(s(i), e), one(es(i)), format!("bindE{i}")));
        rs.push((one(es(i)), pair(s(i), e), format!("unbindE{i}")));
        rs.push((one(es(i)), pair(s(i + 1), e), format!("catE{i}")));
    }
    for i in (1..=n).rev() {
        rs.push((pair(s(i), f), one(fs(i)), format!("bindF{i}")));
        rs.push((one(fs(i)), pair(s(i), f), format!("unbindF{i}")));
        rs.push((one(fs(i)), pair(s(i - 1), f), format!("catF{i}")));
    }
    ReactionNetwork::new(&names, rs)
}

/// Enzyme chains `enzyme + substrate <-> complex -> enzyme + product`, with
/// labels `bind<k>`, `unbind<k>`, `cat<k>` numbered from 1.
fn chains(steps: &[(&str, &str, &str, &str)]) -> ReactionNetwork {
    let mut names: Vec<String> = Vec::new();
    let idx = |name: &str, names: &mut Vec<String>| -> usize {
        match names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        }
    };
    let mut rs = Vec::new();
    for (k, (enzyme, substrate, complex, product)) in steps.iter().enumerate() {
        let k = k + 1;
        let en = idx(enzyme, &mut names);
        let su = idx(substrate, &mut names);
        let co = idx(complex, &mut names);
        let pr = idx(product, &mut names);
        let bound = Complex::from_terms([(co, 1)]);
        let free = Complex::from_terms([(en, 1), (su, 1)]);
        rs.push((free.clone(), bound.clone(), format!("bind{k}")));
        rs.push((bound.clone(), free, format!("unbind{k}")));
        rs.push((bound, Complex::from_terms([(en, 1), (pr, 1)]), format!("cat{k}")));
    }
    ReactionNetwork::new(&names, rs).expect("static family definition is valid")
}

/// Two-layer cascade: `W` is activated by `E1`, deactivated by `E2`; `W*`
/// activates `Z`, which `E3` deactivates. 11 species, 12 reactions.
pub fn small_cascade() -> ReactionNetwork {
    chains(&[
        ("E1", "W", "WE1", "W*"),
        ("E2", "W*", "W*E2", "W"),
        ("W*", "Z", "ZW*", "Z*"),
        ("E3", "Z*", "Z*E3", "Z"),
    ])
}

/// Three-layer MAPK cascade with single phosphorylation of `Z` and double
/// phosphorylation of `Y` and `X`. 22 species, 30 reactions.
pub fn mapk_cascade() -> ReactionNetwork {
    chains(&[
        ("E1", "Z", "E1Z", "Zp"),
        ("F1", "Zp", "F1Zp", "Z"),
        ("Zp", "Y", "ZpY", "Yp"),
        ("Zp", "Yp", "ZpYp", "Ypp"),
        ("F2", "Ypp", "F2Ypp", "Yp"),
        ("F2", "Yp", "F2Yp", "Y"),
        ("Ypp", "X", "YppX", "Xp"),
        ("Ypp", "Xp", "YppXp", "Xpp"),
        ("F3", "Xpp", "F3Xpp", "Xp"),
        ("F3", "Xp", "F3Xp", "X"),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PhosphoCycle(usize),
    SmallCascade,
    Mapk,
}

/// A family member together with the species to open fully or partially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default)]
    pub opened: Vec<String>,
    #[serde(default)]
    pub partial: Vec<(String, FlowDirection)>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec {
            family,
            opened: Vec::new(),
            partial: Vec::new(),
        }
    }

    pub fn open<S: Into<String>>(mut self, species: impl IntoIterator<Item = S>) -> Self {
        self.opened.extend(species.into_iter().map(Into::into));
        self
    }

    pub fn base(&self) -> Result<ReactionNetwork> {
        match self.family {
            Family::PhosphoCycle(n) => phosphorylation_cycle(n),
            Family::SmallCascade => Ok(small_cascade()),
            Family::Mapk => Ok(mapk_cascade()),
        }
    }

    pub fn build(&self) -> Result<ReactionNetwork> {
        let base = self.base()?;
        for (s, _) in &self.partial {
            if self.opened.contains(s) {
                return Err(Error::InvalidArgument(format!("`{s}` is both opened and partially opened")));
            }
        }
        let mut net = open_species(&base, &self.opened)?;
        for (s, dir) in &self.partial {
            net = open_partial(&net, s, *dir)?;
        }
        Ok(net)
    }
}
