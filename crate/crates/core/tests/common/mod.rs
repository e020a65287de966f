#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use crn_core::{
    mapk_cascade, open_species, parse_network, phosphorylation_cycle, project_complement, small_cascade,
    RateAssignment, ReactionNetwork,
};
use serde::Deserialize;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[derive(Debug, Deserialize)]
pub struct NetworkRef {
    pub n: usize,
    pub open: Vec<String>,
}

/// A printed rate table with states listed in `printed_order`.
#[derive(Debug, Deserialize)]
pub struct PrintedInstance {
    pub network: NetworkRef,
    pub printed_order: Vec<String>,
    pub rates: BTreeMap<String, f64>,
    pub printed_states: Vec<Vec<f64>>,
}

/// A witness found by randomised search, states in network species order.
#[derive(Debug, Deserialize)]
pub struct HuntedWitness {
    pub network: NetworkRef,
    pub species: Vec<String>,
    pub rates: BTreeMap<String, f64>,
    pub totals: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

pub struct Instance {
    pub net: ReactionNetwork,
    pub rates: RateAssignment,
    pub states: Vec<Vec<f64>>,
}

fn build(r: &NetworkRef) -> ReactionNetwork {
    open_species(&phosphorylation_cycle(r.n).unwrap(), &r.open).unwrap()
}

pub fn printed(name: &str) -> Instance {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    let p: PrintedInstance = serde_json::from_str(&text).unwrap();
    let net = build(&p.network);
    let rates = RateAssignment::for_network(&net, p.rates).unwrap();
    let states = p
        .printed_states
        .iter()
        .map(|x| {
            net.species_names()
                .iter()
                .map(|s| x[p.printed_order.iter().position(|o| o == s).unwrap()])
                .collect()
        })
        .collect();
    Instance { net, rates, states }
}

pub fn hunted(name: &str) -> (Instance, Vec<f64>) {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    let h: HuntedWitness = serde_json::from_str(&text).unwrap();
    let net = build(&h.network);
    assert_eq!(net.species_names(), h.species);
    let rates = RateAssignment::for_network(&net, h.rates).unwrap();
    (
        Instance {
            net,
            rates,
            states: h.states,
        },
        h.totals,
    )
}

fn p(text: &str) -> ReactionNetwork {
    parse_network(text).unwrap()
}

/// Networks used for structural and numerical oracle checks.
pub fn corpus() -> Vec<(String, ReactionNetwork)> {
    let example = p("#! species: X Y Z\nY -> X\nX -> Z\n2Z -> Y + Z");
    let mut v: Vec<(String, ReactionNetwork)> = vec![
        ("single".into(), p("A -> B")),
        ("reversible".into(), p("A <-> B")),
        ("two_classes".into(), p("A -> B\nC -> D")),
        ("dimer".into(), p("2A <-> B")),
        ("collinear".into(), p("2A -> 0\nA -> 0")),
        ("overlap".into(), p("A -> 0\nB -> A + B")),
        ("cycle3".into(), p("A -> B\nB -> C\nC -> A")),
        ("binding".into(), p("A + B <-> C\nC -> A + D\nD -> B")),
        ("example".into(), example.clone()),
        ("example_open_Z".into(), open_species(&example, &["Z"]).unwrap()),
        ("example_proj_Z".into(), project_complement(&example, &["Z"]).unwrap().network),
        ("schlogl".into(), p("0 <-> A\n2A <-> 3A")),
        ("small_cascade".into(), small_cascade()),
        ("mapk".into(), mapk_cascade()),
    ];
    for n in 1..=4 {
        let pn = phosphorylation_cycle(n).unwrap();
        v.push((format!("P{n}"), pn.clone()));
        v.push((format!("P{n}_open_S0"), open_species(&pn, &["S0"]).unwrap()));
        v.push((format!("P{n}_open_EF"), open_species(&pn, &["E", "F"]).unwrap()));
    }
    let p2 = phosphorylation_cycle(2).unwrap();
    v.push(("P2_proj_EF".into(), project_complement(&p2, &["E", "F"]).unwrap().collapsed()));
    v.push(("P2_open_E_S1".into(), open_species(&p2, &["E", "S1"]).unwrap()));
    v
}

/// All rates equal to one, perturbed deterministically by label position.
pub fn spread_rates(net: &ReactionNetwork) -> RateAssignment {
    net.labels()
        .enumerate()
        .map(|(i, l)| (l.to_string(), 0.5 + ((i * 37) % 11) as f64 / 7.0))
        .collect()
}
