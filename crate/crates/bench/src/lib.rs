//! Shared inputs for the criterion benches.

use crn_core::{open_species, phosphorylation_cycle, RateAssignment, ReactionNetwork};

/// `P^n` with substrate `S0` opened and all rates set to `k`.
pub fn open_cycle(n: usize, k: f64) -> (ReactionNetwork, RateAssignment) {
    let net = open_species(&phosphorylation_cycle(n).expect("n >= 1"), &["S0"]).expect("S0 is closed");
    let rates = net.labels().map(|l| (l.to_string(), k)).collect();
    (net, rates)
}
