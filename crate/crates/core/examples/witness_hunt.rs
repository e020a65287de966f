//! Randomised search for multistationarity witnesses of `P^n` openings.
//!
//! ```text
//! cargo run --release -p crn-core --example witness_hunt -- <n> <species,...> <draws> <seed> [out.json]
//! ```
//!
//! Each draw samples log-uniform rates and a random compatibility class, then
//! runs a multistart search; the first draw with two nondegenerate states in
//! one class is printed (and written to `out.json` if given).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crn_core::numerics::ClassSolver;
use crn_core::{open_species, phosphorylation_cycle, RateAssignment, SearchConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() < 5 {
        eprintln!("usage: witness_hunt <n> <species,...> <draws> <seed> [out.json]");
        std::process::exit(2);
    }
    let n: usize = args[1].parse().expect("n");
    let open: Vec<&str> = args[2].split(',').filter(|s| !s.is_empty()).collect();
    let draws: u64 = args[3].parse().expect("draws");
    let seed: u64 = args[4].parse().expect("seed");
    let net = open_species(&phosphorylation_cycle(n).unwrap(), &open).unwrap();
    let labels: Vec<String> = net.labels().map(str::to_string).collect();

    let hit = (0..draws).into_par_iter().find_map_first(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        let rates: BTreeMap<String, f64> = labels
            .iter()
            .map(|l| {
                let e: f64 = if l.starts_with("bind") {
                    rng.random_range(-1.0..2.5)
                } else if l.starts_with("in_") || l.starts_with("out_") {
                    rng.random_range(-2.0..1.0)
                } else {
                    rng.random_range(-1.5..1.5)
                };
                (l.clone(), 10f64.powf(e))
            })
            .collect();
        let rates = RateAssignment::for_network(&net, rates).unwrap();
        let solver = ClassSolver::new(&net, &rates).unwrap();
        let x: Vec<f64> = (0..net.num_species())
            .map(|_| 10f64.powf(rng.random_range(-1.0..1.0)))
            .collect();
        let t = solver.totals(&x);
        let cfg = SearchConfig {
            num_starts: 24,
            seed: k,
            ..Default::default()
        };
        let found = solver.search(&t, &cfg).ok()?;
        let good: Vec<_> = found.into_iter().filter(|r| r.nondegenerate).collect();
        (good.len() >= 2).then_some((k, rates, t, good))
    });

    match hit {
        Some((k, rates, t, states)) => {
            let out = json!({
                "network": { "n": n, "open": open },
                "species": net.species_names(),
                "hunt": { "seed": seed, "draw": k },
                "rates": rates,
                "totals": t,
                "states": states.iter().map(|s| &s.x).collect::<Vec<_>>(),
            });
            let text = serde_json::to_string_pretty(&out).unwrap();
            println!("{text}");
            if let Some(path) = args.get(5) {
                std::fs::write(path, text + "\n").unwrap();
            }
        }
        None => {
            eprintln!("no witness in {draws} draws");
            std::process::exit(1);
        }
    }
}
