use crate::test_support::{corpus, printed, spread_rates};
use crn_core::numerics::{search_totals_match, ClassSolver};
use crn_core::{
    certify_enzyme_open, conservation_laws, lift_steady_state, open_species, phosphorylation_cycle,
    RateAssignment, ReactionNetwork, SearchConfig,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn log_uniform_rates(net: &ReactionNetwork, rng: &mut ChaCha8Rng) -> RateAssignment {
    net.labels()
        .map(|l| (l.to_string(), 10f64.powf(rng.random_range(-1.0..1.0))))
        .collect()
}

#[test]
fn conservation_identity_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, net) in corpus() {
        let rates = log_uniform_rates(&net, &mut rng);
        let solver = ClassSolver::new(&net, &rates).unwrap();
        let w = conservation_laws(&net).to_f64();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..net.num_species()).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
            let f = solver.ma.rhs(&x);
            let scale: f64 = solver.ma.scales(&x).iter().fold(1.0, |m, v| m.max(*v));
            for row in &w {
                let wf: f64 = row.iter().zip(&f).map(|(a, b)| a * b).sum();
                let wmax = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                assert!(wf.abs() <= 1e-12 * scale * wmax * net.num_species() as f64, "{name}: {wf:e}");
            }
        }
    }
}

#[test]
fn search_records_meet_tolerances() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (name, net) in corpus().into_iter().filter(|(n, _)| n.starts_with('P') || n == "schlogl") {
        let rates = log_uniform_rates(&net, &mut rng);
        let solver = ClassSolver::new(&net, &rates).unwrap();
        let x: Vec<f64> = (0..net.num_species()).map(|_| rng.random_range(0.5..2.0)).collect();
        let t = solver.totals(&x);
        let cfg = SearchConfig {
            num_starts: 40,
            seed: 3,
            ..Default::default()
        };
        for r in solver.search(&t, &cfg).unwrap() {
            assert!(r.residual <= cfg.newton_tol, "{name}: residual {:e}", r.residual);
            assert!(search_totals_match(&r.totals, &t, 1e-8), "{name}: totals");
            assert!(r.x.iter().all(|v| *v > 0.0));
            assert_eq!(r.nondegenerate, r.rank_gap == 0);
        }
    }
}

#[test]
fn search_is_bitwise_reproducible() {
    let inst = printed("p2_open_S0.json");
    let solver = ClassSolver::new(&inst.net, &inst.rates).unwrap();
    let t = solver.totals(&inst.states[0]);
    let cfg = SearchConfig {
        num_starts: 64,
        seed: 99,
        ..Default::default()
    };
    let a = solver.search(&t, &cfg).unwrap();
    let b = solver.search(&t, &cfg).unwrap();
    assert_eq!(a.len(), b.len());
    for (p, q) in a.iter().zip(&b) {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&p.x), bits(&q.x));
    }
}

#[test]
fn certified_networks_show_one_state_per_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=2 {
        let net = open_species(&phosphorylation_cycle(n).unwrap(), &["E", "F"]).unwrap();
        assert!(certify_enzyme_open(&phosphorylation_cycle(n).unwrap(), &["E", "F"])
            .unwrap()
            .verdict
            .is_monostationary());
        for draw in 0..5 {
            let rates = log_uniform_rates(&net, &mut rng);
            let solver = ClassSolver::new(&net, &rates).unwrap();
            let x: Vec<f64> = (0..net.num_species()).map(|_| rng.random_range(0.2..5.0)).collect();
            let t = solver.totals(&x);
            let cfg = SearchConfig {
                num_starts: 200,
                seed: draw,
                ..Default::default()
            };
            let found = solver.search(&t, &cfg).unwrap();
            assert!(found.len() <= 1, "P{n}, draw {draw}: {} states", found.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lifting_preserves_residual_and_nondegeneracy(log_a in -1.0f64..1.0, which in 0usize..2) {
        let inst = printed("p2_open_S0.json");
        let solver = ClassSolver::new(&inst.net, &inst.rates).unwrap();
        let (_, refined) = solver.refine_in_common_class(&inst.states, 1e-12, 200);
        let base = refined[which].as_ref().unwrap();
        let lift = lift_steady_state(2, 0, &inst.rates, &base.x, 10f64.powf(log_a), 1e-10).unwrap();
        prop_assert!(lift.residual <= base.residual + 1e-12);
        prop_assert_eq!(lift.lifted_state.len(), base.x.len() + 1);
        if base.rank_gap == 0 {
            prop_assert_eq!(lift.rank_gap, 0);
        }
    }

    #[test]
    fn jacobian_matches_differences_on_cycles(n in 1usize..=3, seed in any::<u64>()) {
        let net = open_species(&phosphorylation_cycle(n).unwrap(), &["S0"]).unwrap();
        let rates = spread_rates(&net);
        let solver = ClassSolver::new(&net, &rates).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..net.num_species()).map(|_| rng.random_range(0.1..3.0)).collect();
        let j = solver.ma.jacobian(&x);
        let scale = j.amax();
        for col in 0..x.len() {
            let h = 1e-6 * x[col];
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[col] += h;
            xm[col] -= h;
            let (fp, fm) = (solver.ma.rhs(&xp), solver.ma.rhs(&xm));
            for row in 0..x.len() {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                prop_assert!((fd - j[(row, col)]).abs() <= 1e-6 * scale);
            }
        }
    }
}
