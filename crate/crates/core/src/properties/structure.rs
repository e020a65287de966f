use crate::test_support::corpus;
use crn_core::linalg::{self, q, Rational};
use crn_core::structure::{independently_conserved, stoichiometric_rank};
use crn_core::{
    canonical_serialize, conservation_laws, deficiency, deficiency_zero_geometric, open_species, parse_network,
    phosphorylation_cycle, project_complement, small_cascade, mapk_cascade, symmetry_relabel, Complex,
    ReactionNetwork,
};
use proptest::prelude::*;

/// Random networks over up to five species with coefficients in `0..=2`.
fn arb_network() -> impl Strategy<Value = ReactionNetwork> {
    (2usize..=5).prop_flat_map(|ns| {
        let complex = prop::collection::vec(0u32..=2, ns);
        prop::collection::vec((complex.clone(), complex), 1..8).prop_filter_map("only self-loops", move |pairs| {
            let names: Vec<String> = (0..ns).map(|i| format!("X{i}")).collect();
            let triples: Vec<(Complex, Complex, String)> = pairs
                .into_iter()
                .filter(|(s, p)| s != p)
                .enumerate()
                .map(|(k, (s, p))| {
                    let c = |v: Vec<u32>| Complex::from_terms(v.into_iter().enumerate().filter(|t| t.1 > 0));
                    (c(s), c(p), format!("r{k}"))
                })
                .collect();
            if triples.is_empty() {
                None
            } else {
                ReactionNetwork::new(&names, triples).ok()
            }
        })
    })
}

fn gamma(net: &ReactionNetwork) -> Vec<Vec<Rational>> {
    linalg::to_rational(&net.stoichiometric_matrix())
}

fn is_zero_matrix(m: &[Vec<Rational>]) -> bool {
    m.iter().flatten().all(num_traits::Zero::is_zero)
}

/// The reduced conservation basis of the n-site cycle: the substrate total,
/// the kinase total and the phosphatase total.
fn cycle_laws(n: usize) -> Vec<Vec<Rational>> {
    let len = 3 * n + 3;
    let (e, f) = (n + 1, n + 2);
    let es = |i: usize| n + 3 + i;
    let fs = |i: usize| 2 * n + 3 + i - 1;
    let mut ls = vec![q(0); len];
    let mut le = vec![q(0); len];
    let mut lf = vec![q(0); len];
    (0..=n).for_each(|i| ls[i] = q(1));
    le[e] = q(1);
    lf[f] = q(1);
    for i in 0..n {
        ls[es(i)] = q(1);
        le[es(i)] = q(1);
        ls[fs(i + 1)] = q(1);
        lf[fs(i + 1)] = q(1);
    }
    vec![ls, le, lf]
}

#[test]
fn cycle_family_sizes_and_laws() {
    for n in 1..=10 {
        let net = phosphorylation_cycle(n).unwrap();
        assert_eq!(net.num_species(), 3 * n + 3);
        assert_eq!(net.reactions().len(), 6 * n);
        let w = conservation_laws(&net);
        assert_eq!(w.rows(), cycle_laws(n).as_slice(), "n = {n}");
    }
}

#[test]
fn corpus_kernel_rank_and_deficiency() {
    for (name, net) in corpus() {
        let g = gamma(&net);
        let w = conservation_laws(&net);
        assert!(is_zero_matrix(&linalg::mul(w.rows(), &g)), "{name}");
        assert_eq!(linalg::rank(w.rows()), w.dim(), "{name}: rows independent");
        assert_eq!(stoichiometric_rank(&net), net.num_species() - w.dim(), "{name}");
        let report = deficiency(&net);
        if net.complexes().len() <= 20 {
            assert_eq!(report.deficiency == 0, deficiency_zero_geometric(&net), "{name}");
        }
        for col in 0..net.reactions().len() {
            assert!(g.iter().any(|row| !num_traits::Zero::is_zero(&row[col])), "{name}: zero column {col}");
        }
    }
}

#[test]
fn independent_conservation_is_monotone() {
    for (name, net) in corpus() {
        let n = net.num_species().min(6);
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if independently_conserved(&net, &set).is_some() {
                continue;
            }
            for extra in (0..n).filter(|i| !set.contains(i)) {
                let mut sup = set.clone();
                sup.push(extra);
                sup.sort_unstable();
                assert!(independently_conserved(&net, &sup).is_none(), "{name}: {set:?} fails but {sup:?} holds");
            }
        }
    }
}

#[test]
fn projection_of_opened_network_matches_projection() {
    for (name, net) in corpus() {
        for s in 0..net.num_species() {
            if !net.is_closed(s) || net.num_species() == 1 {
                continue;
            }
            let set = [net.species()[s].name()];
            let opened = open_species(&net, &set).unwrap();
            assert_eq!(opened.num_species(), net.num_species());
            let a = project_complement(&opened, &set).unwrap();
            let b = project_complement(&net, &set).unwrap();
            assert_eq!(a.network.num_species(), net.num_species() - 1);
            assert!(a.network.same_labeled_graph(&b.network), "{name} without {}", set[0]);
        }
    }
}

#[test]
fn projected_stoichiometric_subspace_is_coordinate_projection() {
    for (name, net) in corpus() {
        for s in 0..net.num_species() {
            if net.num_species() == 1 {
                continue;
            }
            let proj = project_complement(&net, &[net.species()[s].name()]).unwrap();
            let g = gamma(&net);
            let projected: Vec<Vec<Rational>> = proj.kept_species.iter().map(|&i| g[i].clone()).collect();
            let own = gamma(&proj.network);
            let own = if own.first().is_some_and(|r| !r.is_empty()) {
                own
            } else {
                vec![vec![q(0)]; proj.network.num_species()]
            };
            assert!(linalg::same_column_span(&projected, &own), "{name} without species {s}");
        }
    }
}

#[test]
fn opening_substrates_leaves_enzyme_totals() {
    for n in 1..=4 {
        let net = phosphorylation_cycle(n).unwrap();
        let laws = cycle_laws(n);
        let one = conservation_laws(&open_species(&net, &["S0"]).unwrap());
        assert_eq!(one.rows(), &laws[1..]);
        let all: Vec<String> = (0..=n).map(|i| format!("S{i}")).collect();
        let many = conservation_laws(&open_species(&net, &all).unwrap());
        assert_eq!(many.rows(), one.rows());
    }
}

#[test]
fn symmetry_maps_cycle_onto_itself() {
    for n in 1..=6 {
        let net = phosphorylation_cycle(n).unwrap();
        for i in 0..=n {
            let r = symmetry_relabel(n, i).unwrap();
            let image = r.apply(&net).unwrap();
            assert!(image.is_isomorphic(&net), "n = {n}, i = {i}");
            assert!(image.reaction_correspondence(&net).is_some());
            let back = r.inverse().apply(&image).unwrap();
            assert!(back.same_labeled_graph(&net));
        }
    }
}

#[test]
fn family_reports_are_stable() {
    for build in [small_cascade as fn() -> ReactionNetwork, mapk_cascade] {
        let a = serde_json::to_string(&deficiency(&build())).unwrap();
        let b = serde_json::to_string(&deficiency(&build())).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn family_networks_round_trip_through_text() {
    let mut nets: Vec<ReactionNetwork> = (1..=6).map(|n| phosphorylation_cycle(n).unwrap()).collect();
    nets.push(small_cascade());
    nets.push(mapk_cascade());
    nets.push(open_species(&phosphorylation_cycle(3).unwrap(), &["E", "S1"]).unwrap());
    for net in nets {
        let text = canonical_serialize(&net);
        let back = parse_network(&text).unwrap();
        assert_eq!(back.species_names(), net.species_names());
        assert!(back.same_labeled_graph(&net));
        assert_eq!(canonical_serialize(&back), text);
    }
}

proptest! {
    #[test]
    fn random_networks_round_trip(net in arb_network()) {
        let text = canonical_serialize(&net);
        let back = parse_network(&text).unwrap();
        prop_assert!(back.same_labeled_graph(&net));
        prop_assert_eq!(canonical_serialize(&back), text);
    }

    #[test]
    fn random_networks_structural_identities(net in arb_network()) {
        let w = conservation_laws(&net);
        prop_assert!(is_zero_matrix(&linalg::mul(w.rows(), &gamma(&net))));
        prop_assert_eq!(stoichiometric_rank(&net) + w.dim(), net.num_species());
        let report = deficiency(&net);
        prop_assert_eq!(report.deficiency == 0, deficiency_zero_geometric(&net));
        prop_assert_eq!(
            report.deficiency + report.linkage_classes + report.stoich_dim,
            report.complexes
        );
    }

    #[test]
    fn random_projection_preserves_compatibility(net in arb_network(), pick in any::<prop::sample::Index>(), c in prop::collection::vec(-3i64..=3, 8)) {
        prop_assume!(net.num_species() > 1);
        let s = pick.index(net.num_species());
        let proj = project_complement(&net, &[net.species()[s].name()]).unwrap();
        let g = gamma(&net);
        // an arbitrary displacement inside the stoichiometric subspace projects
        // into the stoichiometric subspace of the projection
        let v: Vec<Rational> = proj
            .kept_species
            .iter()
            .map(|&i| g[i].iter().zip(&c).fold(q(0), |acc, (x, k)| acc + x * q(*k)))
            .collect();
        let own = gamma(&proj.network);
        let joined: Vec<Vec<Rational>> = own.iter().zip(&v).map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        }).collect();
        prop_assert_eq!(linalg::rank(&joined), linalg::rank(&own));
    }
}
