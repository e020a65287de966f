//! Exact structural invariants: conservation laws, linkage classes, weak
//! reversibility, deficiency and independently conserved species sets.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, format_rational, Rational};
use crate::network::ReactionNetwork;
use num_traits::Zero;

/// Rows of `W` span the left kernel of Γ, in reduced row-echelon form with
/// pivots taken left to right in species order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationBasis {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    num_species: usize,
}

impl ConservationBasis {
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Number of independent laws `d`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn num_species(&self) -> usize {
        self.num_species
    }

    /// Pivot column of each row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(linalg::to_f64).collect())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    }

    /// Whether `row` lies in the span of the basis.
    pub fn contains(&self, row: &[Rational]) -> bool {
        let mut m = self.rows.clone();
        m.push(row.to_vec());
        linalg::rank(&m) == self.dim()
    }
}

pub fn conservation_laws(net: &ReactionNetwork) -> ConservationBasis {
    let n = net.num_species();
    let gamma = net.stoichiometric_matrix();
    let rows = if net.reactions().is_empty() {
        linalg::rref(&identity(n)).0
    } else {
        linalg::left_kernel(&gamma, n)
    };
    let pivots = rows
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("nonzero kernel row"))
        .collect();
    ConservationBasis {
        rows,
        pivots,
        num_species: n,
    }
}

fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| linalg::q((i == j) as i64)).collect())
        .collect()
}

/// Dimension of the stoichiometric subspace, `rank Γ`.
pub fn stoichiometric_rank(net: &ReactionNetwork) -> usize {
    linalg::rank_int(&net.stoichiometric_matrix())
}

/// Connected components of the undirected complex graph, each a sorted list
/// of complex indices; components are ordered by their smallest member.
pub fn linkage_classes(net: &ReactionNetwork) -> Vec<Vec<usize>> {
    let m = net.complexes().len();
    let mut uf = UnionFind::<usize>::new(m);
    for r in net.reactions() {
        uf.union(r.source, r.product);
    }
    let labels = uf.into_labeling();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for (c, root) in labels.into_iter().enumerate() {
        let slot = *root_slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[slot].push(c);
    }
    classes
}

fn complex_graph(net: &ReactionNetwork) -> DiGraph<(), ()> {
    let mut g = DiGraph::new();
    let nodes: Vec<_> = (0..net.complexes().len()).map(|_| g.add_node(())).collect();
    for r in net.reactions() {
        g.add_edge(nodes[r.source], nodes[r.product], ());
    }
    g
}

/// Every reaction lies on a directed cycle, i.e. its endpoints share a
/// strongly connected component.
pub fn is_weakly_reversible(net: &ReactionNetwork) -> bool {
    let g = complex_graph(net);
    let mut component = vec![0usize; net.complexes().len()];
    for (k, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            component[v.index()] = k;
        }
    }
    net.reactions()
        .iter()
        .all(|r| component[r.source] == component[r.product])
}

pub fn is_monomolecular(net: &ReactionNetwork) -> bool {
    net.complexes().iter().all(|c| c.order() <= 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub complexes: usize,
    pub linkage_classes: usize,
    pub stoich_dim: usize,
    pub deficiency: usize,
    pub weakly_reversible: bool,
    pub monomolecular: bool,
    pub conservation_laws: Vec<Vec<String>>,
}

pub fn deficiency(net: &ReactionNetwork) -> StructuralReport {
    let complexes = net.complexes().len();
    let ell = linkage_classes(net).len();
    let s = stoichiometric_rank(net);
    debug_assert!(complexes >= ell + s);
    StructuralReport {
        complexes,
        linkage_classes: ell,
        stoich_dim: s,
        deficiency: complexes - ell - s,
        weakly_reversible: is_weakly_reversible(net),
        monomolecular: is_monomolecular(net),
        conservation_laws: conservation_laws(net).to_strings(),
    }
}

/// δ = 0 via geometry: complexes of each linkage class are affinely
/// independent and the per-class stoichiometric subspaces are linearly
/// independent.
pub fn deficiency_zero_geometric(net: &ReactionNetwork) -> bool {
    let n = net.num_species();
    let mut all_differences: Vec<Vec<Rational>> = Vec::new();
    let mut dim_sum = 0;
    for class in linkage_classes(net) {
        let base = net.complexes()[class[0]].to_dense(n);
        let diffs: Vec<Vec<Rational>> = class[1..]
            .iter()
            .map(|&c| {
                let v = net.complexes()[c].to_dense(n);
                v.iter().zip(&base).map(|(a, b)| linalg::q(a - b)).collect()
            })
            .collect();
        let r = if diffs.is_empty() { 0 } else { linalg::rank(&diffs) };
        if r != diffs.len() {
            return false;
        }
        dim_sum += r;
        all_differences.extend(diffs);
    }
    let total = if all_differences.is_empty() {
        0
    } else {
        linalg::rank(&all_differences)
    };
    total == dim_sum
}

/// Witness laws `L_1..L_k` with `E_i` in `L_i` and absent from `L_j`, `j ≠ i`,
/// in the order of `set`. Returns `None` when no such laws exist, which is
/// exactly when the `E`-columns of `W` have rank below `|E|`.
pub fn independently_conserved(net: &ReactionNetwork, set: &[usize]) -> Option<Vec<Vec<Rational>>> {
    if set.is_empty() {
        return None;
    }
    let w = conservation_laws(net);
    let n = net.num_species();
    let mut order: Vec<usize> = set.to_vec();
    order.extend((0..n).filter(|i| !set.contains(i)));
    let (rows, pivots) = linalg::rref_with_order(w.rows(), &order);
    if pivots.len() < set.len() || pivots[..set.len()] != *set {
        return None;
    }
    Some(rows[..set.len()].to_vec())
}
