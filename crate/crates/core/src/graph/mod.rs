//! Simple undirected graphs built from observable sets, with exact clique,
//! coloring and perfectness routines.
//!
//! Naming: [`anticommutativity_graph`] returns Ḡ (edge iff the pair
//! anticommutes). Its [`Graph::complement`] is the commutation graph G (edge iff
//! the anticommutator is nonzero).

mod bitset;
mod clique;
mod coloring;
mod perfect;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use bitset::BitSet;
pub use clique::{clique_number, clique_number_with_cap, maximum_clique};
pub use coloring::{chromatic_number, chromatic_number_with};
pub use perfect::{is_perfect, is_perfect_with_cap, Perfectness};

use crate::error::{Error, Result};
use crate::pauli::{observables_anticommute, ObservableSet};
use crate::scalar::Real;

/// Size caps for the exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCaps {
    pub clique: usize,
    pub chromatic: usize,
    pub perfectness: usize,
}

impl Default for GraphCaps {
    fn default() -> Self {
        Self {
            clique: 64,
            chromatic: 32,
            perfectness: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Cycle `0 - 1 - … - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Adds the undirected edge `{i, j}`; self-loops are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
        }
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj[i].remove(j);
        self.adj[j].remove(i);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &BitSet {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| {
                self.adj[i]
                    .iter()
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::len).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut g = Self::empty(self.n + other.n);
        for (i, j) in self.edges() {
            g.add_edge(i, j);
        }
        for (i, j) in other.edges() {
            g.add_edge(self.n + i, self.n + j);
        }
        g
    }

    /// Degeneracy order: repeatedly remove a vertex of minimum remaining
    /// degree, ties broken by lower index.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let mut remaining = BitSet::full(self.n);
        let mut deg: Vec<usize> = (0..self.n).map(|i| self.degree(i)).collect();
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = remaining
                .iter()
                .min_by_key(|&v| (deg[v], v))
                .expect("vertices remain");
            remaining.remove(v);
            for u in self.adj[v].iter() {
                if remaining.contains(u) {
                    deg[u] -= 1;
                }
            }
            order.push(v);
        }
        order
    }
}

/// Ḡ: one vertex per observable, edge iff the pair anticommutes.
pub fn anticommutativity_graph<T: Real>(set: &ObservableSet<T>) -> Result<Graph> {
    let obs = set.observables();
    let n = obs.len();
    let mut g = Graph::empty(n);
    if set.is_all_pauli() {
        for i in 0..n {
            for j in i + 1..n {
                if observables_anticommute(&obs[i], &obs[j])? {
                    g.add_edge(i, j);
                }
            }
        }
    } else {
        let mats = set.matrices()?;
        for i in 0..n {
            for j in i + 1..n {
                if crate::pauli::matrices_anticommute(&mats[i], &mats[j])? {
                    g.add_edge(i, j);
                }
            }
        }
    }
    Ok(g)
}

/// G: complement of the anticommutativity graph.
pub fn commutation_graph<T: Real>(set: &ObservableSet<T>) -> Result<Graph> {
    Ok(anticommutativity_graph(set)?.complement())
}

/// Graph JSON: `{"n": n, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<&GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: &GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(j.n, &edges)
    }
}

/// DOT (undirected `graph`) rendering with one labelled node per vertex.
pub fn to_dot(g: &Graph, labels: &[String]) -> Result<String> {
    if labels.len() != g.n() {
        return Err(Error::LabelCountMismatch {
            expected: g.n(),
            found: labels.len(),
        });
    }
    let mut out = String::from("graph {\n");
    for (i, label) in labels.iter().enumerate() {
        let escaped = label.replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(out, "  \"v{i}\" [label=\"{escaped}\"];");
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  \"v{i}\" -- \"v{j}\";");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::pauli::{parse_pauli, ObservableSet, PauliString};
    use rand::{Rng, SeedableRng};

    pub(crate) fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    // Brute-force isomorphism over all permutations (n ≤ 8).
    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        fn permute(
            k: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            a: &Graph,
            b: &Graph,
        ) -> bool {
            let n = a.n();
            if k == n {
                return (0..n)
                    .all(|i| (i + 1..n).all(|j| a.has_edge(i, j) == b.has_edge(perm[i], perm[j])));
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    perm.push(v);
                    if permute(k + 1, perm, used, a, b) {
                        return true;
                    }
                    perm.pop();
                    used[v] = false;
                }
            }
            false
        }
        a.n() == b.n()
            && a.edge_count() == b.edge_count()
            && permute(0, &mut vec![], &mut vec![false; a.n()], a, b)
    }

    fn pentagon_set() -> ObservableSet<f64> {
        ObservableSet::from_pauli_strs(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"]).unwrap()
    }

    #[test]
    fn anticommutativity_examples() {
        let xyz = ObservableSet::<f64>::from_pauli_strs(&["X", "Y", "Z"]).unwrap();
        assert_eq!(anticommutativity_graph(&xyz).unwrap(), Graph::complete(3));
        let gbar = anticommutativity_graph(&pentagon_set()).unwrap();
        assert!(isomorphic(&gbar, &Graph::cycle(5)));
        let commuting = ObservableSet::<f64>::from_pauli_strs(&["ZI", "IZ", "ZZ"]).unwrap();
        assert_eq!(
            anticommutativity_graph(&commuting).unwrap(),
            Graph::empty(3)
        );
    }

    #[test]
    fn dense_and_symbolic_graphs_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let nq = rng.random_range(1..=3usize);
            let k = rng.random_range(2..=6usize);
            let strings: Vec<PauliString> = (0..k)
                .map(|_| PauliString::from_index(nq, rng.random_range(1..4u64.pow(nq as u32))))
                .collect();
            let symbolic = ObservableSet::<f64>::from_paulis(strings.clone()).unwrap();
            let dense = ObservableSet::from_matrices(
                strings
                    .iter()
                    .map(|s| s.to_matrix::<f64>().unwrap())
                    .collect(),
            )
            .unwrap();
            assert_eq!(
                anticommutativity_graph(&symbolic).unwrap(),
                anticommutativity_graph(&dense).unwrap()
            );
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(5).complement(), Graph::empty(5));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let g = random_graph(9, 0.4, &mut rng);
            assert_eq!(g.complement().complement(), g);
        }
        assert!(isomorphic(&Graph::cycle(5).complement(), &Graph::cycle(5)));
        assert!(!isomorphic(&Graph::cycle(6).complement(), &Graph::cycle(6)));
    }

    #[test]
    fn degeneracy_order_breaks_ties_by_index() {
        assert_eq!(Graph::empty(4).degeneracy_order(), vec![0, 1, 2, 3]);
        // Star centred on 0: once two leaves are gone the centre ties with
        // the last leaf at degree 1 and wins on index.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.degeneracy_order(), vec![1, 2, 0, 3]);
    }

    #[test]
    fn dot_output() {
        let one = to_dot(&Graph::empty(1), &["X".to_string()]).unwrap();
        assert!(one.starts_with("graph {"));
        assert!(one.contains("\"v0\""));
        assert!(!one.contains("--"));
        let labels: Vec<String> = ["X11", "1X1", "Z1X", "ZZ1", "1ZZ"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let gbar = anticommutativity_graph(&pentagon_set()).unwrap();
        let dot = to_dot(&gbar, &labels).unwrap();
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert_eq!(dot.matches("[label=").count(), 5);
        assert!(matches!(
            to_dot(&gbar, &labels[..3]),
            Err(Error::LabelCountMismatch { .. })
        ));
        let quoted = to_dot(&Graph::empty(1), &["a\"b".to_string()]).unwrap();
        assert!(quoted.contains("a\\\"b"));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = Graph::cycle(5);
        let j = GraphJson::from(&g);
        assert_eq!(j.edges.len(), 5);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Graph::try_from(&back).unwrap(), g);
        let bad = GraphJson {
            n: 2,
            edges: vec![[0, 0]],
        };
        assert!(Graph::try_from(&bad).is_err());
    }

    #[test]
    fn parse_helper_sanity() {
        assert_eq!(parse_pauli("Z").unwrap().n_qubits(), 1);
    }
}
