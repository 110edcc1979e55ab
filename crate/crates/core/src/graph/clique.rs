use super::{BitSet, Graph, GraphCaps};
use crate::error::{Error, Result};

/// Exact clique number ω(g) with the default cap.
pub fn clique_number(g: &Graph) -> Result<usize> {
    clique_number_with_cap(g, GraphCaps::default().clique)
}

pub fn clique_number_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    Ok(maximum_clique(g, cap)?.len())
}

/// A maximum clique, found by branch and bound with greedy-coloring bounds.
///
/// Candidates are processed in degeneracy order; a branch is cut as soon as
/// the current clique plus the number of colors left cannot beat the
/// incumbent.
pub fn maximum_clique(g: &Graph, cap: usize) -> Result<Vec<usize>> {
    let n = g.n();
    if n > cap {
        return Err(Error::SizeCapExceeded {
            what: "clique search",
            size: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // Highest-core vertices first.
    let mut order = g.degeneracy_order();
    order.reverse();
    let mut search = Search {
        g,
        order,
        best: vec![order_first(g)],
        current: Vec::new(),
    };
    let all = BitSet::full(n);
    search.expand(&all);
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

fn order_first(g: &Graph) -> usize {
    (0..g.n())
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .unwrap_or(0)
}

struct Search<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Search<'_> {
    fn expand(&mut self, candidates: &BitSet) {
        let colored = self.color(candidates);
        let mut remaining = candidates.clone();
        for &(v, color) in colored.iter().rev() {
            if self.current.len() + color <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = remaining.intersection(self.g.neighbors(v));
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(&next);
            }
            self.current.pop();
            remaining.remove(v);
        }
    }

    // Greedy sequential coloring of the candidates in the fixed vertex order.
    // Returns (vertex, color) sorted by nondecreasing color, colors from 1.
    fn color(&self, candidates: &BitSet) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in self.order.iter().filter(|&&v| candidates.contains(v)) {
            match classes
                .iter_mut()
                .find(|c| c.iter().all(|&u| !self.g.has_edge(u, v)))
            {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes
            .into_iter()
            .enumerate()
            .flat_map(|(k, c)| c.into_iter().map(move |v| (v, k + 1)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::anticommutativity_graph;
    use crate::graph::tests::random_graph;
    use crate::pauli::ObservableSet;
    use rand::SeedableRng;

    // Exhaustive maximum independent set for n ≤ 12.
    fn brute_force_independence(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|i| {
                    mask >> i & 1 == 0
                        || (i + 1..n).all(|j| mask >> j & 1 == 0 || !g.has_edge(i, j))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn examples() {
        assert_eq!(clique_number(&Graph::complete(5)).unwrap(), 5);
        let gbar = anticommutativity_graph(
            &ObservableSet::<f64>::from_pauli_strs(&["X11", "1X1", "Z1X", "ZZ1", "1ZZ"]).unwrap(),
        )
        .unwrap();
        assert_eq!(clique_number(&gbar.complement()).unwrap(), 2);
        assert_eq!(clique_number(&Graph::empty(4)).unwrap(), 1);
        assert_eq!(clique_number(&Graph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn twenty_seven_paulis() {
        let mut labels = Vec::new();
        for a in ["X", "Y", "Z"] {
            for b in ["X", "Y", "Z"] {
                for c in ["X", "Y", "Z"] {
                    labels.push(format!("{a}{b}{c}"));
                }
            }
        }
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let set = ObservableSet::<f64>::from_pauli_strs(&refs).unwrap();
        let g = anticommutativity_graph(&set).unwrap().complement();
        let clique = maximum_clique(&g, 64).unwrap();
        assert_eq!(clique.len(), 4);
        for (a, &i) in clique.iter().enumerate() {
            for &j in &clique[a + 1..] {
                assert!(g.has_edge(i, j));
            }
        }
    }

    #[test]
    fn matches_brute_force_independence() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..40 {
            let n = 3 + trial % 10;
            let g = random_graph(n, 0.5, &mut rng);
            assert_eq!(
                clique_number(&g.complement()).unwrap(),
                brute_force_independence(&g),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn cap() {
        assert!(matches!(
            clique_number_with_cap(&Graph::empty(10), 9),
            Err(Error::SizeCapExceeded { .. })
        ));
    }
}
