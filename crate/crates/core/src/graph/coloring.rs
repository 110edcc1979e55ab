use super::{clique_number_with_cap, Graph, GraphCaps};
use crate::error::{Error, Result};

/// Exact chromatic number χ(g) with the default cap, lower bound ω(g).
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with(g, GraphCaps::default().chromatic, None)
}

/// DSATUR branch and bound.
///
/// The search starts from `max(ω(g), lower_bound)` and stops as soon as a
/// coloring meets the lower bound. `lower_bound` must be a valid lower bound
/// on χ(g); passing anything larger gives a wrong answer.
pub fn chromatic_number_with(g: &Graph, cap: usize, lower_bound: Option<usize>) -> Result<usize> {
    let n = g.n();
    if n > cap {
        return Err(Error::SizeCapExceeded {
            what: "chromatic number",
            size: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let omega = clique_number_with_cap(g, n)?;
    let lower = omega.max(lower_bound.unwrap_or(0));
    let mut search = Dsatur {
        g,
        colors: vec![None; n],
        saturation: vec![0u64; n],
        best: n + 1,
        lower,
    };
    // A greedy DSATUR pass gives the initial upper bound.
    search.best = search.greedy();
    if search.best > lower {
        search.branch(0);
    }
    Ok(search.best)
}

struct Dsatur<'a> {
    g: &'a Graph,
    colors: Vec<Option<usize>>,
    // Bit c set when some neighbor has color c (colors < 64 since n ≤ cap ≤ 64).
    saturation: Vec<u64>,
    best: usize,
    lower: usize,
}

impl Dsatur<'_> {
    fn pick(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.colors[v].is_none())
            .max_by_key(|&v| {
                let uncolored_deg = self
                    .g
                    .neighbors(v)
                    .iter()
                    .filter(|&u| self.colors[u].is_none())
                    .count();
                (
                    self.saturation[v].count_ones(),
                    uncolored_deg,
                    std::cmp::Reverse(v),
                )
            })
    }

    fn assign(&mut self, v: usize, c: usize) -> Vec<usize> {
        self.colors[v] = Some(c);
        let mut changed = Vec::new();
        for u in self.g.neighbors(v).iter() {
            if self.saturation[u] >> c & 1 == 0 {
                self.saturation[u] |= 1 << c;
                changed.push(u);
            }
        }
        changed
    }

    fn unassign(&mut self, v: usize, c: usize, changed: &[usize]) {
        self.colors[v] = None;
        for &u in changed {
            self.saturation[u] &= !(1 << c);
        }
    }

    fn greedy(&mut self) -> usize {
        let mut used = 0;
        let mut trail = Vec::new();
        while let Some(v) = self.pick() {
            let c = (0..)
                .find(|&c| self.saturation[v] >> c & 1 == 0)
                .expect("free color");
            used = used.max(c + 1);
            let changed = self.assign(v, c);
            trail.push((v, c, changed));
        }
        for (v, c, changed) in trail.into_iter().rev() {
            self.unassign(v, c, &changed);
        }
        used
    }

    fn branch(&mut self, used: usize) {
        if self.best <= self.lower {
            return;
        }
        let Some(v) = self.pick() else {
            self.best = self.best.min(used);
            return;
        };
        // Colors 0..used plus one fresh color, never reaching the incumbent.
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.saturation[v] >> c & 1 == 1 {
                continue;
            }
            let changed = self.assign(v, c);
            self.branch(used.max(c + 1));
            self.unassign(v, c, &changed);
            if self.best <= self.lower {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::random_graph;
    use rand::SeedableRng;

    // Exhaustive k-coloring check.
    fn colorable(g: &Graph, k: usize) -> bool {
        fn go(g: &Graph, k: usize, v: usize, colors: &mut Vec<usize>) -> bool {
            if v == g.n() {
                return true;
            }
            for c in 0..k {
                if (0..v).all(|u| !g.has_edge(u, v) || colors[u] != c) {
                    colors.push(c);
                    if go(g, k, v + 1, colors) {
                        return true;
                    }
                    colors.pop();
                }
            }
            false
        }
        go(g, k, 0, &mut Vec::new())
    }

    fn brute_chromatic(g: &Graph) -> usize {
        (1..=g.n()).find(|&k| colorable(g, k)).unwrap_or(0)
    }

    #[test]
    fn examples() {
        assert_eq!(chromatic_number(&Graph::empty(7)).unwrap(), 1);
        assert_eq!(chromatic_number(&Graph::cycle(5)).unwrap(), 3);
        assert!(!colorable(&Graph::cycle(5), 2) && colorable(&Graph::cycle(5), 3));
        assert_eq!(chromatic_number(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(chromatic_number(&Graph::cycle(6)).unwrap(), 2);
    }

    #[test]
    fn matches_brute_force_and_dominates_clique() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = 2 + trial % 9;
            let g = random_graph(n, 0.45, &mut rng);
            let chi = chromatic_number(&g).unwrap();
            assert_eq!(chi, brute_chromatic(&g), "trial {trial}");
            assert!(clique_number_with_cap(&g, 64).unwrap() <= chi);
        }
    }

    #[test]
    fn mycielski_graph_gap() {
        // Grötzsch graph: triangle-free with χ = 4.
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (5, 1),
            (5, 4),
            (6, 0),
            (6, 2),
            (7, 1),
            (7, 3),
            (8, 2),
            (8, 4),
            (9, 3),
            (9, 0),
            (10, 5),
            (10, 6),
            (10, 7),
            (10, 8),
            (10, 9),
        ];
        let g = Graph::from_edges(11, &edges).unwrap();
        assert_eq!(clique_number_with_cap(&g, 64).unwrap(), 2);
        assert_eq!(chromatic_number(&g).unwrap(), 4);
    }

    #[test]
    fn cap() {
        assert!(matches!(
            chromatic_number_with(&Graph::empty(33), 32, None),
            Err(Error::SizeCapExceeded { .. })
        ));
    }
}
