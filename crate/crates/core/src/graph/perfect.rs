use serde::{Deserialize, Serialize};

use super::{Graph, GraphCaps};

/// Outcome of the perfectness probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Perfectness {
    Perfect,
    /// An induced odd cycle of length ≥ 5 in the graph (`antihole = false`)
    /// or in its complement (`antihole = true`).
    Imperfect {
        witness: Vec<usize>,
        antihole: bool,
    },
    /// Graph larger than the search cap.
    Unknown,
}

impl Perfectness {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Perfectness::Perfect)
    }
}

pub fn is_perfect(g: &Graph) -> Perfectness {
    is_perfect_with_cap(g, GraphCaps::default().perfectness)
}

/// Odd-hole / odd-antihole search.
pub fn is_perfect_with_cap(g: &Graph, cap: usize) -> Perfectness {
    if g.n() > cap {
        return Perfectness::Unknown;
    }
    if let Some(witness) = find_odd_hole(g) {
        return Perfectness::Imperfect {
            witness,
            antihole: false,
        };
    }
    if let Some(witness) = find_odd_hole(&g.complement()) {
        return Perfectness::Imperfect {
            witness,
            antihole: true,
        };
    }
    Perfectness::Perfect
}

/// Induced odd cycle of length ≥ 5, listed in cycle order.
fn find_odd_hole(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    for start in 0..n {
        let mut path = vec![start];
        if extend(g, &mut path) {
            return Some(path);
        }
    }
    None
}

// Grows an induced path whose first vertex is the smallest on the cycle.
fn extend(g: &Graph, path: &mut Vec<usize>) -> bool {
    let start = path[0];
    let last = *path.last().expect("nonempty path");
    for u in g.neighbors(last).iter() {
        if u <= start || path.contains(&u) {
            continue;
        }
        let interior = if path.len() > 1 {
            &path[1..path.len() - 1]
        } else {
            &[][..]
        };
        if interior.iter().any(|&p| g.has_edge(p, u)) {
            continue;
        }
        let closes = path.len() >= 2 && g.has_edge(start, u);
        if closes {
            let len = path.len() + 1;
            if len >= 5 && len % 2 == 1 {
                path.push(u);
                return true;
            }
            continue;
        }
        path.push(u);
        if extend(g, path) {
            return true;
        }
        path.pop();
    }
    false
}
