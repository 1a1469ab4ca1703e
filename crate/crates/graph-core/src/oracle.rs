//! Exhaustive reference answers. Deliberately naive; everything else in the
//! workspace is tested against these.

use crate::LabeledGraph;
use thiserror::Error;

pub const NON3COL_LIMIT: usize = 16;
pub const MAX_IS_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to n <= {limit}, got {n}")]
    SizeExceeded { n: usize, limit: usize },
}

/// True iff some four vertices induce a path. Checks every 4-subset.
pub fn has_induced_p4(g: &LabeledGraph) -> bool {
    let n = g.n();
    let m = g.adjacency_matrix();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let mut deg = [0u8; 4];
                    let mut edges = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if m.get(q[i], q[j]) {
                                deg[i] += 1;
                                deg[j] += 1;
                                edges += 1;
                            }
                        }
                    }
                    if edges == 3 {
                        deg.sort_unstable();
                        if deg == [1, 1, 2, 2] {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// True iff no map `V -> {1,2,3}` is a proper coloring. Depth-first over
/// all colorings, abandoning a prefix as soon as it has a monochromatic edge.
pub fn non_3_colorable(g: &LabeledGraph) -> Result<bool, OracleError> {
    let n = g.n();
    if n > NON3COL_LIMIT {
        return Err(OracleError::SizeExceeded { n, limit: NON3COL_LIMIT });
    }
    fn extend(g: &LabeledGraph, v: usize, col: &mut Vec<u8>) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 0..3 {
            if g.neighbors(v).iter().all(|&w| w > v || col[w] != c) {
                col.push(c);
                if extend(g, v + 1, col) {
                    return true;
                }
                col.pop();
            }
        }
        false
    }
    Ok(!extend(g, 0, &mut Vec::with_capacity(n)))
}

/// Maximum total weight of an independent set (the empty set counts, so the
/// answer is never negative).
pub fn max_weight_is(g: &LabeledGraph) -> Result<i64, OracleError> {
    Ok(max_weight_is_witness(g)?.0)
}

/// Like [`max_weight_is`], also returning a maximizing set in membership
/// form. Among optimal sets the lexicographically first by inclusion order
/// of vertex 0, 1, ... is returned.
pub fn max_weight_is_witness(g: &LabeledGraph) -> Result<(i64, Vec<bool>), OracleError> {
    let n = g.n();
    if n > MAX_IS_LIMIT {
        return Err(OracleError::SizeExceeded { n, limit: MAX_IS_LIMIT });
    }
    let mut best = (0i64, vec![false; n]);
    let mut cur = vec![false; n];
    fn go(g: &LabeledGraph, v: usize, acc: i64, cur: &mut Vec<bool>, best: &mut (i64, Vec<bool>)) {
        if v == g.n() {
            if acc > best.0 {
                *best = (acc, cur.clone());
            }
            return;
        }
        if g.neighbors(v).iter().all(|&w| w > v || !cur[w]) {
            cur[v] = true;
            go(g, v + 1, acc + g.weight(v), cur, best);
            cur[v] = false;
        }
        go(g, v + 1, acc, cur, best);
    }
    go(g, 0, 0, &mut cur, &mut best);
    Ok(best)
}

pub fn is_independent(g: &LabeledGraph, set: &[bool]) -> bool {
    g.edges().iter().all(|&(u, v)| !(set[u] && set[v]))
}

pub fn set_weight(g: &LabeledGraph, set: &[bool]) -> i64 {
    (0..g.n()).filter(|&v| set[v]).map(|v| g.weight(v)).sum()
}
