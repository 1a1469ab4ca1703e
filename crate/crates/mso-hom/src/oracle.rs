//! Brute-force classes computed straight from a colored graph.

use crate::{Ext, HomClass, MaxIs, MaxW, OptAlgebra};
use nlc::{Color, Realized};

pub const BRUTE_NON3COL_LIMIT: usize = 10;
pub const BRUTE_MAXW_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{n} vertices exceeds the brute-force limit of {limit}")]
pub struct SizeExceeded {
    pub n: usize,
    pub limit: usize,
}

/// Occupancy triples of every partition into three independent sets.
pub fn brute_force_class_non3col(g: &Realized, k: Color) -> Result<HomClass, SizeExceeded> {
    let n = g.n();
    if n > BRUTE_NON3COL_LIMIT {
        return Err(SizeExceeded { n, limit: BRUTE_NON3COL_LIMIT });
    }
    let mut part = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        if g.edges().iter().all(|&(u, v)| part[u] != part[v]) {
            let mut t = 0u32;
            for v in 0..n {
                t |= 1 << (part[v] as u32 * k as u32 + g.colors[v] as u32 - 1);
            }
            out.push(t);
        }
        // next assignment in base 3
        let mut i = 0;
        while i < n && part[i] == 2 {
            part[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        part[i] += 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(HomClass::Non3Col(out))
}

/// Best weight of each independent-set class over all `2^n` selections.
pub fn brute_force_maxw_indep(g: &Realized, k: Color, weights: &[i64]) -> Result<MaxW, SizeExceeded> {
    let n = g.n();
    if n > BRUTE_MAXW_LIMIT {
        return Err(SizeExceeded { n, limit: BRUTE_MAXW_LIMIT });
    }
    let a = MaxIs::new(k);
    let edges = g.edges();
    let mut t = vec![Ext::NEG_INF; a.num_classes()];
    for x in 0u32..1 << n {
        let independent = edges.iter().all(|&(u, v)| x >> u & 1 == 0 || x >> v & 1 == 0);
        let class = if independent {
            HomClass::IndepSet(Some((0..n).filter(|&v| x >> v & 1 == 1).fold(0, |m, v| m | 1 << (g.colors[v] - 1))))
        } else {
            HomClass::IndepSet(None)
        };
        let w: i64 = (0..n).filter(|&v| x >> v & 1 == 1).map(|v| weights[v]).sum();
        let i = a.class_index(&class).unwrap();
        t[i] = t[i].max(Ext::finite(w));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlc::{JoinSet, NlcTree, Node, Recolor};

    fn k_n(n: usize) -> Realized {
        let mut root = Node::leaf(1, 0);
        for v in 1..n {
            root = Node::join(JoinSet::from(vec![(1, 1)]), Recolor::identity(1), root, Node::leaf(1, v));
        }
        NlcTree::new(1, root).unwrap().realize()
    }

    #[test]
    fn small_cliques() {
        assert_eq!(brute_force_class_non3col(&k_n(1), 1).unwrap(), HomClass::Non3Col(vec![1, 2, 4]));
        // six valid partitions of K2, three distinct occupancy triples
        assert_eq!(brute_force_class_non3col(&k_n(2), 1).unwrap(), HomClass::Non3Col(vec![3, 5, 6]));
        assert_eq!(brute_force_class_non3col(&k_n(4), 1).unwrap(), HomClass::Non3Col(vec![]));
    }

    #[test]
    fn two_vertex_table() {
        let t = brute_force_maxw_indep(&k_n(2), 1, &[1, 1]).unwrap();
        assert_eq!(t, vec![Ext::finite(0), Ext::finite(1), Ext::finite(2)]);
    }

    #[test]
    fn limits() {
        assert!(brute_force_class_non3col(&k_n(11), 1).is_err());
    }
}
