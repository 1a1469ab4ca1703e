//! Logarithmic-depth NLC trees for cographs.
//!
//! The cotree is cut into heavy paths. A node on a heavy path, together with
//! its light children, is a *context*: a graph with a hole where the heavy
//! child goes. Every context vertex is adjacent to all of the hole
//! (color 1, "marked") or to none of it (color 2). Two contexts compose with
//! one join, and a context is plugged with one join, so a heavy path becomes
//! a weight-balanced binary tree of such joins. Light children are merged
//! with weight-balanced trees as well. Joins are one-sided, so the graph
//! being plugged in can reuse color 1 without clashing with the marks.

use crate::{CoNode, Color, Cotree, JoinSet, NlcTree, Node, Recolor};

const K: Color = 4;
const MARKED: Color = 1;
const UNMARKED: Color = 2;

pub fn balance_cotree(ct: &Cotree) -> NlcTree {
    NlcTree::new(K, graph_expr(&ct.root, MARKED)).expect("balanced tree is well formed")
}

/// Expression for the subgraph under `node` with every vertex colored `out`.
fn graph_expr(node: &CoNode, out: Color) -> Node {
    if let CoNode::Leaf { vertex, label } = node {
        return Node::New { color: out, vertex: *vertex, label: *label };
    }
    let mut spine = Vec::new();
    let mut cur = node;
    while !matches!(cur, CoNode::Leaf { .. }) {
        let heavy = (0..cur.children().len()).max_by_key(|&i| (cur.children()[i].size(), std::cmp::Reverse(i))).unwrap();
        let lights: Vec<&CoNode> = cur.children().iter().enumerate().filter(|&(i, _)| i != heavy).map(|(_, c)| c).collect();
        spine.push((matches!(cur, CoNode::Join(_)), lights));
        cur = &cur.children()[heavy];
    }
    let mut weights: Vec<usize> = spine.iter().map(|(_, l)| l.iter().map(|c| c.size()).sum()).collect();
    weights.push(1);
    let p = Path { spine: &spine, bottom: cur, prefix: prefix_sums(&weights) };
    p.graph_range(0, spine.len(), out)
}

struct Path<'a> {
    spine: &'a [(bool, Vec<&'a CoNode>)],
    bottom: &'a CoNode,
    prefix: Vec<usize>,
}

impl Path<'_> {
    /// Items `a..=b` where `b` is the bottom leaf.
    fn graph_range(&self, a: usize, b: usize, out: Color) -> Node {
        if a == b {
            return graph_expr(self.bottom, out);
        }
        let m = split_point(&self.prefix, a, b);
        let ctx = self.context_range(a, m);
        let rest = self.graph_range(m + 1, b, MARKED);
        Node::join(JoinSet::from(vec![(MARKED, MARKED)]), Recolor::constant(K, out), ctx, rest)
    }

    /// Items `a..=b`, all strictly above the bottom leaf.
    fn context_range(&self, a: usize, b: usize) -> Node {
        if a == b {
            return self.base_context(a);
        }
        let m = split_point(&self.prefix, a, b);
        let outer = self.context_range(a, m);
        let inner = self.context_range(m + 1, b);
        Node::join(JoinSet::from(vec![(MARKED, MARKED), (MARKED, UNMARKED)]), Recolor::identity(K), outer, inner)
    }

    fn base_context(&self, s: usize) -> Node {
        let (is_join, lights) = &self.spine[s];
        let color = if *is_join { MARKED } else { UNMARKED };
        merge(lights, color, *is_join)
    }
}

/// Full join (or disjoint union) of `items`, balanced by size.
fn merge(items: &[&CoNode], color: Color, join: bool) -> Node {
    if items.len() == 1 {
        return graph_expr(items[0], color);
    }
    let weights: Vec<usize> = items.iter().map(|c| c.size()).collect();
    let prefix = prefix_sums(&weights);
    let m = split_point(&prefix, 0, items.len() - 1);
    let left = merge(&items[..=m], color, join);
    let right = merge(&items[m + 1..], color, join);
    if join {
        Node::join(JoinSet::from(vec![(color, color)]), Recolor::identity(K), left, right)
    } else {
        Node::par(vec![left, right])
    }
}

fn prefix_sums(w: &[usize]) -> Vec<usize> {
    let mut p = vec![0];
    for &x in w {
        p.push(p.last().unwrap() + x);
    }
    p
}

/// `m` in `a..b` minimizing the heavier of `a..=m` and `m+1..=b`.
fn split_point(prefix: &[usize], a: usize, b: usize) -> usize {
    (a..b)
        .min_by_key(|&m| {
            let left = prefix[m + 1] - prefix[a];
            let right = prefix[b + 1] - prefix[m + 1];
            left.max(right)
        })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_cotree;
    use graph_core::LabeledGraph;

    fn leaf(v: usize) -> CoNode {
        CoNode::Leaf { vertex: v, label: 0 }
    }

    fn check(ct: &Cotree) -> NlcTree {
        let t = balance_cotree(ct);
        assert_eq!(t.realize().edges(), ct.root.edges());
        assert!(t.width() <= 4);
        t
    }

    #[test]
    fn single_leaf() {
        let t = check(&Cotree { root: leaf(0) });
        assert_eq!(t.depth(), 0);
        assert_eq!(t.root, Node::leaf(1, 0));
    }

    #[test]
    fn star() {
        let ct = Cotree { root: CoNode::Join(vec![leaf(0), CoNode::Par((1..8).map(leaf).collect())]) };
        let t = check(&ct);
        assert!(t.depth() <= 5, "depth {}", t.depth());
    }

    #[test]
    fn threshold_chain_becomes_shallow() {
        // v0 .. v63 added alternately as isolated and dominating vertices
        let mut root = leaf(0);
        for v in 1..64 {
            root = if v % 2 == 1 { CoNode::Join(vec![root, leaf(v)]) } else { CoNode::Par(vec![root, leaf(v)]) };
        }
        let ct = Cotree { root };
        assert_eq!(ct.root.depth(), 63);
        let t = check(&ct);
        assert!(t.depth() <= 14, "depth {}", t.depth());
        let g = LabeledGraph::unlabeled(64, &ct.root.edges()).unwrap();
        assert!(graph_core::is_connected(&g));
        assert_eq!(build_cotree(&g).unwrap().root.edges(), ct.root.edges());
    }

    #[test]
    fn split_point_balances() {
        let p = prefix_sums(&[5, 1, 1, 1, 5]);
        assert_eq!(split_point(&p, 0, 4), 1);
        assert_eq!(split_point(&p, 0, 1), 0);
    }
}
