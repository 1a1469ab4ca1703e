use crate::{Color, JoinSet, NlcError, NlcPlusTree, NlcTree, Node, Recolor};
use std::fmt;

/// A violated NLC+ condition, numbered 1..=5:
/// 1 leaves are `New` with a color in range, 2 internal nodes are `Join` or
/// `Par`, 3 joins are binary with `S` and `R` over `1..=k`, 4 `Par` nodes
/// have two or more children and a `Join` parent unless they are the root,
/// 5 every `Join` subtree realizes a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: u8,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: {}", self.condition, self.detail)
    }
}

impl std::error::Error for Violation {}

/// A connected piece of a subtree's graph, with the colors it shows.
struct Piece {
    node: Node,
    verts: Vec<usize>,
}

struct Splitter {
    col: Vec<Color>,
}

impl Splitter {
    fn mask(&self, verts: &[usize]) -> u128 {
        verts.iter().fold(0, |m, &v| m | 1u128 << (self.col[v] % 128))
    }

    fn recolor(&mut self, p: Piece, r: &Recolor) -> Piece {
        for &v in &p.verts {
            self.col[v] = r.apply(self.col[v]);
        }
        if r.is_identity() {
            return p;
        }
        let node = match p.node {
            Node::New { color, vertex, label } => Node::New { color: r.apply(color), vertex, label },
            Node::Join { s, r: inner, children } => Node::Join { s, r: r.after(&inner), children },
            Node::Par { .. } => unreachable!("pieces are connected"),
        };
        Piece { node, verts: p.verts }
    }

    /// Connected pieces of `node`'s graph, NLC+-shaped, in a deterministic order.
    fn pieces(&mut self, node: &Node) -> Vec<Piece> {
        match node {
            Node::New { color, vertex, .. } => {
                self.col[*vertex] = *color;
                vec![Piece { node: node.clone(), verts: vec![*vertex] }]
            }
            Node::Par { children } => children.iter().flat_map(|c| self.pieces(c)).collect(),
            Node::Join { s, r, children } => {
                let left = self.pieces(&children[0]);
                let right = self.pieces(&children[1]);
                let groups = self.group(s, &left, &right);
                let mut slots: Vec<Option<Piece>> = left.into_iter().chain(right).map(Some).collect();
                let nl = groups.0;
                let mut out = Vec::new();
                for members in groups.1 {
                    let (ls, rs): (Vec<usize>, Vec<usize>) = members.into_iter().partition(|&i| i < nl);
                    let mut take = |ids: Vec<usize>| -> Vec<Piece> { ids.into_iter().map(|i| slots[i].take().unwrap()).collect() };
                    let (lp, rp) = (take(ls), take(rs));
                    if lp.is_empty() || rp.is_empty() {
                        let single = lp.into_iter().chain(rp).next().unwrap();
                        out.push(self.recolor(single, r));
                        continue;
                    }
                    let mut verts = Vec::new();
                    let mut side = |ps: Vec<Piece>| -> Node {
                        let mut nodes: Vec<Node> = Vec::new();
                        for p in ps {
                            verts.extend(p.verts);
                            nodes.push(p.node);
                        }
                        if nodes.len() == 1 {
                            nodes.pop().unwrap()
                        } else {
                            Node::par(nodes)
                        }
                    };
                    let (ln, rn) = (side(lp), side(rp));
                    for &v in &verts {
                        self.col[v] = r.apply(self.col[v]);
                    }
                    out.push(Piece { node: Node::join(s.clone(), r.clone(), ln, rn), verts });
                }
                out
            }
        }
    }

    /// Groups of piece indices (left pieces first) connected by `s`.
    fn group(&self, s: &JoinSet, left: &[Piece], right: &[Piece]) -> (usize, Vec<Vec<usize>>) {
        let nl = left.len();
        let total = nl + right.len();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let lm: Vec<u128> = left.iter().map(|p| self.mask(&p.verts)).collect();
        let rm: Vec<u128> = right.iter().map(|p| self.mask(&p.verts)).collect();
        for (a, &ma) in lm.iter().enumerate() {
            for (b, &mb) in rm.iter().enumerate() {
                let linked = s.pairs().iter().any(|&(i, j)| ma >> (i % 128) & 1 == 1 && mb >> (j % 128) & 1 == 1);
                if linked {
                    let (x, y) = (find(&mut parent, a), find(&mut parent, nl + b));
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; total];
        for i in 0..total {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(i);
        }
        (nl, groups)
    }
}

/// Converts a tree realizing a connected graph into an NLC+ tree with the
/// same graph, the same final colors, the same width and at most twice the
/// depth. Disconnected children of a join are split into their components,
/// which are gathered under `Par` nodes; a recoloring on a disconnected
/// node is pushed down into its components.
pub fn to_nlc_plus(t: &NlcTree) -> Result<NlcPlusTree, NlcError> {
    plus_from_node(t.k, &t.root)
}

pub(crate) fn plus_from_node(k: Color, root: &Node) -> Result<NlcPlusTree, NlcError> {
    let mut sp = Splitter { col: vec![0; root.leaf_count()] };
    let mut pieces = sp.pieces(root);
    if pieces.len() != 1 {
        return Err(NlcError::Disconnected);
    }
    NlcPlusTree::new(k, pieces.pop().unwrap().node)
}

impl NlcPlusTree {
    /// Re-normalizes an arbitrary NLC+ tree into canonical NLC+ form.
    pub fn normalized(&self) -> Result<NlcPlusTree, NlcError> {
        plus_from_node(self.k, &self.root)
    }
}

pub fn validate_nlc_plus(t: &NlcPlusTree) -> Result<(), Violation> {
    let k = t.k;
    let v = |condition: u8, detail: String| Err(Violation { condition, detail });
    fn shape(node: &Node, k: Color, parent_is_join: Option<bool>) -> Result<(), Violation> {
        let v = |condition: u8, detail: String| Err(Violation { condition, detail });
        match node {
            Node::New { color, vertex, .. } => {
                if !(1..=k).contains(color) {
                    return v(1, format!("leaf {vertex} has color {color}"));
                }
            }
            Node::Join { s, r, .. } => {
                if s.pairs().iter().any(|&(i, j)| !(1..=k).contains(&i) || !(1..=k).contains(&j)) || s.max_color() > k {
                    return v(3, "join pair outside 1..=k".into());
                }
                if r.k() != k as usize || r.images().iter().any(|c| !(1..=k).contains(c)) {
                    return v(3, "recoloring is not a map on 1..=k".into());
                }
            }
            Node::Par { children } => {
                if children.len() < 2 {
                    return v(4, format!("par node with {} children", children.len()));
                }
                if parent_is_join == Some(false) {
                    return v(4, "par node below a par node".into());
                }
            }
        }
        let here = node.op().is_join();
        node.children().iter().try_for_each(|c| shape(c, k, Some(here)))
    }
    shape(&t.root, k, None)?;
    let mut sp = Splitter { col: vec![0; t.n()] };
    if !join_subtrees_connected(&mut sp, &t.root) {
        return v(5, "a join subtree is disconnected".into());
    }
    Ok(())
}

fn join_subtrees_connected(sp: &mut Splitter, node: &Node) -> bool {
    fn go(sp: &mut Splitter, node: &Node, ok: &mut bool) -> Vec<Vec<usize>> {
        match node {
            Node::New { color, vertex, .. } => {
                sp.col[*vertex] = *color;
                vec![vec![*vertex]]
            }
            Node::Par { children } => children.iter().flat_map(|c| go(sp, c, ok)).collect(),
            Node::Join { s, r, children } => {
                let l = go(sp, &children[0], ok);
                let rr = go(sp, &children[1], ok);
                let lp: Vec<Piece> = l.into_iter().map(|verts| Piece { node: Node::par(vec![]), verts }).collect();
                let rp: Vec<Piece> = rr.into_iter().map(|verts| Piece { node: Node::par(vec![]), verts }).collect();
                let (_, groups) = sp.group(s, &lp, &rp);
                let all: Vec<usize> = lp.into_iter().chain(rp).flat_map(|p| p.verts).collect();
                for &v in &all {
                    sp.col[v] = r.apply(sp.col[v]);
                }
                if groups.len() != 1 {
                    *ok = false;
                }
                vec![all]
            }
        }
    }
    let mut ok = true;
    go(sp, node, &mut ok);
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> JoinSet {
        JoinSet::from(vec![(1, 1)])
    }

    #[test]
    fn valid_tree_is_unchanged() {
        let t = crate::tests::k3_tree();
        let p = to_nlc_plus(&t).unwrap();
        assert_eq!(p.root, t.root);
        assert_eq!(validate_nlc_plus(&p), Ok(()));
    }

    #[test]
    fn nested_parallels_flatten_under_the_join() {
        let ab = Node::par(vec![Node::leaf(1, 0), Node::leaf(1, 1)]);
        let cd = Node::par(vec![Node::leaf(1, 2), Node::leaf(1, 3)]);
        let t = NlcTree::new(1, Node::join(one(), Recolor::identity(1), Node::par(vec![ab, cd]), Node::leaf(1, 4))).unwrap();
        let p = to_nlc_plus(&t).unwrap();
        match &p.root {
            Node::Join { children, .. } => match &children[0] {
                Node::Par { children } => assert_eq!(children.len(), 4),
                other => panic!("expected par, got {other:?}"),
            },
            other => panic!("expected join, got {other:?}"),
        }
        assert_eq!(p.realize(), t.realize());
        assert_eq!(validate_nlc_plus(&p), Ok(()));
        assert!(p.depth() <= 2 * t.depth());
    }

    #[test]
    fn recoloring_on_a_disconnected_node_is_pushed_down() {
        // (a ⋈_∅ b) recolored 1->2, then joined on color 2 with c
        let inner = Node::join(JoinSet::empty(), Recolor::from_images(vec![2, 2]), Node::leaf(1, 0), Node::leaf(1, 1));
        let t = NlcTree::new(2, Node::join(JoinSet::from(vec![(2, 1)]), Recolor::identity(2), inner, Node::leaf(1, 2))).unwrap();
        let p = to_nlc_plus(&t).unwrap();
        assert_eq!(p.realize(), t.realize());
        assert_eq!(validate_nlc_plus(&p), Ok(()));
    }

    #[test]
    fn disconnected_input_is_refused() {
        let t = NlcTree::new(1, Node::par(vec![Node::leaf(1, 0), Node::leaf(1, 1)])).unwrap();
        assert_eq!(to_nlc_plus(&t), Err(NlcError::Disconnected));
    }

    #[test]
    fn violations() {
        let nested = Node::join(
            one(),
            Recolor::identity(1),
            Node::par(vec![Node::leaf(1, 0), Node::par(vec![Node::leaf(1, 1), Node::leaf(1, 2)])]),
            Node::leaf(1, 3),
        );
        let t = NlcPlusTree::new(1, nested).unwrap();
        assert_eq!(validate_nlc_plus(&t).unwrap_err().condition, 4);
        let empty_join = Node::join(JoinSet::empty(), Recolor::identity(1), Node::leaf(1, 0), Node::leaf(1, 1));
        let t = NlcPlusTree::new(1, empty_join).unwrap();
        assert_eq!(validate_nlc_plus(&t).unwrap_err().condition, 5);
    }
}
