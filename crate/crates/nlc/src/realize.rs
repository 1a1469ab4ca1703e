use crate::{Color, Node};
use graph_core::LabeledGraph;

/// The colored graph a tree builds. Vertices are the leaves' references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realized {
    pub adj: Vec<Vec<usize>>,
    pub colors: Vec<Color>,
    pub labels: Vec<u32>,
}

impl Realized {
    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edge-set equality with `g` under the identity on vertex references.
    pub fn same_edges(&self, g: &LabeledGraph) -> bool {
        self.n() == g.n() && (0..g.n()).all(|v| self.adj[v] == g.neighbors(v))
    }

    pub fn is_connected(&self) -> bool {
        self.to_graph().map(|g| graph_core::is_connected(&g)).unwrap_or(false)
    }

    /// Labeled graph with ids `1..=n` and the leaves' labels.
    pub fn to_graph(&self) -> Result<LabeledGraph, graph_core::GraphError> {
        LabeledGraph::new((1..=self.n() as u64).collect(), self.labels.clone(), &self.edges())
    }
}

struct Builder {
    adj: Vec<Vec<usize>>,
    colors: Vec<Color>,
    labels: Vec<u32>,
    max_color: Color,
}

impl Builder {
    /// Builds the subtree, returning its vertices. Colors in `self.colors`
    /// are current as of this node.
    fn go(&mut self, node: &Node) -> Vec<usize> {
        match node {
            Node::New { color, vertex, label } => {
                self.colors[*vertex] = *color;
                self.labels[*vertex] = *label;
                self.max_color = self.max_color.max(*color);
                vec![*vertex]
            }
            Node::Join { s, r, children } => {
                let left = self.go(&children[0]);
                let right = self.go(&children[1]);
                for &u in &left {
                    for &v in &right {
                        if s.contains(self.colors[u], self.colors[v]) {
                            self.adj[u].push(v);
                            self.adj[v].push(u);
                        }
                    }
                }
                let mut all = left;
                all.extend(right);
                for &v in &all {
                    self.colors[v] = r.apply(self.colors[v]);
                    self.max_color = self.max_color.max(self.colors[v]);
                }
                all
            }
            Node::Par { children } => children.iter().flat_map(|c| self.go(c)).collect(),
        }
    }
}

fn build(root: &Node) -> Builder {
    let n = root.leaf_count();
    let mut b = Builder { adj: vec![Vec::new(); n], colors: vec![0; n], labels: vec![0; n], max_color: 0 };
    b.go(root);
    for row in &mut b.adj {
        row.sort_unstable();
    }
    b
}

pub(crate) fn realize(root: &Node) -> Realized {
    let b = build(root);
    Realized { adj: b.adj, colors: b.colors, labels: b.labels }
}

/// Largest color any vertex carries at any node.
pub(crate) fn width(root: &Node) -> Color {
    build(root).max_color
}

#[cfg(test)]
mod tests {
    use crate::{JoinSet, NlcTree, Node, Recolor};

    fn one() -> JoinSet {
        JoinSet::from(vec![(1, 1)])
    }

    #[test]
    fn single_vertex() {
        let r = NlcTree::new(1, Node::leaf(1, 0)).unwrap().realize();
        assert_eq!(r.colors, vec![1]);
        assert!(r.edges().is_empty());
    }

    #[test]
    fn one_color_builds_a_clique() {
        let r = crate::tests::k3_tree().realize();
        assert_eq!(r.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(r.colors, vec![1, 1, 1]);
    }

    #[test]
    fn joined_pairs_give_a_four_cycle() {
        let ab = Node::par(vec![Node::leaf(1, 0), Node::leaf(1, 1)]);
        let cd = Node::par(vec![Node::leaf(1, 2), Node::leaf(1, 3)]);
        let t = NlcTree::new(1, Node::join(one(), Recolor::identity(1), ab, cd)).unwrap();
        let r = t.realize();
        assert_eq!(r.edges(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(r.adj.iter().all(|row| row.len() == 2));
    }

    #[test]
    fn joins_are_one_sided_and_recolor_afterwards() {
        // left: a(1) b(2); right: c(1). S = {(2,1)} links only b-c.
        let left = Node::par(vec![Node::leaf(1, 0), Node::leaf(2, 1)]);
        let t = Node::join(JoinSet::from(vec![(2, 1)]), Recolor::from_images(vec![2, 2]), left, Node::leaf(1, 2));
        let r = NlcTree::new(2, t).unwrap().realize();
        assert_eq!(r.edges(), vec![(1, 2)]);
        assert_eq!(r.colors, vec![2, 2, 2]);
    }

    #[test]
    fn five_vertex_example_depth() {
        // links(c) = (1,0) and links(d) = (1,1,0) below the root
        let s = JoinSet::from(vec![(1, 2), (2, 1)]);
        let id = Recolor::identity(2);
        let ab = Node::par(vec![Node::leaf(1, 0), Node::leaf(2, 1)]);
        let de = Node::join(s.clone(), Recolor::from_images(vec![1, 1]), Node::leaf(1, 3), Node::leaf(2, 4));
        let right = Node::join(JoinSet::from(vec![(1, 1)]), id.clone(), Node::leaf(1, 2), de);
        let t = NlcTree::new(2, Node::join(s, id, ab, right)).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(t.width(), 2);
        assert_eq!(t.realize().edges(), vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    }
}
