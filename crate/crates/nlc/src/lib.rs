//! NLC decomposition trees.
//!
//! A tree is built from three node kinds: `New` creates a colored vertex,
//! `Join` takes the disjoint union of its two children, adds every edge from
//! a left vertex colored `i` to a right vertex colored `j` for `(i, j)` in
//! `s`, then recolors everything through `r`. `Par` is a plain disjoint
//! union. Colors are `1..=k`.
//!
//! [`NlcTree`] is the binary grammar; [`NlcPlusTree`] allows `Par` nodes of
//! any arity and is expected to satisfy [`validate_nlc_plus`].

mod balance;
mod cotree;
mod plus;
mod realize;

pub use balance::balance_cotree;
pub use cotree::{build_cotree, CoNode, Cotree};
pub use plus::{to_nlc_plus, validate_nlc_plus, Violation};
pub use realize::Realized;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Color = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NlcError {
    #[error("color {color} outside 1..={k}")]
    ColorOutOfRange { color: Color, k: Color },
    #[error("recoloring has {got} entries, expected {k}")]
    RecolorLength { got: usize, k: Color },
    #[error("vertex reference {vertex} invalid for {n} leaves")]
    VertexRef { vertex: usize, n: usize },
    #[error("vertex {0} appears at two leaves")]
    DuplicateVertex(usize),
    #[error("{op} node with {got} children")]
    Arity { op: &'static str, got: usize },
    #[error("tree realizes a disconnected graph")]
    Disconnected,
    #[error("graph is not a cograph")]
    NotACograph,
    #[error("malformed tree file: {0}")]
    Format(String),
}

/// Ordered color pairs of a join, kept sorted and duplicate free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<(Color, Color)>", into = "Vec<(Color, Color)>")]
pub struct JoinSet(Vec<(Color, Color)>);

impl From<Vec<(Color, Color)>> for JoinSet {
    fn from(mut v: Vec<(Color, Color)>) -> Self {
        v.sort_unstable();
        v.dedup();
        JoinSet(v)
    }
}

impl From<JoinSet> for Vec<(Color, Color)> {
    fn from(s: JoinSet) -> Self {
        s.0
    }
}

impl JoinSet {
    pub fn empty() -> Self {
        JoinSet(Vec::new())
    }

    /// Every pair over `1..=k`.
    pub fn full(k: Color) -> Self {
        JoinSet((1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).collect())
    }

    pub fn contains(&self, i: Color, j: Color) -> bool {
        self.0.binary_search(&(i, j)).is_ok()
    }

    pub fn pairs(&self) -> &[(Color, Color)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_color(&self) -> Color {
        self.0.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0)
    }
}

/// A total map on `1..=k`; entry `c - 1` holds the image of color `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Recolor(Vec<Color>);

impl Recolor {
    pub fn identity(k: Color) -> Self {
        Recolor((1..=k).collect())
    }

    /// Sends every color to `c`.
    pub fn constant(k: Color, c: Color) -> Self {
        Recolor(vec![c; k as usize])
    }

    pub fn from_images(images: Vec<Color>) -> Self {
        Recolor(images)
    }

    pub fn images(&self) -> &[Color] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Image of `c`; colors outside the domain map to themselves.
    pub fn apply(&self, c: Color) -> Color {
        self.0.get(c as usize - 1).copied().unwrap_or(c)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &c)| c as usize == i + 1)
    }

    /// `self` applied after `inner`.
    pub fn after(&self, inner: &Recolor) -> Recolor {
        Recolor(inner.0.iter().map(|&c| self.apply(c)).collect())
    }

    /// All `p` with `R(p) = q`.
    pub fn preimage(&self, q: Color) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().enumerate().filter(move |&(_, &c)| c == q).map(|(i, _)| i as Color + 1)
    }
}

/// What a tree node does, without its children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    New {
        color: Color,
    },
    Join {
        #[serde(rename = "S")]
        s: JoinSet,
        #[serde(rename = "R")]
        r: Recolor,
    },
    Par,
}

impl Op {
    pub fn is_join(&self) -> bool {
        matches!(self, Op::Join { .. })
    }

    pub fn is_par(&self) -> bool {
        matches!(self, Op::Par)
    }

    pub fn is_new(&self) -> bool {
        matches!(self, Op::New { .. })
    }

    /// The recoloring performed at this node, if any.
    pub fn recolor(&self) -> Option<&Recolor> {
        match self {
            Op::Join { r, .. } => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Node {
    New {
        color: Color,
        vertex: usize,
        #[serde(default)]
        label: u32,
    },
    Join {
        #[serde(rename = "S")]
        s: JoinSet,
        #[serde(rename = "R")]
        r: Recolor,
        children: Box<[Node; 2]>,
    },
    Par {
        children: Vec<Node>,
    },
}

impl Node {
    pub fn leaf(color: Color, vertex: usize) -> Node {
        Node::New { color, vertex, label: 0 }
    }

    pub fn join(s: JoinSet, r: Recolor, left: Node, right: Node) -> Node {
        Node::Join { s, r, children: Box::new([left, right]) }
    }

    pub fn par(children: Vec<Node>) -> Node {
        Node::Par { children }
    }

    pub fn op(&self) -> Op {
        match self {
            Node::New { color, .. } => Op::New { color: *color },
            Node::Join { s, r, .. } => Op::Join { s: s.clone(), r: r.clone() },
            Node::Par { .. } => Op::Par,
        }
    }

    pub fn children(&self) -> &[Node] {
        match self {
            Node::New { .. } => &[],
            Node::Join { children, .. } => &children[..],
            Node::Par { children } => children,
        }
    }

    /// Vertex references of the leaves, left to right.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |v, _, _| out.push(v));
        out
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::New { .. } => 1,
            _ => self.children().iter().map(Node::leaf_count).sum(),
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub(crate) fn walk_leaves(&self, f: &mut impl FnMut(usize, Color, u32)) {
        match self {
            Node::New { color, vertex, label } => f(*vertex, *color, *label),
            _ => self.children().iter().for_each(|c| c.walk_leaves(f)),
        }
    }

    fn check(&self, k: Color, binary_par: bool) -> Result<(), NlcError> {
        let in_range = |c: Color| if (1..=k).contains(&c) { Ok(()) } else { Err(NlcError::ColorOutOfRange { color: c, k }) };
        match self {
            Node::New { color, .. } => in_range(*color)?,
            Node::Join { s, r, .. } => {
                for &(i, j) in s.pairs() {
                    in_range(i)?;
                    in_range(j)?;
                }
                if r.k() != k as usize {
                    return Err(NlcError::RecolorLength { got: r.k(), k });
                }
                r.images().iter().try_for_each(|&c| in_range(c))?;
            }
            Node::Par { children } => {
                let ok = if binary_par { children.len() == 2 } else { children.len() >= 2 };
                if !ok {
                    return Err(NlcError::Arity { op: "par", got: children.len() });
                }
            }
        }
        self.children().iter().try_for_each(|c| c.check(k, binary_par))
    }
}

fn check_vertex_refs(root: &Node) -> Result<(), NlcError> {
    let vs = root.vertices();
    let n = vs.len();
    let mut seen = vec![false; n];
    for v in vs {
        if v >= n {
            return Err(NlcError::VertexRef { vertex: v, n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(NlcError::DuplicateVertex(v));
        }
    }
    Ok(())
}

/// Binary NLC decomposition tree (`Par` nodes have exactly two children).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlcTree {
    pub k: Color,
    pub root: Node,
}

impl NlcTree {
    pub fn new(k: Color, root: Node) -> Result<Self, NlcError> {
        root.check(k, true)?;
        check_vertex_refs(&root)?;
        Ok(NlcTree { k, root })
    }

    pub fn realize(&self) -> Realized {
        realize::realize(&self.root)
    }

    pub fn width(&self) -> Color {
        realize::width(&self.root)
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn n(&self) -> usize {
        self.root.leaf_count()
    }
}

/// NLC+ decomposition tree. Construction only checks colors, arities of
/// `Par` (at least two) and leaf references; see [`validate_nlc_plus`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlcPlusTree {
    pub k: Color,
    pub root: Node,
}

impl NlcPlusTree {
    pub fn new(k: Color, root: Node) -> Result<Self, NlcError> {
        root.check(k, false)?;
        check_vertex_refs(&root)?;
        Ok(NlcPlusTree { k, root })
    }

    pub fn realize(&self) -> Realized {
        realize::realize(&self.root)
    }

    pub fn width(&self) -> Color {
        realize::width(&self.root)
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn n(&self) -> usize {
        self.root.leaf_count()
    }

    /// Same tree declared over `1..=k` for a smaller `k`, provided every
    /// color and recoloring stays inside that range.
    pub fn narrowed(&self, k: Color) -> Result<Self, NlcError> {
        fn go(node: &Node, k: Color) -> Result<Node, NlcError> {
            Ok(match node {
                Node::New { .. } => node.clone(),
                Node::Join { s, r, children } => {
                    let r = Recolor(r.images()[..(k as usize).min(r.k())].to_vec());
                    Node::join(s.clone(), r, go(&children[0], k)?, go(&children[1], k)?)
                }
                Node::Par { children } => Node::par(children.iter().map(|c| go(c, k)).collect::<Result<_, _>>()?),
            })
        }
        NlcPlusTree::new(k, go(&self.root, k)?)
    }
}

/// Parses `{"k": .., "root": ..}` in the binary or the NLC+ flavour.
pub fn plus_tree_from_json(s: &str) -> Result<NlcPlusTree, NlcError> {
    let t: NlcPlusTree = serde_json::from_str(s).map_err(|e| NlcError::Format(e.to_string()))?;
    NlcPlusTree::new(t.k, t.root)
}

pub fn tree_from_json(s: &str) -> Result<NlcTree, NlcError> {
    let t: NlcTree = serde_json::from_str(s).map_err(|e| NlcError::Format(e.to_string()))?;
    NlcTree::new(t.k, t.root)
}
