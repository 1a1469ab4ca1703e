use crate::NlcError;
use graph_core::{BitMatrix, LabeledGraph};
use std::collections::VecDeque;

/// Cotree node. `Join` stands for the complete join of all children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoNode {
    Leaf { vertex: usize, label: u32 },
    Par(Vec<CoNode>),
    Join(Vec<CoNode>),
}

impl CoNode {
    pub fn size(&self) -> usize {
        match self {
            CoNode::Leaf { .. } => 1,
            CoNode::Par(c) | CoNode::Join(c) => c.iter().map(CoNode::size).sum(),
        }
    }

    pub fn children(&self) -> &[CoNode] {
        match self {
            CoNode::Leaf { .. } => &[],
            CoNode::Par(c) | CoNode::Join(c) => c,
        }
    }

    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> Vec<usize> {
        match self {
            CoNode::Leaf { vertex, .. } => vec![*vertex],
            _ => self.children().iter().flat_map(CoNode::vertices).collect(),
        }
    }

    /// Adjacency implied by the cotree: two leaves are adjacent iff their
    /// lowest common ancestor is a `Join`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect_edges(&mut out);
        for e in &mut out {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        out.sort_unstable();
        out
    }

    fn collect_edges(&self, out: &mut Vec<(usize, usize)>) {
        if let CoNode::Join(children) = self {
            let sets: Vec<_> = children.iter().map(CoNode::vertices).collect();
            for a in 0..sets.len() {
                for b in a + 1..sets.len() {
                    for &u in &sets[a] {
                        out.extend(sets[b].iter().map(|&v| (u, v)));
                    }
                }
            }
        }
        self.children().iter().for_each(|c| c.collect_edges(out));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cotree {
    pub root: CoNode,
}

impl Cotree {
    pub fn n(&self) -> usize {
        self.root.size()
    }
}

/// Canonical cotree of `g`, or `NotACograph`. Children are ordered by the
/// smallest vertex id they contain.
pub fn build_cotree(g: &LabeledGraph) -> Result<Cotree, NlcError> {
    if g.n() == 0 {
        return Err(NlcError::NotACograph);
    }
    let m = g.adjacency_matrix();
    let all: Vec<usize> = (0..g.n()).collect();
    Ok(Cotree { root: decompose(g, &m, all)? })
}

fn decompose(g: &LabeledGraph, m: &BitMatrix, set: Vec<usize>) -> Result<CoNode, NlcError> {
    if set.len() == 1 {
        return Ok(CoNode::Leaf { vertex: set[0], label: g.label(set[0]) });
    }
    let comps = split(m, &set, true);
    if comps.len() > 1 {
        return Ok(CoNode::Par(children(g, m, comps)?));
    }
    let co = split(m, &set, false);
    if co.len() > 1 {
        return Ok(CoNode::Join(children(g, m, co)?));
    }
    Err(NlcError::NotACograph)
}

fn children(g: &LabeledGraph, m: &BitMatrix, mut parts: Vec<Vec<usize>>) -> Result<Vec<CoNode>, NlcError> {
    parts.sort_by_key(|p| p.iter().map(|&v| g.id(v)).min());
    parts.into_iter().map(|p| decompose(g, m, p)).collect()
}

/// Components of `set` in the graph (`edges = true`) or its complement.
fn split(m: &BitMatrix, set: &[usize], edges: bool) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = set.to_vec();
    let mut out = Vec::new();
    while let Some(s) = rest.pop() {
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let (reached, left): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&v| m.get(u, v) == edges);
            rest = left;
            comp.extend(&reached);
            queue.extend(reached);
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
