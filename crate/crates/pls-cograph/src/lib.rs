//! Logarithmic-size certificates for cographs.
//!
//! Every vertex gets the root-to-leaf trace of a balanced width-4 NLC tree
//! (its *main* message) plus its place in a depth-2 spanning tree (its
//! *auxiliary* message). Neighbors check that their traces explain the edge
//! between them; the spanning tree funnels every main message to the root,
//! which rebuilds the whole tree and checks that it realizes a cograph with
//! the claimed degrees.

mod spanning;
mod verify;

pub use spanning::{depth2_spanning_tree, SpanningTree};
pub use verify::{verify_at, verify_cograph};

use graph_core::LabeledGraph;
use nlc::{balance_cotree, build_cotree, Color, Node, Op};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Width of the balanced trees; every operation is encoded over 4 colors.
pub const WIDTH: Color = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error("graph is not a cograph")]
    NotACograph,
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MainMsg {
    pub id: u64,
    pub deg: u64,
    pub path: Vec<Op>,
    pub links: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxMsg {
    pub rho: u64,
    pub depth: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub child: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<MainMsg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub main: MainMsg,
    pub aux: AuxMsg,
}

/// Color of the vertex when node `i` (1-based) performs its join: the leaf
/// color pushed through the recolorings strictly below `i`.
pub fn currentcolor(path: &[Op], i: usize) -> Option<Color> {
    let (last, above) = path.split_last()?;
    let Op::New { color } = last else { return None };
    if i == 0 || i > path.len() {
        return None;
    }
    let mut c = *color;
    for op in above[i.min(above.len())..].iter().rev() {
        if let Some(r) = op.recolor() {
            if c as usize > r.k() {
                return None;
            }
            c = r.apply(c);
        }
    }
    Some(c)
}

/// Root-to-leaf operation trace and child sides for every leaf of `root`.
pub(crate) fn traces(root: &Node, n: usize) -> Vec<(Vec<Op>, Vec<u8>)> {
    fn go(node: &Node, path: &mut Vec<Op>, links: &mut Vec<u8>, side: u8, out: &mut [(Vec<Op>, Vec<u8>)]) {
        path.push(node.op());
        links.push(side);
        match node {
            Node::New { vertex, .. } => out[*vertex] = (path.clone(), links.clone()),
            _ => {
                for (i, c) in node.children().iter().enumerate() {
                    go(c, path, links, i.min(1) as u8, out);
                }
            }
        }
        path.pop();
        links.pop();
    }
    let mut out = vec![(Vec::new(), Vec::new()); n];
    go(root, &mut Vec::new(), &mut Vec::new(), 0, &mut out);
    out
}

pub fn prove_cograph(g: &LabeledGraph) -> Result<Vec<Certificate>, ProveError> {
    if !graph_core::is_connected(g) {
        return Err(ProveError::Disconnected);
    }
    let ct = build_cotree(g).map_err(|_| ProveError::NotACograph)?;
    let t = balance_cotree(&ct);
    let span = depth2_spanning_tree(g)?;
    let rho = g.id(span.root);
    let mut child = vec![None; g.n()];
    for v in 0..g.n() {
        if let Some(p) = span.parent[v] {
            if span.depth[v] == 2 {
                child[p] = Some(v);
            }
        }
    }
    let traces = traces(&t.root, g.n());
    let mains: Vec<MainMsg> = (0..g.n())
        .map(|v| MainMsg { id: g.id(v), deg: g.degree(v) as u64, path: traces[v].0.clone(), links: traces[v].1.clone() })
        .collect();
    Ok((0..g.n())
        .map(|v| {
            let depth = span.depth[v];
            let aux = AuxMsg {
                rho,
                depth,
                parent: if depth == 2 { span.parent[v].map(|p| g.id(p)) } else { None },
                child: child[v].map(|c| g.id(c)),
                m: child[v].map(|c| mains[c].clone()),
            };
            Certificate { main: mains[v].clone(), aux }
        })
        .collect())
}

/// Bits of one identifier when ids range over `1..=n^c`.
pub fn id_bits(n: usize, c: u32) -> usize {
    let bound = (n.max(1) as u128).pow(c);
    (u128::BITS - bound.leading_zeros()) as usize
}

/// Fixed-width encoding of one operation: a 2-bit tag, `S` as a 4×4 bit
/// matrix and `R` as four 2-bit images (a leaf stores its color there).
pub const OP_BITS: usize = 2 + 16 + 8;

pub fn main_bits(m: &MainMsg, idb: usize) -> usize {
    2 * idb + m.path.len() * (OP_BITS + 1)
}

/// Encoded size of a certificate for an `n`-vertex graph with ids up to
/// `n^c`. Optional fields cost a presence bit.
pub fn certificate_bits(cert: &Certificate, n: usize, c: u32) -> usize {
    let idb = id_bits(n, c);
    let aux = &cert.aux;
    let optional = 3 + idb * (aux.parent.is_some() as usize + aux.child.is_some() as usize);
    let m = aux.m.as_ref().map_or(0, |m| main_bits(m, idb));
    main_bits(&cert.main, idb) + idb + 2 + optional + m
}
