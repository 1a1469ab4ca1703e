use crate::{Annotator, Certificate, MainEntry};
use graph_core::LabeledGraph;
use nlc::{Color, NlcPlusTree, Node, Op};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("level {level}: {what}")]
    Inconsistent { level: usize, what: String },
    #[error("rebuilt tree does not realize the graph")]
    WrongGraph,
    #[error("root annotation is not accepting")]
    NotAccepting,
}

/// The tree spelled out by a certificate assignment, with the annotation
/// recomputed from scratch at its root.
#[derive(Debug, Clone)]
pub struct Audit<T> {
    pub tree: NlcPlusTree,
    pub root: T,
}

struct Built<T> {
    node: Node,
    ann: T,
    colors: Vec<(usize, Color)>,
}

fn bad<T>(level: usize, what: impl Into<String>) -> Result<T, AuditError> {
    Err(AuditError::Inconsistent { level, what: what.into() })
}

fn build<A: Annotator>(g: &LabeledGraph, certs: &[Certificate<A::Ann>], a: &A, set: &[usize], i: usize) -> Result<Built<A::Ann>, AuditError> {
    let entry = |u: usize| certs[u].main.get(i - 1);
    let Some(e) = entry(set[0]) else { return bad(i, "path too short") };
    let same = |x: &MainEntry<A::Ann>| x.op == e.op && x.ann == e.ann && x.color == e.color && x.exit == e.exit;
    if !set.iter().all(|&u| entry(u).is_some_and(same)) {
        return bad(i, "prefix disagreement");
    }
    let built = match &e.op {
        Op::New { color } => {
            let u = set[0];
            if set.len() != 1 || certs[u].d() != i {
                return bad(i, "leaf shared or not last");
            }
            let node = Node::New { color: *color, vertex: u, label: g.label(u) };
            Built { node, ann: a.vertex(*color, g.label(u), g.selected(u), g.weight(u)), colors: vec![(u, *color)] }
        }
        Op::Join { s, r } => {
            let link = |u: usize| certs[u].main.get(i).and_then(|x| x.link);
            let parts: [Vec<usize>; 2] = [0, 1].map(|j| set.iter().copied().filter(|&u| link(u) == Some(j)).collect());
            if parts[0].is_empty() || parts[1].is_empty() || parts[0].len() + parts[1].len() != set.len() {
                return bad(i, "join without two sides");
            }
            let crossing = certs[set[0]].main[i - 1].exit;
            let ok = parts[0].iter().any(|&u| g.id(u) == crossing && g.neighbors(u).iter().any(|v| parts[1].contains(v)));
            if !ok {
                return bad(i, "join exit");
            }
            let l = build(g, certs, a, &parts[0], i + 1)?;
            let rt = build(g, certs, a, &parts[1], i + 1)?;
            let ann = a.join(s, r, &l.ann, &rt.ann);
            let colors = l.colors.iter().chain(&rt.colors).map(|&(u, c)| (u, r.apply(c))).collect();
            Built { node: Node::join(s.clone(), r.clone(), l.node, rt.node), ann, colors }
        }
        Op::Par => {
            if !set.iter().any(|&u| g.id(u) == e.exit) {
                return bad(i, "parallel exit");
            }
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for &u in set {
                let Some(x) = certs[u].main.get(i) else { return bad(i, "parallel node at a leaf") };
                match groups.iter_mut().find(|grp| certs[grp[0]].main[i] == *x) {
                    Some(grp) => grp.push(u),
                    None => groups.push(vec![u]),
                }
            }
            let kids: Vec<Built<A::Ann>> = groups.iter().map(|grp| build(g, certs, a, grp, i + 1)).collect::<Result<_, _>>()?;
            let mut it = kids.into_iter();
            let first = it.next().unwrap();
            let (mut ann, mut colors, mut nodes) = (first.ann, first.colors, vec![first.node]);
            for b in it {
                ann = a.parallel(&ann, &b.ann);
                colors.extend(b.colors);
                nodes.push(b.node);
            }
            let node = if nodes.len() == 1 { nodes.pop().unwrap() } else { Node::par(nodes) };
            Built { node, ann, colors }
        }
    };
    if built.ann != e.ann {
        return bad(i, "annotation differs from recomputation");
    }
    let mut counts = vec![0u64; a.k() as usize];
    built.colors.iter().for_each(|&(_, c)| counts[c as usize - 1] += 1);
    if counts != e.color {
        return bad(i, "color counts");
    }
    Ok(built)
}

/// Rebuilds the tree from the main entries alone, recomputes every
/// annotation bottom-up and checks the result against `g`. A certificate
/// assignment that passes says nothing false about `g`.
pub fn audit_reconstruct<A: Annotator>(g: &LabeledGraph, certs: &[Certificate<A::Ann>], a: &A) -> Result<Audit<A::Ann>, AuditError> {
    let all: Vec<usize> = (0..g.n()).collect();
    if certs.len() != g.n() || all.is_empty() {
        return bad(0, "certificate count");
    }
    let b = build(g, certs, a, &all, 1)?;
    let tree = NlcPlusTree::new(a.k(), b.node).map_err(|e| AuditError::Inconsistent { level: 0, what: e.to_string() })?;
    if !tree.realize().same_edges(g) {
        return Err(AuditError::WrongGraph);
    }
    if !a.accepting(&b.ann) {
        return Err(AuditError::NotAccepting);
    }
    Ok(Audit { tree, root: b.ann })
}
