use crate::{Annotator, AuxEntry, Certificate, MainEntry, ServiceEntry, Snapshot};
use graph_core::LabeledGraph;
use nlc::{validate_nlc_plus, Color, NlcPlusTree, Node, Op, Recolor, Violation};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveError {
    #[error("tree does not realize the graph")]
    Mismatch,
    #[error("not an NLC+ tree: {0}")]
    Invalid(Violation),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("tree width {tree} exceeds annotation width {ann}")]
    Width { tree: Color, ann: Color },
}

/// One tree node with everything the certificates say about it.
pub(crate) struct TNode<T> {
    pub op: Op,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub side: Option<u8>,
    pub verts: Vec<usize>,
    pub ann: T,
    pub color: Vec<u64>,
    pub exit: usize,
    pub depth: usize,
}

/// Pads every recoloring to `k` entries.
pub(crate) fn widen(op: Op, k: Color) -> Op {
    match op {
        Op::Join { s, r } if r.k() < k as usize => {
            let mut img = r.images().to_vec();
            img.extend(r.k() as Color + 1..=k);
            Op::Join { s, r: Recolor::from_images(img) }
        }
        op => op,
    }
}

struct Builder<'a, A: Annotator> {
    g: &'a LabeledGraph,
    a: &'a A,
    cur: Vec<Color>,
    nodes: Vec<TNode<A::Ann>>,
}

impl<A: Annotator> Builder<'_, A> {
    fn counts(&self, verts: &[usize]) -> Vec<u64> {
        let mut c = vec![0; self.a.k() as usize];
        verts.iter().for_each(|&v| c[self.cur[v] as usize - 1] += 1);
        c
    }

    fn go(&mut self, node: &Node, depth: usize) -> Result<usize, ProveError> {
        let k = self.a.k();
        let op = widen(node.op(), k);
        let kids: Vec<usize> = node.children().iter().map(|c| self.go(c, depth + 1)).collect::<Result<_, _>>()?;
        let (ann, verts, exit) = match (&op, node) {
            (Op::New { color }, Node::New { vertex, .. }) => {
                let v = *vertex;
                self.cur[v] = *color;
                (self.a.vertex(*color, self.g.label(v), self.g.selected(v), self.g.weight(v)), vec![v], v)
            }
            (Op::Join { s, r }, _) => {
                let (l, rt) = (&self.nodes[kids[0]], &self.nodes[kids[1]]);
                let ann = self.a.join(s, r, &l.ann, &rt.ann);
                let mut right = vec![false; self.g.n()];
                rt.verts.iter().for_each(|&v| right[v] = true);
                let exit = l
                    .verts
                    .iter()
                    .copied()
                    .filter(|&u| self.g.neighbors(u).iter().any(|&v| right[v]))
                    .min_by_key(|&u| self.g.id(u))
                    .ok_or(ProveError::Disconnected)?;
                let verts: Vec<usize> = l.verts.iter().chain(&rt.verts).copied().collect();
                verts.iter().for_each(|&v| self.cur[v] = r.apply(self.cur[v]));
                (ann, verts, exit)
            }
            _ => {
                let mut ann = self.nodes[kids[0]].ann.clone();
                for &c in &kids[1..] {
                    ann = self.a.parallel(&ann, &self.nodes[c].ann);
                }
                let verts: Vec<usize> = kids.iter().flat_map(|&c| self.nodes[c].verts.clone()).collect();
                let exit = *verts.iter().min_by_key(|&&v| self.g.id(v)).unwrap();
                (ann, verts, exit)
            }
        };
        let color = self.counts(&verts);
        let idx = self.nodes.len();
        for (i, &c) in kids.iter().enumerate() {
            self.nodes[c].parent = Some(idx);
            self.nodes[c].side = op.is_join().then_some(i as u8);
        }
        self.nodes.push(TNode { op, children: kids, parent: None, side: None, verts, ann, color, exit, depth });
        Ok(idx)
    }
}

/// Annotated nodes of `t` in post-order (the root is last).
pub(crate) fn annotate<A: Annotator>(g: &LabeledGraph, t: &NlcPlusTree, a: &A) -> Result<Vec<TNode<A::Ann>>, ProveError> {
    let mut b = Builder { g, a, cur: vec![0; g.n()], nodes: Vec::new() };
    b.go(&t.root, 0)?;
    Ok(b.nodes)
}

/// Honest certificates for `g` from an NLC+ tree realizing it. Whether the
/// property holds does not matter here: a false property yields
/// certificates that the verifier rejects at the root annotation.
pub fn prove_general<A: Annotator>(g: &LabeledGraph, t: &NlcPlusTree, a: &A) -> Result<Vec<Certificate<A::Ann>>, ProveError> {
    if t.k > a.k() {
        return Err(ProveError::Width { tree: t.k, ann: a.k() });
    }
    if !graph_core::is_connected(g) {
        return Err(ProveError::Disconnected);
    }
    if t.n() != g.n() || !t.realize().same_edges(g) {
        return Err(ProveError::Mismatch);
    }
    validate_nlc_plus(t).map_err(ProveError::Invalid)?;
    let nodes = annotate(g, t, a)?;
    let n = g.n();

    let mut leaf = vec![0; n];
    for (i, x) in nodes.iter().enumerate() {
        if x.op.is_new() {
            leaf[x.verts[0]] = i;
        }
    }
    let paths: Vec<Vec<usize>> = leaf
        .iter()
        .map(|&l| {
            let mut p = vec![l];
            while let Some(q) = nodes[*p.last().unwrap()].parent {
                p.push(q);
            }
            p.reverse();
            p
        })
        .collect();

    let mut certs: Vec<Certificate<A::Ann>> = (0..n)
        .map(|u| Certificate {
            main: paths[u]
                .iter()
                .map(|&x| {
                    let x = &nodes[x];
                    MainEntry { op: x.op.clone(), link: x.side, ann: x.ann.clone(), color: x.color.clone(), exit: g.id(x.exit) }
                })
                .collect(),
            aux: vec![None; paths[u].len()],
            service0: vec![None; paths[u].len()],
            service1: vec![None; paths[u].len()],
        })
        .collect();

    let snapshot = |x: usize| {
        let x = &nodes[x];
        Snapshot { op: x.op.clone(), ann: x.ann.clone(), color: x.color.clone(), exit: g.id(x.exit) }
    };
    let mut allowed = vec![false; n];
    for x in &nodes {
        if !x.op.is_join() {
            continue;
        }
        x.verts.iter().for_each(|&v| allowed[v] = true);
        let (parent, dist) = g.bfs_within(x.exit, &allowed);
        x.verts.iter().for_each(|&v| allowed[v] = false);
        let children_main = [snapshot(x.children[0]), snapshot(x.children[1])];
        for &u in &x.verts {
            let distance = dist[u].ok_or(ProveError::Disconnected)? as u64;
            certs[u].aux[x.depth] = Some(AuxEntry {
                root: g.id(x.exit),
                parent: parent[u].map(|p| g.id(p)),
                distance,
                children_main: children_main.clone(),
            });
        }
    }

    for x in &nodes {
        if !x.op.is_par() {
            continue;
        }
        let (Some(y), Some(j)) = (x.parent, x.side) else { return Err(ProveError::Disconnected) };
        let y = &nodes[y];
        y.verts.iter().for_each(|&v| allowed[v] = true);
        let (parent, dist) = g.bfs_within(x.exit, &allowed);
        y.verts.iter().for_each(|&v| allowed[v] = false);
        let mut terminal: Vec<Option<usize>> = vec![None; n];
        let mut kept = vec![false; n];
        for &z in &x.children {
            let t = nodes[z].exit;
            terminal[t] = Some(z);
            let mut v = t;
            while !kept[v] {
                kept[v] = true;
                match parent[v] {
                    Some(p) => v = p,
                    None => break,
                }
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| kept[v]).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(dist[v]));
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &v in &order {
            if let Some(p) = parent[v] {
                kids[p].push(v);
            }
        }
        let mut entry: Vec<Option<ServiceEntry<A::Ann>>> = vec![None; n];
        for &u in &order {
            kids[u].sort_by_key(|&w| g.id(w));
            let mut seq: Vec<&A::Ann> = Vec::new();
            let mut charge = vec![0; a.k() as usize];
            if let Some(z) = terminal[u] {
                seq.push(&nodes[z].ann);
                charge.iter_mut().zip(&nodes[z].color).for_each(|(c, x)| *c += x);
            }
            for &w in &kids[u] {
                let e = entry[w].as_ref().unwrap();
                seq.push(&e.ann);
                charge.iter_mut().zip(&e.color_charge).for_each(|(c, x)| *c += x);
            }
            let mut ann = seq[0].clone();
            for s in &seq[1..] {
                ann = a.parallel(&ann, s);
            }
            entry[u] = Some(ServiceEntry {
                root: g.id(x.exit),
                parent: parent[u].map(|p| g.id(p)),
                distance: dist[u].unwrap() as u64,
                ann,
                color_charge: charge,
            });
        }
        for u in order {
            let slot = if j == 0 { &mut certs[u].service0 } else { &mut certs[u].service1 };
            slot[x.depth] = entry[u].take();
        }
    }
    Ok(certs)
}
