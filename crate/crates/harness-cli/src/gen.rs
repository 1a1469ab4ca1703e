//! Random and exhaustive instance generation. All randomness comes from
//! a seeded ChaCha8 stream so runs are reproducible.

use graph_core::oracle::has_induced_p4;
use graph_core::LabeledGraph;
use nlc::{to_nlc_plus, Color, JoinSet, NlcPlusTree, NlcTree, Node, Recolor};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct identifiers drawn from `1..=n²`.
pub fn random_ids(n: usize, rng: &mut Rng8) -> Vec<u64> {
    let bound = (n * n).max(1) as u64;
    rand::seq::index::sample(rng, bound as usize, n).into_iter().map(|i| i as u64 + 1).collect()
}

fn cotree_edges(rng: &mut Rng8, verts: &[usize], join: bool, out: &mut Vec<(usize, usize)>) {
    if verts.len() < 2 {
        return;
    }
    let cut = rng.gen_range(1..verts.len());
    let (a, b) = verts.split_at(cut);
    if join {
        for &u in a {
            out.extend(b.iter().map(|&v| (u.min(v), u.max(v))));
        }
    }
    let (ja, jb) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
    cotree_edges(rng, a, ja, out);
    cotree_edges(rng, b, jb, out);
}

/// A random connected cograph: a random binary cotree whose root is a join.
pub fn random_cograph(n: usize, rng: &mut Rng8) -> LabeledGraph {
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let mut edges = Vec::new();
    cotree_edges(rng, &verts, true, &mut edges);
    let ids = random_ids(n, rng);
    LabeledGraph::new(ids, vec![0; n], &edges).expect("cotree edges are simple")
}

/// With `proper` set, joins only pair distinct colors and never recolor,
/// so the leaf colors stay a proper coloring of the realized graph.
fn random_node(rng: &mut Rng8, k: Color, verts: &[usize], density: f64, proper: bool) -> Node {
    if verts.len() == 1 {
        return Node::leaf(rng.gen_range(1..=k), verts[0]);
    }
    let cut = rng.gen_range(1..verts.len());
    let (a, b) = verts.split_at(cut);
    let (l, r) = (random_node(rng, k, a, density, proper), random_node(rng, k, b, density, proper));
    if rng.gen_ratio(1, 4) {
        return Node::par(vec![l, r]);
    }
    let mut s = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            if (!proper || i != j) && rng.gen_bool(density) {
                s.push((i, j));
            }
        }
    }
    let r0 = if proper { Recolor::identity(k) } else { Recolor::from_images((0..k).map(|_| rng.gen_range(1..=k)).collect()) };
    Node::join(JoinSet::from(s), r0, l, r)
}

/// A random NLC program over `k` colors, converted to NLC+. The root is a
/// full join whenever the random program alone is disconnected.
pub fn random_nlc(n: usize, k: Color, density: f64, rng: &mut Rng8) -> (LabeledGraph, NlcPlusTree) {
    let verts: Vec<usize> = (0..n).collect();
    let t = loop {
        let t = NlcTree::new(k, random_node(rng, k, &verts, density, false)).expect("colors in range");
        if t.realize().is_connected() {
            break t;
        }
        let cut = rng.gen_range(1..n);
        let (a, b) = verts.split_at(cut);
        let root = Node::join(JoinSet::full(k), Recolor::identity(k), random_node(rng, k, a, density, false), random_node(rng, k, b, density, false));
        let t = NlcTree::new(k, root).expect("colors in range");
        if t.realize().is_connected() {
            break t;
        }
    };
    let ids = random_ids(n, rng);
    let g = t.realize().to_graph().expect("realized graphs are simple").with_ids(ids).expect("ids distinct");
    (g, to_nlc_plus(&t).expect("connected tree converts"))
}

/// A random connected NLC program whose leaf colors properly color the
/// graph, so the result is `k`-colorable.
pub fn random_colored_nlc(n: usize, k: Color, density: f64, rng: &mut Rng8) -> (LabeledGraph, NlcPlusTree) {
    assert!(k >= 2 || n == 1, "a connected graph on two or more vertices needs two colors");
    let verts: Vec<usize> = (0..n).collect();
    let t = loop {
        let t = NlcTree::new(k, random_node(rng, k, &verts, density, true)).expect("colors in range");
        if t.realize().is_connected() {
            break t;
        }
    };
    let ids = random_ids(n, rng);
    let g = t.realize().to_graph().expect("realized graphs are simple").with_ids(ids).expect("ids distinct");
    (g, to_nlc_plus(&t).expect("connected tree converts"))
}

/// Random connected graph: a random spanning tree plus each other pair
/// with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut Rng8) -> LabeledGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i].min(order[j]), order[i].max(order[j])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    LabeledGraph::new(random_ids(n, rng), vec![0; n], &edges).expect("simple by construction")
}

pub fn random_non_cograph(n: usize, rng: &mut Rng8) -> LabeledGraph {
    assert!(n >= 4, "every graph on fewer than four vertices is a cograph");
    loop {
        let p = rng.gen_range(0.0..0.5);
        let g = random_connected(n, p, rng);
        if has_induced_p4(&g) {
            return g;
        }
    }
}

/// The graph with edges added until no induced P4 remains. Joining the
/// ends of a P4 leaves a 4-cycle, so this terminates at worst in `K_n`.
pub fn cograph_cover(g: &LabeledGraph) -> LabeledGraph {
    let mut h = g.clone();
    while let Some([a, _, _, d]) = induced_p4(&h) {
        let mut edges = h.edges();
        edges.push((a.min(d), a.max(d)));
        h = LabeledGraph::new(g.ids().to_vec(), g.labels().to_vec(), &edges).expect("new edge");
    }
    h
}

fn induced_p4(g: &LabeledGraph) -> Option<[usize; 4]> {
    let n = g.n();
    for b in 0..n {
        for c in g.neighbors(b).iter().copied().filter(|&c| c != b) {
            for &a in g.neighbors(b) {
                if a == c || g.has_edge(a, c) {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d != b && d != a && !g.has_edge(d, b) && !g.has_edge(d, a) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// A linear NLC+ tree for any connected graph. Vertices are added one at
/// a time; a vertex keeps a private color while it still has neighbors to
/// come and is then parked in color 1, which no join uses.
pub fn linear_tree(g: &LabeledGraph) -> NlcPlusTree {
    assert!(graph_core::is_connected(g), "linear trees need a connected graph");
    let n = g.n();
    let mut placed = vec![false; n];
    let mut left = (0..n).map(|v| g.degree(v)).collect::<Vec<_>>();
    let mut color = vec![0 as Color; n];
    let mut order = Vec::with_capacity(n);
    let start = (0..n).min_by_key(|&v| g.degree(v)).expect("nonempty graph");
    let mut next = Some(start);
    // (vertex, its color, join pairs, colors retired after the join)
    let mut steps: Vec<(usize, Color, Vec<(Color, Color)>, Vec<Color>)> = Vec::new();
    while let Some(v) = next {
        placed[v] = true;
        order.push(v);
        let busy: Vec<Color> = order.iter().map(|&u| color[u]).filter(|&c| c > 1).collect();
        let c = (2..).find(|c| !busy.contains(c)).expect("free color");
        color[v] = c;
        let s: Vec<(Color, Color)> = g.neighbors(v).iter().filter(|&&u| placed[u] && u != v).map(|&u| (color[u], c)).collect();
        left[v] -= s.len();
        let mut retired = Vec::new();
        for &u in g.neighbors(v).iter().filter(|&&u| placed[u] && u != v) {
            left[u] -= 1;
            if left[u] == 0 {
                retired.push(color[u]);
            }
        }
        if left[v] == 0 {
            retired.push(c);
        }
        steps.push((v, c, s, retired.clone()));
        for &u in &order {
            if retired.contains(&color[u]) {
                color[u] = 1;
            }
        }
        // prefer the vertex that retires the most colors now
        next = (0..n)
            .filter(|&u| !placed[u] && g.neighbors(u).iter().any(|&w| placed[w]))
            .max_by_key(|&u| (g.neighbors(u).iter().filter(|&&w| placed[w]).count(), std::cmp::Reverse(u)));
    }
    let k = steps.iter().map(|s| s.1).max().unwrap_or(1).max(2);
    let recolor = |retired: &[Color]| Recolor::from_images((1..=k).map(|c| if retired.contains(&c) { 1 } else { c }).collect());
    let mut it = steps.into_iter();
    let (v0, c0, _, r0) = it.next().unwrap();
    let mut root = Node::New { color: if r0.contains(&c0) { 1 } else { c0 }, vertex: v0, label: g.label(v0) };
    for (v, c, s, retired) in it {
        let leaf = Node::New { color: c, vertex: v, label: g.label(v) };
        root = Node::join(JoinSet::from(s), recolor(&retired), root, leaf);
    }
    let t = NlcTree::new(k, root).expect("colors in range");
    to_nlc_plus(&t).expect("connected graphs convert")
}

/// Canonical code of a graph on at most 11 vertices: the largest
/// upper-triangle adjacency string over orderings that respect the
/// color-refinement partition.
pub fn canonical_code(g: &LabeledGraph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical codes need n(n-1)/2 <= 64 bits");
    let mut cell: Vec<usize> = vec![0; n];
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = g.neighbors(v).iter().map(|&w| cell[w]).collect();
                s.sort_unstable();
                (cell[v], s)
            })
            .collect();
        let mut keys = sig.clone();
        keys.sort();
        keys.dedup();
        let next: Vec<usize> = sig.iter().map(|s| keys.binary_search(s).unwrap()).collect();
        let stable = keys.len() == cell.iter().collect::<std::collections::BTreeSet<_>>().len();
        cell = next;
        if stable {
            break;
        }
    }
    let cells = cell.iter().max().map_or(0, |&m| m + 1);
    let members: Vec<Vec<usize>> = (0..cells).map(|c| (0..n).filter(|&v| cell[v] == c).collect()).collect();
    let mut best = 0u64;
    fn go(g: &LabeledGraph, members: &[Vec<usize>], c: usize, rest: &mut Vec<usize>, perm: &mut Vec<usize>, best: &mut u64) {
        if rest.is_empty() {
            if c + 1 < members.len() {
                return go(g, members, c + 1, &mut members[c + 1].clone(), perm, best);
            }
            let mut code = 0u64;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    code = code << 1 | g.has_edge(perm[i], perm[j]) as u64;
                }
            }
            *best = (*best).max(code);
            return;
        }
        for i in 0..rest.len() {
            let v = rest.swap_remove(i);
            perm.push(v);
            go(g, members, c, rest, perm, best);
            perm.pop();
            rest.push(v);
            let last = rest.len() - 1;
            rest.swap(i, last);
        }
    }
    go(g, &members, 0, &mut members[0].clone(), &mut Vec::with_capacity(n), &mut best);
    best
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// connected or not.
pub fn all_graphs(n: usize) -> Vec<LabeledGraph> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![LabeledGraph::unlabeled(1, &[]).unwrap()];
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for h in all_graphs(n - 1) {
        let base = h.edges();
        for mask in 0..1u32 << (n - 1) {
            let mut edges = base.clone();
            edges.extend((0..n - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, n - 1)));
            let g = LabeledGraph::unlabeled(n, &edges).unwrap();
            if seen.insert(canonical_code(&g)) {
                out.push(g);
            }
        }
    }
    out
}

pub fn connected_graphs(n: usize) -> Vec<LabeledGraph> {
    all_graphs(n).into_iter().filter(graph_core::is_connected).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_up_to_isomorphism() {
        let connected: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
        assert_eq!(all_graphs(5).len(), 34);
    }

    #[test]
    fn canonical_code_ignores_labelling() {
        let a = LabeledGraph::unlabeled(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = LabeledGraph::unlabeled(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        let c = LabeledGraph::unlabeled(4, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&c));
    }

    #[test]
    fn linear_trees_realize_their_graph() {
        let mut r = rng(1);
        for n in 1..30 {
            let g = random_connected(n, 0.2, &mut r);
            let t = linear_tree(&g);
            assert!(t.realize().same_edges(&g), "n {n}");
            assert_eq!(nlc::validate_nlc_plus(&t), Ok(()));
        }
        let path = LabeledGraph::unlabeled(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(linear_tree(&path).k <= 3);
    }

    #[test]
    fn generators_deliver_what_they_promise() {
        let mut r = rng(9);
        for n in [1, 4, 40] {
            let g = random_cograph(n, &mut r);
            assert!(graph_core::is_connected(&g) && !has_induced_p4(&g));
            assert!(g.ids().iter().all(|&id| (1..=(n * n).max(1) as u64).contains(&id)));
        }
        let g = random_non_cograph(7, &mut r);
        assert!(has_induced_p4(&g));
        let h = cograph_cover(&g);
        assert!(!has_induced_p4(&h) && g.edges().iter().all(|&(u, v)| h.has_edge(u, v)));
        let (g, t) = random_nlc(64, 4, 0.3, &mut r);
        assert!(t.realize().same_edges(&g));
        assert_eq!(random_ids(1, &mut r), vec![1]);
    }

    #[test]
    fn same_seed_same_graph() {
        assert_eq!(random_cograph(50, &mut rng(3)), random_cograph(50, &mut rng(3)));
    }
}
