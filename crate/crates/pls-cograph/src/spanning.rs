use crate::ProveError;
use graph_core::LabeledGraph;
use nlc::{build_cotree, CoNode};

/// Rooted spanning tree of depth at most 2 where every depth-1 vertex has at
/// most one child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    pub depth: Vec<u8>,
    pub parent: Vec<Option<usize>>,
}

/// A connected cograph on two or more vertices is the join of its
/// co-components. Root the tree at a vertex `r` of a smallest co-component
/// `C`: everything outside `C` is adjacent to `r`, and the non-neighbors of
/// `r` inside `C` are few enough to hang one each from distinct vertices
/// outside `C`, all of which see all of `C`.
pub fn depth2_spanning_tree(g: &LabeledGraph) -> Result<SpanningTree, ProveError> {
    let n = g.n();
    if !graph_core::is_connected(g) {
        return Err(ProveError::Disconnected);
    }
    let ct = build_cotree(g).map_err(|_| ProveError::NotACograph)?;
    let mut depth = vec![1u8; n];
    let mut parent = vec![None; n];
    let CoNode::Join(cocomps) = &ct.root else {
        depth[0] = 0;
        return Ok(SpanningTree { root: 0, depth, parent });
    };
    let smallest = cocomps.iter().min_by_key(|c| c.size()).unwrap().vertices();
    let root = *smallest.iter().max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(g.id(v)))).unwrap();
    let mut in_c = vec![false; n];
    smallest.iter().for_each(|&v| in_c[v] = true);
    let mut hosts: Vec<usize> = (0..n).filter(|&v| !in_c[v]).collect();
    hosts.sort_by_key(|&v| g.id(v));
    let mut hosts = hosts.into_iter();
    depth[root] = 0;
    let mut far: Vec<usize> = smallest.iter().copied().filter(|&v| v != root && !g.has_edge(v, root)).collect();
    far.sort_by_key(|&v| g.id(v));
    for v in 0..n {
        if v != root {
            parent[v] = Some(root);
        }
    }
    for v in far {
        let h = hosts.next().expect("co-component is smallest");
        depth[v] = 2;
        parent[v] = Some(h);
    }
    Ok(SpanningTree { root, depth, parent })
}
