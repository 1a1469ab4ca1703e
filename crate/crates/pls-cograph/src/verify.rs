use crate::{currentcolor, Certificate, MainMsg, WIDTH};
use graph_core::{LabeledGraph, Verdict};
use nlc::{build_cotree, Op};
use std::collections::BTreeMap;

/// Runs the verifier at every vertex. `certs` is indexed like `g`.
pub fn verify_cograph(g: &LabeledGraph, certs: &[Certificate]) -> Vec<Verdict> {
    assert_eq!(certs.len(), g.n(), "one certificate per vertex");
    (0..g.n())
        .map(|u| {
            let nbrs: Vec<(u64, &Certificate)> = g.neighbors(u).iter().map(|&v| (g.id(v), &certs[v])).collect();
            verify_at(g.id(u), &certs[u], &nbrs)
        })
        .collect()
}

fn op_ok(op: &Op) -> bool {
    let in_range = |c: u8| (1..=WIDTH).contains(&c);
    match op {
        Op::New { color } => in_range(*color),
        Op::Join { s, r } => s.pairs().iter().all(|&(i, j)| in_range(i) && in_range(j)) && r.k() == WIDTH as usize && r.images().iter().all(|&c| in_range(c)),
        Op::Par => true,
    }
}

fn main_ok(m: &MainMsg) -> bool {
    let d = m.path.len();
    d > 0
        && m.links.len() == d
        && m.links[0] == 0
        && m.links.iter().all(|&l| l <= 1)
        && m.path.iter().all(op_ok)
        && m.path[d - 1].is_new()
        && m.path[..d - 1].iter().all(|op| !op.is_new())
}

fn cert_ok(c: &Certificate) -> bool {
    let a = &c.aux;
    let shape = match a.depth {
        0 => a.parent.is_none() && a.child.is_none() && a.m.is_none(),
        1 => a.parent.is_none() && a.child.is_some() == a.m.is_some(),
        2 => a.parent.is_some() && a.child.is_none() && a.m.is_none(),
        _ => false,
    };
    shape && main_ok(&c.main) && a.m.as_ref().is_none_or(main_ok)
}

/// Length of the longest common prefix of two link sequences.
fn common_prefix(a: &MainMsg, b: &MainMsg) -> usize {
    a.links.iter().zip(&b.links).take_while(|(x, y)| x == y).count()
}

/// Whether the edge `u`–`v` is created by their lowest common ancestor.
fn edge_explained(u: &MainMsg, v: &MainMsg, i: usize) -> bool {
    if i >= u.path.len() || i >= v.path.len() {
        return false;
    }
    let Op::Join { s, .. } = &u.path[i - 1] else { return false };
    let (Some(cu), Some(cv)) = (currentcolor(&u.path, i), currentcolor(&v.path, i)) else { return false };
    if u.links[i] == 0 {
        s.contains(cu, cv)
    } else {
        s.contains(cv, cu)
    }
}

/// The verifier at one vertex with identifier `id`, given its certificate
/// and each neighbor's identifier and certificate.
pub fn verify_at(id: u64, own: &Certificate, nbrs: &[(u64, &Certificate)]) -> Verdict {
    if !cert_ok(own) || own.main.id != id || nbrs.iter().any(|(vid, c)| !cert_ok(c) || c.main.id != *vid) {
        return Verdict::Reject(0);
    }
    let (m, a) = (&own.main, &own.aux);
    let star: Vec<usize> = nbrs.iter().map(|(_, c)| common_prefix(m, &c.main)).collect();
    // 1: links agree at least on the root entry
    if star.iter().any(|&i| i == 0) {
        return Verdict::Reject(1);
    }
    // 2: identical operations down to the common ancestor
    if nbrs.iter().zip(&star).any(|((_, c), &i)| m.path[..i] != c.main.path[..i]) {
        return Verdict::Reject(2);
    }
    // 3: the common ancestor's join creates the edge; the degree is right
    if m.deg != nbrs.len() as u64 || nbrs.iter().zip(&star).any(|((_, c), &i)| !edge_explained(m, &c.main, i)) {
        return Verdict::Reject(3);
    }
    // 4: one root for everybody, and only the root sits at depth 0
    if nbrs.iter().any(|(_, c)| c.aux.rho != a.rho) || (a.depth == 0) != (id == a.rho) {
        return Verdict::Reject(4);
    }
    let find = |x: u64| nbrs.iter().find(|(vid, _)| *vid == x).map(|(_, c)| *c);
    // 5: a depth-2 vertex hangs from a depth-1 neighbor
    if a.depth == 2 && a.parent.and_then(find).is_none_or(|p| p.aux.depth != 1) {
        return Verdict::Reject(5);
    }
    // 6: a depth-1 vertex sees the root and relays its unique child's message
    if a.depth == 1 {
        if find(a.rho).is_none() {
            return Verdict::Reject(6);
        }
        if let Some(ch) = a.child {
            match find(ch) {
                Some(c) if c.aux.depth == 2 && a.m.as_ref() == Some(&c.main) => {}
                _ => return Verdict::Reject(6),
            }
        }
        let claimed = nbrs.iter().any(|(vid, c)| c.aux.depth == 2 && c.aux.parent == Some(id) && Some(*vid) != a.child);
        if claimed {
            return Verdict::Reject(6);
        }
    }
    // 7: the root rebuilds the tree from every main message
    if id == a.rho && !root_check(own, nbrs) {
        return Verdict::Reject(7);
    }
    Verdict::Accept
}

fn root_check(own: &Certificate, nbrs: &[(u64, &Certificate)]) -> bool {
    let mut mains: BTreeMap<u64, &MainMsg> = BTreeMap::new();
    let all = std::iter::once(&own.main).chain(nbrs.iter().flat_map(|(_, c)| std::iter::once(&c.main).chain(c.aux.m.as_ref())));
    for m in all {
        if let Some(prev) = mains.insert(m.id, m) {
            if prev != m {
                return false;
            }
        }
    }
    let ms: Vec<&MainMsg> = mains.values().copied().collect();
    let n = ms.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let i = common_prefix(ms[a], ms[b]);
            // equal link traces would put two vertices on one leaf
            if ms[a].path[..i] != ms[b].path[..i] || i >= ms[a].path.len() || i >= ms[b].path.len() {
                return false;
            }
            if edge_explained(ms[a], ms[b], i) {
                edges.push((a, b));
            }
        }
    }
    let ids = ms.iter().map(|m| m.id).collect();
    let Ok(gstar) = LabeledGraph::new(ids, vec![0; n], &edges) else { return false };
    build_cotree(&gstar).is_ok() && (0..n).all(|v| gstar.degree(v) as u64 == ms[v].deg)
}
