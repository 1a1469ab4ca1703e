use crate::{Annotator, Certificate, MainEntry};
use graph_core::{LabeledGraph, Verdict};
use nlc::{Color, Op};

/// Everything a vertex sees in one round.
pub struct LocalView<'a, T> {
    pub id: u64,
    pub label: u32,
    pub selected: bool,
    pub weight: i64,
    pub cert: &'a Certificate<T>,
    pub nbrs: Vec<(u64, &'a Certificate<T>)>,
}

/// Runs the verifier at every vertex. `certs` is indexed like `g`.
pub fn verify_general<A: Annotator>(g: &LabeledGraph, certs: &[Certificate<A::Ann>], a: &A) -> Vec<Verdict> {
    assert_eq!(certs.len(), g.n(), "one certificate per vertex");
    (0..g.n()).map(|u| verify_at(a, &view(g, certs, u))).collect()
}

pub(crate) fn view<'a, T>(g: &LabeledGraph, certs: &'a [Certificate<T>], u: usize) -> LocalView<'a, T> {
    LocalView {
        id: g.id(u),
        label: g.label(u),
        selected: g.selected(u),
        weight: g.weight(u),
        cert: &certs[u],
        nbrs: g.neighbors(u).iter().map(|&v| (g.id(v), &certs[v])).collect(),
    }
}

pub fn verify_at<A: Annotator>(a: &A, v: &LocalView<A::Ann>) -> Verdict {
    match check(a, v) {
        Ok(()) => Verdict::Accept,
        Err(c) => Verdict::Reject(c),
    }
}

fn op_ok(op: &Op, k: Color) -> bool {
    let in_range = |c: Color| (1..=k).contains(&c);
    match op {
        Op::New { color } => in_range(*color),
        Op::Join { s, r } => s.pairs().iter().all(|&(i, j)| in_range(i) && in_range(j)) && r.k() == k as usize && r.images().iter().all(|&c| in_range(c)),
        Op::Par => true,
    }
}

/// Encoding-level sanity: lengths, ranges, link pattern and annotations.
fn well_formed<A: Annotator>(a: &A, c: &Certificate<A::Ann>) -> bool {
    let k = a.k();
    let d = c.d();
    let vec_ok = |x: &[u64]| x.len() == k as usize;
    if d == 0 || c.aux.len() != d || c.service0.len() != d || c.service1.len() != d {
        return false;
    }
    if c.main[0].link.is_some() || c.service0[0].is_some() || c.service1[0].is_some() {
        return false;
    }
    let links = c.main.windows(2).all(|w| match w[1].link {
        None => w[0].op.is_par(),
        Some(l) => l <= 1 && !w[0].op.is_par(),
    });
    links
        && c.main.iter().all(|e| op_ok(&e.op, k) && vec_ok(&e.color) && a.well_formed(&e.ann))
        && c.aux.iter().flatten().all(|x| x.children_main.iter().all(|s| op_ok(&s.op, k) && vec_ok(&s.color) && a.well_formed(&s.ann)))
        && c.service0.iter().chain(&c.service1).flatten().all(|x| vec_ok(&x.color_charge) && a.well_formed(&x.ann))
}

fn shape_ok<T>(main: &[MainEntry<T>]) -> bool {
    main.last().is_some_and(|e| e.op.is_new()) && main[..main.len() - 1].iter().all(|e| !e.op.is_new())
}

/// `cc[i - 1]` is the color of the vertex when node `i` joins.
fn colors_along<T>(main: &[MainEntry<T>]) -> Vec<Color> {
    let d = main.len();
    let Op::New { color } = main[d - 1].op else { unreachable!("shape checked") };
    let mut cc = vec![color; d];
    for i in (0..d - 1).rev() {
        cc[i] = main[i + 1].op.recolor().map_or(cc[i + 1], |r| r.apply(cc[i + 1]));
    }
    cc
}

struct Nb<'a, T> {
    id: u64,
    c: &'a Certificate<T>,
    /// Deepest level down to which the link traces agree.
    idx: usize,
    cc: Vec<Color>,
}

impl<T> Nb<'_, T> {
    fn m(&self, i: usize) -> &MainEntry<T> {
        &self.c.main[i - 1]
    }

    fn link(&self, i: usize) -> Option<u8> {
        self.c.main.get(i - 1).and_then(|e| e.link)
    }
}

fn check<A: Annotator>(a: &A, v: &LocalView<A::Ann>) -> Result<(), u8> {
    let k = a.k();
    let c = v.cert;
    let fail = |cond: u8, bad: bool| if bad { Err(cond) } else { Ok(()) };
    fail(0, !well_formed(a, c) || v.nbrs.iter().any(|(_, w)| !well_formed(a, w) || !shape_ok(&w.main)))?;
    let d = c.d();
    let m = |i: usize| &c.main[i - 1];
    let aux = |i: usize| c.aux[i - 1].as_ref();

    // 1-6: the leaf and the root
    fail(1, !shape_ok(&c.main))?;
    fail(2, m(d).exit != v.id)?;
    let Op::New { color: s } = m(d).op else { unreachable!() };
    fail(3, m(d).color.iter().enumerate().any(|(q, &x)| x != u64::from(q + 1 == s as usize)))?;
    fail(4, m(d).ann != a.vertex(s, v.label, v.selected, v.weight))?;
    let shape = if d == 1 { v.nbrs.is_empty() } else { m(1).op.is_join() && (2..=d).all(|i| !m(i).op.is_par() || m(i - 1).op.is_join()) };
    fail(5, !shape)?;
    fail(6, !a.accepting(&m(1).ann))?;

    let ccu = colors_along(&c.main);
    let nbs: Vec<Nb<A::Ann>> = v
        .nbrs
        .iter()
        .map(|&(id, w)| {
            let idx = c.main.iter().zip(&w.main).take_while(|(x, y)| x.link == y.link).count();
            Nb { id, c: w, idx, cc: colors_along(&w.main) }
        })
        .collect();
    let side = |i: usize| m(i).link.unwrap_or(0);

    // 7-12: every edge is explained by the lowest common ancestor
    fail(7, nbs.iter().any(|w| c.main[..w.idx] != w.c.main[..w.idx]))?;
    let explained = |w: &Nb<A::Ann>| {
        let i = w.idx;
        if i >= d || i >= w.c.d() {
            return false;
        }
        let Op::Join { s, .. } = &m(i).op else { return false };
        let (cu, cv) = (ccu[i - 1], w.cc[i - 1]);
        if side(i + 1) == 0 {
            s.contains(cu, cv)
        } else {
            s.contains(cv, cu)
        }
    };
    fail(8, !nbs.iter().all(explained))?;
    let mut memo: Vec<(usize, &A::Ann, bool)> = Vec::new();
    for w in &nbs {
        let i = w.idx;
        let theirs = &w.m(i + 1).ann;
        if let Some(&(_, _, ok)) = memo.iter().find(|(j, h, _)| *j == i && *h == theirs) {
            fail(9, !ok)?;
            continue;
        }
        let Op::Join { s, r } = &m(i).op else { unreachable!() };
        let mine = &m(i + 1).ann;
        let (l, rt) = if side(i + 1) == 0 { (mine, theirs) } else { (theirs, mine) };
        let ok = a.join(s, r, l, rt) == m(i).ann;
        memo.push((i, theirs, ok));
        fail(9, !ok)?;
    }
    for w in &nbs {
        let i = w.idx;
        let r = m(i).op.recolor().unwrap();
        let bad = (1..=k).any(|q| {
            let sum: u64 = r.preimage(q).map(|p| m(i + 1).color[p as usize - 1] + w.m(i + 1).color[p as usize - 1]).sum();
            sum != m(i).color[q as usize - 1]
        });
        fail(10, bad)?;
    }
    for i in (1..d).filter(|&i| m(i).op.is_join()) {
        let Some(x) = aux(i) else { continue };
        let Op::Join { s, .. } = &m(i).op else { unreachable!() };
        let (mine, other) = (side(i + 1), 1 - side(i + 1));
        let cu = ccu[i - 1];
        for q in 1..=k {
            let joined = if mine == 0 { s.contains(cu, q) } else { s.contains(q, cu) };
            if !joined {
                continue;
            }
            let seen = nbs.iter().filter(|w| w.idx == i && w.link(i + 1) == Some(other) && w.cc[i - 1] == q).count() as u64;
            fail(11, seen != x.children_main[other as usize].color[q as usize - 1])?;
        }
    }
    for i in (1..d).filter(|&i| m(i).op.is_join() && m(i).exit == v.id) {
        let crossing = nbs.iter().any(|w| w.idx == i && w.link(i + 1) == Some(1));
        fail(12, side(i + 1) != 0 || !crossing)?;
    }

    // 22: entries exist where the structure needs them
    let terminal = |i: usize, j: u8| m(i).link == Some(j) && i < d && m(i + 1).exit == v.id;
    let owner = |i: usize, j: u8| m(i).link == Some(j) && m(i).op.is_par() && m(i).exit == v.id;
    let mut present = (1..=d).all(|i| aux(i).is_some() == m(i).op.is_join());
    for i in 2..=d {
        if let Some(j) = m(i).link {
            if m(i).op.is_par() && (owner(i, j) || terminal(i, j)) {
                present &= c.service(j, i).is_some();
            }
        }
    }
    fail(22, !present)?;

    // 13-16: a spanning tree of every join node's graph
    let find = |id: u64| nbs.iter().find(|w| w.id == id);
    for i in (1..=d).filter(|&i| m(i).op.is_join()) {
        let x = aux(i).unwrap();
        fail(13, x.root != m(i).exit)?;
        fail(14, x.parent.is_none() && x.root != v.id)?;
        if let Some(p) = x.parent {
            let ok = find(p).is_some_and(|w| {
                w.idx >= i
                    && w.c.aux[i - 1].as_ref().is_some_and(|y| y.root == x.root && y.children_main == x.children_main && y.distance + 1 == x.distance)
            });
            fail(15, !ok)?;
        }
        fail(16, i < d && !x.children_main[side(i + 1) as usize].matches(m(i + 1)))?;
    }

    // 17-27: Steiner trees over the components of parallel nodes
    let slots: Vec<(usize, u8)> = (1..=d).flat_map(|i| [(i, 0u8), (i, 1u8)]).filter(|&(i, j)| c.service(j, i).is_some()).collect();
    for &(i, j) in &slots {
        let parent_ok = i >= 2 && m(i - 1).op.is_join() && aux(i - 1).is_some_and(|x| x.children_main[j as usize].op.is_par());
        fail(17, !parent_ok || (m(i).link == Some(j) && !m(i).op.is_par()))?;
    }
    for &(i, j) in &slots {
        let e = c.service(j, i).unwrap();
        if let Some(p) = e.parent {
            let ok = find(p).is_some_and(|w| w.idx + 1 >= i && w.c.service(j, i).is_some_and(|y| y.root == e.root && y.distance + 1 == e.distance));
            fail(18, !ok)?;
        }
    }
    for &(i, j) in &slots {
        let e = c.service(j, i).unwrap();
        let exit = aux(i - 1).unwrap().children_main[j as usize].exit;
        fail(19, (e.parent.is_none() && e.root != v.id) || e.root != exit)?;
    }
    let children = |i: usize, j: u8| {
        let mut out: Vec<&Nb<A::Ann>> = nbs.iter().filter(|w| w.c.service(j, i).is_some_and(|y| y.parent == Some(v.id))).collect();
        out.sort_by_key(|w| w.id);
        out
    };
    let kids: Vec<Vec<&Nb<A::Ann>>> = slots.iter().map(|&(i, j)| children(i, j)).collect();
    for (&(i, j), ch) in slots.iter().zip(&kids) {
        fail(20, ch.is_empty() && !terminal(i, j))?;
    }
    for (&(i, j), ch) in slots.iter().zip(&kids) {
        let e = c.service(j, i).unwrap();
        fail(21, ch.is_empty() && (e.ann != m(i + 1).ann || e.color_charge != m(i + 1).color))?;
    }
    for (&(i, j), ch) in slots.iter().zip(&kids).filter(|(_, ch)| !ch.is_empty()) {
        let e = c.service(j, i).unwrap();
        let mut sum = if terminal(i, j) { m(i + 1).color.clone() } else { vec![0; k as usize] };
        for w in ch {
            sum.iter_mut().zip(&w.c.service(j, i).unwrap().color_charge).for_each(|(s, x)| *s += x);
        }
        fail(23, sum != e.color_charge)?;
    }
    for (&(i, j), ch) in slots.iter().zip(&kids).filter(|(_, ch)| !ch.is_empty()) {
        let e = c.service(j, i).unwrap();
        let mut seq: Vec<&A::Ann> = Vec::new();
        if terminal(i, j) {
            seq.push(&m(i + 1).ann);
        }
        seq.extend(ch.iter().map(|w| &w.c.service(j, i).unwrap().ann));
        if seq.len() == 1 {
            fail(24, *seq[0] != e.ann)?;
        } else {
            let mut acc = seq[0].clone();
            for h in &seq[1..] {
                acc = a.parallel(&acc, h);
            }
            fail(25, acc != e.ann)?;
        }
    }
    let owned: Vec<(usize, u8)> = (2..=d).filter_map(|i| m(i).link.filter(|&j| owner(i, j)).map(|j| (i, j))).collect();
    for &(i, j) in &owned {
        let e = c.service(j, i).unwrap();
        fail(26, e.parent.is_some() || e.distance != 0)?;
    }
    for &(i, j) in &owned {
        let e = c.service(j, i).unwrap();
        fail(27, e.ann != m(i).ann || e.color_charge != m(i).color)?;
    }
    Ok(())
}
