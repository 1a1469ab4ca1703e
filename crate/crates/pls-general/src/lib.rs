//! Certificates for an MSO-style property on graphs given with an NLC+ tree.
//!
//! Each vertex stores, for every node on its root-to-leaf path, the node's
//! operation, the side taken below it, an annotation of the node's graph
//! (a homomorphism class, possibly enriched), the per-color vertex counts
//! and an exit vertex. Auxiliary entries certify a spanning tree of every
//! join node's (connected) graph and carry snapshots of both children; service
//! entries certify Steiner trees that aggregate the components of a
//! parallel node. The verifier is generic over [`Annotator`], which fixes
//! what an annotation is and how it composes.

mod audit;
mod prove;
mod verify;

pub use audit::{audit_reconstruct, Audit, AuditError};
pub use prove::{prove_general, ProveError};
pub use verify::{verify_at, verify_general, LocalView};

use mso_hom::{HomAlgebra, HomClass};
use nlc::{Color, JoinSet, Op, Recolor};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

/// What the certificates say about each tree node's graph, and how those
/// statements compose along the tree.
pub trait Annotator {
    type Ann: Clone + Eq + Hash + Debug + Serialize + DeserializeOwned;

    fn k(&self) -> Color;
    fn vertex(&self, color: Color, label: u32, selected: bool, weight: i64) -> Self::Ann;
    /// Join along `s`, then recolor through `r`.
    fn join(&self, s: &JoinSet, r: &Recolor, a: &Self::Ann, b: &Self::Ann) -> Self::Ann;
    fn parallel(&self, a: &Self::Ann, b: &Self::Ann) -> Self::Ann;
    fn accepting(&self, a: &Self::Ann) -> bool;
    fn well_formed(&self, a: &Self::Ann) -> bool;
    fn bits(&self, a: &Self::Ann) -> usize;
}

/// Plain homomorphism classes for a decision property.
pub struct Decision<'a>(pub &'a dyn HomAlgebra);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassAnn {
    pub h: HomClass,
}

impl Annotator for Decision<'_> {
    type Ann = ClassAnn;

    fn k(&self) -> Color {
        self.0.k()
    }

    fn vertex(&self, color: Color, label: u32, _selected: bool, _weight: i64) -> ClassAnn {
        ClassAnn { h: self.0.vertex_class(color, label, false) }
    }

    fn join(&self, s: &JoinSet, r: &Recolor, a: &ClassAnn, b: &ClassAnn) -> ClassAnn {
        ClassAnn { h: self.0.recolor(r, &self.0.join(s, &a.h, &b.h)) }
    }

    fn parallel(&self, a: &ClassAnn, b: &ClassAnn) -> ClassAnn {
        ClassAnn { h: self.0.parallel(&a.h, &b.h) }
    }

    fn accepting(&self, a: &ClassAnn) -> bool {
        self.0.is_accepting(&a.h)
    }

    fn well_formed(&self, a: &ClassAnn) -> bool {
        self.0.is_well_formed(&a.h)
    }

    fn bits(&self, a: &ClassAnn) -> usize {
        a.h.payload_bits()
    }
}

/// Caches joins and parallel compositions of another annotator. Within
/// one round most vertices recompute the same few joins.
pub struct Memo<A: Annotator> {
    pub inner: A,
    joins: RefCell<HashMap<(JoinSet, Recolor, A::Ann, A::Ann), A::Ann>>,
    pars: RefCell<HashMap<(A::Ann, A::Ann), A::Ann>>,
}

impl<A: Annotator> Memo<A> {
    pub fn new(inner: A) -> Self {
        Memo { inner, joins: RefCell::default(), pars: RefCell::default() }
    }

    pub fn clear(&self) {
        self.joins.borrow_mut().clear();
        self.pars.borrow_mut().clear();
    }
}

impl<A: Annotator> Annotator for Memo<A> {
    type Ann = A::Ann;

    fn k(&self) -> Color {
        self.inner.k()
    }

    fn vertex(&self, color: Color, label: u32, selected: bool, weight: i64) -> A::Ann {
        self.inner.vertex(color, label, selected, weight)
    }

    fn join(&self, s: &JoinSet, r: &Recolor, a: &A::Ann, b: &A::Ann) -> A::Ann {
        let key = (s.clone(), r.clone(), a.clone(), b.clone());
        if let Some(x) = self.joins.borrow().get(&key) {
            return x.clone();
        }
        let x = self.inner.join(s, r, a, b);
        self.joins.borrow_mut().insert(key, x.clone());
        x
    }

    fn parallel(&self, a: &A::Ann, b: &A::Ann) -> A::Ann {
        let key = (a.clone(), b.clone());
        if let Some(x) = self.pars.borrow().get(&key) {
            return x.clone();
        }
        let x = self.inner.parallel(a, b);
        self.pars.borrow_mut().insert(key, x.clone());
        x
    }

    fn accepting(&self, a: &A::Ann) -> bool {
        self.inner.accepting(a)
    }

    fn well_formed(&self, a: &A::Ann) -> bool {
        self.inner.well_formed(a)
    }

    fn bits(&self, a: &A::Ann) -> usize {
        self.inner.bits(a)
    }
}

/// One node of a vertex's root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainEntry<T> {
    pub op: Op,
    /// Side below the parent join; `None` at the root and below a parallel node.
    pub link: Option<u8>,
    #[serde(flatten)]
    pub ann: T,
    pub color: Vec<u64>,
    pub exit: u64,
}

/// What is known about a child of a join node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot<T> {
    pub op: Op,
    #[serde(flatten)]
    pub ann: T,
    pub color: Vec<u64>,
    pub exit: u64,
}

impl<T: Clone> Snapshot<T> {
    pub fn of(m: &MainEntry<T>) -> Self {
        Snapshot { op: m.op.clone(), ann: m.ann.clone(), color: m.color.clone(), exit: m.exit }
    }
}

impl<T: PartialEq> Snapshot<T> {
    pub fn matches(&self, m: &MainEntry<T>) -> bool {
        self.op == m.op && self.ann == m.ann && self.color == m.color && self.exit == m.exit
    }
}

/// Spanning-tree entry for a join node's graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxEntry<T> {
    pub root: u64,
    pub parent: Option<u64>,
    pub distance: u64,
    pub children_main: [Snapshot<T>; 2],
}

/// Steiner-tree entry for a parallel child of a join node. The annotation
/// and color counts cover the components whose exits lie below the owner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceEntry<T> {
    pub root: u64,
    pub parent: Option<u64>,
    pub distance: u64,
    #[serde(flatten)]
    pub ann: T,
    pub color_charge: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate<T> {
    pub main: Vec<MainEntry<T>>,
    pub aux: Vec<Option<AuxEntry<T>>>,
    pub service0: Vec<Option<ServiceEntry<T>>>,
    pub service1: Vec<Option<ServiceEntry<T>>>,
}

impl<T> Certificate<T> {
    pub fn d(&self) -> usize {
        self.main.len()
    }

    /// Service slot `j` at 1-based level `i`.
    pub fn service(&self, j: u8, i: usize) -> Option<&ServiceEntry<T>> {
        let slots = if j == 0 { &self.service0 } else { &self.service1 };
        slots.get(i - 1).and_then(Option::as_ref)
    }
}

/// Color of a vertex when node `i` (1-based) joins, from its path.
pub fn currentcolor<T>(main: &[MainEntry<T>], i: usize) -> Option<Color> {
    let Op::New { color } = main.last()?.op else { return None };
    if i == 0 || i > main.len() {
        return None;
    }
    let mut c = color;
    for e in main[i.min(main.len() - 1)..main.len() - 1].iter().rev() {
        if let Some(r) = e.op.recolor() {
            if c == 0 || c as usize > r.k() {
                return None;
            }
            c = r.apply(c);
        }
    }
    Some(c)
}

/// Bit widths used for size accounting.
#[derive(Debug, Clone, Copy)]
pub struct BitWidths {
    pub id: usize,
    pub count: usize,
    pub k: usize,
}

impl BitWidths {
    pub fn new(n: usize, id_exponent: u32, k: Color) -> Self {
        let bits = |x: u128| (u128::BITS - x.leading_zeros()) as usize;
        BitWidths { id: bits((n.max(1) as u128).pow(id_exponent)), count: bits(n as u128), k: k as usize }
    }

    /// A 2-bit tag, `S` as a `k×k` matrix and `R` as `k` color images.
    pub fn op(&self) -> usize {
        let color = (usize::BITS - (self.k.max(2) - 1).leading_zeros()) as usize;
        2 + self.k * self.k + self.k * color
    }
}

pub fn certificate_bits<A: Annotator>(a: &A, c: &Certificate<A::Ann>, w: &BitWidths) -> usize {
    let snap = |s: &Snapshot<A::Ann>| w.op() + a.bits(&s.ann) + w.k * w.count + w.id;
    let main: usize = c.main.iter().map(|e| w.op() + 2 + a.bits(&e.ann) + w.k * w.count + w.id).sum();
    let aux: usize = c.aux.iter().map(|x| 1 + x.as_ref().map_or(0, |x| 2 * w.id + 1 + w.count + snap(&x.children_main[0]) + snap(&x.children_main[1]))).sum();
    let service: usize = c
        .service0
        .iter()
        .chain(&c.service1)
        .map(|x| 1 + x.as_ref().map_or(0, |x| 2 * w.id + 1 + w.count + a.bits(&x.ann) + w.k * w.count))
        .sum();
    main + aux + service
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(op: Op) -> MainEntry<()> {
        MainEntry { op, link: None, ann: (), color: vec![], exit: 0 }
    }

    #[test]
    fn currentcolor_skips_own_recoloring() {
        let j = |img: Vec<Color>| entry(Op::Join { s: JoinSet::empty(), r: Recolor::from_images(img) });
        let main = vec![j(vec![2, 2]), entry(Op::Par), j(vec![2, 1]), entry(Op::New { color: 1 })];
        assert_eq!(currentcolor(&main, 4), Some(1));
        assert_eq!(currentcolor(&main, 3), Some(1));
        assert_eq!(currentcolor(&main, 2), Some(2));
        assert_eq!(currentcolor(&main, 1), Some(2));
        assert_eq!(currentcolor(&main, 5), None);
    }

    #[test]
    fn op_width() {
        assert_eq!(BitWidths::new(16, 2, 4).op(), 2 + 16 + 8);
        assert_eq!(BitWidths::new(16, 2, 4).id, 9);
    }
}
