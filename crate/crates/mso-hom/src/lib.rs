//! Homomorphism-class algebras over NLC trees.
//!
//! An algebra assigns every graph a class from a finite set. The class of a
//! join or recoloring only depends on the classes of the operands, so a tree
//! is evaluated bottom-up. Two algebras ship: non-3-colorability and
//! maximum-weight independent set, the latter with selected-set classes and
//! per-class best weights for optimization.

mod indep;
mod non3col;
pub mod oracle;

pub use indep::MaxIs;
pub use non3col::Non3Col;

use nlc::{Color, JoinSet, Node, Recolor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("tree uses color {color} but the algebra has width {k}")]
    Width { color: Color, k: Color },
    #[error("selection or weights cover {got} vertices, tree has {n}")]
    Length { got: usize, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad class encoding: {0}")]
pub struct ClassParseError(String);

/// A homomorphism class. `Non3Col` holds a sorted set of triples packed as
/// `b1 | b2 << k | b3 << 2k`; `IndepSet` holds the color set of an
/// independent selection, or `None` when the selection is not independent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomClass {
    Non3Col(Vec<u32>),
    IndepSet(Option<u32>),
}

impl HomClass {
    pub fn algebra(&self) -> &'static str {
        match self {
            HomClass::Non3Col(_) => non3col::NAME,
            HomClass::IndepSet(_) => indep::NAME,
        }
    }

    fn payload_hex(&self) -> String {
        match self {
            HomClass::Non3Col(t) => t.iter().map(|x| format!("{x:08x}")).collect(),
            HomClass::IndepSet(None) => "00".into(),
            HomClass::IndepSet(Some(m)) => format!("01{m:08x}"),
        }
    }

    /// Length of the canonical payload in bits.
    pub fn payload_bits(&self) -> usize {
        4 * self.payload_hex().len()
    }
}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.algebra(), self.payload_hex())
    }
}

impl FromStr for HomClass {
    type Err = ClassParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassParseError(s.chars().take(40).collect());
        let (name, hex) = s.split_once(':').ok_or_else(bad)?;
        if !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let word = |chunk: &str| u32::from_str_radix(chunk, 16).map_err(|_| bad());
        match name {
            non3col::NAME => {
                if hex.len() % 8 != 0 {
                    return Err(bad());
                }
                let t = (0..hex.len() / 8).map(|i| word(&hex[8 * i..8 * i + 8])).collect::<Result<Vec<_>, _>>()?;
                Ok(HomClass::Non3Col(t))
            }
            indep::NAME => match hex {
                "00" => Ok(HomClass::IndepSet(None)),
                _ if hex.len() == 10 && hex.starts_with("01") => Ok(HomClass::IndepSet(Some(word(&hex[2..])?))),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl Serialize for HomClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HomClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An integer or minus infinity, which orders below every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ext(pub Option<i64>);

impl Ext {
    pub const NEG_INF: Ext = Ext(None);

    pub fn finite(x: i64) -> Ext {
        Ext(Some(x))
    }

    pub fn is_finite(self) -> bool {
        self.0.is_some()
    }

    pub fn plus(self, other: Ext) -> Ext {
        match (self.0, other.0) {
            (Some(a), Some(b)) => Ext(Some(a + b)),
            _ => Ext::NEG_INF,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(x) => write!(f, "{x}"),
            None => f.write_str("-inf"),
        }
    }
}

/// Best selected weight per class, indexed by [`OptAlgebra::class_index`].
pub type MaxW = Vec<Ext>;

pub trait HomAlgebra {
    fn name(&self) -> &'static str;
    fn k(&self) -> Color;
    /// Class of a single vertex. Decision algebras ignore `selected`.
    fn vertex_class(&self, color: Color, label: u32, selected: bool) -> HomClass;
    fn join(&self, s: &JoinSet, a: &HomClass, b: &HomClass) -> HomClass;
    fn recolor(&self, r: &Recolor, c: &HomClass) -> HomClass;
    fn parallel(&self, a: &HomClass, b: &HomClass) -> HomClass {
        self.join(&JoinSet::empty(), a, b)
    }
    fn is_accepting(&self, c: &HomClass) -> bool;
    /// Whether `c` is a class of this algebra at width `k`.
    fn is_well_formed(&self, c: &HomClass) -> bool;
}

/// An algebra over graphs with a selected vertex set, with a finite
/// enumerated class universe so best weights can be tabulated per class.
pub trait OptAlgebra: HomAlgebra {
    fn num_classes(&self) -> usize;
    fn class_index(&self, c: &HomClass) -> Option<usize>;
    fn class_at(&self, i: usize) -> HomClass;

    fn maxw_vertex(&self, color: Color, label: u32, weight: i64) -> MaxW {
        let mut t = vec![Ext::NEG_INF; self.num_classes()];
        for (sel, w) in [(false, 0), (true, weight)] {
            let i = self.class_index(&self.vertex_class(color, label, sel)).expect("vertex class in universe");
            t[i] = t[i].max(Ext::finite(w));
        }
        t
    }

    fn maxw_join(&self, s: &JoinSet, a: &MaxW, b: &MaxW) -> MaxW {
        let mut t = vec![Ext::NEG_INF; self.num_classes()];
        for (i, &wa) in a.iter().enumerate().filter(|(_, w)| w.is_finite()) {
            let ca = self.class_at(i);
            for (j, &wb) in b.iter().enumerate().filter(|(_, w)| w.is_finite()) {
                let c = self.join(s, &ca, &self.class_at(j));
                let x = self.class_index(&c).expect("join stays in universe");
                t[x] = t[x].max(wa.plus(wb));
            }
        }
        t
    }

    fn maxw_recolor(&self, r: &Recolor, m: &MaxW) -> MaxW {
        let mut t = vec![Ext::NEG_INF; self.num_classes()];
        for (i, &w) in m.iter().enumerate().filter(|(_, w)| w.is_finite()) {
            let x = self.class_index(&self.recolor(r, &self.class_at(i))).expect("recolor stays in universe");
            t[x] = t[x].max(w);
        }
        t
    }

    fn maxw_parallel(&self, a: &MaxW, b: &MaxW) -> MaxW {
        self.maxw_join(&JoinSet::empty(), a, b)
    }

    /// Largest entry over accepting classes.
    fn best_accepting(&self, m: &MaxW) -> Ext {
        m.iter().enumerate().filter(|&(i, _)| self.is_accepting(&self.class_at(i))).map(|(_, &w)| w).max().unwrap_or(Ext::NEG_INF)
    }
}

/// Image of color `p` under `r`, with colors past `r`'s range fixed.
pub(crate) fn image(r: &Recolor, p: Color) -> Color {
    if (p as usize) <= r.k() {
        r.apply(p)
    } else {
        p
    }
}

fn check_width(root: &Node, k: Color) -> Result<(), EvalError> {
    let too_big = |color: Color| if color > k { Err(EvalError::Width { color, k }) } else { Ok(()) };
    match root {
        Node::New { color, .. } => too_big(*color),
        Node::Join { s, r, children } => {
            too_big(s.max_color())?;
            r.images().iter().try_for_each(|&c| too_big(c))?;
            children.iter().try_for_each(|c| check_width(c, k))
        }
        Node::Par { children } => children.iter().try_for_each(|c| check_width(c, k)),
    }
}

/// Class of the graph `root` builds, with every vertex unselected.
pub fn eval_tree(root: &Node, a: &dyn HomAlgebra) -> Result<HomClass, EvalError> {
    check_width(root, a.k())?;
    fn go(node: &Node, a: &dyn HomAlgebra) -> HomClass {
        match node {
            Node::New { color, label, .. } => a.vertex_class(*color, *label, false),
            Node::Join { s, r, children } => a.recolor(r, &a.join(s, &go(&children[0], a), &go(&children[1], a))),
            Node::Par { children } => {
                let mut it = children.iter().map(|c| go(c, a));
                let first = it.next().expect("par has children");
                it.fold(first, |acc, c| a.parallel(&acc, &c))
            }
        }
    }
    Ok(go(root, a))
}

/// Class, selected weight and best-weight table at a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptValue {
    pub class: HomClass,
    pub weight: i64,
    pub maxw: MaxW,
}

/// Evaluates the selected-set class, its weight and the best-weight table.
/// `sel` and `weights` are indexed by leaf vertex references.
pub fn eval_tree_opt(root: &Node, a: &dyn OptAlgebra, sel: &[bool], weights: &[i64]) -> Result<OptValue, EvalError> {
    check_width(root, a.k())?;
    let n = root.leaf_count();
    for got in [sel.len(), weights.len()] {
        if got != n {
            return Err(EvalError::Length { got, n });
        }
    }
    fn go(node: &Node, a: &dyn OptAlgebra, sel: &[bool], w: &[i64]) -> OptValue {
        match node {
            Node::New { color, vertex, label } => OptValue {
                class: a.vertex_class(*color, *label, sel[*vertex]),
                weight: if sel[*vertex] { w[*vertex] } else { 0 },
                maxw: a.maxw_vertex(*color, *label, w[*vertex]),
            },
            Node::Join { s, r, children } => {
                let (x, y) = (go(&children[0], a, sel, w), go(&children[1], a, sel, w));
                OptValue {
                    class: a.recolor(r, &a.join(s, &x.class, &y.class)),
                    weight: x.weight + y.weight,
                    maxw: a.maxw_recolor(r, &a.maxw_join(s, &x.maxw, &y.maxw)),
                }
            }
            Node::Par { children } => {
                let mut it = children.iter().map(|c| go(c, a, sel, w));
                let first = it.next().expect("par has children");
                it.fold(first, |acc, y| OptValue {
                    class: a.parallel(&acc.class, &y.class),
                    weight: acc.weight + y.weight,
                    maxw: a.maxw_parallel(&acc.maxw, &y.maxw),
                })
            }
        }
    }
    Ok(go(root, a, sel, weights))
}

pub const ALGEBRAS: [&str; 2] = [non3col::NAME, indep::NAME];

/// Decision algebra by registry name.
pub fn algebra_by_name(name: &str, k: Color) -> Option<Box<dyn HomAlgebra>> {
    match name {
        non3col::NAME => Some(Box::new(Non3Col::new(k))),
        indep::NAME => Some(Box::new(MaxIs::new(k))),
        _ => None,
    }
}

/// Optimization algebra by registry name.
pub fn opt_algebra_by_name(name: &str, k: Color) -> Option<Box<dyn OptAlgebra>> {
    match name {
        indep::NAME => Some(Box::new(MaxIs::new(k))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_strings_round_trip() {
        for c in [HomClass::Non3Col(vec![]), HomClass::Non3Col(vec![1, 0x1ff]), HomClass::IndepSet(None), HomClass::IndepSet(Some(5))] {
            let s = c.to_string();
            assert_eq!(s.parse::<HomClass>().unwrap(), c, "{s}");
        }
        assert_eq!(HomClass::IndepSet(Some(5)).to_string(), "max-is:0100000005");
        assert!("non3col:123".parse::<HomClass>().is_err());
        assert!("max-is:02".parse::<HomClass>().is_err());
        assert!("other:00".parse::<HomClass>().is_err());
    }

    #[test]
    fn minus_infinity_orders_first() {
        assert!(Ext::NEG_INF < Ext::finite(i64::MIN));
        assert_eq!(Ext::finite(3).plus(Ext::NEG_INF), Ext::NEG_INF);
        assert_eq!(Ext::finite(3).plus(Ext::finite(-1)), Ext::finite(2));
    }

    #[test]
    fn registry() {
        for name in ALGEBRAS {
            assert_eq!(algebra_by_name(name, 2).unwrap().name(), name);
        }
        assert!(opt_algebra_by_name("non3col", 2).is_none());
        assert!(algebra_by_name("nope", 2).is_none());
    }
}
