use crate::{image, HomAlgebra, HomClass, OptAlgebra};
use nlc::{Color, JoinSet, Recolor};

pub(crate) const NAME: &str = "max-is";

pub const MAX_WIDTH: Color = 16;

/// Independent selections. The class of a selection is the set of colors it
/// uses, or `⊥` once two selected vertices are adjacent. Every class but
/// `⊥` accepts. Class `i < 2^k` is the color set with bit mask `i`; `⊥` is
/// class `2^k`.
#[derive(Debug, Clone, Copy)]
pub struct MaxIs {
    k: Color,
}

impl MaxIs {
    pub fn new(k: Color) -> Self {
        assert!((1..=MAX_WIDTH).contains(&k), "width {k} unsupported");
        MaxIs { k }
    }

    fn set(&self, c: &HomClass) -> Option<u32> {
        match c {
            HomClass::IndepSet(m) => *m,
            other => panic!("max-is algebra given {other}"),
        }
    }
}

impl HomAlgebra for MaxIs {
    fn name(&self) -> &'static str {
        NAME
    }

    fn k(&self) -> Color {
        self.k
    }

    fn vertex_class(&self, color: Color, _label: u32, selected: bool) -> HomClass {
        HomClass::IndepSet(Some(if selected { 1 << (color - 1) } else { 0 }))
    }

    fn join(&self, s: &JoinSet, a: &HomClass, b: &HomClass) -> HomClass {
        let (Some(x), Some(y)) = (self.set(a), self.set(b)) else {
            return HomClass::IndepSet(None);
        };
        let clash = s.pairs().iter().any(|&(i, j)| x >> (i - 1) & 1 == 1 && y >> (j - 1) & 1 == 1);
        HomClass::IndepSet(if clash { None } else { Some(x | y) })
    }

    fn recolor(&self, r: &Recolor, c: &HomClass) -> HomClass {
        HomClass::IndepSet(self.set(c).map(|x| (1..=self.k).filter(|p| x >> (p - 1) & 1 == 1).fold(0, |acc, p| acc | 1 << (image(r, p) - 1))))
    }

    fn is_accepting(&self, c: &HomClass) -> bool {
        self.set(c).is_some()
    }

    fn is_well_formed(&self, c: &HomClass) -> bool {
        match c {
            HomClass::IndepSet(None) => true,
            HomClass::IndepSet(Some(m)) => (*m as u64) < 1u64 << self.k,
            _ => false,
        }
    }
}

impl OptAlgebra for MaxIs {
    fn num_classes(&self) -> usize {
        (1 << self.k) + 1
    }

    fn class_index(&self, c: &HomClass) -> Option<usize> {
        if !self.is_well_formed(c) {
            return None;
        }
        Some(self.set(c).map_or(1 << self.k, |m| m as usize))
    }

    fn class_at(&self, i: usize) -> HomClass {
        HomClass::IndepSet(if i == 1 << self.k { None } else { Some(i as u32) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Ext;

    #[test]
    fn selected_vertex_table() {
        let a = MaxIs::new(1);
        assert_eq!(a.vertex_class(1, 0, true), HomClass::IndepSet(Some(1)));
        assert_eq!(a.vertex_class(1, 0, false), HomClass::IndepSet(Some(0)));
        assert_eq!(a.maxw_vertex(1, 0, 5), vec![Ext::finite(0), Ext::finite(5), Ext::NEG_INF]);
    }

    #[test]
    fn edge_table() {
        let a = MaxIs::new(1);
        let t = a.maxw_vertex(1, 0, 1);
        let k2 = a.maxw_join(&JoinSet::from(vec![(1, 1)]), &t, &t);
        assert_eq!(k2, vec![Ext::finite(0), Ext::finite(1), Ext::finite(2)]);
        assert_eq!(a.best_accepting(&k2), Ext::finite(1));
        let sel = a.vertex_class(1, 0, true);
        assert_eq!(a.join(&JoinSet::from(vec![(1, 1)]), &sel, &sel), HomClass::IndepSet(None));
    }

    #[test]
    fn indices_round_trip() {
        let a = MaxIs::new(3);
        for i in 0..a.num_classes() {
            assert_eq!(a.class_index(&a.class_at(i)), Some(i));
        }
        assert_eq!(a.class_index(&HomClass::IndepSet(Some(8))), None);
    }
}
