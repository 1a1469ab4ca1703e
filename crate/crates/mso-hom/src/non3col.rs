use crate::{image, HomAlgebra, HomClass};
use nlc::{Color, JoinSet, Recolor};
use std::collections::HashSet;

pub(crate) const NAME: &str = "non3col";

/// Widest supported algebra: a triple must fit in 32 bits.
pub const MAX_WIDTH: Color = 10;

/// Non-3-colorability. A class is the set of color-occupancy triples of the
/// graph's proper 3-colorings; the empty set, and only it, accepts.
#[derive(Debug, Clone, Copy)]
pub struct Non3Col {
    k: Color,
}

impl Non3Col {
    pub fn new(k: Color) -> Self {
        assert!((1..=MAX_WIDTH).contains(&k), "width {k} unsupported");
        Non3Col { k }
    }

    fn part_mask(&self) -> u32 {
        (1u32 << self.k) - 1
    }

    fn parts(&self, t: u32) -> [u32; 3] {
        let m = self.part_mask();
        let k = self.k as u32;
        [t & m, (t >> k) & m, (t >> (2 * k)) & m]
    }

    fn pack(&self, p: [u32; 3]) -> u32 {
        let k = self.k as u32;
        p[0] | p[1] << k | p[2] << (2 * k)
    }

    fn triples<'a>(&self, c: &'a HomClass) -> &'a [u32] {
        match c {
            HomClass::Non3Col(t) => t,
            other => panic!("non3col algebra given {other}"),
        }
    }

    fn collect(&self, out: impl Iterator<Item = u32>) -> HomClass {
        let bits = 3 * self.k as u32;
        if bits <= 18 {
            let mut seen = vec![0u64; (1usize << bits).div_ceil(64)];
            for t in out {
                seen[t as usize / 64] |= 1 << (t % 64);
            }
            let v = seen
                .iter()
                .enumerate()
                .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| (w * 64 + b) as u32))
                .collect();
            HomClass::Non3Col(v)
        } else {
            let set: HashSet<u32> = out.collect();
            let mut v: Vec<u32> = set.into_iter().collect();
            v.sort_unstable();
            HomClass::Non3Col(v)
        }
    }
}

impl HomAlgebra for Non3Col {
    fn name(&self) -> &'static str {
        NAME
    }

    fn k(&self) -> Color {
        self.k
    }

    fn vertex_class(&self, color: Color, _label: u32, _selected: bool) -> HomClass {
        let u = 1u32 << (color - 1);
        let mut t = vec![self.pack([u, 0, 0]), self.pack([0, u, 0]), self.pack([0, 0, u])];
        t.sort_unstable();
        HomClass::Non3Col(t)
    }

    fn join(&self, s: &JoinSet, a: &HomClass, b: &HomClass) -> HomClass {
        // succ[p]: colors q on the right that a left vertex of color p meets
        let mut succ = vec![0u32; self.k as usize + 1];
        for &(p, q) in s.pairs() {
            succ[p as usize] |= 1 << (q - 1);
        }
        let forbidden = |y: u32| {
            let parts = self.parts(y);
            let mut f = [0u32; 3];
            for (j, &part) in parts.iter().enumerate() {
                for p in 1..=self.k {
                    if part >> (p - 1) & 1 == 1 {
                        f[j] |= succ[p as usize];
                    }
                }
            }
            self.pack(f)
        };
        let (ta, tb) = (self.triples(a), self.triples(b));
        let out = ta.iter().flat_map(|&y| {
            let f = forbidden(y);
            tb.iter().filter(move |&&z| z & f == 0).map(move |&z| y | z)
        });
        self.collect(out)
    }

    fn recolor(&self, r: &Recolor, c: &HomClass) -> HomClass {
        let map = |b: u32| (1..=self.k).filter(|p| b >> (p - 1) & 1 == 1).fold(0, |acc, p| acc | 1 << (image(r, p) - 1));
        let out = self.triples(c).iter().map(|&t| {
            let [b1, b2, b3] = self.parts(t);
            self.pack([map(b1), map(b2), map(b3)])
        });
        self.collect(out)
    }

    fn is_accepting(&self, c: &HomClass) -> bool {
        self.triples(c).is_empty()
    }

    fn is_well_formed(&self, c: &HomClass) -> bool {
        match c {
            HomClass::Non3Col(t) => {
                let limit = 1u64 << (3 * self.k as u32);
                t.windows(2).all(|w| w[0] < w[1]) && t.iter().all(|&x| (x as u64) < limit)
            }
            _ => false,
        }
    }
}
