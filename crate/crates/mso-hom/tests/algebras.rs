use graph_core::oracle::{max_weight_is, non_3_colorable};
use mso_hom::oracle::{brute_force_class_non3col, brute_force_maxw_indep};
use mso_hom::{eval_tree, eval_tree_opt, HomAlgebra, HomClass, MaxIs, Non3Col, OptAlgebra};
use nlc::{JoinSet, NlcTree, Node, Recolor};
use proptest::prelude::*;

struct Mix(u64);

impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_node(rng: &mut Mix, k: u8, verts: &[usize]) -> Node {
    if verts.len() == 1 {
        return Node::leaf(1 + rng.below(k as u64) as u8, verts[0]);
    }
    let cut = 1 + rng.below(verts.len() as u64 - 1) as usize;
    let (a, b) = verts.split_at(cut);
    let (l, r) = (random_node(rng, k, a), random_node(rng, k, b));
    if rng.below(4) == 0 {
        return Node::par(vec![l, r]);
    }
    let s: Vec<(u8, u8)> = (1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).filter(|_| rng.below(2) == 0).collect();
    let images = (0..k).map(|_| 1 + rng.below(k as u64) as u8).collect();
    Node::join(JoinSet::from(s), Recolor::from_images(images), l, r)
}

fn random_tree(seed: u64, n: usize, k: u8) -> NlcTree {
    let verts: Vec<usize> = (0..n).collect();
    NlcTree::new(k, random_node(&mut Mix(seed), k, &verts)).unwrap()
}

fn clique_tree(n: usize) -> NlcTree {
    let mut root = Node::leaf(1, 0);
    for v in 1..n {
        root = Node::join(JoinSet::from(vec![(1, 1)]), Recolor::identity(1), root, Node::leaf(1, v));
    }
    NlcTree::new(1, root).unwrap()
}

/// C5 grown as a path: color 3 marks the first vertex, 1 the open end,
/// 2 the interior, 4 the vertex being attached.
fn c5_tree() -> NlcTree {
    let step = Recolor::from_images(vec![2, 2, 3, 1]);
    let mut root = Node::join(JoinSet::from(vec![(3, 4)]), step.clone(), Node::leaf(3, 0), Node::leaf(4, 1));
    for v in 2..4 {
        root = Node::join(JoinSet::from(vec![(1, 4)]), step.clone(), root, Node::leaf(4, v));
    }
    NlcTree::new(4, Node::join(JoinSet::from(vec![(1, 4), (3, 4)]), step, root, Node::leaf(4, 4))).unwrap()
}

/// K4 with a pendant vertex hanging off vertex 3.
fn k4_pendant_tree() -> NlcTree {
    let one = JoinSet::from(vec![(1, 1)]);
    let id = Recolor::identity(2);
    let k3 = Node::join(one.clone(), id.clone(), Node::join(one, id.clone(), Node::leaf(1, 0), Node::leaf(1, 1)), Node::leaf(1, 2));
    let k4 = Node::join(JoinSet::from(vec![(1, 2)]), id, k3, Node::leaf(2, 3));
    NlcTree::new(2, Node::join(JoinSet::from(vec![(2, 1)]), Recolor::identity(2), k4, Node::leaf(1, 4))).unwrap()
}

#[test]
fn cliques() {
    let a = Non3Col::new(1);
    assert!(a.is_accepting(&eval_tree(&clique_tree(4).root, &a).unwrap()));
    assert!(!a.is_accepting(&eval_tree(&clique_tree(3).root, &a).unwrap()));
    assert_eq!(eval_tree(&Node::leaf(1, 0), &a).unwrap(), a.vertex_class(1, 0, false));
}

#[test]
fn five_cycle_is_colorable() {
    let t = c5_tree();
    assert_eq!(t.realize().edges(), vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
    let c = eval_tree(&t.root, &Non3Col::new(4)).unwrap();
    assert!(!Non3Col::new(4).is_accepting(&c));
}

#[test]
fn k4_with_pendant() {
    let t = k4_pendant_tree();
    assert_eq!(t.realize().edges().len(), 7);
    let a = Non3Col::new(2);
    let c = eval_tree(&t.root, &a).unwrap();
    assert_eq!(c, brute_force_class_non3col(&t.realize(), 2).unwrap());
    assert!(a.is_accepting(&c));
}

#[test]
fn path_of_four_unit_weights() {
    let s = JoinSet::from(vec![(1, 2)]);
    let step = Recolor::from_images(vec![2, 1]);
    let mut root = Node::leaf(1, 0);
    for v in 1..4 {
        root = Node::join(s.clone(), step.clone(), root, Node::leaf(2, v));
    }
    let a = MaxIs::new(2);
    let v = eval_tree_opt(&root, &a, &[false; 4], &[1; 4]).unwrap();
    assert_eq!(v.class, HomClass::IndepSet(Some(0)));
    assert_eq!(v.weight, 0);
    assert_eq!(a.best_accepting(&v.maxw), mso_hom::Ext::finite(2));
}

#[test]
fn width_is_checked() {
    let a = Non3Col::new(1);
    let t = Node::join(JoinSet::from(vec![(1, 2)]), Recolor::identity(2), Node::leaf(1, 0), Node::leaf(2, 1));
    assert!(eval_tree(&t, &a).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn non3col_matches_brute_force(seed: u64, n in 1usize..10, k in 1u8..4) {
        let t = random_tree(seed, n, k);
        let got = eval_tree(&t.root, &Non3Col::new(k)).unwrap();
        prop_assert_eq!(got, brute_force_class_non3col(&t.realize(), k).unwrap());
    }

    #[test]
    fn non3col_acceptance_matches_oracle(seed: u64, n in 1usize..13, k in 1u8..4) {
        let t = random_tree(seed, n, k);
        let a = Non3Col::new(k);
        let accepted = a.is_accepting(&eval_tree(&t.root, &a).unwrap());
        let g = t.realize().to_graph().unwrap();
        prop_assert_eq!(accepted, non_3_colorable(&g).unwrap());
    }

    #[test]
    fn max_is_tables(seed: u64, n in 1usize..15, k in 1u8..4, wseed: u64, selmask: u32) {
        let t = random_tree(seed, n, k);
        let mut rng = Mix(wseed);
        let weights: Vec<i64> = (0..n).map(|_| rng.below(17) as i64 - 8).collect();
        let sel: Vec<bool> = (0..n).map(|v| selmask >> v & 1 == 1).collect();
        let a = MaxIs::new(k);
        let v = eval_tree_opt(&t.root, &a, &sel, &weights).unwrap();
        let realized = t.realize();
        let g = realized.to_graph().unwrap().with_weights(weights.clone()).unwrap();
        prop_assert_eq!(a.best_accepting(&v.maxw).0, Some(max_weight_is(&g).unwrap()));
        prop_assert_eq!(a.class_index(&v.class).map(|i| v.maxw[i] >= mso_hom::Ext::finite(v.weight)), Some(true));
        prop_assert_eq!(v.weight, (0..n).filter(|&u| sel[u]).map(|u| weights[u]).sum::<i64>());
        if n <= 12 {
            prop_assert_eq!(v.maxw, brute_force_maxw_indep(&realized, k, &weights).unwrap());
        }
    }

    #[test]
    fn parallel_is_associative(seed: u64, k in 1u8..3) {
        let a = Non3Col::new(k);
        let classes: Vec<HomClass> = (0..3).map(|i| eval_tree(&random_tree(seed.wrapping_add(i), 3, k).root, &a).unwrap()).collect();
        let left = a.parallel(&a.parallel(&classes[0], &classes[1]), &classes[2]);
        let right = a.parallel(&classes[0], &a.parallel(&classes[1], &classes[2]));
        prop_assert_eq!(left, right);
        let b = MaxIs::new(k);
        let xs: Vec<HomClass> = (0..3).map(|i| b.class_at((seed >> (8 * i)) as usize % b.num_classes())).collect();
        prop_assert_eq!(b.parallel(&b.parallel(&xs[0], &xs[1]), &xs[2]), b.parallel(&xs[0], &b.parallel(&xs[1], &xs[2])));
    }
}
