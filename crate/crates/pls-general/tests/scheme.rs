use graph_core::oracle::non_3_colorable;
use graph_core::{LabeledGraph, Verdict};
use mso_hom::{eval_tree, HomAlgebra, Non3Col};
use nlc::{to_nlc_plus, JoinSet, NlcPlusTree, NlcTree, Node, Recolor};
use pls_general::{audit_reconstruct, certificate_bits, prove_general, verify_general, BitWidths, Certificate, ClassAnn, Decision};
use proptest::prelude::*;
use serde_json::Value;

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

fn random_node(rng: &mut Mix, k: u8, verts: &[usize], density: u64) -> Node {
    if verts.len() == 1 {
        return Node::leaf(1 + rng.below(k as u64) as u8, verts[0]);
    }
    let cut = 1 + rng.below(verts.len() as u64 - 1) as usize;
    let (a, b) = verts.split_at(cut);
    let (l, r) = (random_node(rng, k, a, density), random_node(rng, k, b, density));
    if rng.below(4) == 0 {
        return Node::par(vec![l, r]);
    }
    let s: Vec<(u8, u8)> = (1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).filter(|_| rng.below(density) == 0).collect();
    let images = (0..k).map(|_| 1 + rng.below(k as u64) as u8).collect();
    Node::join(JoinSet::from(s), Recolor::from_images(images), l, r)
}

/// A connected instance: graph with shuffled ids and an NLC+ tree for it.
fn instance(seed: u64, n: usize, k: u8, density: u64) -> (LabeledGraph, NlcPlusTree) {
    let mut rng = Mix(seed);
    let verts: Vec<usize> = (0..n).collect();
    let t = loop {
        let root = if n >= 2 && rng.below(2) == 0 {
            let cut = 1 + rng.below(n as u64 - 1) as usize;
            let (a, b) = verts.split_at(cut);
            Node::join(JoinSet::full(k), Recolor::identity(k), random_node(&mut rng, k, a, density), random_node(&mut rng, k, b, density))
        } else {
            random_node(&mut rng, k, &verts, density)
        };
        let t = NlcTree::new(k, root).unwrap();
        if t.realize().is_connected() {
            break t;
        }
    };
    let mut ids: Vec<u64> = (1..=(n * n) as u64).collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.below(i as u64 + 1) as usize);
    }
    ids.truncate(n);
    let g = t.realize().to_graph().unwrap().with_ids(ids).unwrap();
    (g, to_nlc_plus(&t).unwrap())
}

fn all_accept(v: &[Verdict]) -> bool {
    v.iter().all(|x| x.accepts())
}

#[test]
fn honest_certificates_match_the_oracle() {
    let alg = Non3Col::new(3);
    let a = Decision(&alg);
    let (mut yes, mut no) = (0, 0);
    for seed in 0..120 {
        let n = 2 + seed as usize % 15;
        let (g, t) = instance(seed, n, 1 + (seed % 3) as u8, 2);
        let certs = prove_general(&g, &t, &a).unwrap();
        let verdicts = verify_general(&g, &certs, &a);
        let truth = non_3_colorable(&g).unwrap();
        assert_eq!(all_accept(&verdicts), truth, "seed {seed}");
        if truth {
            yes += 1;
            assert!(audit_reconstruct(&g, &certs, &a).is_ok());
        } else {
            no += 1;
            // honest certificates of a false instance fail only at the root class
            assert!(verdicts.iter().all(|v| *v == Verdict::Reject(6)), "seed {seed}: {verdicts:?}");
        }
    }
    assert!(yes > 10 && no > 10, "{yes} yes, {no} no");
}

#[test]
fn large_instances_are_accepted_iff_the_root_class_accepts() {
    let alg = Non3Col::new(2);
    let a = Decision(&alg);
    for seed in 0..6 {
        let n = 24 + 20 * seed as usize;
        let (g, t) = instance(1000 + seed, n, 2, 2);
        let certs = prove_general(&g, &t, &a).unwrap();
        let truth = alg.is_accepting(&eval_tree(&t.root, &alg).unwrap());
        assert_eq!(all_accept(&verify_general(&g, &certs, &a)), truth, "n {n}");
        let d = certs.iter().map(Certificate::d).max().unwrap();
        assert_eq!(d, t.depth() + 1);
    }
}

#[test]
fn single_vertex() {
    let alg = Non3Col::new(1);
    let a = Decision(&alg);
    let g = LabeledGraph::new(vec![4], vec![0], &[]).unwrap();
    let t = NlcPlusTree::new(1, Node::leaf(1, 0)).unwrap();
    let certs = prove_general(&g, &t, &a).unwrap();
    assert_eq!(verify_general(&g, &certs, &a), vec![Verdict::Reject(6)]);
}

#[test]
fn triangle_is_rejected_at_the_root_class() {
    let alg = Non3Col::new(1);
    let a = Decision(&alg);
    let one = JoinSet::from(vec![(1, 1)]);
    let id = Recolor::identity(1);
    let root = Node::join(one.clone(), id.clone(), Node::join(one, id, Node::leaf(1, 0), Node::leaf(1, 1)), Node::leaf(1, 2));
    let t = NlcPlusTree::new(1, root).unwrap();
    let g = LabeledGraph::new(vec![3, 1, 2], vec![0; 3], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let certs = prove_general(&g, &t, &a).unwrap();
    assert_eq!(verify_general(&g, &certs, &a), vec![Verdict::Reject(6); 3]);
}

/// Every leaf of a JSON tree, as a path of keys and indices.
fn leaves(v: &Value, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| {
            path.push(Value::String(k.clone()));
            leaves(x, path, out);
            path.pop();
        }),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| {
            path.push(Value::from(i));
            leaves(x, path, out);
            path.pop();
        }),
        _ => out.push(path.clone()),
    }
}

fn at<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |v, p| match p {
        Value::String(k) => &mut v[k.as_str()],
        p => &mut v[p.as_u64().unwrap() as usize],
    })
}

/// One random edit of one vertex's certificate: a number nudged, or a leaf
/// replaced by a same-typed leaf taken from another certificate.
fn mutate(rng: &mut Mix, certs: &[Certificate<ClassAnn>]) -> Option<Vec<Certificate<ClassAnn>>> {
    let u = rng.below(certs.len() as u64) as usize;
    let mut v = serde_json::to_value(&certs[u]).unwrap();
    let mut ls = Vec::new();
    leaves(&v, &mut Vec::new(), &mut ls);
    let path = &ls[rng.below(ls.len() as u64) as usize];
    let slot = at(&mut v, path);
    match slot.clone() {
        Value::Number(x) if rng.below(2) == 0 => {
            let x = x.as_i64().unwrap();
            *slot = Value::from(if rng.below(2) == 0 { x + 1 } else { (x - 1).max(0) });
        }
        old => {
            let donor = serde_json::to_value(&certs[rng.below(certs.len() as u64) as usize]).unwrap();
            let mut dl = Vec::new();
            leaves(&donor, &mut Vec::new(), &mut dl);
            let mut donor = donor;
            let pick = dl.iter().map(|p| at(&mut donor, p).clone()).filter(|x| std::mem::discriminant(x) == std::mem::discriminant(&old) && *x != old).collect::<Vec<_>>();
            if pick.is_empty() {
                return None;
            }
            *slot = pick[rng.below(pick.len() as u64) as usize].clone();
        }
    }
    let c: Certificate<ClassAnn> = serde_json::from_value(v).ok()?;
    let mut out = certs.to_vec();
    out[u] = c;
    Some(out)
}

#[test]
fn stolen_certificates_fail_on_a_colorable_graph() {
    let alg = Non3Col::new(3);
    let a = Decision(&alg);
    let mut tried = 0;
    for seed in 0..400 {
        let (h, t) = instance(seed, 5 + seed as usize % 8, 2, 2);
        if !non_3_colorable(&h).unwrap() {
            continue;
        }
        let certs = prove_general(&h, &t, &a).unwrap();
        // drop edges one at a time until the graph becomes colorable
        let mut edges = h.edges();
        let mut rng = Mix(seed);
        while !edges.is_empty() {
            edges.remove(rng.below(edges.len() as u64) as usize);
            let g = LabeledGraph::new(h.ids().to_vec(), vec![0; h.n()], &edges).unwrap();
            if !non_3_colorable(&g).unwrap() {
                tried += 1;
                assert!(!all_accept(&verify_general(&g, &certs, &a)), "seed {seed}");
                for _ in 0..20 {
                    if let Some(m) = mutate(&mut rng, &certs) {
                        assert!(!all_accept(&verify_general(&g, &m, &a)), "seed {seed}");
                    }
                }
                break;
            }
        }
    }
    assert!(tried > 20, "{tried}");
}

#[test]
fn flipped_links_are_caught() {
    let alg = Non3Col::new(2);
    let a = Decision(&alg);
    let (g, t) = instance(7, 14, 2, 2);
    let honest = prove_general(&g, &t, &a).unwrap();
    for u in 0..g.n() {
        for i in 1..honest[u].d() {
            let mut certs = honest.clone();
            if let Some(l) = certs[u].main[i].link.as_mut() {
                *l ^= 1;
                assert!(!all_accept(&verify_general(&g, &certs, &a)), "vertex {u} level {i}");
            }
        }
    }
}

#[test]
fn bundle_json_round_trip() {
    let alg = Non3Col::new(2);
    let a = Decision(&alg);
    let (g, t) = instance(3, 10, 2, 2);
    let certs = prove_general(&g, &t, &a).unwrap();
    let s = serde_json::to_string(&certs).unwrap();
    let back: Vec<Certificate<ClassAnn>> = serde_json::from_str(&s).unwrap();
    assert_eq!(back, certs);
    let v: Value = serde_json::from_str(&s).unwrap();
    for key in ["main", "aux", "service0", "service1"] {
        assert!(v[0].get(key).is_some(), "{key}");
    }
    assert!(v[0]["main"][0]["h"].as_str().unwrap().starts_with("non3col:"));
}

#[test]
fn sizes_track_depth() {
    let alg = Non3Col::new(2);
    let a = Decision(&alg);
    let (g, t) = instance(5, 40, 2, 2);
    let certs = prove_general(&g, &t, &a).unwrap();
    let w = BitWidths::new(g.n(), 2, 2);
    for c in &certs {
        let bits = certificate_bits(&a, c, &w);
        assert!(bits >= c.d() * w.op());
        assert!(bits <= c.d() * 8 * (w.op() + 2 * 4 * 9 + 8 * w.id + 64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// On a true instance a surviving edit must still describe the graph
    /// truthfully, which the from-scratch reconstruction confirms.
    #[test]
    fn accepted_edits_survive_the_audit(seed: u64, n in 4usize..12) {
        let alg = Non3Col::new(2);
        let a = Decision(&alg);
        let (g, t) = instance(seed, n, 2, 1);
        prop_assume!(non_3_colorable(&g).unwrap());
        let certs = prove_general(&g, &t, &a).unwrap();
        let mut rng = Mix(seed ^ 0x5555);
        for _ in 0..10 {
            if let Some(m) = mutate(&mut rng, &certs) {
                if all_accept(&verify_general(&g, &m, &a)) {
                    prop_assert!(audit_reconstruct(&g, &m, &a).is_ok());
                }
            }
        }
    }
}

#[test]
fn edits_reach_many_conditions() {
    let alg = Non3Col::new(2);
    let a = Decision(&alg);
    let mut hit = std::collections::BTreeSet::new();
    for seed in 0..40 {
        let (g, t) = instance(seed, 10, 2, 1);
        if !non_3_colorable(&g).unwrap() {
            continue;
        }
        let certs = prove_general(&g, &t, &a).unwrap();
        let mut rng = Mix(seed);
        for _ in 0..60 {
            if let Some(m) = mutate(&mut rng, &certs) {
                hit.extend(verify_general(&g, &m, &a).iter().filter_map(|v| v.condition()));
            }
        }
    }
    eprintln!("{hit:?}");
    assert!(hit.len() >= 18, "{hit:?}");
}
