use graph_core::oracle::has_induced_p4;
use graph_core::{LabeledGraph, Verdict};
use harness::fuzz::{fuzz_soundness, MutationSpec, Strategy};
use harness::gen::{cograph_cover, random_cograph, random_colored_nlc, random_nlc, rng};
use harness::scheme::{CographScheme, DecisionScheme, Scheme};
use harness::simulate::{simulate_round, HarnessError};
use mso_hom::Non3Col;
use rand::seq::SliceRandom;
use std::process::Command;

fn spec(strategies: &[Strategy], count: usize, seed: u64) -> MutationSpec {
    MutationSpec { strategies: strategies.to_vec(), count, seed }
}

#[test]
fn cograph_generator() {
    let k1 = random_cograph(1, &mut rng(0));
    assert_eq!((k1.n(), k1.edges().len()), (1, 0));
    for seed in 0..20 {
        assert!(!has_induced_p4(&random_cograph(4, &mut rng(seed))));
    }
    assert!(nlc::build_cotree(&random_cograph(256, &mut rng(1))).is_ok());
}

#[test]
fn nlc_generator() {
    for seed in 0..10 {
        let (g, t) = random_nlc(12, 1, 0.5, &mut rng(seed));
        assert_eq!(nlc::validate_nlc_plus(&t), Ok(()));
        assert!(graph_core::is_connected(&g));
    }
    let (k2, _) = random_nlc(2, 1, 0.0, &mut rng(3));
    assert_eq!(k2.edges(), vec![(0, 1)]);
    let (g, t) = random_nlc(64, 4, 0.3, &mut rng(4));
    assert!(t.realize().same_edges(&g));
    let (g, t) = random_colored_nlc(40, 3, 0.5, &mut rng(5));
    assert!(t.realize().same_edges(&g) && graph_core::is_connected(&g));
    assert_eq!(graph_core::oracle::non_3_colorable(&random_colored_nlc(12, 3, 0.5, &mut rng(6)).0), Ok(false));
}

#[test]
fn one_round_simulation() {
    let g = random_cograph(30, &mut rng(2));
    let certs = CographScheme.prove(&g, None).unwrap();
    let run = simulate_round(&CographScheme, &g, &certs, 2).unwrap();
    assert!(run.all_accept() && run.verdicts.len() == 30 && run.max_bits as f64 >= run.mean_bits);

    let k1 = LabeledGraph::unlabeled(1, &[]).unwrap();
    let run = simulate_round(&CographScheme, &k1, &CographScheme.prove(&k1, None).unwrap(), 0).unwrap();
    assert_eq!(run.verdicts, vec![Verdict::Accept]);

    assert_eq!(simulate_round(&CographScheme, &g, &certs[1..], 0), Err(HarnessError::MissingCertificate { got: 29, n: 30 }));
}

#[test]
fn p4_with_random_bundles_is_rejected() {
    let p4 = LabeledGraph::new(vec![3, 9, 1, 14], vec![0; 4], &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let donors: Vec<_> = (0..6).map(|s| CographScheme.prove(&random_cograph(4, &mut rng(s)).with_ids(p4.ids().to_vec()).unwrap(), None).unwrap()).collect();
    let base = CographScheme.prove(&cograph_cover(&p4), None).unwrap();
    let run = simulate_round(&CographScheme, &p4, &base, 0).unwrap();
    assert!(!run.all_accept());
    let report = fuzz_soundness(&CographScheme, &p4, vec![base], donors, "p4", &spec(&[Strategy::RandomBundle], 10_000, 1));
    assert!(report.ok());
    assert_eq!(report.all_accepts(), 0);
    assert_eq!(report.per_strategy[&Strategy::RandomBundle].trials, 10_000);
}

#[test]
fn honest_bundle_is_no_failure() {
    let g = random_cograph(12, &mut rng(8));
    let honest = CographScheme.prove(&g, None).unwrap();
    let none = fuzz_soundness(&CographScheme, &g, vec![honest.clone()], vec![], "honest", &spec(&[Strategy::FieldReplace], 0, 0));
    assert!(none.ok() && none.trials == 0);
    // A swap without donors permutes the honest bundle; identity swaps
    // all-accept and pass the audit.
    let swaps = fuzz_soundness(&CographScheme, &g, vec![honest], vec![], "honest", &spec(&Strategy::ALL, 500, 0));
    assert!(swaps.ok());
}

#[test]
fn triangle_never_certified_non_three_colorable() {
    let k3 = LabeledGraph::new(vec![5, 2, 7], vec![0; 3], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let alg = Non3Col::new(4);
    let s = DecisionScheme::decision(&alg);
    let base = s.prove(&k3, None).unwrap();
    assert!(!simulate_round(&s, &k3, &base, 0).unwrap().all_accept());
    let report = fuzz_soundness(&s, &k3, vec![base], vec![], "k3", &spec(&Strategy::ALL, 3000, 4));
    assert_eq!(report.all_accepts(), 0);
}

#[test]
fn reports_are_reproducible() {
    let g = random_cograph(20, &mut rng(5));
    let honest = CographScheme.prove(&g, None).unwrap();
    let run = |seed| fuzz_soundness(&CographScheme, &g, vec![honest.clone()], vec![], "g", &spec(&Strategy::ALL, 400, seed)).to_jsonl();
    assert_eq!(run(3), run(3));
    assert_ne!(run(3), run(4));
}

#[test]
fn verdicts_follow_ids_not_file_order() {
    let (g, t) = random_nlc(24, 3, 0.4, &mut rng(11));
    let alg = Non3Col::new(3);
    let s = DecisionScheme::decision(&alg);
    let certs = s.prove(&g, Some(&t)).unwrap();
    let verdicts = simulate_round(&s, &g, &certs, 0).unwrap().verdicts;

    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut rng(12));
    let mut pos = vec![0; g.n()];
    for (i, &u) in order.iter().enumerate() {
        pos[u] = i;
    }
    let ids = order.iter().map(|&u| g.id(u)).collect();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (pos[u], pos[v])).collect();
    let h = LabeledGraph::new(ids, vec![0; g.n()], &edges).unwrap();
    let shuffled: Vec<_> = order.iter().map(|&u| certs[u].clone()).collect();
    let again = simulate_round(&s, &h, &shuffled, 0).unwrap().verdicts;
    for u in 0..g.n() {
        assert_eq!(verdicts[u], again[pos[u]]);
    }
}

fn cwcert(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cwcert")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn command_line_round_trip() {
    let dir = std::env::temp_dir().join(format!("cwcert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = |f: &str| dir.join(f).to_str().unwrap().to_string();

    assert_eq!(cwcert(&["gen", "cograph", "--n", "20", "--seed", "3", "-o", &p("g.json"), "-t", &p("t.json")]).0, 0);
    assert_eq!(cwcert(&["decompose", &p("g.json"), "-o", &p("t2.json")]).0, 0);
    assert_eq!(std::fs::read(p("t.json")).unwrap(), std::fs::read(p("t2.json")).unwrap());
    assert_eq!(cwcert(&["prove", "--scheme", "cograph", &p("g.json"), "-o", &p("b.json")]).0, 0);
    let (code, csv) = cwcert(&["verify", "--scheme", "cograph", &p("g.json"), &p("b.json")]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("vertex_id,accept,failed_condition"));
    assert_eq!(csv.lines().filter(|l| l.ends_with(",true,")).count(), 20);

    assert_eq!(cwcert(&["prove", "--scheme", "general", "--algebra", "non3col", &p("g.json"), &p("t.json"), "-o", &p("bg.json")]).0, 0);
    let (code, csv) = cwcert(&["verify", "--scheme", "general", "--algebra", "non3col", &p("g.json"), &p("bg.json")]);
    let colorable = graph_core::oracle::non_3_colorable(&graph_core::io::from_json(&std::fs::read_to_string(p("g.json")).unwrap()).unwrap()) == Ok(false);
    assert_eq!(code, if colorable { 1 } else { 0 }, "{csv}");

    let (code, _) = cwcert(&["fuzz", "--scheme", "cograph", &p("g.json"), "--count", "300", "--seed", "2", "-o", &p("r.jsonl")]);
    assert_eq!(code, 0);
    cwcert(&["fuzz", "--scheme", "cograph", &p("g.json"), "--count", "300", "--seed", "2", "-o", &p("r.jsonl")]);
    let lines: Vec<String> = std::fs::read_to_string(p("r.jsonl")).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);

    let (code, csv) = cwcert(&["measure", "--scheme", "cograph", "--ns", "8,16", "--trials", "2"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("n,max_bits,mean_bits\n") && csv.contains("# fit"));

    assert_eq!(cwcert(&["verify", &p("g.json")]).0, 2);
    assert_eq!(cwcert(&["prove", "--scheme", "general", "--algebra", "nope", &p("g.json")]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn opt_scheme_from_the_command_line() {
    let dir = std::env::temp_dir().join(format!("cwcert-opt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = |f: &str| dir.join(f).to_str().unwrap().to_string();
    let g = LabeledGraph::new(vec![4, 8, 15, 16], vec![0; 4], &[(0, 1), (1, 2), (2, 3)]).unwrap();
    for (sel, accept) in [(vec![true, false, true, false], 0), (vec![false, true, false, false], 1)] {
        std::fs::write(p("g.json"), graph_core::io::to_json(&g.clone().with_sel(sel).unwrap())).unwrap();
        assert_eq!(cwcert(&["prove", "--opt", "max-is", &p("g.json"), "-o", &p("b.json")]).0, 0);
        assert_eq!(cwcert(&["verify", "--opt", "max-is", &p("g.json"), &p("b.json")]).0, accept);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
