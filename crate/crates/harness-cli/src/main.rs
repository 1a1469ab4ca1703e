use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_core::LabeledGraph;
use harness::fuzz::{honest_donors, Fuzzer, MutationSpec, Strategy};
use harness::gen::{cograph_cover, random_cograph, random_nlc, rng};
use harness::measure::{balanced_tree, fit, measure_sizes, to_csv, Growth};
use harness::scheme::{default_tree, CographScheme, DecisionScheme, OptScheme, Scheme};
use harness::simulate::simulate_round;
use nlc::NlcPlusTree;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cwcert", about = "Certify graph properties with proof-labeling schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cograph,
    Nlc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    Cograph,
    General,
    Opt,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random connected instance.
    Gen {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
        /// Also write a decomposition.
        #[arg(short = 't', long)]
        tree: Option<PathBuf>,
    },
    /// Balanced NLC⁺ decomposition of a connected cograph.
    Decompose {
        graph: PathBuf,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Write honest certificates.
    Prove {
        #[command(flatten)]
        sel: Select,
        graph: PathBuf,
        tree: Option<PathBuf>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Run the one-round verifier; CSV of per-vertex verdicts.
    Verify {
        #[command(flatten)]
        sel: Select,
        graph: PathBuf,
        bundle: PathBuf,
        /// Annotation width; read from the bundle when omitted.
        #[arg(long)]
        k: Option<u8>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Mutated and random bundles against the verifier; appends a JSON line.
    Fuzz {
        #[command(flatten)]
        sel: Select,
        graph: PathBuf,
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = Strategy::ALL.to_vec())]
        strategies: Vec<Strategy>,
        /// Random cographs on the same identifiers used as swap donors.
        #[arg(long, default_value_t = 8)]
        donors: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Certificate sizes on random cographs, with a fit in the footer.
    Measure {
        #[command(flatten)]
        sel: Select,
        #[arg(long, value_delimiter = ',', default_values_t = vec![16, 32, 64, 128, 256])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Select {
    #[arg(long, value_enum, default_value = "cograph")]
    scheme: SchemeKind,
    #[arg(long, default_value = "non3col")]
    algebra: String,
    /// Shorthand for `--scheme opt --algebra NAME`.
    #[arg(long)]
    opt: Option<String>,
}

impl Select {
    fn resolve(&self) -> (SchemeKind, &str) {
        match &self.opt {
            Some(name) => (SchemeKind::Opt, name),
            None => (self.scheme, &self.algebra),
        }
    }
}

fn read(p: &Path) -> Result<String, String> {
    std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn write(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(p: &Path) -> Result<LabeledGraph, String> {
    graph_core::io::from_json(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))
}

fn load_tree(p: &Option<PathBuf>) -> Result<Option<NlcPlusTree>, String> {
    p.as_ref().map(|p| nlc::plus_tree_from_json(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))).transpose()
}

/// What a command does once the scheme is fixed.
enum Action<'a> {
    Prove { g: LabeledGraph, t: Option<NlcPlusTree>, out: &'a Option<PathBuf> },
    Verify { g: LabeledGraph, bundle: String, out: &'a Option<PathBuf> },
    Fuzz { g: LabeledGraph, t: Option<NlcPlusTree>, spec: MutationSpec, donors: usize, instance: String, out: &'a Option<PathBuf> },
    Measure { ns: Vec<usize>, trials: usize, seed: u64, out: &'a Option<PathBuf> },
}

fn run<S: Scheme>(s: &S, action: Action) -> Result<bool, String> {
    match action {
        Action::Prove { g, t, out } => {
            let certs = s.prove(&g, t.as_ref()).map_err(|e| e.to_string())?;
            write(out, &format!("{}\n", serde_json::to_string(&certs).map_err(|e| e.to_string())?))?;
            Ok(true)
        }
        Action::Verify { g, bundle, out } => {
            let certs: Vec<S::Cert> = serde_json::from_str(&bundle).map_err(|e| format!("bundle: {e}"))?;
            let run = simulate_round(s, &g, &certs, 0).map_err(|e| e.to_string())?;
            let mut csv = String::from("vertex_id,accept,failed_condition\n");
            for (u, v) in run.verdicts.iter().enumerate() {
                let failed = v.condition().map(|c| c.to_string()).unwrap_or_default();
                csv.push_str(&format!("{},{},{failed}\n", g.id(u), v.accepts()));
            }
            write(out, &csv)?;
            Ok(run.all_accept())
        }
        Action::Fuzz { g, t, spec, donors, instance, out } => {
            let mut r = rng(spec.seed ^ 0x5eed);
            let alternatives: Vec<(LabeledGraph, Option<NlcPlusTree>)> = (0..donors)
                .filter_map(|_| {
                    let h = random_cograph(g.n(), &mut r).with_ids(g.ids().to_vec()).ok()?;
                    let h = match g.weights() {
                        Some(w) => h.with_weights(w.to_vec()).ok()?,
                        None => h,
                    };
                    let h = match g.sel().and_then(|_| graph_core::oracle::max_weight_is_witness(&h).ok()) {
                        Some((_, sel)) => h.with_sel(sel).ok()?,
                        None => h,
                    };
                    let t = balanced_tree(&h).ok();
                    Some((h, t))
                })
                .collect();
            let donors = honest_donors(s, &alternatives);
            let own = s.prove(&g, t.as_ref()).or_else(|_| s.prove(&cograph_cover(&g), None));
            let mut bases: Vec<Vec<S::Cert>> = own.into_iter().collect();
            bases.extend(donors.iter().take(2).cloned());
            if bases.is_empty() {
                return Err("no starting bundle for this instance".into());
            }
            let report = Fuzzer::new(s, &g, bases, donors, spec.seed).campaign(&instance, &spec);
            let line = format!("{}\n", report.to_jsonl());
            match out {
                Some(p) => OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(p)
                    .and_then(|mut f| f.write_all(line.as_bytes()))
                    .map_err(|e| format!("{}: {e}", p.display()))?,
                None => print!("{line}"),
            }
            Ok(report.ok())
        }
        Action::Measure { ns, trials, seed, out } => {
            let rows = measure_sizes(s, &ns, trials, seed).map_err(|e| e.to_string())?;
            let growth = if s.name() == "cograph" { Growth::Log } else { Growth::LogSquared };
            let f = (rows.len() > 1).then(|| fit(&rows, growth));
            write(out, &to_csv(&rows, f.as_ref()))?;
            Ok(true)
        }
    }
}

fn width_of(action: &Action) -> Result<u8, String> {
    let from_tree = |g: &LabeledGraph, t: &Option<NlcPlusTree>| -> Result<u8, String> {
        match t {
            Some(t) => Ok(t.k),
            None => default_tree(g).map(|t| t.k).map_err(|e| e.to_string()),
        }
    };
    match action {
        Action::Prove { g, t, .. } | Action::Fuzz { g, t, .. } => from_tree(g, t),
        Action::Verify { bundle, .. } => {
            let v: serde_json::Value = serde_json::from_str(bundle).map_err(|e| format!("bundle: {e}"))?;
            let colors = v[0]["main"][0]["color"].as_array().map(|a| a.len()).ok_or("bundle carries no color counts; pass --k")?;
            u8::try_from(colors).map_err(|e| e.to_string())
        }
        Action::Measure { .. } => Ok(4),
    }
}

fn dispatch(kind: SchemeKind, algebra: &str, k: Option<u8>, action: Action) -> Result<bool, String> {
    if kind == SchemeKind::Cograph {
        return run(&CographScheme, action);
    }
    let k = match k {
        Some(k) => k,
        None => width_of(&action)?,
    };
    if kind == SchemeKind::General {
        let alg = mso_hom::algebra_by_name(algebra, k).ok_or_else(|| format!("unknown algebra {algebra}"))?;
        run(&DecisionScheme::decision(alg.as_ref()), action)
    } else {
        let alg = mso_hom::opt_algebra_by_name(algebra, k).ok_or_else(|| format!("unknown optimization algebra {algebra}"))?;
        run(&OptScheme::opt(alg.as_ref()), action)
    }
}

fn execute(cmd: Cmd) -> Result<bool, String> {
    match cmd {
        Cmd::Gen { family, n, k, density, seed, out, tree } => {
            if n == 0 || k == 0 {
                return Err("need n ≥ 1 and k ≥ 1".into());
            }
            let mut r = rng(seed);
            let (g, t) = match family {
                Family::Cograph => {
                    let g = random_cograph(n, &mut r);
                    let t = balanced_tree(&g).map_err(|e| e.to_string())?;
                    (g, t)
                }
                Family::Nlc => random_nlc(n, k, density, &mut r),
            };
            write(&out, &format!("{}\n", graph_core::io::to_json(&g)))?;
            if let Some(p) = tree {
                write(&Some(p), &format!("{}\n", serde_json::to_string(&t).map_err(|e| e.to_string())?))?;
            }
            Ok(true)
        }
        Cmd::Decompose { graph, out } => {
            let t = balanced_tree(&load_graph(&graph)?).map_err(|e| e.to_string())?;
            write(&out, &format!("{}\n", serde_json::to_string(&t).map_err(|e| e.to_string())?))?;
            Ok(true)
        }
        Cmd::Prove { sel, graph, tree, out } => {
            let (kind, algebra) = sel.resolve();
            let action = Action::Prove { g: load_graph(&graph)?, t: load_tree(&tree)?, out: &out };
            dispatch(kind, algebra, None, action)
        }
        Cmd::Verify { sel, graph, bundle, k, out } => {
            let (kind, algebra) = sel.resolve();
            let action = Action::Verify { g: load_graph(&graph)?, bundle: read(&bundle)?, out: &out };
            dispatch(kind, algebra, k, action)
        }
        Cmd::Fuzz { sel, graph, tree, count, seed, strategies, donors, out } => {
            let (kind, algebra) = sel.resolve();
            if strategies.is_empty() {
                return Err("no strategies".into());
            }
            let spec = MutationSpec { strategies, count, seed };
            let instance = graph.display().to_string();
            let action = Action::Fuzz { g: load_graph(&graph)?, t: load_tree(&tree)?, spec, donors, instance, out: &out };
            dispatch(kind, algebra, None, action)
        }
        Cmd::Measure { sel, ns, trials, seed, out } => {
            let (kind, algebra) = sel.resolve();
            dispatch(kind, algebra, None, Action::Measure { ns, trials, seed, out: &out })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("cwcert: {e}");
            ExitCode::from(2)
        }
    }
}
