//! Adversarial certificate assignments. Every trial is one assignment to
//! all vertices; it counts as caught when some vertex rejects or when a
//! vertex's certificate cannot be decoded at all. An assignment that every
//! vertex accepts is handed to the scheme's audit: passing means it is a
//! genuine proof, failing is a soundness failure.

use crate::gen::{rng, Rng8};
use crate::scheme::Scheme;
use crate::simulate::verdict_at;
use graph_core::{LabeledGraph, Verdict};
use nlc::NlcPlusTree;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// One bit of one vertex's serialized certificate.
    BitFlip,
    /// One field of one vertex's certificate.
    FieldReplace,
    /// The same field overwritten at every vertex that has it.
    GlobalFieldReplace,
    /// An honest bundle of another graph on the same identifiers.
    CrossGraphSwap,
    /// Every value of a bundle redrawn at random, keeping its shape.
    RandomBundle,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [Strategy::BitFlip, Strategy::FieldReplace, Strategy::GlobalFieldReplace, Strategy::CrossGraphSwap, Strategy::RandomBundle];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::BitFlip => "bit-flip",
            Strategy::FieldReplace => "field-replace",
            Strategy::GlobalFieldReplace => "global-field-replace",
            Strategy::CrossGraphSwap => "cross-graph-swap",
            Strategy::RandomBundle => "random-bundle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown strategy {s}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSpec {
    /// Used round-robin.
    pub strategies: Vec<Strategy>,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub trials: usize,
    pub rejected: usize,
    pub undecodable: usize,
    pub all_accept: usize,
    pub audit_valid: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub strategy: Strategy,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub scheme: String,
    pub instance: String,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub per_strategy: BTreeMap<Strategy, StrategyStats>,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn all_accepts(&self) -> usize {
        self.per_strategy.values().map(|s| s.all_accept).sum()
    }

    /// One JSON line; contains nothing that varies between identical runs.
    pub fn to_jsonl(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Seg {
    Key(String),
    Idx(usize),
}

fn get<'a>(v: &'a Value, path: &[Seg]) -> Option<&'a Value> {
    path.iter().try_fold(v, |v, s| match s {
        Seg::Key(k) => v.get(k.as_str()),
        Seg::Idx(i) => v.get(*i),
    })
}

fn get_mut<'a>(v: &'a mut Value, path: &[Seg]) -> Option<&'a mut Value> {
    path.iter().try_fold(v, |v, s| match s {
        Seg::Key(k) => v.get_mut(k.as_str()),
        Seg::Idx(i) => v.get_mut(*i),
    })
}

/// Paths to every node below the root, internal ones included.
fn paths(v: &Value, cur: &mut Vec<Seg>, out: &mut Vec<Vec<Seg>>) {
    let visit = |s: Seg, x: &Value, cur: &mut Vec<Seg>, out: &mut Vec<Vec<Seg>>| {
        cur.push(s);
        out.push(cur.clone());
        paths(x, cur, out);
        cur.pop();
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| visit(Seg::Key(k.clone()), x, cur, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| visit(Seg::Idx(i), x, cur, out)),
        _ => {}
    }
}


/// A bundle to start mutating from, with cached encodings.
struct Base<C> {
    certs: Vec<C>,
    values: Vec<Value>,
    texts: Vec<String>,
    verdicts: Vec<Verdict>,
    rejecting: Vec<usize>,
    /// Vertices whose closed neighborhood holds every rejection; the only
    /// places where a one-vertex edit can matter.
    pivots: Vec<usize>,
    paths: Vec<Vec<Vec<Seg>>>,
    /// Leaf values seen under each field name.
    pools: HashMap<String, Vec<Value>>,
}

impl<C: Serialize> Base<C> {
    fn new<S: Scheme<Cert = C>>(s: &S, g: &LabeledGraph, certs: Vec<C>) -> Self {
        let values: Vec<Value> = certs.iter().map(|c| serde_json::to_value(c).expect("certificates serialize")).collect();
        let texts = values.iter().map(Value::to_string).collect();
        let verdicts: Vec<Verdict> = (0..g.n()).map(|u| verdict_at(s, g, &certs, u)).collect();
        let rejecting: Vec<usize> = (0..g.n()).filter(|&u| !verdicts[u].accepts()).collect();
        let pivots = (0..g.n()).filter(|&u| rejecting.iter().all(|&x| x == u || g.has_edge(u, x))).collect();
        let paths = values
            .iter()
            .map(|v| {
                let mut out = Vec::new();
                paths(v, &mut Vec::new(), &mut out);
                out
            })
            .collect();
        fn scan(v: &Value, key: &str, pools: &mut HashMap<String, Vec<Value>>) {
            match v {
                Value::Array(a) => a.iter().for_each(|x| scan(x, key, pools)),
                Value::Object(m) => m.iter().for_each(|(k, x)| scan(x, k, pools)),
                leaf => pools.entry(key.to_string()).or_default().push(leaf.clone()),
            }
        }
        let mut pools = HashMap::new();
        values.iter().for_each(|v| scan(v, "", &mut pools));
        for p in pools.values_mut() {
            p.sort_by_key(Value::to_string);
            p.dedup();
        }
        Base { certs, values, texts, verdicts, rejecting, pivots, paths, pools }
    }

    /// Whether some vertex outside N[u] rejects, so that no edit at `u`
    /// can make every vertex accept.
    fn rejects_outside(&self, g: &LabeledGraph, u: usize) -> bool {
        self.rejecting.iter().any(|&x| x != u && !g.has_edge(u, x))
    }

    fn pick(&self, rng: &mut Rng8) -> usize {
        match self.pivots.choose(rng) {
            Some(&u) => u,
            None => rng.gen_range(0..self.certs.len()),
        }
    }
}

enum Trial<C> {
    /// Settled without building the edit.
    Rejected,
    Local(usize, Option<C>),
    Whole(Vec<Option<C>>),
    /// Vertex `u` takes certificate `perm[u]` of donor `d`, or of the base
    /// when there are no donors.
    Swap(Option<usize>, Vec<usize>),
    /// The leaf at this path overwritten with one value at every vertex.
    Global(Vec<Seg>, Value),
    /// Every certificate randomized, each from its own stream of `seed`.
    Random(u64),
}

enum Outcome<C> {
    Rejected,
    Undecodable,
    AllAccept(Vec<C>),
}

pub struct Fuzzer<'a, S: Scheme> {
    s: &'a S,
    g: &'a LabeledGraph,
    bases: Vec<Base<S::Cert>>,
    donors: Vec<Vec<S::Cert>>,
    by_degree: Vec<usize>,
    rng: Rng8,
}

impl<'a, S: Scheme> Fuzzer<'a, S> {
    /// `bases` seed the per-field strategies; `donors` are honest bundles
    /// of other graphs on the same identifiers for the swap strategy.
    pub fn new(s: &'a S, g: &'a LabeledGraph, bases: Vec<Vec<S::Cert>>, donors: Vec<Vec<S::Cert>>, seed: u64) -> Self {
        assert!(!bases.is_empty(), "fuzzing needs a starting bundle");
        let bases = bases.into_iter().map(|b| Base::new(s, g, b)).collect();
        let mut by_degree: Vec<usize> = (0..g.n()).collect();
        by_degree.sort_by_key(|&u| g.degree(u));
        Fuzzer { s, g, bases, donors: donors.into_iter().filter(|d| d.len() == g.n()).collect(), by_degree, rng: rng(seed) }
    }

    fn decode(v: &Value) -> Option<S::Cert> {
        S::Cert::deserialize(v).ok()
    }

    fn make(&mut self, strategy: Strategy, b: usize) -> Trial<S::Cert> {
        let n = self.g.n();
        let Fuzzer { rng, bases, donors, g, .. } = self;
        let base = &bases[b];
        match strategy {
            Strategy::BitFlip => {
                let u = base.pick(rng);
                if base.rejects_outside(g, u) {
                    return Trial::Rejected;
                }
                let mut bytes = base.texts[u].clone().into_bytes();
                let at = rng.gen_range(0..bytes.len());
                bytes[at] ^= 1 << rng.gen_range(0..8);
                let c = String::from_utf8(bytes).ok().and_then(|t| serde_json::from_str(&t).ok());
                Trial::Local(u, c)
            }
            Strategy::FieldReplace => {
                let u = base.pick(rng);
                if base.rejects_outside(g, u) {
                    return Trial::Rejected;
                }
                let w = rng.gen_range(0..n);
                let ps = &base.paths[u];
                if ps.is_empty() {
                    return Trial::Local(u, Some(base.certs[u].clone()));
                }
                let p = &ps[rng.gen_range(0..ps.len())];
                let mut v = base.values[u].clone();
                let old = get(&v, p).cloned().unwrap_or(Value::Null);
                let new = match rng.gen_range(0..4) {
                    0 => nudge(rng, &old),
                    1 => get(&base.values[w], p).cloned().unwrap_or_else(|| nudge(rng, &old)),
                    2 => {
                        let pw = &base.paths[w];
                        let same = (0..8).filter_map(|_| pw.choose(rng)).filter_map(|q| get(&base.values[w], q)).find(|x| same_kind(x, &old));
                        match same {
                            Some(x) => x.clone(),
                            None => nudge(rng, &old),
                        }
                    }
                    _ => Value::Null,
                };
                *get_mut(&mut v, p).unwrap() = new;
                Trial::Local(u, Self::decode(&v))
            }
            Strategy::GlobalFieldReplace => {
                let w = rng.gen_range(0..n);
                let Some(p) = base.paths[w].choose(rng).cloned() else { return Trial::Whole(base.certs.iter().cloned().map(Some).collect()) };
                let mut x = get(&base.values[w], &p).cloned().unwrap();
                if rng.gen_bool(0.5) {
                    x = nudge(rng, &x);
                }
                Trial::Global(p, x)
            }
            Strategy::CrossGraphSwap => {
                let d = (!donors.is_empty()).then(|| rng.gen_range(0..donors.len()));
                let mut perm: Vec<usize> = (0..n).collect();
                if d.is_none() || rng.gen_bool(0.5) {
                    perm.shuffle(rng);
                }
                Trial::Swap(d, perm)
            }
            Strategy::RandomBundle => {
                Trial::Random(rng.gen())
            }
        }
    }

    /// Vertices rejecting the base bundle first, lowest degree first, since
    /// they usually still reject, then the rest from `start`.
    fn order(&self, b: usize, start: usize) -> Vec<usize> {
        let n = self.g.n();
        let base = &self.bases[b];
        let (mut first, rest): (Vec<usize>, Vec<usize>) = (0..n).map(|i| (start + i) % n).partition(|&u| !base.verdicts[u].accepts());
        first.sort_by_key(|&u| self.g.degree(u));
        first.extend(rest);
        first
    }

    fn check_all(&self, certs: &[&S::Cert], order: &[usize]) -> bool {
        order.iter().all(|&u| {
            let nbrs: Vec<(u64, &S::Cert)> = self.g.neighbors(u).iter().map(|&v| (self.g.id(v), certs[v])).collect();
            self.s.verify_vertex(self.g, u, certs[u], &nbrs).accepts()
        })
    }

    fn run(&self, trial: Trial<S::Cert>, b: usize, start: usize) -> Outcome<S::Cert> {
        let g = self.g;
        let base = &self.bases[b];
        match trial {
            Trial::Rejected => Outcome::Rejected,
            Trial::Local(_, None) => Outcome::Undecodable,
            Trial::Local(u, Some(c)) => {
                if base.rejects_outside(g, u) {
                    return Outcome::Rejected;
                }
                let region: Vec<usize> = [u].into_iter().chain(g.neighbors(u).iter().copied()).collect();
                let cert = |x: usize| if x == u { &c } else { &base.certs[x] };
                let ok = region.iter().all(|&x| {
                    let nbrs: Vec<(u64, &S::Cert)> = g.neighbors(x).iter().map(|&v| (g.id(v), cert(v))).collect();
                    self.s.verify_vertex(g, x, cert(x), &nbrs).accepts()
                });
                if !ok {
                    return Outcome::Rejected;
                }
                let mut all = base.certs.clone();
                all[u] = c;
                Outcome::AllAccept(all)
            }
            Trial::Whole(certs) => {
                let Some(certs) = certs.into_iter().collect::<Option<Vec<_>>>() else { return Outcome::Undecodable };
                if self.check_all(&certs.iter().collect::<Vec<_>>(), &self.order(b, start)) {
                    Outcome::AllAccept(certs)
                } else {
                    Outcome::Rejected
                }
            }
            Trial::Global(p, value) => self.run_lazy(self.order(b, start), |x| match get(&base.values[x], &p) {
                Some(old) if *old != value => {
                    let mut v = base.values[x].clone();
                    *get_mut(&mut v, &p).unwrap() = value.clone();
                    Self::decode(&v)
                }
                _ => Some(base.certs[x].clone()),
            }),
            Trial::Swap(d, perm) => {
                let donor = d.map_or(&base.certs, |d| &self.donors[d]);
                self.run_lazy(self.order(b, start), |x| Some(donor[perm[x]].clone()))
            }
            // Almost every vertex rejects a random bundle, and a low-degree
            // one needs the fewest decodes.
            Trial::Random(seed) => self.run_lazy(self.by_degree.clone(), |x| {
                let mut r = rng(seed ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
                Self::decode(&randomize(&mut r, &base.values[x], "", &base.pools))
            }),
        }
    }

    /// Decodes certificates only as the verifiers reached need them and
    /// stops at the first rejection.
    fn run_lazy(&self, order: Vec<usize>, mut cert: impl FnMut(usize) -> Option<S::Cert>) -> Outcome<S::Cert> {
        let g = self.g;
        let mut cache: Vec<Option<Option<S::Cert>>> = vec![None; g.n()];
        for u in order {
            for x in g.neighbors(u).iter().copied().chain([u]) {
                if cache[x].is_none() {
                    cache[x] = Some(cert(x));
                }
            }
            let Some(own) = cache[u].as_ref().unwrap() else { return Outcome::Undecodable };
            let mut nbrs = Vec::with_capacity(g.degree(u));
            for &v in g.neighbors(u) {
                match cache[v].as_ref().unwrap() {
                    Some(c) => nbrs.push((g.id(v), c)),
                    None => return Outcome::Undecodable,
                }
            }
            if !self.s.verify_vertex(g, u, own, &nbrs).accepts() {
                return Outcome::Rejected;
            }
        }
        Outcome::AllAccept(cache.into_iter().map(|c| c.unwrap().unwrap()).collect())
    }

    pub fn campaign(&mut self, instance: &str, spec: &MutationSpec) -> FuzzReport {
        let mut report = FuzzReport {
            scheme: self.s.name(),
            instance: instance.to_string(),
            n: self.g.n(),
            seed: spec.seed,
            trials: spec.count,
            per_strategy: BTreeMap::new(),
            failures: Vec::new(),
        };
        self.rng = rng(spec.seed);
        for t in 0..spec.count {
            let strategy = spec.strategies[t % spec.strategies.len()];
            let b = (t / spec.strategies.len()) % self.bases.len();
            let trial = self.make(strategy, b);
            let start = self.rng.gen_range(0..self.g.n());
            let stats = report.per_strategy.entry(strategy).or_default();
            stats.trials += 1;
            match self.run(trial, b, start) {
                Outcome::Rejected => stats.rejected += 1,
                Outcome::Undecodable => stats.undecodable += 1,
                Outcome::AllAccept(certs) => {
                    stats.all_accept += 1;
                    match self.s.audit(self.g, &certs) {
                        Ok(()) => stats.audit_valid += 1,
                        Err(detail) => report.failures.push(Failure { trial: t, strategy, detail }),
                    }
                }
            }
        }
        report
    }
}

fn same_kind(a: &Value, b: &Value) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

fn nudge(rng: &mut Rng8, v: &Value) -> Value {
    match v {
        Value::Number(x) => {
            let x = x.as_i64().unwrap_or(0);
            Value::from(if rng.gen_bool(0.5) { x + 1 } else { (x - 1).max(0) })
        }
        Value::Bool(b) => Value::Bool(!b),
        Value::Null => Value::from(rng.gen_range(0..3)),
        Value::String(s) if !s.is_empty() => {
            let mut b = s.clone().into_bytes();
            let at = rng.gen_range(0..b.len());
            b[at] = b"0123456789abcdef"[rng.gen_range(0..16)];
            Value::String(String::from_utf8(b).unwrap_or_default())
        }
        other => other.clone(),
    }
}

/// Every leaf redrawn from the values seen under its field name, sometimes
/// nudged off them when numeric. Operation tags stay, so the bundle keeps its shape.
fn randomize(rng: &mut Rng8, v: &Value, key: &str, pools: &HashMap<String, Vec<Value>>) -> Value {
    match v {
        Value::String(_) if key == "op" => v.clone(),
        Value::Array(a) => Value::Array(a.iter().map(|x| randomize(rng, x, key, pools)).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), randomize(rng, x, k, pools))).collect()),
        leaf => {
            let x = pools.get(key).and_then(|p| p.choose(rng)).unwrap_or(leaf).clone();
            if (x.is_number() || x.is_boolean()) && rng.gen_bool(0.02) {
                nudge(rng, &x)
            } else {
                x
            }
        }
    }
}

/// Convenience wrapper over [`Fuzzer`] for a single campaign.
pub fn fuzz_soundness<S: Scheme>(s: &S, g: &LabeledGraph, bases: Vec<Vec<S::Cert>>, donors: Vec<Vec<S::Cert>>, instance: &str, spec: &MutationSpec) -> FuzzReport {
    Fuzzer::new(s, g, bases, donors, spec.seed).campaign(instance, spec)
}

/// Honest bundles of `instances` that are accepted everywhere on their own
/// graphs. Instances on the target's identifiers make swap donors.
pub fn honest_donors<S: Scheme>(s: &S, instances: &[(LabeledGraph, Option<NlcPlusTree>)]) -> Vec<Vec<S::Cert>> {
    instances
        .iter()
        .filter_map(|(g, t)| {
            let certs = s.prove(g, t.as_ref()).ok()?;
            (0..g.n()).all(|u| verdict_at(s, g, &certs, u).accepts()).then_some(certs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>(), Ok(s));
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
    }

    #[test]
    fn path_access() {
        let v: Value = serde_json::json!({"a": [1, {"b": null}]});
        let mut out = Vec::new();
        paths(&v, &mut Vec::new(), &mut out);
        assert_eq!(out.len(), 4);
        assert_eq!(get(&v, &[Seg::Key("a".into()), Seg::Idx(0)]), Some(&Value::from(1)));
        assert_eq!(get(&v, &out[3]), Some(&Value::Null));
    }
}
