use crate::scheme::Scheme;
use graph_core::{LabeledGraph, Verdict};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("bundle has {got} certificates for {n} vertices")]
    MissingCertificate { got: usize, n: usize },
    #[error("{0}")]
    Prove(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRun {
    pub scheme: String,
    pub n: usize,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub max_bits: usize,
    pub mean_bits: f64,
}

impl SimulationRun {
    pub fn all_accept(&self) -> bool {
        self.verdicts.iter().all(|v| v.accepts())
    }
}

/// Verdict of vertex `u` given the whole assignment.
pub fn verdict_at<S: Scheme>(s: &S, g: &LabeledGraph, certs: &[S::Cert], u: usize) -> Verdict {
    let nbrs: Vec<(u64, &S::Cert)> = g.neighbors(u).iter().map(|&v| (g.id(v), &certs[v])).collect();
    s.verify_vertex(g, u, &certs[u], &nbrs)
}

/// One synchronous round: every vertex sends its certificate to its
/// neighbors once and decides.
pub fn simulate_round<S: Scheme>(s: &S, g: &LabeledGraph, bundle: &[S::Cert], seed: u64) -> Result<SimulationRun, HarnessError> {
    if bundle.len() != g.n() {
        return Err(HarnessError::MissingCertificate { got: bundle.len(), n: g.n() });
    }
    let verdicts = (0..g.n()).map(|u| verdict_at(s, g, bundle, u)).collect();
    let bits: Vec<usize> = bundle.iter().map(|c| s.bits(g, c)).collect();
    Ok(SimulationRun {
        scheme: s.name(),
        n: g.n(),
        seed,
        verdicts,
        max_bits: bits.iter().copied().max().unwrap_or(0),
        mean_bits: bits.iter().sum::<usize>() as f64 / bits.len().max(1) as f64,
    })
}
