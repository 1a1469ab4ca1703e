//! The three schemes behind one interface, so simulation and fuzzing do
//! not care which one they drive.

use crate::gen::linear_tree;
use crate::measure::balanced_tree;
use crate::simulate::HarnessError;
use graph_core::{LabeledGraph, Verdict};
use nlc::NlcPlusTree;
use mso_hom::{HomAlgebra, OptAlgebra};
use pls_general::{audit_reconstruct, Annotator, BitWidths, ClassAnn, Decision, LocalView, Memo};
use pls_opt::{OptAnn, Optimize};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Scheme {
    type Cert: Clone + PartialEq + Serialize + DeserializeOwned;

    fn name(&self) -> String;
    fn verify_vertex(&self, g: &LabeledGraph, u: usize, own: &Self::Cert, nbrs: &[(u64, &Self::Cert)]) -> Verdict;
    /// Ground truth for an assignment every vertex accepted: `Ok` when it
    /// is a valid proof of a true statement.
    fn audit(&self, g: &LabeledGraph, certs: &[Self::Cert]) -> Result<(), String>;
    fn bits(&self, g: &LabeledGraph, c: &Self::Cert) -> usize;
    /// Honest certificates. Schemes that need a decomposition fall back to
    /// [`default_tree`] when none is given.
    fn prove(&self, g: &LabeledGraph, t: Option<&NlcPlusTree>) -> Result<Vec<Self::Cert>, HarnessError>;
}

/// The balanced cotree for cographs, otherwise a linear tree.
pub fn default_tree(g: &LabeledGraph) -> Result<NlcPlusTree, HarnessError> {
    if !graph_core::is_connected(g) {
        return Err(HarnessError::Input("graph is disconnected".into()));
    }
    match nlc::build_cotree(g) {
        Ok(_) => balanced_tree(g),
        Err(_) => Ok(linear_tree(g)),
    }
}

pub struct CographScheme;

impl Scheme for CographScheme {
    type Cert = pls_cograph::Certificate;

    fn name(&self) -> String {
        "cograph".into()
    }

    fn verify_vertex(&self, g: &LabeledGraph, u: usize, own: &Self::Cert, nbrs: &[(u64, &Self::Cert)]) -> Verdict {
        pls_cograph::verify_at(g.id(u), own, nbrs)
    }

    fn audit(&self, g: &LabeledGraph, _certs: &[Self::Cert]) -> Result<(), String> {
        if graph_core::is_connected(g) && nlc::build_cotree(g).is_ok() {
            Ok(())
        } else {
            Err("accepted a graph that is not a connected cograph".into())
        }
    }

    fn bits(&self, g: &LabeledGraph, c: &Self::Cert) -> usize {
        pls_cograph::certificate_bits(c, g.n(), 2)
    }

    fn prove(&self, g: &LabeledGraph, _t: Option<&NlcPlusTree>) -> Result<Vec<Self::Cert>, HarnessError> {
        pls_cograph::prove_cograph(g).map_err(|e| HarnessError::Prove(e.to_string()))
    }
}

/// The general scheme over any annotator, with joins cached across calls.
pub struct GeneralScheme<A: Annotator> {
    pub name: String,
    pub a: Memo<A>,
}

impl<'a> GeneralScheme<Decision<'a>> {
    pub fn decision(alg: &'a dyn HomAlgebra) -> Self {
        GeneralScheme { name: format!("general:{}", alg.name()), a: Memo::new(Decision(alg)) }
    }
}

impl<'a> GeneralScheme<Optimize<'a>> {
    pub fn opt(alg: &'a dyn OptAlgebra) -> Self {
        GeneralScheme { name: format!("opt:{}", alg.name()), a: Memo::new(Optimize(alg)) }
    }
}

pub type DecisionScheme<'a> = GeneralScheme<Decision<'a>>;
pub type OptScheme<'a> = GeneralScheme<Optimize<'a>>;
pub type DecisionCert = pls_general::Certificate<ClassAnn>;
pub type OptCert = pls_general::Certificate<OptAnn>;

impl<A: Annotator> Scheme for GeneralScheme<A> {
    type Cert = pls_general::Certificate<A::Ann>;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn verify_vertex(&self, g: &LabeledGraph, u: usize, own: &Self::Cert, nbrs: &[(u64, &Self::Cert)]) -> Verdict {
        let view = LocalView { id: g.id(u), label: g.label(u), selected: g.selected(u), weight: g.weight(u), cert: own, nbrs: nbrs.to_vec() };
        pls_general::verify_at(&self.a, &view)
    }

    fn audit(&self, g: &LabeledGraph, certs: &[Self::Cert]) -> Result<(), String> {
        audit_reconstruct(g, certs, &self.a).map(|_| ()).map_err(|e| e.to_string())
    }

    fn bits(&self, g: &LabeledGraph, c: &Self::Cert) -> usize {
        pls_general::certificate_bits(&self.a, c, &BitWidths::new(g.n(), 2, self.a.k()))
    }

    fn prove(&self, g: &LabeledGraph, t: Option<&NlcPlusTree>) -> Result<Vec<Self::Cert>, HarnessError> {
        let fallback;
        let t = match t {
            Some(t) => t,
            None => {
                fallback = default_tree(g)?;
                &fallback
            }
        };
        pls_general::prove_general(g, t, &self.a).map_err(|e| HarnessError::Prove(e.to_string()))
    }
}
