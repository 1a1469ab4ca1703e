//! Certifying that the selected vertex set is a best one.
//!
//! Every annotation of the general scheme becomes a triple: the class of
//! the node's graph together with the selected set, the selected weight,
//! and the table of best achievable weights per class. The root accepts
//! when the selected class is accepting and its weight matches the best
//! accepting entry of the table.

use graph_core::{LabeledGraph, Verdict};
use mso_hom::{Ext, HomClass, MaxW, OptAlgebra};
use nlc::{Color, JoinSet, NlcPlusTree, Recolor};
use pls_general::{Annotator, Certificate, Memo, ProveError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OptAnn {
    pub h: HomClass,
    pub weight: i64,
    pub maxw: MaxW,
}

pub type OptCertificate = Certificate<OptAnn>;

pub struct Optimize<'a>(pub &'a dyn OptAlgebra);

/// Bits of a signed value: sign plus magnitude.
fn int_bits(x: i64) -> usize {
    1 + (u64::BITS - x.unsigned_abs().leading_zeros()).max(1) as usize
}

impl Annotator for Optimize<'_> {
    type Ann = OptAnn;

    fn k(&self) -> Color {
        self.0.k()
    }

    fn vertex(&self, color: Color, label: u32, selected: bool, weight: i64) -> OptAnn {
        OptAnn {
            h: self.0.vertex_class(color, label, selected),
            weight: if selected { weight } else { 0 },
            maxw: self.0.maxw_vertex(color, label, weight),
        }
    }

    fn join(&self, s: &JoinSet, r: &Recolor, a: &OptAnn, b: &OptAnn) -> OptAnn {
        OptAnn {
            h: self.0.recolor(r, &self.0.join(s, &a.h, &b.h)),
            weight: a.weight + b.weight,
            maxw: self.0.maxw_recolor(r, &self.0.maxw_join(s, &a.maxw, &b.maxw)),
        }
    }

    fn parallel(&self, a: &OptAnn, b: &OptAnn) -> OptAnn {
        OptAnn { h: self.0.parallel(&a.h, &b.h), weight: a.weight + b.weight, maxw: self.0.maxw_parallel(&a.maxw, &b.maxw) }
    }

    fn accepting(&self, a: &OptAnn) -> bool {
        self.0.is_accepting(&a.h) && self.0.best_accepting(&a.maxw) == Ext::finite(a.weight)
    }

    fn well_formed(&self, a: &OptAnn) -> bool {
        self.0.is_well_formed(&a.h) && a.maxw.len() == self.0.num_classes()
    }

    fn bits(&self, a: &OptAnn) -> usize {
        let table: usize = a.maxw.iter().map(|e| 1 + e.0.map_or(0, int_bits)).sum();
        a.h.payload_bits() + int_bits(a.weight) + table
    }
}

/// Certificates for the selection and weights carried by `g`.
pub fn prove_opt(g: &LabeledGraph, t: &NlcPlusTree, alg: &dyn OptAlgebra) -> Result<Vec<OptCertificate>, ProveError> {
    pls_general::prove_general(g, t, &Memo::new(Optimize(alg)))
}

pub fn verify_opt(g: &LabeledGraph, certs: &[OptCertificate], alg: &dyn OptAlgebra) -> Vec<Verdict> {
    pls_general::verify_general(g, certs, &Memo::new(Optimize(alg)))
}
