//! Certificate sizes of honest bundles, and least-squares fits of the
//! largest certificate against a growth term.

use crate::gen::{random_cograph, rng};
use crate::scheme::Scheme;
use crate::simulate::HarnessError;
use graph_core::LabeledGraph;
use nlc::{balance_cotree, build_cotree, to_nlc_plus, NlcPlusTree};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub n: usize,
    pub max_bits: usize,
    pub mean_bits: f64,
}

/// `max_bits ≈ a + b·term(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub term: String,
    pub a: f64,
    pub b: f64,
    /// Largest `|residual| / observed` over the rows.
    pub max_rel_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Log,
    LogSquared,
}

impl Growth {
    pub fn term(self, n: usize) -> f64 {
        let l = (n.max(2) as f64).log2();
        match self {
            Growth::Log => l,
            Growth::LogSquared => l * l,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Growth::Log => "log2(n)",
            Growth::LogSquared => "log2(n)^2",
        }
    }
}

pub fn fit(rows: &[SizeRow], growth: Growth) -> Fit {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (growth.term(r.n), r.max_bits as f64)).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let max_rel_residual = pts.iter().map(|(x, y)| ((a + b * x) - y).abs() / y.max(1.0)).fold(0.0, f64::max);
    Fit { term: growth.name().into(), a, b, max_rel_residual }
}

fn row<S: Scheme>(n: usize, s: &S, bundles: &[(LabeledGraph, Vec<S::Cert>)]) -> SizeRow {
    let bits: Vec<usize> = bundles.iter().flat_map(|(g, certs)| certs.iter().map(move |c| s.bits(g, c))).collect();
    SizeRow { n, max_bits: bits.iter().copied().max().unwrap_or(0), mean_bits: bits.iter().sum::<usize>() as f64 / bits.len().max(1) as f64 }
}

/// Honest bundles over `trials` random connected cographs per size. The
/// general schemes run on the balanced decomposition.
pub fn measure_sizes<S: Scheme>(s: &S, ns: &[usize], trials: usize, seed: u64) -> Result<Vec<SizeRow>, HarnessError> {
    let mut r = rng(seed);
    ns.iter()
        .map(|&n| {
            let bundles = (0..trials)
                .map(|_| {
                    let g = random_cograph(n, &mut r);
                    let certs = s.prove(&g, None)?;
                    Ok((g, certs))
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            Ok(row(n, s, &bundles))
        })
        .collect()
}

/// The balanced decomposition of a cograph as an NLC⁺ tree.
pub fn balanced_tree(g: &LabeledGraph) -> Result<NlcPlusTree, HarnessError> {
    let ct = build_cotree(g).map_err(|e| HarnessError::Input(e.to_string()))?;
    to_nlc_plus(&balance_cotree(&ct)).map_err(|e| HarnessError::Prove(e.to_string()))
}

pub fn to_csv(rows: &[SizeRow], fit: Option<&Fit>) -> String {
    let mut out = String::from("n,max_bits,mean_bits\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.3}\n", r.n, r.max_bits, r.mean_bits));
    }
    if let Some(f) = fit {
        out.push_str(&format!("# fit max_bits = {:.4} + {:.4} * {}; max relative residual {:.4}\n", f.a, f.b, f.term, f.max_rel_residual));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_has_no_residual() {
        let rows: Vec<SizeRow> = [4usize, 16, 256].iter().map(|&n| SizeRow { n, max_bits: 10 + 3 * (n as f64).log2() as usize, mean_bits: 0.0 }).collect();
        let f = fit(&rows, Growth::Log);
        assert!((f.a - 10.0).abs() < 1e-9 && (f.b - 3.0).abs() < 1e-9);
        assert!(f.max_rel_residual < 1e-12);
    }

    #[test]
    fn single_vertex_row() {
        let rows = measure_sizes(&crate::scheme::CographScheme, &[1], 3, 5).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].max_bits > 0);
    }
}
