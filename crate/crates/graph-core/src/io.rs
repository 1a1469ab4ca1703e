//! JSON graph files.

use crate::{GraphError, LabeledGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub ids: Vec<u64>,
    pub labels: Vec<u32>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sel: Option<Vec<u8>>,
}

impl From<&LabeledGraph> for GraphFile {
    fn from(g: &LabeledGraph) -> Self {
        GraphFile {
            n: g.n(),
            ids: g.ids().to_vec(),
            labels: g.labels().to_vec(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            weights: g.weights().map(<[i64]>::to_vec),
            sel: g.sel().map(|s| s.iter().map(|&b| b as u8).collect()),
        }
    }
}

impl TryFrom<GraphFile> for LabeledGraph {
    type Error = GraphError;

    fn try_from(f: GraphFile) -> Result<Self, GraphError> {
        if f.ids.len() != f.n {
            return Err(GraphError::LengthMismatch { field: "ids", expected: f.n, got: f.ids.len() });
        }
        let edges: Vec<_> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = LabeledGraph::new(f.ids, f.labels, &edges)?;
        if let Some(w) = f.weights {
            g = g.with_weights(w)?;
        }
        if let Some(s) = f.sel {
            if let Some(&bad) = s.iter().find(|&&b| b > 1) {
                return Err(GraphError::Format(format!("sel entry {bad} is not 0 or 1")));
            }
            g = g.with_sel(s.into_iter().map(|b| b == 1).collect())?;
        }
        Ok(g)
    }
}

pub fn to_json(g: &LabeledGraph) -> String {
    serde_json::to_string(&GraphFile::from(g)).expect("graph file serializes")
}

pub fn from_json(s: &str) -> Result<LabeledGraph, GraphError> {
    let f: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Format(e.to_string()))?;
    LabeledGraph::try_from(f)
}
