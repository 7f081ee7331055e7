//! Edge-list text format: first line `K <node_count>`, then one `u v` pair
//! per line, 0-indexed, each edge listed once.

use coop_lms_core::graph::Graph;
use coop_lms_core::Error as CoreError;

use crate::error::{HarnessError, Result};

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 * (g.edge_count() + 1));
    out.push_str(&format!("K {}\n", g.node_count()));
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::Usage("empty edge-list input".into()))?;
    let mut parts = header.split_whitespace();
    let (tag, count) = (parts.next(), parts.next());
    if tag != Some("K") || parts.next().is_some() {
        return Err(HarnessError::Usage(format!(
            "edge-list header must be 'K <node_count>', got '{header}'"
        )));
    }
    let node_count: usize = count
        .ok_or_else(|| HarnessError::Usage("edge-list header is missing the node count".into()))?
        .parse()
        .map_err(|_| HarnessError::Usage(format!("bad node count in header '{header}'")))?;

    let mut edges = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (u, v) = (parts.next(), parts.next());
        if u.is_none() || v.is_none() || parts.next().is_some() {
            return Err(HarnessError::Usage(format!("bad edge line '{line}'")));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| HarnessError::Usage(format!("bad node id '{s}'")))
        };
        edges.push((parse(u.unwrap())?, parse(v.unwrap())?));
    }
    Graph::new(node_count, edges).map_err(|e: CoreError| HarnessError::Core(e))
}
