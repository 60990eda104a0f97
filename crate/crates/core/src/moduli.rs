//! The graded poset `P_g` of cells of `M_g^tr`.
//!
//! Starting from the trivalent maximal cells, every cell is contracted along
//! each of its edges, rank by rank from the top. New types are added to the
//! poset and a cover relation is recorded for every 1-edge contraction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{CanonicalCert, WeightedGraph};
use crate::trivalent::enumerate_trivalent_with_certs;

pub const MIN_GENUS: usize = 2;
pub const MAX_GENUS: usize = 5;

/// A cell of `M_g^tr`: a combinatorial type with its rank (edge count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    pub rank: usize,
    pub graph: WeightedGraph,
    pub cert: CanonicalCert,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPoset {
    pub genus: usize,
    /// Sorted by `(rank, cert)`; `cells[i].id == i`.
    pub cells: Vec<Cell>,
    /// Cover pairs `(lower, upper)`.
    pub covers: BTreeSet<(usize, usize)>,
}

pub fn build_moduli_poset(g: usize) -> Result<CellPoset> {
    check_genus(g)?;
    let maximal: Vec<WeightedGraph> = enumerate_trivalent_with_certs(g)?.into_values().collect();
    build_from_maximal(g, &maximal)
}

fn check_genus(g: usize) -> Result<()> {
    if !(MIN_GENUS..=MAX_GENUS).contains(&g) {
        return Err(Error::GenusOutOfRange { genus: g, min: MIN_GENUS, max: MAX_GENUS });
    }
    Ok(())
}

/// Runs the contraction closure from an explicit list of maximal cells.
/// The result does not depend on the order of `maximal`.
pub fn build_from_maximal(g: usize, maximal: &[WeightedGraph]) -> Result<CellPoset> {
    let mut index: HashMap<CanonicalCert, usize> = HashMap::new();
    let mut nodes: Vec<(CanonicalCert, WeightedGraph)> = Vec::new();
    let mut covers: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut level: Vec<usize> = Vec::new();
    for graph in maximal {
        if !graph.is_valid_type(g) {
            return Err(Error::Invalid(format!("{graph} is not a genus-{g} type")));
        }
        let (canon, _) = graph.canonical_form()?;
        let cert = canon.canonical_certificate()?;
        if !index.contains_key(&cert) {
            index.insert(cert.clone(), nodes.len());
            level.push(nodes.len());
            nodes.push((cert, canon));
        }
    }
    // Sorting each level keeps insertion order independent of input order.
    level.sort_by(|&a, &b| nodes[a].0.cmp(&nodes[b].0));

    while !level.is_empty() {
        let contractions: Vec<Vec<(CanonicalCert, WeightedGraph)>> =
            level.par_iter().map(|&id| contractions_of(&nodes[id].1)).collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (&upper, lowers) in level.iter().zip(contractions) {
            for (cert, graph) in lowers {
                let lower = match index.get(&cert) {
                    Some(&i) => i,
                    None => {
                        let i = nodes.len();
                        index.insert(cert.clone(), i);
                        nodes.push((cert, graph));
                        next.push(i);
                        i
                    }
                };
                covers.insert((lower, upper));
            }
        }
        next.sort_by(|&a, &b| nodes[a].0.cmp(&nodes[b].0));
        level = next;
    }

    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| (nodes[a].1.num_edges(), &nodes[a].0).cmp(&(nodes[b].1.num_edges(), &nodes[b].0)));
    let mut new_id = vec![0; nodes.len()];
    for (id, &old) in order.iter().enumerate() {
        new_id[old] = id;
    }
    let cells = order
        .iter()
        .enumerate()
        .map(|(id, &old)| Cell {
            id,
            rank: nodes[old].1.num_edges(),
            graph: nodes[old].1.clone(),
            cert: nodes[old].0.clone(),
        })
        .collect();
    let covers = covers.into_iter().map(|(lo, hi)| (new_id[lo], new_id[hi])).collect();
    Ok(CellPoset { genus: g, cells, covers })
}

/// Canonical forms of all 1-edge contractions, one entry per edge.
fn contractions_of(graph: &WeightedGraph) -> Result<Vec<(CanonicalCert, WeightedGraph)>> {
    (0..graph.num_edges())
        .map(|e| {
            let (canon, _) = graph.contract_edge(e)?.canonical_form()?;
            let cert = canon.canonical_certificate()?;
            Ok((cert, canon))
        })
        .collect()
}

impl CellPoset {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Entry `i` counts the cells of rank `i`.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.rank).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for c in &self.cells {
            f[c.rank] += 1;
        }
        f
    }

    /// Cells without an upper cover.
    pub fn maximal_cells(&self) -> Vec<&Cell> {
        let lower: BTreeSet<usize> = self.covers.iter().map(|&(lo, _)| lo).collect();
        self.cells.iter().filter(|c| !lower.contains(&c.id)).collect()
    }

    pub fn upper_covers(&self, id: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(lo, _)| lo == id).map(|&(_, hi)| hi).collect()
    }

    pub fn lower_covers(&self, id: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(_, hi)| hi == id).map(|&(lo, _)| lo).collect()
    }

    pub fn find(&self, cert: &CanonicalCert) -> Option<&Cell> {
        self.cells.iter().find(|c| &c.cert == cert)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.genus,
            "fvector": self.f_vector(),
            "cells": self.cells.iter().map(|c| json!({
                "id": c.id,
                "rank": c.rank,
                "graph": c.graph.to_text(),
            })).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(lo, hi)| json!([lo, hi])).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds a poset from its JSON export, recomputing certificates and
    /// checking ids, ranks and the declared f-vector.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("moduli poset JSON: {what}"));
        let genus = value["genus"].as_u64().ok_or_else(|| bad("genus"))? as usize;
        let mut cells = Vec::new();
        for (i, c) in value["cells"].as_array().ok_or_else(|| bad("cells"))?.iter().enumerate() {
            let id = c["id"].as_u64().ok_or_else(|| bad("id"))? as usize;
            let rank = c["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize;
            let graph: WeightedGraph = c["graph"].as_str().ok_or_else(|| bad("graph"))?.parse()?;
            if id != i || rank != graph.num_edges() {
                return Err(bad("id/rank mismatch"));
            }
            let cert = graph.canonical_certificate()?;
            cells.push(Cell { id, rank, graph, cert });
        }
        let mut covers = BTreeSet::new();
        for pair in value["covers"].as_array().ok_or_else(|| bad("covers"))? {
            let lo = pair[0].as_u64().ok_or_else(|| bad("cover"))? as usize;
            let hi = pair[1].as_u64().ok_or_else(|| bad("cover"))? as usize;
            if lo >= cells.len() || hi >= cells.len() {
                return Err(bad("cover id out of range"));
            }
            covers.insert((lo, hi));
        }
        let poset = CellPoset { genus, cells, covers };
        let declared: Option<Vec<usize>> =
            value["fvector"].as_array().map(|a| a.iter().filter_map(|x| x.as_u64().map(|x| x as usize)).collect());
        if declared.as_deref() != Some(poset.f_vector().as_slice()) {
            return Err(bad("fvector mismatch"));
        }
        Ok(poset)
    }

    /// Hasse diagram in Graphviz DOT, one `rank=same` group per rank.
    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.cells.iter().map(|c| c.graph.to_text()).collect();
        hasse_dot(&format!("P_{}", self.genus), &self.ranks(), &labels, &self.covers)
    }

    fn ranks(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.rank).collect()
    }
}

/// Shared DOT writer for graded posets.
pub fn hasse_dot(name: &str, ranks: &[usize], labels: &[String], covers: &BTreeSet<(usize, usize)>) -> String {
    let mut by_rank: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (id, &r) in ranks.iter().enumerate() {
        by_rank.entry(r).or_default().push(id);
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{name}\" {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box, fontsize=10];");
    for (r, ids) in &by_rank {
        let members: Vec<String> = ids.iter().map(|i| format!("c{i}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }} // rank {r}", members.join("; "));
    }
    for (id, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "  c{id} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for (lo, hi) in covers {
        let _ = writeln!(out, "  c{lo} -> c{hi};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_by_hand() {
        let p = build_moduli_poset(2).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p.f_vector(), vec![1, 2, 2, 2]);
        assert_eq!(p.maximal_cells().len(), 2);
        assert_eq!(p.cells[0].graph, WeightedGraph::single_vertex(2));
    }

    #[test]
    fn genus_three_fvector() {
        let p = build_moduli_poset(3).unwrap();
        assert_eq!(p.f_vector(), vec![1, 2, 5, 9, 12, 8, 5]);
        assert_eq!(p.maximal_cells().len(), 5);
    }

    #[test]
    fn covers_are_graded() {
        let p = build_moduli_poset(3).unwrap();
        for &(lo, hi) in &p.covers {
            assert_eq!(p.cells[lo].rank + 1, p.cells[hi].rank);
        }
        for c in &p.cells {
            if c.rank < 6 {
                assert!(!p.upper_covers(c.id).is_empty() || c.graph.weights().iter().all(|&w| w == 0));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = build_moduli_poset(2).unwrap();
        let back = CellPoset::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn dot_mentions_every_cover() {
        let p = build_moduli_poset(2).unwrap();
        let dot = p.to_dot();
        for (lo, hi) in &p.covers {
            assert!(dot.contains(&format!("c{lo} -> c{hi};")));
        }
    }

    #[test]
    fn range() {
        assert!(build_moduli_poset(1).is_err());
        assert!(build_moduli_poset(6).is_err());
    }
}
