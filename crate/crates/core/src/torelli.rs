//! The tropical Torelli map: metric curves to their Jacobian forms, cells of
//! `M_g^tr` to simple cographic matroids, and the resulting poset of cells
//! of the Schottky locus `A_g^cogr`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matroid::{
    cographic_matroid, simplify, tu_representation_cographic, zonotopal_cone, BinaryMatroid, Matroid,
};
use crate::moduli::{build_moduli_poset, hasse_dot, CellPoset};
use crate::quadform::{cone_membership, QuadForm, Rational};

pub const MIN_GENUS: usize = 2;
pub const MAX_GENUS: usize = 5;

/// A weighted graph with positive rational edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricCurve {
    graph: WeightedGraph,
    lengths: Vec<Rational>,
}

impl MetricCurve {
    pub fn new(graph: WeightedGraph, lengths: Vec<Rational>) -> Result<Self> {
        let g = graph.genus()?;
        if !graph.is_valid_type(g) {
            return Err(Error::Invalid(format!("{graph} is not a stable type")));
        }
        if lengths.len() != graph.num_edges() {
            return Err(Error::DimensionMismatch(format!("{} lengths for {} edges", lengths.len(), graph.num_edges())));
        }
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(Error::Invalid("edge lengths must be positive".into()));
        }
        Ok(Self { graph, lengths })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn genus(&self) -> usize {
        self.graph.genus().expect("validated on construction")
    }

    pub fn scale(&self, t: &Rational) -> Result<Self> {
        Self::new(self.graph.clone(), self.lengths.iter().map(|l| l * t).collect())
    }

    /// Reads `{"graph": "<text encoding>", "lengths": ["1", "3/2", ...]}`;
    /// lengths may also be JSON integers.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("curve JSON: {what}"));
        let graph: WeightedGraph = value["graph"].as_str().ok_or_else(|| bad("graph"))?.parse()?;
        let lengths = value["lengths"]
            .as_array()
            .ok_or_else(|| bad("lengths"))?
            .iter()
            .map(|x| match x {
                Value::String(s) => crate::quadform::parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(crate::quadform::rat)
                    .ok_or_else(|| bad("lengths must be integers or \"p/q\" strings")),
                _ => Err(bad("length")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, lengths)
    }
}

/// Jacobian form `B diag(l) B^T` for the signed cycle matrix `B`, padded with
/// zeros for the vertex weights.
pub fn tropical_jacobian(curve: &MetricCurve) -> Result<QuadForm> {
    let b = tu_representation_cographic(&curve.graph)?;
    let b = b.matrix();
    let h = b.rows();
    let mut rows = vec![vec![Rational::zero(); h]; h];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for (e, l) in curve.lengths.iter().enumerate() {
                let c = b[(i, e)] * b[(j, e)];
                if c != 0 {
                    *entry += l * crate::quadform::rat(c);
                }
            }
        }
    }
    Ok(QuadForm::new(rows)?.pad(curve.genus()))
}

/// Simple cographic matroid of the cell of `graph`.
pub fn torelli_cell_image(graph: &WeightedGraph) -> Result<BinaryMatroid> {
    Ok(simplify(&cographic_matroid(graph)?).0)
}

/// Coefficients of the Jacobian's cycle block in the rays of the zonotopal
/// cone of the signed cycle matrix, one per ray. Columns sharing a ray
/// (series edges of the graph) contribute the sum of their lengths; bridges
/// give zero columns and no ray.
pub fn jacobian_in_cographic_cone(curve: &MetricCurve) -> Result<JacobianCoefficients> {
    let b = tu_representation_cographic(&curve.graph)?;
    let cone = zonotopal_cone(&b);
    let h = b.rows();
    let jac = tropical_jacobian(curve)?;
    let block: Vec<Vec<Rational>> = (0..h).map(|i| (0..h).map(|j| jac.get(i, j).clone()).collect()).collect();
    let coefficients = cone_membership(&QuadForm::new(block)?, &cone)?
        .ok_or_else(|| Error::Invalid("Jacobian outside its cographic cone".into()))?;
    Ok(JacobianCoefficients { coefficients, column_ray: cone.column_ray })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianCoefficients {
    /// One coefficient per ray.
    pub coefficients: Vec<Rational>,
    /// Ray of each edge, `None` for bridges.
    pub column_ray: Vec<Option<usize>>,
}

impl JacobianCoefficients {
    /// Expected coefficient of each ray: the summed lengths of its edges.
    pub fn expected(&self, lengths: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.coefficients.len()];
        for (e, ray) in self.column_ray.iter().enumerate() {
            if let Some(r) = ray {
                out[*r] += &lengths[e];
            }
        }
        out
    }
}

/// A cell of `A_g^cogr`: a simple cographic matroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchottkyCell {
    pub id: usize,
    /// Ground-set size, the dimension of the cone.
    pub rank: usize,
    pub matroid: BinaryMatroid,
    /// A graph whose cell maps onto this one.
    pub witness: WeightedGraph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchottkyPoset {
    pub genus: usize,
    pub cells: Vec<SchottkyCell>,
    pub covers: BTreeSet<(usize, usize)>,
}

pub fn build_schottky_poset(g: usize) -> Result<SchottkyPoset> {
    if !(MIN_GENUS..=MAX_GENUS).contains(&g) {
        return Err(Error::GenusOutOfRange { genus: g, min: MIN_GENUS, max: MAX_GENUS });
    }
    schottky_from_moduli(&build_moduli_poset(g)?)
}

/// Isomorphism classes bucketed by invariant key.
#[derive(Default)]
struct Classes {
    buckets: BTreeMap<Vec<u32>, Vec<usize>>,
    members: Vec<(BinaryMatroid, Matroid, WeightedGraph)>,
}

impl Classes {
    fn find(&self, key: &[u32], m: &Matroid) -> Result<Option<usize>> {
        for &id in self.buckets.get(key).into_iter().flatten() {
            if self.members[id].1.is_isomorphic(m)? {
                return Ok(Some(id));
            }
        }
        Ok(None)
    }
}

/// Harvests simple cographic matroids from every cell of `P_g`.
pub fn schottky_from_moduli(poset: &CellPoset) -> Result<SchottkyPoset> {
    let images: Vec<(Vec<u32>, BinaryMatroid, Matroid)> = poset
        .cells
        .par_iter()
        .map(|cell| {
            let b = torelli_cell_image(&cell.graph)?;
            let m = b.to_matroid();
            Ok((m.invariant_key(), b, m))
        })
        .collect::<Result<_>>()?;

    let mut classes = Classes::default();
    for ((key, b, m), cell) in images.into_iter().zip(&poset.cells) {
        if classes.find(&key, &m)?.is_none() {
            classes.buckets.entry(key).or_default().push(classes.members.len());
            classes.members.push((b, m, cell.graph.clone()));
        }
    }

    // order by (ground size, invariant key, discovery order)
    let mut order: Vec<(usize, Vec<u32>, usize)> =
        classes.members.iter().enumerate().map(|(i, (_, m, _))| (m.ground_size(), m.invariant_key(), i)).collect();
    order.sort();
    let mut new_id = vec![0; order.len()];
    for (id, (_, _, old)) in order.iter().enumerate() {
        new_id[*old] = id;
    }

    let lowers: Vec<Vec<usize>> = classes
        .members
        .par_iter()
        .map(|(_, m, _)| {
            (0..m.ground_size())
                .map(|e| {
                    let d = m.delete(e);
                    classes
                        .find(&d.invariant_key(), &d)?
                        .ok_or_else(|| Error::Invalid("deletion outside the harvested cells".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut covers = BTreeSet::new();
    for (upper, lows) in lowers.iter().enumerate() {
        for &lower in lows {
            covers.insert((new_id[lower], new_id[upper]));
        }
    }

    let cells = order
        .iter()
        .enumerate()
        .map(|(id, (size, _, old))| {
            let (b, _, w) = &classes.members[*old];
            SchottkyCell { id, rank: *size, matroid: b.clone(), witness: w.clone() }
        })
        .collect();
    Ok(SchottkyPoset { genus: poset.genus, cells, covers })
}

impl SchottkyPoset {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.rank).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for c in &self.cells {
            f[c.rank] += 1;
        }
        f
    }

    pub fn maximal_cells(&self) -> Vec<&SchottkyCell> {
        let lower: BTreeSet<usize> = self.covers.iter().map(|&(lo, _)| lo).collect();
        self.cells.iter().filter(|c| !lower.contains(&c.id)).collect()
    }

    /// Index of the cell isomorphic to `m`, if any.
    pub fn find(&self, m: &Matroid) -> Result<Option<usize>> {
        let key = m.invariant_key();
        for c in &self.cells {
            let cm = c.matroid.to_matroid();
            if cm.invariant_key() == key && cm.is_isomorphic(m)? {
                return Ok(Some(c.id));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.genus,
            "fvector": self.f_vector(),
            "cells": self.cells.iter().map(|c| json!({
                "id": c.id,
                "rank": c.rank,
                "matroid": c.matroid.to_json(),
                "graph": c.witness.to_text(),
            })).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(lo, hi)| json!([lo, hi])).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let ranks: Vec<usize> = self.cells.iter().map(|c| c.rank).collect();
        let labels: Vec<String> = self
            .cells
            .iter()
            .map(|c| format!("n={} r={} [{}]", c.rank, c.matroid.rank(), c.matroid.rep_rows().join(" ")))
            .collect();
        hasse_dot(&format!("A_{}^cogr", self.genus), &ranks, &labels, &self.covers)
    }
}

/// Literature values for `A_g^tr`, g = 2..5: (maximal cells, total cells).
pub const PERFECT_CONE_REFERENCE: [(usize, u64, u64); 4] = [(2, 1, 4), (3, 1, 9), (4, 3, 61), (5, 222, 179433)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub genus: usize,
    pub moduli_maximal: usize,
    pub moduli_total: usize,
    pub schottky_maximal: usize,
    pub schottky_total: usize,
    pub reference_maximal: u64,
    pub reference_total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablesReport {
    pub rows: Vec<TableRow>,
}

/// Cell counts of `M_g^tr` and `A_g^cogr` for `g = 2..=genus_max`, next to
/// the reference counts for `A_g^tr`. Fails if the Schottky counts differ
/// from the reference in genus 2 or 3, where the two spaces coincide.
pub fn reproduce_tables(genus_max: usize) -> Result<TablesReport> {
    if !(MIN_GENUS..=MAX_GENUS).contains(&genus_max) {
        return Err(Error::GenusOutOfRange { genus: genus_max, min: MIN_GENUS, max: MAX_GENUS });
    }
    let mut rows = Vec::new();
    for &(g, reference_maximal, reference_total) in &PERFECT_CONE_REFERENCE {
        if g > genus_max {
            break;
        }
        let moduli = build_moduli_poset(g)?;
        let schottky = schottky_from_moduli(&moduli)?;
        let row = TableRow {
            genus: g,
            moduli_maximal: moduli.maximal_cells().len(),
            moduli_total: moduli.len(),
            schottky_maximal: schottky.maximal_cells().len(),
            schottky_total: schottky.len(),
            reference_maximal,
            reference_total,
        };
        if g <= 3 && (row.schottky_maximal as u64 != reference_maximal || row.schottky_total as u64 != reference_total)
        {
            return Err(Error::Invalid(format!("genus {g}: Schottky counts differ from A_g^tr")));
        }
        rows.push(row);
    }
    Ok(TablesReport { rows })
}

impl fmt::Display for TablesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "maximal cells")?;
        writeln!(f, "{:>3} {:>8} {:>8} {:>8}", "g", "M_g^tr", "A_cogr", "A_g^tr*")?;
        for r in &self.rows {
            writeln!(f, "{:>3} {:>8} {:>8} {:>8}", r.genus, r.moduli_maximal, r.schottky_maximal, r.reference_maximal)?;
        }
        writeln!(f, "total cells")?;
        writeln!(f, "{:>3} {:>8} {:>8} {:>8}", "g", "M_g^tr", "A_cogr", "A_g^tr*")?;
        for r in &self.rows {
            writeln!(f, "{:>3} {:>8} {:>8} {:>8}", r.genus, r.moduli_total, r.schottky_total, r.reference_total)?;
        }
        writeln!(f, "* A_g^tr: reference, not computed")
    }
}
