//! The fans `FP^n` and the covers `FP^3 -> A_2^tr`, `FP^6 -> A_3^tr` glued
//! from matroid isomorphisms, with every pairwise overlap certified by an
//! explicit `GL_g(Z)` matrix.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::matroid::{
    fano, mk4_matrix, realize_matroid_iso, u23_matrix, uniform, verify_realization, Matroid, TuMatrix,
};

/// The complete fan with rays `e_1, ..., e_n, -(e_1 + ... + e_n)` whose cones
/// are spanned by all proper subsets of the rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpFan {
    pub n: usize,
    pub rays: Vec<Vec<i64>>,
    /// Subsets of ray indices of size at most `n`, as bitmasks.
    pub cones: Vec<u64>,
}

pub const MAX_FP_DIM: usize = 20;

pub fn build_fp(n: usize) -> Result<FpFan> {
    if n == 0 || n > MAX_FP_DIM {
        return Err(Error::Invalid(format!("FP^n needs 1 <= n <= {MAX_FP_DIM}")));
    }
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    rays.push(vec![-1; n]);
    let full = (1u64 << (n + 1)) - 1;
    let cones = (0..full).collect();
    Ok(FpFan { n, rays, cones })
}

impl FpFan {
    pub fn maximal_cones(&self) -> Vec<u64> {
        self.cones.iter().copied().filter(|c| c.count_ones() as usize == self.n).collect()
    }

    /// Whether every cone's rays are linearly independent.
    pub fn is_simplicial(&self) -> bool {
        self.maximal_cones().iter().all(|&c| {
            let cols: Vec<Vec<i64>> = (0..=self.n).filter(|&i| c >> i & 1 == 1).map(|i| self.rays[i].clone()).collect();
            IntMatrix::from_columns(self.n, &cols).rank() == self.n
        })
    }
}

/// One certified overlap: on the common face `subset` of the maximal cones
/// missing `i` and `j`, `matrix` carries the columns chosen by `pi_i` to
/// those chosen by `pi_j`, up to sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapWitness {
    pub i: usize,
    pub j: usize,
    pub subset: Vec<usize>,
    pub matrix: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMap {
    /// Dimension of the source fan; the source matroid has `n + 1` elements.
    pub n: usize,
    pub source: Matroid,
    pub target: TuMatrix,
    pub target_name: &'static str,
    /// `assignments[i][k]` is the target element of source element `k`
    /// (`None` at `k == i`).
    pub assignments: Vec<Vec<Option<usize>>>,
    pub log: Vec<OverlapWitness>,
    /// Number of deletions isomorphic to the target matroid.
    pub deletions_isomorphic: usize,
    /// Whether every restriction of the target occurs as a proper
    /// restriction of the source.
    pub surjective: bool,
}

/// The cover of `A_3^tr` by `FP^6`, glued along the Fano matroid.
///
/// Fano elements are 0-based: the printed 1-based lines 124, 235, 346, 457,
/// 156, 267, 137 are stored as {0,1,3}, {1,2,4}, {2,3,5}, {3,4,6}, {0,4,5},
/// {1,5,6}, {0,2,6}.
pub fn build_cover_a3() -> Result<CoverMap> {
    build_cover(fano().to_matroid(), mk4_matrix(), "MK4")
}

/// The cover of `A_2^tr` by `FP^3`, glued along `U_{2,4}`.
pub fn build_cover_a2() -> Result<CoverMap> {
    build_cover(uniform(2, 4)?, u23_matrix(), "U23")
}

fn build_cover(source: Matroid, target: TuMatrix, target_name: &'static str) -> Result<CoverMap> {
    let size = source.ground_size();
    let n = size - 1;
    let target_matroid = target.binary_matroid().to_matroid();
    if target_matroid.ground_size() != n {
        return Err(Error::DimensionMismatch("target must have one element fewer than the source".into()));
    }

    let mut assignments = Vec::with_capacity(size);
    let mut deletions_isomorphic = 0;
    for i in 0..size {
        let pi = source
            .delete(i)
            .isomorphism(&target_matroid)?
            .ok_or_else(|| Error::Invalid(format!("deleting element {i} does not give {target_name}")))?;
        deletions_isomorphic += 1;
        let others: Vec<usize> = (0..size).filter(|&k| k != i).collect();
        let mut full = vec![None; size];
        for (pos, &k) in others.iter().enumerate() {
            full[k] = Some(pi[pos]);
        }
        assignments.push(full);
    }

    let mut tasks = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            let rest: Vec<usize> = (0..size).filter(|&k| k != i && k != j).collect();
            for mask in 0..1u64 << rest.len() {
                let subset: Vec<usize> =
                    rest.iter().enumerate().filter(|&(b, _)| mask >> b & 1 == 1).map(|(_, &k)| k).collect();
                tasks.push((i, j, subset));
            }
        }
    }
    let log: Vec<OverlapWitness> = tasks
        .into_par_iter()
        .map(|(i, j, subset)| {
            let (a, b, ident) = overlap_matrices(&target, &assignments, i, j, &subset);
            let matrix = realize_matroid_iso(&a, &b, &ident).map_err(|_| Error::OverlapFailed {
                i,
                j,
                subset: subset.clone(),
            })?;
            Ok(OverlapWitness { i, j, subset, matrix })
        })
        .collect::<Result<_>>()?;

    let surjective = covers_all_restrictions(&source, &target_matroid)?;
    Ok(CoverMap { n, source, target, target_name, assignments, log, deletions_isomorphic, surjective })
}

/// Target columns picked by `pi_i` and by `pi_j` on `subset`, in subset order.
fn overlap_matrices(
    target: &TuMatrix,
    assignments: &[Vec<Option<usize>>],
    i: usize,
    j: usize,
    subset: &[usize],
) -> (TuMatrix, TuMatrix, Vec<usize>) {
    let via_i: Vec<usize> = subset.iter().map(|&k| assignments[i][k].expect("k differs from i")).collect();
    let via_j: Vec<usize> = subset.iter().map(|&k| assignments[j][k].expect("k differs from j")).collect();
    let ident: Vec<usize> = (0..subset.len()).collect();
    (target.select_columns(&via_i), target.select_columns(&via_j), ident)
}

/// Every restriction of `target` is isomorphic to a restriction of `source`
/// to a proper subset.
fn covers_all_restrictions(source: &Matroid, target: &Matroid) -> Result<bool> {
    let s = source.ground_size();
    let restrictions = |m: &Matroid, limit: usize| -> Vec<Matroid> {
        (0..1u64 << m.ground_size())
            .filter(|mask| (mask.count_ones() as usize) <= limit)
            .map(|mask| m.restrict(&(0..m.ground_size()).filter(|&e| mask >> e & 1 == 1).collect::<Vec<_>>()))
            .collect()
    };
    let available = restrictions(source, s - 1);
    for t in restrictions(target, target.ground_size()) {
        let key = t.invariant_key();
        let mut found = false;
        for m in &available {
            if m.invariant_key() == key && m.is_isomorphic(&t)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

impl CoverMap {
    pub fn overlap_count(&self) -> usize {
        self.log.len()
    }

    /// Re-checks every logged witness directly, without any search.
    pub fn reverify(&self) -> Result<usize> {
        for w in &self.log {
            let (a, b, ident) = overlap_matrices(&self.target, &self.assignments, w.i, w.j, &w.subset);
            if !verify_realization(&a, &b, &ident, &w.matrix) {
                return Err(Error::OverlapFailed { i: w.i, j: w.j, subset: w.subset.clone() });
            }
        }
        let expected: BTreeSet<(usize, usize, Vec<usize>)> =
            self.log.iter().map(|w| (w.i, w.j, w.subset.clone())).collect();
        let pairs = (self.n + 1) * self.n / 2;
        if expected.len() != pairs << (self.n - 1) {
            return Err(Error::Invalid("overlap log is incomplete".into()));
        }
        Ok(self.log.len())
    }

    pub fn summary(&self) -> String {
        format!(
            "{} overlaps verified; {} deletions ≅ {}; {}",
            self.log.len(),
            self.deletions_isomorphic,
            self.target_name,
            if self.surjective { "OK" } else { "NOT SURJECTIVE" }
        )
    }

    pub fn to_json(&self) -> Value {
        let size = self.n + 1;
        json!({
            "fan_dim": self.n,
            "target": self.target_name,
            "target_matrix": self.target.matrix().to_rows(),
            "source_circuits": self.source.circuit_lists(),
            "indexing": "elements are 0-based",
            "assignments": (0..size).map(|i| json!({
                "missing": i,
                "map": self.assignments[i].iter().enumerate()
                    .filter_map(|(k, t)| t.map(|t| json!([k, t])))
                    .collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "overlaps": self.log.iter().map(|w| json!({
                "i": w.i,
                "j": w.j,
                "subset": w.subset,
                "witness": w.matrix.to_rows(),
            })).collect::<Vec<_>>(),
            "cell_images": self.cell_images(),
            "deletions_isomorphic": self.deletions_isomorphic,
            "surjective": self.surjective,
        })
    }

    /// For each cone of the source fan, its size and the target columns
    /// assigned by the lowest-index maximal cone containing it.
    fn cell_images(&self) -> Vec<Value> {
        let size = self.n + 1;
        (0..(1u64 << size) - 1)
            .map(|mask| {
                let subset: Vec<usize> = (0..size).filter(|&k| mask >> k & 1 == 1).collect();
                let i = (0..size).find(|&k| mask >> k & 1 == 0).expect("proper subset");
                let image: Vec<usize> =
                    subset.iter().map(|&k| self.assignments[i][k].expect("k differs from i")).collect();
                json!({ "cone": subset, "via": i, "columns": image })
            })
            .collect()
    }
}

/// Nonzero vectors of `(Z/p)^g` modulo sign.
pub fn modp_ray_classes(g: usize, p: u64) -> Result<u64> {
    if g == 0 {
        return Err(Error::Invalid("g must be positive".into()));
    }
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let total =
        u32::try_from(g).ok().and_then(|g| p.checked_pow(g)).ok_or_else(|| Error::TooLarge(format!("{p}^{g}")))?;
    Ok(if p == 2 { total - 1 } else { (total - 1) / 2 })
}
