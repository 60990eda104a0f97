//! Connected 3-regular multigraphs on `2g - 2` vertices up to isomorphism:
//! the maximal cells of `M_g^tr`.
//!
//! Candidates are produced by backtracking over the upper-triangular
//! multiplicity matrix (diagonal = loop count). Labelings are restricted to
//! breadth-first orders: when row `j` is filled, vertex `j` must already have
//! a smaller neighbor, and the not-yet-reached vertices it touches form the
//! next contiguous block, listed with non-increasing multiplicity. Every
//! connected graph has such a labeling, so nothing is lost, and every
//! candidate is connected. Duplicates are removed by canonical certificate.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CanonicalCert, WeightedGraph};

pub const MIN_GENUS: usize = 2;
pub const MAX_GENUS: usize = 6;

/// All trivalent genus-`g` graphs (zero weights), sorted by certificate.
pub fn enumerate_trivalent(g: usize) -> Result<Vec<WeightedGraph>> {
    Ok(enumerate_trivalent_with_certs(g)?.into_values().collect())
}

/// Trivalent genus-`g` graphs keyed by certificate; values are canonical forms.
pub fn enumerate_trivalent_with_certs(g: usize) -> Result<BTreeMap<CanonicalCert, WeightedGraph>> {
    if !(MIN_GENUS..=MAX_GENUS).contains(&g) {
        return Err(Error::GenusOutOfRange { genus: g, min: MIN_GENUS, max: MAX_GENUS });
    }
    let candidates = labeled_candidates(2 * g - 2);
    let certified: Vec<(CanonicalCert, WeightedGraph)> = candidates
        .par_iter()
        .map(|graph| {
            let cert = graph.canonical_certificate()?;
            Ok((cert, graph.clone()))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (cert, graph) in certified {
        if let std::collections::btree_map::Entry::Vacant(slot) = out.entry(cert) {
            slot.insert(graph.canonical_form()?.0);
        }
    }
    Ok(out)
}

/// Labeled cubic multigraphs on `n` vertices in breadth-first labelings.
pub(crate) fn labeled_candidates(n: usize) -> Vec<WeightedGraph> {
    let mut search = Search { n, mult: vec![vec![0u8; n]; n], left: vec![3u8; n], out: Vec::new() };
    search.row(0, 0);
    search.out
}

struct Search {
    n: usize,
    mult: Vec<Vec<u8>>,
    left: Vec<u8>,
    out: Vec<WeightedGraph>,
}

impl Search {
    /// Starts row `j`; `reached` is the largest vertex index already
    /// adjacent to some vertex before `j` (or 0).
    fn row(&mut self, j: usize, reached: usize) {
        if j == self.n {
            self.emit();
            return;
        }
        if j > reached {
            return;
        }
        for loops in (0..=self.left[j] / 2).rev() {
            self.mult[j][j] = loops;
            self.left[j] -= 2 * loops;
            self.cell(j, j + 1, reached, u8::MAX, false);
            self.left[j] += 2 * loops;
        }
        self.mult[j][j] = 0;
    }

    /// Chooses the multiplicity of the pair `(j, k)`.
    fn cell(&mut self, j: usize, k: usize, reached: usize, last_new: u8, closed: bool) {
        if self.left[j] == 0 || k == self.n {
            if self.left[j] == 0 {
                self.row(j + 1, reached);
            }
            return;
        }
        let is_new = k > reached;
        if is_new && closed {
            return;
        }
        let cap = self.left[j].min(self.left[k]);
        let cap = if is_new { cap.min(last_new) } else { cap };
        for m in (0..=cap).rev() {
            self.mult[j][k] = m;
            self.left[j] -= m;
            self.left[k] -= m;
            if is_new {
                if m > 0 {
                    self.cell(j, k + 1, k, m, false);
                } else {
                    self.cell(j, k + 1, reached, last_new, true);
                }
            } else {
                self.cell(j, k + 1, reached, last_new, closed);
            }
            self.left[j] += m;
            self.left[k] += m;
        }
        self.mult[j][k] = 0;
    }

    fn emit(&mut self) {
        let mut edges = Vec::with_capacity(3 * self.n / 2);
        for a in 0..self.n {
            for b in a..self.n {
                for _ in 0..self.mult[a][b] {
                    edges.push((a, b));
                }
            }
        }
        self.out.push(WeightedGraph::new(vec![0; self.n], edges).expect("indices in range"));
    }
}
