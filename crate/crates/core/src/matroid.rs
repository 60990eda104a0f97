//! Binary and regular matroids: cographic matroids of graphs, simplification,
//! isomorphism and automorphism search, totally unimodular representations,
//! zonotopal cones, and the construction that realizes a matroid
//! isomorphism between two totally unimodular matrices by a `GL_g(Z)` matrix.

use std::collections::{HashMap, HashSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::IntMatrix;

/// Largest ground set accepted by isomorphism and automorphism search.
pub const MAX_ISO_GROUND: usize = 12;
/// Largest ground set whose circuits are enumerated.
pub const MAX_GROUND: usize = 63;

/// A matroid given by its circuits, each a bitmask over the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    /// Sorted by size, then by mask.
    circuits: Vec<u64>,
}

impl Matroid {
    pub fn from_circuits(n: usize, circuits: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::TooLarge(format!("ground set of size {n}")));
        }
        let full = full_mask(n);
        let mut circuits: Vec<u64> = circuits.into_iter().collect();
        if circuits.iter().any(|&c| c == 0 || c & !full != 0) {
            return Err(Error::Invalid("circuit outside the ground set".into()));
        }
        sort_circuits(&mut circuits);
        Ok(Self { n, circuits })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn circuits(&self) -> &[u64] {
        &self.circuits
    }

    /// Circuits as sorted element lists, in sorted order.
    pub fn circuit_lists(&self) -> Vec<Vec<usize>> {
        let mut lists: Vec<Vec<usize>> = self.circuits.iter().map(|&c| bits(c)).collect();
        lists.sort();
        lists
    }

    pub fn is_dependent(&self, set: u64) -> bool {
        self.circuits.iter().any(|&c| c & !set == 0)
    }

    pub fn rank_of(&self, set: u64) -> usize {
        let mut basis = 0u64;
        for e in bits(set) {
            if !self.is_dependent(basis | 1 << e) {
                basis |= 1 << e;
            }
        }
        basis.count_ones() as usize
    }

    pub fn rank(&self) -> usize {
        self.rank_of(full_mask(self.n))
    }

    pub fn is_simple(&self) -> bool {
        self.circuits.iter().all(|c| c.count_ones() >= 3)
    }

    /// Restriction to `keep`; element `keep[i]` becomes element `i`.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mask: u64 = keep.iter().fold(0, |m, &e| m | 1 << e);
        let circuits = self
            .circuits
            .iter()
            .filter(|&&c| c & mask == c)
            .map(|&c| keep.iter().enumerate().filter(|&(_, &e)| c >> e & 1 == 1).fold(0u64, |m, (i, _)| m | 1 << i))
            .collect::<Vec<_>>();
        let mut circuits = circuits;
        sort_circuits(&mut circuits);
        Self { n: keep.len(), circuits }
    }

    /// Deletes one element; higher elements shift down.
    pub fn delete(&self, e: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&x| x != e).collect();
        self.restrict(&keep)
    }

    fn check_iso_size(&self) -> Result<()> {
        if self.n > MAX_ISO_GROUND {
            return Err(Error::TooLarge(format!("ground set of size {} (limit {MAX_ISO_GROUND})", self.n)));
        }
        Ok(())
    }

    /// Isomorphism-invariant summary used to bucket matroids before search.
    pub fn invariant_key(&self) -> Vec<u32> {
        let profile = Profile::new(self);
        let mut elems: Vec<Vec<u32>> = profile.element.clone();
        elems.sort();
        let mut key = vec![self.n as u32, self.circuits.len() as u32];
        for e in elems {
            key.extend(e);
        }
        key
    }

    /// Lexicographically least bijection `pi` (element `i` of `self` maps to
    /// `pi[i]` of `other`) carrying circuits onto circuits, if one exists.
    pub fn isomorphism(&self, other: &Self) -> Result<Option<Vec<usize>>> {
        self.check_iso_size()?;
        other.check_iso_size()?;
        if self.n != other.n || self.circuits.len() != other.circuits.len() {
            return Ok(None);
        }
        let sizes = |m: &Matroid| m.circuits.iter().map(|c| c.count_ones()).collect::<Vec<_>>();
        if sizes(self) != sizes(other) {
            return Ok(None);
        }
        let search = IsoSearch::new(self, other);
        let mut found = None;
        search.run(&mut |pi| {
            found = Some(pi.to_vec());
            false
        });
        Ok(found)
    }

    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        Ok(self.isomorphism(other)?.is_some())
    }

    /// All automorphisms, in lexicographic order.
    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        self.check_iso_size()?;
        let search = IsoSearch::new(self, self);
        let mut out = Vec::new();
        search.run(&mut |pi| {
            out.push(pi.to_vec());
            true
        });
        Ok(out)
    }

    pub fn automorphism_group_order(&self) -> Result<u64> {
        self.check_iso_size()?;
        let search = IsoSearch::new(self, self);
        let mut count = 0u64;
        search.run(&mut |_| {
            count += 1;
            true
        });
        Ok(count)
    }

    /// Whether `pi` carries the circuits of `self` exactly onto those of `other`.
    pub fn is_isomorphism(&self, other: &Self, pi: &[usize]) -> bool {
        if self.n != other.n || pi.len() != self.n || self.circuits.len() != other.circuits.len() {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &x in pi {
            if x >= self.n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        let target: HashSet<u64> = other.circuits.iter().copied().collect();
        self.circuits.iter().all(|&c| target.contains(&map_mask(c, pi)))
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn map_mask(mask: u64, pi: &[usize]) -> u64 {
    bits(mask).into_iter().fold(0, |m, e| m | 1 << pi[e])
}

fn sort_circuits(circuits: &mut Vec<u64>) {
    circuits.sort_by_key(|&c| (c.count_ones(), c));
    circuits.dedup();
}

/// Per-element and per-pair counts of circuits by size.
struct Profile {
    element: Vec<Vec<u32>>,
    pair: Vec<Vec<Vec<u32>>>,
}

impl Profile {
    fn new(m: &Matroid) -> Self {
        let n = m.n;
        let mut element = vec![vec![0u32; n + 1]; n];
        let mut pair = vec![vec![vec![0u32; n + 1]; n]; n];
        for &c in &m.circuits {
            let size = c.count_ones() as usize;
            let members = bits(c);
            for &a in &members {
                element[a][size] += 1;
                for &b in &members {
                    pair[a][b][size] += 1;
                }
            }
        }
        Self { element, pair }
    }
}

struct IsoSearch<'a> {
    from: &'a Matroid,
    target: HashSet<u64>,
    from_profile: Profile,
    to_profile: Profile,
    /// Circuits of `from` grouped by their largest element.
    closing: Vec<Vec<u64>>,
}

impl<'a> IsoSearch<'a> {
    fn new(from: &'a Matroid, to: &'a Matroid) -> Self {
        let mut closing = vec![Vec::new(); from.n];
        for &c in &from.circuits {
            closing[63 - c.leading_zeros() as usize].push(c);
        }
        Self {
            from,
            target: to.circuits.iter().copied().collect(),
            from_profile: Profile::new(from),
            to_profile: Profile::new(to),
            closing,
        }
    }

    /// Calls `visit` on every isomorphism in lexicographic order until it
    /// returns `false`.
    fn run(&self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let n = self.from.n;
        let mut pi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(0, &mut pi, &mut used, visit);
    }

    fn extend(
        &self,
        k: usize,
        pi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = self.from.n;
        if k == n {
            return visit(pi);
        }
        for x in 0..n {
            if used[x] || self.from_profile.element[k] != self.to_profile.element[x] {
                continue;
            }
            if (0..k).any(|j| self.from_profile.pair[k][j] != self.to_profile.pair[x][pi[j]]) {
                continue;
            }
            pi[k] = x;
            if !self.closing[k].iter().all(|&c| self.target.contains(&map_mask(c, pi))) {
                continue;
            }
            used[x] = true;
            let keep_going = self.extend(k + 1, pi, used, visit);
            used[x] = false;
            if !keep_going {
                return false;
            }
        }
        pi[k] = usize::MAX;
        true
    }
}

pub fn is_isomorphic_matroid(m: &Matroid, n: &Matroid) -> Result<Option<Vec<usize>>> {
    m.isomorphism(n)
}

pub fn automorphism_group_order(m: &Matroid) -> Result<u64> {
    m.automorphism_group_order()
}

/// Uniform matroid `U_{d,n}`: every `(d+1)`-subset is a circuit.
pub fn uniform(d: usize, n: usize) -> Result<Matroid> {
    if d > n {
        return Err(Error::Invalid(format!("uniform({d},{n}) needs d <= n")));
    }
    if n > MAX_GROUND {
        return Err(Error::TooLarge(format!("ground set of size {n}")));
    }
    let circuits = subsets_of_size(n, d + 1);
    Matroid::from_circuits(n, circuits)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    (0..1u64 << n).filter(|s| s.count_ones() as usize == k).collect()
}

/// A matroid represented over the two-element field. Column `j` is stored as
/// a bitmask over the rows of a row-reduced representation of full row rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatroid {
    n: usize,
    rank: usize,
    columns: Vec<u64>,
}

impl BinaryMatroid {
    /// From column bitmasks (bit `i` = row `i`); rows are reduced internally.
    pub fn from_columns(columns: &[u64]) -> Result<Self> {
        if columns.len() > MAX_GROUND {
            return Err(Error::TooLarge(format!("ground set of size {}", columns.len())));
        }
        let rows = (0..64)
            .map(|i| columns.iter().enumerate().fold(0u64, |r, (j, &c)| r | ((c >> i & 1) << j)))
            .filter(|&r| r != 0)
            .collect::<Vec<_>>();
        Ok(Self::from_row_masks(columns.len(), rows))
    }

    /// From row bitmasks over the ground set (bit `j` = column `j`).
    pub fn from_row_masks(n: usize, mut rows: Vec<u64>) -> Self {
        // reduced row echelon form over GF(2)
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else { continue };
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> col & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        let columns =
            (0..n).map(|j| rows.iter().enumerate().fold(0u64, |c, (i, &r)| c | ((r >> j & 1) << i))).collect();
        Self { n, rank, columns }
    }

    /// Reduction modulo 2 of an integer matrix.
    pub fn from_int_matrix(a: &IntMatrix) -> Result<Self> {
        if a.rows() > 64 {
            return Err(Error::TooLarge(format!("{} rows", a.rows())));
        }
        let columns: Vec<u64> = (0..a.cols())
            .map(|j| (0..a.rows()).fold(0u64, |c, i| c | ((a[(i, j)].rem_euclid(2) as u64) << i)))
            .collect();
        Self::from_columns(&columns)
    }

    /// From rows written as `0`/`1` strings, one character per element.
    pub fn from_bitstrings(rows: &[&str]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let mut masks = Vec::new();
        for r in rows {
            if r.len() != n {
                return Err(Error::Parse("ragged bitstring rows".into()));
            }
            let mut m = 0u64;
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m |= 1 << j,
                    _ => return Err(Error::Parse(format!("bad bit {ch:?}"))),
                }
            }
            masks.push(m);
        }
        Ok(Self::from_row_masks(n, masks))
    }

    pub fn empty() -> Self {
        Self { n: 0, rank: 0, columns: Vec::new() }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    /// Rows of the reduced representation as `0`/`1` strings.
    pub fn rep_rows(&self) -> Vec<String> {
        (0..self.rank)
            .map(|i| self.columns.iter().map(|&c| if c >> i & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }

    /// Circuits: minimal nonempty column sets summing to zero.
    pub fn circuits(&self) -> Vec<u64> {
        let kernel = self.kernel_basis();
        let k = kernel.len();
        assert!(k <= 24, "kernel dimension {k} too large to enumerate");
        let mut vectors: Vec<u64> = Vec::with_capacity(1 << k);
        let mut current = 0u64;
        // Gray-code walk over the kernel
        for step in 1u64..(1u64 << k) {
            current ^= kernel[step.trailing_zeros() as usize];
            vectors.push(current);
        }
        vectors.sort_by_key(|&v| (v.count_ones(), v));
        let mut circuits: Vec<u64> = Vec::new();
        for v in vectors {
            if !circuits.iter().any(|&c| c & !v == 0) {
                circuits.push(v);
            }
        }
        circuits
    }

    fn kernel_basis(&self) -> Vec<u64> {
        // Columns are already in reduced form: pivot column of row i is the
        // first column equal to the unit vector e_i.
        let mut pivot_of_row = vec![usize::MAX; self.rank];
        for (j, &c) in self.columns.iter().enumerate() {
            if c.count_ones() == 1 {
                let i = c.trailing_zeros() as usize;
                if pivot_of_row[i] == usize::MAX {
                    pivot_of_row[i] = j;
                }
            }
        }
        let pivots: HashSet<usize> = pivot_of_row.iter().copied().collect();
        (0..self.n)
            .filter(|j| !pivots.contains(j))
            .map(|j| {
                let c = self.columns[j];
                (0..self.rank).filter(|&i| c >> i & 1 == 1).fold(1u64 << j, |v, i| v | 1 << pivot_of_row[i])
            })
            .collect()
    }

    pub fn to_matroid(&self) -> Matroid {
        Matroid::from_circuits(self.n, self.circuits()).expect("ground set within limits")
    }

    /// Restriction to the listed columns, in order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let cols: Vec<u64> = keep.iter().map(|&j| self.columns[j]).collect();
        Self::from_columns(&cols).expect("restriction is smaller")
    }

    pub fn delete(&self, e: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&x| x != e).collect();
        self.restrict(&keep)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.columns.iter().all(|&c| c != 0 && seen.insert(c))
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "rank": self.rank, "rep_rows": self.rep_rows() })
    }

    pub fn circuits_json(&self) -> Value {
        json!(self.to_matroid().circuit_lists())
    }
}

/// Removes zero columns and keeps the lowest-index column of each class of
/// equal columns. `map[old]` is the new index, or `None` if deleted.
pub fn simplify(m: &BinaryMatroid) -> (BinaryMatroid, Vec<Option<usize>>) {
    let mut first: HashMap<u64, usize> = HashMap::new();
    let mut keep = Vec::new();
    let mut map = vec![None; m.n];
    for (j, &c) in m.columns.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if let Some(&new) = first.get(&c) {
            let _ = new;
            continue;
        }
        first.insert(c, keep.len());
        map[j] = Some(keep.len());
        keep.push(j);
    }
    (m.restrict(&keep), map)
}

/// A `g x n` matrix with entries in {-1, 0, 1} all of whose square minors
/// lie in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuMatrix(IntMatrix);

impl TuMatrix {
    /// Wraps `a` after checking total unimodularity.
    pub fn new(a: IntMatrix) -> Result<Self> {
        if is_totally_unimodular(&a)? {
            Ok(Self(a))
        } else {
            Err(Error::Invalid(format!("{a} is not totally unimodular")))
        }
    }

    /// Wraps a matrix known to be totally unimodular by construction
    /// (signed cycle matrices, submatrices of a checked matrix).
    pub(crate) fn trusted(a: IntMatrix) -> Self {
        debug_assert!(a.to_rows().iter().flatten().all(|x| x.abs() <= 1));
        Self(a)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self(self.0.select_columns(cols))
    }

    pub fn binary_matroid(&self) -> BinaryMatroid {
        BinaryMatroid::from_int_matrix(&self.0).expect("row count within limits")
    }
}

/// Whether every square submatrix has determinant in {-1, 0, 1}.
pub fn is_totally_unimodular(a: &IntMatrix) -> Result<bool> {
    let (r, c) = (a.rows(), a.cols());
    if r.min(c) > 8 || r.max(c) > 14 {
        return Err(Error::UseStructuralCheck);
    }
    if a.to_rows().iter().flatten().any(|x| x.abs() > 1) {
        return Ok(false);
    }
    for k in 2..=r.min(c) {
        for rows in combinations(r, k) {
            for cols in combinations(c, k) {
                let d = a.select(&rows, &cols).det()?;
                if d.abs() > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

/// Lowest-index spanning tree: edges scanned in index order, kept when they
/// join two components. Returns edge indices.
pub fn default_spanning_tree(g: &WeightedGraph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            tree.push(e);
        }
    }
    tree
}

/// Signed fundamental-cycle matrix of `g` for the default spanning tree.
pub fn tu_representation_cographic(g: &WeightedGraph) -> Result<TuMatrix> {
    tu_representation_with_tree(g, &default_spanning_tree(g))
}

/// Signed fundamental-cycle matrix for the spanning tree `tree`.
///
/// Edges are oriented from the lower to the higher vertex index. Row `k` is
/// the fundamental cycle of the `k`-th non-tree edge (by index), traversed
/// along that edge. Rows are then signed so that each row's first nonzero
/// inner product with an earlier row is negative.
pub fn tu_representation_with_tree(g: &WeightedGraph, tree: &[usize]) -> Result<TuMatrix> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = g.num_vertices();
    let m = g.num_edges();
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    if tree.len() + 1 != n || in_tree.len() != tree.len() || tree.iter().any(|&e| e >= m || g.is_loop(e)) {
        return Err(Error::Invalid("not a spanning tree".into()));
    }
    // adjacency within the tree
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in tree {
        let (u, v) = g.edges()[e];
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    // parent pointers from a traversal rooted at 0
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in &adj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::Invalid("not a spanning tree".into()));
    }

    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if in_tree.contains(&e) {
            continue;
        }
        let mut row = vec![0i64; m];
        row[e] = 1;
        // walk the tree path from v back to u
        let (mut a, mut b) = (v, u);
        let mut from_a: Vec<(usize, usize, usize)> = Vec::new(); // (edge, from, to)
        let mut from_b: Vec<(usize, usize, usize)> = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, te) = parent[a].expect("non-root has a parent");
                from_a.push((te, a, p));
                a = p;
            } else {
                let (p, te) = parent[b].expect("non-root has a parent");
                from_b.push((te, p, b));
                b = p;
            }
        }
        for (te, x, y) in from_a.into_iter().chain(from_b.into_iter().rev()) {
            let (s, t) = g.edges()[te];
            row[te] += if (x, y) == (s, t) { 1 } else { -1 };
        }
        rows.push(row);
    }
    for k in 1..rows.len() {
        let first = (0..k).map(|j| dot(&rows[k], &rows[j])).find(|&d| d != 0);
        if matches!(first, Some(d) if d > 0) {
            rows[k].iter_mut().for_each(|x| *x = -*x);
        }
    }
    let a = if rows.is_empty() { IntMatrix::zeros(0, m) } else { IntMatrix::from_rows(&rows)? };
    Ok(TuMatrix::trusted(a))
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cographic matroid `M*(G)`: the row space of its representation is the
/// cycle space of `G` over the two-element field, so circuits are bonds.
pub fn cographic_matroid(g: &WeightedGraph) -> Result<BinaryMatroid> {
    let tu = tu_representation_cographic(g)?;
    BinaryMatroid::from_int_matrix(tu.matrix())
}

/// Cone generated by the rank-one forms `v v^T` of the columns of a totally
/// unimodular matrix. Zero columns contribute nothing; equal rays are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZonotopalCone {
    pub dim: usize,
    pub rays: Vec<IntMatrix>,
    /// For each column of the source matrix, the index of its ray.
    pub column_ray: Vec<Option<usize>>,
}

impl ZonotopalCone {
    /// Rays flattened to upper-triangular coordinates `(i <= j)`.
    pub fn flattened_rays(&self) -> Vec<Vec<i64>> {
        self.rays.iter().map(upper_triangle).collect()
    }

    /// Whether the rays are linearly independent.
    pub fn is_simplicial(&self) -> bool {
        if self.rays.is_empty() {
            return true;
        }
        let cols = self.flattened_rays();
        IntMatrix::from_columns(cols[0].len(), &cols).rank() == self.rays.len()
    }
}

pub(crate) fn upper_triangle(m: &IntMatrix) -> Vec<i64> {
    let g = m.rows();
    (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

pub fn outer(v: &[i64]) -> IntMatrix {
    let g = v.len();
    let mut m = IntMatrix::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            m[(i, j)] = v[i] * v[j];
        }
    }
    m
}

pub fn zonotopal_cone(a: &TuMatrix) -> ZonotopalCone {
    let g = a.rows();
    let mut rays: Vec<IntMatrix> = Vec::new();
    let mut column_ray = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let v = a.matrix().column(j);
        if v.iter().all(|&x| x == 0) {
            column_ray.push(None);
            continue;
        }
        let r = outer(&v);
        match rays.iter().position(|x| *x == r) {
            Some(i) => column_ray.push(Some(i)),
            None => {
                column_ray.push(Some(rays.len()));
                rays.push(r);
            }
        }
    }
    ZonotopalCone { dim: g, rays, column_ray }
}

/// Finds `X` in `GL_g(Z)` with `X a_i = ± b_{pi(i)}` for every column `a_i`
/// of `a`, given that `pi` induces a matroid isomorphism `M[a] -> M[b]`.
///
/// Both matrices are brought to the form `[I | *; 0 | 0]` (after moving a
/// common column basis to the front) by unimodular row operations. The two
/// normal forms are totally unimodular with equal support, so they differ by
/// row and column negations, found by two-coloring the support graph.
pub fn realize_matroid_iso(a: &TuMatrix, b: &TuMatrix, pi: &[usize]) -> Result<IntMatrix> {
    let (g, n) = (a.rows(), a.cols());
    if b.rows() != g || b.cols() != n || pi.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{} with a map on {} elements",
            g,
            n,
            b.rows(),
            b.cols(),
            pi.len()
        )));
    }
    let (ra, rb) = (a.matrix().rank(), b.matrix().rank());
    if ra != rb {
        return Err(Error::RankMismatch(ra, rb));
    }
    let ma = a.binary_matroid().to_matroid();
    let mb = b.binary_matroid().to_matroid();
    if !ma.is_isomorphism(&mb, pi) {
        return Err(Error::NotAnIsomorphism);
    }
    let permuted = b.matrix().select_columns(pi);
    let basis = a.matrix().pivot_columns();
    let u = a.matrix().select_columns(&basis).saturated_completion()?;
    let v = permuted.select_columns(&basis).saturated_completion()?;
    let p = u.mul(a.matrix())?;
    let q = v.mul(&permuted)?;
    let r = basis.len();

    // s_i * p_ij * t_j = q_ij on the first r rows
    let mut row_sign: Vec<Option<i64>> = vec![None; g];
    let mut col_sign: Vec<Option<i64>> = vec![None; n];
    for i in r..g {
        row_sign[i] = Some(1);
    }
    for start in 0..r {
        if row_sign[start].is_some() {
            continue;
        }
        row_sign[start] = Some(1);
        let mut queue = VecDeque::from([(true, start)]);
        while let Some((is_row, x)) = queue.pop_front() {
            if is_row {
                let s = row_sign[x].unwrap();
                for j in 0..n {
                    let (pv, qv) = (p[(x, j)], q[(x, j)]);
                    if (pv == 0) != (qv == 0) {
                        return Err(Error::NotAnIsomorphism);
                    }
                    if pv == 0 {
                        continue;
                    }
                    let t = s * pv * qv;
                    match col_sign[j] {
                        None => {
                            col_sign[j] = Some(t);
                            queue.push_back((false, j));
                        }
                        Some(old) if old != t => return Err(Error::NotAnIsomorphism),
                        Some(_) => {}
                    }
                }
            } else {
                let t = col_sign[x].unwrap();
                for i in 0..r {
                    let (pv, qv) = (p[(i, x)], q[(i, x)]);
                    if pv == 0 {
                        continue;
                    }
                    let s = t * pv * qv;
                    match row_sign[i] {
                        None => {
                            row_sign[i] = Some(s);
                            queue.push_back((true, i));
                        }
                        Some(old) if old != s => return Err(Error::NotAnIsomorphism),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let mut d = IntMatrix::identity(g);
    for (i, s) in row_sign.iter().enumerate() {
        d[(i, i)] = s.unwrap_or(1);
    }
    let x = v.unimodular_inverse()?.mul(&d)?.mul(&u)?;
    if !verify_realization(a, b, pi, &x) {
        return Err(Error::NotAnIsomorphism);
    }
    Ok(x)
}

/// Checks `|det X| = 1` and `X a_i = ± b_{pi(i)}` for every column.
pub fn verify_realization(a: &TuMatrix, b: &TuMatrix, pi: &[usize], x: &IntMatrix) -> bool {
    if !x.is_unimodular() || x.rows() != a.rows() || pi.len() != a.cols() {
        return false;
    }
    (0..a.cols()).all(|i| {
        let image = x.mul_vec(&a.matrix().column(i));
        let target = b.matrix().column(pi[i]);
        image == target || image.iter().zip(&target).all(|(p, q)| *p == -q)
    })
}

/// The Fano matroid on `{0,...,6}` with lines `{i, i+1, i+3} mod 7`: column
/// `i` is `alpha^i` in GF(8) with `alpha^3 = alpha + 1`.
///
/// In 1-based labels the lines are 124, 235, 346, 457, 156, 267, 137.
pub fn fano() -> BinaryMatroid {
    let mut cols = Vec::with_capacity(7);
    let mut x = 1u64;
    for _ in 0..7 {
        cols.push(x);
        x <<= 1;
        if x & 0b1000 != 0 {
            x ^= 0b1011;
        }
    }
    BinaryMatroid::from_columns(&cols).expect("seven columns")
}

/// The 3x6 totally unimodular matrix used for `M(K_4)`.
pub fn mk4_matrix() -> TuMatrix {
    TuMatrix::trusted(
        IntMatrix::from_rows(&[vec![1, 0, 0, 1, 1, 0], vec![0, 1, 0, -1, 0, 1], vec![0, 0, 1, 0, -1, -1]])
            .expect("rectangular"),
    )
}

pub fn mk4() -> BinaryMatroid {
    mk4_matrix().binary_matroid()
}

/// The 2x3 totally unimodular matrix `(1 0 1; 0 1 -1)` representing `U_{2,3}`.
pub fn u23_matrix() -> TuMatrix {
    TuMatrix::trusted(IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, -1]]).expect("rectangular"))
}
