//! Combinatorial types of tropical curves: connected multigraphs with
//! nonnegative integer vertex weights.
//!
//! Loops and parallel edges are allowed. A loop contributes 2 to the degree of
//! its base vertex. Edges carry stable indices (their position in the edge
//! list); certificates and isomorphism tests ignore those indices.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count accepted by the canonical labeling and automorphism
/// routines.
pub const MAX_CANON_VERTICES: usize = 16;

/// A vertex-weighted multigraph `(G, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

/// Byte string identifying the isomorphism class of a [`WeightedGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCert(Vec<u8>);

impl CanonicalCert {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl WeightedGraph {
    /// Builds a graph from vertex weights and an edge list. Endpoints are
    /// normalized so that `u <= v`; edge order is kept.
    pub fn new(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("graph needs at least one vertex".into()));
        }
        let n = weights.len();
        let edges = edges
            .into_iter()
            .map(|(u, v)| {
                if u >= n || v >= n {
                    Err(Error::Invalid(format!("edge ({u},{v}) out of range for {n} vertices")))
                } else {
                    Ok((u.min(v), u.max(v)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { weights, edges })
    }

    /// One vertex of the given weight and no edges: the minimum of `P_g`.
    pub fn single_vertex(weight: u32) -> Self {
        Self { weights: vec![weight], edges: Vec::new() }
    }

    /// Two weight-0 vertices joined by three parallel edges.
    pub fn theta() -> Self {
        Self::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    /// Two weight-0 vertices, each carrying a loop, joined by a bridge.
    /// Edge order: loop at 0, loop at 1, bridge.
    pub fn dumbbell() -> Self {
        Self::new(vec![0, 0], vec![(0, 0), (1, 1), (0, 1)]).unwrap()
    }

    /// The complete graph on four weight-0 vertices.
    pub fn k4() -> Self {
        Self::new(vec![0; 4], vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// One vertex of weight 0 carrying `loops` loops.
    pub fn bouquet(loops: usize) -> Self {
        Self { weights: vec![0], edges: vec![(0, 0); loops] }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn total_weight(&self) -> usize {
        self.weights.iter().map(|&w| w as usize).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    /// First Betti number plus total weight.
    pub fn genus(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(self.edges.len() + 1 + self.total_weight() - self.num_vertices())
    }

    /// Whether `(G, w)` is a combinatorial type of genus `g`: connected, every
    /// weight-0 vertex of degree at least 3, and genus `g`.
    pub fn is_valid_type(&self, g: usize) -> bool {
        if !self.is_connected() {
            return false;
        }
        let mut degree = vec![0usize; self.num_vertices()];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let stable = self.weights.iter().zip(&degree).all(|(&w, &d)| w > 0 || d >= 3);
        stable && self.genus() == Ok(g)
    }

    /// Contracts edge `e`. A loop is deleted and its base vertex gains weight 1;
    /// a non-loop merges its endpoints (weights add) and any other edges
    /// between them become loops. The surviving vertex keeps the smaller
    /// index; higher indices shift down by one.
    pub fn contract_edge(&self, e: usize) -> Result<Self> {
        let &(u, v) = self.edges.get(e).ok_or(Error::EdgeNotFound(e))?;
        let mut weights = self.weights.clone();
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &x)| x).collect();
        if u == v {
            weights[u] += 1;
            return Ok(Self { weights, edges });
        }
        weights[u] += weights[v];
        weights.remove(v);
        let remap = |x: usize| match x.cmp(&v) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => u,
            std::cmp::Ordering::Greater => x - 1,
        };
        for edge in &mut edges {
            let (a, b) = (remap(edge.0), remap(edge.1));
            *edge = (a.min(b), a.max(b));
        }
        Ok(Self { weights, edges })
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`. Edge order is kept.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.num_vertices());
        let mut weights = vec![0; perm.len()];
        for (v, &p) in perm.iter().enumerate() {
            weights[p] = self.weights[v];
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        Self { weights, edges }
    }

    /// Symmetric multiplicity matrix; the diagonal holds loop counts.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.num_vertices();
        let mut m = vec![vec![0u32; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    fn check_canon_size(&self) -> Result<()> {
        if self.num_vertices() > MAX_CANON_VERTICES {
            return Err(Error::TooLarge(format!("{} vertices (limit {MAX_CANON_VERTICES})", self.num_vertices())));
        }
        Ok(())
    }

    /// Canonical representative of the isomorphism class together with the
    /// relabeling (`perm[old] = new`) that produces it. Edges of the result
    /// are sorted.
    pub fn canonical_form(&self) -> Result<(Self, Vec<usize>)> {
        self.check_canon_size()?;
        let canon = Canonizer::new(self);
        let (_, perm) = canon.run();
        let mut graph = self.relabel(&perm);
        graph.edges.sort_unstable();
        Ok((graph, perm))
    }

    pub fn canonical_certificate(&self) -> Result<CanonicalCert> {
        self.check_canon_size()?;
        let (code, _) = Canonizer::new(self).run();
        Ok(CanonicalCert(encode_code(&code)))
    }

    pub fn is_isomorphic(&self, other: &Self) -> Result<bool> {
        if self.num_vertices() != other.num_vertices() || self.num_edges() != other.num_edges() {
            return Ok(false);
        }
        Ok(self.canonical_certificate()? == other.canonical_certificate()?)
    }

    /// All weight-preserving vertex automorphisms, as maps `v -> perm[v]`.
    pub fn vertex_automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        self.check_canon_size()?;
        let canon = Canonizer::new(self);
        let colors = canon.refine(canon.initial_colors());
        let n = self.num_vertices();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        extend_automorphism(&canon.adj, &colors, 0, &mut perm, &mut used, &mut out);
        Ok(out)
    }

    /// Order of `Aut(G, w)`, the group of edge permutations induced by
    /// weight-preserving vertex automorphisms.
    ///
    /// For a fixed vertex automorphism the compatible edge permutations form a
    /// coset of the group permuting parallel edges (and parallel loops) among
    /// themselves, and two vertex automorphisms give the same coset exactly
    /// when they induce the same map on occupied endpoint pairs.
    pub fn automorphism_edge_group_order(&self) -> Result<u128> {
        let autos = self.vertex_automorphisms()?;
        let mut pairs: Vec<(usize, usize)> = self.edges.clone();
        pairs.sort_unstable();
        pairs.dedup();
        let mut induced: HashSet<Vec<(usize, usize)>> = HashSet::new();
        for perm in &autos {
            let image: Vec<(usize, usize)> = pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            induced.insert(image);
        }
        let mut parallel = 1u128;
        let m = self.multiplicity_matrix();
        for a in 0..m.len() {
            for b in a..m.len() {
                parallel *= factorial(m[a][b] as u128);
            }
        }
        Ok(parallel * induced.len() as u128)
    }

    /// ASCII text form `n=<k>; w=<w0,...>; E=(u0,v0),(u1,v1),...` with edges
    /// sorted after normalizing `u <= v`.
    pub fn to_text(&self) -> String {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        let w: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        let e: Vec<String> = edges.iter().map(|(a, b)| format!("({a},{b})")).collect();
        format!("n={}; w={}; E={}", self.num_vertices(), w.join(","), e.join(","))
    }
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for WeightedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad graph text: {s:?}"));
        let mut parts = s.split("; ");
        let n: usize = parts.next().and_then(|p| p.strip_prefix("n=")).and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let w = parts.next().and_then(|p| p.strip_prefix("w=")).ok_or_else(bad)?;
        let e = parts.next().and_then(|p| p.strip_prefix("E=")).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let weights: Vec<u32> = if w.is_empty() {
            Vec::new()
        } else {
            w.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        if weights.len() != n {
            return Err(bad());
        }
        let mut edges = Vec::new();
        let mut rest = e;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let (a, b) = body[..close].split_once(',').ok_or_else(bad)?;
            edges.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
            rest = &body[close + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                rest = r;
            } else if !rest.is_empty() {
                return Err(bad());
            }
        }
        WeightedGraph::new(weights, edges)
    }
}

fn factorial(k: u128) -> u128 {
    (1..=k).product()
}

fn encode_code(code: &[u32]) -> Vec<u8> {
    code.iter().flat_map(|x| x.to_be_bytes()).collect()
}

/// Individualization-refinement search for a canonical labeling. The graph
/// code of every leaf is computed and the lexicographically least one wins,
/// so the result depends only on the isomorphism class.
struct Canonizer<'a> {
    graph: &'a WeightedGraph,
    adj: Vec<Vec<u32>>,
}

impl<'a> Canonizer<'a> {
    fn new(graph: &'a WeightedGraph) -> Self {
        Self { graph, adj: graph.multiplicity_matrix() }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let n = self.graph.num_vertices();
        let keys: Vec<(u32, u32, usize)> =
            (0..n).map(|v| (self.graph.weights[v], self.adj[v][v], self.graph.degree(v))).collect();
        rank_keys(&keys)
    }

    /// Refines a coloring until every vertex of a color class sees the same
    /// multiset of (neighbor color, multiplicity).
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = colors.len();
        loop {
            let classes = count_classes(&colors);
            let keys: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> =
                        (0..n).filter(|&u| u != v && self.adj[v][u] > 0).map(|u| (colors[u], self.adj[v][u])).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank_keys(&keys);
            if count_classes(&next) == classes {
                return next;
            }
            colors = next;
        }
    }

    fn run(&self) -> (Vec<u32>, Vec<usize>) {
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        self.search(self.initial_colors(), &mut best);
        best.expect("search visits at least one leaf")
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        let colors = self.refine(colors);
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        match (0..n).find(|&c| counts[c] > 1) {
            None => {
                let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
                let code = self.code(&perm);
                if best.as_ref().is_none_or(|(b, _)| code < *b) {
                    *best = Some((code, perm));
                }
            }
            Some(target) => {
                let target = target as u32;
                for v in (0..n).filter(|&v| colors[v] == target) {
                    let split: Vec<u32> =
                        colors.iter().enumerate().map(|(u, &c)| 2 * c + u32::from(c == target && u != v)).collect();
                    self.search(split, best);
                }
            }
        }
    }

    fn code(&self, perm: &[usize]) -> Vec<u32> {
        let g = self.graph;
        let n = g.num_vertices();
        let mut code = Vec::with_capacity(2 + n + 2 * g.num_edges());
        code.push(n as u32);
        let mut weights = vec![0u32; n];
        for v in 0..n {
            weights[perm[v]] = g.weights[v];
        }
        code.extend(weights);
        code.push(g.num_edges() as u32);
        let mut edges: Vec<(u32, u32)> = g
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a] as u32, perm[b] as u32);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        for (a, b) in edges {
            code.push(a);
            code.push(b);
        }
        code
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn extend_automorphism(
    adj: &[Vec<u32>],
    colors: &[u32],
    v: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = colors.len();
    if v == n {
        out.push(perm.clone());
        return;
    }
    for u in 0..n {
        if used[u] || colors[u] != colors[v] || adj[v][v] != adj[u][u] {
            continue;
        }
        if (0..v).any(|w| adj[v][w] != adj[u][perm[w]]) {
            continue;
        }
        perm[v] = u;
        used[u] = true;
        extend_automorphism(adj, colors, v + 1, perm, used, out);
        used[u] = false;
    }
    perm[v] = usize::MAX;
}
