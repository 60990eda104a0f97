//! Brute-force reference implementations used by the integration tests.
//! Nothing here calls the library's search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use tropmod_core::WeightedGraph;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

fn pair(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn sorted_edges(g: &WeightedGraph, sigma: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| pair(sigma[u], sigma[v])).collect();
    e.sort();
    e
}

/// Isomorphism of weighted multigraphs by trying every vertex bijection.
pub fn graph_iso(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    let n = a.num_vertices();
    if n != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let target = sorted_edges(b, &(0..n).collect::<Vec<_>>());
    permutations(n).iter().any(|s| (0..n).all(|v| a.weights()[v] == b.weights()[s[v]]) && sorted_edges(a, s) == target)
}

/// Order of the group of edge permutations induced by weight-preserving
/// vertex bijections, by enumerating every edge permutation.
pub fn edge_automorphism_order(g: &WeightedGraph) -> u64 {
    let n = g.num_vertices();
    let m = g.num_edges();
    let sigmas: Vec<Vec<usize>> =
        permutations(n).into_iter().filter(|s| (0..n).all(|v| g.weights()[v] == g.weights()[s[v]])).collect();
    let edges = g.edges();
    permutations(m)
        .iter()
        .filter(|tau| {
            sigmas.iter().any(|s| {
                (0..m).all(|e| {
                    let (u, v) = edges[e];
                    let (x, y) = edges[tau[e]];
                    pair(s[u], s[v]) == pair(x, y)
                })
            })
        })
        .count() as u64
}

/// Minimal nonempty edge cuts, as edge bitmasks.
pub fn bonds(g: &WeightedGraph) -> Vec<u64> {
    let n = g.num_vertices();
    let mut cuts = BTreeSet::new();
    for side in 1..(1u64 << n) - 1 {
        let mut cut = 0u64;
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if (side >> u & 1) != (side >> v & 1) {
                cut |= 1 << e;
            }
        }
        if cut != 0 {
            cuts.insert(cut);
        }
    }
    let cuts: Vec<u64> = cuts.into_iter().collect();
    let mut out: Vec<u64> = cuts.iter().copied().filter(|&c| !cuts.iter().any(|&d| d != c && d & c == d)).collect();
    out.sort();
    out
}

/// Removes loops (single-element circuits) and all but the lowest element of
/// each parallel class; returns the new ground size and relabeled circuits.
pub fn simplify_circuits(n: usize, circuits: &[u64]) -> (usize, Vec<u64>) {
    let mut circuits = circuits.to_vec();
    circuits.sort();
    let mut deleted = 0u64;
    for &c in &circuits {
        if c.count_ones() == 1 {
            deleted |= c;
        }
    }
    for &c in &circuits {
        if c.count_ones() == 2 && c & deleted == 0 {
            let high = 63 - c.leading_zeros();
            deleted |= 1 << high;
        }
    }
    // a parallel class {a, b, c} gives circuits ab, ac, bc; the loop above
    // deletes b and c and keeps a
    let keep: Vec<usize> = (0..n).filter(|&e| deleted >> e & 1 == 0).collect();
    let mut out: Vec<u64> = circuits
        .iter()
        .filter(|&&c| c & deleted == 0)
        .map(|&c| keep.iter().enumerate().filter(|&(_, &e)| c >> e & 1 == 1).fold(0, |m, (i, _)| m | 1 << i))
        .collect();
    out.sort();
    (keep.len(), out)
}

fn map_mask(mask: u64, pi: &[usize]) -> u64 {
    (0..pi.len()).filter(|&e| mask >> e & 1 == 1).fold(0, |m, e| m | 1 << pi[e])
}

/// All bijections carrying circuits onto circuits.
pub fn matroid_isomorphisms(n: usize, from: &[u64], to: &[u64]) -> Vec<Vec<usize>> {
    if from.len() != to.len() {
        return Vec::new();
    }
    let target: BTreeSet<u64> = to.iter().copied().collect();
    permutations(n).into_iter().filter(|pi| from.iter().all(|&c| target.contains(&map_mask(c, pi)))).collect()
}

pub fn matroid_iso(n: usize, from: &[u64], m: usize, to: &[u64]) -> bool {
    n == m && from.len() == to.len() && {
        let target: BTreeSet<u64> = to.iter().copied().collect();
        permutations(n).iter().any(|pi| from.iter().all(|&c| target.contains(&map_mask(c, pi))))
    }
}

/// Circuits of the binary matroid with the given columns: minimal nonempty
/// subsets whose columns sum to zero over GF(2), by trying every subset.
pub fn binary_circuits(columns: &[u64]) -> Vec<u64> {
    let n = columns.len();
    let zero_sum: Vec<u64> =
        (1u64..1 << n).filter(|&s| (0..n).filter(|&e| s >> e & 1 == 1).fold(0, |x, e| x ^ columns[e]) == 0).collect();
    let mut out: Vec<u64> =
        zero_sum.iter().copied().filter(|&c| !zero_sum.iter().any(|&d| d != c && d & c == d)).collect();
    out.sort();
    out
}

/// Whether removing the edges in `mask` disconnects the graph.
pub fn disconnects(g: &WeightedGraph, mask: u64) -> bool {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if mask >> e & 1 == 1 {
                continue;
            }
            for (a, b) in [(u, v), (v, u)] {
                if a == x && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.iter().any(|s| !s)
}

/// Non-bridge edges grouped into series classes (pairs whose joint removal
/// disconnects the graph), each class sorted, classes sorted.
pub fn series_classes(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let m = g.num_edges();
    let bridges: Vec<bool> = (0..m).map(|e| disconnects(g, 1 << e)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in (0..m).filter(|&e| !bridges[e]) {
        match classes.iter_mut().find(|c| disconnects(g, 1 << c[0] | 1 << e)) {
            Some(c) => c.push(e),
            None => classes.push(vec![e]),
        }
    }
    classes
}

/// Maximal Delone cells of the integer form `[[a,b],[b,c]]` through the
/// origin, read off as lower facets of the lifted points of
/// `[-window, window]^2`, each translated so its least vertex is the origin.
pub fn lower_hull_cells(a: i64, b: i64, c: i64, window: i64) -> BTreeSet<Vec<Vec<i64>>> {
    let pts: Vec<[i64; 3]> = (-window..=window)
        .flat_map(|x| (-window..=window).map(move |y| [x, y, a * x * x + 2 * b * x * y + c * y * y]))
        .collect();
    let origin = pts.iter().position(|p| p[0] == 0 && p[1] == 0).unwrap();
    let mut cells = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (p, q, r) = (pts[origin], pts[i], pts[j]);
            let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
            let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
            let mut normal = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
            if normal[2] == 0 {
                continue;
            }
            if normal[2] < 0 {
                normal = normal.map(|x| -x);
            }
            let side = |s: &[i64; 3]| (0..3).map(|k| normal[k] * (s[k] - p[k])).sum::<i64>();
            if pts.iter().all(|s| side(s) >= 0) {
                let mut cell: Vec<Vec<i64>> = pts.iter().filter(|s| side(s) == 0).map(|s| vec![s[0], s[1]]).collect();
                cell.sort();
                let base = cell[0].clone();
                for pt in &mut cell {
                    pt[0] -= base[0];
                    pt[1] -= base[1];
                }
                cells.insert(cell);
            }
        }
    }
    cells
}

/// Twice the area of the convex hull of a planar point set.
pub fn doubled_area(points: &[Vec<i64>]) -> i64 {
    // monotone chain
    let mut p: Vec<(i64, i64)> = points.iter().map(|v| (v[0], v[1])).collect();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &pt in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
                hull.pop();
            }
            hull.push(pt);
        }
        hull.pop();
    }
    let k = hull.len();
    (0..k).map(|i| hull[i].0 * hull[(i + 1) % k].1 - hull[(i + 1) % k].0 * hull[i].1).sum::<i64>().abs()
}

/// The nine genus-3 graphs whose cells of `M_3^tr` are listed with their
/// Schottky images: K4 and its degenerations.
pub fn drawn_genus_three_graphs() -> Vec<(&'static str, WeightedGraph)> {
    let g = |w: Vec<u32>, e: Vec<(usize, usize)>| WeightedGraph::new(w, e).unwrap();
    vec![
        ("single vertex", g(vec![3], vec![])),
        ("one loop", g(vec![2], vec![(0, 0)])),
        ("two loops", g(vec![1], vec![(0, 0), (0, 0)])),
        ("theta", g(vec![1, 0], vec![(0, 1), (0, 1), (0, 1)])),
        ("three loops", g(vec![0], vec![(0, 0), (0, 0), (0, 0)])),
        ("theta with a loop", g(vec![0, 0], vec![(0, 1), (0, 1), (0, 1), (1, 1)])),
        ("four parallel edges", g(vec![0, 0], vec![(0, 1), (0, 1), (0, 1), (0, 1)])),
        ("K4 with one edge contracted", g(vec![0, 0, 0], vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)])),
        ("K4", WeightedGraph::k4()),
    ]
}
