//! Exact rational quadratic forms: positive semidefiniteness, Delone
//! subdivisions of definite forms, reduction and classification of binary
//! forms, and membership in simplicial cones.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::matroid::{upper_triangle, ZonotopalCone};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Largest dimension accepted by `delone_subdivision`.
pub const MAX_DELONE_DIM: usize = 3;

/// A symmetric positive semidefinite rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadForm {
    g: usize,
    entries: Vec<Rational>,
}

impl QuadForm {
    /// Checks symmetry and positive semidefiniteness.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if !is_valid_form(&rows)? {
            return Err(Error::Invalid("form is not positive semidefinite".into()));
        }
        let g = rows.len();
        Ok(Self { g, entries: rows.concat() })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn zero(g: usize) -> Self {
        Self { g, entries: vec![Rational::zero(); g * g] }
    }

    pub fn dim(&self) -> usize {
        self.g
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.g + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.g.max(1)).take(self.g).map(|r| r.to_vec()).collect()
    }

    /// `x^T Q y`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.g {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.g {
                if y[j] != 0 {
                    s += self.get(i, j) * rat(x[i] * y[j]);
                }
            }
        }
        s
    }

    pub fn value(&self, x: &[i64]) -> Rational {
        self.bilinear(x, x)
    }

    /// `X^T Q X` for an integer `g x g` matrix `X`.
    pub fn transform(&self, x: &IntMatrix) -> Self {
        let g = self.g;
        let mut out = vec![Rational::zero(); g * g];
        for a in 0..g {
            for b in 0..g {
                out[a * g + b] = self.bilinear(&x.column(a), &x.column(b));
            }
        }
        Self { g, entries: out }
    }

    pub fn scale(&self, t: &Rational) -> Self {
        Self { g: self.g, entries: self.entries.iter().map(|x| x * t).collect() }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        symmetric_pivots(&self.to_rows()).map_or(0, |p| p.iter().filter(|x| x.is_positive()).count())
    }

    pub fn is_definite(&self) -> bool {
        self.rank() == self.g
    }

    /// Embeds into a larger dimension with zero rows and columns.
    pub fn pad(&self, g: usize) -> Self {
        let mut out = Self::zero(g.max(self.g));
        for i in 0..self.g {
            for j in 0..self.g {
                out.entries[i * out.g + j] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!(self.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for QuadForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_matrix(s)?)
    }
}

/// Parses `"a,b;c,d"`: rows separated by `;`, entries by `,`, each entry an
/// integer or a `p/q` literal.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<Rational>>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<Rational>> = s
        .split(';')
        .map(|row| row.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Parse(format!("matrix {s:?} is not square")));
    }
    Ok(rows)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Pivots of symmetric elimination, or `None` if the matrix is not PSD.
/// A zero pivot requires the rest of its row to vanish.
fn symmetric_pivots(rows: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return None;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return None;
            }
            pivots.push(p);
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
        pivots.push(p);
    }
    Some(pivots)
}

/// Whether a symmetric rational matrix is positive semidefinite.
pub fn is_valid_form(rows: &[Vec<Rational>]) -> Result<bool> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if rows[i][j] != rows[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(symmetric_pivots(rows).is_some())
}

/// Maximal Delone cells of one period, each translated so its lexicographically
/// least vertex is the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelonePeriod {
    pub g: usize,
    pub cells: Vec<Vec<Vec<i64>>>,
}

impl DelonePeriod {
    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == self.g + 1)
    }

    pub fn to_json(&self) -> Value {
        json!({ "g": self.g, "cells": self.cells })
    }
}

fn window_points(g: usize, window: i64) -> Vec<Vec<i64>> {
    let mut points = vec![Vec::new()];
    for _ in 0..g {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-window..=window).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    points
}

fn on_boundary(p: &[i64], window: i64) -> bool {
    p.iter().any(|x| x.abs() == window)
}

/// Delone subdivision of a positive definite form.
///
/// The Delone cells containing the origin are dual to the vertices of the
/// Voronoi cell of the origin. Those vertices are found from the
/// Voronoi-relevant vectors (the strict minima of nonzero classes mod 2),
/// and each vertex `y` gives the cell `{x : q(x - y) = q(y)}`. The basis is
/// first reduced, and lattice points are searched in `[-window, window]^g`
/// in reduced coordinates; if a minimum or a cell vertex lands on the
/// boundary the window is reported as too small.
pub fn delone_subdivision(q: &QuadForm, window: usize) -> Result<DelonePeriod> {
    let g = q.dim();
    if g == 0 || g > MAX_DELONE_DIM {
        return Err(Error::DimensionMismatch(format!("delone needs 1 <= g <= {MAX_DELONE_DIM}, got {g}")));
    }
    if window < 2 {
        return Err(Error::Invalid("window must be at least 2".into()));
    }
    if !q.is_definite() {
        return Err(Error::NotDefinite);
    }
    let basis = reduce_basis(q)?;
    let reduced = q.transform(&basis);
    let cells = delone_cells(&reduced, window as i64)?;
    let mut out: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    for cell in cells {
        out.insert(normalize_cell(cell.iter().map(|p| basis.mul_vec(p)).collect()));
    }
    Ok(DelonePeriod { g, cells: out.into_iter().collect() })
}

/// Unimodular `X` making the columns of `X` short for `q`: repeatedly
/// subtracts rounded multiples of one basis vector from another while that
/// shortens it. This is Lagrange-Gauss reduction for `g = 2`.
pub fn reduce_basis(q: &QuadForm) -> Result<IntMatrix> {
    let g = q.dim();
    let mut basis: Vec<Vec<i64>> = (0..g).map(|j| unit(g, j)).collect();
    loop {
        let mut changed = false;
        for i in 0..g {
            for j in 0..g {
                if i == j {
                    continue;
                }
                let m = (q.bilinear(&basis[i], &basis[j]) / q.value(&basis[j])).round();
                if m.is_zero() {
                    continue;
                }
                let m = m.to_integer().to_i64().ok_or_else(|| Error::TooLarge("reduction step".into()))?;
                let candidate: Vec<i64> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - m * b).collect();
                if q.value(&candidate) < q.value(&basis[i]) {
                    basis[i] = candidate;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(IntMatrix::from_columns(g, &basis));
        }
    }
}

/// Delone cells through the origin for a form whose window search is trusted.
fn delone_cells(q: &QuadForm, window: i64) -> Result<BTreeSet<Vec<Vec<i64>>>> {
    let g = q.dim();
    let points: Vec<Vec<i64>> = window_points(g, window).into_iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
    let values: Vec<Rational> = points.iter().map(|p| q.value(p)).collect();

    // strict minima of each nonzero class mod 2
    let mut relevant: Vec<Vec<i64>> = Vec::new();
    for class in 1..1u32 << g {
        let members: Vec<usize> = (0..points.len())
            .filter(|&i| (0..g).all(|k| points[i][k].rem_euclid(2) == i64::from(class >> k & 1)))
            .collect();
        let best = members.iter().map(|&i| &values[i]).min().expect("class is nonempty");
        let minima: Vec<usize> = members.iter().copied().filter(|&i| &values[i] == best).collect();
        if minima.iter().any(|&i| on_boundary(&points[i], window)) {
            return Err(Error::WindowTooSmall);
        }
        if minima.len() == 2 {
            relevant.extend(minima.iter().map(|&i| points[i].clone()));
        }
    }

    let mut cells: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut seen_vertices: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for subset in crate::matroid::combinations(relevant.len(), g) {
        // 2 v^T Q y = q(v) for the chosen relevant vectors
        let lhs: Vec<Vec<Rational>> =
            subset.iter().map(|&i| (0..g).map(|j| rat(2) * q.bilinear(&relevant[i], &unit(g, j))).collect()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| q.value(&relevant[i])).collect();
        let Some(y) = solve_square(&lhs, &rhs) else { continue };
        if !seen_vertices.insert(y.clone()) {
            continue;
        }
        // y is a Voronoi vertex iff 2 x^T Q y <= q(x) for every lattice point
        let mut cell = vec![vec![0i64; g]];
        let mut feasible = true;
        for (p, value) in points.iter().zip(&values) {
            let lhs = rat(2) * dot_form(q, p, &y);
            if &lhs > value {
                feasible = false;
                break;
            }
            if &lhs == value {
                cell.push(p.clone());
            }
        }
        if !feasible {
            continue;
        }
        if cell.iter().any(|p| on_boundary(p, window)) {
            return Err(Error::WindowTooSmall);
        }
        cells.insert(normalize_cell(cell));
    }
    Ok(cells)
}

fn unit(g: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0; g];
    e[j] = 1;
    e
}

/// `x^T Q y` for integer `x` and rational `y`.
fn dot_form(q: &QuadForm, x: &[i64], y: &[Rational]) -> Rational {
    let g = q.dim();
    let mut s = Rational::zero();
    for i in 0..g {
        if x[i] == 0 {
            continue;
        }
        for j in 0..g {
            s += q.get(i, j) * &y[j] * rat(x[i]);
        }
    }
    s
}

/// Translates so the lexicographically least vertex is the origin; sorts.
pub fn normalize_cell(mut cell: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    cell.sort();
    let base = cell[0].clone();
    for p in &mut cell {
        for (x, b) in p.iter_mut().zip(&base) {
            *x -= b;
        }
    }
    cell
}

/// Unique solution of a square rational system, or `None` if singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Solution of a consistent overdetermined system with independent columns,
/// `None` if inconsistent. `columns[k]` is column `k` of the system matrix.
fn solve_columns(columns: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = b.len();
    let k = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        let p = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, r);
        let pivot = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=k {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    if (r..rows).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// Nonnegative coefficients expressing `q` in the rays of a simplicial cone.
pub fn cone_membership(q: &QuadForm, cone: &ZonotopalCone) -> Result<Option<Vec<Rational>>> {
    cone_membership_matrix(&q.to_rows(), cone)
}

/// As `cone_membership`, for any symmetric matrix; matrices outside the
/// cone (including non-PSD ones) give `None`.
pub fn cone_membership_matrix(rows: &[Vec<Rational>], cone: &ZonotopalCone) -> Result<Option<Vec<Rational>>> {
    let g = rows.len();
    if g != cone.dim || rows.iter().any(|r| r.len() != g) {
        return Err(Error::DimensionMismatch(format!("matrix of size {g} in a cone of size {}", cone.dim)));
    }
    if !cone.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let target: Vec<Rational> =
        (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).map(|(i, j)| rows[i][j].clone()).collect();
    let columns: Vec<Vec<Rational>> =
        cone.rays.iter().map(|r| upper_triangle(r).into_iter().map(rat).collect()).collect();
    Ok(solve_columns(&columns, &target).filter(|c| c.iter().all(|x| !x.is_negative())))
}

/// Cells of the second Voronoi decomposition in dimension two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum G2Class {
    /// Two triangles per period.
    D1Triangulated,
    /// One parallelogram per period.
    D2Square,
    /// Rank one.
    D3Segment,
    /// The zero form.
    D4Point,
}

impl G2Class {
    pub fn name(self) -> &'static str {
        match self {
            G2Class::D1Triangulated => "D1_triangulated",
            G2Class::D2Square => "D2_square",
            G2Class::D3Segment => "D3_segment",
            G2Class::D4Point => "D4_point",
        }
    }
}

impl fmt::Display for G2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `transform^T * input * transform == reduced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G2Reduction {
    pub class: G2Class,
    pub reduced: QuadForm,
    pub transform: IntMatrix,
}

impl G2Reduction {
    pub fn to_json(&self) -> Value {
        json!({
            "class": self.class.name(),
            "reduced": self.reduced.to_json(),
            "transform": self.transform.to_rows(),
        })
    }
}

/// Reduces a binary form into the closed cone `b <= 0, -2b <= a <= c`
/// (definite forms) or to `[[t,0],[0,0]]` (rank one) and classifies it.
///
/// Definite forms are Lagrange-Gauss reduced, which yields an obtuse
/// superbase `v1, v2, v3 = -v1 - v2`. The reduced basis is the pair with the
/// smallest Selling parameter `-v_i^T Q v_j`, ordered so that `a <= c`. This
/// makes `(a, b, c)` lexicographically least among representatives in the
/// cone.
pub fn classify_g2(q: &QuadForm) -> Result<G2Reduction> {
    if q.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 form, got {}x{}", q.dim(), q.dim())));
    }
    match q.rank() {
        0 => Ok(G2Reduction { class: G2Class::D4Point, reduced: q.clone(), transform: IntMatrix::identity(2) }),
        1 => reduce_rank_one(q),
        _ => reduce_definite(q),
    }
}

fn reduce_rank_one(q: &QuadForm) -> Result<G2Reduction> {
    // q = t u u^T with u primitive; the row through a nonzero diagonal is a multiple of u
    let row = if q.get(0, 0).is_zero() { 1 } else { 0 };
    let u = primitive(&[q.get(row, 0).clone(), q.get(row, 1).clone()]);
    let w = IntMatrix::from_columns(2, &[u]).saturated_completion()?;
    let x = w.transpose();
    let reduced = q.transform(&x);
    debug_assert!(reduced.get(0, 1).is_zero() && reduced.get(1, 1).is_zero());
    Ok(G2Reduction { class: G2Class::D3Segment, reduced, transform: x })
}

/// Primitive integer vector on the ray of a nonzero rational vector.
fn primitive(v: &[Rational]) -> Vec<i64> {
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter().map(|x| (x / &content).to_i64().expect("entries fit in i64")).collect()
}

fn reduce_definite(q: &QuadForm) -> Result<G2Reduction> {
    let mut v1 = vec![1i64, 0];
    let mut v2 = vec![0i64, 1];
    loop {
        if q.value(&v1) > q.value(&v2) {
            std::mem::swap(&mut v1, &mut v2);
        }
        let (b, a) = (q.bilinear(&v1, &v2), q.value(&v1));
        if (rat(2) * &b).abs() <= a {
            break;
        }
        let m = (b / a).round();
        let m = m.to_integer().to_i64().ok_or_else(|| Error::TooLarge("reduction step".into()))?;
        v2 = vec![v2[0] - m * v1[0], v2[1] - m * v1[1]];
    }
    if q.bilinear(&v1, &v2).is_positive() {
        v2 = vec![-v2[0], -v2[1]];
    }
    let v3 = vec![-v1[0] - v2[0], -v1[1] - v2[1]];
    let superbase = [v1, v2, v3];
    let selling = |i: usize, j: usize| -q.bilinear(&superbase[i], &superbase[j]);
    // choose the pair with the smallest Selling parameter, then order so a <= c
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let &(i, j, k) =
        pairs.iter().min_by(|&&(a, b, _), &&(c, d, _)| selling(a, b).cmp(&selling(c, d))).expect("three pairs");
    let (first, second) = if selling(i, k) <= selling(j, k) { (i, j) } else { (j, i) };
    let x = IntMatrix::from_columns(2, &[superbase[first].clone(), superbase[second].clone()]);
    let reduced = q.transform(&x);
    let class = if reduced.get(0, 1).is_zero() { G2Class::D2Square } else { G2Class::D1Triangulated };
    Ok(G2Reduction { class, reduced, transform: x })
}

/// Whether the reduced forms of `q` and `r` coincide.
pub fn g2_equivalent(q: &QuadForm, r: &QuadForm) -> Result<bool> {
    Ok(classify_g2(q)?.reduced == classify_g2(r)?.reduced)
}

/// Whether a binary form `[[a,b],[b,c]]` lies in the closed fundamental cone.
pub fn in_fundamental_cone(q: &QuadForm) -> bool {
    let (a, b, c) = (q.get(0, 0), q.get(0, 1), q.get(1, 1));
    !b.is_positive() && &(-rat(2) * b) <= a && a <= c
}
