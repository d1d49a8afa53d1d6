//! Lattice polytopes of dimension at most 3 with exact integer predicates.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub type Point = Vec<i64>;

fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[i64], b: &[i64]) -> Point {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub(crate) fn primitive(v: &[i64]) -> Point {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Integer coordinates on the affine lattice spanned by a point set.
///
/// `to_local(x)` = first `dim` entries of `U (x - base)` with `U` unimodular, so
/// lattice points of the affine span correspond bijectively to `Z^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    base: Point,
    u: Vec<Point>,
    u_inv: Vec<Point>,
    dim: usize,
}

impl AffineFrame {
    pub fn of(points: &[Point]) -> Self {
        let n = points[0].len();
        let base = points[0].clone();
        let diffs: Vec<Point> = points.iter().map(|p| sub(p, &base)).collect();
        let d = Matrix::from_fn(n, diffs.len(), |i, j| diffs[j][i]);
        let k = d.rank();
        if k == n {
            let id: Vec<Point> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            return AffineFrame { base: vec![0; n], u: id.clone(), u_inv: id, dim: n };
        }
        let u = d.smith_normal_form().u;
        let u_inv = unimodular_inverse(&u);
        AffineFrame { base, u: u.to_rows(), u_inv: u_inv.to_rows(), dim: k }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_local(&self, x: &[i64]) -> Option<Point> {
        let d = sub(x, &self.base);
        let y: Point = self.u.iter().map(|r| dot(r, &d)).collect();
        y[self.dim..].iter().all(|&v| v == 0).then(|| y[..self.dim].to_vec())
    }

    pub fn to_global(&self, y: &[i64]) -> Point {
        let n = self.base.len();
        let mut full = y.to_vec();
        full.resize(n, 0);
        let v: Point = self.u_inv.iter().map(|r| dot(r, &full)).collect();
        add(&v, &self.base)
    }

    /// Linear part on directions (no base shift).
    pub fn direction_to_local(&self, v: &[i64]) -> Option<Point> {
        let y: Point = self.u.iter().map(|r| dot(r, v)).collect();
        y[self.dim..].iter().all(|&x| x == 0).then(|| y[..self.dim].to_vec())
    }

    pub fn direction_to_global(&self, y: &[i64]) -> Point {
        let n = self.base.len();
        let mut full = y.to_vec();
        full.resize(n, 0);
        self.u_inv.iter().map(|r| dot(r, &full)).collect()
    }
}

fn unimodular_inverse(u: &Matrix<i64>) -> Matrix<i64> {
    let n = u.rows();
    let mut a: Vec<Vec<num_rational::Ratio<i64>>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    num_rational::Ratio::from_integer(if j < n { u[(i, j)] } else { i64::from(j - n == i) })
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != num_rational::Ratio::from_integer(0)).expect("unimodular");
        a.swap(c, p);
        let pv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != num_rational::Ratio::from_integer(0) {
                    let row_c = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(row_c) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Matrix::from_fn(n, n, |i, j| a[i][n + j].to_integer())
}

/// Inequality `<normal, x> >= offset` in the polytope's intrinsic coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: i64,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    frame: AffineFrame,
    vertices: Vec<Point>,
    local: Vec<Point>,
    facets: Vec<Facet>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    pub fn from_points(points: &[Point]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Invalid("empty point set".into()));
        };
        if points.iter().any(|p| p.len() != first.len()) {
            return Err(Error::Dimension("points of different lengths".into()));
        }
        let uniq: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let frame = AffineFrame::of(&uniq);
        if frame.dim > 3 {
            return Err(Error::Unsupported(format!("hull of dimension {}", frame.dim)));
        }
        let loc: Vec<Point> = uniq.iter().map(|p| frame.to_local(p).expect("in span")).collect();
        let (local, facets) = hull_local(&loc, frame.dim);
        let mut pairs: Vec<(Point, Point)> = local.into_iter().map(|l| (frame.to_global(&l), l)).collect();
        pairs.sort();
        let (vertices, local) = pairs.into_iter().unzip();
        Ok(LatticePolytope { frame, vertices, local, facets })
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.base.len()
    }

    pub fn dim(&self) -> usize {
        self.frame.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    /// Extreme points, sorted.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn local_vertices(&self) -> &[Point] {
        &self.local
    }

    /// Facet inequalities in intrinsic coordinates (ambient ones when full-dimensional).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    fn contains_local(&self, y: &[i64], strict: bool) -> bool {
        self.facets.iter().all(|f| {
            let v = dot(&f.normal, y);
            if strict {
                v > f.offset
            } else {
                v >= f.offset
            }
        })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.ambient_dim() && self.frame.to_local(x).is_some_and(|y| self.contains_local(&y, false))
    }

    /// In the relative interior.
    pub fn contains_interior(&self, x: &[i64]) -> bool {
        x.len() == self.ambient_dim()
            && self.frame.to_local(x).is_some_and(|y| self.dim() == 0 || self.contains_local(&y, true))
    }

    fn local_box_points(&self, strict: bool) -> Vec<Point> {
        let d = self.dim();
        if d == 0 {
            return if strict { vec![] } else { vec![vec![]] };
        }
        let lo: Point = (0..d).map(|i| self.local.iter().map(|p| p[i]).min().expect("vertex")).collect();
        let hi: Point = (0..d).map(|i| self.local.iter().map(|p| p[i]).max().expect("vertex")).collect();
        let mut out = vec![];
        let mut cur = lo.clone();
        loop {
            if self.contains_local(&cur, strict) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    pub fn lattice_points(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.local_box_points(false).iter().map(|y| self.frame.to_global(y)).collect();
        v.sort();
        v
    }

    /// Lattice points of the relative interior.
    pub fn interior_lattice_points(&self) -> Vec<Point> {
        if self.dim() == 0 {
            return self.vertices.clone();
        }
        let mut v: Vec<Point> = self.local_box_points(true).iter().map(|y| self.frame.to_global(y)).collect();
        v.sort();
        v
    }

    pub fn translate(&self, v: &[i64]) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|p| add(p, v)).collect();
        Self::from_points(&pts).expect("translate keeps hull")
    }

    pub fn lex_min_vertex(&self) -> &Point {
        &self.vertices[0]
    }

    /// Translate so the lex-smallest vertex is the origin.
    pub fn normalized(&self) -> Self {
        let m: Point = self.vertices[0].iter().map(|x| -x).collect();
        self.translate(&m)
    }

    pub fn equal_up_to_translation(&self, other: &Self) -> bool {
        self.vertices.len() == other.vertices.len() && {
            let d = sub(&other.vertices[0], &self.vertices[0]);
            self.vertices.iter().zip(&other.vertices).all(|(a, b)| add(a, &d) == *b)
        }
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        let mut pts = vec![];
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(add(a, b));
            }
        }
        Self::from_points(&pts)
    }

    /// k * P.
    pub fn dilate(&self, k: i64) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|p| p.iter().map(|x| x * k).collect()).collect();
        Self::from_points(&pts).expect("dilation")
    }

    /// Vertex sets of the facets (ambient coordinates).
    fn facet_vertex_sets(&self) -> Vec<Vec<Point>> {
        self.facets
            .iter()
            .map(|f| {
                self.local
                    .iter()
                    .zip(&self.vertices)
                    .filter(|(l, _)| dot(&f.normal, l) == f.offset)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect()
    }

    /// Faces of dimension `k`, sorted by vertex set.
    pub fn faces(&self, k: usize) -> Vec<LatticePolytope> {
        if k > self.dim() {
            return vec![];
        }
        let mut cur_dim = self.dim();
        let mut polys: Vec<LatticePolytope> = vec![self.clone()];
        while cur_dim > k {
            let mut next: BTreeSet<Vec<Point>> = BTreeSet::new();
            for p in &polys {
                for vs in p.facet_vertex_sets() {
                    next.insert(vs);
                }
            }
            polys = next.iter().map(|vs| Self::from_points(vs).expect("face")).collect();
            cur_dim -= 1;
        }
        polys
    }

    /// Every face, from vertices up to the polytope itself.
    pub fn all_faces(&self) -> Vec<LatticePolytope> {
        (0..=self.dim()).flat_map(|k| self.faces(k)).collect()
    }

    pub fn is_face_of(&self, p: &LatticePolytope) -> bool {
        p.faces(self.dim()).iter().any(|f| f == self)
    }

    /// Reflexivity and polar dual. Requires a full-dimensional polytope.
    pub fn reflexivity(&self) -> Result<Reflexivity> {
        if !self.is_full_dimensional() {
            return Err(Error::Invalid("polytope is not full-dimensional".into()));
        }
        let origin = vec![0; self.ambient_dim()];
        if !self.contains_interior(&origin) {
            return Ok(Reflexivity { is_reflexive: false, reason: Some("origin is not interior".into()), dual: None });
        }
        if let Some(f) = self.facets.iter().find(|f| f.offset != -1) {
            return Ok(Reflexivity {
                is_reflexive: false,
                reason: Some(format!("facet with normal {:?} at height {}", f.normal, -f.offset)),
                dual: None,
            });
        }
        let normals: Vec<Point> = self.facets.iter().map(|f| f.normal.clone()).collect();
        Ok(Reflexivity { is_reflexive: true, reason: None, dual: Some(Self::from_points(&normals)?) })
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct Reflexivity {
    pub is_reflexive: bool,
    pub reason: Option<String>,
    pub dual: Option<LatticePolytope>,
}

/// Vertices and facets of a full-dimensional point set in Z^d, d <= 3.
fn hull_local(pts: &[Point], d: usize) -> (Vec<Point>, Vec<Facet>) {
    match d {
        0 => (vec![vec![]], vec![]),
        1 => {
            let lo = pts.iter().map(|p| p[0]).min().expect("points");
            let hi = pts.iter().map(|p| p[0]).max().expect("points");
            (vec![vec![lo], vec![hi]], vec![Facet { normal: vec![1], offset: lo }, Facet { normal: vec![-1], offset: -hi }])
        }
        2 => {
            let ring = convex_ring(pts);
            let m = ring.len();
            let mut facets: Vec<Facet> = (0..m)
                .map(|i| {
                    let (a, b) = (&ring[i], &ring[(i + 1) % m]);
                    let normal = primitive(&[-(b[1] - a[1]), b[0] - a[0]]);
                    let offset = dot(&normal, a);
                    Facet { normal, offset }
                })
                .collect();
            facets.sort();
            (ring, facets)
        }
        _ => hull3(pts),
    }
}

/// Counter-clockwise vertices of a planar point set (monotone chain, collinear points dropped).
pub(crate) fn convex_ring(pts: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = vec![];
    for q in &p {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<Point> = vec![];
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull3(pts: &[Point]) -> (Vec<Point>, Vec<Facet>) {
    let m = pts.len();
    let mut facets: BTreeSet<Facet> = BTreeSet::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let n = cross(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                if n.iter().all(|&x| x == 0) {
                    continue;
                }
                let n = primitive(&n);
                let h = dot(&n, &pts[i]);
                let vals: Vec<i64> = pts.iter().map(|p| dot(&n, p)).collect();
                if vals.iter().all(|&v| v >= h) {
                    facets.insert(Facet { normal: n, offset: h });
                } else if vals.iter().all(|&v| v <= h) {
                    facets.insert(Facet { normal: n.iter().map(|x| -x).collect(), offset: -h });
                }
            }
        }
    }
    let mut verts: BTreeSet<Point> = BTreeSet::new();
    for f in &facets {
        let on: Vec<Point> = pts.iter().filter(|p| dot(&f.normal, p) == f.offset).cloned().collect();
        let frame = AffineFrame::of(&on);
        let loc: Vec<Point> = on.iter().map(|p| frame.to_local(p).expect("coplanar")).collect();
        for v in convex_ring(&loc) {
            verts.insert(frame.to_global(&v));
        }
    }
    (verts.into_iter().collect(), facets.into_iter().collect())
}
