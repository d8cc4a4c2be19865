//! Sampled Jordan curves: simplicity, local 1-Lipschitz charts, chords of a
//! fixed length, their midpoint curves and the winding of the chord map.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Euclidean remainder of `x` by `m > 0`, in `[0, m)`.
pub fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = x % m;
    if r < 0.0 {
        let w = r + m;
        if w < m { w } else { 0.0 }
    } else {
        r
    }
}

/// Default bisection tolerance on chord length.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default number of chart rotations tried per vertex.
pub const DEFAULT_ANGLE_GRID: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Point2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn arg(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotate(self, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Complex product.
    pub fn cmul(self, o: Point2) -> Point2 {
        Point2::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }

    /// Complex power by repeated squaring.
    pub fn cpow(self, mut e: u32) -> Point2 {
        let (mut base, mut acc) = (self, Point2::new(1.0, 0.0));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.cmul(base);
            }
            base = base.cmul(base);
            e >>= 1;
        }
        acc
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Closed polyline, parametrized by normalized arc length on `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    vertices: Vec<Point2>,
    /// `cumulative[i]` is the arc length from vertex 0 to vertex `i`;
    /// the last entry is the total length.
    cumulative: Vec<f64>,
    pub source: String,
}

impl PlaneCurve {
    pub fn new(vertices: Vec<Point2>, source: impl Into<String>) -> Result<Self> {
        if vertices.len() < 8 {
            return Err(invalid(format!("a curve needs at least 8 vertices, got {}", vertices.len())));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(invalid(format!("vertex {i} is not finite")));
        }
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for i in 0..n {
            let len = vertices[i].dist(vertices[(i + 1) % n]);
            if len == 0.0 {
                return Err(invalid(format!("vertices {i} and {} coincide", (i + 1) % n)));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(PlaneCurve { vertices, cumulative, source: source.into() })
    }

    pub fn circle(radius: f64, samples: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(invalid("radius must be positive"));
        }
        let v = (0..samples).map(|i| Point2::polar(radius, 2.0 * PI * i as f64 / samples as f64)).collect();
        PlaneCurve::new(v, format!("preset:circle:{radius}"))
    }

    pub fn ellipse(a: f64, b: f64, samples: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(invalid("semi-axes must be positive"));
        }
        let v = (0..samples)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / samples as f64;
                Point2::new(a * th.cos(), b * th.sin())
            })
            .collect();
        PlaneCurve::new(v, format!("preset:ellipse:{a},{b}"))
    }

    /// Polar curve `ρ(θ) = 1 + Σ (aⱼ cos jθ + bⱼ sin jθ)`, `j = 2, 3, …`.
    pub fn fourier_perturbed_circle(coeffs: &[(f64, f64)], samples: usize, source: impl Into<String>) -> Result<Self> {
        let v: Vec<Point2> = (0..samples)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / samples as f64;
                let rho = 1.0
                    + coeffs
                        .iter()
                        .enumerate()
                        .map(|(j, (a, b))| {
                            let f = (j + 2) as f64 * th;
                            a * f.cos() + b * f.sin()
                        })
                        .sum::<f64>();
                Point2::polar(rho, th)
            })
            .collect();
        if v.iter().any(|p| p.norm() <= 0.0) {
            return Err(invalid("perturbation reaches the origin"));
        }
        PlaneCurve::new(v, source)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.cumulative[self.vertices.len()]
    }

    /// Segment `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Parameter of vertex `i`.
    pub fn vertex_param(&self, i: usize) -> f64 {
        self.cumulative[i % self.vertices.len()] / self.length()
    }

    /// `α(s)`, with `s` taken modulo 1.
    pub fn point_at(&self, s: f64) -> Point2 {
        let (i, u) = self.locate(s);
        let (a, b) = self.segment(i);
        a + (b - a) * u
    }

    /// Segment index and fraction along it for parameter `s`.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let n = self.vertices.len();
        let l = self.length();
        let pos = rem_euclid(s, 1.0) * l;
        let i = match self.cumulative.binary_search_by(|c| c.partial_cmp(&pos).expect("finite")) {
            Ok(i) => i.min(n - 1),
            Err(i) => i - 1,
        };
        let seg = self.cumulative[i + 1] - self.cumulative[i];
        (i, ((pos - self.cumulative[i]) / seg).clamp(0.0, 1.0))
    }

    /// Unit tangent of the segment containing `s`.
    pub fn tangent_at(&self, s: f64) -> Point2 {
        let (i, _) = self.locate(s);
        let (a, b) = self.segment(i);
        (b - a) * (1.0 / a.dist(b))
    }

    /// Distance from `p` to the polyline.
    pub fn distance_to(&self, p: Point2) -> f64 {
        (0..self.len()).map(|i| point_segment_distance(p, self.segment(i))).fold(f64::INFINITY, f64::min)
    }

    /// Rigid motion `p ↦ R_θ p + shift`.
    pub fn transformed(&self, theta: f64, shift: Point2) -> Result<PlaneCurve> {
        let v = self.vertices.iter().map(|p| p.rotate(theta) + shift).collect();
        PlaneCurve::new(v, self.source.clone())
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        bounding_box(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    pub fn is_simple(&self) -> bool {
        is_simple(&self.vertices).expect("validated on construction")
    }
}

fn bounding_box(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

pub fn point_segment_distance(p: Point2, (a, b): (Point2, Point2)) -> f64 {
    let d = b - a;
    let u = ((p - a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    p.dist(a + d * u)
}

/// Andrew's monotone chain, counter-clockwise without collinear points.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Point2> =
            if pass == 0 { &mut pts.iter() } else { &mut pts.iter().rev() };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Largest distance between two vertices (rotating calipers on the hull).
pub fn diameter(points: &[Point2]) -> f64 {
    let hull = convex_hull(points);
    let h = hull.len();
    match h {
        0 | 1 => return 0.0,
        2 => return hull[0].dist(hull[1]),
        _ => {}
    }
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..h {
        let ni = (i + 1) % h;
        let edge = hull[ni] - hull[i];
        while edge.cross(hull[(j + 1) % h] - hull[j]) > 0.0 {
            j = (j + 1) % h;
        }
        best = best.max(hull[i].dist(hull[j])).max(hull[ni].dist(hull[j]));
    }
    best
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share a point.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Whether segments `i` and `j` of an `n`-gon violate simplicity.
fn segment_pair_bad(v: &[Point2], i: usize, j: usize) -> bool {
    let n = v.len();
    let (a, b) = (v[i], v[(i + 1) % n]);
    let (c, d) = (v[j], v[(j + 1) % n]);
    if (i + 1) % n == j {
        // shared endpoint b = c: the far endpoints must stay off the other segment
        (orient(a, b, d) == 0.0 && on_segment(a, b, d) && d != b)
            || (orient(c, d, a) == 0.0 && on_segment(c, d, a) && a != c)
    } else if (j + 1) % n == i {
        segment_pair_bad(v, j, i)
    } else {
        segments_intersect(a, b, c, d)
    }
}

/// Reference check over all segment pairs.
pub fn is_simple_brute_force(v: &[Point2]) -> Result<bool> {
    validate_polyline(v)?;
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            if segment_pair_bad(v, i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn validate_polyline(v: &[Point2]) -> Result<()> {
    let n = v.len();
    if n < 3 {
        return Err(invalid("a closed polyline needs at least 3 vertices"));
    }
    for i in 0..n {
        if v[i] == v[(i + 1) % n] {
            return Err(invalid(format!("segment {i} has zero length")));
        }
    }
    Ok(())
}

/// Uniform hash grid over segment bounding boxes.
struct SegmentGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    /// Segments whose box spans too many cells; checked against everything.
    oversized: Vec<usize>,
}

const MAX_CELLS_PER_SEGMENT: i64 = 4096;

impl SegmentGrid {
    fn build(v: &[Point2], cell: f64) -> Self {
        let n = v.len();
        let mut grid = SegmentGrid { cell, cells: HashMap::new(), oversized: Vec::new() };
        for i in 0..n {
            let (lo, hi) = bounding_box(&[v[i], v[(i + 1) % n]]);
            let (x0, y0, x1, y1) = grid.cell_range(lo, hi);
            if (x1 - x0 + 1) * (y1 - y0 + 1) > MAX_CELLS_PER_SEGMENT {
                grid.oversized.push(i);
                continue;
            }
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    grid.cells.entry((cx, cy)).or_default().push(i);
                }
            }
        }
        grid
    }

    fn cell_range(&self, lo: Point2, hi: Point2) -> (i64, i64, i64, i64) {
        let f = |x: f64| (x / self.cell).floor() as i64;
        (f(lo.x), f(lo.y), f(hi.x), f(hi.y))
    }

    /// Segments whose boxes may meet the box `[lo, hi]`, deduplicated.
    fn query(&self, lo: Point2, hi: Point2, seen: &mut [u32], stamp: u32, out: &mut Vec<usize>) {
        out.clear();
        let (x0, y0, x1, y1) = self.cell_range(lo, hi);
        let total = seen.len();
        let mut push = |j: usize, out: &mut Vec<usize>| {
            if seen[j] != stamp {
                seen[j] = stamp;
                out.push(j);
            }
        };
        if (x1 - x0 + 1) * (y1 - y0 + 1) > MAX_CELLS_PER_SEGMENT {
            for j in 0..total {
                push(j, out);
            }
            return;
        }
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                if let Some(list) = self.cells.get(&(cx, cy)) {
                    for &j in list {
                        push(j, out);
                    }
                }
            }
        }
        for &j in &self.oversized {
            push(j, out);
        }
    }
}

fn mean_segment_length(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].dist(v[(i + 1) % n])).sum::<f64>() / n as f64
}

/// No two non-adjacent segments meet, and adjacent segments meet only at
/// their shared endpoint.
pub fn is_simple(v: &[Point2]) -> Result<bool> {
    validate_polyline(v)?;
    let n = v.len();
    if n <= 16 {
        return is_simple_brute_force(v);
    }
    let grid = SegmentGrid::build(v, 2.0 * mean_segment_length(v));
    let mut seen = vec![u32::MAX; n];
    let mut cand = Vec::new();
    for i in 0..n {
        let (lo, hi) = bounding_box(&[v[i], v[(i + 1) % n]]);
        grid.query(lo, hi, &mut seen, i as u32, &mut cand);
        if cand.iter().any(|&j| j > i && segment_pair_bad(v, i, j)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A rotated window in which the curve is the graph `g` of a function.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzChart {
    pub center: Point2,
    pub rotation: f64,
    pub half_width: f64,
    /// `(t, g(t))`, strictly increasing in `t`.
    pub samples: Vec<(f64, f64)>,
}

impl LipschitzChart {
    /// Chart of an explicit function sampled on `[−half_width, half_width]`.
    pub fn from_fn(half_width: f64, count: usize, g: impl Fn(f64) -> f64) -> Self {
        let samples = (0..count)
            .map(|i| {
                let t = -half_width + 2.0 * half_width * i as f64 / (count - 1) as f64;
                (t, g(t))
            })
            .collect();
        LipschitzChart { center: Point2::default(), rotation: 0.0, half_width, samples }
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    /// Piecewise-linear `g`; `None` outside the sampled range.
    pub fn g(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.t_range();
        if t < lo || t > hi {
            return None;
        }
        let i = self.samples.partition_point(|&(x, _)| x <= t).clamp(1, self.samples.len() - 1);
        let ((t0, g0), (t1, g1)) = (self.samples[i - 1], self.samples[i]);
        Some(g0 + (g1 - g0) * (t - t0) / (t1 - t0))
    }

    /// `max |Δg/Δt|` over consecutive samples.
    pub fn max_slope(&self) -> f64 {
        self.samples.windows(2).map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs()).fold(0.0, f64::max)
    }

    /// Plane point of chart coordinates `(t, g)`.
    pub fn to_plane(&self, t: f64, g: f64) -> Point2 {
        self.center + Point2::new(t, g).rotate(self.rotation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartFailure {
    /// Another arc of the curve enters the window.
    NonContiguous,
    /// The window contains the whole curve.
    WholeCurve,
    /// No rotation in the grid turns the arc into a 1-Lipschitz graph.
    NoRotation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexCertificate {
    pub index: usize,
    pub chart: core::result::Result<LipschitzChart, ChartFailure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzReport {
    pub epsilon: f64,
    pub angle_grid: usize,
    pub vertices: Vec<VertexCertificate>,
}

impl LipschitzReport {
    pub fn certified(&self) -> bool {
        self.vertices.iter().all(|v| v.chart.is_ok())
    }

    pub fn failures(&self) -> Vec<(usize, ChartFailure)> {
        self.vertices.iter().filter_map(|v| v.chart.clone().err().map(|e| (v.index, e))).collect()
    }
}

/// Slack on the slope bound absorbing rounding in the rotated frame.
const SLOPE_SLACK: f64 = 1e-9;

/// Exit point of the walk from `inside` to `outside` across the circle
/// `|p − c| = eps`.
fn circle_exit(c: Point2, eps: f64, inside: Point2, outside: Point2) -> Point2 {
    let d = outside - inside;
    let f = inside - c;
    let (a, b, cc) = (d.norm_sq(), 2.0 * f.dot(d), f.norm_sq() - eps * eps);
    let u = (-b + (b * b - 4.0 * a * cc).max(0.0).sqrt()) / (2.0 * a);
    inside + d * u.clamp(0.0, 1.0)
}

/// Searches, at every vertex, a rotation (from a grid of `angle_grid`
/// angles anchored at the local tangent) in which the curve inside the
/// `epsilon`-ball is a 1-Lipschitz graph.
pub fn lipschitz_certificate(curve: &PlaneCurve, epsilon: f64, angle_grid: usize) -> Result<LipschitzReport> {
    if !(epsilon > 0.0) || epsilon >= curve.diameter() {
        return Err(invalid("epsilon must be positive and below the curve diameter"));
    }
    if angle_grid == 0 {
        return Err(invalid("angle grid must be nonempty"));
    }
    let v = curve.vertices();
    let n = v.len();
    let grid = SegmentGrid::build(v, epsilon.max(2.0 * mean_segment_length(v)));
    let mut seen = vec![u32::MAX; n];
    let mut cand = Vec::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = v[i];
        let inside = |j: usize| v[j % n].dist(c) < epsilon;
        // arc through vertex i: back..=fwd, all vertices inside
        let mut back = 0usize;
        while back < n && inside(i + n - back - 1) {
            back += 1;
        }
        let mut fwd = 0usize;
        while fwd < n && inside(i + fwd + 1) {
            fwd += 1;
        }
        if back + fwd + 1 >= n {
            out.push(VertexCertificate { index: i, chart: Err(ChartFailure::WholeCurve) });
            continue;
        }
        let first = (i + n - back) % n;
        // arc segments: first-1 (entering) .. i+fwd (leaving)
        let arc_segments = back + fwd + 2;
        let in_arc = |j: usize| (j + n - (first + n - 1) % n) % n < arc_segments;
        let r = Point2::new(epsilon, epsilon);
        grid.query(c - r, c + r, &mut seen, i as u32, &mut cand);
        let foreign = cand.iter().any(|&j| !in_arc(j) && point_segment_distance(c, curve.segment(j)) < epsilon);
        if foreign {
            out.push(VertexCertificate { index: i, chart: Err(ChartFailure::NonContiguous) });
            continue;
        }
        let mut arc = Vec::with_capacity(back + fwd + 3);
        arc.push(circle_exit(c, epsilon, v[first], v[(first + n - 1) % n]));
        for k in 0..=back + fwd {
            arc.push(v[(first + k) % n]);
        }
        let last = (i + fwd) % n;
        arc.push(circle_exit(c, epsilon, v[last], v[(last + 1) % n]));

        let d_in = v[i] - v[(i + n - 1) % n];
        let d_out = v[(i + 1) % n] - v[i];
        let mut tangent = d_in * (1.0 / d_in.norm()) + d_out * (1.0 / d_out.norm());
        if tangent.norm() < 1e-12 {
            tangent = d_out;
        }
        let anchor = tangent.arg();
        let chart = (0..angle_grid).find_map(|k| {
            let rotation = anchor + 2.0 * PI * k as f64 / angle_grid as f64;
            let samples: Vec<(f64, f64)> = arc
                .iter()
                .map(|&p| {
                    let q = (p - c).rotate(-rotation);
                    (q.x, q.y)
                })
                .collect();
            let increasing = samples.windows(2).all(|w| w[1].0 > w[0].0);
            let lipschitz = samples.windows(2).all(|w| (w[1].1 - w[0].1).abs() <= (w[1].0 - w[0].0) * (1.0 + SLOPE_SLACK));
            (increasing && lipschitz).then_some(LipschitzChart { center: c, rotation, half_width: epsilon, samples })
        });
        out.push(VertexCertificate { index: i, chart: chart.ok_or(ChartFailure::NoRotation) });
    }
    Ok(LipschitzReport { epsilon, angle_grid, vertices: out })
}

/// The unique `η ∈ [0, r/2]` with `|(t+η, g(t+η)) − (t−η, g(t−η))| = r`.
pub fn eta_offset(chart: &LipschitzChart, t: f64, r: f64) -> Result<f64> {
    eta_offset_with_tolerance(chart, t, r, DEFAULT_TOLERANCE)
}

pub fn eta_offset_with_tolerance(chart: &LipschitzChart, t: f64, r: f64, tol: f64) -> Result<f64> {
    if !(r >= 0.0) || !(tol > 0.0) {
        return Err(invalid("r must be nonnegative and the tolerance positive"));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let (lo_t, hi_t) = chart.t_range();
    if t - r / 2.0 < lo_t || t + r / 2.0 > hi_t {
        return Err(Error::OutOfChart(format!("chord of length {r} at t = {t} leaves [{lo_t}, {hi_t}]")));
    }
    let len = |eta: f64| {
        let dg = chart.g(t + eta).expect("in range") - chart.g(t - eta).expect("in range");
        (4.0 * eta * eta + dg * dg).sqrt()
    };
    let (mut lo, mut hi) = (0.0f64, r / 2.0);
    // the chord length is 1-Lipschitz-controlled: |len(η) − len(η')| ≤ 2√2 |η − η'|
    while (hi - lo) * 2.0 * core::f64::consts::SQRT_2 > tol {
        let mid = 0.5 * (lo + hi);
        if len(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Unordered pair of curve parameters, stored with `s ≤ t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChordPair {
    pub s: f64,
    pub t: f64,
}

impl ChordPair {
    pub fn new(a: f64, b: f64) -> Self {
        let (a, b) = (rem_euclid(a, 1.0), rem_euclid(b, 1.0));
        if a <= b {
            ChordPair { s: a, t: b }
        } else {
            ChordPair { s: b, t: a }
        }
    }
}

/// A chord of the cycle: `t` is the point at distance `r` reached first when
/// walking backwards from `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChordStep {
    pub s: f64,
    pub t: f64,
    pub head: Point2,
    pub tail: Point2,
}

impl ChordStep {
    pub fn pair(&self) -> ChordPair {
        ChordPair::new(self.s, self.t)
    }

    /// `α(s) − α(t)`.
    pub fn vector(&self) -> Point2 {
        self.head - self.tail
    }

    pub fn midpoint(&self) -> Point2 {
        self.head.midpoint(self.tail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChordCycle {
    pub r: f64,
    pub steps: Vec<ChordStep>,
}

/// One chord per vertex `s`; `t(s)` solved exactly on the polyline.
pub fn chord_pairs_at_distance(curve: &PlaneCurve, r: f64) -> Result<ChordCycle> {
    if !(r > 0.0) {
        return Err(invalid("r must be positive"));
    }
    if r >= curve.diameter() * (1.0 - 1e-9) {
        return Err(Error::EmptyCycle(r));
    }
    let v = curve.vertices();
    let n = v.len();
    let total = curve.length();
    let r2 = r * r;
    let mut steps = Vec::with_capacity(n);
    for i in 0..n {
        let x = v[i];
        let mut found = None;
        for back in 0..n {
            // segment j−1 traversed from vertex j to vertex j−1
            let j = (i + n - back) % n;
            let (p0, p1) = (v[j], v[(j + n - 1) % n]);
            let d = p1 - p0;
            let f = p0 - x;
            let (a, b, c) = (d.norm_sq(), 2.0 * d.dot(f), f.norm_sq() - r2);
            let u = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
            if u <= 1.0 {
                let seg_len = d.norm();
                let pos = curve.cumulative[j] - u * seg_len;
                let pos = if j == 0 { total - u * seg_len } else { pos };
                found = Some((rem_euclid(pos / total, 1.0), p0 + d * u));
                break;
            }
        }
        let (t, tail) = found.ok_or(Error::EmptyCycle(r))?;
        steps.push(ChordStep { s: curve.vertex_param(i), t, head: x, tail });
    }
    Ok(ChordCycle { r, steps })
}

pub fn midpoint_curve(curve: &PlaneCurve, r: f64) -> Result<PlaneCurve> {
    let cycle = chord_pairs_at_distance(curve, r)?;
    let mids = cycle.steps.iter().map(ChordStep::midpoint).collect();
    PlaneCurve::new(mids, format!("midpoints({}, r = {r})", curve.source))
}

/// Largest accepted argument change between consecutive chord powers.
const MAX_ANGLE_STEP: f64 = PI / 2.0;

/// Winding number of `s ↦ (α(s) − α(t(s)))^power` around the chord cycle.
pub fn chord_map_degree(curve: &PlaneCurve, r: f64, power: u32) -> Result<i64> {
    if power == 0 {
        return Err(invalid("power must be positive"));
    }
    let cycle = chord_pairs_at_distance(curve, r)?;
    let zs: Vec<Point2> = cycle.steps.iter().map(|s| s.vector() * (1.0 / r)).map(|z| z.cpow(power)).collect();
    let m = zs.len();
    let mut total = 0.0;
    for k in 0..m {
        let (a, b) = (zs[k], zs[(k + 1) % m]);
        if a.norm() < 1e-12 {
            return Err(Error::Resolution(format!("chord vanishes at step {k}")));
        }
        let step = Point2::new(a.dot(b), a.cross(b)).arg();
        if step.abs() > MAX_ANGLE_STEP {
            return Err(Error::Resolution(format!("argument jumps by {step:.3} at step {k}; refine sampling")));
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}
