//! Inscribed rectangles from collisions of
//! `Ψₙ{s, t} = ((α(s) + α(t))/2, (α(s) − α(t))^{2n})`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use hashbrown::HashMap;
#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{rem_euclid, ChordPair, PlaneCurve, Point2};
use crate::error::{invalid, Result};

/// `tan(kπ/2n)`.
pub fn aspect_ratio(n: u32, k: u32) -> Result<f64> {
    if n < 2 || k == 0 || k >= n {
        return Err(invalid(alloc::format!("need n >= 2 and 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    Ok((k as f64 * PI / (2.0 * n as f64)).tan())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiPoint {
    pub mid: Point2,
    /// `(α(s) − α(t))^{2n}` as a point of the plane.
    pub pow: Point2,
    pub source: ChordPair,
    pub n: u32,
}

pub fn psi(curve: &PlaneCurve, pair: ChordPair, n: u32) -> Result<PsiPoint> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let (a, b) = (curve.point_at(pair.s), curve.point_at(pair.t));
    Ok(PsiPoint { mid: a.midpoint(b), pow: (a - b).cpow(2 * n), source: pair, n })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Parameter grid resolution per axis.
    pub grid: usize,
    /// Bucket edge in units of the expected image spacing.
    pub bucket_scale: f64,
    /// Required residual of a refined collision.
    pub tolerance: f64,
    /// Hits whose vertices all lie this close are the same hit.
    pub dedup_radius: f64,
    /// Hits kept per aspect class `k`.
    pub max_hits: usize,
    pub min_diameter: f64,
    pub max_iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid: 1024,
            bucket_scale: 2.0,
            tolerance: 1e-9,
            dedup_radius: 1e-4,
            max_hits: 8,
            min_diameter: 0.0,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RectangleHit {
    /// Corners in cyclic order; diagonals are `v₀v₂` and `v₁v₃`.
    pub vertices: [Point2; 4],
    /// Curve parameters of the corners.
    pub params: [f64; 4],
    pub n: u32,
    /// Acute angle between the diagonals is `kπ/n`, `1 ≤ k ≤ n/2`.
    pub k: u32,
    pub aspect: f64,
    /// Common diagonal length.
    pub diameter: f64,
    pub residual: f64,
}

impl RectangleHit {
    /// Both chord pairs `{s, t}`, `{s′, t′}` whose images collide.
    pub fn pairs(&self) -> (ChordPair, ChordPair) {
        let p = self.params;
        (ChordPair::new(p[0], p[2]), ChordPair::new(p[1], p[3]))
    }

    /// Same hit up to relabelling, within `radius` per vertex.
    pub fn matches(&self, other: &RectangleHit, radius: f64) -> bool {
        let close = |a: &[Point2; 4], b: &[Point2; 4]| a.iter().all(|p| b.iter().any(|q| p.dist(*q) < radius));
        close(&self.vertices, &other.vertices) && close(&other.vertices, &self.vertices)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RectangleCheck {
    /// Largest corner-to-curve distance.
    pub corner: f64,
    /// Distance between the diagonal midpoints.
    pub midpoint: f64,
    /// Difference of the diagonal lengths.
    pub diagonal: f64,
    /// `|θ − kπ/n|` for the acute angle `θ` between the diagonals.
    pub angle: f64,
    /// `|side ratio − tan(kπ/2n)|` with the ratio taken `≤ 1`.
    pub aspect: f64,
}

impl RectangleCheck {
    pub fn max(&self) -> f64 {
        [self.corner, self.midpoint, self.diagonal, self.angle, self.aspect].into_iter().fold(0.0, f64::max)
    }
}

fn acute_angle(u: Point2, v: Point2) -> f64 {
    let a = u.cross(v).abs().atan2(u.dot(v)).abs();
    a.min(PI - a)
}

/// Recomputes all rectangle defects of a hit against the curve.
pub fn verify_rectangle(hit: &RectangleHit, curve: &PlaneCurve) -> RectangleCheck {
    let [a, b, c, d] = hit.vertices;
    let corner = hit.vertices.iter().map(|&p| curve.distance_to(p)).fold(0.0, f64::max);
    let midpoint = a.midpoint(c).dist(b.midpoint(d));
    let diagonal = (a.dist(c) - b.dist(d)).abs();
    let target = hit.k as f64 * PI / hit.n as f64;
    let angle = (acute_angle(c - a, d - b) - target).abs();
    let (s1, s2) = (a.dist(b), b.dist(c));
    let ratio = s1.min(s2) / s1.max(s2);
    let aspect = (ratio - (target / 2.0).tan()).abs();
    RectangleCheck { corner, midpoint, diagonal, angle, aspect }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub seeds: usize,
    pub candidates: usize,
    pub refined: usize,
    /// Candidates whose refinement did not reach the tolerance.
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RectangleSearch {
    pub hits: Vec<RectangleHit>,
    pub stats: SearchStats,
}

struct Seed {
    i: u32,
    j: u32,
    key: [i32; 4],
    image: [f64; 4],
    phi: f64,
}

fn cyclic_gap(a: f64, b: f64) -> f64 {
    let d = rem_euclid(a - b, 1.0);
    d.min(1.0 - d)
}

/// Small dense solve with partial pivoting; `None` when singular.
fn solve4(mut m: [[f64; 4]; 4], mut rhs: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            for c in col..4 {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

/// `F(s, t, s′, t′) = [α(s)+α(t)−α(s′)−α(t′); R_θ(α(s)−α(t)) − (α(s′)−α(t′))]`.
fn residual(curve: &PlaneCurve, x: &[f64; 4], theta: f64) -> [f64; 4] {
    let [a, b, c, d] = x.map(|s| curve.point_at(s));
    let sum = a + b - c - d;
    let rot = (a - b).rotate(theta) - (c - d);
    [sum.x, sum.y, rot.x, rot.y]
}

fn norm_inf(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Levenberg-Marquardt on `F`; returns parameters with `|F|∞ < tol`.
fn refine(curve: &PlaneCurve, mut x: [f64; 4], theta: f64, tol: f64, max_iter: usize) -> Option<[f64; 4]> {
    let l = curve.length();
    let mut f = residual(curve, &x, theta);
    let mut cost: f64 = f.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        if norm_inf(&f) < tol {
            return Some(x.map(|s| rem_euclid(s, 1.0)));
        }
        let [ta, tb, tc, td] = x.map(|s| curve.tangent_at(s) * l);
        let cols = [
            [ta.x, ta.y, ta.rotate(theta).x, ta.rotate(theta).y],
            [tb.x, tb.y, -tb.rotate(theta).x, -tb.rotate(theta).y],
            [-tc.x, -tc.y, -tc.x, -tc.y],
            [-td.x, -td.y, td.x, td.y],
        ];
        let mut jtj = [[0.0; 4]; 4];
        let mut jtf = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                jtj[a][b] = (0..4).map(|r| cols[a][r] * cols[b][r]).sum();
            }
            jtf[a] = -(0..4).map(|r| cols[a][r] * f[r]).sum::<f64>();
        }
        loop {
            let mut damped = jtj;
            for a in 0..4 {
                damped[a][a] += lambda * (jtj[a][a] + 1e-12);
            }
            let step = solve4(damped, jtf)?;
            let trial = [x[0] + step[0], x[1] + step[1], x[2] + step[2], x[3] + step[3]];
            let ft = residual(curve, &trial, theta);
            let ct: f64 = ft.iter().map(|v| v * v).sum();
            if ct < cost {
                (x, f, cost) = (trial, ft, ct);
                lambda = (lambda / 3.0).max(1e-15);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                return (norm_inf(&f) < tol).then(|| x.map(|s| rem_euclid(s, 1.0)));
            }
        }
    }
    (norm_inf(&f) < tol).then(|| x.map(|s| rem_euclid(s, 1.0)))
}

fn wrap_angle(a: f64) -> f64 {
    let w = rem_euclid(a + PI, 2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Collision search for `Ψₙ` on a uniform parameter grid.
pub fn find_rectangles(curve: &PlaneCurve, n: u32, cfg: &SearchConfig) -> Result<RectangleSearch> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if cfg.grid < 8 || !(cfg.tolerance > 0.0) || !(cfg.bucket_scale > 0.0) {
        return Err(invalid("grid must be at least 8 with positive tolerance and bucket scale"));
    }
    let g = cfg.grid;
    let l = curve.length();
    let h = l / g as f64;
    let pts: Vec<Point2> = (0..g).map(|i| curve.point_at(i as f64 / g as f64)).collect();
    let mid_cell = cfg.bucket_scale * h;
    let pow_cell = cfg.bucket_scale * 2.0 * n as f64 * h;
    let min_chord = (4.0 * mid_cell).max(cfg.min_diameter);
    let two_n = 2.0 * n as f64;

    let mut seeds = Vec::new();
    for i in 0..g {
        for j in i + 1..g {
            let d = pts[i] - pts[j];
            let r = d.norm();
            if r < min_chord {
                continue;
            }
            let m = pts[i].midpoint(pts[j]);
            let phi = d.arg();
            let image = [m.x, m.y, r * (two_n * phi).cos(), r * (two_n * phi).sin()];
            let key = [
                (image[0] / mid_cell).floor() as i32,
                (image[1] / mid_cell).floor() as i32,
                (image[2] / pow_cell).floor() as i32,
                (image[3] / pow_cell).floor() as i32,
            ];
            seeds.push(Seed { i: i as u32, j: j as u32, key, image, phi });
        }
    }
    seeds.sort_by_key(|s| s.key);
    let mut cells: HashMap<[i32; 4], (usize, usize)> = HashMap::new();
    let mut start = 0;
    for idx in 1..=seeds.len() {
        if idx == seeds.len() || seeds[idx].key != seeds[start].key {
            cells.insert(seeds[start].key, (start, idx));
            start = idx;
        }
    }

    let max_k = n / 2;
    let mut stats = SearchStats { seeds: seeds.len(), ..SearchStats::default() };
    let mut hits: Vec<RectangleHit> = Vec::new();
    let mut per_k = vec![0usize; max_k as usize + 1];
    let gf = g as f64;
    let seed_radius = 3.0 * h;
    'outer: for a in 0..seeds.len() {
        let sa = &seeds[a];
        for off in 0..81 {
            let mut key = sa.key;
            let mut o = off;
            for c in key.iter_mut() {
                *c += o % 3 - 1;
                o /= 3;
            }
            let Some(&(lo, hi)) = cells.get(&key) else { continue };
            for b in lo..hi {
                if b <= a {
                    continue;
                }
                let sb = &seeds[b];
                let close = (0..2).all(|q| (sa.image[q] - sb.image[q]).abs() < mid_cell)
                    && (2..4).all(|q| (sa.image[q] - sb.image[q]).abs() < pow_cell);
                if !close {
                    continue;
                }
                let (si, ti, sj, tj) = (sa.i as f64 / gf, sa.j as f64 / gf, sb.i as f64 / gf, sb.j as f64 / gf);
                let same = |p: f64, q: f64, r: f64, s: f64| cyclic_gap(p, r).max(cyclic_gap(q, s)) * l < 2.0 * seed_radius;
                if same(si, ti, sj, tj) || same(si, ti, tj, sj) {
                    continue;
                }
                let theta = wrap_angle(sb.phi - sa.phi);
                let m = (theta / (PI / n as f64)).round() as i64;
                if m.rem_euclid(n as i64) == 0 {
                    continue;
                }
                let k = {
                    let r = m.unsigned_abs() % n as u64;
                    r.min(n as u64 - r) as u32
                };
                if per_k[k as usize] >= cfg.max_hits {
                    continue;
                }
                let approx = [pts[sa.i as usize], pts[sb.i as usize], pts[sa.j as usize], pts[sb.j as usize]];
                let near_known = hits.iter().filter(|hh| hh.k == k).any(|hh| {
                    approx.iter().all(|p| hh.vertices.iter().any(|q| p.dist(*q) < 4.0 * seed_radius))
                });
                if near_known {
                    continue;
                }
                stats.candidates += 1;
                let rot = m as f64 * PI / n as f64;
                let Some(x) = refine(curve, [si, ti, sj, tj], rot, cfg.tolerance, cfg.max_iterations) else {
                    stats.dropped += 1;
                    continue;
                };
                stats.refined += 1;
                let [pa, pb, pc, pd] = x.map(|s| curve.point_at(s));
                let corners = [pa, pc, pb, pd];
                let params = [x[0], x[2], x[1], x[3]];
                let diameter = pa.dist(pb);
                let distinct = (0..4).all(|u| (u + 1..4).all(|v| corners[u].dist(corners[v]) > cfg.dedup_radius));
                if !distinct || diameter < cfg.min_diameter.max(cfg.dedup_radius) {
                    stats.dropped += 1;
                    continue;
                }
                let mut hit = RectangleHit {
                    vertices: corners,
                    params,
                    n,
                    k,
                    aspect: (k as f64 * PI / (2.0 * n as f64)).tan(),
                    diameter,
                    residual: 0.0,
                };
                let check = verify_rectangle(&hit, curve);
                hit.residual = check.max();
                if hit.residual >= cfg.tolerance.max(1e-7) {
                    stats.dropped += 1;
                    continue;
                }
                if hits.iter().any(|o| o.k == k && o.matches(&hit, cfg.dedup_radius)) {
                    continue;
                }
                per_k[k as usize] += 1;
                hits.push(hit);
                if (1..=max_k as usize).all(|kk| per_k[kk] >= cfg.max_hits) {
                    break 'outer;
                }
            }
        }
    }
    canonical_sort(&mut hits);
    Ok(RectangleSearch { hits, stats })
}

/// Orders hits by `(n, k, diameter, first vertex)`, independent of search order.
pub fn canonical_sort(hits: &mut [RectangleHit]) {
    let key = |h: &RectangleHit| {
        let v = h.vertices.iter().fold(h.vertices[0], |m, p| if (p.x, p.y) < (m.x, m.y) { *p } else { m });
        (h.n, h.k, h.diameter, v.x, v.y)
    };
    hits.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(core::cmp::Ordering::Equal));
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub k: u32,
    pub aspect: f64,
    pub diameter: f64,
    pub residual: f64,
}

/// One row per hit, for each `n` in order.
pub fn sweep(curve: &PlaneCurve, n_values: &[u32], cfg: &SearchConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in n_values {
        rows.extend(rows_of(&find_rectangles(curve, n, cfg)?.hits));
    }
    Ok(rows)
}

pub fn rows_of(hits: &[RectangleHit]) -> impl Iterator<Item = SweepRow> + '_ {
    hits.iter().map(|h| SweepRow { n: h.n, k: h.k, aspect: h.aspect, diameter: h.diameter, residual: h.residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aspects() {
        assert!((aspect_ratio(2, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((aspect_ratio(3, 2).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!((aspect_ratio(4, 1).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(aspect_ratio(3, 3).is_err());
        assert!(aspect_ratio(1, 1).is_err());
    }

    #[test]
    fn psi_examples() {
        let c = PlaneCurve::circle(1.0, 400).unwrap();
        let z = psi(&c, ChordPair::new(0.1, 0.1), 2).unwrap();
        assert!(z.pow.norm() < 1e-15 && z.mid.dist(c.point_at(0.1)) < 1e-15);
        let a = psi(&c, ChordPair::new(0.0, 0.5), 2).unwrap();
        let b = psi(&c, ChordPair::new(0.25, 0.75), 2).unwrap();
        assert!(a.mid.norm() < 1e-12 && a.pow.dist(Point2::new(16.0, 0.0)) < 1e-9);
        assert!(b.mid.norm() < 1e-12 && b.pow.dist(Point2::new(16.0, 0.0)) < 1e-9);
    }

    #[test]
    fn verify_examples() {
        let c = PlaneCurve::circle(1.0, 10_000).unwrap();
        let corners = [0.0, 0.25, 0.5, 0.75].map(|s| c.point_at(s));
        let mut hit = RectangleHit {
            vertices: corners,
            params: [0.0, 0.25, 0.5, 0.75],
            n: 2,
            k: 1,
            aspect: 1.0,
            diameter: 2.0,
            residual: 0.0,
        };
        assert!(verify_rectangle(&hit, &c).max() < 1e-12);
        hit.vertices[1] = hit.vertices[1] * (1.0 + 1e-3);
        let check = verify_rectangle(&hit, &c);
        assert!((check.corner - 1e-3).abs() < 1e-6);
    }

    #[test]
    fn ellipse_square() {
        let e = PlaneCurve::ellipse(2.0, 1.0, 2000).unwrap();
        let cfg = SearchConfig { grid: 256, ..SearchConfig::default() };
        let res = find_rectangles(&e, 2, &cfg).unwrap();
        assert!(!res.hits.is_empty());
        for h in &res.hits {
            assert_eq!(h.k, 1);
            assert!(h.residual < 1e-6);
            let c = h.vertices.iter().fold(Point2::default(), |a, p| a + *p * 0.25);
            assert!(c.norm() < 1e-6);
        }
    }

    #[test]
    fn circle_squares() {
        let c = PlaneCurve::circle(1.0, 1000).unwrap();
        let cfg = SearchConfig { grid: 128, max_hits: 3, ..SearchConfig::default() };
        let res = find_rectangles(&c, 2, &cfg).unwrap();
        assert!(!res.hits.is_empty() && res.hits.len() <= 3);
        for h in &res.hits {
            assert_eq!(h.k, 1);
            assert!(verify_rectangle(h, &c).max() < 1e-7);
            assert!((h.diameter - 2.0).abs() < 1e-3);
        }
    }
}
