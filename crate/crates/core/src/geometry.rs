//! Geometry of the rescaled bi-score set: support-direction sweeps that
//! recover its convex hull, Hausdorff distances between convex polygons, and
//! a curvature estimate at the point of maximal first coordinate.
//!
//! Angles follow the convention `theta in [0, 2*pi)` with direction
//! `(cos theta, sin theta)`; the x-maximizer is the support point at 0.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::alignment::{bi_score, optimal_score, Alignment, LetterSequence};
use crate::error::{Error, Result};
use crate::scoring::{linear_combination, ScoringFunction};

/// A point `(S-score / n, T-score / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub x: f64,
    pub y: f64,
}

impl ScorePair {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot_dir(self, theta: f64) -> f64 {
        theta.cos() * self.x + theta.sin() * self.y
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Self) -> f64 {
        self.sub(o).norm()
    }
}

fn cross(o: ScorePair, a: ScorePair, b: ScorePair) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Indices of the convex hull vertices, counterclockwise from the
/// lexicographically smallest point. Collinear and repeated points are
/// dropped; a single distinct point gives one vertex and collinear input
/// gives the two endpoints. Turns smaller than `1e-13 * scale^2` count as
/// collinear, which absorbs points that differ only by summation-order
/// rounding.
pub fn convex_hull(points: &[ScorePair]) -> Vec<usize> {
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let eps = 1e-13 * scale * scale;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);
    if order.len() <= 2 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in [
        order.as_slice(),
        &order.iter().rev().copied().collect::<Vec<_>>(),
    ] {
        let start = hull.len();
        for &i in pass {
            while hull.len() >= start + 2
                && cross(
                    points[hull[hull.len() - 2]],
                    points[hull[hull.len() - 1]],
                    points[i],
                ) <= eps
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Convex polygon with a supporting direction for every vertex and,
/// when it comes from alignments, the witness alignment of each vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPolygon {
    vertices: Vec<ScorePair>,
    directions: Vec<f64>,
    witnesses: Option<Vec<Alignment>>,
}

/// One support evaluation: direction, support point, and optional witness.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub theta: f64,
    pub point: ScorePair,
    pub witness: Option<Alignment>,
}

impl SupportPolygon {
    /// Hull of arbitrary points; each vertex gets the bisector of its
    /// adjacent outward edge normals as its direction.
    pub fn from_points(points: &[ScorePair]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        let vertices: Vec<ScorePair> = convex_hull(points).into_iter().map(|i| points[i]).collect();
        let k = vertices.len();
        let directions = match k {
            1 => vec![0.0],
            2 => {
                let d = vertices[0].sub(vertices[1]);
                let a = d.y.atan2(d.x);
                vec![wrap_angle(a), wrap_angle(a + std::f64::consts::PI)]
            }
            _ => (0..k)
                .map(|i| {
                    let prev = vertices[(i + k - 1) % k];
                    let next = vertices[(i + 1) % k];
                    // outward normals of a ccw polygon: (dy, -dx)
                    let n1 = edge_normal(prev, vertices[i]);
                    let n2 = edge_normal(vertices[i], next);
                    let mid = ScorePair::new(n1.x + n2.x, n1.y + n2.y);
                    wrap_angle(mid.y.atan2(mid.x))
                })
                .collect(),
        };
        Ok(Self {
            vertices,
            directions,
            witnesses: None,
        })
    }

    /// Hull of support points; each vertex keeps the first direction (in
    /// sample order) at which it was the support point, which supports it
    /// by construction.
    pub fn from_samples(samples: &[SupportSample]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        let points: Vec<ScorePair> = samples.iter().map(|s| s.point).collect();
        let hull = convex_hull(&points);
        let first_of = |i: usize| {
            samples
                .iter()
                .position(|s| s.point == points[i])
                .expect("hull point is sampled")
        };
        let picks: Vec<usize> = hull.into_iter().map(first_of).collect();
        let witnesses = if samples.iter().all(|s| s.witness.is_some()) {
            Some(
                picks
                    .iter()
                    .map(|&i| samples[i].witness.clone().expect("checked"))
                    .collect(),
            )
        } else {
            None
        };
        Ok(Self {
            vertices: picks.iter().map(|&i| samples[i].point).collect(),
            directions: picks.iter().map(|&i| samples[i].theta).collect(),
            witnesses,
        })
    }

    pub fn vertices(&self) -> &[ScorePair] {
        &self.vertices
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn witnesses(&self) -> Option<&[Alignment]> {
        self.witnesses.as_deref()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `max_v cos(theta) v.x + sin(theta) v.y`.
    pub fn support(&self, theta: f64) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot_dir(theta))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Boundary length; a segment counts both sides.
    pub fn perimeter(&self) -> f64 {
        let k = self.vertices.len();
        if k < 2 {
            return 0.0;
        }
        (0..k)
            .map(|i| self.vertices[i].distance(self.vertices[(i + 1) % k]))
            .sum()
    }

    pub fn area(&self) -> f64 {
        let k = self.vertices.len();
        if k < 3 {
            return 0.0;
        }
        0.5 * (0..k)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
                a.x * b.y - a.y * b.x
            })
            .sum::<f64>()
    }

    /// Euclidean distance from `p` to the closed convex region.
    pub fn distance_to(&self, p: ScorePair) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => p.distance(v[0]),
            2 => segment_distance(p, v[0], v[1]),
            k => {
                if (0..k).all(|i| cross(v[i], v[(i + 1) % k], p) >= 0.0) {
                    0.0
                } else {
                    (0..k)
                        .map(|i| segment_distance(p, v[i], v[(i + 1) % k]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    pub fn contains(&self, p: ScorePair, tol: f64) -> bool {
        self.distance_to(p) <= tol
    }

    /// Every vertex maximizes its own direction over all vertices, up to `tol`.
    pub fn is_supporting(&self, tol: f64) -> bool {
        self.vertices
            .iter()
            .zip(&self.directions)
            .all(|(v, &theta)| {
                let own = v.dot_dir(theta);
                self.vertices.iter().all(|w| own >= w.dot_dir(theta) - tol)
            })
    }

    pub fn to_document(&self, n: usize, seed: Option<u64>) -> PolygonDocument {
        PolygonDocument {
            vertices: self.vertices.iter().map(|v| [v.x, v.y]).collect(),
            directions: self.directions.clone(),
            n,
            seed,
            witnesses: self.witnesses.clone(),
        }
    }
}

/// On-disk form of a polygon, meant for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub vertices: Vec<[f64; 2]>,
    pub directions: Vec<f64>,
    pub n: usize,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Alignment>>,
}

fn edge_normal(a: ScorePair, b: ScorePair) -> ScorePair {
    let d = b.sub(a);
    let len = d.norm();
    ScorePair::new(d.y / len, -d.x / len)
}

pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn segment_distance(p: ScorePair, a: ScorePair, b: ScorePair) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let ap = p.sub(a);
    let t = (ap.x * ab.x + ap.y * ab.y) / len2;
    if t <= 0.0 {
        p.distance(a)
    } else if t >= 1.0 {
        p.distance(b)
    } else {
        p.distance(ScorePair::new(a.x + t * ab.x, a.y + t * ab.y))
    }
}

/// Length used to rescale scores; the larger of the two lengths, at least 1.
pub fn rescale_length(x: &LetterSequence, y: &LetterSequence) -> usize {
    x.len().max(y.len()).max(1)
}

/// Support value of the rescaled score set in direction `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportValue {
    /// `L_{n, R_theta} / n` from the dynamic program.
    pub h: f64,
    pub witness_point: ScorePair,
    pub witness: Alignment,
}

/// Optimal alignment under `cos(theta) S + sin(theta) T`, rescaled.
pub fn support_value(
    s: &ScoringFunction,
    t: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
    theta: f64,
) -> Result<SupportValue> {
    let r = linear_combination(theta.cos(), s, theta.sin(), t)?;
    let (score, witness) = optimal_score(&r, x, y)?;
    let n = rescale_length(x, y) as f64;
    let b = bi_score(s, t, x, y, &witness)?;
    Ok(SupportValue {
        h: score / n,
        witness_point: ScorePair::new(b.s_value / n, b.t_value / n),
        witness,
    })
}

const INITIAL_DIRECTIONS: usize = 8;

/// Convex hull of the rescaled score set by adaptive direction refinement.
///
/// Starts from 8 equispaced angles and bisects every angular interval whose
/// endpoint support points differ, until they agree or the interval is
/// narrower than `angle_tol`. Any extreme point whose normal cone is at
/// least `angle_tol` wide ends up as a vertex.
pub fn build_set_polygon(
    s: &ScoringFunction,
    t: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
    angle_tol: f64,
) -> Result<SupportPolygon> {
    if angle_tol.is_nan() || angle_tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "angle tolerance must be positive, got {angle_tol}"
        )));
    }
    let eval = |theta: f64| -> Result<SupportSample> {
        let v = support_value(s, t, x, y, theta)?;
        Ok(SupportSample {
            theta,
            point: v.witness_point,
            witness: Some(v.witness),
        })
    };
    let starts: Vec<SupportSample> = (0..INITIAL_DIRECTIONS)
        .map(|k| eval(TAU * k as f64 / INITIAL_DIRECTIONS as f64))
        .collect::<Result<_>>()?;
    let mut samples = Vec::new();
    for k in 0..INITIAL_DIRECTIONS {
        let a = &starts[k];
        let b = &starts[(k + 1) % INITIAL_DIRECTIONS];
        samples.push(a.clone());
        let b_theta = if k + 1 == INITIAL_DIRECTIONS {
            TAU
        } else {
            b.theta
        };
        refine(
            &eval,
            a.theta,
            a.point,
            b_theta,
            b.point,
            angle_tol,
            &mut samples,
        )?;
    }
    SupportPolygon::from_samples(&samples)
}

/// Pushes the interior samples of `(lo, hi)` in increasing angle order.
fn refine(
    eval: &impl Fn(f64) -> Result<SupportSample>,
    lo: f64,
    lo_point: ScorePair,
    hi: f64,
    hi_point: ScorePair,
    angle_tol: f64,
    out: &mut Vec<SupportSample>,
) -> Result<()> {
    if lo_point == hi_point || hi - lo < angle_tol {
        return Ok(());
    }
    let mid = eval(0.5 * (lo + hi))?;
    let mid_point = mid.point;
    let mid_theta = mid.theta;
    refine(eval, lo, lo_point, mid_theta, mid_point, angle_tol, out)?;
    out.push(mid);
    refine(eval, mid_theta, mid_point, hi, hi_point, angle_tol, out)
}

/// Polygon whose support points are averages of per-trial support points on a
/// shared direction grid: the Minkowski average of the trial polygons as seen
/// from those directions.
pub fn averaged_polygon(thetas: &[f64], per_trial: &[Vec<ScorePair>]) -> Result<SupportPolygon> {
    if thetas.is_empty() || per_trial.is_empty() {
        return Err(Error::EmptyPolygon);
    }
    let count = per_trial.len() as f64;
    let samples: Vec<SupportSample> = thetas
        .iter()
        .enumerate()
        .map(|(k, &theta)| {
            let (sx, sy) = per_trial
                .iter()
                .fold((0.0, 0.0), |(sx, sy), pts| (sx + pts[k].x, sy + pts[k].y));
            SupportSample {
                theta,
                point: ScorePair::new(sx / count, sy / count),
                witness: None,
            }
        })
        .collect();
    SupportPolygon::from_samples(&samples)
}

/// `max(sup_{a in A} d(a, B), sup_{b in B} d(b, A))`.
///
/// Distance to a convex region is convex in the point, so both suprema are
/// attained at vertices.
pub fn hausdorff_distance(a: &SupportPolygon, b: &SupportPolygon) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPolygon);
    }
    let directed = |p: &SupportPolygon, q: &SupportPolygon| {
        p.vertices
            .iter()
            .map(|&v| q.distance_to(v))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

pub const DEFAULT_CURVATURE_STEP: f64 = 1e-2;

/// Curvature of the boundary at the support point of direction 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureEstimate {
    /// `1 / rho`, `+inf` at a vertex.
    pub kappa: f64,
    /// Estimated radius of curvature.
    pub rho: f64,
    /// Raw radii at `step` and `step / 2` before extrapolation.
    pub rho_step: f64,
    pub rho_half_step: f64,
    pub step: f64,
    pub vertex_detected: bool,
    /// False when the extrapolated radius is not positive while the raw
    /// differences are; `kappa` then falls back to the finer raw estimate.
    pub reliable: bool,
}

/// Radius of curvature `h + h''` at 0 from three support values.
///
/// The weights make the difference exact for `h = a cos + b sin` (a single
/// support point, radius 0) and for constant `h` (a circle), so the only
/// error is the `O(step^2)` smoothness term.
fn radius_at_zero(h: &impl Fn(f64) -> f64, step: f64) -> (f64, f64) {
    let (hm, h0, hp) = (h(-step), h(0.0), h(step));
    let one_minus_cos = 2.0 * (0.5 * step).sin().powi(2);
    let rho = (hp + hm - 2.0 * step.cos() * h0) / (2.0 * one_minus_cos);
    (rho, hm.abs().max(h0.abs()).max(hp.abs()))
}

/// Curvature of the convex set with support function `h` at its x-maximal
/// point, with one Richardson step from `step` to `step / 2`.
///
/// When the support point does not move over `[-step, step]` the radius
/// vanishes and the point is a vertex, which gets `kappa = +inf`.
pub fn curvature_at_max_x(h: impl Fn(f64) -> f64, step: f64) -> CurvatureEstimate {
    let (full, scale_full) = radius_at_zero(&h, step);
    let (half, scale_half) = radius_at_zero(&h, 0.5 * step);
    let tol = 1e-8 * scale_full.max(scale_half);
    if full.abs() <= tol && half.abs() <= tol {
        return CurvatureEstimate {
            kappa: f64::INFINITY,
            rho: 0.0,
            rho_step: full,
            rho_half_step: half,
            step,
            vertex_detected: true,
            reliable: true,
        };
    }
    let extrapolated = (4.0 * half - full) / 3.0;
    if extrapolated > tol {
        return CurvatureEstimate {
            kappa: 1.0 / extrapolated,
            rho: extrapolated,
            rho_step: full,
            rho_half_step: half,
            step,
            vertex_detected: false,
            reliable: true,
        };
    }
    let kappa = if half > tol {
        1.0 / half
    } else {
        f64::INFINITY
    };
    CurvatureEstimate {
        kappa,
        rho: half,
        rho_step: full,
        rho_half_step: half,
        step,
        vertex_detected: false,
        reliable: false,
    }
}
