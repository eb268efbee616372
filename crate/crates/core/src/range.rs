//! Joint numerical ranges of observable tuples restricted to symmetric pure
//! product states, their convex hulls and support functions, and detection of
//! flat pieces of the boundary.
//!
//! Directions are unit vectors `x` and the support value is the minimum of
//! `<x, p>` over the set, so `h(x)` is the ground energy of `sum_i x_i A_i`.

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::ground::{mean_field_minimize, MeanFieldConfig};
use crate::ops::{checked_pow, expectation_vector, ComplexMatrix, HermitianOperator, PureState};
use crate::random::{haar_state, stream_rng};

/// Cross products at or below this are treated as collinear by `hull_2d`.
pub const HULL_COLLINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTuple {
    n: usize,
    k: usize,
    names: Vec<String>,
    operators: Vec<HermitianOperator>,
}

impl ObservableTuple {
    pub fn new(n: usize, k: usize, operators: Vec<HermitianOperator>) -> Result<Self> {
        let names = (1..=operators.len()).map(|i| format!("a{i}")).collect();
        Self::with_names(n, k, names, operators)
    }

    pub fn with_names(n: usize, k: usize, names: Vec<String>, operators: Vec<HermitianOperator>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("n and k must be positive".into()));
        }
        if operators.is_empty() {
            return Err(Error::InvalidArgument("observable tuple is empty".into()));
        }
        check_dim(operators.len(), names.len())?;
        let dim = checked_pow(n, k)?;
        for a in &operators {
            check_dim(dim, a.dim())?;
        }
        Ok(Self { n, k, names, operators })
    }

    pub fn from_terms(n: usize, k: usize, terms: Vec<crate::ground::KLocalTerm>) -> Result<Self> {
        let (names, operators) = terms.into_iter().map(|t| (t.name, t.operator)).unzip();
        Self::with_names(n, k, names, operators)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.operators.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    /// `A(x) = sum_i x_i A_i`.
    pub fn combine(&self, x: &[f64]) -> Result<HermitianOperator> {
        check_dim(self.m(), x.len())?;
        let dim = self.operators[0].dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (a, &xi) in self.operators.iter().zip(x) {
            m += a.matrix().scale(xi);
        }
        Ok(HermitianOperator::from_hermitian_part(&m))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangePoint {
    pub coords: Vec<f64>,
}

impl RangePoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.coords.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn xy(&self) -> (f64, f64) {
        (self.coords[0], self.coords[1])
    }

    pub fn distance(&self, other: &RangePoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    /// Unit direction.
    pub direction: Vec<f64>,
    pub value: f64,
    pub minimizer: PureState,
    /// Range point of the minimizer; `<direction, point> = value`.
    pub point: RangePoint,
    pub converged: bool,
}

/// `(Tr((|psi><psi|)^{(x) k} A_i))_i`.
pub fn pi_sym_point(psi: &PureState, obs: &ObservableTuple) -> Result<RangePoint> {
    check_dim(obs.n, psi.dim())?;
    let v = psi.tensor_power(obs.k);
    Ok(RangePoint::new(obs.operators.iter().map(|a| expectation_vector(&v, a.matrix())).collect()))
}

/// `count` points of the symmetric product range from Haar-random one-particle
/// states; sample `i` uses stream `i` of `seed`.
pub fn sample_pi_sym(obs: &ObservableTuple, count: usize, seed: u64) -> Vec<RangePoint> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let psi = haar_state(&mut stream_rng(seed, i as u64), obs.n);
            pi_sym_point(&psi, obs).expect("dimension fixed by the tuple")
        })
        .collect()
}

fn normalized_direction(x: &[f64]) -> Result<Vec<f64>> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidArgument("direction must be non-zero and finite".into()));
    }
    Ok(x.iter().map(|v| v / norm).collect())
}

/// Support value of the convex hull of the symmetric product range in
/// direction `x / |x|`, computed by mean-field minimization of `A(x)`.
pub fn support_theta_sym(x: &[f64], obs: &ObservableTuple, cfg: &MeanFieldConfig) -> Result<SupportSample> {
    let direction = normalized_direction(x)?;
    let a = obs.combine(&direction)?;
    let r = mean_field_minimize(&a, obs.k, cfg)?;
    let point = pi_sym_point(&r.minimizer, obs)?;
    Ok(SupportSample { direction, value: r.energy, minimizer: r.minimizer, point, converged: r.converged })
}

/// Positively homogeneous support function `h(x) = |x| h(x / |x|)`.
pub fn support_function(x: &[f64], obs: &ObservableTuple, cfg: &MeanFieldConfig) -> Result<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(norm * support_theta_sym(x, obs, cfg)?.value)
}

/// `(cos t, sin t)` for `t = 2 pi i / count`.
pub fn planar_directions(count: usize) -> Vec<(f64, [f64; 2])> {
    (0..count)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
            (t, [t.cos(), t.sin()])
        })
        .collect()
}

/// Support samples of the symmetric product range along `count` equally
/// spaced planar directions. Every direction reuses `cfg`, so the sweep does
/// not depend on evaluation order.
pub fn theta_sym_sweep(obs: &ObservableTuple, count: usize, cfg: &MeanFieldConfig) -> Result<Vec<SupportSample>> {
    if obs.m() != 2 {
        return Err(Error::InvalidArgument(format!("planar sweep needs m = 2, got {}", obs.m())));
    }
    planar_directions(count).into_par_iter().map(|(_, x)| support_theta_sym(&x, obs, cfg)).collect()
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeHull2D {
    pub vertices: Vec<RangePoint>,
}

impl PolytopeHull2D {
    /// `min_v <x, v>`.
    pub fn support(&self, x: &[f64]) -> f64 {
        self.vertices.iter().map(|v| v.dot(x)).fold(f64::INFINITY, f64::min)
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Degenerate inputs give a segment or one vertex.
pub fn hull_2d(points: &[RangePoint]) -> Result<PolytopeHull2D> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("hull of an empty point set".into()));
    }
    if let Some(p) = points.iter().find(|p| p.coords.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, found: p.coords.len() });
    }
    let mut pts: Vec<(f64, f64)> = points.iter().map(RangePoint::xy).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(PolytopeHull2D { vertices: vec![RangePoint::new(vec![pts[0].0, pts[0].1])] });
    }
    let chain = |iter: &mut dyn Iterator<Item = &(f64, f64)>| {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for &p in iter {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= HULL_COLLINEAR_TOL {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    Ok(PolytopeHull2D { vertices: hull.into_iter().map(|(x, y)| RangePoint::new(vec![x, y])).collect() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullCheckRow {
    pub theta: f64,
    pub direction: [f64; 2],
    /// Minimum of `<x, p>` over the sampled cloud.
    pub sampled: f64,
    /// Mean-field support value.
    pub solver: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullCheckReport {
    pub rows: Vec<HullCheckRow>,
    /// `max |sampled - solver|`.
    pub max_discrepancy: f64,
    /// `max (solver - sampled)`; positive means a sample beat the solver.
    pub max_violation: f64,
    /// `max (sampled - solver)`, the inner-approximation slack of the cloud.
    pub sampling_slack: f64,
    pub passed: bool,
}

/// Compares the support function of a sampled cloud with mean-field support
/// values. Passes iff no sampled point falls below a solver value by more
/// than `tol`; the sampling slack is reported but never fails the check.
pub fn verify_hull_equivalence(
    obs: &ObservableTuple,
    directions: usize,
    samples: usize,
    tol: f64,
    seed: u64,
    cfg: &MeanFieldConfig,
) -> Result<HullCheckReport> {
    if obs.m() != 2 {
        return Err(Error::InvalidArgument(format!("planar check needs m = 2, got {}", obs.m())));
    }
    let hull = hull_2d(&sample_pi_sym(obs, samples.max(1), seed))?;
    let rows: Vec<HullCheckRow> = planar_directions(directions)
        .into_par_iter()
        .map(|(theta, x)| {
            let solver = support_theta_sym(&x, obs, cfg)?.value;
            Ok(HullCheckRow { theta, direction: x, sampled: hull.support(&x), solver })
        })
        .collect::<Result<_>>()?;
    let max_discrepancy = rows.iter().map(|r| (r.sampled - r.solver).abs()).fold(0.0, f64::max);
    let max_violation = rows.iter().map(|r| r.solver - r.sampled).fold(f64::NEG_INFINITY, f64::max);
    let sampling_slack = rows.iter().map(|r| r.sampled - r.solver).fold(f64::NEG_INFINITY, f64::max);
    Ok(HullCheckReport { rows, max_discrepancy, max_violation, sampling_slack, passed: max_violation <= tol })
}

/// Boundary of the full joint numerical range of `(a1, a2)`: for each
/// direction the lowest eigenvalue of `x1 a1 + x2 a2` and its eigenvector.
pub fn lambda_boundary_2d(
    a1: &HermitianOperator,
    a2: &HermitianOperator,
    directions: usize,
) -> Result<Vec<SupportSample>> {
    check_dim(a1.dim(), a2.dim())?;
    Ok(planar_directions(directions)
        .into_par_iter()
        .map(|(_, x)| {
            let m = a1.matrix().scale(x[0]) + a2.matrix().scale(x[1]);
            let eig = crate::ops::eigh(&m);
            let v = eig.vector(0);
            let point = RangePoint::new(vec![expectation_vector(&v, a1.matrix()), expectation_vector(&v, a2.matrix())]);
            let minimizer = PureState::normalized(v).expect("eigenvectors have unit norm");
            SupportSample { direction: x.to_vec(), value: eig.values[0], minimizer, point, converged: true }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatSegment {
    /// Angles of the first and last sample whose touch points bound the
    /// segment; the exposing direction lies between them.
    pub theta_start: f64,
    pub theta_end: f64,
    pub start: RangePoint,
    pub end: RangePoint,
}

impl FlatSegment {
    pub fn length(&self) -> f64 {
        self.start.distance(&self.end)
    }

    /// Whether the direction interval (counter-clockwise from start to end)
    /// passes within `slack` radians of angle `t`.
    pub fn covers_angle(&self, t: f64, slack: f64) -> bool {
        let tau = 2.0 * std::f64::consts::PI;
        let span = (self.theta_end - self.theta_start).rem_euclid(tau);
        let offset = (t - self.theta_start).rem_euclid(tau);
        offset <= span + slack || offset >= tau - slack
    }
}

fn angle_of(d: &[f64]) -> f64 {
    d[1].atan2(d[0]).rem_euclid(2.0 * std::f64::consts::PI)
}

/// Finds exposed boundary segments from support samples ordered by direction
/// angle (cyclically). Every step between consecutive touch points longer
/// than `length_tol` seeds a candidate line, which is extended over
/// neighbouring touch points that lie on it within `gap_tol` (a sample taken
/// exactly at the exposing direction may land inside the face). A candidate
/// is kept iff the line supports every touch point within `gap_tol` and every
/// sample on it satisfies `<direction, point> = value` within `gap_tol`.
pub fn detect_flat_segments(samples: &[SupportSample], gap_tol: f64, length_tol: f64) -> Vec<FlatSegment> {
    let d = samples.len();
    if d < 2 || samples.iter().any(|s| s.point.coords.len() != 2) {
        return Vec::new();
    }
    let point = |i: usize| &samples[i % d].point;
    let mut consumed = vec![false; d];
    let mut segments = Vec::new();
    for seed in 0..d {
        if consumed[seed] || point(seed).distance(point(seed + 1)) <= length_tol {
            continue;
        }
        let Some((u, c)) = line_through(point(seed), point(seed + 1)) else { continue };
        let on_line =
            |i: usize, j: usize| (point(j).dot(&u) - c).abs() <= gap_tol && point(i).distance(point(j)) > gap_tol;
        // run covers steps first..first+len, i.e. samples first..=first+len
        let (mut first, mut len) = (seed, 1);
        while len < d - 1 && on_line(first + d, first + d - 1) {
            first = (first + d - 1) % d;
            len += 1;
        }
        while len < d - 1 && on_line(first + len, first + len + 1) {
            len += 1;
        }
        for j in 0..len {
            consumed[(first + j) % d] = true;
        }
        if let Some(seg) = supported_segment(samples, first, len, gap_tol) {
            segments.push(seg);
        }
    }
    segments.sort_by(|a, b| a.theta_start.total_cmp(&b.theta_start));
    segments
}

/// Unit normal `u` and offset `c` of the line `<u, p> = c` through two points.
fn line_through(p: &RangePoint, q: &RangePoint) -> Option<([f64; 2], f64)> {
    let (dx, dy) = (q.coords[0] - p.coords[0], q.coords[1] - p.coords[1]);
    let length = dx.hypot(dy);
    if length == 0.0 {
        return None;
    }
    let u = [-dy / length, dx / length];
    Some((u, p.dot(&u)))
}

fn supported_segment(samples: &[SupportSample], first: usize, len: usize, gap_tol: f64) -> Option<FlatSegment> {
    let d = samples.len();
    let last = (first + len) % d;
    let (p, q) = (&samples[first].point, &samples[last].point);
    let (mut u, _) = line_through(p, q)?;
    // orient the normal towards the directions of the run
    let mid = &samples[(first + len / 2) % d].direction;
    if u[0] * mid[0] + u[1] * mid[1] < 0.0 {
        u = [-u[0], -u[1]];
    }
    let c = p.dot(&u);
    let supports = samples.iter().all(|s| s.point.dot(&u) >= c - gap_tol);
    let interior_on_line = (1..len).all(|j| (samples[(first + j) % d].point.dot(&u) - c).abs() <= gap_tol);
    let consistent = (0..=len).all(|j| {
        let s = &samples[(first + j) % d];
        (s.point.dot(&s.direction) - s.value).abs() <= gap_tol
    });
    (supports && interior_on_line && consistent).then(|| FlatSegment {
        theta_start: angle_of(&samples[first].direction),
        theta_end: angle_of(&samples[last].direction),
        start: p.clone(),
        end: q.clone(),
    })
}
