//! Metric primitives for the L1 time metric with a single highway.
//!
//! The facility always sits on one highway endpoint (`f`); the other endpoint
//! `t` is the entry. A client either walks to `f` or walks to `t` and rides
//! the highway for `length / speed` time units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for deciding that both routes cost the same.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance for geometric and equation residuals.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn euclidean_distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// A client: a location with a strictly positive demand weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl DemandPoint {
    pub fn new(x: f64, y: f64, w: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::validation("x", format!("must be finite, got {x}")));
        }
        if !y.is_finite() {
            return Err(Error::validation("y", format!("must be finite, got {y}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::validation("w", format!("must be finite and > 0, got {w}")));
        }
        Ok(DemandPoint { x, y, w })
    }

    pub fn unit(x: f64, y: f64) -> Self {
        DemandPoint { x, y, w: 1.0 }
    }

    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Demand points together with the highway length and speed.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    points: Vec<DemandPoint>,
    length: f64,
    speed: f64,
}

impl Instance {
    pub fn new(points: Vec<DemandPoint>, length: f64, speed: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, p) in points.iter().enumerate() {
            DemandPoint::new(p.x, p.y, p.w).map_err(|e| match e {
                Error::Validation { field, message } => Error::Validation {
                    field: format!("points[{i}].{field}"),
                    message,
                },
                other => other,
            })?;
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::validation(
                "length",
                format!("must be finite and >= 0, got {length}"),
            ));
        }
        if !(speed.is_finite() && speed >= 1.0) {
            return Err(Error::validation(
                "speed",
                format!("must be finite and >= 1, got {speed}"),
            ));
        }
        Ok(Instance {
            points,
            length,
            speed,
        })
    }

    pub fn points(&self) -> &[DemandPoint] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w).sum()
    }

    /// Time spent riding the highway end to end.
    pub fn ride_time(&self) -> f64 {
        self.length / self.speed
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Instance::new(self.points.clone(), length, self.speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Direct,
    Highway,
    Tied,
}

/// Which candidate family produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorKind {
    /// Zero-length highway: the weighted 1-median.
    Median,
    VertexFacility,
    VertexEntry,
    EdgeFacility,
    EdgeEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMeta {
    /// Index of the octant transform the winning sweep ran in.
    pub octant: usize,
    pub anchor_kind: AnchorKind,
}

/// Facility, entry endpoint and total cost of a highway placement.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub facility: Point,
    pub entry: Point,
    pub cost: f64,
    pub assignment: Vec<Route>,
    pub meta: Option<SolutionMeta>,
}

impl Solution {
    /// Evaluates `(facility, entry)` on `inst` and labels every client.
    pub fn evaluate(inst: &Instance, facility: Point, entry: Point) -> Self {
        let (l, v) = (inst.length(), inst.speed());
        let assignment = inst
            .points()
            .iter()
            .map(|p| classify(p.pos(), facility, entry, l, v))
            .collect();
        Solution {
            facility,
            entry,
            cost: total_cost(inst, facility, entry),
            assignment,
            meta: None,
        }
    }
}

pub fn l1_distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

/// `min(|p - f|_1, |p - t|_1 + length / speed)`.
pub fn travel_time(p: Point, f: Point, t: Point, length: f64, speed: f64) -> f64 {
    l1_distance(p, f).min(l1_distance(p, t) + length / speed)
}

/// Travel time when the facility is not forced onto an endpoint: the highway
/// may be ridden in either direction between `t` and `t2`.
pub fn travel_time_two_entry(
    p: Point,
    f: Point,
    t: Point,
    t2: Point,
    length: f64,
    speed: f64,
) -> f64 {
    let ride = length / speed;
    let forward = l1_distance(p, t) + ride + l1_distance(t2, f);
    let backward = l1_distance(p, t2) + ride + l1_distance(t, f);
    l1_distance(p, f).min(forward).min(backward)
}

/// Weighted sum of travel times over all clients.
pub fn total_cost(inst: &Instance, f: Point, t: Point) -> f64 {
    let (l, v) = (inst.length(), inst.speed());
    inst.points()
        .iter()
        .map(|p| p.w * travel_time(p.pos(), f, t, l, v))
        .sum()
}

pub fn classify(p: Point, f: Point, t: Point, length: f64, speed: f64) -> Route {
    let walk = l1_distance(p, f);
    let ride = l1_distance(p, t) + length / speed;
    if (walk - ride).abs() <= TIE_TOLERANCE {
        Route::Tied
    } else if ride < walk {
        Route::Highway
    } else {
        Route::Direct
    }
}

/// The angle in `[0, pi/4)` where `cos - sin = 1 / speed`; below it the far
/// half-line of the travel bisector is vertical, above it horizontal.
pub fn phi_angle(speed: f64) -> Result<f64> {
    if !(speed.is_finite() && speed >= 1.0) {
        return Err(Error::validation(
            "speed",
            format!("must be finite and >= 1, got {speed}"),
        ));
    }
    Ok(0.5 * (1.0 - 1.0 / (speed * speed)).asin())
}

/// Lower weighted median of `(coordinate, weight)` pairs.
fn weighted_median(mut values: Vec<(f64, f64)>) -> f64 {
    values.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = values.iter().map(|v| v.1).sum();
    let mut acc = 0.0;
    for &(c, w) in &values {
        acc += w;
        if 2.0 * acc >= total {
            return c;
        }
    }
    values[values.len() - 1].0
}

/// Minimizer of the weighted L1 distance sum, one coordinate at a time.
///
/// When the minimizers form a rectangle the corner with the smallest `x`
/// and then smallest `y` is returned.
pub fn weighted_1_median(points: &[DemandPoint]) -> Result<(Point, f64)> {
    if points.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let x = weighted_median(points.iter().map(|p| (p.x, p.w)).collect());
    let y = weighted_median(points.iter().map(|p| (p.y, p.w)).collect());
    let at = Point::new(x, y);
    let cost = points.iter().map(|p| p.w * l1_distance(p.pos(), at)).sum();
    Ok((at, cost))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLine {
    pub anchor: Point,
    /// Unit direction along the ray.
    pub direction: Point,
}

impl HalfLine {
    pub fn point_at(&self, s: f64) -> Point {
        self.anchor + self.direction * s
    }
}

/// Travel bisector for a highway direction in the first octant: a vertical
/// ray going up, a segment of slope -1, and a ray that goes down (before the
/// phi angle) or to the right (after it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectorShape {
    pub left: HalfLine,
    /// Segment endpoints; both equal when the segment has zero length.
    pub middle: [Point; 2],
    pub right: HalfLine,
    pub right_orientation: Orientation,
}

impl BisectorShape {
    pub fn middle_is_degenerate(&self) -> bool {
        l1_distance(self.middle[0], self.middle[1]) <= RESIDUAL_TOLERANCE
    }

    /// The four vertices of the shape with both rays cut at length `reach`.
    pub fn clipped(&self, reach: f64) -> [Point; 4] {
        [
            self.left.point_at(reach),
            self.middle[0],
            self.middle[1],
            self.right.point_at(reach),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bisector {
    Polyline(BisectorShape),
    /// Speed 1 with a horizontal highway: every point with `x >= boundary_x`
    /// is indifferent, so the locus has interior.
    HalfPlane { boundary_x: f64 },
}

/// Travel bisector of `f` and `t = f + length * (cos theta, sin theta)`.
pub fn bisector_polyline(f: Point, theta: f64, length: f64, speed: f64) -> Result<Bisector> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::validation("length", format!("must be > 0, got {length}")));
    }
    let phi = phi_angle(speed)?;
    if !(0.0..=std::f64::consts::FRAC_PI_4).contains(&theta) {
        return Err(Error::validation(
            "theta",
            format!("must lie in [0, pi/4], got {theta}"),
        ));
    }
    let (dx, dy) = (length * theta.cos(), length * theta.sin());
    let ride = length / speed;
    if ride >= dx + dy - TIE_TOLERANCE * length {
        return Ok(Bisector::HalfPlane {
            boundary_x: f.x + dx,
        });
    }

    let up = Point::new(0.0, 1.0);
    let left_anchor = f + Point::new(0.5 * (dx - dy + ride), dy);
    let (middle_end, right, right_orientation) = if theta <= phi {
        let corner = f + Point::new(0.5 * (dx + dy + ride), 0.0);
        (
            corner,
            HalfLine {
                anchor: corner,
                direction: Point::new(0.0, -1.0),
            },
            Orientation::Vertical,
        )
    } else {
        let corner = f + Point::new(dx, 0.5 * (dy - dx + ride));
        (
            corner,
            HalfLine {
                anchor: corner,
                direction: Point::new(1.0, 0.0),
            },
            Orientation::Horizontal,
        )
    };
    Ok(Bisector::Polyline(BisectorShape {
        left: HalfLine {
            anchor: left_anchor,
            direction: up,
        },
        middle: [left_anchor, middle_end],
        right,
        right_orientation,
    }))
}
