//! Per-anchor angular sweep.
//!
//! On every event-free interval the objective is
//! `g(theta) = b1 + b2 cos(theta) + b3 sin(theta)`. The model keeps one
//! weighted term per client so that an event touching a single client is an
//! `O(1)` update; the phi event rebuilds everything.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::events::{anchor_events, Anchor, Endpoints, Event, SortedProjections};
use crate::geometry::{DemandPoint, Instance, Point, Route, TIE_TOLERANCE};
use crate::solver::{Frame, OctantTransform};

/// One client's weighted contribution `[c0, c_cos, c_sin]` on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTerm {
    pub route: Route,
    pub coeffs: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub interval: (f64, f64),
    terms: Vec<PointTerm>,
    anchor: Anchor,
    ride: f64,
}

/// Expands `|target - trig(theta)|` with the sign it has at `(cos, sin)`.
fn abs_term(trig: &crate::events::Trig, target: f64, cos: f64, sin: f64) -> [f64; 3] {
    let s = trig.side(target, cos, sin);
    [s * (target - trig.c0), -s * trig.cc, -s * trig.cs]
}

/// Unweighted walking and riding terms of `p`, with the absolute values
/// resolved as they are at `theta`.
fn route_terms(ep: &Endpoints, p: Point, ride: f64, theta: f64) -> ([f64; 3], [f64; 3]) {
    let (sin, cos) = theta.sin_cos();
    let add = |a: [f64; 3], b: [f64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let walk = add(
        abs_term(&ep.fx, p.x, cos, sin),
        abs_term(&ep.fy, p.y, cos, sin),
    );
    let mut via = add(
        abs_term(&ep.tx, p.x, cos, sin),
        abs_term(&ep.ty, p.y, cos, sin),
    );
    via[0] += ride;
    (walk, via)
}

fn point_term(ep: &Endpoints, p: &DemandPoint, ride: f64, theta: f64) -> PointTerm {
    let (sin, cos) = theta.sin_cos();
    let (walk, via) = route_terms(ep, p.pos(), ride, theta);
    let eval = |c: [f64; 3]| c[0] + c[1] * cos + c[2] * sin;
    let (dw, dh) = (eval(walk), eval(via));
    let (route, c) = if (dw - dh).abs() <= TIE_TOLERANCE {
        // On a sliver interval the sample can land on a switch; keep the
        // route that is cheaper just past it.
        let slope = |c: [f64; 3]| -c[1] * sin + c[2] * cos;
        if slope(via) < slope(walk) - TIE_TOLERANCE {
            (Route::Tied, via)
        } else {
            (Route::Tied, walk)
        }
    } else if dh < dw {
        (Route::Highway, via)
    } else {
        (Route::Direct, walk)
    };
    PointTerm {
        route,
        coeffs: [p.w * c[0], p.w * c[1], p.w * c[2]],
    }
}

fn sample_angle(interval: (f64, f64)) -> f64 {
    0.5 * (interval.0 + interval.1)
}

/// Builds the model valid on `interval` by classifying every client at its
/// midpoint. Coordinates are in the normalized frame.
pub fn build_cost_model(
    anchor: &Anchor,
    interval: (f64, f64),
    points: &[DemandPoint],
    speed: f64,
) -> CostModel {
    let ep = anchor.endpoints();
    let ride = 1.0 / speed;
    let at = sample_angle(interval);
    let terms: Vec<PointTerm> = points.iter().map(|p| point_term(&ep, p, ride, at)).collect();
    let mut model = CostModel {
        b1: 0.0,
        b2: 0.0,
        b3: 0.0,
        interval,
        terms,
        anchor: *anchor,
        ride,
    };
    model.resum();
    model
}

impl CostModel {
    fn resum(&mut self) {
        let (mut b1, mut b2, mut b3) = (0.0, 0.0, 0.0);
        for t in &self.terms {
            b1 += t.coeffs[0];
            b2 += t.coeffs[1];
            b3 += t.coeffs[2];
        }
        (self.b1, self.b2, self.b3) = (b1, b2, b3);
    }

    pub fn value(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.b1 + self.b2 * c + self.b3 * s
    }

    pub fn terms(&self) -> &[PointTerm] {
        &self.terms
    }

    /// Advances the model past `event` onto `[event.theta, next]`.
    pub fn apply_event(
        &mut self,
        event: &Event,
        next: f64,
        points: &[DemandPoint],
        speed: f64,
    ) -> Result<()> {
        if event.theta < self.interval.0 || next < event.theta {
            return Err(Error::EventOutOfOrder {
                event: event.theta,
                start: self.interval.0,
            });
        }
        let interval = (event.theta, next);
        match event.kind.point() {
            None => {
                *self = build_cost_model(&self.anchor, interval, points, speed);
            }
            Some(i) => {
                let ep = self.anchor.endpoints();
                let old = self.terms[i].coeffs;
                let fresh = point_term(&ep, &points[i], self.ride, sample_angle(interval));
                self.b1 += fresh.coeffs[0] - old[0];
                self.b2 += fresh.coeffs[1] - old[1];
                self.b3 += fresh.coeffs[2] - old[2];
                self.terms[i] = fresh;
                self.interval = interval;
            }
        }
        Ok(())
    }
}

/// Minimum of `b1 + b2 cos + b3 sin` over the closed interval `[a, b]`,
/// preferring the smallest angle on ties.
pub fn minimize_sinusoid(b1: f64, b2: f64, b3: f64, a: f64, b: f64) -> (f64, f64) {
    let g = |th: f64| b1 + b2 * th.cos() + b3 * th.sin();
    let mut cands = [a, b, f64::NAN, f64::NAN, f64::NAN];
    if b2 != 0.0 || b3 != 0.0 {
        // stationary where b3 cos = b2 sin
        let base = b3.atan2(b2);
        for (k, shift) in [-std::f64::consts::PI, 0.0, std::f64::consts::PI]
            .into_iter()
            .enumerate()
        {
            let th = base + shift;
            if th > a && th < b {
                cands[2 + k] = th;
            }
        }
    }
    let mut best = (a, g(a));
    for th in cands.into_iter().filter(|t| !t.is_nan()) {
        let val = g(th);
        if val < best.1 || (val == best.1 && th < best.0) {
            best = (th, val);
        }
    }
    best
}

/// Best placement found by one sweep, in normalized frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBest {
    pub theta: f64,
    pub value: f64,
    pub facility: Point,
    pub entry: Point,
}

/// Sweeps `theta` over `[0, pi/4]` for one anchor.
pub fn sweep_anchor(
    anchor: &Anchor,
    points: &[DemandPoint],
    proj: &SortedProjections,
    speed: f64,
) -> SweepBest {
    let events = anchor_events(anchor, points, proj, speed);
    sweep_events(anchor, &events, points, speed, |_, _| {})
}

/// Runs the sweep over precomputed events, reporting each interval's model
/// to `inspect` before it is minimized.
pub fn sweep_events(
    anchor: &Anchor,
    events: &[Event],
    points: &[DemandPoint],
    speed: f64,
    mut inspect: impl FnMut(&CostModel, Option<&Event>),
) -> SweepBest {
    let inner: Vec<&Event> = events
        .iter()
        .filter(|e| e.theta > 0.0 && e.theta < FRAC_PI_4)
        .collect();
    let first_end = inner.first().map_or(FRAC_PI_4, |e| e.theta);
    let mut model = build_cost_model(anchor, (0.0, first_end), points, speed);
    inspect(&model, None);
    let mut best = minimize_sinusoid(model.b1, model.b2, model.b3, 0.0, first_end);

    let mut k = 0;
    while k < inner.len() {
        let theta = inner[k].theta;
        let mut j = k;
        // near-coincident angles are one group; no sliver interval between
        while j < inner.len() && inner[j].theta - theta <= TIE_TOLERANCE {
            j += 1;
        }
        let next = inner.get(j).map_or(FRAC_PI_4, |e| e.theta);
        for e in &inner[k..j] {
            model
                .apply_event(e, next, points, speed)
                .expect("events are visited in angular order");
            inspect(&model, Some(e));
        }
        let cand = minimize_sinusoid(model.b1, model.b2, model.b3, theta, next);
        if cand.1 < best.1 {
            best = cand;
        }
        k = j;
    }
    let (facility, entry) = anchor.at(best.0);
    SweepBest {
        theta: best.0,
        value: best.1,
        facility,
        entry,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    Facility,
    Entry,
}

/// One of the eight orientations of a highway between a horizontal line
/// `e_h` and a vertical line `e_v` with a shallow (`|dy| <= |dx|`)
/// direction: which side of each line it lies on, and which endpoint is the
/// facility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeSubcase {
    pub flip_x: bool,
    pub flip_y: bool,
    pub facility_on_horizontal: bool,
}

impl EdgeSubcase {
    pub fn all() -> [EdgeSubcase; 8] {
        std::array::from_fn(|k| EdgeSubcase {
            flip_x: k & 1 != 0,
            flip_y: k & 2 != 0,
            facility_on_horizontal: k & 4 == 0,
        })
    }

    /// Index in `1..=8`.
    pub fn number(&self) -> usize {
        1 + (self.flip_x as usize) + 2 * (self.flip_y as usize) + 4 * (!self.facility_on_horizontal as usize)
    }
}

/// A candidate placement expressed in instance coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub facility: Point,
    pub entry: Point,
    /// Objective evaluated directly at `(facility, entry)`.
    pub cost: f64,
    /// Value predicted by the sweep model, in instance units.
    pub model_cost: f64,
}

fn placement(frame: &Frame, anchor: &Anchor) -> Placement {
    let best = sweep_anchor(anchor, &frame.points, &frame.proj, frame.speed);
    frame.placement(&best)
}

/// Best highway with one endpoint pinned at grid vertex `u`, for directions
/// that `octant` maps into the first octant.
pub fn solve_vertex_anchor(
    inst: &Instance,
    u: Point,
    role: VertexRole,
    octant: OctantTransform,
) -> Placement {
    let frame = Frame::new(inst, octant);
    let at = frame.to_frame(u);
    let anchor = match role {
        VertexRole::Facility => Anchor::VertexFacility(at),
        VertexRole::Entry => Anchor::VertexEntry(at),
    };
    placement(&frame, &anchor)
}

/// Best highway with one endpoint on the horizontal line `y = e_h` and the
/// other on the vertical line `x = e_v`.
pub fn solve_edge_pair(inst: &Instance, e_h: f64, e_v: f64, subcase: EdgeSubcase) -> Placement {
    let octant = OctantTransform {
        swap: false,
        neg_x: subcase.flip_x,
        neg_y: subcase.flip_y,
    };
    let frame = Frame::new(inst, octant);
    let o = frame.to_frame(Point::new(e_v, e_h));
    let anchor = if subcase.facility_on_horizontal {
        Anchor::EdgeFacility(o)
    } else {
        Anchor::EdgeEntry(o)
    };
    placement(&frame, &anchor)
}
