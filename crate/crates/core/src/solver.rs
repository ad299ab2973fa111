//! Global search over every candidate anchor.
//!
//! An optimal highway either has an endpoint on a grid vertex or has one
//! endpoint on a horizontal grid line and the other on a vertical one. Both
//! families are swept for every octant of the highway direction by mapping
//! the instance through the eight axis symmetries.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::events::{preprocess_projections, Anchor, SortedProjections};
use crate::geometry::{
    total_cost, weighted_1_median, AnchorKind, DemandPoint, Instance, Point, Solution,
    SolutionMeta, RESIDUAL_TOLERANCE,
};
use crate::sweep::{sweep_anchor, Placement, SweepBest};

/// Composition of an optional swap of the axes followed by optional
/// negations. Every map is exact on coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OctantTransform {
    pub swap: bool,
    pub neg_x: bool,
    pub neg_y: bool,
}

impl OctantTransform {
    pub const IDENTITY: OctantTransform = OctantTransform {
        swap: false,
        neg_x: false,
        neg_y: false,
    };

    pub fn index(&self) -> usize {
        4 * self.swap as usize + 2 * self.neg_x as usize + self.neg_y as usize
    }

    pub fn apply(&self, p: Point) -> Point {
        let (x, y) = if self.swap { (p.y, p.x) } else { (p.x, p.y) };
        Point::new(
            if self.neg_x { -x } else { x },
            if self.neg_y { -y } else { y },
        )
    }

    /// The transform taking `direction` into `0 <= y <= x`.
    pub fn normalizing(direction: Point) -> OctantTransform {
        octant_transforms()
            .into_iter()
            .find(|t| {
                let d = t.apply(direction);
                d.y >= 0.0 && d.x >= d.y
            })
            .unwrap_or(OctantTransform::IDENTITY)
    }

    pub fn invert(&self, p: Point) -> Point {
        let x = if self.neg_x { -p.x } else { p.x };
        let y = if self.neg_y { -p.y } else { p.y };
        if self.swap {
            Point::new(y, x)
        } else {
            Point::new(x, y)
        }
    }
}

pub fn octant_transforms() -> [OctantTransform; 8] {
    std::array::from_fn(|k| OctantTransform {
        swap: k & 4 != 0,
        neg_x: k & 2 != 0,
        neg_y: k & 1 != 0,
    })
}

/// The instance mapped through one octant transform and scaled to unit
/// highway length, with its projections and distinct grid coordinates.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub transform: OctantTransform,
    pub scale: f64,
    pub speed: f64,
    pub points: Vec<DemandPoint>,
    pub proj: SortedProjections,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    original: Instance,
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl Frame {
    pub fn new(inst: &Instance, transform: OctantTransform) -> Self {
        let scale = inst.length();
        let points: Vec<DemandPoint> = inst
            .points()
            .iter()
            .map(|p| {
                let q = transform.apply(p.pos());
                DemandPoint {
                    x: q.x / scale,
                    y: q.y / scale,
                    w: p.w,
                }
            })
            .collect();
        let proj = preprocess_projections(&points);
        Frame {
            transform,
            scale,
            speed: inst.speed(),
            xs: distinct(points.iter().map(|p| p.x).collect()),
            ys: distinct(points.iter().map(|p| p.y).collect()),
            points,
            proj,
            original: inst.clone(),
        }
    }

    pub fn to_frame(&self, p: Point) -> Point {
        self.transform.apply(p) * (1.0 / self.scale)
    }

    pub fn to_world(&self, p: Point) -> Point {
        self.transform.invert(p * self.scale)
    }

    /// Normalized objective evaluated directly.
    fn direct_value(&self, f: Point, t: Point) -> f64 {
        let ride = 1.0 / self.speed;
        self.points
            .iter()
            .map(|p| {
                let q = p.pos();
                let walk = (q.x - f.x).abs() + (q.y - f.y).abs();
                let via = (q.x - t.x).abs() + (q.y - t.y).abs() + ride;
                p.w * walk.min(via)
            })
            .sum()
    }

    pub fn placement(&self, best: &SweepBest) -> Placement {
        let facility = self.to_world(best.facility);
        let entry = self.to_world(best.entry);
        Placement {
            facility,
            entry,
            cost: total_cost(&self.original, facility, entry),
            model_cost: best.value * self.scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Spread anchors over the rayon thread pool.
    pub parallel: bool,
    /// Skip the line-pair family (the earlier vertex-only candidate set).
    pub vertex_only: bool,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    cost: f64,
    model: f64,
    facility: Point,
    entry: Point,
    octant: usize,
    kind: AnchorKind,
}

impl Candidate {
    fn order(&self, other: &Candidate) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.facility.x.total_cmp(&other.facility.x))
            .then(self.facility.y.total_cmp(&other.facility.y))
            .then(self.entry.x.total_cmp(&other.entry.x))
            .then(self.entry.y.total_cmp(&other.entry.y))
    }

    fn better(a: Candidate, b: Candidate) -> Candidate {
        if b.order(&a) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

fn anchors(frame: &Frame, vertex_only: bool) -> Vec<Anchor> {
    let mut out = Vec::with_capacity(frame.xs.len() * frame.ys.len() * 4);
    for &x in &frame.xs {
        for &y in &frame.ys {
            let o = Point::new(x, y);
            out.push(Anchor::VertexFacility(o));
            out.push(Anchor::VertexEntry(o));
            if !vertex_only {
                out.push(Anchor::EdgeFacility(o));
                out.push(Anchor::EdgeEntry(o));
            }
        }
    }
    out
}

fn kind_of(anchor: &Anchor) -> AnchorKind {
    match anchor {
        Anchor::VertexFacility(_) => AnchorKind::VertexFacility,
        Anchor::VertexEntry(_) => AnchorKind::VertexEntry,
        Anchor::EdgeFacility(_) => AnchorKind::EdgeFacility,
        Anchor::EdgeEntry(_) => AnchorKind::EdgeEntry,
    }
}

fn evaluate(frame: &Frame, anchor: &Anchor) -> Candidate {
    let best = sweep_anchor(anchor, &frame.points, &frame.proj, frame.speed);
    let direct = frame.direct_value(best.facility, best.entry);
    Candidate {
        cost: direct * frame.scale,
        model: best.value * frame.scale,
        facility: frame.to_world(best.facility),
        entry: frame.to_world(best.entry),
        octant: frame.transform.index(),
        kind: kind_of(anchor),
    }
}

fn median_solution(inst: &Instance) -> Result<Solution> {
    let (at, _) = weighted_1_median(inst.points())?;
    let mut sol = Solution::evaluate(inst, at, at);
    sol.meta = Some(SolutionMeta {
        octant: 0,
        anchor_kind: AnchorKind::Median,
    });
    Ok(sol)
}

/// Solves the instance over the full candidate set.
pub fn solve(inst: &Instance) -> Result<Solution> {
    solve_with(
        inst,
        SolveOptions {
            parallel: true,
            vertex_only: false,
        },
    )
}

/// Restricts the search to highways with an endpoint on a grid vertex.
pub fn solve_vertex_only(inst: &Instance) -> Result<Solution> {
    solve_with(
        inst,
        SolveOptions {
            parallel: true,
            vertex_only: true,
        },
    )
}

pub fn solve_with(inst: &Instance, opts: SolveOptions) -> Result<Solution> {
    if inst.points().is_empty() {
        return Err(Error::EmptyInstance);
    }
    if inst.length() == 0.0 {
        return median_solution(inst);
    }

    let mut best: Option<Candidate> = None;
    for transform in octant_transforms() {
        let frame = Frame::new(inst, transform);
        let work = anchors(&frame, opts.vertex_only);
        let local = if opts.parallel {
            work.par_iter()
                .map(|a| evaluate(&frame, a))
                .reduce_with(Candidate::better)
        } else {
            work.iter().map(|a| evaluate(&frame, a)).reduce(Candidate::better)
        };
        best = match (best, local) {
            (Some(a), Some(b)) => Some(Candidate::better(a, b)),
            (a, b) => a.or(b),
        };
    }
    let best = best.ok_or(Error::EmptyInstance)?;

    let mut sol = Solution::evaluate(inst, best.facility, best.entry);
    if (sol.cost - best.model).abs() > RESIDUAL_TOLERANCE * sol.cost.max(1.0) {
        return Err(Error::InconsistentCost {
            model: best.model,
            direct: sol.cost,
        });
    }
    sol.meta = Some(SolutionMeta {
        octant: best.octant,
        anchor_kind: best.kind,
    });
    Ok(sol)
}
