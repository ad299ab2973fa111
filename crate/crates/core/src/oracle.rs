//! Brute-force reference solver and the scripted counterexample check.
//!
//! The oracle shares no code with the sweep. For every grid vertex it spins
//! the highway around the vertex, and for every pair of perpendicular grid
//! lines it slides one endpoint along each line, sampling the full circle of
//! directions and evaluating the objective directly at each sample.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, TAU};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{
    total_cost, weighted_1_median, AnchorKind, DemandPoint, Instance, Point, Solution,
    SolutionMeta,
};
use crate::io::solution_value;
use crate::solver::{solve, solve_vertex_only, OctantTransform};

pub const DEFAULT_RESOLUTION: f64 = 1e-4;
pub const DEFAULT_REFINE_ITERS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub solution: Solution,
    /// Upper bound on how far the best candidate of the searched families
    /// can lie below `solution.cost`.
    pub certified_gap: f64,
    /// Number of objective evaluations.
    pub samples: u64,
}

impl OracleResult {
    pub fn to_json(&self, inst: &Instance) -> Value {
        let mut doc = solution_value(inst, &self.solution);
        doc["certified_gap"] = json!(self.certified_gap);
        doc["samples"] = json!(self.samples);
        doc
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Vertex { at: Point, facility_at_vertex: bool },
    Lines { x: f64, y: f64, facility_on_horizontal: bool },
}

impl Family {
    /// `(facility, entry)` for direction `(cos, sin)`.
    fn place(&self, cos: f64, sin: f64, length: f64) -> (Point, Point) {
        match *self {
            Family::Vertex { at, facility_at_vertex } => {
                let other = Point::new(at.x + length * cos, at.y + length * sin);
                if facility_at_vertex {
                    (at, other)
                } else {
                    (other, at)
                }
            }
            Family::Lines { x, y, facility_on_horizontal } => {
                let on_h = Point::new(x + length * cos, y);
                let on_v = Point::new(x, y + length * sin);
                if facility_on_horizontal {
                    (on_h, on_v)
                } else {
                    (on_v, on_h)
                }
            }
        }
    }

    fn kind(&self) -> AnchorKind {
        match *self {
            Family::Vertex { facility_at_vertex: true, .. } => AnchorKind::VertexFacility,
            Family::Vertex { .. } => AnchorKind::VertexEntry,
            Family::Lines { facility_on_horizontal: true, .. } => AnchorKind::EdgeFacility,
            Family::Lines { .. } => AnchorKind::EdgeEntry,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Best {
    cost: f64,
    facility: Point,
    entry: Point,
    kind: AnchorKind,
    samples: u64,
}

impl Best {
    fn order(&self, other: &Best) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.facility.x.total_cmp(&other.facility.x))
            .then(self.facility.y.total_cmp(&other.facility.y))
            .then(self.entry.x.total_cmp(&other.entry.x))
            .then(self.entry.y.total_cmp(&other.entry.y))
    }

    fn merge(a: Best, b: Best) -> Best {
        let samples = a.samples + b.samples;
        let mut out = if b.order(&a) == Ordering::Less { b } else { a };
        out.samples = samples;
        out
    }
}

fn distinct(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

fn families(points: &[DemandPoint]) -> Vec<Family> {
    let xs = distinct(points.iter().map(|p| p.x).collect());
    let ys = distinct(points.iter().map(|p| p.y).collect());
    let mut out = Vec::with_capacity(4 * xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let at = Point::new(x, y);
            for flag in [true, false] {
                out.push(Family::Vertex { at, facility_at_vertex: flag });
                out.push(Family::Lines { x, y, facility_on_horizontal: flag });
            }
        }
    }
    out
}

/// Sample directions: every multiple of `resolution` around the circle
/// together with the octant boundaries.
fn directions(resolution: f64) -> Vec<(f64, f64, f64)> {
    let steps = (TAU / resolution).ceil() as usize;
    let mut angles: Vec<f64> = (0..steps).map(|k| k as f64 * resolution).collect();
    angles.extend((0..8).map(|j| j as f64 * FRAC_PI_4));
    let angles = distinct(angles);
    angles.into_iter().map(|a| (a, a.cos(), a.sin())).collect()
}

fn search(
    inst: &Instance,
    family: Family,
    dirs: &[(f64, f64, f64)],
    resolution: f64,
    refine_iters: usize,
) -> Best {
    let length = inst.length();
    let eval = |psi: f64| {
        let (f, t) = family.place(psi.cos(), psi.sin(), length);
        (total_cost(inst, f, t), f, t)
    };

    let mut best_psi = 0.0;
    let mut best = (f64::INFINITY, Point::new(0.0, 0.0), Point::new(0.0, 0.0));
    for &(psi, c, s) in dirs {
        let (f, t) = family.place(c, s, length);
        let cost = total_cost(inst, f, t);
        if cost < best.0 {
            best = (cost, f, t);
            best_psi = psi;
        }
    }

    // golden-section search on the bracket around the best sample
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (best_psi - resolution, best_psi + resolution);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..refine_iters {
        if fc.0 < fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d);
        }
    }
    let mut refine_evals = 0;
    if refine_iters > 0 {
        refine_evals = refine_iters as u64 + 2;
        for cand in [fc, fd] {
            if cand.0 < best.0 {
                best = cand;
            }
        }
    }

    Best {
        cost: best.0,
        facility: best.1,
        entry: best.2,
        kind: family.kind(),
        samples: dirs.len() as u64 + refine_evals,
    }
}

/// Exhaustive angular search over both candidate families.
///
/// `resolution` is the spacing of the sampled directions. Each sweep is
/// refined by `refine_iters` golden-section steps around its best sample.
pub fn oracle_solve(inst: &Instance, resolution: f64, refine_iters: usize) -> Result<OracleResult> {
    if !(resolution.is_finite() && resolution > 0.0 && resolution < FRAC_PI_4) {
        return Err(Error::InvalidResolution(resolution));
    }
    if inst.points().is_empty() {
        return Err(Error::EmptyInstance);
    }
    if inst.length() == 0.0 {
        let (at, _) = weighted_1_median(inst.points())?;
        let mut solution = Solution::evaluate(inst, at, at);
        solution.meta = Some(SolutionMeta {
            octant: 0,
            anchor_kind: AnchorKind::Median,
        });
        return Ok(OracleResult {
            solution,
            certified_gap: 0.0,
            samples: 1,
        });
    }

    let dirs = directions(resolution);
    let best = families(inst.points())
        .into_par_iter()
        .map(|fam| search(inst, fam, &dirs, resolution, refine_iters))
        .reduce_with(Best::merge)
        .ok_or(Error::EmptyInstance)?;

    let mut solution = Solution::evaluate(inst, best.facility, best.entry);
    solution.meta = Some(SolutionMeta {
        octant: OctantTransform::normalizing(best.entry - best.facility).index(),
        anchor_kind: best.kind,
    });
    Ok(OracleResult {
        solution,
        certified_gap: 2.0 * inst.total_weight() * inst.length() * resolution,
        samples: best.samples,
    })
}

/// The five unit-weight points, with `length = speed = sqrt(180)`.
pub fn counterexample_instance() -> Instance {
    let raw = [(-4.0, 0.0), (-3.0, -1.0), (12.0, 8.0), (13.0, 5.0), (13.0, 7.0)];
    let points = raw.iter().map(|&(x, y)| DemandPoint::unit(x, y)).collect();
    let l = 180f64.sqrt();
    Instance::new(points, l, l).expect("built-in instance is valid")
}

/// The cost printed for the reference placement in the source material.
pub const PRINTED_REFERENCE_COST: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonCheck {
    pub epsilon: f64,
    pub closed_form: f64,
    pub direct: f64,
}

impl EpsilonCheck {
    pub fn error(&self) -> f64 {
        (self.closed_form - self.direct).abs()
    }
}

/// `2e - (sqrt(36 + 24e - e^2) - 6)`.
pub fn g_closed_form(eps: f64) -> f64 {
    2.0 * eps - ((36.0 + 24.0 * eps - eps * eps).sqrt() - 6.0)
}

/// Cost change when the entry slides to `(eps, 0)` and the facility stays
/// on `x = 12` at distance `sqrt(180)`.
pub fn g_direct(inst: &Instance, eps: f64) -> f64 {
    let base = total_cost(inst, Point::new(12.0, 6.0), Point::new(0.0, 0.0));
    let f = Point::new(12.0, (36.0 + 24.0 * eps - eps * eps).sqrt());
    let t = Point::new(eps, 0.0);
    total_cost(inst, f, t) - base
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub instance: Instance,
    pub full: Solution,
    pub vertex_only: Solution,
    pub reference_facility: Point,
    pub reference_entry: Point,
    pub reference_cost: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub named_checks: Vec<EpsilonCheck>,
    pub sampled_checks: Vec<EpsilonCheck>,
    pub oracle: OracleResult,
}

impl CounterexampleReport {
    pub fn gap(&self) -> f64 {
        self.vertex_only.cost - self.full.cost
    }

    pub fn printed_discrepancy(&self) -> bool {
        (self.reference_cost - PRINTED_REFERENCE_COST).abs() > 1e-9
    }

    pub fn max_abs_error(&self) -> f64 {
        self.named_checks
            .iter()
            .chain(&self.sampled_checks)
            .map(EpsilonCheck::error)
            .fold(0.0, f64::max)
    }

    /// `g > 0` at every checked nonzero perturbation.
    pub fn g_positive(&self) -> bool {
        self.named_checks
            .iter()
            .chain(&self.sampled_checks)
            .filter(|c| c.epsilon != 0.0)
            .all(|c| c.closed_form > 0.0 && c.direct > 0.0)
    }

    pub fn oracle_agrees(&self) -> bool {
        (self.full.cost - self.oracle.solution.cost).abs() <= self.oracle.certified_gap + 1e-6
    }

    pub fn passed(&self) -> bool {
        self.gap() > 0.01
            && (self.full.cost - self.reference_cost).abs() <= 1e-9
            && self.max_abs_error() < 1e-9
            && self.g_positive()
            && self.oracle_agrees()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
        out.push_str("five-point instance, length = speed = sqrt(180)\n");
        out.push_str(&format!(
            "full solve        cost {:.12}  f=({:.6}, {:.6}) t=({:.6}, {:.6})\n",
            self.full.cost,
            self.full.facility.x,
            self.full.facility.y,
            self.full.entry.x,
            self.full.entry.y
        ));
        out.push_str(&format!(
            "vertex-only solve cost {:.12}  f=({:.6}, {:.6}) t=({:.6}, {:.6})\n",
            self.vertex_only.cost,
            self.vertex_only.facility.x,
            self.vertex_only.facility.y,
            self.vertex_only.entry.x,
            self.vertex_only.entry.y
        ));
        out.push_str(&format!(
            "gap {:.12} (> 0.01: {})\n",
            self.gap(),
            verdict(self.gap() > 0.01)
        ));
        out.push_str(&format!(
            "cost at f=(12, 6) t=(0, 0): direct {:.12}, printed {}, {}\n",
            self.reference_cost,
            PRINTED_REFERENCE_COST,
            if self.printed_discrepancy() {
                "DISCREPANCY (printed value differs from direct evaluation)"
            } else {
                "agrees"
            }
        ));
        out.push_str(&format!(
            "full solve matches direct reference: {}\n",
            verdict((self.full.cost - self.reference_cost).abs() <= 1e-9)
        ));
        out.push_str(&format!(
            "delta1 = {:.12}, delta2 = {:.12}\n",
            self.delta1, self.delta2
        ));
        for c in &self.named_checks {
            out.push_str(&format!(
                "g({:+.9}) closed {:.15e} direct {:.15e} err {:.2e}\n",
                c.epsilon,
                c.closed_form,
                c.direct,
                c.error()
            ));
        }
        out.push_str(&format!(
            "{} sampled perturbations: max |closed - direct| = {:.3e} ({}), g > 0 off zero: {}\n",
            self.sampled_checks.len(),
            self.max_abs_error(),
            verdict(self.max_abs_error() < 1e-9),
            verdict(self.g_positive())
        ));
        out.push_str(&format!(
            "oracle cost {:.12}, certified gap {:.3e}, {} samples: {}\n",
            self.oracle.solution.cost,
            self.oracle.certified_gap,
            self.oracle.samples,
            verdict(self.oracle_agrees())
        ));
        out.push_str(&format!("overall: {}\n", verdict(self.passed())));
        out
    }

    pub fn to_json(&self) -> Value {
        let check = |c: &EpsilonCheck| {
            json!({
                "epsilon": c.epsilon,
                "closed_form": c.closed_form,
                "direct": c.direct,
                "error": c.error(),
            })
        };
        json!({
            "full": solution_value(&self.instance, &self.full),
            "vertex_only": solution_value(&self.instance, &self.vertex_only),
            "gap": self.gap(),
            "reference": {
                "facility": [self.reference_facility.x, self.reference_facility.y],
                "entry": [self.reference_entry.x, self.reference_entry.y],
                "direct_cost": self.reference_cost,
                "printed_cost": PRINTED_REFERENCE_COST,
                "discrepancy": self.printed_discrepancy(),
            },
            "delta1": self.delta1,
            "delta2": self.delta2,
            "named_checks": self.named_checks.iter().map(check).collect::<Vec<_>>(),
            "sampled_checks": self.sampled_checks.iter().map(check).collect::<Vec<_>>(),
            "max_abs_error": self.max_abs_error(),
            "g_positive": self.g_positive(),
            "oracle": self.oracle.to_json(&self.instance),
            "oracle_agrees": self.oracle_agrees(),
            "passed": self.passed(),
        })
    }
}

pub fn verify_counterexample() -> Result<CounterexampleReport> {
    let inst = counterexample_instance();
    let full = solve(&inst)?;
    let vertex_only = solve_vertex_only(&inst)?;
    let reference_facility = Point::new(12.0, 6.0);
    let reference_entry = Point::new(0.0, 0.0);
    let reference_cost = total_cost(&inst, reference_facility, reference_entry);

    let delta1 = 155f64.sqrt() - 12.0;
    let delta2 = 12.0 - 131f64.sqrt();
    let check = |epsilon: f64| EpsilonCheck {
        epsilon,
        closed_form: g_closed_form(epsilon),
        direct: g_direct(&inst, epsilon),
    };
    let named_checks = [-delta1 / 2.0, -delta1 / 10.0, 0.0, delta1 / 10.0, delta1 / 2.0]
        .into_iter()
        .map(check)
        .collect();
    let sampled_checks = (0..50)
        .map(|k| -delta1 + (delta1 + delta2) * k as f64 / 49.0)
        .map(check)
        .collect();

    let oracle = oracle_solve(&inst, DEFAULT_RESOLUTION, DEFAULT_REFINE_ITERS)?;
    Ok(CounterexampleReport {
        instance: inst,
        full,
        vertex_only,
        reference_facility,
        reference_entry,
        reference_cost,
        delta1,
        delta2,
        named_checks,
        sampled_checks,
        oracle,
    })
}
