//! Instance and solution documents, and SVG rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{
    bisector_polyline, travel_time, Bisector, DemandPoint, Instance, Point, Route,
    Solution, SolutionMeta,
};
use crate::solver::OctantTransform;

/// The five-point instance with `length = speed = sqrt(180)`.
pub const COUNTEREXAMPLE_DOCUMENT: &str = r#"{
  "length": 13.416407864998739,
  "speed": 13.416407864998739,
  "points": [
    {"x": -4, "y": 0},
    {"x": -3, "y": -1},
    {"x": 12, "y": 8},
    {"x": 13, "y": 5},
    {"x": 13, "y": 7}
  ]
}
"#;

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDocument {
    x: f64,
    y: f64,
    #[serde(default = "default_weight")]
    w: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    length: f64,
    speed: f64,
    points: Vec<PointDocument>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(parse_error)?;
    let points = doc
        .points
        .iter()
        .map(|p| DemandPoint { x: p.x, y: p.y, w: p.w })
        .collect();
    Instance::new(points, doc.length, doc.speed)
}

pub fn emit_instance(inst: &Instance) -> String {
    let doc = InstanceDocument {
        length: inst.length(),
        speed: inst.speed(),
        points: inst
            .points()
            .iter()
            .map(|p| PointDocument { x: p.x, y: p.y, w: p.w })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance serializes")
}

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn pair(p: Point) -> Value {
    json!([round12(p.x), round12(p.y)])
}

/// The solution document as a JSON value.
pub fn solution_value(inst: &Instance, sol: &Solution) -> Value {
    let (l, v) = (inst.length(), inst.speed());
    let assignment: Vec<Value> = inst
        .points()
        .iter()
        .zip(&sol.assignment)
        .enumerate()
        .map(|(index, (p, route))| {
            json!({
                "index": index,
                "route": route,
                "time": round12(travel_time(p.pos(), sol.facility, sol.entry, l, v)),
            })
        })
        .collect();
    json!({
        "facility": pair(sol.facility),
        "entry": pair(sol.entry),
        "cost": round12(sol.cost),
        "assignment": assignment,
        "meta": sol.meta,
    })
}

pub fn emit_solution(inst: &Instance, sol: &Solution) -> String {
    serde_json::to_string_pretty(&solution_value(inst, sol)).expect("solution serializes")
}

#[derive(Debug, Deserialize)]
struct AssignmentDocument {
    #[allow(dead_code)]
    index: usize,
    route: Route,
}

#[derive(Debug, Deserialize)]
struct SolutionDocument {
    facility: [f64; 2],
    entry: [f64; 2],
    cost: f64,
    assignment: Vec<AssignmentDocument>,
    meta: Option<SolutionMeta>,
}

/// Reads a document written by [`emit_solution`]. Extra fields are ignored.
pub fn parse_solution(text: &str) -> Result<Solution> {
    let doc: SolutionDocument = serde_json::from_str(text).map_err(parse_error)?;
    Ok(Solution {
        facility: Point::new(doc.facility[0], doc.facility[1]),
        entry: Point::new(doc.entry[0], doc.entry[1]),
        cost: doc.cost,
        assignment: doc.assignment.into_iter().map(|a| a.route).collect(),
        meta: doc.meta,
    })
}

/// Vertices of the travel bisector of the solution's endpoints in instance
/// coordinates, with both rays cut at length `reach`.
///
/// Returns `None` for a zero-length highway. When the locus is a half-plane
/// its boundary line is returned.
pub fn bisector_vertices(inst: &Instance, sol: &Solution, reach: f64) -> Option<Vec<Point>> {
    let l = inst.length();
    if l == 0.0 {
        return None;
    }
    let tr = OctantTransform::normalizing(sol.entry - sol.facility);
    let f = tr.apply(sol.facility);
    let d = tr.apply(sol.entry) - f;
    let theta = d.y.atan2(d.x).clamp(0.0, std::f64::consts::FRAC_PI_4);
    let local = match bisector_polyline(f, theta, l, inst.speed()).ok()? {
        Bisector::Polyline(shape) => shape.clipped(reach).to_vec(),
        Bisector::HalfPlane { boundary_x } => vec![
            Point::new(boundary_x, f.y - reach),
            Point::new(boundary_x, f.y + reach),
        ],
    };
    Some(local.into_iter().map(|p| tr.invert(p)).collect())
}

struct Canvas {
    min: Point,
    scale: f64,
    height: f64,
    margin: f64,
}

impl Canvas {
    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.margin + (p.x - self.min.x) * self.scale,
            self.height - self.margin - (p.y - self.min.y) * self.scale,
        )
    }
}

/// Renders clients, highway, facility and travel bisector as SVG 1.1.
pub fn emit_svg(inst: &Instance, sol: &Solution) -> String {
    let mut all: Vec<Point> = inst.points().iter().map(|p| p.pos()).collect();
    all.push(sol.facility);
    all.push(sol.entry);
    let (mut min, mut max) = (all[0], all[0]);
    for p in &all {
        min = Point::new(min.x.min(p.x), min.y.min(p.y));
        max = Point::new(max.x.max(p.x), max.y.max(p.y));
    }
    let span = (max.x - min.x).max(max.y - min.y).max(1.0);
    let pad = 0.1 * span;
    min = Point::new(min.x - pad, min.y - pad);
    max = Point::new(max.x + pad, max.y + pad);

    let size = 600.0;
    let margin = 20.0;
    let scale = (size - 2.0 * margin) / (max.x - min.x).max(max.y - min.y);
    let width = 2.0 * margin + (max.x - min.x) * scale;
    let height = 2.0 * margin + (max.y - min.y) * scale;
    let canvas = Canvas { min, scale, height, margin };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // clip at a reach that leaves the canvas
    let reach = 2.0 * (max.x - min.x + max.y - min.y);
    if let Some(verts) = bisector_vertices(inst, sol, reach) {
        let pts: Vec<String> = verts
            .iter()
            .map(|&p| {
                let (x, y) = canvas.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="bisector" points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#,
            pts.join(" ")
        );
    }

    let max_w = inst.points().iter().map(|p| p.w).fold(0.0, f64::max);
    for p in inst.points() {
        let (x, y) = canvas.map(p.pos());
        let r = 6.0 * p.w / max_w;
        let _ = writeln!(
            out,
            r#"<circle class="demand" cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="black"/>"#
        );
    }

    let (fx, fy) = canvas.map(sol.facility);
    let (tx, ty) = canvas.map(sol.entry);
    let _ = writeln!(
        out,
        r#"<line class="highway" x1="{fx:.3}" y1="{fy:.3}" x2="{tx:.3}" y2="{ty:.3}" stroke="red" stroke-width="3"/>"#
    );
    let c = 7.0;
    let _ = writeln!(
        out,
        r#"<path class="facility" d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="red" stroke-width="2"/>"#,
        fx - c,
        fy - c,
        fx + c,
        fy + c,
        fx - c,
        fy + c,
        fx + c,
        fy - c
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{classify, l1_distance, RESIDUAL_TOLERANCE};
    use crate::oracle::counterexample_instance;
    use crate::solver::solve;

    #[test]
    fn weight_defaults_to_one() {
        let inst = parse_instance(r#"{"length":1,"speed":2,"points":[{"x":0,"y":0}]}"#).unwrap();
        assert_eq!(inst.points(), &[DemandPoint::unit(0.0, 0.0)]);
        assert_eq!(inst.length(), 1.0);
        assert_eq!(inst.speed(), 2.0);
    }

    #[test]
    fn validation_names_the_field() {
        let e = parse_instance(r#"{"length":1,"speed":0.5,"points":[{"x":0,"y":0}]}"#);
        assert!(matches!(e, Err(Error::Validation { ref field, .. }) if field == "speed"));
        let e = parse_instance(r#"{"length":-1,"speed":2,"points":[{"x":0,"y":0}]}"#);
        assert!(matches!(e, Err(Error::Validation { ref field, .. }) if field == "length"));
        let e = parse_instance(r#"{"length":1,"speed":2,"points":[{"x":0,"y":0},{"x":1,"y":0,"w":0}]}"#);
        assert!(matches!(e, Err(Error::Validation { ref field, .. }) if field == "points[1].w"));
        let e = parse_instance(r#"{"length":1,"speed":2,"points":[]}"#);
        assert_eq!(e, Err(Error::EmptyInstance));
    }

    #[test]
    fn parse_error_has_position() {
        let e = parse_instance("{\n\"length\": 1,\n\"speed\": ,\n}").unwrap_err();
        match e {
            Error::Parse(msg) => assert!(msg.starts_with("line 3"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance(r#"{"length":1e999,"speed":2,"points":[{"x":0,"y":0}]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_instance(r#"{"length":1,"speed":2,"points":[{"x":0,"y":0,"z":1}]}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn bundled_document_is_the_counterexample() {
        assert_eq!(parse_instance(COUNTEREXAMPLE_DOCUMENT).unwrap(), counterexample_instance());
    }

    #[test]
    fn instance_round_trip() {
        let inst = Instance::new(
            vec![DemandPoint::new(0.1, -2.5, 3.25).unwrap(), DemandPoint::unit(1e-7, 4.0)],
            2.5,
            1.75,
        )
        .unwrap();
        assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn round12_examples() {
        assert_eq!(round12(16.0), 16.0);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(-123456.7890123456), -123456.789012);
        assert_eq!(round12(0.0), 0.0);
    }

    #[test]
    fn solution_round_trip() {
        let inst = counterexample_instance();
        let sol = solve(&inst).unwrap();
        let text = emit_solution(&inst, &sol);
        let back = parse_solution(&text).unwrap();
        assert_eq!(back.cost, round12(sol.cost));
        assert_eq!(back.cost, 16.0);
        assert_eq!(back.facility, Point::new(round12(sol.facility.x), round12(sol.facility.y)));
        assert_eq!(back.entry, Point::new(round12(sol.entry.x), round12(sol.entry.y)));
        assert_eq!(back.assignment, sol.assignment);
        assert_eq!(back.meta, sol.meta);
        assert_eq!(emit_solution(&inst, &back), text);
    }

    #[test]
    fn assignment_matches_classify() {
        let inst = counterexample_instance();
        let sol = solve(&inst).unwrap();
        let doc = solution_value(&inst, &sol);
        for (i, p) in inst.points().iter().enumerate() {
            let route = classify(p.pos(), sol.facility, sol.entry, inst.length(), inst.speed());
            assert_eq!(doc["assignment"][i]["route"], json!(route));
        }
    }

    #[test]
    fn svg_single_point() {
        let inst = Instance::new(vec![DemandPoint::unit(0.0, 0.0)], 1.0, 2.0).unwrap();
        let sol = solve(&inst).unwrap();
        let svg = emit_svg(&inst, &sol);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(svg.matches(r#"class="facility""#).count(), 1);
        assert_eq!(svg, emit_svg(&inst, &sol));
    }

    #[test]
    fn counterexample_bisector_residual() {
        let inst = counterexample_instance();
        let sol = solve(&inst).unwrap();
        let verts = bisector_vertices(&inst, &sol, 30.0).unwrap();
        let ride = inst.length() / inst.speed();
        for z in verts {
            let r = l1_distance(z, sol.facility) - (l1_distance(z, sol.entry) + ride);
            assert!(r.abs() < RESIDUAL_TOLERANCE, "{z:?} {r}");
        }
        assert!(emit_svg(&inst, &sol).contains(r#"class="bisector""#));
    }
}
