//! Angular events for one anchor of the sweep.
//!
//! Every anchor fixes how the two highway endpoints move as the direction
//! angle `theta` runs over `[0, pi/4]`; coordinates are normalized so the
//! highway has unit length. Between consecutive events each client keeps its
//! route and the sign of every absolute-value term in its travel time, so the
//! objective is a single sinusoid there.
//!
//! Events come from three sources: a client hitting the travel bisector, a
//! moving endpoint crossing the vertical or horizontal line through a client,
//! and the phi angle where the bisector's far ray turns from vertical to
//! horizontal. The per-kind sequences are monotone along the presorted
//! projections, so the merged order costs `O(n)` per anchor.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::geometry::{phi_angle, DemandPoint, Point};

const ROOT_SLACK: f64 = 1e-12;

/// `c0 + cc * cos(theta) + cs * sin(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub c0: f64,
    pub cc: f64,
    pub cs: f64,
}

impl Trig {
    const fn constant(c0: f64) -> Self {
        Trig { c0, cc: 0.0, cs: 0.0 }
    }

    pub fn at(&self, cos: f64, sin: f64) -> f64 {
        self.c0 + self.cc * cos + self.cs * sin
    }

    pub fn is_constant(&self) -> bool {
        self.cc == 0.0 && self.cs == 0.0
    }

    /// Sign of `target - value` at the angle, or just past it when the
    /// difference vanishes there. Zero when the two agree at every angle.
    pub fn side(&self, target: f64, cos: f64, sin: f64) -> f64 {
        if self.is_constant() && target == self.c0 {
            return 0.0;
        }
        let v = target - self.at(cos, sin);
        if v.abs() > ROOT_SLACK * (1.0 + target.abs()) {
            return v.signum();
        }
        // derivative of `target - value` in the angle
        let d = self.cc * sin - self.cs * cos;
        if d < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// The angle in `[0, pi/4]` where the value equals `target`. Only the
    /// forms `c0 +- cos` and `c0 +- sin` occur for endpoint coordinates.
    fn crossing(&self, target: f64) -> Option<f64> {
        if self.cs == 0.0 && self.cc != 0.0 {
            let r = (target - self.c0) / self.cc;
            (FRAC_1_SQRT_2..=1.0).contains(&r).then(|| r.acos())
        } else if self.cc == 0.0 && self.cs != 0.0 {
            let r = (target - self.c0) / self.cs;
            (0.0..=FRAC_1_SQRT_2).contains(&r).then(|| r.asin())
        } else {
            None
        }
    }
}

/// Endpoint coordinates as functions of the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoints {
    pub fx: Trig,
    pub fy: Trig,
    pub tx: Trig,
    pub ty: Trig,
}

impl Endpoints {
    pub fn at(&self, theta: f64) -> (Point, Point) {
        let (s, c) = theta.sin_cos();
        (
            Point::new(self.fx.at(c, s), self.fy.at(c, s)),
            Point::new(self.tx.at(c, s), self.ty.at(c, s)),
        )
    }
}

/// How the highway hangs off a grid vertex or a pair of grid lines. In every
/// variant `t - f = (cos theta, sin theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// `f = u`, `t = u + (cos, sin)`.
    VertexFacility(Point),
    /// `t = u`, `f = u - (cos, sin)`.
    VertexEntry(Point),
    /// `f = (o.x - cos, o.y)` on the horizontal line, `t = (o.x, o.y + sin)`
    /// on the vertical line.
    EdgeFacility(Point),
    /// `t = (o.x + cos, o.y)` on the horizontal line, `f = (o.x, o.y - sin)`
    /// on the vertical line.
    EdgeEntry(Point),
}

impl Anchor {
    pub fn origin(&self) -> Point {
        match *self {
            Anchor::VertexFacility(u)
            | Anchor::VertexEntry(u)
            | Anchor::EdgeFacility(u)
            | Anchor::EdgeEntry(u) => u,
        }
    }

    pub fn endpoints(&self) -> Endpoints {
        let o = self.origin();
        let c = |c0, cc| Trig { c0, cc, cs: 0.0 };
        let s = |c0, cs| Trig { c0, cc: 0.0, cs };
        match self {
            Anchor::VertexFacility(_) => Endpoints {
                fx: Trig::constant(o.x),
                fy: Trig::constant(o.y),
                tx: c(o.x, 1.0),
                ty: s(o.y, 1.0),
            },
            Anchor::VertexEntry(_) => Endpoints {
                fx: c(o.x, -1.0),
                fy: s(o.y, -1.0),
                tx: Trig::constant(o.x),
                ty: Trig::constant(o.y),
            },
            Anchor::EdgeFacility(_) => Endpoints {
                fx: c(o.x, -1.0),
                fy: Trig::constant(o.y),
                tx: Trig::constant(o.x),
                ty: s(o.y, 1.0),
            },
            Anchor::EdgeEntry(_) => Endpoints {
                fx: Trig::constant(o.x),
                fy: s(o.y, -1.0),
                tx: c(o.x, 1.0),
                ty: Trig::constant(o.y),
            },
        }
    }

    /// `(facility, entry)` at angle `theta`.
    pub fn at(&self, theta: f64) -> (Point, Point) {
        self.endpoints().at(theta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedProjections {
    pub by_x: Vec<usize>,
    pub by_y: Vec<usize>,
    pub by_xy: Vec<usize>,
}

pub fn preprocess_projections(points: &[DemandPoint]) -> SortedProjections {
    let idx: Vec<usize> = (0..points.len()).collect();
    let sorted = |key: &dyn Fn(&DemandPoint) -> (f64, f64)| {
        let mut v = idx.clone();
        v.sort_by(|&a, &b| {
            let (ka, kb) = (key(&points[a]), key(&points[b]));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(a.cmp(&b))
        });
        v
    };
    SortedProjections {
        by_x: sorted(&|p| (p.x, p.y)),
        by_y: sorted(&|p| (p.y, p.x)),
        by_xy: sorted(&|p| (p.x + p.y, p.x)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Client on the slope -1 segment of the bisector.
    BisectorAlpha(usize),
    /// Client on the upward vertical ray.
    BisectorBeta(usize),
    /// Client on the far ray (vertical below phi, horizontal above).
    BisectorGamma(usize),
    /// A moving endpoint crosses the vertical line through the client.
    GridVertical(usize),
    /// A moving endpoint crosses the horizontal line through the client.
    GridHorizontal(usize),
    Phi,
}

impl EventKind {
    fn rank(&self) -> (u8, usize) {
        match *self {
            EventKind::BisectorAlpha(i) => (0, i),
            EventKind::BisectorBeta(i) => (1, i),
            EventKind::BisectorGamma(i) => (2, i),
            EventKind::GridVertical(i) => (3, i),
            EventKind::GridHorizontal(i) => (4, i),
            EventKind::Phi => (5, 0),
        }
    }

    pub fn point(&self) -> Option<usize> {
        match *self {
            EventKind::BisectorAlpha(i)
            | EventKind::BisectorBeta(i)
            | EventKind::BisectorGamma(i)
            | EventKind::GridVertical(i)
            | EventKind::GridHorizontal(i) => Some(i),
            EventKind::Phi => None,
        }
    }

    pub fn is_bisector(&self) -> bool {
        matches!(
            self,
            EventKind::BisectorAlpha(_) | EventKind::BisectorBeta(_) | EventKind::BisectorGamma(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub theta: f64,
    pub kind: EventKind,
}

impl Event {
    /// Total order: angle, then kind, then client index.
    pub fn order(&self, other: &Event) -> Ordering {
        self.theta
            .total_cmp(&other.theta)
            .then_with(|| self.kind.rank().cmp(&other.kind.rank()))
    }
}

/// Piece of the bisector a client sits on when it switches route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Piece {
    Alpha,
    Beta,
    GammaLow,
    GammaHigh,
}

/// Events generated by a single client, at most a handful.
#[derive(Debug, Clone, Default)]
pub(crate) struct PointEvents {
    pub bisector: Vec<(f64, Piece)>,
    /// Crossings of `fx`, `fy`, `tx`, `ty` respectively.
    pub grid: [Option<f64>; 4],
}

/// Roots of `k0 + kc cos + ks sin` within `[a, b]`.
fn sinusoid_roots(k0: f64, kc: f64, ks: f64, a: f64, b: f64, out: &mut Vec<f64>) {
    let r = kc.hypot(ks);
    if r == 0.0 {
        return;
    }
    let ratio = -k0 / r;
    if ratio.abs() > 1.0 + ROOT_SLACK {
        return;
    }
    let delta = ks.atan2(kc);
    let spread = ratio.clamp(-1.0, 1.0).acos();
    let tau = std::f64::consts::TAU;
    for base in [delta + spread, delta - spread] {
        for shift in [-tau, 0.0, tau] {
            let th = base + shift;
            if th >= a - ROOT_SLACK && th <= b + ROOT_SLACK {
                out.push(th.clamp(a, b));
            }
        }
    }
}

/// Route switches and grid crossings of one client for the given anchor.
///
/// `ride` is the normalized riding time `1 / speed`.
pub(crate) fn point_events(ep: &Endpoints, p: Point, ride: f64) -> PointEvents {
    let mut ev = PointEvents::default();
    let coords = [
        (ep.fx, p.x),
        (ep.fy, p.y),
        (ep.tx, p.x),
        (ep.ty, p.y),
    ];
    let mut cuts = [0.0; 6];
    let mut n_cuts = 0;
    cuts[n_cuts] = 0.0;
    n_cuts += 1;
    for (slot, (trig, target)) in coords.iter().enumerate() {
        if let Some(th) = trig.crossing(*target) {
            ev.grid[slot] = Some(th);
            cuts[n_cuts] = th;
            n_cuts += 1;
        }
    }
    cuts[n_cuts] = FRAC_PI_4;
    n_cuts += 1;
    let cuts = &mut cuts[..n_cuts];
    cuts.sort_by(f64::total_cmp);

    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (sn, cs) = (0.5 * (a + b)).sin_cos();
        // a difference that vanishes for every angle matches either sign
        let s: [f64; 4] = std::array::from_fn(|k| coords[k].0.side(coords[k].1, cs, sn));
        // walk minus ride, expanded with the fixed signs
        let mut k = [-ride, 0.0, 0.0];
        for (slot, (trig, target)) in coords.iter().enumerate() {
            let dir = if slot < 2 { s[slot] } else { -s[slot] };
            k[0] += dir * (target - trig.c0);
            k[1] -= dir * trig.cc;
            k[2] -= dir * trig.cs;
        }
        let pos = |k: usize| s[k] >= 0.0;
        let neg = |k: usize| s[k] <= 0.0;
        let piece = if pos(0) && neg(2) && pos(1) && neg(3) {
            Some(Piece::Alpha)
        } else if pos(0) && neg(2) && pos(3) {
            Some(Piece::Beta)
        } else if pos(0) && neg(2) && neg(1) {
            Some(Piece::GammaLow)
        } else if pos(2) && pos(1) && neg(3) {
            Some(Piece::GammaHigh)
        } else {
            // Remaining regions either never switch or switch all at once at
            // the phi angle, which the sweep handles with a full rebuild.
            None
        };
        let Some(piece) = piece else { continue };
        roots.clear();
        sinusoid_roots(k[0], k[1], k[2], a, b, &mut roots);
        for &th in &roots {
            if ev
                .bisector
                .iter()
                .all(|&(seen, _)| (seen - th).abs() > ROOT_SLACK)
            {
                ev.bisector.push((th, piece));
            }
        }
    }
    ev
}

fn orient(list: &mut [Event]) {
    if let (Some(first), Some(last)) = (list.first(), list.last()) {
        if first.theta > last.theta {
            list.reverse();
        }
    }
}

fn merge(a: Vec<Event>, b: Vec<Event>) -> Vec<Event> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].order(&b[j]) != Ordering::Greater {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Insertion pass; linear on input that is already sorted up to rounding
/// noise among (near-)coincident angles.
fn settle(events: &mut [Event]) {
    for i in 1..events.len() {
        let mut j = i;
        while j > 0 && events[j - 1].order(&events[j]) == Ordering::Greater {
            events.swap(j - 1, j);
            j -= 1;
        }
    }
}

fn per_point(anchor: &Anchor, points: &[DemandPoint], speed: f64) -> Vec<PointEvents> {
    let ep = anchor.endpoints();
    let ride = 1.0 / speed;
    points
        .iter()
        .map(|p| point_events(&ep, p.pos(), ride))
        .collect()
}

fn sequences(per: &[PointEvents], proj: &SortedProjections) -> [Vec<Event>; 4] {
    let pick = |order: &[usize], piece: Piece, make: fn(usize) -> EventKind| {
        order
            .iter()
            .flat_map(|&i| {
                per[i]
                    .bisector
                    .iter()
                    .filter(move |(_, pc)| *pc == piece)
                    .map(move |&(theta, _)| Event {
                        theta,
                        kind: make(i),
                    })
            })
            .collect::<Vec<Event>>()
    };
    [
        pick(&proj.by_xy, Piece::Alpha, EventKind::BisectorAlpha),
        pick(&proj.by_x, Piece::Beta, EventKind::BisectorBeta),
        pick(&proj.by_x, Piece::GammaLow, EventKind::BisectorGamma),
        pick(&proj.by_y, Piece::GammaHigh, EventKind::BisectorGamma),
    ]
}

/// Bisector events grouped by piece, each listed in projection order:
/// slope -1 segment by `x + y`, upward ray by `x`, far ray by `x` before
/// the phi angle and by `y` after it. Each list is monotone in angle.
pub fn bisector_sequences(
    anchor: &Anchor,
    points: &[DemandPoint],
    proj: &SortedProjections,
    speed: f64,
) -> [Vec<Event>; 4] {
    sequences(&per_point(anchor, points, speed), proj)
}

/// Angularly sorted events of `anchor` in `O(n)` given the projections.
///
/// Points must be expressed in the normalized frame (unit highway length).
pub fn anchor_events(
    anchor: &Anchor,
    points: &[DemandPoint],
    proj: &SortedProjections,
    speed: f64,
) -> Vec<Event> {
    let per = per_point(anchor, points, speed);
    let ep = anchor.endpoints();

    let [mut alpha, mut beta, mut low, mut high] = sequences(&per, proj);
    for list in [&mut alpha, &mut beta, &mut low, &mut high] {
        orient(list);
    }
    // every low event precedes phi and every high event follows it
    let mut gamma = low;
    gamma.extend(high);

    let mut merged = merge(merge(alpha, beta), gamma);
    let slots = [
        (ep.fx, &proj.by_x, 0usize),
        (ep.fy, &proj.by_y, 1),
        (ep.tx, &proj.by_x, 2),
        (ep.ty, &proj.by_y, 3),
    ];
    for (trig, order, slot) in slots {
        if trig.is_constant() {
            continue;
        }
        let make = if slot % 2 == 0 {
            EventKind::GridVertical
        } else {
            EventKind::GridHorizontal
        };
        let mut list: Vec<Event> = order
            .iter()
            .filter_map(|&i| {
                per[i].grid[slot].map(|theta| Event {
                    theta,
                    kind: make(i),
                })
            })
            .collect();
        orient(&mut list);
        merged = merge(merged, list);
    }
    let phi = phi_angle(speed).expect("speed validated by the caller");
    merged = merge(
        merged,
        vec![Event {
            theta: phi,
            kind: EventKind::Phi,
        }],
    );
    settle(&mut merged);
    merged
}

/// Events for a grid vertex `u` carrying the facility.
pub fn vertex_events(
    u: Point,
    points: &[DemandPoint],
    proj: &SortedProjections,
    speed: f64,
) -> Vec<Event> {
    anchor_events(&Anchor::VertexFacility(u), points, proj, speed)
}

/// Events for the line pair meeting at `o`, facility on the horizontal line.
pub fn edge_events(
    o: Point,
    points: &[DemandPoint],
    proj: &SortedProjections,
    speed: f64,
) -> Vec<Event> {
    anchor_events(&Anchor::EdgeFacility(o), points, proj, speed)
}

/// The same event multiset, ordered by a plain comparison sort.
pub fn sorted_events_reference(anchor: &Anchor, points: &[DemandPoint], speed: f64) -> Vec<Event> {
    let per = per_point(anchor, points, speed);
    let mut all = Vec::new();
    for (i, pe) in per.iter().enumerate() {
        for &(theta, piece) in &pe.bisector {
            let kind = match piece {
                Piece::Alpha => EventKind::BisectorAlpha(i),
                Piece::Beta => EventKind::BisectorBeta(i),
                Piece::GammaLow | Piece::GammaHigh => EventKind::BisectorGamma(i),
            };
            all.push(Event { theta, kind });
        }
        for (slot, th) in pe.grid.iter().enumerate() {
            if let Some(theta) = *th {
                let kind = if slot % 2 == 0 {
                    EventKind::GridVertical(i)
                } else {
                    EventKind::GridHorizontal(i)
                };
                all.push(Event { theta, kind });
            }
        }
    }
    all.push(Event {
        theta: phi_angle(speed).expect("speed validated by the caller"),
        kind: EventKind::Phi,
    });
    all.sort_by(Event::order);
    all
}
