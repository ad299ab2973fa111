mod common;

use std::f64::consts::FRAC_PI_4;

use fhl_core::events::{anchor_events, preprocess_projections, Anchor};
use fhl_core::geometry::{travel_time, DemandPoint, Point};
use fhl_core::sweep::{build_cost_model, minimize_sinusoid, sweep_events, CostModel};
use proptest::prelude::*;

fn frame_point() -> impl Strategy<Value = DemandPoint> {
    prop_oneof![
        2 => (-3.0..3.0f64, -3.0..3.0f64, 0.1..10.0f64),
        1 => (-6i32..=6, -6i32..=6, 0.1..10.0f64)
            .prop_map(|(x, y, w)| (x as f64 * 0.5, y as f64 * 0.5, w)),
    ]
    .prop_map(|(x, y, w)| DemandPoint::new(x, y, w).unwrap())
}

fn case() -> impl Strategy<Value = (Anchor, Vec<DemandPoint>, f64)> {
    (
        prop::collection::vec(frame_point(), 1..10),
        0usize..4,
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        prop_oneof![Just(1.0), 1.0..100.0f64],
    )
        .prop_map(|(points, kind, ix, iy, speed)| {
            let o = Point::new(ix.get(&points).x, iy.get(&points).y);
            let anchor = match kind {
                0 => Anchor::VertexFacility(o),
                1 => Anchor::VertexEntry(o),
                2 => Anchor::EdgeFacility(o),
                _ => Anchor::EdgeEntry(o),
            };
            (anchor, points, speed)
        })
}

fn direct(anchor: &Anchor, points: &[DemandPoint], speed: f64, theta: f64) -> f64 {
    let (f, t) = anchor.at(theta);
    points
        .iter()
        .map(|p| p.w * travel_time(p.pos(), f, t, 1.0, speed))
        .sum()
}

/// The model after each group of (near-)equal-angle events has been applied.
fn settled_models(anchor: &Anchor, points: &[DemandPoint], speed: f64) -> Vec<CostModel> {
    let proj = preprocess_projections(points);
    let events = anchor_events(anchor, points, &proj, speed);
    let mut out: Vec<CostModel> = Vec::new();
    sweep_events(anchor, &events, points, speed, |m, _| {
        match out.last_mut() {
            Some(last) if m.interval.0 - last.interval.0 <= 1e-12 => *last = m.clone(),
            _ => out.push(m.clone()),
        }
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// On every interval the model reproduces the objective at both ends
    /// and in the middle.
    #[test]
    fn model_matches_direct_evaluation((anchor, points, speed) in case()) {
        let mut worst: f64 = 0.0;
        for m in settled_models(&anchor, &points, speed) {
            let (a, b) = m.interval;
            for th in [a, 0.5 * (a + b), b] {
                let d = direct(&anchor, &points, speed, th);
                worst = worst.max((m.value(th) - d).abs() / d.max(1.0));
            }
        }
        prop_assert!(worst < 1e-9, "relative error {}", worst);
    }

    /// Consecutive models agree at the event angle separating them.
    #[test]
    fn models_are_continuous((anchor, points, speed) in case()) {
        let models = settled_models(&anchor, &points, speed);
        let mut worst: f64 = 0.0;
        for w in models.windows(2) {
            let th = w[1].interval.0;
            let before = w[0].value(th);
            worst = worst.max((before - w[1].value(th)).abs() / before.abs().max(1.0));
        }
        prop_assert!(worst < 1e-9, "jump {}", worst);
    }

    /// Incremental updates agree with rebuilding the model from scratch.
    #[test]
    fn incremental_matches_rebuild((anchor, points, speed) in case()) {
        let mut worst: f64 = 0.0;
        for m in settled_models(&anchor, &points, speed) {
            let fresh = build_cost_model(&anchor, m.interval, &points, speed);
            let scale = m.b1.abs().max(1.0);
            for (x, y) in [(m.b1, fresh.b1), (m.b2, fresh.b2), (m.b3, fresh.b3)] {
                worst = worst.max((x - y).abs() / scale);
            }
        }
        prop_assert!(worst < 1e-9, "coefficient drift {}", worst);
    }

    /// The sweep minimum is attained and no sampled angle beats it.
    #[test]
    fn sweep_minimum_beats_dense_scan((anchor, points, speed) in case()) {
        let proj = preprocess_projections(&points);
        let events = anchor_events(&anchor, &points, &proj, speed);
        let best = sweep_events(&anchor, &events, &points, speed, |_, _| {});
        let at = direct(&anchor, &points, speed, best.theta);
        prop_assert!((at - best.value).abs() <= 1e-9 * at.max(1.0));
        for k in 0..=1000 {
            let th = FRAC_PI_4 * k as f64 / 1000.0;
            prop_assert!(best.value <= direct(&anchor, &points, speed, th) + 1e-9);
        }
    }

    #[test]
    fn sinusoid_minimum_is_global_on_the_interval(b1 in -10.0..10.0f64, b2 in -10.0..10.0f64, b3 in -10.0..10.0f64, a in 0.0..FRAC_PI_4, len in 0.0..FRAC_PI_4) {
        let b = (a + len).min(FRAC_PI_4);
        let (th, val) = minimize_sinusoid(b1, b2, b3, a, b);
        prop_assert!(th >= a && th <= b);
        let g = |t: f64| b1 + b2 * t.cos() + b3 * t.sin();
        prop_assert!((g(th) - val).abs() < 1e-12);
        for k in 0..=200 {
            let t = a + (b - a) * k as f64 / 200.0;
            prop_assert!(val <= g(t) + 1e-12);
        }
    }
}

#[test]
fn point_at_the_line_intersection() {
    // facility on the horizontal line walks cos(theta); riding costs sin(theta) + 1/v
    let pts = vec![DemandPoint::unit(0.0, 0.0)];
    let anchor = Anchor::EdgeFacility(Point::new(0.0, 0.0));
    let proj = preprocess_projections(&pts);
    for (speed, expect) in [(1.0, std::f64::consts::FRAC_1_SQRT_2), (4.0, 0.25)] {
        let events = anchor_events(&anchor, &pts, &proj, speed);
        let best = sweep_events(&anchor, &events, &pts, speed, |_, _| {});
        assert!((best.value - expect).abs() < 1e-12, "v={speed}: {}", best.value);
    }
    // over all octants an endpoint reaches the point
    let inst = fhl_core::Instance::new(pts, 1.0, 1.0).unwrap();
    assert!(fhl_core::solve(&inst).unwrap().cost.abs() < 1e-12);
}
