#![allow(dead_code)]

use fhl_core::geometry::{DemandPoint, Instance, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn unit(raw: &[(f64, f64)]) -> Vec<DemandPoint> {
    raw.iter().map(|&(x, y)| DemandPoint::unit(x, y)).collect()
}

pub fn diameter(points: &[DemandPoint]) -> f64 {
    let mut d: f64 = 0.0;
    for a in points {
        for b in points {
            d = d.max(a.pos().euclidean_distance(b.pos()));
        }
    }
    d
}

/// Coordinates are integers half of the time so that shared grid lines and
/// exact ties show up.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<DemandPoint> {
    let integral = rng.gen_bool(0.5);
    (0..n)
        .map(|_| {
            let (x, y) = if integral {
                (rng.gen_range(-5..=5) as f64, rng.gen_range(-5..=5) as f64)
            } else {
                (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0))
            };
            DemandPoint::new(x, y, rng.gen_range(0.1..=10.0)).unwrap()
        })
        .collect()
}

/// `n` clients, weights in `[0.1, 10]`, length in `(0, 2 * diameter]` and
/// speed in `[1, 100]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let points = random_points(rng, n);
    let diam = diameter(&points).max(1.0);
    let length = 2.0 * diam * (1.0 - rng.gen::<f64>());
    let speed = if rng.gen_bool(0.1) { 1.0 } else { rng.gen_range(1.0..=100.0) };
    Instance::new(points, length, speed).unwrap()
}

pub fn counterexample(length: f64, speed: f64) -> Instance {
    Instance::new(
        unit(&[(-4.0, 0.0), (-3.0, -1.0), (12.0, 8.0), (13.0, 5.0), (13.0, 7.0)]),
        length,
        speed,
    )
    .unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}
