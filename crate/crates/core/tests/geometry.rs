use approx::assert_relative_eq;
use hardy_robin::geometry::{dist, Ball, ConvexPolytope, Direction, Domain};
use proptest::prelude::*;

const TRIANGLE: [[f64; 2]; 3] = [[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]];

fn triangle() -> Domain {
    ConvexPolytope::from_vertices_2d(&TRIANGLE).unwrap().into()
}

fn segment_distance(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let t = (((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (x[0] - a[0] - t * dx).hypot(x[1] - a[1] - t * dy)
}

/// Barycentric combination of the triangle vertices, strictly inside.
fn in_triangle() -> impl Strategy<Value = [f64; 2]> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(a, b, c)| {
        let s = a + b + c;
        let [p, q, r] = TRIANGLE;
        [
            (a * p[0] + b * q[0] + c * r[0]) / s,
            (a * p[1] + b * q[1] + c * r[1]) / s,
        ]
    })
}

fn in_disk() -> impl Strategy<Value = [f64; 2]> {
    (0.0f64..0.99, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| [r * t.cos(), r * t.sin()])
}

fn angle() -> impl Strategy<Value = Direction> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| Direction::unit(vec![t.cos(), t.sin()]).unwrap())
}

#[test]
fn triangle_inradius_from_area() {
    let [p, q, r] = TRIANGLE;
    let area = 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])).abs();
    let perimeter = dist(&p, &q) + dist(&q, &r) + dist(&r, &p);
    assert_relative_eq!(triangle().inradius().unwrap(), 2.0 * area / perimeter, epsilon = 1e-12);
}

#[test]
fn disk_center() {
    let d: Domain = Ball::new(vec![1.0, -2.0], 3.0).unwrap().into();
    let p = d.distance_and_projection(&[1.0, -2.0]).unwrap();
    assert_eq!(p.distance, 3.0);
    assert!(!p.unique);
}

#[test]
fn square_diagonal_is_singular() {
    let d: Domain = ConvexPolytope::unit_cube(2).unwrap().into();
    let p = d.distance_and_projection(&[0.3, 0.3]).unwrap();
    assert!(!p.unique);
    assert_eq!(p.all_minimizers.len(), 2);
    assert_relative_eq!(p.distance, 0.3, epsilon = 1e-15);
}

#[test]
fn outside_point_is_rejected() {
    assert!(triangle().distance(&[3.0, 3.0]).is_err());
    assert!(triangle().distance(&[0.1]).is_err());
}

proptest! {
    #[test]
    fn triangle_distance_matches_brute_force(x in in_triangle()) {
        let [p, q, r] = TRIANGLE;
        let want = segment_distance(x, p, q).min(segment_distance(x, q, r)).min(segment_distance(x, r, p));
        prop_assert!((triangle().distance(&x).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn distance_is_one_lipschitz(x in in_triangle(), y in in_triangle()) {
        let d = triangle();
        let lhs = (d.distance(&x).unwrap() - d.distance(&y).unwrap()).abs();
        prop_assert!(lhs <= dist(&x, &y) + 1e-12);
    }

    #[test]
    fn projection_is_consistent(x in in_triangle()) {
        let p = triangle().distance_and_projection(&x).unwrap();
        prop_assert!((dist(&x, p.nearest.coords()) - p.distance).abs() < 1e-12);
        for m in &p.all_minimizers {
            prop_assert!((dist(&x, m.point.coords()) - p.distance).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_below_directional_distance(x in in_triangle(), e in angle()) {
        let d = triangle();
        let exit = d.directional_distance(&x, &e).unwrap();
        prop_assert!(d.distance(&x).unwrap() <= exit.distance + 1e-12);
    }

    #[test]
    fn disk_directional_distance_closed_form(x in in_disk(), e in angle()) {
        let d: Domain = Ball::centered(2, 1.0).unwrap().into();
        let exit = d.directional_distance(&x, &e).unwrap();
        let b = x[0] * e[0] + x[1] * e[1];
        let c = x[0] * x[0] + x[1] * x[1] - 1.0;
        let root = (b * b - c).sqrt();
        prop_assert!((exit.distance - (root - b.abs())).abs() < 1e-12);
    }

    #[test]
    fn translation_and_dilation(x in in_triangle(), vx in -5.0f64..5.0, vy in -5.0f64..5.0, l in 0.1f64..10.0) {
        let d = triangle();
        let base = d.distance(&x).unwrap();
        let moved = d.translated(&[vx, vy]).unwrap().distance(&[x[0] + vx, x[1] + vy]).unwrap();
        let scaled = d.dilated(l).unwrap().distance(&[l * x[0], l * x[1]]).unwrap();
        prop_assert!((moved - base).abs() < 1e-10);
        prop_assert!((scaled - l * base).abs() < 1e-10);
    }
}
