//! Shared fixtures for the benchmarks.

use hardy_robin::geometry::{Ball, ConvexPolytope, Domain};
use hardy_robin::verify::{assemble, mesh_for, AssemblyOptions, DiscreteForm};
use hardy_robin::weights::{convex_weight, RobinCoefficient};

pub fn unit_square() -> Domain {
    ConvexPolytope::unit_cube(2).expect("unit square").into()
}

pub fn unit_disk() -> Domain {
    Ball::centered(2, 1.0).expect("unit disk").into()
}

/// Convex-weight form on `domain` with `σ = 1` at mesh size `h`.
pub fn convex_form(domain: &Domain, h: f64) -> DiscreteForm {
    let sigma = RobinCoefficient::Constant(1.0);
    let w = convex_weight(domain, &sigma).expect("convex weight");
    let mesh = mesh_for(domain, h).expect("mesh");
    assemble(&mesh, &sigma, Some(&w), &AssemblyOptions::default()).expect("assembly")
}
