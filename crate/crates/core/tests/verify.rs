use std::f64::consts::PI;

use approx::assert_relative_eq;
use hardy_robin::geometry::{Ball, ConvexPolytope, Domain};
use hardy_robin::numerics::{smallest_eigenpair, SparseSymmetric};
use hardy_robin::verify::{
    assemble, certify, mesh_for, trace_excess, AssemblyOptions, CertifyOptions, DiscreteForm, GridMesh, LineMesh,
    Mesh, Status, VerificationReport,
};
use hardy_robin::weights::{convex_weight, cor_general_bound, lemma1_weight, HardyWeight, RobinCoefficient};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn square() -> Domain {
    ConvexPolytope::unit_cube(2).unwrap().into()
}

fn disk() -> Domain {
    Ball::centered(2, 1.0).unwrap().into()
}

fn plain(mesh: &Mesh, sigma: f64) -> DiscreteForm {
    assemble(mesh, &RobinCoefficient::Constant(sigma), None, &AssemblyOptions::default()).unwrap()
}

fn dense(m: &SparseSymmetric) -> DMatrix<f64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

/// Smallest eigenvalue of `(A, B)` through `L⁻¹AL⁻ᵀ` with `B = LLᵀ`.
fn dense_smallest(form: &DiscreteForm) -> f64 {
    let a = dense(&form.operator());
    let l = dense(&form.mass).cholesky().unwrap().l();
    let li = l.try_inverse().unwrap();
    let c = &li * a * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    SymmetricEigen::new(c).eigenvalues.min()
}

/// Area of `B(a, r) \ B(0, 1)` for `|a| = 1`.
fn outside_area(r: f64) -> f64 {
    let lens = if r >= 2.0 {
        PI
    } else {
        let sq = ((-1.0 + r + 1.0) * (1.0 + r - 1.0) * (1.0 - r + 1.0) * (1.0 + r + 1.0)).sqrt();
        r * r * (r / 2.0).acos() + (1.0 - r * r / 2.0).acos() - 0.5 * sq
    };
    PI * r * r - lens
}

#[test]
fn constant_on_square_sees_the_perimeter() {
    let mesh = mesh_for(&square(), 1.0 / 16.0).unwrap();
    let form = plain(&mesh, 3.0);
    let one = vec![1.0; form.dofs()];
    assert_relative_eq!(form.form_value(&one), 12.0, epsilon = 1e-12);
    assert_relative_eq!(form.mass.quadratic(&one), 1.0, epsilon = 1e-12);
    for r in form.stiffness.mul_vec(&one) {
        assert!(r.abs() < 1e-12);
    }
}

#[test]
fn constant_on_disk_sees_area_and_perimeter() {
    let mesh = mesh_for(&disk(), 1.0 / 32.0).unwrap();
    let form = plain(&mesh, 1.0);
    let one = vec![1.0; form.dofs()];
    assert_relative_eq!(form.robin.quadratic(&one), 2.0 * PI, max_relative = 1e-6);
    assert_relative_eq!(form.mass.quadratic(&one), PI, max_relative = 1e-4);
    assert!(form.stiffness.quadratic(&one).abs() < 1e-10);
}

#[test]
fn linear_function_on_interval() {
    let mesh = Mesh::Line(LineMesh::new(0.0, 1.0, 50).unwrap());
    let sigma = RobinCoefficient::PerFacet(vec![5.0, 0.0]);
    let form = assemble(&mesh, &sigma, None, &AssemblyOptions::default()).unwrap();
    let u = form.interpolate(|x| x[0]);
    assert_relative_eq!(form.form_value(&u), 1.0, epsilon = 1e-12);
    assert_relative_eq!(form.mass.quadratic(&u), 1.0 / 3.0, epsilon = 1e-12);
}

#[test]
fn dirichlet_parts_are_eliminated() {
    let mesh = Mesh::Line(LineMesh::new(0.0, 1.0, 10).unwrap());
    let sigma = RobinCoefficient::PerFacet(vec![f64::INFINITY, 0.0]);
    let form = assemble(&mesh, &sigma, None, &AssemblyOptions::default()).unwrap();
    assert_eq!((form.dofs(), form.eliminated), (10, 1));
    assert!(form.coords.iter().all(|x| x[0] > 0.0));

    let mesh = Mesh::Grid(GridMesh::new(&square(), 1.0 / 8.0).unwrap());
    let form = plain(&mesh, f64::INFINITY);
    assert_eq!((form.dofs(), form.eliminated), (49, 32));
    assert_eq!(form.robin.nnz(), 0);
}

#[test]
fn eigenvalue_matches_dense_solver_on_interval() {
    let w = lemma1_weight(1.0, 1.0).unwrap();
    let mesh = Mesh::Line(LineMesh::new(0.0, 1.0, 40).unwrap());
    let form = assemble(&mesh, &w.robin(), Some(&w), &AssemblyOptions::default()).unwrap();
    let pair = smallest_eigenpair(&form.pencil().unwrap(), 1e-12).unwrap();
    assert_relative_eq!(pair.value, dense_smallest(&form), epsilon = 1e-9);
}

#[test]
fn eigenvalue_matches_dense_solver_on_disk() {
    let d = disk();
    let sigma = RobinCoefficient::PerFacet(vec![2.0]);
    let w = convex_weight(&d, &sigma).unwrap();
    let mesh = mesh_for(&d, 0.25).unwrap();
    let form = assemble(&mesh, &sigma, Some(&w as &dyn HardyWeight), &AssemblyOptions::default()).unwrap();
    let pair = smallest_eigenpair(&form.pencil().unwrap(), 1e-12).unwrap();
    assert_relative_eq!(pair.value, dense_smallest(&form), epsilon = 1e-8);
}

#[test]
fn dirichlet_laplacian_on_square() {
    let mesh = mesh_for(&square(), 1.0 / 64.0).unwrap();
    let form = plain(&mesh, f64::INFINITY);
    let pair = smallest_eigenpair(&form.pencil().unwrap(), 1e-12).unwrap();
    assert_relative_eq!(pair.value, 2.0 * PI * PI, max_relative = 2e-3);
}

#[test]
fn disk_volume_constant_matches_lens_area() {
    let (bound, _) = cor_general_bound(&disk(), 1.0, 600_000, 11).unwrap();
    let r = bound.argmin_radius;
    let exact = outside_area(r) / (r * r);
    let p = exact / PI;
    let spread = PI * (p * (1.0 - p) / bound.samples_per_pair as f64).sqrt();
    assert!((bound.alpha - exact).abs() <= 5.0 * spread, "{} vs {exact} ± {spread}", bound.alpha);
    assert!(bound.alpha >= PI / 2.0 - 5.0 * spread);
    assert_relative_eq!(bound.c_n, 4.0 * PI, epsilon = 1e-14);
    assert_relative_eq!(bound.k, bound.alpha / (16.0 * bound.c_n), epsilon = 1e-15);
}

#[test]
fn trace_excess_sign_convention() {
    assert_eq!(trace_excess(&[-0.3, -0.1, 0.0, 0.2]), 0.0);
    assert_eq!(trace_excess(&[0.5, 0.1, 0.3]), 0.0);
    assert!(trace_excess(&[-0.1, -0.3]) > 0.19);
}

#[test]
fn report_round_trips_through_json() {
    let w = lemma1_weight(1.0, 1.0).unwrap();
    let d: Domain = hardy_robin::geometry::Interval::new(1.0).unwrap().into();
    let report = certify(&d, &w.robin(), &w, &[0.05, 0.025], &CertifyOptions::for_dim(1)).unwrap();
    assert_eq!(report.status, Status::Pass);
    let text = serde_json::to_string(&report).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rayleigh_quotients_bound_the_eigenvalue(coeffs in proptest::collection::vec(-1.0f64..1.0, 31), s in 0.0f64..10.0) {
        let w = lemma1_weight(1.0, s).unwrap();
        let mesh = Mesh::Line(LineMesh::new(0.0, 1.0, 30).unwrap());
        let form = assemble(&mesh, &w.robin(), Some(&w), &AssemblyOptions::default()).unwrap();
        let pair = smallest_eigenpair(&form.pencil().unwrap(), 1e-12).unwrap();
        prop_assume!(coeffs.iter().any(|c| c.abs() > 1e-3));
        prop_assert!(form.rayleigh_quotient(&coeffs) >= pair.value - 1e-9 * pair.value.abs().max(1.0));
    }

    #[test]
    fn robin_term_is_linear_in_sigma(s in 0.0f64..100.0) {
        let mesh = mesh_for(&square(), 0.25).unwrap();
        let one = plain(&mesh, 1.0);
        let many = plain(&mesh, s);
        let u = one.interpolate(|x| 1.0 + x[0] * x[1]);
        prop_assert!((many.robin.quadratic(&u) - s * one.robin.quadratic(&u)).abs() <= 1e-12 * s.max(1.0));
    }
}
