use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{HardyWeight, Provenance};
use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;

/// Total Monte Carlo samples used for the exterior-volume constant.
pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;

const ANCHOR_RESOLUTION: usize = 4;
const RADII: usize = 6;

/// Volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Estimated constants of the bound `K(δ + 1/(4σ))⁻²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralBound {
    /// Smallest sampled `Vol({y ∉ Ω : |y − a| < r}) / rⁿ`.
    pub alpha: f64,
    /// `2ⁿ Vₙ`
    pub c_n: f64,
    /// `α / (16 cₙ)`
    pub k: f64,
    /// Where the smallest ratio was observed.
    pub argmin_anchor: Vec<f64>,
    pub argmin_radius: f64,
    pub pairs: usize,
    pub samples_per_pair: usize,
    pub seed: u64,
}

/// `K(δ(x) + 1/(4σ))⁻²` with a constant `σ > 0`.
#[derive(Debug, Clone)]
pub struct GeneralWeight {
    domain: Domain,
    sigma: f64,
    k: f64,
}

impl GeneralWeight {
    pub fn constant(&self) -> f64 {
        self.k
    }

    pub fn at_distance(&self, delta: f64) -> f64 {
        self.k * (delta + 0.25 / self.sigma).powi(-2)
    }
}

impl HardyWeight for GeneralWeight {
    fn interior(&self, x: &[f64]) -> Result<f64> {
        Ok(self.at_distance(self.domain.distance(x)?))
    }

    fn provenance(&self) -> Provenance {
        Provenance::GeneralConstant
    }
}

/// Fraction of the ball `B(a, r)` lying outside the domain, by uniform sampling.
fn outside_fraction(domain: &Domain, a: &[f64], r: f64, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let n = a.len();
    let mut y = vec![0.0; n];
    let mut outside = 0usize;
    let mut taken = 0usize;
    while taken < samples {
        let mut len2 = 0.0;
        for yi in y.iter_mut() {
            let u: f64 = rng.random_range(-1.0..1.0);
            *yi = u;
            len2 += u * u;
        }
        if len2 >= 1.0 {
            continue;
        }
        for (yi, ai) in y.iter_mut().zip(a) {
            *yi = ai + r * *yi;
        }
        taken += 1;
        if !domain.contains_unchecked(&y) {
            outside += 1;
        }
    }
    outside as f64 / samples as f64
}

/// Monte Carlo estimate of the exterior-volume constant `α` over boundary
/// anchors `a` and radii `r = diam·2⁻ᵏ`, and the resulting weight.
pub fn cor_general_bound(
    domain: &Domain,
    sigma: f64,
    samples: usize,
    seed: u64,
) -> Result<(GeneralBound, GeneralWeight)> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("constant Robin coefficient {sigma} must be positive and finite")));
    }
    let Some((lo, hi)) = domain.bounding_box() else {
        return Err(Error::Unsupported("the volume constant needs a bounded domain".into()));
    };
    let diam = lo.iter().zip(&hi).map(|(l, h)| (h - l).powi(2)).sum::<f64>().sqrt();
    let anchors: Vec<Vec<f64>> = domain
        .boundary_quadrature(ANCHOR_RESOLUTION)?
        .into_iter()
        .map(|node| node.position.into_inner())
        .collect();
    let pairs = anchors.len() * RADII;
    let per_pair = (samples / pairs).max(1);
    let n = domain.dim();
    let vn = unit_ball_volume(n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::INFINITY, Vec::new(), 0.0);
    for a in &anchors {
        for k in 0..RADII {
            let r = diam * 0.5f64.powi(k as i32);
            let ratio = vn * outside_fraction(domain, a, r, per_pair, &mut rng);
            if ratio < best.0 {
                best = (ratio, a.clone(), r);
            }
        }
    }
    let alpha = best.0;
    if !(alpha > 0.0) {
        return Err(Error::Degenerate(format!(
            "no exterior volume found near boundary point {:?} at radius {}",
            best.1, best.2
        )));
    }
    let c_n = 2f64.powi(n as i32) * vn;
    let k = alpha / (16.0 * c_n);
    let bound = GeneralBound {
        alpha,
        c_n,
        k,
        argmin_anchor: best.1,
        argmin_radius: best.2,
        pairs,
        samples_per_pair: per_pair,
        seed,
    };
    let weight = GeneralWeight {
        domain: domain.clone(),
        sigma,
        k,
    };
    Ok((bound, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, ConvexPolytope};
    use approx::assert_relative_eq;

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), PI, epsilon = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn disk_constant_is_positive_and_bounded() {
        let d: Domain = Ball::centered(2, 1.0).unwrap().into();
        let (b, w) = cor_general_bound(&d, 1.0, 100_000, 7).unwrap();
        assert!(b.alpha > 0.0 && b.alpha <= PI);
        assert!(b.k > 0.0);
        // δ = 0, σ = 1 gives K·(1/4)⁻²
        assert_relative_eq!(w.at_distance(0.0), 16.0 * b.k, epsilon = 1e-15);
    }

    #[test]
    fn square_constant_near_half_disk() {
        let d: Domain = ConvexPolytope::unit_cube(2).unwrap().into();
        let (b, _) = cor_general_bound(&d, 1.0, 200_000, 1).unwrap();
        assert!(b.alpha > 1.3 && b.alpha <= PI / 2.0 + 0.1, "{}", b.alpha);
    }

    #[test]
    fn deterministic_under_seed() {
        let d: Domain = ConvexPolytope::unit_cube(2).unwrap().into();
        let a = cor_general_bound(&d, 1.0, 20_000, 3).unwrap().0;
        let b = cor_general_bound(&d, 1.0, 20_000, 3).unwrap().0;
        assert_eq!(a, b);
    }
}
