use std::f64::consts::PI;

use super::GaussLegendre;
use crate::error::{invalid, Error, Result};
use crate::geometry::Direction;

/// Quadrature for the normalized surface measure on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub nodes: Vec<Direction>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ g(eᵢ)`
    pub fn integrate(&self, mut g: impl FnMut(&Direction) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(e, w)| w * g(e)).sum()
    }
}

/// Symmetric rule on the unit sphere of ℝⁿ with weights summing to one.
///
/// - `n = 1`: the two points ±1;
/// - `n = 2`: `8·level` equally spaced angles;
/// - `n = 3`: `4·level` Gauss nodes in the cosine of the polar angle times
///   `8·level` equally spaced azimuths.
///
/// Doubling `level` doubles the resolution in every angular variable.
pub fn sphere_rule(n: usize, level: usize) -> Result<SphereRule> {
    if level == 0 {
        return Err(invalid("sphere rule level must be positive"));
    }
    match n {
        0 => Err(invalid("dimension must be positive")),
        1 => Ok(SphereRule {
            nodes: vec![
                Direction::from_vec_unchecked(vec![1.0]),
                Direction::from_vec_unchecked(vec![-1.0]),
            ],
            weights: vec![0.5, 0.5],
        }),
        2 => {
            let m = 8 * level;
            let nodes = (0..m)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / m as f64;
                    Direction::from_vec_unchecked(vec![t.cos(), t.sin()])
                })
                .collect();
            Ok(SphereRule {
                nodes,
                weights: vec![1.0 / m as f64; m],
            })
        }
        3 => {
            let polar = GaussLegendre::new(4 * level);
            let naz = 8 * level;
            let mut nodes = Vec::with_capacity(polar.len() * naz);
            let mut weights = Vec::with_capacity(polar.len() * naz);
            for (z, wz) in polar.nodes.iter().zip(&polar.weights) {
                let rho = (1.0 - z * z).max(0.0).sqrt();
                for k in 0..naz {
                    let phi = 2.0 * PI * (k as f64 + 0.5) / naz as f64;
                    nodes.push(Direction::from_vec_unchecked(vec![
                        rho * phi.cos(),
                        rho * phi.sin(),
                        *z,
                    ]));
                    weights.push(0.5 * wz / naz as f64);
                }
            }
            Ok(SphereRule { nodes, weights })
        }
        _ => Err(Error::Unsupported(format!(
            "sphere quadrature in dimension {n} (at most 3)"
        ))),
    }
}
