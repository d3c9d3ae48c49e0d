//! Sampling the compatible region in both pictures: the ellipsoid of
//! compatible Bloch vectors `s·n` for a fixed channel, and the set of Pauli
//! channels compatible with a fixed observable.

use rayon::prelude::*;

use super::{is_compatible, p_plus_minus};
use crate::channels::PauliChannel;
use crate::error::{Error, Result};
use crate::observables::UnbiasedBinaryObservable;

/// Shape of the compatible region `{s·n : s ≤ s_max(n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionGeometry {
    /// Solid ellipsoid with semi-axes `p_+[j]`.
    Ellipsoid,
    /// Flat ellipse in the plane orthogonal to the (0-based) axis.
    Ellipse { normal_axis: usize },
    /// Segment along the (0-based) axis.
    Segment { axis: usize },
    /// Only the origin.
    Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidSample {
    pub geometry: RegionGeometry,
    pub points: Vec<[f64; 3]>,
}

/// Quasi-uniform unit vectors on a Fibonacci spiral.
pub fn fibonacci_directions(count: usize) -> Vec<[f64; 3]> {
    if count == 1 {
        return vec![[0.0, 0.0, 1.0]];
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * i as f64 / (count - 1) as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// `count` points `s_max(n)·n` on the boundary of the compatible region.
///
/// A flattened region is sampled in its own dimension: an ellipse is traced
/// by `count` angles in its plane, a segment by `count` evenly spaced points
/// between its endpoints, and a point by the origin alone.
pub fn ellipsoid_sample(ch: &PauliChannel, count: usize) -> EllipsoidSample {
    let count = count.max(1);
    let pm = p_plus_minus(ch);
    let live: Vec<usize> = (0..3).filter(|&j| !pm.is_degenerate(j)).collect();
    let axes = pm.p_plus;
    match live.as_slice() {
        [] => EllipsoidSample {
            geometry: RegionGeometry::Point,
            points: vec![[0.0; 3]],
        },
        &[j] => {
            let points = (0..count)
                .map(|i| {
                    let x = if count == 1 {
                        axes[j]
                    } else {
                        axes[j] * (2.0 * i as f64 / (count - 1) as f64 - 1.0)
                    };
                    let mut v = [0.0; 3];
                    v[j] = x;
                    v
                })
                .collect();
            EllipsoidSample {
                geometry: RegionGeometry::Segment { axis: j },
                points,
            }
        }
        &[a, b] => {
            let normal_axis = 3 - a - b;
            let points = (0..count)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                    let mut v = [0.0; 3];
                    v[a] = axes[a] * t.cos();
                    v[b] = axes[b] * t.sin();
                    v
                })
                .collect();
            EllipsoidSample {
                geometry: RegionGeometry::Ellipse { normal_axis },
                points,
            }
        }
        _ => {
            let points = fibonacci_directions(count)
                .into_iter()
                .map(|n| {
                    let q: f64 = (0..3).map(|j| n[j] * n[j] / (axes[j] * axes[j])).sum();
                    let s = 1.0 / q.sqrt();
                    n.map(|x| s * x)
                })
                .collect();
            EllipsoidSample {
                geometry: RegionGeometry::Ellipsoid,
                points,
            }
        }
    }
}

/// Barycentric lattice `{k/(R−1) : Σk = R−1}` in lexicographic order of
/// `(k_0, k_1, k_2, k_3)`.
pub fn simplex_grid(resolution: usize) -> Vec<[f64; 4]> {
    let steps = resolution.saturating_sub(1);
    let h = steps as f64;
    let mut out = Vec::new();
    for k0 in 0..=steps {
        for k1 in 0..=steps - k0 {
            for k2 in 0..=steps - k0 - k1 {
                let k3 = steps - k0 - k1 - k2;
                out.push([k0, k1, k2, k3].map(|k| k as f64 / h));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexNode {
    pub p: [f64; 4],
    pub compatible: bool,
}

/// Verdict of `obs` against every channel on the simplex lattice with
/// `resolution` points per edge. Nodes are evaluated in parallel and
/// returned in lattice order.
pub fn simplex_region_sample(
    obs: &UnbiasedBinaryObservable,
    resolution: usize,
) -> Result<Vec<SimplexNode>> {
    if resolution < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    simplex_grid(resolution)
        .into_par_iter()
        .map(|p| {
            let ch = PauliChannel::new(p)?;
            Ok(SimplexNode {
                p: ch.probabilities(),
                compatible: is_compatible(obs, &ch).compatible,
            })
        })
        .collect()
}
