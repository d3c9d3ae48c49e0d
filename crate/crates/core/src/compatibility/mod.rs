//! Closed-form compatibility of unbiased qubit observables with Pauli
//! channels.
//!
//! `A_{s,n}` and `Ψ_p` are compatible exactly when
//!
//! ```text
//! s² Σ_j n_j² / p_+[j]² ≤ 1,    p_±[j] = 2(√(p_0 p_j) ± √(p_k p_l)),
//! ```
//!
//! so the compatible observables fill an ellipsoid with semi-axes `p_+[j]`.
//! A vanishing `p_+[j]` flattens the ellipsoid: the term is then read as the
//! hard constraint `s·n_j = 0`.

mod certificate;
mod regions;

pub use certificate::{
    block_decompose, dual_certificate, optimal_primal, BlockDecomposition, DualCertificate,
    OptimalPrimal,
};
pub use regions::{
    ellipsoid_sample, fibonacci_directions, simplex_grid, simplex_region_sample, EllipsoidSample,
    RegionGeometry, SimplexNode,
};

use crate::channels::{PauliChannel, UnitalDecomposition};
use crate::error::Result;
use crate::observables::{unit_direction, UnbiasedBinaryObservable};

/// `p_+[j]` at or below this value marks axis `j` as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-14;
/// Direction components at or below this magnitude are treated as absent.
pub const DIRECTION_TOL: f64 = 1e-12;
/// Slack on `s ≤ s_max` when deciding compatibility.
pub const VERDICT_TOL: f64 = 1e-12;

/// The functionals `p_+[j]`, `p_−[j]` for `j = 1, 2, 3` (stored 0-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PPlusMinus {
    pub p_plus: [f64; 3],
    pub p_minus: [f64; 3],
}

impl PPlusMinus {
    /// 0-based indices of axes with `p_+[j] = 0`.
    pub fn degenerate_axes(&self) -> Vec<usize> {
        (0..3).filter(|&j| self.is_degenerate(j)).collect()
    }

    pub fn is_degenerate(&self, j: usize) -> bool {
        self.p_plus[j] <= DEGENERATE_TOL
    }

    /// `p_−[j] / p_+[j]`, taken as 0 on degenerate axes.
    pub fn ratio(&self, j: usize) -> f64 {
        if self.is_degenerate(j) {
            0.0
        } else {
            self.p_minus[j] / self.p_plus[j]
        }
    }
}

pub fn p_plus_minus(ch: &PauliChannel) -> PPlusMinus {
    let p = ch.probabilities();
    let r = |a: usize, b: usize| (p[a] * p[b]).sqrt();
    let pairs = [(r(0, 1), r(2, 3)), (r(0, 2), r(1, 3)), (r(0, 3), r(1, 2))];
    PPlusMinus {
        p_plus: pairs.map(|(a, b)| 2.0 * (a + b)),
        p_minus: pairs.map(|(a, b)| 2.0 * (a - b)),
    }
}

/// `s²`-free quadratic form `Σ n_j²/p_+[j]²` over non-degenerate axes, and
/// whether `n` has weight on a degenerate axis.
fn quadratic_form(pm: &PPlusMinus, n: [f64; 3]) -> (f64, bool) {
    let mut sum = 0.0;
    let mut blocked = false;
    for j in 0..3 {
        if pm.is_degenerate(j) {
            blocked |= n[j].abs() > DIRECTION_TOL;
        } else {
            sum += n[j] * n[j] / (pm.p_plus[j] * pm.p_plus[j]);
        }
    }
    (sum, blocked)
}

fn s_max_from_parts(pm: &PPlusMinus, n: [f64; 3]) -> f64 {
    let (sum, blocked) = quadratic_form(pm, n);
    if blocked || sum == 0.0 {
        0.0
    } else {
        (1.0 / sum.sqrt()).min(1.0)
    }
}

/// Largest sharpness along `n` compatible with `ch`,
/// `s_max = (Σ_j n_j²/p_+[j]²)^(−½)`.
///
/// `n` is normalised first; it must be a unit vector up to `1e−9`. If `n`
/// has weight on a degenerate axis the only compatible observable along `n`
/// is the trivial one and the result is 0.
pub fn s_max(ch: &PauliChannel, n: [f64; 3]) -> Result<f64> {
    let n = unit_direction(n)?;
    Ok(s_max_from_parts(&p_plus_minus(ch), n))
}

/// `s_max` for a unital channel `Φ = U Ψ_p(V†·V) U†`: the output unitary is
/// irrelevant and the input unitary rotates the direction by `R(V)ᵀ`.
pub fn s_max_unital(decomp: &UnitalDecomposition, n: [f64; 3]) -> Result<f64> {
    let n = unit_direction(n)?;
    let r = decomp.input_rotation();
    let rotated = [0, 1, 2].map(|j| r[0][j] * n[0] + r[1][j] * n[1] + r[2][j] * n[2]);
    s_max(&decomp.p, rotated)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityVerdict {
    pub compatible: bool,
    pub s_max: f64,
    /// `Σ s² n_j² / p_+[j]²` over non-degenerate axes.
    pub ellipsoid_lhs: f64,
    /// 0-based axes with `p_+[j] = 0`.
    pub degenerate_axes: Vec<usize>,
}

pub fn is_compatible(obs: &UnbiasedBinaryObservable, ch: &PauliChannel) -> CompatibilityVerdict {
    is_compatible_with_tolerance(obs, ch, VERDICT_TOL)
}

/// As [`is_compatible`], with a custom slack on `s ≤ s_max` and on the
/// degenerate-axis constraint `s·|n_j| = 0`.
pub fn is_compatible_with_tolerance(
    obs: &UnbiasedBinaryObservable,
    ch: &PauliChannel,
    tol: f64,
) -> CompatibilityVerdict {
    let pm = p_plus_minus(ch);
    let s = obs.sharpness();
    let n = obs.direction();
    let (sum, _) = quadratic_form(&pm, n);
    let degenerate_axes = pm.degenerate_axes();
    let violated = degenerate_axes.iter().any(|&j| s * n[j].abs() > tol);
    let compatible = !violated && (sum == 0.0 || s <= 1.0 / sum.sqrt() + tol);
    CompatibilityVerdict {
        compatible,
        s_max: s_max_from_parts(&pm, n),
        ellipsoid_lhs: s * s * sum,
        degenerate_axes,
    }
}

/// Axis along which the compatible sharpness is largest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpestDirection {
    /// 1-based axis label.
    pub axis: usize,
    pub s_max: f64,
    /// Another axis attains the same value.
    pub tie: bool,
}

/// `argmax_j p_+[j]`, ties broken toward the smallest `j`.
pub fn sharpest_direction(ch: &PauliChannel) -> SharpestDirection {
    let pm = p_plus_minus(ch);
    let mut best = 0;
    for j in 1..3 {
        if pm.p_plus[j] > pm.p_plus[best] + VERDICT_TOL {
            best = j;
        }
    }
    let tie = (0..3).any(|j| j != best && (pm.p_plus[j] - pm.p_plus[best]).abs() <= VERDICT_TOL);
    SharpestDirection {
        axis: best + 1,
        s_max: pm.p_plus[best].min(1.0),
        tie,
    }
}
