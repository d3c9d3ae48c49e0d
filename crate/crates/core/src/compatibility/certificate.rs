//! Matching primal and dual solutions of the semidefinite program
//!
//! ```text
//! maximise  tr[A′ (n·Σ)]  over 0 ≤ A′ ≤ 1 with tr[A′ (n_⊥·Σ)] = 0,
//! minimise  tr λ          over λ ≥ 0, λ ≥ m·Σ, m·n = 1,
//! ```
//!
//! whose common value is `s_max`. Both live on the full 4-dimensional
//! ancilla label space `(e_0, e_1, e_2, e_3)`.

use super::{p_plus_minus, quadratic_form, PPlusMinus, DIRECTION_TOL};
use crate::channels::PauliChannel;
use crate::dilations::sigma_operators;
use crate::error::{Error, Result};
use crate::linalg::{CMat, HermitianOp, C64};
use crate::observables::{unit_direction, BinaryObservable};

/// Rank-2 projection `A′(+)` attaining `s_max`.
#[derive(Clone, Debug)]
pub struct OptimalPrimal {
    pub n_prime: [f64; 3],
    pub a_prime_plus: HermitianOp,
    pub s_max: f64,
}

impl OptimalPrimal {
    /// `(A′(+), 1 − A′(+))` as an observable on the ancilla.
    pub fn observable(&self) -> BinaryObservable {
        BinaryObservable::from_effect(self.a_prime_plus.clone())
            .expect("a projection is a valid effect")
    }
}

/// The displayed projection
///
/// ```text
/// A′(+) = ½ [[1,  n1,    n2,    n3  ],
///            [n1, 1,    −i n3,  i n2],
///            [n2, i n3,  1,    −i n1],
///            [n3, −i n2, i n1,  1   ]]
/// ```
pub fn a_prime_matrix(n: [f64; 3]) -> HermitianOp {
    let re = |x: f64| C64::new(0.5 * x, 0.0);
    let im = |x: f64| C64::new(0.0, 0.5 * x);
    let [a, b, c] = n;
    #[rustfmt::skip]
    let m = CMat::from_vec(
        4,
        4,
        vec![
            re(1.0), re(a), re(b), re(c),
            re(a), re(1.0), im(-c), im(b),
            re(b), im(c), re(1.0), im(-a),
            re(c), im(-b), im(a), re(1.0),
        ],
    );
    HermitianOp::symmetrized(m)
}

/// Weights `n_j / p_+[j]^k` on non-degenerate axes, zero elsewhere.
fn scaled(pm: &PPlusMinus, n: [f64; 3], power: i32) -> [f64; 3] {
    [0, 1, 2].map(|j| {
        if pm.is_degenerate(j) {
            0.0
        } else {
            n[j] / pm.p_plus[j].powi(power)
        }
    })
}

/// `n′ = Q⁻¹n / ‖Q⁻¹n‖` with `Q = diag(p_+)`, and the projection built
/// from it.
///
/// Fails with [`Error::DegenerateDirection`] when `s_max = 0` along `n`
/// (weight on a degenerate axis); the trivial observable is then the only
/// solution.
pub fn optimal_primal(ch: &PauliChannel, n: [f64; 3]) -> Result<OptimalPrimal> {
    let n = unit_direction(n)?;
    let pm = p_plus_minus(ch);
    let (sum, blocked) = quadratic_form(&pm, n);
    if blocked || sum == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let q = scaled(&pm, n, 1);
    let norm = sum.sqrt();
    let n_prime = q.map(|x| x / norm);
    Ok(OptimalPrimal {
        n_prime,
        a_prime_plus: a_prime_matrix(n_prime),
        s_max: (1.0 / norm).min(1.0),
    })
}

/// Feasible point `(λ, m)` of the dual program; `tr λ` bounds every
/// compatible sharpness along `n` from above.
#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub lambda: HermitianOp,
    pub m: [f64; 3],
}

impl DualCertificate {
    pub fn upper_bound(&self) -> f64 {
        self.lambda.trace()
    }
}

/// `m = Q⁻²n / ‖Q⁻¹n‖²`, `λ = A′(m·Σ)A′`.
///
/// On degenerate axes `Q` is restricted to its invertible part. When `n`
/// has weight on a degenerate axis `j` the bound 0 is certified by `λ = 0`,
/// `m = e_j / n_j`; then `m·Σ = Σ_j = 0`.
pub fn dual_certificate(ch: &PauliChannel, n: [f64; 3]) -> Result<DualCertificate> {
    let n = unit_direction(n)?;
    let pm = p_plus_minus(ch);
    let (sum, blocked) = quadratic_form(&pm, n);
    if blocked || sum == 0.0 {
        let j = pm
            .degenerate_axes()
            .into_iter()
            .filter(|&j| n[j].abs() > DIRECTION_TOL)
            .max_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()))
            .ok_or(Error::DegenerateDirection)?;
        let mut m = [0.0; 3];
        m[j] = 1.0 / n[j];
        return Ok(DualCertificate {
            lambda: HermitianOp::zeros(4),
            m,
        });
    }
    let m = scaled(&pm, n, 2).map(|x| x / sum);
    let primal = optimal_primal(ch, n)?;
    let sigma = sigma_operators(ch);
    let a = primal.a_prime_plus.as_mat();
    let lambda = HermitianOp::symmetrized(&(a * sigma.dot(m).as_mat()) * a);
    Ok(DualCertificate { lambda, m })
}

/// `m·Σ` in the eigenbasis `(v_+, v_−, u_+, u_−)` of `A′(+)`.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    /// Columns `v_+, v_−, u_+, u_−`.
    pub basis: CMat,
    /// `M = (s/2)(1 + g·σ)`
    pub m_block: CMat,
    pub g: [f64; 3],
    pub s: f64,
}

impl BlockDecomposition {
    /// `B† X B` for the basis matrix `B`.
    pub fn to_basis(&self, x: &CMat) -> CMat {
        &(&self.basis.adjoint() * x) * &self.basis
    }

    /// `diag(M, −M*)`
    pub fn block_form(&self) -> CMat {
        let mut out = CMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = self.m_block[(i, j)];
                out[(i + 2, j + 2)] = -self.m_block[(i, j)].conj();
            }
        }
        out
    }
}

/// Unit-eigenvalue vectors `v_±` and null vectors `u_±` of `A′(+)` and the
/// resulting `2×2` block `M`. The basis is undefined at `n′_1 = ±1`, which
/// is reported as [`Error::UnsupportedBasisPoint`].
pub fn block_decompose(primal: &OptimalPrimal, ch: &PauliChannel) -> Result<BlockDecomposition> {
    let [a, b, c] = primal.n_prime;
    if 1.0 - a.abs() <= 1e-12 {
        return Err(Error::UnsupportedBasisPoint(a));
    }
    let pm = p_plus_minus(ch);
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    let v = |sg: f64| {
        let k = 1.0 / (2.0 * (1.0 + sg * a).sqrt());
        [
            C64::new(b, sg * c),
            C64::new(-sg * b, -c),
            re(1.0 + sg * a),
            im(sg * (1.0 + sg * a)),
        ]
        .map(|z| z * k)
    };
    let u = |sg: f64| {
        let k = 1.0 / (2.0 * (1.0 + sg * a).sqrt());
        [
            C64::new(-b, sg * c),
            C64::new(-sg * b, c),
            re(1.0 + sg * a),
            im(-sg * (1.0 + sg * a)),
        ]
        .map(|z| z * k)
    };
    let mut basis = CMat::zeros(4, 4);
    for (col, vec) in [v(1.0), v(-1.0), u(1.0), u(-1.0)].iter().enumerate() {
        basis.set_column(col, vec);
    }

    let root = (1.0 - a * a).sqrt();
    let r = [0, 1, 2].map(|j| pm.ratio(j));
    let g = [
        (r[1] * b * b - r[2] * c * c) / root,
        (r[1] + r[2]) * b * c / root,
        -a * r[0],
    ];
    let s = primal.s_max;
    let h = |x: f64| x * s / 2.0;
    let m_block = CMat::from_vec(
        2,
        2,
        vec![
            re(h(1.0 + g[2])),
            C64::new(h(g[0]), -h(g[1])),
            C64::new(h(g[0]), h(g[1])),
            re(h(1.0 - g[2])),
        ],
    );
    Ok(BlockDecomposition {
        basis,
        m_block,
        g,
        s,
    })
}
