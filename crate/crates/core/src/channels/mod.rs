//! Pauli channels `Ψ_p(ρ) = Σ_j p_j σ_j ρ σ_j`, the named one-parameter
//! families built from them, and general qubit channels in Kraus form.

mod unital;

pub use unital::{
    bloch_matrix_of_unitary, unital_decompose, unitary_from_rotation, BlochMatrix,
    UnitalDecomposition,
};

use crate::error::{Error, Result};
use crate::linalg::{pauli, pauli_coefficients, CMat, HermitianOp, C64};

/// Rounding slack on probability vectors. Components in `[−tol, 0)` are
/// clamped to zero; the sum must be within `tol` of one.
pub const PROBABILITY_TOL: f64 = 1e-12;
/// Completeness tolerance for Kraus representations.
pub const KRAUS_TOL: f64 = 1e-10;

/// Pauli channel given by a probability 4-vector `(p0, p1, p2, p3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliChannel {
    p: [f64; 4],
}

impl PauliChannel {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let mut q = p;
        for x in q.iter_mut() {
            if !x.is_finite() {
                return Err(Error::InvalidChannel(format!("non-finite probability in {p:?}")));
            }
            if *x < 0.0 {
                if *x < -PROBABILITY_TOL {
                    return Err(Error::InvalidChannel(format!("negative probability in {p:?}")));
                }
                *x = 0.0;
            }
            if *x > 1.0 + PROBABILITY_TOL {
                return Err(Error::InvalidChannel(format!("probability above one in {p:?}")));
            }
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidChannel(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self { p: q })
    }

    pub fn identity() -> Self {
        Self { p: [1.0, 0.0, 0.0, 0.0] }
    }

    /// The completely depolarizing channel `ρ ↦ ½·1`.
    pub fn completely_depolarizing() -> Self {
        Self { p: [0.25; 4] }
    }

    /// `Δ_p` with probability vector `(1−3p, p, p, p)`.
    ///
    /// Valid for `p ∈ [0, 1/3]`; only on `[0, 1/4]` is it a mixture of the
    /// identity with the completely depolarizing channel.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_range("depolarizing p", p, 0.0, 1.0 / 3.0)?;
        Self::new([1.0 - 3.0 * p, p, p, p])
    }

    /// The universal quantum NOT, `Δ_{1/3}`.
    pub fn quantum_not() -> Self {
        Self {
            p: [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        }
    }

    /// Phase damping in the `σ_3` eigenbasis: `(p, 0, 0, 1−p)`.
    pub fn phase_damping(p: f64) -> Result<Self> {
        check_range("phase damping p", p, 0.0, 1.0)?;
        Self::new([p, 0.0, 0.0, 1.0 - p])
    }

    /// Measure `Z_t`, prepare the matching `σ_3` eigenstate:
    /// `¼(1+t, 1−t, 1−t, 1+t)`.
    pub fn measure_and_prepare(t: f64) -> Result<Self> {
        check_range("measure-and-prepare t", t, 0.0, 1.0)?;
        Self::new([
            0.25 * (1.0 + t),
            0.25 * (1.0 - t),
            0.25 * (1.0 - t),
            0.25 * (1.0 + t),
        ])
    }

    /// Lüders channel of `Z_t`, a phase damping channel with
    /// `p = ½(√(1−t²) + 1)`.
    pub fn luders_z(t: f64) -> Result<Self> {
        check_range("Lüders t", t, 0.0, 1.0)?;
        Self::phase_damping(0.5 * ((1.0 - t * t).sqrt() + 1.0))
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    /// Bloch-vector scalings `t_j = p0 + p_j − p_k − p_l`.
    pub fn bloch_scalings(&self) -> [f64; 3] {
        let p = self.p;
        [
            p[0] + p[1] - p[2] - p[3],
            p[0] + p[2] - p[1] - p[3],
            p[0] + p[3] - p[1] - p[2],
        ]
    }

    /// Indices `k` with `p_k > 0`, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..4).filter(|&k| self.p[k] > 0.0).collect()
    }

    pub fn apply(&self, rho: &HermitianOp) -> HermitianOp {
        let c = rho
            .pauli_expand()
            .expect("Pauli channels act on qubit operators");
        let t = self.bloch_scalings();
        HermitianOp::from_pauli([c[0], t[0] * c[1], t[1] * c[2], t[2] * c[3]])
    }

    /// Action on an arbitrary (not necessarily Hermitian) 2×2 matrix.
    pub fn apply_mat(&self, x: &CMat) -> CMat {
        let c = pauli_coefficients(x);
        let t = self.bloch_scalings();
        let mut out = CMat::zeros(2, 2);
        for (j, &cj) in c.iter().enumerate() {
            let f = if j == 0 { 1.0 } else { t[j - 1] };
            out = &out + &pauli(j).scale(cj * f);
        }
        out
    }

    /// Minimal Kraus set `√p_k σ_k` over the support, ascending in `k`.
    pub fn kraus_min(&self) -> Vec<CMat> {
        self.support()
            .into_iter()
            .map(|k| pauli(k).scale_re(self.p[k].sqrt()))
            .collect()
    }

    /// The three channels obtained by concatenating with `σ_1`, `σ_2`, `σ_3`.
    pub fn permuted_channels(&self) -> [PauliChannel; 3] {
        let p = self.p;
        [
            Self { p: [p[1], p[0], p[3], p[2]] },
            Self { p: [p[2], p[3], p[0], p[1]] },
            Self { p: [p[3], p[2], p[1], p[0]] },
        ]
    }

    pub fn to_map(&self) -> QubitChannelMap {
        QubitChannelMap { kraus: self.kraus_min() }
    }

    /// Bloch matrix `diag(t1, t2, t3)`.
    pub fn bloch_matrix(&self) -> BlochMatrix {
        let t = self.bloch_scalings();
        [[t[0], 0.0, 0.0], [0.0, t[1], 0.0], [0.0, 0.0, t[2]]]
    }
}

fn check_range(what: &str, x: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&x) {
        return Err(Error::ParameterOutOfRange(format!(
            "{what} = {x} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Free-standing form of [`PauliChannel::apply`].
pub fn apply(ch: &PauliChannel, rho: &HermitianOp) -> HermitianOp {
    ch.apply(rho)
}

/// Qubit channel in Kraus form, `ρ ↦ Σ_k M_k ρ M_k†`.
#[derive(Clone, Debug)]
pub struct QubitChannelMap {
    kraus: Vec<CMat>,
}

impl QubitChannelMap {
    /// Checks `Σ M_k† M_k = 1` to `1e−10`.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        if kraus.iter().any(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(Error::DimensionMismatch("Kraus operators must be 2x2".into()));
        }
        let map = Self { kraus };
        let defect = map.completeness_defect();
        if defect > KRAUS_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving (deviation {defect:.3e})"
            )));
        }
        Ok(map)
    }

    pub fn unitary(u: &CMat) -> Result<Self> {
        Self::new(vec![u.clone()])
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// `‖Σ M_k† M_k − 1‖_max`
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = CMat::zeros(2, 2);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&CMat::identity(2))
    }

    pub fn apply_mat(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros(2, 2);
        for k in &self.kraus {
            out = &out + &k.sandwich(x);
        }
        out
    }

    pub fn apply(&self, rho: &HermitianOp) -> HermitianOp {
        HermitianOp::symmetrized(self.apply_mat(rho.as_mat()))
    }

    /// Affine Bloch action `r ↦ T r + c`, returned as `(T, c)` with
    /// `T_ij = ½ tr(σ_i Φ(σ_j))` and `c_i = ½ tr(σ_i Φ(1))`.
    pub fn bloch_action(&self) -> (BlochMatrix, [f64; 3]) {
        let mut t = [[0.0; 3]; 3];
        let id = pauli_coefficients(&self.apply_mat(&CMat::identity(2)));
        for j in 1..4 {
            let c = pauli_coefficients(&self.apply_mat(&pauli(j)));
            for i in 1..4 {
                t[i - 1][j - 1] = c[i].re;
            }
        }
        (t, [id[1].re, id[2].re, id[3].re])
    }

    /// Choi operator `Σ_{ab} |a⟩⟨b| ⊗ Φ(|a⟩⟨b|)` (trace 2).
    pub fn choi(&self) -> HermitianOp {
        choi_of(|x| self.apply_mat(x))
    }
}

/// Choi operator of a linear map on 2×2 matrices.
pub fn choi_of(map: impl Fn(&CMat) -> CMat) -> HermitianOp {
    let mut choi = CMat::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            let mut unit = CMat::zeros(2, 2);
            unit[(a, b)] = C64::new(1.0, 0.0);
            let out = map(&unit);
            for i in 0..2 {
                for j in 0..2 {
                    choi[(2 * a + i, 2 * b + j)] = out[(i, j)];
                }
            }
        }
    }
    HermitianOp::symmetrized(choi)
}

/// Concatenation `outer ∘ inner`.
pub fn compose(outer: &QubitChannelMap, inner: &QubitChannelMap) -> QubitChannelMap {
    let kraus = outer
        .kraus
        .iter()
        .flat_map(|a| inner.kraus.iter().map(move |b| a * b))
        .collect();
    QubitChannelMap { kraus }
}

/// Convex combination `Σ_i w_i Φ_i`.
pub fn mix(channels: &[QubitChannelMap], weights: &[f64]) -> Result<QubitChannelMap> {
    if channels.len() != weights.len() || channels.is_empty() {
        return Err(Error::InvalidWeights(format!(
            "{} channels but {} weights",
            channels.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
        return Err(Error::InvalidWeights(format!("weights {weights:?} outside [0,1]")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
    }
    let kraus = channels
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .flat_map(|(ch, &w)| ch.kraus.iter().map(move |k| k.scale_re(w.sqrt())))
        .collect();
    Ok(QubitChannelMap { kraus })
}
