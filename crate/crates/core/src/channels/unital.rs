//! Normal form of unital qubit channels: every such channel is
//! `Φ(ρ) = U Ψ_p(V†ρV) U†` for qubit unitaries `U`, `V` and a Pauli channel
//! `Ψ_p`.
//!
//! The construction works on the 3×3 Bloch matrix `T` of the channel. A
//! signed singular value decomposition `T = R_U diag(t) R_Vᵀ` with
//! `R_U, R_V ∈ SO(3)` puts `T` in diagonal form; `t` then fixes `p` through
//! `t_j = p0 + p_j − p_k − p_l`, and the rotations lift to `U`, `V`.

use super::{choi_of, PauliChannel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli, pauli_coefficients, CMat, HermitianOp, C64, I};

/// Real 3×3 matrix acting on Bloch vectors, row-major.
pub type BlochMatrix = [[f64; 3]; 3];

/// Tolerance on the smallest Choi eigenvalue for complete positivity.
pub const CP_TOL: f64 = 1e-9;
/// Pauli weights at or below this are reported as exact zeros.
pub const SVD_ROUNDOFF: f64 = 1e-14;

/// `Φ = Ũ ∘ Ψ_p ∘ Ṽ†`
#[derive(Clone, Debug)]
pub struct UnitalDecomposition {
    pub u: CMat,
    pub p: PauliChannel,
    pub v: CMat,
}

impl UnitalDecomposition {
    /// `U Ψ_p(V† x V) U†`
    pub fn apply_mat(&self, x: &CMat) -> CMat {
        let inner = self.v.adjoint().sandwich(x);
        self.u.sandwich(&self.p.apply_mat(&inner))
    }

    pub fn apply(&self, rho: &HermitianOp) -> HermitianOp {
        HermitianOp::symmetrized(self.apply_mat(rho.as_mat()))
    }

    /// Bloch matrix obtained by evaluating the channel on `σ_1..σ_3`.
    pub fn bloch_matrix(&self) -> BlochMatrix {
        let mut t = [[0.0; 3]; 3];
        for j in 1..4 {
            let c = pauli_coefficients(&self.apply_mat(&pauli(j)));
            for i in 1..4 {
                t[i - 1][j - 1] = c[i].re;
            }
        }
        t
    }

    /// Rotation of Bloch vectors induced by `V`.
    pub fn input_rotation(&self) -> BlochMatrix {
        bloch_matrix_of_unitary(&self.v)
    }

    /// Rotation of Bloch vectors induced by `U`.
    pub fn output_rotation(&self) -> BlochMatrix {
        bloch_matrix_of_unitary(&self.u)
    }
}

/// `R_ij = ½ tr(σ_i U σ_j U†)`
pub fn bloch_matrix_of_unitary(u: &CMat) -> BlochMatrix {
    let mut r = [[0.0; 3]; 3];
    for j in 1..4 {
        let c = pauli_coefficients(&u.sandwich(&pauli(j)));
        for i in 1..4 {
            r[i - 1][j - 1] = c[i].re;
        }
    }
    r
}

/// Lifts a rotation `R ∈ SO(3)` to a qubit unitary `U` with
/// `U (r·σ) U† = (R r)·σ`, via the unit quaternion of `R`.
pub fn unitary_from_rotation(r: &BlochMatrix) -> CMat {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if trace > 0.0 {
        let s = 0.5 / (trace + 1.0).sqrt();
        w = 0.25 / s;
        x = (r[2][1] - r[1][2]) * s;
        y = (r[0][2] - r[2][0]) * s;
        z = (r[1][0] - r[0][1]) * s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = 2.0 * (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt();
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = 2.0 * (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt();
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = 2.0 * (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt();
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
    // U = w·1 − i(x σ1 + y σ2 + z σ3)
    let gen = &(&pauli(1).scale_re(x) + &pauli(2).scale_re(y)) + &pauli(3).scale_re(z);
    &CMat::identity(2).scale_re(w) - &gen.scale(I)
}

fn choi_from_bloch(t: &BlochMatrix) -> HermitianOp {
    choi_of(|x| {
        let c = pauli_coefficients(x);
        let mut out = CMat::identity(2).scale(c[0]);
        for i in 0..3 {
            let coeff: C64 = (0..3).map(|j| c[j + 1] * t[i][j]).sum();
            out = &out + &pauli(i + 1).scale(coeff);
        }
        out
    })
}

fn det3(m: &BlochMatrix) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn column(m: &BlochMatrix, j: usize) -> [f64; 3] {
    [m[0][j], m[1][j], m[2][j]]
}

fn set_column(m: &mut BlochMatrix, j: usize, v: [f64; 3]) {
    for i in 0..3 {
        m[i][j] = v[i];
    }
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 1e-12).then(|| v.map(|x| x / n))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    crate::observables::cross3(a, b)
}

/// Completes an orthonormal list of up to three vectors to a basis,
/// trying canonical axes in order.
fn complete_basis(mut basis: Vec<[f64; 3]>) -> [[f64; 3]; 3] {
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut candidate = 0;
    while basis.len() < 3 {
        let v = if basis.len() == 2 {
            cross(basis[0], basis[1])
        } else {
            let mut w = axes[candidate];
            candidate += 1;
            for b in &basis {
                let d = w[0] * b[0] + w[1] * b[1] + w[2] * b[2];
                for i in 0..3 {
                    w[i] -= d * b[i];
                }
            }
            w
        };
        if let Some(u) = normalize(v) {
            basis.push(u);
        }
    }
    [basis[0], basis[1], basis[2]]
}

/// Signed SVD `T = R_U diag(t) R_Vᵀ` with both rotations proper.
fn signed_svd(t: &BlochMatrix) -> (BlochMatrix, [f64; 3], BlochMatrix) {
    let mut gram = CMat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let g: f64 = (0..3).map(|k| t[k][i] * t[k][j]).sum();
            gram[(i, j)] = C64::new(g, 0.0);
        }
    }
    let es = hermitian_eig(&HermitianOp::symmetrized(gram));
    let scale = es.values[0].max(0.0).sqrt();

    // With all singular values equal any orthonormal V works; take the
    // canonical axes so that unitary channels come back with V = 1.
    let isotropic = es.values[0] - es.values[2] <= 1e-12 * es.values[0].max(1.0);
    let mut rv = [[0.0; 3]; 3];
    for j in 0..3 {
        let v = es.vector(j);
        let col = if isotropic {
            let mut e = [0.0; 3];
            e[j] = 1.0;
            e
        } else {
            [v[0].re, v[1].re, v[2].re]
        };
        set_column(&mut rv, j, col);
    }

    // Left singular vectors from T v_i for the non-negligible singular values.
    let mut left: Vec<[f64; 3]> = Vec::new();
    for j in 0..3 {
        let sigma = es.values[j].max(0.0).sqrt();
        if sigma <= 1e-12 * scale.max(1e-300) || sigma == 0.0 {
            break;
        }
        let v = column(&rv, j);
        let mut u = [0.0; 3];
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = (0..3).map(|k| t[i][k] * v[k]).sum();
        }
        for b in &left {
            let d = u[0] * b[0] + u[1] * b[1] + u[2] * b[2];
            for i in 0..3 {
                u[i] -= d * b[i];
            }
        }
        match normalize(u) {
            Some(u) => left.push(u),
            None => break,
        }
    }
    let cols = complete_basis(left);
    let mut ru = [[0.0; 3]; 3];
    for (j, c) in cols.iter().enumerate() {
        set_column(&mut ru, j, *c);
    }

    // Signed singular values read off as u_iᵀ T v_i so rounding in the
    // eigenvalues does not leak into the reconstruction.
    let mut d = [0.0; 3];
    for (j, dj) in d.iter_mut().enumerate() {
        let u = column(&ru, j);
        let v = column(&rv, j);
        *dj = (0..3)
            .map(|i| (0..3).map(|k| u[i] * t[i][k] * v[k]).sum::<f64>())
            .sum();
    }

    if det3(&rv) < 0.0 {
        let v = column(&rv, 2).map(|x| -x);
        set_column(&mut rv, 2, v);
        d[2] = -d[2];
    }
    if det3(&ru) < 0.0 {
        let u = column(&ru, 2).map(|x| -x);
        set_column(&mut ru, 2, u);
        d[2] = -d[2];
    }
    (ru, d, rv)
}

/// Decomposes a unital qubit channel, given by its Bloch matrix, into
/// `U Ψ_p(V†·V) U†`.
///
/// Complete positivity is checked on the Choi operator rebuilt from the
/// Bloch matrix. When singular values coincide the decomposition is one of
/// several valid ones.
pub fn unital_decompose(bloch: &BlochMatrix) -> Result<UnitalDecomposition> {
    if bloch.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NotRealizable("Bloch matrix has non-finite entries".into()));
    }
    let choi = choi_from_bloch(bloch);
    let min_eigenvalue = choi.min_eigenvalue();
    if min_eigenvalue < -CP_TOL {
        return Err(Error::NotCompletelyPositive { min_eigenvalue });
    }

    let (ru, t, rv) = signed_svd(bloch);
    let mut p = [
        0.25 * (1.0 + t[0] + t[1] + t[2]),
        0.25 * (1.0 + t[0] - t[1] - t[2]),
        0.25 * (1.0 - t[0] + t[1] - t[2]),
        0.25 * (1.0 - t[0] - t[1] + t[2]),
    ];
    if p.iter().any(|&x| x < -CP_TOL) {
        return Err(Error::NotRealizable(format!(
            "normal form {t:?} has no probability vector ({p:?})"
        )));
    }
    // Choi-level rounding may leave components in [−1e−9, 0), and the SVD
    // cannot resolve weights below its own round-off.
    for x in p.iter_mut() {
        if *x <= SVD_ROUNDOFF {
            *x = 0.0;
        }
    }
    let sum: f64 = p.iter().sum();
    let p = PauliChannel::new(p.map(|x| x / sum))?;

    Ok(UnitalDecomposition {
        u: unitary_from_rotation(&ru),
        p,
        v: unitary_from_rotation(&rv),
    })
}
