//! Dense complex linear algebra for the small operators used throughout the
//! crate: qubit operators, 4×4 ancilla operators and the 2·K-dimensional
//! system-ancilla operators that appear in dilations.
//!
//! Everything is row-major `Complex64`. Sizes never exceed 8×8, so the
//! routines favour clarity over blocking or vectorisation.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity tolerance applied when wrapping a matrix in [`HermitianOp`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default tolerance for PSD and orthonormality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Column vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_max`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖H − H†‖_max`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hilbert–Schmidt inner product `tr(self† other)`.
    pub fn hs_inner(&self, other: &CMat) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |i, j| self[(indices[i], indices[j])])
    }

    /// Conjugation `self · x · self†`.
    pub fn sandwich(&self, x: &CMat) -> Self {
        &(self * x) * &self.adjoint()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale_re(-1.0)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrix `σ_j`, with `σ_0` the identity.
///
/// Panics for `j > 3`.
pub fn pauli(j: usize) -> CMat {
    match j {
        0 => CMat::identity(2),
        1 => CMat::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]),
        2 => CMat::from_vec(2, 2, vec![ZERO, -I, I, ZERO]),
        3 => CMat::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE]),
        _ => panic!("Pauli index must be 0..=3, got {j}"),
    }
}

/// `Σ_j c_j σ_j` for a real coefficient 4-vector.
pub fn from_pauli(c: [f64; 4]) -> CMat {
    CMat::from_vec(
        2,
        2,
        vec![
            C64::new(c[0] + c[3], 0.0),
            C64::new(c[1], -c[2]),
            C64::new(c[1], c[2]),
            C64::new(c[0] - c[3], 0.0),
        ],
    )
}

/// `v · σ` for a real 3-vector.
pub fn bloch_operator(v: [f64; 3]) -> CMat {
    from_pauli([0.0, v[0], v[1], v[2]])
}

/// Complex Pauli coefficients `tr(X σ_j)/2` of an arbitrary 2×2 matrix.
pub fn pauli_coefficients(x: &CMat) -> [C64; 4] {
    assert!(x.rows() == 2 && x.cols() == 2, "Pauli expansion needs a 2x2 matrix");
    let (a, b, c, d) = (x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]);
    [
        (a + d) * 0.5,
        (b + c) * 0.5,
        (b - c) * I * 0.5,
        (a - d) * 0.5,
    ]
}

/// Dense Hermitian operator; the wrapped matrix is square and exactly
/// Hermitian (it is symmetrised at construction).
#[derive(Clone, PartialEq)]
pub struct HermitianOp(CMat);

impl HermitianOp {
    /// Wraps `m` after checking `‖m − m†‖_max ≤ 1e−12`.
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    pub fn with_tolerance(m: CMat, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let deviation = m.hermiticity_defect();
        if !(deviation <= tol) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(m))
    }

    /// `(m + m†)/2`, without a tolerance check. For results that are
    /// Hermitian by construction.
    pub fn symmetrized(m: CMat) -> Self {
        let n = m.rows();
        let mut out = m.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self(out)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMat::zeros(n, n))
    }

    /// `Σ_j c_j σ_j`.
    pub fn from_pauli(c: [f64; 4]) -> Self {
        Self(from_pauli(c))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_mat(&self) -> &CMat {
        &self.0
    }

    pub fn into_mat(self) -> CMat {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real coefficients `(c0, c1, c2, c3)` with `H = Σ c_j σ_j`; qubit only.
    pub fn pauli_expand(&self) -> Result<[f64; 4]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Pauli expansion needs a qubit operator, got dimension {}",
                self.dim()
            )));
        }
        Ok(pauli_coefficients(&self.0).map(|c| c.re))
    }

    pub fn eig(&self) -> EigenSystem {
        hermitian_eig(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eig().values.last().expect("non-empty operator")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig().values[0]
    }

    /// True iff the smallest eigenvalue is `≥ −tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        is_psd(self, tol)
    }

    pub fn add(&self, other: &HermitianOp) -> HermitianOp {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &HermitianOp) -> HermitianOp {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, factor: f64) -> HermitianOp {
        Self(self.0.scale_re(factor))
    }

    /// `tr(self · other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianOp) -> f64 {
        self.0.hs_inner(&other.0).re
    }

    /// Principal compression onto a subset of basis vectors.
    pub fn restrict(&self, indices: &[usize]) -> HermitianOp {
        Self(self.0.restrict(indices))
    }

    /// Embeds a `k×k` operator into `n×n` at the given basis indices,
    /// zero elsewhere.
    pub fn embed(&self, indices: &[usize], n: usize) -> HermitianOp {
        assert_eq!(indices.len(), self.dim());
        let mut out = CMat::zeros(n, n);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out[(i, j)] = self.0[(a, b)];
            }
        }
        Self(out)
    }

    /// `A · self · A†` for an arbitrary (possibly rectangular) `A`.
    pub fn conjugate_by(&self, a: &CMat) -> HermitianOp {
        Self::symmetrized(a.sandwich(&self.0))
    }
}

impl fmt::Debug for HermitianOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

/// Real spectrum (descending) and orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl EigenSystem {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    /// `Σ λ_i v_i v_i†`
    pub fn reconstruct(&self) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (i, &lam) in self.values.iter().enumerate() {
            let v = self.vector(i);
            out = &out + &CMat::outer(&v, &v).scale_re(lam);
        }
        out
    }

    /// Applies `f` to the spectrum: `Σ f(λ_i) v_i v_i†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianOp {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (i, &lam) in self.values.iter().enumerate() {
            let v = self.vector(i);
            out = &out + &CMat::outer(&v, &v).scale_re(f(lam));
        }
        HermitianOp::symmetrized(out)
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Each pivot `(p, q)` first removes the phase of `a_pq` with a diagonal
/// unitary and then applies the real Jacobi rotation that annihilates the
/// resulting real 2×2 off-diagonal entry. Eigenvalues come back descending;
/// each eigenvector has its first non-negligible component real positive.
pub fn hermitian_eig(h: &HermitianOp) -> EigenSystem {
    let n = h.dim();
    let mut a = h.as_mat().clone();
    let mut v = CMat::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for sweep in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // Entries already below rounding of both diagonals are dropped.
                    let g = 100.0 * mag;
                    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                        a[(p, q)] = ZERO;
                        a[(q, p)] = ZERO;
                        continue;
                    }
                    let phase_conj = (apq / mag).conj();
                    let theta = 0.5 * (2.0 * mag).atan2(aqq - app);
                    let (s, c) = theta.sin_cos();
                    let (jpp, jpq) = (C64::new(c, 0.0), C64::new(s, 0.0));
                    let (jqp, jqq) = (phase_conj * (-s), phase_conj * c);

                    // a ← a·J, v ← v·J
                    for i in 0..n {
                        let (aip, aiq) = (a[(i, p)], a[(i, q)]);
                        a[(i, p)] = aip * jpp + aiq * jqp;
                        a[(i, q)] = aip * jpq + aiq * jqq;
                        let (vip, viq) = (v[(i, p)], v[(i, q)]);
                        v[(i, p)] = vip * jpp + viq * jqp;
                        v[(i, q)] = vip * jpq + viq * jqq;
                    }
                    // a ← J†·a
                    for j in 0..n {
                        let (apj, aqj) = (a[(p, j)], a[(q, j)]);
                        a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
                        a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut vec = v.column(i);
        fix_phase(&mut vec);
        vectors.set_column(col, &vec);
    }
    EigenSystem { values, vectors }
}

/// Rotates the global phase so that the first component with modulus above
/// `1e−12` is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12 * max.max(1.0)).copied() {
        let rot = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

/// True iff the smallest eigenvalue of `h` is `≥ −tol`.
pub fn is_psd(h: &HermitianOp, tol: f64) -> bool {
    h.min_eigenvalue() >= -tol
}

/// Partial trace over the second factor of `C² ⊗ C^dim_k`.
pub fn partial_trace_second(x: &CMat, dim_k: usize) -> Result<CMat> {
    check_bipartite(x, 2, dim_k)?;
    Ok(CMat::from_fn(2, 2, |i, j| {
        (0..dim_k).map(|k| x[(i * dim_k + k, j * dim_k + k)]).sum()
    }))
}

/// Partial trace over the first (qubit) factor of `C² ⊗ C^dim_k`.
pub fn partial_trace_first(x: &CMat, dim_k: usize) -> Result<CMat> {
    check_bipartite(x, 2, dim_k)?;
    Ok(CMat::from_fn(dim_k, dim_k, |k, l| {
        (0..2).map(|i| x[(i * dim_k + k, i * dim_k + l)]).sum()
    }))
}

fn check_bipartite(x: &CMat, dim_a: usize, dim_k: usize) -> Result<()> {
    let d = dim_a * dim_k;
    if dim_k == 0 || x.rows() != d || x.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected {d}x{d} operator on C^{dim_a} ⊗ C^{dim_k}, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// Gram–Schmidt on the given vectors, returning an orthonormal list.
/// Vectors that become numerically dependent are dropped.
pub fn orthonormalize(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes for stability
        for _ in 0..2 {
            for u in &out {
                let proj: C64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= proj * ui;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    out
}
