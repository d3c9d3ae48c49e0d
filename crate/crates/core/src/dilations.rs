//! Minimal dilations.
//!
//! * Naimark: an isometry `T: C² → K` and a projection-valued measure `Â`
//!   on `K` with `A(x) = T†Â(x)T`. It defines the mother channel
//!   `Λ_A(ρ) = Σ_x Â(x) TρT† Â(x)`, through which every channel compatible
//!   with `A` factors.
//! * Stinespring: an isometry `V: C² → C² ⊗ K` for a Pauli channel, with
//!   `⟨ψ⊗e_k|Vφ⟩ = ⟨ψ|M_k φ⟩` for the minimal Kraus operators
//!   `M_k = √p_k σ_k`. Tracing out the system instead of `K` gives the
//!   conjugate channel; observables compatible with the channel are exactly
//!   the pull-backs of observables on `K` through it.
//!
//! Ancilla basis vectors are labelled by Pauli index. Indices with `p_k = 0`
//! are dropped and the rest kept in ascending order, so with full support
//! `K = C⁴` carries the labels `(e_0, e_1, e_2, e_3)`.

use crate::channels::{choi_of, PauliChannel};
use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace_first, partial_trace_second, pauli, CMat, HermitianOp, C64,
};
use crate::observables::{BinaryObservable, Outcome};

/// Eigenvalues at or below this fraction of an effect's largest eigenvalue
/// do not count towards its rank.
pub const RANK_TOL: f64 = 1e-10;

/// Minimal Naimark dilation of a binary observable.
#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    dim_k: usize,
    isometry: CMat,
    pvm: [HermitianOp; 2],
    /// `φ_{x,k} = √λ_{x,k} v_{x,k}` for each outcome.
    spectral_vectors: [Vec<Vec<C64>>; 2],
}

impl NaimarkDilation {
    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    /// `T`, a `dim_k × d` matrix.
    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    pub fn projection(&self, outcome: Outcome) -> &HermitianOp {
        &self.pvm[outcome.index()]
    }

    pub fn spectral_vectors(&self, outcome: Outcome) -> &[Vec<C64>] {
        &self.spectral_vectors[outcome.index()]
    }

    /// `T† Â(x) T`
    pub fn reconstructed_effect(&self, outcome: Outcome) -> HermitianOp {
        self.projection(outcome).conjugate_by(&self.isometry.adjoint())
    }

    /// Mother channel `Λ_A(ρ) = Σ_x Â(x) TρT† Â(x)` on `K`.
    pub fn mother_channel(&self) -> MotherChannel<'_> {
        MotherChannel { dilation: self }
    }
}

/// Builds the minimal Naimark dilation from spectral decompositions of the
/// effects.
pub fn naimark_dilate(obs: &BinaryObservable) -> NaimarkDilation {
    let d = obs.dim();
    let mut spectral_vectors: [Vec<Vec<C64>>; 2] = [Vec::new(), Vec::new()];
    for x in Outcome::ALL {
        let es = obs.effect(x).eig();
        let top = es.values[0].max(0.0);
        for (i, &lam) in es.values.iter().enumerate() {
            if lam > RANK_TOL * top && lam > 0.0 {
                let root = lam.sqrt();
                spectral_vectors[x.index()].push(es.vector(i).iter().map(|z| z * root).collect());
            }
        }
    }
    let ranks = [spectral_vectors[0].len(), spectral_vectors[1].len()];
    let dim_k = ranks[0] + ranks[1];

    // T ψ = Σ_{x,k} ⟨φ_{x,k}|ψ⟩ e_{x,k}
    let mut isometry = CMat::zeros(dim_k, d);
    for (row, phi) in spectral_vectors.iter().flatten().enumerate() {
        for j in 0..d {
            isometry[(row, j)] = phi[j].conj();
        }
    }
    let block = |offset: usize, len: usize| {
        let diag: Vec<C64> = (0..dim_k)
            .map(|i| {
                if (offset..offset + len).contains(&i) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        HermitianOp::symmetrized(CMat::diagonal(&diag))
    };
    let pvm = [block(0, ranks[0]), block(ranks[0], ranks[1])];

    NaimarkDilation {
        dim_k,
        isometry,
        pvm,
        spectral_vectors,
    }
}

/// The least disturbing channel compatible with an observable, as a map
/// from system operators to operators on the Naimark space `K`.
#[derive(Clone, Copy, Debug)]
pub struct MotherChannel<'a> {
    dilation: &'a NaimarkDilation,
}

impl MotherChannel<'_> {
    pub fn dim_out(&self) -> usize {
        self.dilation.dim_k
    }

    /// Kraus operators `Â(x)T`.
    pub fn kraus(&self) -> [CMat; 2] {
        let t = &self.dilation.isometry;
        Outcome::ALL.map(|x| self.dilation.projection(x).as_mat() * t)
    }

    /// `Σ_x Â(x) TρT† Â(x)`
    pub fn apply_mat(&self, rho: &CMat) -> CMat {
        let [a, b] = self.kraus();
        &a.sandwich(rho) + &b.sandwich(rho)
    }

    pub fn apply(&self, rho: &HermitianOp) -> HermitianOp {
        HermitianOp::symmetrized(self.apply_mat(rho.as_mat()))
    }

    /// Matrix-element form `Σ_x Σ_{k,ℓ} ⟨φ_{x,k}|ρ φ_{x,ℓ}⟩ |e_{x,k}⟩⟨e_{x,ℓ}|`.
    pub fn apply_explicit(&self, rho: &CMat) -> CMat {
        let dil = self.dilation;
        let mut out = CMat::zeros(dil.dim_k, dil.dim_k);
        let mut offset = 0;
        for x in Outcome::ALL {
            let phis = dil.spectral_vectors(x);
            for (k, phi_k) in phis.iter().enumerate() {
                for (l, phi_l) in phis.iter().enumerate() {
                    let rho_phi = rho.apply(phi_l);
                    let elem: C64 = phi_k.iter().zip(&rho_phi).map(|(a, b)| a.conj() * b).sum();
                    out[(offset + k, offset + l)] = elem;
                }
            }
            offset += phis.len();
        }
        out
    }

    /// Instrument `Φ_x(ρ) = Â(x) TρT† Â(x)` realising the observable.
    pub fn instrument_branch(&self, rho: &CMat, outcome: Outcome) -> CMat {
        self.kraus()[outcome.index()].sandwich(rho)
    }

    /// Choi operator on `C² ⊗ K`.
    pub fn choi(&self) -> HermitianOp {
        let n = self.dim_out();
        let mut choi = CMat::zeros(2 * n, 2 * n);
        for a in 0..2 {
            for b in 0..2 {
                let mut unit = CMat::zeros(2, 2);
                unit[(a, b)] = C64::new(1.0, 0.0);
                let out = self.apply_mat(&unit);
                for i in 0..n {
                    for j in 0..n {
                        choi[(a * n + i, b * n + j)] = out[(i, j)];
                    }
                }
            }
        }
        HermitianOp::symmetrized(choi)
    }
}

/// Free-standing form of [`NaimarkDilation::mother_channel`].
pub fn mother_channel(dilation: &NaimarkDilation) -> MotherChannel<'_> {
    dilation.mother_channel()
}

/// Minimal Stinespring dilation of a Pauli channel.
#[derive(Clone, Debug)]
pub struct StinespringDilation {
    channel: PauliChannel,
    labels: Vec<usize>,
    isometry: CMat,
}

impl StinespringDilation {
    pub fn dim_k(&self) -> usize {
        self.labels.len()
    }

    /// Pauli index carried by each ancilla basis vector.
    pub fn kraus_basis_labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn channel(&self) -> &PauliChannel {
        &self.channel
    }

    /// `V`, a `2·dim_k × 2` matrix; row `i·dim_k + k` pairs system index `i`
    /// with ancilla index `k`.
    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    /// `VρV†` on `C² ⊗ K`.
    pub fn dilate(&self, rho: &CMat) -> CMat {
        self.isometry.sandwich(rho)
    }

    /// `tr_K[VρV†]`, which reproduces the channel.
    pub fn channel_apply(&self, rho: &CMat) -> CMat {
        partial_trace_second(&self.dilate(rho), self.dim_k()).expect("dimensions fixed by V")
    }

    /// Conjugate channel `tr_H[VρV†]` on an arbitrary 2×2 input.
    pub fn conjugate_apply_mat(&self, rho: &CMat) -> CMat {
        partial_trace_first(&self.dilate(rho), self.dim_k()).expect("dimensions fixed by V")
    }

    pub fn conjugate_apply(&self, rho: &HermitianOp) -> HermitianOp {
        HermitianOp::symmetrized(self.conjugate_apply_mat(rho.as_mat()))
    }

    /// Instrument branch `Φ_x(ρ) = tr_K[VρV†(1 ⊗ A′(x))]`.
    pub fn instrument_branch(&self, rho: &CMat, aprime_effect: &HermitianOp) -> CMat {
        let lifted = CMat::identity(2).kron(aprime_effect.as_mat());
        partial_trace_second(&(&self.dilate(rho) * &lifted), self.dim_k())
            .expect("dimensions fixed by V")
    }
}

pub fn stinespring_dilate(ch: &PauliChannel) -> StinespringDilation {
    let labels = ch.support();
    let kraus = ch.kraus_min();
    let dim_k = labels.len();
    let mut isometry = CMat::zeros(2 * dim_k, 2);
    for (k, m) in kraus.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                isometry[(i * dim_k + k, j)] = m[(i, j)];
            }
        }
    }
    StinespringDilation {
        channel: *ch,
        labels,
        isometry,
    }
}

/// Free-standing form of [`StinespringDilation::conjugate_apply`].
pub fn conjugate_apply(dil: &StinespringDilation, rho: &HermitianOp) -> HermitianOp {
    dil.conjugate_apply(rho)
}

/// Images `Σ_i` of `σ_0..σ_3` under the conjugate channel, written out
/// entrywise on the ancilla basis labelled `e_0..e_3`.
#[derive(Clone, Debug)]
pub struct SigmaOperators {
    labels: Vec<usize>,
    full: [HermitianOp; 4],
}

impl SigmaOperators {
    /// `Σ_i` on the full 4-dimensional label space (rows and columns of
    /// zero-probability labels vanish).
    pub fn full(&self, i: usize) -> &HermitianOp {
        &self.full[i]
    }

    /// `Σ_i` compressed to the minimal ancilla space.
    pub fn minimal(&self, i: usize) -> HermitianOp {
        self.full[i].restrict(&self.labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `v·Σ = Σ_j v_j Σ_j` on the full label space.
    pub fn dot(&self, v: [f64; 3]) -> HermitianOp {
        self.full[1]
            .scale(v[0])
            .add(&self.full[2].scale(v[1]))
            .add(&self.full[3].scale(v[2]))
    }
}

/// `Σ_0` is `2·diag(p)`; `Σ_1..Σ_3` are the displayed matrices
///
/// ```text
/// Σ_1 = 2 [[0, √p0p1, 0, 0], [√p0p1, 0, 0, 0], [0, 0, 0, −i√p2p3], [0, 0, i√p2p3, 0]]
/// Σ_2 = 2 [[0, 0, √p0p2, 0], [0, 0, 0, i√p1p3], [√p0p2, 0, 0, 0], [0, −i√p1p3, 0, 0]]
/// Σ_3 = 2 [[0, 0, 0, √p0p3], [0, 0, −i√p1p2, 0], [0, i√p1p2, 0, 0], [√p0p3, 0, 0, 0]]
/// ```
pub fn sigma_operators(ch: &PauliChannel) -> SigmaOperators {
    let p = ch.probabilities();
    let r = |a: usize, b: usize| 2.0 * (p[a] * p[b]).sqrt();
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);

    let mut s0 = CMat::zeros(4, 4);
    for k in 0..4 {
        s0[(k, k)] = re(2.0 * p[k]);
    }
    let mut s1 = CMat::zeros(4, 4);
    s1[(0, 1)] = re(r(0, 1));
    s1[(1, 0)] = re(r(0, 1));
    s1[(2, 3)] = im(-r(2, 3));
    s1[(3, 2)] = im(r(2, 3));
    let mut s2 = CMat::zeros(4, 4);
    s2[(0, 2)] = re(r(0, 2));
    s2[(2, 0)] = re(r(0, 2));
    s2[(1, 3)] = im(r(1, 3));
    s2[(3, 1)] = im(-r(1, 3));
    let mut s3 = CMat::zeros(4, 4);
    s3[(0, 3)] = re(r(0, 3));
    s3[(3, 0)] = re(r(0, 3));
    s3[(1, 2)] = im(-r(1, 2));
    s3[(2, 1)] = im(r(1, 2));

    SigmaOperators {
        labels: ch.support(),
        full: [s0, s1, s2, s3].map(HermitianOp::symmetrized),
    }
}

/// Pulls an observable on the ancilla back to the system:
/// `A(x) = Σ_{k,l} ⟨e_k|A′(x) e_l⟩ M_k† M_l`.
///
/// `A′` may live on the minimal ancilla space (dimension = support size) or
/// on the full 4-dimensional Pauli label space; in the latter case the
/// entries on zero-probability labels multiply vanishing Kraus operators.
pub fn induced_observable(aprime: &BinaryObservable, ch: &PauliChannel) -> Result<BinaryObservable> {
    let labels = ancilla_labels(aprime.dim(), ch)?;
    let p = ch.probabilities();
    let kraus: Vec<CMat> = labels
        .iter()
        .map(|&k| pauli(k).scale_re(p[k].sqrt()))
        .collect();
    let pull_back = |e: &HermitianOp| {
        let mut out = CMat::zeros(2, 2);
        for (a, mk) in kraus.iter().enumerate() {
            for (b, ml) in kraus.iter().enumerate() {
                let w = e.as_mat()[(a, b)];
                if w != C64::new(0.0, 0.0) {
                    out = &out + &(&mk.adjoint() * ml).scale(w);
                }
            }
        }
        HermitianOp::symmetrized(out)
    };
    let [plus, minus] = aprime.effects().map(pull_back);
    BinaryObservable::new(plus, minus)
}

/// Same pull-back computed through the trace pairing with the `Σ_i`
/// operators: the `σ_i` coefficient of `A(x)` is `tr[A′(x) Σ_i] / 2`.
pub fn induced_observable_via_sigma(
    aprime: &BinaryObservable,
    ch: &PauliChannel,
) -> Result<BinaryObservable> {
    let labels = ancilla_labels(aprime.dim(), ch)?;
    let sigma = sigma_operators(ch);
    let coeffs = |e: &HermitianOp| -> [f64; 4] {
        let full = if e.dim() == 4 { e.clone() } else { e.embed(&labels, 4) };
        [0, 1, 2, 3].map(|i| 0.5 * full.trace_product(sigma.full(i)))
    };
    let [plus, minus] = aprime
        .effects()
        .map(|e| HermitianOp::from_pauli(coeffs(e)));
    BinaryObservable::new(plus, minus)
}

fn ancilla_labels(dim: usize, ch: &PauliChannel) -> Result<Vec<usize>> {
    let support = ch.support();
    if dim == support.len() {
        Ok(support)
    } else if dim == 4 {
        Ok(vec![0, 1, 2, 3])
    } else {
        Err(Error::DimensionMismatch(format!(
            "ancilla observable has dimension {dim}; expected {} (minimal) or 4",
            support.len()
        )))
    }
}

/// Compresses an observable on the full 4-dimensional label space to the
/// minimal ancilla space of `ch`. Observables already of minimal size pass
/// through unchanged.
pub fn restrict_to_support(aprime: &BinaryObservable, ch: &PauliChannel) -> Result<BinaryObservable> {
    let support = ch.support();
    if aprime.dim() == support.len() {
        return Ok(aprime.clone());
    }
    if aprime.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "cannot restrict a {}-dimensional observable to the ancilla space",
            aprime.dim()
        )));
    }
    Ok(aprime.restrict(&support))
}

/// Choi operator of the conjugate channel, on `C² ⊗ K`.
pub fn conjugate_choi(dil: &StinespringDilation) -> HermitianOp {
    let n = dil.dim_k();
    let mut choi = CMat::zeros(2 * n, 2 * n);
    for a in 0..2 {
        for b in 0..2 {
            let mut unit = CMat::zeros(2, 2);
            unit[(a, b)] = C64::new(1.0, 0.0);
            let out = dil.conjugate_apply_mat(&unit);
            for i in 0..n {
                for j in 0..n {
                    choi[(a * n + i, b * n + j)] = out[(i, j)];
                }
            }
        }
    }
    HermitianOp::symmetrized(choi)
}

/// Choi operator of the channel reproduced by the Stinespring isometry.
pub fn stinespring_channel_choi(dil: &StinespringDilation) -> HermitianOp {
    choi_of(|x| dil.channel_apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_psd, DEFAULT_TOL};
    use crate::observables::UnbiasedBinaryObservable;
    use proptest::prelude::*;

    fn check_naimark(obs: &BinaryObservable, dil: &NaimarkDilation) {
        let t = dil.isometry();
        assert!((&t.adjoint() * t).max_abs_diff(&CMat::identity(obs.dim())) <= DEFAULT_TOL);
        let p = dil.projection(Outcome::Plus).as_mat();
        let m = dil.projection(Outcome::Minus).as_mat();
        assert!((p * p).max_abs_diff(p) == 0.0);
        assert!((p * m).max_abs() == 0.0);
        assert!((p + m).max_abs_diff(&CMat::identity(dil.dim_k())) == 0.0);
        for x in Outcome::ALL {
            let diff = dil.reconstructed_effect(x).as_mat().max_abs_diff(obs.effect(x).as_mat());
            assert!(diff <= DEFAULT_TOL, "reconstruction error {diff}");
        }
    }

    /// `tr(M_k σ_i M_n†)` from explicit Kraus operators.
    fn sigma_oracle(ch: &PauliChannel, i: usize) -> CMat {
        let p = ch.probabilities();
        CMat::from_fn(4, 4, |k, n| {
            let prod = &(&pauli(k) * &pauli(i)) * &pauli(n);
            prod.trace() * (p[k] * p[n]).sqrt()
        })
    }

    #[test]
    fn naimark_of_sharp_z() {
        let obs = UnbiasedBinaryObservable::z(1.0).unwrap().to_binary();
        let dil = naimark_dilate(&obs);
        assert_eq!(dil.dim_k(), 2);
        check_naimark(&obs, &dil);
        let t = dil.isometry();
        assert!((t * &t.adjoint()).max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn naimark_of_trivial_observable() {
        let obs = BinaryObservable::trivial(2, 0.5).unwrap();
        let dil = naimark_dilate(&obs);
        assert_eq!(dil.dim_k(), 4);
        check_naimark(&obs, &dil);
    }

    #[test]
    fn naimark_of_noisy_z() {
        let obs = UnbiasedBinaryObservable::z(0.8).unwrap().to_binary();
        let dil = naimark_dilate(&obs);
        assert_eq!(dil.dim_k(), 4);
        check_naimark(&obs, &dil);
    }

    #[test]
    fn naimark_of_rank_three_observable() {
        // E = diag(1, 0.3): rank 2 for +, rank 1 for −
        let plus = HermitianOp::from_pauli([0.65, 0.0, 0.0, 0.35]);
        let obs = BinaryObservable::from_effect(plus).unwrap();
        let dil = naimark_dilate(&obs);
        assert_eq!(dil.dim_k(), 3);
        check_naimark(&obs, &dil);
    }

    #[test]
    fn mother_channel_of_sharp_z_keeps_diagonal() {
        let obs = UnbiasedBinaryObservable::z(1.0).unwrap().to_binary();
        let dil = naimark_dilate(&obs);
        let rho = HermitianOp::from_pauli([0.5, 0.3, -0.2, 0.1]);
        let out = dil.mother_channel().apply(&rho);
        let want = CMat::diagonal(&[rho.as_mat()[(0, 0)], rho.as_mat()[(1, 1)]]);
        assert!(out.as_mat().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn mother_channel_is_cptp_and_matches_explicit_form() {
        for obs in [
            BinaryObservable::trivial(2, 0.5).unwrap(),
            UnbiasedBinaryObservable::new(0.8, [0.0, 0.6, 0.8]).unwrap().to_binary(),
            UnbiasedBinaryObservable::x(1.0).unwrap().to_binary(),
        ] {
            let dil = naimark_dilate(&obs);
            let mc = dil.mother_channel();
            assert!(is_psd(&mc.choi(), 1e-9));
            for rho in [
                HermitianOp::from_pauli([0.5, 0.3, -0.2, 0.1]),
                HermitianOp::from_pauli([0.5, -0.1, 0.4, 0.2]),
            ] {
                let a = mc.apply_mat(rho.as_mat());
                let b = mc.apply_explicit(rho.as_mat());
                assert!(a.max_abs_diff(&b) <= 1e-10);
                assert!((a.trace().re - 1.0).abs() <= 1e-12);
                for x in Outcome::ALL {
                    let p_out = dil.projection(x).trace_product(&HermitianOp::symmetrized(a.clone()));
                    assert!((p_out - obs.probability(&rho, x)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn stinespring_of_identity() {
        let dil = stinespring_dilate(&PauliChannel::identity());
        assert_eq!(dil.dim_k(), 1);
        assert_eq!(*dil.isometry(), CMat::identity(2));
    }

    #[test]
    fn stinespring_dimensions() {
        let pd = stinespring_dilate(&PauliChannel::new([0.5, 0.0, 0.0, 0.5]).unwrap());
        assert_eq!(pd.dim_k(), 2);
        assert_eq!(pd.kraus_basis_labels(), &[0, 3]);
        let full = stinespring_dilate(&PauliChannel::new([0.4, 0.3, 0.2, 0.1]).unwrap());
        assert_eq!(full.dim_k(), 4);
        let v = full.isometry();
        assert!((&v.adjoint() * v).max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn conjugate_of_identity_input_is_sigma_zero() {
        let ch = PauliChannel::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        let dil = stinespring_dilate(&ch);
        let out = dil.conjugate_apply(&HermitianOp::identity(2));
        let want = sigma_oracle(&ch, 0);
        assert!(out.as_mat().max_abs_diff(&want) < 1e-15);
        for k in 0..4 {
            assert!((out.as_mat()[(k, k)].re - 2.0 * ch.probabilities()[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn sigma_one_at_completely_depolarizing() {
        let ch = PauliChannel::completely_depolarizing();
        let dil = stinespring_dilate(&ch);
        let out = dil.conjugate_apply(&HermitianOp::new(pauli(1)).unwrap());
        let want = sigma_oracle(&ch, 1);
        assert!(out.as_mat().max_abs_diff(&want) < 1e-15);
        assert!(sigma_operators(&ch).full(1).as_mat().max_abs_diff(&want) < 1e-15);
        let nonzero: Vec<C64> = out.as_mat().entries().iter().copied().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 4);
        for z in nonzero {
            assert!((z.norm() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn sigma_one_for_two_point_channel() {
        let ch = PauliChannel::new([0.5, 0.5, 0.0, 0.0]).unwrap();
        let s1 = sigma_operators(&ch);
        let want = CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(*s1.minimal(1).as_mat(), want);
        let embedded = s1.full(1).as_mat().restrict(&[0, 1]);
        assert_eq!(embedded, want);
    }

    #[test]
    fn unitary_channel_carries_nothing_to_the_environment() {
        let s = sigma_operators(&PauliChannel::identity());
        for i in 1..4 {
            let m = s.minimal(i);
            assert_eq!(m.dim(), 1);
            assert_eq!(m.as_mat().max_abs(), 0.0);
        }
    }

    #[test]
    fn induced_observable_of_trivial_ancilla_observable() {
        let ch = PauliChannel::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        let aprime = BinaryObservable::trivial(4, 0.5).unwrap();
        let obs = induced_observable(&aprime, &ch).unwrap();
        let half = CMat::identity(2).scale_re(0.5);
        for e in obs.effects() {
            assert!(e.as_mat().max_abs_diff(&half) < 1e-15);
        }
        // Naimark projections of the trivial observable also give a trivial one
        let naimark = naimark_dilate(&BinaryObservable::trivial(2, 0.5).unwrap());
        let pvm = BinaryObservable::new(
            naimark.projection(Outcome::Plus).clone(),
            naimark.projection(Outcome::Minus).clone(),
        )
        .unwrap();
        let obs = induced_observable(&pvm, &ch).unwrap();
        let c = obs.effect(Outcome::Plus).pauli_expand().unwrap();
        assert!(c[1].abs() < 1e-15 && c[2].abs() < 1e-15);
    }

    #[test]
    fn induced_observable_rejects_wrong_dimension() {
        let ch = PauliChannel::new([0.5, 0.0, 0.0, 0.5]).unwrap();
        let aprime = BinaryObservable::trivial(3, 0.5).unwrap();
        assert!(induced_observable(&aprime, &ch).is_err());
    }

    fn prob4() -> impl Strategy<Value = [f64; 4]> {
        (prop::array::uniform4(0.0f64..1.0), prop::array::uniform4(prop::bool::weighted(0.8)))
            .prop_map(|(x, keep)| {
                let mut x = x;
                for i in 0..4 {
                    if !keep[i] {
                        x[i] = 0.0;
                    }
                }
                if x.iter().all(|&v| v == 0.0) {
                    x[0] = 1.0;
                }
                let s: f64 = x.iter().sum();
                x.map(|v| v / s)
            })
            .prop_filter("valid", |p| PauliChannel::new(*p).is_ok())
    }

    fn random_effect(dim: usize, parts: &[f64]) -> HermitianOp {
        // E = G G† scaled so that ‖E‖ ≤ 1
        let g = CMat::from_fn(dim, dim, |i, j| C64::new(parts[2 * (i * dim + j)], parts[2 * (i * dim + j) + 1]));
        let e = HermitianOp::symmetrized(&g * &g.adjoint());
        let top = e.max_eigenvalue().max(1e-12);
        e.scale(parts[32].abs().min(1.0) / top)
    }

    proptest! {
        #[test]
        fn conjugate_channel_matches_sigma_formulas(p in prob4()) {
            let ch = PauliChannel::new(p).unwrap();
            let dil = stinespring_dilate(&ch);
            let sig = sigma_operators(&ch);
            for i in 0..4 {
                let got = dil.conjugate_apply_mat(&pauli(i));
                prop_assert!(got.max_abs_diff(sig.minimal(i).as_mat()) <= 1e-12);
                prop_assert!(sig.full(i).as_mat().max_abs_diff(&sigma_oracle(&ch, i)) <= 1e-12);
            }
        }

        #[test]
        fn stinespring_reproduces_channel(p in prob4(), c in prop::array::uniform3(-0.5f64..0.5)) {
            let ch = PauliChannel::new(p).unwrap();
            let dil = stinespring_dilate(&ch);
            let v = dil.isometry();
            prop_assert!((&v.adjoint() * v).max_abs_diff(&CMat::identity(2)) <= 1e-10);
            let rho = HermitianOp::from_pauli([0.5, c[0], c[1], c[2]]);
            let via_v = dil.channel_apply(rho.as_mat());
            let kraus = ch.kraus_min().iter().fold(CMat::zeros(2, 2), |acc, k| &acc + &k.sandwich(rho.as_mat()));
            prop_assert!(via_v.max_abs_diff(&kraus) <= 1e-12);
            prop_assert!(via_v.max_abs_diff(ch.apply(&rho).as_mat()) <= 1e-12);
            let env = dil.conjugate_apply(&rho);
            prop_assert!((env.trace() - 1.0).abs() <= 1e-12);
            prop_assert!(is_psd(&conjugate_choi(&dil), 1e-12));
            prop_assert!(is_psd(&stinespring_channel_choi(&dil), 1e-12));
        }

        #[test]
        fn induced_observable_is_valid_and_routes_agree(
            p in prob4(), parts in prop::collection::vec(-1.0f64..1.0, 33), minimal in any::<bool>()
        ) {
            let ch = PauliChannel::new(p).unwrap();
            let dim = if minimal { ch.support().len() } else { 4 };
            let aprime = BinaryObservable::from_effect(random_effect(dim, &parts)).unwrap();
            let a = induced_observable(&aprime, &ch).unwrap();
            let b = induced_observable_via_sigma(&aprime, &ch).unwrap();
            for x in Outcome::ALL {
                prop_assert!(a.effect(x).as_mat().max_abs_diff(b.effect(x).as_mat()) <= 1e-12);
            }
            let restricted = restrict_to_support(&aprime, &ch).unwrap();
            let c = induced_observable(&restricted, &ch).unwrap();
            prop_assert!(c.effect(Outcome::Plus).as_mat().max_abs_diff(a.effect(Outcome::Plus).as_mat()) <= 1e-12);
        }
    }
}
