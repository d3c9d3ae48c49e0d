//! Independent numerical checks of the closed-form results: feasibility of
//! dual certificates, a randomized search for primal lower bounds,
//! Monte-Carlo checks of instruments, and the joint-measurability formula
//! for two unbiased observables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::PauliChannel;
use crate::compatibility::DualCertificate;
use crate::dilations::{
    induced_observable, naimark_dilate, restrict_to_support, sigma_operators, stinespring_dilate,
};
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, CMat, HermitianOp, C64};
use crate::observables::{cross3, dot3, unit_direction, BinaryObservable, Outcome};

/// Slack on positivity of `λ` and `λ − m·Σ`.
pub const PSD_TOL: f64 = 1e-9;
/// Slack on `m·n = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Slack on the direction constraints `tr[A′(n_i·Σ)] = 0`.
pub const DIRECTION_CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertificateCheck {
    pub feasible: bool,
    /// `tr λ`; bounds `s_max` from above whenever `feasible`.
    pub upper_bound: f64,
    pub min_eig_lambda: f64,
    pub min_eig_gap: f64,
    pub normalization_error: f64,
}

/// Checks `λ ≥ 0`, `λ ≥ m·Σ` and `m·n = 1`.
pub fn certificate_check(cert: &DualCertificate, ch: &PauliChannel, n: [f64; 3]) -> Result<CertificateCheck> {
    let n = unit_direction(n)?;
    if cert.lambda.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "certificate λ must be 4×4, got {}×{}",
            cert.lambda.dim(),
            cert.lambda.dim()
        )));
    }
    let ms = sigma_operators(ch).dot(cert.m);
    let min_eig_lambda = cert.lambda.min_eigenvalue();
    let min_eig_gap = cert.lambda.sub(&ms).min_eigenvalue();
    let normalization_error = (dot3(cert.m, n) - 1.0).abs();
    Ok(CertificateCheck {
        feasible: min_eig_lambda >= -PSD_TOL
            && min_eig_gap >= -PSD_TOL
            && normalization_error <= NORMALIZATION_TOL,
        upper_bound: cert.upper_bound(),
        min_eig_lambda,
        min_eig_gap,
        normalization_error,
    })
}

/// `(n_1, n_2)` completing `n` to a right-handed orthonormal frame: `n_1`
/// comes from the canonical axis least aligned with `n`, `n_2 = n × n_1`.
pub fn orthonormal_completion(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = (0..3)
        .min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let along = dot3(e, n);
    let raw = [0, 1, 2].map(|j| e[j] - along * n[j]);
    let len = dot3(raw, raw).sqrt();
    let n1 = raw.map(|x| x / len);
    (n1, cross3(n, n1))
}

/// Best feasible primal point found by [`primal_search`].
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub best_s: f64,
    pub best_effect: HermitianOp,
    pub iterations: usize,
    pub seed: u64,
}

/// Primal feasibility: `0 ≤ A′ ≤ 1` and `tr[A′(n_i·Σ)] = 0` for the
/// orthogonal completion `n_1, n_2`. Returns the objective `tr[A′(n·Σ)]`
/// when feasible.
pub fn primal_objective(effect: &HermitianOp, ch: &PauliChannel, n: [f64; 3]) -> Result<Option<f64>> {
    let n = unit_direction(n)?;
    if effect.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "primal effect must be 4×4, got {}×{}",
            effect.dim(),
            effect.dim()
        )));
    }
    let sigma = sigma_operators(ch);
    let (n1, n2) = orthonormal_completion(n);
    let es = effect.eig();
    let bounded = es.values[0] <= 1.0 + PSD_TOL && es.values[3] >= -PSD_TOL;
    let aligned = [n1, n2]
        .iter()
        .all(|&v| effect.trace_product(&sigma.dot(v)).abs() <= DIRECTION_CONSTRAINT_TOL);
    Ok((bounded && aligned).then(|| effect.trace_product(&sigma.dot(n))))
}

/// Search state: the constraint operators and objective for one instance.
struct PrimalProblem {
    objective: HermitianOp,
    /// Hilbert–Schmidt orthonormal basis of `span{n_1·Σ, n_2·Σ}`.
    constraints: Vec<HermitianOp>,
}

impl PrimalProblem {
    fn new(ch: &PauliChannel, n: [f64; 3]) -> Self {
        let sigma = sigma_operators(ch);
        let (n1, n2) = orthonormal_completion(n);
        let mut constraints: Vec<HermitianOp> = Vec::new();
        for g in [sigma.dot(n1), sigma.dot(n2)] {
            let mut g = g;
            for b in &constraints {
                g = g.sub(&b.scale(g.trace_product(b)));
            }
            let norm = g.trace_product(&g).sqrt();
            if norm > 1e-12 {
                constraints.push(g.scale(1.0 / norm));
            }
        }
        Self {
            objective: sigma.dot(n),
            constraints,
        }
    }

    /// Feasible effect built from a rank-2 projection: remove the
    /// constraint components, then shrink toward `½·1` until the spectrum
    /// fits in `[0, 1]`. Returns the better of the effect and its
    /// complement together with its objective value.
    fn candidate(&self, frame: &[Vec<C64>]) -> (HermitianOp, f64) {
        let mut x = HermitianOp::symmetrized(
            frame
                .iter()
                .fold(CMat::zeros(4, 4), |acc, v| &acc + &CMat::outer(v, v)),
        );
        for b in &self.constraints {
            x = x.sub(&b.scale(x.trace_product(b)));
        }
        let half = HermitianOp::identity(4).scale(0.5);
        let centred = x.sub(&half);
        let es = centred.eig();
        let radius = es.values[0].abs().max(es.values[3].abs());
        let alpha = if radius > 0.5 { 0.5 / radius } else { 1.0 };
        let shift = centred.scale(alpha);
        let value = shift.trace_product(&self.objective);
        if value >= 0.0 {
            (half.add(&shift), value)
        } else {
            (half.sub(&shift), -value)
        }
    }
}

fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn random_frame(rng: &mut impl Rng) -> Vec<Vec<C64>> {
    loop {
        let frame = orthonormalize(&[gaussian_vector(rng, 4), gaussian_vector(rng, 4)]);
        if frame.len() == 2 {
            return frame;
        }
    }
}

fn perturb_frame(rng: &mut impl Rng, frame: &[Vec<C64>], step: f64) -> Vec<Vec<C64>> {
    let moved: Vec<Vec<C64>> = frame
        .iter()
        .map(|v| {
            let noise = gaussian_vector(rng, 4);
            v.iter().zip(noise).map(|(a, b)| a + b * step).collect()
        })
        .collect();
    let out = orthonormalize(&moved);
    if out.len() == 2 {
        out
    } else {
        frame.to_vec()
    }
}

/// Randomized lower bound on `s_max` along `n` from feasible primal points.
///
/// Candidates are rank-2 projections on the 4-dimensional ancilla label
/// space, stripped of their components along the constraint operators and
/// shrunk toward `½·1` until they are effects. A tenth of the
/// budget goes to independent random starts; the rest hill-climbs from the
/// best one with Gaussian perturbations whose scale halves after a run of
/// rejections. Every evaluation counts as one iteration.
pub fn primal_search(ch: &PauliChannel, n: [f64; 3], iterations: usize, seed: u64) -> Result<SearchReport> {
    let n = unit_direction(n)?;
    if iterations == 0 {
        return Err(Error::ParameterOutOfRange("primal search needs at least one iteration".into()));
    }
    let problem = PrimalProblem::new(ch, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut best_effect = HermitianOp::identity(4).scale(0.5);
    let mut best_s = 0.0;
    let mut best_frame = random_frame(&mut rng);
    let consider = |effect: HermitianOp, value: f64, best_s: &mut f64, best: &mut HermitianOp| -> bool {
        if value > *best_s {
            if let Ok(Some(checked)) = primal_objective(&effect, ch, n) {
                *best_s = checked;
                *best = effect;
                return true;
            }
        }
        false
    };

    let starts = (iterations / 10).max(1);
    for i in 0..starts {
        let frame = if i == 0 { best_frame.clone() } else { random_frame(&mut rng) };
        let (effect, value) = problem.candidate(&frame);
        if consider(effect, value, &mut best_s, &mut best_effect) {
            best_frame = frame;
        }
    }

    let mut step = 0.3;
    let mut misses = 0;
    for _ in starts..iterations {
        let frame = perturb_frame(&mut rng, &best_frame, step);
        let (effect, value) = problem.candidate(&frame);
        if consider(effect, value, &mut best_s, &mut best_effect) {
            best_frame = frame;
            misses = 0;
        } else {
            misses += 1;
            if misses >= 40 {
                step = (step * 0.5).max(1e-6);
                misses = 0;
            }
        }
    }

    Ok(SearchReport {
        best_s,
        best_effect,
        iterations,
        seed,
    })
}

/// `GG†/tr(GG†)` for a 2×2 matrix `G` of standard complex Gaussians.
pub fn random_density_matrix(rng: &mut impl Rng) -> HermitianOp {
    let g = CMat::from_vec(2, 2, gaussian_vector(rng, 4));
    let rho = HermitianOp::symmetrized(&g * &g.adjoint());
    let tr = rho.trace();
    rho.scale(1.0 / tr)
}

/// `count` random states drawn from a generator seeded with `seed`.
pub fn random_states(count: usize, seed: u64) -> Vec<HermitianOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_density_matrix(&mut rng)).collect()
}

/// Isometry `C^cols → C^rows` with Gaussian-random orthonormal columns.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    assert!(cols <= rows);
    loop {
        let vs: Vec<Vec<C64>> = (0..cols).map(|_| gaussian_vector(rng, rows)).collect();
        let basis = orthonormalize(&vs);
        if basis.len() == cols {
            let mut w = CMat::zeros(rows, cols);
            for (j, v) in basis.iter().enumerate() {
                w.set_column(j, v);
            }
            return w;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstrumentCheck {
    /// `max ‖Σ_x Φ_x(ρ) − Ψ(ρ)‖` (largest entry).
    pub max_channel_error: f64,
    /// `max |tr Φ_x(ρ) − tr ρA(x)|`.
    pub max_probability_error: f64,
    pub trials: usize,
}

impl InstrumentCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_channel_error <= tol && self.max_probability_error <= tol
    }
}

/// Runs the instrument `Φ_x(ρ) = tr_K[VρV†(1 ⊗ A′(x))]` on random states
/// and compares against the channel and the induced observable.
pub fn instrument_consistency(
    aprime: &BinaryObservable,
    ch: &PauliChannel,
    trials: usize,
    seed: u64,
) -> Result<InstrumentCheck> {
    let induced = induced_observable(aprime, ch)?;
    instrument_consistency_against(aprime, ch, &induced, trials, seed)
}

/// As [`instrument_consistency`], comparing statistics with a given
/// reference observable instead of the induced one.
pub fn instrument_consistency_against(
    aprime: &BinaryObservable,
    ch: &PauliChannel,
    reference: &BinaryObservable,
    trials: usize,
    seed: u64,
) -> Result<InstrumentCheck> {
    if reference.dim() != 2 {
        return Err(Error::DimensionMismatch("reference observable must act on a qubit".into()));
    }
    let aprime = restrict_to_support(aprime, ch)?;
    let dil = stinespring_dilate(ch);
    let mut check = InstrumentCheck {
        max_channel_error: 0.0,
        max_probability_error: 0.0,
        trials,
    };
    for rho in random_states(trials, seed) {
        let branches = Outcome::ALL.map(|x| dil.instrument_branch(rho.as_mat(), aprime.effect(x)));
        let total = &branches[0] + &branches[1];
        check.max_channel_error = check
            .max_channel_error
            .max(total.max_abs_diff(&ch.apply_mat(rho.as_mat())));
        for x in Outcome::ALL {
            let err = (branches[x.index()].trace().re - reference.probability(&rho, x)).abs();
            check.max_probability_error = check.max_probability_error.max(err);
        }
    }
    Ok(check)
}

/// Instrument `Φ_x(ρ) = Λ′(Â(x)TρT†Â(x))` built from the mother channel of
/// `obs` followed by `post` (Kraus operators of a channel out of the
/// Naimark space, or the identity when `None`). Checks that outcome
/// probabilities are those of `obs` and that the branches sum to
/// `Λ′ ∘ Λ_A`.
pub fn mother_instrument_check(
    obs: &BinaryObservable,
    post: Option<&[CMat]>,
    trials: usize,
    seed: u64,
) -> Result<InstrumentCheck> {
    let dil = naimark_dilate(obs);
    let mother = dil.mother_channel();
    if let Some(kraus) = post {
        if kraus.iter().any(|k| k.cols() != dil.dim_k()) {
            return Err(Error::DimensionMismatch(format!(
                "post-processing channel must act on dimension {}",
                dil.dim_k()
            )));
        }
    }
    let apply_post = |x: &CMat| match post {
        None => x.clone(),
        Some(kraus) => kraus
            .iter()
            .skip(1)
            .fold(kraus[0].sandwich(x), |acc, k| &acc + &k.sandwich(x)),
    };
    let mut check = InstrumentCheck {
        max_channel_error: 0.0,
        max_probability_error: 0.0,
        trials,
    };
    for rho in random_states(trials, seed) {
        let branches = Outcome::ALL.map(|x| apply_post(&mother.instrument_branch(rho.as_mat(), x)));
        let total = &branches[0] + &branches[1];
        let want = apply_post(&mother.apply_mat(rho.as_mat()));
        check.max_channel_error = check.max_channel_error.max(total.max_abs_diff(&want));
        for x in Outcome::ALL {
            let err = (branches[x.index()].trace().re - obs.probability(&rho, x)).abs();
            check.max_probability_error = check.max_probability_error.max(err);
        }
    }
    Ok(check)
}

/// Random channel out of dimension `dim_in` given by an isometry
/// `C^dim_in → C^dim_out ⊗ C^env`; returns its Kraus operators.
pub fn random_channel_kraus(dim_in: usize, dim_out: usize, env: usize, rng: &mut impl Rng) -> Vec<CMat> {
    let w = random_isometry(dim_out * env, dim_in, rng);
    (0..env)
        .map(|e| CMat::from_fn(dim_out, dim_in, |i, j| w[(i * env + e, j)]))
        .collect()
}

/// Joint measurability of `A_{s,n}` and `A_{t,m}` with `cos θ = n·m`:
/// `s² + t² − s²t²cos²θ ≤ 1`.
pub fn busch_cross_check(s: f64, t: f64, theta: f64) -> bool {
    let c = theta.cos();
    s * s + t * t - s * s * t * t * c * c <= 1.0
}
