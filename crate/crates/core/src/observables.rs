//! Binary qubit observables: the unbiased family `A_{s,n}(±) = ½(1 ± s n·σ)`,
//! general two-outcome POVMs, and classical post-processing between them.

use crate::error::{Error, Result};
use crate::linalg::{CMat, HermitianOp, DEFAULT_TOL};

/// Tolerance for effects summing to the identity.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Outcome label of a binary observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

/// Euclidean norm of a real 3-vector.
pub fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Accepts vectors within `1e−9` of unit length and rescales them exactly
/// onto the sphere; anything further off is a caller error.
pub fn unit_direction(n: [f64; 3]) -> Result<[f64; 3]> {
    let len = norm3(n);
    if !len.is_finite() || (len - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidObservable(format!(
            "Bloch direction must be a unit vector, got norm {len}"
        )));
    }
    Ok(n.map(|x| x / len))
}

/// Unbiased binary qubit observable `A_{s,n}` with sharpness `s ∈ [0,1]` and
/// unit Bloch direction `n`.
///
/// At `s = 0` the observable is the fair coin `½·1` for either outcome and
/// the direction is irrelevant: it is stored as `(0,0,1)` and equality
/// ignores it.
#[derive(Clone, Copy, Debug)]
pub struct UnbiasedBinaryObservable {
    s: f64,
    n: [f64; 3],
}

impl UnbiasedBinaryObservable {
    pub fn new(s: f64, n: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidObservable(format!(
                "sharpness must lie in [0,1], got {s}"
            )));
        }
        let n = unit_direction(n)?;
        let n = if s == 0.0 { [0.0, 0.0, 1.0] } else { n };
        Ok(Self { s, n })
    }

    /// `X_s`
    pub fn x(s: f64) -> Result<Self> {
        Self::new(s, [1.0, 0.0, 0.0])
    }

    /// `Y_s`
    pub fn y(s: f64) -> Result<Self> {
        Self::new(s, [0.0, 1.0, 0.0])
    }

    /// `Z_s`
    pub fn z(s: f64) -> Result<Self> {
        Self::new(s, [0.0, 0.0, 1.0])
    }

    pub fn sharpness(&self) -> f64 {
        self.s
    }

    pub fn direction(&self) -> [f64; 3] {
        self.n
    }

    /// Bloch vector `s·n`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        self.n.map(|x| self.s * x)
    }

    /// `A_{s,n}(±) = ½(1 ± s n·σ)`
    pub fn effect(&self, outcome: Outcome) -> HermitianOp {
        let k = 0.5 * outcome.sign() * self.s;
        HermitianOp::from_pauli([0.5, k * self.n[0], k * self.n[1], k * self.n[2]])
    }

    pub fn to_binary(&self) -> BinaryObservable {
        BinaryObservable {
            plus: self.effect(Outcome::Plus),
            minus: self.effect(Outcome::Minus),
        }
    }
}

impl PartialEq for UnbiasedBinaryObservable {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && (self.s == 0.0 || self.n == other.n)
    }
}

/// Free-standing form of [`UnbiasedBinaryObservable::effect`].
pub fn effect_of(obs: &UnbiasedBinaryObservable, outcome: Outcome) -> HermitianOp {
    obs.effect(outcome)
}

/// Two-outcome POVM on any finite dimension (qubit observables, and
/// observables on a dilation space).
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryObservable {
    plus: HermitianOp,
    minus: HermitianOp,
}

impl BinaryObservable {
    /// Validates positivity (tol `1e−10`) and completeness (tol `1e−12`).
    pub fn new(plus: HermitianOp, minus: HermitianOp) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::InvalidObservable(format!(
                "effects have different dimensions {} and {}",
                plus.dim(),
                minus.dim()
            )));
        }
        for (name, e) in [("+", &plus), ("-", &minus)] {
            let min = e.min_eigenvalue();
            if min < -DEFAULT_TOL {
                return Err(Error::InvalidObservable(format!(
                    "effect {name} is not positive (min eigenvalue {min:.3e})"
                )));
            }
        }
        let defect = (plus.add(&minus).as_mat()).max_abs_diff(&CMat::identity(plus.dim()));
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidObservable(format!(
                "effects do not sum to the identity (deviation {defect:.3e})"
            )));
        }
        Ok(Self { plus, minus })
    }

    /// Builds `{E, 1 − E}` from a single effect.
    pub fn from_effect(plus: HermitianOp) -> Result<Self> {
        let minus = HermitianOp::identity(plus.dim()).sub(&plus);
        Self::new(plus, minus)
    }

    /// `T(±) = (w, 1−w)·1`
    pub fn trivial(dim: usize, weight_plus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight_plus) {
            return Err(Error::InvalidObservable(format!(
                "trivial observable weight must lie in [0,1], got {weight_plus}"
            )));
        }
        Ok(Self {
            plus: HermitianOp::identity(dim).scale(weight_plus),
            minus: HermitianOp::identity(dim).scale(1.0 - weight_plus),
        })
    }

    pub(crate) fn from_parts_unchecked(plus: HermitianOp, minus: HermitianOp) -> Self {
        Self { plus, minus }
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn effect(&self, outcome: Outcome) -> &HermitianOp {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }

    pub fn effects(&self) -> [&HermitianOp; 2] {
        [&self.plus, &self.minus]
    }

    /// Outcome probability `tr(ρ A(x))`.
    pub fn probability(&self, rho: &HermitianOp, outcome: Outcome) -> f64 {
        rho.trace_product(self.effect(outcome))
    }

    /// Principal compression of both effects onto the given basis indices.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self {
            plus: self.plus.restrict(indices),
            minus: self.minus.restrict(indices),
        }
    }

    /// Qubit observables of the form `½(1 ± a·σ)` map back to `A_{s,n}`.
    pub fn as_unbiased(&self, tol: f64) -> Option<UnbiasedBinaryObservable> {
        let c = self.plus.pauli_expand().ok()?;
        if (c[0] - 0.5).abs() > tol {
            return None;
        }
        let a = [2.0 * c[1], 2.0 * c[2], 2.0 * c[3]];
        let s = norm3(a);
        if s <= tol {
            return UnbiasedBinaryObservable::new(0.0, [0.0, 0.0, 1.0]).ok();
        }
        UnbiasedBinaryObservable::new(s.min(1.0), a.map(|x| x / s)).ok()
    }
}

/// Column-stochastic 2×2 matrix `μ_{xy}`: outcome `y` of the input is
/// relabelled as `x` with probability `μ_{xy}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PostProcessing {
    matrix: [[f64; 2]; 2],
}

impl PostProcessing {
    pub fn new(matrix: [[f64; 2]; 2]) -> Result<Self> {
        for row in &matrix {
            for &m in row {
                if !(-COMPLETENESS_TOL..=1.0 + COMPLETENESS_TOL).contains(&m) {
                    return Err(Error::InvalidPostProcessing(format!(
                        "entry {m} outside [0,1]"
                    )));
                }
            }
        }
        for y in 0..2 {
            let col: f64 = matrix[0][y] + matrix[1][y];
            if (col - 1.0).abs() > COMPLETENESS_TOL {
                return Err(Error::InvalidPostProcessing(format!(
                    "column {y} sums to {col}, expected 1"
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// The relabelling that takes `A_{s,n}` to `A_{t,n}`; exists iff `t ≤ s`
    /// (and `s ≠ 0`).
    pub fn sharpness_reduction(s: f64, t: f64) -> Result<Self> {
        if s == 0.0 {
            return Err(Error::InvalidPostProcessing(
                "no unique post-processing from a trivial observable".into(),
            ));
        }
        let a = (s + t) / (2.0 * s);
        let b = (s - t) / (2.0 * s);
        Self::new([[a, b], [b, a]])
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.matrix
    }
}

/// `(μ∘A)(x) = Σ_y μ_{xy} A(y)`
pub fn post_process(obs: &BinaryObservable, mu: &PostProcessing) -> BinaryObservable {
    let m = mu.matrix();
    let combine = |row: [f64; 2]| obs.plus.scale(row[0]).add(&obs.minus.scale(row[1]));
    BinaryObservable::from_parts_unchecked(combine(m[0]), combine(m[1]))
}

/// Whether `A_{t,n}` is a post-processing of `A_{s,n}`, i.e. `t ≤ s`.
pub fn noise_order(t: f64, s: f64) -> bool {
    t <= s + 1e-15
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, ONE, ZERO};
    use proptest::prelude::*;

    #[test]
    fn trivial_observable_effect() {
        for n in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8]] {
            let obs = UnbiasedBinaryObservable::new(0.0, n).unwrap();
            let e = obs.effect(Outcome::Plus);
            assert!(e.as_mat().max_abs_diff(&CMat::identity(2).scale_re(0.5)) == 0.0);
        }
    }

    #[test]
    fn trivial_observables_compare_equal_across_directions() {
        let a = UnbiasedBinaryObservable::new(0.0, [1.0, 0.0, 0.0]).unwrap();
        let b = UnbiasedBinaryObservable::new(0.0, [0.0, 1.0, 0.0]).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            UnbiasedBinaryObservable::x(0.5).unwrap(),
            UnbiasedBinaryObservable::y(0.5).unwrap()
        );
    }

    #[test]
    fn sharp_z_plus_is_projector_onto_up() {
        let e = UnbiasedBinaryObservable::z(1.0).unwrap().effect(Outcome::Plus);
        assert_eq!(*e.as_mat(), CMat::diagonal(&[ONE, ZERO]));
    }

    #[test]
    fn noisy_x_effect_matches_definition() {
        let e = UnbiasedBinaryObservable::x(0.8).unwrap().effect(Outcome::Plus);
        let want = (&CMat::identity(2) + &pauli(1).scale_re(0.8)).scale_re(0.5);
        assert!(e.as_mat().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn direction_validation() {
        assert!(UnbiasedBinaryObservable::new(0.5, [1.0 + 5e-10, 0.0, 0.0]).is_ok());
        assert!(UnbiasedBinaryObservable::new(0.5, [1.1, 0.0, 0.0]).is_err());
        assert!(UnbiasedBinaryObservable::new(1.2, [1.0, 0.0, 0.0]).is_err());
        assert!(UnbiasedBinaryObservable::new(f64::NAN, [1.0, 0.0, 0.0]).is_err());
        let obs = UnbiasedBinaryObservable::new(0.5, [1.0 + 5e-10, 0.0, 0.0]).unwrap();
        assert_eq!(obs.direction(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn invalid_binary_observables_rejected() {
        let e = HermitianOp::new(pauli(3)).unwrap();
        assert!(BinaryObservable::from_effect(e).is_err());
        let half = HermitianOp::identity(2).scale(0.5);
        assert!(BinaryObservable::new(half.clone(), half.scale(0.9)).is_err());
    }

    #[test]
    fn identity_post_processing_is_noop() {
        let obs = UnbiasedBinaryObservable::new(0.7, [0.0, 0.6, 0.8]).unwrap().to_binary();
        assert_eq!(post_process(&obs, &PostProcessing::identity()), obs);
    }

    #[test]
    fn total_coarse_graining_gives_trivial_observable() {
        let obs = UnbiasedBinaryObservable::x(0.9).unwrap().to_binary();
        let mu = PostProcessing::new([[0.5, 0.5], [0.5, 0.5]]).unwrap();
        let out = post_process(&obs, &mu);
        let half = CMat::identity(2).scale_re(0.5);
        for e in out.effects() {
            assert!(e.as_mat().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn non_stochastic_post_processing_rejected() {
        assert!(PostProcessing::new([[0.7, 0.5], [0.5, 0.5]]).is_err());
        assert!(PostProcessing::new([[1.2, 0.0], [-0.2, 1.0]]).is_err());
        assert!(PostProcessing::sharpness_reduction(0.3, 0.8).is_err());
        assert!(PostProcessing::sharpness_reduction(0.0, 0.0).is_err());
    }

    #[test]
    fn noise_order_examples() {
        assert!(noise_order(0.3, 0.8));
        assert!(!noise_order(0.8, 0.3));
        assert!(noise_order(0.5, 0.5));
    }

    #[test]
    fn effects_sum_to_identity_exactly_in_pauli_coefficients() {
        let obs = UnbiasedBinaryObservable::new(0.37, [0.48, 0.6, 0.64]).unwrap();
        let p = obs.effect(Outcome::Plus).pauli_expand().unwrap();
        let m = obs.effect(Outcome::Minus).pauli_expand().unwrap();
        let sum: Vec<f64> = p.iter().zip(&m).map(|(a, b)| a + b).collect();
        assert_eq!(sum, vec![1.0, 0.0, 0.0, 0.0]);
    }

    fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
        (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
            let r = (1.0 - z * z).sqrt();
            [r * phi.cos(), r * phi.sin(), z]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn post_processing_preserves_validity(
            s in 0.0f64..=1.0, n in unit_vector(), a in 0.0f64..=1.0, b in 0.0f64..=1.0
        ) {
            let obs = UnbiasedBinaryObservable::new(s, n).unwrap().to_binary();
            let mu = PostProcessing::new([[a, b], [1.0 - a, 1.0 - b]]).unwrap();
            let out = post_process(&obs, &mu);
            prop_assert!(BinaryObservable::new(out.effect(Outcome::Plus).clone(),
                                               out.effect(Outcome::Minus).clone()).is_ok());
        }

        #[test]
        fn sharpness_reduction_reproduces_target(s in 0.01f64..=1.0, frac in 0.0f64..=1.0, n in unit_vector()) {
            let t = s * frac;
            let src = UnbiasedBinaryObservable::new(s, n).unwrap();
            let mu = PostProcessing::sharpness_reduction(s, t).unwrap();
            let out = post_process(&src.to_binary(), &mu);
            let want = UnbiasedBinaryObservable::new(t, n).unwrap().to_binary();
            for x in Outcome::ALL {
                prop_assert!(out.effect(x).as_mat().max_abs_diff(want.effect(x).as_mat()) <= 1e-12);
            }
        }
    }
}
