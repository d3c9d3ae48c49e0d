//! Naimark and Stinespring dilations, and the channel-induced observable.
//!
//! cargo run --example dilations

use pauli_compat::channels::PauliChannel;
use pauli_compat::dilations::{induced_observable, naimark_dilate, sigma_operators, stinespring_dilate};
use pauli_compat::linalg::{CMat, HermitianOp};
use pauli_compat::observables::{BinaryObservable, Outcome, UnbiasedBinaryObservable};

fn main() -> pauli_compat::Result<()> {
    let obs = UnbiasedBinaryObservable::new(0.8, [0.0, 0.6, 0.8])?.to_binary();
    let naimark = naimark_dilate(&obs);
    println!("Naimark space dimension {}", naimark.dim_k());
    let err = naimark
        .reconstructed_effect(Outcome::Plus)
        .as_mat()
        .max_abs_diff(obs.effect(Outcome::Plus).as_mat());
    println!("V†PV reproduces the effect to {err:.1e}");

    let ch = PauliChannel::new([0.5, 0.25, 0.25, 0.0])?;
    let stine = stinespring_dilate(&ch);
    println!("Stinespring environment dimension {}", stine.dim_k());
    println!("Kraus labels {:?}", stine.kraus_basis_labels());
    let v = stine.isometry();
    let defect = (&v.adjoint() * v).max_abs_diff(&CMat::identity(2));
    println!("V†V = 1 to {defect:.1e}");

    // a measurement of σ_z ⊗ 1 on the environment labels
    let plus = HermitianOp::from_pauli([0.5, 0.0, 0.0, 0.5]).as_mat().kron(&CMat::identity(2));
    let aprime = BinaryObservable::from_effect(HermitianOp::new(plus)?)?;
    let induced = induced_observable(&aprime, &ch)?;
    println!("induced effect (+):\n{:?}", induced.effect(Outcome::Plus).as_mat());

    let sigma = sigma_operators(&ch);
    println!("Σ_3 on the full label space:\n{:?}", sigma.full(3).as_mat());
    Ok(())
}
