//! Reduce a unital qubit channel to Pauli normal form and evaluate the
//! compatible sharpness in its own frame.
//!
//! cargo run --example unital_decompose

use pauli_compat::channels::{mix, unital_decompose, QubitChannelMap};
use pauli_compat::compatibility::s_max_unital;
use pauli_compat::linalg::{pauli, CMat, C64};

fn main() -> pauli_compat::Result<()> {
    let (c, s) = (0.4f64.cos(), 0.4f64.sin());
    let rz = CMat::diagonal(&[C64::new(c, -s), C64::new(c, s)]);
    let hadamard = CMat::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).scale_re(0.5f64.sqrt());
    let channel = mix(
        &[
            QubitChannelMap::unitary(&rz)?,
            QubitChannelMap::unitary(&hadamard)?,
            QubitChannelMap::unitary(&pauli(2))?,
        ],
        &[0.5, 0.3, 0.2],
    )?;
    let (t, shift) = channel.bloch_action();
    println!("Bloch matrix {t:.4?}, shift {shift:.1?}");

    let dec = unital_decompose(&t)?;
    println!("Pauli normal form p = {:.6?}", dec.p.probabilities());
    let back = dec.bloch_matrix();
    let err = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| (back[i][j] - t[i][j]).abs()).fold(0.0, f64::max);
    println!("round trip error {err:.1e}");

    for n in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        println!("n = {n:?}: s_max = {:.6}", s_max_unital(&dec, n)?);
    }
    Ok(())
}
