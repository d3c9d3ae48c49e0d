//! Build the optimal measurement on the environment and the matching dual
//! certificate, then check both independently.
//!
//! cargo run --example certificate

use pauli_compat::channels::PauliChannel;
use pauli_compat::compatibility::{block_decompose, dual_certificate, optimal_primal};
use pauli_compat::dilations::induced_observable;
use pauli_compat::observables::Outcome;
use pauli_compat::verify::certificate_check;

fn main() -> pauli_compat::Result<()> {
    let ch = PauliChannel::new([0.4, 0.3, 0.2, 0.1])?;
    let n = [0.6, 0.0, 0.8];

    let primal = optimal_primal(&ch, n)?;
    println!("s_max = {:.12}", primal.s_max);
    println!("environment direction n' = {:?}", primal.n_prime);
    let induced = induced_observable(&primal.observable(), &ch)?;
    println!("induced effect (+):\n{:?}", induced.effect(Outcome::Plus).as_mat());

    let cert = dual_certificate(&ch, n)?;
    let check = certificate_check(&cert, &ch, n)?;
    println!("dual m = {:?}", cert.m);
    println!(
        "feasible = {}, upper bound = {:.12}, gap = {:.2e}",
        check.feasible,
        check.upper_bound,
        check.upper_bound - primal.s_max
    );

    let blocks = block_decompose(&primal, &ch)?;
    println!("block parameters g = {:?}, s = {:.6}", blocks.g, blocks.s);
    Ok(())
}
