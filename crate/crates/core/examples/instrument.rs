//! Run the joint instrument built from a Stinespring dilation and compare
//! its outputs with the channel and the target observable.
//!
//! cargo run --example instrument

use pauli_compat::channels::PauliChannel;
use pauli_compat::compatibility::optimal_primal;
use pauli_compat::dilations::{naimark_dilate, stinespring_dilate};
use pauli_compat::observables::{Outcome, UnbiasedBinaryObservable};
use pauli_compat::verify::{instrument_consistency_against, mother_instrument_check, random_states};

fn main() -> pauli_compat::Result<()> {
    let ch = PauliChannel::depolarizing(0.1)?;
    let n = [0.0, 0.0, 1.0];
    let primal = optimal_primal(&ch, n)?;
    let target = UnbiasedBinaryObservable::new(primal.s_max, n)?;
    println!("channel {:?}, sharpest compatible spin measurement s = {:.6}", ch.probabilities(), primal.s_max);

    let check = instrument_consistency_against(&primal.observable(), &ch, &target.to_binary(), 100, 7)?;
    println!(
        "100 random states: channel error {:.1e}, probability error {:.1e}",
        check.max_channel_error, check.max_probability_error
    );

    let dil = stinespring_dilate(&ch);
    let effect = primal.observable().effect(Outcome::Plus).clone();
    let rho = &random_states(1, 3)[0];
    let branch = dil.instrument_branch(rho.as_mat(), &effect);
    println!("branch + on a random state:\n{branch:?}");
    println!("its trace {:.6} vs tr[ρA(+)] = {:.6}", branch.trace().re, target.to_binary().probability(rho, Outcome::Plus));

    // the mother instrument of the target itself, followed by nothing
    let mother = mother_instrument_check(&target.to_binary(), None, 50, 1)?;
    println!("mother instrument errors {:.1e} / {:.1e}", mother.max_channel_error, mother.max_probability_error);
    println!("Naimark dimension of the target {}", naimark_dilate(&target.to_binary()).dim_k());
    Ok(())
}
