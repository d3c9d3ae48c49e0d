//! Count the Pauli channels on a simplex lattice that are compatible with a
//! fixed observable, for a few sharpness values.
//!
//! cargo run --release --example simplex_region

use pauli_compat::compatibility::simplex_region_sample;
use pauli_compat::observables::UnbiasedBinaryObservable;

fn main() -> pauli_compat::Result<()> {
    let n = [1.0, 0.0, 0.0];
    for s in [0.0, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let obs = UnbiasedBinaryObservable::new(s, n)?;
        let nodes = simplex_region_sample(&obs, 41)?;
        let inside = nodes.iter().filter(|node| node.compatible).count();
        println!("s = {s:<4}  {inside:>6} of {} channels compatible", nodes.len());
    }
    Ok(())
}
