//! Decide compatibility of a noisy spin measurement with a few Pauli channels.
//!
//! cargo run --example verdict

use pauli_compat::channels::PauliChannel;
use pauli_compat::compatibility::{is_compatible, s_max, sharpest_direction};
use pauli_compat::observables::UnbiasedBinaryObservable;

fn main() -> pauli_compat::Result<()> {
    let n = [1.0 / 3f64.sqrt(); 3];
    let channels = [
        ("quantum NOT", PauliChannel::quantum_not()),
        ("depolarizing 0.25", PauliChannel::depolarizing(0.25)?),
        ("phase damping 0.3", PauliChannel::phase_damping(0.3)?),
        ("p = (0.4, 0.3, 0.2, 0.1)", PauliChannel::new([0.4, 0.3, 0.2, 0.1])?),
    ];
    for (name, ch) in &channels {
        let best = sharpest_direction(ch);
        println!("{name}");
        println!("  s_max along (1,1,1)/√3 = {:.6}", s_max(ch, n)?);
        println!("  sharpest axis {} with s_max = {:.6}", best.axis, best.s_max);
        for s in [0.5, 0.7, 1.0] {
            let v = is_compatible(&UnbiasedBinaryObservable::new(s, n)?, ch);
            println!("  s = {s}: compatible = {}", v.compatible);
        }
    }
    Ok(())
}
