//! Randomized search over environment measurements, compared with the
//! closed-form optimum.
//!
//! cargo run --release --example primal_search

use pauli_compat::channels::PauliChannel;
use pauli_compat::compatibility::s_max;
use pauli_compat::verify::primal_search;

fn main() -> pauli_compat::Result<()> {
    let n = [0.48, 0.6, 0.64];
    for p in [[0.4, 0.3, 0.2, 0.1], [0.7, 0.1, 0.1, 0.1], [0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]] {
        let ch = PauliChannel::new(p)?;
        let exact = s_max(&ch, n)?;
        for iterations in [100, 1_000, 10_000] {
            let report = primal_search(&ch, n, iterations, 42)?;
            println!("p = {p:.3?}  {iterations:>6} iterations: best {:.6}  exact {exact:.6}", report.best_s);
        }
    }
    Ok(())
}
