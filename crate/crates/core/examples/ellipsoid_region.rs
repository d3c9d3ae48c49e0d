//! Print the boundary of the compatible region for a channel as CSV.
//!
//! cargo run --example ellipsoid_region -- 0.4 0.3 0.2 0.1 > region.csv

use pauli_compat::channels::PauliChannel;
use pauli_compat::compatibility::{ellipsoid_sample, p_plus_minus};
use pauli_compat::formats::ellipsoid_csv;

fn main() -> pauli_compat::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let p = match args.as_slice() {
        [a, b, c, d] => [*a, *b, *c, *d],
        _ => [0.4, 0.3, 0.2, 0.1],
    };
    let ch = PauliChannel::new(p)?;
    eprintln!("semi-axes p_+ = {:?}", p_plus_minus(&ch).p_plus);
    let sample = ellipsoid_sample(&ch, 400);
    eprintln!("geometry {:?}", sample.geometry);
    print!("{}", ellipsoid_csv(&sample));
    Ok(())
}
