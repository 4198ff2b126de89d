//! Brute-force stabilizer fidelity and the bounds that sandwich it.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use stabtest::quantum::bias_report;
use stabtest::stabilizer::{stabilizer_catalog, stabilizer_fidelity};
use stabtest::DensityMatrix;

fn main() -> stabtest::Result<()> {
    for n in 1..=3 {
        println!(
            "n = {n}: {} stabilizer states",
            stabilizer_catalog(n)?.len()
        );
    }

    // The T-type magic state cos(π/8)|0⟩ + sin(π/8)|1⟩.
    let t = DensityMatrix::from_pure(&[
        C64::new((PI / 8.0).cos(), 0.0),
        C64::new((PI / 8.0).sin(), 0.0),
    ])?;
    let (f, best) = stabilizer_fidelity(&t)?;
    println!(
        "T state: F = {f:.6} (cos²(π/8) = {:.6}), closest stabilizer {}",
        (PI / 8.0).cos().powi(2),
        serde_json::to_string(&best)?
    );

    let eta = bias_report(&t).eta;
    println!(
        "eta = {eta:.6} >= F^6 = {:.6}; close-regime bound (4 eta - 1)/3 = {:.6} <= F",
        f.powi(6),
        (4.0 * eta - 1.0) / 3.0
    );
    Ok(())
}
