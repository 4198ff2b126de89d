//! Characteristic tables and test biases for a few generated states.

use stabtest::quantum::{bias_report, gen_state, p_table, q_table, StateKind};

fn main() -> stabtest::Result<()> {
    let kinds = [
        ("pure Haar", StateKind::PureHaar),
        ("rank-2 Ginibre", StateKind::MixedGinibre { rank: 2 }),
        (
            "depolarized stabilizer p=0.2",
            StateKind::DepolarizedStabilizer {
                p: 0.2,
                index: Some(0),
            },
        ),
        (
            "maximally mixed",
            StateKind::DepolarizedStabilizer {
                p: 1.0,
                index: Some(0),
            },
        ),
    ];
    println!(
        "{:<30} {:>8} {:>8} {:>8} {:>8}",
        "state (n = 2)", "purity", "eta", "eta_gnw", "eta'"
    );
    for (name, kind) in &kinds {
        let rho = gen_state(kind, 2, 11)?;
        let b = bias_report(&rho);
        println!(
            "{name:<30} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            b.purity, b.eta, b.eta_gnw, b.eta_prime
        );
    }

    let rho = gen_state(&StateKind::MixedGinibre { rank: 2 }, 1, 4)?;
    println!("\nn = 1 rank-2 state, p and q tables:");
    let (p, q) = (p_table(&rho), q_table(&rho));
    for (i, (a, b)) in p.values().iter().zip(q.values()).enumerate() {
        println!("  x = {i:02b}  p = {a:.5}  q = {b:.5}");
    }
    Ok(())
}
