//! Runs every registered check and prints a summary table.

use stabtest::verify::{resolve_suite, run_suite, REGISTRY};

fn main() -> stabtest::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let names = resolve_suite("all", n)?;
    let reports = run_suite(&names, n, 50, 1)?;
    for (r, check) in reports
        .iter()
        .zip(REGISTRY.iter().filter(|c| names.contains(&c.name)))
    {
        let status = if r.passed() { "ok  " } else { "FAIL" };
        println!(
            "{status} {:<24} {:>7} instances  worst slack {:>10.2e}  {}",
            r.check_name, r.instances, r.worst_slack, check.claim
        );
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} checks at n = {n}, {failed} failed", reports.len());
    Ok(())
}
