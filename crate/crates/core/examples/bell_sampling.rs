//! Bell-difference sampling, the ancilla-free SWAP test, and the 6-copy η estimator.

use stabtest::quantum::{bias_report, gen_state, p_hat_table, q_table, StateKind};
use stabtest::sampling::{
    bell_difference_sample, empirical_law, estimate_eta_with_stats, swap_test_sample,
    total_variation, EtaEstimate, SamplerConfig, SamplerMode,
};

fn main() -> stabtest::Result<()> {
    let rho = gen_state(&StateKind::MixedGinibre { rank: 2 }, 2, 21)?;
    let cfg = SamplerConfig::new(SamplerMode::Measurement, 5, 4);

    let samples = bell_difference_sample(&rho, &cfg, 100_000)?;
    let tv = total_variation(&empirical_law(2, &samples)?, &q_table(&rho))?;
    println!(
        "Bell difference: TV(empirical, q) = {tv:.4} over {} samples",
        samples.len()
    );

    let x = "x:10,z:01".parse()?;
    let est = EtaEstimate::from_outcomes(&swap_test_sample(&rho, &x, &cfg, 100_000)?)?;
    println!(
        "SWAP test on (rho, W_x rho W_x), x = {x}: {:.4} ± {:.4}, exact {:.4}",
        est.mean,
        est.std_error,
        16.0 * p_hat_table(&rho).get(&x)
    );

    let exact = bias_report(&rho).eta;
    for mode in [SamplerMode::Measurement, SamplerMode::ExactDistribution] {
        let (est, stats) = estimate_eta_with_stats(&rho, &SamplerConfig::new(mode, 9, 4), 200_000)?;
        println!(
            "{mode:?}: eta ≈ {:.4} ± {:.4} (exact {exact:.4}), {} Bell measurements, {} copies",
            est.mean,
            est.std_error,
            stats.bell_measurements,
            stats.copies_consumed()
        );
    }
    Ok(())
}
