//! Randomised accuracy campaign: error and iteration counts per accuracy level.
//!
//! Usage: `cargo run --release --example accuracy_table -- [trials] [seed]`

use geocorr::{run_campaign, TrialSpec};

fn main() -> geocorr::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    println!(
        "{:>8} {:>11} {:>11} {:>11} {:>10} {:>10} {:>8}",
        "eps", "avg error", "(converged)", "max error", "avg iter", "converged", "capped"
    );
    for eps in [0.1, 0.01, 1e-3, 1e-4, 1e-5] {
        let r = run_campaign(&TrialSpec::new(trials, eps, seed))?;
        println!(
            "{eps:>8.0e} {:>11.3e} {:>11.3e} {:>11.3e} {:>10.2} {:>10.5} {:>8}",
            r.avg_error,
            r.avg_error_converged,
            r.max_error,
            r.avg_iterations,
            r.converged_fraction,
            r.max_iter_exceeded
        );
    }
    Ok(())
}
