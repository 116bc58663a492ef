//! Recover a total rotation with the iterative detector and print its trace.
//!
//! Usage: `cargo run --example detect -- [alpha] [eps]`

use geocorr::{detect, DetectorConfig, LinearField, SymmetricDomain};

fn main() -> geocorr::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>());
    let alpha = args.next().and_then(Result::ok).unwrap_or(2.1);
    let eps = args.next().and_then(Result::ok).unwrap_or(1e-8);

    let v = LinearField::new(0.9, -0.2, 0.4, 0.3, SymmetricDomain::unit_square())?;
    let u = v.total_rotate(alpha);
    let r = detect(&v, &u, &DetectorConfig::new(eps)?)?;

    for step in &r.trace {
        let branch = step
            .branch
            .map(|b| format!("  [{b:?}]"))
            .unwrap_or_default();
        println!(
            "{:>3}  phi {:+.3e}  alpha {:+.10}{branch}",
            step.iter, step.phi, step.alpha
        );
    }
    // a linear field only fixes the angle up to a half turn
    println!(
        "{:?} after {} iterations: alpha = {:.10}",
        r.status, r.iterations, r.alpha
    );
    println!(
        "true angle {alpha} (mod π: {:.10})",
        geocorr::wrap_half_turn(alpha)
    );
    println!("residual {:.2e}", r.corrected.coefficient_distance(&v));
    Ok(())
}
