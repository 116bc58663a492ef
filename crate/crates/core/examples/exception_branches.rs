//! The three special cases of the detection loop on pure saddles and aligned input.

use std::f64::consts::FRAC_PI_2;

use geocorr::{detect, DetectorConfig, ExceptionRules, LinearField, SymmetricDomain};

fn main() -> geocorr::Result<()> {
    let saddle = LinearField::saddle_a(SymmetricDomain::unit_square());
    for rules in [ExceptionRules::Symmetric, ExceptionRules::Literal] {
        let cfg = DetectorConfig::new(1e-8)?
            .with_max_iter(100)?
            .with_rules(rules);
        println!("{rules:?} rules");
        for theta in [0.4, -FRAC_PI_2, 0.0, FRAC_PI_2] {
            let r = detect(&saddle, &saddle.total_rotate(theta), &cfg)?;
            let branches: Vec<_> = r.branches().collect();
            println!(
                "  theta {theta:+.4}: {:?} in {} steps, alpha {:+.6}, branches {branches:?}",
                r.status, r.iterations, r.alpha
            );
        }
    }
    Ok(())
}
