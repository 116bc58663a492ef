//! A non-linear field for which the correlation phase has the wrong sense.
//!
//! `v(r, φ) = e1 e^{2φ e12}` on the unit disk: correlating its totally rotated
//! copy with the original gives `π e^{+α e12}`, the opposite of what an outer
//! rotation gives. Naive correction by the measured phase doubles the error.

use geocorr::{correlate_sampled, AnalyticField, Multivector2, SampledField};

fn main() -> geocorr::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(512);
    let v = AnalyticField::counterexample();
    let sv = SampledField::sample(&v, n)?;
    for alpha in [0.3, -0.9, 1.2] {
        let total = SampledField::sample(&v.total_rotate(alpha), n)?;
        let outer = SampledField::sample(&v.outer_rotate(alpha), n)?;
        let ct = correlate_sampled(&total, &sv)?;
        let co = correlate_sampled(&outer, &sv)?;
        println!(
            "alpha {alpha:+.2}: total -> arg {:+.4} (|Δ| {:.1e}), outer -> arg {:+.4}",
            ct.argument()?,
            ct.value
                .max_abs_diff(Multivector2::exp_e12(alpha) * std::f64::consts::PI),
            co.argument()?,
        );
    }
    Ok(())
}
