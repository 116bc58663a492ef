//! How the correlation phase responds to the three kinds of rotation.
//!
//! Outer rotation shows up directly as `e^{-α e12}`. Total rotation turns
//! only the saddle part, by twice the angle, so the phase is a weighted
//! blend that always has the opposite sign and at most twice the size.

use geocorr::{correlate_linear, LinearField, SymmetricDomain};

fn main() -> geocorr::Result<()> {
    let v = LinearField::new(0.8, -0.3, 0.5, 0.2, SymmetricDomain::unit_square())?;
    let d = v.decompose();
    println!(
        "weights: saddle {:.3}, source/vortex {:.3}",
        d.saddle_weight(),
        d.source_vortex_weight()
    );
    println!(
        "{:>7} {:>10} {:>10} {:>10}",
        "alpha", "outer", "inner", "total"
    );
    for k in -4..=4 {
        let alpha = k as f64 * 0.35;
        let arg = |u: LinearField| correlate_linear(&u, &v).and_then(|c| c.argument());
        println!(
            "{alpha:>7.2} {:>10.4} {:>10.4} {:>10.4}",
            arg(v.outer_rotate(alpha))?,
            arg(v.inner_rotate(alpha))?,
            arg(v.total_rotate(alpha))?,
        );
    }
    Ok(())
}
