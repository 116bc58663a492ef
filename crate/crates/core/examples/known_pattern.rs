//! When the reference pattern is known, one correlation with its saddle part
//! gives the angle directly: `α = -½ arg(u ⋆ v1)`.

use geocorr::{detect_known_pattern, LinearField, SymmetricDomain};

fn main() -> geocorr::Result<()> {
    let v = LinearField::new(0.6, 0.9, -0.1, 0.4, SymmetricDomain::unit_disk())?;
    for alpha in [-1.2, 0.05, 0.8, 1.5] {
        let got = detect_known_pattern(&v, &v.total_rotate(alpha))?;
        println!("alpha {alpha:+.3} -> {got:+.12}");
    }
    Ok(())
}
