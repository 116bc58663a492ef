//! Split a linear field into saddle, source and vortex parts and put it back together.
//!
//! Usage: `cargo run --example decompose -- [a11 a12 a21 a22]`

use geocorr::{correlate_linear, second_moment, LinearField, SymmetricDomain};

fn main() -> geocorr::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let m = match args.as_slice() {
        [a11, a12, a21, a22] => [[*a11, *a12], [*a21, *a22]],
        _ => [[0.8, -0.3], [0.5, 0.2]],
    };
    let domain = SymmetricDomain::unit_square();
    let v = LinearField::from_matrix(m, domain)?;
    let d = v.decompose();
    println!("v = {:?}", v.matrix());
    println!("saddle a = {:+.4}  saddle b = {:+.4}", d.a, d.b);
    println!("source c = {:+.4}  vortex d = {:+.4}", d.c, d.d);

    let moment = second_moment(domain);
    println!(
        "|v1|^2 = {:.6}  |v2|^2 = {:.6}",
        d.saddle_weight() * moment,
        d.source_vortex_weight() * moment
    );

    // the two parts are orthogonal under correlation
    let cross = correlate_linear(&v.saddle_part(), &v.source_vortex_part())?;
    println!("<v1, v2> = {}", cross.value);

    let back = d.recompose(domain)?;
    println!(
        "recomposed = {:?} (distance {:.1e})",
        back.matrix(),
        back.coefficient_distance(&v)
    );
    Ok(())
}
