//! Products, reversion and rotors in the plane algebra.

use std::f64::consts::FRAC_PI_2;

use geocorr::{spinor_arg, Multivector2, Rotor};

fn main() -> geocorr::Result<()> {
    let (e1, e2, e12) = (Multivector2::E1, Multivector2::E2, Multivector2::E12);
    println!("e1 e2  = {}", e1 * e2);
    println!("e2 e1  = {}", e2 * e1);
    println!("e12^2  = {}", e12 * e12);

    // the product of two vectors is a spinor: dot product plus oriented area
    let a = Multivector2::vector(3.0, 1.0);
    let b = Multivector2::vector(1.0, 2.0);
    let ab = a * b;
    println!("a b    = {ab}, reverse = {}", ab.reverse());
    println!("angle from a to b = {:.6} rad", spinor_arg(ab)?);

    let quarter = Rotor::new(FRAC_PI_2);
    println!("rotor  = {:.6}", quarter.as_multivector());
    println!("R e1   = {:.6}", quarter.apply(e1)?);
    println!("R R e1 = {:.6}", quarter.compose(quarter).apply(e1)?);
    Ok(())
}
