//! Geometric cross-correlation at the origin, `∫_A reverse(u(x)) v(x) dx`.
//!
//! For linear fields on a domain symmetric in both axes the integral only
//! needs the second moment `I_A = ∫_A |x|² dx`: the mixed moments vanish and
//! `∫ x1² = ∫ x2² = I_A / 2`. Sampled fields go through midpoint quadrature.

use rayon::prelude::*;
use serde::Serialize;

use crate::clifford2::{spinor_arg, Multivector2};
use crate::error::Result;
use crate::fields::{LinearField, SampledField, SymmetricDomain};

/// `∫_A (x1² + x2²) dx` over the domain.
pub fn second_moment(domain: SymmetricDomain) -> f64 {
    match domain {
        SymmetricDomain::Square { l } => 8.0 * l.powi(4) / 3.0,
        SymmetricDomain::Disk { r } => std::f64::consts::PI * r.powi(4) / 2.0,
    }
}

/// The correlation multivector together with its polar data.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationValue {
    pub value: Multivector2,
    /// `sqrt(s² + b²)`
    pub magnitude: f64,
}

impl CorrelationValue {
    pub fn new(value: Multivector2) -> Self {
        let magnitude = value.s.hypot(value.b);
        Self { value, magnitude }
    }

    /// Argument of the spinor part; fails for a zero correlation.
    pub fn argument(&self) -> Result<f64> {
        spinor_arg(self.value)
    }
}

/// Closed-form correlation of two linear fields on the same symmetric domain.
pub fn correlate_linear(u: &LinearField, v: &LinearField) -> Result<CorrelationValue> {
    u.ensure_same_domain(v)?;
    let half = 0.5 * second_moment(u.domain);
    let (p, q) = (u.matrix(), v.matrix());
    let s = p[0][0] * q[0][0] + p[0][1] * q[0][1] + p[1][0] * q[1][0] + p[1][1] * q[1][1];
    let b = p[0][0] * q[1][0] - p[1][0] * q[0][0] + p[0][1] * q[1][1] - p[1][1] * q[0][1];
    Ok(CorrelationValue::new(Multivector2::spinor(
        half * s,
        half * b,
    )))
}

/// Midpoint-rule correlation of two sampled fields on identical grids.
///
/// Rows are summed independently and then reduced in row order, so the result
/// does not depend on the thread count.
pub fn correlate_sampled(u: &SampledField, v: &SampledField) -> Result<CorrelationValue> {
    u.ensure_compatible(v)?;
    let n = u.n();
    let (uv, vv) = (u.values(), v.values());
    let rows: Vec<Multivector2> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = Multivector2::ZERO;
            for k in j * n..(j + 1) * n {
                let [u1, u2] = uv[k];
                let [v1, v2] = vv[k];
                acc += Multivector2::vector(u1, u2).reverse() * Multivector2::vector(v1, v2);
            }
            acc
        })
        .collect();
    let total = rows.into_iter().fold(Multivector2::ZERO, |a, r| a + r);
    Ok(CorrelationValue::new(total * u.cell_area()))
}

/// Pointwise integrand `reverse(u(x)) v(x)`.
pub fn product_at(u: &LinearField, v: &LinearField, x1: f64, x2: f64) -> Multivector2 {
    u.eval(x1, x2).reverse() * v.eval(x1, x2)
}

/// Squared L² norm of a linear field over its domain.
pub fn l2_norm_squared(v: &LinearField) -> f64 {
    let m = v.matrix();
    0.5 * second_moment(v.domain) * m.iter().flatten().map(|c| c * c).sum::<f64>()
}
