//! The geometric algebra of the Euclidean plane.
//!
//! Basis: `[1, e1, e2, e12]` with `e1² = e2² = 1`, `e12² = -1` and `e1 e2 = e12`.
//! The even subalgebra `s + b e12` is isomorphic to the complex numbers; its
//! argument is what the registration loop feeds back as a rotation angle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the "is a vector" / "is a spinor" grade checks.
pub const GRADE_TOL: f64 = 1e-9;

/// A general element of Cl(2,0), stored densely as `(s, e1, e2, e12)`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Multivector2 {
    pub s: f64,
    #[serde(rename = "e1")]
    pub x: f64,
    #[serde(rename = "e2")]
    pub y: f64,
    #[serde(rename = "e12")]
    pub b: f64,
}

impl Multivector2 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const E12: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(s: f64, x: f64, y: f64, b: f64) -> Self {
        Self { s, x, y, b }
    }

    #[inline]
    pub const fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn vector(x: f64, y: f64) -> Self {
        Self::new(0.0, x, y, 0.0)
    }

    #[inline]
    pub const fn spinor(s: f64, b: f64) -> Self {
        Self::new(s, 0.0, 0.0, b)
    }

    /// `e^{θ e12} = cos θ + sin θ e12`.
    #[inline]
    pub fn exp_e12(theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self::spinor(cos, sin)
    }

    /// Geometric product `self * rhs`.
    #[inline]
    pub fn gp(self, rhs: Self) -> Self {
        let (a, c) = (self, rhs);
        Self {
            s: a.s * c.s + a.x * c.x + a.y * c.y - a.b * c.b,
            x: a.s * c.x + a.x * c.s - a.y * c.b + a.b * c.y,
            y: a.s * c.y + a.y * c.s + a.x * c.b - a.b * c.x,
            b: a.s * c.b + a.b * c.s + a.x * c.y - a.y * c.x,
        }
    }

    /// Reversion: grade k picks up the sign `(-1)^{k(k-1)/2}`, so only the bivector flips.
    #[inline]
    pub fn reverse(self) -> Self {
        Self::new(self.s, self.x, self.y, -self.b)
    }

    /// Euclidean norm of the coefficient 4-tuple.
    #[inline]
    pub fn magnitude(self) -> f64 {
        (self.s * self.s + self.x * self.x + self.y * self.y + self.b * self.b).sqrt()
    }

    #[inline]
    pub fn vector_part(self) -> Self {
        Self::vector(self.x, self.y)
    }

    #[inline]
    pub fn even_part(self) -> Self {
        Self::spinor(self.s, self.b)
    }

    pub fn is_vector(self) -> bool {
        let tol = GRADE_TOL * self.magnitude();
        self.s.abs() <= tol && self.b.abs() <= tol
    }

    pub fn is_spinor(self) -> bool {
        let tol = GRADE_TOL * self.magnitude();
        self.x.abs() <= tol && self.y.abs() <= tol
    }

    pub fn is_finite(self) -> bool {
        self.s.is_finite() && self.x.is_finite() && self.y.is_finite() && self.b.is_finite()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.s.abs().max(d.x.abs()).max(d.y.abs()).max(d.b.abs())
    }
}

impl fmt::Display for Multivector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // honours a precision, e.g. `{:.3}`
        let precision = f.precision();
        let num = |v: f64| match precision {
            Some(p) => format!("{:.*}", p, v.abs()),
            None => v.abs().to_string(),
        };
        let sign = |v: f64| if v.is_sign_negative() { "-" } else { "+" };
        let lead = if self.s.is_sign_negative() { "-" } else { "" };
        write!(f, "{lead}{}", num(self.s))?;
        for (v, blade) in [(self.x, "e1"), (self.y, "e2"), (self.b, "e12")] {
            write!(f, " {} {}{blade}", sign(v), num(v))?;
        }
        Ok(())
    }
}

impl Add for Multivector2 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.s + rhs.s,
            self.x + rhs.x,
            self.y + rhs.y,
            self.b + rhs.b,
        )
    }
}

impl AddAssign for Multivector2 {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Multivector2 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.s - rhs.s,
            self.x - rhs.x,
            self.y - rhs.y,
            self.b - rhs.b,
        )
    }
}

impl Neg for Multivector2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.s, -self.x, -self.y, -self.b)
    }
}

impl Mul for Multivector2 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.gp(rhs)
    }
}

impl Mul<f64> for Multivector2 {
    type Output = Self;
    #[inline]
    fn mul(self, k: f64) -> Self {
        Self::new(self.s * k, self.x * k, self.y * k, self.b * k)
    }
}

impl Mul<Multivector2> for f64 {
    type Output = Multivector2;
    #[inline]
    fn mul(self, m: Multivector2) -> Multivector2 {
        m * self
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can round up to TAU itself
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Wrap an angle into `(-π/2, π/2]`, i.e. reduce modulo a half turn.
pub fn wrap_half_turn(a: f64) -> f64 {
    let r = wrap_angle(2.0 * a) / 2.0;
    if r <= -PI / 2.0 {
        r + PI
    } else {
        r
    }
}

/// A rotation of the plane by `angle` (mathematically positive), carried as
/// the even unit element `e^{-angle e12} = cos(angle) - sin(angle) e12`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Rotor {
    angle: f64,
}

impl Rotor {
    pub fn new(angle: f64) -> Self {
        Self {
            angle: wrap_angle(angle),
        }
    }

    /// Angle in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn as_multivector(self) -> Multivector2 {
        Multivector2::exp_e12(-self.angle)
    }

    pub fn compose(self, other: Rotor) -> Rotor {
        Rotor::new(self.angle + other.angle)
    }

    pub fn inverse(self) -> Rotor {
        Rotor::new(-self.angle)
    }

    /// Rotate a pure vector: `e^{-α e12} v`.
    pub fn apply(self, v: Multivector2) -> Result<Multivector2> {
        if !v.is_vector() {
            return Err(Error::NotAVector { s: v.s, b: v.b });
        }
        Ok(self.as_multivector().gp(v.vector_part()).vector_part())
    }
}

/// Argument of the spinor `s + b e12`, in `(-π, π]`.
///
/// The element must be (numerically) even; a zero spinor has no argument.
pub fn spinor_arg(m: Multivector2) -> Result<f64> {
    if m.s == 0.0 && m.b == 0.0 {
        if m.x == 0.0 && m.y == 0.0 {
            return Err(Error::DegenerateSpinor);
        }
        return Err(Error::NotASpinor { x: m.x, y: m.y });
    }
    if !m.is_spinor() {
        return Err(Error::NotASpinor { x: m.x, y: m.y });
    }
    let phi = m.b.atan2(m.s);
    // atan2(-0.0, r < 0) yields -π; the half-open range wants +π
    Ok(if phi == -PI { PI } else { phi })
}
