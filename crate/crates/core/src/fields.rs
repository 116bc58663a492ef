//! Linear vector fields `v(x) = A x` on domains symmetric in both axes.
//!
//! Every linear field splits into two saddles, a source and a vortex:
//!
//! ```text
//! a(x) = x1 e1 - x2 e2      b(x) = x2 e1 + x1 e2
//! c(x) = x1 e1 + x2 e2      d(x) = x2 e1 - x1 e2
//! ```
//!
//! Under a total rotation by `α` the saddle part picks up `e^{-2α e12}` while
//! the source/vortex part is left untouched.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford2::Multivector2;
use crate::error::{Error, Result};

/// A region symmetric under reflection in both coordinate axes.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymmetricDomain {
    /// `[-l, l]²`
    Square { l: f64 },
    /// Closed disk of radius `r` about the origin.
    Disk { r: f64 },
}

impl SymmetricDomain {
    pub fn square(half_side: f64) -> Result<Self> {
        check_extent("half side", half_side)?;
        Ok(Self::Square { l: half_side })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        check_extent("radius", radius)?;
        Ok(Self::Disk { r: radius })
    }

    pub const fn unit_square() -> Self {
        Self::Square { l: 1.0 }
    }

    pub const fn unit_disk() -> Self {
        Self::Disk { r: 1.0 }
    }

    /// Re-checks the extent; needed after deserialization.
    pub fn validate(self) -> Result<Self> {
        match self {
            Self::Square { l } => Self::square(l),
            Self::Disk { r } => Self::disk(r),
        }
    }

    pub fn contains(self, x1: f64, x2: f64) -> bool {
        match self {
            Self::Square { l } => x1.abs() <= l && x2.abs() <= l,
            Self::Disk { r } => x1 * x1 + x2 * x2 <= r * r,
        }
    }

    /// Half side of the smallest origin-centred square containing the domain.
    pub fn bounding_half_side(self) -> f64 {
        match self {
            Self::Square { l } => l,
            Self::Disk { r } => r,
        }
    }
}

impl fmt::Display for SymmetricDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Square { l } => write!(f, "square(l={l})"),
            Self::Disk { r } => write!(f, "disk(r={r})"),
        }
    }
}

fn check_extent(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "domain {what} must be finite and > 0, got {v}"
        )))
    }
}

/// 2×2 rotation matrix for a mathematically positive turn by `alpha`.
fn rotation(alpha: f64) -> [[f64; 2]; 2] {
    let (s, c) = alpha.sin_cos();
    [[c, -s], [s, c]]
}

fn matmul(p: [[f64; 2]; 2], q: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    out
}

fn transpose(p: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[p[0][0], p[1][0]], [p[0][1], p[1][1]]]
}

/// `v(x) = (a11 x1 + a12 x2) e1 + (a21 x1 + a22 x2) e2` inside `domain`, zero outside.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearField {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub domain: SymmetricDomain,
}

impl LinearField {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64, domain: SymmetricDomain) -> Result<Self> {
        Self::from_matrix([[a11, a12], [a21, a22]], domain)
    }

    pub fn from_matrix(m: [[f64; 2]; 2], domain: SymmetricDomain) -> Result<Self> {
        if m.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite field coefficient in {m:?}"
            )));
        }
        Ok(Self::from_matrix_unchecked(m, domain.validate()?))
    }

    fn from_matrix_unchecked(m: [[f64; 2]; 2], domain: SymmetricDomain) -> Self {
        Self {
            a11: m[0][0],
            a12: m[0][1],
            a21: m[1][0],
            a22: m[1][1],
            domain,
        }
    }

    /// Saddle `a(x) = x1 e1 - x2 e2`.
    pub fn saddle_a(domain: SymmetricDomain) -> Self {
        Self::from_matrix_unchecked([[1.0, 0.0], [0.0, -1.0]], domain)
    }

    /// Saddle `b(x) = x2 e1 + x1 e2`.
    pub fn saddle_b(domain: SymmetricDomain) -> Self {
        Self::from_matrix_unchecked([[0.0, 1.0], [1.0, 0.0]], domain)
    }

    /// Source `c(x) = x`.
    pub fn source_c(domain: SymmetricDomain) -> Self {
        Self::from_matrix_unchecked([[1.0, 0.0], [0.0, 1.0]], domain)
    }

    /// Vortex `d(x) = x2 e1 - x1 e2` (clockwise).
    pub fn vortex_d(domain: SymmetricDomain) -> Self {
        Self::from_matrix_unchecked([[0.0, 1.0], [-1.0, 0.0]], domain)
    }

    pub fn zero(domain: SymmetricDomain) -> Self {
        Self::from_matrix_unchecked([[0.0; 2]; 2], domain)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn with_matrix(&self, m: [[f64; 2]; 2]) -> Self {
        Self::from_matrix_unchecked(m, self.domain)
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let m = self.matrix().map(|row| row.map(|c| c * k));
        self.with_matrix(m)
    }

    /// `A x` ignoring the support.
    #[inline]
    pub fn apply(&self, x1: f64, x2: f64) -> [f64; 2] {
        [self.a11 * x1 + self.a12 * x2, self.a21 * x1 + self.a22 * x2]
    }

    /// Field value as a pure vector; zero outside the domain.
    pub fn eval(&self, x1: f64, x2: f64) -> Multivector2 {
        if self.domain.contains(x1, x2) {
            let [v1, v2] = self.apply(x1, x2);
            Multivector2::vector(v1, v2)
        } else {
            Multivector2::ZERO
        }
    }

    pub fn decompose(&self) -> Decomposition {
        Decomposition {
            a: 0.5 * (self.a11 - self.a22),
            b: 0.5 * (self.a12 + self.a21),
            c: 0.5 * (self.a11 + self.a22),
            d: 0.5 * (self.a12 - self.a21),
        }
    }

    /// Saddle part `v1 = a a(x) + b b(x)`.
    pub fn saddle_part(&self) -> Self {
        let Decomposition { a, b, .. } = self.decompose();
        Decomposition {
            a,
            b,
            c: 0.0,
            d: 0.0,
        }
        .recompose_on(self.domain)
    }

    /// Source/vortex part `v2 = c c(x) + d d(x)`.
    pub fn source_vortex_part(&self) -> Self {
        let Decomposition { c, d, .. } = self.decompose();
        Decomposition {
            a: 0.0,
            b: 0.0,
            c,
            d,
        }
        .recompose_on(self.domain)
    }

    /// `u(x) = R_α(v(R_{-α} x))`, i.e. `A' = R A Rᵀ`.
    pub fn total_rotate(&self, alpha: f64) -> Self {
        let r = rotation(alpha);
        self.with_matrix(matmul(matmul(r, self.matrix()), transpose(r)))
    }

    /// `u(x) = R_α(v(x))`, i.e. `A' = R A`.
    pub fn outer_rotate(&self, alpha: f64) -> Self {
        self.with_matrix(matmul(rotation(alpha), self.matrix()))
    }

    /// `u(x) = v(R_{-α} x)`, i.e. `A' = A Rᵀ`.
    pub fn inner_rotate(&self, alpha: f64) -> Self {
        self.with_matrix(matmul(self.matrix(), transpose(rotation(alpha))))
    }

    /// Frobenius distance between coefficient matrices.
    pub fn coefficient_distance(&self, other: &Self) -> f64 {
        self.coefficients()
            .iter()
            .zip(other.coefficients())
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }

    pub fn ensure_same_domain(&self, other: &Self) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch(
                self.domain.to_string(),
                other.domain.to_string(),
            ))
        }
    }
}

/// Coefficients of a linear field on the basis `a, b, c, d`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Decomposition {
    pub fn recompose(&self, domain: SymmetricDomain) -> Result<LinearField> {
        LinearField::from_matrix(self.matrix(), domain)
    }

    fn recompose_on(&self, domain: SymmetricDomain) -> LinearField {
        LinearField::from_matrix_unchecked(self.matrix(), domain)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let Self { a, b, c, d } = *self;
        [[a + c, b + d], [b - d, c - a]]
    }

    /// `a² + b²`: squared saddle weight.
    pub fn saddle_weight(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    /// `c² + d²`: squared source/vortex weight.
    pub fn source_vortex_weight(&self) -> f64 {
        self.c * self.c + self.d * self.d
    }
}

/// Anything that can be sampled on a grid: linear fields and analytic closures.
pub trait VectorField: Sync {
    fn domain(&self) -> SymmetricDomain;

    /// Value at a point inside the domain; callers handle the support.
    fn value_inside(&self, x1: f64, x2: f64) -> [f64; 2];
}

impl VectorField for LinearField {
    fn domain(&self) -> SymmetricDomain {
        self.domain
    }

    fn value_inside(&self, x1: f64, x2: f64) -> [f64; 2] {
        self.apply(x1, x2)
    }
}

type FieldFn = dyn Fn(f64, f64) -> [f64; 2] + Send + Sync;

/// A field given by an arbitrary closure, e.g. non-linear test fields.
#[derive(Clone)]
pub struct AnalyticField {
    domain: SymmetricDomain,
    f: Arc<FieldFn>,
}

impl fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticField")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl AnalyticField {
    pub fn new(
        domain: SymmetricDomain,
        f: impl Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            f: Arc::new(f),
        }
    }

    /// `v(r, φ) = e1 e^{2φ e12}` on the unit disk: a field whose correlation
    /// with its totally rotated copy reports the negated angle.
    pub fn counterexample() -> Self {
        Self::new(SymmetricDomain::unit_disk(), |x1, x2| {
            let phi = x2.atan2(x1);
            let (s, c) = (2.0 * phi).sin_cos();
            [c, s]
        })
    }

    pub fn from_linear(field: LinearField) -> Self {
        Self::new(field.domain, move |x1, x2| field.apply(x1, x2))
    }

    pub fn total_rotate(&self, alpha: f64) -> Self {
        let inner = Arc::clone(&self.f);
        let (s, c) = alpha.sin_cos();
        Self::new(self.domain, move |x1, x2| {
            let [v1, v2] = inner(c * x1 + s * x2, -s * x1 + c * x2);
            [c * v1 - s * v2, s * v1 + c * v2]
        })
    }

    pub fn outer_rotate(&self, alpha: f64) -> Self {
        let inner = Arc::clone(&self.f);
        let (s, c) = alpha.sin_cos();
        Self::new(self.domain, move |x1, x2| {
            let [v1, v2] = inner(x1, x2);
            [c * v1 - s * v2, s * v1 + c * v2]
        })
    }

    pub fn eval(&self, x1: f64, x2: f64) -> Multivector2 {
        if self.domain.contains(x1, x2) {
            let [v1, v2] = (self.f)(x1, x2);
            Multivector2::vector(v1, v2)
        } else {
            Multivector2::ZERO
        }
    }
}

impl VectorField for AnalyticField {
    fn domain(&self) -> SymmetricDomain {
        self.domain
    }

    fn value_inside(&self, x1: f64, x2: f64) -> [f64; 2] {
        (self.f)(x1, x2)
    }
}

/// Midpoint samples of a field on an `n × n` grid over the domain's bounding square.
///
/// Storage is row-major with `x1` varying fastest: cell `(i, j)` sits at
/// index `j * n + i` with centre `(x_i, x_j)`, `x_k = -L + (k + ½) 2L/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    n: usize,
    domain: SymmetricDomain,
    values: Vec<[f64; 2]>,
    mask: Vec<bool>,
}

impl SampledField {
    pub fn sample<F: VectorField + ?Sized>(field: &F, n: usize) -> Result<Self> {
        let domain = field.domain();
        Self::from_fn(domain, n, |x1, x2| field.value_inside(x1, x2))
    }

    /// Samples `f` at every cell centre inside `domain`; outside cells are zero.
    pub fn from_fn(
        domain: SymmetricDomain,
        n: usize,
        f: impl Fn(f64, f64) -> [f64; 2] + Sync,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution must be >= 2, got {n}"
            )));
        }
        let domain = domain.validate()?;
        let rows: Vec<(Vec<[f64; 2]>, Vec<bool>)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let x2 = cell_center(domain, n, j);
                let mut vals = Vec::with_capacity(n);
                let mut inside = Vec::with_capacity(n);
                for i in 0..n {
                    let x1 = cell_center(domain, n, i);
                    let keep = domain.contains(x1, x2);
                    vals.push(if keep { f(x1, x2) } else { [0.0, 0.0] });
                    inside.push(keep);
                }
                (vals, inside)
            })
            .collect();
        let mut values = Vec::with_capacity(n * n);
        let mut mask = Vec::with_capacity(n * n);
        for (v, m) in rows {
            values.extend(v);
            mask.extend(m);
        }
        Ok(Self {
            n,
            domain,
            values,
            mask,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> SymmetricDomain {
        self.domain
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.domain.bounding_half_side() / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Centre coordinate along one axis for grid index `k`.
    pub fn coordinate(&self, k: usize) -> f64 {
        cell_center(self.domain, self.n, k)
    }

    /// Value at cell `(i, j)` (`i` along x1).
    pub fn at(&self, i: usize, j: usize) -> [f64; 2] {
        self.values[j * self.n + i]
    }

    pub fn inside(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.n + i]
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "resolution {} vs {}",
                self.n, other.n
            )));
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(
                self.domain.to_string(),
                other.domain.to_string(),
            ));
        }
        if self.mask != other.mask {
            return Err(Error::ShapeMismatch("inside-domain masks differ".into()));
        }
        Ok(())
    }

    /// Bilinear interpolation between cell centres; zero outside the grid.
    pub fn interpolate(&self, x1: f64, x2: f64) -> [f64; 2] {
        let l = self.domain.bounding_half_side();
        let h = self.spacing();
        // fractional grid coordinates relative to cell centres
        let gx = (x1 + l) / h - 0.5;
        let gy = (x2 + l) / h - 0.5;
        let i0 = gx.floor();
        let j0 = gy.floor();
        let (tx, ty) = (gx - i0, gy - j0);
        let n = self.n as isize;
        let fetch = |i: isize, j: isize| -> [f64; 2] {
            if i < 0 || j < 0 || i >= n || j >= n {
                [0.0, 0.0]
            } else {
                self.values[j as usize * self.n + i as usize]
            }
        };
        let (i0, j0) = (i0 as isize, j0 as isize);
        let v00 = fetch(i0, j0);
        let v10 = fetch(i0 + 1, j0);
        let v01 = fetch(i0, j0 + 1);
        let v11 = fetch(i0 + 1, j0 + 1);
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (1.0 - tx) * (1.0 - ty) * v00[k]
                + tx * (1.0 - ty) * v10[k]
                + (1.0 - tx) * ty * v01[k]
                + tx * ty * v11[k];
        }
        out
    }

    /// Approximate total rotation by resampling: `u(x) = R_α(v(R_{-α} x))`
    /// with `v` bilinearly interpolated. The mask is kept, so the result stays
    /// compatible with `self`.
    pub fn total_rotate_resampled(&self, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let n = self.n;
        let mut values = vec![[0.0; 2]; n * n];
        values.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let x2 = self.coordinate(j);
            for (i, out) in row.iter_mut().enumerate() {
                if !self.mask[j * n + i] {
                    continue;
                }
                let x1 = self.coordinate(i);
                let [v1, v2] = self.interpolate(c * x1 + s * x2, -s * x1 + c * x2);
                *out = [c * v1 - s * v2, s * v1 + c * v2];
            }
        });
        Self {
            n,
            domain: self.domain,
            values,
            mask: self.mask.clone(),
        }
    }

    /// Writes `x1,x2,v1,v2,inside` rows (row-major, x1 fastest).
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x1", "x2", "v1", "v2", "inside"])?;
        for j in 0..self.n {
            let x2 = self.coordinate(j);
            for i in 0..self.n {
                let x1 = self.coordinate(i);
                let [v1, v2] = self.at(i, j);
                let inside = if self.inside(i, j) { "1" } else { "0" };
                w.write_record([
                    x1.to_string(),
                    x2.to_string(),
                    v1.to_string(),
                    v2.to_string(),
                    inside.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn cell_center(domain: SymmetricDomain, n: usize, k: usize) -> f64 {
    let l = domain.bounding_half_side();
    -l + (k as f64 + 0.5) * (2.0 * l / n as f64)
}
