//! Iterative detection of the total rotation between a field and its rotated copy.
//!
//! Each step correlates the pattern with the field, reads the spinor argument
//! `φ` of the result and totally rotates the pattern by `φ`. For linear fields
//! with both a saddle and a source/vortex component the residual misalignment
//! shrinks monotonically to zero. Pure saddles and pure source/vortex fields
//! need the special cases handled in [`detect`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::clifford2::{spinor_arg, wrap_angle, wrap_half_turn};
use crate::correlation::{correlate_linear, correlate_sampled, second_moment, CorrelationValue};
use crate::error::{Error, Result};
use crate::fields::{LinearField, SampledField};

/// How the degenerate-input branches of the detection loop are tested and applied.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionRules {
    /// Perturb when the first correlation is real to within the stopping
    /// tolerance (argument 0 or π up to `eps`), since a saddle sitting a quarter
    /// turn off also reads as real and would otherwise stop at once. After a
    /// perturbation, a quarter-turn argument (either sign) is halved so that
    /// pure saddles at 0 and ±π/2 both land on the exact alignment.
    #[default]
    Symmetric,
    /// The branches exactly as originally stated: perturb only when the first
    /// argument is 0, and on `φ = -π/2` after a perturbation set the estimate
    /// to π/2 and rotate by π/4. Pure saddles starting aligned end up a
    /// quarter turn off and never terminate.
    Literal,
}

impl ExceptionRules {
    fn starts_aligned(self, accumulated: f64, tol: f64, eps: f64) -> bool {
        match self {
            Self::Symmetric => accumulated.sin().abs() <= eps,
            Self::Literal => accumulated.abs() <= tol,
        }
    }

    fn saddle_recovery(self, phi: f64, tol: f64) -> bool {
        match self {
            Self::Symmetric => (phi.abs() - FRAC_PI_2).abs() <= tol,
            Self::Literal => (phi + FRAC_PI_2).abs() <= tol,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct DetectorConfig {
    /// Stop once the applied step satisfies `|φ| <= eps`.
    pub eps: f64,
    pub max_iter: usize,
    /// Tolerance standing in for the exact `= 0` / `= -π/2` tests of the branches.
    pub zero_tol: f64,
    pub rules: ExceptionRules,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            max_iter: 10_000,
            zero_tol: 1e-9,
            rules: ExceptionRules::Symmetric,
        }
    }
}

impl DetectorConfig {
    /// Config with accuracy `eps`; the branch tolerance shrinks below `eps` if needed.
    pub fn new(eps: f64) -> Result<Self> {
        let zero_tol = Self::default().zero_tol.min(0.01 * eps);
        Self {
            eps,
            zero_tol,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Result<Self> {
        self.max_iter = max_iter;
        self.validated()
    }

    pub fn with_rules(mut self, rules: ExceptionRules) -> Self {
        self.rules = rules;
        self
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must be > 0, got {}",
                self.eps
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if !(self.zero_tol >= 0.0 && self.zero_tol < self.eps) {
            return Err(Error::InvalidParameter(format!(
                "zero_tol must lie in [0, eps), got {} with eps {}",
                self.zero_tol, self.eps
            )));
        }
        Ok(self)
    }
}

/// Special case taken in an iteration.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// First correlation carried no rotation: pattern perturbed by π/4.
    AlignedStart,
    /// Estimate returned to zero after two steps: pure saddle, halve the step.
    SaddleHalving,
    /// Quarter-turn argument right after the perturbation: pure saddle at 0 or ±π/2.
    SaddleRecovery,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub iter: usize,
    /// Argument of the correlation as measured.
    pub measured_phi: f64,
    /// Rotation actually applied to the pattern (differs from `measured_phi` on branches).
    pub phi: f64,
    /// Running misalignment estimate after this step, not wrapped.
    pub alpha: f64,
    pub branch: Option<Branch>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterExceeded,
    DegenerateZeroField,
}

/// Outcome of a detection run.
///
/// `alpha` is the misalignment of the pattern: `u ≈ total_rotate(v, alpha)`,
/// wrapped to `(-π, π]`. Linear fields only determine it modulo π.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionResult<P = LinearField> {
    pub alpha: f64,
    pub iterations: usize,
    pub status: Status,
    pub trace: Vec<TraceStep>,
    /// The pattern after all applied rotations.
    #[serde(skip)]
    pub corrected: P,
}

impl<P> DetectionResult<P> {
    pub fn branches(&self) -> impl Iterator<Item = (usize, Branch)> + '_ {
        self.trace
            .iter()
            .filter_map(|t| t.branch.map(|b| (t.iter, b)))
    }

    pub fn branch_count(&self, which: Branch) -> usize {
        self.branches().filter(|(_, b)| *b == which).count()
    }
}

/// `φ(α)` in closed form: the correlation argument of `v` against its copy rotated by `α`.
pub fn phi_of_alpha(v: &LinearField, alpha: f64) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::DegenerateZeroField);
    }
    let d = v.decompose();
    let moment = second_moment(v.domain);
    let n1 = d.saddle_weight() * moment;
    let n2 = d.source_vortex_weight() * moment;
    let (s, c) = (2.0 * alpha).sin_cos();
    let phi = (-s * n1).atan2(c * n1 + n2);
    Ok(if phi == -PI { PI } else { phi })
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::DegenerateSpinor => Error::DegenerateZeroField,
        other => other,
    }
}

fn run<P>(
    mut pattern: P,
    cfg: &DetectorConfig,
    correlate: impl Fn(&P) -> Result<CorrelationValue>,
    rotate: impl Fn(&P, f64, f64) -> P,
) -> Result<DetectionResult<P>> {
    let cfg = cfg.validated()?;
    let mut phi = PI;
    // total rotation applied to the pattern so far
    let mut correction = 0.0;
    let mut iter = 0;
    let mut exception = false;
    let mut trace = Vec::new();

    let status = loop {
        if phi.abs() <= cfg.eps {
            break Status::Converged;
        }
        if iter >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
        iter += 1;
        let measured = correlate(&pattern)?.argument().map_err(degenerate)?;
        phi = measured;
        let before = correction;
        correction = before + phi;
        let mut branch = None;

        if iter == 1 && cfg.rules.starts_aligned(correction, cfg.zero_tol, cfg.eps) {
            phi = FRAC_PI_4;
            correction = FRAC_PI_4;
            exception = true;
            branch = Some(Branch::AlignedStart);
        }
        if iter == 2 && !exception && correction.abs() <= cfg.zero_tol {
            phi /= 2.0;
            correction = before + phi;
            branch = Some(Branch::SaddleHalving);
        }
        if iter == 2 && exception && cfg.rules.saddle_recovery(phi, cfg.zero_tol) {
            phi = match cfg.rules {
                ExceptionRules::Symmetric => phi / 2.0,
                ExceptionRules::Literal => FRAC_PI_4,
            };
            correction = before + phi;
            branch = Some(Branch::SaddleRecovery);
        }

        pattern = rotate(&pattern, phi, correction);
        trace.push(TraceStep {
            iter,
            measured_phi: measured,
            phi,
            alpha: -correction,
            branch,
        });
    };

    Ok(DetectionResult {
        alpha: wrap_angle(-correction),
        iterations: iter,
        status,
        trace,
        corrected: pattern,
    })
}

/// Recovers the total rotation `α` with `u = total_rotate(v, α)`.
///
/// `v` is the reference field, `u` the rotated pattern. The pattern is
/// rotated by exact matrix conjugation at every step.
pub fn detect(
    v: &LinearField,
    u: &LinearField,
    cfg: &DetectorConfig,
) -> Result<DetectionResult<LinearField>> {
    v.ensure_same_domain(u)?;
    if v.is_zero() {
        return Err(Error::DegenerateZeroField);
    }
    run(
        *u,
        cfg,
        |p| correlate_linear(p, v),
        |p, step, _| p.total_rotate(step),
    )
}

/// [`detect`] on sampled fields with midpoint-rule correlation.
///
/// Rotating a sampled pattern needs interpolation, so each step resamples the
/// original pattern by the accumulated rotation (bilinear, approximate) instead
/// of compounding interpolation error.
pub fn detect_sampled(
    v: &SampledField,
    u: &SampledField,
    cfg: &DetectorConfig,
) -> Result<DetectionResult<SampledField>> {
    v.ensure_compatible(u)?;
    if v.values().iter().all(|x| *x == [0.0, 0.0]) {
        return Err(Error::DegenerateZeroField);
    }
    run(
        u.clone(),
        cfg,
        |p| correlate_sampled(p, v),
        |_, _, total| u.total_rotate_resampled(total),
    )
}

/// One-shot detection when the saddle part of the reference pattern is known:
/// `α = -½ arg(u ⋆ v1)`. Pass the full pattern; only its saddle part is used.
pub fn detect_known_pattern(pattern: &LinearField, u: &LinearField) -> Result<f64> {
    pattern.ensure_same_domain(u)?;
    let v1 = pattern.saddle_part();
    if v1.is_zero() {
        return Err(Error::ZeroSaddlePart);
    }
    let arg = spinor_arg(correlate_linear(u, &v1)?.value).map_err(degenerate)?;
    Ok(-0.5 * arg)
}

/// Brute-force ground truth: the angle in `(-π/2, π/2]` minimising
/// `‖total_rotate(u, -θ) - v‖_F`, grid search followed by golden-section refinement.
pub fn oracle_detect(v: &LinearField, u: &LinearField, grid: usize) -> f64 {
    let grid = grid.max(3);
    let dist = |theta: f64| u.total_rotate(-theta).coefficient_distance(v);
    let step = PI / grid as f64;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..grid {
        let theta = -FRAC_PI_2 + (k + 1) as f64 * step;
        let d = dist(theta);
        if d < best.0 {
            best = (d, theta);
        }
    }
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (dist(x1), dist(x2));
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = dist(x2);
        }
    }
    let refined = 0.5 * (lo + hi);
    let theta = if dist(refined) <= best.0 {
        refined
    } else {
        best.1
    };
    wrap_half_turn(theta)
}

/// Default grid size for [`oracle_detect`].
pub const ORACLE_GRID: usize = 20_001;
