//! Randomised detection campaigns: draw a field and an angle, rotate, detect,
//! rotate back and measure the coefficient error.
//!
//! Trial `k` of a campaign draws from a ChaCha8 stream seeded with the
//! campaign seed and stream id `k`, so results do not depend on how trials are
//! scheduled across threads.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Decomposition, LinearField, SymmetricDomain};
use crate::registration::{detect, DetectorConfig, Status};

/// Trials whose weaker component is below this fraction of the stronger one
/// are reported separately from the convergence statistics.
pub const NEAR_DEGENERATE_RATIO: f64 = 1e-6;

/// Which four numbers are drawn uniformly from `[-bound, bound]`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientSpace {
    /// The matrix entries `a11, a12, a21, a22`.
    #[default]
    Matrix,
    /// The saddle/source/vortex weights `a, b, c, d`.
    Decomposition,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSpec {
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
    pub coeff_bound: f64,
    pub domain: SymmetricDomain,
    pub space: CoefficientSpace,
    pub max_iter: usize,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub threads: Option<usize>,
}

impl TrialSpec {
    pub fn new(trials: usize, eps: f64, seed: u64) -> Self {
        Self {
            trials,
            eps,
            seed,
            coeff_bound: 1.0,
            domain: SymmetricDomain::unit_square(),
            space: CoefficientSpace::Matrix,
            max_iter: 10_000,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<DetectorConfig> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if !(self.coeff_bound.is_finite() && self.coeff_bound > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coeff_bound must be > 0, got {}",
                self.coeff_bound
            )));
        }
        self.domain.validate()?;
        DetectorConfig::new(self.eps)?.with_max_iter(self.max_iter)
    }

    /// The RNG stream of trial `index`.
    pub fn trial_rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub alpha_true: f64,
    pub alpha_est: f64,
    /// `‖Â - A‖_F` between the rotated-back pattern and the field; NaN if degenerate.
    pub error: f64,
    pub iterations: usize,
    pub status: Status,
    /// `min(n1, n2) / max(n1, n2)` of the drawn field.
    pub weight_ratio: f64,
}

impl TrialOutcome {
    pub fn near_degenerate(&self) -> bool {
        // NaN (both parts zero) counts as degenerate
        self.weight_ratio.is_nan() || self.weight_ratio < NEAR_DEGENERATE_RATIO
    }
}

/// Draws `(field, alpha)` for one trial.
pub fn draw_instance<R: Rng + ?Sized>(
    rng: &mut R,
    bound: f64,
    space: CoefficientSpace,
    domain: SymmetricDomain,
) -> Result<(LinearField, f64)> {
    // (-π, π]
    let alpha = PI - rng.random_range(0.0..TAU);
    let mut c = [0.0; 4];
    for x in &mut c {
        *x = rng.random_range(-bound..=bound);
    }
    let field = match space {
        CoefficientSpace::Matrix => LinearField::new(c[0], c[1], c[2], c[3], domain)?,
        CoefficientSpace::Decomposition => Decomposition {
            a: c[0],
            b: c[1],
            c: c[2],
            d: c[3],
        }
        .recompose(domain)?,
    };
    Ok((field, alpha))
}

/// Runs detection on `u = total_rotate(v, alpha)` and scores the recovered pattern.
pub fn score_instance(v: &LinearField, alpha: f64, cfg: &DetectorConfig) -> TrialOutcome {
    let d = v.decompose();
    let (n1, n2) = (d.saddle_weight(), d.source_vortex_weight());
    let weight_ratio = n1.min(n2) / n1.max(n2);
    let u = v.total_rotate(alpha);
    match detect(v, &u, cfg) {
        Ok(r) => {
            let recovered = u.total_rotate(-r.alpha);
            TrialOutcome {
                alpha_true: alpha,
                alpha_est: r.alpha,
                error: recovered.coefficient_distance(v),
                iterations: r.iterations,
                status: r.status,
                weight_ratio,
            }
        }
        Err(_) => TrialOutcome {
            alpha_true: alpha,
            alpha_est: f64::NAN,
            error: f64::NAN,
            iterations: 0,
            status: Status::DegenerateZeroField,
            weight_ratio,
        },
    }
}

/// One random trial drawn from `rng`.
pub fn run_trial<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &TrialSpec,
    cfg: &DetectorConfig,
) -> Result<TrialOutcome> {
    let (v, alpha) = draw_instance(rng, spec.coeff_bound, spec.space, spec.domain)?;
    Ok(score_instance(&v, alpha, cfg))
}

/// Aggregated statistics of a campaign.
///
/// The headline averages cover every non-degenerate trial, converged or not.
/// The `*_converged` fields restrict to converged trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub avg_error: f64,
    pub max_error: f64,
    pub avg_iterations: f64,
    pub max_iterations: usize,
    pub converged_fraction: f64,
    /// Converged fraction over trials with weight ratio >= `NEAR_DEGENERATE_RATIO`.
    pub converged_fraction_regular: f64,
    pub avg_error_converged: f64,
    pub avg_iterations_converged: f64,
    pub near_degenerate_trials: usize,
    pub degenerate_trials: usize,
    pub max_iter_exceeded: usize,
}

/// Column order of [`ExperimentReport::write_csv`].
pub const REPORT_CSV_HEADER: [&str; 7] = [
    "eps",
    "avg_error",
    "max_error",
    "avg_iterations",
    "converged_fraction",
    "trials",
    "seed",
];

impl ExperimentReport {
    pub fn from_outcomes(spec: &TrialSpec, outcomes: &[TrialOutcome]) -> Self {
        let mut sum_err = 0.0;
        let mut max_err: f64 = 0.0;
        let mut sum_iter = 0usize;
        let mut max_iter = 0usize;
        let mut scored = 0usize;
        let mut converged = 0usize;
        let mut sum_err_conv = 0.0;
        let mut sum_iter_conv = 0usize;
        let mut regular = 0usize;
        let mut regular_converged = 0usize;
        let mut near = 0usize;
        let mut degenerate = 0usize;
        let mut exceeded = 0usize;

        for o in outcomes {
            if o.status == Status::DegenerateZeroField {
                degenerate += 1;
                continue;
            }
            scored += 1;
            sum_err += o.error;
            max_err = max_err.max(o.error);
            sum_iter += o.iterations;
            max_iter = max_iter.max(o.iterations);
            let ok = o.status == Status::Converged;
            if ok {
                converged += 1;
                sum_err_conv += o.error;
                sum_iter_conv += o.iterations;
            } else {
                exceeded += 1;
            }
            if o.near_degenerate() {
                near += 1;
            } else {
                regular += 1;
                regular_converged += usize::from(ok);
            }
        }

        let ratio = |num: f64, den: usize| if den == 0 { f64::NAN } else { num / den as f64 };
        Self {
            eps: spec.eps,
            trials: outcomes.len(),
            seed: spec.seed,
            avg_error: ratio(sum_err, scored),
            max_error: max_err,
            avg_iterations: ratio(sum_iter as f64, scored),
            max_iterations: max_iter,
            converged_fraction: ratio(converged as f64, outcomes.len()),
            converged_fraction_regular: ratio(regular_converged as f64, regular),
            avg_error_converged: ratio(sum_err_conv, converged),
            avg_iterations_converged: ratio(sum_iter_conv as f64, converged),
            near_degenerate_trials: near,
            degenerate_trials: degenerate,
            max_iter_exceeded: exceeded,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One header line and one data row in Table-1 column order.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(REPORT_CSV_HEADER)?;
        w.write_record([
            self.eps.to_string(),
            self.avg_error.to_string(),
            self.max_error.to_string(),
            self.avg_iterations.to_string(),
            self.converged_fraction.to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// All trial outcomes of a campaign, in trial order.
pub fn run_outcomes(spec: &TrialSpec) -> Result<Vec<TrialOutcome>> {
    let cfg = spec.validate()?;
    let one = |k: usize| {
        let mut rng = spec.trial_rng(k as u64);
        run_trial(&mut rng, spec, &cfg)
    };
    match spec.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| (0..spec.trials).into_par_iter().map(one).collect())
        }
        None => (0..spec.trials).into_par_iter().map(one).collect(),
    }
}

pub fn run_campaign(spec: &TrialSpec) -> Result<ExperimentReport> {
    let outcomes = run_outcomes(spec)?;
    Ok(ExperimentReport::from_outcomes(spec, &outcomes))
}
