//! Total-rotation registration of two-dimensional linear vector fields using
//! the geometric cross-correlation of Cl(2,0).
//!
//! - [`clifford2`]: multivectors, geometric product, rotors, spinor arguments.
//! - [`fields`]: linear fields, the saddle/source/vortex decomposition,
//!   inner/outer/total rotations, grid sampling.
//! - [`correlation`]: closed-form and midpoint-quadrature correlation at the origin.
//! - [`registration`]: the iterative detector, the closed-form `φ(α)` map,
//!   one-shot detection for known patterns and a brute-force oracle.
//! - [`experiments`]: seeded randomised campaigns.
//! - [`cli`]: the `geocorr` command line.
//!
//! ```
//! use geocorr::{detect, DetectorConfig, LinearField, SymmetricDomain};
//!
//! let v = LinearField::new(0.9, -0.2, 0.4, 0.3, SymmetricDomain::unit_square()).unwrap();
//! let u = v.total_rotate(0.7);
//! let r = detect(&v, &u, &DetectorConfig::new(1e-8).unwrap()).unwrap();
//! assert!((r.alpha - 0.7).abs() < 1e-6);
//! ```

pub mod cli;
pub mod clifford2;
pub mod correlation;
pub mod error;
pub mod experiments;
pub mod fields;
pub mod registration;

pub use clifford2::{spinor_arg, wrap_angle, wrap_half_turn, Multivector2, Rotor};
pub use correlation::{
    correlate_linear, correlate_sampled, l2_norm_squared, product_at, second_moment,
    CorrelationValue,
};
pub use error::{Error, Result};
pub use experiments::{run_campaign, run_trial, ExperimentReport, TrialSpec};
pub use fields::{AnalyticField, Decomposition, LinearField, SampledField, SymmetricDomain};
pub use registration::{
    detect, detect_known_pattern, detect_sampled, oracle_detect, phi_of_alpha, Branch,
    DetectionResult, DetectorConfig, ExceptionRules, Status,
};
