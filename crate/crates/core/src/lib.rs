//! Integral Whitney-type extension of jets from compact sets.
//!
//! A jet `{f_j}` sampled on a finite set `E` is extended to the whole space
//! by averaging its Taylor polynomials against the kernel
//! `d(x, y)^-q dmu(y)` of a doubling measure `mu` on `E`, normalised by
//! `h_q(x) = int d(x, y)^-q dmu(y)`. Derivatives of the extension are exact,
//! computed with truncated multivariate Taylor arithmetic.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dimensions;
pub mod error;
pub mod extension;
pub(crate) mod fit;
pub mod geometry;
pub mod holo;
pub mod jets;
pub mod measure;
pub mod scalar;
pub mod taylor;
pub mod verify;

pub use dimensions::{estimate_dimensions, packing_count, DimensionConfig, DimensionEstimate};
pub use error::{Error, Result};
pub use extension::{
    assemble_g, extend, extend_derivative, h_q, whitney_baseline, windowed_extension, Extension, ExtensionParams,
    FieldGrid, GridSpec,
};
pub use geometry::{distance, generate_set, CompactSetSample, Metric, Point, SetKind};
pub use holo::{extend_ni, h_q_ni, tau_ni, CirclePoint, CircleSet, DiskExtension, DiskKernelParams};
pub use jets::{besov_norm, lip_norm, BesovParams, Jet, LambdaSign, MultiIndex, NormReport, Polynomial};
pub use measure::{build_measure, certify, CertifyConfig, DoublingMeasure, MeasureCertificate};
pub use scalar::{Field, Real};
pub use taylor::{Ring, TaylorScalar};
pub use verify::{run_suite, Stability, SuiteConfig, VerificationReport};

pub type Point64 = Point<f64>;
pub type Set64 = CompactSetSample<f64>;
pub type Measure64 = DoublingMeasure<f64>;
pub type Jet64 = Jet<f64>;
