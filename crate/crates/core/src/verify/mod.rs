//! Empirical checks of the quantitative bounds: sampled sup-ratios whose
//! stability under refinement stands in for "bounded by a constant".

mod integrals;
mod quad;
mod report;
mod suite;
mod bounds;

pub use integrals::{
    check_conya, check_lemashiti, conya_integral, default_lemashiti_points, lemashiti_integral, within_factor,
};
pub use quad::tanh_sinh;
pub use report::{reports_to_text, Stability, VerificationReport};
pub use suite::{cantor_fixtures, run_suite, sin_jet, SuiteConfig, CHECKS};
pub use bounds::{
    approach_ladder, check_part3_wholespace, check_remainder_part1, check_restriction, check_smartchange, Fixture,
    RestrictionConfig, SampleConfig,
};
