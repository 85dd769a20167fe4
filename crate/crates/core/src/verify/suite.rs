//! Named selections of checks run against shared fixtures and seeds.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extension::ExtensionParams;
use crate::geometry::{generate_set, CompactSetSample, SetKind};
use crate::holo::{check_assumption6, Assumption6Config, CircleSet};
use crate::jets::{Jet, MultiIndex};
use crate::measure::build_measure;
use crate::scalar::Real;

use super::integrals::{check_conya, check_lemashiti, default_lemashiti_points};
use super::bounds::{
    check_part3_wholespace, check_remainder_part1, check_restriction, check_smartchange, Fixture, RestrictionConfig,
    SampleConfig,
};
use super::{Stability, VerificationReport};

pub const CHECKS: [&str; 7] = [
    "part1",
    "smartchange",
    "part3",
    "restriction",
    "conya",
    "lemashiti",
    "assumption6",
];

/// Jet of `sin(x_1)`: derivatives along `x_1` cycle through
/// `sin, cos, -sin, -cos`; any other derivative vanishes.
pub fn sin_jet<T: Real>(set: &CompactSetSample<T>, alpha: T) -> Result<Jet<T>> {
    Jet::induce(set.dim(), alpha, set.len(), |a, j: &MultiIndex| {
        let e = j.entries();
        if e[1..].iter().any(|&k| k > 0) {
            return Some(T::zero());
        }
        let x = set.atom(a).coords()[0];
        Some(match e[0] % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        })
    })
}

/// Middle-thirds Cantor sets at each depth, with the dyadic measure of the
/// same depth and the sin-jet.
pub fn cantor_fixtures<T: Real>(depths: &[usize], alpha: T) -> Result<Vec<Fixture<T>>> {
    depths
        .iter()
        .map(|&depth| {
            let set = generate_set(&SetKind::Cantor, depth)?;
            let mu = build_measure(&set, depth)?;
            let jet = sin_jet(&set, alpha)?;
            Ok(Fixture { depth, set, mu, jet })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Check names, or `core`, `holo`, `all`.
    pub selection: Vec<String>,
    pub seed: u64,
    pub depths: Vec<usize>,
    pub alpha: f64,
    pub q: f64,
    pub points: usize,
    pub partners: usize,
    pub max_growth: f64,
    pub restriction: RestrictionConfig,
    pub circle_atoms: usize,
    pub circle_depth: usize,
    pub holo_q: f64,
    pub spread: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            selection: vec!["core".into()],
            seed: 0,
            depths: vec![8, 10, 12],
            alpha: 1.5,
            q: 3.5,
            points: 200,
            partners: 16,
            max_growth: 0.25,
            restriction: RestrictionConfig::default(),
            circle_atoms: 256,
            circle_depth: 8,
            holo_q: 0.5,
            spread: 2.0,
        }
    }
}

impl SuiteConfig {
    /// Expands suite names into check names, in canonical order.
    pub fn checks(&self) -> Result<Vec<&'static str>> {
        let mut chosen = [false; CHECKS.len()];
        for name in &self.selection {
            let name = name.trim();
            match name {
                "" => {}
                "core" => chosen[..6].iter_mut().for_each(|c| *c = true),
                "holo" => chosen[6] = true,
                "all" => chosen.iter_mut().for_each(|c| *c = true),
                _ => match CHECKS.iter().position(|c| *c == name) {
                    Some(i) => chosen[i] = true,
                    None => return Err(Error::UnknownCheck(name.to_string())),
                },
            }
        }
        Ok(CHECKS.iter().zip(chosen).filter(|p| p.1).map(|p| *p.0).collect())
    }

    pub fn stability(&self) -> Stability {
        Stability {
            max_growth: self.max_growth,
            ..Stability::default()
        }
    }

    fn sample(&self) -> SampleConfig {
        SampleConfig {
            points: self.points,
            partners: self.partners,
            seed: self.seed,
            stability: self.stability(),
        }
    }
}

/// Runs the selected checks, in canonical order regardless of scheduling.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let checks = config.checks()?;
    if checks.is_empty() {
        return Ok(Vec::new());
    }
    let needs_fixture = checks.iter().any(|c| matches!(*c, "part1" | "smartchange" | "part3" | "restriction"));
    let levels = if needs_fixture {
        cantor_fixtures::<f64>(&config.depths, config.alpha)?
    } else {
        Vec::new()
    };
    let params = ExtensionParams::new(config.q, config.alpha)?;
    let sample = config.sample();
    checks
        .par_iter()
        .map(|&name| match name {
            "part1" => check_remainder_part1(&levels, &params, &sample),
            "smartchange" => check_smartchange(&levels, &params, &sample),
            "part3" => check_part3_wholespace(&levels, &params, &sample),
            "restriction" => {
                let finest = levels.last().ok_or_else(|| Error::InvalidParameter("no depths given".into()))?;
                let cfg = RestrictionConfig {
                    seed: config.seed,
                    ..config.restriction.clone()
                };
                check_restriction(finest, &params, &MultiIndex::zero(1), &cfg)
            }
            "conya" => check_conya(1.0, 1.0, 0.5, 1, 1.0, &(1..=8).collect::<Vec<_>>(), config.spread),
            "lemashiti" => check_lemashiti(2.0, 1.0, &default_lemashiti_points(), config.spread),
            "assumption6" => {
                let angles: Vec<f64> = (0..config.circle_atoms)
                    .map(|k| std::f64::consts::TAU * k as f64 / config.circle_atoms as f64)
                    .collect();
                let set = CircleSet::from_angles(&angles)?;
                let mu = set.measure(config.circle_depth)?;
                let cfg = Assumption6Config {
                    stability: config.stability(),
                    ..Assumption6Config::default()
                };
                check_assumption6(&set, &mu, config.holo_q, &cfg)
            }
            other => Err(Error::UnknownCheck(other.to_string())),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_expands_in_order() {
        let cfg = |s: &[&str]| SuiteConfig {
            selection: s.iter().map(|x| x.to_string()).collect(),
            ..SuiteConfig::default()
        };
        assert_eq!(cfg(&["lemashiti", "conya"]).checks().unwrap(), vec!["conya", "lemashiti"]);
        assert_eq!(cfg(&["core"]).checks().unwrap().len(), 6);
        assert_eq!(cfg(&["all", "part1"]).checks().unwrap().len(), 7);
        assert!(matches!(cfg(&["nope"]).checks(), Err(Error::UnknownCheck(_))));
        assert!(run_suite(&cfg(&[])).unwrap().is_empty());
        assert!(run_suite(&cfg(&["holo", "bogus"])).is_err());
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            selection: vec!["all".into()],
            depths: vec![5, 6, 7],
            points: 30,
            partners: 4,
            restriction: RestrictionConfig {
                centres: 4,
                exps: (3..=6).collect(),
                cells: 16,
                ..RestrictionConfig::default()
            },
            circle_atoms: 64,
            circle_depth: 6,
            ..SuiteConfig::default()
        };
        let reports = run_suite(&cfg).unwrap();
        let names: Vec<_> = reports.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(names, CHECKS);
        for r in &reports {
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn sin_jet_derivatives_cycle() {
        let set = CompactSetSample::new(vec![crate::geometry::Point::new(vec![0.3, 0.1]).unwrap()]).unwrap();
        let jet = sin_jet(&set, 2.5).unwrap();
        let get = |e: Vec<u32>| jet.component(&MultiIndex::new(e)).unwrap()[0];
        assert_eq!(get(vec![0, 0]), 0.3f64.sin());
        assert_eq!(get(vec![1, 0]), 0.3f64.cos());
        assert_eq!(get(vec![2, 0]), -0.3f64.sin());
        assert_eq!(get(vec![1, 1]), 0.0);
    }
}
