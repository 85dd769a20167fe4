//! Sampled remainder bounds for the extension operator, each evaluated on
//! a sequence of refinements of the same set.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extension::{Extension, ExtensionParams};
use crate::fit::ols;
use crate::geometry::{euclid, CompactSetSample, Point};
use crate::jets::{Jet, MultiIndex};
use crate::measure::DoublingMeasure;
use crate::scalar::Real;
use crate::taylor::TaylorScalar;

use super::{Stability, VerificationReport};

/// One discretisation level: a set, a measure on it and a jet.
#[derive(Clone, Debug)]
pub struct Fixture<T: Real> {
    pub depth: usize,
    pub set: CompactSetSample<T>,
    pub mu: DoublingMeasure<T>,
    pub jet: Jet<T>,
}

impl<T: Real> Fixture<T> {
    pub fn extension(&self, params: &ExtensionParams<T>) -> Result<Extension<'_, T>> {
        Extension::new(&self.jet, &self.set, &self.mu, *params)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            jet: self.jet.scaled(s),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    /// Off-set points drawn from the approach ladder.
    pub points: usize,
    /// Extra atoms paired with each point (part 1) or extra far partners
    /// (part 3).
    pub partners: usize,
    pub seed: u64,
    pub stability: Stability,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            points: 200,
            partners: 16,
            seed: 0,
            stability: Stability::default(),
        }
    }
}

/// Points `x = xi + 2^-j u` with `xi` an atom of the coarsest level and `u`
/// a random unit vector. A draw is kept only if `d(x, E) = 2^-j` on every
/// level, so each level sees the same distances. `2^-j` ranges from a
/// quarter of the diameter down to four times the coarse resolution.
pub fn approach_ladder<T: Real>(levels: &[Fixture<T>], count: usize, rng: &mut ChaCha8Rng) -> Vec<(Point<T>, T)> {
    let coarse = &levels[0].set;
    let n = coarse.dim();
    let diam = coarse.diameter().as_f64().max(f64::MIN_POSITIVE);
    let floor = 4.0 * coarse.resolution().as_f64().max(diam * 1e-12);
    let j_min = (-(diam / 4.0).log2()).ceil() as i32;
    let j_max = (-floor.log2()).floor() as i32;
    if j_max < j_min {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count.max(1) {
        attempts += 1;
        let xi = coarse.atom(rng.random_range(0..coarse.len()));
        let j = rng.random_range(j_min..=j_max);
        let delta = 2f64.powi(-j);
        let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        u.iter_mut().for_each(|v| *v *= delta / norm);
        let Ok(x) = Point::new(xi.coords().iter().zip(&u).map(|(c, v)| *c + T::lit(*v)).collect()) else {
            continue;
        };
        let d = euclid(x.coords(), xi.coords());
        let tol = d * T::lit(1e-12);
        let same = levels
            .iter()
            .all(|l| l.set.nearest(&x).map(|(_, e)| (e - d).abs() <= tol).unwrap_or(false));
        if same && d > T::zero() {
            out.push((x, d));
        }
    }
    out
}

fn indices_up_to(n: usize, max: usize) -> Vec<MultiIndex> {
    MultiIndex::all_up_to(n, max)
}

fn check_levels<T: Real>(levels: &[Fixture<T>]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("no refinement levels given".into()));
    }
    let n = levels[0].set.dim();
    if levels.iter().any(|l| l.set.dim() != n) {
        return Err(Error::InvalidParameter("levels disagree in dimension".into()));
    }
    Ok(())
}

fn base_report<T: Real>(name: &str, levels: &[Fixture<T>], params: &ExtensionParams<T>, cfg: &SampleConfig) -> VerificationReport {
    VerificationReport::new(name)
        .param("alpha", params.alpha.as_f64())
        .param("q", params.q.as_f64())
        .param(
            "depths",
            levels.iter().map(|l| l.depth.to_string()).collect::<Vec<_>>().join(","),
        )
        .param("atoms", levels.iter().map(|l| l.set.len().to_string()).collect::<Vec<_>>().join(","))
        .param("points", cfg.points)
        .param("partners", cfg.partners)
        .param("seed", cfg.seed)
        .param("max_growth", cfg.stability.max_growth)
}

/// Running maximum of `(ratio, witness)` in sample order.
fn sup(rows: impl IntoIterator<Item = (f64, Vec<f64>)>) -> (f64, Vec<f64>) {
    let mut best = (0.0, Vec::new());
    for (r, w) in rows {
        if r > best.0 || (best.1.is_empty() && r >= best.0) {
            best = (r, w);
        }
    }
    best
}

fn finish(rep: &mut VerificationReport, per_level: Vec<(f64, Vec<f64>)>, samples: usize, cfg: &SampleConfig) {
    rep.samples = samples;
    rep.witness = per_level.last().map(|p| p.1.clone()).unwrap_or_default();
    rep.finish(per_level.into_iter().map(|p| p.0).collect(), &cfg.stability);
}

/// `|D^a E(f)(x) - D^a_x T_y f(x)| / |x - y|^(alpha - |a|)` for `x` off
/// `E`, `y` in `E`, `|a| <= alpha`; `y` runs over the atom nearest `x`
/// and `partners` atoms of the coarsest level.
pub fn check_remainder_part1<T: Real>(
    levels: &[Fixture<T>],
    params: &ExtensionParams<T>,
    cfg: &SampleConfig,
) -> Result<VerificationReport> {
    check_levels(levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = approach_ladder(levels, cfg.points, &mut rng);
    let coarse = &levels[0].set;
    let partners: Vec<Vec<usize>> = xs
        .iter()
        .map(|_| (0..cfg.partners).map(|_| rng.random_range(0..coarse.len())).collect())
        .collect();
    let mut rep = base_report("part1", levels, params, cfg);
    let mut per_level = Vec::new();
    let mut samples = 0;
    for level in levels {
        let ext = level.extension(params)?;
        let m = level.jet.max_order();
        let idx = indices_up_to(level.set.dim(), m);
        let rows: Vec<(f64, Vec<f64>, usize)> = xs
            .par_iter()
            .zip(&partners)
            .map(|((x, _), ps)| {
                let e = ext.jet_at(x, m)?;
                let (near, _) = level.set.nearest(x)?;
                let mut ys = vec![near];
                ys.extend(ps.iter().filter_map(|&p| level.set.atom_at(coarse.atom(p))));
                let mut best = (0.0, Vec::new());
                let mut count = 0;
                for &y in &ys {
                    let yp = level.set.atom(y);
                    let dist = euclid(x.coords(), yp.coords());
                    let w = x.sub(yp);
                    for a in &idx {
                        let lhs = e.derivative(a).expect("order m") - level.jet.taylor_derived(y, a, &w);
                        let r = (lhs.abs() / dist.powf(params.alpha - T::from_count(a.order()))).as_f64();
                        count += 1;
                        if r > best.0 || best.1.is_empty() {
                            let mut wit: Vec<f64> = x.coords().iter().map(|c| c.as_f64()).collect();
                            wit.extend(yp.coords().iter().map(|c| c.as_f64()));
                            wit.push(a.order() as f64);
                            best = (r, wit);
                        }
                    }
                }
                Ok((best.0, best.1, count))
            })
            .collect::<Result<Vec<_>>>()?;
        samples += rows.iter().map(|r| r.2).sum::<usize>();
        per_level.push(sup(rows.into_iter().map(|r| (r.0, r.1))));
    }
    finish(&mut rep, per_level, samples, cfg);
    rep.note("ladder_points", xs.len());
    Ok(rep)
}

/// `|D^a E_alpha(f)(x) - E_{alpha-|a|}(D~^a f)(x)| / d(x,E)^(alpha-|a|)`
/// for `|a| <= floor(alpha) + 1`; beyond the jet order the derived jet is
/// zero.
pub fn check_smartchange<T: Real>(
    levels: &[Fixture<T>],
    params: &ExtensionParams<T>,
    cfg: &SampleConfig,
) -> Result<VerificationReport> {
    check_levels(levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = approach_ladder(levels, cfg.points, &mut rng);
    let mut rep = base_report("smartchange", levels, params, cfg);
    let mut per_level = Vec::new();
    let mut samples = 0;
    for level in levels {
        let ext = level.extension(params)?;
        let m = level.jet.max_order();
        let idx = indices_up_to(level.set.dim(), m + 1);
        let derived: Vec<Option<Jet<T>>> = idx
            .iter()
            .map(|a| (a.order() <= m).then(|| level.jet.derive(a)))
            .collect();
        let exts: Vec<Option<Extension<'_, T>>> = derived
            .iter()
            .map(|d| d.as_ref().map(|j| ext.with_jet(j)).transpose())
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<(f64, Vec<f64>)> = xs
            .par_iter()
            .map(|(x, d)| {
                let e = ext.jet_at(x, m + 1)?;
                let mut best = (0.0, Vec::new());
                for (a, sub) in idx.iter().zip(&exts) {
                    let target = match sub {
                        Some(s) => s.value(x)?,
                        None => T::zero(),
                    };
                    let lhs = e.derivative(a).expect("order m + 1") - target;
                    let r = (lhs.abs() / d.powf(params.alpha - T::from_count(a.order()))).as_f64();
                    if r > best.0 || best.1.is_empty() {
                        let mut wit: Vec<f64> = x.coords().iter().map(|c| c.as_f64()).collect();
                        wit.push(a.order() as f64);
                        best = (r, wit);
                    }
                }
                Ok(best)
            })
            .collect::<Result<Vec<_>>>()?;
        samples += rows.len() * idx.len();
        per_level.push(sup(rows));
    }
    finish(&mut rep, per_level, samples, cfg);
    rep.note("ladder_points", xs.len());
    Ok(rep)
}

/// `D^a` at `y` of the order-`m` Taylor polynomial of `E(f)` at `x`.
fn taylor_of_extension<T: Real>(e: &TaylorScalar<T>, x: &Point<T>, y: &Point<T>, a: &MultiIndex, m: usize) -> T {
    let w = y.sub(x);
    let mut acc = T::zero();
    for k in MultiIndex::all_up_to(x.dim(), m) {
        if let Some(rest) = k.checked_sub(a) {
            acc += e.derivative(&k).expect("order m") * rest.monomial(&w) / rest.factorial::<T>();
        }
    }
    acc
}

/// `|D^a T_x E(f)(y) - D^a E(f)(y)| / |x-y|^(alpha-|a|)` for off-set
/// `x`, `y`: near pairs `|x - y| = d(x,E)/8` and `d(x,E)/4`, and far
/// pairs of ladder points more than a quarter of the larger distance to
/// `E` apart.
pub fn check_part3_wholespace<T: Real>(
    levels: &[Fixture<T>],
    params: &ExtensionParams<T>,
    cfg: &SampleConfig,
) -> Result<VerificationReport> {
    check_levels(levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = approach_ladder(levels, cfg.points, &mut rng);
    let n = levels[0].set.dim();
    // (x index, y, ladder index of y for far pairs)
    let mut pairs: Vec<(usize, Point<T>, Option<usize>)> = Vec::new();
    for (i, (x, d)) in xs.iter().enumerate() {
        for frac in [0.125, 0.25] {
            let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            u.iter_mut().for_each(|v| *v *= frac / norm);
            let y = x.offset(&u.iter().map(|v| T::lit(*v) * *d).collect::<Vec<_>>());
            pairs.push((i, y, None));
        }
        for _ in 0..cfg.partners.min(xs.len().saturating_sub(1)) {
            let k = rng.random_range(0..xs.len());
            let (y, dy) = &xs[k];
            if euclid(x.coords(), y.coords()) > d.max(*dy) / T::lit(4.0) {
                pairs.push((i, xs[k].0.clone(), Some(k)));
            }
        }
    }
    let mut rep = base_report("part3", levels, params, cfg);
    let mut per_level = Vec::new();
    let mut near_far = (0usize, 0usize);
    for level in levels {
        let ext = level.extension(params)?;
        let m = level.jet.max_order();
        let idx = indices_up_to(n, m);
        let at_x: Vec<TaylorScalar<T>> = xs
            .par_iter()
            .map(|(x, _)| ext.jet_at(x, m))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<(f64, Vec<f64>)> = pairs
            .par_iter()
            .map(|(i, y, far)| {
                let x = &xs[*i].0;
                let ey = match far {
                    Some(k) => at_x[*k].clone(),
                    None => ext.jet_at(y, m)?,
                };
                let dist = euclid(x.coords(), y.coords());
                let mut best = (0.0, Vec::new());
                for a in &idx {
                    let lhs = taylor_of_extension(&at_x[*i], x, y, a, m) - ey.derivative(a).expect("order m");
                    let r = if dist == T::zero() {
                        0.0
                    } else {
                        (lhs.abs() / dist.powf(params.alpha - T::from_count(a.order()))).as_f64()
                    };
                    if r > best.0 || best.1.is_empty() {
                        let mut wit: Vec<f64> = x.coords().iter().map(|c| c.as_f64()).collect();
                        wit.extend(y.coords().iter().map(|c| c.as_f64()));
                        wit.push(a.order() as f64);
                        best = (r, wit);
                    }
                }
                Ok(best)
            })
            .collect::<Result<Vec<_>>>()?;
        near_far = (
            pairs.iter().filter(|p| p.2.is_none()).count(),
            pairs.iter().filter(|p| p.2.is_some()).count(),
        );
        per_level.push(sup(rows));
    }
    finish(&mut rep, per_level, pairs.len() * levels.len(), cfg);
    rep.note("near_pairs", near_far.0);
    rep.note("far_pairs", near_far.1);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionConfig {
    pub centres: usize,
    /// `delta = 2^-j` for `j` in this range.
    pub exps: Vec<i32>,
    /// Midpoint cells per axis across the cube around each ball.
    pub cells: usize,
    pub min_slope: f64,
    pub seed: u64,
    pub zero_tol: f64,
}

impl Default for RestrictionConfig {
    fn default() -> Self {
        Self {
            centres: 20,
            exps: (3..=9).collect(),
            cells: 64,
            min_slope: 0.5,
            seed: 0,
            zero_tol: 1e-9,
        }
    }
}

/// For atoms `xi` and balls `B(xi, delta)`, the largest
/// `|mean_{B \ E} D^a E(f) - f_a(xi)|` over `xi` at each `delta`, and the
/// log-log slope of that series against `delta`.
pub fn check_restriction<T: Real>(
    level: &Fixture<T>,
    params: &ExtensionParams<T>,
    a: &MultiIndex,
    cfg: &RestrictionConfig,
) -> Result<VerificationReport> {
    let m = level.jet.max_order();
    if !(T::from_count(a.order()) < params.alpha) {
        return Err(Error::Precondition(format!("needs |a| < alpha, got |a| = {}", a.order())));
    }
    let ext = level.extension(params)?;
    let set = &level.set;
    let n = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centres: Vec<usize> = (0..cfg.centres).map(|_| rng.random_range(0..set.len())).collect();
    let component = level.jet.component(a).expect("|a| <= m");
    let mut rep = VerificationReport::new("restriction")
        .param("alpha", params.alpha.as_f64())
        .param("q", params.q.as_f64())
        .param("a", a)
        .param("depth", level.depth)
        .param("centres", cfg.centres)
        .param("exps", cfg.exps.iter().map(i32::to_string).collect::<Vec<_>>().join(","))
        .param("cells", cfg.cells)
        .param("min_slope", cfg.min_slope)
        .param("seed", cfg.seed);
    let cells = cfg.cells.max(1);
    let total = cells.pow(n as u32);
    let mut deltas = Vec::new();
    let mut series = Vec::new();
    let mut witness = Vec::new();
    let mut skipped = Vec::new();
    let mut samples = 0;
    for &j in &cfg.exps {
        let delta = T::lit(2f64.powi(-j));
        let step = (delta + delta) / T::from_count(cells);
        let rows: Vec<Option<(f64, usize)>> = centres
            .par_iter()
            .map(|&c| {
                let xi = set.atom(c);
                let mut sum = T::zero();
                let mut count = 0usize;
                for mut code in 0..total {
                    let mut p = Vec::with_capacity(n);
                    for k in 0..n {
                        let i = code % cells;
                        code /= cells;
                        p.push(xi.coords()[k] - delta + (T::from_count(i) + T::lit(0.5)) * step);
                    }
                    let x = Point::new(p).ok()?;
                    if euclid(x.coords(), xi.coords()) > delta || set.atom_at(&x).is_some() {
                        continue;
                    }
                    sum += if a.order() == 0 {
                        ext.value(&x).ok()?
                    } else {
                        ext.derivative(&x, a).ok()?
                    };
                    count += 1;
                }
                if count == 0 {
                    return None;
                }
                let mean = sum / T::from_count(count);
                Some(((mean - component[c]).abs().as_f64(), count))
            })
            .collect();
        let mut worst: Option<(f64, usize)> = None;
        for (&c, row) in centres.iter().zip(&rows) {
            if let Some((diff, count)) = row {
                samples += count;
                if worst.is_none_or(|w| *diff > w.0) {
                    worst = Some((*diff, c));
                }
            }
        }
        match worst {
            Some((diff, c)) => {
                deltas.push(delta.as_f64());
                series.push(diff);
                witness = set.atom(c).coords().iter().map(|v| v.as_f64()).collect();
                witness.push(delta.as_f64());
            }
            None => skipped.push(j),
        }
    }
    let exact = !series.is_empty() && series.iter().all(|d| *d <= cfg.zero_tol);
    let usable: Vec<(f64, f64)> = deltas
        .iter()
        .zip(&series)
        .filter(|(_, d)| **d > 0.0)
        .map(|(x, d)| (x.ln(), d.ln()))
        .collect();
    let fit = ols(
        &usable.iter().map(|p| p.0).collect::<Vec<_>>(),
        &usable.iter().map(|p| p.1).collect::<Vec<_>>(),
    );
    let slope = fit.map(|f| f.slope);
    rep.samples = samples;
    rep.witness = witness;
    rep.constant = series.last().copied().unwrap_or(0.0);
    rep.note("slope", slope.map_or("none".to_string(), |s| s.to_string()));
    rep.note("skipped", skipped.iter().map(i32::to_string).collect::<Vec<_>>().join(","));
    rep.note("jet_order", m);
    rep.pass = series.len() >= 2 && (exact || slope.is_some_and(|s| s >= cfg.min_slope));
    rep.series = series;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_set, SetKind};
    use crate::jets::Polynomial;
    use crate::measure::build_measure;
    use crate::verify::{cantor_fixtures, sin_jet};

    fn with_jet(levels: &[Fixture<f64>], make: impl Fn(&CompactSetSample<f64>) -> Jet<f64>) -> Vec<Fixture<f64>> {
        levels
            .iter()
            .map(|l| Fixture {
                jet: make(&l.set),
                ..l.clone()
            })
            .collect()
    }

    fn small() -> (Vec<Fixture<f64>>, ExtensionParams<f64>, SampleConfig) {
        let levels = cantor_fixtures(&[5, 6, 7], 1.5).unwrap();
        let cfg = SampleConfig {
            points: 40,
            partners: 4,
            seed: 11,
            stability: Stability::default(),
        };
        (levels, ExtensionParams::new(3.5, 1.5).unwrap(), cfg)
    }

    #[test]
    fn ladder_distances_agree_across_levels() {
        let (levels, _, _) = small();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs = approach_ladder(&levels, 30, &mut rng);
        assert_eq!(xs.len(), 30);
        for (x, d) in &xs {
            assert!(*d <= 0.25 + 1e-15);
            for l in &levels {
                let (_, e) = l.set.nearest(x).unwrap();
                assert!((e - d).abs() <= 1e-12 * d);
            }
            // the step is a power of two
            assert!((d.log2() - d.log2().round()).abs() < 1e-9);
        }
    }

    #[test]
    fn polynomial_jets_give_zero_ratios() {
        let (levels, params, cfg) = small();
        let p = Polynomial::univariate(vec![1.0, 2.0]);
        let poly = with_jet(&levels, |s| p.induce(s, 1.5).unwrap());
        for rep in [
            check_remainder_part1(&poly, &params, &cfg).unwrap(),
            check_smartchange(&poly, &params, &cfg).unwrap(),
            check_part3_wholespace(&poly, &params, &cfg).unwrap(),
        ] {
            assert!(rep.constant <= 1e-9, "{}", rep.to_text());
            assert!(rep.pass);
        }
        let one = with_jet(&levels, |s| Jet::constant(1, 1.5, s.len(), 1.0));
        let rep = check_smartchange(&one, &params, &cfg).unwrap();
        assert!(rep.series.iter().all(|c| *c <= 1e-12), "{}", rep.to_text());
    }

    #[test]
    fn sin_jet_ratios_are_stable() {
        let (levels, params, cfg) = small();
        for rep in [
            check_remainder_part1(&levels, &params, &cfg).unwrap(),
            check_smartchange(&levels, &params, &cfg).unwrap(),
            check_part3_wholespace(&levels, &params, &cfg).unwrap(),
        ] {
            assert!(rep.pass, "{}", rep.to_text());
            assert!(rep.constant > 0.0 && rep.constant.is_finite());
            assert_eq!(rep.series.len(), 3);
        }
    }

    #[test]
    fn ratios_scale_with_the_jet() {
        let (levels, params, cfg) = small();
        let doubled: Vec<_> = levels.iter().map(|l| l.scaled(2.0)).collect();
        for check in [check_remainder_part1, check_smartchange, check_part3_wholespace] {
            let a = check(&levels, &params, &cfg).unwrap();
            let b = check(&doubled, &params, &cfg).unwrap();
            for (x, y) in a.series.iter().zip(&b.series) {
                assert!((2.0 * x - y).abs() <= 1e-12 * y, "{x} {y}");
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let (levels, params, cfg) = small();
        let a = check_part3_wholespace(&levels, &params, &cfg).unwrap().to_text();
        let b = check_part3_wholespace(&levels, &params, &cfg).unwrap().to_text();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| check_part3_wholespace(&levels, &params, &cfg).unwrap().to_text());
        assert_eq!(a, c);
    }

    #[test]
    fn restriction_slopes() {
        let set = generate_set::<f64>(&SetKind::Cantor, 8).unwrap();
        let mu = build_measure(&set, 8).unwrap();
        let params = ExtensionParams::new(3.5, 1.5).unwrap();
        let cfg = RestrictionConfig {
            centres: 6,
            exps: (3..=7).collect(),
            cells: 32,
            ..RestrictionConfig::default()
        };
        let zero = MultiIndex::zero(1);
        let sin = Fixture {
            depth: 8,
            jet: sin_jet(&set, 1.5).unwrap(),
            set: set.clone(),
            mu: mu.clone(),
        };
        let rep = check_restriction(&sin, &params, &zero, &cfg).unwrap();
        assert!(rep.pass, "{}", rep.to_text());
        let one = Fixture {
            jet: Jet::constant(1, 1.5, set.len(), 1.0),
            ..sin.clone()
        };
        let rep = check_restriction(&one, &params, &zero, &cfg).unwrap();
        assert!(rep.pass && rep.series.iter().all(|d| *d <= 1e-12), "{}", rep.to_text());
        assert!(matches!(
            check_restriction(&sin, &params, &MultiIndex::new(vec![2]), &cfg),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn restriction_reports_empty_balls() {
        let set = generate_set::<f64>(&SetKind::Cantor, 4).unwrap();
        let mu = build_measure(&set, 4).unwrap();
        let fx = Fixture {
            depth: 4,
            jet: sin_jet(&set, 1.5).unwrap(),
            set,
            mu,
        };
        // one cell per axis puts the only node on the centre atom
        let cfg = RestrictionConfig {
            centres: 3,
            exps: vec![3, 4],
            cells: 1,
            ..RestrictionConfig::default()
        };
        let params = ExtensionParams::new(3.5, 1.5).unwrap();
        let rep = check_restriction(&fx, &params, &MultiIndex::zero(1), &cfg).unwrap();
        assert_eq!(rep.notes.iter().find(|n| n.0 == "skipped").unwrap().1, "3,4");
        assert!(!rep.pass);
    }
}
