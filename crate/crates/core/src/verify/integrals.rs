//! Numerical checks of two integral estimates used by the remainder bounds.

use std::f64::consts::TAU;

use num_complex::Complex;

use crate::error::{Error, Result};

use super::quad::tanh_sinh;
use super::VerificationReport;

const QUAD_TOL: f64 = 1e-12;

/// `max / min <= spread` for a positive finite series of length >= 2.
pub fn within_factor(series: &[f64], spread: f64) -> bool {
    if series.len() < 2 || series.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return false;
    }
    let max = series.iter().copied().fold(f64::MIN, f64::max);
    let min = series.iter().copied().fold(f64::MAX, f64::min);
    max <= spread * min
}

/// `int_{B_1} d(x,E)^c |x-t|^-a |x-s|^-b dm(x)` with `E = {t, s}` and
/// `B_1 = {|x| <= R, |x-s| <= |x-t|}`, for `n = 1` or `2`.
///
/// On `B_1`, `d(x, E) = |x - s|`, so in polar coordinates about `s` the
/// integrand is `rho^(n-1+c-b) |x-t|^-a` on `0 <= rho <= rho_max(u)`.
pub fn conya_integral(a: f64, b: f64, c: f64, t: &[f64], s: &[f64], r: f64) -> Result<f64> {
    let n = t.len();
    if s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: s.len() });
    }
    let nf = n as f64;
    if !(c - a - b + nf < 0.0) {
        return Err(Error::Precondition(format!("needs c - a - b + n < 0, got {}", c - a - b + nf)));
    }
    if !(c - b + nf > 0.0) {
        return Err(Error::Precondition(format!("needs c - b + n > 0, got {}", c - b + nf)));
    }
    let ts: Vec<f64> = t.iter().zip(s).map(|(t, s)| t - s).collect();
    let dist = ts.iter().map(|v| v * v).sum::<f64>().sqrt();
    let s_norm2: f64 = s.iter().map(|v| v * v).sum();
    if dist == 0.0 || s_norm2 > r * r {
        return Err(Error::Precondition("needs t != s and s inside B(0, R)".into()));
    }
    let radial = |u: &[f64]| -> f64 {
        // |s + rho u| <= R
        let su: f64 = s.iter().zip(u).map(|(s, u)| s * u).sum();
        let mut top = -su + (su * su - s_norm2 + r * r).max(0.0).sqrt();
        // (x - s).(t - s) <= |t - s|^2 / 2
        let ue: f64 = u.iter().zip(&ts).map(|(u, e)| u * e).sum::<f64>() / dist;
        if ue > 0.0 {
            top = top.min(dist / (2.0 * ue));
        }
        let power = nf - 1.0 + c - b;
        tanh_sinh(
            |rho, gap, _| {
                let xt: f64 = s
                    .iter()
                    .zip(u)
                    .zip(t)
                    .map(|((s, u), t)| {
                        let d = s + rho * u - t;
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt();
                gap.powf(power) * xt.powf(-a)
            },
            0.0,
            top,
            QUAD_TOL,
        )
    };
    match n {
        1 => Ok(radial(&[1.0]) + radial(&[-1.0])),
        2 => {
            let m = 2048;
            let h = TAU / m as f64;
            Ok((0..m)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * h;
                    radial(&[phi.cos(), phi.sin()])
                })
                .sum::<f64>()
                * h)
        }
        _ => Err(Error::Precondition(format!("integral implemented for n = 1, 2; got n = {n}"))),
    }
}

/// Ratio of the integral to `|t-s|^(c-a-b+n)` with `t = 0` and
/// `s = 2^-j e_1` for each `j` in `exps`. Passes when the ratios stay
/// within `spread` of each other.
pub fn check_conya(a: f64, b: f64, c: f64, n: usize, r: f64, exps: &[i32], spread: f64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("conya")
        .param("a", a)
        .param("b", b)
        .param("c", c)
        .param("n", n)
        .param("R", r)
        .param("exps", exps.iter().map(i32::to_string).collect::<Vec<_>>().join(","))
        .param("spread", spread);
    let mut series = Vec::with_capacity(exps.len());
    let mut worst = (0.0, 0.0);
    for &j in exps {
        let d = 2f64.powi(-j);
        let t = vec![0.0; n];
        let mut s = vec![0.0; n];
        s[0] = d;
        let ratio = conya_integral(a, b, c, &t, &s, r)? / d.powf(c - a - b + n as f64);
        if ratio > worst.0 {
            worst = (ratio, d);
        }
        series.push(ratio);
    }
    rep.samples = series.len();
    rep.witness = vec![worst.1];
    rep.constant = worst.0;
    rep.pass = within_factor(&series, spread);
    rep.series = series;
    Ok(rep)
}

/// `int_0^1 (1-t)^(b-1) |1 - t z|^-a dt`.
pub fn lemashiti_integral(a: f64, b: f64, z: Complex<f64>) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Precondition(format!("needs a, b > 0, got a = {a}, b = {b}")));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::Precondition(format!("needs |z| < 1, got {}", z.norm())));
    }
    // with u = 1 - t: u^(b-1) |(1 - z) + u z|^-a, peaked on u ~ |1 - z|
    let one_minus = Complex::new(1.0, 0.0) - z;
    let g = |u: f64| (one_minus + z * u).norm().powf(-a);
    let w = one_minus.norm();
    let mut cuts = vec![0.0];
    let mut edge = w;
    while edge < 1.0 {
        cuts.push(edge);
        edge *= 4.0;
    }
    cuts.push(1.0);
    Ok(cuts
        .windows(2)
        .map(|p| tanh_sinh(|u, gap, _| (p[0] + gap).powf(b - 1.0) * g(u), p[0], p[1], QUAD_TOL))
        .sum())
}

/// For `b < a`, the ratio of the integral to `|1 - z|^(b-a)`; for `b > a`
/// the integral itself. Passes when the series stays within `spread`.
pub fn check_lemashiti(a: f64, b: f64, zs: &[Complex<f64>], spread: f64) -> Result<VerificationReport> {
    if a == b {
        return Err(Error::Precondition("needs b != a".into()));
    }
    let mut rep = VerificationReport::new("lemashiti")
        .param("a", a)
        .param("b", b)
        .param("points", zs.len())
        .param("spread", spread);
    let mut series = Vec::with_capacity(zs.len());
    let mut worst = (0.0, Complex::new(0.0, 0.0));
    for &z in zs {
        let i = lemashiti_integral(a, b, z)?;
        let ratio = if b < a { i / (Complex::new(1.0, 0.0) - z).norm().powf(b - a) } else { i };
        if ratio > worst.0 {
            worst = (ratio, z);
        }
        series.push(ratio);
    }
    rep.samples = zs.len();
    rep.witness = vec![worst.1.re, worst.1.im];
    rep.constant = worst.0;
    rep.pass = within_factor(&series, spread);
    rep.series = series;
    Ok(rep)
}

/// `z = 1 - 10^-k`, `k = 1..=6`.
pub fn default_lemashiti_points() -> Vec<Complex<f64>> {
    (1..=6).map(|k| Complex::new(1.0 - 10f64.powi(-k), 0.0)).collect()
}
