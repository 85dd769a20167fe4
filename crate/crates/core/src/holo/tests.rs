use super::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn full_circle(n: usize) -> CircleSet<f64> {
    let angles: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();
    CircleSet::from_angles(&angles).unwrap()
}

fn identity_jet(set: &CircleSet<f64>) -> Jet<Complex<f64>> {
    Jet::induce(1, 1.0, set.len(), |a, j| {
        Some(if j.order() == 0 { set.coordinate(a) } else { c(1.0, 0.0) })
    })
    .unwrap()
}

#[test]
fn tau_identities() {
    let w = CirclePoint::new(0.7).unwrap();
    assert_eq!(tau_ni(c(0.0, 0.0), &w), c(1.0, 0.0));
    assert!(tau_ni(w.coordinate(), &w).norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let z = CirclePoint::<f64>::new(rng.random_range(0.0..7.0)).unwrap();
        let w = CirclePoint::new(rng.random_range(0.0..7.0)).unwrap();
        let lhs = tau_ni(z.coordinate(), &w).norm();
        let rhs = (z.coordinate() - w.coordinate()).norm();
        assert!((lhs - rhs).abs() < 1e-14);
    }
}

#[test]
fn kernel_mass_closed_forms() {
    let single = CircleSet::from_angles(&[0.3]).unwrap();
    let mu1 = DoublingMeasure::uniform(single.planar()).unwrap();
    let z = c(0.2, -0.4);
    let want = Field::powf(tau_ni(z, &single.points()[0]), -1.7);
    assert!((h_q_ni(&single, &mu1, 1.7, z).unwrap() - want).norm() < 1e-14);

    let pair = CircleSet::from_angles(&[0.0, std::f64::consts::PI]).unwrap();
    let mu2 = DoublingMeasure::uniform(pair.planar()).unwrap();
    for r in [0.0, 0.3, 0.9] {
        let h = h_q_ni(&pair, &mu2, 1.0, c(r, 0.0)).unwrap();
        assert!((h - c(1.0 / (1.0 - r * r), 0.0)).norm() < 1e-13, "r={r} {h}");
    }
    let full = full_circle(64);
    let mu = full.measure(6).unwrap();
    assert!((h_q_ni(&full, &mu, 0.5, c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert!(matches!(h_q_ni(&pair, &mu2, 1.0, c(1.0, 0.0)), Err(Error::Singular(0))));
}

#[test]
fn reproduces_identity_and_constants() {
    let set = full_circle(64);
    let mu = set.measure(6).unwrap();
    let jet = identity_jet(&set);
    let ext = DiskExtension::new(&jet, &set, &mu, DiskKernelParams::new(0.8, 1.0).unwrap(), 0.99).unwrap();
    assert_eq!(ext.certificate().winding, 0);
    for z in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.1), c(0.0, -0.98)] {
        assert!((ext.value(z).unwrap() - z).norm() < 1e-12, "{z}");
        let d = ext.derivatives(z, 2).unwrap();
        assert!((d[1] - c(1.0, 0.0)).norm() < 1e-10);
        assert!(d[2].norm() < 1e-8);
    }
    let one = Jet::constant(1, 1.0, set.len(), c(1.0, 0.0));
    let ext1 = DiskExtension::new(&one, &set, &mu, DiskKernelParams::new(0.8, 1.0).unwrap(), 0.99).unwrap();
    assert!((ext1.value(c(0.3, 0.6)).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
    assert!(matches!(ext1.value(c(0.995, 0.0)), Err(Error::Precondition(_))));
}

#[test]
fn complex_derivative_matches_difference_quotient() {
    let set = CircleSet::from_angles(&(0..40).map(|k| 0.05 * k as f64).collect::<Vec<_>>()).unwrap();
    let mu = set.measure(5).unwrap();
    let jet = Jet::induce(1, 1.5, set.len(), |a, _| Some(set.coordinate(a).exp())).unwrap();
    let ext = DiskExtension::new(&jet, &set, &mu, DiskKernelParams::new(0.8, 1.5).unwrap(), 0.9).unwrap();
    let z = c(0.2, 0.4);
    let h = 1e-5;
    for dir in [c(h, 0.0), c(0.0, h)] {
        let fd = (ext.value(z + dir).unwrap() - ext.value(z - dir).unwrap()) / (dir * 2.0);
        let d = ext.derivatives(z, 1).unwrap()[1];
        assert!((fd - d).norm() < 1e-7 * d.norm().max(1.0), "{fd} {d}");
    }
}

#[test]
fn cauchy_riemann_residual_shrinks_quadratically() {
    let set = full_circle(128);
    let mu = set.measure(7).unwrap();
    let jet = Jet::induce(1, 1.5, set.len(), |a, _| Some(set.coordinate(a).exp())).unwrap();
    let ext = DiskExtension::new(&jet, &set, &mu, DiskKernelParams::new(0.8, 1.5).unwrap(), 0.95).unwrap();
    let z = c(0.3, -0.5);
    let r1 = cr_residual(&ext, z, 1e-2).unwrap();
    let r2 = cr_residual(&ext, z, 5e-3).unwrap();
    let ratio = r1 / r2;
    assert!((3.5..4.5).contains(&ratio), "{r1} {r2}");
}

#[test]
fn zero_of_h_is_reported() {
    // two close atoms and large q give h a zero between them inside the disk
    let set = CircleSet::from_angles(&[0.0, 0.5]).unwrap();
    let mu = DoublingMeasure::uniform(set.planar()).unwrap();
    let jet = Jet::constant(1, 0.5, 2, c(1.0, 0.0));
    let res = DiskExtension::new(&jet, &set, &mu, DiskKernelParams::new(12.0, 0.5).unwrap(), 0.999);
    assert!(matches!(res, Err(Error::ZeroOfKernelMass { .. })), "{res:?}");
}

#[test]
fn winding_counts_zeros() {
    let f = |k: i32| move |t: f64| Complex::from_polar(0.5, t).powi(k) + c(0.01, 0.0);
    assert_eq!(winding(f(0), 16).0, 0);
    assert_eq!(winding(f(3), 16).0, 3);
}

#[test]
fn assumption6_on_full_circle() {
    let set = full_circle(256);
    let mu = set.measure(8).unwrap();
    let rep = check_assumption6(&set, &mu, 0.5, &Assumption6Config::default()).unwrap();
    assert!(rep.pass, "{}", rep.to_text());
    assert!(rep.constant > 0.0);
}

#[test]
fn assumption6_single_atom_ratio_is_flat() {
    let set = CircleSet::from_angles(&[1.0]).unwrap();
    let mu = DoublingMeasure::uniform(set.planar()).unwrap();
    let rep = check_assumption6(&set, &mu, 1.3, &Assumption6Config::default()).unwrap();
    // |h| = d^-q and mu(B_z) = 1
    assert!((rep.constant - 1.0).abs() < 1e-12);
    assert!(rep.series.iter().all(|v| (v - 1.0).abs() < 1e-12));
    assert!(rep.pass);
}

#[test]
fn a_alpha_vanishes_for_polynomials() {
    let set = full_circle(64);
    let mu = set.measure(6).unwrap();
    let jet = Jet::induce(1, 1.25, set.len(), |a, j| {
        Some(if j.order() == 0 { set.coordinate(a) } else { c(1.0, 0.0) })
    })
    .unwrap();
    let ext = DiskExtension::new(&jet, &set, &mu, DiskKernelParams::new(0.8, 1.25).unwrap(), 1.0 - 1e-4).unwrap();
    let cfg = AAlphaConfig {
        directions: 8,
        depths: vec![4, 8, 12],
        ..AAlphaConfig::default()
    };
    let rep = check_a_alpha(&ext, 3, &cfg).unwrap();
    assert!(rep.constant < 1e-6, "{}", rep.to_text());
    assert!(check_a_alpha(&ext, 1, &cfg).is_err());
}

#[test]
fn circle_file_round_trip() {
    let set = full_circle(8);
    let back = CircleSet::<f64>::parse(&set.to_text()).unwrap();
    assert_eq!(back.len(), 8);
    for (a, b) in set.points().iter().zip(back.points()) {
        assert_eq!(a.theta(), b.theta());
    }
    assert!(CircleSet::<f64>::parse("0.1\nabc\n").is_err());
}

#[test]
fn one_shot_extension_matches_certified_one() {
    let set = full_circle(64);
    let mu = set.measure(6).unwrap();
    let jet = identity_jet(&set);
    let p = DiskKernelParams::new(0.8, 1.0).unwrap();
    let z = c(0.6, -0.7);
    assert!((extend_ni(&jet, &set, &mu, p, z).unwrap() - z).norm() < 1e-12);
    assert!(extend_ni(&jet, &set, &mu, p, c(1.0, 0.0)).is_err());
}
