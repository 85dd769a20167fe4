use super::*;
use crate::geometry::{generate_set, SetKind};
use crate::jets::Polynomial;
use crate::measure::build_measure;

fn pt(c: &[f64]) -> Point<f64> {
    Point::new(c.to_vec()).unwrap()
}

/// Direct one-dimensional evaluation of the kernel average.
fn naive_1d(set: &CompactSetSample<f64>, mu: &DoublingMeasure<f64>, jet: &Jet<f64>, q: f64, x: f64) -> f64 {
    let m = jet.max_order();
    let mut num = 0.0;
    let mut den = 0.0;
    for (&t, &w) in mu.support().iter().zip(mu.weights()) {
        let y = set.atom(t).coords()[0];
        let k = w * (x - y).abs().powf(-q);
        let mut taylor = 0.0;
        let mut fact = 1.0;
        for e in 0..=m {
            if e > 0 {
                fact *= e as f64;
            }
            let c = jet.component(&MultiIndex::new(vec![e as u32])).unwrap()[t];
            taylor += c * (x - y).powi(e as i32) / fact;
        }
        num += k * taylor;
        den += k;
    }
    num / den
}

fn cantor(depth: usize) -> (CompactSetSample<f64>, DoublingMeasure<f64>) {
    let e = generate_set::<f64>(&SetKind::Cantor, depth).unwrap();
    let mu = build_measure(&e, depth).unwrap();
    (e, mu)
}

fn sin_jet(e: &CompactSetSample<f64>, alpha: f64) -> Jet<f64> {
    Jet::induce(1, alpha, e.len(), |a, j| {
        let x = e.atom(a).coords()[0];
        Some(match j.order() % 4 {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        })
    })
    .unwrap()
}

#[test]
fn matches_direct_sum() {
    let (e, mu) = cantor(5);
    let jet = sin_jet(&e, 1.5);
    let params = ExtensionParams::new(3.5, 1.5).unwrap();
    let ext = Extension::new(&jet, &e, &mu, params).unwrap();
    for &x in &[0.5, -0.25, 1.3, 0.3, 0.7001] {
        let got = ext.value(&pt(&[x])).unwrap();
        let want = naive_1d(&e, &mu, &jet, 3.5, x);
        assert!((got - want).abs() <= 1e-13 * want.abs().max(1.0), "x={x} {got} {want}");
    }
}

#[test]
fn reproduces_polynomials_and_their_derivatives() {
    let (e, mu) = cantor(4);
    let p = Polynomial::univariate(vec![0.5, -1.0, 2.0]);
    let jet = p.induce(&e, 2.0).unwrap();
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(4.0, 2.0).unwrap()).unwrap();
    for &x in &[0.5, -0.4, 1.2] {
        let x0 = pt(&[x]);
        assert!((ext.value(&x0).unwrap() - p.eval(&[x])).abs() < 1e-12);
        for k in 1..=3u32 {
            let a = MultiIndex::new(vec![k]);
            let d = ext.derivative(&x0, &a).unwrap();
            assert!((d - p.derivative_at(&[x], &a)).abs() < 1e-10, "x={x} k={k} {d}");
        }
    }
}

#[test]
fn derivatives_agree_with_finite_differences() {
    let (e, mu) = cantor(5);
    let jet = sin_jet(&e, 1.5);
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(3.5, 1.5).unwrap()).unwrap();
    let h = 1e-5;
    for &x in &[0.5, 0.2, 1.1] {
        let f = |y: f64| ext.value(&pt(&[y])).unwrap();
        let fd1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let fd2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let d1 = ext.derivative(&pt(&[x]), &MultiIndex::new(vec![1])).unwrap();
        let d2 = ext.derivative(&pt(&[x]), &MultiIndex::new(vec![2])).unwrap();
        assert!((d1 - fd1).abs() < 1e-6 * d1.abs().max(1.0), "x={x} {d1} {fd1}");
        assert!((d2 - fd2).abs() < 1e-3 * d2.abs().max(1.0), "x={x} {d2} {fd2}");
    }
}

#[test]
fn planar_gradient_against_finite_differences() {
    let e = generate_set::<f64>(&SetKind::Sierpinski, 3).unwrap();
    let mu = build_measure(&e, 3).unwrap();
    let jet = Jet::induce(2, 1.0, e.len(), |a, j| {
        let c = e.atom(a).coords();
        Some(match j.entries() {
            [0, 0] => c[0] * c[1] + c[0],
            [1, 0] => c[1] + 1.0,
            _ => c[0],
        })
    })
    .unwrap();
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(4.0, 1.0).unwrap()).unwrap();
    let x = [0.3, 0.6];
    let h = 1e-6;
    for k in 0..2 {
        let mut a = vec![0u32; 2];
        a[k] = 1;
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        let fd = (ext.value(&pt(&xp)).unwrap() - ext.value(&pt(&xm)).unwrap()) / (2.0 * h);
        let d = ext.derivative(&pt(&x), &MultiIndex::new(a)).unwrap();
        assert!((d - fd).abs() < 1e-6, "{d} {fd}");
    }
}

#[test]
fn errors() {
    let (e, mu) = cantor(3);
    let jet = sin_jet(&e, 1.5);
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(3.5, 1.5).unwrap()).unwrap();
    assert!(matches!(ext.value(e.atom(2)), Err(Error::Singular(2))));
    assert!(matches!(ext.h_q(e.atom(0)), Err(Error::Singular(0))));
    assert!(matches!(
        ext.derivative(&pt(&[0.5]), &MultiIndex::new(vec![3])),
        Err(Error::OrderExceeded { requested: 3, max: 2 })
    ));
    assert!(ExtensionParams::new(0.0, 1.0).is_err());
    assert!(Extension::new(&jet, &e, &mu, ExtensionParams::new(3.5, 2.5).unwrap()).is_err());
}

#[test]
fn h_q_is_the_kernel_mass() {
    let (e, mu) = cantor(4);
    let params = ExtensionParams::new(2.5, 1.0).unwrap();
    let x = 0.5;
    let want: f64 = mu
        .support()
        .iter()
        .zip(mu.weights())
        .map(|(&t, &w)| w * (x - e.atom(t).coords()[0]).abs().powf(-2.5))
        .sum();
    let got = h_q(&e, &mu, &params, &pt(&[x])).unwrap();
    assert!((got - want).abs() < 1e-12 * want);
}

#[test]
fn disk_metric_kernel() {
    let e = generate_set::<f64>(&SetKind::CircleArc { start: 0.0, end: 1.0 }, 4).unwrap();
    let mu = DoublingMeasure::uniform(&e).unwrap();
    let jet = Jet::constant(2, 0.0, e.len(), 1.0);
    let params = ExtensionParams::new(1.5, 0.0).unwrap().with_metric(Metric::NonIsotropicDisk);
    let ext = Extension::new(&jet, &e, &mu, params).unwrap();
    let x = pt(&[0.2, 0.1]);
    assert!((ext.value(&x).unwrap() - 1.0).abs() < 1e-14);
    let want: f64 = e
        .atoms()
        .iter()
        .map(|t| crate::geometry::distance(&x, t, Metric::NonIsotropicDisk).unwrap().powf(-1.5))
        .sum::<f64>()
        / e.len() as f64;
    assert!((ext.h_q(&x).unwrap() - want).abs() < 1e-12 * want);
}

#[test]
fn window_profile() {
    assert_eq!(transition(-0.1), 0.0);
    assert_eq!(transition(1.0), 1.0);
    assert!((transition(0.5_f64) - 0.5).abs() < 1e-15);
    let mut prev = 0.0;
    for i in 1..100 {
        let v = transition(i as f64 / 100.0);
        assert!(v > prev || (v == 1.0 && i > 90));
        prev = v;
    }
    assert_eq!(window_weight(&[1.5], 2.0), 1.0);
    assert_eq!(window_weight(&[4.0], 2.0), 0.0);
}

#[test]
fn windowed_derivative_against_finite_differences() {
    let (e, mu) = cantor(4);
    let jet = sin_jet(&e, 1.5);
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(3.5, 1.5).unwrap()).unwrap();
    let r = 2.0;
    assert_eq!(windowed_extension(&ext, r, &pt(&[5.0])).unwrap(), 0.0);
    assert!(matches!(windowed_extension(&ext, 1.0, &pt(&[0.5])), Err(Error::OutsideWindow(_))));
    let h = 1e-6;
    for &x in &[2.7, -3.1, 1.5] {
        let f = |y: f64| windowed_extension(&ext, r, &pt(&[y])).unwrap();
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        let t = windowed_jet_at(&ext, r, &pt(&[x]), 1).unwrap();
        assert!((t.value() - f(x)).abs() < 1e-15);
        let d = t.derivative(&MultiIndex::new(vec![1])).unwrap();
        assert!((d - fd).abs() < 1e-6, "x={x} {d} {fd}");
    }
}

#[test]
fn grid_assembly_marks_atoms() {
    let (e, mu) = cantor(3);
    let jet = sin_jet(&e, 1.5);
    let ext = Extension::new(&jet, &e, &mu, ExtensionParams::new(3.5, 1.5).unwrap()).unwrap();
    let spec = GridSpec::spanning(vec![0.0], vec![1.0], vec![28]).unwrap();
    let cols = [MultiIndex::zero(1), MultiIndex::new(vec![1]), MultiIndex::new(vec![2])];
    let g = assemble_g(&ext, &spec, &cols, None).unwrap();
    // nodes k/27: atoms of the depth-3 Cantor set sit at multiples of 1/27
    let hits = g.on_set.iter().filter(|a| a.is_some()).count();
    assert!(hits >= 2, "{hits}");
    for (i, row) in g.rows.iter().enumerate() {
        match g.on_set[i] {
            Some(a) => {
                assert_eq!(row[0], e.atom(a).coords()[0].sin());
                assert!(row[2].is_nan());
            }
            None => assert!((row[0] - ext.value(&spec.node(i)).unwrap()).abs() < 1e-14),
        }
    }
    let back = FieldGrid::<f64>::parse(&g.to_text()).unwrap();
    assert_eq!(back.columns, g.columns);
    assert_eq!(back.on_set, g.on_set);
    for (a, b) in back.rows.iter().zip(&g.rows) {
        for (x, y) in a.iter().zip(b) {
            assert!(x == y || (x.is_nan() && y.is_nan()));
        }
    }
}
