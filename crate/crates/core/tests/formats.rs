//! Text formats survive a write and read back unchanged.

use whitney_ext::*;

fn fixture() -> (Set64, Measure64, Jet64) {
    let set: Set64 = generate_set(&SetKind::Sierpinski, 3).unwrap();
    let mu = build_measure(&set, 3).unwrap();
    let jet = Jet::induce(2, 1.5, set.len(), |a, j| {
        let p: &[f64] = set.atom(a).coords();
        Some((p[0] * 1.3 + p[1]).sin() / (1.0 + j.order() as f64) + 1e-17 * a as f64)
    })
    .unwrap();
    (set, mu, jet)
}

#[test]
fn set_file_round_trip() {
    let (set, _, _) = fixture();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.txt");
    std::fs::write(&path, set.to_text()).unwrap();
    let back = CompactSetSample::<f64>::load(&path).unwrap();
    assert_eq!(back.atoms(), set.atoms());
}

#[test]
fn measure_file_round_trip() {
    let (set, mu, _) = fixture();
    let back = DoublingMeasure::parse_on(&mu.to_text(), &set).unwrap();
    assert_eq!(back.support(), mu.support());
    assert_eq!(back.weights(), mu.weights());
    assert!((back.total_mass() - 1.0).abs() <= 1e-12);
}

#[test]
fn jet_file_round_trip() {
    let (_, _, jet) = fixture();
    assert_eq!(Jet::<f64>::parse(&jet.to_text()).unwrap(), jet);
}

#[test]
fn grid_file_round_trip() {
    let (set, mu, jet) = fixture();
    let ext = Extension::new(&jet, &set, &mu, ExtensionParams::new(4.0, 1.5).unwrap()).unwrap();
    let spec = GridSpec::spanning(vec![0.0, 0.0], vec![1.5, 1.0], vec![7, 5]).unwrap();
    let columns = [MultiIndex::zero(2), MultiIndex::unit(2, 0), MultiIndex::unit(2, 1)];
    let grid = assemble_g(&ext, &spec, &columns, None).unwrap();
    assert!(grid.on_set.iter().any(Option::is_some));
    assert_eq!(FieldGrid::<f64>::parse(&grid.to_text()).unwrap(), grid);
}

#[test]
fn extension_values_on_the_grid_match_pointwise_evaluation() {
    let (set, mu, jet) = fixture();
    let params = ExtensionParams::new(4.0, 1.5).unwrap();
    let ext = Extension::new(&jet, &set, &mu, params).unwrap();
    let spec = GridSpec::spanning(vec![-0.3, -0.2], vec![1.2, 0.9], vec![4, 3]).unwrap();
    let grid = assemble_g(&ext, &spec, &[MultiIndex::zero(2)], None).unwrap();
    for i in 0..spec.len() {
        let x = spec.node(i);
        let want = extend(&jet, &set, &mu, &params, &x).unwrap();
        assert!((grid.rows[i][0] - want).abs() <= 1e-14 * want.abs().max(1.0));
    }
}
