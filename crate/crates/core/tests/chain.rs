use nonlocal_magic::optim::{nn_optimize, OptimizerConfig};
use nonlocal_magic::qcore::{mutual_information, partial_trace};
use nonlocal_magic::tfim::{
    ground_state_lanczos, minn, two_point_nn_scan, Axis, Backend, MinnMode, TfimConfig,
};

#[test]
fn exact_and_free_fermion_scans_agree_at_twelve_sites() {
    let sites: Vec<usize> = (2..=12).collect();
    for h in [0.5, 1.0, 2.0] {
        let ed = two_point_nn_scan(&TfimConfig::new(12, h, Backend::Ed).unwrap(), &sites).unwrap();
        let ff = two_point_nn_scan(
            &TfimConfig::new(12, h, Backend::FreeFermion).unwrap(),
            &sites,
        )
        .unwrap();
        assert_eq!(ed.len(), ff.len());
        for (a, b) in ed.iter().zip(&ff) {
            assert_eq!((a.r, &a.measure_name), (b.r, &b.measure_name));
            assert!(
                (a.value - b.value).abs() < 1e-6,
                "h={h} r={} {}: {} vs {}",
                a.r,
                a.measure_name,
                a.value,
                b.value
            );
        }
    }
}

#[test]
fn ground_state_is_translation_invariant() {
    let gs = ground_state_lanczos(10, 1.0).unwrap();
    for d in 1..5 {
        let base = mutual_information(&gs.state, [0, d]).unwrap();
        for q in 1..10 {
            let shifted = mutual_information(&gs.state, [q, (q + d) % 10]).unwrap();
            assert!((base - shifted).abs() < 1e-8, "d={d} q={q}");
        }
    }
}

#[test]
fn canonical_shortcut_matches_optimiser() {
    let gs = ground_state_lanczos(10, 1.0).unwrap();
    let cfg = TfimConfig::new(10, 1.0, Backend::Ed).unwrap();
    let scan = two_point_nn_scan(&cfg, &[2, 4, 6]).unwrap();
    for rec in scan.iter().filter(|r| r.measure_name == "nn") {
        let rho = partial_trace(&gs.state, &[0, rec.r - 1]).unwrap();
        let opt = nn_optimize(&rho, &OptimizerConfig::default().with_starts(20))
            .unwrap()
            .value;
        assert!(
            (opt - rec.value).abs() < 1e-6,
            "r={} {} vs {}",
            rec.r,
            opt,
            rec.value
        );
    }
}

#[test]
fn minn_is_symmetric_under_reflection() {
    let gs = ground_state_lanczos(10, 1.0).unwrap();
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        let a = minn(&gs.state, [0, 3], axis, MinnMode::Enumerate)
            .unwrap()
            .value;
        let b = minn(&gs.state, [0, 7], axis, MinnMode::Enumerate)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-8, "{axis:?}");
    }
}
