use wavestab::verify::{
    beam_closed_form_index, bisect_threshold, boussinesq_closed_form_index, boussinesq_closed_form_q, boussinesq_threshold,
    kgz_closed_form_index, kgz_closed_form_q, threshold_scan, ScanConfig,
};
use wavestab::{GridSpec, Model, StabilityProblem};

fn index_cfg(n: usize) -> ScanConfig {
    ScanConfig { grid: GridSpec::new(n), with_roots: false, ..ScanConfig::default() }
}

#[test]
fn boussinesq_closed_forms() {
    assert!((boussinesq_closed_form_index(0.0, 3.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((boussinesq_closed_form_index(0.75f64.sqrt(), 4.0).unwrap() - 0.866025).abs() < 1e-6);
    assert!(boussinesq_closed_form_index(0.5, 5.0).unwrap().is_infinite());
    assert!(boussinesq_closed_form_index(1.0, 3.0).is_err());
    assert!(boussinesq_closed_form_index(0.2, 1.0).is_err());
    assert_eq!(boussinesq_closed_form_q(0.3, 5.0).unwrap(), 0.0);
    assert_eq!(boussinesq_threshold(7.0), None);
}

#[test]
fn threshold_solves_the_implicit_equation() {
    // At c = √(p−1)/2 the index equals the speed.
    for p in [2.0, 3.0, 4.0] {
        let c = boussinesq_threshold(p).unwrap();
        assert!((boussinesq_closed_form_index(c, p).unwrap() - c).abs() <= 1e-12, "p={p}");
    }
}

#[test]
fn kgz_and_beam_closed_forms() {
    assert_eq!(kgz_closed_form_index(0.0).unwrap(), 1.0);
    let r = 0.5f64.sqrt();
    assert!((kgz_closed_form_index(r).unwrap() - r).abs() < 1e-15);
    assert!((kgz_closed_form_index(0.8).unwrap() - 0.6).abs() < 1e-15);
    assert!(kgz_closed_form_index(1.0).is_err());
    assert!((kgz_closed_form_q(0.6).unwrap() + 0.390625).abs() < 1e-15);

    assert!(beam_closed_form_index(1.0, 1.0, 0.1).unwrap().is_infinite());
    assert_eq!(beam_closed_form_index(1.0, 1.0, -0.5).unwrap(), 1.0);
    assert!(beam_closed_form_index(1.0, 0.0, -0.5).is_err());
}

#[test]
fn numerical_index_matches_closed_form() {
    for p in [2.0, 3.0, 4.0] {
        for c in [0.0, 0.3, 0.6] {
            let ix = StabilityProblem::with_defaults(Model::Boussinesq, c, p, &GridSpec::new(256))
                .unwrap()
                .pencil()
                .unwrap()
                .stability_index()
                .unwrap();
            let want = boussinesq_closed_form_index(c, p).unwrap();
            assert!((ix.omega_star - want).abs() <= 1e-3 * want, "p={p} c={c}: {} vs {want}", ix.omega_star);
        }
    }
    for c in [0.0, 0.3, 0.6] {
        let ix = StabilityProblem::with_defaults(Model::Kgz, c, 3.0, &GridSpec::new(256))
            .unwrap()
            .pencil()
            .unwrap()
            .stability_index()
            .unwrap();
        let want = kgz_closed_form_q(c).unwrap();
        assert!((ix.q_index - want).abs() <= 1e-3 * want.abs(), "c={c}");
    }
}

#[test]
fn boussinesq_scan_finds_one_half() {
    let table = threshold_scan(Model::Boussinesq, 2.0, 0.05, 0.95, 0.01, &index_cfg(256)).unwrap();
    assert_eq!(table.rows.len(), 91);
    assert!(table.rows.windows(2).all(|w| w[0].c < w[1].c));
    let t = table.detected_threshold().unwrap();
    assert!((0.49..=0.51).contains(&t), "{t}");
    // Monotone: everything past the threshold is stable.
    assert!(table.rows.iter().all(|r| r.stable == (r.c >= t)));
    let (lo, hi) = table.bracket().unwrap();
    let refined = bisect_threshold(Model::Boussinesq, 2.0, lo, hi, 1e-4, &index_cfg(256)).unwrap();
    assert!((refined - 0.5).abs() <= 1e-3, "{refined}");
}

#[test]
fn kgz_scan_finds_root_half() {
    let table = threshold_scan(Model::Kgz, 3.0, 0.05, 0.95, 0.01, &index_cfg(256)).unwrap();
    let t = table.detected_threshold().unwrap();
    assert!((0.70..=0.72).contains(&t), "{t}");
}

#[test]
fn p7_scan_is_unstable_everywhere() {
    let cfg = ScanConfig { grid: GridSpec::new(512), ..ScanConfig::default() };
    let table = threshold_scan(Model::Boussinesq, 7.0, 0.05, 0.95, 0.15, &cfg).unwrap();
    assert!(table.rows.iter().all(|r| !r.stable && r.omega_star.is_infinite() && r.lambda0.is_some()));
    assert_eq!(table.detected_threshold(), None);
    assert_eq!(table.bracket(), None);
}

#[test]
fn scan_results_do_not_depend_on_threads() {
    let one = threshold_scan(Model::Boussinesq, 3.0, 0.6, 0.8, 0.05, &index_cfg(256)).unwrap();
    let two = threshold_scan(Model::Boussinesq, 3.0, 0.6, 0.8, 0.05, &ScanConfig { jobs: 2, ..index_cfg(256) }).unwrap();
    assert!(one.rows.iter().all(|r| !r.q_index.is_nan()));
    assert_eq!(one.rows, two.rows);
}

#[test]
fn failed_rows_are_flagged_not_fatal() {
    // N = 128 under-resolves the p = 3 kernel: every row fails assumption A.
    let table = threshold_scan(Model::Boussinesq, 3.0, 0.6, 0.8, 0.1, &index_cfg(128)).unwrap();
    assert_eq!(table.rows.len(), 3);
    for r in &table.rows {
        assert!(r.q_index.is_nan() && !r.stable && r.flags[0].contains("assumption A"));
    }
    assert_eq!(table.bracket(), None);
}

#[test]
fn scan_errors() {
    let cfg = index_cfg(128);
    assert!(threshold_scan(Model::Boussinesq, 2.0, 0.1, 0.9, 0.0, &cfg).is_err());
    assert!(threshold_scan(Model::Boussinesq, 2.0, 0.9, 0.1, 0.1, &cfg).is_err());
    assert!(threshold_scan(Model::Kgz, 3.0, 0.1, 1.2, 0.1, &cfg).is_err());
    assert!(bisect_threshold(Model::Boussinesq, 2.0, 0.6, 0.7, 1e-4, &cfg).is_err());
}
