use wehler::experiment::{run_experiment, write_outputs, ExperimentConfig};
use wehler::fixtures::w1;
use wehler::report::to_json;
use wehler_core::dynamics::PhaseSpace;
use wehler_core::random::Degeneracy;
use wehler_core::stats::{area_error, empirical_curve, ZVariant, DEFAULT_GRID_STEP};

fn config(count: usize, primes: &[u64], seed: u64, mode: Degeneracy) -> ExperimentConfig {
    ExperimentConfig {
        count,
        primes: primes.to_vec(),
        seed,
        mode,
        variant: ZVariant::SymmetricMean,
        grid_step: DEFAULT_GRID_STEP,
        threads: None,
    }
}

#[test]
fn reports_are_byte_identical() {
    let cfg = config(2, &[29], 7, Degeneracy::NonDegenerate);
    let a = to_json(&run_experiment(&cfg).unwrap()).unwrap();
    let b = to_json(&run_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let single = ExperimentConfig { threads: Some(1), ..cfg.clone() };
    assert_eq!(to_json(&run_experiment(&single).unwrap()).unwrap(), a);
    let other = to_json(&run_experiment(&config(2, &[29], 8, Degeneracy::NonDegenerate)).unwrap()).unwrap();
    assert_ne!(a, other);
}

#[test]
fn nondegenerate_mode_has_no_boundary() {
    let report = run_experiment(&config(4, &[29, 37], 3, Degeneracy::NonDegenerate)).unwrap();
    for pr in &report.primes {
        assert_eq!(pr.surfaces.len(), 4);
        assert!(pr.failures.is_empty());
        for s in &pr.surfaces {
            assert_eq!(s.boundary_points, 0);
            assert_eq!(s.charts, 0);
            assert_eq!(s.prime, pr.prime);
        }
    }
}

#[test]
fn degenerate_mode_has_charts_and_windows_pass() {
    let report = run_experiment(&config(10, &[29], 5, Degeneracy::Degenerate)).unwrap();
    let pr = &report.primes[0];
    assert_eq!(pr.surfaces.len(), 10);
    for s in &pr.surfaces {
        assert!(s.charts >= 1);
        assert!(s.boundary_points >= 1);
        assert!(s.windows.all_pass(), "{:?}", s.windows);
        assert_eq!(2 * s.symmetric_cycles, s.fix_x + s.fix_y);
    }
    assert!(report.all_windows_pass());
}

#[test]
fn aggregates_match_surfaces() {
    let report = run_experiment(&config(3, &[31], 9, Degeneracy::NonDegenerate)).unwrap();
    let pr = &report.primes[0];
    let mean = pr.surfaces.iter().map(|s| s.area_error).sum::<f64>() / 3.0;
    assert!((pr.mean_area_error.unwrap() - mean).abs() < 1e-12);
    let averaged = pr.averaged_curve.as_ref().unwrap();
    assert!(averaged.values.windows(2).all(|w| w[1] >= w[0]));
    assert!((pr.averaged_area_error.unwrap() - area_error(averaged).unwrap()).abs() < 1e-12);
    let total: usize = pr.cycle_counts.iter().map(|&(t, _, n)| t * n).sum();
    assert_eq!(total, pr.surfaces.iter().map(|s| s.points).sum::<usize>());
}

#[test]
fn writes_per_prime_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&config(2, &[29, 37], 1, Degeneracy::NonDegenerate)).unwrap();
    let mut names = write_outputs(&report, dir.path()).unwrap();
    names.sort();
    assert_eq!(
        names,
        [
            "census_29.csv",
            "census_37.csv",
            "curve_29.csv",
            "curve_37.csv",
            "report.json",
            "windows_29.csv",
            "windows_37.csv"
        ]
    );
    let windows = std::fs::read_to_string(dir.path().join("windows_29.csv")).unwrap();
    assert!(windows.contains("\ns0.points_lower,204.0,"));
    assert!(windows.contains("\ns1.fix_y_upper,"));
}

#[test]
fn symmetric_mass_grows_and_error_shrinks_with_p() {
    let report = run_experiment(&config(20, &[29, 503], 21, Degeneracy::NonDegenerate)).unwrap();
    let [small, large] = [&report.primes[0], &report.primes[1]];
    assert!(large.mean_symmetric_fraction.unwrap() > small.mean_symmetric_fraction.unwrap());
    assert!(large.mean_area_error.unwrap() < small.mean_area_error.unwrap());
}

#[test]
fn w1_errors_decrease_with_p() {
    let errors: Vec<f64> = [29u64, 37, 59, 401, 457, 503]
        .iter()
        .map(|&p| {
            let space = PhaseSpace::build(&w1(p).unwrap()).unwrap();
            area_error(&empirical_curve(&space.census(), ZVariant::SymmetricMean, DEFAULT_GRID_STEP).unwrap()).unwrap()
        })
        .collect();
    let head = errors[..3].iter().sum::<f64>() / 3.0;
    let tail = errors[3..].iter().sum::<f64>() / 3.0;
    assert!(tail < head, "{errors:?}");
}
