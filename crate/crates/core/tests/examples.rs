//! Runs every example's `run` with reduced sizes and checks its result.

#[allow(dead_code)]
#[path = "../examples/align_sequences.rs"]
mod align_sequences;
#[allow(dead_code)]
#[path = "../examples/concentration.rs"]
mod concentration;
#[allow(dead_code)]
#[path = "../examples/curvature.rs"]
mod curvature;
#[allow(dead_code)]
#[path = "../examples/deviation_envelope.rs"]
mod deviation_envelope;
#[allow(dead_code)]
#[path = "../examples/lcs_constant.rs"]
mod lcs_constant;
#[allow(dead_code)]
#[path = "../examples/lexicographic_extremes.rs"]
mod lexicographic_extremes;
#[allow(dead_code)]
#[path = "../examples/random_pair_curvature.rs"]
mod random_pair_curvature;
#[allow(dead_code)]
#[path = "../examples/reproducible_run.rs"]
mod reproducible_run;
#[allow(dead_code)]
#[path = "../examples/score_polygon.rs"]
mod score_polygon;
#[allow(dead_code)]
#[path = "../examples/sphere_sampling.rs"]
mod sphere_sampling;

#[test]
fn align_sequences_runs() {
    // Independent recursion over prefixes gives 6.
    let score = align_sequences::run().unwrap();
    assert_eq!(score, 6.0);
}

#[test]
fn concentration_runs() {
    let rows = concentration::run(vec![40, 80], 50).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.empirical_prob <= 1.0));
}

#[test]
fn curvature_runs() {
    let [ellipse, circle, vertex] = curvature::run().unwrap();
    assert!((ellipse - 2.0).abs() < 1e-3);
    assert!((circle - 2.0).abs() < 1e-6);
    assert_eq!(vertex, f64::INFINITY);
}

#[test]
fn deviation_envelope_runs() {
    let report = deviation_envelope::run(vec![16, 32], 10).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert_eq!(report.trials.len(), 20);
}

#[test]
fn lcs_constant_matches_regression_value() {
    let est = lcs_constant::run(1000, 200).unwrap();
    assert!(
        (est.lambda_hat - 0.81).abs() <= 0.02,
        "lambda_hat = {}",
        est.lambda_hat
    );
}

#[test]
fn lexicographic_extremes_runs() {
    let (lo, hi) = lexicographic_extremes::run().unwrap();
    assert!(lo <= hi);
}

#[test]
fn random_pair_curvature_runs() {
    let report = random_pair_curvature::run(6, 32).unwrap();
    assert_eq!(report.rows.len(), 4);
    assert_eq!(report.rows[3].kappa_bound, 1.0);
    assert!(report.max_perimeter <= 8.0);
}

#[test]
fn reproducible_run_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = reproducible_run::run(a.path()).unwrap();
    let mb = reproducible_run::run(b.path()).unwrap();
    assert_eq!(ma, mb);
    for name in ["lambda.csv", "convergence.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
}

#[test]
fn score_polygon_runs() {
    let d = score_polygon::run(&[8, 32, 64]).unwrap();
    assert_eq!(d[2], 0.0);
}

#[test]
fn sphere_sampling_runs() {
    let norms = sphere_sampling::run(100).unwrap();
    assert!(norms.iter().all(|n| (n - 1.0).abs() < 1e-12));
}
