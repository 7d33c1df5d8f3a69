//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1`
//! to see the report in order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;
use scoregeom::alignment::{
    brute_force_extremes, enumerate_alignments, lex_extreme_t, optimal_score, optimal_score_value,
    score_alignment, LetterSequence, Sense,
};
use scoregeom::experiment::{
    concentration_study, convergence_study, sample_pair, theorem1_study, theorem2_study,
    ExperimentConfig,
};
use scoregeom::geometry::{
    build_set_polygon, curvature_at_max_x, hausdorff_distance, ScorePair, SupportPolygon,
    DEFAULT_CURVATURE_STEP,
};
use scoregeom::io::render_csv;
use scoregeom::scoring::{Alphabet, ScoringFunction};

/// Criterion 1: zero tolerance against exhaustive enumeration.
const ORACLE_FIXTURES: usize = 600;
/// Criterion 3: exact, scores are dyadic.
const LIPSCHITZ_EDITS: usize = 1000;
/// Criteria 4 and 7: binomial standard errors of slack.
const STD_ERRORS: f64 = 3.0;
/// Criterion 6.
const THEOREM1_MIN_FRACTION: f64 = 0.99;
/// Criterion 7.
const PERIMETER_LIMIT: f64 = 8.0;
/// Criterion 8.
const CIRCLE_TOL: f64 = 1e-6;
const ELLIPSE_TOL: f64 = 1e-3;
const HAUSDORFF_TOL: f64 = 1e-12;

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn alphabet(size: usize) -> Alphabet {
    Alphabet::from_str_letters(&"abc"[..size]).unwrap()
}

/// Symmetric table with entries `k / 4`, `k` in `-8..=8`.
fn dyadic_scoring(alphabet: &Alphabet, rng: &mut impl Rng) -> ScoringFunction {
    ScoringFunction::from_upper(alphabet.clone(), |_, _| {
        rng.random_range(-8i32..=8) as f64 / 4.0
    })
    .unwrap()
}

fn random_sequence(alphabet: &Alphabet, len: usize, rng: &mut impl Rng) -> LetterSequence {
    LetterSequence::from_indices(
        alphabet,
        (0..len)
            .map(|_| rng.random_range(0..alphabet.size()))
            .collect(),
    )
    .unwrap()
}

#[test]
fn criterion_1_dp_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    for fixture in 0..ORACLE_FIXTURES {
        let ab = alphabet(rng.random_range(1..=3));
        let (s, t) = (dyadic_scoring(&ab, &mut rng), dyadic_scoring(&ab, &mut rng));
        let x = random_sequence(&ab, rng.random_range(0..=8), &mut rng);
        let y = random_sequence(&ab, rng.random_range(0..=8), &mut rng);
        let brute = brute_force_extremes(&s, &t, &x, &y).unwrap();
        let (l, witness) = optimal_score(&s, &x, &y).unwrap();
        let hi = lex_extreme_t(&s, &t, &x, &y, Sense::Max).unwrap();
        let lo = lex_extreme_t(&s, &t, &x, &y, Sense::Min).unwrap();
        let ok = l == brute.l_s
            && optimal_score_value(&s, &x, &y).unwrap() == brute.l_s
            && score_alignment(&s, &x, &y, &witness).unwrap() == l
            && (hi.s_opt, hi.t_extreme) == (brute.l_s, brute.t_max)
            && (lo.s_opt, lo.t_extreme) == (brute.l_s, brute.t_min)
            && score_alignment(&t, &x, &y, &hi.witness).unwrap() == brute.t_max
            && score_alignment(&t, &x, &y, &lo.witness).unwrap() == brute.t_min;
        if !ok {
            mismatches.push(fixture);
        }
    }
    let pass = mismatches.is_empty();
    verdict(
        1,
        "oracle equivalence",
        pass,
        &format!("{ORACLE_FIXTURES} fixtures, mismatches {mismatches:?}"),
    );
    assert!(pass);
}

/// Textbook LCS length by a full table, independent of the library DP.
fn lcs_length(x: &[usize], y: &[usize]) -> usize {
    let mut table = vec![vec![0usize; y.len() + 1]; x.len() + 1];
    for i in 1..=x.len() {
        for j in 1..=y.len() {
            table[i][j] = if x[i - 1] == y[j - 1] {
                table[i - 1][j - 1] + 1
            } else {
                table[i - 1][j].max(table[i][j - 1])
            };
        }
    }
    table[x.len()][y.len()]
}

#[test]
fn criterion_2_closed_forms() {
    let one = alphabet(1);
    let mut failures = Vec::new();
    for n in [1usize, 7, 100, 1000, 10_000] {
        for (aa, ag) in [(2.0, -1.0), (1.0, 0.75), (-1.0, -0.25), (0.0, 0.0)] {
            let r = ScoringFunction::match_mismatch_gap(one.clone(), aa, 0.0, ag).unwrap();
            let x = LetterSequence::from_indices(&one, vec![0; n]).unwrap();
            let expected = (n as f64 * aa).max(2.0 * n as f64 * ag);
            if optimal_score_value(&r, &x, &x).unwrap() != expected {
                failures.push(format!("n={n} R(a,a)={aa} R(a,G)={ag}"));
            }
        }
    }
    let binary = alphabet(2);
    let lcs = ScoringFunction::lcs(binary.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for pair in 0..100 {
        let x = random_sequence(&binary, rng.random_range(0..=500), &mut rng);
        let y = random_sequence(&binary, rng.random_range(0..=500), &mut rng);
        if optimal_score_value(&lcs, &x, &y).unwrap() != lcs_length(x.indices(), y.indices()) as f64
        {
            failures.push(format!("lcs pair {pair}"));
        }
    }
    let pass = failures.is_empty();
    verdict(
        2,
        "closed forms",
        pass,
        &format!("single letter up to n = 10^4, 100 LCS pairs; failures {failures:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_single_edits_are_lipschitz() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_ratio = 0.0f64;
    let mut violations = 0;
    for _ in 0..LIPSCHITZ_EDITS {
        let ab = alphabet(rng.random_range(2..=3));
        let r = dyadic_scoring(&ab, &mut rng);
        let x = random_sequence(&ab, rng.random_range(1..=60), &mut rng);
        let y = random_sequence(&ab, rng.random_range(0..=60), &mut rng);
        let edited = x.with_letter(rng.random_range(0..x.len()), rng.random_range(0..ab.size()));
        let change = (optimal_score_value(&r, &edited, &y).unwrap()
            - optimal_score_value(&r, &x, &y).unwrap())
        .abs();
        let norm = r.change_norm();
        if change > norm {
            violations += 1;
        }
        if norm > 0.0 {
            worst_ratio = worst_ratio.max(change / norm);
        }
    }
    let pass = violations == 0;
    verdict(
        3,
        "single-letter edits",
        pass,
        &format!(
            "{LIPSCHITZ_EDITS} edits, {violations} violations, max |dL| / |R| = {worst_ratio}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_4_concentration_is_dominated() {
    let binary = alphabet(2);
    let lcs = ScoringFunction::lcs(binary.clone());
    let config = ExperimentConfig::new(binary)
        .with_n_list(vec![100, 200, 400])
        .with_trials(1000)
        .with_seed(4);
    let rows = concentration_study(&lcs, &config).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for r in &rows {
        worst = worst.max(r.empirical_prob - (r.ah_bound + STD_ERRORS * r.std_error));
    }
    let pass = worst <= 0.0 && rows.len() == 15;
    verdict(
        4,
        "concentration domination",
        pass,
        &format!(
            "{} grid points, max(empirical - bound - 3 SE) = {worst:.4}",
            rows.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_mean_convergence_envelope() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, r) in [
        ("binary LCS", ScoringFunction::lcs(alphabet(2))),
        (
            "ternary 1/-1/-1",
            ScoringFunction::match_mismatch_gap(alphabet(3), 1.0, -1.0, -1.0).unwrap(),
        ),
    ] {
        let config = ExperimentConfig::new(r.alphabet().clone())
            .with_trials(200)
            .with_seed(5);
        let (lambda, records) = convergence_study(&r, &config).unwrap();
        let slack = records
            .iter()
            .map(|c| c.mean_gap_bound - c.lambda_gap)
            .fold(f64::INFINITY, f64::min);
        pass &= slack >= 0.0;
        lines.push(format!(
            "{label}: lambda_hat {:.4}, min slack {slack:.4}",
            lambda.lambda_hat
        ));
    }
    verdict(5, "mean-convergence envelope", pass, &lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_6_deviation_envelope() {
    const PAIRS: usize = 5;
    const N: usize = 1024;
    let ab = alphabet(2);
    let config = ExperimentConfig::new(ab.clone())
        .with_n_list(vec![N])
        .with_trials(200);
    let mut outcomes = Vec::new();
    let mut pair = 0u64;
    while outcomes.len() < PAIRS {
        let (s, t) = sample_pair(&ab, 2024, pair);
        let report = theorem1_study(&s, &t, &config).unwrap();
        if report.k_hat.is_finite() {
            let row = report.rows[0];
            outcomes.push((
                pair,
                report.k_hat,
                row.envelope,
                row.max_deviation,
                row.fraction_within,
            ));
        }
        pair += 1;
    }
    let pass = outcomes.iter().all(|o| o.4 >= THEOREM1_MIN_FRACTION);
    let detail = outcomes
        .iter()
        .map(|(p, k, env, dev, frac)| {
            format!("pair {p}: k_hat {k:.2}, envelope {env:.4}, max dev {dev:.4}, within {frac:.3}")
        })
        .collect::<Vec<_>>()
        .join("; ");
    verdict(
        6,
        "deviation envelope at n = 1024",
        pass,
        &format!("scanned {pair} pairs; {detail}"),
    );
    assert!(pass);
}

#[test]
fn criterion_7_curvature_probability_bound() {
    let ab = alphabet(2);
    let mut config = ExperimentConfig::new(ab.clone())
        .with_n_list(vec![512])
        .with_seed(7);
    config.pairs = 200;
    let report = theorem2_study(&ab, &config, &[0.05, 0.1, 0.2]).unwrap();
    let bound_ok = report
        .rows
        .iter()
        .all(|r| r.empirical_prob <= r.kappa_bound + STD_ERRORS * r.std_error);
    let perimeter_ok = report.pairs.iter().all(|p| p.perimeter <= PERIMETER_LIMIT);
    let pass = bound_ok && perimeter_ok && report.pairs.len() == 200;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            format!(
                "P[kappa < {}] = {:.3} vs {:.3}",
                r.k, r.empirical_prob, r.kappa_bound
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    verdict(
        7,
        "curvature probability",
        pass,
        &format!("{rows}; max perimeter {:.4}", report.max_perimeter),
    );
    assert!(pass);
}

/// Gift wrapping over a point set, dropping collinear boundary points.
fn jarvis_hull(points: &[ScorePair]) -> Vec<ScorePair> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: ScorePair, a: ScorePair, b: ScorePair| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let dist = |a: ScorePair, b: ScorePair| (a.x - b.x).powi(2) + (a.y - b.y).powi(2);
    let start = pts[0];
    let mut hull = vec![start];
    let mut current = start;
    loop {
        let mut next = if pts[0] == current { pts[1] } else { pts[0] };
        for &p in &pts {
            if p == current {
                continue;
            }
            let c = cross(current, next, p);
            if c < 0.0 || (c == 0.0 && dist(current, p) > dist(current, next)) {
                next = p;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        current = next;
    }
    hull
}

fn random_convex_polygon(rng: &mut impl Rng) -> SupportPolygon {
    let k = rng.random_range(1..=12);
    let points: Vec<ScorePair> = (0..k)
        .map(|_| ScorePair::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
        .collect();
    SupportPolygon::from_points(&points).unwrap()
}

#[test]
fn criterion_8_geometry_suite() {
    let mut failures = Vec::new();

    let circle = curvature_at_max_x(|_| 0.8, DEFAULT_CURVATURE_STEP);
    if (circle.kappa - 1.25).abs() > CIRCLE_TOL {
        failures.push(format!("circle kappa {}", circle.kappa));
    }
    let ellipse = curvature_at_max_x(
        |t: f64| (4.0 * t.cos().powi(2) + t.sin().powi(2)).sqrt(),
        DEFAULT_CURVATURE_STEP,
    );
    if (ellipse.kappa - 2.0).abs() > ELLIPSE_TOL {
        failures.push(format!("ellipse kappa {}", ellipse.kappa));
    }
    let square = SupportPolygon::from_points(&[
        ScorePair::new(1.0, 1.0),
        ScorePair::new(-1.0, 1.0),
        ScorePair::new(-1.0, -1.0),
        ScorePair::new(1.0, -1.0),
    ])
    .unwrap();
    let vertex = curvature_at_max_x(|t| square.support(t + 0.3), DEFAULT_CURVATURE_STEP);
    if !(vertex.vertex_detected && vertex.kappa == f64::INFINITY) {
        failures.push(format!("vertex {vertex:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let (a, b, c) = (
            random_convex_polygon(&mut rng),
            random_convex_polygon(&mut rng),
            random_convex_polygon(&mut rng),
        );
        let d = |p: &SupportPolygon, q: &SupportPolygon| hausdorff_distance(p, q).unwrap();
        let (ab, ba, bc, ac) = (d(&a, &b), d(&b, &a), d(&b, &c), d(&a, &c));
        if d(&a, &a) > HAUSDORFF_TOL
            || (ab - ba).abs() > HAUSDORFF_TOL
            || ac > ab + bc + HAUSDORFF_TOL
            || ab < 0.0
        {
            failures.push(format!("metric axioms: {ab} {ba} {bc} {ac}"));
        }
    }

    let mut hull_fixtures = 0;
    for size in 1..=3 {
        let ab = alphabet(size);
        for _ in 0..100 {
            let (s, t) = (dyadic_scoring(&ab, &mut rng), dyadic_scoring(&ab, &mut rng));
            let x = random_sequence(&ab, 2, &mut rng);
            let y = random_sequence(&ab, 2, &mut rng);
            let points: Vec<ScorePair> = enumerate_alignments(2, 2)
                .unwrap()
                .map(|a| {
                    ScorePair::new(
                        score_alignment(&s, &x, &y, &a).unwrap() / 2.0,
                        score_alignment(&t, &x, &y, &a).unwrap() / 2.0,
                    )
                })
                .collect();
            let mut expected = jarvis_hull(&points);
            let mut got = build_set_polygon(&s, &t, &x, &y, 1e-9)
                .unwrap()
                .vertices()
                .to_vec();
            let key = |p: &ScorePair, q: &ScorePair| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y));
            expected.sort_by(key);
            got.sort_by(key);
            if expected != got {
                failures.push(format!("hull mismatch: {expected:?} vs {got:?}"));
            }
            hull_fixtures += 1;
        }
    }

    let pass = failures.is_empty();
    verdict(
        8,
        "geometry suite",
        pass,
        &format!(
            "circle {:.3e}, ellipse {:.3e}, vertex kappa {}, 300 metric triples, {hull_fixtures} hull fixtures; failures {failures:?}",
            (circle.kappa - 1.25).abs(),
            (ellipse.kappa - 2.0).abs(),
            vertex.kappa
        ),
    );
    assert!(pass);
}

fn study_bytes() -> Vec<Vec<u8>> {
    let binary = alphabet(2);
    let lcs = ScoringFunction::lcs(binary.clone());
    let mut config = ExperimentConfig::new(binary.clone())
        .with_n_list(vec![24, 48, 96])
        .with_trials(40)
        .with_seed(9);
    config.pairs = 12;
    let (s, t) = sample_pair(&binary, 9, 0);
    let t1 = theorem1_study(&s, &t, &config).unwrap();
    let t2 = theorem2_study(&binary, &config, &config.k_grid).unwrap();
    let (lambda, conv) = convergence_study(&lcs, &config).unwrap();
    vec![
        render_csv(&concentration_study(&lcs, &config).unwrap()).unwrap(),
        render_csv(&conv).unwrap(),
        render_csv(&[lambda]).unwrap(),
        render_csv(&t1.rows).unwrap(),
        render_csv(&t1.trials).unwrap(),
        render_csv(&t2.rows).unwrap(),
        render_csv(&t2.pairs).unwrap(),
    ]
}

#[test]
fn criterion_9_thread_count_does_not_change_output() {
    let runs: Vec<Vec<Vec<u8>>> = [1, 4, 8]
        .iter()
        .map(|&threads| {
            ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(study_bytes)
        })
        .collect();
    let pass = runs.windows(2).all(|w| w[0] == w[1]);
    let bytes: usize = runs[0].iter().map(Vec::len).sum();
    verdict(
        9,
        "determinism across 1, 4, 8 threads",
        pass,
        &format!("7 CSVs, {bytes} bytes per run"),
    );
    assert!(pass);
}
