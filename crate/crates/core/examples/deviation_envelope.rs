//! Spread of the T-score among S-optimal alignments as n grows, against the
//! curvature-dependent envelope.

use scoregeom::experiment::{sample_pair, theorem1_study, ExperimentConfig, Theorem1Report};
use scoregeom::scoring::Alphabet;

pub fn run(n_list: Vec<usize>, trials: usize) -> scoregeom::Result<Theorem1Report> {
    let ab = Alphabet::from_str_letters("ab")?;
    let (s, t) = sample_pair(&ab, 2024, 0);
    let config = ExperimentConfig::new(ab)
        .with_n_list(n_list)
        .with_trials(trials);
    let report = theorem1_study(&s, &t, &config)?;
    println!("y0_hat = {:.5}, k_hat = {:.4}", report.y0_hat, report.k_hat);
    for row in &report.rows {
        println!(
            "n = {:5}: max deviation {:.4}, envelope {:.4}, within {:.3}",
            row.n, row.max_deviation, row.envelope, row.fraction_within
        );
    }
    Ok(report)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(vec![64, 256, 1024], 100).map(|_| ())
}
