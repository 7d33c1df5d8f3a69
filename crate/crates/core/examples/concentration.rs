//! Empirical tail of the optimal LCS score against the Azuma-Hoeffding bound.

use scoregeom::experiment::{concentration_study, ConcentrationRow, ExperimentConfig};
use scoregeom::scoring::{Alphabet, ScoringFunction};

pub fn run(n_list: Vec<usize>, trials: usize) -> scoregeom::Result<Vec<ConcentrationRow>> {
    let binary = Alphabet::from_str_letters("01")?;
    let lcs = ScoringFunction::lcs(binary.clone());
    let mut config = ExperimentConfig::new(binary)
        .with_n_list(n_list)
        .with_trials(trials);
    config.epsilon_grid = vec![0.0, 0.01, 0.02, 0.05, 0.1];
    let rows = concentration_study(&lcs, &config)?;
    println!(
        "{:>5} {:>6} {:>10} {:>10}",
        "n", "eps", "empirical", "bound"
    );
    for r in &rows {
        println!(
            "{:>5} {:>6} {:>10.4} {:>10.4}",
            r.n,
            r.epsilon,
            r.empirical_prob,
            r.ah_bound.min(2.0)
        );
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(vec![100, 200, 400], 500).map(|_| ())
}
