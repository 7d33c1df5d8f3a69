//! Monte Carlo estimate of the rescaled longest-common-subsequence length
//! of two uniform binary sequences.

use scoregeom::experiment::{estimate_lambda, ExperimentConfig, LambdaEstimate};
use scoregeom::scoring::{Alphabet, ScoringFunction};

pub fn run(n: usize, trials: usize) -> scoregeom::Result<LambdaEstimate> {
    let binary = Alphabet::from_str_letters("01")?;
    let lcs = ScoringFunction::lcs(binary.clone());
    let config = ExperimentConfig::new(binary)
        .with_n_list(vec![n])
        .with_trials(trials)
        .with_seed(7);
    let est = estimate_lambda(&lcs, &config)?;
    println!(
        "n = {n}, {trials} trials: L/n = {:.4} +/- {:.4}",
        est.lambda_hat, est.std_err
    );
    Ok(est)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(1000, 200).map(|_| ())
}
