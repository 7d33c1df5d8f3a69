//! Curvature at the x-maximizer of averaged polygons for random scoring
//! pairs drawn from the Frobenius unit sphere, against 4k/pi.

use scoregeom::experiment::{theorem2_study, ExperimentConfig, Theorem2Report};
use scoregeom::scoring::Alphabet;

pub fn run(pairs: usize, n: usize) -> scoregeom::Result<Theorem2Report> {
    let ab = Alphabet::from_str_letters("ab")?;
    let mut config = ExperimentConfig::new(ab.clone())
        .with_n_list(vec![n])
        .with_seed(3);
    config.pairs = pairs;
    let report = theorem2_study(&ab, &config, &[0.05, 0.1, 0.2, std::f64::consts::FRAC_PI_4])?;
    for row in &report.rows {
        println!(
            "k = {:.3}: P[kappa < k] = {:.3} (bound {:.3})",
            row.k, row.empirical_prob, row.kappa_bound
        );
    }
    let vertices = report.pairs.iter().filter(|p| p.vertex_detected).count();
    println!("{vertices} of {pairs} pairs have a vertex at the x-maximizer");
    println!("largest perimeter {:.4}", report.max_perimeter);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(50, 256).map(|_| ())
}
