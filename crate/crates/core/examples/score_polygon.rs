//! Convex polygon of rescaled (S, T) score pairs for random sequences of
//! growing length, and its Hausdorff distance to the largest one.

use scoregeom::experiment::{derive_trial_seed, random_sequences, sample_pair, ExperimentConfig};
use scoregeom::geometry::{build_set_polygon, hausdorff_distance};
use scoregeom::scoring::Alphabet;

pub fn run(lengths: &[usize]) -> scoregeom::Result<Vec<f64>> {
    let ab = Alphabet::from_str_letters("ab")?;
    let (s, t) = sample_pair(&ab, 11, 0);
    let config = ExperimentConfig::new(ab).with_seed(11);
    let mut polygons = Vec::new();
    for &n in lengths {
        let (x, y) = random_sequences(&config, derive_trial_seed(11, n as u64, 0), n)?;
        let polygon = build_set_polygon(&s, &t, &x, &y, 1e-6)?;
        println!(
            "n = {n:4}: {} vertices, perimeter {:.4}",
            polygon.len(),
            polygon.perimeter()
        );
        polygons.push(polygon);
    }
    let reference = polygons.last().expect("at least one length");
    let distances = polygons
        .iter()
        .map(|p| hausdorff_distance(p, reference))
        .collect::<scoregeom::Result<Vec<_>>>()?;
    for (n, d) in lengths.iter().zip(&distances) {
        println!("d_H(n = {n}, n = {}) = {d:.4}", lengths.last().unwrap());
    }
    Ok(distances)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(&[16, 64, 256]).map(|_| ())
}
