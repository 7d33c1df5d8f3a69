//! Uniform draws from the unit sphere of symmetric scoring functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scoregeom::scoring::{free_coordinate_count, sample_unit_sphere, Alphabet};

pub fn run(draws: usize) -> scoregeom::Result<Vec<f64>> {
    let ab = Alphabet::from_str_letters("ab")?;
    println!("{} free coordinates", free_coordinate_count(&ab));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let norms: Vec<f64> = (0..draws)
        .map(|_| sample_unit_sphere(&ab, &mut rng).frobenius_norm())
        .collect();
    let r = sample_unit_sphere(&ab, &mut rng);
    for row in r.rows() {
        println!(
            "{}",
            row.iter()
                .map(|v| format!("{v:8.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    println!("change norm {:.4}", r.change_norm());
    Ok(norms)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run(1000).map(|_| ())
}
