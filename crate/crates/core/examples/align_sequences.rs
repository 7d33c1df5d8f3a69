//! Optimal global alignment of two short sequences, with the witness.

use scoregeom::alignment::{optimal_score, score_alignment, LetterSequence};
use scoregeom::scoring::{Alphabet, ScoringFunction};

pub fn run() -> scoregeom::Result<f64> {
    let dna = Alphabet::from_str_letters("acgt")?;
    let r = ScoringFunction::match_mismatch_gap(dna.clone(), 2.0, -1.0, -1.0)?;
    let x = LetterSequence::parse(&dna, "gattaca")?;
    let y = LetterSequence::parse(&dna, "gcatgcta")?;
    let (score, witness) = optimal_score(&r, &x, &y)?;
    println!("L = {score}");
    for (i, j) in witness.pairs() {
        println!(
            "  x[{i}] = {}  y[{j}] = {}",
            dna.symbol(x.indices()[i - 1]),
            dna.symbol(y.indices()[j - 1])
        );
    }
    assert_eq!(score_alignment(&r, &x, &y, &witness)?, score);
    println!(
        "change norm {}, Frobenius norm {}",
        r.change_norm(),
        r.frobenius_norm()
    );
    Ok(score)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run().map(|_| ())
}
