//! Among alignments that are optimal for S, find the largest and smallest
//! T-score, and check them against exhaustive enumeration.

use scoregeom::alignment::{brute_force_extremes, lex_extreme_t, LetterSequence, Sense};
use scoregeom::scoring::{Alphabet, ScoringFunction};

pub fn run() -> scoregeom::Result<(f64, f64)> {
    let ab = Alphabet::from_str_letters("ab")?;
    let s = ScoringFunction::lcs(ab.clone());
    let t = ScoringFunction::match_mismatch_gap(ab.clone(), 0.0, 1.0, 0.5)?;
    let x = LetterSequence::parse(&ab, "abab")?;
    let y = LetterSequence::parse(&ab, "baba")?;
    let hi = lex_extreme_t(&s, &t, &x, &y, Sense::Max)?;
    let lo = lex_extreme_t(&s, &t, &x, &y, Sense::Min)?;
    println!(
        "L_S = {}, T in [{}, {}]",
        hi.s_opt, lo.t_extreme, hi.t_extreme
    );
    println!(
        "max witness {:?} / {:?}",
        hi.witness.left(),
        hi.witness.right()
    );
    let brute = brute_force_extremes(&s, &t, &x, &y)?;
    assert_eq!(
        (brute.l_s, brute.t_max, brute.t_min),
        (hi.s_opt, hi.t_extreme, lo.t_extreme)
    );
    Ok((lo.t_extreme, hi.t_extreme))
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    run().map(|_| ())
}
