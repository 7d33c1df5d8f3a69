//! Alphabets and symmetric scoring functions over the gap-augmented alphabet.
//!
//! A scoring function assigns a real score to every ordered pair of symbols
//! drawn from the letters plus the gap symbol. It is symmetric and pins the
//! gap/gap cell to zero. Letters are addressed by their position in the
//! alphabet; the gap always sits at index `m`, after the `m` letters.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GAP: char = '-';

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
    gap: char,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>, gap: char) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet(
                "alphabet needs at least one letter".into(),
            ));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!(
                    "letter {c:?} appears twice"
                )));
            }
            if *c == gap {
                return Err(Error::InvalidAlphabet(format!(
                    "gap symbol {gap:?} is also a letter"
                )));
            }
        }
        Ok(Self { letters, gap })
    }

    /// Alphabet from the characters of `letters` with the default gap `-`.
    pub fn from_str_letters(letters: &str) -> Result<Self> {
        Self::new(letters.chars(), DEFAULT_GAP)
    }

    /// Number of letters `m`, gap excluded.
    pub fn size(&self) -> usize {
        self.letters.len()
    }

    /// Size of the augmented alphabet, `m + 1`.
    pub fn augmented_size(&self) -> usize {
        self.letters.len() + 1
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn gap(&self) -> char {
        self.gap
    }

    pub fn gap_index(&self) -> usize {
        self.letters.len()
    }

    /// Index of a letter or of the gap symbol.
    pub fn index_of(&self, symbol: char) -> Option<usize> {
        if symbol == self.gap {
            return Some(self.gap_index());
        }
        self.letters.iter().position(|&c| c == symbol)
    }

    pub fn symbol(&self, index: usize) -> char {
        if index == self.gap_index() {
            self.gap
        } else {
            self.letters[index]
        }
    }
}

/// Both norms of a scoring function side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub change_norm: f64,
    pub frobenius_norm: f64,
}

/// Symmetric real table over the augmented alphabet with a zero gap/gap cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringFunction {
    alphabet: Alphabet,
    dim: usize,
    table: Vec<f64>,
}

impl ScoringFunction {
    /// Validates a full `(m+1) x (m+1)` table, row-major, gap last.
    pub fn new(alphabet: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = alphabet.augmented_size();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidScoring(format!(
                "table must be {dim}x{dim} for {} letters plus the gap",
                alphabet.size()
            )));
        }
        let table: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_flat(alphabet, table)
    }

    fn from_flat(alphabet: Alphabet, table: Vec<f64>) -> Result<Self> {
        let dim = alphabet.augmented_size();
        debug_assert_eq!(table.len(), dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = table[i * dim + j];
                if !v.is_finite() {
                    return Err(Error::InvalidScoring(format!(
                        "entry ({}, {}) is not finite",
                        alphabet.symbol(i),
                        alphabet.symbol(j)
                    )));
                }
                if j > i && v != table[j * dim + i] {
                    return Err(Error::InvalidScoring(format!(
                        "symmetry violated: R({a}, {b}) = {v} but R({b}, {a}) = {w}",
                        a = alphabet.symbol(i),
                        b = alphabet.symbol(j),
                        w = table[j * dim + i],
                    )));
                }
            }
        }
        let g = alphabet.gap_index();
        if table[g * dim + g] != 0.0 {
            return Err(Error::InvalidScoring(format!(
                "R(G, G) must be 0, found {}",
                table[g * dim + g]
            )));
        }
        Ok(Self {
            alphabet,
            dim,
            table,
        })
    }

    /// Builds a table from its upper triangle; `f(i, j)` is only called
    /// with `i <= j` and the gap/gap cell is pinned to zero.
    pub fn from_upper(alphabet: Alphabet, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let dim = alphabet.augmented_size();
        let g = alphabet.gap_index();
        let mut table = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = if i == g && j == g { 0.0 } else { f(i, j) };
                table[i * dim + j] = v;
                table[j * dim + i] = v;
            }
        }
        Self::from_flat(alphabet, table)
    }

    pub fn zero(alphabet: Alphabet) -> Self {
        let dim = alphabet.augmented_size();
        Self {
            alphabet,
            dim,
            table: vec![0.0; dim * dim],
        }
    }

    /// Classic match/mismatch/gap scoring.
    pub fn match_mismatch_gap(
        alphabet: Alphabet,
        matched: f64,
        mismatch: f64,
        gap: f64,
    ) -> Result<Self> {
        let g = alphabet.gap_index();
        Self::from_upper(alphabet, |i, j| {
            if i == g || j == g {
                gap
            } else if i == j {
                matched
            } else {
                mismatch
            }
        })
    }

    /// Score 1 for equal letters, 0 otherwise: the optimum is the LCS length.
    pub fn lcs(alphabet: Alphabet) -> Self {
        Self::match_mismatch_gap(alphabet, 1.0, 0.0, 0.0).expect("constant scores are finite")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.dim + j]
    }

    /// Score of two symbols; panics if either is outside the augmented alphabet.
    pub fn score(&self, a: char, b: char) -> f64 {
        let i = self.alphabet.index_of(a).expect("symbol outside alphabet");
        let j = self.alphabet.index_of(b).expect("symbol outside alphabet");
        self.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.table[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.table.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// `max |R(a,b) - R(a,c)|` over all triples of the augmented alphabet,
    /// i.e. the largest spread within any row. The gap row takes part.
    pub fn change_norm(&self) -> f64 {
        self.table
            .chunks(self.dim)
            .map(|row| {
                let (lo, hi) = row
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    });
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Euclidean norm over ordered pairs, so off-diagonal cells count twice.
    pub fn frobenius_norm(&self) -> f64 {
        self.table.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norms(&self) -> NormReport {
        NormReport {
            change_norm: self.change_norm(),
            frobenius_norm: self.frobenius_norm(),
        }
    }

    /// Ordered-pair Frobenius inner product.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_alphabet(other)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            alphabet: self.alphabet.clone(),
            dim: self.dim,
            // +0.0 keeps the gap/gap pin from turning into -0.0
            table: self.table.iter().map(|v| c * v + 0.0).collect(),
        }
    }

    fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    /// Serializes to the `{"letters", "gap", "table"}` JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScoringDocument::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScoringDocument = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Pointwise `a*S + b*T`. Symmetry and the zero gap/gap cell carry over.
pub fn linear_combination(
    a: f64,
    s: &ScoringFunction,
    b: f64,
    t: &ScoringFunction,
) -> Result<ScoringFunction> {
    s.check_same_alphabet(t)?;
    Ok(ScoringFunction {
        alphabet: s.alphabet.clone(),
        dim: s.dim,
        table: s
            .table
            .iter()
            .zip(&t.table)
            .map(|(x, y)| a * x + b * y + 0.0)
            .collect(),
    })
}

/// Number of free coordinates of a symmetric scoring function with the
/// gap/gap cell pinned: `(m+1)(m+2)/2 - 1`.
pub fn free_coordinate_count(alphabet: &Alphabet) -> usize {
    let d = alphabet.augmented_size();
    d * (d + 1) / 2 - 1
}

/// Uniform sample from the Frobenius unit sphere of symmetric scoring
/// functions.
///
/// Independent standard normals are placed on the orthonormal basis made of
/// single diagonal cells and of symmetric off-diagonal pairs scaled by
/// `1/sqrt(2)`; the Gaussian vector is isotropic in that basis, so the
/// normalized table is uniform on the sphere.
pub fn sample_unit_sphere<R: Rng + ?Sized>(alphabet: &Alphabet, rng: &mut R) -> ScoringFunction {
    let g = alphabet.gap_index();
    loop {
        let r = ScoringFunction::from_upper(alphabet.clone(), |i, j| {
            let z: f64 = rng.sample(StandardNormal);
            if i == j {
                z
            } else {
                z * std::f64::consts::FRAC_1_SQRT_2
            }
        })
        .expect("gaussian draws are finite");
        debug_assert_eq!(r.get(g, g), 0.0);
        let norm = r.frobenius_norm();
        if norm > f64::MIN_POSITIVE.sqrt() {
            return r.scaled(1.0 / norm);
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScoringDocument {
    letters: Vec<String>,
    gap: String,
    table: Vec<Vec<f64>>,
}

impl From<&ScoringFunction> for ScoringDocument {
    fn from(r: &ScoringFunction) -> Self {
        Self {
            letters: r.alphabet.letters.iter().map(char::to_string).collect(),
            gap: r.alphabet.gap.to_string(),
            table: r.rows(),
        }
    }
}

fn single_char(s: &str, what: &str) -> Result<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::InvalidAlphabet(format!(
            "{what} {s:?} must be a single character"
        ))),
    }
}

impl TryFrom<ScoringDocument> for ScoringFunction {
    type Error = Error;

    fn try_from(doc: ScoringDocument) -> Result<Self> {
        let letters = doc
            .letters
            .iter()
            .map(|l| single_char(l, "letter"))
            .collect::<Result<Vec<_>>>()?;
        let gap = single_char(&doc.gap, "gap")?;
        ScoringFunction::new(Alphabet::new(letters, gap)?, doc.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::from_str_letters("ab").unwrap()
    }

    fn example_s() -> ScoringFunction {
        ScoringFunction::match_mismatch_gap(ab(), 2.0, -1.0, -1.0).unwrap()
    }

    /// Exhaustive triple maximum, kept separate from the row-spread shortcut.
    fn change_norm_brute(r: &ScoringFunction) -> f64 {
        let d = r.alphabet().augmented_size();
        let mut best: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    best = best.max((r.get(a, b) - r.get(a, c)).abs());
                }
            }
        }
        best
    }

    #[test]
    fn alphabet_rejects_duplicates_and_gap_letters() {
        assert!(Alphabet::from_str_letters("aa").is_err());
        assert!(Alphabet::new("a-".chars(), '-').is_err());
        assert!(Alphabet::from_str_letters("").is_err());
        let a = Alphabet::from_str_letters("acgt").unwrap();
        assert_eq!(a.augmented_size(), 5);
        assert_eq!(a.index_of('-'), Some(4));
        assert_eq!(a.index_of('x'), None);
    }

    #[test]
    fn change_norm_examples() {
        assert_eq!(ScoringFunction::zero(ab()).change_norm(), 0.0);
        assert_eq!(example_s().change_norm(), 3.0);
        assert_eq!(change_norm_brute(&example_s()), 3.0);
        let ones = ScoringFunction::from_upper(ab(), |_, _| 1.0).unwrap();
        assert_eq!(ones.change_norm(), 1.0);
        assert_eq!(change_norm_brute(&ones), 1.0);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(ScoringFunction::zero(ab()).frobenius_norm(), 0.0);
        assert_eq!(example_s().frobenius_norm(), 14f64.sqrt());
        let off =
            ScoringFunction::from_upper(ab(), |i, j| if (i, j) == (0, 1) { 1.0 } else { 0.0 })
                .unwrap();
        assert_eq!(off.frobenius_norm(), 2f64.sqrt());
    }

    #[test]
    fn linear_combination_examples() {
        let s = example_s();
        let t = ScoringFunction::lcs(ab());
        assert_eq!(linear_combination(1.0, &s, 0.0, &t).unwrap(), s);
        assert_eq!(
            linear_combination(0.0, &s, 0.0, &t).unwrap(),
            ScoringFunction::zero(ab())
        );
        let doubled = linear_combination(1.0, &s, 1.0, &s).unwrap();
        assert_eq!(doubled, s.scaled(2.0));
        let other = ScoringFunction::lcs(Alphabet::from_str_letters("xy").unwrap());
        assert!(matches!(
            linear_combination(1.0, &s, 1.0, &other),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn validation_names_the_violation() {
        let err = ScoringFunction::new(
            ab(),
            vec![
                vec![1.0, 2.0, 0.0],
                vec![3.0, 1.0, 0.0],
                vec![0.0, 0.0, 0.0],
            ],
        )
        .unwrap_err();
        assert!(err.to_string().contains("symmetry"), "{err}");
        let err = ScoringFunction::new(ab(), vec![vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]])
            .unwrap_err();
        assert!(err.to_string().contains("R(G, G)"), "{err}");
        assert!(ScoringFunction::new(ab(), vec![vec![0.0; 2]; 2]).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let s = example_s();
        assert_eq!(ScoringFunction::from_json(&s.to_json()).unwrap(), s);
        let bad = r#"{"letters":["a","b"],"gap":"-","table":[[2,-1,-1],[0,2,-1],[-1,-1,0]]}"#;
        assert!(ScoringFunction::from_json(bad).is_err());
        let bad_gap = r#"{"letters":["a"],"gap":"--","table":[[1,0],[0,0]]}"#;
        assert!(ScoringFunction::from_json(bad_gap).is_err());
    }

    #[test]
    fn sphere_dimension_and_normalization() {
        assert_eq!(free_coordinate_count(&ab()), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let r = sample_unit_sphere(&ab(), &mut rng);
            assert!((r.frobenius_norm() - 1.0).abs() < 1e-12);
            assert_eq!(r.get(2, 2), 0.0);
            assert_eq!(r.get(0, 1), r.get(1, 0));
        }
    }

    #[test]
    fn sphere_cell_means_vanish() {
        let alphabet = Alphabet::from_str_letters("a").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 100_000;
        let mut sum = [0.0f64; 3];
        let mut sum_sq = [0.0f64; 3];
        for _ in 0..draws {
            let r = sample_unit_sphere(&alphabet, &mut rng);
            for (k, v) in [r.get(0, 0), r.get(0, 1), r.get(1, 0)]
                .into_iter()
                .enumerate()
            {
                sum[k] += v;
                sum_sq[k] += v * v;
            }
        }
        for k in 0..3 {
            let mean = sum[k] / draws as f64;
            let var = sum_sq[k] / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt();
            assert!(mean.abs() < 4.0 * se, "cell {k}: mean {mean} se {se}");
        }
    }

    /// Rotating the coefficient vector inside one basis plane must not change
    /// the law of a fixed linear functional.
    #[test]
    fn sphere_law_invariant_under_plane_rotation() {
        let alphabet = Alphabet::from_str_letters("a").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 20_000;
        // basis coordinates for m = 1: (a,a) diagonal, (a,G) pair scaled by 1/sqrt2
        let coord = |r: &ScoringFunction| [r.get(0, 0), r.get(0, 1) * std::f64::consts::SQRT_2];
        let mut plain = Vec::with_capacity(draws);
        let mut rotated = Vec::with_capacity(draws);
        for _ in 0..draws {
            let c = coord(&sample_unit_sphere(&alphabet, &mut rng));
            plain.push(c[0]);
            let phi: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let c = coord(&sample_unit_sphere(&alphabet, &mut rng));
            rotated.push(phi.cos() * c[0] - phi.sin() * c[1]);
        }
        plain.sort_by(f64::total_cmp);
        rotated.sort_by(f64::total_cmp);
        for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let i = (q * draws as f64) as usize;
            assert!(
                (plain[i] - rotated[i]).abs() < 0.05,
                "quantile {q}: {} vs {}",
                plain[i],
                rotated[i]
            );
        }
    }

    fn arb_scoring() -> impl Strategy<Value = ScoringFunction> {
        prop::collection::vec(-8i32..=8, 6).prop_map(|v| {
            let mut it = v.into_iter();
            ScoringFunction::from_upper(ab(), |_, _| it.next().unwrap() as f64 / 4.0).unwrap()
        })
    }

    proptest! {
        #[test]
        fn norms_are_absolutely_homogeneous(r in arb_scoring(), c in -5.0f64..5.0) {
            let scaled = r.scaled(c);
            prop_assert!((scaled.change_norm() - c.abs() * r.change_norm()).abs() < 1e-12);
            prop_assert!((scaled.frobenius_norm() - c.abs() * r.frobenius_norm()).abs() < 1e-12);
        }

        #[test]
        fn change_norm_triangle_inequality(r in arb_scoring(), s in arb_scoring()) {
            let sum = linear_combination(1.0, &r, 1.0, &s).unwrap();
            prop_assert!(sum.change_norm() <= r.change_norm() + s.change_norm() + 1e-12);
        }

        #[test]
        fn change_norm_matches_triples(r in arb_scoring()) {
            prop_assert_eq!(r.change_norm(), change_norm_brute(&r));
        }

        #[test]
        fn change_norm_zero_iff_constant_rows(r in arb_scoring()) {
            let constant = r.rows().iter().all(|row| row.iter().all(|&v| v == row[0]));
            prop_assert_eq!(r.change_norm() == 0.0, constant);
        }
    }
}
