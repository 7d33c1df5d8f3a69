//! Global alignment with gaps: exact optima by dynamic programming, the
//! lexicographic (S, T) program for extreme T-scores among S-optimal
//! alignments, and an exhaustive enumeration oracle for short inputs.
//!
//! Alignments are stored canonically as two strictly increasing 1-based
//! index lists. Any arrangement of gaps between consecutive aligned pairs
//! has the same score, so the index pair is the whole story.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::{Alphabet, ScoringFunction};

/// Refuse exhaustive enumeration beyond this length.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Letters of a sequence, stored as indices into the alphabet's letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LetterSequence {
    symbols: Vec<usize>,
}

impl LetterSequence {
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .map(|c| match alphabet.index_of(c) {
                Some(i) if i != alphabet.gap_index() => Ok(i),
                _ => Err(Error::InvalidSequence(format!(
                    "symbol {c:?} is not a letter of the alphabet"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { symbols })
    }

    pub fn from_indices(alphabet: &Alphabet, symbols: Vec<usize>) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|&&s| s >= alphabet.size()) {
            return Err(Error::InvalidSequence(format!(
                "letter index {bad} out of range for {} letters",
                alphabet.size()
            )));
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.symbols
    }

    /// Replaces the letter at 0-based `position`.
    pub fn with_letter(&self, position: usize, letter: usize) -> Self {
        let mut symbols = self.symbols.clone();
        symbols[position] = letter;
        Self { symbols }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.symbols.iter().map(|&i| alphabet.symbol(i)).collect()
    }

    fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        if self.symbols.iter().any(|&s| s >= alphabet.size()) {
            return Err(Error::InvalidSequence(
                "sequence uses letters outside the alphabet".into(),
            ));
        }
        Ok(())
    }
}

/// A pair of strictly increasing 1-based index lists of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Alignment {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Alignment {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::InvalidAlignment(format!(
                "index lists have different lengths {} and {}",
                left.len(),
                right.len()
            )));
        }
        for list in [&left, &right] {
            if list.first() == Some(&0) {
                return Err(Error::InvalidAlignment("indices are 1-based".into()));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidAlignment(
                    "indices must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self { left, right })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// Number of aligned letter pairs.
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left.iter().copied().zip(self.right.iter().copied())
    }

    pub fn check_bounds(&self, n_x: usize, n_y: usize) -> Result<()> {
        if self.left.last().is_some_and(|&i| i > n_x) || self.right.last().is_some_and(|&j| j > n_y)
        {
            return Err(Error::InvalidAlignment(format!(
                "indices exceed sequence lengths ({n_x}, {n_y})"
            )));
        }
        Ok(())
    }
}

/// Total S- and T-scores of one alignment, before rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiScore {
    pub s_value: f64,
    pub t_value: f64,
}

/// Sum of aligned-pair scores plus gap scores for every unmatched letter.
pub fn score_alignment(
    r: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
    v: &Alignment,
) -> Result<f64> {
    x.check_alphabet(r.alphabet())?;
    y.check_alphabet(r.alphabet())?;
    v.check_bounds(x.len(), y.len())?;
    let g = r.alphabet().gap_index();
    let xs = x.indices();
    let ys = y.indices();
    let mut total = 0.0;
    let mut matched_x = vec![false; xs.len()];
    let mut matched_y = vec![false; ys.len()];
    for (i, j) in v.pairs() {
        total += r.get(xs[i - 1], ys[j - 1]);
        matched_x[i - 1] = true;
        matched_y[j - 1] = true;
    }
    for (i, _) in matched_x.iter().enumerate().filter(|(_, m)| !**m) {
        total += r.get(xs[i], g);
    }
    for (j, _) in matched_y.iter().enumerate().filter(|(_, m)| !**m) {
        total += r.get(g, ys[j]);
    }
    Ok(total)
}

pub fn bi_score(
    s: &ScoringFunction,
    t: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
    v: &Alignment,
) -> Result<BiScore> {
    Ok(BiScore {
        s_value: score_alignment(s, x, y, v)?,
        t_value: score_alignment(t, x, y, v)?,
    })
}

const DIAG: u8 = 0;
const UP: u8 = 1;
const LEFT: u8 = 2;

/// Walks a traceback matrix from the bottom-right corner.
fn backtrack(moves: &[u8], n_x: usize, n_y: usize) -> Alignment {
    let width = n_y + 1;
    let (mut i, mut j) = (n_x, n_y);
    let mut left = Vec::new();
    let mut right = Vec::new();
    while i > 0 || j > 0 {
        match moves[i * width + j] {
            DIAG => {
                left.push(i);
                right.push(j);
                i -= 1;
                j -= 1;
            }
            UP => i -= 1,
            _ => j -= 1,
        }
    }
    left.reverse();
    right.reverse();
    Alignment { left, right }
}

fn check_inputs(r: &ScoringFunction, x: &LetterSequence, y: &LetterSequence) -> Result<()> {
    x.check_alphabet(r.alphabet())?;
    y.check_alphabet(r.alphabet())
}

/// Optimal score only, with two rolling rows.
pub fn optimal_score_value(
    r: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
) -> Result<f64> {
    check_inputs(r, x, y)?;
    let g = r.alphabet().gap_index();
    let ys = y.indices();
    let gap_y: Vec<f64> = ys.iter().map(|&b| r.get(g, b)).collect();
    let mut prev = vec![0.0; ys.len() + 1];
    for j in 1..=ys.len() {
        prev[j] = prev[j - 1] + gap_y[j - 1];
    }
    let mut cur = vec![0.0; ys.len() + 1];
    for &a in x.indices() {
        let row = r.row(a);
        let gap_x = row[g];
        cur[0] = prev[0] + gap_x;
        for j in 1..=ys.len() {
            let diag = prev[j - 1] + row[ys[j - 1]];
            let up = prev[j] + gap_x;
            let left = cur[j - 1] + gap_y[j - 1];
            let mut best = diag;
            if up > best {
                best = up;
            }
            if left > best {
                best = left;
            }
            cur[j] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[ys.len()])
}

/// Optimal score and a witness alignment. Ties are broken diag > up > left
/// (up consumes a letter of `x` against a gap), which fixes the witness.
pub fn optimal_score(
    r: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
) -> Result<(f64, Alignment)> {
    check_inputs(r, x, y)?;
    let g = r.alphabet().gap_index();
    let ys = y.indices();
    let width = ys.len() + 1;
    let gap_y: Vec<f64> = ys.iter().map(|&b| r.get(g, b)).collect();
    let mut moves = vec![DIAG; (x.len() + 1) * width];
    let mut prev = vec![0.0; width];
    for j in 1..width {
        prev[j] = prev[j - 1] + gap_y[j - 1];
        moves[j] = LEFT;
    }
    let mut cur = vec![0.0; width];
    for (i, &a) in x.indices().iter().enumerate() {
        let row = r.row(a);
        let gap_x = row[g];
        let mv = &mut moves[(i + 1) * width..(i + 2) * width];
        cur[0] = prev[0] + gap_x;
        mv[0] = UP;
        for j in 1..width {
            let diag = prev[j - 1] + row[ys[j - 1]];
            let up = prev[j] + gap_x;
            let left = cur[j - 1] + gap_y[j - 1];
            let (mut best, mut code) = (diag, DIAG);
            if up > best {
                best = up;
                code = UP;
            }
            if left > best {
                best = left;
                code = LEFT;
            }
            cur[j] = best;
            mv[j] = code;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok((prev[ys.len()], backtrack(&moves, x.len(), ys.len())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexExtreme {
    pub s_opt: f64,
    pub t_extreme: f64,
    pub witness: Alignment,
}

/// Largest (or smallest) T-score among the S-optimal alignments.
///
/// The program maximizes `(s, t)` lexicographically, with `t` negated for
/// [`Sense::Min`]. Adding the same step to two pairs preserves their
/// lexicographic order, so the usual Bellman recursion stays exact. The
/// primary coordinate is compared with exact float equality; with
/// dyadic-rational tables all partial sums are exact.
pub fn lex_extreme_t(
    s: &ScoringFunction,
    t: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
    sense: Sense,
) -> Result<LexExtreme> {
    if s.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    check_inputs(s, x, y)?;
    let t = match sense {
        Sense::Max => t.clone(),
        Sense::Min => t.scaled(-1.0),
    };
    let g = s.alphabet().gap_index();
    let ys = y.indices();
    let width = ys.len() + 1;
    let s_gap_y: Vec<f64> = ys.iter().map(|&b| s.get(g, b)).collect();
    let t_gap_y: Vec<f64> = ys.iter().map(|&b| t.get(g, b)).collect();
    let mut moves = vec![DIAG; (x.len() + 1) * width];
    let mut prev = vec![(0.0, 0.0); width];
    for j in 1..width {
        prev[j] = (
            prev[j - 1].0 + s_gap_y[j - 1],
            prev[j - 1].1 + t_gap_y[j - 1],
        );
        moves[j] = LEFT;
    }
    let better = |a: (f64, f64), b: (f64, f64)| a.0 > b.0 || (a.0 == b.0 && a.1 > b.1);
    let mut cur = vec![(0.0, 0.0); width];
    for (i, &a) in x.indices().iter().enumerate() {
        let (s_row, t_row) = (s.row(a), t.row(a));
        let (s_gx, t_gx) = (s_row[g], t_row[g]);
        let mv = &mut moves[(i + 1) * width..(i + 2) * width];
        cur[0] = (prev[0].0 + s_gx, prev[0].1 + t_gx);
        mv[0] = UP;
        for j in 1..width {
            let b = ys[j - 1];
            let diag = (prev[j - 1].0 + s_row[b], prev[j - 1].1 + t_row[b]);
            let up = (prev[j].0 + s_gx, prev[j].1 + t_gx);
            let left = (cur[j - 1].0 + s_gap_y[j - 1], cur[j - 1].1 + t_gap_y[j - 1]);
            let (mut best, mut code) = (diag, DIAG);
            if better(up, best) {
                best = up;
                code = UP;
            }
            if better(left, best) {
                best = left;
                code = LEFT;
            }
            cur[j] = best;
            mv[j] = code;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let (s_opt, t_val) = prev[ys.len()];
    let t_extreme = match sense {
        Sense::Max => t_val,
        Sense::Min => -t_val,
    };
    Ok(LexExtreme {
        s_opt,
        t_extreme,
        witness: backtrack(&moves, x.len(), ys.len()),
    })
}

/// Number of alignments of lengths `(n_x, n_y)`: `sum_k C(n_x,k) C(n_y,k) = C(n_x+n_y, n_x)`.
pub fn alignment_count(n_x: usize, n_y: usize) -> u128 {
    let (n, k) = ((n_x + n_y) as u128, n_x.min(n_y) as u128);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub fn enumerate_alignments(n_x: usize, n_y: usize) -> Result<impl Iterator<Item = Alignment>> {
    enumerate_alignments_capped(n_x, n_y, DEFAULT_ENUMERATION_CAP)
}

/// Every alignment of lengths `(n_x, n_y)` exactly once, grouped by the
/// number of aligned pairs.
pub fn enumerate_alignments_capped(
    n_x: usize,
    n_y: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Alignment>> {
    if n_x > cap || n_y > cap {
        return Err(Error::EnumerationCap { n_x, n_y, cap });
    }
    Ok((0..=n_x.min(n_y)).flat_map(move |k| {
        (1..=n_x).combinations(k).flat_map(move |left| {
            (1..=n_y).combinations(k).map(move |right| Alignment {
                left: left.clone(),
                right,
            })
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceExtremes {
    pub l_s: f64,
    pub t_max: f64,
    pub t_min: f64,
}

/// Exhaustive optimum of S and the T-range over its exact maximizers.
pub fn brute_force_extremes(
    s: &ScoringFunction,
    t: &ScoringFunction,
    x: &LetterSequence,
    y: &LetterSequence,
) -> Result<BruteForceExtremes> {
    if s.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut best = BruteForceExtremes {
        l_s: f64::NEG_INFINITY,
        t_max: f64::NEG_INFINITY,
        t_min: f64::INFINITY,
    };
    for v in enumerate_alignments(x.len(), y.len())? {
        let b = bi_score(s, t, x, y, &v)?;
        if b.s_value > best.l_s {
            best = BruteForceExtremes {
                l_s: b.s_value,
                t_max: b.t_value,
                t_min: b.t_value,
            };
        } else if b.s_value == best.l_s {
            best.t_max = best.t_max.max(b.t_value);
            best.t_min = best.t_min.min(b.t_value);
        }
    }
    Ok(best)
}
