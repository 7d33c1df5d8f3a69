//! CSV and JSON emission, config files, and run manifests.
//!
//! Numbers are written with 17 significant digits so every emitted CSV can be
//! read back by [`parse_csv`] without loss.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alignment::{Alignment, LetterSequence};
use crate::error::{Error, Result};
use crate::experiment::{
    ConcentrationRow, ConvergenceRecord, ExperimentConfig, HausdorffRow, LambdaEstimate,
    PairRecord, Theorem1Row, Theorem2Row, TrialRecord,
};
use crate::scoring::{Alphabet, ScoringFunction, DEFAULT_GAP};

/// A row type with a fixed, documented CSV schema.
pub trait CsvRecord: Sized {
    const HEADER: &'static [&'static str];
    fn to_fields(&self) -> Vec<String>;
    fn from_fields(fields: &[&str]) -> Result<Self>;
}

/// Formats with 17 significant digits; round-trips through `str::parse`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn num(field: &str, name: &str) -> Result<f64> {
    field.parse().map_err(|_| {
        Error::MalformedCsv(format!("column {name}: cannot parse {field:?} as a number"))
    })
}

fn int(field: &str, name: &str) -> Result<usize> {
    field.parse().map_err(|_| {
        Error::MalformedCsv(format!(
            "column {name}: cannot parse {field:?} as an integer"
        ))
    })
}

fn flag(field: &str, name: &str) -> Result<bool> {
    field.parse().map_err(|_| {
        Error::MalformedCsv(format!(
            "column {name}: cannot parse {field:?} as a boolean"
        ))
    })
}

/// Renders records under their header; an empty slice gives a header-only file.
pub fn render_csv<R: CsvRecord>(records: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in records {
        let fields = r.to_fields();
        debug_assert_eq!(fields.len(), R::HEADER.len());
        w.write_record(&fields)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn parse_csv<R: CsvRecord>(bytes: &[u8]) -> Result<Vec<R>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = r.headers()?.clone();
    if header.iter().ne(R::HEADER.iter().copied()) {
        return Err(Error::MalformedCsv(format!(
            "header {:?} does not match expected {:?}",
            header.iter().collect::<Vec<_>>(),
            R::HEADER
        )));
    }
    r.records()
        .map(|row| {
            let row = row?;
            let fields: Vec<&str> = row.iter().collect();
            R::from_fields(&fields)
        })
        .collect()
}

/// Writes via a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

macro_rules! check_len {
    ($fields:expr) => {
        if $fields.len() != Self::HEADER.len() {
            return Err(Error::MalformedCsv(format!(
                "expected {} columns, found {}",
                Self::HEADER.len(),
                $fields.len()
            )));
        }
    };
}

impl CsvRecord for LambdaEstimate {
    const HEADER: &'static [&'static str] = &["n", "trials", "lambda_hat", "std_err"];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            format_f64(self.lambda_hat),
            format_f64(self.std_err),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            trials: int(f[1], "trials")?,
            lambda_hat: num(f[2], "lambda_hat")?,
            std_err: num(f[3], "std_err")?,
        })
    }
}

impl CsvRecord for ConcentrationRow {
    const HEADER: &'static [&'static str] = &[
        "n",
        "epsilon",
        "trials",
        "empirical_prob",
        "std_error",
        "ah_bound",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format_f64(self.epsilon),
            self.trials.to_string(),
            format_f64(self.empirical_prob),
            format_f64(self.std_error),
            format_f64(self.ah_bound),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            epsilon: num(f[1], "epsilon")?,
            trials: int(f[2], "trials")?,
            empirical_prob: num(f[3], "empirical_prob")?,
            std_error: num(f[4], "std_error")?,
            ah_bound: num(f[5], "ah_bound")?,
        })
    }
}

impl CsvRecord for ConvergenceRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "trials",
        "mean_rescaled",
        "std_rescaled",
        "lambda_gap",
        "mean_gap_bound",
        "a_n_bound",
        "within_bound_fraction",
        "single_event_floor",
        "three_event_floor",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            format_f64(self.mean_rescaled),
            format_f64(self.std_rescaled),
            format_f64(self.lambda_gap),
            format_f64(self.mean_gap_bound),
            format_f64(self.a_n_bound),
            format_f64(self.within_bound_fraction),
            format_f64(self.single_event_floor),
            format_f64(self.three_event_floor),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            trials: int(f[1], "trials")?,
            mean_rescaled: num(f[2], "mean_rescaled")?,
            std_rescaled: num(f[3], "std_rescaled")?,
            lambda_gap: num(f[4], "lambda_gap")?,
            mean_gap_bound: num(f[5], "mean_gap_bound")?,
            a_n_bound: num(f[6], "a_n_bound")?,
            within_bound_fraction: num(f[7], "within_bound_fraction")?,
            single_event_floor: num(f[8], "single_event_floor")?,
            three_event_floor: num(f[9], "three_event_floor")?,
        })
    }
}

impl CsvRecord for Theorem1Row {
    const HEADER: &'static [&'static str] = &[
        "n",
        "trials",
        "max_deviation",
        "mean_deviation",
        "envelope",
        "fraction_within",
        "probability_floor",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            format_f64(self.max_deviation),
            format_f64(self.mean_deviation),
            format_f64(self.envelope),
            format_f64(self.fraction_within),
            format_f64(self.probability_floor),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            trials: int(f[1], "trials")?,
            max_deviation: num(f[2], "max_deviation")?,
            mean_deviation: num(f[3], "mean_deviation")?,
            envelope: num(f[4], "envelope")?,
            fraction_within: num(f[5], "fraction_within")?,
            probability_floor: num(f[6], "probability_floor")?,
        })
    }
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_f64(*v))
        .collect::<Vec<_>>()
        .join(";")
}

fn split_f64(field: &str, name: &str) -> Result<Vec<f64>> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field.split(';').map(|v| num(v, name)).collect()
}

/// `i:j` pairs separated by `;`, 1-based.
pub fn format_alignment(a: &Alignment) -> String {
    a.pairs()
        .map(|(i, j)| format!("{i}:{j}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_alignment(field: &str) -> Result<Alignment> {
    if field.is_empty() {
        return Ok(Alignment::empty());
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for pair in field.split(';') {
        let (i, j) = pair.split_once(':').ok_or_else(|| {
            Error::MalformedCsv(format!("alignment pair {pair:?} is not of the form i:j"))
        })?;
        left.push(int(i, "witness")?);
        right.push(int(j, "witness")?);
    }
    Alignment::new(left, right)
}

/// Trial rows omit the wall time, which would break byte-identical reruns.
impl CsvRecord for TrialRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "trial_index",
        "l_s",
        "t_max",
        "t_min",
        "r_theta",
        "witness",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trial_index.to_string(),
            format_f64(self.l_s),
            format_f64(self.t_max),
            format_f64(self.t_min),
            join_f64(&self.r_theta),
            format_alignment(&self.witness),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            trial_index: int(f[1], "trial_index")?,
            l_s: num(f[2], "l_s")?,
            t_max: num(f[3], "t_max")?,
            t_min: num(f[4], "t_min")?,
            r_theta: split_f64(f[5], "r_theta")?,
            witness: parse_alignment(f[6])?,
            wall_time: Default::default(),
        })
    }
}

impl CsvRecord for Theorem2Row {
    const HEADER: &'static [&'static str] = &[
        "k",
        "pairs",
        "empirical_prob",
        "std_error",
        "kappa_bound",
        "perimeter_bound",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            format_f64(self.k),
            self.pairs.to_string(),
            format_f64(self.empirical_prob),
            format_f64(self.std_error),
            format_f64(self.kappa_bound),
            format_f64(self.perimeter_bound),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            k: num(f[0], "k")?,
            pairs: int(f[1], "pairs")?,
            empirical_prob: num(f[2], "empirical_prob")?,
            std_error: num(f[3], "std_error")?,
            kappa_bound: num(f[4], "kappa_bound")?,
            perimeter_bound: num(f[5], "perimeter_bound")?,
        })
    }
}

impl CsvRecord for PairRecord {
    const HEADER: &'static [&'static str] = &[
        "pair_index",
        "kappa",
        "rho",
        "vertex_detected",
        "reliable",
        "perimeter",
        "x0",
        "y0",
    ];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.pair_index.to_string(),
            format_f64(self.kappa),
            format_f64(self.rho),
            self.vertex_detected.to_string(),
            self.reliable.to_string(),
            format_f64(self.perimeter),
            format_f64(self.x0),
            format_f64(self.y0),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            pair_index: int(f[0], "pair_index")?,
            kappa: num(f[1], "kappa")?,
            rho: num(f[2], "rho")?,
            vertex_detected: flag(f[3], "vertex_detected")?,
            reliable: flag(f[4], "reliable")?,
            perimeter: num(f[5], "perimeter")?,
            x0: num(f[6], "x0")?,
            y0: num(f[7], "y0")?,
        })
    }
}

impl CsvRecord for HausdorffRow {
    const HEADER: &'static [&'static str] = &["n", "trials", "median_distance", "mean_distance"];
    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            format_f64(self.median_distance),
            format_f64(self.mean_distance),
        ]
    }
    fn from_fields(f: &[&str]) -> Result<Self> {
        check_len!(f);
        Ok(Self {
            n: int(f[0], "n")?,
            trials: int(f[1], "trials")?,
            median_distance: num(f[2], "median_distance")?,
            mean_distance: num(f[3], "mean_distance")?,
        })
    }
}

/// How a scoring function is specified in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScoringSpec {
    /// Full `(m+1) x (m+1)` table, gap last.
    Table {
        table: Vec<Vec<f64>>,
    },
    MatchMismatchGap {
        matched: f64,
        mismatch: f64,
        gap: f64,
    },
    Lcs,
    /// Draw from the Frobenius unit sphere; `pair` selects the stream.
    Sphere {
        #[serde(default)]
        pair: u64,
    },
}

impl ScoringSpec {
    /// `second` picks the T member of a sphere pair.
    pub fn resolve(
        &self,
        alphabet: &Alphabet,
        master_seed: u64,
        second: bool,
    ) -> Result<ScoringFunction> {
        match self {
            ScoringSpec::Table { table } => ScoringFunction::new(alphabet.clone(), table.clone()),
            ScoringSpec::MatchMismatchGap {
                matched,
                mismatch,
                gap,
            } => ScoringFunction::match_mismatch_gap(alphabet.clone(), *matched, *mismatch, *gap),
            ScoringSpec::Lcs => Ok(ScoringFunction::lcs(alphabet.clone())),
            ScoringSpec::Sphere { pair } => {
                let (s, t) = crate::experiment::sample_pair(alphabet, master_seed, *pair);
                Ok(if second { t } else { s })
            }
        }
    }
}

fn default_letters() -> String {
    "ab".into()
}

fn default_gap() -> char {
    DEFAULT_GAP
}

/// Declarative run configuration; every field has a default, and the
/// resolved form is echoed into each manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_letters")]
    pub letters: String,
    #[serde(default = "default_gap")]
    pub gap: char,
    pub letter_distribution: Option<Vec<f64>>,
    pub n_list: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub epsilon_grid: Option<Vec<f64>>,
    pub k_grid: Option<Vec<f64>>,
    pub pairs: Option<usize>,
    pub pair_trials: Option<usize>,
    pub directions: Option<usize>,
    pub curvature_step: Option<f64>,
    pub k_min: Option<f64>,
    /// Angular resolution of the polygon sweep.
    pub angle_tol: Option<f64>,
    pub output_dir: Option<PathBuf>,
    /// Explicit sequences; a random pair at the largest `n` is used otherwise.
    pub x: Option<String>,
    pub y: Option<String>,
    /// Primary scoring function, LCS when absent.
    pub s: Option<ScoringSpec>,
    /// Secondary scoring function, the T member of sphere pair 0 when absent.
    pub t: Option<ScoringSpec>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        toml::from_str("").expect("empty config parses")
    }
}

pub const DEFAULT_ANGLE_TOL: f64 = 1e-6;

/// Config with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub letters: String,
    pub gap: char,
    pub letter_distribution: Vec<f64>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub epsilon_grid: Vec<f64>,
    pub k_grid: Vec<f64>,
    pub pairs: usize,
    pub pair_trials: usize,
    pub directions: usize,
    pub curvature_step: f64,
    pub k_min: f64,
    pub angle_tol: f64,
    pub x: Option<String>,
    pub y: Option<String>,
    pub s: ScoringSpec,
    pub t: ScoringSpec,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let alphabet = Alphabet::new(self.letters.chars(), self.gap)?;
        let base = ExperimentConfig::new(alphabet);
        Ok(ResolvedConfig {
            letters: self.letters.clone(),
            gap: self.gap,
            letter_distribution: self
                .letter_distribution
                .clone()
                .unwrap_or(base.letter_distribution),
            n_list: self.n_list.clone().unwrap_or(base.n_list),
            trials: self.trials.unwrap_or(base.trials),
            master_seed: self.master_seed.unwrap_or(base.master_seed),
            epsilon_grid: self.epsilon_grid.clone().unwrap_or(base.epsilon_grid),
            k_grid: self.k_grid.clone().unwrap_or(base.k_grid),
            pairs: self.pairs.unwrap_or(base.pairs),
            pair_trials: self.pair_trials.unwrap_or(base.pair_trials),
            directions: self.directions.unwrap_or(base.directions),
            curvature_step: self.curvature_step.unwrap_or(base.curvature_step),
            k_min: self.k_min.unwrap_or(base.k_min),
            angle_tol: self.angle_tol.unwrap_or(DEFAULT_ANGLE_TOL),
            x: self.x.clone(),
            y: self.y.clone(),
            s: self.s.clone().unwrap_or(ScoringSpec::Lcs),
            t: self.t.clone().unwrap_or(ScoringSpec::Sphere { pair: 0 }),
        })
    }
}

impl ResolvedConfig {
    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.letters.chars(), self.gap)
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let config = ExperimentConfig {
            alphabet: self.alphabet()?,
            letter_distribution: self.letter_distribution.clone(),
            n_list: self.n_list.clone(),
            trials: self.trials,
            master_seed: self.master_seed,
            epsilon_grid: self.epsilon_grid.clone(),
            k_grid: self.k_grid.clone(),
            pairs: self.pairs,
            pair_trials: self.pair_trials,
            directions: self.directions,
            curvature_step: self.curvature_step,
            k_min: self.k_min,
        };
        config.validate()?;
        if self.angle_tol.is_nan() || self.angle_tol <= 0.0 {
            return Err(Error::InvalidConfig("angle_tol must be positive".into()));
        }
        Ok(config)
    }

    pub fn scoring_s(&self) -> Result<ScoringFunction> {
        self.s.resolve(&self.alphabet()?, self.master_seed, false)
    }

    pub fn scoring_t(&self) -> Result<ScoringFunction> {
        self.t.resolve(&self.alphabet()?, self.master_seed, true)
    }

    /// Explicit sequences when both are configured, else trial 0 at the largest `n`.
    pub fn sequences(&self) -> Result<(LetterSequence, LetterSequence)> {
        let alphabet = self.alphabet()?;
        match (&self.x, &self.y) {
            (Some(x), Some(y)) => Ok((
                LetterSequence::parse(&alphabet, x)?,
                LetterSequence::parse(&alphabet, y)?,
            )),
            (None, None) => {
                let config = self.experiment()?;
                let n = config.largest_n();
                let seed = crate::experiment::derive_trial_seed(config.master_seed, n as u64, 0);
                crate::experiment::random_sequences(&config, seed, n)
            }
            _ => Err(Error::InvalidConfig(
                "x and y must be given together".into(),
            )),
        }
    }
}

/// Identifies a run: identical manifests imply identical data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    /// SHA-256 of the canonical JSON of `command` and `config`.
    pub config_hash: String,
    pub config: ResolvedConfig,
    /// File name to SHA-256 of its contents.
    pub files: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: &str, config: &ResolvedConfig) -> Result<Self> {
        let canonical = serde_json::to_vec(&(command, config))?;
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            master_seed: config.master_seed,
            config_hash: sha256_hex(&canonical),
            config: config.clone(),
            files: BTreeMap::new(),
        })
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Collects output files for one run and writes them, plus the manifest,
/// into a single directory.
pub struct OutputWriter {
    dir: PathBuf,
    manifest: Manifest,
}

impl OutputWriter {
    pub fn new(dir: impl Into<PathBuf>, manifest: Manifest) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, manifest })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.manifest.files.insert(name.into(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn write_csv<R: CsvRecord>(&mut self, name: &str, records: &[R]) -> Result<PathBuf> {
        self.write_bytes(name, &render_csv(records)?)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn finish(self) -> Result<(PathBuf, Manifest)> {
        let mut bytes = serde_json::to_vec_pretty(&self.manifest)?;
        bytes.push(b'\n');
        let path = self.dir.join(MANIFEST_FILE);
        write_atomic(&path, &bytes)?;
        Ok((path, self.manifest))
    }
}
