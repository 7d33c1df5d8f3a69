//! Config file in, CSV and manifest out: the same seed gives the same bytes.

use std::path::Path;

use scoregeom::experiment::convergence_study;
use scoregeom::io::{parse_csv, ConfigFile, Manifest, OutputWriter};

const CONFIG: &str = r#"
letters = "01"
n_list = [50, 100, 200]
trials = 40
master_seed = 99
[s]
kind = "lcs"
"#;

pub fn run(dir: &Path) -> scoregeom::Result<Manifest> {
    let config = ConfigFile::parse(CONFIG)?.resolve()?;
    let (lambda, records) = convergence_study(&config.scoring_s()?, &config.experiment()?)?;
    let mut out = OutputWriter::new(dir, Manifest::new("converge", &config)?)?;
    out.write_csv("lambda.csv", &[lambda])?;
    let path = out.write_csv("convergence.csv", &records)?;
    let (_, manifest) = out.finish()?;
    let back = parse_csv::<scoregeom::experiment::ConvergenceRecord>(&std::fs::read(path)?)?;
    assert_eq!(back, records);
    for (name, digest) in &manifest.files {
        println!("{name}: {digest}");
    }
    Ok(manifest)
}

#[allow(dead_code)]
fn main() -> scoregeom::Result<()> {
    let dir = std::env::temp_dir().join("scoregeom-reproducible-run");
    run(&dir)?;
    println!("wrote {}", dir.display());
    Ok(())
}
