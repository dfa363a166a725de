use std::path::Path;

use serde::Deserialize;

use crate::distributions::{make_dist, JointDist, Normalization, ProbDist};

use super::CliError;

/// A parsed `--dist` or `--input` argument.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Dist(ProbDist),
    Joint(JointDist),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Flat(Vec<f64>),
    Grid(Vec<Vec<f64>>),
}

fn build(raw: Raw, mode: Normalization) -> Result<Input, CliError> {
    let r = match raw {
        Raw::Flat(v) => make_dist(&v, mode).map(Input::Dist),
        Raw::Grid(g) if g.len() == 1 => make_dist(&g[0], mode).map(Input::Dist),
        Raw::Grid(g) => JointDist::new(&g, mode).map(Input::Joint),
    };
    r.map_err(|e| CliError::input(e.to_string()))
}

/// Parses a JSON array of numbers (a distribution) or of rows (a joint).
pub fn parse_inline(text: &str, mode: Normalization) -> Result<Input, CliError> {
    let raw: Raw = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("cannot parse distribution {text:?}: {e}")))?;
    build(raw, mode)
}

/// Reads a `.json` or `.csv` file. A CSV with one row or one column is a
/// distribution; anything else is a joint with one CSV row per row.
pub fn read_file(path: &Path, mode: Normalization) -> Result<Input, CliError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            parse_inline(&text, mode)
        }
        Some("csv") => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .trim(csv::Trim::All)
                .from_path(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            let mut grid = Vec::new();
            for rec in reader.deserialize::<Vec<f64>>() {
                grid.push(rec.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?);
            }
            if grid.is_empty() {
                return Err(CliError::input(format!("{} has no rows", path.display())));
            }
            if grid.iter().all(|r| r.len() == 1) {
                grid = vec![grid.into_iter().flatten().collect()];
            }
            build(Raw::Grid(grid), mode)
        }
        _ => Err(CliError::input(format!(
            "{}: expected a .json or .csv file",
            path.display()
        ))),
    }
}
