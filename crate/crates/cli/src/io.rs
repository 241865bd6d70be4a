use std::fs;
use std::path::Path;

use mixid::params::ParamDoc;
use mixid::simulate::Provenance;
use mixid::{Dataset, GraphDoc, MixedGraph, ParamMatrix};
use serde::Serialize;

use crate::failure::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn load_graph(path: &Path) -> Result<MixedGraph, Failure> {
    let doc = GraphDoc::from_json(&read(path)?).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    MixedGraph::from_doc(&doc).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

pub fn load_params(g: &MixedGraph, path: &Path) -> Result<ParamMatrix, Failure> {
    let doc: ParamDoc =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    ParamMatrix::from_doc(g, &doc).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Sidecar next to a data file: `X.csv` pairs with `X.csv.provenance.json`.
pub fn provenance_path(data: &Path) -> std::path::PathBuf {
    let mut s = data.as_os_str().to_owned();
    s.push(".provenance.json");
    s.into()
}

pub fn load_data(path: &Path) -> Result<Dataset, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let prov = fs::read_to_string(provenance_path(path))
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_else(|| Provenance::new(None, "csv", serde_json::Value::Null));
    Dataset::read_csv(file, prov).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// Prints `value` as JSON, or `human` when asked, and mirrors the JSON to `out`.
pub fn emit<T: Serialize>(value: &T, human: Option<String>, out: Option<&Path>) -> Result<(), Failure> {
    let json = to_json(value);
    if let Some(path) = out {
        write(path, json.as_bytes())?;
    }
    match human {
        Some(text) => print!("{text}"),
        None => print!("{json}"),
    }
    Ok(())
}
