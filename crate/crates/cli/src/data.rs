use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cshape::series::dataset_name;

use crate::artifact::RunArtifact;
use crate::error::{read_file, CliError, CliResult};

/// Labels from a run artifact or a list of label tokens separated by
/// commas or whitespace. Tokens may be integers or numbers like `2.0`.
pub fn read_labels(path: &Path) -> CliResult<Vec<String>> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        let artifact = RunArtifact::from_text(&text)?;
        return Ok(artifact.labels.iter().map(|l| l.to_string()).collect());
    }
    let labels: Vec<String> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.fract() == 0.0 && v.is_finite() => Ok(format!("{}", v as i64)),
            Ok(_) => Ok(t.to_string()),
            Err(_) => Err(CliError::Parse(format!(
                "{}: label {t:?} is not a number",
                path.display()
            ))),
        })
        .collect::<CliResult<_>>()?;
    if labels.is_empty() {
        return Err(CliError::Parse(format!("{}: no labels", path.display())));
    }
    Ok(labels)
}

/// One dataset found under a data directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSource {
    pub name: String,
    pub primary: PathBuf,
    pub merge: Option<PathBuf>,
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_files(&path, out)?;
        } else if path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| !n.starts_with('.'))
        {
            out.push(path);
        }
    }
    Ok(())
}

fn split_of(path: &Path) -> Option<&'static str> {
    let stem = path.file_stem()?.to_str()?;
    if stem.ends_with("_TRAIN") {
        Some("TRAIN")
    } else if stem.ends_with("_TEST") {
        Some("TEST")
    } else {
        None
    }
}

/// Finds datasets under `dir`, pairing `X_TRAIN` with `X_TEST` in the same
/// directory. Sorted by name, then path.
pub fn discover(dir: &Path) -> CliResult<Vec<DatasetSource>> {
    let mut files = Vec::new();
    collect_files(dir, &mut files)
        .map_err(|e| CliError::Config(format!("data dir {}: {e}", dir.display())))?;
    files.sort();
    let mut groups: BTreeMap<(String, PathBuf), Vec<PathBuf>> = BTreeMap::new();
    for f in files {
        let parent = f.parent().map(Path::to_path_buf).unwrap_or_default();
        groups
            .entry((dataset_name(&f), parent))
            .or_default()
            .push(f);
    }
    let mut out = Vec::new();
    for ((name, _), paths) in groups {
        let train = paths.iter().find(|p| split_of(p) == Some("TRAIN"));
        let test = paths.iter().find(|p| split_of(p) == Some("TEST"));
        match (train, test) {
            (Some(a), b) => out.push(DatasetSource {
                name: name.clone(),
                primary: a.clone(),
                merge: b.cloned(),
            }),
            (None, Some(b)) => out.push(DatasetSource {
                name: name.clone(),
                primary: b.clone(),
                merge: None,
            }),
            (None, None) => {}
        }
        for p in paths.iter().filter(|p| split_of(p).is_none()) {
            out.push(DatasetSource {
                name: name.clone(),
                primary: p.clone(),
                merge: None,
            });
        }
    }
    Ok(out)
}
