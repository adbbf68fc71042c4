//! Deterministic artifact writers: versioned JSON documents, JSON-lines run
//! logs, and stable-header CSV tables. No timestamps or machine identifiers
//! appear anywhere, so identical flags and seed reproduce identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use raqm_core::exact::Rational;
use raqm_core::harness::BellRunLog;

/// Envelope adding the versioned schema tag to a document.
#[derive(Serialize)]
pub struct Doc<T: Serialize> {
    pub schema: &'static str,
    #[serde(flatten)]
    pub body: T,
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, schema: &'static str, body: T) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let doc = Doc { schema, body };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

pub fn render_json<T: Serialize>(schema: &'static str, body: T) -> String {
    serde_json::to_string_pretty(&Doc { schema, body }).expect("serializable document")
}

pub fn write_run_logs_jsonl(dir: &Path, name: &str, logs: &[BellRunLog]) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let mut out = Vec::new();
    for log in logs {
        serde_json::to_writer(&mut out, log).map_err(|e| e.to_string())?;
        out.push(b'\n');
    }
    fs::write(&path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

pub fn write_run_logs_csv(dir: &Path, name: &str, logs: &[BellRunLog]) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let mut out = String::from("run_id,ensemble,xi_seed,jitter_seed,exact_cos,outcome_a,outcome_b\n");
    for log in logs {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            log.run_id,
            log.ensemble_tag.as_str(),
            log.xi_seed,
            log.jitter_seed,
            log.exact_cos,
            log.outcomes.0,
            log.outcomes.1
        ));
    }
    fs::write(&path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

/// Correlation-vs-angle table: one row per (ensemble, exact cosine) group.
pub fn write_correlation_table(dir: &Path, name: &str, logs: &[BellRunLog]) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let mut groups: BTreeMap<(&'static str, Rational), (i64, i64)> = BTreeMap::new();
    for log in logs {
        let entry = groups
            .entry((log.ensemble_tag.as_str(), log.exact_cos.clone()))
            .or_insert((0, 0));
        entry.0 += (log.outcomes.0 * log.outcomes.1) as i64;
        entry.1 += 1;
    }
    let mut out = String::from("ensemble,exact_cos,empirical_Co,exact_Co\n");
    for ((tag, cos), (sum, count)) in groups {
        let empirical = Rational::new(sum, count);
        out.push_str(&format!("{},{},{},{}\n", tag, cos, empirical, -&cos));
    }
    fs::write(&path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

pub fn write_collapse_csv(dir: &Path, name: &str, steps: &[String]) -> Result<PathBuf, String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    let mut out = String::from("step,word,length\n");
    for (i, word) in steps.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, word, word.len()));
    }
    fs::write(&path, out).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}

pub fn print_wrote(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}
