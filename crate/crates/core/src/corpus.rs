//! Multi-source corpus ingestion: load, normalize, quality-filter, sample.
//!
//! Input is line-delimited JSON with a required `text` field and optional
//! `id` and `score`. Records without ids get deterministic ones
//! (`<source>:<line index>`). A snapshot is a records file plus a manifest
//! whose content hash is stable for identical inputs.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::filters::tokenizer::count_tokens;
use crate::stablehash::{key64, ContentHasher};

pub const NORMALIZATION_VERSION: &str = "nfc-lf-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Webpages,
    Books,
    Papers,
    Qa,
    Wikipedia,
}

impl Source {
    pub const ALL: [Source; 5] = [
        Source::Webpages,
        Source::Books,
        Source::Papers,
        Source::Qa,
        Source::Wikipedia,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Webpages => "webpages",
            Source::Books => "books",
            Source::Papers => "papers",
            Source::Qa => "qa",
            Source::Wikipedia => "wikipedia",
        }
    }

    pub fn parse(s: &str) -> Option<Source> {
        Source::ALL.into_iter().find(|src| src.as_str() == s)
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One math-related source document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRecord {
    pub id: String,
    pub source: Source,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quality_score: Option<f64>,
    pub token_count: usize,
}

/// Raw input line shape.
#[derive(Debug, Deserialize)]
struct RawLine {
    #[serde(default)]
    id: Option<String>,
    text: String,
    #[serde(default)]
    score: Option<f64>,
}

/// Canonical text normalization: NFC, LF line endings, blank-line runs
/// collapsed to one blank line, ends trimmed. Idempotent.
pub fn normalize_text(raw: &str) -> String {
    let nfc: String = raw.nfc().collect();
    let unified = nfc.replace("\r\n", "\n").replace('\r', "\n");
    let mut out = String::with_capacity(unified.len());
    let mut newline_run = 0usize;
    for ch in unified.chars() {
        if ch == '\n' {
            newline_run += 1;
            if newline_run <= 2 {
                out.push('\n');
            }
        } else {
            newline_run = 0;
            out.push(ch);
        }
    }
    out.trim().to_string()
}

/// Load records from a line-delimited file.
///
/// In strict mode any malformed line (bad JSON, empty text after
/// normalization, non-finite or out-of-range score) is fatal; otherwise it
/// is skipped and reported in the returned issue list.
pub fn load_records(
    path: &Path,
    source: Source,
    strict: bool,
) -> Result<(Vec<TextRecord>, Vec<String>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut issues = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line, idx, source) {
            Ok(rec) => records.push(rec),
            Err(reason) => {
                if strict {
                    return Err(Error::MalformedRecord {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        reason,
                    });
                }
                issues.push(format!("{}:{}: {}", path.display(), idx + 1, reason));
            }
        }
    }
    Ok((records, issues))
}

fn parse_line(line: &str, idx: usize, source: Source) -> std::result::Result<TextRecord, String> {
    let raw: RawLine = serde_json::from_str(line).map_err(|e| format!("invalid json: {e}"))?;
    let text = normalize_text(&raw.text);
    if text.is_empty() {
        return Err("empty text field".to_string());
    }
    if let Some(s) = raw.score {
        if !s.is_finite() || !(0.0..=1.0).contains(&s) {
            return Err(format!("score {s} outside [0,1]"));
        }
    }
    let id = raw.id.unwrap_or_else(|| format!("{}:{}", source.as_str(), idx));
    let token_count = count_tokens(&text);
    Ok(TextRecord {
        id,
        source,
        text,
        quality_score: raw.score,
        token_count,
    })
}

/// Keep records whose score lies in [min, max]; unscored records pass.
/// Order is preserved and records are never mutated.
pub fn filter_quality(
    records: impl IntoIterator<Item = TextRecord>,
    min: f64,
    max: f64,
) -> Result<Vec<TextRecord>> {
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) || min > max {
        return Err(Error::QualityBounds { min, max });
    }
    Ok(records
        .into_iter()
        .filter(|r| match r.quality_score {
            Some(s) => (min..=max).contains(&s),
            None => true,
        })
        .collect())
}

/// Uniform sample of `n` records without replacement, deterministic for a
/// fixed seed and shard-order independent: each record gets the key
/// `key64(seed, id)` and the n smallest keys win. Output is id-sorted.
pub fn sample_subset(records: &[TextRecord], n: usize, seed: u64) -> Result<Vec<TextRecord>> {
    if n > records.len() {
        return Err(Error::SampleTooLarge {
            n,
            available: records.len(),
        });
    }
    let mut keyed: Vec<(u64, &TextRecord)> = records
        .iter()
        .map(|r| (key64(seed, &r.id), r))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));
    let mut chosen: Vec<TextRecord> = keyed[..n].iter().map(|(_, r)| (*r).clone()).collect();
    chosen.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(chosen)
}

/// Snapshot-level bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub record_count: BTreeMap<Source, u64>,
    pub total_records: u64,
    pub total_tokens: u64,
    pub normalization_version: String,
    pub tokenizer_version: String,
    pub content_hash: String,
}

impl CorpusManifest {
    /// Build the manifest for a snapshot. The content hash covers id, source
    /// and text of every record in the given order, so identical inputs hash
    /// identically and any reordering or edit changes the hash.
    pub fn build(records: &[TextRecord]) -> CorpusManifest {
        let mut record_count: BTreeMap<Source, u64> = BTreeMap::new();
        let mut total_tokens = 0u64;
        let mut hasher = ContentHasher::new();
        for r in records {
            *record_count.entry(r.source).or_insert(0) += 1;
            total_tokens += r.token_count as u64;
            hasher.update(r.id.as_bytes());
            hasher.update(&[0x1f]);
            hasher.update(r.source.as_str().as_bytes());
            hasher.update(&[0x1f]);
            hasher.update(r.text.as_bytes());
            hasher.update(&[0x1e]);
        }
        CorpusManifest {
            record_count,
            total_records: records.len() as u64,
            total_tokens,
            normalization_version: NORMALIZATION_VERSION.to_string(),
            tokenizer_version: crate::filters::tokenizer::TOKENIZER_VERSION.to_string(),
            content_hash: hasher.finish_hex(),
        }
    }
}

/// Write a snapshot directory: `records.jsonl` + `manifest.json`.
pub fn write_snapshot(dir: &Path, records: &[TextRecord]) -> Result<CorpusManifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let records_path = dir.join("records.jsonl");
    let file = File::create(&records_path).map_err(|e| Error::io(&records_path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(|e| Error::io(&records_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&records_path, e))?;

    let manifest = CorpusManifest::build(records);
    let manifest_path = dir.join("manifest.json");
    let body = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&manifest_path, body).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest)
}

/// Read a snapshot's records back, verifying unique ids.
pub fn read_snapshot(dir: &Path) -> Result<Vec<TextRecord>> {
    let records_path = dir.join("records.jsonl");
    let file = File::open(&records_path).map_err(|e| Error::io(&records_path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(&records_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TextRecord = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            path: records_path.clone(),
            line: idx + 1,
            reason: e.to_string(),
        })?;
        if !seen.insert(rec.id.clone()) {
            return Err(Error::DuplicateId { id: rec.id });
        }
        records.push(rec);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_lines(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f
    }

    fn rec(id: &str, score: Option<f64>) -> TextRecord {
        TextRecord {
            id: id.to_string(),
            source: Source::Papers,
            text: "t".to_string(),
            quality_score: score,
            token_count: 1,
        }
    }

    #[test]
    fn loads_three_lines_with_assigned_ids() {
        let f = write_lines(&[
            r#"{"text": "one plus one"}"#,
            r#"{"text": "two plus two"}"#,
            r#"{"text": "three plus three"}"#,
        ]);
        let (records, issues) = load_records(f.path(), Source::Wikipedia, true).unwrap();
        assert!(issues.is_empty());
        let ids: Vec<_> = records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["wikipedia:0", "wikipedia:1", "wikipedia:2"]);
    }

    #[test]
    fn empty_file_is_empty_stream() {
        let f = write_lines(&[]);
        let (records, _) = load_records(f.path(), Source::Books, true).unwrap();
        assert!(records.is_empty());
        let manifest = CorpusManifest::build(&records);
        assert_eq!(manifest.total_records, 0);
        assert_eq!(manifest.total_tokens, 0);
    }

    #[test]
    fn strict_mode_names_bad_line() {
        let f = write_lines(&[r#"{"text": "fine"}"#, r#"{"text": ""}"#]);
        let err = load_records(f.path(), Source::Qa, true).unwrap_err();
        match err {
            Error::MalformedRecord { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn lenient_mode_skips_and_reports() {
        let f = write_lines(&["not json", r#"{"text": "ok"}"#]);
        let (records, issues) = load_records(f.path(), Source::Qa, false).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(issues.len(), 1);
        assert!(issues[0].contains(":1:"));
    }

    #[test]
    fn quality_window_keeps_in_range() {
        let records = vec![rec("a", Some(0.75))];
        assert_eq!(filter_quality(records, 0.6, 0.9).unwrap().len(), 1);
    }

    #[test]
    fn quality_window_drops_below() {
        let records = vec![rec("a", Some(0.5))];
        assert!(filter_quality(records, 0.6, 0.9).unwrap().is_empty());
    }

    #[test]
    fn unscored_records_pass() {
        let records = vec![rec("a", None)];
        assert_eq!(filter_quality(records, 0.6, 0.9).unwrap().len(), 1);
    }

    #[test]
    fn quality_rejects_inverted_bounds() {
        assert!(matches!(
            filter_quality(vec![], 0.9, 0.6),
            Err(Error::QualityBounds { .. })
        ));
    }

    #[test]
    fn normalize_line_endings() {
        assert_eq!(normalize_text("a\r\nb"), "a\nb");
    }

    #[test]
    fn normalize_collapses_blank_runs() {
        assert_eq!(normalize_text("a\n\n\n\nb"), "a\n\nb");
    }

    #[test]
    fn normalize_is_idempotent_on_sample() {
        let once = normalize_text("  a\r\n\r\n\r\nb\u{0041}\u{030A} ");
        assert_eq!(normalize_text(&once), once);
    }

    fn corpus(n: usize) -> Vec<TextRecord> {
        (0..n).map(|i| rec(&format!("r{i:04}"), None)).collect()
    }

    #[test]
    fn sample_is_exhaustive_at_full_size() {
        let c = corpus(10);
        let s = sample_subset(&c, 10, 1).unwrap();
        let ids: Vec<_> = s.iter().map(|r| r.id.clone()).collect();
        let mut expect: Vec<_> = c.iter().map(|r| r.id.clone()).collect();
        expect.sort();
        assert_eq!(ids, expect);
    }

    #[test]
    fn sample_is_deterministic_per_seed() {
        let c = corpus(100);
        let a = sample_subset(&c, 20, 42).unwrap();
        let b = sample_subset(&c, 20, 42).unwrap();
        assert_eq!(a, b);
        let other = sample_subset(&c, 20, 43).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn sample_rejects_oversize() {
        let c = corpus(5);
        assert!(matches!(
            sample_subset(&c, 6, 0),
            Err(Error::SampleTooLarge { .. })
        ));
    }

    #[test]
    fn manifest_hash_is_input_sensitive() {
        let a = CorpusManifest::build(&corpus(3));
        let b = CorpusManifest::build(&corpus(3));
        assert_eq!(a.content_hash, b.content_hash);
        let c = CorpusManifest::build(&corpus(4));
        assert_ne!(a.content_hash, c.content_hash);
    }
}
