//! Corpus and stop-list files.
//!
//! The canonical corpus format is JSONL, one object per line with fields
//! `id`, `text` and optional `label` (0 or 1). CSV files need a header row
//! naming `id` and `text` columns and optionally `label`; an empty label
//! cell means unlabeled.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use screenml_core::{Corpus, Document, Label, StopList};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    #[default]
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guesses from the file extension, defaulting to JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(Error::Usage(format!(
                "unknown corpus format `{other}` (expected jsonl or csv)"
            ))),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Jsonl => "jsonl",
            CorpusFormat::Csv => "csv",
        })
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let origin = path.display().to_string();
    match format {
        CorpusFormat::Jsonl => read_jsonl(BufReader::new(file), &origin),
        CorpusFormat::Csv => read_csv(file, &origin),
    }
}

/// Builds the corpus one record at a time so duplicate ids are reported
/// with the line that repeats them.
struct Collector<'a> {
    origin: &'a str,
    docs: Vec<Document>,
    first_line: HashMap<String, usize>,
}

impl<'a> Collector<'a> {
    fn new(origin: &'a str) -> Self {
        Self {
            origin,
            docs: Vec::new(),
            first_line: HashMap::new(),
        }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            origin: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn push(&mut self, line: usize, id: String, text: String, label: Option<Label>) -> Result<()> {
        if let Some(first) = self.first_line.get(&id) {
            return Err(self.error(
                line,
                format!("duplicate id `{id}` (first seen on line {first})"),
            ));
        }
        let doc =
            Document::new(id.clone(), text, label).map_err(|e| self.error(line, e.to_string()))?;
        self.first_line.insert(id, line);
        self.docs.push(doc);
        Ok(())
    }

    fn finish(self) -> Result<Corpus> {
        Ok(Corpus::new(self.docs)?)
    }
}

fn parse_label_str(s: &str) -> Result<Option<Label>, String> {
    match s.trim() {
        "" => Ok(None),
        "0" => Ok(Some(Label::Negative)),
        "1" => Ok(Some(Label::Positive)),
        other => Err(format!("invalid label `{other}`: expected 0 or 1")),
    }
}

fn parse_label_json(v: Option<&Value>) -> Result<Option<Label>, String> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => match n.as_u64() {
            Some(0) => Ok(Some(Label::Negative)),
            Some(1) => Ok(Some(Label::Positive)),
            _ => Err(format!("invalid label `{n}`: expected 0 or 1")),
        },
        Some(Value::String(s)) if !s.trim().is_empty() => parse_label_str(s),
        Some(other) => Err(format!("invalid label `{other}`: expected 0 or 1")),
    }
}

pub fn read_jsonl<R: BufRead>(reader: R, origin: &str) -> Result<Corpus> {
    let mut out = Collector::new(origin);
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| out.error(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| out.error(lineno, format!("malformed JSON: {e}")))?;
        let Value::Object(obj) = value else {
            return Err(out.error(lineno, "expected a JSON object"));
        };
        let id = match obj.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(out.error(lineno, "missing string field `id`")),
        };
        let Some(Value::String(text)) = obj.get("text") else {
            return Err(out.error(lineno, "missing string field `text`"));
        };
        let label = parse_label_json(obj.get("label")).map_err(|m| out.error(lineno, m))?;
        out.push(lineno, id, text.clone(), label)?;
    }
    out.finish()
}

pub fn read_csv<R: Read>(reader: R, origin: &str) -> Result<Corpus> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let mut out = Collector::new(origin);
    let headers = rdr
        .headers()
        .map_err(|e| out.error(1, format!("malformed header: {e}")))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
    };
    let (Some(id_col), Some(text_col)) = (column("id"), column("text")) else {
        return Err(out.error(1, "header must name `id` and `text` columns"));
    };
    let label_col = column("label");
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            out.error(line, format!("malformed row: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |c: usize| record.get(c).unwrap_or("");
        let label = match label_col {
            Some(c) => parse_label_str(field(c)).map_err(|m| out.error(line, m))?,
            None => None,
        };
        out.push(
            line,
            field(id_col).to_string(),
            field(text_col).to_string(),
            label,
        )?;
    }
    out.finish()
}

#[derive(Serialize)]
struct Record<'a> {
    id: &'a str,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<u8>,
}

/// Writes canonical JSONL: compact objects with keys `id`, `text`, `label`.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> std::io::Result<()> {
    for doc in corpus {
        let record = Record {
            id: doc.id(),
            text: doc.text(),
            label: doc.label().map(Label::as_u8),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn corpus_to_jsonl(corpus: &Corpus) -> Vec<u8> {
    let mut buf = Vec::new();
    write_jsonl(corpus, &mut buf).expect("writing to memory");
    buf
}

pub fn load_stoplist(path: &Path) -> Result<StopList> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(StopList::parse(&text))
}
