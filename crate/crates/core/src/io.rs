//! Behavior files.
//!
//! JSON: `{"parties": 3, "cells": {"xyz=000": {"abc=000": "1/4", ...}, ...}}`
//! with every input and outcome key present. CSV: a header row `xyz,000,...,111`
//! followed by one row per input tuple. Probabilities are rational strings;
//! non-canonical fractions are accepted and reduced. Output is canonical:
//! sorted keys, reduced fractions, trailing newline.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde_json::Value;

use crate::behavior::{tuple_label, Behavior, BehaviorError, Party};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, everything else JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn input_prefix(parties: usize) -> String {
    (0..parties)
        .map(|p| Party::from_index(p).input_symbol())
        .collect()
}

fn outcome_prefix(parties: usize) -> String {
    (0..parties)
        .map(|p| Party::from_index(p).outcome_symbol())
        .collect()
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> BehaviorError {
    BehaviorError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

pub fn read_behavior(mut reader: impl Read, format: Format) -> Result<Behavior, BehaviorError> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| BehaviorError::Io(e.to_string()))?;
    match format {
        Format::Json => behavior_from_json(&text),
        Format::Csv => behavior_from_csv(&text),
    }
}

pub fn write_behavior(
    b: &Behavior,
    mut writer: impl Write,
    format: Format,
) -> Result<(), BehaviorError> {
    let text = match format {
        Format::Json => behavior_to_json(b),
        Format::Csv => behavior_to_csv(b),
    };
    writer
        .write_all(text.as_bytes())
        .map_err(|e| BehaviorError::Io(e.to_string()))
}

pub fn read_behavior_file(path: &Path) -> Result<Behavior, BehaviorError> {
    let file = std::fs::File::open(path)
        .map_err(|e| BehaviorError::Io(format!("{}: {e}", path.display())))?;
    read_behavior(file, Format::from_path(path))
}

pub fn behavior_to_json(b: &Behavior) -> String {
    let n = b.parties();
    let (ip, op) = (input_prefix(n), outcome_prefix(n));
    let mut cells = BTreeMap::new();
    for i in 0..b.num_tuples() {
        let row: BTreeMap<String, String> = (0..b.num_tuples())
            .map(|o| (format!("{op}={}", tuple_label(o, n)), b.get(i, o).to_string()))
            .collect();
        cells.insert(format!("{ip}={}", tuple_label(i, n)), row);
    }
    let doc = serde_json::json!({ "parties": n, "cells": cells });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn parse_cell(value: &Value, location: &str) -> Result<Rational, BehaviorError> {
    match value {
        Value::String(s) => s
            .parse()
            .map_err(|e: crate::rational::ParseRationalError| parse_err(location, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap())),
        _ => Err(parse_err(
            location,
            "expected a rational string such as \"1/4\"",
        )),
    }
}

pub fn behavior_from_json(text: &str) -> Result<Behavior, BehaviorError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_err("document", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "parties" && *k != "cells") {
        return Err(parse_err(k.as_str(), "unknown key"));
    }
    let parties = obj
        .get("parties")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("parties", "missing or not an integer"))? as usize;
    if parties != 2 && parties != 3 {
        return Err(BehaviorError::PartyCount(parties));
    }
    let cells = obj
        .get("cells")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("cells", "missing or not an object"))?;
    let (ip, op) = (input_prefix(parties), outcome_prefix(parties));
    let t = 1usize << parties;
    let input_keys: Vec<String> = (0..t).map(|i| format!("{ip}={}", tuple_label(i, parties))).collect();
    let outcome_keys: Vec<String> = (0..t).map(|o| format!("{op}={}", tuple_label(o, parties))).collect();
    if let Some(k) = cells.keys().find(|k| !input_keys.contains(k)) {
        return Err(parse_err(format!("cells/{k}"), "unknown input key"));
    }
    let mut out = Vec::with_capacity(t * t);
    for ik in &input_keys {
        let row = cells
            .get(ik)
            .ok_or_else(|| parse_err(format!("cells/{ik}"), "missing input row"))?
            .as_object()
            .ok_or_else(|| parse_err(format!("cells/{ik}"), "expected an object"))?;
        if let Some(k) = row.keys().find(|k| !outcome_keys.contains(k)) {
            return Err(parse_err(format!("cells/{ik}/{k}"), "unknown outcome key"));
        }
        for ok in &outcome_keys {
            let loc = format!("cells/{ik}/{ok}");
            let v = row.get(ok).ok_or_else(|| parse_err(&loc, "missing cell"))?;
            out.push(parse_cell(v, &loc)?);
        }
    }
    Behavior::new(parties, out)
}

pub fn behavior_to_csv(b: &Behavior) -> String {
    let n = b.parties();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![input_prefix(n)];
    header.extend((0..b.num_tuples()).map(|o| tuple_label(o, n)));
    w.write_record(&header).expect("in-memory write");
    for i in 0..b.num_tuples() {
        let mut rec = vec![tuple_label(i, n)];
        rec.extend((0..b.num_tuples()).map(|o| b.get(i, o).to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn behavior_from_csv(text: &str) -> Result<Behavior, BehaviorError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| parse_err("line 1", e.to_string()))?
        .clone();
    let parties = header.get(0).map_or(0, str::len);
    if parties != 2 && parties != 3 || header.get(0) != Some(input_prefix(parties).as_str()) {
        return Err(parse_err(
            "line 1, column 1",
            "first header cell must be `xy` or `xyz`",
        ));
    }
    let t = 1usize << parties;
    let expected: Vec<String> = (0..t).map(|o| tuple_label(o, parties)).collect();
    let found: Vec<&str> = header.iter().skip(1).collect();
    if found != expected {
        return Err(parse_err(
            "line 1",
            format!("outcome columns must be {}", expected.join(",")),
        ));
    }
    let mut rows: Vec<Option<Vec<Rational>>> = vec![None; t];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err("record", e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != t + 1 {
            return Err(parse_err(
                format!("line {line}"),
                format!("expected {} fields, found {}", t + 1, rec.len()),
            ));
        }
        let label = &rec[0];
        let i = (0..t)
            .find(|&i| tuple_label(i, parties) == label)
            .ok_or_else(|| parse_err(format!("line {line}, column 1"), format!("bad input label `{label}`")))?;
        if rows[i].is_some() {
            return Err(parse_err(format!("line {line}"), format!("duplicate input row `{label}`")));
        }
        let mut row = Vec::with_capacity(t);
        for (k, field) in rec.iter().skip(1).enumerate() {
            row.push(field.parse::<Rational>().map_err(|e| {
                parse_err(
                    format!("line {line}, column {} ({})", k + 2, expected[k]),
                    e.to_string(),
                )
            })?);
        }
        rows[i] = Some(row);
    }
    let mut cells = Vec::with_capacity(t * t);
    for (i, row) in rows.into_iter().enumerate() {
        cells.extend(row.ok_or_else(|| {
            parse_err("rows", format!("missing input row `{}`", tuple_label(i, parties)))
        })?);
    }
    Behavior::new(parties, cells)
}
