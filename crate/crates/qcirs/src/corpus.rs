//! The bundled table of published code records and its line format.
//!
//! One record per line: `N a type m n g gamma...`, whitespace-separated, with
//! `type` being `I` or `II` and exactly `n` multipliers starting `0 1`. Lines
//! that are blank or start with `#` are skipped. The same format is emitted
//! by the search commands, so found codes can be appended to a corpus file
//! and re-verified as-is.

use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::search::CodeRecord;
use crate::zring::IrsType;

/// The records bundled with the crate.
pub const BUILTIN: &str = include_str!("../data/published_codes.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Parses a single record line.
pub fn parse_record(line: &str) -> Result<CodeRecord, String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 7 {
        return Err("expected at least 7 fields: N a type m n g gamma...".into());
    }
    let num = |s: &str, what: &str| {
        s.parse::<u64>()
            .map_err(|_| format!("{what} is not a number: {s:?}"))
    };
    let n_lift = num(fields[0], "N")?;
    let generator = num(fields[1], "a")?;
    let irs_type = IrsType::from_str(fields[2])?;
    let m = num(fields[3], "m")? as usize;
    let n = num(fields[4], "n")? as usize;
    let girth = num(fields[5], "g")? as usize;
    let gammas = fields[6..]
        .iter()
        .map(|s| num(s, "gamma"))
        .collect::<Result<Vec<u64>, _>>()?;
    if gammas.len() != n {
        return Err(format!("expected {n} multipliers, found {}", gammas.len()));
    }
    if gammas.len() < 2 || gammas[0] != 0 || gammas[1] != 1 {
        return Err("multipliers must start 0 1".into());
    }
    Ok(CodeRecord {
        n_lift,
        generator,
        irs_type,
        m,
        n,
        girth,
        gammas,
    })
}

/// Parses a whole corpus; errors carry the 1-based line number.
pub fn parse(text: &str) -> Result<Vec<CodeRecord>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(parse_record(trimmed).map_err(|msg| CorpusError::Parse { line: idx + 1, msg })?);
    }
    Ok(out)
}

/// The record's corpus line.
pub fn format_record(record: &CodeRecord) -> String {
    let gammas: Vec<String> = record.gammas.iter().map(|g| g.to_string()).collect();
    format!(
        "{} {} {} {} {} {} {}",
        record.n_lift,
        record.generator,
        record.irs_type,
        record.m,
        record.n,
        record.girth,
        gammas.join(" ")
    )
}

/// The bundled records, parsed once.
pub fn builtin_records() -> &'static [CodeRecord] {
    static RECORDS: OnceLock<Vec<CodeRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| parse(BUILTIN).expect("bundled corpus parses"))
}
