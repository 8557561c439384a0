//! Text formats for graphs and words, and the graph metadata sidecar.
//!
//! Graph file (line oriented): header `rim <|V|> <n>`, then one line per
//! vertex: the vertex id followed by, for each index `j`, the neighbor
//! and the partnered half-edge `target partner_vertex partner_index`.
//!
//! Word file: one text header line `word <edge_count> <modulus>`, then
//! the canonical bytes of every edge value in edge order.
//!
//! The metadata sidecar is human-readable `key value` lines naming the
//! group family, its parameters, the generator list, and the resolved
//! cut schedule; it is what the CLI uses to rebuild the cut sequence.

use crate::field::{FieldElement, PrimeField};
use crate::rim::{EdgeWord, Rim, RimError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Rim(#[from] RimError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

fn perr<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse(msg.into()))
}

pub fn write_rim(rim: &Rim) -> String {
    let n = rim.arity();
    let mut out = format!("rim {} {}\n", rim.vertex_count(), n);
    for v in 0..rim.vertex_count() as u32 {
        out.push_str(&v.to_string());
        for j in 0..n {
            let (pv, pj) = rim.partner(v, j);
            out.push_str(&format!(" {} {} {}", rim.neighbor(v, j), pv, pj));
        }
        out.push('\n');
    }
    out
}

pub fn parse_rim(text: &str) -> Result<Rim, IoError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| IoError::Parse("empty file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("rim") {
        return perr("expected 'rim' header");
    }
    let vcount: usize =
        it.next().and_then(|s| s.parse().ok()).ok_or_else(|| IoError::Parse("bad |V|".into()))?;
    let arity: usize =
        it.next().and_then(|s| s.parse().ok()).ok_or_else(|| IoError::Parse("bad arity".into()))?;
    if vcount == 0 || arity == 0 || vcount.checked_mul(arity).is_none() {
        return perr("bad dimensions");
    }
    let mut neighbor = vec![0u32; vcount * arity];
    let mut pairing = vec![0u32; vcount * arity];
    let mut seen = vec![false; vcount];
    for line in lines {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|s| s.parse::<u64>().map_err(|_| IoError::Parse(format!("bad number in {line}"))))
            .collect::<Result<_, _>>()?;
        if nums.len() != 1 + 3 * arity {
            return perr(format!("expected {} fields per vertex line", 1 + 3 * arity));
        }
        let v = nums[0] as usize;
        if v >= vcount || seen[v] {
            return perr("bad or duplicate vertex id");
        }
        seen[v] = true;
        for j in 0..arity {
            let target = nums[1 + 3 * j];
            let pv = nums[2 + 3 * j];
            let pj = nums[3 + 3 * j];
            if target >= vcount as u64 || pv >= vcount as u64 || pj >= arity as u64 {
                return perr("vertex or index out of range");
            }
            neighbor[v * arity + j] = target as u32;
            pairing[v * arity + j] = (pv as usize * arity + pj as usize) as u32;
        }
    }
    if seen.iter().any(|s| !s) {
        return perr("missing vertex lines");
    }
    Ok(Rim::new(arity, neighbor, pairing)?)
}

pub fn write_word(field: &PrimeField, word: &EdgeWord) -> Vec<u8> {
    let mut out = format!("word {} {}\n", word.values.len(), field.modulus()).into_bytes();
    for v in &word.values {
        out.extend_from_slice(&field.canonical_bytes(*v));
    }
    out
}

pub fn parse_word(bytes: &[u8]) -> Result<(PrimeField, Vec<FieldElement>), IoError> {
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| IoError::Parse("missing word header".into()))?;
    let header = std::str::from_utf8(&bytes[..newline])
        .map_err(|_| IoError::Parse("header not utf-8".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("word") {
        return perr("expected 'word' header");
    }
    let count: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| IoError::Parse("bad edge count".into()))?;
    let modulus: u64 = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| IoError::Parse("bad modulus".into()))?;
    let field = PrimeField::new(modulus)?;
    let body = &bytes[newline + 1..];
    if body.len() != count * field.byte_len() {
        return perr("word body length mismatch");
    }
    let mut values = Vec::with_capacity(count);
    for chunk in body.chunks(field.byte_len()) {
        values.push(field.from_canonical_bytes(chunk)?);
    }
    Ok((field, values))
}

/// Parsed metadata sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMetadata {
    pub family: String,
    pub entries: BTreeMap<String, String>,
    pub schedule: Vec<usize>,
}

impl GraphMetadata {
    pub fn param(&self, key: &str) -> Result<u64, IoError> {
        self.entries
            .get(key)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| IoError::Parse(format!("metadata missing numeric key '{key}'")))
    }
}

pub fn write_metadata(
    family: &str,
    params: &[(&str, String)],
    group_name: &str,
    generators: &[String],
    schedule: &[usize],
) -> String {
    let mut out = format!("family {family}\n");
    for (k, v) in params {
        out.push_str(&format!("{k} {v}\n"));
    }
    out.push_str(&format!("group {group_name}\n"));
    for (i, g) in generators.iter().enumerate() {
        out.push_str(&format!("generator {i} {g}\n"));
    }
    let sched: Vec<String> = schedule.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("schedule {}\n", sched.join(" ")));
    out
}

pub fn parse_metadata(text: &str) -> Result<GraphMetadata, IoError> {
    let mut family = None;
    let mut entries = BTreeMap::new();
    let mut schedule = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| IoError::Parse(format!("bad metadata line '{line}'")))?;
        match key {
            "family" => family = Some(value.trim().to_string()),
            "schedule" => {
                let idx: Result<Vec<usize>, _> =
                    value.split_whitespace().map(|s| s.parse::<usize>()).collect();
                schedule = Some(idx.map_err(|_| IoError::Parse("bad schedule entries".into()))?);
            }
            _ => {
                entries.insert(key.to_string(), value.trim().to_string());
            }
        }
    }
    let family = family.ok_or_else(|| IoError::Parse("metadata missing family".into()))?;
    let schedule = schedule.ok_or_else(|| IoError::Parse("metadata missing schedule".into()))?;
    Ok(GraphMetadata { family, entries, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rim::complete_graph_rim;

    #[test]
    fn rim_text_round_trip() {
        for g in [
            complete_graph_rim(4),
            complete_graph_rim(5),
            complete_graph_rim(4).cut_graph(&[0, 1, 3]).unwrap(),
        ] {
            let text = write_rim(&g);
            let parsed = parse_rim(&text).unwrap();
            assert_eq!(parsed, g);
        }
    }

    #[test]
    fn rim_parse_rejects_garbage() {
        assert!(parse_rim("").is_err());
        assert!(parse_rim("rim 2").is_err());
        assert!(parse_rim("rim 1 2\n0 0 0 0").is_err()); // short line
        // involution violation surfaces as a RimError
        assert!(parse_rim("rim 2 1\n0 1 1 0\n1 0 1 0").is_err());
    }

    #[test]
    fn word_round_trip() {
        let field = PrimeField::new(521).unwrap();
        let g = complete_graph_rim(4);
        let word = EdgeWord {
            values: (0..g.edge_count() as u64).map(|i| field.element(i * 100 + 7)).collect(),
        };
        let bytes = write_word(&field, &word);
        let (field2, values) = parse_word(&bytes).unwrap();
        assert_eq!(field2.modulus(), 521);
        assert_eq!(values, word.values);
    }

    #[test]
    fn word_rejects_bad_bodies() {
        let field = PrimeField::new(101).unwrap();
        let g = complete_graph_rim(4);
        let word = EdgeWord::zero(&g);
        let mut bytes = write_word(&field, &word);
        bytes.pop();
        assert!(parse_word(&bytes).is_err());
        // non-canonical value: 101 itself
        let mut bytes = write_word(&field, &word);
        let len = bytes.len();
        bytes[len - 1] = 101;
        assert!(parse_word(&bytes).is_err());
    }

    #[test]
    fn metadata_round_trip() {
        let text = write_metadata(
            "lps",
            &[("p", "5".into()), ("q", "13".into())],
            "PGL2(F13)",
            &["m0".into(), "m1".into(), "m2".into()],
            &[0, 1, 2, 0, 1, 2],
        );
        let meta = parse_metadata(&text).unwrap();
        assert_eq!(meta.family, "lps");
        assert_eq!(meta.param("p").unwrap(), 5);
        assert_eq!(meta.param("q").unwrap(), 13);
        assert_eq!(meta.schedule, vec![0, 1, 2, 0, 1, 2]);
    }
}
