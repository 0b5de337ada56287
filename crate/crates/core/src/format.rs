//! On-disk formats.
//!
//! * Matrix document (JSON): `{"m": .., "n": .., "exponents": [[..], ..], "provenance": {..}}`
//!   with one matrix row per line.
//! * Matrix plain text: a `BH m n` header line, then `n` lines of `n`
//!   space-separated exponents.
//! * Latin square set: blocks of an `L n` header and `n` rows of symbols,
//!   separated by blank lines.
//!
//! Writers are byte-deterministic; every writer/reader pair round-trips.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::butson::ButsonMatrix;
use crate::error::{Error, Result};
use crate::latin::LatinSquare;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Json,
    Text,
}

impl MatrixFormat {
    /// `.json` files are documents, anything else is plain text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Text,
        }
    }
}

/// How a matrix was produced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    /// SHA-256 of each input's plain-text serialization.
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub m: u32,
    pub n: usize,
    pub exponents: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl MatrixDocument {
    pub fn from_matrix(b: &ButsonMatrix, provenance: Option<Provenance>) -> Self {
        Self {
            m: b.m(),
            n: b.order(),
            exponents: b.rows(),
            provenance,
        }
    }

    pub fn to_matrix(&self) -> Result<ButsonMatrix> {
        if self.exponents.len() != self.n {
            return Err(Error::Parse(format!(
                "expected {} rows, found {}",
                self.n,
                self.exponents.len()
            )));
        }
        ButsonMatrix::new(self.m, self.exponents.clone())
    }
}

fn join_row(row: &[u32], sep: &str) -> String {
    let mut s = String::with_capacity(row.len() * 3);
    for (i, e) in row.iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        write!(s, "{e}").unwrap();
    }
    s
}

pub fn write_text(b: &ButsonMatrix) -> String {
    let mut s = format!("BH {} {}\n", b.m(), b.order());
    for i in 0..b.order() {
        s.push_str(&join_row(b.row(i), " "));
        s.push('\n');
    }
    s
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::Parse(format!("invalid {what}: {tok:?}")))
}

pub fn parse_text(text: &str) -> Result<ButsonMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("BH") {
        return Err(Error::Parse("expected header \"BH m n\"".into()));
    }
    let m: u32 = parse_num(toks.next(), "m")?;
    let n: usize = parse_num(toks.next(), "n")?;
    if toks.next().is_some() {
        return Err(Error::Parse("trailing tokens in header".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(Error::Parse(format!("more than {n} rows")));
        }
        let row = line
            .split_whitespace()
            .map(|t| parse_num(Some(t), "exponent"))
            .collect::<Result<Vec<u32>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    ButsonMatrix::new(m, rows)
}

pub fn write_json(doc: &MatrixDocument) -> Result<String> {
    let mut s = format!(
        "{{\n  \"m\": {},\n  \"n\": {},\n  \"exponents\": [\n",
        doc.m, doc.n
    );
    for (i, row) in doc.exponents.iter().enumerate() {
        let comma = if i + 1 < doc.exponents.len() { "," } else { "" };
        writeln!(s, "    [{}]{comma}", join_row(row, ", ")).unwrap();
    }
    s.push_str("  ]");
    if let Some(p) = &doc.provenance {
        let body = serde_json::to_string_pretty(p)?.replace('\n', "\n  ");
        write!(s, ",\n  \"provenance\": {body}").unwrap();
    }
    s.push_str("\n}\n");
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<MatrixDocument> {
    let doc: MatrixDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_matrix()?;
    Ok(doc)
}

/// Parse either format, chosen by the first non-blank character.
pub fn parse_matrix_document(text: &str) -> Result<MatrixDocument> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        Ok(MatrixDocument::from_matrix(&parse_text(text)?, None))
    }
}

pub fn write_matrix(doc: &MatrixDocument, format: MatrixFormat) -> Result<String> {
    match format {
        MatrixFormat::Json => write_json(doc),
        MatrixFormat::Text => Ok(write_text(&doc.to_matrix()?)),
    }
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixDocument> {
    parse_matrix_document(&std::fs::read_to_string(path)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hex SHA-256 of the plain-text serialization.
pub fn matrix_digest(b: &ButsonMatrix) -> String {
    sha256_hex(write_text(b).as_bytes())
}

pub fn write_latin_set(squares: &[LatinSquare]) -> String {
    let blocks: Vec<String> = squares
        .iter()
        .map(|l| {
            let mut s = format!("L {}\n", l.order());
            for i in 0..l.order() {
                s.push_str(&join_row(l.row(i), " "));
                s.push('\n');
            }
            s
        })
        .collect();
    blocks.join("\n")
}

pub fn parse_latin_set(text: &str) -> Result<Vec<LatinSquare>> {
    let mut out = Vec::new();
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    while let Some(header) = lines.next() {
        let mut toks = header.split_whitespace();
        if toks.next() != Some("L") {
            return Err(Error::Parse(format!(
                "expected \"L n\" header, found {header:?}"
            )));
        }
        let n: usize = parse_num(toks.next(), "Latin square order")?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("truncated Latin square".into()))?;
            rows.push(
                line.split_whitespace()
                    .map(|t| parse_num(Some(t), "symbol"))
                    .collect::<Result<Vec<u32>>>()?,
            );
        }
        out.push(LatinSquare::new(rows)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butson::fourier;
    use crate::latin::classical_lsesc_set;
    use proptest::prelude::*;

    #[test]
    fn text_layout() {
        assert_eq!(write_text(&fourier(3)), "BH 3 3\n0 0 0\n0 1 2\n0 2 1\n");
        assert_eq!(
            parse_text("BH 3 3\n0 0 0\n0 1 2\n0 2 1\n").unwrap(),
            fourier(3)
        );
        assert_eq!(write_text(&fourier(1)), "BH 1 1\n0\n");
    }

    #[test]
    fn json_layout() {
        let doc = MatrixDocument::from_matrix(&fourier(2), None);
        assert_eq!(
            write_json(&doc).unwrap(),
            "{\n  \"m\": 2,\n  \"n\": 2,\n  \"exponents\": [\n    [0, 0],\n    [0, 1]\n  ]\n}\n"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_text(""), Err(Error::Parse(_))));
        assert!(matches!(parse_text("BH 3 2\n0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_text("BH 3 1\n5\n"),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(parse_text("XX 3 1\n0\n"), Err(Error::Parse(_))));
        assert!(parse_json("{\"m\": 2, \"n\": 3, \"exponents\": [[0,0],[0,1]]}").is_err());
        assert!(parse_latin_set("L 2\n1 2\n").is_err());
        assert!(parse_latin_set("L 2\n1 1\n2 2\n").is_err());
    }

    #[test]
    fn latin_set_layout() {
        let set = classical_lsesc_set(3).unwrap();
        let text = write_latin_set(&set);
        assert_eq!(
            text,
            "L 3\n1 2 3\n2 3 1\n3 1 2\n\nL 3\n1 3 2\n2 1 3\n3 2 1\n"
        );
        assert_eq!(parse_latin_set(&text).unwrap(), set);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            matrix_digest(&fourier(3)),
            matrix_digest(&parse_text(&write_text(&fourier(3))).unwrap())
        );
        assert_ne!(matrix_digest(&fourier(3)), matrix_digest(&fourier(4)));
    }

    fn arb_doc() -> impl Strategy<Value = MatrixDocument> {
        (1u32..12, 1usize..7, any::<bool>()).prop_flat_map(|(m, n, with_prov)| {
            proptest::collection::vec(proptest::collection::vec(0..m, n), n).prop_map(
                move |exponents| {
                    let provenance = with_prov.then(|| Provenance {
                        construction: "phi".into(),
                        inputs: vec!["ab".repeat(32)],
                        parameters: BTreeMap::from([("deleted_row".into(), "1".into())]),
                    });
                    MatrixDocument {
                        m,
                        n,
                        exponents,
                        provenance,
                    }
                },
            )
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(doc in arb_doc()) {
            let text = write_json(&doc).unwrap();
            let back = parse_json(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(write_json(&back).unwrap(), text);
        }

        #[test]
        fn text_round_trip_is_bit_exact(doc in arb_doc()) {
            let b = doc.to_matrix().unwrap();
            let text = write_text(&b);
            prop_assert_eq!(write_text(&parse_text(&text).unwrap()), text);
        }
    }
}
