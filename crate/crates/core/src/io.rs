//! File formats: TRN v1 text and digraph6.
//!
//! TRN v1 is line oriented:
//!
//! ```text
//! TRN 3
//! 010
//! 001
//! 100
//! ```
//!
//! Character `j` of matrix line `i` is `1` iff `i -> j`. Every line ends in
//! LF; a file may hold any number of records back to back.
//!
//! digraph6 is the directed variant of graph6: an optional `>>digraph6<<`
//! header, then `&`, the order `N(n)`, and the full `n*n` adjacency matrix
//! row-major, six bits per printable byte (value + 63), zero padded.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::tournament::{Tournament, TournamentError};

const D6_HEADER: &str = ">>digraph6<<";

/// Location of a record inside an input stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    /// Zero-based record index.
    pub record: usize,
    /// One-based line number.
    pub line: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "record {} (line {})", self.record, self.line)
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at {position}: {message}")]
    Parse { position: Position, message: String },
    #[error("record at {position} is not a tournament: {source}")]
    NotATournament {
        position: Position,
        #[source]
        source: TournamentError,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FormatError {
    fn parse(position: Position, message: impl Into<String>) -> Self {
        FormatError::Parse {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Trn,
    Digraph6,
}

// ---------------------------------------------------------------------------
// TRN v1
// ---------------------------------------------------------------------------

pub fn encode_trn(t: &Tournament) -> String {
    let n = t.order();
    let mut s = String::with_capacity(8 + n * (n + 1));
    s.push_str(&format!("TRN {n}\n"));
    for i in 0..n {
        for j in 0..n {
            s.push(if t.dominates(i, j) { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

/// Decodes exactly one TRN record.
pub fn decode_trn(text: &str) -> Result<Tournament, FormatError> {
    let mut reader = TournamentReader::new(text.as_bytes(), Format::Trn);
    let t = reader
        .next()
        .unwrap_or_else(|| Err(FormatError::parse(reader.here(), "empty input")))?;
    if let Some(extra) = reader.next() {
        extra?;
        return Err(FormatError::parse(reader.here(), "trailing records"));
    }
    Ok(t)
}

fn parse_trn_header(line: &str, pos: Position) -> Result<usize, FormatError> {
    let rest = line
        .strip_prefix("TRN ")
        .ok_or_else(|| FormatError::parse(pos, format!("expected `TRN <n>`, found {line:?}")))?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FormatError::parse(pos, format!("bad order {rest:?}")));
    }
    rest.parse()
        .map_err(|_| FormatError::parse(pos, format!("bad order {rest:?}")))
}

// ---------------------------------------------------------------------------
// digraph6
// ---------------------------------------------------------------------------

fn push_order(out: &mut String, n: usize) {
    let n = n as u64;
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

pub fn encode_digraph6(t: &Tournament) -> String {
    let n = t.order();
    let mut out = String::with_capacity(2 + (n * n).div_ceil(6));
    out.push('&');
    push_order(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for i in 0..n {
        for j in 0..n {
            acc = acc << 1 | t.dominates(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

fn sextet(b: u8, pos: Position) -> Result<u64, FormatError> {
    if (63..=126).contains(&b) {
        Ok((b - 63) as u64)
    } else {
        Err(FormatError::parse(
            pos,
            format!("byte {b:#04x} outside digraph6 range"),
        ))
    }
}

fn decode_order(bytes: &[u8], pos: Position) -> Result<(usize, usize), FormatError> {
    let take = |from: usize, count: usize| -> Result<u64, FormatError> {
        let chunk = bytes
            .get(from..from + count)
            .ok_or_else(|| FormatError::parse(pos, "truncated order field"))?;
        chunk
            .iter()
            .try_fold(0u64, |acc, &b| Ok(acc << 6 | sextet(b, pos)?))
    };
    match bytes.first() {
        None => Err(FormatError::parse(pos, "missing order field")),
        Some(b'~') if bytes.get(1) == Some(&b'~') => Ok((take(2, 6)? as usize, 8)),
        Some(b'~') => Ok((take(1, 3)? as usize, 4)),
        Some(&b) => Ok((sextet(b, pos)? as usize, 1)),
    }
}

/// Decodes one digraph6 line (header optional, no trailing newline).
pub fn decode_digraph6(line: &str) -> Result<Tournament, FormatError> {
    decode_digraph6_at(line, Position { record: 0, line: 1 })
}

fn decode_digraph6_at(line: &str, pos: Position) -> Result<Tournament, FormatError> {
    let body = line.strip_prefix(D6_HEADER).unwrap_or(line);
    let body = body
        .strip_prefix('&')
        .ok_or_else(|| FormatError::parse(pos, "digraph6 record must start with '&'"))?
        .as_bytes();
    let (n, used) = decode_order(body, pos)?;
    let data = &body[used..];
    let bits = n
        .checked_mul(n)
        .ok_or_else(|| FormatError::parse(pos, "order too large"))?;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(FormatError::parse(
            pos,
            format!(
                "expected {expected} data bytes for n={n}, found {}",
                data.len()
            ),
        ));
    }
    let mut matrix = vec![vec![false; n]; n];
    for (k, &b) in data.iter().enumerate() {
        let v = sextet(b, pos)?;
        for bit in 0..6 {
            let idx = k * 6 + bit;
            let set = v >> (5 - bit) & 1 == 1;
            if idx < bits {
                matrix[idx / n][idx % n] = set;
            } else if set {
                return Err(FormatError::parse(pos, "non-zero padding bits"));
            }
        }
    }
    Tournament::from_matrix(&matrix).map_err(|source| FormatError::NotATournament {
        position: pos,
        source,
    })
}

// ---------------------------------------------------------------------------
// Streams
// ---------------------------------------------------------------------------

/// Streaming reader over a TRN or digraph6 file, yielding validated
/// tournaments in file order. Iteration stops after the first error.
pub struct TournamentReader<R> {
    input: R,
    format: Format,
    line_no: usize,
    record: usize,
    buf: String,
    failed: bool,
}

impl<R: BufRead> TournamentReader<R> {
    pub fn new(input: R, format: Format) -> Self {
        TournamentReader {
            input,
            format,
            line_no: 0,
            record: 0,
            buf: String::new(),
            failed: false,
        }
    }

    pub fn here(&self) -> Position {
        Position {
            record: self.record,
            line: self.line_no.max(1),
        }
    }

    /// Reads one line without its LF; `None` at end of input.
    fn read_line(&mut self) -> Result<Option<&str>, FormatError> {
        self.buf.clear();
        if self.input.read_line(&mut self.buf)? == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        if self.buf.ends_with('\n') {
            self.buf.pop();
        }
        Ok(Some(self.buf.as_str()))
    }

    fn next_trn(&mut self) -> Result<Option<Tournament>, FormatError> {
        let header = match self.read_line()? {
            None => return Ok(None),
            Some(h) => h.to_owned(),
        };
        let n = parse_trn_header(&header, self.here())?;
        let mut matrix = Vec::with_capacity(n);
        for i in 0..n {
            let pos = self.here();
            let row = self
                .read_line()?
                .ok_or_else(|| {
                    FormatError::parse(pos, format!("truncated: missing matrix row {i}"))
                })?
                .to_owned();
            let pos = self.here();
            if row.len() != n {
                return Err(FormatError::parse(
                    pos,
                    format!("row {i} has {} characters, expected {n}", row.len()),
                ));
            }
            let parsed: Result<Vec<bool>, _> = row
                .bytes()
                .map(|b| match b {
                    b'0' => Ok(false),
                    b'1' => Ok(true),
                    _ => Err(FormatError::parse(
                        pos,
                        format!("invalid character {:?}", b as char),
                    )),
                })
                .collect();
            matrix.push(parsed?);
        }
        let pos = self.here();
        Tournament::from_matrix(&matrix)
            .map(Some)
            .map_err(|source| FormatError::NotATournament {
                position: pos,
                source,
            })
    }

    fn next_digraph6(&mut self) -> Result<Option<Tournament>, FormatError> {
        loop {
            let line = match self.read_line()? {
                None => return Ok(None),
                Some(l) => l.trim_end_matches('\r').to_owned(),
            };
            if line.is_empty() {
                continue;
            }
            let pos = self.here();
            return decode_digraph6_at(&line, pos).map(Some);
        }
    }
}

impl<R: BufRead> Iterator for TournamentReader<R> {
    type Item = Result<Tournament, FormatError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let result = match self.format {
            Format::Trn => self.next_trn(),
            Format::Digraph6 => self.next_digraph6(),
        };
        match result {
            Ok(Some(t)) => {
                self.record += 1;
                Some(Ok(t))
            }
            Ok(None) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Guesses the format of a stream from its first non-empty bytes.
pub fn sniff_format(head: &[u8]) -> Format {
    let trimmed = head
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .map_or(&head[..0], |i| &head[i..]);
    if trimmed.starts_with(b"TRN") {
        Format::Trn
    } else {
        Format::Digraph6
    }
}

/// Opens a tournament file of either format, sniffing the format.
pub fn import_stream(
    path: impl AsRef<Path>,
) -> Result<TournamentReader<BufReader<File>>, FormatError> {
    let mut reader = BufReader::new(File::open(path)?);
    let format = sniff_format(reader.fill_buf()?);
    Ok(TournamentReader::new(reader, format))
}

/// Reads every tournament from an in-memory reader, sniffing the format.
pub fn read_all<R: Read>(input: R) -> Result<Vec<Tournament>, FormatError> {
    let mut reader = BufReader::new(input);
    let format = sniff_format(reader.fill_buf()?);
    TournamentReader::new(reader, format).collect()
}

pub fn write_record<W: Write>(out: &mut W, t: &Tournament, format: Format) -> std::io::Result<()> {
    match format {
        Format::Trn => out.write_all(encode_trn(t).as_bytes()),
        Format::Digraph6 => writeln!(out, "{}", encode_digraph6(t)),
    }
}
