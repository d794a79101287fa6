//! OEIS b-file interchange: one "<n> <value>" pair per line, '#' comments and
//! blank lines ignored, indices strictly increasing. Tab or spaces are
//! accepted on input; output uses a single tab.

use std::io::BufRead;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BFileRecord {
    pub n: i64,
    pub value: i64,
}

pub fn parse(reader: impl BufRead) -> Result<Vec<BFileRecord>> {
    let mut records: Vec<BFileRecord> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.with_context(|| format!("reading line {}", lineno + 1))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (n, value) = match (fields.next(), fields.next(), fields.next()) {
            (Some(n), Some(v), None) => (n, v),
            _ => bail!("line {}: expected 'n value', got '{line}'", lineno + 1),
        };
        let n: i64 = n
            .parse()
            .with_context(|| format!("line {}: bad index '{n}'", lineno + 1))?;
        let value: i64 = value
            .parse()
            .with_context(|| format!("line {}: bad value '{value}'", lineno + 1))?;
        if n < 1 {
            bail!("line {}: index {n} is not positive", lineno + 1);
        }
        if let Some(last) = records.last() {
            if n <= last.n {
                bail!(
                    "line {}: index {n} does not increase (previous was {})",
                    lineno + 1,
                    last.n
                );
            }
        }
        records.push(BFileRecord { n, value });
    }
    if records.is_empty() {
        bail!("no records found");
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn parses_comments_and_whitespace() {
        let text = "# a comment\n1 1\n2\t1\n\n  3   2\n";
        let records = parse(Cursor::new(text)).unwrap();
        assert_eq!(
            records,
            vec![
                BFileRecord { n: 1, value: 1 },
                BFileRecord { n: 2, value: 1 },
                BFileRecord { n: 3, value: 2 },
            ]
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse(Cursor::new("1 2 3\n")).is_err());
        assert!(parse(Cursor::new("1 x\n")).is_err());
        assert!(parse(Cursor::new("2 1\n1 1\n")).is_err());
        assert!(parse(Cursor::new("0 1\n")).is_err());
        assert!(parse(Cursor::new("# only comments\n")).is_err());
    }
}
