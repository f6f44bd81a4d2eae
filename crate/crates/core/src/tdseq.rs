//! The `TDSEQ 1` text format.
//!
//! ```text
//! TDSEQ 1
//! base <integer>
//! length <integer>
//! <p/q>        one line per symbol, lowest terms
//! ```
//!
//! Every line, including the last, ends in `\n`. Nothing else is accepted.

use std::io::{self, Write};

use crate::block::Block;
use crate::error::{Error, Result};
use crate::symbol::Symbol;

pub const MAGIC: &str = "TDSEQ 1";

pub fn write<W: Write>(block: &Block, mut out: W) -> io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "base {}", block.base())?;
    writeln!(out, "length {}", block.len())?;
    for s in block.symbols() {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

pub fn to_string(block: &Block) -> String {
    let mut buf = Vec::with_capacity(block.len() * 4 + 32);
    write(block, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse(text: &str) -> Result<Block> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::Parse("missing final newline".into()))?;
    let mut lines = body.split('\n');
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what} line")))
    };

    if next("header")? != MAGIC {
        return Err(Error::Parse("bad header, expected `TDSEQ 1`".into()));
    }
    let base: i64 = header_value(next("base")?, "base")?;
    let length: usize = header_value(next("length")?, "length")?;
    if length == 0 {
        return Err(Error::EmptyBlock);
    }

    let mut symbols = Vec::with_capacity(length);
    for line in lines {
        symbols.push(line.parse::<Symbol>()?);
    }
    if symbols.len() != length {
        return Err(Error::Parse(format!(
            "declared length {length} but found {} symbols",
            symbols.len()
        )));
    }
    Block::new(base, symbols)
}

fn header_value<T: std::str::FromStr>(line: &str, key: &str) -> Result<T> {
    let value = line
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("expected `{key} <integer>`, got {line:?}")))?;
    let canonical = value == "0"
        || value
            .strip_prefix('-')
            .unwrap_or(value)
            .bytes()
            .enumerate()
            .all(|(k, b)| b.is_ascii_digit() && !(k == 0 && b == b'0'));
    if value.is_empty() || value == "-" || value == "-0" || !canonical {
        return Err(Error::Parse(format!("malformed {key} value {value:?}")));
    }
    value
        .parse()
        .map_err(|_| Error::Parse(format!("malformed {key} value {value:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_exact_bytes() {
        let b = Block::new(
            -1,
            vec![Symbol::zero(), Symbol::one(), Symbol::ratio(2, 6)],
        )
        .unwrap();
        assert_eq!(to_string(&b), "TDSEQ 1\nbase -1\nlength 3\n0/1\n1/1\n1/3\n");
    }

    #[test]
    fn parses_what_it_writes() {
        let text = "TDSEQ 1\nbase 1\nlength 3\n1/1\n0/1\n1/2\n";
        let b = parse(text).unwrap();
        assert_eq!(b.base(), 1);
        assert_eq!(to_string(&b), text);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "TDSEQ 1\nbase 1\nlength 1\n1/1",             // no final newline
            "TDSEQ 2\nbase 1\nlength 1\n1/1\n",           // wrong version
            "TDSEQ 1\nbase 1\nlength 2\n1/1\n",           // short
            "TDSEQ 1\nbase 1\nlength 1\n1/1\n0/1\n",      // long
            "TDSEQ 1\nbase 1 \nlength 1\n1/1\n",          // trailing space
            "TDSEQ 1\nbase 01\nlength 1\n1/1\n",          // non-canonical integer
            "TDSEQ 1\nbase 1\nlength 1\n2/2\n",           // not reduced
            "TDSEQ 1\nbase 1\nlength 0\n",                // empty
            "TDSEQ 1\nbase 1\nlength 2\n1/1\n\n",         // blank symbol line
        ] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
    }
}
