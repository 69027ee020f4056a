//! Text formats.
//!
//! Machine bitrade format: a header line `bitrade rows=<R> cols=<C>
//! symbols=<m>`, then one line `r c i j` per filled cell (trade symbol `i`,
//! mate symbol `j`), whitespace-separated decimals sorted by `(r, c)`.
//!
//! Machine base-row format: a header line `baserow k=<k> m=<m>`, then `k`
//! lines `c i j` sorted by `c`.
//!
//! Grid display format: `R` lines of `C` space-separated tokens, each `i/j`
//! for a filled cell or `.` for an empty one.
//!
//! Human base-row notation: `D^<k>_<m> = {(i,j)_c,...}`, always 1-based.

use crate::bitrade::Bitrade;
use crate::circulant::BaseRow;
use crate::error::{Error, Result};
use crate::square::{Cell, PartialLatinSquare, Symbol};

/// Whether indices and symbols in machine/grid text are 1-based (canonical)
/// or 0-based. The shift applies uniformly to rows, columns and symbols of
/// entry lines; declared counts in headers are unaffected.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum IndexBase {
    #[default]
    One,
    Zero,
}

impl IndexBase {
    fn out(self, v: usize) -> usize {
        match self {
            IndexBase::One => v,
            IndexBase::Zero => v - 1,
        }
    }

    fn parse(self, v: usize) -> usize {
        match self {
            IndexBase::One => v,
            IndexBase::Zero => v + 1,
        }
    }
}

pub fn write_bitrade_machine(b: &Bitrade, base: IndexBase) -> Result<String> {
    let mut out = format!(
        "bitrade rows={} cols={} symbols={}\n",
        b.rows(),
        b.cols(),
        b.symbol_count()
    );
    let mut count = 0;
    for (cell, t, m) in b.entry_pairs() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            base.out(cell.row),
            base.out(cell.col),
            base.out(t.0),
            base.out(m.0)
        ));
        count += 1;
    }
    if count != b.trade().len() || count != b.mate().len() {
        return Err(Error::Precondition(
            "machine format requires equal supports in both halves".into(),
        ));
    }
    Ok(out)
}

pub fn write_bitrade_grid(b: &Bitrade, base: IndexBase) -> String {
    let mut out = String::new();
    for r in 1..=b.rows() {
        let mut tokens = Vec::with_capacity(b.cols());
        for c in 1..=b.cols() {
            let cell = Cell::new(r, c);
            match (b.trade().get(cell), b.mate().get(cell)) {
                (Some(t), Some(m)) => tokens.push(format!("{}/{}", base.out(t.0), base.out(m.0))),
                (None, None) => tokens.push(".".into()),
                // Half-filled cells only occur in broken objects; show both sides.
                (t, m) => tokens.push(format!(
                    "{}/{}",
                    t.map_or("_".into(), |s| base.out(s.0).to_string()),
                    m.map_or("_".into(), |s| base.out(s.0).to_string())
                )),
            }
        }
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-blank line as (1-based line number, content).
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if !t.is_empty() {
                return Some((i + 1, t));
            }
        }
        None
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_kv(token: &str, key: &str, line: usize) -> Result<usize> {
    let rest = token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<n>`, found `{token}`")))?;
    rest.parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad number in `{token}`")))
}

fn parse_fields(line_no: usize, line: &str, n: usize) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != n {
        return Err(parse_err(
            line_no,
            format!("expected {n} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("bad number `{f}`")))
        })
        .collect()
}

pub fn parse_bitrade_machine(text: &str, base: IndexBase) -> Result<Bitrade> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "bitrade" {
        return Err(parse_err(
            hline,
            "expected header `bitrade rows=<R> cols=<C> symbols=<m>`",
        ));
    }
    let rows = parse_kv(tokens[1], "rows", hline)?;
    let cols = parse_kv(tokens[2], "cols", hline)?;
    let symbols = parse_kv(tokens[3], "symbols", hline)?;
    let mut trade = PartialLatinSquare::new(rows, cols, symbols);
    let mut mate = PartialLatinSquare::new(rows, cols, symbols);
    let mut prev: Option<Cell> = None;
    while let Some((ln, line)) = lines.next() {
        let f = parse_fields(ln, line, 4)?;
        let cell = Cell::new(base.parse(f[0]), base.parse(f[1]));
        if let Some(p) = prev {
            if cell <= p {
                return Err(parse_err(ln, format!("entries not sorted: {cell} after {p}")));
            }
        }
        prev = Some(cell);
        trade
            .insert(cell, Symbol(base.parse(f[2])))
            .map_err(|e| parse_err(ln, e.to_string()))?;
        mate.insert(cell, Symbol(base.parse(f[3])))
            .map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Bitrade::new(trade, mate)
}

pub fn write_base_row_machine(b: &BaseRow, base: IndexBase) -> String {
    let mut out = format!("baserow k={} m={}\n", b.k(), b.m());
    for (c, top, bottom) in b.triples() {
        out.push_str(&format!(
            "{} {} {}\n",
            base.out(c),
            base.out(top),
            base.out(bottom)
        ));
    }
    out
}

pub fn parse_base_row_machine(text: &str, base: IndexBase) -> Result<BaseRow> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "baserow" {
        return Err(parse_err(hline, "expected header `baserow k=<k> m=<m>`"));
    }
    let k = parse_kv(tokens[1], "k", hline)?;
    let m = parse_kv(tokens[2], "m", hline)?;
    let mut triples = Vec::new();
    let mut prev = 0usize;
    while let Some((ln, line)) = lines.next() {
        let f = parse_fields(ln, line, 3)?;
        let c = base.parse(f[0]);
        if c <= prev {
            return Err(parse_err(ln, format!("cells not sorted: {c} after {prev}")));
        }
        prev = c;
        triples.push((c, base.parse(f[1]), base.parse(f[2])));
    }
    if triples.len() != k {
        return Err(parse_err(
            hline,
            format!("header claims k={k} but {} cells follow", triples.len()),
        ));
    }
    BaseRow::new(m, triples).map_err(|e| parse_err(hline, e.to_string()))
}

/// Human-readable base-row notation, e.g. `D^3_5 = {(2,1)_1,(1,3)_2,(3,2)_3}`.
/// Always 1-based; the `D^k_m` prefix carries the modulus so the text
/// round-trips through [`parse_base_row`].
pub fn format_base_row_paper(b: &BaseRow) -> String {
    let cells: Vec<String> = b
        .triples()
        .map(|(c, t, m)| format!("({t},{m})_{c}"))
        .collect();
    format!("D^{}_{} = {{{}}}", b.k(), b.m(), cells.join(","))
}

/// Parses a list of `(i,j)_c` cells against an externally supplied modulus.
/// Separators may be commas or whitespace; surrounding braces are optional.
pub fn parse_paper_cells(text: &str, m: usize) -> Result<BaseRow> {
    let cleaned = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut triples = Vec::new();
    let mut rest = cleaned.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches([',', ' ', '\n', '\t']);
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(parse_err(1, format!("expected `(i,j)_c` at `{}`", shorten(rest))));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| parse_err(1, format!("unclosed parenthesis at `{}`", shorten(rest))))?;
        let body = &rest[1..close];
        let (i, j) = body
            .split_once(',')
            .ok_or_else(|| parse_err(1, format!("expected two symbols in `({body})`")))?;
        let after = &rest[close + 1..];
        let after = after.strip_prefix('_').ok_or_else(|| {
            parse_err(1, format!("expected `_c` after `({body})`"))
        })?;
        let end = after
            .find(|ch: char| !ch.is_ascii_digit())
            .unwrap_or(after.len());
        if end == 0 {
            return Err(parse_err(1, format!("missing cell index after `({body})_`")));
        }
        let c: usize = after[..end]
            .parse()
            .map_err(|_| parse_err(1, format!("bad cell index `{}`", &after[..end])))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| parse_err(1, format!("bad symbol `{i}`")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| parse_err(1, format!("bad symbol `{j}`")))?;
        triples.push((c, i, j));
        rest = &after[end..];
    }
    BaseRow::new(m, triples).map_err(|e| parse_err(1, e.to_string()))
}

fn shorten(s: &str) -> String {
    s.chars().take(12).collect()
}

/// Parses a base row in either the machine format (header `baserow ...`) or
/// the human notation (`D^k_m = {...}`, which carries the modulus).
pub fn parse_base_row(text: &str) -> Result<BaseRow> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("baserow") {
        return parse_base_row_machine(text, IndexBase::One);
    }
    if let Some(rest) = trimmed.strip_prefix("D^") {
        let (k_str, rest) = rest
            .split_once('_')
            .ok_or_else(|| parse_err(1, "expected `D^<k>_<m> = {...}`"))?;
        let eq = rest
            .find('=')
            .ok_or_else(|| parse_err(1, "expected `=` after `D^<k>_<m>`"))?;
        let m_str = rest[..eq].trim();
        let k: usize = k_str
            .trim()
            .parse()
            .map_err(|_| parse_err(1, format!("bad k `{k_str}`")))?;
        let m: usize = m_str
            .parse()
            .map_err(|_| parse_err(1, format!("bad m `{m_str}`")))?;
        let row = parse_paper_cells(&rest[eq + 1..], m)?;
        if row.k() != k {
            return Err(parse_err(
                1,
                format!("prefix claims k={k} but {} cells follow", row.k()),
            ));
        }
        return Ok(row);
    }
    Err(parse_err(
        1,
        "unrecognized base-row text: use the machine format or `D^<k>_<m> = {...}`",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_row_machine_round_trip() {
        let b = BaseRow::new(5, [(1, 2, 1), (2, 1, 3), (3, 3, 2)]).unwrap();
        let text = write_base_row_machine(&b, IndexBase::One);
        assert_eq!(text, "baserow k=3 m=5\n1 2 1\n2 1 3\n3 3 2\n");
        assert_eq!(parse_base_row_machine(&text, IndexBase::One).unwrap(), b);
        assert_eq!(parse_base_row(&text).unwrap(), b);
    }

    #[test]
    fn paper_cells_parse_example() {
        let b = parse_paper_cells("(3,2)_1 (1,4)_2 (4,1)_3 (2,3)_4", 5).unwrap();
        let expected = BaseRow::new(5, [(1, 3, 2), (2, 1, 4), (3, 4, 1), (4, 2, 3)]).unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn paper_notation_round_trip() {
        let b = BaseRow::new(5, [(1, 3, 2), (2, 1, 4), (3, 4, 1), (4, 2, 3)]).unwrap();
        let text = format_base_row_paper(&b);
        assert_eq!(text, "D^4_5 = {(3,2)_1,(1,4)_2,(4,1)_3,(2,3)_4}");
        assert_eq!(parse_base_row(&text).unwrap(), b);
    }

    #[test]
    fn paper_cells_reject_equal_pair() {
        assert!(parse_paper_cells("(1,1)_1", 3).is_err());
    }

    #[test]
    fn bitrade_machine_round_trip_both_bases() {
        let b = BaseRow::new(5, [(1, 2, 1), (2, 1, 3), (3, 3, 2)])
            .unwrap()
            .expand();
        for base in [IndexBase::One, IndexBase::Zero] {
            let text = write_bitrade_machine(&b, base).unwrap();
            assert_eq!(parse_bitrade_machine(&text, base).unwrap(), b);
        }
    }

    #[test]
    fn unsorted_entries_are_rejected() {
        let text = "bitrade rows=2 cols=2 symbols=2\n1 2 1 2\n1 1 2 1\n";
        assert!(parse_bitrade_machine(text, IndexBase::One).is_err());
    }

    #[test]
    fn out_of_range_symbol_is_a_parse_error() {
        let text = "bitrade rows=2 cols=2 symbols=2\n1 1 3 1\n";
        match parse_bitrade_machine(text, IndexBase::One) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
