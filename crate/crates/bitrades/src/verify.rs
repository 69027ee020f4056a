//! The definitional verifier. Everything else in the crate is judged against
//! the checks in this module: Latin property of both halves, equal support,
//! cellwise disjointness, and per-row / per-column symbol balance.

use std::collections::BTreeMap;
use std::fmt;

use crate::bitrade::Bitrade;
use crate::square::{Cell, PartialLatinSquare, Symbol};

/// Which half of a bitrade a violation belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Half {
    Trade,
    Mate,
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Half::Trade => write!(f, "trade"),
            Half::Mate => write!(f, "mate"),
        }
    }
}

/// Identifier of the violated condition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConditionId {
    /// A symbol occurs twice in a row.
    LatinRow,
    /// A symbol occurs twice in a column.
    LatinCol,
    /// A cell is filled in one half only.
    Support,
    /// Trade and mate agree on a filled cell.
    Disjoint,
    /// A row's trade and mate symbol multisets differ.
    RowBalance,
    /// A column's trade and mate symbol multisets differ.
    ColBalance,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::LatinRow => "latin-row",
            ConditionId::LatinCol => "latin-col",
            ConditionId::Support => "support",
            ConditionId::Disjoint => "disjoint",
            ConditionId::RowBalance => "row-balance",
            ConditionId::ColBalance => "col-balance",
        };
        write!(f, "{s}")
    }
}

/// Where a violation was observed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Location {
    Cell(Cell),
    Row(usize),
    Col(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Cell(c) => write!(f, "{c}"),
            Location::Row(r) => write!(f, "row {r}"),
            Location::Col(c) => write!(f, "column {c}"),
        }
    }
}

/// One violated condition with its location.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub condition: ConditionId,
    pub half: Option<Half>,
    pub location: Location,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half {
            Some(h) => write!(
                f,
                "{} in {} at {}: {}",
                self.condition, h, self.location, self.detail
            ),
            None => write!(f, "{} at {}: {}", self.condition, self.location, self.detail),
        }
    }
}

/// Outcome of a verification run. `valid()` holds exactly when no condition
/// was violated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    /// `Some(k)` when the object is a valid, trimmed, k-homogeneous bitrade.
    pub homogeneity: Option<usize>,
    /// Number of filled cells of the (trade) support.
    pub volume: usize,
}

impl VerificationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// One-line summary: "valid" or the first violation.
    pub fn summary(&self) -> String {
        match self.first() {
            None => "valid".to_string(),
            Some(v) => v.to_string(),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            write!(f, "valid, volume {}", self.volume)?;
            if let Some(k) = self.homogeneity {
                write!(f, ", {k}-homogeneous")?;
            }
            Ok(())
        } else {
            writeln!(f, "invalid, {} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f,"  {v}")?;
            }
            Ok(())
        }
    }
}

/// Collects every repeated symbol in rows and columns of one square. The
/// reported location is the later of the two colliding cells.
fn latin_violations(p: &PartialLatinSquare, half: Option<Half>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut row_seen: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut col_seen: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    for (cell, sym) in p.entries() {
        if let Some(&col0) = row_seen.get(&(cell.row, sym)) {
            out.push(Violation {
                condition: ConditionId::LatinRow,
                half,
                location: Location::Cell(cell),
                detail: format!("symbol {sym} already at column {col0}"),
            });
        } else {
            row_seen.insert((cell.row, sym), cell.col);
        }
        if let Some(&row0) = col_seen.get(&(cell.col, sym)) {
            out.push(Violation {
                condition: ConditionId::LatinCol,
                half,
                location: Location::Cell(cell),
                detail: format!("symbol {sym} already at row {row0}"),
            });
        } else {
            col_seen.insert((cell.col, sym), cell.row);
        }
    }
    out
}

/// Checks the Latin property of a single partial square and reports every
/// violation with its location.
pub fn verify_pls(p: &PartialLatinSquare) -> VerificationReport {
    VerificationReport {
        violations: latin_violations(p, None),
        homogeneity: None,
        volume: p.len(),
    }
}

fn balance_violations(
    trade: &PartialLatinSquare,
    mate: &PartialLatinSquare,
    by_row: bool,
) -> Vec<Violation> {
    let mut trade_counts: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut mate_counts: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let line = |c: Cell| if by_row { c.row } else { c.col };
    for (cell, sym) in trade.entries() {
        *trade_counts.entry((line(cell), sym)).or_insert(0) += 1;
    }
    for (cell, sym) in mate.entries() {
        *mate_counts.entry((line(cell), sym)).or_insert(0) += 1;
    }
    let mut keys: Vec<(usize, Symbol)> = trade_counts.keys().chain(mate_counts.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for key in keys {
        let t = trade_counts.get(&key).copied().unwrap_or(0);
        let m = mate_counts.get(&key).copied().unwrap_or(0);
        if t != m {
            let (l, sym) = key;
            out.push(Violation {
                condition: if by_row {
                    ConditionId::RowBalance
                } else {
                    ConditionId::ColBalance
                },
                half: None,
                location: if by_row { Location::Row(l) } else { Location::Col(l) },
                detail: format!("symbol {sym}: trade x{t}, mate x{m}"),
            });
        }
    }
    out
}

/// Checks the bitrade conditions in order: both halves are partial Latin
/// squares, equal support, cellwise disjointness, per-row balance, per-column
/// balance. All failures are listed, not just the first.
pub fn verify_bitrade(b: &Bitrade) -> VerificationReport {
    let mut violations = Vec::new();
    violations.extend(latin_violations(b.trade(), Some(Half::Trade)));
    violations.extend(latin_violations(b.mate(), Some(Half::Mate)));

    for cell in b.trade().support() {
        if !b.mate().contains(cell) {
            violations.push(Violation {
                condition: ConditionId::Support,
                half: Some(Half::Trade),
                location: Location::Cell(cell),
                detail: "filled in trade only".into(),
            });
        }
    }
    for cell in b.mate().support() {
        if !b.trade().contains(cell) {
            violations.push(Violation {
                condition: ConditionId::Support,
                half: Some(Half::Mate),
                location: Location::Cell(cell),
                detail: "filled in mate only".into(),
            });
        }
    }

    for (cell, sym) in b.trade().entries() {
        if b.mate().get(cell) == Some(sym) {
            violations.push(Violation {
                condition: ConditionId::Disjoint,
                half: None,
                location: Location::Cell(cell),
                detail: format!("both halves hold {sym}"),
            });
        }
    }

    violations.extend(balance_violations(b.trade(), b.mate(), true));
    violations.extend(balance_violations(b.trade(), b.mate(), false));

    let homogeneity = if violations.is_empty() && b.is_trimmed() {
        b.homogeneity().unwrap_or(None)
    } else {
        None
    };
    VerificationReport {
        violations,
        homogeneity,
        volume: b.trade().len(),
    }
}
