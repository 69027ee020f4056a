use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A symbol of a partial Latin square, canonically 1-based: valid values are
/// `1..=m` for the square's declared symbol count `m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub usize);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A grid position, 1-based in both coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A partially filled grid of symbols. The Latin property (no symbol twice in
/// a row or column) is *not* enforced on insertion; it is judged by
/// [`crate::verify::verify_pls`]. Bounds, on the other hand, are enforced
/// here, so out-of-range cells and symbols are structural errors and never
/// reach the verifier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialLatinSquare {
    rows: usize,
    cols: usize,
    symbols: usize,
    entries: BTreeMap<Cell, Symbol>,
}

impl PartialLatinSquare {
    /// An empty square with the given dimensions and symbol count.
    pub fn new(rows: usize, cols: usize, symbols: usize) -> Self {
        PartialLatinSquare {
            rows,
            cols,
            symbols,
            entries: BTreeMap::new(),
        }
    }

    /// Fills a cell. Rejects out-of-range positions or symbols and cells that
    /// are already filled.
    pub fn insert(&mut self, cell: Cell, sym: Symbol) -> Result<()> {
        if cell.row < 1 || cell.row > self.rows || cell.col < 1 || cell.col > self.cols {
            return Err(Error::Structural(format!(
                "cell {cell} outside {}x{} grid",
                self.rows, self.cols
            )));
        }
        if sym.0 < 1 || sym.0 > self.symbols {
            return Err(Error::Structural(format!(
                "symbol {sym} at {cell} outside 1..={}",
                self.symbols
            )));
        }
        if self.entries.insert(cell, sym).is_some() {
            return Err(Error::Structural(format!("cell {cell} filled twice")));
        }
        Ok(())
    }

    /// Builds a square from row-major optional entries. Every row must have
    /// the same length.
    pub fn from_rows(symbols: usize, grid: &[Vec<Option<usize>>]) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::Structural("ragged row lengths".into()));
        }
        let mut pls = PartialLatinSquare::new(rows, cols, symbols);
        for (r, row) in grid.iter().enumerate() {
            for (c, ent) in row.iter().enumerate() {
                if let Some(s) = ent {
                    pls.insert(Cell::new(r + 1, c + 1), Symbol(*s))?;
                }
            }
        }
        Ok(pls)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Declared symbol count, independent of how many symbols actually occur.
    pub fn symbol_count(&self) -> usize {
        self.symbols
    }

    /// Number of filled cells.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, cell: Cell) -> Option<Symbol> {
        self.entries.get(&cell).copied()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.entries.contains_key(&cell)
    }

    /// Filled cells with their symbols, in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, Symbol)> + '_ {
        self.entries.iter().map(|(&c, &s)| (c, s))
    }

    /// The set of filled cells, in (row, col) order.
    pub fn support(&self) -> impl Iterator<Item = Cell> + '_ {
        self.entries.keys().copied()
    }

    /// Entries of one row, in column order.
    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (Cell, Symbol)> + '_ {
        self.entries
            .range(Cell::new(row, 0)..=Cell::new(row, usize::MAX))
            .map(|(&c, &s)| (c, s))
    }

    /// Entries of one column, in row order.
    pub fn col_entries(&self, col: usize) -> impl Iterator<Item = (Cell, Symbol)> + '_ {
        self.entries()
            .filter(move |(c, _)| c.col == col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_rejects_out_of_bounds() {
        let mut p = PartialLatinSquare::new(2, 2, 2);
        assert!(p.insert(Cell::new(3, 1), Symbol(1)).is_err());
        assert!(p.insert(Cell::new(1, 0), Symbol(1)).is_err());
        assert!(p.insert(Cell::new(1, 1), Symbol(3)).is_err());
        assert!(p.insert(Cell::new(1, 1), Symbol(0)).is_err());
    }

    #[test]
    fn insert_rejects_refill() {
        let mut p = PartialLatinSquare::new(2, 2, 2);
        p.insert(Cell::new(1, 1), Symbol(1)).unwrap();
        assert!(p.insert(Cell::new(1, 1), Symbol(2)).is_err());
    }

    #[test]
    fn row_entries_are_ordered() {
        let p = PartialLatinSquare::from_rows(
            3,
            &[
                vec![Some(1), None, Some(2)],
                vec![None, Some(3), None],
            ],
        )
        .unwrap();
        let row1: Vec<_> = p.row_entries(1).map(|(c, s)| (c.col, s.0)).collect();
        assert_eq!(row1, vec![(1, 1), (3, 2)]);
        assert_eq!(p.row_entries(2).count(), 1);
        assert_eq!(p.len(), 3);
    }
}
