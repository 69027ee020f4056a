use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::square::{Cell, PartialLatinSquare, Symbol};

/// An ordered pair of partial Latin squares on the same grid. Validity (equal
/// support, disjointness, balance) is judged by
/// [`crate::verify::verify_bitrade`], not enforced on construction, so that
/// broken objects can be built and diagnosed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitrade {
    trade: PartialLatinSquare,
    mate: PartialLatinSquare,
}

impl Bitrade {
    /// Pairs two squares. They must agree on dimensions and symbol count.
    pub fn new(trade: PartialLatinSquare, mate: PartialLatinSquare) -> Result<Self> {
        if trade.rows() != mate.rows()
            || trade.cols() != mate.cols()
            || trade.symbol_count() != mate.symbol_count()
        {
            return Err(Error::Precondition(format!(
                "halves disagree on shape: {}x{}/{} vs {}x{}/{}",
                trade.rows(),
                trade.cols(),
                trade.symbol_count(),
                mate.rows(),
                mate.cols(),
                mate.symbol_count()
            )));
        }
        Ok(Bitrade { trade, mate })
    }

    /// Builds a bitrade from row-major `(trade, mate)` symbol pairs.
    pub fn from_pair_rows(symbols: usize, grid: &[Vec<Option<(usize, usize)>>]) -> Result<Self> {
        let trade_grid: Vec<Vec<Option<usize>>> = grid
            .iter()
            .map(|row| row.iter().map(|e| e.map(|(t, _)| t)).collect())
            .collect();
        let mate_grid: Vec<Vec<Option<usize>>> = grid
            .iter()
            .map(|row| row.iter().map(|e| e.map(|(_, m)| m)).collect())
            .collect();
        Bitrade::new(
            PartialLatinSquare::from_rows(symbols, &trade_grid)?,
            PartialLatinSquare::from_rows(symbols, &mate_grid)?,
        )
    }

    pub fn trade(&self) -> &PartialLatinSquare {
        &self.trade
    }

    pub fn mate(&self) -> &PartialLatinSquare {
        &self.mate
    }

    pub fn rows(&self) -> usize {
        self.trade.rows()
    }

    pub fn cols(&self) -> usize {
        self.trade.cols()
    }

    pub fn symbol_count(&self) -> usize {
        self.trade.symbol_count()
    }

    /// Number of filled cells of the trade half.
    pub fn volume(&self) -> usize {
        self.trade.len()
    }

    /// The same bitrade with the two halves exchanged.
    pub fn swapped(&self) -> Bitrade {
        Bitrade {
            trade: self.mate.clone(),
            mate: self.trade.clone(),
        }
    }

    /// Iterates over cells filled in both halves as `(cell, trade, mate)`.
    pub fn entry_pairs(&self) -> impl Iterator<Item = (Cell, Symbol, Symbol)> + '_ {
        self.trade
            .entries()
            .filter_map(|(c, t)| self.mate.get(c).map(|m| (c, t, m)))
    }

    fn occupied_rows(&self) -> BTreeSet<usize> {
        self.trade
            .support()
            .chain(self.mate.support())
            .map(|c| c.row)
            .collect()
    }

    fn occupied_cols(&self) -> BTreeSet<usize> {
        self.trade
            .support()
            .chain(self.mate.support())
            .map(|c| c.col)
            .collect()
    }

    /// True when no declared row or column is entirely empty.
    pub fn is_trimmed(&self) -> bool {
        self.occupied_rows().len() == self.rows() && self.occupied_cols().len() == self.cols()
    }

    /// Deletes empty rows and columns, compacting the remaining indices while
    /// preserving their order. Entries and symbols are untouched.
    pub fn trim(&self) -> Bitrade {
        let rows: Vec<usize> = self.occupied_rows().into_iter().collect();
        let cols: Vec<usize> = self.occupied_cols().into_iter().collect();
        let row_map: std::collections::BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &r)| (r, i + 1)).collect();
        let col_map: std::collections::BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i + 1)).collect();
        let remap = |p: &PartialLatinSquare| {
            let mut q = PartialLatinSquare::new(rows.len(), cols.len(), p.symbol_count());
            for (cell, sym) in p.entries() {
                q.insert(Cell::new(row_map[&cell.row], col_map[&cell.col]), sym)
                    .expect("remapped entries stay in range");
            }
            q
        };
        Bitrade {
            trade: remap(&self.trade),
            mate: remap(&self.mate),
        }
    }

    /// Returns `Some(k)` when every row and every column holds exactly `k`
    /// filled cells and every symbol occurs exactly `k` times in the trade
    /// half. Requires trimmed input; trimming is deliberately not implicit so
    /// that verification reports stay location-accurate.
    pub fn homogeneity(&self) -> Result<Option<usize>> {
        if !self.is_trimmed() {
            return Err(Error::Precondition(
                "homogeneity requires a trimmed bitrade (no empty rows or columns)".into(),
            ));
        }
        if self.rows() == 0 || self.volume() == 0 {
            return Ok(None);
        }
        let mut row_counts = vec![0usize; self.rows()];
        let mut col_counts = vec![0usize; self.cols()];
        let mut sym_counts = vec![0usize; self.symbol_count()];
        for (cell, sym) in self.trade.entries() {
            row_counts[cell.row - 1] += 1;
            col_counts[cell.col - 1] += 1;
            sym_counts[sym.0 - 1] += 1;
        }
        let k = row_counts[0];
        let uniform = row_counts.iter().all(|&c| c == k)
            && col_counts.iter().all(|&c| c == k)
            && sym_counts.iter().all(|&c| c == k);
        Ok(if uniform { Some(k) } else { None })
    }
}
