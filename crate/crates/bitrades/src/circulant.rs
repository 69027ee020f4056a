//! Base-row representation of circulant bitrades and the diagonal-shift
//! expansion. A base row lists the filled cells of the first row, each
//! holding a (top, bottom) symbol pair; the full grid is obtained by moving
//! every entry one step right and one symbol up per row, modulo `m`.

use std::collections::BTreeMap;

use crate::bitrade::Bitrade;
use crate::error::{Error, Result};
use crate::square::{Cell, PartialLatinSquare, Symbol};

/// Maps an integer into the 1-based residue range `1..=m`.
pub fn wrap(x: isize, m: usize) -> usize {
    (x - 1).rem_euclid(m as isize) as usize + 1
}

/// Increments a 1-based value by a non-negative delta, wrapping into `1..=m`.
pub fn wrap_add(x: usize, delta: usize, m: usize) -> usize {
    (x + delta - 1) % m + 1
}

/// Generator of a circulant bitrade: modulus `m` plus a set of first-row
/// cells, each holding a (top, bottom) pair with top != bottom.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseRow {
    m: usize,
    cells: BTreeMap<usize, (Symbol, Symbol)>,
}

impl BaseRow {
    /// Builds a base row from `(cell, top, bottom)` triples. Cell indices
    /// must be distinct and everything must lie in `1..=m`; top must differ
    /// from bottom in every cell.
    pub fn new(m: usize, triples: impl IntoIterator<Item = (usize, usize, usize)>) -> Result<Self> {
        if m < 1 {
            return Err(Error::Structural("modulus must be at least 1".into()));
        }
        let mut cells = BTreeMap::new();
        for (c, top, bottom) in triples {
            if c < 1 || c > m {
                return Err(Error::Structural(format!("cell index {c} outside 1..={m}")));
            }
            if top < 1 || top > m || bottom < 1 || bottom > m {
                return Err(Error::Structural(format!(
                    "symbols ({top},{bottom}) at cell {c} outside 1..={m}"
                )));
            }
            if top == bottom {
                return Err(Error::Structural(format!(
                    "cell {c} holds equal top and bottom symbol {top}"
                )));
            }
            if cells.insert(c, (Symbol(top), Symbol(bottom))).is_some() {
                return Err(Error::CellCollision { cell: c });
            }
        }
        Ok(BaseRow { m, cells })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of occupied cells.
    pub fn k(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &BTreeMap<usize, (Symbol, Symbol)> {
        &self.cells
    }

    /// Occupied cells as `(cell, top, bottom)` in cell order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.cells.iter().map(|(&c, &(t, b))| (c, t.0, b.0))
    }

    /// Expands to the full `m x m` bitrade: base cell `c` with pair `(i, j)`
    /// yields, in each row `r`, the cell `(r, c+r-1)` holding `(i+r-1, j+r-1)`,
    /// all modulo `m`. Expansion never fails, but validity of the result is
    /// not guaranteed; callers verify.
    pub fn expand(&self) -> Bitrade {
        let m = self.m;
        let mut trade = PartialLatinSquare::new(m, m, m);
        let mut mate = PartialLatinSquare::new(m, m, m);
        for r in 1..=m {
            for (&c, &(top, bottom)) in &self.cells {
                let cell = Cell::new(r, wrap_add(c, r - 1, m));
                trade
                    .insert(cell, Symbol(wrap_add(top.0, r - 1, m)))
                    .expect("diagonal shift keeps entries in range");
                mate.insert(cell, Symbol(wrap_add(bottom.0, r - 1, m)))
                    .expect("diagonal shift keeps entries in range");
            }
        }
        Bitrade::new(trade, mate).expect("halves share the m x m shape")
    }

    /// Translates every cell by `cell_delta` and both symbols of every pair
    /// by `symbol_delta`, modulo `m`. The expansion of the result is a cyclic
    /// relabeling of the original expansion, so verification status is
    /// invariant under shifts.
    pub fn shift(&self, cell_delta: isize, symbol_delta: isize) -> Result<BaseRow> {
        let m = self.m;
        let mut cells = BTreeMap::new();
        for (&c, &(top, bottom)) in &self.cells {
            let nc = wrap(c as isize + cell_delta, m);
            let pair = (
                Symbol(wrap(top.0 as isize + symbol_delta, m)),
                Symbol(wrap(bottom.0 as isize + symbol_delta, m)),
            );
            if cells.insert(nc, pair).is_some() {
                return Err(Error::CellCollision { cell: nc });
            }
        }
        Ok(BaseRow { m, cells })
    }
}

/// Disjoint union of base rows over the same modulus. Overlapping cell
/// indices are an error naming the colliding cell.
pub fn union(parts: &[BaseRow]) -> Result<BaseRow> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Precondition("union of zero base rows".into()))?;
    let m = first.m();
    let mut cells = BTreeMap::new();
    for part in parts {
        if part.m() != m {
            return Err(Error::Precondition(format!(
                "union over mixed moduli {m} and {}",
                part.m()
            )));
        }
        for (&c, &pair) in part.cells() {
            if cells.insert(c, pair).is_some() {
                return Err(Error::CellCollision { cell: c });
            }
        }
    }
    Ok(BaseRow { m, cells })
}
