//! Structural analysis: primariness, disjoint-mate search, minimality, and
//! exhaustive enumeration of small bitrades.
//!
//! All searches are budgeted and deterministic. Running out of budget is a
//! resource error, never a verdict.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitrade::Bitrade;
use crate::error::{Error, Result};
use crate::square::{Cell, PartialLatinSquare, Symbol};
use crate::verify::{verify_bitrade, verify_pls};

/// Default node budget for the bounded searches in this module.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    fn spend(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            Err(Error::Budget { nodes: self.used })
        } else {
            Ok(())
        }
    }
}

/// A nonempty proper subset of the support that is itself a bitrade.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubBitradeWitness {
    pub cells: BTreeSet<Cell>,
    pub restriction: Bitrade,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrimaryVerdict {
    Primary,
    NotPrimary(SubBitradeWitness),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MinimalVerdict {
    Minimal,
    NotMinimal(SubBitradeWitness),
}

fn require_valid(b: &Bitrade, what: &str) -> Result<()> {
    let report = verify_bitrade(b);
    if !report.valid() {
        return Err(Error::Precondition(format!(
            "{what} requires a valid bitrade: {}",
            report.summary()
        )));
    }
    Ok(())
}

fn restrict(p: &PartialLatinSquare, cells: &BTreeSet<Cell>) -> PartialLatinSquare {
    let mut q = PartialLatinSquare::new(p.rows(), p.cols(), p.symbol_count());
    for (cell, sym) in p.entries() {
        if cells.contains(&cell) {
            q.insert(cell, sym).expect("restriction stays in range");
        }
    }
    q
}

fn restriction_bitrade(b: &Bitrade, cells: &BTreeSet<Cell>) -> Bitrade {
    Bitrade::new(restrict(b.trade(), cells), restrict(b.mate(), cells))
        .expect("halves keep their shared shape")
}

/// Decides whether a valid bitrade contains a proper nonempty sub-bitrade.
///
/// A subset of the support is row- and column-balanced exactly when it is
/// closed under the forced chase: a selected cell whose trade holds symbol
/// `s` in row `r` forces the unique cell holding `s` in the mate of row `r`,
/// and conversely; likewise per column. For a valid bitrade the forced cell
/// is always unique, so balanced subsets are precisely unions of the closure
/// classes, and the bitrade is primary exactly when a single class covers
/// the whole support. On a negative verdict the smallest class is returned
/// as a witness.
pub fn is_primary(b: &Bitrade, node_budget: u64) -> Result<PrimaryVerdict> {
    require_valid(b, "is_primary")?;
    let mut budget = Budget::new(node_budget);
    let cells: Vec<Cell> = b.trade().support().collect();
    if cells.is_empty() {
        return Ok(PrimaryVerdict::Primary);
    }
    // trade/mate occurrence tables per row and per column
    let mut row_trade: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut row_mate: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut col_trade: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    let mut col_mate: BTreeMap<(usize, Symbol), usize> = BTreeMap::new();
    for (i, &cell) in cells.iter().enumerate() {
        let t = b.trade().get(cell).expect("support cell");
        let m = b.mate().get(cell).expect("equal support");
        row_trade.insert((cell.row, t), i);
        row_mate.insert((cell.row, m), i);
        col_trade.insert((cell.col, t), i);
        col_mate.insert((cell.col, m), i);
    }

    let mut component = vec![usize::MAX; cells.len()];
    let mut comp_count = 0usize;
    for start in 0..cells.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = comp_count;
        comp_count += 1;
        let mut stack = vec![start];
        component[start] = id;
        while let Some(i) = stack.pop() {
            budget.spend(1)?;
            let cell = cells[i];
            let t = b.trade().get(cell).expect("support cell");
            let m = b.mate().get(cell).expect("equal support");
            let forced = [
                row_mate.get(&(cell.row, t)),
                row_trade.get(&(cell.row, m)),
                col_mate.get(&(cell.col, t)),
                col_trade.get(&(cell.col, m)),
            ];
            for j in forced.into_iter().flatten() {
                if component[*j] == usize::MAX {
                    component[*j] = id;
                    stack.push(*j);
                }
            }
        }
    }

    if comp_count == 1 {
        return Ok(PrimaryVerdict::Primary);
    }
    let mut sizes = vec![0usize; comp_count];
    for &c in &component {
        sizes[c] += 1;
    }
    let smallest = (0..comp_count)
        .min_by_key(|&id| (sizes[id], id))
        .expect("at least two classes");
    let witness_cells: BTreeSet<Cell> = cells
        .iter()
        .enumerate()
        .filter(|(i, _)| component[*i] == smallest)
        .map(|(_, &c)| c)
        .collect();
    let restriction = restriction_bitrade(b, &witness_cells);
    Ok(PrimaryVerdict::NotPrimary(SubBitradeWitness {
        cells: witness_cells,
        restriction,
    }))
}

fn find_mate_budgeted(
    t: &PartialLatinSquare,
    budget: &mut Budget,
) -> Result<Option<PartialLatinSquare>> {
    let cells: Vec<Cell> = t.support().collect();
    let mut row_syms: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut col_syms: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (cell, sym) in t.entries() {
        row_syms.entry(cell.row).or_default().insert(sym.0);
        col_syms.entry(cell.col).or_default().insert(sym.0);
    }
    let mut used_row: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut used_col: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(cells.len());

    // Depth-first over cells in (row, col) order; candidates must appear in
    // both the row's and the column's trade symbols, differ from the trade
    // entry, and respect mate row/column uniqueness. A complete assignment
    // is then automatically balanced: each line receives as many distinct
    // mate symbols from its trade symbol set as it has cells.
    fn dfs(
        idx: usize,
        cells: &[Cell],
        t: &PartialLatinSquare,
        row_syms: &BTreeMap<usize, BTreeSet<usize>>,
        col_syms: &BTreeMap<usize, BTreeSet<usize>>,
        used_row: &mut BTreeMap<usize, BTreeSet<usize>>,
        used_col: &mut BTreeMap<usize, BTreeSet<usize>>,
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<bool> {
        if idx == cells.len() {
            return Ok(true);
        }
        let cell = cells[idx];
        let trade_here = t.get(cell).expect("support cell").0;
        let candidates: Vec<usize> = row_syms[&cell.row]
            .intersection(&col_syms[&cell.col])
            .copied()
            .filter(|&s| s != trade_here)
            .filter(|s| !used_row.get(&cell.row).is_some_and(|u| u.contains(s)))
            .filter(|s| !used_col.get(&cell.col).is_some_and(|u| u.contains(s)))
            .collect();
        for s in candidates {
            budget.spend(1)?;
            used_row.entry(cell.row).or_default().insert(s);
            used_col.entry(cell.col).or_default().insert(s);
            chosen.push(s);
            if dfs(idx + 1, cells, t, row_syms, col_syms, used_row, used_col, chosen, budget)? {
                return Ok(true);
            }
            chosen.pop();
            used_row.get_mut(&cell.row).unwrap().remove(&s);
            used_col.get_mut(&cell.col).unwrap().remove(&s);
        }
        Ok(false)
    }

    if dfs(
        0, &cells, t, &row_syms, &col_syms, &mut used_row, &mut used_col, &mut chosen, budget,
    )? {
        let mut mate = PartialLatinSquare::new(t.rows(), t.cols(), t.symbol_count());
        for (cell, s) in cells.iter().zip(chosen) {
            mate.insert(*cell, Symbol(s)).expect("mate stays in range");
        }
        Ok(Some(mate))
    } else {
        Ok(None)
    }
}

/// Searches for a disjoint mate of a partial Latin square: a square on the
/// same support, differing in every cell, row- and column-balanced against
/// the input. Returns `None` only after exhausting the finite search space.
pub fn find_disjoint_mate(
    t: &PartialLatinSquare,
    node_budget: u64,
) -> Result<Option<PartialLatinSquare>> {
    let report = verify_pls(t);
    if !report.valid() {
        return Err(Error::Precondition(format!(
            "find_disjoint_mate requires a partial Latin square: {}",
            report.summary()
        )));
    }
    let mut budget = Budget::new(node_budget);
    find_mate_budgeted(t, &mut budget)
}

/// Decides whether any proper nonempty subset of the trade half admits a
/// disjoint mate. Subsets are enumerated as bitmasks over the support in
/// ascending order, pruned by the necessary condition that no row or column
/// may keep exactly one selected cell.
pub fn is_minimal(b: &Bitrade, node_budget: u64) -> Result<MinimalVerdict> {
    require_valid(b, "is_minimal")?;
    let v = b.volume();
    if v > 63 {
        return Err(Error::Precondition(format!(
            "is_minimal is an exhaustive check, volume {v} exceeds the supported 63"
        )));
    }
    let mut budget = Budget::new(node_budget);
    let cells: Vec<Cell> = b.trade().support().collect();
    let full: u64 = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
    'mask: for mask in 1..full {
        budget.spend(1)?;
        let mut row_counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut col_counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, cell) in cells.iter().enumerate() {
            if mask & (1 << i) != 0 {
                *row_counts.entry(cell.row).or_insert(0) += 1;
                *col_counts.entry(cell.col).or_insert(0) += 1;
            }
        }
        if row_counts.values().chain(col_counts.values()).any(|&c| c == 1) {
            continue 'mask;
        }
        let subset: BTreeSet<Cell> = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &c)| c)
            .collect();
        let selected = restrict(b.trade(), &subset);
        if let Some(mate) = find_mate_budgeted(&selected, &mut budget)? {
            let restriction = Bitrade::new(selected, mate).expect("shapes agree");
            return Ok(MinimalVerdict::NotMinimal(SubBitradeWitness {
                cells: subset,
                restriction,
            }));
        }
    }
    Ok(MinimalVerdict::Minimal)
}

/// Constraints for [`enumerate_bitrades`].
#[derive(Clone, Debug, Default)]
pub struct EnumParams {
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
    /// Require every row and column to hold exactly this many cells and
    /// every symbol to occur exactly this often in the trade half.
    pub homogeneity: Option<usize>,
    pub volume: Option<usize>,
}

/// Exhaustively enumerates every valid bitrade on the given grid satisfying
/// the constraints, in canonical (cell-major, pair-lexicographic) order.
///
/// The search places `(trade, mate)` pairs cell by cell and re-checks the
/// definitional conditions incrementally; it shares no code with
/// [`verify_bitrade`], which lets the two act as independent oracles for
/// each other.
pub fn enumerate_bitrades(p: &EnumParams, node_budget: u64) -> Result<Vec<Bitrade>> {
    if p.symbols > 63 {
        return Err(Error::Precondition("enumeration supports at most 63 symbols".into()));
    }
    if let (Some(k), Some(v)) = (p.homogeneity, p.volume) {
        if k * p.rows != v {
            return Ok(Vec::new());
        }
    }
    let mut budget = Budget::new(node_budget);
    let mut state = EnumState {
        p: p.clone(),
        grid: vec![None; p.rows * p.cols],
        trade_row: vec![0; p.rows + 1],
        mate_row: vec![0; p.rows + 1],
        trade_col: vec![0; p.cols + 1],
        mate_col: vec![0; p.cols + 1],
        row_count: vec![0; p.rows + 1],
        col_count: vec![0; p.cols + 1],
        sym_count: vec![0; p.symbols + 1],
        volume: 0,
        out: Vec::new(),
    };
    enum_dfs(0, &mut state, &mut budget)?;
    Ok(state.out)
}

struct EnumState {
    p: EnumParams,
    grid: Vec<Option<(usize, usize)>>,
    trade_row: Vec<u64>,
    mate_row: Vec<u64>,
    trade_col: Vec<u64>,
    mate_col: Vec<u64>,
    row_count: Vec<usize>,
    col_count: Vec<usize>,
    sym_count: Vec<usize>,
    volume: usize,
    out: Vec<Bitrade>,
}

fn enum_dfs(idx: usize, st: &mut EnumState, budget: &mut Budget) -> Result<()> {
    let (rows, cols, symbols) = (st.p.rows, st.p.cols, st.p.symbols);
    if idx == rows * cols {
        if let Some(v) = st.p.volume {
            if st.volume != v {
                return Ok(());
            }
        }
        if let Some(k) = st.p.homogeneity {
            if st.sym_count[1..=symbols].iter().any(|&c| c != k) {
                return Ok(());
            }
        }
        let grid: Vec<Vec<Option<(usize, usize)>>> = (0..rows)
            .map(|r| st.grid[r * cols..(r + 1) * cols].to_vec())
            .collect();
        st.out
            .push(Bitrade::from_pair_rows(symbols, &grid).expect("enumerated entries are in range"));
        return Ok(());
    }
    let (r, c) = (idx / cols + 1, idx % cols + 1);

    let cells_left_after = rows * cols - idx - 1;
    let volume_ok = |vol: usize, p: &EnumParams| match p.volume {
        Some(v) => vol <= v && vol + cells_left_after >= v,
        None => true,
    };
    // Line-capacity pruning for the homogeneity target: the cells left in
    // this row (column) must still be able to reach the quota.
    let line_feasible = |st: &EnumState, placed_here: usize| match st.p.homogeneity {
        Some(k) => {
            let row_now = st.row_count[r] + placed_here;
            let col_now = st.col_count[c] + placed_here;
            row_now <= k
                && col_now <= k
                && k - row_now <= cols - c
                && k - col_now <= rows - r
        }
        None => true,
    };
    let end_of_row = c == cols;
    let end_of_col = r == rows;

    // Option: leave the cell empty.
    budget.spend(1)?;
    if volume_ok(st.volume, &st.p) && line_feasible(st, 0) {
        let row_ok = !end_of_row
            || (st.trade_row[r] == st.mate_row[r]
                && st.p.homogeneity.is_none_or(|k| st.row_count[r] == k));
        let col_ok = !end_of_col
            || (st.trade_col[c] == st.mate_col[c]
                && st.p.homogeneity.is_none_or(|k| st.col_count[c] == k));
        if row_ok && col_ok {
            enum_dfs(idx + 1, st, budget)?;
        }
    }

    // Option: place a (trade, mate) pair.
    if !volume_ok(st.volume + 1, &st.p) || !line_feasible(st, 1) {
        return Ok(());
    }
    for t in 1..=symbols {
        let tbit = 1u64 << t;
        if st.trade_row[r] & tbit != 0 || st.trade_col[c] & tbit != 0 {
            continue;
        }
        if let Some(k) = st.p.homogeneity {
            if st.sym_count[t] >= k {
                continue;
            }
        }
        for mte in 1..=symbols {
            if mte == t {
                continue;
            }
            let mbit = 1u64 << mte;
            if st.mate_row[r] & mbit != 0 || st.mate_col[c] & mbit != 0 {
                continue;
            }
            budget.spend(1)?;
            st.grid[idx] = Some((t, mte));
            st.trade_row[r] |= tbit;
            st.trade_col[c] |= tbit;
            st.mate_row[r] |= mbit;
            st.mate_col[c] |= mbit;
            st.row_count[r] += 1;
            st.col_count[c] += 1;
            st.sym_count[t] += 1;
            st.volume += 1;

            let row_ok = !end_of_row
                || (st.trade_row[r] == st.mate_row[r]
                    && st.p.homogeneity.is_none_or(|k| st.row_count[r] == k));
            let col_ok = !end_of_col
                || (st.trade_col[c] == st.mate_col[c]
                    && st.p.homogeneity.is_none_or(|k| st.col_count[c] == k));
            if row_ok && col_ok {
                enum_dfs(idx + 1, st, budget)?;
            }

            st.grid[idx] = None;
            st.trade_row[r] &= !tbit;
            st.trade_col[c] &= !tbit;
            st.mate_row[r] &= !mbit;
            st.mate_col[c] &= !mbit;
            st.row_count[r] -= 1;
            st.col_count[c] -= 1;
            st.sym_count[t] -= 1;
            st.volume -= 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{direct_sum, intercalate, odd_base_row};

    const B: u64 = DEFAULT_NODE_BUDGET;

    #[test]
    fn intercalate_is_primary() {
        assert_eq!(is_primary(&intercalate(), B).unwrap(), PrimaryVerdict::Primary);
    }

    #[test]
    fn sum_of_intercalates_is_not_primary_with_block_witness() {
        let b = direct_sum(&[intercalate(), intercalate()]).unwrap();
        match is_primary(&b, B).unwrap() {
            PrimaryVerdict::NotPrimary(w) => {
                assert_eq!(w.cells.len(), 4);
                assert!(verify_bitrade(&w.restriction).valid());
            }
            PrimaryVerdict::Primary => panic!("expected a witness"),
        }
    }

    #[test]
    fn circulant_three_hom_is_primary() {
        let b = odd_base_row(3, 5).unwrap().expand();
        assert_eq!(is_primary(&b, B).unwrap(), PrimaryVerdict::Primary);
    }

    #[test]
    fn primary_budget_error_is_distinct() {
        let b = odd_base_row(3, 5).unwrap().expand();
        assert!(matches!(is_primary(&b, 2), Err(Error::Budget { .. })));
    }

    #[test]
    fn mate_found_for_intercalate_half() {
        let mate = find_disjoint_mate(intercalate().trade(), B).unwrap().unwrap();
        let b = Bitrade::new(intercalate().trade().clone(), mate).unwrap();
        assert!(verify_bitrade(&b).valid());
    }

    #[test]
    fn lone_cell_has_no_mate() {
        let p = PartialLatinSquare::from_rows(2, &[vec![Some(1), None], vec![None, None]]).unwrap();
        assert_eq!(find_disjoint_mate(&p, B).unwrap(), None);
    }

    #[test]
    fn mate_found_for_circulant_trade() {
        let b = odd_base_row(3, 5).unwrap().expand();
        let mate = find_disjoint_mate(b.trade(), B).unwrap().unwrap();
        let rebuilt = Bitrade::new(b.trade().clone(), mate).unwrap();
        assert!(verify_bitrade(&rebuilt).valid());
    }

    #[test]
    fn intercalate_is_minimal() {
        assert_eq!(is_minimal(&intercalate(), B).unwrap(), MinimalVerdict::Minimal);
    }

    #[test]
    fn sum_of_intercalates_is_not_minimal() {
        let b = direct_sum(&[intercalate(), intercalate()]).unwrap();
        match is_minimal(&b, B).unwrap() {
            MinimalVerdict::NotMinimal(w) => {
                assert!(verify_bitrade(&w.restriction).valid());
                assert!(w.cells.len() < b.volume());
            }
            MinimalVerdict::Minimal => panic!("expected a witness"),
        }
    }

    #[test]
    fn enumerate_2x2_volume_4() {
        let p = EnumParams {
            rows: 2,
            cols: 2,
            symbols: 2,
            homogeneity: None,
            volume: Some(4),
        };
        let found = enumerate_bitrades(&p, B).unwrap();
        assert_eq!(found, vec![intercalate(), intercalate().swapped()]);
    }

    #[test]
    fn enumerate_3x3_two_homogeneous_is_empty() {
        let p = EnumParams {
            rows: 3,
            cols: 3,
            symbols: 3,
            homogeneity: Some(2),
            volume: None,
        };
        assert!(enumerate_bitrades(&p, B).unwrap().is_empty());
    }

    #[test]
    fn enumerate_4x4_two_homogeneous_volume_8_contains_block_sum() {
        let p = EnumParams {
            rows: 4,
            cols: 4,
            symbols: 4,
            homogeneity: Some(2),
            volume: Some(8),
        };
        let found = enumerate_bitrades(&p, B).unwrap();
        assert!(!found.is_empty());
        let block = direct_sum(&[intercalate(), intercalate()]).unwrap();
        assert!(found.contains(&block));
        for b in &found {
            assert!(verify_bitrade(b).valid());
            assert_eq!(b.homogeneity().unwrap(), Some(2));
        }
    }
}
