//! Explicit constructors of k-homogeneous bitrades: circulant base rows for
//! odd k, for k = 4, for even k at m >= 3k/2 and m >= k+u, the seven-case
//! base row for m = k+3, the blow-up product, block-diagonal direct sums,
//! and small plumbing constructors.

use std::collections::BTreeMap;

use crate::bitrade::Bitrade;
use crate::circulant::{union, wrap, wrap_add, BaseRow};
use crate::error::{Error, Result};
use crate::square::{Cell, PartialLatinSquare, Symbol};
use crate::verify::verify_bitrade;

/// Base row of a circulant k-homogeneous bitrade of volume `k*m` for odd
/// `k = 2l+1 >= 3` and any `m >= k`: cell `2i-1` holds `(l+i, i)` for
/// `i = 1..=l+1` and cell `2i` holds `(i, l+1+i)` for `i = 1..=l`.
pub fn odd_base_row(k: usize, m: usize) -> Result<BaseRow> {
    if k % 2 == 0 || k < 3 {
        return Err(Error::Precondition(format!("k={k} must be odd and >= 3")));
    }
    if m < k {
        return Err(Error::Precondition(format!("m={m} must be at least k={k}")));
    }
    let l = (k - 1) / 2;
    let mut triples = Vec::with_capacity(k);
    for i in 1..=l + 1 {
        triples.push((2 * i - 1, l + i, i));
    }
    for i in 1..=l {
        triples.push((2 * i, i, l + 1 + i));
    }
    BaseRow::new(m, triples)
}

/// Base row of a circulant 4-homogeneous bitrade of volume `4m` for `m > 4`:
/// `{(3,2)_1, (1,4)_2, (4,1)_3, (2,3)_4}`.
pub fn four_hom_base_row(m: usize) -> Result<BaseRow> {
    if m <= 4 {
        return Err(Error::Precondition(format!("m={m} must exceed 4")));
    }
    BaseRow::new(m, [(1, 3, 2), (2, 1, 4), (3, 4, 1), (4, 2, 3)])
}

/// Base row for even `k = 2a > 4` and `m >= 3k/2`: the odd base row with
/// `l = a-2` extended by the three cells
/// `(3a-1,3a-2)_{2a-2}, (3a-2,3a)_{2a-1}, (3a,3a-1)_{2a}`.
pub fn even_three_halves_base_row(k: usize, m: usize) -> Result<BaseRow> {
    if k % 2 != 0 || k <= 4 {
        return Err(Error::Precondition(format!("k={k} must be even and > 4")));
    }
    if 2 * m < 3 * k {
        return Err(Error::Precondition(format!("m={m} must be at least 3k/2 = {}", (3 * k).div_ceil(2))));
    }
    let a = k / 2;
    let odd_part = odd_base_row(2 * (a - 2) + 1, m)?;
    let tail = BaseRow::new(
        m,
        [
            (2 * a - 2, 3 * a - 1, 3 * a - 2),
            (2 * a - 1, 3 * a - 2, 3 * a),
            (2 * a, 3 * a, 3 * a - 1),
        ],
    )?;
    union(&[odd_part, tail])
}

/// Base row for even `k > 2` and `m >= k+u`, where `u` is an odd divisor of
/// `k` greater than 1. With `u = 2l+1` and `s = k/(2u)`, the row is the union
/// of the shifted copies `B(r)` for `r = 1..=s+1` (cells +`(r-1)u`, symbols
/// +`2(r-1)u`) and `C(r)` for `r = 1..=s-1` (cells +`k/2 + ru`, symbols
/// +`(2r-1)u`) of the odd base row for `u`. The union occupies cells `1..=k`
/// exactly; this is asserted, not assumed.
pub fn even_k_plus_u_base_row(k: usize, u: usize, m: usize) -> Result<BaseRow> {
    if k % 2 != 0 || k <= 2 {
        return Err(Error::Precondition(format!("k={k} must be even and > 2")));
    }
    if u % 2 == 0 || u <= 1 || k % u != 0 {
        return Err(Error::Precondition(format!(
            "u={u} must be an odd divisor of k={k} greater than 1"
        )));
    }
    if k % (2 * u) != 0 {
        return Err(Error::Precondition(format!("k={k} must be divisible by 2u={}", 2 * u)));
    }
    if m < k + u {
        return Err(Error::Precondition(format!("m={m} must be at least k+u={}", k + u)));
    }
    let s = k / (2 * u);
    let base = odd_base_row(u, m)?;
    let mut parts = Vec::new();
    for r in 1..=s + 1 {
        let cell_delta = ((r - 1) * u) as isize;
        parts.push(base.shift(cell_delta, 2 * cell_delta)?);
    }
    for r in 1..=s.saturating_sub(1) {
        let cell_delta = (k / 2 + r * u) as isize;
        let sym_delta = ((2 * r - 1) * u) as isize;
        parts.push(base.shift(cell_delta, sym_delta)?);
    }
    let row = union(&parts)?;
    let expected: Vec<usize> = (1..=k).collect();
    let got: Vec<usize> = row.cells().keys().copied().collect();
    if got != expected {
        return Err(Error::Integrity {
            context: format!("even_k_plus_u(k={k}, u={u}, m={m}) cell layout"),
            report: verify_bitrade(&row.expand()),
        });
    }
    Ok(row)
}

/// Which of the two first-row patterns a residue class uses.
enum RowType {
    I,
    II,
}

/// Base row of a circulant k-homogeneous bitrade of volume `k(k+3)`.
///
/// Odd `k` reduces to [`odd_base_row`]. For even `k = 2l` the trade first row
/// follows one of two patterns (both put `i` in cell `2i-1` and `l+2+i` in
/// cell `2i` for `i < l`; Type I adds `l` in cell `k-1` and `l+2` in cell
/// `m`, Type II adds `l+1` in cell `k` and `l+2` in cell `m`), and the mate
/// first row is filled by three rules chosen by `k mod 7`: an `a+4 (mod m)`
/// rule on a periodic family of cells, explicit entries in two or three
/// special cells, and a copy-from-the-next-cell rule everywhere else.
///
/// The result is expanded and verified before being returned; any violation
/// is escalated as an integrity error carrying the report.
pub fn k_plus_3_base_row(k: usize) -> Result<BaseRow> {
    if k % 2 == 1 && k >= 3 {
        return odd_base_row(k, k + 3);
    }
    if k % 2 != 0 || k < 4 {
        return Err(Error::Precondition(format!("k={k} must be at least 3")));
    }
    let l = k / 2;
    let m = k + 3;

    let mut trade: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 1..=l - 1 {
        trade.insert(2 * i - 1, i);
        trade.insert(2 * i, l + 2 + i);
    }
    let row_type = match k % 7 {
        3 | 4 => RowType::II,
        _ => RowType::I,
    };
    match row_type {
        RowType::I => {
            trade.insert(k - 1, l);
            trade.insert(m, l + 2);
        }
        RowType::II => {
            trade.insert(k, l + 1);
            trade.insert(m, l + 2);
        }
    }

    // Residues select the periodic cells that take `trade + 4 (mod m)` and
    // the explicit special entries.
    let (periodic_residues, specials): (&[usize], Vec<(usize, usize)>) = match k % 7 {
        1 => (&[3], vec![(k - 1, 1), (m, l + 4)]),
        2 => (&[4], vec![(k - 1, 1), (m, 3)]),
        3 => (&[3], vec![(k - 2, 1), (k, l + 2), (m, l + 4)]),
        4 => (&[4], vec![(k - 2, 1), (k, l + 2), (m, 3)]),
        5 => (&[1, 2, 3], vec![(k - 1, l + 2), (m, l + 4)]),
        6 => (&[2, 4], vec![(k - 1, l + 2), (m, 3)]),
        0 => (&[3], vec![(k - 1, l + 2), (m, l + 4)]),
        _ => unreachable!(),
    };

    let mut mate: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in periodic_residues {
        let mut c = r;
        while c < k {
            if let Some(&a) = trade.get(&c) {
                mate.insert(c, wrap_add(a, 4, m));
            }
            c += 7;
        }
    }
    for (c, v) in specials {
        mate.insert(c, v);
    }
    let integrity = |detail: String, row: &BaseRow| Error::Integrity {
        context: format!("k_plus_3(k={k}): {detail}"),
        report: verify_bitrade(&row.expand()),
    };
    for (&c, _) in &trade {
        if !mate.contains_key(&c) {
            // The copy rule reads the trade row at c+1 without wraparound;
            // the patterns keep that cell filled for every residual cell.
            match trade.get(&(c + 1)) {
                Some(&v) => {
                    mate.insert(c, v);
                }
                None => {
                    return Err(Error::Precondition(format!(
                        "k_plus_3(k={k}): copy rule hit empty cell {}",
                        c + 1
                    )))
                }
            }
        }
    }

    let triples: Vec<(usize, usize, usize)> = trade
        .iter()
        .map(|(&c, &t)| (c, t, *mate.get(&c).expect("mate row covers the trade support")))
        .collect();
    let row = BaseRow::new(m, triples)?;
    let report = verify_bitrade(&row.expand());
    if !report.valid() {
        return Err(integrity("expansion failed verification".into(), &row));
    }
    Ok(row)
}

fn require_homogeneous(b: &Bitrade, role: &str) -> Result<usize> {
    let report = verify_bitrade(b);
    if !report.valid() {
        return Err(Error::Precondition(format!(
            "{role} input is not a valid bitrade: {}",
            report.summary()
        )));
    }
    if !b.is_trimmed() {
        return Err(Error::Precondition(format!("{role} input is not trimmed")));
    }
    b.homogeneity()?
        .ok_or_else(|| Error::Precondition(format!("{role} input is not homogeneous")))
}

/// Blow-up product. Every filled outer cell `(R, C)` with trade symbol `a`
/// and mate symbol `b` becomes an `n x n` block whose trade entries are the
/// inner trade pattern relabeled into symbols `(a-1)n+1..=an` and whose mate
/// entries are the *same* inner trade pattern relabeled into `(b-1)n+1..=bn`;
/// empty outer cells become empty blocks. From a k-homogeneous outer of
/// volume `km` and an l-homogeneous inner of volume `ln` this yields a
/// kl-homogeneous bitrade of volume `(kl)(mn)`.
pub fn product(outer: &Bitrade, inner: &Bitrade) -> Result<Bitrade> {
    require_homogeneous(outer, "outer")?;
    require_homogeneous(inner, "inner")?;
    let n = inner.rows();
    let rows = outer.rows() * n;
    let cols = outer.cols() * n;
    let symbols = outer.symbol_count() * n;
    let mut trade = PartialLatinSquare::new(rows, cols, symbols);
    let mut mate = PartialLatinSquare::new(rows, cols, symbols);
    for (outer_cell, a, b) in outer.entry_pairs() {
        let row0 = (outer_cell.row - 1) * n;
        let col0 = (outer_cell.col - 1) * n;
        for (inner_cell, s) in inner.trade().entries() {
            let cell = Cell::new(row0 + inner_cell.row, col0 + inner_cell.col);
            trade
                .insert(cell, Symbol((a.0 - 1) * n + s.0))
                .expect("blocks are disjoint");
            mate.insert(cell, Symbol((b.0 - 1) * n + s.0))
                .expect("blocks are disjoint");
        }
    }
    Bitrade::new(trade, mate)
}

/// Block-diagonal union on disjoint row, column and symbol ranges. Volume is
/// additive; the result is k-homogeneous exactly when all parts are.
pub fn direct_sum(parts: &[Bitrade]) -> Result<Bitrade> {
    if parts.is_empty() {
        return Err(Error::Precondition("direct sum of zero bitrades".into()));
    }
    for (i, p) in parts.iter().enumerate() {
        let report = verify_bitrade(p);
        if !report.valid() {
            return Err(Error::Precondition(format!(
                "part {i} is not a valid bitrade: {}",
                report.summary()
            )));
        }
    }
    let rows: usize = parts.iter().map(|p| p.rows()).sum();
    let cols: usize = parts.iter().map(|p| p.cols()).sum();
    let symbols: usize = parts.iter().map(|p| p.symbol_count()).sum();
    let mut trade = PartialLatinSquare::new(rows, cols, symbols);
    let mut mate = PartialLatinSquare::new(rows, cols, symbols);
    let (mut row0, mut col0, mut sym0) = (0, 0, 0);
    for p in parts {
        for (cell, t, m) in p.entry_pairs() {
            let cell = Cell::new(row0 + cell.row, col0 + cell.col);
            trade
                .insert(cell, Symbol(sym0 + t.0))
                .expect("blocks are disjoint");
            mate.insert(cell, Symbol(sym0 + m.0))
                .expect("blocks are disjoint");
        }
        row0 += p.rows();
        col0 += p.cols();
        sym0 += p.symbol_count();
    }
    Bitrade::new(trade, mate)
}

/// The 2x2 bitrade on symbols {1, 2}: the smallest bitrade (volume 4).
pub fn intercalate() -> Bitrade {
    Bitrade::from_pair_rows(
        2,
        &[
            vec![Some((1, 2)), Some((2, 1))],
            vec![Some((2, 1)), Some((1, 2))],
        ],
    )
    .expect("the intercalate is well-formed")
}

/// The full k x k cyclic addition table paired with its shift by one symbol:
/// a k-homogeneous bitrade of volume k^2. Covers m = k, which no base-row
/// constructor reaches.
pub fn cyclic_pair(k: usize) -> Result<Bitrade> {
    if k < 2 {
        return Err(Error::Precondition(format!("k={k} must be at least 2")));
    }
    let mut trade = PartialLatinSquare::new(k, k, k);
    let mut mate = PartialLatinSquare::new(k, k, k);
    for r in 1..=k {
        for c in 1..=k {
            let s = wrap((r + c - 1) as isize, k);
            trade
                .insert(Cell::new(r, c), Symbol(s))
                .expect("full grid stays in range");
            mate.insert(Cell::new(r, c), Symbol(wrap_add(s, 1, k)))
                .expect("full grid stays in range");
        }
    }
    Bitrade::new(trade, mate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_k_hom(b: &Bitrade, k: usize, volume: usize) {
        let report = verify_bitrade(b);
        assert!(report.valid(), "{}", report.summary());
        assert_eq!(b.volume(), volume);
        assert_eq!(b.homogeneity().unwrap(), Some(k));
    }

    #[test]
    fn odd_base_row_k3_m5_matches_known_row() {
        let b = odd_base_row(3, 5).unwrap();
        assert_eq!(b, BaseRow::new(5, [(1, 2, 1), (2, 1, 3), (3, 3, 2)]).unwrap());
    }

    #[test]
    fn odd_base_row_k5_m5_cells() {
        let b = odd_base_row(5, 5).unwrap();
        let triples: Vec<_> = b.triples().collect();
        assert_eq!(
            triples,
            vec![(1, 3, 1), (2, 1, 4), (3, 4, 2), (4, 2, 5), (5, 5, 3)]
        );
        assert_k_hom(&b.expand(), 5, 25);
    }

    #[test]
    fn odd_base_row_large_m_verifies() {
        let b = odd_base_row(3, 100).unwrap();
        assert_k_hom(&b.expand(), 3, 300);
    }

    #[test]
    fn odd_base_row_uses_cells_and_symbols_one_to_k() {
        for (k, m) in [(3, 5), (5, 9), (7, 7), (9, 20)] {
            let b = odd_base_row(k, m).unwrap();
            let cells: Vec<usize> = b.cells().keys().copied().collect();
            assert_eq!(cells, (1..=k).collect::<Vec<_>>());
            let mut tops: Vec<usize> = b.triples().map(|(_, t, _)| t).collect();
            tops.sort_unstable();
            assert_eq!(tops, (1..=k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn odd_base_row_preconditions() {
        assert!(odd_base_row(4, 9).is_err());
        assert!(odd_base_row(5, 4).is_err());
        assert!(odd_base_row(1, 3).is_err());
    }

    #[test]
    fn four_hom_small_moduli() {
        assert!(four_hom_base_row(4).is_err());
        assert_k_hom(&four_hom_base_row(5).unwrap().expand(), 4, 20);
        assert_k_hom(&four_hom_base_row(6).unwrap().expand(), 4, 24);
    }

    #[test]
    fn three_halves_k6_m9_matches_union_form() {
        let b = even_three_halves_base_row(6, 9).unwrap();
        let expected = BaseRow::new(
            9,
            [(1, 2, 1), (2, 1, 3), (3, 3, 2), (4, 8, 7), (5, 7, 9), (6, 9, 8)],
        )
        .unwrap();
        assert_eq!(b, expected);
        assert_k_hom(&b.expand(), 6, 54);
    }

    #[test]
    fn three_halves_k8_m12_verifies() {
        assert_k_hom(&even_three_halves_base_row(8, 12).unwrap().expand(), 8, 96);
    }

    #[test]
    fn three_halves_preconditions() {
        assert!(even_three_halves_base_row(6, 8).is_err());
        assert!(even_three_halves_base_row(4, 12).is_err());
        assert!(even_three_halves_base_row(7, 12).is_err());
    }

    #[test]
    fn k_plus_u_k6_u3_is_two_shifted_copies() {
        let b = even_k_plus_u_base_row(6, 3, 9).unwrap();
        let cells: Vec<usize> = b.cells().keys().copied().collect();
        assert_eq!(cells, vec![1, 2, 3, 4, 5, 6]);
        assert_k_hom(&b.expand(), 6, 54);
    }

    #[test]
    fn k_plus_u_k12_u3_verifies() {
        let b = even_k_plus_u_base_row(12, 3, 15).unwrap();
        assert_k_hom(&b.expand(), 12, 180);
    }

    #[test]
    fn k_plus_u_preconditions() {
        assert!(even_k_plus_u_base_row(12, 3, 14).is_err());
        assert!(even_k_plus_u_base_row(12, 2, 20).is_err());
        assert!(even_k_plus_u_base_row(12, 5, 20).is_err());
        assert!(even_k_plus_u_base_row(16, 3, 30).is_err());
    }

    #[test]
    fn k_plus_3_even_sweep() {
        for k in (4..=38).step_by(2) {
            let b = k_plus_3_base_row(k).unwrap_or_else(|e| panic!("k={k}: {e}"));
            assert_eq!(b.m(), k + 3);
            assert_eq!(b.k(), k);
            assert_k_hom(&b.expand(), k, k * (k + 3));
        }
    }

    #[test]
    fn k_plus_3_odd_redirects() {
        assert_eq!(k_plus_3_base_row(5).unwrap(), odd_base_row(5, 8).unwrap());
    }

    #[test]
    fn k_plus_3_rejects_k2() {
        assert!(k_plus_3_base_row(2).is_err());
    }

    #[test]
    fn product_of_intercalates() {
        let p = product(&intercalate(), &intercalate()).unwrap();
        assert_eq!(p.rows(), 4);
        assert_k_hom(&p, 4, 16);
    }

    #[test]
    fn product_measures_multiply() {
        let outer = odd_base_row(3, 5).unwrap().expand();
        let p = product(&outer, &intercalate()).unwrap();
        assert_k_hom(&p, 6, 60);
    }

    #[test]
    fn product_rejects_single_cell_inner() {
        let outer = intercalate();
        let inner = Bitrade::from_pair_rows(1, &[vec![None]]).unwrap();
        assert!(product(&outer, &inner).is_err());
        let lone = Bitrade::from_pair_rows(2, &[vec![Some((1, 2))]]).unwrap();
        assert!(product(&outer, &lone).is_err());
    }

    #[test]
    fn direct_sum_of_two_intercalates() {
        let s = direct_sum(&[intercalate(), intercalate()]).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 4));
        assert_k_hom(&s, 2, 8);
    }

    #[test]
    fn direct_sum_mixed_homogeneity_is_valid_but_not_homogeneous() {
        let fig = odd_base_row(3, 5).unwrap().expand();
        let s = direct_sum(&[intercalate(), fig]).unwrap();
        assert!(verify_bitrade(&s).valid());
        assert_eq!(s.volume(), 19);
        assert_eq!(s.homogeneity().unwrap(), None);
    }

    #[test]
    fn direct_sum_of_nothing_is_an_error() {
        assert!(direct_sum(&[]).is_err());
    }

    #[test]
    fn intercalate_shape() {
        let b = intercalate();
        assert_k_hom(&b, 2, 4);
        assert_eq!(b.swapped(), {
            // the 2-symbol case: swapping halves equals swapping symbols
            Bitrade::from_pair_rows(
                2,
                &[
                    vec![Some((2, 1)), Some((1, 2))],
                    vec![Some((1, 2)), Some((2, 1))],
                ],
            )
            .unwrap()
        });
    }

    #[test]
    fn cyclic_pair_cases() {
        assert!(cyclic_pair(1).is_err());
        assert_eq!(cyclic_pair(2).unwrap(), intercalate());
        assert_k_hom(&cyclic_pair(3).unwrap(), 3, 9);
        assert_k_hom(&cyclic_pair(6).unwrap(), 6, 36);
    }
}
