//! Acceptance suite. Each test is one criterion, prints a single pass/fail
//! line, and enforces its time budget. Run with `--nocapture` to see the
//! lines for passing criteria.

mod common;

use std::time::{Duration, Instant};

use bitrades::analysis::{
    enumerate_bitrades, is_primary, EnumParams, PrimaryVerdict, DEFAULT_NODE_BUDGET,
};
use bitrades::catalog::{self, Status};
use bitrades::constructions::{
    direct_sum, even_k_plus_u_base_row, even_three_halves_base_row, intercalate,
    k_plus_3_base_row, odd_base_row, product,
};
use bitrades::io::{
    format_base_row_paper, parse_base_row, parse_bitrade_machine, write_bitrade_grid,
    write_bitrade_machine, IndexBase,
};
use bitrades::planner::{coverage_table, execute, plan, CellStatus, ExternalResult, PlanOutcome};
use bitrades::search::{search_circulant, search_exhaustive, SearchConfig, SearchOutcome};
use bitrades::verify::verify_bitrade;
use bitrades::{Bitrade, Cell};

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match &result {
        Ok(()) => println!("criterion {n} ({name}): PASS [{elapsed:.2?}]"),
        Err(e) => println!("criterion {n} ({name}): FAIL [{elapsed:.2?}] {e}"),
    }
    if let Err(e) = result {
        panic!("criterion {n} ({name}) failed: {e}");
    }
    assert!(
        elapsed <= limit,
        "criterion {n} ({name}) overran its limit: {elapsed:.2?} > {limit:?}"
    );
}

fn check_k_hom(b: &Bitrade, k: usize, volume: usize, what: &str) -> Result<(), String> {
    let report = verify_bitrade(b);
    if !report.valid() {
        return Err(format!("{what}: {}", report.summary()));
    }
    if b.volume() != volume {
        return Err(format!("{what}: volume {} instead of {volume}", b.volume()));
    }
    if report.homogeneity != Some(k) {
        return Err(format!(
            "{what}: homogeneity {:?} instead of {k}",
            report.homogeneity
        ));
    }
    Ok(())
}

#[test]
fn criterion_01_figure_exactness() {
    criterion(1, "figure exactness", Duration::from_secs(1), || {
        let expanded = odd_base_row(3, 5)
            .map_err(|e| e.to_string())?
            .expand();
        if expanded != common::figure2() {
            return Err("expansion of the 3-homogeneous base row differs from the reference grid".into());
        }
        let blown = product(&common::figure2(), &intercalate()).map_err(|e| e.to_string())?;
        let rendered = write_bitrade_grid(&blown, IndexBase::Zero);
        if rendered != common::FIGURE3_GRID_ZERO_BASED {
            return Err(format!(
                "product grid differs from the reference:\n{rendered}"
            ));
        }
        Ok(())
    });
}

#[test]
fn criterion_02_odd_k_sweep() {
    criterion(2, "odd k sweep", Duration::from_secs(10), || {
        for k in (3..=15).step_by(2) {
            for m in k..=k + 12 {
                let b = odd_base_row(k, m).map_err(|e| e.to_string())?.expand();
                check_k_hom(&b, k, k * m, &format!("odd k={k} m={m}"))?;
            }
        }
        Ok(())
    });
}

/// Independent oracle: does any nonempty proper subset of the support
/// balance row- and column-wise? Multiset balance reduces to bitmask
/// equality because each half holds a symbol at most once per line.
fn balanced_proper_subset_exists(b: &Bitrade) -> bool {
    let cells: Vec<(Cell, usize, usize)> = b.entry_pairs().map(|(c, t, m)| (c, t.0, m.0)).collect();
    let v = cells.len();
    assert!(v < 63, "oracle supports volume < 63");
    let rows = b.rows();
    let cols = b.cols();
    let full = (1u64 << v) - 1;
    'mask: for mask in 1..full {
        let mut row_t = vec![0u64; rows + 1];
        let mut row_m = vec![0u64; rows + 1];
        let mut col_t = vec![0u64; cols + 1];
        let mut col_m = vec![0u64; cols + 1];
        for (i, (cell, t, m)) in cells.iter().enumerate() {
            if mask & (1 << i) != 0 {
                row_t[cell.row] |= 1 << t;
                row_m[cell.row] |= 1 << m;
                col_t[cell.col] |= 1 << t;
                col_m[cell.col] |= 1 << m;
            }
        }
        for r in 1..=rows {
            if row_t[r] != row_m[r] {
                continue 'mask;
            }
        }
        for c in 1..=cols {
            if col_t[c] != col_m[c] {
                continue 'mask;
            }
        }
        return true;
    }
    false
}

#[test]
fn criterion_03_primariness() {
    criterion(3, "primariness", Duration::from_secs(120), || {
        for k in [3usize, 5, 7] {
            for m in k..=13 {
                let b = odd_base_row(k, m).map_err(|e| e.to_string())?.expand();
                let verdict = is_primary(&b, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
                if verdict != PrimaryVerdict::Primary {
                    return Err(format!("k={k} m={m} judged non-primary"));
                }
                if k * m <= 20 && balanced_proper_subset_exists(&b) {
                    return Err(format!(
                        "k={k} m={m}: exhaustive oracle found a balanced proper subset"
                    ));
                }
            }
        }
        // The oracle must also agree on a negative case at comparable volume.
        let split = direct_sum(&[intercalate(), intercalate()]).map_err(|e| e.to_string())?;
        let verdict = is_primary(&split, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        if !matches!(verdict, PrimaryVerdict::NotPrimary(_)) || !balanced_proper_subset_exists(&split)
        {
            return Err("disagreement on the two-block direct sum".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_04_even_k_sweeps() {
    criterion(4, "even k sweeps", Duration::from_secs(30), || {
        for k in [6usize, 8, 10, 12] {
            let lo = (3 * k).div_ceil(2);
            for m in lo..=lo + 4 {
                let b = even_three_halves_base_row(k, m)
                    .map_err(|e| e.to_string())?
                    .expand();
                check_k_hom(&b, k, k * m, &format!("three-halves k={k} m={m}"))?;
            }
        }
        for (k, u) in [(6usize, 3usize), (10, 5), (12, 3), (18, 3), (20, 5)] {
            for m in k + u..=k + u + 4 {
                let b = even_k_plus_u_base_row(k, u, m)
                    .map_err(|e| e.to_string())?
                    .expand();
                check_k_hom(&b, k, k * m, &format!("k-plus-u k={k} u={u} m={m}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_k_plus_3_residue_sweep() {
    criterion(5, "m = k+3 residue sweep", Duration::from_secs(30), || {
        for k in (4..=38).step_by(2) {
            let b = k_plus_3_base_row(k).map_err(|e| e.to_string())?.expand();
            check_k_hom(&b, k, k * (k + 3), &format!("k+3 at k={k}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_06_catalog() {
    criterion(6, "catalog", Duration::from_secs(30), || {
        let entries = catalog::catalog_list();
        if entries.len() != 22 {
            return Err(format!("expected 22 entries, found {}", entries.len()));
        }
        for e in entries {
            let b = e.base_row.expand();
            check_k_hom(&b, e.k, e.k * e.m, &e.source)?;
            if e.status != Status::Verified {
                return Err(format!("{} carries unexpected status {:?}", e.source, e.status));
            }
        }
        let committed = include_str!("data/catalog_status.txt");
        let regenerated = catalog::status_table();
        if regenerated != committed {
            return Err(format!(
                "status table drifted from the committed fixture:\n{regenerated}"
            ));
        }
        Ok(())
    });
}

#[test]
fn criterion_07_two_homogeneous_spectrum() {
    criterion(7, "2-homogeneous spectrum", Duration::from_secs(60), || {
        let none = enumerate_bitrades(
            &EnumParams {
                rows: 3,
                cols: 3,
                symbols: 3,
                homogeneity: Some(2),
                volume: Some(6),
            },
            DEFAULT_NODE_BUDGET,
        )
        .map_err(|e| e.to_string())?;
        if !none.is_empty() {
            return Err(format!("found {} phantom 2-homogeneous objects at m=3", none.len()));
        }
        let some = enumerate_bitrades(
            &EnumParams {
                rows: 4,
                cols: 4,
                symbols: 4,
                homogeneity: Some(2),
                volume: Some(8),
            },
            DEFAULT_NODE_BUDGET,
        )
        .map_err(|e| e.to_string())?;
        if some.is_empty() {
            return Err("no 2-homogeneous bitrade of volume 8 found on a 4x4 grid".into());
        }
        for t in 1..=5usize {
            let b = direct_sum(&vec![intercalate(); t]).map_err(|e| e.to_string())?;
            check_k_hom(&b, 2, 4 * t, &format!("direct sum of {t} intercalates"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_08_planner_soundness() {
    criterion(8, "planner soundness", Duration::from_secs(120), || {
        let cov = coverage_table(12, 30).map_err(|e| e.to_string())?;
        // Every constructed cell re-executes and re-verifies here, so the
        // classification is earned twice.
        for ((k, m), status) in &cov.cells {
            match status {
                CellStatus::Constructed | CellStatus::CatalogHit => {
                    let PlanOutcome::Recipe(r) = plan(*k, *m) else {
                        return Err(format!("({k},{m}) lost its recipe on replay"));
                    };
                    let b = execute(&r).map_err(|e| e.to_string())?;
                    check_k_hom(&b, *k, k * m, &format!("coverage cell ({k},{m})"))?;
                }
                CellStatus::Gap(_) | CellStatus::Nonexistent => {}
            }
        }
        for m in (3..=29).step_by(2) {
            if cov.get(2, m) != Some(&CellStatus::Nonexistent) {
                return Err(format!("(2,{m}) must be nonexistent"));
            }
        }
        match plan(16, 21) {
            PlanOutcome::Gap(g) if g.reason == ExternalResult::Sum => {}
            other => return Err(format!("(16,21) should cite the sum composition, got {other:?}")),
        }
        let committed = include_str!("data/coverage_12_30.txt");
        let mut regenerated = cov.render_text();
        regenerated.push_str(&cov.machine_lines());
        if regenerated != committed {
            return Err("coverage table drifted from the committed fixture".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_09_searcher() {
    criterion(9, "searcher", Duration::from_secs(60), || {
        for (k, m) in [(3usize, 5usize), (4, 5), (5, 6)] {
            let cfg = SearchConfig::new(k, m);
            let one = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .map_err(|e| e.to_string())?
                .install(|| search_circulant(&cfg))
                .map_err(|e| e.to_string())?;
            let four = rayon::ThreadPoolBuilder::new()
                .num_threads(4)
                .build()
                .map_err(|e| e.to_string())?
                .install(|| search_circulant(&cfg))
                .map_err(|e| e.to_string())?;
            let again = search_circulant(&cfg).map_err(|e| e.to_string())?;
            if one != four || one != again {
                return Err(format!("search at ({k},{m}) depends on threads or runs"));
            }
            match one {
                SearchOutcome::Found(row) => {
                    check_k_hom(&row.expand(), k, k * m, &format!("search hit ({k},{m})"))?
                }
                other => return Err(format!("search at ({k},{m}) returned {other:?}")),
            }
        }
        let empty = search_exhaustive(2, 3, 1_000_000).map_err(|e| e.to_string())?;
        if !empty.is_empty() {
            return Err("exhaustive search at (2,3) should find nothing".into());
        }
        Ok(())
    });
}

#[test]
fn criterion_10_round_trips() {
    criterion(10, "round trips", Duration::from_secs(5), || {
        let mut objects: Vec<Bitrade> = Vec::new();
        'outer: for k in 2..=10 {
            for m in k..=16 {
                if let PlanOutcome::Recipe(r) = plan(k, m) {
                    objects.push(execute(&r).map_err(|e| e.to_string())?);
                    if objects.len() == 100 {
                        break 'outer;
                    }
                }
            }
        }
        if objects.len() != 100 {
            return Err(format!("only {} generated objects", objects.len()));
        }
        for (i, b) in objects.iter().enumerate() {
            for base in [IndexBase::One, IndexBase::Zero] {
                let text = write_bitrade_machine(b, base).map_err(|e| e.to_string())?;
                let back = parse_bitrade_machine(&text, base).map_err(|e| e.to_string())?;
                if &back != b {
                    return Err(format!("object {i} failed the machine round-trip"));
                }
            }
        }
        for e in catalog::catalog_list() {
            let text = format_base_row_paper(&e.base_row);
            let back = parse_base_row(&text).map_err(|err| err.to_string())?;
            if back != e.base_row {
                return Err(format!("{} failed the notation round-trip", e.source));
            }
        }
        Ok(())
    });
}
