//! Maps (k, m) to a construction recipe, executes recipes with verification
//! of every intermediate, and emits coverage tables.
//!
//! Not every cell is reachable from the constructors in this crate: a few
//! rely on constructions published elsewhere. Those cells are reported as
//! first-class gaps citing the external result, each with a search fallback
//! attached, rather than being silently claimed.

use std::fmt;

use crate::bitrade::Bitrade;
use crate::catalog;
use crate::constructions::{
    cyclic_pair, direct_sum, even_k_plus_u_base_row, even_three_halves_base_row,
    four_hom_base_row, intercalate, k_plus_3_base_row, odd_base_row, product,
};
use crate::error::{Error, Result};
use crate::search::{search_circulant, SearchConfig, SearchOutcome};
use crate::verify::verify_bitrade;

/// A tree describing how to build a bitrade.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Recipe {
    OddRow { k: usize, m: usize },
    FourHom { m: usize },
    ThreeHalves { k: usize, m: usize },
    KPlusU { k: usize, u: usize, m: usize },
    KPlusThree { k: usize },
    CyclicPair { k: usize },
    Intercalate,
    Catalog { k: usize, m: usize },
    Product(Box<Recipe>, Box<Recipe>),
    DirectSum(Vec<Recipe>),
    Search(SearchConfig),
}

impl Recipe {
    /// Single-line label of the root node.
    pub fn label(&self) -> String {
        match self {
            Recipe::OddRow { k, m } => format!("odd_base_row(k={k}, m={m})"),
            Recipe::FourHom { m } => format!("four_hom_base_row(m={m})"),
            Recipe::ThreeHalves { k, m } => format!("even_three_halves_base_row(k={k}, m={m})"),
            Recipe::KPlusU { k, u, m } => format!("even_k_plus_u_base_row(k={k}, u={u}, m={m})"),
            Recipe::KPlusThree { k } => format!("k_plus_3_base_row(k={k})"),
            Recipe::CyclicPair { k } => format!("cyclic_pair(k={k})"),
            Recipe::Intercalate => "intercalate".to_string(),
            Recipe::Catalog { k, m } => format!("catalog(k={k}, m={m})"),
            Recipe::Product(..) => "product".to_string(),
            Recipe::DirectSum(parts) => format!("direct_sum[{}]", parts.len()),
            Recipe::Search(cfg) => format!(
                "search(k={}, m={}, seed={}, budget={}, restarts={})",
                cfg.k, cfg.m, cfg.seed, cfg.node_budget, cfg.restarts
            ),
        }
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&self.label());
        out.push('\n');
        match self {
            Recipe::Product(a, b) => {
                a.render_into(out, indent + 1);
                b.render_into(out, indent + 1);
            }
            Recipe::DirectSum(parts) => {
                for p in parts {
                    p.render_into(out, indent + 1);
                }
            }
            _ => {}
        }
    }

    /// Indented tree rendering, one node per line.
    pub fn render_tree(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_tree().trim_end())
    }
}

/// External results the planner cites when no construction in this crate
/// reaches a cell. All four are from MR2220235.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExternalResult {
    /// Sum composition: homogeneous bitrades on a common column count `p`
    /// combine into a (k_1+...+k_l)-homogeneous bitrade of volume
    /// (k_1+...+k_l)(l p), l != 2, 6.
    Sum,
    /// For each k > 2 a k-homogeneous bitrade of volume k(k+1) exists.
    KTimesKPlusOne,
    /// For m divisible by 5 and 3 <= k <= m, a k-homogeneous bitrade of
    /// volume km exists.
    FiveM,
    /// Interval reduction: coverage of k+1..=2k-1 extends to all m >= k.
    TwoKMinusOne,
}

impl ExternalResult {
    /// Stable one-token identifier used in machine output.
    pub fn token(self) -> &'static str {
        match self {
            ExternalResult::Sum => "sum",
            ExternalResult::KTimesKPlusOne => "k(k+1)",
            ExternalResult::FiveM => "5m",
            ExternalResult::TwoKMinusOne => "2k-1",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExternalResult::Sum => "sum composition over a common column count [MR2220235, Thm. 1]",
            ExternalResult::KTimesKPlusOne => "volume k(k+1) construction [MR2220235]",
            ExternalResult::FiveM => "columns divisible by five [MR2220235]",
            ExternalResult::TwoKMinusOne => "interval reduction k+1..2k-1 [MR2220235]",
        }
    }
}

impl fmt::Display for ExternalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// A cell this crate cannot construct, with the external result that covers
/// it and a search configuration to attack it empirically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gap {
    pub reason: ExternalResult,
    pub fallback: Option<SearchConfig>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PlanOutcome {
    Recipe(Recipe),
    Gap(Gap),
    Nonexistent { reason: String },
}

fn least_odd_divisor(k: usize) -> Option<usize> {
    (3..=k).step_by(2).find(|u| k % u == 0)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn resolve(k: usize, m: usize) -> Option<Recipe> {
    match plan(k, m) {
        PlanOutcome::Recipe(r) => Some(r),
        _ => None,
    }
}

/// Can k be split into at most `l` parts, each between 3 and `p`?
fn sum_decomposable(k: usize, l: usize, p: usize) -> bool {
    (1..=l).any(|t| 3 * t <= k && k <= p * t)
}

fn gap_citation(k: usize, m: usize) -> ExternalResult {
    if m == k + 1 {
        ExternalResult::KTimesKPlusOne
    } else if m % 5 == 0 && k >= 3 {
        ExternalResult::FiveM
    } else if divisors(m)
        .into_iter()
        .any(|l| l >= 3 && l != 6 && m / l >= 3 && sum_decomposable(k, l, m / l))
    {
        ExternalResult::Sum
    } else {
        ExternalResult::TwoKMinusOne
    }
}

fn gap(k: usize, m: usize, reason: ExternalResult) -> PlanOutcome {
    PlanOutcome::Gap(Gap {
        reason,
        fallback: Some(SearchConfig::new(k, m)),
    })
}

/// Chooses a construction recipe for a k-homogeneous bitrade of volume
/// `k*m`, or reports the cell as a gap or as nonexistent. Total and
/// deterministic; rules are tried in a fixed order and the first match wins.
pub fn plan(k: usize, m: usize) -> PlanOutcome {
    if k < 2 {
        return PlanOutcome::Nonexistent {
            reason: format!("homogeneity {k} is below 2, and 1-homogeneous bitrades cannot balance"),
        };
    }
    if m < k {
        return PlanOutcome::Nonexistent {
            reason: format!("a k-homogeneous bitrade needs at least k rows, but m={m} < k={k}"),
        };
    }
    if k == 2 {
        return if m % 2 == 0 {
            PlanOutcome::Recipe(Recipe::DirectSum(vec![Recipe::Intercalate; m / 2]))
        } else {
            PlanOutcome::Nonexistent {
                reason: "2-homogeneous bitrades of volume 2m exist only for even m [MR2220235]"
                    .to_string(),
            }
        };
    }
    if m == k {
        return PlanOutcome::Recipe(Recipe::CyclicPair { k });
    }
    if k % 2 == 1 {
        return PlanOutcome::Recipe(Recipe::OddRow { k, m });
    }

    // even k, m > k
    if k == 4 {
        return PlanOutcome::Recipe(Recipe::FourHom { m });
    }
    if m == k + 3 {
        return PlanOutcome::Recipe(Recipe::KPlusThree { k });
    }
    if 2 * m >= 3 * k {
        return PlanOutcome::Recipe(Recipe::ThreeHalves { k, m });
    }
    if let Some(u) = least_odd_divisor(k) {
        if m >= k + u {
            return PlanOutcome::Recipe(Recipe::KPlusU { k, u, m });
        }
    }
    if m == k + 2 || m == k + 4 || m == k + 6 {
        // Halve both parameters and blow back up by an intercalate.
        return match resolve(k / 2, m / 2) {
            Some(outer) => PlanOutcome::Recipe(Recipe::Product(
                Box::new(outer),
                Box::new(Recipe::Intercalate),
            )),
            None => gap(k, m, ExternalResult::KTimesKPlusOne),
        };
    }
    if catalog::catalog_contains(k, m) {
        return PlanOutcome::Recipe(Recipe::Catalog { k, m });
    }
    // General factorization k = k1*k2, m = m1*m2, in increasing k1; the
    // first pair whose both factors resolve wins.
    for k1 in divisors(k) {
        if k1 < 2 || k / k1 < 2 {
            continue;
        }
        let k2 = k / k1;
        for m1 in divisors(m) {
            let m2 = m / m1;
            if m1 < k1 || m2 < k2 {
                continue;
            }
            if let (Some(a), Some(b)) = (resolve(k1, m1), resolve(k2, m2)) {
                return PlanOutcome::Recipe(Recipe::Product(Box::new(a), Box::new(b)));
            }
        }
    }
    gap(k, m, gap_citation(k, m))
}

fn integrity(node: &Recipe, b: &Bitrade) -> Error {
    Error::Integrity {
        context: node.label(),
        report: verify_bitrade(b),
    }
}

/// Builds the bitrade a recipe describes. Every node's output is verified
/// before it is composed further; a failure names the offending node.
pub fn execute(recipe: &Recipe) -> Result<Bitrade> {
    let built = match recipe {
        Recipe::OddRow { k, m } => odd_base_row(*k, *m)?.expand(),
        Recipe::FourHom { m } => four_hom_base_row(*m)?.expand(),
        Recipe::ThreeHalves { k, m } => even_three_halves_base_row(*k, *m)?.expand(),
        Recipe::KPlusU { k, u, m } => even_k_plus_u_base_row(*k, *u, *m)?.expand(),
        Recipe::KPlusThree { k } => k_plus_3_base_row(*k)?.expand(),
        Recipe::CyclicPair { k } => cyclic_pair(*k)?,
        Recipe::Intercalate => intercalate(),
        Recipe::Catalog { k, m } => {
            let entry = catalog::catalog_get(*k, *m)?;
            if let catalog::Status::Erratum { first_violation } = &entry.status {
                return Err(Error::Precondition(format!(
                    "catalog entry {} carries an erratum: {first_violation}",
                    entry.source
                )));
            }
            entry.base_row.expand()
        }
        Recipe::Product(a, b) => product(&execute(a)?, &execute(b)?)?,
        Recipe::DirectSum(parts) => {
            let built: Result<Vec<Bitrade>> = parts.iter().map(execute).collect();
            direct_sum(&built?)?
        }
        Recipe::Search(cfg) => match search_circulant(cfg)? {
            SearchOutcome::Found(row) => row.expand(),
            SearchOutcome::Exhausted => {
                return Err(Error::Precondition(format!(
                    "search exhausted: no circulant base row at k={}, m={}",
                    cfg.k, cfg.m
                )))
            }
            SearchOutcome::BudgetExceeded => {
                return Err(Error::Budget { nodes: cfg.node_budget })
            }
        },
    };
    if !verify_bitrade(&built).valid() {
        return Err(integrity(recipe, &built));
    }
    Ok(built)
}

/// Classification of one (k, m) cell of the coverage grid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CellStatus {
    /// Built by a constructive recipe, executed and verified.
    Constructed,
    /// Served by a catalog row, executed and verified.
    CatalogHit,
    Gap(ExternalResult),
    Nonexistent,
}

pub struct Coverage {
    pub k_max: usize,
    pub m_max: usize,
    /// `(k, m)` cells for `2 <= k <= k_max`, `k <= m <= m_max`.
    pub cells: Vec<((usize, usize), CellStatus)>,
}

/// Classifies every cell of the grid. Constructed and catalog cells are
/// actually executed and verified against the requested homogeneity and
/// volume, not merely claimed.
pub fn coverage_table(k_max: usize, m_max: usize) -> Result<Coverage> {
    let mut cells = Vec::new();
    for k in 2..=k_max {
        for m in k..=m_max {
            let status = match plan(k, m) {
                PlanOutcome::Recipe(recipe) => {
                    let built = execute(&recipe)?;
                    let report = verify_bitrade(&built);
                    if !report.valid()
                        || report.homogeneity != Some(k)
                        || built.volume() != k * m
                    {
                        return Err(integrity(&recipe, &built));
                    }
                    match recipe {
                        Recipe::Catalog { .. } => CellStatus::CatalogHit,
                        _ => CellStatus::Constructed,
                    }
                }
                PlanOutcome::Gap(g) => CellStatus::Gap(g.reason),
                PlanOutcome::Nonexistent { .. } => CellStatus::Nonexistent,
            };
            cells.push(((k, m), status));
        }
    }
    Ok(Coverage { k_max, m_max, cells })
}

impl Coverage {
    pub fn get(&self, k: usize, m: usize) -> Option<&CellStatus> {
        self.cells
            .iter()
            .find(|((ck, cm), _)| *ck == k && *cm == m)
            .map(|(_, s)| s)
    }

    /// Plain-text table: rows are k, columns are m.
    /// `#` constructed, `C` catalog, `G` gap, `.` nonexistent, blank for m < k.
    pub fn render_text(&self) -> String {
        let mut out = format!("coverage k=2..{} m=k..{}\n", self.k_max, self.m_max);
        out.push_str("     ");
        for m in 2..=self.m_max {
            out.push_str(&format!("{m:>3}"));
        }
        out.push('\n');
        for k in 2..=self.k_max {
            out.push_str(&format!("k={k:<3}"));
            for m in 2..=self.m_max {
                let ch = match self.get(k, m) {
                    None => ' ',
                    Some(CellStatus::Constructed) => '#',
                    Some(CellStatus::CatalogHit) => 'C',
                    Some(CellStatus::Gap(_)) => 'G',
                    Some(CellStatus::Nonexistent) => '.',
                };
                out.push_str(&format!("  {ch}"));
            }
            out.push('\n');
        }
        out.push_str("legend: # constructed+verified, C catalog, G gap, . nonexistent\n");
        let gaps: Vec<String> = self
            .cells
            .iter()
            .filter_map(|((k, m), s)| match s {
                CellStatus::Gap(r) => Some(format!("  k={k} m={m}: {}", r.description())),
                _ => None,
            })
            .collect();
        if !gaps.is_empty() {
            out.push_str("gaps:\n");
            for g in gaps {
                out.push_str(&g);
                out.push('\n');
            }
        }
        out
    }

    /// One line per cell: `k m constructed|catalog|gap <citation>|nonexistent`.
    pub fn machine_lines(&self) -> String {
        let mut out = String::new();
        for ((k, m), s) in &self.cells {
            let line = match s {
                CellStatus::Constructed => format!("{k} {m} constructed"),
                CellStatus::CatalogHit => format!("{k} {m} catalog"),
                CellStatus::Gap(r) => format!("{k} {m} gap {}", r.token()),
                CellStatus::Nonexistent => format!("{k} {m} nonexistent"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
