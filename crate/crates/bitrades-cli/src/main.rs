//! Command-line interface: construction, verification, composition, analysis,
//! search, planning and coverage reporting for k-homogeneous Latin bitrades.
//!
//! Exit codes: 0 success / positive verdict, 1 negative verdict (invalid
//! object, not primary, not minimal, no mate, gap, nothing found), 2 usage or
//! parse error, 3 node budget exceeded.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bitrades::analysis::{
    enumerate_bitrades, find_disjoint_mate, is_minimal, is_primary, EnumParams, MinimalVerdict,
    PrimaryVerdict, DEFAULT_NODE_BUDGET,
};
use bitrades::bitrade::Bitrade;
use bitrades::catalog;
use bitrades::circulant::BaseRow;
use bitrades::constructions::{
    cyclic_pair, even_k_plus_u_base_row, even_three_halves_base_row, four_hom_base_row,
    intercalate, k_plus_3_base_row, odd_base_row, product,
};
use bitrades::constructions::direct_sum;
use bitrades::error::Error;
use bitrades::io::{
    format_base_row_paper, parse_base_row, parse_base_row_machine, parse_bitrade_machine,
    write_base_row_machine, write_bitrade_grid, write_bitrade_machine, IndexBase,
};
use bitrades::planner::{coverage_table, execute, plan, PlanOutcome};
use bitrades::search::{
    search_circulant, search_exhaustive, SearchConfig, SearchOutcome, DEFAULT_RESTARTS,
    DEFAULT_SEARCH_BUDGET,
};
use bitrades::verify::verify_bitrade;

#[derive(Parser)]
#[command(name = "bitrades", version, about = "k-homogeneous Latin bitrade toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Machine,
    Grid,
}

#[derive(Args, Clone, Copy)]
struct OutOpts {
    /// Output format for bitrades.
    #[arg(long, value_enum, default_value = "machine")]
    format: Format,
    /// Read and write 0-based indices and symbols instead of 1-based.
    #[arg(long)]
    zero_based: bool,
}

impl OutOpts {
    fn base(&self) -> IndexBase {
        if self.zero_based {
            IndexBase::Zero
        } else {
            IndexBase::One
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Method {
    Auto,
    Odd,
    FourHom,
    ThreeHalves,
    KPlusU,
    KPlus3,
    Cyclic,
    Intercalate,
    Catalog,
    Search,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a k-homogeneous bitrade of volume k*m.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Construction to use; `auto` consults the planner.
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Odd divisor of k for the k-plus-u method (least one if omitted).
        #[arg(long)]
        u: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        /// Print the generating base row instead of the expanded bitrade
        /// (base-row methods only).
        #[arg(long)]
        baserow: bool,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Verify a bitrade file against the definitional conditions.
    Verify {
        /// Bitrade file in the machine format, or `-` for stdin.
        file: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Expand a base-row file to its full bitrade.
    Expand {
        /// Base-row file (machine format or `D^k_m = {...}` notation), or `-`.
        file: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Blow-up product of two bitrade files.
    Product {
        outer: String,
        inner: String,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Block-diagonal direct sum of bitrade files.
    Sum {
        #[arg(required = true)]
        files: Vec<String>,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Decide whether a bitrade contains a proper sub-bitrade.
    Primary {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Decide whether any proper subset of the trade half admits a mate.
    Minimal {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Search a disjoint mate for the trade half of a bitrade file.
    Mate {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Exhaustively enumerate the valid bitrades on a small grid.
    Enumerate {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        symbols: usize,
        /// Keep only k-homogeneous bitrades.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        volume: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Search for a circulant base row at (k, m).
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        /// Traverse the whole space and list all solutions up to shifts.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Print the construction recipe (or gap citation) for (k, m).
    Plan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Classify every (k, m) cell up to the given bounds.
    Coverage {
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        mmax: usize,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Inspect the embedded base-row catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List all entries with their computed status.
    List {
        /// Print machine-readable status lines only.
        #[arg(long)]
        machine: bool,
    },
    /// Show one entry.
    Get {
        k: usize,
        m: usize,
        /// Print the expanded bitrade instead of the base row.
        #[arg(long)]
        expand: bool,
        #[command(flatten)]
        out: OutOpts,
    },
}

/// Verdict-shaped outcome: Ok(true) prints as success, Ok(false) exits 1.
type CmdResult = Result<bool, Error>;

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Structural(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::Structural(format!("reading {path}: {e}")))
    }
}

fn load_bitrade(path: &str, base: IndexBase) -> Result<Bitrade, Error> {
    parse_bitrade_machine(&read_input(path)?, base)
}

fn print_bitrade(b: &Bitrade, out: &OutOpts) -> Result<(), Error> {
    match out.format {
        Format::Machine => print!("{}", write_bitrade_machine(b, out.base())?),
        Format::Grid => print!("{}", write_bitrade_grid(b, out.base())),
    }
    Ok(())
}

fn print_base_row(row: &BaseRow, out: &OutOpts) {
    print!("{}", write_base_row_machine(row, out.base()));
    eprintln!("{}", format_base_row_paper(row));
}

/// Emits a bitrade after confirming it verifies; a failed check prints the
/// report and counts as a negative verdict.
fn emit_checked(b: &Bitrade, out: &OutOpts) -> CmdResult {
    let report = verify_bitrade(b);
    if !report.valid() {
        eprint!("{report}");
        return Ok(false);
    }
    print_bitrade(b, out)?;
    Ok(true)
}

fn gen_base_row(
    method: Method,
    k: usize,
    m: usize,
    u: Option<usize>,
    cfg: &SearchConfig,
) -> Result<Option<BaseRow>, Error> {
    let least_u = || {
        (3..=k)
            .step_by(2)
            .find(|d| k % d == 0)
            .ok_or_else(|| Error::Precondition(format!("k={k} has no odd divisor above 1")))
    };
    Ok(Some(match method {
        Method::Odd => odd_base_row(k, m)?,
        Method::FourHom => {
            if k != 4 {
                return Err(Error::Precondition("four-hom requires k=4".into()));
            }
            four_hom_base_row(m)?
        }
        Method::ThreeHalves => even_three_halves_base_row(k, m)?,
        Method::KPlusU => even_k_plus_u_base_row(k, u.map_or_else(least_u, Ok)?, m)?,
        Method::KPlus3 => {
            if m != k + 3 {
                return Err(Error::Precondition(format!(
                    "k-plus-3 requires m = k+3 = {}",
                    k + 3
                )));
            }
            k_plus_3_base_row(k)?
        }
        Method::Catalog => catalog::catalog_get(k, m)?.base_row.clone(),
        Method::Search => match search_circulant(cfg)? {
            SearchOutcome::Found(row) => row,
            SearchOutcome::Exhausted => return Ok(None),
            SearchOutcome::BudgetExceeded => {
                return Err(Error::Budget { nodes: cfg.node_budget })
            }
        },
        Method::Auto | Method::Cyclic | Method::Intercalate => unreachable!("handled by caller"),
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    k: usize,
    m: usize,
    method: Method,
    u: Option<usize>,
    seed: u64,
    budget: u64,
    restarts: u32,
    baserow: bool,
    out: &OutOpts,
) -> CmdResult {
    let cfg = SearchConfig {
        k,
        m,
        seed,
        node_budget: budget,
        restarts,
    };
    match method {
        Method::Auto => match plan(k, m) {
            PlanOutcome::Recipe(recipe) => {
                if baserow {
                    return Err(Error::Precondition(
                        "--baserow needs an explicit base-row method".into(),
                    ));
                }
                let b = execute(&recipe)?;
                eprint!("recipe:\n{}", indent(&recipe.render_tree()));
                emit_checked(&b, out)
            }
            PlanOutcome::Gap(g) => {
                eprintln!("gap: {} — {}", g.reason.token(), g.reason.description());
                if let Some(fb) = g.fallback {
                    eprintln!(
                        "fallback: search --k {} --m {} --seed {} --budget {} --restarts {}",
                        fb.k, fb.m, fb.seed, fb.node_budget, fb.restarts
                    );
                }
                Ok(false)
            }
            PlanOutcome::Nonexistent { reason } => {
                eprintln!("nonexistent: {reason}");
                Ok(false)
            }
        },
        Method::Cyclic | Method::Intercalate => {
            if baserow {
                return Err(Error::Precondition(
                    "--baserow needs a base-row method".into(),
                ));
            }
            let b = if method == Method::Cyclic {
                cyclic_pair(k)?
            } else {
                intercalate()
            };
            emit_checked(&b, out)
        }
        _ => match gen_base_row(method, k, m, u, &cfg)? {
            Some(row) => {
                if baserow {
                    print_base_row(&row, out);
                    return Ok(true);
                }
                emit_checked(&row.expand(), out)
            }
            None => {
                eprintln!("search exhausted: no circulant base row at k={k}, m={m}");
                Ok(false)
            }
        },
    }
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Gen {
            k,
            m,
            method,
            u,
            seed,
            budget,
            restarts,
            baserow,
            out,
        } => cmd_gen(k, m, method, u, seed, budget, restarts, baserow, &out),
        Cmd::Verify { file, out } => {
            let b = load_bitrade(&file, out.base())?;
            let report = verify_bitrade(&b);
            print!("{report}");
            if report.valid() {
                println!();
            }
            Ok(report.valid())
        }
        Cmd::Expand { file, out } => {
            let text = read_input(&file)?;
            let row = if text.trim_start().starts_with("baserow") {
                parse_base_row_machine(&text, out.base())?
            } else {
                parse_base_row(&text)?
            };
            print_bitrade(&row.expand(), &out)?;
            Ok(true)
        }
        Cmd::Product { outer, inner, out } => {
            let a = load_bitrade(&outer, out.base())?;
            let b = load_bitrade(&inner, out.base())?;
            emit_checked(&product(&a, &b)?, &out)
        }
        Cmd::Sum { files, out } => {
            let parts: Result<Vec<Bitrade>, Error> =
                files.iter().map(|f| load_bitrade(f, out.base())).collect();
            emit_checked(&direct_sum(&parts?)?, &out)
        }
        Cmd::Primary { file, budget, out } => {
            let b = load_bitrade(&file, out.base())?;
            match is_primary(&b, budget)? {
                PrimaryVerdict::Primary => {
                    println!("primary");
                    Ok(true)
                }
                PrimaryVerdict::NotPrimary(w) => {
                    println!("not primary: sub-bitrade on {} cells", w.cells.len());
                    print_bitrade(&w.restriction, &out)?;
                    Ok(false)
                }
            }
        }
        Cmd::Minimal { file, budget, out } => {
            let b = load_bitrade(&file, out.base())?;
            match is_minimal(&b, budget)? {
                MinimalVerdict::Minimal => {
                    println!("minimal");
                    Ok(true)
                }
                MinimalVerdict::NotMinimal(w) => {
                    println!(
                        "not minimal: {} trade cells admit a mate",
                        w.cells.len()
                    );
                    print_bitrade(&w.restriction, &out)?;
                    Ok(false)
                }
            }
        }
        Cmd::Mate { file, budget, out } => {
            let b = load_bitrade(&file, out.base())?;
            match find_disjoint_mate(b.trade(), budget)? {
                Some(mate) => {
                    let rebuilt = Bitrade::new(b.trade().clone(), mate)?;
                    print_bitrade(&rebuilt, &out)?;
                    Ok(true)
                }
                None => {
                    eprintln!("no disjoint mate exists for the trade half");
                    Ok(false)
                }
            }
        }
        Cmd::Enumerate {
            rows,
            cols,
            symbols,
            k,
            volume,
            budget,
            out,
        } => {
            let params = EnumParams {
                rows,
                cols,
                symbols,
                homogeneity: k,
                volume,
            };
            let found = enumerate_bitrades(&params, budget)?;
            for (i, b) in found.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print_bitrade(b, &out)?;
            }
            eprintln!("{} bitrade(s)", found.len());
            Ok(true)
        }
        Cmd::Search {
            k,
            m,
            seed,
            budget,
            restarts,
            exhaustive,
            out,
        } => {
            if exhaustive {
                let rows = search_exhaustive(k, m, budget)?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print_base_row(row, &out);
                }
                eprintln!("{} canonical solution(s)", rows.len());
                return Ok(!rows.is_empty());
            }
            let cfg = SearchConfig {
                k,
                m,
                seed,
                node_budget: budget,
                restarts,
            };
            match search_circulant(&cfg)? {
                SearchOutcome::Found(row) => {
                    print_base_row(&row, &out);
                    Ok(true)
                }
                SearchOutcome::Exhausted => {
                    eprintln!("exhausted: no circulant base row at k={k}, m={m}");
                    Ok(false)
                }
                SearchOutcome::BudgetExceeded => Err(Error::Budget { nodes: budget }),
            }
        }
        Cmd::Plan { k, m } => match plan(k, m) {
            PlanOutcome::Recipe(r) => {
                print!("{}", r.render_tree());
                Ok(true)
            }
            PlanOutcome::Gap(g) => {
                println!("gap: {} — {}", g.reason.token(), g.reason.description());
                if let Some(fb) = g.fallback {
                    println!(
                        "fallback: search --k {} --m {} --seed {} --budget {} --restarts {}",
                        fb.k, fb.m, fb.seed, fb.node_budget, fb.restarts
                    );
                }
                Ok(false)
            }
            PlanOutcome::Nonexistent { reason } => {
                println!("nonexistent: {reason}");
                Ok(false)
            }
        },
        Cmd::Coverage { kmax, mmax, out } => {
            let cov = coverage_table(kmax, mmax)?;
            let mut text = cov.render_text();
            text.push_str(&cov.machine_lines());
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Error::Structural(format!("writing {path}: {e}")))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List { machine } => {
                if machine {
                    print!("{}", catalog::status_table());
                } else {
                    for e in catalog::catalog_list() {
                        let status = match &e.status {
                            catalog::Status::Verified => "verified".to_string(),
                            catalog::Status::Erratum { first_violation } => {
                                format!("erratum: {first_violation}")
                            }
                        };
                        println!("{:<8} k={:<3} m={:<3} {status}", e.source, e.k, e.m);
                    }
                }
                Ok(true)
            }
            CatalogCmd::Get { k, m, expand, out } => {
                let e = catalog::catalog_get(k, m)?;
                if expand {
                    return emit_checked(&e.base_row.expand(), &out);
                }
                println!("{}", format_base_row_paper(&e.base_row));
                match &e.status {
                    catalog::Status::Verified => println!("status: verified"),
                    catalog::Status::Erratum { first_violation } => {
                        println!("status: erratum: {first_violation}")
                    }
                }
                Ok(true)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
