//! Embedded dataset of concrete published base rows for
//! `k in {14, 16, 22, 26, 28, 32, 34}`, shipped verbatim as machine-format
//! data files. Each entry's status is computed by expanding the row and
//! running the verifier; the stored text is never "fixed" by hand, so a
//! typo in the source data surfaces as a recorded erratum rather than a
//! silent correction.

use std::sync::OnceLock;

use crate::circulant::BaseRow;
use crate::error::{Error, Result};
use crate::io::{parse_base_row_machine, IndexBase};
use crate::verify::verify_bitrade;

/// Computed verification status of a catalog entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Status {
    Verified,
    /// The expansion failed verification; carries the first violated
    /// condition for the record.
    Erratum { first_violation: String },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub k: usize,
    pub m: usize,
    pub base_row: BaseRow,
    /// Conventional label of the row, e.g. `D^14_19`.
    pub source: String,
    pub status: Status,
}

static RAW: &[&str] = &[
    include_str!("../data/D_k14_m19.baserow"),
    include_str!("../data/D_k16_m23.baserow"),
    include_str!("../data/D_k22_m27.baserow"),
    include_str!("../data/D_k22_m29.baserow"),
    include_str!("../data/D_k22_m31.baserow"),
    include_str!("../data/D_k26_m31.baserow"),
    include_str!("../data/D_k26_m33.baserow"),
    include_str!("../data/D_k26_m37.baserow"),
    include_str!("../data/D_k28_m33.baserow"),
    include_str!("../data/D_k28_m37.baserow"),
    include_str!("../data/D_k28_m39.baserow"),
    include_str!("../data/D_k28_m41.baserow"),
    include_str!("../data/D_k32_m37.baserow"),
    include_str!("../data/D_k32_m39.baserow"),
    include_str!("../data/D_k32_m41.baserow"),
    include_str!("../data/D_k32_m43.baserow"),
    include_str!("../data/D_k32_m47.baserow"),
    include_str!("../data/D_k34_m39.baserow"),
    include_str!("../data/D_k34_m41.baserow"),
    include_str!("../data/D_k34_m43.baserow"),
    include_str!("../data/D_k34_m47.baserow"),
    include_str!("../data/D_k34_m49.baserow"),
];

fn build() -> Vec<CatalogEntry> {
    RAW.iter()
        .map(|text| {
            let base_row = parse_base_row_machine(text, IndexBase::One)
                .expect("embedded catalog data parses");
            let (k, m) = (base_row.k(), base_row.m());
            let report = verify_bitrade(&base_row.expand());
            let status = if report.valid() && report.homogeneity == Some(k) {
                Status::Verified
            } else {
                Status::Erratum {
                    first_violation: report
                        .first()
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| format!("homogeneity {:?}, expected {k}", report.homogeneity)),
                }
            };
            CatalogEntry {
                k,
                m,
                base_row,
                source: format!("D^{k}_{m}"),
                status,
            }
        })
        .collect()
}

/// All catalog entries in (k, m) order, with computed status.
pub fn catalog_list() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(build)
}

/// Looks up the entry for the given parameters.
pub fn catalog_get(k: usize, m: usize) -> Result<&'static CatalogEntry> {
    catalog_list()
        .iter()
        .find(|e| e.k == k && e.m == m)
        .ok_or(Error::CatalogMiss { k, m })
}

pub fn catalog_contains(k: usize, m: usize) -> bool {
    catalog_get(k, m).is_ok()
}

/// Machine-readable status table, one line per entry:
/// `<k> <m> verified` or `<k> <m> erratum: <first violation>`.
pub fn status_table() -> String {
    let mut out = String::new();
    for e in catalog_list() {
        match &e.status {
            Status::Verified => out.push_str(&format!("{} {} verified\n", e.k, e.m)),
            Status::Erratum { first_violation } => {
                out.push_str(&format!("{} {} erratum: {first_violation}\n", e.k, e.m))
            }
        }
    }
    out
}
