//! Parameter sweeps over `(q, w1, w2)` deciding whether the conjectured
//! bound for separating Reed-Solomon codes is settled.
//!
//! Non-separation of RS_k(q) carries over to every larger dimension, so a
//! triple is decided by its critical dimension `k* = ceil((q-1)/(w1 w2)) + 1`
//! alone: the conjecture holds for `(q, w1, w2)` iff RS_{k*}(q) is not
//! (w1, w2)-separating. Each record also carries the smallest dimension
//! `settled_k >= k*` at which the arithmetic criteria apply, which gives the
//! per-code count: RS_k(q) is accounted for when `k < k*` (the bound holds
//! outright) or `k >= settled_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::rs_code;
use crate::error::{Error, Result};
use crate::field::{prime_power, FiniteField};
use crate::separation::is_separating;
use crate::witness::{
    additive_shift_valid, additive_witness, multiplicative_witness, search_witness, AdditiveConditions, Provenance,
    SeparationWitness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Confirmed,
    Open,
    /// Brute force found RS_{k*}(q) separating.
    Refuted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Thm3,
    Thm5Case1,
    Thm5Case2,
    Thm5Case3,
    Cor1,
    Cor2,
    BruteForce,
    DecompositionSearch,
    None,
}

impl Criterion {
    pub const ALL: [Criterion; 9] = [
        Criterion::Thm3,
        Criterion::Thm5Case1,
        Criterion::Thm5Case2,
        Criterion::Thm5Case3,
        Criterion::Cor1,
        Criterion::Cor2,
        Criterion::BruteForce,
        Criterion::DecompositionSearch,
        Criterion::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Thm3 => "thm3",
            Criterion::Thm5Case1 => "thm5_case1",
            Criterion::Thm5Case2 => "thm5_case2",
            Criterion::Thm5Case3 => "thm5_case3",
            Criterion::Cor1 => "cor1",
            Criterion::Cor2 => "cor2",
            Criterion::BruteForce => "brute_force",
            Criterion::DecompositionSearch => "decomposition_search",
            Criterion::None => "none",
        }
    }

    fn from_provenance(p: Provenance) -> Self {
        match p {
            Provenance::Thm3 => Criterion::Thm3,
            Provenance::Thm5Case1 => Criterion::Thm5Case1,
            Provenance::Thm5Case2 => Criterion::Thm5Case2,
            Provenance::Thm5Case3 => Criterion::Thm5Case3,
            Provenance::Search => Criterion::DecompositionSearch,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which criteria a scan may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CriteriaSet {
    pub thm3: bool,
    pub thm5: bool,
    pub cor1: bool,
    pub cor2: bool,
    pub brute_force: bool,
    pub search: bool,
}

impl CriteriaSet {
    /// The arithmetic criteria only.
    pub fn arithmetic() -> Self {
        CriteriaSet {
            thm3: true,
            thm5: true,
            ..Default::default()
        }
    }

    fn names(&self) -> Vec<&'static str> {
        [
            (self.thm3, "thm3"),
            (self.thm5, "thm5"),
            (self.cor1, "cor1"),
            (self.cor2, "cor2"),
            (self.brute_force, "brute_force"),
            (self.search, "search"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

impl fmt::Display for CriteriaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(","))
    }
}

impl FromStr for CriteriaSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = CriteriaSet::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "thm3" => set.thm3 = true,
                "thm5" => set.thm5 = true,
                "cor1" => set.cor1 = true,
                "cor2" => set.cor2 = true,
                "brute_force" | "brute" => set.brute_force = true,
                "search" | "decomposition_search" => set.search = true,
                other => return Err(Error::BadParameters(format!("unknown criterion {other:?}"))),
            }
        }
        Ok(set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettleOptions {
    pub criteria: CriteriaSet,
    /// Largest code size `q^{k*}` handed to brute force.
    pub brute_force_cap: u128,
    pub pair_budget: u128,
    pub search_budget: u128,
    /// Build and verify the settling witness where one exists.
    pub witnesses: bool,
}

impl Default for SettleOptions {
    fn default() -> Self {
        SettleOptions {
            criteria: CriteriaSet::arithmetic(),
            brute_force_cap: 3000,
            pair_budget: 10_000_000,
            search_budget: 1_000_000,
            witnesses: false,
        }
    }
}

/// Outcome for one `(q, w1, w2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub q: u64,
    pub w1: u64,
    pub w2: u64,
    pub s_star: u64,
    pub k_star: u64,
    pub status: Status,
    pub criterion: Criterion,
    /// Smallest dimension from `k*` up known not to separate.
    pub settled_k: Option<u64>,
    /// Criterion that settled `settled_k`.
    pub settled_by: Criterion,
    /// Dimensions `1..=q-1`.
    pub codes_total: u64,
    /// Dimensions below `k*` plus those from `settled_k` up.
    pub codes_confirmed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<SeparationWitness>,
}

/// Arithmetic criterion settling RS_{s+1}(q), if any.
fn arithmetic_at(q: u64, p: u64, s: u64, w1: u64, w2: u64, criteria: &CriteriaSet) -> Option<Criterion> {
    if s * w1 * w2 < q - 1 || s + 2 > q {
        return None;
    }
    if criteria.thm3 && (q - 1) % s == 0 {
        return Some(Criterion::Thm3);
    }
    if criteria.thm5 && additive_shift_valid(q, s) {
        if let Some(case) = AdditiveConditions::evaluate(q, p, s, w1, w2).case() {
            return Some(Criterion::from_provenance(case));
        }
    }
    None
}

/// Decides the conjecture for one triple.
pub fn settle_triple(q: u64, w1: u64, w2: u64, options: &SettleOptions) -> Result<ScanRecord> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q < 3 || w1 == 0 || w2 == 0 || w1 * w2 < 2 {
        return Err(Error::BadParameters(format!("need q >= 3, w1, w2 >= 1, w1 w2 >= 2; got ({q}, {w1}, {w2})")));
    }
    let w = w1 * w2;
    let s_star = (q - 1).div_ceil(w);
    let k_star = s_star + 1;
    let criteria = &options.criteria;

    let mut criterion = arithmetic_at(q, p, s_star, w1, w2, criteria);
    if criterion.is_none() && criteria.cor1 && (w >= q - 1 || (q - 1) % w == 0) {
        criterion = Some(Criterion::Cor1);
    }
    // w | q gives s* = q / w; the additive argument needs F_{s*} to be a
    // subfield, and w = q is the multiplicative case s* = 1
    if criterion.is_none() && criteria.cor2 && q % w == 0 && (w == q || additive_shift_valid(q, q / w)) {
        criterion = Some(Criterion::Cor2);
    }

    let mut status = Status::Open;
    let mut witness = None;
    if criterion.is_some() {
        status = Status::Confirmed;
    }

    let needs_field = status == Status::Open && (criteria.brute_force || criteria.search)
        || (options.witnesses && criterion.is_some());
    let field = if needs_field { Some(FiniteField::new(q)?) } else { None };

    if status == Status::Open && criteria.brute_force {
        let size = (q as u128).checked_pow(k_star as u32);
        if size.is_some_and(|m| m <= options.brute_force_cap) {
            let field = field.as_ref().expect("field built");
            let code = rs_code(field, k_star as usize, options.brute_force_cap)?;
            match is_separating(&code, w1 as usize, w2 as usize, options.pair_budget) {
                Ok(v) if v.separating => status = Status::Refuted,
                Ok(_) => {
                    status = Status::Confirmed;
                    criterion = Some(Criterion::BruteForce);
                }
                Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if status == Status::Open && criteria.search {
        let field = field.as_ref().expect("field built");
        match search_witness(field, k_star as usize, w1 as usize, w2 as usize, options.search_budget) {
            Ok(Some(wit)) => {
                status = Status::Confirmed;
                criterion = Some(Criterion::DecompositionSearch);
                if options.witnesses {
                    witness = Some(wit);
                }
            }
            Ok(None) | Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    if options.witnesses && witness.is_none() {
        if let (Some(field), Some(c)) = (field.as_ref(), criterion) {
            let (k, w1, w2) = (k_star as usize, w1 as usize, w2 as usize);
            witness = match c {
                Criterion::Thm3 | Criterion::Cor1 => Some(multiplicative_witness(field, k, w1, w2)?),
                Criterion::Thm5Case1 | Criterion::Thm5Case2 | Criterion::Thm5Case3 => {
                    Some(additive_witness(field, k, w1, w2)?)
                }
                Criterion::Cor2 => multiplicative_witness(field, k, w1, w2)
                    .or_else(|_| additive_witness(field, k, w1, w2))
                    .ok(),
                _ => None,
            };
        }
    }

    let (settled_k, settled_by) = if status == Status::Confirmed {
        (Some(k_star), criterion.expect("confirmed has a criterion"))
    } else {
        (s_star + 1..q - 1)
            .find_map(|s| arithmetic_at(q, p, s, w1, w2, criteria).map(|c| (Some(s + 1), c)))
            .unwrap_or((None, Criterion::None))
    };
    let codes_total = q - 1;
    let codes_confirmed = s_star + settled_k.map_or(0, |k| q - k);

    Ok(ScanRecord {
        q,
        w1,
        w2,
        s_star,
        k_star,
        status,
        criterion: criterion.unwrap_or(Criterion::None),
        settled_k,
        settled_by,
        codes_total,
        codes_confirmed,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// `w1 = w2 = w`.
    Symmetric,
    /// Every `(w1, w2)` in the range.
    AllPairs,
}

impl FromStr for GridMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(GridMode::Symmetric),
            "all_pairs" | "all-pairs" => Ok(GridMode::AllPairs),
            other => Err(Error::BadParameters(format!("unknown grid mode {other:?}"))),
        }
    }
}

impl fmt::Display for GridMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridMode::Symmetric => "symmetric",
            GridMode::AllPairs => "all_pairs",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub w_min: u64,
    pub w_max: u64,
    pub q_min: u64,
    pub q_max: u64,
    pub mode: GridMode,
}

impl ScanGrid {
    /// Triples in `(q, w1, w2)` order. Only prime powers `q >= 3` are used,
    /// and pairs with `w1 w2 < 2` are skipped.
    pub fn triples(&self) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::new();
        for q in self.q_min.max(3)..=self.q_max {
            if prime_power(q).is_none() {
                continue;
            }
            for w1 in self.w_min..=self.w_max {
                match self.mode {
                    GridMode::Symmetric => {
                        if w1 * w1 >= 2 {
                            out.push((q, w1, w1));
                        }
                    }
                    GridMode::AllPairs => {
                        for w2 in self.w_min..=self.w_max {
                            if w1 >= 1 && w2 >= 1 && w1 * w2 >= 2 {
                                out.push((q, w1, w2));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub grid: Option<ScanGrid>,
    pub criteria: String,
    pub total: u64,
    pub confirmed: u64,
    pub refuted: u64,
    /// `confirmed/total` unreduced, or `None` for an empty grid.
    pub fraction_exact: Option<String>,
    pub fraction: Option<f64>,
    pub codes_total: u64,
    pub codes_confirmed: u64,
    pub code_fraction_exact: Option<String>,
    pub code_fraction: Option<f64>,
    pub per_criterion: BTreeMap<String, u64>,
    pub note: String,
}

const GRID_NOTE: &str = "q = 2 is skipped: RS codes over F_2 have length 1";

/// Exact counts over a set of records.
pub fn summarize(records: &[ScanRecord]) -> ScanSummary {
    let total = records.len() as u64;
    let confirmed = records.iter().filter(|r| r.status == Status::Confirmed).count() as u64;
    let refuted = records.iter().filter(|r| r.status == Status::Refuted).count() as u64;
    let codes_total: u64 = records.iter().map(|r| r.codes_total).sum();
    let codes_confirmed: u64 = records.iter().map(|r| r.codes_confirmed).sum();
    let mut per_criterion = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == Status::Confirmed) {
        *per_criterion.entry(r.criterion.name().to_string()).or_insert(0) += 1;
    }
    let ratio = |a: u64, b: u64| (b > 0).then(|| (format!("{a}/{b}"), a as f64 / b as f64));
    let frac = ratio(confirmed, total);
    let code_frac = ratio(codes_confirmed, codes_total);
    ScanSummary {
        grid: None,
        criteria: String::new(),
        total,
        confirmed,
        refuted,
        fraction_exact: frac.as_ref().map(|f| f.0.clone()),
        fraction: frac.map(|f| f.1),
        codes_total,
        codes_confirmed,
        code_fraction_exact: code_frac.as_ref().map(|f| f.0.clone()),
        code_fraction: code_frac.map(|f| f.1),
        per_criterion,
        note: GRID_NOTE.to_string(),
    }
}

impl ScanSummary {
    pub const CSV_HEADER: [&'static str; 23] = [
        "mode", "w_min", "w_max", "q_min", "q_max", "criteria", "total", "confirmed", "refuted",
        "fraction_exact", "fraction", "codes_total", "codes_confirmed", "code_fraction_exact", "code_fraction",
        "thm3", "thm5_case1", "thm5_case2", "thm5_case3", "cor1", "cor2", "brute_force", "decomposition_search",
    ];

    /// Header plus one data row.
    pub fn to_csv(&self) -> String {
        let dec = |v: Option<f64>| v.map_or("undefined".to_string(), |x| format!("{x:.6}"));
        let exact = |v: &Option<String>| v.clone().unwrap_or_else(|| "undefined".to_string());
        let mut row: Vec<String> = match &self.grid {
            Some(g) => vec![
                g.mode.to_string(),
                g.w_min.to_string(),
                g.w_max.to_string(),
                g.q_min.to_string(),
                g.q_max.to_string(),
            ],
            None => vec![String::new(); 5],
        };
        row.extend([
            self.criteria.clone(),
            self.total.to_string(),
            self.confirmed.to_string(),
            self.refuted.to_string(),
            exact(&self.fraction_exact),
            dec(self.fraction),
            self.codes_total.to_string(),
            self.codes_confirmed.to_string(),
            exact(&self.code_fraction_exact),
            dec(self.code_fraction),
        ]);
        row.extend(
            Criterion::ALL
                .iter()
                .filter(|c| **c != Criterion::None)
                .map(|c| self.per_criterion.get(c.name()).copied().unwrap_or(0).to_string()),
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::CSV_HEADER).expect("in-memory write");
        w.write_record(&row).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Runs `settle_triple` over the grid on the current rayon pool, writes one
/// JSON line per record sorted by `(q, w1, w2)` to `sink`, and returns the
/// summary. If a triple fails, the records sorted before it are written,
/// followed by a `{"partial":true,...}` marker line, and the error is
/// returned.
pub fn run_scan<W: Write>(grid: &ScanGrid, options: &SettleOptions, sink: &mut W) -> Result<ScanSummary> {
    let triples = grid.triples();
    let results: Vec<Result<ScanRecord>> = triples
        .par_iter()
        .map(|&(q, w1, w2)| settle_triple(q, w1, w2, options))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let io = |e: std::io::Error| Error::BadParameters(format!("write failed: {e}"));
    for (r, &(q, w1, w2)) in results.into_iter().zip(&triples) {
        match r {
            Ok(rec) => {
                writeln!(sink, "{}", serde_json::to_string(&rec).expect("record serializes")).map_err(io)?;
                records.push(rec);
            }
            Err(e) => {
                let marker = serde_json::json!({
                    "partial": true,
                    "failed": {"q": q, "w1": w1, "w2": w2},
                    "error": e.to_string(),
                });
                writeln!(sink, "{marker}").map_err(io)?;
                return Err(e);
            }
        }
    }
    let mut summary = summarize(&records);
    summary.grid = Some(grid.clone());
    summary.criteria = options.criteria.to_string();
    Ok(summary)
}
