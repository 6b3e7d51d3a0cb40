//! Brute-force rediscovery of the classification rows: enumerate
//! `P = 1 + Σ a_i T^i` over a coefficient grid and keep the sparse powers.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::Zero;

use super::{normalization, ClassifyError, CompiledRow, TableRow};
use crate::coeffield::GaussianRational;
use crate::polycore::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub d: u32,
    /// Keep powers with at most `k` terms.
    pub k: usize,
    pub max_deg: u32,
    /// Coefficient values; zero is always added and duplicates are dropped.
    pub grid: Vec<GaussianRational>,
}

impl OracleConfig {
    /// Slot values: zero first, then the grid in the given order.
    pub fn values(&self) -> Vec<GaussianRational> {
        let mut v = alloc::vec![GaussianRational::zero()];
        for g in &self.grid {
            if !v.contains(g) {
                v.push(g.clone());
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleHit {
    pub p: UniPoly,
    pub d: u32,
    pub expansion: UniPoly,
    pub xi1: GaussianRational,
    pub l1: i64,
    /// Ids of every base-table row the hit normalizes to.
    pub matches: Vec<String>,
}

/// Number of candidate polynomials, counting the excluded `P = 1` (index 0).
pub fn oracle_space(cfg: &OracleConfig) -> Option<u64> {
    (cfg.values().len() as u64).checked_pow(cfg.max_deg)
}

fn candidate(values: &[GaussianRational], max_deg: u32, mut index: u64) -> UniPoly {
    let base = values.len() as u64;
    let mut terms = alloc::vec![(0i64, GaussianRational::from_int(1))];
    for deg in 1..=max_deg as i64 {
        let digit = (index % base) as usize;
        index /= base;
        if digit != 0 {
            terms.push((deg, values[digit].clone()));
        }
    }
    UniPoly::from_coeffs(terms)
}

/// Rows whose pattern reproduces `p` exactly at the normalization read off
/// `expansion`; only base-table rows with the same `d` and term count qualify.
pub fn match_rows(
    rows: &[CompiledRow],
    p: &UniPoly,
    d: u32,
    expansion: &UniPoly,
) -> Result<Vec<String>, ClassifyError> {
    let Some((xi1, l1)) = normalization(expansion) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for c in rows {
        let row: &TableRow = &c.row;
        if !row.base_table || row.d != d || row.k() != expansion.term_count() {
            continue;
        }
        let exps: Vec<i64> = expansion.coeffs().skip(1).map(|(e, _)| e).collect();
        if exps.iter().zip(&row.multipliers).any(|(e, m)| *e != m * l1) {
            continue;
        }
        let xi2 = row.has_free_cell().then(|| expansion.coeff(row.multipliers[1] * l1).cloned()).flatten();
        if row.has_free_cell() && xi2.is_none() {
            continue;
        }
        if c.instantiate(&xi1, xi2.as_ref(), l1)? == *p {
            out.push(row.id.clone());
        }
    }
    Ok(out)
}

/// Candidates with index in `range` (index 0, `P = 1`, is skipped).
pub fn oracle_shard(
    cfg: &OracleConfig,
    rows: &[CompiledRow],
    range: Range<u64>,
) -> Result<Vec<OracleHit>, ClassifyError> {
    let values = cfg.values();
    let mut hits = Vec::new();
    for index in range.start.max(1)..range.end {
        let p = candidate(&values, cfg.max_deg, index);
        let expansion = p.pow(cfg.d)?;
        if expansion.term_count() > cfg.k {
            continue;
        }
        let matches = match_rows(rows, &p, cfg.d, &expansion)?;
        let (xi1, l1) = normalization(&expansion).expect("nonconstant power");
        hits.push(OracleHit { p, d: cfg.d, expansion, xi1, l1, matches });
    }
    Ok(hits)
}

/// Serial exhaustive search over the whole grid.
pub fn oracle_search(cfg: &OracleConfig, rows: &[TableRow]) -> Result<Vec<OracleHit>, ClassifyError> {
    let compiled = rows.iter().map(CompiledRow::new).collect::<Result<Vec<_>, _>>()?;
    let end = oracle_space(cfg).expect("grid too large to enumerate");
    oracle_shard(cfg, &compiled, 0..end)
}
