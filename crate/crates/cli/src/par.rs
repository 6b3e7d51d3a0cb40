//! Parallel drivers over the core shard kernels. Shards are merged in shard
//! order, so results do not depend on the thread count. Run them inside a
//! rayon pool to control the number of workers.

use lacunary_core::classify::{oracle_shard, oracle_space, ClassifyError, CompiledRow, OracleConfig, OracleHit, TableRow};
use lacunary_core::compgap::{kmin_box, kmin_shard, CompgapError, KminConfig, KminPartial};
use lacunary_core::digits::{exhaustive_shard, DigitSearchConfig, DigitSolution, DigitsError};
use rayon::prelude::*;

/// Candidates per oracle shard.
pub const ORACLE_CHUNK: u64 = 2048;

pub fn oracle_search(cfg: &OracleConfig, rows: &[TableRow]) -> Result<Vec<OracleHit>, ClassifyError> {
    let compiled = rows.iter().map(CompiledRow::new).collect::<Result<Vec<_>, _>>()?;
    let end = oracle_space(cfg).expect("caller checks the search size");
    let starts: Vec<u64> = (0..end).step_by(ORACLE_CHUNK as usize).collect();
    let parts = starts
        .par_iter()
        .map(|&s| oracle_shard(cfg, &compiled, s..(s + ORACLE_CHUNK).min(end)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// One shard per smallest box index of `g`.
pub fn kmin_search(cfg: &KminConfig) -> Result<KminPartial, CompgapError> {
    let n = kmin_box(cfg).len();
    let parts = (0..n).into_par_iter().map(|a| kmin_shard(cfg, a..a + 1)).collect::<Result<Vec<_>, _>>()?;
    let mut total = KminPartial::default();
    for p in parts {
        total.merge(p);
    }
    if total.best.is_none() {
        return Err(CompgapError::EmptySearchSpace);
    }
    Ok(total)
}

/// Solutions for the given leading exponents, concatenated in order.
pub fn digits_shards(cfg: &DigitSearchConfig, tops: &[i64]) -> Result<Vec<DigitSolution>, DigitsError> {
    let parts = tops.par_iter().map(|&t| exhaustive_shard(cfg, t..t + 1)).collect::<Result<Vec<_>, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn digits_search(cfg: &DigitSearchConfig) -> Result<Vec<DigitSolution>, DigitsError> {
    cfg.validate()?;
    let tops: Vec<i64> = cfg.top_range().collect();
    digits_shards(cfg, &tops)
}
