//! Rayon drivers for the searches, surveys and simulations of the core crate.
//!
//! Work is split into index ranges and reduced in index order, so results do
//! not depend on the number of threads.

use std::ops::Range;

use iterstbc_core::certificates::FactorSearcher;
use iterstbc_core::channel::{ChannelConfig, DecoderKind, SimResult, Subcode};
use iterstbc_core::codebook::{diversity_sample, slot_sweep, CodeSpec, Constellation, DiversityReport, SurveyMode, SurveyStats};
use iterstbc_core::decodability::{anticommutator, BasisMatrix};
use iterstbc_core::search::{linear_factor_range, linear_factor_search_range, quadratic_factor_search_range, SearchSpace};
use iterstbc_core::{DElement, IteratedAlgebra};
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "ITERSTBC_THREADS";

/// Sizes the global pool from `ITERSTBC_THREADS`; later calls are no-ops.
pub fn init_threads() {
    let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()) else {
        return;
    };
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

const CHUNKS: u128 = 256;

fn chunks(range: Range<u128>) -> Vec<Range<u128>> {
    let len = range.end.saturating_sub(range.start);
    if len == 0 {
        return Vec::new();
    }
    let step = len.div_ceil(CHUNKS).max(1);
    let mut out = Vec::new();
    let mut start = range.start;
    while start < range.end {
        let end = (start + step).min(range.end);
        out.push(start..end);
        start = end;
    }
    out
}

/// Factor searches over chunks of the odometer, first hit in index order.
pub struct ParallelSearcher;

impl FactorSearcher for ParallelSearcher {
    fn linear(&self, a: &IteratedAlgebra, space: &SearchSpace) -> iterstbc_core::Result<Option<DElement>> {
        chunks(linear_factor_range(space))
            .into_par_iter()
            .find_map_first(|r| match linear_factor_search_range(a, space, r) {
                Ok(Some((_, z))) => Some(Ok(z)),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            })
            .transpose()
    }

    fn quadratic(&self, a: &IteratedAlgebra, space: &SearchSpace) -> iterstbc_core::Result<Option<(DElement, DElement)>> {
        chunks(0..space.points())
            .into_par_iter()
            .find_map_first(|r| quadratic_factor_search_range(a, space, r).transpose())
            .transpose()
    }
}

const SURVEY_BATCH: u64 = 1024;

/// Parallel `min_det_survey`: batches are evaluated in parallel and folded
/// in index order.
pub fn survey(spec: &CodeSpec, constellation: &Constellation, mode: &SurveyMode) -> iterstbc_core::Result<SurveyStats> {
    let len = spec.survey_len(constellation, mode)?;
    let mut stats = SurveyStats::default();
    let mut start = 0;
    while start < len {
        let end = (start + SURVEY_BATCH).min(len);
        let entries = (start..end)
            .into_par_iter()
            .map(|i| spec.survey_entry(constellation, mode, i))
            .collect::<iterstbc_core::Result<Vec<_>>>()?;
        for e in &entries {
            stats.push(e);
        }
        start = end;
    }
    Ok(stats)
}

/// Parallel `sparsity_pattern`.
pub fn sparsity_pattern(matrices: &[BasisMatrix]) -> iterstbc_core::Result<Vec<Vec<bool>>> {
    let s = matrices.len();
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|g| (g..s).map(move |k| (g, k))).collect();
    let flags = pairs
        .par_iter()
        .map(|&(g, k)| Ok(!anticommutator(&matrices[g].matrix, &matrices[k].matrix)?.is_zero()))
        .collect::<iterstbc_core::Result<Vec<bool>>>()?;
    let mut pattern = vec![vec![false; s]; s];
    for (&(g, k), nz) in pairs.iter().zip(flags) {
        pattern[g][k] = nz;
        pattern[k][g] = nz;
    }
    Ok(pattern)
}

/// Parallel `Subcode::simulate`; trial `t` always uses stream `(seed, t)`.
pub fn simulate(sub: &Subcode, cfg: &ChannelConfig, kind: DecoderKind) -> iterstbc_core::Result<SimResult> {
    cfg.validate()?;
    let errors = (0..cfg.trials)
        .into_par_iter()
        .map(|t| Ok(u64::from(sub.trial(cfg, kind, t)?.is_error())))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SimResult { decoder: kind, trials: cfg.trials, errors })
}

/// Parallel `diversity_evidence`, violations in the sequential order.
pub fn diversity(spec: &CodeSpec, constellation: &Constellation, sample: u64, seed: u64) -> iterstbc_core::Result<DiversityReport> {
    let sampled = diversity_sample(spec, constellation, sample, seed);
    let swept = slot_sweep(spec, constellation);
    let singular = |list: &[Vec<_>]| {
        list.par_iter()
            .map(|s| Ok(spec.encode_ring(s)?.exact.det()?.is_zero()))
            .collect::<iterstbc_core::Result<Vec<bool>>>()
    };
    let flags_a = singular(&sampled)?;
    let flags_b = singular(&swept)?;
    let mut report = DiversityReport { sampled: sampled.len() as u64, swept: swept.len() as u64, violations: Vec::new() };
    for (s, bad) in sampled.into_iter().zip(flags_a).chain(swept.into_iter().zip(flags_b)) {
        if bad {
            report.violations.push(s);
        }
    }
    Ok(report)
}
