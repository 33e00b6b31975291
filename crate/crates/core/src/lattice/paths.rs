//! Exact enumeration of lattice paths.
//!
//! A path of `n` steps is a sequence of directions `d₀ … dₙ`. Step `k`
//! moves the walker by `d_k` and then either keeps the direction or reverses
//! it, so the net displacement is `d₀ + … + d_{n−1}` and the final direction
//! is `dₙ`. Grouping the `2ⁿ` paths by their number of reversals `R` gives
//! the amplitude `Σ_R N(R)·(1 − aΔt)^{n−R}·(aΔt)^R`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Direction, Kernel, LatticeSpec, TransitionRates};
use crate::error::{Error, Result};

/// Largest `n` accepted by the enumerator (`2²⁴` paths).
pub const MAX_ENUMERATION_STEPS: u32 = 24;

/// Endpoint of an `n`-step path family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathQuery {
    pub steps: u32,
    pub start_dir: Direction,
    pub end_dir: Direction,
    /// Net displacement in lattice cells.
    pub displacement: i64,
    /// Keep only the term with exactly this many reversals.
    pub reversal_count: Option<u32>,
}

impl PathQuery {
    pub fn new(steps: u32, start_dir: Direction, end_dir: Direction, displacement: i64) -> Self {
        Self {
            steps,
            start_dir,
            end_dir,
            displacement,
            reversal_count: None,
        }
    }

    pub fn with_reversals(mut self, reversals: u32) -> Self {
        self.reversal_count = Some(reversals);
        self
    }

    /// Whether any path can reach the endpoint. Every path has
    /// `displacement ≡ steps (mod 2)` and `|displacement| ≤ steps`.
    pub fn is_feasible(&self) -> bool {
        let n = self.steps as i64;
        self.displacement.abs() <= n && (n - self.displacement).rem_euclid(2) == 0
    }
}

fn walk(steps: u32, start: Direction, mask: u32) -> (i64, Direction, u32) {
    let mut dir = start;
    let mut displacement = 0;
    for k in 0..steps {
        displacement += dir.sign();
        if mask >> k & 1 == 1 {
            dir = dir.reversed();
        }
    }
    (displacement, dir, mask.count_ones())
}

fn check_bound(steps: u32) -> Result<()> {
    if steps > MAX_ENUMERATION_STEPS {
        return Err(Error::EnumerationBound {
            n: steps,
            max: MAX_ENUMERATION_STEPS,
        });
    }
    Ok(())
}

/// Path counts `N(R)` for `R = 0..=n` at the query's endpoint. The reversal
/// filter is ignored. Infeasible endpoints give all zeros.
pub fn reversal_histogram(query: &PathQuery) -> Result<Vec<u64>> {
    check_bound(query.steps)?;
    let mut counts = vec![0u64; query.steps as usize + 1];
    if !query.is_feasible() {
        return Ok(counts);
    }
    for mask in 0..1u32 << query.steps {
        let (displacement, end, reversals) = walk(query.steps, query.start_dir, mask);
        if displacement == query.displacement && end == query.end_dir {
            counts[reversals as usize] += 1;
        }
    }
    Ok(counts)
}

/// Histograms for every endpoint reached from `start_dir`, from a single
/// sweep over all `2ⁿ` paths. Keys are `(displacement, end_dir)`.
pub fn endpoint_histograms(
    steps: u32,
    start_dir: Direction,
) -> Result<BTreeMap<(i64, Direction), Vec<u64>>> {
    check_bound(steps)?;
    let mut table: BTreeMap<(i64, Direction), Vec<u64>> = BTreeMap::new();
    for mask in 0..1u32 << steps {
        let (displacement, end, reversals) = walk(steps, start_dir, mask);
        table
            .entry((displacement, end))
            .or_insert_with(|| vec![0; steps as usize + 1])[reversals as usize] += 1;
    }
    Ok(table)
}

/// Sum over paths of `(straight)^{n−R}·(reversal)^R`, using the kernel's
/// weights. Infeasible endpoints return exactly zero rather than an error.
pub fn path_sum_amplitude(
    query: &PathQuery,
    rates: &TransitionRates,
    spec: &LatticeSpec,
    kernel: Kernel,
) -> Result<Complex64> {
    let counts = reversal_histogram(query)?;
    let (straight, reversal) = kernel.weights(rates, spec);
    Ok(weighted_sum(&counts, query.steps, straight, reversal, query.reversal_count))
}

pub(crate) fn weighted_sum(
    counts: &[u64],
    steps: u32,
    straight: Complex64,
    reversal: Complex64,
    only: Option<u32>,
) -> Complex64 {
    counts
        .iter()
        .enumerate()
        .filter(|&(r, _)| only.is_none_or(|keep| keep as usize == r))
        .map(|(r, &count)| {
            let r = r as u32;
            straight.powu(steps - r) * reversal.powu(r) * count as f64
        })
        .sum()
}
