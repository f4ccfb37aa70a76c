//! Dense ranking of assignments, used as a perfect hash by the exhaustive searches.
//!
//! The assignments of an instance are the distinct permutations of the multiset
//! `{0^n_0, 1^n_1, ..., EMPTY^e}`. They are ranked in lexicographic order of the
//! cell vector, so rank 0 is "all types ascending, empties last".

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Instance, EMPTY};

/// Multinomial coefficient `(Σ counts)! / Π counts!`, or `None` on overflow.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut total: u128 = 1;
    let mut placed: u128 = 0;
    for &c in counts {
        // multiply by binom(placed + c, c) one factor at a time; each prefix is an integer
        for i in 1..=c as u128 {
            placed += 1;
            total = total.checked_mul(placed)? / i;
        }
    }
    Some(total)
}

/// The ranked state space of one instance.
#[derive(Debug, Clone)]
pub struct StateSpace {
    symbols: Vec<u8>,
    counts: Vec<usize>,
    len: usize,
    total: u64,
}

impl StateSpace {
    /// Fails with `BudgetExceeded` when the instance has more than `budget` assignments.
    pub fn new(instance: &Instance, budget: u64) -> Result<Self> {
        let k = instance.profile().k();
        let mut symbols: Vec<u8> = (0..k as u8).collect();
        symbols.push(EMPTY);
        let mut counts = instance.profile().counts().to_vec();
        counts.push(instance.empty_count());
        let count = multinomial(&counts).unwrap_or(u128::MAX);
        if count > u128::from(budget) {
            return Err(Error::BudgetExceeded { count, budget });
        }
        Ok(Self { symbols, counts, len: instance.node_count(), total: count as u64 })
    }

    /// Number of assignments.
    pub fn size(&self) -> u64 {
        self.total
    }

    pub fn cell_count(&self) -> usize {
        self.len
    }

    fn symbol_index(&self, c: u8) -> usize {
        if c == EMPTY {
            self.symbols.len() - 1
        } else {
            c as usize
        }
    }

    pub fn rank(&self, cells: &[u8]) -> u64 {
        let mut remaining = [0u128; crate::game::MAX_TYPES + 1];
        for (r, &c) in remaining.iter_mut().zip(&self.counts) {
            *r = c as u128;
        }
        let mut block = self.total as u128;
        let mut rank: u128 = 0;
        for (i, &c) in cells.iter().enumerate() {
            let left = (self.len - i) as u128;
            let x = self.symbol_index(c);
            for &r in &remaining[..x] {
                rank += block * r / left;
            }
            block = block * remaining[x] / left;
            remaining[x] -= 1;
        }
        rank as u64
    }

    pub fn unrank(&self, mut rank: u64, cells: &mut [u8]) {
        let mut remaining: Vec<u128> = self.counts.iter().map(|&c| c as u128).collect();
        let mut block = self.total as u128;
        for (i, cell) in cells.iter_mut().enumerate() {
            let left = (self.len - i) as u128;
            for (x, r) in remaining.iter_mut().enumerate() {
                let sub = block * *r / left;
                if u128::from(rank) < sub {
                    *cell = self.symbols[x];
                    block = sub;
                    *r -= 1;
                    break;
                }
                rank -= sub as u64;
            }
        }
    }

    pub fn first(&self) -> Vec<u8> {
        let mut cells = vec![0; self.len];
        self.unrank(0, &mut cells);
        cells
    }

    /// Splits `0..size` into contiguous ranges for parallel workers.
    pub fn chunks(&self, jobs: usize) -> Vec<Range<u64>> {
        let pieces = (jobs.max(1) as u64 * 8).min(self.total.max(1));
        let step = self.total.div_ceil(pieces).max(1);
        (0..self.total).step_by(step as usize).map(|s| s..(s + step).min(self.total)).collect()
    }

    /// Folds every state in rank order through per-range workers and reduces the
    /// partial results left to right, so the outcome does not depend on `jobs`.
    pub fn par_fold<T, F, R>(&self, jobs: usize, init: impl Fn() -> T + Sync, fold: F, reduce: R) -> T
    where
        T: Send,
        F: Fn(&mut T, u64, &[u8]) + Sync,
        R: Fn(T, T) -> T,
    {
        let work = || {
            self.chunks(jobs)
                .into_par_iter()
                .map(|range| {
                    let mut acc = init();
                    let mut cells = vec![0; self.len];
                    self.unrank(range.start, &mut cells);
                    for r in range {
                        fold(&mut acc, r, &cells);
                        next_permutation(&mut cells);
                    }
                    acc
                })
                .collect::<Vec<_>>()
        };
        let parts = run_with_jobs(jobs, work);
        parts.into_iter().reduce(reduce).unwrap_or_else(init)
    }
}

/// Runs `f` on a pool of `jobs` threads; `jobs == 0` uses the global pool.
pub fn run_with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Advances to the next lexicographic permutation; returns false after the last one.
pub fn next_permutation(cells: &mut [u8]) -> bool {
    let Some(i) = (1..cells.len()).rev().find(|&i| cells[i - 1] < cells[i]) else {
        return false;
    };
    let j = (i..cells.len()).rev().find(|&j| cells[j] > cells[i - 1]).unwrap();
    cells.swap(i - 1, j);
    cells[i..].reverse();
    true
}
