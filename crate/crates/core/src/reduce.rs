//! Deterministic summation.
//!
//! Parallel work is split into fixed-size blocks whose boundaries depend only
//! on the problem size. Block results are combined by a fixed pairwise tree,
//! so the result is bit-identical for any number of worker threads.

use std::ops::Range;

use rayon::prelude::*;

use crate::Real;

/// Block length used by [`par_blocks`].
pub const BLOCK: usize = 4096;

/// Pairwise (cascade) summation.
pub fn pairwise_sum<F: Real>(xs: &[F]) -> F {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().fold(F::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Maps `op` over `[0, len)` in blocks of [`BLOCK`] indices, returning the
/// block results in index order.
pub fn par_blocks<T, Op>(len: usize, op: Op) -> Vec<T>
where
    T: Send,
    Op: Fn(Range<usize>) -> T + Sync + Send,
{
    let nblocks = len.div_ceil(BLOCK);
    (0..nblocks)
        .into_par_iter()
        .map(|b| op(b * BLOCK..((b + 1) * BLOCK).min(len)))
        .collect()
}

/// Elementwise pairwise reduction of equally sized vectors.
pub fn pairwise_sum_columns<F: Real>(rows: &[Vec<F>]) -> Vec<F> {
    match rows.len() {
        0 => Vec::new(),
        1 => rows[0].clone(),
        n => {
            let (a, b) = rows.split_at(n / 2);
            let left = pairwise_sum_columns(a);
            let right = pairwise_sum_columns(b);
            left.iter().zip(&right).map(|(&x, &y)| x + y).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
    }

    #[test]
    fn blocks_cover_range_in_order() {
        let sums = par_blocks(3 * BLOCK + 5, |r| r.len());
        assert_eq!(sums, vec![BLOCK, BLOCK, BLOCK, 5]);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let data: Vec<f64> = (0..50_000).map(|i| ((i as f64) * 0.37).sin() / 3.0).collect();
        let run = || {
            let parts = par_blocks(data.len(), |r| pairwise_sum(&data[r]));
            pairwise_sum(&parts)
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
        assert_eq!(one.to_bits(), four.to_bits());
    }
}
