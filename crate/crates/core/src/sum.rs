//! Compensated summation and the deterministic chunked reduction used by
//! every large sum in the crate.
//!
//! The reduction contract: terms are split into fixed-size chunks, each
//! chunk is summed sequentially in index order with Neumaier compensation,
//! and the chunk partials are combined in ascending chunk order. Chunk
//! boundaries depend only on the term count, never on the worker count, so
//! results are bit-identical whether the partials are computed on one
//! thread or many.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Fixed chunk size of the deterministic reduction. Changing this changes
/// rounding at the 1e-16 level and therefore the byte output of reports.
pub const CHUNK: usize = 4096;

/// Neumaier's variant of Kahan summation (handles terms larger than the
/// running sum).
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Neumaier::new();
    for x in iter {
        acc.add(x);
    }
    acc.total()
}

#[inline]
fn chunk_partial<F: Fn(usize) -> f64>(chunk: usize, n: usize, term: &F) -> f64 {
    let lo = chunk * CHUNK;
    let hi = ((chunk + 1) * CHUNK).min(n);
    let mut acc = Neumaier::new();
    for i in lo..hi {
        acc.add(term(i));
    }
    acc.total()
}

fn combine(partials: impl IntoIterator<Item = f64>) -> f64 {
    sum_iter(partials)
}

/// Deterministic sum of `term(0) + ... + term(n-1)`, sequential chunks.
pub fn sum_indexed_seq<F: Fn(usize) -> f64 + Sync>(n: usize, term: &F) -> f64 {
    let chunks = n.div_ceil(CHUNK);
    combine((0..chunks).map(|c| chunk_partial(c, n, term)))
}

/// Deterministic sum of `term(0) + ... + term(n-1)`. Chunk partials may be
/// computed in parallel; the result is identical to [`sum_indexed_seq`].
pub fn sum_indexed<F: Fn(usize) -> f64 + Sync>(n: usize, term: &F) -> f64 {
    #[cfg(feature = "parallel")]
    {
        let chunks = n.div_ceil(CHUNK);
        let partials: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|c| chunk_partial(c, n, term))
            .collect();
        combine(partials)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sum_indexed_seq(n, term)
    }
}

/// Evaluate `f(0), ..., f(n-1)` into a vector, in parallel when enabled.
/// Output order is the index order regardless of scheduling.
pub fn map_indexed<F: Fn(usize) -> f64 + Sync>(n: usize, f: &F) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_indexed`], kept callable for benchmarks.
pub fn map_indexed_seq<F: Fn(usize) -> f64 + Sync>(n: usize, f: &F) -> Vec<f64> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_lost_bits() {
        // 1 + 1e100 + 1 - 1e100 = 2, naive f64 gives 0
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_iter(xs), 2.0);
    }

    #[test]
    fn indexed_matches_sequential_exactly() {
        let term = |i: usize| ((i as f64) * 0.7391).sin() / ((i + 1) as f64);
        let n = 3 * CHUNK + 17;
        let a = sum_indexed(n, &term);
        let b = sum_indexed_seq(n, &term);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn indexed_deterministic_across_pool_sizes() {
        #[cfg(feature = "parallel")]
        {
            let term = |i: usize| (1.0 + i as f64).ln().cos();
            let n = 10 * CHUNK + 3;
            let one = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap()
                .install(|| sum_indexed(n, &term));
            let four = rayon::ThreadPoolBuilder::new()
                .num_threads(4)
                .build()
                .unwrap()
                .install(|| sum_indexed(n, &term));
            assert_eq!(one.to_bits(), four.to_bits());
        }
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(sum_indexed(0, &|_| 1.0), 0.0);
    }
}
