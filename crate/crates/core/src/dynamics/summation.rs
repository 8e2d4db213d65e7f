//! Fixed-order pairwise summation.
//!
//! The reduction tree depends only on the slice length, never on the number of
//! worker threads, so parallel and serial evaluation give bitwise-identical
//! results.

use std::ops::Add;

const LEAF: usize = 128;
#[cfg(feature = "parallel")]
const PARALLEL_MIN: usize = 4096;

pub fn pairwise_sum<T, V, F>(items: &[T], f: &F) -> V
where
    T: Sync,
    V: Copy + Default + Add<Output = V> + Send,
    F: Fn(&T) -> V + Sync,
{
    if items.len() <= LEAF {
        return items.iter().fold(V::default(), |acc, x| acc + f(x));
    }
    let (lo, hi) = items.split_at(items.len() / 2);
    #[cfg(feature = "parallel")]
    if items.len() >= PARALLEL_MIN {
        let (a, b) = rayon::join(|| pairwise_sum(lo, f), || pairwise_sum(hi, f));
        return a + b;
    }
    pairwise_sum(lo, f) + pairwise_sum(hi, f)
}
