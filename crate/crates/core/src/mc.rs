use rayon::prelude::*;

use crate::rng::{stream, StreamRng};

/// Runs `n` independent replicas in parallel, replica `i` on `stream(seed, i)`.
/// Output order is the replica order.
pub fn replicate<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng, usize) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            f(&mut rng, i)
        })
        .collect()
}

/// Fallible variant of [`replicate`]; the first error in replica order wins.
pub fn try_replicate<T, E, F>(seed: u64, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(&mut StreamRng, usize) -> Result<T, E> + Sync,
{
    replicate(seed, n, f).into_iter().collect()
}
