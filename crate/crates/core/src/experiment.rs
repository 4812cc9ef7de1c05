//! Parallel Monte Carlo batches with reproducible, thread-count independent
//! output.
//!
//! A batch of `count` draws is split into `streams` contiguous chunks; chunk
//! `i` is generated from `RngStream::new(seed, i)` and the chunks are
//! concatenated in stream order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::perm::{fixed_point_measures, FixedPointMeasure};
use crate::rng::RngStream;
use crate::sample::uniform_avoider_321;

pub const DEFAULT_STREAMS: u64 = 64;

/// Runs `draw` `count` times across `streams` independent streams.
pub fn run_batch<T, F>(seed: u64, streams: u64, count: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync,
{
    let streams = streams.max(1);
    let chunks: Vec<Vec<T>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let len = count / streams + u64::from(s < count % streams);
            let mut rng = RngStream::new(seed, s);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Fallible variant of [`run_batch`]; the first error in stream order wins.
pub fn try_run_batch<T, F>(seed: u64, streams: u64, count: u64, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    run_batch(seed, streams, count, draw).into_iter().collect()
}

/// Fixed points of one permutation, split into front and back measures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub front: FixedPointMeasure,
    pub back: FixedPointMeasure,
}

impl FixedPointRecord {
    pub fn total(&self) -> u64 {
        (self.front.mass() + self.back.mass()) as u64
    }

    /// Absolute positions of all fixed points for a permutation of length `n`.
    pub fn absolute_positions(&self, n: u64) -> impl Iterator<Item = u64> + '_ {
        self.front
            .positions()
            .iter()
            .copied()
            .chain(self.back.positions().iter().map(move |&b| n + 1 - b))
    }

    /// Whether some fixed point lies in `[a, b]`.
    pub fn hits_window(&self, n: u64, a: u64, b: u64) -> bool {
        self.absolute_positions(n).any(|i| (a..=b).contains(&i))
    }
}

/// Front/back fixed-point measures of `count` uniform elements of `Av_n(321)`.
pub fn fixed_point_batch(
    n: usize,
    count: u64,
    seed: u64,
    streams: u64,
) -> Result<Vec<FixedPointRecord>> {
    try_run_batch(seed, streams, count, |rng| {
        let perm = uniform_avoider_321(n, rng)?;
        let (front, back) = fixed_point_measures(&perm);
        Ok(FixedPointRecord { front, back })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn batch_is_deterministic_and_sized() {
        let a = run_batch(9, 7, 100, |r| r.next_u64());
        let b = run_batch(9, 7, 100, |r| r.next_u64());
        assert_eq!(a.len(), 100);
        assert_eq!(a, b);
        assert_ne!(a, run_batch(10, 7, 100, |r| r.next_u64()));
        assert!(run_batch(1, 4, 0, |r| r.next_u64()).is_empty());
    }

    #[test]
    fn record_positions() {
        let r = FixedPointRecord {
            front: FixedPointMeasure::new(vec![1, 3]).unwrap(),
            back: FixedPointMeasure::new(vec![1]).unwrap(),
        };
        let abs: Vec<u64> = r.absolute_positions(10).collect();
        assert_eq!(abs, vec![1, 3, 10]);
        assert!(r.hits_window(10, 2, 3));
        assert!(!r.hits_window(10, 4, 9));
        assert_eq!(r.total(), 3);
    }
}
