//! Exact enumeration oracles and the statistical tests used to compare
//! samples against limit laws.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dist::{EmpiricalDist, Pmf};
use crate::error::{Error, Result};
use crate::perm::{
    enumerate_avoiders, fixed_point_measures, fixed_points, pattern_from_digits, Permutation,
};
use crate::rng::RngStream;
use crate::sample::uniform_avoider_321;

/// Largest `n` accepted by the exact fixed-point oracles.
pub const MAX_EXACT_N: usize = 10;
/// Standard minimum expected cell count for Pearson's test.
pub const DEFAULT_BIN_FLOOR: f64 = 5.0;
/// Two-sided 95% normal quantile used for binomial intervals.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// `C_n`, exact for `n <= 35`.
pub fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| {
        let c = c as u128 * 2 * (2 * k as u128 + 1) / (k as u128 + 2);
        u64::try_from(c).expect("catalan overflow")
    })
}

/// An exact distribution as integer counts over a common total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactDist<K: Ord> {
    pub counts: BTreeMap<K, u64>,
    pub total: u64,
}

impl<K: Ord + Clone> ExactDist<K> {
    pub fn probability(&self, k: &K) -> Ratio<u64> {
        Ratio::new(self.counts.get(k).copied().unwrap_or(0), self.total)
    }

    pub fn map<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> ExactDist<J> {
        let mut counts = BTreeMap::new();
        for (k, &c) in &self.counts {
            *counts.entry(f(k)).or_insert(0) += c;
        }
        ExactDist {
            counts,
            total: self.total,
        }
    }
}

impl ExactDist<u64> {
    pub fn to_pmf(&self) -> Pmf {
        let len = self
            .counts
            .keys()
            .next_back()
            .map_or(1, |&k| k as usize + 1);
        let mut masses = vec![0.0; len];
        for (&k, &c) in &self.counts {
            masses[k as usize] = c as f64 / self.total as f64;
        }
        Pmf::from_masses(masses).expect("exact frequencies form a pmf")
    }
}

fn exact_guard(n: usize) -> Result<()> {
    if (1..=MAX_EXACT_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::Guard {
            what: "n",
            value: n,
            min: 1,
            max: MAX_EXACT_N,
        })
    }
}

/// Law of the number of fixed points of a uniform element of `Av_n(pattern)`.
pub fn exact_fp_distribution(n: usize, pattern: &Permutation) -> Result<ExactDist<u64>> {
    exact_guard(n)?;
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for perm in enumerate_avoiders(n, pattern)? {
        *counts.entry(fixed_points(&perm).mass() as u64).or_insert(0) += 1;
        total += 1;
    }
    Ok(ExactDist { counts, total })
}

/// Joint law of (front count, back count) over `Av_n(321)`, split at `⌊n/2⌋`.
pub fn exact_front_back_joint(n: usize) -> Result<ExactDist<(u64, u64)>> {
    exact_guard(n)?;
    let pattern = pattern_from_digits("321")?;
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for perm in enumerate_avoiders(n, &pattern)? {
        let (f, b) = fixed_point_measures(&perm);
        *counts
            .entry((f.mass() as u64, b.mass() as u64))
            .or_insert(0) += 1;
        total += 1;
    }
    Ok(ExactDist { counts, total })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees: u64,
    pub p_value: f64,
    /// Lower edge of each row bin after tail merging; the last bin is open-ended.
    pub row_bins: Vec<u64>,
    pub col_bins: Vec<u64>,
}

/// Pearson test of independence for a table of `(row, column)` outcomes.
///
/// Tail categories (largest values) are merged, one dimension at a time,
/// until every expected cell count reaches `bin_floor`.
pub fn chi_square_independence(
    joint: &EmpiricalDist<(u64, u64)>,
    bin_floor: f64,
) -> Result<ChiSquareResult> {
    let total = joint.total() as f64;
    let row_marg = joint.map(|&(r, _)| r);
    let col_marg = joint.map(|&(_, c)| c);
    let mut rows: Vec<(u64, f64)> = row_marg.iter().map(|(&k, c)| (k, c as f64)).collect();
    let mut cols: Vec<(u64, f64)> = col_marg.iter().map(|(&k, c)| (k, c as f64)).collect();

    loop {
        if rows.len() < 2 || cols.len() < 2 {
            return Err(Error::DegenerateTable {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        let min_row = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let min_col = cols.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        if min_row * min_col / total >= bin_floor {
            break;
        }
        // merge the last two categories of the dimension holding the rarer tail
        let target = if rows.last().unwrap().1 <= cols.last().unwrap().1 {
            &mut rows
        } else {
            &mut cols
        };
        let (_, c) = target.pop().unwrap();
        target.last_mut().unwrap().1 += c;
    }

    let bin_of = |edges: &[(u64, f64)], v: u64| edges.partition_point(|e| e.0 <= v) - 1;
    let mut observed = vec![vec![0.0; cols.len()]; rows.len()];
    for (&(r, c), n) in joint.iter() {
        observed[bin_of(&rows, r)][bin_of(&cols, c)] += n as f64;
    }
    let mut statistic = 0.0;
    for (i, row) in observed.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let e = rows[i].1 * cols[j].1 / total;
            statistic += (o - e) * (o - e) / e;
        }
    }
    let degrees = ((rows.len() - 1) * (cols.len() - 1)) as u64;
    let p_value = ChiSquared::new(degrees as f64)
        .expect("positive degrees of freedom")
        .sf(statistic);
    Ok(ChiSquareResult {
        statistic,
        degrees,
        p_value,
        row_bins: rows.iter().map(|r| r.0).collect(),
        col_bins: cols.iter().map(|c| c.0).collect(),
    })
}

/// A Monte Carlo proportion with its Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64, z: f64) -> Proportion {
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = z * z;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        Proportion {
            successes,
            trials,
            estimate: p,
            lower: (centre - half).max(0.0),
            upper: (centre + half).min(1.0),
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// Estimate of `P(some fixed point lies in [a, b])` for a uniform element of `Av_n(321)`.
pub fn midrange_fp_probability(
    n: usize,
    a: usize,
    b: usize,
    samples: u64,
    rng: &mut RngStream,
) -> Result<Proportion> {
    if !(1 <= a && a <= b && b <= n) {
        return Err(Error::Guard {
            what: "window start",
            value: a,
            min: 1,
            max: b.min(n),
        });
    }
    let mut hits = 0;
    for _ in 0..samples {
        let perm = uniform_avoider_321(n, rng)?;
        if fixed_points(&perm)
            .positions()
            .iter()
            .any(|&i| (a as u64..=b as u64).contains(&i))
        {
            hits += 1;
        }
    }
    Ok(Proportion::new(hits, samples, Z_95))
}
