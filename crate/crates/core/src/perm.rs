//! Permutations in one-line notation, classical pattern containment and the
//! fixed-point statistic.
//!
//! Positions and values are 1-based everywhere in the public API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest pattern accepted by [`contains_pattern`].
pub const MAX_PATTERN_LEN: usize = 4;
/// Largest `n` accepted by [`enumerate_avoiders`].
pub const MAX_ENUMERATION_N: usize = 12;

/// A permutation of `{1..n}`, `n >= 1`, stored in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `values` is a bijection of `{1..n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; n + 1];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(Error::OutOfRange {
                    position: i + 1,
                    value: v as u64,
                    n,
                });
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::DuplicateValue { value: v as u64 });
            }
        }
        Ok(Permutation(values))
    }

    /// Callers guarantee that `values` is a bijection of `{1..n}`.
    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Permutation::new((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// The value at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses space-separated one-line notation, e.g. `"2 3 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

/// Parses a compact pattern name such as `"321"` (digits only, length ≤ 9).
pub fn pattern_from_digits(s: &str) -> Result<Permutation> {
    let values = s
        .chars()
        .map(|c| {
            c.to_digit(10)
                .ok_or_else(|| Error::Parse(format!("pattern {s:?} must consist of digits")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(values)
}

/// The atoms of a finite counting measure on `{1, 2, 3, ...}` in which every
/// atom has mass one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FixedPointMeasure(Vec<u64>);

impl FixedPointMeasure {
    pub fn new(positions: Vec<u64>) -> Result<Self> {
        if positions.first() == Some(&0) {
            return Err(Error::Parse("measure atoms must be positive".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(
                "measure atoms must be strictly increasing".into(),
            ));
        }
        Ok(FixedPointMeasure(positions))
    }

    pub(crate) fn from_sorted_unchecked(positions: Vec<u64>) -> Self {
        debug_assert!(FixedPointMeasure::new(positions.clone()).is_ok());
        FixedPointMeasure(positions)
    }

    pub fn empty() -> Self {
        FixedPointMeasure(Vec::new())
    }

    pub fn positions(&self) -> &[u64] {
        &self.0
    }

    /// Total mass, i.e. the number of atoms.
    pub fn mass(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, position: u64) -> bool {
        self.0.binary_search(&position).is_ok()
    }

    /// Bitmask of the atoms inside `[1, width]`; bit `i - 1` is set iff `i` is an atom.
    pub fn window_mask(&self, width: u32) -> u64 {
        assert!(width <= 64);
        self.0
            .iter()
            .take_while(|&&p| p <= width as u64)
            .fold(0u64, |m, &p| m | 1 << (p - 1))
    }
}

impl TryFrom<Vec<u64>> for FixedPointMeasure {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FixedPointMeasure::new(v)
    }
}

impl From<FixedPointMeasure> for Vec<u64> {
    fn from(m: FixedPointMeasure) -> Self {
        m.0
    }
}

impl fmt::Display for FixedPointMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Returns true iff `perm` contains an occurrence of `pattern`.
///
/// Exhaustive subsequence search; partial choices that are not
/// order-isomorphic to the pattern prefix are pruned immediately.
pub fn contains_pattern(perm: &Permutation, pattern: &Permutation) -> Result<bool> {
    let k = pattern.len();
    if k > MAX_PATTERN_LEN {
        return Err(Error::PatternTooLong(k));
    }
    if perm.len() < k {
        return Ok(false);
    }
    let mut chosen = [0u32; MAX_PATTERN_LEN];
    Ok(search(perm.values(), pattern.values(), 0, 0, &mut chosen))
}

fn search(values: &[u32], pattern: &[u32], start: usize, depth: usize, chosen: &mut [u32]) -> bool {
    let k = pattern.len();
    if depth == k {
        return true;
    }
    // Leave room for the remaining pattern entries.
    let last = values.len() + depth + 1 - k;
    for i in start..last.min(values.len()) {
        let v = values[i];
        let consistent = (0..depth).all(|s| (chosen[s] < v) == (pattern[s] < pattern[depth]));
        if consistent {
            chosen[depth] = v;
            if search(values, pattern, i + 1, depth + 1, chosen) {
                return true;
            }
        }
    }
    false
}

/// True iff some occurrence of `pattern` in `values` uses the last entry.
fn ends_with_pattern(values: &[u32], pattern: &[u32]) -> bool {
    let k = pattern.len();
    let Some((&last, head)) = values.split_last() else {
        return false;
    };
    if k == 0 {
        return true;
    }
    if head.len() < k - 1 {
        return false;
    }
    let mut chosen = [0u32; MAX_PATTERN_LEN];
    chosen[k - 1] = last;
    ends_search(head, pattern, 0, 0, &mut chosen)
}

fn ends_search(
    head: &[u32],
    pattern: &[u32],
    start: usize,
    depth: usize,
    chosen: &mut [u32],
) -> bool {
    let k = pattern.len();
    if depth == k - 1 {
        let last = chosen[k - 1];
        return (0..depth).all(|s| (chosen[s] < last) == (pattern[s] < pattern[k - 1]));
    }
    let stop = head.len() + depth + 2 - k;
    for i in start..stop.min(head.len()) {
        let v = head[i];
        let consistent = (0..depth).all(|s| (chosen[s] < v) == (pattern[s] < pattern[depth]));
        if consistent {
            chosen[depth] = v;
            if ends_search(head, pattern, i + 1, depth + 1, chosen) {
                return true;
            }
        }
    }
    false
}

/// Linear-time test for the absence of a decreasing subsequence of length 3.
///
/// A permutation avoids 321 iff the entries that are not left-to-right
/// maxima form an increasing sequence.
pub fn avoids_321(perm: &Permutation) -> bool {
    let mut max = 0;
    let mut last_small = 0;
    for &v in perm.values() {
        if v > max {
            max = v;
        } else if v < last_small {
            return false;
        } else {
            last_small = v;
        }
    }
    true
}

/// Positions `i` with `τ(i) = i`.
pub fn fixed_points(perm: &Permutation) -> FixedPointMeasure {
    let positions = perm
        .values()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v as usize == i + 1)
        .map(|(i, _)| i as u64 + 1)
        .collect();
    FixedPointMeasure::from_sorted_unchecked(positions)
}

/// Indices (1-based, increasing) of the left-to-right maxima, with their values.
pub fn left_to_right_maxima(perm: &Permutation) -> (Vec<usize>, Vec<u32>) {
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut max = 0;
    for (i, &v) in perm.values().iter().enumerate() {
        if v > max {
            max = v;
            indices.push(i + 1);
            values.push(v);
        }
    }
    (indices, values)
}

/// Splits the fixed points at `⌊n/2⌋`.
///
/// The front measure holds the fixed points `i ≤ ⌊n/2⌋` as they are; the back
/// measure holds `n + 1 - i` for each fixed point `i > ⌊n/2⌋`, so that both
/// measures count distance from their own end of the permutation.
pub fn fixed_point_measures(perm: &Permutation) -> (FixedPointMeasure, FixedPointMeasure) {
    let n = perm.len();
    let half = n / 2;
    let values = perm.values();
    let front = (1..=half)
        .filter(|&i| values[i - 1] as usize == i)
        .map(|i| i as u64)
        .collect();
    let back = (half + 1..=n)
        .rev()
        .filter(|&i| values[i - 1] as usize == i)
        .map(|i| (n + 1 - i) as u64)
        .collect();
    (
        FixedPointMeasure::from_sorted_unchecked(front),
        FixedPointMeasure::from_sorted_unchecked(back),
    )
}

/// Lexicographic stream of the permutations of `{1..n}` avoiding `pattern`.
///
/// Generated by backtracking: a prefix is extended only while it still
/// avoids the pattern, so the cost is proportional to the output rather
/// than to `n!`.
pub fn enumerate_avoiders(n: usize, pattern: &Permutation) -> Result<Avoiders> {
    if !(1..=MAX_ENUMERATION_N).contains(&n) {
        return Err(Error::Guard {
            what: "n",
            value: n,
            min: 1,
            max: MAX_ENUMERATION_N,
        });
    }
    if pattern.len() > MAX_PATTERN_LEN {
        return Err(Error::PatternTooLong(pattern.len()));
    }
    Ok(Avoiders {
        n,
        pattern: pattern.values().to_vec(),
        prefix: Vec::with_capacity(n),
        used: vec![false; n + 1],
        cursor: vec![1; n + 1],
        done: false,
    })
}

#[derive(Debug, Clone)]
pub struct Avoiders {
    n: usize,
    pattern: Vec<u32>,
    prefix: Vec<u32>,
    used: Vec<bool>,
    // next value to try at each depth
    cursor: Vec<u32>,
    done: bool,
}

impl Avoiders {
    fn backtrack(&mut self) {
        if let Some(v) = self.prefix.pop() {
            self.used[v as usize] = false;
        }
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        loop {
            if self.done {
                return None;
            }
            let depth = self.prefix.len();
            if depth == self.n {
                let out = Permutation::from_vec_unchecked(self.prefix.clone());
                self.backtrack();
                return Some(out);
            }
            let mut extended = false;
            let mut v = self.cursor[depth];
            while v as usize <= self.n {
                if !self.used[v as usize] {
                    self.prefix.push(v);
                    if ends_with_pattern(&self.prefix, &self.pattern) {
                        self.prefix.pop();
                    } else {
                        self.used[v as usize] = true;
                        self.cursor[depth] = v + 1;
                        self.cursor[depth + 1] = 1;
                        extended = true;
                        break;
                    }
                }
                v += 1;
            }
            if !extended {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                self.backtrack();
            }
        }
    }
}
