//! Probability mass functions on the nonnegative integers and empirical
//! distributions.
//!
//! A [`Pmf`] tabulates its first atoms and, for the named laws, keeps an
//! analytic description of everything beyond the table so that masses,
//! survival probabilities and samples stay exact past the tabulated range.

use std::collections::BTreeMap;

use rand::RngCore;

use crate::error::{Error, Result};

/// Atoms tabulated for the light-tailed named laws.
pub const DEFAULT_ATOMS: usize = 64;
/// Atoms tabulated for the total-progeny law.
pub const PROGENY_ATOMS: usize = 4096;
/// Samples are clamped to this value. Only the progeny law can reach it, with
/// probability about `1 / sqrt(pi * 2^62)`, below `3e-10` per draw.
pub const MAX_DRAW: u64 = 1 << 62;

/// Closed-form laws whose tails are known beyond any table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    /// `P(k) = p (1-p)^k`, `k >= 0`.
    Geometric { p: f64 },
    /// `P(k) = k 2^(-k-1)`, `k >= 1`: the size-biased Geometric(1/2) law.
    SizeBiasedGeometricHalf,
    /// `P(k) = C_(k-1) / 2^(2k-1)`, `k >= 1`: total progeny of a critical
    /// Geometric(1/2) Galton-Watson tree.
    Progeny,
    /// `P(k) = p^2 (k+1) (1-p)^k`, `k >= 0`: sum of two independent Geometric(p).
    /// With `p = 2/3` this is the law `(4/9)(k+1)(1/3)^k`, often written
    /// NegativeBinomial(2, 1/3) after its ratio `1 - p`.
    NegativeBinomial2 { p: f64 },
}

impl Law {
    pub fn mass(&self, k: u64) -> f64 {
        let kf = k as f64;
        match *self {
            Law::Geometric { p } => p * (1.0 - p).powf(kf),
            Law::SizeBiasedGeometricHalf => kf * 0.5f64.powf(kf + 1.0),
            Law::Progeny => {
                if k == 0 {
                    0.0
                } else {
                    // P(#T > k-1) - P(#T > k) = P(#T > k-1) / (2k)
                    progeny_survival(k - 1) / (2.0 * kf)
                }
            }
            Law::NegativeBinomial2 { p } => p * p * (kf + 1.0) * (1.0 - p).powf(kf),
        }
    }

    /// `P(X > k)`.
    pub fn survival(&self, k: u64) -> f64 {
        let kf = k as f64;
        match *self {
            Law::Geometric { p } => (1.0 - p).powf(kf + 1.0),
            Law::SizeBiasedGeometricHalf => (kf + 2.0) * 0.5f64.powf(kf + 1.0),
            Law::Progeny => progeny_survival(k),
            Law::NegativeBinomial2 { p } => (1.0 - p).powf(kf + 1.0) * (1.0 + p * (kf + 1.0)),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Law::Geometric { p } => (1.0 - p) / p,
            Law::SizeBiasedGeometricHalf => 3.0,
            Law::Progeny => f64::INFINITY,
            Law::NegativeBinomial2 { p } => 2.0 * (1.0 - p) / p,
        }
    }
}

/// `P(#T > k) = binom(2k, k) / 4^k` for the Geometric(1/2) total progeny.
///
/// Exact product for small `k`; the central-binomial asymptotic series
/// (relative error below 1e-15 from k = 256 on) beyond that.
fn progeny_survival(k: u64) -> f64 {
    if k < 256 {
        (1..=k).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
    } else {
        let x = k as f64;
        let series = 1.0 - 1.0 / (8.0 * x) + 1.0 / (128.0 * x * x) + 5.0 / (1024.0 * x.powi(3))
            - 21.0 / (32768.0 * x.powi(4));
        series / (std::f64::consts::PI * x).sqrt()
    }
}

/// A probability mass function on `{0, 1, 2, ...}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    masses: Vec<f64>,
    // survival[k] = P(X > k)
    survival: Vec<f64>,
    law: Option<Law>,
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(p))
    }
}

impl Pmf {
    fn tabulate(law: Law, atoms: usize) -> Pmf {
        let (masses, survival) = match law {
            Law::Progeny => {
                // Ratio recursions avoid the cancellation of 1 - sum.
                let mut masses = vec![0.0; atoms];
                let mut survival = vec![1.0; atoms];
                if atoms > 1 {
                    masses[1] = 0.5;
                    survival[1] = 0.5;
                }
                for k in 2..atoms {
                    let kf = k as f64;
                    masses[k] = masses[k - 1] * (2.0 * kf - 3.0) / (2.0 * kf);
                    survival[k] = survival[k - 1] * (2.0 * kf - 1.0) / (2.0 * kf);
                }
                (masses, survival)
            }
            _ => (
                (0..atoms as u64).map(|k| law.mass(k)).collect(),
                (0..atoms as u64).map(|k| law.survival(k)).collect(),
            ),
        };
        Pmf {
            masses,
            survival,
            law: Some(law),
        }
    }

    pub fn geometric(p: f64) -> Result<Pmf> {
        check_p(p)?;
        Ok(Pmf::tabulate(Law::Geometric { p }, DEFAULT_ATOMS))
    }

    pub fn size_biased_geometric_half() -> Pmf {
        Pmf::tabulate(Law::SizeBiasedGeometricHalf, DEFAULT_ATOMS)
    }

    pub fn progeny() -> Pmf {
        Pmf::tabulate(Law::Progeny, PROGENY_ATOMS)
    }

    pub fn negative_binomial_2(p: f64) -> Result<Pmf> {
        check_p(p)?;
        Ok(Pmf::tabulate(Law::NegativeBinomial2 { p }, DEFAULT_ATOMS))
    }

    /// `(4/9)(k+1)(1/3)^k`: the sum of two independent Geometric(2/3).
    pub fn negbin_2_one_third() -> Pmf {
        Pmf::tabulate(Law::NegativeBinomial2 { p: 2.0 / 3.0 }, DEFAULT_ATOMS)
    }

    pub fn with_atoms(law: Law, atoms: usize) -> Result<Pmf> {
        match law {
            Law::Geometric { p } | Law::NegativeBinomial2 { p } => check_p(p)?,
            _ => {}
        }
        Ok(Pmf::tabulate(law, atoms.max(1)))
    }

    /// The point mass at `k`.
    pub fn dirac(k: usize) -> Pmf {
        let mut masses = vec![0.0; k + 1];
        masses[k] = 1.0;
        Pmf::from_masses(masses).expect("valid")
    }

    /// A finitely supported pmf; any mass missing from the table (total below
    /// one) is treated as unresolved mass beyond the last atom.
    pub fn from_masses(masses: Vec<f64>) -> Result<Pmf> {
        if masses.is_empty() {
            return Err(Error::Parse("pmf needs at least one atom".into()));
        }
        if let Some(bad) = masses.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::Parse(format!("mass {bad} outside [0, 1]")));
        }
        let total: f64 = masses.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::Parse(format!("masses sum to {total} > 1")));
        }
        let mut survival = vec![0.0; masses.len()];
        let mut acc = 1.0 - total.min(1.0);
        for k in (0..masses.len()).rev() {
            survival[k] = acc;
            acc += masses[k];
        }
        Ok(Pmf {
            masses,
            survival,
            law: None,
        })
    }

    pub fn law(&self) -> Option<Law> {
        self.law
    }

    /// Tabulated masses for outcomes `0..len`.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn table_len(&self) -> usize {
        self.masses.len()
    }

    pub fn mass(&self, k: u64) -> f64 {
        match self.masses.get(k as usize) {
            Some(&m) => m,
            None => self.law.map_or(0.0, |l| l.mass(k)),
        }
    }

    /// `P(X > k)`.
    pub fn survival(&self, k: u64) -> f64 {
        match self.survival.get(k as usize) {
            Some(&s) => s,
            None => self.law.map_or(0.0, |l| l.survival(k)),
        }
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: u64) -> f64 {
        1.0 - self.survival(k)
    }

    /// Sum of the tabulated masses.
    pub fn tabulated_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `sum_k k P(k)` over the table only.
    pub fn tabulated_mean(&self) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(k, m)| k as f64 * m)
            .sum()
    }

    /// Analytic mean when the law is known, otherwise the tabulated mean.
    pub fn mean(&self) -> f64 {
        self.law.map_or_else(|| self.tabulated_mean(), |l| l.mean())
    }

    /// Size-biased law `k P(k) / mean` over the table.
    pub fn size_biased(&self) -> Result<Pmf> {
        if self.law == Some(Law::Geometric { p: 0.5 }) {
            return Ok(Pmf::size_biased_geometric_half());
        }
        let mean = self.tabulated_mean();
        let masses = self
            .masses
            .iter()
            .enumerate()
            .map(|(k, m)| k as f64 * m / mean)
            .collect();
        Pmf::from_masses(masses)
    }

    /// Inverse-CDF draw.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        self.sample_with(open_unit(rng))
    }

    /// Inverse-CDF transform of `u` in `(0, 1)`: the least `k` with `P(X > k) <= u`.
    pub fn sample_with(&self, u: f64) -> u64 {
        let k = self.survival.partition_point(|&s| s > u);
        if k < self.survival.len() {
            return k as u64;
        }
        match self.law {
            Some(law) => tail_search(law, self.survival.len() as u64 - 1, u),
            // unresolved mass beyond the table is lumped on the last atom
            None => self.survival.len() as u64 - 1,
        }
    }
}

/// Least `k > lo` with `survival(k) <= u`, given `survival(lo) > u`.
fn tail_search(law: Law, mut lo: u64, u: f64) -> u64 {
    let mut step = 1u64;
    let mut hi;
    loop {
        hi = lo.saturating_add(step).min(MAX_DRAW);
        if law.survival(hi) <= u {
            break;
        }
        if hi == MAX_DRAW {
            return MAX_DRAW;
        }
        lo = hi;
        step = step.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if law.survival(mid) <= u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Uniform on the open interval `(0, 1)` with 53 random bits.
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Exact convolution of `a` and `b` restricted to `{0..=cap}`.
pub fn convolve_pmf(a: &Pmf, b: &Pmf, cap: usize) -> Pmf {
    let masses = (0..=cap as u64)
        .map(|k| (0..=k).map(|j| a.mass(j) * b.mass(k - j)).sum::<f64>())
        .collect::<Vec<_>>();
    Pmf::from_masses(masses).expect("convolution of pmfs is a sub-probability vector")
}

/// Anything with masses on `{0, 1, 2, ...}`.
pub trait MassFunction {
    fn mass(&self, k: u64) -> f64;
    /// `P(X > k)`.
    fn survival(&self, k: u64) -> f64;
    /// Largest outcome with explicitly known mass.
    fn support_bound(&self) -> u64;
}

impl MassFunction for Pmf {
    fn mass(&self, k: u64) -> f64 {
        Pmf::mass(self, k)
    }

    fn survival(&self, k: u64) -> f64 {
        Pmf::survival(self, k)
    }

    fn support_bound(&self) -> u64 {
        self.masses.len() as u64 - 1
    }
}

impl MassFunction for EmpiricalDist<u64> {
    fn mass(&self, k: u64) -> f64 {
        self.frequency(&k)
    }

    fn survival(&self, k: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let beyond: u64 = self.counts.range(k + 1..).map(|(_, c)| c).sum();
        beyond as f64 / self.total as f64
    }

    fn support_bound(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// Total variation distance `(1/2) sum_k |a_k - b_k|`.
///
/// Atoms up to the larger support bound are compared one by one; whatever
/// lies beyond it is folded into a single final bucket.
pub fn tv_distance(a: &impl MassFunction, b: &impl MassFunction) -> f64 {
    let bound = a.support_bound().max(b.support_bound());
    let body: f64 = (0..=bound).map(|k| (a.mass(k) - b.mass(k)).abs()).sum();
    let tail = (a.survival(bound) - b.survival(bound)).abs();
    (0.5 * (body + tail)).clamp(0.0, 1.0)
}

/// Tallies of observed outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDist<K: Ord> {
    counts: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> Default for EmpiricalDist<K> {
    fn default() -> Self {
        EmpiricalDist {
            counts: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord + Clone> EmpiricalDist<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, outcome: K) {
        self.add_count(outcome, 1);
    }

    pub fn add_count(&mut self, outcome: K, count: u64) {
        if count > 0 {
            *self.counts.entry(outcome).or_insert(0) += count;
            self.total += count;
        }
    }

    /// Associative, commutative merge of tallies.
    pub fn merge(&mut self, other: &EmpiricalDist<K>) {
        for (k, &c) in &other.counts {
            self.add_count(k.clone(), c);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, outcome: &K) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: &K) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(outcome) as f64 / self.total as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Image of the tallies under `f`.
    pub fn map<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> EmpiricalDist<J> {
        let mut out = EmpiricalDist::new();
        for (k, &c) in &self.counts {
            out.add_count(f(k), c);
        }
        out
    }

    /// Two-sample total variation distance over the union of both supports.
    pub fn tv(&self, other: &EmpiricalDist<K>) -> f64 {
        let mut keys: Vec<&K> = self.counts.keys().chain(other.counts.keys()).collect();
        keys.sort();
        keys.dedup();
        let s: f64 = keys
            .into_iter()
            .map(|k| (self.frequency(k) - other.frequency(k)).abs())
            .sum();
        0.5 * s
    }

    /// Total variation distance to a law given by its mass function.
    ///
    /// `law` must sum to one over all of `K`; unobserved mass is accounted
    /// through `1 - sum of law over the observed outcomes`.
    pub fn tv_against(&self, law: impl Fn(&K) -> f64) -> f64 {
        let mut body = 0.0;
        let mut law_mass_seen = 0.0;
        for (k, _) in self.iter() {
            let q = law(k);
            law_mass_seen += q;
            body += (self.frequency(k) - q).abs();
        }
        0.5 * (body + (1.0 - law_mass_seen).max(0.0))
    }
}

impl<K: Ord + Clone> FromIterator<K> for EmpiricalDist<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut d = EmpiricalDist::new();
        for k in iter {
            d.add(k);
        }
        d
    }
}
