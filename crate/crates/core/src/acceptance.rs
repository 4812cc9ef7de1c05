//! Acceptance checks: exact finite-`n` identities and fixed-seed Monte Carlo
//! comparisons against the limit laws. Every tolerance is pinned here.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::bijection::{perm_to_tree, tree_to_perm};
use crate::dist::{convolve_pmf, tv_distance, EmpiricalDist, Pmf};
use crate::error::Result;
use crate::experiment::{
    fixed_point_batch, run_batch, try_run_batch, FixedPointRecord, DEFAULT_STREAMS,
};
use crate::perm::{enumerate_avoiders, fixed_point_measures, fixed_points, pattern_from_digits};
use crate::sample::{
    gw_tree_truncated, kesten_truncated, sample_limit_process, sample_progeny, uniform_avoider_321,
    uniform_tree,
};
use crate::stats::{
    catalan, chi_square_independence, exact_fp_distribution, Proportion, DEFAULT_BIN_FLOOR, Z_95,
};
use crate::tree::{
    dyck_from_tree, enumerate_trees, leaf_stats, tree_fixed_point_measures, truncate_tree,
};

pub const SEED: u64 = 42;
pub const LARGE_N: usize = 2000;
pub const LARGE_N_SAMPLES: u64 = 100_000;
/// Vertex budget for the unconditioned trees in the progeny cross-check. Any
/// overflow lands in the `> 50` bucket, so the cap does not bias the check.
pub const GW_CHECK_NODE_CAP: usize = 1_000_000;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {} ({:.1}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Accumulates named sub-checks into one verdict.
#[derive(Default)]
struct Checks {
    ok: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, pass: bool, note: String) {
        self.ok &= pass;
        self.notes
            .push(if pass { note } else { format!("!! {note}") });
    }
}

/// Shared state across criteria: the `n = 2000` permutation batch is used by
/// several of them.
#[derive(Default)]
pub struct Context {
    large: OnceLock<Result<Vec<FixedPointRecord>>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn large_batch(&self) -> Result<&[FixedPointRecord]> {
        self.large
            .get_or_init(|| fixed_point_batch(LARGE_N, LARGE_N_SAMPLES, SEED, DEFAULT_STREAMS))
            .as_deref()
            .map_err(Clone::clone)
    }
}

type CriterionFn = fn(&Context) -> Result<Checks>;

const CRITERIA: [(u32, &str, CriterionFn); 10] = [
    (1, "bijection exactness n <= 8", bijection_exactness),
    (
        2,
        "fixed-point correspondence, trees <= 9 vertices",
        fixed_point_correspondence,
    ),
    (
        3,
        "sampler vs exact fixed-point law, n in {5,8,10}",
        sampler_vs_exact,
    ),
    (
        4,
        "front/back counts Geometric(2/3) and independent",
        front_back_geometric,
    ),
    (5, "total count NegativeBinomial(2,1/3)", total_negbin),
    (6, "fixed-point locations", fixed_point_locations),
    (7, "mid-range fixed points vanish", midrange_vanishing),
    (8, "local limit of the root", local_limit),
    (9, "total progeny law", progeny_law),
    (
        10,
        "equal fixed-point laws for 321, 132, 213",
        pattern_equidistribution,
    ),
];

pub fn criterion_ids() -> impl Iterator<Item = u32> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs a single criterion by id.
pub fn run_criterion(id: u32, ctx: &Context) -> Option<CriterionReport> {
    let &(id, title, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = match f(ctx) {
        Ok(c) => (c.ok, c.notes.join("; ")),
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionReport {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    })
}

/// Runs every criterion in order, calling `on_report` as each one finishes.
pub fn run_all(mut on_report: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    let ctx = Context::new();
    criterion_ids()
        .map(|id| {
            let r = run_criterion(id, &ctx).expect("known id");
            on_report(&r);
            r
        })
        .collect()
}

fn bijection_exactness(_: &Context) -> Result<Checks> {
    let start = Instant::now();
    let mut c = Checks::new();
    let pattern = pattern_from_digits("321")?;
    let mut sizes = Vec::new();
    for n in 1..=8 {
        let trees: Vec<_> = enumerate_trees(n + 1)?.collect();
        let images: BTreeSet<_> = trees.iter().map(tree_to_perm).collect::<Result<_>>()?;
        let avoiders: BTreeSet<_> = enumerate_avoiders(n, &pattern)?.collect();
        sizes.push(images.len());
        c.check(
            images == avoiders && images.len() == trees.len(),
            format!(
                "n={n}: image size {} vs |Av| {}",
                images.len(),
                avoiders.len()
            ),
        );
        let tree_round = trees
            .iter()
            .all(|t| tree_to_perm(t).and_then(|p| perm_to_tree(&p)).as_ref() == Ok(t));
        let perm_round = avoiders
            .iter()
            .all(|p| perm_to_tree(p).and_then(|t| tree_to_perm(&t)).as_ref() == Ok(p));
        if !(tree_round && perm_round) {
            c.check(false, format!("n={n}: round trip failed"));
        }
    }
    c.notes.retain(|n| n.starts_with("!!"));
    c.check(
        sizes == [1, 2, 5, 14, 42, 132, 429, 1430],
        format!("sizes {sizes:?}"),
    );
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 10.0, format!("runtime {secs:.2}s < 10s"));
    Ok(c)
}

fn fixed_point_correspondence(_: &Context) -> Result<Checks> {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut trees_checked = 0;
    let mut mismatches = 0;
    for v in 2..=9 {
        for t in enumerate_trees(v)? {
            let perm = tree_to_perm(&t)?;
            let from_perm = fixed_points(&perm).positions().to_vec();
            let stats = leaf_stats(&t)?;
            let from_leaves: Vec<u64> = stats
                .s
                .iter()
                .zip(&stats.p)
                .filter(|(_, &p)| p == 1)
                .map(|(&s, &p)| s - p + 1)
                .collect();
            let from_peaks = dyck_from_tree(&t).peaks_at_height(1);
            let measures_agree = tree_fixed_point_measures(&t)? == fixed_point_measures(&perm);
            trees_checked += 1;
            if !(from_perm == from_leaves && from_leaves == from_peaks && measures_agree) {
                mismatches += 1;
            }
        }
    }
    c.check(
        mismatches == 0,
        format!("{trees_checked} trees, {mismatches} mismatches"),
    );
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 30.0, format!("runtime {secs:.2}s < 30s"));
    Ok(c)
}

fn sampler_vs_exact(_: &Context) -> Result<Checks> {
    let start = Instant::now();
    let mut c = Checks::new();
    let pattern = pattern_from_digits("321")?;
    for n in [5, 8, 10] {
        let exact = exact_fp_distribution(n, &pattern)?.to_pmf();
        let counts: EmpiricalDist<u64> = try_run_batch(SEED, DEFAULT_STREAMS, 100_000, |rng| {
            Ok(fixed_points(&uniform_avoider_321(n, rng)?).mass() as u64)
        })?
        .into_iter()
        .collect();
        let tv = tv_distance(&counts, &exact);
        c.check(tv <= 0.02, format!("n={n}: tv {tv:.4} <= 0.02"));
    }
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 60.0, format!("runtime {secs:.2}s < 60s"));
    Ok(c)
}

fn front_back_geometric(ctx: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let batch = ctx.large_batch()?;
    let geom = Pmf::geometric(2.0 / 3.0)?;
    let front: EmpiricalDist<u64> = batch.iter().map(|r| r.front.mass() as u64).collect();
    let back: EmpiricalDist<u64> = batch.iter().map(|r| r.back.mass() as u64).collect();
    let tv_front = tv_distance(&front, &geom);
    let tv_back = tv_distance(&back, &geom);
    c.check(tv_front <= 0.03, format!("front tv {tv_front:.4} <= 0.03"));
    c.check(tv_back <= 0.03, format!("back tv {tv_back:.4} <= 0.03"));
    let joint: EmpiricalDist<(u64, u64)> = batch
        .iter()
        .map(|r| (r.front.mass() as u64, r.back.mass() as u64))
        .collect();
    let chi = chi_square_independence(&joint, DEFAULT_BIN_FLOOR)?;
    c.check(
        chi.p_value > 0.001,
        format!(
            "independence chi2 {:.2} on {} df, p {:.4} > 0.001",
            chi.statistic, chi.degrees, chi.p_value
        ),
    );
    Ok(c)
}

fn total_negbin(ctx: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let batch = ctx.large_batch()?;
    let negbin = Pmf::negbin_2_one_third();
    let total: EmpiricalDist<u64> = batch.iter().map(FixedPointRecord::total).collect();
    let tv = tv_distance(&total, &negbin);
    c.check(tv <= 0.03, format!("total tv {tv:.4} <= 0.03"));
    let mean = batch.iter().map(|r| r.total() as f64).sum::<f64>() / batch.len() as f64;
    c.check(
        (0.95..=1.05).contains(&mean),
        format!("mean {mean:.4} in [0.95, 1.05]"),
    );
    let geom = Pmf::geometric(2.0 / 3.0)?;
    let conv = convolve_pmf(&geom, &geom, 40);
    let max_err = (0..=40)
        .map(|k| (conv.mass(k) - negbin.mass(k)).abs())
        .fold(0.0, f64::max);
    c.check(
        max_err <= 1e-12,
        format!("convolution max error {max_err:.2e} <= 1e-12"),
    );
    Ok(c)
}

fn fixed_point_locations(ctx: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let pattern = pattern_from_digits("321")?;
    let mut exact_ok = true;
    for n in 1..=11 {
        let mut fixing_one = 0u64;
        let mut all = 0u64;
        for perm in enumerate_avoiders(n, &pattern)? {
            all += 1;
            fixing_one += u64::from(perm.at(1) == 1);
        }
        let expected = Ratio::new(catalan(n as u64 - 1), catalan(n as u64));
        exact_ok &= Ratio::new(fixing_one, all) == expected;
    }
    c.check(
        exact_ok,
        "P(tau(1)=1) = C_(n-1)/C_n exactly for n <= 11".into(),
    );

    let limit_hits = run_batch(SEED, DEFAULT_STREAMS, 1_000_000, |rng| {
        sample_limit_process(rng).front.contains(1)
    });
    let p_limit = limit_hits.iter().filter(|&&h| h).count() as f64 / limit_hits.len() as f64;
    c.check(
        (p_limit - 0.25).abs() <= 0.005,
        format!("limit P(atom at 1) {p_limit:.4} = 0.25 +- 0.005"),
    );

    let batch = ctx.large_batch()?;
    let p_perm = batch.iter().filter(|r| r.front.contains(1)).count() as f64 / batch.len() as f64;
    c.check(
        (p_perm - 0.25).abs() <= 0.01,
        format!("n={LARGE_N} P(tau(1)=1) {p_perm:.4} = 0.25 +- 0.01"),
    );

    let perm_window: EmpiricalDist<u64> = batch.iter().map(|r| r.front.window_mask(10)).collect();
    let limit_window: EmpiricalDist<u64> =
        run_batch(SEED + 1, DEFAULT_STREAMS, LARGE_N_SAMPLES, |rng| {
            sample_limit_process(rng).front.window_mask(10)
        })
        .into_iter()
        .collect();
    let tv = perm_window.tv(&limit_window);
    c.check(
        tv <= 0.03,
        format!("front law on [1,10] tv {tv:.4} <= 0.03"),
    );
    Ok(c)
}

fn midrange_vanishing(ctx: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let batch = ctx.large_batch()?;
    let n = LARGE_N as u64;
    let estimates: Vec<(u64, Proportion)> = [5u64, 10, 25, 50]
        .into_iter()
        .map(|a| {
            let hits = batch.iter().filter(|r| r.hits_window(n, a, n - a)).count() as u64;
            (a, Proportion::new(hits, batch.len() as u64, Z_95))
        })
        .collect();
    let at_50 = estimates.last().expect("nonempty").1;
    c.check(
        at_50.estimate <= 0.05,
        format!("P(fixed point in [50, n-50]) {:.4} <= 0.05", at_50.estimate),
    );
    let monotone = estimates.windows(2).all(|w| {
        let (a, b) = (w[0].1, w[1].1);
        b.estimate <= a.estimate + a.half_width() + b.half_width()
    });
    let listing = estimates
        .iter()
        .map(|(a, p)| format!("a={a}: {:.4}+-{:.4}", p.estimate, p.half_width()))
        .collect::<Vec<_>>()
        .join(", ");
    c.check(monotone, format!("nonincreasing ({listing})"));
    Ok(c)
}

fn local_limit(_: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let biased = Pmf::size_biased_geometric_half();
    let uniform_degrees: EmpiricalDist<u64> =
        try_run_batch(SEED, DEFAULT_STREAMS, 100_000, |rng| {
            Ok(truncate_tree(&uniform_tree(501, rng)?, 1).root_degree() as u64)
        })?
        .into_iter()
        .collect();
    let tv = tv_distance(&uniform_degrees, &biased);
    c.check(tv <= 0.02, format!("root degree tv {tv:.4} <= 0.02"));

    let kesten: EmpiricalDist<u64> = run_batch(SEED + 1, DEFAULT_STREAMS, 100_000, |rng| {
        kesten_truncated(1, rng).tree.root_degree() as u64
    })
    .into_iter()
    .collect();
    let tv2 = uniform_degrees.tv(&kesten);
    c.check(
        tv2 <= 0.05,
        format!("height-1 truncation vs Kesten tv {tv2:.4} <= 0.05"),
    );
    Ok(c)
}

fn progeny_law(_: &Context) -> Result<Checks> {
    let mut c = Checks::new();
    let progeny = Pmf::progeny();
    let bucket = |k: u64| k.min(51);
    let draws: EmpiricalDist<u64> = run_batch(SEED, DEFAULT_STREAMS, 1_000_000, |rng| {
        bucket(sample_progeny(rng))
    })
    .into_iter()
    .collect();
    let tv = draws.tv_against(|&k| {
        if k <= 50 {
            progeny.mass(k)
        } else {
            progeny.survival(50)
        }
    });
    c.check(
        tv <= 0.01,
        format!("sampler tv on {{1..50, >50}} {tv:.4} <= 0.01"),
    );

    let geom = Pmf::geometric(0.5)?;
    let sizes: EmpiricalDist<u64> =
        run_batch(
            SEED + 1,
            DEFAULT_STREAMS,
            100_000,
            |rng| match gw_tree_truncated(&geom, None, rng, GW_CHECK_NODE_CAP) {
                Ok(t) => bucket(t.vertex_count() as u64),
                Err(_) => 51,
            },
        )
        .into_iter()
        .collect();
    let small: EmpiricalDist<u64> = run_batch(SEED + 2, DEFAULT_STREAMS, 100_000, |rng| {
        bucket(sample_progeny(rng))
    })
    .into_iter()
    .collect();
    let tv2 = sizes.tv(&small);
    c.check(
        tv2 <= 0.01,
        format!("GW sizes vs sampler two-sample tv {tv2:.4} <= 0.01"),
    );
    Ok(c)
}

fn pattern_equidistribution(_: &Context) -> Result<Checks> {
    let start = Instant::now();
    let mut c = Checks::new();
    let patterns = ["321", "132", "213"].map(|p| pattern_from_digits(p).expect("valid"));
    let mut all_equal = true;
    for n in 1..=9 {
        let dists = patterns
            .iter()
            .map(|p| exact_fp_distribution(n, p))
            .collect::<Result<Vec<_>>>()?;
        all_equal &= dists.windows(2).all(|w| w[0] == w[1]);
        all_equal &= dists[0].total == catalan(n as u64);
    }
    c.check(all_equal, "exact equality for n <= 9".into());
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 120.0, format!("runtime {secs:.2}s < 120s"));
    Ok(c)
}
