//! Random plane trees, 321-avoiding permutations, Galton-Watson trees and
//! their size-biased (Kesten) versions, and the limiting fixed-point process.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bijection::tree_to_perm;
use crate::dist::Pmf;
use crate::error::{Error, Result};
use crate::perm::{FixedPointMeasure, Permutation};
use crate::rng::RngStream;
use crate::tree::{tree_from_dyck, DyckPath, PlaneTree, Step};

/// Default vertex budget for unbounded Galton-Watson generation.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

fn geometric_half() -> &'static Pmf {
    static PMF: OnceLock<Pmf> = OnceLock::new();
    PMF.get_or_init(|| Pmf::geometric(0.5).expect("valid parameter"))
}

fn size_biased_half() -> &'static Pmf {
    static PMF: OnceLock<Pmf> = OnceLock::new();
    PMF.get_or_init(Pmf::size_biased_geometric_half)
}

fn progeny() -> &'static Pmf {
    static PMF: OnceLock<Pmf> = OnceLock::new();
    PMF.get_or_init(Pmf::progeny)
}

/// Uniform Dyck path of semilength `n` via the cycle lemma.
///
/// A uniform arrangement of `n` up and `n + 1` down steps has exactly one
/// cyclic shift whose proper prefixes all stay nonnegative: the shift
/// starting right after the first global minimum of the walk. That shift
/// ends with a down step, which is dropped.
pub fn uniform_dyck(n: usize, rng: &mut RngStream) -> DyckPath {
    let len = 2 * n + 1;
    let mut steps: Vec<Step> = std::iter::repeat_n(Step::Up, n)
        .chain(std::iter::repeat_n(Step::Down, n + 1))
        .collect();
    for i in (1..len).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        steps.swap(i, j);
    }
    let mut height = 0i64;
    let mut min = 0i64;
    let mut cut = 0;
    for (i, s) in steps.iter().enumerate() {
        height += if *s == Step::Up { 1 } else { -1 };
        if height < min {
            min = height;
            cut = i + 1;
        }
    }
    steps.rotate_left(cut % len);
    let last = steps.pop();
    debug_assert_eq!(last, Some(Step::Down));
    DyckPath::from_steps_unchecked(steps)
}

/// Uniform plane tree with `v >= 1` vertices.
pub fn uniform_tree(v: usize, rng: &mut RngStream) -> Result<PlaneTree> {
    if v == 0 {
        return Err(Error::Guard {
            what: "vertex count",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    Ok(tree_from_dyck(&uniform_dyck(v - 1, rng)))
}

/// Uniform element of `Av_n(321)`, the image of a uniform tree on `n + 1` vertices.
pub fn uniform_avoider_321(n: usize, rng: &mut RngStream) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::Guard {
            what: "n",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    tree_to_perm(&uniform_tree(n + 1, rng)?)
}

/// Appends the preorder degrees of a Galton-Watson subtree whose root sits at
/// `depth`; vertices at `height` get no children.
fn grow_gw(
    degrees: &mut Vec<u32>,
    offspring: &Pmf,
    depth: usize,
    height: Option<usize>,
    rng: &mut RngStream,
    node_cap: usize,
) -> Result<()> {
    let mut pending = vec![depth];
    while let Some(d) = pending.pop() {
        let children = if height.is_some_and(|h| d >= h) {
            0
        } else {
            offspring.sample(rng)
        };
        let created = degrees.len() as u64 + 1 + pending.len() as u64 + children;
        if created > node_cap as u64 {
            return Err(Error::Overflow { cap: node_cap });
        }
        degrees.push(children as u32);
        pending.extend(std::iter::repeat_n(d + 1, children as usize));
    }
    Ok(())
}

/// Galton-Watson tree with the given offspring law, cut at depth `height`
/// (`None` for no cut).
///
/// Vertices draw their offspring counts independently in depth-first order.
/// Exceeding `node_cap` vertices is reported as [`Error::Overflow`].
pub fn gw_tree_truncated(
    offspring: &Pmf,
    height: Option<usize>,
    rng: &mut RngStream,
    node_cap: usize,
) -> Result<PlaneTree> {
    let mean = offspring.mean();
    if mean > 1.0 + 1e-9 {
        return Err(Error::Supercritical(mean));
    }
    if node_cap == 0 {
        return Err(Error::Overflow { cap: 0 });
    }
    let mut degrees = Vec::new();
    grow_gw(&mut degrees, offspring, 0, height, rng, node_cap)?;
    PlaneTree::from_degrees(degrees)
}

/// The height-`height` truncation of a size-biased tree together with its
/// spine (preorder indices from the root down).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KestenTree {
    pub tree: PlaneTree,
    pub spine: Vec<usize>,
}

/// Size-biased Geometric(1/2) Galton-Watson tree cut at `height`.
///
/// Each spine vertex above the cut has a size-biased number of children; the
/// spine continues through one of them chosen uniformly, and every other
/// child roots an independent Geometric(1/2) Galton-Watson tree.
pub fn kesten_truncated(height: usize, rng: &mut RngStream) -> KestenTree {
    kesten_with(geometric_half(), size_biased_half(), height, rng)
}

fn kesten_with(offspring: &Pmf, biased: &Pmf, height: usize, rng: &mut RngStream) -> KestenTree {
    let mut degrees = Vec::new();
    let mut spine = Vec::with_capacity(height + 1);
    // right-hand siblings still owed at each level, emitted deepest first
    let mut owed: Vec<(usize, u64)> = Vec::with_capacity(height);
    for depth in 0..=height {
        spine.push(degrees.len());
        if depth == height {
            degrees.push(0);
            break;
        }
        let d = biased.sample(rng).max(1);
        let j = rng.below(d);
        degrees.push(d as u32);
        for _ in 0..j {
            grow_gw(
                &mut degrees,
                offspring,
                depth + 1,
                Some(height),
                rng,
                usize::MAX,
            )
            .expect("no cap");
        }
        owed.push((depth + 1, d - 1 - j));
    }
    while let Some((depth, count)) = owed.pop() {
        for _ in 0..count {
            grow_gw(
                &mut degrees,
                offspring,
                depth,
                Some(height),
                rng,
                usize::MAX,
            )
            .expect("no cap");
        }
    }
    KestenTree {
        tree: PlaneTree::from_degrees(degrees).expect("spine construction yields a tree"),
        spine,
    }
}

/// Total progeny of a Geometric(1/2) Galton-Watson tree.
pub fn sample_progeny(rng: &mut RngStream) -> u64 {
    progeny().sample(rng)
}

/// One draw of the limiting pair of fixed-point measures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitProcessSample {
    /// Number of fringe trees on the left of the spine.
    pub n_front: u64,
    /// Number of fringe trees on the right of the spine.
    pub n_back: u64,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    pub front: FixedPointMeasure,
    pub back: FixedPointMeasure,
}

fn atoms_at_unit_increments(steps: &[u64]) -> FixedPointMeasure {
    let mut out = Vec::new();
    let mut sum = 0u64;
    for &s in steps {
        sum = sum.saturating_add(s);
        if s == 1 {
            out.push(sum);
        }
    }
    FixedPointMeasure::from_sorted_unchecked(out)
}

/// `N, M ~ Geometric(1/2)` on `{0, 1, ...}`, `X_i, Y_i` i.i.d. progeny draws,
/// and atoms at the partial sums of `X` (resp. `Y`) whose last increment is 1.
pub fn sample_limit_process(rng: &mut RngStream) -> LimitProcessSample {
    let n_front = geometric_half().sample(rng);
    let x: Vec<u64> = (0..n_front).map(|_| sample_progeny(rng)).collect();
    let n_back = geometric_half().sample(rng);
    let y: Vec<u64> = (0..n_back).map(|_| sample_progeny(rng)).collect();
    LimitProcessSample {
        n_front,
        n_back,
        front: atoms_at_unit_increments(&x),
        back: atoms_at_unit_increments(&y),
        x,
        y,
    }
}
