//! Finite rooted plane trees, their contour (Dyck) encoding, and the leaf and
//! fringe statistics consumed by the bijection.
//!
//! Vertices are identified by their preorder index; the root is vertex 0.
//! A tree is determined by its preorder degree sequence, and the remaining
//! per-vertex arrays (parent, depth, subtree size) are derived from it once
//! at construction.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::FixedPointMeasure;

/// Largest vertex count accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_VERTICES: usize = 10;

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
}

/// A balanced up/down walk that never goes below zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DyckPath(Vec<Step>);

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut height: i64 = 0;
        for (i, s) in steps.iter().enumerate() {
            height += match s {
                Step::Up => 1,
                Step::Down => -1,
            };
            if height < 0 {
                return Err(Error::InvalidDyck(format!(
                    "walk goes below zero at step {}",
                    i + 1
                )));
            }
        }
        if height != 0 {
            return Err(Error::InvalidDyck(format!("walk ends at height {height}")));
        }
        Ok(DyckPath(steps))
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        debug_assert!(DyckPath::new(steps.clone()).is_ok());
        DyckPath(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    /// Number of up steps.
    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }

    /// For every peak reaching height `h`, the number of up steps taken up to
    /// and including that peak's up step.
    ///
    /// Under the contour correspondence this is the preorder index of the
    /// leaf sitting at the peak.
    pub fn peaks_at_height(&self, h: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut height = 0usize;
        let mut ups = 0u64;
        for (i, s) in self.0.iter().enumerate() {
            match s {
                Step::Up => {
                    height += 1;
                    ups += 1;
                    if height == h && self.0.get(i + 1) == Some(&Step::Down) {
                        out.push(ups);
                    }
                }
                Step::Down => height -= 1,
            }
        }
        out
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                other => Err(Error::InvalidDyck(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(steps)
    }
}

/// A finite rooted plane tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    degree: Vec<u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    size: Vec<u32>,
}

impl PlaneTree {
    /// The single-vertex tree.
    pub fn singleton() -> Self {
        PlaneTree::from_degrees(vec![0]).expect("valid")
    }

    /// Builds a tree from its preorder out-degree sequence.
    pub fn from_degrees(degree: Vec<u32>) -> Result<Self> {
        let m = degree.len();
        if m == 0 {
            return Err(Error::InvalidDegrees("empty sequence".into()));
        }
        if m > NO_PARENT as usize {
            return Err(Error::InvalidDegrees("too many vertices".into()));
        }
        let mut parent = vec![NO_PARENT; m];
        let mut depth = vec![0u32; m];
        // (vertex, children still to be placed)
        let mut open: Vec<(u32, u32)> = Vec::new();
        for v in 0..m {
            if v > 0 {
                let Some(top) = open.last_mut() else {
                    return Err(Error::InvalidDegrees(format!(
                        "vertex {v} has no parent; sequence is longer than the tree"
                    )));
                };
                parent[v] = top.0;
                depth[v] = depth[top.0 as usize] + 1;
                top.1 -= 1;
                if top.1 == 0 {
                    open.pop();
                }
            }
            if degree[v] > 0 {
                open.push((v as u32, degree[v]));
            }
        }
        if !open.is_empty() {
            return Err(Error::InvalidDegrees(
                "sequence ends before the tree is complete".into(),
            ));
        }
        let mut size = vec![1u32; m];
        for v in (1..m).rev() {
            size[parent[v] as usize] += size[v];
        }
        Ok(PlaneTree {
            degree,
            parent,
            depth,
            size,
        })
    }

    /// Number of vertices, `#t`.
    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    pub fn root_degree(&self) -> usize {
        self.degree[0] as usize
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v] {
            NO_PARENT => None,
            p => Some(p as usize),
        }
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v] as usize
    }

    /// Number of vertices in the subtree rooted at `v`.
    pub fn subtree_size(&self, v: usize) -> usize {
        self.size[v] as usize
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree[v] == 0
    }

    /// Children of `v`, left to right.
    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut next = v + 1;
        (0..self.degree[v]).map(move |_| {
            let c = next;
            next += self.size[c] as usize;
            c
        })
    }

    /// Vertices on the path from the root down to `v`, excluding `v`.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.depth(v));
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Number of vertices at depth exactly `k`.
    pub fn level_width(&self, k: usize) -> usize {
        self.depth.iter().filter(|&&d| d as usize == k).count()
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({})", dyck_from_tree(self))
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&dyck_from_tree(self), f)
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(tree_from_dyck(&s.parse()?))
    }
}

/// Decodes a contour walk: an up step creates a new child of the current
/// vertex and moves to it, a down step moves back to the parent.
pub fn tree_from_dyck(path: &DyckPath) -> PlaneTree {
    let mut degree = Vec::with_capacity(path.semilength() + 1);
    degree.push(0u32);
    let mut stack = vec![0usize];
    for s in path.steps() {
        match s {
            Step::Up => {
                let cur = *stack.last().expect("Dyck walk stays above zero");
                degree[cur] += 1;
                stack.push(degree.len());
                degree.push(0);
            }
            Step::Down => {
                stack.pop();
            }
        }
    }
    PlaneTree::from_degrees(degree).expect("Dyck words encode valid trees")
}

/// The contour walk of `tree`, of length `2(#t - 1)`.
pub fn dyck_from_tree(tree: &PlaneTree) -> DyckPath {
    let m = tree.vertex_count();
    let mut steps = Vec::with_capacity(2 * (m - 1));
    for v in 1..m {
        let downs = tree.depth[v - 1] + 1 - tree.depth[v];
        steps.extend(std::iter::repeat_n(Step::Down, downs as usize));
        steps.push(Step::Up);
    }
    steps.extend(std::iter::repeat_n(Step::Down, tree.depth[m - 1] as usize));
    DyckPath::from_steps_unchecked(steps)
}

/// Leaf data used by the tree-to-permutation map.
///
/// For the `i`-th leaf in depth-first order, `s[i]` counts the vertices that
/// precede it in preorder and `p[i]` counts the vertices on the path from the
/// root to it, excluding the leaf (its depth).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafStats {
    pub leaves: Vec<usize>,
    pub s: Vec<u64>,
    pub p: Vec<u64>,
}

impl LeafStats {
    pub fn k(&self) -> usize {
        self.s.len()
    }

    /// The positions `s_i - p_i + 1` carrying the left-to-right maxima.
    pub fn b(&self) -> Vec<u64> {
        self.s.iter().zip(&self.p).map(|(s, p)| s - p + 1).collect()
    }
}

pub fn leaf_stats(tree: &PlaneTree) -> Result<LeafStats> {
    if tree.vertex_count() < 2 {
        return Err(Error::TrivialTree);
    }
    let leaves: Vec<usize> = (1..tree.vertex_count())
        .filter(|&v| tree.is_leaf(v))
        .collect();
    let s = leaves.iter().map(|&v| v as u64).collect();
    let p = leaves.iter().map(|&v| tree.depth(v) as u64).collect();
    Ok(LeafStats { leaves, s, p })
}

/// The subtree of vertices at depth at most `k`, `t^[k]`.
pub fn truncate_tree(tree: &PlaneTree, k: usize) -> PlaneTree {
    if tree.height() <= k {
        return tree.clone();
    }
    let degree = (0..tree.vertex_count())
        .filter(|&v| tree.depth(v) <= k)
        .map(|v| {
            if tree.depth(v) == k {
                0
            } else {
                tree.degree[v]
            }
        })
        .collect();
    PlaneTree::from_degrees(degree).expect("truncation of a tree is a tree")
}

/// One fringe subtree hanging off the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fringe {
    pub size: u64,
    pub is_single_vertex: bool,
}

/// Sizes of the subtrees rooted at the children of the root, left to right.
pub fn fringe_decomposition(tree: &PlaneTree) -> Result<Vec<Fringe>> {
    if tree.vertex_count() < 2 {
        return Err(Error::TrivialTree);
    }
    Ok(tree
        .children(0)
        .map(|c| {
            let size = tree.subtree_size(c) as u64;
            Fringe {
                size,
                is_single_vertex: size == 1,
            }
        })
        .collect())
}

/// Front and back fixed-point measures of the permutation encoded by `tree`,
/// read directly off the root's fringe subtrees.
///
/// With `n = #t - 1`, the split index is the first `k` whose fringe prefix
/// sum exceeds `⌊n/2⌋`. Single-vertex fringes left of the split contribute
/// their prefix sum to the front; those at or right of it contribute their
/// suffix sum to the back.
pub fn tree_fixed_point_measures(
    tree: &PlaneTree,
) -> Result<(FixedPointMeasure, FixedPointMeasure)> {
    let fringes = fringe_decomposition(tree)?;
    let n = tree.vertex_count() as u64 - 1;
    let half = n / 2;

    let mut front = Vec::new();
    let mut prefix = 0;
    let mut split = fringes.len();
    for (i, f) in fringes.iter().enumerate() {
        prefix += f.size;
        if prefix > half {
            split = i;
            break;
        }
        if f.is_single_vertex {
            front.push(prefix);
        }
    }

    let mut back = Vec::new();
    let mut suffix = 0;
    for f in fringes[split..].iter().rev() {
        suffix += f.size;
        if f.is_single_vertex {
            back.push(suffix);
        }
    }
    Ok((
        FixedPointMeasure::from_sorted_unchecked(front),
        FixedPointMeasure::from_sorted_unchecked(back),
    ))
}

/// Every plane tree with `v` vertices, in lexicographic order of Dyck words
/// (`U` before `D`).
pub fn enumerate_trees(v: usize) -> Result<impl Iterator<Item = PlaneTree>> {
    if !(1..=MAX_ENUMERATION_VERTICES).contains(&v) {
        return Err(Error::Guard {
            what: "vertex count",
            value: v,
            min: 1,
            max: MAX_ENUMERATION_VERTICES,
        });
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(2 * (v - 1));
    dyck_words(v - 1, 0, 0, &mut steps, &mut out);
    Ok(out.into_iter())
}

fn dyck_words(n: usize, ups: usize, downs: usize, steps: &mut Vec<Step>, out: &mut Vec<PlaneTree>) {
    if downs == n {
        out.push(tree_from_dyck(&DyckPath::from_steps_unchecked(
            steps.clone(),
        )));
        return;
    }
    if ups < n {
        steps.push(Step::Up);
        dyck_words(n, ups + 1, downs, steps, out);
        steps.pop();
    }
    if downs < ups {
        steps.push(Step::Down);
        dyck_words(n, ups, downs + 1, steps, out);
        steps.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE: &str = "UUDUDDUUDUUUDDUDUDDUDD";

    fn t(s: &str) -> PlaneTree {
        s.parse().unwrap()
    }

    #[test]
    fn decode_examples() {
        let single = t("");
        assert_eq!(single.vertex_count(), 1);
        let cherry = t("UDUD");
        assert_eq!(cherry.root_degree(), 2);
        assert!(cherry.children(0).all(|c| cherry.is_leaf(c)));

        let fig = t(EXAMPLE);
        assert_eq!(fig.vertex_count(), 12);
        let kids: Vec<_> = fig.children(0).collect();
        assert_eq!(kids, vec![1, 4]);
        assert_eq!(fig.degree(4), 3);
        let mid = fig.children(4).nth(1).unwrap();
        assert_eq!(fig.degree(mid), 3);
        let first = fig.children(mid).next().unwrap();
        assert_eq!(fig.degree(first), 1);
        assert_eq!(fig.height(), 4);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(dyck_from_tree(&PlaneTree::singleton()).to_string(), "");
        let path = PlaneTree::from_degrees(vec![1, 1, 0]).unwrap();
        assert_eq!(dyck_from_tree(&path).to_string(), "UUDD");
        assert_eq!(dyck_from_tree(&t(EXAMPLE)).to_string(), EXAMPLE);
    }

    #[test]
    fn invalid_words() {
        assert!("UDD".parse::<DyckPath>().is_err());
        assert!("DU".parse::<DyckPath>().is_err());
        assert!("UUD".parse::<DyckPath>().is_err());
        assert!("UXD".parse::<DyckPath>().is_err());
        assert!(PlaneTree::from_degrees(vec![1]).is_err());
        assert!(PlaneTree::from_degrees(vec![0, 0]).is_err());
        assert!(PlaneTree::from_degrees(vec![]).is_err());
    }

    #[test]
    fn leaf_stats_examples() {
        let fig = leaf_stats(&t(EXAMPLE)).unwrap();
        assert_eq!(fig.s, vec![2, 3, 5, 8, 9, 10, 11]);
        assert_eq!(fig.p, vec![2, 2, 2, 4, 3, 3, 2]);
        assert_eq!(fig.b(), vec![1, 2, 4, 5, 7, 8, 10]);
        let cherry = leaf_stats(&t("UDUD")).unwrap();
        assert_eq!((cherry.s, cherry.p), (vec![1, 2], vec![1, 1]));
        let path = leaf_stats(&t("UUDD")).unwrap();
        assert_eq!((path.s, path.p), (vec![2], vec![2]));
        assert_eq!(leaf_stats(&PlaneTree::singleton()), Err(Error::TrivialTree));
    }

    #[test]
    fn truncation() {
        let fig = t(EXAMPLE);
        assert_eq!(truncate_tree(&fig, 0), PlaneTree::singleton());
        assert_eq!(truncate_tree(&fig, 1), t("UDUD"));
        assert_eq!(truncate_tree(&fig, 2).to_string(), "UUDUDDUUDUDUDD");
        assert_eq!(truncate_tree(&fig, 100), fig);
    }

    #[test]
    fn fringes() {
        let sizes = |s: &str| -> Vec<(u64, bool)> {
            fringe_decomposition(&t(s))
                .unwrap()
                .into_iter()
                .map(|f| (f.size, f.is_single_vertex))
                .collect()
        };
        assert_eq!(sizes(EXAMPLE), vec![(3, false), (8, false)]);
        assert_eq!(sizes("UDUD"), vec![(1, true), (1, true)]);
        assert_eq!(sizes("UUDD"), vec![(2, false)]);
        assert!(fringe_decomposition(&PlaneTree::singleton()).is_err());
    }

    #[test]
    fn fringe_measures() {
        let m = |s: &str| {
            let (f, b) = tree_fixed_point_measures(&t(s)).unwrap();
            (f.positions().to_vec(), b.positions().to_vec())
        };
        assert_eq!(m("UDUD"), (vec![1], vec![1]));
        assert_eq!(m("UUDDUD"), (vec![], vec![1]));
        assert_eq!(m(EXAMPLE), (vec![], vec![]));
        assert!(tree_fixed_point_measures(&PlaneTree::singleton()).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(1).unwrap().count(), 1);
        let three: Vec<String> = enumerate_trees(3).unwrap().map(|t| t.to_string()).collect();
        assert_eq!(three, vec!["UUDD", "UDUD"]);
        assert_eq!(enumerate_trees(9).unwrap().count(), 1430);
        assert!(enumerate_trees(0).is_err());
        assert!(enumerate_trees(11).is_err());
    }

    #[test]
    fn structure_accessors() {
        let fig = t(EXAMPLE);
        assert_eq!(fig.ancestors(8), vec![0, 4, 6, 7]);
        assert_eq!(fig.parent(0), None);
        assert_eq!(fig.subtree_size(0), 12);
        assert_eq!(fig.level_width(1), 2);
        assert_eq!(fig.level_width(2), 5);
        assert_eq!(t(EXAMPLE).peaks_at_height_one(), Vec::<u64>::new());
        assert_eq!(t("UDUUDDUD").peaks_at_height_one(), vec![1, 4]);
    }

    impl PlaneTree {
        fn peaks_at_height_one(&self) -> Vec<u64> {
            dyck_from_tree(self).peaks_at_height(1)
        }
    }
}
