//! The correspondence between plane trees with `n + 1` vertices and
//! 321-avoiding permutations of length `n`.
//!
//! Leaves map to left-to-right maxima: the `i`-th leaf in preorder, with
//! preorder index `s_i` and depth `p_i`, becomes the value `s_i` at position
//! `s_i - p_i + 1`. All other positions receive the unused values in
//! increasing order. Leaves hanging directly off the root (`p_i = 1`) are
//! exactly the fixed points.

use crate::error::{Error, Result};
use crate::perm::{avoids_321, left_to_right_maxima, Permutation};
use crate::tree::{leaf_stats, tree_from_dyck, DyckPath, PlaneTree, Step};

pub fn tree_to_perm(tree: &PlaneTree) -> Result<Permutation> {
    let stats = leaf_stats(tree)?;
    let n = tree.vertex_count() - 1;
    let mut values = vec![0u32; n];
    let mut value_used = vec![false; n + 1];
    for (&s, &p) in stats.s.iter().zip(&stats.p) {
        values[(s - p) as usize] = s as u32;
        value_used[s as usize] = true;
    }
    let mut free = (1..=n as u32).filter(|&v| !value_used[v as usize]);
    for slot in values.iter_mut().filter(|v| **v == 0) {
        *slot = free.next().expect("as many free values as free positions");
    }
    Ok(Permutation::from_vec_unchecked(values))
}

/// Inverse of [`tree_to_perm`], rebuilt through the contour walk.
///
/// The left-to-right maxima give `s_i = τ(m_i)` and `p_i = τ(m_i) - m_i + 1`.
/// The walk climbs to height `p_1`, then between consecutive leaves drops to
/// `p_i - (s_i - s_{i-1})` and climbs back to `p_i`, and finally returns to 0.
pub fn perm_to_tree(perm: &Permutation) -> Result<PlaneTree> {
    if !avoids_321(perm) {
        return Err(Error::Contains321);
    }
    let n = perm.len() as i64;
    let (indices, values) = left_to_right_maxima(perm);
    let mut steps = Vec::with_capacity(2 * perm.len());
    let mut height: i64 = 0;
    let mut prev_s: i64 = 0;
    for (&m, &v) in indices.iter().zip(&values) {
        let s = v as i64;
        let p = s - m as i64 + 1;
        let base = p - (s - prev_s);
        // Leaving a leaf needs at least one down step; the base cannot be negative.
        if base < 0 || (prev_s == 0 && base != 0) || (prev_s > 0 && base >= height) || p <= base {
            return Err(Error::InvalidDyck(format!(
                "maximum {v} at position {m} does not fit a contour walk"
            )));
        }
        steps.extend(std::iter::repeat_n(Step::Down, (height - base) as usize));
        steps.extend(std::iter::repeat_n(Step::Up, (p - base) as usize));
        height = p;
        prev_s = s;
    }
    if prev_s != n {
        return Err(Error::InvalidDyck("last maximum must equal n".into()));
    }
    steps.extend(std::iter::repeat_n(Step::Down, height as usize));
    Ok(tree_from_dyck(&DyckPath::new(steps)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_TREE: &str = "UUDUDDUUDUUUDDUDUDDUDD";
    const EXAMPLE_PERM: &str = "2 3 1 5 8 4 9 10 6 11 7";

    fn t(s: &str) -> PlaneTree {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(tree_to_perm(&t(EXAMPLE_TREE)).unwrap(), p(EXAMPLE_PERM));
        assert_eq!(tree_to_perm(&t("UDUD")).unwrap(), p("1 2"));
        assert_eq!(tree_to_perm(&t("UUDD")).unwrap(), p("2 1"));
        assert_eq!(tree_to_perm(&t("UD")).unwrap(), p("1"));
        assert_eq!(
            tree_to_perm(&PlaneTree::singleton()),
            Err(Error::TrivialTree)
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(perm_to_tree(&p(EXAMPLE_PERM)).unwrap(), t(EXAMPLE_TREE));
        assert_eq!(perm_to_tree(&p("1 2")).unwrap().to_string(), "UDUD");
        assert_eq!(perm_to_tree(&p("1")).unwrap().to_string(), "UD");
        assert_eq!(perm_to_tree(&p("3 2 1")), Err(Error::Contains321));
        assert_eq!(perm_to_tree(&p("4 1 3 2")), Err(Error::Contains321));
    }
}
