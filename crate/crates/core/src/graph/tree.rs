use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::RingContext;

/// Preimage tree hanging off a cyclic node, truncated at `height`.
///
/// Level 0 holds the root. Level `i` holds the non-cyclic nodes that reach
/// the root after exactly `i` squarings; each level is ascending. Trailing
/// levels are empty when the tree is shallower than `height`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: u64,
    pub levels: Vec<Vec<u64>>,
    /// child -> child^2 for every non-root node
    pub parent: BTreeMap<u64, u64>,
}

impl RootedTree {
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// All nodes, level by level.
    pub fn nodes(&self) -> impl Iterator<Item = u64> + '_ {
        self.levels.iter().flatten().copied()
    }

    pub fn level_of(&self, w: u64) -> Result<usize> {
        self.levels
            .iter()
            .position(|level| level.binary_search(&w).is_ok())
            .ok_or(Error::NotInTree(w))
    }

    /// Children of `w` in the tree, ascending.
    pub fn children(&self, w: u64) -> Vec<u64> {
        let Ok(level) = self.level_of(w) else {
            return Vec::new();
        };
        self.levels
            .get(level + 1)
            .map(|next| {
                next.iter()
                    .copied()
                    .filter(|c| self.parent.get(c) == Some(&w))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Breadth-first preimage tree of the cyclic residue `a`, `height` levels deep.
pub fn tree_of(a: u64, height: usize, ctx: &RingContext) -> Result<RootedTree> {
    if a >= ctx.modulus() {
        return Err(Error::OutOfRange {
            value: a,
            bound: ctx.modulus(),
        });
    }
    // the cyclic preimage of a is a's predecessor on its cycle
    let on_cycle = ctx.cyclic_sqrt(a)?;
    let mut levels = vec![vec![a]];
    let mut parent = BTreeMap::new();
    for depth in 0..height {
        let mut next = Vec::new();
        for &b in &levels[depth] {
            for x in ctx.sqrt_mod_n(b) {
                if depth == 0 && x == on_cycle {
                    continue;
                }
                parent.insert(x, b);
                next.push(x);
            }
        }
        next.sort_unstable();
        levels.push(next);
    }
    Ok(RootedTree {
        root: a,
        levels,
        parent,
    })
}

/// A run `a_0, a_1, ..., a_n` backwards along a cycle: `a_{i-1} = a_i^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub nodes: Vec<u64>,
}

impl Arc {
    /// Number of steps, one less than the node count.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn arc_of(a: u64, n: usize, ctx: &RingContext) -> Result<Arc> {
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(a % ctx.modulus());
    if !ctx.is_cyclic(nodes[0]) {
        return Err(Error::NotCyclic(a));
    }
    for i in 0..n {
        nodes.push(ctx.cyclic_sqrt(nodes[i])?);
    }
    Ok(Arc { nodes })
}

/// Multiplies level `i` of `tree` by the arc node `a_i`.
///
/// Requires `arc.len() == tree.height()` and every arc node to be a unit;
/// since each `a_i` is a power of `a_n`, checking `a_n` suffices.
pub fn arc_tree_mul(arc: &Arc, tree: &RootedTree, ctx: &RingContext) -> Result<RootedTree> {
    if arc.len() != tree.height() {
        return Err(Error::HeightMismatch {
            arc: arc.len(),
            tree: tree.height(),
        });
    }
    let last = *arc.nodes.last().expect("arc has a node");
    if !ctx.is_unit(last) {
        return Err(Error::ZeroDivisorArc(last));
    }
    let levels = tree
        .levels
        .iter()
        .zip(&arc.nodes)
        .map(|(level, &a)| {
            let mut out: Vec<u64> = level.iter().map(|&b| ctx.mul(a, b)).collect();
            out.sort_unstable();
            out
        })
        .collect();
    let parent = tree
        .parent
        .iter()
        .map(|(&child, &par)| {
            let i = tree.level_of(child).expect("parent map covers tree nodes");
            (ctx.mul(arc.nodes[i], child), ctx.mul(arc.nodes[i - 1], par))
        })
        .collect();
    Ok(RootedTree {
        root: ctx.mul(arc.nodes[0], tree.root),
        levels,
        parent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{field_kernel, ring_kernel};
    use crate::ring::Side;

    fn ctx(s: u64, p: u64) -> RingContext {
        RingContext::new(s, p).unwrap()
    }

    #[test]
    fn kernel_tree_of_29_41() {
        let c = ctx(29, 41);
        let t = tree_of(1, 3, &c).unwrap();
        let sizes: Vec<usize> = t.levels.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 12, 16]);
        let mut nodes: Vec<u64> = t.nodes().collect();
        nodes.sort_unstable();
        assert_eq!(nodes, ring_kernel(&c));
        assert_eq!(t.level_of(916), Ok(3));
        assert_eq!(t.level_of(1), Ok(0));
        assert_eq!(t.level_of(2), Err(Error::NotInTree(2)));
    }

    #[test]
    fn small_trees() {
        let c = ctx(11, 23);
        let t = tree_of(1, 1, &c).unwrap();
        assert_eq!(t.levels, vec![vec![1], vec![45, 208, 252]]);
        assert_eq!(t.level_of(45), Ok(1));
        let t = tree_of(3, 1, &c).unwrap();
        assert_eq!(t.levels, vec![vec![3], vec![39, 214, 237]]);
        assert_eq!(t.children(3), vec![39, 214, 237]);
        assert_eq!(tree_of(45, 1, &c), Err(Error::NotCyclic(45)));
        let deep = tree_of(1, 3, &c).unwrap();
        assert_eq!(deep.height(), 3);
        assert!(deep.levels[2].is_empty());
    }

    #[test]
    fn arcs() {
        let c = ctx(11, 23);
        assert_eq!(arc_of(3, 1, &c).unwrap().nodes, vec![3, 16]);
        assert_eq!(arc_of(1, 2, &c).unwrap().nodes, vec![1, 1, 1]);
        assert_eq!(arc_of(69, 2, &c).unwrap().nodes, vec![69, 115, 92]);
        assert_eq!(arc_of(45, 1, &c), Err(Error::NotCyclic(45)));
    }

    #[test]
    fn arc_times_tree() {
        let c = ctx(11, 23);
        let kernel = tree_of(1, 1, &c).unwrap();
        let unit = arc_of(1, 1, &c).unwrap();
        assert_eq!(arc_tree_mul(&unit, &kernel, &c).unwrap(), kernel);

        let moved = arc_tree_mul(&arc_of(3, 1, &c).unwrap(), &kernel, &c).unwrap();
        assert_eq!(moved, tree_of(3, 1, &c).unwrap());

        assert_eq!(
            arc_tree_mul(&arc_of(69, 1, &c).unwrap(), &kernel, &c),
            Err(Error::ZeroDivisorArc(115))
        );
        assert_eq!(
            arc_tree_mul(&arc_of(3, 2, &c).unwrap(), &kernel, &c),
            Err(Error::HeightMismatch { arc: 2, tree: 1 })
        );
    }

    #[test]
    fn arc_times_kernel_tree_gives_tree_of_every_cyclic_unit() {
        for (s, p) in [(11, 23), (29, 41), (17, 97)] {
            let c = ctx(s, p);
            let n = c.height() as usize;
            let kernel = tree_of(1, n, &c).unwrap();
            for a in (1..c.modulus()).filter(|&a| c.is_unit(a) && c.is_cyclic(a)) {
                let arc = arc_of(a, n, &c).unwrap();
                assert_eq!(
                    arc_tree_mul(&arc, &kernel, &c).unwrap(),
                    tree_of(a, n, &c).unwrap()
                );
            }
        }
    }

    #[test]
    fn kernel_levels_are_component_maxima() {
        for (s, p) in [(29, 41), (17, 97), (13, 5)] {
            let c = ctx(s, p);
            let t = tree_of(1, c.height() as usize, &c).unwrap();
            let component_level = |x: u64, side: Side| {
                (0..=c.height())
                    .find(|&i| c.pow2iter(x, i) == c.unity(side))
                    .unwrap()
            };
            assert_eq!(t.node_count(), 1 << (c.k() + c.l()));
            for a in field_kernel(&c, Side::S) {
                for b in field_kernel(&c, Side::P) {
                    let w = c.add(a, b);
                    let expected = component_level(a, Side::S).max(component_level(b, Side::P));
                    assert_eq!(t.level_of(w).unwrap(), expected as usize);
                }
            }
            // a node has (roots of a) * (roots of b) preimages; a component
            // has 2 square roots in its kernel until it reaches full depth
            for a in field_kernel(&c, Side::S) {
                for b in field_kernel(&c, Side::P) {
                    let w = c.add(a, b);
                    let r_a = if component_level(a, Side::S) < c.l() {
                        2
                    } else {
                        0
                    };
                    let r_b = if component_level(b, Side::P) < c.k() {
                        2
                    } else {
                        0
                    };
                    let expected = if w == 1 { r_a * r_b - 1 } else { r_a * r_b };
                    assert_eq!(t.children(w).len(), expected, "w={w}");
                }
            }
        }
    }
}
