//! Functional graph of `w -> w^2 mod N` over a subset closed under squaring.

mod cycles;
mod tree;

pub use cycles::{
    combine_cycles, cycles_of, inner_cycles, observed_max_dset_cycle, CycleRecord, InnerCycles,
};
pub use tree::{arc_of, arc_tree_mul, tree_of, Arc, RootedTree};

use crate::error::{Error, Result};
use crate::ring::RingContext;

const UNSEEN: u8 = 0;
const ON_PATH: u8 = 1;
const DONE: u8 = 2;

/// Successor tableau, cycles and tree attachment for a closed domain.
///
/// Nodes are stored ascending and addressed by index; residues are mapped
/// to indices by binary search.
#[derive(Debug, Clone)]
pub struct FunctionalGraph {
    nodes: Vec<u64>,
    succ: Vec<u32>,
    // reverse adjacency in CSR form
    pred_start: Vec<u32>,
    pred: Vec<u32>,
    cycle_id: Vec<Option<u32>>,
    root: Vec<u32>,
    depth: Vec<u32>,
    cycles: Vec<Vec<u64>>,
}

impl FunctionalGraph {
    /// Domain, ascending.
    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.index(w).is_some()
    }

    fn index(&self, w: u64) -> Option<usize> {
        self.nodes.binary_search(&w).ok()
    }

    pub fn successor(&self, w: u64) -> Option<u64> {
        self.index(w).map(|i| self.nodes[self.succ[i] as usize])
    }

    /// Preimages of `w` inside the domain, ascending.
    pub fn preimages(&self, w: u64) -> Vec<u64> {
        let Some(i) = self.index(w) else {
            return Vec::new();
        };
        let (a, b) = (self.pred_start[i] as usize, self.pred_start[i + 1] as usize);
        self.pred[a..b]
            .iter()
            .map(|&j| self.nodes[j as usize])
            .collect()
    }

    /// Cycles, each starting at its smallest residue, ordered by that residue.
    pub fn cycles(&self) -> &[Vec<u64>] {
        &self.cycles
    }

    pub fn is_cyclic(&self, w: u64) -> bool {
        self.cycle_id(w).is_some()
    }

    /// Position of `w`'s cycle in [`cycles`](Self::cycles), if `w` is cyclic.
    pub fn cycle_id(&self, w: u64) -> Option<usize> {
        self.index(w)
            .and_then(|i| self.cycle_id[i])
            .map(|c| c as usize)
    }

    /// The cyclic node whose tree contains `w` (itself when cyclic).
    pub fn tree_root(&self, w: u64) -> Option<u64> {
        self.index(w).map(|i| self.nodes[self.root[i] as usize])
    }

    /// Squarings needed to reach a cyclic node.
    pub fn depth(&self, w: u64) -> Option<u32> {
        self.index(w).map(|i| self.depth[i])
    }

    /// Cyclic nodes with at least one non-cyclic preimage, ascending.
    pub fn tree_roots(&self) -> Vec<u64> {
        (0..self.nodes.len())
            .filter(|&i| self.cycle_id[i].is_some())
            .filter(|&i| {
                let (a, b) = (self.pred_start[i] as usize, self.pred_start[i + 1] as usize);
                self.pred[a..b]
                    .iter()
                    .any(|&j| self.cycle_id[j as usize].is_none())
            })
            .map(|i| self.nodes[i])
            .collect()
    }

    /// Cycle records for every cycle, in [`cycles`](Self::cycles) order.
    pub fn cycle_records(&self, ctx: &RingContext) -> Vec<CycleRecord> {
        self.cycles
            .iter()
            .map(|c| CycleRecord::from_nodes_unchecked(c.clone(), ctx))
            .collect()
    }
}

/// Builds the functional graph of squaring over `domain`.
pub fn build_graph(domain: &[u64], ctx: &RingContext) -> Result<FunctionalGraph> {
    ctx.check_budget(domain.len() as u128)?;
    let mut nodes: Vec<u64> = domain.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&w) = nodes.iter().find(|&&w| w >= ctx.modulus()) {
        return Err(Error::OutOfRange {
            value: w,
            bound: ctx.modulus(),
        });
    }
    let size = nodes.len();
    let mut succ = Vec::with_capacity(size);
    for &w in &nodes {
        let sq = ctx.fsquare(w);
        match nodes.binary_search(&sq) {
            Ok(j) => succ.push(j as u32),
            Err(_) => {
                return Err(Error::NotClosed {
                    value: w,
                    square: sq,
                })
            }
        }
    }

    let mut pred_start = vec![0u32; size + 1];
    for &j in &succ {
        pred_start[j as usize + 1] += 1;
    }
    for i in 0..size {
        pred_start[i + 1] += pred_start[i];
    }
    let mut fill = pred_start.clone();
    let mut pred = vec![0u32; size];
    for (i, &j) in succ.iter().enumerate() {
        pred[fill[j as usize] as usize] = i as u32;
        fill[j as usize] += 1;
    }

    // visited-array walk: every path ends on a new cycle or a finished node
    let mut state = vec![UNSEEN; size];
    let mut raw_cycles: Vec<Vec<u32>> = Vec::new();
    let mut path = Vec::new();
    for start in 0..size {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut i = start;
        while state[i] == UNSEEN {
            state[i] = ON_PATH;
            path.push(i as u32);
            i = succ[i] as usize;
        }
        if state[i] == ON_PATH {
            let at = path.iter().position(|&x| x as usize == i).unwrap();
            raw_cycles.push(path[at..].to_vec());
        }
        for &x in &path {
            state[x as usize] = DONE;
        }
    }

    let mut cycles: Vec<Vec<u64>> = raw_cycles
        .into_iter()
        .map(|c| canonical_rotation(c.iter().map(|&i| nodes[i as usize]).collect()))
        .collect();
    cycles.sort_unstable_by_key(|c| c[0]);

    let mut cycle_id = vec![None; size];
    let mut root = vec![0u32; size];
    let mut depth = vec![0u32; size];
    let mut queue = Vec::new();
    for (c, cycle) in cycles.iter().enumerate() {
        for w in cycle {
            let i = nodes.binary_search(w).unwrap();
            cycle_id[i] = Some(c as u32);
            root[i] = i as u32;
            queue.push(i as u32);
        }
    }
    // breadth-first outward from the cycles along reverse edges
    let mut head = 0;
    while head < queue.len() {
        let i = queue[head] as usize;
        head += 1;
        for &j in &pred[pred_start[i] as usize..pred_start[i + 1] as usize] {
            let j = j as usize;
            if cycle_id[j].is_none() {
                root[j] = root[i];
                depth[j] = depth[i] + 1;
                queue.push(j as u32);
            }
        }
    }

    Ok(FunctionalGraph {
        nodes,
        succ,
        pred_start,
        pred,
        cycle_id,
        root,
        depth,
        cycles,
    })
}

/// Rotates a cycle so it starts at its smallest element.
pub(crate) fn canonical_rotation(mut cycle: Vec<u64>) -> Vec<u64> {
    if let Some(at) = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &w)| w)
        .map(|(i, _)| i)
    {
        cycle.rotate_left(at);
    }
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::ring_kernel;

    fn ctx(s: u64, p: u64) -> RingContext {
        RingContext::new(s, p).unwrap()
    }

    #[test]
    fn kernel_graph_of_29_41() {
        let c = ctx(29, 41);
        let g = build_graph(&ring_kernel(&c), &c).unwrap();
        assert_eq!(g.cycles(), &[vec![1]]);
        assert_eq!(g.tree_roots(), vec![1]);
        assert_eq!(g.nodes().iter().filter_map(|&w| g.depth(w)).max(), Some(3));
        assert!(g.nodes().iter().all(|&w| g.tree_root(w) == Some(1)));
    }

    #[test]
    fn trivial_domains() {
        let c = ctx(11, 23);
        let g = build_graph(&[0], &c).unwrap();
        assert_eq!(g.cycles(), &[vec![0]]);
        assert!(g.tree_roots().is_empty());
        assert_eq!(build_graph(&[1], &c).unwrap().cycles(), &[vec![1]]);
    }

    #[test]
    fn whole_ring_of_253() {
        let c = ctx(11, 23);
        let all: Vec<u64> = (0..253).collect();
        let g = build_graph(&all, &c).unwrap();
        let twenties = g.cycles().iter().filter(|cy| cy.len() == 20).count();
        assert_eq!(twenties, 2);
        for &w in g.nodes() {
            let r = g.tree_root(w).unwrap();
            assert!(g.is_cyclic(r));
            assert_eq!(c.pow2iter(w, g.depth(w).unwrap()), r);
            for x in g.preimages(w) {
                assert_eq!(c.fsquare(x), w);
            }
        }
        let cyclic = g.nodes().iter().filter(|&&w| g.is_cyclic(w)).count();
        let by_ctx = (0..253).filter(|&w| c.is_cyclic(w)).count();
        assert_eq!(cyclic, by_ctx);
    }

    #[test]
    fn rejects_open_domain() {
        let c = ctx(11, 23);
        assert_eq!(
            build_graph(&[2], &c).unwrap_err(),
            Error::NotClosed {
                value: 2,
                square: 4
            }
        );
        assert!(matches!(
            build_graph(&[300], &c),
            Err(Error::OutOfRange { .. })
        ));
    }
}
