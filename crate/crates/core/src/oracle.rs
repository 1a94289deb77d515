//! Brute-force reference implementations.
//!
//! Nothing here calls into the other modules: arithmetic, idempotents and
//! kernels are recomputed from their definitions so that agreement with the
//! main code paths is evidence rather than tautology.

use crate::error::{Error, Result};
use crate::partition::SubsetClass;
use crate::ring::DEFAULT_BUDGET;

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Full successor tableau of `w -> w^2 mod n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteGraph {
    pub successor: Vec<u64>,
    pub is_cyclic: Vec<bool>,
    /// Index into `cycles` for cyclic nodes.
    pub cycle_id: Vec<Option<usize>>,
    /// First cyclic node reached from each node.
    pub tree_root: Vec<u64>,
    /// Each cycle starts at its smallest node; ordered by that node.
    pub cycles: Vec<Vec<u64>>,
}

pub fn brute_graph(n: u64) -> Result<BruteGraph> {
    if n as u128 > DEFAULT_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            needed: n as u128,
            budget: DEFAULT_BUDGET,
        });
    }
    let size = n as usize;
    let successor: Vec<u64> = (0..n).map(|w| mulmod(w, w, n)).collect();

    // walk from every node until something repeats; the repeat opens a cycle
    let mut is_cyclic = vec![false; size];
    let mut stamp = vec![usize::MAX; size];
    for start in 0..size {
        let mut w = start;
        while stamp[w] != start {
            stamp[w] = start;
            w = successor[w] as usize;
        }
        let first = w;
        loop {
            is_cyclic[w] = true;
            w = successor[w] as usize;
            if w == first {
                break;
            }
        }
    }

    let mut cycles = Vec::new();
    let mut cycle_id = vec![None; size];
    for w in 0..size {
        if is_cyclic[w] && cycle_id[w].is_none() {
            let mut cycle = vec![w as u64];
            cycle_id[w] = Some(cycles.len());
            let mut x = successor[w] as usize;
            while x != w {
                cycle_id[x] = Some(cycles.len());
                cycle.push(x as u64);
                x = successor[x] as usize;
            }
            cycles.push(cycle);
        }
    }

    let tree_root = (0..size)
        .map(|start| {
            let mut w = start;
            while !is_cyclic[w] {
                w = successor[w] as usize;
            }
            w as u64
        })
        .collect();

    Ok(BruteGraph {
        successor,
        is_cyclic,
        cycle_id,
        tree_root,
        cycles,
    })
}

/// Literal membership tables for the sets behind the nine cells.
#[derive(Debug, Clone)]
pub struct BruteClassifier {
    s: u64,
    p: u64,
    s_kernel: Vec<bool>,
    p_kernel: Vec<bool>,
    ring_kernel: Vec<bool>,
    /// `{yp + e : e in sK_p}`
    p_offset_s_kernel: Vec<bool>,
    /// `{xs + e : e in pK_s}`
    s_offset_p_kernel: Vec<bool>,
}

fn two_adic(m: u64) -> u32 {
    let mut e = 0;
    let mut d = m - 1;
    while d % 2 == 0 {
        d /= 2;
        e += 1;
    }
    e
}

fn square_times(mut w: u64, times: u32, n: u64) -> u64 {
    for _ in 0..times {
        w = mulmod(w, w, n);
    }
    w
}

impl BruteClassifier {
    pub fn new(s: u64, p: u64) -> Self {
        let n = s * p;
        let size = n as usize;
        // the nonzero idempotent among the multiples of m
        let idempotent = |m: u64| {
            (1..n / m)
                .map(|j| j * m)
                .find(|&e| mulmod(e, e, n) == e)
                .expect("a nonzero idempotent exists")
        };
        let (e_s, e_p) = (idempotent(s), idempotent(p));
        let (k, l) = (two_adic(s), two_adic(p));
        let height = k.max(l);

        let mut s_kernel = vec![false; size];
        for j in 1..p {
            let x = j * s;
            s_kernel[x as usize] = square_times(x, l, n) == e_s;
        }
        let mut p_kernel = vec![false; size];
        for j in 1..s {
            let x = j * p;
            p_kernel[x as usize] = square_times(x, k, n) == e_p;
        }
        let ring_kernel = (0..n).map(|w| square_times(w, height, n) == 1).collect();

        let mut p_offset_s_kernel = vec![false; size];
        let mut s_offset_p_kernel = vec![false; size];
        for e in 0..n {
            if s_kernel[e as usize] {
                for y in 0..s {
                    p_offset_s_kernel[((y * p + e) % n) as usize] = true;
                }
            }
            if p_kernel[e as usize] {
                for x in 0..p {
                    s_offset_p_kernel[((x * s + e) % n) as usize] = true;
                }
            }
        }
        Self {
            s,
            p,
            s_kernel,
            p_kernel,
            ring_kernel,
            p_offset_s_kernel,
            s_offset_p_kernel,
        }
    }

    pub fn classify(&self, w: u64) -> SubsetClass {
        let i = w as usize;
        if w == 0 {
            SubsetClass::Zero
        } else if w % self.s == 0 {
            if self.s_kernel[i] {
                SubsetClass::SKernel
            } else {
                SubsetClass::SFieldRest
            }
        } else if w % self.p == 0 {
            if self.p_kernel[i] {
                SubsetClass::PKernel
            } else {
                SubsetClass::PFieldRest
            }
        } else if self.ring_kernel[i] {
            SubsetClass::RingKernel
        } else if self.p_offset_s_kernel[i] {
            SubsetClass::OffByOneP
        } else if self.s_offset_p_kernel[i] {
            SubsetClass::OffByOneS
        } else {
            SubsetClass::DSet
        }
    }
}

/// One-off classification; builds a [`BruteClassifier`] per call.
pub fn brute_classify(w: u64, s: u64, p: u64) -> SubsetClass {
    BruteClassifier::new(s, p).classify(w)
}

/// True when `d` is a proper divisor of `n`, by literal gcd.
pub fn splits(d: u64, n: u64) -> bool {
    let g = gcd(d, n);
    1 < g && g < n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_examples() {
        let g = brute_graph(21).unwrap();
        let fixed: Vec<u64> = g
            .cycles
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect();
        assert_eq!(fixed, vec![0, 1, 7, 15]);

        let g = brute_graph(253).unwrap();
        assert_eq!(g.cycles.iter().filter(|c| c.len() == 20).count(), 2);
        for w in 0..253usize {
            assert!(g.is_cyclic[g.tree_root[w] as usize]);
        }

        let g = brute_graph(1).unwrap();
        assert_eq!(g.successor, vec![0]);
        assert_eq!(g.cycles, vec![vec![0]]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(brute_classify(22, 11, 23), SubsetClass::SKernel);
        assert_eq!(brute_classify(2, 11, 23), SubsetClass::DSet);
        assert_eq!(brute_classify(0, 11, 23), SubsetClass::Zero);
        assert_eq!(brute_classify(24, 11, 23), SubsetClass::OffByOneP);
        assert_eq!(brute_classify(1, 11, 23), SubsetClass::RingKernel);
    }

    #[test]
    fn budget() {
        assert!(matches!(
            brute_graph(DEFAULT_BUDGET + 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn splits_is_literal() {
        assert!(splits(44, 253));
        assert!(!splits(253, 253));
        assert!(!splits(1, 253));
    }
}
