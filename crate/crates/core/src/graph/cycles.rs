use std::collections::HashSet;

use serde::Serialize;

use super::{build_graph, canonical_rotation};
use crate::error::{Error, Result};
use crate::partition::{enumerate_class, SubsetClass};
use crate::ring::arith::{gcd, lcm};
use crate::ring::RingContext;

/// A cycle of the squaring map with its periods modulo each prime.
///
/// `s_period` is the period of the nodes mod s (equivalently of their
/// `yp` components), `p_period` the period mod p (of the `xs` components).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub nodes: Vec<u64>,
    pub length: usize,
    pub s_period: usize,
    pub p_period: usize,
    pub s_laps: usize,
    pub p_laps: usize,
}

impl CycleRecord {
    /// Validates that `nodes` is a cycle in order (`nodes[t+1] = nodes[t]^2`).
    pub fn from_nodes(nodes: Vec<u64>, ctx: &RingContext) -> Result<Self> {
        let len = nodes.len();
        if len == 0 || nodes.iter().any(|&w| w >= ctx.modulus()) {
            return Err(Error::NotACycle);
        }
        let steps_ok = (0..len).all(|t| ctx.fsquare(nodes[t]) == nodes[(t + 1) % len]);
        let distinct = nodes.iter().collect::<HashSet<_>>().len() == len;
        if !(steps_ok && distinct) {
            return Err(Error::NotACycle);
        }
        Ok(Self::from_nodes_unchecked(nodes, ctx))
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<u64>, ctx: &RingContext) -> Self {
        let length = nodes.len();
        let s_period = period_mod(&nodes, ctx.s());
        let p_period = period_mod(&nodes, ctx.p());
        Self {
            nodes,
            length,
            s_period,
            p_period,
            s_laps: length / s_period,
            p_laps: length / p_period,
        }
    }
}

// the reduction of a cycle is again an orbit, so the first return is the period
fn period_mod(nodes: &[u64], m: u64) -> usize {
    let len = nodes.len();
    (1..=len)
        .find(|&d| nodes[d % len] % m == nodes[0] % m)
        .expect("d = len always returns")
}

/// Every cycle of the squaring map inside a closed `domain`.
pub fn cycles_of(domain: &[u64], ctx: &RingContext) -> Result<Vec<CycleRecord>> {
    Ok(build_graph(domain, ctx)?.cycle_records(ctx))
}

/// Joins a cycle of `sF_p` with a cycle of `pF_s` into the `gcd` cycles of
/// length `lcm` that they induce in Z_N.
///
/// Cycle `d` pairs `cs[(t + d) mod |cs|]` with `cp[t mod |cp|]`. Each output
/// cycle starts at its smallest residue; the list is ordered by that residue.
pub fn combine_cycles(
    cs: &CycleRecord,
    cp: &CycleRecord,
    ctx: &RingContext,
) -> Result<Vec<CycleRecord>> {
    for (cycle, prime, label) in [(cs, ctx.s(), "sF_p"), (cp, ctx.p(), "pF_s")] {
        CycleRecord::from_nodes(cycle.nodes.clone(), ctx)?;
        if cycle.nodes.iter().any(|&w| w % prime != 0) {
            return Err(Error::NotAFieldCycle(label));
        }
    }
    let (a, b) = (cs.nodes.len(), cp.nodes.len());
    let (count, len) = (
        gcd(a as u64, b as u64) as usize,
        lcm(a as u64, b as u64) as usize,
    );
    let mut out: Vec<CycleRecord> = (0..count)
        .map(|d| {
            let nodes = (0..len)
                .map(|t| ctx.add(cs.nodes[(t + d) % a], cp.nodes[t % b]))
                .collect();
            CycleRecord::from_nodes_unchecked(canonical_rotation(nodes), ctx)
        })
        .collect();
    out.sort_unstable_by_key(|c| c.nodes[0]);
    Ok(out)
}

/// The two component cycles a cycle of Z_N winds around.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerCycles {
    /// `yp` components of the first `s_period` nodes: a cycle of `pF_s`.
    pub s_reduced: Vec<u64>,
    pub s_laps: usize,
    /// `xs` components of the first `p_period` nodes: a cycle of `sF_p`.
    pub p_reduced: Vec<u64>,
    pub p_laps: usize,
}

pub fn inner_cycles(cycle: &CycleRecord, ctx: &RingContext) -> Result<InnerCycles> {
    let rec = CycleRecord::from_nodes(cycle.nodes.clone(), ctx)?;
    let split: Vec<_> = rec.nodes.iter().map(|&w| ctx.h_split(w)).collect();
    Ok(InnerCycles {
        s_reduced: split[..rec.s_period].iter().map(|h| h.yp).collect(),
        s_laps: rec.s_laps,
        p_reduced: split[..rec.p_period].iter().map(|h| h.xs).collect(),
        p_laps: rec.p_laps,
    })
}

/// Longest cycle inside the `DSet` cell, or `None` when the cell is empty.
pub fn observed_max_dset_cycle(ctx: &RingContext) -> Result<Option<u64>> {
    let dset = enumerate_class(ctx, SubsetClass::DSet)?;
    let graph = build_graph(&dset, ctx)?;
    Ok(graph.cycles().iter().map(|c| c.len() as u64).max())
}
