//! The nine-cell partition of Z_N.
//!
//! Each residue is split by `h` into `(xs, yp)`. The multiples of `s` split
//! further into `{0}`, their kernel `sK_p` (elements squared onto `unity_s`)
//! and the rest `sF_p**`; the multiples of `p` split the same way. The
//! product of the two three-way splits gives nine disjoint cells:
//!
//! | xs \ yp      | 0          | pK_s         | pF_s**        |
//! |--------------|------------|--------------|---------------|
//! | 0            | Zero       | PKernel      | PFieldRest    |
//! | sK_p         | SKernel    | RingKernel   | OffByOneP     |
//! | sF_p**       | SFieldRest | OffByOneS    | DSet          |

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::ring::arith::{largest_prime_factor, lcm};
use crate::ring::{CrtPair, RingContext, Side};

pub use crate::ring::arith::factor_pow2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SubsetClass {
    Zero,
    SKernel,
    SFieldRest,
    PKernel,
    PFieldRest,
    RingKernel,
    OffByOneS,
    OffByOneP,
    DSet,
}

impl SubsetClass {
    pub const ALL: [SubsetClass; 9] = [
        SubsetClass::Zero,
        SubsetClass::SKernel,
        SubsetClass::SFieldRest,
        SubsetClass::PKernel,
        SubsetClass::PFieldRest,
        SubsetClass::RingKernel,
        SubsetClass::OffByOneS,
        SubsetClass::OffByOneP,
        SubsetClass::DSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubsetClass::Zero => "Zero",
            SubsetClass::SKernel => "SKernel",
            SubsetClass::SFieldRest => "SFieldRest",
            SubsetClass::PKernel => "PKernel",
            SubsetClass::PFieldRest => "PFieldRest",
            SubsetClass::RingKernel => "RingKernel",
            SubsetClass::OffByOneS => "OffByOneS",
            SubsetClass::OffByOneP => "OffByOneP",
            SubsetClass::DSet => "DSet",
        }
    }

    pub fn from_cells(xs: Cell, yp: Cell) -> Self {
        use Cell::*;
        match (xs, yp) {
            (Zero, Zero) => SubsetClass::Zero,
            (Kernel, Zero) => SubsetClass::SKernel,
            (Rest, Zero) => SubsetClass::SFieldRest,
            (Zero, Kernel) => SubsetClass::PKernel,
            (Zero, Rest) => SubsetClass::PFieldRest,
            (Kernel, Kernel) => SubsetClass::RingKernel,
            (Rest, Kernel) => SubsetClass::OffByOneS,
            (Kernel, Rest) => SubsetClass::OffByOneP,
            (Rest, Rest) => SubsetClass::DSet,
        }
    }

    /// Multiples of `s` or `p` (including 0).
    pub fn is_multiple(self) -> bool {
        matches!(
            self,
            SubsetClass::Zero
                | SubsetClass::SKernel
                | SubsetClass::SFieldRest
                | SubsetClass::PKernel
                | SubsetClass::PFieldRest
        )
    }

    /// Off-by-one multiples, kernel included.
    pub fn is_off_by_one(self) -> bool {
        matches!(
            self,
            SubsetClass::RingKernel | SubsetClass::OffByOneS | SubsetClass::OffByOneP
        )
    }
}

impl fmt::Display for SubsetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of one CRT component inside its embedded field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    Kernel,
    Rest,
}

/// Where the component `x` (a multiple of the `side` prime) sits.
pub fn component_cell(x: u64, side: Side, ctx: &RingContext) -> Cell {
    if x == 0 {
        Cell::Zero
    } else if ctx.pow2iter(x, ctx.kernel_depth(side)) == ctx.unity(side) {
        Cell::Kernel
    } else {
        Cell::Rest
    }
}

/// Kernel of the embedded field on `side`: `sK_p` for [`Side::S`] (size
/// `2^l`) and `pK_s` for [`Side::P`] (size `2^k`). Ascending.
pub fn field_kernel(ctx: &RingContext, side: Side) -> Vec<u64> {
    let prime = ctx.prime(side);
    let count = ctx.modulus() / prime;
    (0..count)
        .map(|x| x * prime)
        .filter(|&w| component_cell(w, side, ctx) == Cell::Kernel)
        .collect()
}

/// The kernel `K_sp` of Z_N, built as `h^-1(sK_p x pK_s)`. Ascending.
pub fn ring_kernel(ctx: &RingContext) -> Vec<u64> {
    let s_side = field_kernel(ctx, Side::S);
    let p_side = field_kernel(ctx, Side::P);
    let mut out: Vec<u64> = s_side
        .iter()
        .flat_map(|&a| p_side.iter().map(move |&b| ctx.add(a, b)))
        .collect();
    out.sort_unstable();
    out
}

pub fn classify(w: u64, ctx: &RingContext) -> SubsetClass {
    let CrtPair { xs, yp } = ctx.h_split(w);
    SubsetClass::from_cells(
        component_cell(xs, Side::S, ctx),
        component_cell(yp, Side::P, ctx),
    )
}

/// Closed-form cardinalities of the partition together with the claimed
/// and observed maximum cycle length inside the `DSet` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityReport {
    /// `s + p - 1`
    pub n_multiples: u64,
    /// `2^(k+l) * (q + r - 1)`
    pub n_offbyone: u64,
    /// `2^(k+l) * (q - 1) * (r - 1)`
    pub n_dset: u64,
    /// `2^(k+l)`
    pub n_kernel: u64,
    /// `(q - 1) * (r - 1)`
    pub n_dset_cyclic: u64,
    /// Largest prime factor of `q - 1` (1 when `q = 1`).
    pub q_lpf: u64,
    pub r_lpf: u64,
    /// `lcm(q_lpf, r_lpf)`
    pub claimed_max_cycle: u64,
    /// Filled in from an actual enumeration; `None` until then or when the
    /// `DSet` cell is empty.
    pub observed_max_cycle: Option<u64>,
}

impl CardinalityReport {
    pub fn with_observed(mut self, observed: Option<u64>) -> Self {
        self.observed_max_cycle = observed;
        self
    }

    /// `Some(true)` when the observed maximum differs from the claimed one.
    pub fn max_cycle_mismatch(&self) -> Option<bool> {
        self.observed_max_cycle
            .map(|obs| obs != self.claimed_max_cycle)
    }
}

pub fn cardinalities(ctx: &RingContext) -> CardinalityReport {
    let (s, p, q, r) = (ctx.s(), ctx.p(), ctx.q(), ctx.r());
    let kernel = 1u64 << (ctx.k() + ctx.l());
    let q_lpf = largest_prime_factor(q - 1);
    let r_lpf = largest_prime_factor(r - 1);
    CardinalityReport {
        n_multiples: s + p - 1,
        n_offbyone: kernel * (q + r - 1),
        n_dset: kernel * (q - 1) * (r - 1),
        n_kernel: kernel,
        n_dset_cyclic: (q - 1) * (r - 1),
        q_lpf,
        r_lpf,
        claimed_max_cycle: lcm(q_lpf, r_lpf),
        observed_max_cycle: None,
    }
}

/// Every residue with class `tag`, ascending.
pub fn enumerate_class(ctx: &RingContext, tag: SubsetClass) -> Result<Vec<u64>> {
    ctx.check_budget(ctx.modulus() as u128)?;
    Ok((0..ctx.modulus())
        .filter(|&w| classify(w, ctx) == tag)
        .collect())
}

/// All nine cells in one pass over Z_N.
pub fn partition_all(ctx: &RingContext) -> Result<BTreeMap<SubsetClass, Vec<u64>>> {
    ctx.check_budget(ctx.modulus() as u128)?;
    let mut cells: BTreeMap<SubsetClass, Vec<u64>> =
        SubsetClass::ALL.iter().map(|&c| (c, Vec::new())).collect();
    for w in 0..ctx.modulus() {
        cells
            .get_mut(&classify(w, ctx))
            .expect("all cells present")
            .push(w);
    }
    Ok(cells)
}
