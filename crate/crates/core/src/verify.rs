//! Exhaustive per-pair invariant checks against the oracle.
//!
//! Every check is a pure function of one context and returns a [`Check`];
//! [`verify_pair`] runs them all. Failures are reported, not raised; an
//! `Err` means the pair was too large for the element budget.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{collision_factor, cyclic_attack, treelevel_pairs};
use crate::graph::{
    arc_of, arc_tree_mul, build_graph, combine_cycles, cycles_of, observed_max_dset_cycle, tree_of,
    FunctionalGraph,
};
use crate::groups::{
    check_cyclic_ring_hom, check_group_axioms, check_isomorphism, embed, enumerate_group,
    offbyone_inverse, EmbeddingMap, GroupVariant,
};
use crate::oracle::{brute_graph, BruteClassifier};
use crate::partition::{
    cardinalities, classify, field_kernel, partition_all, ring_kernel, CardinalityReport,
    SubsetClass,
};
use crate::ring::arith::inv_mod;
use crate::ring::{RingContext, Side};

/// Pairwise checks on the s-side analogue of the `+1` isomorphism run only
/// when the domain has at most this many elements.
pub const PAIRWISE_LIMIT: u64 = 316;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// First failure, or a short summary on success.
    pub detail: String,
}

impl Check {
    fn from_failures(name: &'static str, summary: String, failures: Vec<String>) -> Self {
        match failures.into_iter().next() {
            None => Check {
                name,
                passed: true,
                detail: summary,
            },
            Some(first) => Check {
                name,
                passed: false,
                detail: first,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub s: u64,
    pub p: u64,
    pub checks: Vec<Check>,
    pub cardinalities: CardinalityReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_pair(ctx: &RingContext) -> Result<VerifyReport> {
    let full = full_graph(ctx)?;
    let checks = vec![
        check_cardinalities(ctx)?,
        check_oracle_classify(ctx)?,
        check_oracle_cycles(ctx, &full)?,
        check_groups(ctx)?,
        check_group_inverses(ctx)?,
        check_isomorphisms(ctx)?,
        check_kernel_tree(ctx)?,
        check_arc_tree(ctx)?,
        check_cycle_correspondence(ctx, &full)?,
        check_dset_distance(ctx)?,
        check_treelevel_pairs(ctx)?,
        check_cyclic_attack(ctx, &full)?,
    ];
    Ok(VerifyReport {
        s: ctx.s(),
        p: ctx.p(),
        checks,
        cardinalities: max_cycle_report(ctx)?,
    })
}

/// Graph of squaring over all of Z_N.
pub fn full_graph(ctx: &RingContext) -> Result<FunctionalGraph> {
    ctx.check_budget(ctx.modulus() as u128)?;
    build_graph(&(0..ctx.modulus()).collect::<Vec<_>>(), ctx)
}

/// Exhaustive cell counts against the closed forms, plus the partition
/// property and the number of cyclic elements in the `DSet` cell.
pub fn check_cardinalities(ctx: &RingContext) -> Result<Check> {
    let cells = partition_all(ctx)?;
    let rep = cardinalities(ctx);
    let count = |f: fn(SubsetClass) -> bool| -> u64 {
        cells
            .iter()
            .filter(|(c, _)| f(**c))
            .map(|(_, v)| v.len() as u64)
            .sum()
    };
    let dset = &cells[&SubsetClass::DSet];
    let cyclic_in_d = dset.iter().filter(|&&w| ctx.is_cyclic(w)).count() as u64;
    let covered: u64 = cells.values().map(|v| v.len() as u64).sum();

    let mut failures = Vec::new();
    let mut expect = |what: &str, got: u64, want: u64| {
        if got != want {
            failures.push(format!("{what}: counted {got}, formula {want}"));
        }
    };
    expect("cover", covered, ctx.modulus());
    expect(
        "multiples",
        count(SubsetClass::is_multiple),
        rep.n_multiples,
    );
    expect(
        "off-by-one",
        count(SubsetClass::is_off_by_one),
        rep.n_offbyone,
    );
    expect("DSet", dset.len() as u64, rep.n_dset);
    expect(
        "kernel",
        cells[&SubsetClass::RingKernel].len() as u64,
        rep.n_kernel,
    );
    expect("cyclic in DSet", cyclic_in_d, rep.n_dset_cyclic);
    Ok(Check::from_failures(
        "cardinalities",
        format!(
            "{}/{}/{} kernel {} cyclic-in-D {}",
            rep.n_multiples, rep.n_offbyone, rep.n_dset, rep.n_kernel, rep.n_dset_cyclic
        ),
        failures,
    ))
}

pub fn check_oracle_classify(ctx: &RingContext) -> Result<Check> {
    ctx.check_budget(ctx.modulus() as u128)?;
    let brute = BruteClassifier::new(ctx.s(), ctx.p());
    let failures = (0..ctx.modulus())
        .filter_map(|w| {
            let (fast, slow) = (classify(w, ctx), brute.classify(w));
            (fast != slow).then(|| format!("w={w}: classify {fast}, oracle {slow}"))
        })
        .take(1)
        .collect();
    Ok(Check::from_failures(
        "oracle-classify",
        format!("{} residues agree", ctx.modulus()),
        failures,
    ))
}

/// Cycles, cyclic flags and tree roots over Z_N agree with the oracle.
pub fn check_oracle_cycles(ctx: &RingContext, full: &FunctionalGraph) -> Result<Check> {
    let brute = brute_graph(ctx.modulus())?;
    let mut failures = Vec::new();
    if full.cycles() != brute.cycles.as_slice() {
        failures.push(format!(
            "cycle lists differ: {} vs {} cycles",
            full.cycles().len(),
            brute.cycles.len()
        ));
    }
    for w in 0..ctx.modulus() {
        let i = w as usize;
        if full.is_cyclic(w) != brute.is_cyclic[i]
            || full.tree_root(w) != Some(brute.tree_root[i])
            || full.cycle_id(w) != brute.cycle_id[i]
            || full.successor(w) != Some(brute.successor[i])
        {
            failures.push(format!("w={w}: graph and oracle disagree"));
            break;
        }
    }
    Ok(Check::from_failures(
        "oracle-cycles",
        format!("{} cycles agree", brute.cycles.len()),
        failures,
    ))
}

/// Group axioms for every off-by-one variant and the kernel; re-adding the
/// zero elements must break invertibility at exactly those elements.
pub fn check_groups(ctx: &RingContext) -> Result<Check> {
    let (s, p) = (ctx.s(), ctx.p());
    let mut failures = Vec::new();
    for v in GroupVariant::ALL {
        let g = enumerate_group(v, ctx)?;
        let members = g.members();
        let size = match v {
            GroupVariant::PlusOneP => s - 1,
            GroupVariant::PlusMinusOneP => 2 * (s - 1),
            GroupVariant::PlusOneS => p - 1,
            GroupVariant::PlusMinusOneS => 2 * (p - 1),
            GroupVariant::EP => (s - 1) << ctx.l(),
            GroupVariant::ES => (p - 1) << ctx.k(),
        };
        if members.len() as u64 != size {
            failures.push(format!("{v}: {} members, expected {size}", members.len()));
        }
        let rep = check_group_axioms(&members, 1, ctx);
        if !rep.is_group() {
            failures.push(format!("{v}: not a group: {rep:?}"));
        }
        let rep = check_group_axioms(&g.raw, 1, ctx);
        if !rep.closed || !rep.has_identity || rep.non_invertible != g.excluded {
            failures.push(format!(
                "{v} with zeros: witnesses {:?}, predicted {:?}",
                rep.non_invertible, g.excluded
            ));
        }
    }
    let zero = ctx.unity_s();
    if let Some(w) = enumerate_group(GroupVariant::PlusOneP, ctx)?
        .raw
        .into_iter()
        .find(|&w| ctx.mul(zero, w) != zero)
    {
        failures.push(format!("{zero} does not absorb {w}"));
    }
    if !check_group_axioms(&ring_kernel(ctx), 1, ctx).is_group() {
        failures.push("kernel is not a group".into());
    }
    Ok(Check::from_failures(
        "groups",
        "6 variants and the kernel".into(),
        failures,
    ))
}

pub fn check_group_inverses(ctx: &RingContext) -> Result<Check> {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for v in GroupVariant::ALL {
        for w in enumerate_group(v, ctx)?.members() {
            checked += 1;
            let closed = offbyone_inverse(w, v, ctx).ok();
            let generic = inv_mod(w, ctx.modulus());
            if closed != generic {
                failures.push(format!(
                    "{v} w={w}: closed form {closed:?}, euclid {generic:?}"
                ));
                break;
            }
        }
    }
    Ok(Check::from_failures(
        "group-inverses",
        format!("{checked} inverses agree"),
        failures,
    ))
}

/// `h` is a ring isomorphism Z_N -> sF_p x pF_s; `g`, `g1` are ring
/// isomorphisms onto the embedded fields; `w -> unity_p*w` is a group
/// isomorphism from the `+1` group onto the units of `pF_s`.
pub fn check_isomorphisms(ctx: &RingContext) -> Result<Check> {
    let (s, p, n) = (ctx.s(), ctx.p(), ctx.modulus());
    let mut failures = Vec::new();

    let rep = check_cyclic_ring_hom(
        n,
        |w| ctx.h_split(w),
        n,
        |h| h.xs % s == 0 && h.yp % p == 0,
        |a, b| a.add(*b, ctx),
        |a, b| a.mul(*b, ctx),
    );
    if !rep.is_isomorphism() {
        failures.push(format!("h: {rep:?}"));
    }
    for map in [EmbeddingMap::g(ctx), EmbeddingMap::g1(ctx)] {
        let other = n / map.field_order;
        let rep = check_cyclic_ring_hom(
            map.field_order,
            |x| embed(&map, x, ctx).expect("in range"),
            map.field_order,
            |&w| w % other == 0,
            |&a, &b| ctx.add(a, b),
            |&a, &b| ctx.mul(a, b),
        );
        if !rep.is_isomorphism() {
            failures.push(format!("{:?}: {rep:?}", map.kind));
        }
    }

    let mut sides = vec![(GroupVariant::PlusOneP, Side::P)];
    if p - 1 <= PAIRWISE_LIMIT {
        sides.push((GroupVariant::PlusOneS, Side::S));
    }
    for (variant, side) in sides {
        let m = ctx.prime(side);
        let unity = ctx.unity(side);
        let dom = enumerate_group(variant, ctx)?.members();
        let cod: Vec<u64> = (1..n / m).map(|x| x * m).collect();
        let rep = check_isomorphism(
            &dom,
            &cod,
            |&w| ctx.mul(unity, w),
            |&a, &b| ctx.mul(a, b),
            |&a, &b| ctx.mul(a, b),
            ctx.budget(),
        )?;
        if !rep.is_isomorphism() {
            failures.push(format!("{variant} onto units: {rep:?}"));
        }
    }
    Ok(Check::from_failures(
        "isomorphisms",
        "h, g, g1 and the +1 group maps".into(),
        failures,
    ))
}

/// The kernel tree holds the whole kernel, has height `max(k, l)` and puts
/// each node at the larger of its component levels.
pub fn check_kernel_tree(ctx: &RingContext) -> Result<Check> {
    let height = ctx.height() as usize;
    let tree = tree_of(1, height, ctx)?;
    let mut failures = Vec::new();
    let mut nodes: Vec<u64> = tree.nodes().collect();
    nodes.sort_unstable();
    if nodes != ring_kernel(ctx) {
        failures.push("tree nodes differ from the kernel".into());
    }
    if tree.levels[height].is_empty() {
        failures.push(format!("deepest level {height} is empty"));
    }
    let level = |x: u64, side: Side| {
        (0..=ctx.height())
            .find(|&i| ctx.pow2iter(x, i) == ctx.unity(side))
            .expect("kernel element") as usize
    };
    'outer: for a in field_kernel(ctx, Side::S) {
        for b in field_kernel(ctx, Side::P) {
            let w = ctx.add(a, b);
            let want = level(a, Side::S).max(level(b, Side::P));
            if tree.level_of(w) != Ok(want) {
                failures.push(format!(
                    "w={w}: level {:?}, expected {want}",
                    tree.level_of(w)
                ));
                break 'outer;
            }
        }
    }
    Ok(Check::from_failures(
        "kernel-tree",
        format!("{} nodes, height {height}", tree.node_count()),
        failures,
    ))
}

/// Arc times kernel tree equals the tree of every cyclic unit; arcs through
/// the embedded fields are rejected.
pub fn check_arc_tree(ctx: &RingContext) -> Result<Check> {
    let n = ctx.height() as usize;
    let kernel = tree_of(1, n, ctx)?;
    let mut failures = Vec::new();
    let mut units = 0usize;
    for a in (1..ctx.modulus()).filter(|&a| ctx.is_cyclic(a)) {
        let arc = arc_of(a, n, ctx)?;
        let got = arc_tree_mul(&arc, &kernel, ctx);
        if ctx.is_unit(a) {
            units += 1;
            if got.as_ref() != Ok(&tree_of(a, n, ctx)?) {
                failures.push(format!("a={a}: product tree differs from tree_of"));
                break;
            }
        } else if !matches!(got, Err(Error::ZeroDivisorArc(_))) {
            failures.push(format!("a={a}: zero-divisor arc accepted"));
            break;
        }
    }
    Ok(Check::from_failures(
        "arc-tree",
        format!("{units} cyclic units"),
        failures,
    ))
}

/// Every pair of field cycles combines into exactly the cycles of Z_N.
pub fn check_cycle_correspondence(ctx: &RingContext, full: &FunctionalGraph) -> Result<Check> {
    let multiples = |m: u64| (0..ctx.modulus() / m).map(|x| x * m).collect::<Vec<_>>();
    let in_s = cycles_of(&multiples(ctx.s()), ctx)?;
    let in_p = cycles_of(&multiples(ctx.p()), ctx)?;
    let mut combined = Vec::new();
    for a in &in_s {
        for b in &in_p {
            combined.extend(combine_cycles(a, b, ctx)?.into_iter().map(|r| r.nodes));
        }
    }
    combined.sort_unstable();
    let mut direct = full.cycles().to_vec();
    direct.sort_unstable();
    let failures = if combined == direct {
        Vec::new()
    } else {
        vec![format!(
            "{} combined cycles vs {} direct",
            combined.len(),
            direct.len()
        )]
    };
    Ok(Check::from_failures(
        "cycle-correspondence",
        format!("{}x{} field cycle pairs", in_s.len(), in_p.len()),
        failures,
    ))
}

/// Iterates of `DSet` elements stay away from 0 and +-1 modulo both primes.
///
/// Whole forward orbits are checked; a node is not revisited once its
/// orbit is known to be clean.
pub fn check_dset_distance(ctx: &RingContext) -> Result<Check> {
    let (s, p) = (ctx.s(), ctx.p());
    let far = |w: u64, m: u64| {
        let r = w % m;
        r != 0 && r != 1 && r != m - 1
    };
    let dset: Vec<u64> = crate::partition::enumerate_class(ctx, SubsetClass::DSet)?;
    let mut clean = vec![false; ctx.modulus() as usize];
    let mut failures = Vec::new();
    let mut path = Vec::new();
    'outer: for &w in &dset {
        path.clear();
        let mut x = w;
        while !clean[x as usize] && !path.contains(&x) {
            if !(far(x, s) && far(x, p)) {
                failures.push(format!("orbit of {w} reaches {x}"));
                break 'outer;
            }
            path.push(x);
            x = ctx.fsquare(x);
        }
        for &y in &path {
            clean[y as usize] = true;
        }
    }
    Ok(Check::from_failures(
        "dset-distance",
        format!("{} orbits", dset.len()),
        failures,
    ))
}

/// Each cyclic unit yields two non-negated root pairs and both factor N.
pub fn check_treelevel_pairs(ctx: &RingContext) -> Result<Check> {
    let n = ctx.modulus();
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    for a in (1..n).filter(|&a| ctx.is_unit(a) && ctx.is_cyclic(a)) {
        let found = treelevel_pairs(a, ctx)?;
        if found.len() != 2 {
            failures.push(format!("a={a}: {} pairs", found.len()));
        }
        for (x, y) in found {
            pairs += 1;
            if collision_factor(n, x, y)?.factor.is_none() {
                failures.push(format!("a={a}: pair ({x},{y}) does not factor"));
            }
        }
        if !failures.is_empty() {
            break;
        }
    }
    Ok(Check::from_failures(
        "treelevel-pairs",
        format!("{pairs} pairs factor N"),
        failures,
    ))
}

/// The cyclic attack factors N from every `DSet` start whose cycle has
/// different periods mod s and mod p, within `4 * lcm` squarings.
pub fn check_cyclic_attack(ctx: &RingContext, full: &FunctionalGraph) -> Result<Check> {
    let n = ctx.modulus();
    let records = full.cycle_records(ctx);
    let mut failures = Vec::new();
    let mut starts = 0usize;
    for w in crate::partition::enumerate_class(ctx, SubsetClass::DSet)? {
        let root = full.tree_root(w).expect("node of the full graph");
        let rec = &records[full.cycle_id(root).expect("root is cyclic")];
        if rec.s_period == rec.p_period {
            continue;
        }
        starts += 1;
        let r = cyclic_attack(n, w, 4 * rec.length as u64)?;
        if r.factor.is_none() {
            failures.push(format!("w={w}: no factor in {} squarings", r.iterations));
            break;
        }
    }
    Ok(Check::from_failures(
        "cyclic-attack",
        format!("{starts} starts"),
        failures,
    ))
}

/// Closed-form cardinalities with the observed maximum `DSet` cycle taken
/// from the oracle.
pub fn max_cycle_report(ctx: &RingContext) -> Result<CardinalityReport> {
    let brute = brute_graph(ctx.modulus())?;
    let classes = BruteClassifier::new(ctx.s(), ctx.p());
    let observed = brute
        .cycles
        .iter()
        .filter(|c| classes.classify(c[0]) == SubsetClass::DSet)
        .map(|c| c.len() as u64)
        .max();
    debug_assert_eq!(observed, observed_max_dset_cycle(ctx)?);
    Ok(cardinalities(ctx).with_observed(observed))
}

/// Histogram of cycle lengths over Z_N.
pub fn cycle_length_histogram(full: &FunctionalGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for c in full.cycles() {
        *hist.entry(c.len()).or_insert(0) += 1;
    }
    hist
}
