//! Embedded fields, the off-by-one multiplicative groups and exhaustive
//! group/homomorphism checkers.
//!
//! Multiplication everywhere is plain multiplication mod N. A subset whose
//! identity is an idempotent other than 1 (e.g. `unity_p` for the multiples
//! of `p`) is checked against that idempotent.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{component_cell, field_kernel, Cell};
use crate::ring::arith::{inv_mod, mul_mod};
use crate::ring::{RingContext, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EmbeddingKind {
    /// `F_s -> pF_s`, `x -> beta*p*x`.
    G,
    /// `F_p -> sF_p`, `x -> -alpha*s*x`.
    G1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddingMap {
    pub kind: EmbeddingKind,
    /// Image of 1, the unity of the image field.
    pub multiplier: u64,
    /// Size of the source field.
    pub field_order: u64,
}

impl EmbeddingMap {
    pub fn g(ctx: &RingContext) -> Self {
        Self {
            kind: EmbeddingKind::G,
            multiplier: ctx.unity_p(),
            field_order: ctx.s(),
        }
    }

    pub fn g1(ctx: &RingContext) -> Self {
        Self {
            kind: EmbeddingKind::G1,
            multiplier: ctx.unity_s(),
            field_order: ctx.p(),
        }
    }
}

pub fn embed(map: &EmbeddingMap, x: u64, ctx: &RingContext) -> Result<u64> {
    if x >= map.field_order {
        return Err(Error::OutOfRange {
            value: x,
            bound: map.field_order,
        });
    }
    Ok(ctx.mul(map.multiplier, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupVariant {
    /// `{yp + 1}`: residues congruent to 1 mod p.
    PlusOneP,
    /// `{yp + 1} u {yp - 1}`: residues congruent to +-1 mod p.
    PlusMinusOneP,
    /// `{xs + 1}`.
    PlusOneS,
    /// `{xs + 1} u {xs - 1}`.
    PlusMinusOneS,
    /// `{yp + e : e in sK_p}`: residues whose image mod p lies in the
    /// 2-power torsion of F_p*.
    EP,
    /// `{xs + e : e in pK_s}`.
    ES,
}

impl GroupVariant {
    pub const ALL: [GroupVariant; 6] = [
        GroupVariant::PlusOneP,
        GroupVariant::PlusMinusOneP,
        GroupVariant::PlusOneS,
        GroupVariant::PlusMinusOneS,
        GroupVariant::EP,
        GroupVariant::ES,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupVariant::PlusOneP => "plus1-p",
            GroupVariant::PlusMinusOneP => "plusminus1-p",
            GroupVariant::PlusOneS => "plus1-s",
            GroupVariant::PlusMinusOneS => "plusminus1-s",
            GroupVariant::EP => "e-p",
            GroupVariant::ES => "e-s",
        }
    }

    /// Prime the defining offset is taken against.
    fn anchor(self) -> Side {
        match self {
            GroupVariant::PlusOneP | GroupVariant::PlusMinusOneP | GroupVariant::EP => Side::P,
            _ => Side::S,
        }
    }

    /// Membership in the defining set, before excluding zero elements.
    pub fn in_raw_set(self, w: u64, ctx: &RingContext) -> bool {
        if w >= ctx.modulus() {
            return false;
        }
        let m = ctx.prime(self.anchor());
        let plus_minus = |w: u64| w % m == 1 || w % m == m - 1;
        match self {
            GroupVariant::PlusOneP | GroupVariant::PlusOneS => w % m == 1,
            GroupVariant::PlusMinusOneP | GroupVariant::PlusMinusOneS => plus_minus(w),
            GroupVariant::EP => component_cell(ctx.h_split(w).xs, Side::S, ctx) == Cell::Kernel,
            GroupVariant::ES => component_cell(ctx.h_split(w).yp, Side::P, ctx) == Cell::Kernel,
        }
    }
}

impl fmt::Display for GroupVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The zero divisors of a variant's defining set, ascending.
///
/// `plus1-p` loses `unity_s` (0 mod s, 1 mod p) and `plusminus1-p` also its
/// negation; the s-side variants lose `unity_p` and `-unity_p`. The
/// `e` variants lose the whole field kernel they are offset by.
pub fn offbyone_zero(variant: GroupVariant, ctx: &RingContext) -> Vec<u64> {
    let n = ctx.modulus();
    let mut out = match variant {
        GroupVariant::PlusOneP => vec![ctx.unity_s()],
        GroupVariant::PlusMinusOneP => vec![ctx.unity_s(), n - ctx.unity_s()],
        GroupVariant::PlusOneS => vec![ctx.unity_p()],
        GroupVariant::PlusMinusOneS => vec![ctx.unity_p(), n - ctx.unity_p()],
        GroupVariant::EP => field_kernel(ctx, Side::S),
        GroupVariant::ES => field_kernel(ctx, Side::P),
    };
    out.sort_unstable();
    out
}

/// Inverse of `w` inside the group of `variant`, by closed-form congruence.
pub fn offbyone_inverse(w: u64, variant: GroupVariant, ctx: &RingContext) -> Result<u64> {
    let n = ctx.modulus();
    if w >= n {
        return Err(Error::OutOfRange { value: w, bound: n });
    }
    if !variant.in_raw_set(w, ctx) {
        return Err(Error::NotInGroup(w));
    }
    if offbyone_zero(variant, ctx).contains(&w) {
        return Err(Error::ExcludedElement(w));
    }
    let inv = |a: u64, m: u64| inv_mod(a % m, m).expect("member is a unit");
    let v = match variant {
        GroupVariant::EP | GroupVariant::ES => componentwise_inverse(w, ctx),
        _ => {
            let side = variant.anchor();
            // m is the offset prime, o the other one: w = y*m +- 1, y in [0, o]
            let m = ctx.prime(side);
            let o = n / m;
            if w % m == 1 {
                // y' = -y (y m + 1)^-1 mod o
                let y = (w - 1) / m;
                let y2 = mul_mod(o - y % o, inv(w, o), o);
                y2 * m + 1
            } else {
                // y' = y (y m - 1)^-1 mod o
                let y = (w + 1) / m;
                let y2 = mul_mod(y % o, inv(w, o), o);
                (y2 * m + n - 1) % n
            }
        }
    };
    Ok(v)
}

/// Inverse through the CRT components: `yp -> y'p` with
/// `y' = beta (yp)^-1 mod s`, and `e1 s -> e2 s` with
/// `e2 = -alpha (e1 s)^-1 mod p`.
fn componentwise_inverse(w: u64, ctx: &RingContext) -> u64 {
    let (s, p) = (ctx.s(), ctx.p());
    let pair = ctx.h_split(w);
    let y2 = mul_mod(ctx.beta(), inv_mod(pair.yp % s, s).expect("unit"), s);
    let e2 = mul_mod(p - ctx.alpha(), inv_mod(pair.xs % p, p).expect("unit"), p);
    ctx.add(y2 * p, e2 * s)
}

/// A variant's defining set together with the zero elements removed from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffByOneGroup {
    pub variant: GroupVariant,
    /// Defining set, zero elements included, ascending.
    pub raw: Vec<u64>,
    /// Zero elements of `raw`, ascending.
    pub excluded: Vec<u64>,
}

impl OffByOneGroup {
    /// Group members: `raw` minus `excluded`, ascending.
    pub fn members(&self) -> Vec<u64> {
        self.raw
            .iter()
            .copied()
            .filter(|w| self.excluded.binary_search(w).is_err())
            .collect()
    }
}

pub fn enumerate_group(variant: GroupVariant, ctx: &RingContext) -> Result<OffByOneGroup> {
    let (s, p, n) = (ctx.s(), ctx.p(), ctx.modulus());
    let m = ctx.prime(variant.anchor());
    let o = n / m;
    let needed = match variant {
        GroupVariant::PlusOneP | GroupVariant::PlusOneS => o,
        GroupVariant::PlusMinusOneP | GroupVariant::PlusMinusOneS => 2 * o,
        GroupVariant::EP => s << ctx.l(),
        GroupVariant::ES => p << ctx.k(),
    };
    ctx.check_budget(needed as u128)?;

    let mut raw: Vec<u64> = match variant {
        GroupVariant::PlusOneP | GroupVariant::PlusOneS => (0..o).map(|y| y * m + 1).collect(),
        GroupVariant::PlusMinusOneP | GroupVariant::PlusMinusOneS => (0..o)
            .map(|y| y * m + 1)
            .chain((1..=o).map(|y| y * m - 1))
            .collect(),
        GroupVariant::EP => offset_by_kernel(ctx, Side::S),
        GroupVariant::ES => offset_by_kernel(ctx, Side::P),
    };
    raw.sort_unstable();
    raw.dedup();
    Ok(OffByOneGroup {
        variant,
        raw,
        excluded: offbyone_zero(variant, ctx),
    })
}

/// `{ multiple of the other prime + e : e in kernel(side) }`.
fn offset_by_kernel(ctx: &RingContext, side: Side) -> Vec<u64> {
    let other = match side {
        Side::S => ctx.p(),
        Side::P => ctx.s(),
    };
    let count = ctx.modulus() / other;
    field_kernel(ctx, side)
        .into_iter()
        .flat_map(|e| (0..count).map(move |y| ctx.add(y * other, e)))
        .collect()
}

/// Constant-time membership for subsets of `[0, N)`.
pub(crate) enum MemberSet {
    Dense(Vec<bool>),
    Sparse(HashSet<u64>),
}

const DENSE_LIMIT: u64 = 1 << 24;

impl MemberSet {
    pub(crate) fn new(items: &[u64], modulus: u64) -> Self {
        if modulus <= DENSE_LIMIT {
            let mut bits = vec![false; modulus as usize];
            for &w in items {
                if w < modulus {
                    bits[w as usize] = true;
                }
            }
            MemberSet::Dense(bits)
        } else {
            MemberSet::Sparse(items.iter().copied().collect())
        }
    }

    pub(crate) fn contains(&self, w: u64) -> bool {
        match self {
            MemberSet::Dense(bits) => bits.get(w as usize).copied().unwrap_or(false),
            MemberSet::Sparse(set) => set.contains(&w),
        }
    }

    fn insert(&mut self, w: u64) {
        match self {
            MemberSet::Dense(bits) => bits[w as usize] = true,
            MemberSet::Sparse(set) => {
                set.insert(w);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub closed: bool,
    pub has_identity: bool,
    pub all_invertible: bool,
    /// `(a, b)` in the set with `a*b` outside it.
    pub closure_witness: Option<(u64, u64)>,
    /// Every member with no inverse in the set, ascending.
    pub non_invertible: Vec<u64>,
}

impl GroupReport {
    pub fn is_group(&self) -> bool {
        self.closed && self.has_identity && self.all_invertible
    }
}

/// Exhaustively checks that `members` is a group under multiplication mod
/// N with identity `unity`.
///
/// Closure is decided by growing the submonoid generated by the members
/// one coset at a time; with a genuine identity this touches each element
/// a logarithmic number of times. Without one it falls back to the full
/// product table.
pub fn check_group_axioms(members: &[u64], unity: u64, ctx: &RingContext) -> GroupReport {
    let n = ctx.modulus();
    let mut set: Vec<u64> = members.iter().map(|&w| w % n).collect();
    set.sort_unstable();
    set.dedup();
    let inside = MemberSet::new(&set, n);

    let has_identity = inside.contains(unity) && set.iter().all(|&a| ctx.mul(unity, a) == a);
    let closure_witness = if has_identity {
        closure_by_cosets(&set, &inside, unity, ctx)
    } else {
        closure_by_table(&set, &inside, ctx)
    };

    let non_invertible: Vec<u64> = set
        .iter()
        .copied()
        .filter(|&a| !has_inverse(a, &set, &inside, unity, has_identity, ctx))
        .collect();

    GroupReport {
        closed: closure_witness.is_none(),
        has_identity,
        all_invertible: non_invertible.is_empty(),
        closure_witness,
        non_invertible,
    }
}

fn closure_by_table(set: &[u64], inside: &MemberSet, ctx: &RingContext) -> Option<(u64, u64)> {
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i..] {
            if !inside.contains(ctx.mul(a, b)) {
                return Some((a, b));
            }
        }
    }
    None
}

fn closure_by_cosets(
    set: &[u64],
    inside: &MemberSet,
    unity: u64,
    ctx: &RingContext,
) -> Option<(u64, u64)> {
    let mut covered = MemberSet::new(&[unity], ctx.modulus());
    let mut monoid = vec![unity];
    for &g in set {
        if covered.contains(g) {
            continue;
        }
        // <M, g> = union of M g^i for a commutative monoid
        let mut layer = monoid.clone();
        loop {
            let mut fresh = Vec::new();
            for &a in &layer {
                let b = ctx.mul(a, g);
                if !inside.contains(b) {
                    return Some((a, g));
                }
                if !covered.contains(b) {
                    covered.insert(b);
                    fresh.push(b);
                }
            }
            if fresh.is_empty() {
                break;
            }
            monoid.extend_from_slice(&fresh);
            layer = fresh;
        }
    }
    None
}

fn has_inverse(
    a: u64,
    set: &[u64],
    inside: &MemberSet,
    unity: u64,
    has_identity: bool,
    ctx: &RingContext,
) -> bool {
    let (s, p) = (ctx.s(), ctx.p());
    if has_identity && ctx.fsquare(unity) == unity {
        // The only candidate lives in unity*Z_N: invert each prime component
        // where unity is 1, and take 0 where unity is 0.
        let part = |m: u64| -> Option<u64> {
            if unity % m == 0 {
                Some(0)
            } else {
                inv_mod(a % m, m)
            }
        };
        return match (part(s), part(p)) {
            (Some(x), Some(y)) => {
                let v = ctx.crt(x, y);
                inside.contains(v) && ctx.mul(a, v) == unity
            }
            _ => false,
        };
    }
    set.iter().any(|&b| ctx.mul(a, b) == unity)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport<A> {
    pub injective: bool,
    pub surjective: bool,
    pub multiplicative: bool,
    /// Two domain elements with the same image.
    pub collision: Option<(A, A)>,
    /// A domain pair whose product is not mapped to the product of images.
    pub product_witness: Option<(A, A)>,
    /// Number of codomain elements missed by the image.
    pub missed: usize,
}

impl<A> IsoReport<A> {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.surjective && self.multiplicative
    }
}

/// Exhaustive pairwise check that `map` is a bijection from `domain` onto
/// `codomain` preserving the given binary operation.
///
/// Both operations are arbitrary, so the same routine checks additivity by
/// passing the additions.
pub fn check_isomorphism<A, B, F, M1, M2>(
    domain: &[A],
    codomain: &[B],
    map: F,
    dom_mul: M1,
    cod_mul: M2,
    budget: u64,
) -> Result<IsoReport<A>>
where
    A: Clone + Eq + Hash,
    B: Clone + Eq + Hash,
    F: Fn(&A) -> B,
    M1: Fn(&A, &A) -> A,
    M2: Fn(&B, &B) -> B,
{
    let size = domain.len() as u128;
    if size * size > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: size * size,
            budget,
        });
    }
    let images: Vec<B> = domain.iter().map(&map).collect();
    let mut seen = std::collections::HashMap::with_capacity(images.len());
    let mut collision = None;
    for (a, b) in domain.iter().zip(&images) {
        if let Some(prev) = seen.insert(b.clone(), a.clone()) {
            collision.get_or_insert((prev, a.clone()));
        }
    }
    let target: HashSet<&B> = codomain.iter().collect();
    let missed = target.iter().filter(|b| !seen.contains_key(**b)).count();
    let stray = seen.keys().any(|b| !target.contains(b));

    let mut product_witness = None;
    'outer: for (i, a) in domain.iter().enumerate() {
        for (j, b) in domain.iter().enumerate().skip(i) {
            if map(&dom_mul(a, b)) != cod_mul(&images[i], &images[j]) {
                product_witness = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }

    Ok(IsoReport {
        injective: collision.is_none(),
        surjective: missed == 0 && !stray,
        multiplicative: product_witness.is_none(),
        collision,
        product_witness,
        missed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingHomReport {
    pub bijective: bool,
    pub additive: bool,
    pub multiplicative: bool,
    /// First `x` where a check failed.
    pub witness: Option<u64>,
}

impl RingHomReport {
    pub fn is_isomorphism(&self) -> bool {
        self.bijective && self.additive && self.multiplicative
    }
}

/// Linear-time ring-isomorphism check for a map out of Z_m.
///
/// Z_m is generated additively by 1, so `phi(x + 1) = phi(x) + phi(1)` for
/// every x forces `phi(x) = x * phi(1)` and additivity. Multiplicativity
/// then reduces to `phi(1)` acting as identity on the image, which is
/// checked for every x. Bijectivity is checked against a codomain given by
/// its size and a membership predicate.
pub fn check_cyclic_ring_hom<B, F, P, Add, Mul>(
    m: u64,
    map: F,
    codomain_size: u64,
    in_codomain: P,
    add: Add,
    mul: Mul,
) -> RingHomReport
where
    B: Clone + Eq + Hash,
    F: Fn(u64) -> B,
    P: Fn(&B) -> bool,
    Add: Fn(&B, &B) -> B,
    Mul: Fn(&B, &B) -> B,
{
    let one = map(1 % m);
    let mut seen = HashSet::with_capacity(m as usize);
    let mut bijective = m == codomain_size;
    let (mut additive, mut multiplicative) = (true, true);
    let mut witness = None;
    let mut current = map(0);
    for x in 0..m {
        let next = map((x + 1) % m);
        let ok_set = in_codomain(&current) && seen.insert(current.clone());
        let ok_add = next == add(&current, &one);
        let ok_mul = mul(&current, &one) == current;
        if !(ok_set && ok_add && ok_mul) && witness.is_none() {
            witness = Some(x);
        }
        bijective &= ok_set;
        additive &= ok_add;
        multiplicative &= ok_mul;
        current = next;
    }
    RingHomReport {
        bijective,
        additive,
        multiplicative: multiplicative && additive,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_class, ring_kernel, SubsetClass};
    use crate::ring::CrtPair;

    fn ctx(s: u64, p: u64) -> RingContext {
        RingContext::new(s, p).unwrap()
    }

    #[test]
    fn embedding_examples() {
        let c = ctx(11, 23);
        let g = EmbeddingMap::g(&c);
        assert_eq!(embed(&g, 1, &c), Ok(23));
        assert_eq!(embed(&g, 0, &c), Ok(0));
        assert_eq!(embed(&g, 3, &c), Ok(69));
        assert_eq!(
            embed(&g, 11, &c),
            Err(Error::OutOfRange {
                value: 11,
                bound: 11
            })
        );
        assert_eq!(embed(&EmbeddingMap::g1(&c), 1, &c), Ok(231));
    }

    #[test]
    fn unities_are_idempotent() {
        for (s, p) in [(3, 7), (11, 23), (29, 41)] {
            let c = ctx(s, p);
            for u in [c.unity_s(), c.unity_p()] {
                assert_eq!(c.fsquare(u), u);
            }
        }
    }

    #[test]
    fn zero_examples() {
        let c = ctx(11, 23);
        assert_eq!(offbyone_zero(GroupVariant::PlusOneP, &c), vec![231]);
        assert_eq!(offbyone_zero(GroupVariant::PlusOneS, &c), vec![23]);
        assert_eq!(
            offbyone_zero(GroupVariant::PlusMinusOneP, &c),
            vec![22, 231]
        );
        assert_eq!(
            offbyone_zero(GroupVariant::PlusMinusOneS, &c),
            vec![23, 230]
        );
        assert_eq!(offbyone_zero(GroupVariant::EP, &c), vec![22, 231]);
    }

    #[test]
    fn absorbing_zero() {
        for (s, p) in [(11, 23), (29, 41), (3, 7)] {
            let c = ctx(s, p);
            let z = offbyone_zero(GroupVariant::PlusOneP, &c)[0];
            for w in enumerate_group(GroupVariant::PlusOneP, &c).unwrap().raw {
                assert_eq!(c.mul(z, w), z);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let c = ctx(11, 23);
        assert_eq!(offbyone_inverse(24, GroupVariant::PlusOneP, &c), Ok(116));
        assert_eq!(offbyone_inverse(1, GroupVariant::PlusOneP, &c), Ok(1));
        assert_eq!(
            offbyone_inverse(231, GroupVariant::PlusOneP, &c),
            Err(Error::ExcludedElement(231))
        );
        assert_eq!(
            offbyone_inverse(2, GroupVariant::PlusOneP, &c),
            Err(Error::NotInGroup(2))
        );
        assert_eq!(
            offbyone_inverse(252, GroupVariant::PlusMinusOneP, &c),
            Ok(252)
        );
    }

    #[test]
    fn closed_forms_agree_with_euclid() {
        for (s, p) in [(3, 7), (11, 23), (29, 41), (13, 5), (7, 97)] {
            let c = ctx(s, p);
            for v in GroupVariant::ALL {
                for w in enumerate_group(v, &c).unwrap().members() {
                    let inv = offbyone_inverse(w, v, &c).unwrap();
                    assert_eq!(Some(inv), inv_mod(w, c.modulus()), "{v} w={w}");
                    assert!(v.in_raw_set(inv, &c));
                }
            }
        }
    }

    #[test]
    fn group_examples() {
        let c = ctx(11, 23);
        let g = enumerate_group(GroupVariant::PlusOneP, &c).unwrap();
        assert_eq!(
            g.members(),
            vec![1, 24, 47, 70, 93, 116, 139, 162, 185, 208]
        );
        let e = enumerate_group(GroupVariant::EP, &c).unwrap();
        assert_eq!(e.raw.len(), 22);
        assert_eq!(e.members().len(), 20);

        let d = ctx(3, 7);
        assert_eq!(
            enumerate_group(GroupVariant::PlusOneS, &d)
                .unwrap()
                .members(),
            vec![1, 4, 10, 13, 16, 19]
        );
        assert_eq!(
            enumerate_group(GroupVariant::PlusMinusOneP, &c)
                .unwrap()
                .members()
                .len(),
            20
        );
    }

    #[test]
    fn e_group_is_offbyone_cell_plus_kernel() {
        let c = ctx(29, 41);
        let mut expected = enumerate_class(&c, SubsetClass::OffByOneP).unwrap();
        expected.extend(ring_kernel(&c));
        expected.sort_unstable();
        assert_eq!(
            enumerate_group(GroupVariant::EP, &c).unwrap().members(),
            expected
        );
    }

    #[test]
    fn axioms_and_readded_zeros() {
        for (s, p) in [(3, 7), (11, 23), (29, 41), (5, 13)] {
            let c = ctx(s, p);
            for v in GroupVariant::ALL {
                let g = enumerate_group(v, &c).unwrap();
                let rep = check_group_axioms(&g.members(), 1, &c);
                assert!(rep.is_group(), "{v} ({s},{p}): {rep:?}");
                let rep = check_group_axioms(&g.raw, 1, &c);
                assert!(rep.closed && rep.has_identity);
                assert_eq!(rep.non_invertible, g.excluded);
            }
            assert!(check_group_axioms(&ring_kernel(&c), 1, &c).is_group());
        }
    }

    #[test]
    fn axiom_witnesses() {
        let c = ctx(11, 23);
        let mut with_zero = enumerate_group(GroupVariant::PlusOneP, &c)
            .unwrap()
            .members();
        with_zero.push(231);
        let rep = check_group_axioms(&with_zero, 1, &c);
        assert!(rep.closed && !rep.all_invertible);
        assert_eq!(rep.non_invertible, vec![231]);

        assert!(check_group_axioms(&[1], 1, &c).is_group());

        let rep = check_group_axioms(&[1, 2], 1, &c);
        assert_eq!(rep.closure_witness, Some((2, 2)));

        let rep = check_group_axioms(&[2, 4], 1, &c);
        assert!(!rep.has_identity && !rep.closed);
    }

    #[test]
    fn embedded_field_units_form_group_with_unity_p() {
        let c = ctx(11, 23);
        let units: Vec<u64> = (1..11).map(|x| x * 23).collect();
        assert!(check_group_axioms(&units, c.unity_p(), &c).is_group());
        assert!(!check_group_axioms(&units, 1, &c).has_identity);
    }

    #[test]
    fn plus_one_map_to_embedded_units() {
        let c = ctx(11, 23);
        let dom = enumerate_group(GroupVariant::PlusOneP, &c)
            .unwrap()
            .members();
        let cod: Vec<u64> = (1..11).map(|x| x * 23).collect();
        let rep = check_isomorphism(
            &dom,
            &cod,
            |&w| c.mul(c.unity_p(), w),
            |&a, &b| c.mul(a, b),
            |&a, &b| c.mul(a, b),
            u64::MAX,
        )
        .unwrap();
        assert!(rep.is_isomorphism(), "{rep:?}");
    }

    #[test]
    fn h_on_kernel_and_identity_on_one() {
        let c = ctx(11, 23);
        let ker = ring_kernel(&c);
        let cod: Vec<CrtPair> = [22, 231]
            .iter()
            .flat_map(|&a| [23, 230].map(|b| CrtPair::new(a, b)))
            .collect();
        let rep = check_isomorphism(
            &ker,
            &cod,
            |&w| c.h_split(w),
            |&a, &b| c.mul(a, b),
            |a, b| a.mul(*b, &c),
            u64::MAX,
        )
        .unwrap();
        assert!(rep.is_isomorphism());

        let rep =
            check_isomorphism(&[1u64], &[1u64], |&w| w, |&a, &b| a * b, |&a, &b| a * b, 1).unwrap();
        assert!(rep.is_isomorphism());
    }

    #[test]
    fn isomorphism_failures_are_reported() {
        let c = ctx(11, 23);
        let dom: Vec<u64> = (0..c.modulus()).collect();
        let rep = check_isomorphism(
            &dom,
            &dom,
            |&w| c.fsquare(w),
            |&a, &b| c.mul(a, b),
            |&a, &b| c.mul(a, b),
            u64::MAX,
        )
        .unwrap();
        assert!(!rep.injective && !rep.surjective && rep.multiplicative);
        assert!(matches!(
            check_isomorphism(&dom, &dom, |&w| w, |&a, _| a, |&a, _| a, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn ring_hom_reduction_matches_pairwise() {
        for (s, p) in [(3, 7), (11, 23), (7, 13)] {
            let c = ctx(s, p);
            let n = c.modulus();
            let rep = check_cyclic_ring_hom(
                n,
                |w| c.h_split(w),
                n,
                |pair| pair.xs % s == 0 && pair.yp % p == 0,
                |a, b| a.add(*b, &c),
                |a, b| a.mul(*b, &c),
            );
            assert!(rep.is_isomorphism());

            for map in [EmbeddingMap::g(&c), EmbeddingMap::g1(&c)] {
                let other = n / map.field_order;
                let rep = check_cyclic_ring_hom(
                    map.field_order,
                    |x| embed(&map, x, &c).unwrap(),
                    map.field_order,
                    |&w| w % other == 0,
                    |&a, &b| c.add(a, b),
                    |&a, &b| c.mul(a, b),
                );
                assert!(rep.is_isomorphism(), "{map:?}");
            }

            // x -> 2x is additive but not multiplicative
            let rep = check_cyclic_ring_hom(
                s,
                |x| 2 * x % s,
                s,
                |_| true,
                |&a, &b| (a + b) % s,
                |&a, &b| a * b % s,
            );
            assert!(rep.bijective && rep.additive && !rep.multiplicative);
        }
    }
}
