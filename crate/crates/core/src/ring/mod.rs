//! The ring Z_N for N = s*p, its CRT split and square roots.
//!
//! Residues are always canonical representatives in `[0, N)`. The split
//! `w = xs + yp` uses the two nontrivial idempotents of Z_N:
//! `unity_s = -alpha*s mod N` (the unity of the multiples of `s`) and
//! `unity_p = beta*p mod N` (the unity of the multiples of `p`), where
//! `-alpha*s + beta*p = 1`.

pub mod arith;
pub mod sqrt;

use serde::Serialize;

use crate::error::{Error, Result};
use arith::{add_mod, factor_pow2, is_prime, mul_mod};

pub use sqrt::sqrt_mod_prime;

/// Default cap on the number of elements an exhaustive operation may touch.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const MODULUS_LIMIT: u128 = 1 << 62;

/// Which embedded prime field a quantity belongs to.
///
/// `S` is the set of multiples of `s` (a copy of F_p with unity
/// `unity_s`); `P` is the set of multiples of `p` (a copy of F_s with unity
/// `unity_p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    S,
    P,
}

/// All constants attached to a prime pair `(s, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingContext {
    s: u64,
    p: u64,
    modulus: u64,
    k: u32,
    q: u64,
    l: u32,
    r: u64,
    alpha: u64,
    beta: u64,
    unity_s: u64,
    unity_p: u64,
    budget: u64,
}

impl RingContext {
    /// Builds the context for two distinct odd primes with `s*p < 2^62`.
    pub fn new(s: u64, p: u64) -> Result<Self> {
        for m in [s, p] {
            if m < 3 || !is_prime(m) {
                return Err(Error::NotPrime(m));
            }
        }
        if s == p {
            return Err(Error::EqualPrimes(s));
        }
        if s as u128 * p as u128 >= MODULUS_LIMIT {
            return Err(Error::ModulusOverflow { s, p });
        }
        let modulus = s * p;

        // beta = p^-1 mod s, then alpha = (beta*p - 1) / s.
        let beta = arith::inv_mod(p % s, s).expect("distinct primes are coprime");
        let alpha = ((beta as u128 * p as u128 - 1) / s as u128) as u64;
        let unity_p = beta * p;
        let unity_s = modulus - alpha * s;

        let (k, q) = factor_pow2(s);
        let (l, r) = factor_pow2(p);
        Ok(Self {
            s,
            p,
            modulus,
            k,
            q,
            l,
            r,
            alpha,
            beta,
            unity_s,
            unity_p,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Same context with a different element budget.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// N = s*p.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `s - 1 = 2^k * q`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p - 1 = 2^l * r`.
    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// Absolute value of the (negative) Bezout coefficient of `s`.
    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// `-alpha*s mod N`, the idempotent that is 0 mod s and 1 mod p.
    pub fn unity_s(&self) -> u64 {
        self.unity_s
    }

    /// `beta*p mod N`, the idempotent that is 1 mod s and 0 mod p.
    pub fn unity_p(&self) -> u64 {
        self.unity_p
    }

    /// Height of the kernel tree, `max(k, l)`.
    pub fn height(&self) -> u32 {
        self.k.max(self.l)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn prime(&self, side: Side) -> u64 {
        match side {
            Side::S => self.s,
            Side::P => self.p,
        }
    }

    /// Unity of the embedded field on `side`.
    pub fn unity(&self, side: Side) -> u64 {
        match side {
            Side::S => self.unity_s,
            Side::P => self.unity_p,
        }
    }

    /// Number of squarings that take the embedded field on `side` onto its
    /// unity: `l` for the multiples of `s`, `k` for the multiples of `p`.
    pub fn kernel_depth(&self, side: Side) -> u32 {
        match side {
            Side::S => self.l,
            Side::P => self.k,
        }
    }

    /// Fails with [`Error::BudgetExceeded`] when `needed` is over budget.
    pub fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        arith::pow_mod(a, e, self.modulus)
    }

    pub fn is_unit(&self, w: u64) -> bool {
        w % self.s != 0 && w % self.p != 0
    }

    /// `w^2 mod N`.
    pub fn fsquare(&self, w: u64) -> u64 {
        mul_mod(w, w, self.modulus)
    }

    /// `w^(2^i) mod N` by `i` successive squarings.
    pub fn pow2iter(&self, mut w: u64, i: u32) -> u64 {
        for _ in 0..i {
            w = self.fsquare(w);
        }
        w
    }

    /// The CRT image `h(w) = (unity_s * w, unity_p * w)`.
    pub fn h_split(&self, w: u64) -> CrtPair {
        CrtPair {
            xs: mul_mod(self.unity_s, w, self.modulus),
            yp: mul_mod(self.unity_p, w, self.modulus),
        }
    }

    /// Inverse of [`h_split`](Self::h_split).
    pub fn h_join(&self, pair: CrtPair) -> Result<u64> {
        for (value, prime) in [(pair.xs, self.s), (pair.yp, self.p)] {
            if value >= self.modulus {
                return Err(Error::OutOfRange {
                    value,
                    bound: self.modulus,
                });
            }
            if value % prime != 0 {
                return Err(Error::NotDivisible { value, prime });
            }
        }
        Ok(add_mod(pair.xs, pair.yp, self.modulus))
    }

    /// The residue congruent to `a` mod s and `b` mod p.
    pub fn crt(&self, a: u64, b: u64) -> u64 {
        add_mod(
            mul_mod(a % self.s, self.unity_p, self.modulus),
            mul_mod(b % self.p, self.unity_s, self.modulus),
            self.modulus,
        )
    }

    /// All square roots of `a` modulo N, ascending.
    pub fn sqrt_mod_n(&self, a: u64) -> Vec<u64> {
        let roots_s = sqrt_mod_prime(a % self.s, self.s);
        let roots_p = sqrt_mod_prime(a % self.p, self.p);
        let mut roots: Vec<u64> = roots_s
            .iter()
            .flat_map(|&x| roots_p.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.crt(x, y))
            .collect();
        roots.sort_unstable();
        roots
    }

    /// True iff `w` lies on a cycle of the squaring map.
    ///
    /// A residue is cyclic exactly when each of its components mod s and
    /// mod p is zero or has odd multiplicative order.
    pub fn is_cyclic(&self, w: u64) -> bool {
        let w = w % self.modulus;
        let ok = |m: u64, odd: u64| {
            let x = w % m;
            x == 0 || arith::pow_mod(x, odd, m) == 1
        };
        ok(self.s, self.q) && ok(self.p, self.r)
    }

    /// The unique cyclic square root of a cyclic element.
    ///
    /// With `L = lcm(q, r)` every cyclic `w` satisfies `w^(L+1) = w`, so
    /// `w^((L+1)/2)` is a square root of `w` and is itself cyclic.
    pub fn cyclic_sqrt(&self, w: u64) -> Result<u64> {
        if !self.is_cyclic(w) {
            return Err(Error::NotCyclic(w));
        }
        let order = arith::lcm(self.q, self.r);
        Ok(self.pow(w, order.div_ceil(2)))
    }
}

/// The CRT image `(xs, yp)` of a residue: `xs` is a multiple of `s`, `yp`
/// a multiple of `p`, and `xs + yp = w mod N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrtPair {
    pub xs: u64,
    pub yp: u64,
}

impl CrtPair {
    pub fn new(xs: u64, yp: u64) -> Self {
        Self { xs, yp }
    }

    pub fn component(&self, side: Side) -> u64 {
        match side {
            Side::S => self.xs,
            Side::P => self.yp,
        }
    }

    /// Componentwise product in the Cartesian ring.
    pub fn mul(self, other: Self, ctx: &RingContext) -> Self {
        Self {
            xs: ctx.mul(self.xs, other.xs),
            yp: ctx.mul(self.yp, other.yp),
        }
    }

    /// Componentwise sum in the Cartesian ring.
    pub fn add(self, other: Self, ctx: &RingContext) -> Self {
        Self {
            xs: ctx.add(self.xs, other.xs),
            yp: ctx.add(self.yp, other.yp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(s: u64, p: u64) -> RingContext {
        RingContext::new(s, p).unwrap()
    }

    #[test]
    fn context_11_23() {
        let c = ctx(11, 23);
        assert_eq!((c.alpha(), c.beta()), (2, 1));
        assert_eq!((c.unity_s(), c.unity_p()), (231, 23));
        assert_eq!((c.k(), c.q(), c.l(), c.r()), (1, 5, 1, 11));
        assert_eq!(c.modulus(), 253);
        assert_eq!(c.height(), 1);
    }

    #[test]
    fn context_29_41() {
        let c = ctx(29, 41);
        assert_eq!((c.unity_s(), c.unity_p()), (493, 697));
        assert_eq!((c.alpha(), c.beta()), (24, 17));
    }

    #[test]
    fn context_3_7() {
        let c = ctx(3, 7);
        assert_eq!((c.alpha(), c.beta()), (2, 1));
        assert_eq!((c.unity_s(), c.unity_p()), (15, 7));
    }

    #[test]
    fn context_errors() {
        assert_eq!(RingContext::new(9, 23), Err(Error::NotPrime(9)));
        assert_eq!(RingContext::new(2, 23), Err(Error::NotPrime(2)));
        assert_eq!(RingContext::new(11, 11), Err(Error::EqualPrimes(11)));
        // two primes just above 2^31 multiply past 2^62
        let mut big = (1u64 << 31) + 1..;
        let a = big.find(|&m| arith::is_prime(m)).unwrap();
        let b = big.find(|&m| arith::is_prime(m)).unwrap();
        assert_eq!(
            RingContext::new(a, b),
            Err(Error::ModulusOverflow { s: a, p: b })
        );
    }

    #[test]
    fn squaring() {
        let c = ctx(11, 23);
        assert_eq!(c.fsquare(25), 119);
        assert_eq!(c.fsquare(0), 0);
        assert_eq!(ctx(29, 41).fsquare(697), 697);
        assert_eq!(c.pow2iter(2, 0), 2);
        assert_eq!(c.pow2iter(24, 1), 70);
        let w = c.pow2iter(25, 4);
        assert_eq!((w % 11, w % 23), (3, 9));
    }

    #[test]
    fn h_examples() {
        let c = ctx(11, 23);
        assert_eq!(c.h_split(1), CrtPair::new(231, 23));
        assert_eq!(c.h_split(0), CrtPair::new(0, 0));
        assert_eq!(c.h_split(24), CrtPair::new(231, 46));
        let d = ctx(29, 41);
        assert_eq!(d.h_join(CrtPair::new(493, 697)), Ok(1));
        assert_eq!(d.h_join(CrtPair::new(232, 41)), Ok(273));
        assert_eq!(d.h_join(CrtPair::new(0, 0)), Ok(0));
        assert_eq!(
            d.h_join(CrtPair::new(5, 41)),
            Err(Error::NotDivisible {
                value: 5,
                prime: 29
            })
        );
    }

    #[test]
    fn square_root_examples() {
        let c = ctx(11, 23);
        assert_eq!(c.sqrt_mod_n(3), vec![16, 39, 214, 237]);
        assert_eq!(c.sqrt_mod_n(1), vec![1, 45, 208, 252]);
        assert_eq!(c.sqrt_mod_n(0), vec![0]);
    }

    #[test]
    fn h_exhaustive_small() {
        for (s, p) in [(3, 7), (11, 23), (29, 41), (7, 13)] {
            let c = ctx(s, p);
            let n = c.modulus();
            for a in 0..n {
                let ha = c.h_split(a);
                assert_eq!(c.h_join(ha), Ok(a));
                for b in 0..n {
                    let hb = c.h_split(b);
                    assert_eq!(c.h_split(c.mul(a, b)), ha.mul(hb, &c));
                    assert_eq!(c.h_split(c.add(a, b)), ha.add(hb, &c));
                }
            }
        }
    }

    #[test]
    fn idempotents_are_exactly_four() {
        for (s, p) in [(3, 7), (11, 23), (29, 41), (5, 97)] {
            let c = ctx(s, p);
            let idem: Vec<u64> = (0..c.modulus()).filter(|&w| c.fsquare(w) == w).collect();
            let mut expected = vec![0, 1, c.unity_s(), c.unity_p()];
            expected.sort_unstable();
            assert_eq!(idem, expected);
        }
    }

    #[test]
    fn cyclic_sqrt_walks_back_along_cycle() {
        let c = ctx(11, 23);
        assert_eq!(c.cyclic_sqrt(3), Ok(16));
        assert_eq!(c.cyclic_sqrt(69), Ok(115));
        assert_eq!(c.cyclic_sqrt(115), Ok(92));
        assert_eq!(c.cyclic_sqrt(45), Err(Error::NotCyclic(45)));
    }

    fn prime_pair() -> impl Strategy<Value = (u64, u64)> {
        let primes: Vec<u64> = (3..2000u64).filter(|&m| arith::is_prime(m)).collect();
        (0..primes.len(), 0..primes.len())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(move |(a, b)| (primes[a], primes[b]))
    }

    proptest! {
        #[test]
        fn context_invariants((s, p) in prime_pair()) {
            let c = ctx(s, p);
            prop_assert_eq!(c.beta() as i128 * p as i128 - c.alpha() as i128 * s as i128, 1);
            prop_assert!(c.alpha() > 0 && c.alpha() < p);
            prop_assert!(c.beta() > 0 && c.beta() < s);
            prop_assert_eq!(c.add(c.unity_s(), c.unity_p()), 1);
            prop_assert_eq!(c.fsquare(c.unity_s()), c.unity_s());
            prop_assert_eq!(c.fsquare(c.unity_p()), c.unity_p());
            prop_assert_eq!((1u64 << c.k()) * c.q() + 1, s);
            prop_assert_eq!((1u64 << c.l()) * c.r() + 1, p);
        }

        #[test]
        fn h_round_trip((s, p) in prime_pair(), w in any::<u64>()) {
            let c = ctx(s, p);
            let w = w % c.modulus();
            let pair = c.h_split(w);
            prop_assert_eq!(pair.xs % s, 0);
            prop_assert_eq!(pair.yp % p, 0);
            prop_assert_eq!(c.h_join(pair), Ok(w));
        }

        #[test]
        fn unit_roots_come_in_fours((s, p) in prime_pair(), w in any::<u64>()) {
            let c = ctx(s, p);
            let a = c.fsquare(w % c.modulus());
            let roots = c.sqrt_mod_n(a);
            for &x in &roots {
                prop_assert_eq!(c.fsquare(x), a);
                prop_assert!(roots.contains(&arith::neg_mod(x, c.modulus())));
            }
            if c.is_unit(a) {
                prop_assert_eq!(roots.len(), 4);
            }
        }
    }
}
