//! Toy factoring of N = s*p from squaring orbits and square-root collisions.
//!
//! [`cyclic_attack`] and [`collision_factor`] see only N. [`treelevel_pairs`]
//! is white-box: it uses the context to enumerate square roots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::arith::{gcd, is_prime, mul_mod};
use crate::ring::RingContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cyclic,
    Collision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorResult {
    /// A proper divisor of N, if one was found.
    pub factor: Option<u64>,
    /// Squarings for the cyclic attack, gcd evaluations for collisions.
    pub iterations: u64,
    pub method: Method,
}

impl FactorResult {
    fn new(n: u64, factor: Option<u64>, iterations: u64, method: Method) -> Self {
        if let Some(f) = factor {
            assert!(
                1 < f && f < n && n % f == 0,
                "{f} is not a proper divisor of {n}"
            );
        }
        Self {
            factor,
            iterations,
            method,
        }
    }
}

fn proper(g: u64, n: u64) -> Option<u64> {
    (1 < g && g < n).then_some(g)
}

// gcd of accumulated differences is taken every this many squarings
const BATCH: u64 = 8;

/// Looks for two iterates `w^(2^i)`, `w^(2^(i+j))` that agree modulo one
/// prime factor of N but not the other.
///
/// Iterates are compared Brent-style: the reference point sits at indices
/// 0, 1, 3, 7, ... and each window compares it with the next 1, 2, 4, ...
/// iterates. Differences are multiplied together and a gcd is taken every
/// eight squarings and at the end of each window; a batch whose gcd is N is
/// replayed one difference at a time.
pub fn cyclic_attack(n: u64, w: u64, max_iter: u64) -> Result<FactorResult> {
    if n < 9 || n % 2 == 0 || is_prime(n) || n >= 1 << 62 {
        return Err(Error::BadModulus(n));
    }
    if w <= 1 || w >= n {
        return Err(Error::OutOfRange { value: w, bound: n });
    }
    let done = |f: Option<u64>, it: u64| Ok(FactorResult::new(n, f, it, Method::Cyclic));
    if let Some(f) = proper(gcd(w, n), n) {
        return done(Some(f), 0);
    }

    let diff = |a: u64, b: u64| a.abs_diff(b);
    let mut iterations = 0u64;
    let mut hare = w;
    let mut window = 1u64;
    while iterations < max_iter {
        let tortoise = hare;
        let mut product = 1u64;
        let mut batch_start = hare;
        let mut in_batch = 0u64;
        for j in 1..=window {
            hare = mul_mod(hare, hare, n);
            iterations += 1;
            product = mul_mod(product, diff(hare, tortoise), n);
            in_batch += 1;
            if in_batch == BATCH || j == window || iterations == max_iter {
                match gcd(product, n) {
                    1 => {}
                    g if g == n => {
                        if let Some(f) = replay(batch_start, tortoise, in_batch, n) {
                            return done(Some(f), iterations);
                        }
                    }
                    g => return done(Some(g), iterations),
                }
                product = 1;
                batch_start = hare;
                in_batch = 0;
            }
            if iterations == max_iter {
                break;
            }
        }
        window *= 2;
    }
    done(None, iterations)
}

fn replay(mut hare: u64, tortoise: u64, steps: u64, n: u64) -> Option<u64> {
    for _ in 0..steps {
        hare = mul_mod(hare, hare, n);
        let d = hare.abs_diff(tortoise);
        if let Some(f) = proper(gcd(d, n), n) {
            return Some(f);
        }
    }
    None
}

/// Factors N from `x^2 = y^2 mod N` via `gcd(y - x, N)`, then `gcd(y + x, N)`.
pub fn collision_factor(n: u64, x: u64, y: u64) -> Result<FactorResult> {
    if !(2..1 << 62).contains(&n) {
        return Err(Error::BadModulus(n));
    }
    for v in [x, y] {
        if v >= n {
            return Err(Error::OutOfRange { value: v, bound: n });
        }
    }
    if mul_mod(x, x, n) != mul_mod(y, y, n) {
        return Err(Error::NotACollision { x, y, modulus: n });
    }
    let minus = y.abs_diff(x);
    if let Some(f) = proper(gcd(minus, n), n) {
        return Ok(FactorResult::new(n, Some(f), 1, Method::Collision));
    }
    let plus = proper(gcd((x + y) % n, n), n);
    Ok(FactorResult::new(n, plus, 2, Method::Collision))
}

/// Pairs of first-level tree nodes (square roots of `a`) that are not
/// negatives of each other, each as `(smallest root, other root)`.
pub fn treelevel_pairs(a: u64, ctx: &RingContext) -> Result<Vec<(u64, u64)>> {
    if a >= ctx.modulus() {
        return Err(Error::OutOfRange {
            value: a,
            bound: ctx.modulus(),
        });
    }
    if !ctx.is_cyclic(a) {
        return Err(Error::NotCyclic(a));
    }
    let roots = ctx.sqrt_mod_n(a);
    let x = roots[0];
    let neg = (ctx.modulus() - x) % ctx.modulus();
    let pairs: Vec<(u64, u64)> = roots[1..]
        .iter()
        .filter(|&&y| y != neg)
        .map(|&y| (x, y))
        .collect();
    if pairs.is_empty() {
        return Err(Error::NoSquareRoots(a));
    }
    Ok(pairs)
}
