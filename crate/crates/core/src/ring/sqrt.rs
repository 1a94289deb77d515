//! Square roots modulo an odd prime (Tonelli-Shanks).

use super::arith::{mul_mod, pow_mod};

/// Legendre symbol of `a` modulo the odd prime `m`, as 0, 1 or `m - 1`.
fn euler_criterion(a: u64, m: u64) -> u64 {
    pow_mod(a, (m - 1) / 2, m)
}

/// First quadratic non-residue, found by scanning upward from 2.
fn first_non_residue(m: u64) -> u64 {
    (2..m)
        .find(|&z| euler_criterion(z, m) == m - 1)
        .expect("every odd prime has a quadratic non-residue")
}

/// All square roots of `a` modulo the odd prime `m`, ascending.
///
/// The result has two elements for a nonzero residue, one (`0`) for `a = 0`
/// and none for a non-residue.
pub fn sqrt_mod_prime(a: u64, m: u64) -> Vec<u64> {
    let a = a % m;
    if a == 0 {
        return vec![0];
    }
    if euler_criterion(a, m) != 1 {
        return Vec::new();
    }
    let root = tonelli_shanks(a, m);
    let other = m - root;
    if root < other {
        vec![root, other]
    } else {
        vec![other, root]
    }
}

fn tonelli_shanks(a: u64, m: u64) -> u64 {
    if m % 4 == 3 {
        return pow_mod(a, (m + 1) / 4, m);
    }
    let mut odd = m - 1;
    let mut e = odd.trailing_zeros();
    odd >>= e;

    let z = first_non_residue(m);
    let mut c = pow_mod(z, odd, m);
    let mut t = pow_mod(a, odd, m);
    let mut x = pow_mod(a, odd.div_ceil(2), m);

    while t != 1 {
        // least i with t^(2^i) = 1
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, m);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(e - i - 1) {
            b = mul_mod(b, b, m);
        }
        x = mul_mod(x, b, m);
        c = mul_mod(b, b, m);
        t = mul_mod(t, c, m);
        e = i;
    }
    x
}
