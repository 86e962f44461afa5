//! Small number-theoretic helpers used by several modules.

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler totient by trial division; the orders involved are tiny.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Multiplicative inverse of `a` mod `n`, requiring `gcd(a, n) = 1`.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let a = a % n;
    (1..n).find(|&k| (a * k) % n == 1)
}
