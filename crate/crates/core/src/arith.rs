//! Small integer helpers: factorization, divisors, and modular reduction.

pub use num_integer::{gcd, lcm};

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order of the prime. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factorize zero");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let base = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(base.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Largest `k` such that `k * k` divides `n`.
pub fn largest_square_divisor_root(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| p.pow(e / 2))
        .product()
}

/// Canonical representative of `x` modulo `m`, in `[0, m)`.
#[inline]
pub fn modulo(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert!(factorize(1).is_empty());
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        for n in 1..200u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute, "n = {n}");
        }
    }

    #[test]
    fn square_roots() {
        for n in 1..500u64 {
            let brute = (1..=n).filter(|k| n % (k * k) == 0).max().unwrap();
            assert_eq!(largest_square_divisor_root(n), brute, "n = {n}");
        }
    }

    #[test]
    fn negative_reduction() {
        assert_eq!(modulo(-2, 8), 6);
        assert_eq!(modulo(17, 8), 1);
        assert_eq!(modulo(0, 1), 0);
    }
}
