//! Integer utilities: prime generation, primality, factorization.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rng::SplitMix64;

/// Primes up to and including `bound`, by plain sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // these witnesses are known to determine primality below 3.3e24
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
fn pollard_brent(n: u64, rng: &mut SplitMix64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    loop {
        let y0 = 1 + rng.below(n - 1);
        let c = 1 + rng.below(n - 1);
        let mut y = y0;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = (mulmod(y, y, n) + c) % n;
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let lim = 128.min(r - k);
                for _ in 0..lim {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
    }
}

/// Full factorization of a u64, sorted, as (prime, exponent) pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            factors.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    let mut rng = SplitMix64::from_words([n, 0x6a75]);
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            factors.push(m);
            continue;
        }
        let d = pollard_brent(m, &mut rng);
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for f in factors {
        match out.last_mut() {
            Some((p, e)) if *p == f => *e += 1,
            _ => out.push((f, 1)),
        }
    }
    out
}

/// Factor |n| for a BigInt. Panics if a cofactor does not fit in u64 after
/// trial division by primes below 10^6 (ample for everything this crate
/// manipulates: discriminants, resultants of the quintic families, norms of
/// small elements).
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes_up_to(1_000_000) {
        if (&m).to_u64() == Some(1) {
            break;
        }
        let pb = BigInt::from(p);
        if (&pb) * (&pb) > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !m.is_one() {
        match m.to_u64() {
            Some(small) => {
                for (p, e) in factor_u64(small) {
                    out.push((BigInt::from(p), e));
                }
            }
            None => panic!("cofactor too large to factor: {m}"),
        }
    }
    out.sort();
    out
}

/// Squarefree kernel: the unique squarefree d with sign(d) = sign(n) and
/// n = d * square. Errors on n = 0 are the caller's concern.
pub fn squarefree_kernel(n: &BigInt) -> BigInt {
    assert!(!n.is_zero());
    let mut d = BigInt::one();
    for (p, e) in factor_bigint(n) {
        if e % 2 == 1 {
            d *= p;
        }
    }
    if n.is_negative() {
        -d
    } else {
        d
    }
}

/// True if |n| is a perfect square.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Integer k-th root check: returns r with r^k = n when one exists (n >= 0).
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// p-adic valuation of n (n nonzero).
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero());
    let mut m = n.clone();
    let mut v = 0;
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1367));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(847));
        assert!(is_prime_u64(1_000_000_007));
        // strong pseudoprime to several bases
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u64(847), vec![(7, 1), (11, 2)]);
        assert_eq!(factor_u64(1), vec![]);
        let n = BigInt::from(-3375);
        assert_eq!(squarefree_kernel(&n), BigInt::from(-15));
        assert_eq!(squarefree_kernel(&BigInt::from(12)), BigInt::from(3));
        assert_eq!(squarefree_kernel(&BigInt::from(-1367)), BigInt::from(-1367));
    }

    #[test]
    fn disc_of_d7_example_factors() {
        // -3^6 * 7^9
        let n = BigInt::from(-729i64 * 40_353_607i64);
        let f = factor_bigint(&n);
        assert_eq!(f, vec![(BigInt::from(3), 6), (BigInt::from(7), 9)]);
        assert_eq!(squarefree_kernel(&n), BigInt::from(-7));
    }

    #[test]
    fn roots_and_valuations() {
        assert!(is_square(&BigInt::from(717_409)));
        assert_eq!(exact_root(&BigInt::from(14641), 4), Some(BigInt::from(11)));
        assert_eq!(exact_root(&BigInt::from(14642), 4), None);
        assert_eq!(valuation(&BigInt::from(1400), &BigInt::from(2)), 3);
    }
}
