//! Integer factorization: trial division by the 16-bit primes, then
//! Pollard-Brent rho on whatever cofactor is left.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime_big, is_prime_u64, mod_small, mul_mod, small_primes, PrimalityConfig};

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub type Factorization = Vec<(BigUint, u32)>;

/// Factors `n >= 1`; `factorize(1)` is empty. Large prime cofactors are
/// accepted on the strength of [`PrimalityConfig`].
pub fn factorize(n: &BigUint, cfg: &PrimalityConfig) -> Factorization {
    assert!(!n.is_zero(), "factorize(0) is undefined");
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }

    let mut rest = n.clone();
    let mut out = Vec::new();
    for &p in small_primes() {
        if mod_small(&rest, p) != 0 {
            continue;
        }
        let mut e = 0;
        while mod_small(&rest, p) == 0 {
            rest /= p;
            e += 1;
        }
        out.push((BigUint::from(p), e));
        if rest.is_one() {
            return out;
        }
    }

    let mut pending = vec![rest];
    let mut large = Vec::new();
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            large.extend(factorize_u64(small).into_iter().flat_map(|(p, e)| {
                std::iter::repeat_n(BigUint::from(p), e as usize)
            }));
        } else if is_prime_big(&m, cfg) {
            large.push(m);
        } else {
            let d = rho_big(&m);
            pending.push(&m / &d);
            pending.push(d);
        }
    }
    large.sort();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factorization of a 64-bit integer `n >= 1`.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n != 0, "factorize(0) is undefined");
    let mut out = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n == 1 {
        return out;
    }
    // Every prime factor of n is now >= 2^16.
    let mut primes = Vec::new();
    let mut pending = vec![n];
    while let Some(m) = pending.pop() {
        if m == 1 {
            continue;
        }
        if m < (1 << 32) || is_prime_u64(m) {
            primes.push(m);
        } else {
            let d = rho_u64(m);
            pending.push(m / d);
            pending.push(d);
        }
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Number of positive divisors from a factorization.
pub fn tau(f: &[(BigUint, u32)]) -> BigUint {
    f.iter().map(|(_, e)| BigUint::from(*e + 1)).product()
}

/// Nontrivial factor of an odd composite `n` with no factor below 2^16.
fn rho_u64(n: u64) -> u64 {
    for c in 1.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let mut q = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut ys = x.clone();
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}
