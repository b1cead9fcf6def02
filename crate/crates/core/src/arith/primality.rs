//! Primality testing.
//!
//! Inputs below the configured threshold (and within `u64`) get a
//! deterministic Miller-Rabin run over the first twelve prime bases, which is
//! exact for every 64-bit integer. Larger inputs are trial-divided and then run
//! through strong-probable-prime rounds whose bases are drawn from a ChaCha
//! stream keyed by `base_seed`, so the verdict is reproducible.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bases that make Miller-Rabin deterministic below 3.3 * 10^24.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const SMALL_PRIME_LIMIT: u32 = 1 << 16;

/// Trial-division depth applied before the strong-probable-prime rounds.
const PRESCREEN_LIMIT: u32 = 2_000;

/// Tunables for [`is_prime`] and [`attest_prime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalityConfig {
    pub deterministic_threshold: u64,
    pub probabilistic_rounds: u32,
    pub base_seed: u64,
}

impl PrimalityConfig {
    pub const MIN_ROUNDS: u32 = 16;

    pub fn new(deterministic_threshold: u64, probabilistic_rounds: u32, base_seed: u64) -> Result<Self> {
        let cfg = Self {
            deterministic_threshold,
            probabilistic_rounds,
            base_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.deterministic_threshold == 0 {
            return Err(Error::InvalidArgument("deterministic_threshold must be positive".into()));
        }
        if self.probabilistic_rounds < Self::MIN_ROUNDS {
            return Err(Error::InvalidArgument(format!(
                "probabilistic_rounds must be at least {}, got {}",
                Self::MIN_ROUNDS,
                self.probabilistic_rounds
            )));
        }
        Ok(())
    }
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        Self {
            deterministic_threshold: u64::MAX,
            probabilistic_rounds: 40,
            base_seed: 0x6469_7667_6170,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimalityMethod {
    /// Exact answer: table lookup or deterministic Miller-Rabin bases.
    Deterministic,
    /// Passed `rounds` strong-probable-prime tests.
    StrongProbablePrime,
}

/// How a number was judged prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attestation {
    pub method: PrimalityMethod,
    pub rounds: u32,
}

/// Primes below 2^16, computed once.
pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(SMALL_PRIME_LIMIT))
}

/// Sieve of Eratosthenes: all primes `< limit`.
pub(crate) fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j < limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `n mod p` without allocating.
pub(crate) fn mod_small(n: &BigUint, p: u32) -> u32 {
    let p = p as u64;
    n.iter_u32_digits()
        .rev()
        .fold(0u64, |r, d| ((r << 32) | d as u64) % p) as u32
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, base: &BigUint) -> bool {
    let mut x = base.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Returns how `m` was shown prime, or `None` if it is not prime.
pub fn attest_prime(m: &BigUint, cfg: &PrimalityConfig) -> Option<Attestation> {
    if let Some(small) = m.to_u64() {
        if small < cfg.deterministic_threshold {
            return is_prime_u64(small).then_some(Attestation {
                method: PrimalityMethod::Deterministic,
                rounds: DETERMINISTIC_BASES.len() as u32,
            });
        }
        if small < SMALL_PRIME_LIMIT as u64 {
            return small_primes().binary_search(&(small as u32)).is_ok().then_some(Attestation {
                method: PrimalityMethod::Deterministic,
                rounds: 0,
            });
        }
    }
    for &p in small_primes().iter().take_while(|&&p| p < PRESCREEN_LIMIT) {
        if mod_small(m, p) == 0 {
            return None;
        }
    }

    let n_minus_1 = m - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigUint::from(2u32);
    if !strong_probable_prime(m, &n_minus_1, &d, s, &two) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed);
    for _ in 1..cfg.probabilistic_rounds {
        let base = rng.gen_biguint_range(&two, &n_minus_1);
        if !strong_probable_prime(m, &n_minus_1, &d, s, &base) {
            return None;
        }
    }
    Some(Attestation {
        method: PrimalityMethod::StrongProbablePrime,
        rounds: cfg.probabilistic_rounds,
    })
}

pub(crate) fn is_prime_big(m: &BigUint, cfg: &PrimalityConfig) -> bool {
    !m.is_zero() && attest_prime(m, cfg).is_some()
}
