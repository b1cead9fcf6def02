//! Arbitrary-precision integer primitives: gcd, valuations, primality,
//! prime search in residue classes and small congruence helpers.

mod factor;
mod primality;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use factor::{factorize, factorize_u64, tau, Factorization};
pub use primality::{attest_prime, is_prime_u64, Attestation, PrimalityConfig, PrimalityMethod};
pub(crate) use primality::{mod_small, sieve, small_primes};

/// Limits on a single residue-class prime search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    /// Candidates examined before giving up.
    pub max_prime_steps: u64,
    /// Moduli wider than this many bits are refused.
    pub max_bits: u64,
}

impl SearchCaps {
    pub fn new(max_prime_steps: u64, max_bits: u64) -> Result<Self> {
        if max_prime_steps == 0 || max_bits == 0 {
            return Err(Error::InvalidArgument("search caps must be positive".into()));
        }
        Ok(Self {
            max_prime_steps,
            max_bits,
        })
    }
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_prime_steps: 100_000,
            max_bits: 1 << 16,
        }
    }
}

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigUint {
    a.magnitude().gcd(b.magnitude())
}

/// Largest `k` with `base^k` dividing `|m|`.
pub fn valuation(base: &BigInt, m: &BigInt) -> Result<u64> {
    if base < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("valuation base must be >= 2, got {base}")));
    }
    if m.is_zero() {
        return Err(Error::InvalidArgument("valuation of 0 is unbounded".into()));
    }
    Ok(valuation_unsigned(base.magnitude(), m.magnitude()))
}

/// Unchecked core of [`valuation`]: `base >= 2`, `m >= 1`.
pub(crate) fn valuation_unsigned(base: &BigUint, m: &BigUint) -> u64 {
    if let (Some(b), Some(mut m)) = (base.to_u64(), m.to_u64()) {
        let mut k = 0;
        while m % b == 0 {
            m /= b;
            k += 1;
        }
        return k;
    }
    let mut k = 0;
    let mut rest = m.clone();
    loop {
        let (q, r) = rest.div_rem(base);
        if !r.is_zero() {
            return k;
        }
        rest = q;
        k += 1;
    }
}

/// `|m|` is prime.
pub fn is_prime(m: &BigInt, cfg: &PrimalityConfig) -> bool {
    primality::is_prime_big(m.magnitude(), cfg)
}

/// Smallest `n >= 1` with `n ≡ residue (mod modulus)`.
pub fn min_positive_solution(residue: &BigInt, modulus: &BigInt) -> Result<BigUint> {
    if modulus < &BigInt::one() {
        return Err(Error::InvalidArgument(format!("modulus must be >= 1, got {modulus}")));
    }
    let r = residue.mod_floor(modulus);
    Ok(if r.is_zero() { modulus.magnitude().clone() } else { r.into_parts().1 })
}

/// Product of all elements; the empty product is 1.
pub fn prefix_product(elems: &[BigUint]) -> BigUint {
    elems.iter().product()
}

/// A prime located by [`find_prime_in_ap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApPrime {
    pub prime: BigUint,
    pub attestation: Attestation,
    /// Candidates examined, including the one returned.
    pub candidates: u64,
}

const FILTER_LIMIT: u32 = 2_000;

/// Least prime `p > lower_bound` with `p ≡ residue (mod modulus)`.
///
/// Candidates are walked in increasing order through the residue class. Each
/// one is first screened against the primes below 2000, whose residues are
/// updated incrementally, and survivors go to [`attest_prime`].
pub fn find_prime_in_ap(
    residue: &BigInt,
    modulus: &BigUint,
    lower_bound: &BigUint,
    caps: &SearchCaps,
    cfg: &PrimalityConfig,
) -> Result<ApPrime> {
    if modulus.is_zero() {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if modulus.bits() > caps.max_bits {
        return Err(Error::ModulusTooLarge {
            bits: modulus.bits(),
            max_bits: caps.max_bits,
        });
    }
    let modulus_signed = BigInt::from_biguint(Sign::Plus, modulus.clone());
    if !residue.magnitude().gcd(modulus).is_one() {
        return Err(Error::NonCoprimeResidue {
            residue: residue.clone(),
            modulus: modulus.clone(),
        });
    }

    // First candidate: least x > lower_bound in the class.
    let start = BigInt::from_biguint(Sign::Plus, lower_bound + 1u32);
    let shift = (residue - &start).mod_floor(&modulus_signed);
    let mut candidate = (start + shift).into_parts().1;

    let filter: Vec<(u32, u32, u32)> = small_primes()
        .iter()
        .take_while(|&&p| p < FILTER_LIMIT)
        .map(|&p| (p, mod_small(&candidate, p), mod_small(modulus, p)))
        .collect();
    let mut filter = filter;

    for step in 1..=caps.max_prime_steps {
        let screened_out = filter
            .iter()
            .any(|&(p, r, _)| r == 0 && candidate != BigUint::from(p));
        if !screened_out {
            if let Some(attestation) = attest_prime(&candidate, cfg) {
                return Ok(ApPrime {
                    prime: candidate,
                    attestation,
                    candidates: step,
                });
            }
        }
        candidate += modulus;
        for (p, r, s) in filter.iter_mut() {
            *r = (*r + *s) % *p;
        }
    }
    Err(Error::SearchCapExceeded {
        steps: caps.max_prime_steps,
    })
}

/// Convenience: sign-aware absolute value as an unsigned integer.
pub(crate) fn abs(n: &BigInt) -> BigUint {
    n.abs().into_parts().1
}

/// `a | b` over the integers, with `0 | b` iff `b = 0`.
pub fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}
