//! Finitely described infinite sets of positive integers and the
//! divisor-count function `d(A, m) = #{a ∈ A : a | m}`.
//!
//! Natural numbers start at 1, so `Multiples(k)` is `{k, 2k, ...}` and
//! `GeometricPowers(r)` is `{r, r^2, ...}`. Divisibility ignores sign.

mod count;
mod primes;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, factorize_u64, tau, PrimalityConfig};
use crate::error::{Error, Result};

pub use count::Count;
pub use primes::PrimeStream;

/// An infinite subset of ℕ, or the known prefix of one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    /// `{k·m : m ≥ 1}`
    Multiples {
        #[serde(with = "crate::json::biguint")]
        k: BigUint,
    },
    /// `{r^m : m ≥ 1}`
    GeometricPowers {
        #[serde(with = "crate::json::biguint")]
        r: BigUint,
    },
    Primes,
    /// `{m! : m ≥ 1}`
    Factorials,
    /// Strictly increasing prefix of an otherwise unspecified infinite set.
    ExplicitList {
        #[serde(with = "crate::json::biguint_vec")]
        elems: Vec<BigUint>,
    },
}

impl SetSpec {
    pub fn multiples(k: impl Into<BigUint>) -> Result<Self> {
        let s = SetSpec::Multiples { k: k.into() };
        s.validate()?;
        Ok(s)
    }

    pub fn powers(r: impl Into<BigUint>) -> Result<Self> {
        let s = SetSpec::GeometricPowers { r: r.into() };
        s.validate()?;
        Ok(s)
    }

    pub fn list<T: Into<BigUint>>(elems: impl IntoIterator<Item = T>) -> Result<Self> {
        let s = SetSpec::ExplicitList {
            elems: elems.into_iter().map(Into::into).collect(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::Multiples { k } if k.is_zero() => {
                Err(Error::InvalidArgument("multiples: k must be >= 1".into()))
            }
            SetSpec::GeometricPowers { r } if *r < BigUint::from(2u32) => {
                Err(Error::InvalidArgument("powers: r must be >= 2".into()))
            }
            SetSpec::ExplicitList { elems } => {
                if elems.first().is_some_and(Zero::is_zero) {
                    return Err(Error::InvalidArgument("list elements must be positive".into()));
                }
                if elems.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidArgument("list must be strictly increasing".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Only explicit lists are finite descriptions.
    pub fn is_infinite(&self) -> bool {
        !matches!(self, SetSpec::ExplicitList { .. })
    }

    /// Lazy increasing enumeration of the elements.
    pub fn iter(&self) -> Elements<'_> {
        let inner = match self {
            SetSpec::Multiples { k } => Inner::Multiples { step: k, next: k.clone() },
            SetSpec::GeometricPowers { r } => Inner::Powers { ratio: r, next: r.clone() },
            SetSpec::Primes => Inner::Primes(PrimeStream::new()),
            SetSpec::Factorials => Inner::Factorials {
                m: 1,
                next: BigUint::one(),
            },
            SetSpec::ExplicitList { elems } => Inner::List(elems.iter()),
        };
        Elements { inner }
    }

    /// All elements `≤ bound`, increasing.
    pub fn elements_upto(&self, bound: &BigUint) -> Vec<BigUint> {
        if let (SetSpec::Primes, Some(b)) = (self, bound.to_u32()) {
            return arith::sieve(b.saturating_add(1))
                .into_iter()
                .map(BigUint::from)
                .collect();
        }
        self.iter().take_while(|a| a <= bound).collect()
    }

    /// The first `t` elements `a_1 < ... < a_t`.
    pub fn prefix(&self, t: usize) -> Result<Vec<BigUint>> {
        let out: Vec<BigUint> = self.iter().take(t).collect();
        if out.len() < t {
            return Err(Error::PrefixTooShort {
                needed: t,
                available: out.len(),
            });
        }
        Ok(out)
    }

    /// `d(A, m)`.
    pub fn divisor_count(&self, m: &BigInt) -> Count {
        self.divisor_count_with(m, &PrimalityConfig::default())
    }

    /// `d(A, m)`, with `cfg` deciding large prime cofactors during factoring.
    ///
    /// Counts go through arithmetic rather than enumeration: valuations for
    /// powers, `τ(|m|/k)` for multiples, `ω(|m|)` for primes and the largest
    /// `j` with `j! | m` for factorials.
    pub fn divisor_count_with(&self, m: &BigInt, cfg: &PrimalityConfig) -> Count {
        if m.is_zero() {
            return match self {
                SetSpec::ExplicitList { elems } => Count::finite(elems.len() as u64),
                _ => Count::Infinite,
            };
        }
        let m = m.magnitude();
        if let Some(small) = m.to_u64() {
            return Count::Finite(count_u64(self, small));
        }
        Count::Finite(match self {
            SetSpec::Multiples { k } => {
                let (q, r) = m.div_rem(k);
                if r.is_zero() {
                    tau(&factorize(&q, cfg))
                } else {
                    BigUint::ZERO
                }
            }
            SetSpec::GeometricPowers { r } => arith::valuation_unsigned(r, m).into(),
            SetSpec::Primes => factorize(m, cfg).len().into(),
            SetSpec::Factorials => {
                let mut j = 1u64;
                let mut f = BigUint::one();
                loop {
                    let next = &f * (j + 1);
                    if !(m % &next).is_zero() {
                        break;
                    }
                    f = next;
                    j += 1;
                }
                j.into()
            }
            SetSpec::ExplicitList { elems } => elems
                .iter()
                .take_while(|a| *a <= m)
                .filter(|a| (m % *a).is_zero())
                .count()
                .into(),
        })
    }

    /// Reference count by enumerating every element `≤ |m|` and testing
    /// divisibility. Slow; exists to cross-check [`SetSpec::divisor_count`].
    pub fn divisor_count_by_enumeration(&self, m: &BigInt) -> Count {
        if m.is_zero() {
            return self.divisor_count(m);
        }
        let m = m.magnitude();
        let n = self
            .elements_upto(m)
            .iter()
            .filter(|a| (m % *a).is_zero())
            .count();
        Count::finite(n as u64)
    }
}

fn count_u64(spec: &SetSpec, m: u64) -> BigUint {
    let n: u64 = match spec {
        SetSpec::Multiples { k } => match k.to_u64() {
            Some(k) if m.is_multiple_of(k) => {
                return factorize_u64(m / k)
                    .iter()
                    .map(|&(_, e)| BigUint::from(e + 1))
                    .product();
            }
            _ => 0,
        },
        SetSpec::GeometricPowers { r } => match r.to_u64() {
            Some(r) => {
                let (mut m, mut k) = (m, 0);
                while m % r == 0 {
                    m /= r;
                    k += 1;
                }
                k
            }
            None => 0,
        },
        SetSpec::Primes => factorize_u64(m).len() as u64,
        SetSpec::Factorials => {
            let (mut j, mut f) = (1u64, 1u64);
            while let Some(next) = f.checked_mul(j + 1) {
                if !m.is_multiple_of(next) {
                    break;
                }
                f = next;
                j += 1;
            }
            j
        }
        SetSpec::ExplicitList { elems } => elems
            .iter()
            .map_while(|a| a.to_u64().filter(|&a| a <= m))
            .filter(|a| m.is_multiple_of(*a))
            .count() as u64,
    };
    n.into()
}

/// Renders the set in the command-line grammar, e.g. `multiples:4`.
impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Multiples { k } => write!(f, "multiples:{k}"),
            SetSpec::GeometricPowers { r } => write!(f, "powers:{r}"),
            SetSpec::Primes => f.write_str("primes"),
            SetSpec::Factorials => f.write_str("factorials"),
            SetSpec::ExplicitList { elems } => {
                f.write_str("list:")?;
                for (i, a) in elems.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}

/// Iterator returned by [`SetSpec::iter`].
pub struct Elements<'a> {
    inner: Inner<'a>,
}

enum Inner<'a> {
    Multiples { step: &'a BigUint, next: BigUint },
    Powers { ratio: &'a BigUint, next: BigUint },
    Primes(PrimeStream),
    Factorials { m: u64, next: BigUint },
    List(std::slice::Iter<'a, BigUint>),
}

impl Iterator for Elements<'_> {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        match &mut self.inner {
            Inner::Multiples { step, next } => {
                let out = next.clone();
                *next += *step;
                Some(out)
            }
            Inner::Powers { ratio, next } => {
                let out = next.clone();
                *next *= *ratio;
                Some(out)
            }
            Inner::Primes(stream) => stream.next().map(BigUint::from),
            Inner::Factorials { m, next } => {
                let out = next.clone();
                *m += 1;
                *next *= *m;
                Some(out)
            }
            Inner::List(it) => it.next().cloned(),
        }
    }
}
