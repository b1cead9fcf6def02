//! Empirical scans of `|d(A, F(n)) - d(A, G(n))|` over `n = 1..=n_max`.
//!
//! Points where a form that is not identically zero evaluates to 0 are
//! listed in `zero_value_ns` and left out of the maximum: such a form has
//! finitely many zeros, and each one would otherwise contribute an infinite
//! count. An identically zero form is kept, since its infinite count is the
//! point of the comparison.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{proof_bound, CounterexampleFamily, Instance};
use crate::error::{Error, Result};
use crate::json::SCHEMA_VERSION;
use crate::sets::{Count, SetSpec};

/// Integer polynomial, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "bigint_vec")]
    pub coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        Self {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        }
    }

    /// `slope·n + constant`
    pub fn linear(slope: &BigInt, constant: &BigInt) -> Self {
        Self {
            coeffs: vec![constant.clone(), slope.clone()],
        }
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * n + c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}n")?,
                _ => write!(f, "{c}n^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub diff: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub n_max: u64,
    pub max_difference: Count,
    pub argmax: u64,
    pub zero_value_ns: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesPoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Record every `stride`-th point (starting at `n = 1`); `None` records nothing.
    pub series_stride: Option<u64>,
    /// Points per parallel work unit. Does not affect the result.
    pub chunk: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            series_stride: None,
            chunk: 1024,
        }
    }
}

#[derive(Default)]
struct Partial {
    best: Option<(Count, u64)>,
    zeros: Vec<u64>,
    series: Vec<SeriesPoint>,
}

impl Partial {
    fn offer(&mut self, diff: &Count, n: u64) {
        // Ties keep the earliest n.
        if self.best.as_ref().is_none_or(|(best, _)| diff > best) {
            self.best = Some((diff.clone(), n));
        }
    }

    /// `other` covers later n than `self`.
    fn absorb(mut self, other: Partial) -> Partial {
        if let Some((diff, n)) = &other.best {
            self.offer(diff, *n);
        }
        self.zeros.extend(other.zeros);
        self.series.extend(other.series);
        self
    }

    fn into_report(self, n_max: u64, with_series: bool) -> ScanReport {
        let (max_difference, argmax) = self.best.unwrap_or((Count::zero(), 1));
        ScanReport {
            n_max,
            max_difference,
            argmax,
            zero_value_ns: self.zeros,
            series: with_series.then_some(self.series),
        }
    }
}

/// Runs `point` over `1..=n_max` in parallel chunks and merges in order.
fn scan_points<F>(n_max: u64, opts: &ScanOptions, point: F) -> Result<ScanReport>
where
    F: Fn(u64) -> (Count, bool) + Sync,
{
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    if opts.chunk == 0 || opts.series_stride == Some(0) {
        return Err(Error::InvalidArgument("chunk and stride must be >= 1".into()));
    }
    let chunks = n_max.div_ceil(opts.chunk);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let lo = 1 + i * opts.chunk;
            let hi = (lo + opts.chunk - 1).min(n_max);
            let mut part = Partial::default();
            for n in lo..=hi {
                let (diff, flagged) = point(n);
                if opts.series_stride.is_some_and(|s| (n - 1) % s == 0) {
                    part.series.push(SeriesPoint { n, diff: diff.clone() });
                }
                if flagged {
                    part.zeros.push(n);
                } else {
                    part.offer(&diff, n);
                }
            }
            part
        })
        .collect();
    let merged = partials.into_iter().fold(Partial::default(), Partial::absorb);
    Ok(merged.into_report(n_max, opts.series_stride.is_some()))
}

/// Maximum of `|d(A, F(n)) - d(A, G(n))|` for `n = 1..=n_max`.
pub fn scan_difference(f: &IntPolynomial, g: &IntPolynomial, spec: &SetSpec, n_max: u64) -> Result<ScanReport> {
    scan_difference_with(f, g, spec, n_max, &ScanOptions::default())
}

pub fn scan_difference_with(
    f: &IntPolynomial,
    g: &IntPolynomial,
    spec: &SetSpec,
    n_max: u64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    spec.validate()?;
    let f_live = !f.is_zero();
    let g_live = !g.is_zero();
    scan_points(n_max, opts, |n| {
        let n = BigInt::from(n);
        let fv = f.eval(&n);
        let gv = g.eval(&n);
        let flagged = (f_live && fv.is_zero()) || (g_live && gv.is_zero());
        let diff = spec.divisor_count(&fv).abs_diff(&spec.divisor_count(&gv));
        (diff, flagged)
    })
}

/// Empirical check of a counterexample family against its proved bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub schema_version: u32,
    pub instance: Instance,
    pub family: CounterexampleFamily,
    #[serde(with = "crate::json::biguint")]
    pub bound: num_bigint::BigUint,
    pub scan: ScanReport,
    pub within_bound: bool,
}

/// Scans the instance's forms over the family's set and compares the
/// maximum with the proved bound.
pub fn verify_counterexample(inst: &Instance, fam: &CounterexampleFamily, n_max: u64) -> Result<CounterexampleReport> {
    let bound = proof_bound(fam, inst)?;
    let f = IntPolynomial::linear(&inst.b, &inst.c);
    let g = IntPolynomial::linear(&inst.e, &inst.f);
    let scan = scan_difference(&f, &g, &fam.set, n_max)?;
    let within_bound = scan.max_difference <= Count::Finite(bound.clone());
    Ok(CounterexampleReport {
        schema_version: SCHEMA_VERSION,
        instance: inst.clone(),
        family: fam.clone(),
        bound,
        scan,
        within_bound,
    })
}

/// `min` over pairs `i ≠ j` in `{1, 2, 3}` of `|d(A, n+i) - d(A, n+j)|`.
pub fn chen_gap(spec: &SetSpec, n: &BigInt) -> Count {
    let d: Vec<Count> = (1..=3).map(|i| spec.divisor_count(&(n + i))).collect();
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| d[i].abs_diff(&d[j]))
        .min()
        .expect("three pairs")
}

/// Maximum of [`chen_gap`] over `n = 1..=n_max`.
pub fn chen_scan(spec: &SetSpec, n_max: u64, opts: &ScanOptions) -> Result<ScanReport> {
    spec.validate()?;
    scan_points(n_max, opts, |n| (chen_gap(spec, &BigInt::from(n)), false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.iter().copied())
    }

    #[test]
    fn polynomial_basics() {
        let p = poly(&[1, 0, 1, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(10));
        assert!(poly(&[0, 0]).is_zero());
        assert_eq!(p.to_string(), "1 + 1n^2");
        assert_eq!(poly(&[]).to_string(), "0");
    }

    #[test]
    fn constant_against_odd_form() {
        let r = scan_difference(&poly(&[3]), &poly(&[5, 2]), &SetSpec::multiples(2u32).unwrap(), 1000).unwrap();
        assert!(r.max_difference <= Count::finite(3));
        assert!(r.zero_value_ns.is_empty());
    }

    #[test]
    fn identical_forms_have_zero_gap() {
        let f = poly(&[7, -3, 2]);
        for spec in [SetSpec::Primes, SetSpec::Factorials, SetSpec::powers(2u32).unwrap()] {
            let r = scan_difference(&f, &f, &spec, 100).unwrap();
            assert_eq!(r.max_difference, Count::zero());
            assert_eq!(r.argmax, 1);
        }
    }

    #[test]
    fn zeros_are_flagged_not_maximized() {
        // 2n - 6 vanishes at n = 3.
        let r = scan_difference(&poly(&[1]), &poly(&[-6, 2]), &SetSpec::Primes, 10).unwrap();
        assert_eq!(r.zero_value_ns, vec![3]);
        assert!(!r.max_difference.is_infinite());
    }

    #[test]
    fn identically_zero_form_is_counted() {
        let r = scan_difference(&poly(&[0]), &poly(&[1, 1]), &SetSpec::Primes, 10).unwrap();
        assert_eq!(r.max_difference, Count::Infinite);
        assert!(r.zero_value_ns.is_empty());
    }

    #[test]
    fn chunking_does_not_change_result() {
        let f = poly(&[1, 0, 1]);
        let g = poly(&[0, 0, 1]);
        let base = scan_difference_with(
            &f,
            &g,
            &SetSpec::Primes,
            500,
            &ScanOptions {
                series_stride: Some(7),
                chunk: 500,
            },
        )
        .unwrap();
        for chunk in [1, 3, 64, 1000] {
            let other = scan_difference_with(
                &f,
                &g,
                &SetSpec::Primes,
                500,
                &ScanOptions {
                    series_stride: Some(7),
                    chunk,
                },
            )
            .unwrap();
            assert_eq!(other, base, "chunk {chunk}");
        }
        assert_eq!(base.series.as_ref().unwrap().len(), 72);
    }

    #[test]
    fn counterexample_examples() {
        let i = Instance::new(0, 3, 2, 5);
        let fam = classify(&i).family().cloned().unwrap();
        let r = verify_counterexample(&i, &fam, 10_000).unwrap();
        assert!(r.within_bound);
        assert!(r.scan.max_difference <= Count::finite(3));

        let i = Instance::new(2, 2, 4, 4);
        let fam = classify(&i).family().cloned().unwrap();
        let r = verify_counterexample(&i, &fam, 10_000).unwrap();
        assert_eq!(r.scan.max_difference, Count::zero());

        let i = Instance::new(0, 0, 0, 0);
        let fam = classify(&i).family().cloned().unwrap();
        let r = verify_counterexample(&i, &fam, 100).unwrap();
        assert_eq!(r.scan.max_difference, Count::zero());

        assert!(matches!(
            verify_counterexample(&Instance::new(0, 3, 2, 7), &classify(&Instance::new(2, 2, 4, 4)).family().cloned().unwrap(), 10),
            Err(Error::FamilyMismatch(_))
        ));
    }

    #[test]
    fn chen_examples() {
        assert_eq!(chen_gap(&SetSpec::Primes, &BigInt::from(1)), Count::zero());
        assert_eq!(chen_gap(&SetSpec::powers(5u32).unwrap(), &BigInt::from(3)), Count::zero());
        for n in [1, 2, 3, 4, 97] {
            assert_eq!(chen_gap(&SetSpec::multiples(4u32).unwrap(), &BigInt::from(n)), Count::zero());
        }
        // 4, 5, 6 against the primes: counts 1, 1, 2.
        assert_eq!(chen_gap(&SetSpec::Primes, &BigInt::from(3)), Count::zero());
    }
}
