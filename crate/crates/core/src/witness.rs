//! Certificates for unbounded instances.
//!
//! Given an instance that [`classify`] marks unbounded, a set, and a target
//! gap `K`, [`make_witness`] produces an `n` with
//! `|d(A, bn+c) - d(A, en+f)| ≥ K`, plus the auxiliary values that explain
//! why. [`verify_certificate`] re-derives everything from the instance and
//! the set without trusting the construction.
//!
//! Constructions, written for the `Left` side (the `Right` side exchanges
//! the two forms):
//!
//! - Cases I and II: one form is identically zero, so its count is infinite.
//! - Case III (`b = 0`, `e | f`, `h = f/e`): with `t = K + |c|` and `P_t` the
//!   product of the first `t` elements, `n ≡ -h (mod P_t)` makes
//!   `en + f = e(n + h)` a multiple of `P_t`, while `d(A, c) ≤ |c|`.
//! - Case IV (`b | c`, `h = c/b`, `D = f - eh ≠ 0`): with
//!   `ℓ = gcd(|e|·P_t, |D|)`, a prime `p > max(|D|/ℓ, ℓ)` in the class
//!   `±D/ℓ (mod |e|·P_t/ℓ)` gives `q = (ℓp ∓ D)/(|e|·P_t)` and
//!   `n = P_t·q - h`, so `bn + c = b·P_t·q` and `en + f = ±ℓp`. The second
//!   count is at most `2τ(ℓ) ≤ 2τ(|D|)`, so `t = K + 2τ(|D|)` suffices.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    abs, attest_prime, divides, factorize, find_prime_in_ap, min_positive_solution, prefix_product, tau,
    Attestation, PrimalityConfig, SearchCaps,
};
use crate::classify::{classify, Case, CaseLabel, Instance, Side};
use crate::error::{Error, Result};
use crate::json::SCHEMA_VERSION;
use crate::sets::{Count, SetSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRequest {
    pub instance: Instance,
    pub setspec: SetSpec,
    pub target: u64,
    pub caps: SearchCaps,
    pub primality: PrimalityConfig,
}

impl WitnessRequest {
    pub fn new(instance: Instance, setspec: SetSpec, target: u64) -> Self {
        Self {
            instance,
            setspec,
            target,
            caps: SearchCaps::default(),
            primality: PrimalityConfig::default(),
        }
    }
}

/// `p ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    #[serde(with = "crate::json::bigint")]
    pub residue: BigInt,
    #[serde(with = "crate::json::biguint")]
    pub modulus: BigUint,
}

/// Intermediate values of a construction. Fields not used by a case are `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessAux {
    /// Prefix length `t`.
    pub t: Option<usize>,
    /// `P_t = a_1 ⋯ a_t`.
    #[serde(with = "crate::json::opt_biguint")]
    pub p_t: Option<BigUint>,
    /// Constant over coefficient of the form made divisible by `P_t`.
    #[serde(with = "crate::json::opt_bigint")]
    pub h: Option<BigInt>,
    /// Value of the other form at `n = -h`.
    #[serde(with = "crate::json::opt_bigint")]
    pub d: Option<BigInt>,
    #[serde(with = "crate::json::opt_biguint")]
    pub ell: Option<BigUint>,
    #[serde(with = "crate::json::opt_biguint")]
    pub p: Option<BigUint>,
    #[serde(with = "crate::json::opt_biguint")]
    pub q: Option<BigUint>,
    pub congruence: Option<Congruence>,
    pub primality_attestation: Option<Attestation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub schema_version: u32,
    pub instance: Instance,
    pub case: CaseLabel,
    #[serde(with = "crate::json::biguint")]
    pub n: BigUint,
    #[serde(with = "crate::json::bigint")]
    pub lhs_value: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub rhs_value: BigInt,
    pub lhs_count: Count,
    pub rhs_count: Count,
    pub difference: Count,
    pub target: u64,
    pub aux: WitnessAux,
}

/// The form forced to be highly divisible and the form kept small.
struct Roles<'a> {
    large: (&'a BigInt, &'a BigInt),
    small: (&'a BigInt, &'a BigInt),
}

/// Whether `bn + c` is the form driven to a large (or infinite) count.
fn large_is_left(label: CaseLabel) -> bool {
    // Case III's Left disjunct has b = 0, so there the e-form is the large one.
    match label.case {
        Case::III => label.side == Side::Right,
        _ => label.side == Side::Left,
    }
}

fn roles(inst: &Instance, label: CaseLabel) -> Roles<'_> {
    let left = (&inst.b, &inst.c);
    let right = (&inst.e, &inst.f);
    if large_is_left(label) {
        Roles { large: left, small: right }
    } else {
        Roles { large: right, small: left }
    }
}

/// `d(A, m)` for an infinite `A`: explicit lists stand for prefixes of
/// infinite sets, so `m = 0` counts as infinite for them too.
fn count(spec: &SetSpec, m: &BigInt, cfg: &PrimalityConfig) -> Count {
    if m.is_zero() {
        Count::Infinite
    } else {
        spec.divisor_count_with(m, cfg)
    }
}

fn to_signed(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

fn assemble(
    req_instance: &Instance,
    setspec: &SetSpec,
    label: CaseLabel,
    n: BigUint,
    target: u64,
    aux: WitnessAux,
    cfg: &PrimalityConfig,
) -> WitnessCertificate {
    let n_signed = to_signed(&n);
    let lhs_value = req_instance.lhs(&n_signed);
    let rhs_value = req_instance.rhs(&n_signed);
    let lhs_count = count(setspec, &lhs_value, cfg);
    let rhs_count = count(setspec, &rhs_value, cfg);
    let difference = lhs_count.abs_diff(&rhs_count);
    WitnessCertificate {
        schema_version: SCHEMA_VERSION,
        instance: req_instance.clone(),
        case: label,
        n,
        lhs_value,
        rhs_value,
        lhs_count,
        rhs_count,
        difference,
        target,
        aux,
    }
}

/// Builds a certificate for an unbounded instance.
pub fn make_witness(req: &WitnessRequest) -> Result<WitnessCertificate> {
    if req.target == 0 {
        return Err(Error::InvalidArgument("target must be >= 1".into()));
    }
    req.setspec.validate()?;
    req.primality.validate()?;
    let label = classify(&req.instance)
        .case_label()
        .ok_or_else(|| Error::NotUnboundedInstance(req.instance.to_string()))?;
    let cert = match label.case {
        Case::I | Case::II => degenerate_witness(req, label),
        Case::III => witness_case_iii(&req.instance, label, req.target, &req.setspec, &req.primality)?,
        Case::IV => witness_case_iv(req, label)?,
    };
    debug_assert!(verify_certificate_with(&cert, &req.setspec, &req.primality).is_ok());
    Ok(cert)
}

fn degenerate_witness(req: &WitnessRequest, label: CaseLabel) -> WitnessCertificate {
    // The identically-zero form sits on the labelled side.
    let live = match label.side {
        Side::Left => (&req.instance.e, &req.instance.f),
        Side::Right => (&req.instance.b, &req.instance.c),
    };
    let mut n = BigUint::one();
    while (live.0 * to_signed(&n) + live.1).is_zero() {
        n += 1u32;
    }
    assemble(
        &req.instance,
        &req.setspec,
        label,
        n,
        req.target,
        WitnessAux::default(),
        &req.primality,
    )
}

/// Case III: one form is a nonzero constant `c`, the other `a·n + k` with `a | k`.
pub fn witness_case_iii(
    inst: &Instance,
    label: CaseLabel,
    target: u64,
    setspec: &SetSpec,
    cfg: &PrimalityConfig,
) -> Result<WitnessCertificate> {
    if label.case != Case::III {
        return Err(Error::InvalidArgument(format!("case III construction asked for {label}")));
    }
    let Roles { large, small } = roles(inst, label);
    let (a, k) = large;
    let constant = small.1;
    debug_assert!(small.0.is_zero() && !constant.is_zero() && divides(a, k));

    let h = k / a;
    let t = (BigUint::from(target) + abs(constant))
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("prefix length overflows".into()))?;
    let prefix = setspec.prefix(t)?;
    let p_t = prefix_product(&prefix);
    let p_t_signed = to_signed(&p_t);
    let mut n = min_positive_solution(&-&h, &p_t_signed)?;
    // n = -h would make the large form vanish; any n in the class works.
    if (to_signed(&n) + &h).is_zero() {
        n += &p_t;
    }
    let aux = WitnessAux {
        t: Some(t),
        p_t: Some(p_t.clone()),
        h: Some(h.clone()),
        congruence: Some(Congruence {
            residue: -h,
            modulus: p_t,
        }),
        ..WitnessAux::default()
    };
    Ok(assemble(inst, setspec, label, n, target, aux, cfg))
}

/// Least `t` with `P_t > bound`, reading elements lazily.
fn prefix_exceeding(setspec: &SetSpec, bound: &BigUint) -> Result<usize> {
    let mut product = BigUint::one();
    for (i, a) in setspec.iter().enumerate() {
        product *= a;
        if &product > bound {
            return Ok(i + 1);
        }
    }
    let available = setspec.iter().count();
    Err(Error::PrefixTooShort {
        needed: available + 1,
        available,
    })
}

/// Case IV: `be ≠ 0`, `bf ≠ ec`, and the large form's coefficient divides its constant.
pub fn witness_case_iv(req: &WitnessRequest, label: CaseLabel) -> Result<WitnessCertificate> {
    if label.case != Case::IV {
        return Err(Error::InvalidArgument(format!("case IV construction asked for {label}")));
    }
    let Roles { large, small } = roles(&req.instance, label);
    let (a, k) = large;
    let (s, r) = small;
    debug_assert!(!a.is_zero() && !s.is_zero() && divides(a, k));

    let h = k / a;
    let d = r - s * &h;
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("{} has proportional forms", req.instance)));
    }
    let abs_d = abs(&d);
    let tau_d = tau(&factorize(&abs_d, &req.primality));
    let margin = (BigUint::from(req.target) + tau_d * 2u32)
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("prefix length overflows".into()))?;
    let t = margin.max(prefix_exceeding(&req.setspec, &abs(&h))?);
    let prefix = req.setspec.prefix(t)?;
    let p_t = prefix_product(&prefix);

    let scaled = abs(s) * &p_t;
    let ell = scaled.gcd(&abs_d);
    let sign = if s.is_negative() { -BigInt::one() } else { BigInt::one() };
    let residue = &sign * &d / to_signed(&ell);
    let modulus = &scaled / &ell;
    let lower = (&abs_d / &ell).max(ell.clone());
    let hit = find_prime_in_ap(&residue, &modulus, &lower, &req.caps, &req.primality)?;

    let numerator = to_signed(&ell) * to_signed(&hit.prime) - &sign * &d;
    let (q, rem) = numerator.div_rem(&to_signed(&scaled));
    debug_assert!(rem.is_zero() && q.is_positive());
    let q = q.into_parts().1;
    let n = (to_signed(&(&p_t * &q)) - &h).into_parts().1;

    let aux = WitnessAux {
        t: Some(t),
        p_t: Some(p_t),
        h: Some(h),
        d: Some(d),
        ell: Some(ell),
        p: Some(hit.prime),
        q: Some(q),
        congruence: Some(Congruence { residue, modulus }),
        primality_attestation: Some(hit.attestation),
    };
    Ok(assemble(
        &req.instance,
        &req.setspec,
        label,
        n,
        req.target,
        aux,
        &req.primality,
    ))
}

/// Prime `ℓ_k ≡ -1 (mod a_1 ⋯ a_k)` and the certificate for `(1, 1, 1, 0)` at
/// `n = ℓ_k`: `d(A, ℓ_k + 1) ≥ k` while `d(A, ℓ_k) ≤ 2`, so the gap is at
/// least `k - 2`, which is recorded as the target.
pub fn sarkozy_witness(
    setspec: &SetSpec,
    k: usize,
    caps: &SearchCaps,
    cfg: &PrimalityConfig,
) -> Result<WitnessCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    setspec.validate()?;
    let prefix = setspec.prefix(k)?;
    let p_k = prefix_product(&prefix);
    let residue = -BigInt::one();
    let hit = find_prime_in_ap(&residue, &p_k, &BigUint::one(), caps, cfg)?;
    let q = (&hit.prime + 1u32) / &p_k;
    let instance = Instance::new(1, 1, 1, 0);
    let aux = WitnessAux {
        t: Some(k),
        p_t: Some(p_k.clone()),
        h: Some(BigInt::one()),
        d: Some(-BigInt::one()),
        ell: Some(BigUint::one()),
        p: Some(hit.prime.clone()),
        q: Some(q),
        congruence: Some(Congruence { residue, modulus: p_k }),
        primality_attestation: Some(hit.attestation),
    };
    Ok(assemble(
        &instance,
        setspec,
        CaseLabel::new(Case::IV, Side::Left),
        hit.prime,
        (k as u64).saturating_sub(2),
        aux,
        cfg,
    ))
}

/// A reason a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateFault {
    WrongClassification { expected: Option<CaseLabel> },
    NonPositiveN,
    ValueMismatch { side: Side },
    CountMismatch { side: Side, recomputed: Count },
    DifferenceMismatch,
    BelowTarget,
    MissingAux(&'static str),
    /// An identity of the construction fails; the string names it.
    Identity(&'static str),
    PrefixUnavailable(Error),
    NotPrime,
}

impl fmt::Display for CertificateFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateFault::WrongClassification { expected: Some(l) } => {
                write!(f, "instance classifies as {l}, not the certified case")
            }
            CertificateFault::WrongClassification { expected: None } => {
                f.write_str("instance is not unbounded for every infinite set")
            }
            CertificateFault::NonPositiveN => f.write_str("n must be positive"),
            CertificateFault::ValueMismatch { side } => write!(f, "{side:?} form value does not match n"),
            CertificateFault::CountMismatch { side, recomputed } => {
                write!(f, "{side:?} count differs from recomputed value {recomputed}")
            }
            CertificateFault::DifferenceMismatch => f.write_str("difference is not |lhs_count - rhs_count|"),
            CertificateFault::BelowTarget => f.write_str("difference is below the target"),
            CertificateFault::MissingAux(name) => write!(f, "auxiliary value `{name}` missing"),
            CertificateFault::Identity(what) => write!(f, "identity fails: {what}"),
            CertificateFault::PrefixUnavailable(e) => write!(f, "cannot rebuild prefix: {e}"),
            CertificateFault::NotPrime => f.write_str("p is not prime"),
        }
    }
}

/// Outcome of [`verify_certificate`]; empty `faults` means accepted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub faults: Vec<CertificateFault>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.faults.is_empty()
    }
}

/// Re-checks a certificate against `setspec` with the default primality settings.
pub fn verify_certificate(cert: &WitnessCertificate, setspec: &SetSpec) -> VerifyReport {
    verify_certificate_with(cert, setspec, &PrimalityConfig::default())
}

pub fn verify_certificate_with(cert: &WitnessCertificate, setspec: &SetSpec, cfg: &PrimalityConfig) -> VerifyReport {
    let mut faults = Vec::new();
    let inst = &cert.instance;

    let expected = classify(inst).case_label();
    if expected != Some(cert.case) {
        faults.push(CertificateFault::WrongClassification { expected });
    }
    if cert.n.is_zero() {
        faults.push(CertificateFault::NonPositiveN);
    }
    let n = to_signed(&cert.n);
    let lhs_value = inst.lhs(&n);
    let rhs_value = inst.rhs(&n);
    if lhs_value != cert.lhs_value {
        faults.push(CertificateFault::ValueMismatch { side: Side::Left });
    }
    if rhs_value != cert.rhs_value {
        faults.push(CertificateFault::ValueMismatch { side: Side::Right });
    }
    let lhs_count = count(setspec, &lhs_value, cfg);
    let rhs_count = count(setspec, &rhs_value, cfg);
    if lhs_count != cert.lhs_count {
        faults.push(CertificateFault::CountMismatch {
            side: Side::Left,
            recomputed: lhs_count.clone(),
        });
    }
    if rhs_count != cert.rhs_count {
        faults.push(CertificateFault::CountMismatch {
            side: Side::Right,
            recomputed: rhs_count.clone(),
        });
    }
    let difference = lhs_count.abs_diff(&rhs_count);
    if difference != cert.difference {
        faults.push(CertificateFault::DifferenceMismatch);
    }
    if !difference.at_least(&BigUint::from(cert.target)) {
        faults.push(CertificateFault::BelowTarget);
    }

    if faults.is_empty() {
        let (large_value, small_value, large_count, small_count) = if large_is_left(cert.case) {
            (&lhs_value, &rhs_value, &lhs_count, &rhs_count)
        } else {
            (&rhs_value, &lhs_value, &rhs_count, &lhs_count)
        };
        let ctx = CaseContext {
            cert,
            setspec,
            cfg,
            large_value,
            small_value,
            large_count,
            small_count,
        };
        match cert.case.case {
            Case::I | Case::II => {
                if !large_value.is_zero() || small_value.is_zero() {
                    faults.push(CertificateFault::Identity("one form vanishes and the other does not"));
                }
            }
            Case::III => check_case_iii(&ctx, &mut faults),
            Case::IV => check_case_iv(&ctx, &mut faults),
        }
    }
    VerifyReport { faults }
}

struct CaseContext<'a> {
    cert: &'a WitnessCertificate,
    setspec: &'a SetSpec,
    cfg: &'a PrimalityConfig,
    large_value: &'a BigInt,
    small_value: &'a BigInt,
    large_count: &'a Count,
    small_count: &'a Count,
}

macro_rules! need {
    ($aux:expr, $field:ident, $faults:expr) => {
        match &$aux.$field {
            Some(v) => v,
            None => {
                $faults.push(CertificateFault::MissingAux(stringify!($field)));
                return;
            }
        }
    };
}

/// Checks `P_t` against the set and that `P_t` divides the large form.
fn check_prefix(ctx: &CaseContext<'_>, t: usize, p_t: &BigUint, faults: &mut Vec<CertificateFault>) -> bool {
    match ctx.setspec.prefix(t) {
        Ok(prefix) if &prefix_product(&prefix) == p_t => {}
        Ok(_) => {
            faults.push(CertificateFault::Identity("P_t is the product of the first t elements"));
            return false;
        }
        Err(e) => {
            faults.push(CertificateFault::PrefixUnavailable(e));
            return false;
        }
    }
    if !divides(&to_signed(p_t), ctx.large_value) || ctx.large_value.is_zero() {
        faults.push(CertificateFault::Identity("P_t divides the large form, which is nonzero"));
        return false;
    }
    if !ctx.large_count.at_least(&BigUint::from(t)) {
        faults.push(CertificateFault::Identity("large count is at least t"));
        return false;
    }
    true
}

fn check_case_iii(ctx: &CaseContext<'_>, faults: &mut Vec<CertificateFault>) {
    let aux = &ctx.cert.aux;
    let t = *need!(aux, t, faults);
    let p_t = need!(aux, p_t, faults);
    let h = need!(aux, h, faults);
    let Roles { large, small } = roles(&ctx.cert.instance, ctx.cert.case);
    if large.0 * h != *large.1 {
        faults.push(CertificateFault::Identity("h is the quotient of the large form's constant by its coefficient"));
        return;
    }
    if !check_prefix(ctx, t, p_t, faults) {
        return;
    }
    if !(to_signed(&ctx.cert.n) + h).is_multiple_of(&to_signed(p_t)) {
        faults.push(CertificateFault::Identity("n ≡ -h (mod P_t)"));
    }
    if ctx.small_count > &Count::Finite(abs(small.1)) {
        faults.push(CertificateFault::Identity("constant form count is at most |c|"));
    }
}

fn check_case_iv(ctx: &CaseContext<'_>, faults: &mut Vec<CertificateFault>) {
    let aux = &ctx.cert.aux;
    let t = *need!(aux, t, faults);
    let p_t = need!(aux, p_t, faults);
    let h = need!(aux, h, faults);
    let d = need!(aux, d, faults);
    let ell = need!(aux, ell, faults);
    let p = need!(aux, p, faults);
    let q = need!(aux, q, faults);
    let congruence = need!(aux, congruence, faults);

    let Roles { large, small } = roles(&ctx.cert.instance, ctx.cert.case);
    let (a, k) = large;
    let (s, r) = small;
    let mut fail = |what| faults.push(CertificateFault::Identity(what));

    if a * h != *k {
        fail("h is the quotient of the large form's constant by its coefficient");
    }
    if *d != r - s * h || d.is_zero() {
        fail("D is the small form at n = -h, and nonzero");
    }
    let scaled = abs(s) * p_t;
    let abs_d = abs(d);
    if ell.is_zero() || *ell != scaled.gcd(&abs_d) {
        fail("ℓ = gcd(|e|·P_t, |D|)");
        return;
    }
    if !(&scaled / ell).gcd(&(&abs_d / ell)).is_one() {
        fail("|e|·P_t/ℓ and |D|/ℓ are coprime");
    }
    let sign = if s.is_negative() { -BigInt::one() } else { BigInt::one() };
    let ell_p = to_signed(ell) * to_signed(p);
    if &sign * &ell_p - d != s * to_signed(p_t) * to_signed(q) {
        fail("±ℓp - D = e·P_t·q");
    }
    if q.is_zero() {
        fail("q ≥ 1");
    }
    if to_signed(&ctx.cert.n) != to_signed(&(p_t * q)) - h {
        fail("n = P_t·q - h");
    }
    if *ctx.small_value != &sign * &ell_p {
        fail("small form equals ±ℓp");
    }
    if *p <= (&abs_d / ell).max(ell.clone()) {
        fail("p > max(|D|/ℓ, ℓ)");
    }
    if congruence.modulus.is_zero()
        || !(to_signed(p) - &congruence.residue).is_multiple_of(&to_signed(&congruence.modulus))
    {
        fail("p lies in the recorded residue class");
    }
    match ctx.small_count {
        Count::Finite(v) if *v <= ell * 2u32 => {
            let divisors_of_ell = tau(&factorize(ell, ctx.cfg));
            if *v > divisors_of_ell * 2u32 {
                fail("small count is at most 2τ(ℓ)");
            }
        }
        _ => fail("small count is at most 2ℓ"),
    }
    if attest_prime(p, ctx.cfg).is_none() {
        faults.push(CertificateFault::NotPrime);
    }
    check_prefix(ctx, t, p_t, faults);
}
