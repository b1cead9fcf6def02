//! Decides, for a pair of linear forms `bn + c` and `en + f`, whether
//! `limsup |d(A, bn+c) - d(A, en+f)| = ∞` holds for every infinite `A ⊂ ℕ`.
//! Every negative answer carries a concrete set on which the difference
//! stays bounded, together with the bound.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{abs, divides, mod_small};
use crate::error::{Error, Result};
use crate::sets::{PrimeStream, SetSpec};

/// Attached to verdicts for `(0, c, 0, 0)` with `c ≠ 0`.
pub const CONSTANT_ZERO_NOTE: &str =
    "constant form against the zero form: d(A, 0) is infinite while d(A, c) <= |c|, so the gap is unbounded";

/// The two linear forms `bn + c` and `en + f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    #[serde(with = "crate::json::bigint")]
    pub b: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub c: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub e: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub f: BigInt,
}

impl Instance {
    pub fn new(b: impl Into<BigInt>, c: impl Into<BigInt>, e: impl Into<BigInt>, f: impl Into<BigInt>) -> Self {
        Self {
            b: b.into(),
            c: c.into(),
            e: e.into(),
            f: f.into(),
        }
    }

    /// `(e, f, b, c)`: the same question with the forms exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.e.clone(), self.f.clone(), self.b.clone(), self.c.clone())
    }

    /// `bn + c`
    pub fn lhs(&self, n: &BigInt) -> BigInt {
        &self.b * n + &self.c
    }

    /// `en + f`
    pub fn rhs(&self, n: &BigInt) -> BigInt {
        &self.e * n + &self.f
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.b, self.c, self.e, self.f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

/// Which disjunct of a case applies. `Left` is the disjunct stated in terms
/// of `b` and `c` being degenerate or divisible; `Right` mirrors it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn mirrored(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseLabel {
    pub case: Case,
    pub side: Side,
}

impl CaseLabel {
    pub fn new(case: Case, side: Side) -> Self {
        Self { case, side }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{:?}/{side}", self.case)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum FamilyKind {
    /// `b = c = e = f = 0`: both counts are infinite for every `n`.
    IdenticallyZeroDifference,
    /// `b = e = 0`, `c, f ≠ 0`: both counts are constants.
    BothConstantNonzero,
    /// `b = 0`, `e ∤ f`: no multiple of `|e|` divides `en + f`.
    MultiplesOfE {
        #[serde(with = "crate::json::biguint")]
        modulus: BigUint,
    },
    /// Mirror of [`FamilyKind::MultiplesOfE`] with the forms exchanged.
    MultiplesOfB {
        #[serde(with = "crate::json::biguint")]
        modulus: BigUint,
    },
    /// `bf = ec` with `g = c/b = f/e` integral; `p0` divides neither `b` nor `e`.
    PowersOfP0 {
        #[serde(with = "crate::json::biguint")]
        p0: BigUint,
        #[serde(with = "crate::json::bigint")]
        g: BigInt,
    },
    /// `b ∤ c` and `e ∤ f`; `b1 = |b|/gcd(b,c)`, `e1 = |e|/gcd(e,f)`.
    PowersOfB1E1 {
        #[serde(with = "crate::json::biguint")]
        b1: BigUint,
        #[serde(with = "crate::json::biguint")]
        e1: BigUint,
    },
}

/// A set on which the count difference provably stays bounded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CounterexampleFamily {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub set: SetSpec,
    #[serde(with = "crate::json::biguint")]
    pub bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictKind {
    UnboundedForAll { case: CaseLabel },
    NotForAll { family: CounterexampleFamily },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub kind: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn unbounded(case: Case, side: Side) -> Self {
        Self {
            kind: VerdictKind::UnboundedForAll {
                case: CaseLabel::new(case, side),
            },
            note: None,
        }
    }

    fn bounded(kind: FamilyKind, set: SetSpec, bound: BigUint) -> Self {
        Self {
            kind: VerdictKind::NotForAll {
                family: CounterexampleFamily { kind, set, bound },
            },
            note: None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, VerdictKind::UnboundedForAll { .. })
    }

    pub fn case_label(&self) -> Option<CaseLabel> {
        match &self.kind {
            VerdictKind::UnboundedForAll { case } => Some(*case),
            VerdictKind::NotForAll { .. } => None,
        }
    }

    pub fn family(&self) -> Option<&CounterexampleFamily> {
        match &self.kind {
            VerdictKind::UnboundedForAll { .. } => None,
            VerdictKind::NotForAll { family } => Some(family),
        }
    }
}

/// Classifies an instance.
///
/// Unbounded for every infinite `A` exactly when
/// * `b = e = 0` and exactly one of `c`, `f` is zero (case I),
/// * one of `b`, `e` is zero, the other not, and the constant of the
///   degenerate form is zero (case II) or the other form is a multiple of
///   its leading coefficient (case III),
/// * `be ≠ 0`, `bf ≠ ec` and `b | c` or `e | f` (case IV, `Left` on ties).
///
/// The tuples `(0, c, 0, 0)`, `c ≠ 0`, fall under case I on the `Right` side
/// and carry [`CONSTANT_ZERO_NOTE`].
pub fn classify(inst: &Instance) -> Verdict {
    let Instance { b, c, e, f } = inst;
    match (b.is_zero(), e.is_zero()) {
        (true, true) => match (c.is_zero(), f.is_zero()) {
            (true, true) => Verdict::bounded(FamilyKind::IdenticallyZeroDifference, SetSpec::Primes, BigUint::ZERO),
            (true, false) => Verdict::unbounded(Case::I, Side::Left),
            (false, true) => Verdict {
                note: Some(CONSTANT_ZERO_NOTE.to_string()),
                ..Verdict::unbounded(Case::I, Side::Right)
            },
            (false, false) => Verdict::bounded(FamilyKind::BothConstantNonzero, SetSpec::Primes, abs(c) + abs(f)),
        },
        (true, false) => {
            if c.is_zero() {
                Verdict::unbounded(Case::II, Side::Left)
            } else if divides(e, f) {
                Verdict::unbounded(Case::III, Side::Left)
            } else {
                let modulus = abs(e);
                Verdict::bounded(
                    FamilyKind::MultiplesOfE { modulus: modulus.clone() },
                    SetSpec::Multiples { k: modulus },
                    abs(c),
                )
            }
        }
        (false, true) => {
            if f.is_zero() {
                Verdict::unbounded(Case::II, Side::Right)
            } else if divides(b, c) {
                Verdict::unbounded(Case::III, Side::Right)
            } else {
                let modulus = abs(b);
                Verdict::bounded(
                    FamilyKind::MultiplesOfB { modulus: modulus.clone() },
                    SetSpec::Multiples { k: modulus },
                    abs(f),
                )
            }
        }
        (false, false) => {
            let b_divides_c = divides(b, c);
            let e_divides_f = divides(e, f);
            let proportional = b * f == e * c;
            if !proportional && (b_divides_c || e_divides_f) {
                let side = if b_divides_c { Side::Left } else { Side::Right };
                Verdict::unbounded(Case::IV, side)
            } else if !b_divides_c && !e_divides_f {
                powers_of_b1e1(b, c, e, f)
            } else {
                let g = if b_divides_c { c / b } else { f / e };
                let p0 = least_prime_dividing_neither(b, e);
                Verdict::bounded(
                    FamilyKind::PowersOfP0 { p0: p0.clone(), g },
                    SetSpec::GeometricPowers { r: p0 },
                    BigUint::ZERO,
                )
            }
        }
    }
}

fn powers_of_b1e1(b: &BigInt, c: &BigInt, e: &BigInt, f: &BigInt) -> Verdict {
    let x = abs(b).gcd(&abs(c));
    let y = abs(e).gcd(&abs(f));
    let b1 = abs(b) / &x;
    let e1 = abs(e) / &y;
    let bound = BigUint::from(floor_log(&b1, &x) + floor_log(&e1, &y));
    Verdict::bounded(
        FamilyKind::PowersOfB1E1 {
            b1: b1.clone(),
            e1: e1.clone(),
        },
        SetSpec::GeometricPowers { r: b1 * e1 },
        bound,
    )
}

/// Largest `k` with `base^k ≤ x`, for `base ≥ 2`, `x ≥ 1`.
fn floor_log(base: &BigUint, x: &BigUint) -> u64 {
    let mut k = 0;
    let mut power = base.clone();
    while &power <= x {
        k += 1;
        power *= base;
    }
    k
}

fn least_prime_dividing_neither(b: &BigInt, e: &BigInt) -> BigUint {
    PrimeStream::new()
        .find(|&p| {
            let p = p as u32;
            mod_small(b.magnitude(), p) != 0 && mod_small(e.magnitude(), p) != 0
        })
        .map(BigUint::from)
        .expect("finitely many primes divide a nonzero product")
}

/// The boundedness constant proved for `fam` on `inst`.
pub fn proof_bound(fam: &CounterexampleFamily, inst: &Instance) -> Result<BigUint> {
    match classify(inst).kind {
        VerdictKind::NotForAll { family } if &family == fam => Ok(family.bound),
        _ => Err(Error::FamilyMismatch(inst.to_string())),
    }
}
