//! The set-spec mini language.
//!
//! ```text
//! multiples:<K>      K >= 1
//! powers:<R>         R >= 2
//! primes
//! factorials
//! list:<n1>,<n2>,... strictly increasing, positive
//! ```
//!
//! Rendering is `SetSpec`'s `Display`, which emits this grammar.

use divgap::SetSpec;
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid set spec at byte {position}: {reason}")]
pub struct InvalidSetSpec {
    pub position: usize,
    pub reason: String,
}

fn fail(position: usize, reason: impl Into<String>) -> InvalidSetSpec {
    InvalidSetSpec {
        position,
        reason: reason.into(),
    }
}

fn number(text: &str, at: usize) -> Result<BigUint, InvalidSetSpec> {
    if text.is_empty() {
        return Err(fail(at, "expected a number"));
    }
    if let Some(i) = text.find(|c: char| !c.is_ascii_digit()) {
        return Err(fail(at + i, format!("non-numeric character {:?}", text[i..].chars().next().unwrap())));
    }
    Ok(text.parse().expect("digits parse"))
}

pub fn parse_setspec(text: &str) -> Result<SetSpec, InvalidSetSpec> {
    let (name, arg) = match text.split_once(':') {
        Some((name, arg)) => (name, Some(arg)),
        None => (text, None),
    };
    let at = name.len() + 1;
    match (name, arg) {
        ("primes", None) => Ok(SetSpec::Primes),
        ("factorials", None) => Ok(SetSpec::Factorials),
        ("primes" | "factorials", Some(_)) => Err(fail(name.len(), format!("`{name}` takes no argument"))),
        ("multiples", Some(arg)) => {
            let k = number(arg, at)?;
            if k < BigUint::from(1u32) {
                return Err(fail(at, "K must be >= 1"));
            }
            Ok(SetSpec::Multiples { k })
        }
        ("powers", Some(arg)) => {
            let r = number(arg, at)?;
            if r < BigUint::from(2u32) {
                return Err(fail(at, "R must be >= 2"));
            }
            Ok(SetSpec::GeometricPowers { r })
        }
        ("list", Some(arg)) => {
            let mut elems: Vec<BigUint> = Vec::new();
            let mut pos = at;
            for item in arg.split(',') {
                let x = number(item, pos)?;
                if x == BigUint::from(0u32) {
                    return Err(fail(pos, "list elements must be positive"));
                }
                if elems.last().is_some_and(|last| *last >= x) {
                    return Err(fail(pos, "list must be strictly increasing"));
                }
                elems.push(x);
                pos += item.len() + 1;
            }
            Ok(SetSpec::ExplicitList { elems })
        }
        ("multiples" | "powers" | "list", None) => Err(fail(name.len(), format!("`{name}` needs `:` and an argument"))),
        _ => Err(fail(0, format!("unknown set kind `{name}`"))),
    }
}
