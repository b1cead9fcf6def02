use num_bigint::{BigInt, BigUint};
use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("residue {residue} is not coprime to modulus {modulus}")]
    NonCoprimeResidue { residue: BigInt, modulus: BigUint },

    #[error("prime search gave up after {steps} candidates")]
    SearchCapExceeded { steps: u64 },

    #[error("modulus has {bits} bits, cap is {max_bits}")]
    ModulusTooLarge { bits: u64, max_bits: u64 },

    #[error("set prefix too short: needed {needed} elements, {available} available")]
    PrefixTooShort { needed: usize, available: usize },

    #[error("instance {0} is not unbounded for every infinite set")]
    NotUnboundedInstance(String),

    #[error("counterexample family does not match the one assigned to {0}")]
    FamilyMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
