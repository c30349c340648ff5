//! Algorithmic checks for the asymptotic Fermat property of
//! `Cx² + qᵏy²ⁿ = zⁿ` (`C` squarefree, `q` an odd prime, `z` even).
//!
//! The crate follows the modular-method argument computationally: build the
//! Frey curve of a solution ([`frey`]), bound the exponent through trace
//! congruences ([`sieve`]), enumerate the curves `Y² = X(X² + AX + B)` that
//! survive every sieve ([`candidates`]) and reduce their existence to three
//! exponential equations ([`diophantine`]). [`pipeline`] routes a pair
//! `(C, q)` and a parity of `k` through the resulting conditions and runs the
//! survey over `C ≤ 70`, `q < 100`.
//!
//! ```
//! use aflt::pipeline::{check_pair, PairTask, Status};
//! use aflt::Parity;
//!
//! let verdict = check_pair(&PairTask::new(7, 17, Parity::Even)).unwrap();
//! assert_eq!(verdict.status, Status::SatisfiedWithinBox);
//! ```
//!
//! The guide under `book/` walks through each stage; its code listings are
//! compiled as doctests of this crate.

pub mod candidates;
pub mod curvedb;
pub mod diophantine;
pub mod ellcurve;
pub mod error;
pub mod frey;
pub mod intmath;
pub mod pipeline;
pub mod sieve;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Parity of an exponent. Only `k mod 2` matters to every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: u64) -> Parity {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn matches(self, n: u64) -> bool {
        Parity::of(n) == self
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "0" => Ok(Parity::Even),
            "odd" | "1" => Ok(Parity::Odd),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/obstruction-equations.md")]
    struct ObstructionEquations;
    #[doc = include_str!("../../../book/src/frey-curve.md")]
    struct FreyCurve;
    #[doc = include_str!("../../../book/src/sieves.md")]
    struct Sieves;
    #[doc = include_str!("../../../book/src/candidate-curves.md")]
    struct CandidateCurves;
    #[doc = include_str!("../../../book/src/mordell-curves.md")]
    struct MordellCurves;
    #[doc = include_str!("../../../book/src/curve-database.md")]
    struct CurveDatabase;
    #[doc = include_str!("../../../book/src/survey.md")]
    struct Survey;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
