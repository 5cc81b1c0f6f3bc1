//! Exact verification and discovery of congruences for partial sums of
//! constant-term sequences modulo primes and prime powers.
//!
//! The library is organised bottom-up:
//!
//! - [`numeric`]: symmetric residues, prime enumeration, exact and p-adic
//!   binomial/multinomial arithmetic.
//! - [`laurent`]: sparse multivariate Laurent polynomials over the integers.
//! - [`series`]: box-truncated multivariate power series and rational
//!   constant-term extraction.
//! - [`sequences`]: the registry of built-in constant-term sequence families
//!   and their exact partial-sum oracles.
//! - [`parser`]: text syntax for Laurent polynomials.
//! - [`engine`]: the prime-power reduction that collapses a partial sum of
//!   constant terms to a single rational coefficient extraction mod p, plus
//!   closed-form prediction tables and super-congruence checks.
//! - [`discover`]: residue-pattern classification and super-congruence level
//!   scanning over prime windows.
//! - [`oeis`]: offline-first sequence identification.
//! - [`report`], [`cli`]: machine-readable reports and the command-line tool.
//! - [`selftest`]: the fixed acceptance suite shared by `ctcong selftest`
//!   and the integration tests.

pub mod cli;
pub mod discover;
pub mod engine;
pub mod laurent;
pub mod numeric;
pub mod oeis;
pub mod parser;
pub mod report;
pub mod selftest;
pub mod sequences;
pub mod series;
