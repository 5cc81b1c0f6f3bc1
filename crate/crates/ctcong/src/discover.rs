//! Conjecture mining: scan a window of primes, detect how the partial-sum
//! residue depends on the residue class of p, fit each class against small
//! constants and closed-form families, and measure how far the congruence
//! persists at prime powers (mod p, p², p³).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{ClosedFormFamily, EngineError};
use crate::numeric::{is_prime, primes_in, sym_mod, sym_mod_big};
use crate::sequences::SequenceSpec;

/// Moduli tried, in order, when searching for the classifier m*.
pub const DEFAULT_CANDIDATE_MODULI: [u64; 7] = [1, 3, 4, 5, 6, 8, 12];

/// Largest constant magnitude tried before falling back to families.
pub const MAX_CONSTANT: i64 = 64;

/// Failures of the discovery scan.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscoverError {
    #[error("pattern detection needs at least 6 primes, got {got}")]
    TooFewPrimes { got: usize },
    #[error("prime {p} is below this sequence's minimum {min}")]
    PrimeBelowMin { p: u64, min: u64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One scanned prime: the boxed partial sum reduced at p, p², and p³
/// (symmetric representatives).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub p: u64,
    pub mod_p: i64,
    pub mod_p2: i64,
    pub mod_p3: i64,
}

/// The value assigned to one residue class of p: a small constant or a
/// (possibly negated) closed-form family evaluated at the scan's exact
/// index multipliers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseValue {
    Constant(i64),
    Family {
        negated: bool,
        family: ClosedFormFamily,
    },
}

impl CaseValue {
    /// The exact integer this case claims the partial sum is congruent to.
    pub fn exact(&self) -> BigInt {
        match self {
            CaseValue::Constant(c) => BigInt::from(*c),
            CaseValue::Family { negated, family } => {
                let v = family.closed_form();
                if *negated {
                    -v
                } else {
                    v
                }
            }
        }
    }
}

impl std::fmt::Display for CaseValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseValue::Constant(c) => write!(f, "{c}"),
            CaseValue::Family { negated, family } => {
                if *negated {
                    write!(f, "-{family}")
                } else {
                    write!(f, "{family}")
                }
            }
        }
    }
}

/// A prime witnessing that the pattern does not lift to modulus p^level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub p: u64,
    pub level: u8,
    pub expected: i64,
    pub observed: i64,
}

/// A detected congruence pattern with its supporting scan data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceClaim {
    pub spec_id: String,
    pub r: Vec<u64>,
    /// The classifier modulus m*: the residue of p mod m* determines the case.
    pub modulus_class: u64,
    /// residue class of p mod m* → claimed value.
    pub cases: BTreeMap<u64, CaseValue>,
    /// Largest k ∈ {1,2,3} such that every scanned prime satisfies the
    /// claimed congruence at modulus p^k.
    pub super_level: u8,
    pub evidence: Vec<Evidence>,
    /// First failing prime for each level above `super_level`.
    pub counterexamples: Vec<Counterexample>,
}

/// Scan data for a sequence where no candidate modulus produced a
/// consistent case map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoPatternReport {
    pub spec_id: String,
    pub r: Vec<u64>,
    pub pattern: String,
    pub evidence: Vec<Evidence>,
}

/// The result of a discovery scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DiscoverOutcome {
    Claim(CongruenceClaim),
    NoPatternFound(NoPatternReport),
}

/// The default scan window: all admissible primes up to 100 for
/// single-index sequences, up to 50 otherwise (brute-force evidence costs
/// ∏ r_i·p terms per prime).
pub fn default_prime_window(spec: &SequenceSpec) -> Vec<u64> {
    let hi = if spec.arity() == 1 { 100 } else { 50 };
    primes_in(spec.min_prime(), hi)
}

fn validate(spec: &SequenceSpec, r: &[u64], primes: &[u64]) -> Result<Vec<u64>, DiscoverError> {
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() < 6 {
        return Err(DiscoverError::TooFewPrimes { got: primes.len() });
    }
    for &p in &primes {
        if !is_prime(p) {
            return Err(EngineError::NotPrime { p }.into());
        }
        if p < spec.min_prime() {
            return Err(DiscoverError::PrimeBelowMin {
                p,
                min: spec.min_prime(),
            });
        }
    }
    if r.len() != spec.arity() {
        return Err(EngineError::WrongArity {
            expected: spec.arity(),
            got: r.len(),
        }
        .into());
    }
    for &ri in r {
        if !(1..=8).contains(&ri) {
            return Err(EngineError::RTooLarge { r: ri }.into());
        }
    }
    Ok(primes)
}

/// Residues of the boxed partial sum at p, p², p³ for every prime, computed
/// in parallel (one exact sum at p³ per prime determines all three).
fn gather_evidence(spec: &SequenceSpec, r: &[u64], primes: &[u64]) -> Vec<Evidence> {
    primes
        .par_iter()
        .map(|&p| {
            let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
            let v3 = spec.partial_sum_exact(&bounds, p.pow(3)).value();
            Evidence {
                p,
                mod_p: sym_mod(v3, p).expect("prime modulus").value(),
                mod_p2: sym_mod(v3, p * p).expect("prime modulus").value(),
                mod_p3: v3,
            }
        })
        .collect()
}

/// Candidate families for the given index arity, in match order.
fn family_candidates(r: &[u64]) -> Vec<ClosedFormFamily> {
    match r.len() {
        1 => vec![
            ClosedFormFamily::Alpha { r: r[0] },
            ClosedFormFamily::Beta { r: r[0] },
            ClosedFormFamily::Gamma { r: r[0] },
            ClosedFormFamily::Delta { r: r[0] },
        ],
        2 => vec![
            ClosedFormFamily::Epsilon { r: r[0], s: r[1] },
            ClosedFormFamily::Kappa { rs: r.to_vec() },
        ],
        _ => vec![ClosedFormFamily::Kappa { rs: r.to_vec() }],
    }
}

/// The first candidate value congruent to every observation in the class:
/// constants 0, +1, −1, …, +64, −64 first, then each family positive before
/// negated.
fn fit_class(observations: &[(u64, i64)], r: &[u64]) -> Option<CaseValue> {
    for mag in 0..=MAX_CONSTANT {
        let signs: &[i64] = if mag == 0 { &[0] } else { &[mag, -mag] };
        for &c in signs {
            if observations
                .iter()
                .all(|&(p, o)| sym_mod(c, p).expect("prime modulus").value() == o)
            {
                return Some(CaseValue::Constant(c));
            }
        }
    }
    for family in family_candidates(r) {
        let value = family.closed_form();
        for negated in [false, true] {
            let signed = if negated { -value.clone() } else { value.clone() };
            if observations
                .iter()
                .all(|&(p, o)| sym_mod_big(&signed, p).expect("prime modulus").value() == o)
            {
                return Some(CaseValue::Family { negated, family });
            }
        }
    }
    None
}

/// The largest k such that every evidence prime satisfies its case's value
/// at modulus p^k, plus the first failing prime for each level above it.
fn measure_super_level(
    cases: &BTreeMap<u64, CaseValue>,
    modulus_class: u64,
    evidence: &[Evidence],
) -> (u8, Vec<Counterexample>) {
    let mut level = 1u8;
    let mut counterexamples = Vec::new();
    for k in [2u8, 3] {
        let mut first_fail = None;
        for ev in evidence {
            let value = cases[&(ev.p % modulus_class.max(1))].exact();
            let pk = ev.p.pow(u32::from(k));
            let expected = sym_mod_big(&value, pk).expect("prime power").value();
            let observed = if k == 2 { ev.mod_p2 } else { ev.mod_p3 };
            if expected != observed {
                first_fail = Some(Counterexample {
                    p: ev.p,
                    level: k,
                    expected,
                    observed,
                });
                break;
            }
        }
        match first_fail {
            None if level == k - 1 => level = k,
            None => {}
            Some(cx) => counterexamples.push(cx),
        }
    }
    (level, counterexamples)
}

/// Scan `primes` and fit the smallest candidate modulus m* such that the
/// observed mod-p residue is, for every scanned prime, congruent to a value
/// determined by p mod m* alone; then measure the pattern's super-level.
///
/// Requires at least 6 primes, all admissible for the sequence. Fitting is
/// deterministic: candidate moduli in the given order, constants before
/// families, positive sign before negative.
pub fn classify(
    spec: &SequenceSpec,
    r: &[u64],
    primes: &[u64],
    candidate_moduli: &[u64],
) -> Result<DiscoverOutcome, DiscoverError> {
    let primes = validate(spec, r, primes)?;
    let evidence = gather_evidence(spec, r, &primes);

    for &m in candidate_moduli {
        let m_eff = m.max(1);
        let mut classes: BTreeMap<u64, Vec<(u64, i64)>> = BTreeMap::new();
        for ev in &evidence {
            classes.entry(ev.p % m_eff).or_default().push((ev.p, ev.mod_p));
        }
        let mut cases = BTreeMap::new();
        let mut all_fit = true;
        for (&class, observations) in &classes {
            match fit_class(observations, r) {
                Some(value) => {
                    cases.insert(class, value);
                }
                None => {
                    all_fit = false;
                    break;
                }
            }
        }
        if !all_fit {
            continue;
        }
        let (super_level, counterexamples) = measure_super_level(&cases, m_eff, &evidence);
        return Ok(DiscoverOutcome::Claim(CongruenceClaim {
            spec_id: spec.id().to_owned(),
            r: r.to_vec(),
            modulus_class: m,
            cases,
            super_level,
            evidence,
            counterexamples,
        }));
    }

    Ok(DiscoverOutcome::NoPatternFound(NoPatternReport {
        spec_id: spec.id().to_owned(),
        r: r.to_vec(),
        pattern: "none".to_owned(),
        evidence,
    }))
}

/// The pattern's persistence level k ∈ {1,2,3} over the scanned primes,
/// with the counterexample primes for the levels that fail.
pub fn super_level(
    spec: &SequenceSpec,
    r: &[u64],
    primes: &[u64],
) -> Result<(u8, Vec<Counterexample>), DiscoverError> {
    match classify(spec, r, primes, &DEFAULT_CANDIDATE_MODULI)? {
        DiscoverOutcome::Claim(claim) => Ok((claim.super_level, claim.counterexamples)),
        DiscoverOutcome::NoPatternFound(report) => Err(EngineError::UnknownPattern {
            spec_id: report.spec_id,
        }
        .into()),
    }
}
