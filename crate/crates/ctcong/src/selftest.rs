//! The built-in acceptance suite: eleven fixed criteria covering the
//! proposition grids, the closed-form value tables, super-congruence lifts
//! and non-lifts, the algebraic identities the reduction rests on, oracle
//! route equivalence, the parser, and the bundled OEIS fixtures.
//!
//! Each criterion reports pass/fail plus a human-readable detail line;
//! failures carry the exact offending cells.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::discover::{classify, DEFAULT_CANDIDATE_MODULI};
use crate::engine::{fast_partial_sum, predicted_residue, ClosedFormFamily};
use crate::laurent::{ExponentVector, LaurentPoly, Var};
use crate::numeric::{binomial_mod_pk, primes_in, sym_mod_big, PrimePower};
use crate::oeis::{lookup, OeisMode};
use crate::parser::{parse_poly, render_poly, ParseError};
use crate::sequences::{find_spec, for_each_index, SequenceSpec};
use crate::series::{diagonal, invert_unit, DegreeBox};

/// The outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn outcome(index: usize, name: &str, pass: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome {
        index,
        name: name.to_owned(),
        pass,
        detail,
    }
}

/// Wrap a criterion body with a wall-clock budget: exceeding it fails the
/// criterion even if every check passed.
fn with_budget(
    index: usize,
    name: &str,
    budget: Duration,
    body: impl FnOnce() -> (bool, String),
) -> CriterionOutcome {
    let start = Instant::now();
    let (pass, detail) = body();
    let elapsed = start.elapsed();
    if elapsed > budget {
        return outcome(
            index,
            name,
            false,
            format!(
                "{detail}; exceeded the {}s budget (took {:.1}s)",
                budget.as_secs(),
                elapsed.as_secs_f64()
            ),
        );
    }
    outcome(index, name, pass, detail)
}

fn spec(id: &str) -> SequenceSpec {
    find_spec(id).expect("known sequence id")
}

fn fmt_r(r: &[u64]) -> String {
    r.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn summarize(total: usize, failures: Vec<String>, note_on_fail: &str) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{total} cells verified"))
    } else {
        let shown: Vec<&String> = failures.iter().take(4).collect();
        let more = failures.len().saturating_sub(shown.len());
        let mut detail = format!(
            "{} of {total} cells failed: {}",
            failures.len(),
            shown
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        );
        if more > 0 {
            detail.push_str(&format!("; … and {more} more"));
        }
        if !note_on_fail.is_empty() {
            detail.push_str(" — ");
            detail.push_str(note_on_fail);
        }
        (false, detail)
    }
}

/// All index tuples with entries in 1..=rmax.
fn tuples(arity: usize, rmax: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                (1..=rmax).map(move |ri| {
                    let mut next = prefix.clone();
                    next.push(ri);
                    next
                })
            })
            .collect();
    }
    out
}

/// Mod-p three-way check for one cell; None when it passes.
fn check_three_way(s: &SequenceSpec, r: &[u64], p: u64) -> Option<String> {
    let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
    let engine = fast_partial_sum(s, r, p).expect("admissible cell");
    let oracle = s.partial_sum_exact(&bounds, p);
    let predicted = predicted_residue(s, r, p).expect("sequence with case table");
    if engine == oracle && predicted.matches(oracle) {
        return None;
    }
    Some(format!(
        "{} r={} p={}: engine {} oracle {} predicted {}",
        s.id(),
        fmt_r(r),
        p,
        engine.value(),
        oracle.value(),
        predicted.residue().value()
    ))
}

/// Oracle-vs-lifted-prediction check at modulus p^k; None when it passes.
fn check_lift(s: &SequenceSpec, r: &[u64], p: u64, k: u8) -> Option<String> {
    let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
    let observed = s.partial_sum_exact(&bounds, p.pow(u32::from(k)));
    let predicted = predicted_residue(s, r, p).expect("sequence with case table");
    if predicted.matches(observed) {
        return None;
    }
    Some(format!(
        "{} r={} p={} k={}: oracle {} lifted prediction {}",
        s.id(),
        fmt_r(r),
        p,
        k,
        observed.value(),
        predicted.lifted(k).value()
    ))
}

fn run_three_way_grid(grid: &[(&str, u64, u64, u64)]) -> (usize, Vec<String>) {
    // grid rows: (id, rmax, prime low, prime high)
    let mut cells = Vec::new();
    for &(id, rmax, lo, hi) in grid {
        let s = spec(id);
        for r in tuples(s.arity(), rmax) {
            for p in primes_in(lo.max(s.min_prime()), hi) {
                cells.push((s.clone(), r.clone(), p));
            }
        }
    }
    let failures: Vec<String> = cells
        .par_iter()
        .filter_map(|(s, r, p)| check_three_way(s, r, *p))
        .collect();
    (cells.len(), failures)
}

/// Criterion 1: single-index sequences, all admissible primes up to 100,
/// index multipliers up to 3 — reduction, oracle, and prediction agree
/// modulo p.
pub fn criterion_1() -> CriterionOutcome {
    with_budget(
        1,
        "single-index propositions mod p",
        Duration::from_secs(120),
        || {
            let (total, failures) = run_three_way_grid(&[
                ("central_binomial", 3, 0, 100),
                ("catalan", 3, 0, 100),
                ("motzkin", 3, 0, 100),
            ]);
            summarize(total, failures, "")
        },
    )
}

/// Criterion 2: multi-index sequences modulo p. One cell is expected to
/// fail: with four indices the unconditional case value κ does not hold at
/// p = 3 (the true sum is 7365 ≡ 0 mod 3), so the suite reports it honestly.
pub fn criterion_2() -> CriterionOutcome {
    with_budget(
        2,
        "multi-index propositions mod p",
        Duration::from_secs(600),
        || {
            let (total, failures) = run_three_way_grid(&[
                ("binomial_squared", 2, 5, 50),
                ("multinomial3", 2, 4, 30),
                ("multinomial4", 1, 0, 20),
                ("multinomial5", 1, 0, 20),
            ]);
            summarize(
                total,
                failures,
                "the four-index case table overreaches at p=3: the true boxed sum is \
                 7365 = 3·2455 ≡ 0 (mod 3), not the unconditional case value 1, and the \
                 reduction and oracle agree on 0",
            )
        },
    )
}

/// Criterion 3: the closed-form value tables, compared against the
/// reference lists exactly as printed in the source material.
pub fn criterion_3() -> CriterionOutcome {
    let reference_alpha: [i64; 10] = [1, 3, 9, 29, 99, 351, 1275, 4707, 17577, 66187];
    let reference_beta_gamma: [(i64, i64); 10] = [
        (1, -2),
        (2, -7),
        (4, -23),
        (9, -78),
        (23, -274),
        (65, -988),
        (197, -3628),
        (626, -13495),
        (2076, -50675),
        (6918, -191673),
    ];

    let mut failures = Vec::new();
    for (i, &want) in reference_alpha.iter().enumerate() {
        let r = (i + 1) as u64;
        let got = ClosedFormFamily::Alpha { r }.closed_form();
        if got != BigInt::from(want) {
            failures.push(format!("alpha({r}) computes {got}, reference list says {want}"));
        }
    }
    for (i, &(want_beta, want_neg_gamma)) in reference_beta_gamma.iter().enumerate() {
        let r = (i + 1) as u64;
        let beta = ClosedFormFamily::Beta { r }.closed_form();
        let neg_gamma = -ClosedFormFamily::Gamma { r }.closed_form();
        if beta != BigInt::from(want_beta) {
            failures.push(format!("beta({r}) computes {beta}, reference list says {want_beta}"));
        }
        if neg_gamma != BigInt::from(want_neg_gamma) {
            failures.push(format!(
                "-gamma({r}) computes {neg_gamma}, reference list says {want_neg_gamma}"
            ));
        }
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "30 table entries verified".to_owned()
    } else {
        format!(
            "{}: {} — both reference rows carry single-entry arithmetic slips: \
             alpha(10) = alpha(9) + binomial(18,9) = 17577 + 48620 = 66197, and \
             beta(9) = beta(8) + catalan(8) = 626 + 1430 = 2056, which the list's own \
             next entry confirms (beta(10) = 6918 = 2056 + 4862); the computed values \
             also match the catalogued sequences A006134 and A014137",
            failures.len(),
            failures.join("; ")
        )
    };
    outcome(3, "closed-form value tables", pass, detail)
}

/// Criterion 4: positive super-congruences — the lifted prediction matches
/// the exact oracle at p² (two families) and p³ (three-index sums).
pub fn criterion_4() -> CriterionOutcome {
    with_budget(4, "super-congruence lifts", Duration::from_secs(900), || {
        // rows: (id, rmax, prime low, prime high, k)
        let grid: [(&str, u64, u64, u64, u8); 4] = [
            ("central_binomial", 3, 5, 47, 2),
            ("catalan", 3, 5, 47, 2),
            ("binomial_squared", 2, 5, 29, 2),
            ("multinomial3", 2, 3, 23, 3),
        ];
        let mut cells = Vec::new();
        for &(id, rmax, lo, hi, k) in &grid {
            let s = spec(id);
            for r in tuples(s.arity(), rmax) {
                for p in primes_in(lo.max(s.min_prime()), hi) {
                    cells.push((s.clone(), r.clone(), p, k));
                }
            }
        }
        let failures: Vec<String> = cells
            .par_iter()
            .filter_map(|(s, r, p, k)| check_lift(s, r, *p, *k))
            .collect();
        summarize(cells.len(), failures, "")
    })
}

/// Criterion 5: negative super-congruences — the scan finds no lift for
/// the Motzkin sums (counterexample prime ≤ 50) or the four-index sums
/// (counterexample prime ≤ 20).
pub fn criterion_5() -> CriterionOutcome {
    let mut failures = Vec::new();
    for (id, r, pmax, cx_bound) in [
        ("motzkin", vec![1u64], 100, 50),
        ("multinomial4", vec![1, 1, 1, 1], 20, 20),
    ] {
        let s = spec(id);
        let primes = primes_in(s.min_prime(), pmax);
        match classify(&s, &r, &primes, &DEFAULT_CANDIDATE_MODULI) {
            Ok(crate::discover::DiscoverOutcome::Claim(claim)) => {
                if claim.super_level != 1 {
                    failures.push(format!("{id}: super_level {} != 1", claim.super_level));
                }
                if !claim
                    .counterexamples
                    .iter()
                    .any(|cx| cx.level == 2 && cx.p <= cx_bound)
                {
                    failures.push(format!("{id}: no level-2 counterexample prime ≤ {cx_bound}"));
                }
            }
            Ok(crate::discover::DiscoverOutcome::NoPatternFound(_)) => {
                failures.push(format!("{id}: no pattern found"));
            }
            Err(e) => failures.push(format!("{id}: scan failed: {e}")),
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "both scans report super_level 1 with in-range counterexamples".to_owned()
    } else {
        failures.join("; ")
    };
    outcome(5, "super-congruence non-lifts", pass, detail)
}

fn random_poly(rng: &mut ChaCha8Rng, max_vars: usize, max_terms: usize, max_coeff: i64) -> LaurentPoly {
    let vars = [Var::new("x"), Var::new("y"), Var::new("z")];
    let nvars = rng.gen_range(1..=max_vars);
    let nterms = rng.gen_range(1..=max_terms);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let mut pairs = Vec::new();
        for var in vars.iter().take(nvars) {
            let e = rng.gen_range(-3..=3i64);
            if e != 0 {
                pairs.push((*var, e));
            }
        }
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-max_coeff..=max_coeff);
        }
        terms.push((ExponentVector::of(&pairs), BigInt::from(c)));
    }
    LaurentPoly::from_terms(terms)
}

/// Criterion 6: the power-substitution identity behind the reduction —
/// P(x)^p ≡ P(x^p) mod p — on 200 random Laurent polynomials and the six
/// smallest primes.
pub fn criterion_6() -> CriterionOutcome {
    let mut polys = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x46524553_484d414e);
    for _ in 0..200 {
        polys.push(random_poly(&mut rng, 3, 5, 9));
    }
    let failures: Vec<String> = polys
        .par_iter()
        .enumerate()
        .filter_map(|(i, poly)| {
            for p in [2u64, 3, 5, 7, 11, 13] {
                let powered = poly.pow(p).mod_reduce(p);
                let substituted = poly.subst_power_all(p).mod_reduce(p);
                if powered != substituted {
                    return Some(format!("poly #{i} ({poly}) at p={p}"));
                }
            }
            None
        })
        .collect();
    let (pass, detail) = summarize(200 * 6, failures, "");
    outcome(6, "freshman's dream mod p", pass, detail)
}

/// Criterion 7: the diagonal of 1/((1+y+xy)(1+x+xy)) obeys
/// a(n+2) + a(n+1) + a(n) = 0 with a(0) = 1, a(1) = −1.
pub fn criterion_7() -> CriterionOutcome {
    let x = Var::new("x");
    let y = Var::new("y");
    let m = 1_000_000_007u64;
    let product = parse_poly("(1+y+x*y)*(1+x+x*y)").expect("fixed polynomial");
    let series = invert_unit(&product, m, &DegreeBox::new(&[(x, 31), (y, 31)]))
        .expect("unit constant term");
    let a: Vec<i64> = (0..=30)
        .map(|n| diagonal(&series, n).expect("inside box").value())
        .collect();

    let mut failures = Vec::new();
    if a[0] != 1 {
        failures.push(format!("a(0) = {}, want 1", a[0]));
    }
    if a[1] != -1 {
        failures.push(format!("a(1) = {}, want -1", a[1]));
    }
    for n in 0..=28 {
        let lhs = a[n] + a[n + 1] + a[n + 2];
        if lhs != 0 {
            failures.push(format!(
                "a({})+a({})+a({}) = {} != 0",
                n + 2,
                n + 1,
                n,
                lhs
            ));
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "initial values and 29 recurrence steps verified".to_owned()
    } else {
        failures.join("; ")
    };
    outcome(7, "diagonal recurrence", pass, detail)
}

/// Criterion 8: the classical central-binomial congruence
/// C(2p−1, p−1) ≡ 1 holds modulo p³ (and p²) for 5 ≤ p ≤ 50.
pub fn criterion_8() -> CriterionOutcome {
    let mut failures = Vec::new();
    for p in primes_in(5, 50) {
        for k in [2u8, 3] {
            let pp = PrimePower::new(p, k).expect("prime power");
            let got = binomial_mod_pk(2 * p - 1, (p - 1) as i64, pp);
            if got.value() != 1 {
                failures.push(format!("C(2·{p}−1, {p}−1) ≡ {} mod {p}^{k}", got.value()));
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        format!("{} prime/power pairs verified", primes_in(5, 50).len() * 2)
    } else {
        failures.join("; ")
    };
    outcome(8, "wolstenholme oracle", pass, detail)
}

/// Criterion 9: the exact-integer route and the p-adic route through the
/// oracle agree on the criterion 1–2 grids restricted to p ≤ 13, through p³.
pub fn criterion_9() -> CriterionOutcome {
    let grid: [(&str, u64, u64, u64); 7] = [
        ("central_binomial", 3, 0, 13),
        ("catalan", 3, 0, 13),
        ("motzkin", 3, 0, 13),
        ("binomial_squared", 2, 5, 13),
        ("multinomial3", 2, 4, 13),
        ("multinomial4", 1, 0, 13),
        ("multinomial5", 1, 0, 13),
    ];
    let mut cells = Vec::new();
    for &(id, rmax, lo, hi) in &grid {
        let s = spec(id);
        for r in tuples(s.arity(), rmax) {
            for p in primes_in(lo.max(s.min_prime()), hi) {
                cells.push((s.clone(), r.clone(), p));
            }
        }
    }
    let failures: Vec<String> = cells
        .par_iter()
        .filter_map(|(s, r, p)| {
            let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
            let mut exact = BigInt::from(0);
            for_each_index(&bounds, &mut |idx| exact += s.direct_term(idx));
            for k in 1..=3u32 {
                let m = p.pow(k);
                let via_bigint = sym_mod_big(&exact, m).expect("valid modulus");
                let via_padic = s.partial_sum_exact(&bounds, m);
                if via_bigint != via_padic {
                    return Some(format!(
                        "{} r={} p={p} k={k}: bigint {} p-adic {}",
                        s.id(),
                        fmt_r(r),
                        via_bigint.value(),
                        via_padic.value()
                    ));
                }
            }
            None
        })
        .collect();
    let (pass, detail) = summarize(cells.len() * 3, failures, "");
    outcome(9, "oracle route equivalence", pass, detail)
}

/// Criterion 10: parser round-trip on 500 random polynomials plus the
/// fixed worked examples.
pub fn criterion_10() -> CriterionOutcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x50415253_45525254);
    for i in 0..500 {
        let poly = random_poly(&mut rng, 3, 6, 99);
        let rendered = render_poly(&poly);
        match parse_poly(&rendered) {
            Ok(back) if back == poly => {}
            Ok(back) => failures.push(format!(
                "round-trip #{i}: {poly} rendered as {rendered:?} parsed back as {back}"
            )),
            Err(e) => failures.push(format!("round-trip #{i}: {rendered:?} failed to parse: {e}")),
        }
    }

    let x = Var::new("x");
    let y = Var::new("y");
    let base = parse_poly("2+x+1/x").expect("worked example");
    let want = LaurentPoly::from_terms([
        (ExponentVector::empty(), BigInt::from(2)),
        (ExponentVector::single(x, 1), BigInt::from(1)),
        (ExponentVector::single(x, -1), BigInt::from(1)),
    ]);
    if base != want {
        failures.push(format!("\"2+x+1/x\" parsed as {base}"));
    }
    let product = parse_poly("(1+y)*(1+1/x)").expect("worked example");
    let want = LaurentPoly::from_terms([
        (ExponentVector::empty(), BigInt::from(1)),
        (ExponentVector::single(y, 1), BigInt::from(1)),
        (ExponentVector::single(x, -1), BigInt::from(1)),
        (ExponentVector::of(&[(x, -1), (y, 1)]), BigInt::from(1)),
    ]);
    if product != want {
        failures.push(format!("\"(1+y)*(1+1/x)\" parsed as {product}"));
    }
    match parse_poly("1/(1+x)") {
        Err(ParseError::NonMonomialDivisor { pos: 1 }) => {}
        other => failures.push(format!(
            "\"1/(1+x)\" should report a non-monomial divisor at position 1, got {other:?}"
        )),
    }

    let (pass, detail) = summarize(503, failures, "");
    outcome(10, "parser round-trip", pass, detail)
}

/// Criterion 11: offline OEIS lookups hit the catalogued ids for the α and
/// β tables and nothing for γ.
pub fn criterion_11() -> CriterionOutcome {
    let as_big = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&t| BigInt::from(t)).collect() };
    let mut failures = Vec::new();

    let alpha = lookup(&as_big(&[1, 3, 9, 29, 99, 351]), OeisMode::Offline).expect("6 terms");
    if alpha.ids != ["A006134"] {
        failures.push(format!("alpha terms matched {:?}", alpha.ids));
    }
    let beta = lookup(&as_big(&[1, 2, 4, 9, 23, 65]), OeisMode::Offline).expect("6 terms");
    if beta.ids != ["A014137"] {
        failures.push(format!("beta terms matched {:?}", beta.ids));
    }
    let gamma = lookup(&as_big(&[2, 7, 23, 78, 274, 988]), OeisMode::Offline).expect("6 terms");
    if !gamma.ids.is_empty() {
        failures.push(format!("gamma terms unexpectedly matched {:?}", gamma.ids));
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "alpha → A006134, beta → A014137, gamma → no match".to_owned()
    } else {
        failures.join("; ")
    };
    outcome(11, "oeis fixture lookups", pass, detail)
}

/// Run all eleven criteria in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ]
}
