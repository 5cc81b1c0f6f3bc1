//! Fast evaluation of boxed partial sums of constant-term sequences mod p.
//!
//! The target quantity is `Σ_{0 ≤ n_i < r_i·p} CT[Q · ∏_i B_i^{n_i}] mod p`,
//! which a brute-force oracle computes by enumerating all `∏ r_i·p` index
//! tuples. This module instead collapses each base's geometric series:
//!
//! ```text
//! Σ_{n<rp} B^n = (B^{rp} − 1)/(B − 1) ≡ (F^r − 1)/(B − 1)   (mod p),
//! ```
//!
//! where `F` is `B` with every variable `v` replaced by `v^p`, so that
//! `F ≡ B^p (mod p)` by the Frobenius endomorphism of `F_p[x^{±1}]`. When
//! the cleared form of `B − 1` has an invertible constant term, the quotient
//! is evaluated through a truncated power-series inversion. Otherwise the
//! division is eliminated altogether using
//!
//! ```text
//! Σ_{n<rp} B^n ≡ (B − 1)^{p−1} · Σ_{j<r} F^j   (mod p),
//! ```
//!
//! valid in `F_p[x^{±1}]` for every Laurent polynomial `B`: multiplying both
//! sides by `B − 1` turns the right side into `(B − 1)^p Σ_{j<r} F^j ≡
//! (F − 1)·Σ_{j<r} F^j = F^r − 1`, equal to the left side times `B − 1`;
//! cancellation is allowed in the integral domain unless `B ≡ 1`, in which
//! case both sides vanish (`(B−1)^{p−1} = 0` and `Σ_{n<rp} 1 = rp ≡ 0`).
//! The constant term of the resulting pure product of Laurent polynomials
//! is extracted by a meet-in-the-middle coefficient convolution that never
//! materializes the whole product.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{ExponentVector, LaurentPoly, Var};
use crate::numeric::{
    binomial_exact, is_prime, multinomial_exact, sym_mod, sym_mod_big, Residue,
};
use crate::sequences::{
    catalan_exact, central_trinomial_exact, for_each_index, DirectFormula, SequenceSpec,
};
use crate::series::{rational_ct, SeriesError};

/// Failures of the reduction engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("prime {p} is below this sequence's minimum {min}")]
    PrimeTooSmall { p: u64, min: u64 },
    #[error("index multiplier {r} is outside the supported range 1..=8")]
    RTooLarge { r: u64 },
    #[error("expected {expected} index multipliers, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("constant term {ct} is not invertible modulo {modulus}")]
    NonUnitConstantTerm { ct: i64, modulus: u64 },
    #[error("no closed-form residue pattern is known for sequence {spec_id}")]
    UnknownPattern { spec_id: String },
}

impl From<SeriesError> for EngineError {
    fn from(e: SeriesError) -> EngineError {
        match e {
            SeriesError::NonUnitConstantTerm { ct, modulus } => {
                EngineError::NonUnitConstantTerm { ct, modulus }
            }
            SeriesError::OutOfBox { .. } => {
                unreachable!("series evaluation stays inside its own degree box")
            }
        }
    }
}

/// The collapsed form of a boxed partial sum modulo `p`.
///
/// The represented value is
/// `CT[ shift · ∏ numerator_factors / ∏ denominator_factors ] mod p`.
/// Denominator factors are cleared (nonnegative exponents) with unit
/// constant term mod p, and their clearing monomials are accumulated in
/// `monomial_shift`. Bases whose cleared `B − 1` has constant term ≡ 0 are
/// collapsed into pure numerator factors instead, so the denominator list
/// may be empty.
#[derive(Debug, Clone)]
pub struct ReducedExpression {
    numerator_factors: Vec<LaurentPoly>,
    denominator_factors: Vec<LaurentPoly>,
    monomial_shift: ExponentVector,
    modulus: u64,
}

impl ReducedExpression {
    /// The prime modulus all coefficients are reduced by.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The factors of the numerator, kept unexpanded.
    pub fn numerator_factors(&self) -> &[LaurentPoly] {
        &self.numerator_factors
    }

    /// The cleared denominator polynomials (unit constant term mod p).
    pub fn denominator_factors(&self) -> &[LaurentPoly] {
        &self.denominator_factors
    }

    /// The accumulated clearing monomial multiplying the numerator.
    pub fn monomial_shift(&self) -> &ExponentVector {
        &self.monomial_shift
    }

    /// The expanded numerator `∏ numerator_factors mod p` (without shift).
    pub fn numerator(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for f in &self.numerator_factors {
            acc = (&acc * f).mod_reduce(self.modulus);
        }
        acc
    }

    /// A per-variable truncation bound sufficient for series evaluation:
    /// the deepest negative exponent the shifted numerator can reach.
    pub fn box_bounds(&self) -> Vec<(Var, usize)> {
        let mut vars: Vec<Var> = Vec::new();
        for f in self
            .numerator_factors
            .iter()
            .chain(self.denominator_factors.iter())
        {
            vars.extend(f.vars());
        }
        vars.extend(self.monomial_shift.vars());
        vars.sort();
        vars.dedup();
        vars.into_iter()
            .map(|v| {
                let mut min = self.monomial_shift.get(v);
                for f in &self.numerator_factors {
                    min += f.min_exponent(v).unwrap_or(0);
                }
                (v, usize::try_from(-min.min(0)).expect("nonnegative"))
            })
            .collect()
    }

    /// The constant term of the represented expression.
    pub fn evaluate(&self) -> Result<Residue, EngineError> {
        let m = self.modulus;
        if self.numerator_factors.iter().any(|f| f.is_zero()) {
            return Ok(Residue::zero(m).expect("prime modulus"));
        }
        if self.denominator_factors.is_empty() {
            // CT[P·shift] is the coefficient of the inverse shift monomial.
            let target = self.monomial_shift.neg();
            return Ok(ct_of_product(&self.numerator_factors, &target, m));
        }
        let numer = self.numerator().shift(&self.monomial_shift);
        rational_ct(&numer, &self.denominator_factors, m).map_err(EngineError::from)
    }
}

pub(crate) fn validate(spec: &SequenceSpec, r: &[u64], p: u64) -> Result<(), EngineError> {
    if !is_prime(p) {
        return Err(EngineError::NotPrime { p });
    }
    if p < spec.min_prime() {
        return Err(EngineError::PrimeTooSmall {
            p,
            min: spec.min_prime(),
        });
    }
    if r.len() != spec.arity() {
        return Err(EngineError::WrongArity {
            expected: spec.arity(),
            got: r.len(),
        });
    }
    for &ri in r {
        if !(1..=8).contains(&ri) {
            return Err(EngineError::RTooLarge { r: ri });
        }
    }
    Ok(())
}

/// Binary exponentiation with coefficient reduction after every product.
fn pow_mod(b: &LaurentPoly, mut e: u64, m: u64) -> LaurentPoly {
    let mut result = LaurentPoly::one();
    let mut base = b.mod_reduce(m);
    while e > 0 {
        if e & 1 == 1 {
            result = (&result * &base).mod_reduce(m);
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base).mod_reduce(m);
        }
    }
    result
}

fn reduce_with_route(
    spec: &SequenceSpec,
    r: &[u64],
    p: u64,
    force_collapse: bool,
) -> Result<ReducedExpression, EngineError> {
    validate(spec, r, p)?;

    let mut numerator_factors = Vec::new();
    let mut denominator_factors = Vec::new();
    let mut shift = ExponentVector::empty();

    let q = spec.multiplier().mod_reduce(p);
    if !q.is_one() {
        numerator_factors.push(q);
    }

    for (i, base) in spec.bases().iter().enumerate() {
        let b = base.mod_reduce(p);
        // Frobenius image: F = B(v^p for every v) ≡ B^p (mod p).
        let f = b.subst_power_all(p).mod_reduce(p);
        let d = &b - &LaurentPoly::one();
        let (cleared, s) = d.clear_denominator();
        let ct = sym_mod_big(&cleared.constant_term(), p).expect("prime modulus");
        if ct.value() != 0 && !force_collapse {
            // Series route: Σ_{n<rp} B^n ≡ (F^r − 1)/(B − 1).
            let n = &pow_mod(&f, r[i], p) - &LaurentPoly::one();
            numerator_factors.push(n.mod_reduce(p));
            denominator_factors.push(cleared);
            shift = shift.add(&s);
        } else {
            // Collapse route: Σ_{n<rp} B^n ≡ (B − 1)^{p−1} · Σ_{j<r} F^j.
            numerator_factors.push(pow_mod(&d, p - 1, p));
            if r[i] > 1 {
                let mut g = LaurentPoly::zero();
                let mut acc = LaurentPoly::one();
                for _ in 0..r[i] {
                    g = &g + &acc;
                    acc = (&acc * &f).mod_reduce(p);
                }
                numerator_factors.push(g.mod_reduce(p));
            }
        }
    }

    Ok(ReducedExpression {
        numerator_factors,
        denominator_factors,
        monomial_shift: shift,
        modulus: p,
    })
}

/// Collapse the boxed partial sum `Σ_{n_i < r_i·p} CT[Q·∏ B_i^{n_i}]` into a
/// single constant-term expression modulo `p`.
pub fn reduce(spec: &SequenceSpec, r: &[u64], p: u64) -> Result<ReducedExpression, EngineError> {
    reduce_with_route(spec, r, p, false)
}

/// The boxed partial sum modulo `p`, via [`reduce`]: always equal to
/// `partial_sum_exact` at the same bounds and modulus, but costs far less
/// than enumerating the `∏ r_i·p` index tuples.
pub fn fast_partial_sum(spec: &SequenceSpec, r: &[u64], p: u64) -> Result<Residue, EngineError> {
    reduce(spec, r, p)?.evaluate()
}

// ---------------------------------------------------------------------------
// Constant term of a product of Laurent polynomials, without expanding it.

const MAXV: usize = 8;
type Exps = [i16; MAXV];

/// Single-shot hasher for packed exponent keys.
#[derive(Default)]
struct PackHasher {
    h: u64,
}

impl Hasher for PackHasher {
    fn finish(&self) -> u64 {
        self.h
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.h = (self.h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u128(&mut self, n: u128) {
        let x = (n as u64) ^ ((n >> 64) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        self.h = x ^ (x >> 31);
    }
}

type PackMap = HashMap<u128, i64, BuildHasherDefault<PackHasher>>;

fn pack(e: &Exps) -> u128 {
    let mut k = 0u128;
    for (i, &x) in e.iter().enumerate() {
        k |= u128::from(x as u16) << (16 * i);
    }
    k
}

fn unpack(k: u128) -> Exps {
    let mut e = [0i16; MAXV];
    for (i, slot) in e.iter_mut().enumerate() {
        *slot = ((k >> (16 * i)) as u16) as i16;
    }
    e
}

struct EncodedFactor {
    terms: Vec<(Exps, i64)>,
    min: [i32; MAXV],
    max: [i32; MAXV],
}

/// Multiply the chosen factors together, keeping only monomials whose
/// exponents can still be completed — by the factors not yet multiplied and
/// then by the other side's exponent range — to land on `lo..=hi`.
fn materialize_side(
    factors: &[&EncodedFactor],
    lo: &[i32; MAXV],
    hi: &[i32; MAXV],
    m: u64,
) -> PackMap {
    // Suffix ranges: what the factors after step i can still contribute.
    let mut suffix_min = vec![[0i32; MAXV]; factors.len() + 1];
    let mut suffix_max = vec![[0i32; MAXV]; factors.len() + 1];
    for i in (0..factors.len()).rev() {
        for v in 0..MAXV {
            suffix_min[i][v] = suffix_min[i + 1][v] + factors[i].min[v];
            suffix_max[i][v] = suffix_max[i + 1][v] + factors[i].max[v];
        }
    }

    let mut map = PackMap::default();
    map.insert(pack(&[0i16; MAXV]), 1);
    for (step, factor) in factors.iter().enumerate() {
        // A partial exponent d survives iff d + suffix range intersects
        // [lo, hi] in every variable.
        let mut dmin = [0i32; MAXV];
        let mut dmax = [0i32; MAXV];
        for v in 0..MAXV {
            dmin[v] = lo[v] - suffix_max[step + 1][v];
            dmax[v] = hi[v] - suffix_min[step + 1][v];
        }
        let mut next = PackMap::with_capacity_and_hasher(map.len() * 2, Default::default());
        for (&key, &c) in &map {
            let d = unpack(key);
            'terms: for (t, tc) in &factor.terms {
                let mut e = [0i16; MAXV];
                for v in 0..MAXV {
                    let x = i32::from(d[v]) + i32::from(t[v]);
                    if x < dmin[v] || x > dmax[v] {
                        continue 'terms;
                    }
                    e[v] = x as i16;
                }
                *next.entry(pack(&e)).or_insert(0) += c * tc;
            }
        }
        map = next;
        // Values entering the next step must stay small: reduce and drop
        // cancellations.
        map.retain(|_, vref| {
            *vref = sym_mod(*vref, m).expect("prime modulus").value();
            *vref != 0
        });
    }
    map
}

/// The coefficient of `target` in `∏ factors`, modulo `m`, computed by
/// splitting the factor list in two halves, materializing each half with
/// infeasible-exponent pruning, and convolving the halves through hash
/// lookups of complementary exponents.
pub(crate) fn ct_of_product(factors: &[LaurentPoly], target: &ExponentVector, m: u64) -> Residue {
    let zero = Residue::zero(m).expect("prime modulus");
    if factors.iter().any(|f| f.is_zero()) {
        return zero;
    }

    // Variable table shared by all packed keys.
    let mut vars: Vec<Var> = factors.iter().flat_map(|f| f.vars()).collect();
    vars.extend(target.vars());
    vars.sort();
    vars.dedup();
    assert!(
        vars.len() <= MAXV,
        "constant-term extraction supports at most {MAXV} variables"
    );
    let axis = |e: &ExponentVector| -> [i32; MAXV] {
        let mut out = [0i32; MAXV];
        for (i, &v) in vars.iter().enumerate() {
            out[i] = i32::try_from(e.get(v)).expect("exponent fits i32");
        }
        out
    };

    let mut tgt = [0i32; MAXV];
    for (i, &v) in vars.iter().enumerate() {
        tgt[i] = i32::try_from(target.get(v)).expect("exponent fits i32");
    }

    let mut encoded: Vec<EncodedFactor> = Vec::new();
    for f in factors {
        if f.is_one() {
            continue;
        }
        let mut terms = Vec::with_capacity(f.num_terms());
        let mut min = [i32::MAX; MAXV];
        let mut max = [i32::MIN; MAXV];
        for (e, c) in f.terms() {
            let c = sym_mod_big(c, m).expect("prime modulus").value();
            if c == 0 {
                continue;
            }
            let a = axis(e);
            let mut key = [0i16; MAXV];
            for v in 0..MAXV {
                assert!(
                    a[v].abs() <= 30_000,
                    "exponent too large for packed representation"
                );
                key[v] = a[v] as i16;
                min[v] = min[v].min(a[v]);
                max[v] = max[v].max(a[v]);
            }
            terms.push((key, c));
        }
        if terms.is_empty() {
            return zero; // factor ≡ 0 mod m
        }
        encoded.push(EncodedFactor { terms, min, max });
    }

    if encoded.is_empty() {
        // Product of empty/unit factor list is 1.
        let v = if tgt == [0i32; MAXV] { 1 } else { 0 };
        return sym_mod(v, m).expect("prime modulus");
    }

    // Split into two halves of balanced product size (sum of log sizes),
    // multiplying small factors first so the tight windows apply to the
    // largest factor against the largest intermediate map.
    let mut order: Vec<usize> = (0..encoded.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(encoded[i].terms.len()));
    let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut weight = [0f64; 2];
    for i in order {
        let side = usize::from(weight[0] > weight[1]);
        sides[side].push(i);
        weight[side] += (encoded[i].terms.len() as f64).ln_1p();
    }
    for side in &mut sides {
        side.sort_by_key(|&i| encoded[i].terms.len());
    }

    let range_of = |idxs: &[usize]| -> ([i32; MAXV], [i32; MAXV]) {
        let mut min = [0i32; MAXV];
        let mut max = [0i32; MAXV];
        for &i in idxs {
            for v in 0..MAXV {
                min[v] += encoded[i].min[v];
                max[v] += encoded[i].max[v];
            }
        }
        (min, max)
    };
    let (lmin, lmax) = range_of(&sides[0]);
    let (rmin, rmax) = range_of(&sides[1]);

    let build = |idxs: &[usize], omin: &[i32; MAXV], omax: &[i32; MAXV]| -> PackMap {
        // Acceptable side totals: tgt − (other side's reachable range).
        let mut lo = [0i32; MAXV];
        let mut hi = [0i32; MAXV];
        for v in 0..MAXV {
            lo[v] = tgt[v] - omax[v];
            hi[v] = tgt[v] - omin[v];
        }
        let refs: Vec<&EncodedFactor> = idxs.iter().map(|&i| &encoded[i]).collect();
        materialize_side(&refs, &lo, &hi, m)
    };
    let left = build(&sides[0], &rmin, &rmax);
    let right = build(&sides[1], &lmin, &lmax);

    let (small, large) = if left.len() <= right.len() {
        (&left, &right)
    } else {
        (&right, &left)
    };
    let mut acc: i128 = 0;
    for (&key, &c) in small {
        let e = unpack(key);
        let mut comp = [0i16; MAXV];
        let mut ok = true;
        for v in 0..MAXV {
            match i16::try_from(tgt[v] - i32::from(e[v])) {
                Ok(x) => comp[v] = x,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(&c2) = large.get(&pack(&comp)) {
            acc += i128::from(c) * i128::from(c2);
        }
    }
    sym_mod((acc.rem_euclid(i128::from(m))) as i64, m).expect("prime modulus")
}

// ---------------------------------------------------------------------------
// Closed-form families and residue predictions.

/// The exactly-summable families that residue patterns are matched against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormFamily {
    /// Σ_{n<r} C(2n, n)
    Alpha { r: u64 },
    /// Σ_{n<r} Catalan(n)
    Beta { r: u64 },
    /// Σ_{n<r} (3n+2)·Catalan(n)
    Gamma { r: u64 },
    /// Σ_{n<r} central_trinomial(n)
    Delta { r: u64 },
    /// Σ_{n<r} Σ_{m<s} C(n+m, m)²
    Epsilon { r: u64, s: u64 },
    /// Σ_{n⃗<r⃗} (n_1+…+n_v)! / ∏ n_i!
    Kappa { rs: Vec<u64> },
}

impl std::fmt::Display for ClosedFormFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosedFormFamily::Alpha { r } => write!(f, "alpha({r})"),
            ClosedFormFamily::Beta { r } => write!(f, "beta({r})"),
            ClosedFormFamily::Gamma { r } => write!(f, "gamma({r})"),
            ClosedFormFamily::Delta { r } => write!(f, "delta({r})"),
            ClosedFormFamily::Epsilon { r, s } => write!(f, "epsilon({r},{s})"),
            ClosedFormFamily::Kappa { rs } => {
                write!(f, "kappa(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl ClosedFormFamily {
    /// The exact (positive) integer value of the family sum.
    pub fn closed_form(&self) -> BigInt {
        match self {
            ClosedFormFamily::Alpha { r } => {
                assert!(*r >= 1);
                (0..*r).map(|n| binomial_exact(2 * n, n as i64)).sum()
            }
            ClosedFormFamily::Beta { r } => {
                assert!(*r >= 1);
                (0..*r).map(catalan_exact).sum()
            }
            ClosedFormFamily::Gamma { r } => {
                assert!(*r >= 1);
                (0..*r)
                    .map(|n| BigInt::from(3 * n + 2) * catalan_exact(n))
                    .sum()
            }
            ClosedFormFamily::Delta { r } => {
                assert!(*r >= 1);
                (0..*r).map(central_trinomial_exact).sum()
            }
            ClosedFormFamily::Epsilon { r, s } => {
                assert!(*r >= 1 && *s >= 1);
                let mut acc = BigInt::zero();
                for n in 0..*r {
                    for m in 0..*s {
                        let b = binomial_exact(n + m, m as i64);
                        acc += &b * &b;
                    }
                }
                acc
            }
            ClosedFormFamily::Kappa { rs } => {
                assert!(!rs.is_empty() && rs.iter().all(|&r| r >= 1));
                let mut acc = BigInt::zero();
                for_each_index(rs, &mut |tuple| {
                    acc += multinomial_exact(tuple);
                });
                acc
            }
        }
    }
}

/// A closed-form residue prediction: an exact integer whose reduction is
/// claimed congruent to the boxed partial sum.
///
/// The integer may exceed the symmetric range of `p` (or `p^k`); comparisons
/// go through congruence, not through any particular representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedValue {
    value: BigInt,
    prime: u64,
}

impl PredictedValue {
    /// The exact predicted integer (sign already applied).
    pub fn integer(&self) -> &BigInt {
        &self.value
    }

    /// The prime the prediction was made for.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The prediction reduced modulo `p`.
    pub fn residue(&self) -> Residue {
        self.lifted(1)
    }

    /// The prediction reduced modulo `p^k` (`k ≤ 3`).
    pub fn lifted(&self, k: u8) -> Residue {
        assert!((1..=3).contains(&k), "supported lifts are k = 1, 2, 3");
        let m = self.prime.pow(u32::from(k));
        sym_mod_big(&self.value, m).expect("prime power modulus")
    }

    /// Whether the prediction is congruent to `observed` at the observed
    /// modulus.
    pub fn matches(&self, observed: Residue) -> bool {
        let diff = &self.value - BigInt::from(observed.value());
        (diff % BigInt::from(observed.modulus())).is_zero()
    }
}

/// The closed-form prediction for `Σ_{n_i<r_i·p} CT[Q·∏B_i^{n_i}] mod p`,
/// resolved by the residue class of `p`:
///
/// * central binomial sums: `+alpha(r)` if p ≡ 1 (mod 3), `−alpha(r)` if p ≡ 2;
/// * Catalan sums: `+beta(r)` if p ≡ 1 (mod 3), `−gamma(r)` if p ≡ 2;
/// * Motzkin sums: `+2·delta(r)` if p ≡ 1 (mod 4), `−2·delta(r)` if p ≡ 3;
/// * squared-binomial double sums: `±epsilon(r,s)` by p mod 3;
/// * multinomial sums: `kappa(r⃗)` for every admissible prime.
///
/// Central-trinomial and user-supplied sequences have no known pattern.
pub fn predicted_residue(
    spec: &SequenceSpec,
    r: &[u64],
    p: u64,
) -> Result<PredictedValue, EngineError> {
    validate(spec, r, p)?;
    let unknown = || EngineError::UnknownPattern {
        spec_id: spec.id().to_owned(),
    };
    let value = match spec.direct() {
        DirectFormula::CentralBinomial => {
            let a = ClosedFormFamily::Alpha { r: r[0] }.closed_form();
            match p % 3 {
                1 => a,
                2 => -a,
                _ => unreachable!("primes ≥ 5 are not divisible by 3"),
            }
        }
        DirectFormula::Catalan => match p % 3 {
            1 => ClosedFormFamily::Beta { r: r[0] }.closed_form(),
            2 => -ClosedFormFamily::Gamma { r: r[0] }.closed_form(),
            _ => unreachable!("primes ≥ 5 are not divisible by 3"),
        },
        DirectFormula::Motzkin => {
            let d = BigInt::from(2) * ClosedFormFamily::Delta { r: r[0] }.closed_form();
            match p % 4 {
                1 => d,
                3 => -d,
                _ => unreachable!("odd primes are 1 or 3 mod 4"),
            }
        }
        DirectFormula::BinomialSquared => {
            let e = ClosedFormFamily::Epsilon { r: r[0], s: r[1] }.closed_form();
            match p % 3 {
                1 => e,
                2 => -e,
                _ => unreachable!("primes ≥ 5 are not divisible by 3"),
            }
        }
        DirectFormula::Multinomial => ClosedFormFamily::Kappa { rs: r.to_vec() }.closed_form(),
        DirectFormula::CentralTrinomial | DirectFormula::CtFallback => return Err(unknown()),
    };
    Ok(PredictedValue { value, prime: p })
}

/// Test the prediction at modulus `p^k` for `k ∈ {2, 3}`: returns the exact
/// partial sum reduced mod `p^k` and whether it is congruent to the
/// mod-p prediction's integer value lifted to `p^k`.
pub fn super_check(
    spec: &SequenceSpec,
    r: &[u64],
    p: u64,
    k: u8,
) -> Result<(Residue, bool), EngineError> {
    assert!((2..=3).contains(&k), "super-congruence levels are 2 and 3");
    let predicted = predicted_residue(spec, r, p)?;
    let bounds: Vec<u64> = r.iter().map(|&ri| ri * p).collect();
    let modulus = p.pow(u32::from(k));
    let observed = spec.partial_sum_exact(&bounds, modulus);
    Ok((observed, predicted.matches(observed)))
}
