//! Sparse multivariate Laurent polynomials with exact integer coefficients.
//!
//! - [`Var`]: interned variable names, ordered alphabetically.
//! - [`ExponentVector`]: a monomial's exponents (possibly negative), with
//!   zero exponents never stored, ordered by grade then within a grade.
//! - [`LaurentPoly`]: a term map from exponent vectors to nonzero `BigInt`
//!   coefficients. Equal polynomials have identical term maps.
//!
//! Coefficients are always exact integers; modular images are produced by
//! [`LaurentPoly::mod_reduce`], which keeps a single polynomial type for
//! both exact and reduced arithmetic.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::numeric::sym_mod_big;

static INTERNER: Lazy<Mutex<HashSet<&'static str>>> = Lazy::new(|| Mutex::new(HashSet::new()));

/// An interned variable name. Copying is free; comparison and hashing use
/// the name itself, so variables order alphabetically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(&'static str);

impl Var {
    /// Intern `name` and return the variable. Names live for the program's
    /// lifetime; the set of distinct names in any run is tiny.
    pub fn new(name: &str) -> Var {
        let mut set = INTERNER.lock().expect("variable interner poisoned");
        if let Some(existing) = set.get(name) {
            return Var(existing);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Var(leaked)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.0)
    }
}

/// Exponents of one monomial: a sorted list of (variable, nonzero exponent)
/// pairs. The empty vector is the constant monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExponentVector {
    exps: Vec<(Var, i64)>,
}

impl ExponentVector {
    pub fn empty() -> ExponentVector {
        ExponentVector::default()
    }

    /// Build from arbitrary pairs; repeated variables are summed and zero
    /// exponents dropped.
    pub fn of(pairs: &[(Var, i64)]) -> ExponentVector {
        let mut merged: BTreeMap<Var, i64> = BTreeMap::new();
        for &(v, e) in pairs {
            *merged.entry(v).or_insert(0) += e;
        }
        ExponentVector {
            exps: merged.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn single(v: Var, e: i64) -> ExponentVector {
        ExponentVector::of(&[(v, e)])
    }

    /// The exponent of `v` (zero when absent).
    pub fn get(&self, v: Var) -> i64 {
        self.exps
            .binary_search_by(|&(w, _)| w.cmp(&v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree (sum of exponents; may be negative).
    pub fn grade(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.exps.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    /// Componentwise sum (monomial product).
    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        let mut out: Vec<(Var, i64)> = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ea) = self.exps[i];
            let (vb, eb) = other.exps[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if ea + eb != 0 {
                        out.push((va, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        ExponentVector { exps: out }
    }

    /// Componentwise negation (monomial inverse).
    pub fn neg(&self) -> ExponentVector {
        ExponentVector {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    /// Multiply every exponent by `k`.
    pub fn scale(&self, k: i64) -> ExponentVector {
        if k == 0 {
            return ExponentVector::empty();
        }
        ExponentVector {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// Multiply the exponent of `v` alone by `k >= 1`.
    pub fn scale_var(&self, v: Var, k: i64) -> ExponentVector {
        assert!(k >= 1, "substitution power must be positive");
        ExponentVector {
            exps: self.exps.iter().map(|&(w, e)| (w, if w == v { e * k } else { e })).collect(),
        }
    }

    pub fn all_nonpositive(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e <= 0)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e >= 0)
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentVector {
    /// Graded order: lower total degree first; within a grade, compare
    /// exponents variable-by-variable from the alphabetically last variable
    /// backwards, smaller exponent first. This sorts `x^-1 < 2 < x` and
    /// `1 < y < x*y`, matching the canonical rendering.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let vars: BTreeSet<Var> = self.vars().chain(other.vars()).collect();
            for v in vars.into_iter().rev() {
                let ord = self.get(v).cmp(&other.get(v));
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

/// A Laurent polynomial: finitely many monomials with nonzero integer
/// coefficients. The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> LaurentPoly {
        LaurentPoly::monomial(ExponentVector::empty(), c)
    }

    pub fn variable(v: Var) -> LaurentPoly {
        LaurentPoly::monomial(ExponentVector::single(v, 1), 1)
    }

    pub fn monomial(e: ExponentVector, c: impl Into<BigInt>) -> LaurentPoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// Accumulate arbitrary (exponent, coefficient) pairs; repeated
    /// exponents are summed and zero sums dropped.
    pub fn from_terms(pairs: impl IntoIterator<Item = (ExponentVector, BigInt)>) -> LaurentPoly {
        let mut terms: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (e, c) in pairs {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&ExponentVector::empty())
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in the canonical (graded) order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    /// The sorted set of variables appearing with nonzero exponent.
    pub fn vars(&self) -> Vec<Var> {
        let set: BTreeSet<Var> = self.terms.keys().flat_map(|e| e.vars()).collect();
        set.into_iter().collect()
    }

    /// The coefficient at an exponent vector (zero when absent).
    pub fn coeff_at(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigInt {
        self.coeff_at(&ExponentVector::empty())
    }

    /// When the polynomial is a single monomial, its exponent and coefficient.
    pub fn as_single_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Multiply by the monomial with exponent `e`.
    pub fn shift(&self, e: &ExponentVector) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.add(e), c.clone()))
                .collect(),
        }
    }

    /// Raise to a nonnegative power by binary exponentiation.
    pub fn pow(&self, e: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute `v -> v^k` for `k >= 1` (exponents of `v` multiply by k).
    pub fn subst_power(&self, v: Var, k: u64) -> LaurentPoly {
        assert!(k >= 1, "substitution power must be positive");
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.scale_var(v, k as i64), c.clone()))
                .collect(),
        }
    }

    /// Substitute `v -> v^k` for every variable simultaneously.
    pub fn subst_power_all(&self, k: u64) -> LaurentPoly {
        assert!(k >= 1, "substitution power must be positive");
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.scale(k as i64), c.clone()))
                .collect(),
        }
    }

    /// Smallest exponent of `v` over all terms; `None` for the zero
    /// polynomial, where no exponent exists.
    pub fn min_exponent(&self, v: Var) -> Option<i64> {
        self.terms.keys().map(|e| e.get(v)).min()
    }

    /// Smallest and largest exponent of `v` over all terms.
    pub fn exponent_range(&self, v: Var) -> Option<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        if self.is_zero() {
            return None;
        }
        for e in self.terms.keys() {
            let x = e.get(v);
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Some((lo, hi))
    }

    /// Clear negative exponents: returns `(q, m)` with `q = self * x^m` a
    /// polynomial (all exponents nonnegative) and `m` the smallest such
    /// monomial multiplier (per variable, max(0, -min exponent)).
    pub fn clear_denominator(&self) -> (LaurentPoly, ExponentVector) {
        let mut mult: Vec<(Var, i64)> = Vec::new();
        for v in self.vars() {
            let min = self.min_exponent(v).expect("nonzero by vars()");
            if min < 0 {
                mult.push((v, -min));
            }
        }
        let m = ExponentVector::of(&mult);
        (self.shift(&m), m)
    }

    /// Reduce every coefficient to its symmetric residue modulo `m`,
    /// dropping terms that vanish.
    pub fn mod_reduce(&self, m: u64) -> LaurentPoly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = sym_mod_big(c, m)
                    .expect("mod_reduce requires modulus >= 2")
                    .value();
                if r == 0 {
                    None
                } else {
                    Some((e.clone(), BigInt::from(r)))
                }
            })
            .collect();
        LaurentPoly { terms }
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry -= c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.add(eb);
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical rendering: terms ascending in the graded order, exponents
    /// written as `x^-1`, explicit `*` between all factors, coefficient 1
    /// omitted before variables. Parses back to an equal polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.magnitude();
            let mut wrote_factor = false;
            if !mag.is_one() || e.is_empty() {
                write!(f, "{mag}")?;
                wrote_factor = true;
            }
            for (v, exp) in e.iter() {
                if wrote_factor {
                    f.write_str("*")?;
                }
                if exp == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{exp}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Var {
        Var::new("x")
    }

    fn y() -> Var {
        Var::new("y")
    }

    /// terms: (coefficient, [(var, exponent)...])
    fn poly(terms: &[(i64, &[(&str, i64)])]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(c, pairs)| {
            let ev = ExponentVector::of(
                &pairs
                    .iter()
                    .map(|&(name, e)| (Var::new(name), e))
                    .collect::<Vec<_>>(),
            );
            (ev, BigInt::from(c))
        }))
    }

    /// B = 2 + x + 1/x
    fn central_base() -> LaurentPoly {
        poly(&[(2, &[]), (1, &[("x", 1)]), (1, &[("x", -1)])])
    }

    #[test]
    fn interning_is_stable() {
        assert_eq!(Var::new("x"), Var::new("x"));
        assert!(Var::new("x") < Var::new("y"));
        assert_eq!(Var::new("x1").name(), "x1");
    }

    #[test]
    fn exponent_vector_drops_zeros_and_sorts() {
        let e = ExponentVector::of(&[(y(), 2), (x(), 1), (y(), -2)]);
        assert_eq!(e.get(x()), 1);
        assert_eq!(e.get(y()), 0);
        assert_eq!(e.iter().count(), 1);
        assert_eq!(ExponentVector::of(&[]), ExponentVector::empty());
    }

    #[test]
    fn graded_order_examples() {
        let inv_x = ExponentVector::single(x(), -1);
        let unit = ExponentVector::empty();
        let xe = ExponentVector::single(x(), 1);
        let ye = ExponentVector::single(y(), 1);
        let xy = ExponentVector::of(&[(x(), 1), (y(), 1)]);
        assert!(inv_x < unit);
        assert!(unit < xe);
        assert!(xe < ye || ye < xe); // total order within the grade
        assert!(unit < ye && ye < xy);
    }

    #[test]
    fn square_of_central_base() {
        let b = central_base();
        let expected = poly(&[
            (6, &[]),
            (4, &[("x", 1)]),
            (4, &[("x", -1)]),
            (1, &[("x", 2)]),
            (1, &[("x", -2)]),
        ]);
        assert_eq!(&b * &b, expected);
        assert_eq!(b.pow(2), expected);
    }

    #[test]
    fn constant_term_of_fourth_power() {
        // CT[(2 + x + 1/x)^4] = C(8, 4) = 70
        assert_eq!(central_base().pow(4).constant_term(), BigInt::from(70));
    }

    #[test]
    fn substitution_scales_exponents() {
        let b = central_base();
        let expected = poly(&[(2, &[]), (1, &[("x", 3)]), (1, &[("x", -3)])]);
        assert_eq!(b.subst_power(x(), 3), expected);
        assert_eq!(b.subst_power_all(3), expected);
    }

    #[test]
    fn frobenius_collapse_after_reduction() {
        // Expand (2 + x + 1/x)^5 exactly, then reduce mod 5: every mixed
        // term's coefficient is divisible by 5.
        let b = central_base();
        let expected = poly(&[(2, &[]), (1, &[("x", 5)]), (1, &[("x", -5)])]);
        assert_eq!(b.pow(5).mod_reduce(5), expected);
        assert_eq!(
            b.pow(5).mod_reduce(5),
            b.subst_power_all(5).mod_reduce(5)
        );
    }

    #[test]
    fn mod_reduce_uses_symmetric_coefficients() {
        let p = poly(&[(6, &[]), (4, &[("x", 1)]), (5, &[("x", 2)])]);
        let expected = poly(&[(1, &[]), (-1, &[("x", 1)])]);
        assert_eq!(p.mod_reduce(5), expected);
    }

    #[test]
    fn clear_denominator_examples() {
        // x + 1/x clears to 1 + x^2 with multiplier x.
        let d = poly(&[(1, &[("x", 1)]), (1, &[("x", -1)])]);
        let (q, m) = d.clear_denominator();
        assert_eq!(q, poly(&[(1, &[]), (1, &[("x", 2)])]));
        assert_eq!(m, ExponentVector::single(x(), 1));

        // (1+y)(1+1/x) - 1 = y + 1/x + y/x clears to 1 + y + x*y with
        // multiplier x.
        let p = poly(&[(1, &[]), (1, &[("y", 1)])]);
        let q2 = poly(&[(1, &[]), (1, &[("x", -1)])]);
        let d2 = &(&p * &q2) - &LaurentPoly::one();
        let (cleared, mult) = d2.clear_denominator();
        assert_eq!(
            cleared,
            poly(&[(1, &[]), (1, &[("y", 1)]), (1, &[("x", 1), ("y", 1)])])
        );
        assert_eq!(mult, ExponentVector::single(x(), 1));

        // A polynomial with no negative exponents clears trivially.
        let (same, none) = poly(&[(1, &[]), (2, &[("x", 3)])]).clear_denominator();
        assert_eq!(same, poly(&[(1, &[]), (2, &[("x", 3)])]));
        assert_eq!(none, ExponentVector::empty());
    }

    #[test]
    fn min_exponent_of_zero_polynomial_is_absent() {
        assert_eq!(LaurentPoly::zero().min_exponent(x()), None);
        assert_eq!(central_base().min_exponent(x()), Some(-1));
        assert_eq!(central_base().exponent_range(x()), Some((-1, 1)));
    }

    #[test]
    fn rendering_examples() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(central_base().to_string(), "x^-1 + 2 + x");
        let p = poly(&[(1, &[]), (1, &[("y", 1)]), (1, &[("x", 1), ("y", 1)])]);
        assert_eq!(p.to_string(), "1 + y + x*y");
        let q = poly(&[(-1, &[("x", 2)]), (2, &[]), (-3, &[("x", 1), ("y", -2)])]);
        // grades: -1 (x*y^-2), 0 (2), 2 (x^2)
        assert_eq!(q.to_string(), "-3*x*y^-2 + 2 - x^2");
    }

    #[test]
    fn zero_sums_collapse_to_empty_map() {
        let p = central_base();
        assert!((&p - &p).is_zero());
        assert_eq!(&p - &p, LaurentPoly::zero());
        let built = LaurentPoly::from_terms(vec![
            (ExponentVector::single(x(), 1), BigInt::from(3)),
            (ExponentVector::single(x(), 1), BigInt::from(-3)),
        ]);
        assert!(built.is_zero());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let p = poly(&[(1, &[]), (1, &[("x", 1)]), (-2, &[("y", -1)])]);
        let mut acc = LaurentPoly::one();
        for e in 0..=6u64 {
            assert_eq!(p.pow(e), acc, "exponent {e}");
            acc = &acc * &p;
        }
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        let term = (
            prop_oneof![Just("x"), Just("y"), Just("z")],
            -3i64..=3,
            prop_oneof![Just("x"), Just("y"), Just("z")],
            -3i64..=3,
            -9i64..=9,
        );
        proptest::collection::vec(term, 0..5).prop_map(|terms| {
            LaurentPoly::from_terms(terms.into_iter().map(|(v1, e1, v2, e2, c)| {
                (
                    ExponentVector::of(&[(Var::new(v1), e1), (Var::new(v2), e2)]),
                    BigInt::from(c),
                )
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), LaurentPoly::zero());
            prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
            prop_assert_eq!(&a * &LaurentPoly::zero(), LaurentPoly::zero());
        }

        #[test]
        fn freshman_dream_for_small_primes(a in arb_poly(), p in prop_oneof![Just(2u64), Just(3), Just(5)]) {
            // Raising to the p-th power commutes with x -> x^p modulo p.
            prop_assert_eq!(
                a.pow(p).mod_reduce(p),
                a.subst_power_all(p).mod_reduce(p)
            );
        }

        #[test]
        fn shift_by_clearing_multiplier_is_polynomial(a in arb_poly()) {
            let (q, m) = a.clear_denominator();
            prop_assert_eq!(a.shift(&m), q.clone());
            for v in q.vars() {
                prop_assert!(q.min_exponent(v).unwrap() >= 0);
            }
        }

        #[test]
        fn mod_reduce_is_ring_homomorphism(a in arb_poly(), b in arb_poly(), m in 2u64..50) {
            prop_assert_eq!(
                (&a * &b).mod_reduce(m),
                (&a.mod_reduce(m) * &b.mod_reduce(m)).mod_reduce(m)
            );
            prop_assert_eq!(
                (&a + &b).mod_reduce(m),
                (&a.mod_reduce(m) + &b.mod_reduce(m)).mod_reduce(m)
            );
        }
    }
}
