//! Integer arithmetic foundations:
//!
//! - symmetric residues (`Residue`, [`sym_mod`]) in the range (-m/2, m/2],
//! - prime testing and enumeration ([`is_prime`], [`primes_in`]),
//! - exact binomial and multinomial coefficients over big integers,
//! - binomial coefficients modulo prime powers computed p-adically
//!   ([`binomial_mod_pk`]), never dividing by a multiple of p.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors from residue construction and prime-power validation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime-power exponent must lie in 1..=3, got {0}")]
    UnsupportedPower(u8),
}

/// A residue in the symmetric range (-m/2, m/2] for a modulus m >= 2.
///
/// The symmetric representative makes small negative values visible as such:
/// 4 mod 5 is -1, 6 mod 5 is 1. All arithmetic keeps the representative in
/// range; mixed-modulus arithmetic panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Residue {
    value: i64,
    modulus: u64,
}

impl Residue {
    /// The canonical representative, in (-m/2, m/2].
    pub fn value(&self) -> i64 {
        self.value
    }

    /// The modulus m.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Zero modulo `m`.
    pub fn zero(m: u64) -> Result<Residue, NumericError> {
        sym_mod(0, m)
    }

    /// The multiplicative inverse, if the value is a unit modulo m.
    pub fn inv(&self) -> Option<Residue> {
        let m = self.modulus as i128;
        let a = (self.value as i128).rem_euclid(m);
        let (mut r0, mut r1) = (m, a);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(Residue {
            value: reduce_i128(t0, self.modulus),
            modulus: self.modulus,
        })
    }

    /// Raise to a nonnegative power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Residue {
        let mut base = *self;
        let mut acc = Residue {
            value: reduce_i128(1, self.modulus),
            modulus: self.modulus,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn assert_same_modulus(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic requires equal moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(&rhs);
        Residue {
            value: reduce_i128(self.value as i128 + rhs.value as i128, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(&rhs);
        Residue {
            value: reduce_i128(self.value as i128 - rhs.value as i128, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(&rhs);
        Residue {
            value: reduce_i128(self.value as i128 * rhs.value as i128, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: reduce_i128(-(self.value as i128), self.modulus),
            modulus: self.modulus,
        }
    }
}

/// Reduce into the symmetric range (-m/2, m/2]. Requires m >= 2.
fn reduce_i128(a: i128, m: u64) -> i64 {
    debug_assert!(m >= 2);
    let r = a.rem_euclid(m as i128) as u64;
    if 2 * r > m {
        (r as i64) - (m as i64)
    } else {
        r as i64
    }
}

/// The symmetric residue of `a` modulo `m`.
///
/// Fails if `m < 2`. Examples: `sym_mod(6, 5) == 1`, `sym_mod(4, 5) == -1`.
pub fn sym_mod(a: i64, m: u64) -> Result<Residue, NumericError> {
    if m < 2 {
        return Err(NumericError::InvalidModulus(m));
    }
    Ok(Residue {
        value: reduce_i128(a as i128, m),
        modulus: m,
    })
}

/// [`sym_mod`] for big integers.
pub fn sym_mod_big(a: &BigInt, m: u64) -> Result<Residue, NumericError> {
    if m < 2 {
        return Err(NumericError::InvalidModulus(m));
    }
    let m_big = BigInt::from(m);
    let mut r = a % &m_big;
    if r.is_negative() {
        r += &m_big;
    }
    let r = r.to_u64().expect("reduced residue fits in u64");
    Ok(Residue {
        value: if 2 * r > m {
            (r as i64) - (m as i64)
        } else {
            r as i64
        },
        modulus: m,
    })
}

/// Deterministic primality by trial division (intended for p up to ~10^6).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes p with lo <= p <= hi, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// A validated prime power p^k with k in 1..=3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimePower {
    p: u64,
    k: u8,
}

impl PrimePower {
    pub fn new(p: u64, k: u8) -> Result<PrimePower, NumericError> {
        if !is_prime(p) {
            return Err(NumericError::NotPrime(p));
        }
        if !(1..=3).contains(&k) {
            return Err(NumericError::UnsupportedPower(k));
        }
        Ok(PrimePower { p, k })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// p^k as a plain modulus.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// Recognize a modulus of the form p^k with p prime and k in 1..=3.
    pub fn from_modulus(m: u64) -> Option<PrimePower> {
        for k in (1..=3u8).rev() {
            let root = integer_root(m, k as u32);
            if root.pow(k as u32) == m && is_prime(root) {
                return Some(PrimePower { p: root, k });
            }
        }
        None
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// Largest r with r^k <= m.
fn integer_root(m: u64, k: u32) -> u64 {
    if k == 1 {
        return m;
    }
    let mut r = (m as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.pow(k) > m {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= m) {
        r += 1;
    }
    r
}

/// Exact binomial coefficient C(n, k); zero outside 0 <= k <= n.
pub fn binomial_exact(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::from(1);
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Exact multinomial coefficient (p1 + ... + pv)! / (p1! ... pv!), computed
/// as a product of binomials over prefix sums.
pub fn multinomial_exact(parts: &[u64]) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut total = 0u64;
    for &part in parts {
        total += part;
        acc *= binomial_exact(total, part as i64);
    }
    acc
}

/// Product over prefix sums of [`binomial_mod_pk`]; the residue of the exact
/// multinomial coefficient modulo p^k.
pub fn multinomial_mod_pk(parts: &[u64], pp: PrimePower) -> Residue {
    let m = pp.modulus();
    let mut acc = sym_mod(1, m).expect("prime-power modulus is >= 2");
    let mut total = 0u64;
    for &part in parts {
        total += part;
        acc = acc * binomial_mod_pk(total, part as i64, pp);
    }
    acc
}

/// Exponent of p in n! (Legendre sum over base-p digits; equals the carry
/// count bound used below).
fn factorial_valuation(mut n: u64, p: u64) -> u64 {
    let mut total = 0;
    while n > 0 {
        n /= p;
        total += n;
    }
    total
}

/// Growable table of prefix products of p-coprime integers modulo p^k:
/// entry i holds the product of all j <= i with p not dividing j.
struct UnitTable {
    p: u64,
    pk: u64,
    prefix: Vec<u64>,
}

impl UnitTable {
    fn new(p: u64, pk: u64) -> UnitTable {
        UnitTable {
            p,
            pk,
            prefix: vec![1],
        }
    }

    fn extend_to(&mut self, n: u64) {
        let start = self.prefix.len() as u64;
        if start > n {
            return;
        }
        self.prefix.reserve((n + 1 - start) as usize);
        let mut acc = *self.prefix.last().expect("table starts nonempty");
        for j in start..=n {
            if j % self.p != 0 {
                acc = ((acc as u128 * j as u128) % self.pk as u128) as u64;
            }
            self.prefix.push(acc);
        }
    }

    /// The p-free part of n! modulo p^k: the product over all base-p scales
    /// of the prefix products of p-coprime integers. This identity is exact
    /// over the integers, so it holds modulo p^k in particular.
    fn unit_factorial(&mut self, n: u64) -> u64 {
        self.extend_to(n);
        let mut acc = 1u128;
        let mut scale = n;
        while scale > 0 {
            acc = acc * self.prefix[scale as usize] as u128 % self.pk as u128;
            scale /= self.p;
        }
        acc as u64
    }
}

thread_local! {
    static UNIT_TABLES: RefCell<HashMap<(u64, u8), UnitTable>> = RefCell::new(HashMap::new());
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// C(n, k) modulo p^k, computed p-adically: split each factorial into its
/// power of p (Legendre valuation) and its p-free part (a product of units,
/// taken from a cached prefix table), then recombine. Only units are ever
/// inverted, so the result is exact for any valuation.
pub fn binomial_mod_pk(n: u64, k: i64, pp: PrimePower) -> Residue {
    let modulus = pp.modulus();
    if k < 0 || k as u64 > n {
        return sym_mod(0, modulus).expect("prime-power modulus is >= 2");
    }
    let k = k as u64;
    let m = n - k;
    let nu = factorial_valuation(n, pp.p) - factorial_valuation(k, pp.p)
        - factorial_valuation(m, pp.p);
    if nu >= pp.k as u64 {
        return sym_mod(0, modulus).expect("prime-power modulus is >= 2");
    }
    let value = UNIT_TABLES.with(|tables| {
        let mut tables = tables.borrow_mut();
        let table = tables
            .entry((pp.p, pp.k))
            .or_insert_with(|| UnitTable::new(pp.p, modulus));
        let un = table.unit_factorial(n);
        let uk = table.unit_factorial(k);
        let um = table.unit_factorial(m);
        let denom = (uk as u128 * um as u128 % modulus as u128) as u64;
        let inv = inv_mod_u64(denom, modulus).expect("p-free parts are units mod p^k");
        let unit = (un as u128 * inv as u128 % modulus as u128) as u64;
        (pp.p.pow(nu as u32) as u128 * unit as u128 % modulus as u128) as u64
    });
    sym_mod(value as i64, modulus).expect("prime-power modulus is >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sym_mod_picks_symmetric_representative() {
        assert_eq!(sym_mod(6, 5).unwrap().value(), 1);
        assert_eq!(sym_mod(4, 5).unwrap().value(), -1);
        assert_eq!(sym_mod(0, 2).unwrap().value(), 0);
        // Even modulus: m/2 itself is kept positive.
        assert_eq!(sym_mod(2, 4).unwrap().value(), 2);
        assert_eq!(sym_mod(-2, 4).unwrap().value(), 2);
        assert_eq!(sym_mod(99, 5).unwrap().value(), -1);
        assert_eq!(sym_mod(99, 25).unwrap().value(), -1);
    }

    #[test]
    fn sym_mod_rejects_tiny_moduli() {
        assert_eq!(sym_mod(3, 0), Err(NumericError::InvalidModulus(0)));
        assert_eq!(sym_mod(3, 1), Err(NumericError::InvalidModulus(1)));
    }

    #[test]
    fn sym_mod_big_matches_plain() {
        for a in -50i64..=50 {
            for m in 2u64..=12 {
                assert_eq!(
                    sym_mod_big(&BigInt::from(a), m).unwrap(),
                    sym_mod(a, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn residue_arithmetic_stays_in_range() {
        let a = sym_mod(7, 11).unwrap();
        let b = sym_mod(9, 11).unwrap();
        assert_eq!((a + b).value(), 5);
        assert_eq!((a - b).value(), -2);
        assert_eq!((a * b).value(), -3); // 63 = 66 - 3
        assert_eq!((a * b), sym_mod(63, 11).unwrap());
        assert_eq!((-a).value(), 4);
    }

    #[test]
    fn residue_inverse_and_pow() {
        let a = sym_mod(3, 7).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!((a * inv).value(), 1);
        assert_eq!(a.pow(6).value(), 1); // Fermat
        assert!(sym_mod(5, 25).unwrap().inv().is_none());
        assert!(sym_mod(6, 25).unwrap().inv().is_some());
    }

    #[test]
    fn primality_small_cases() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(91)); // 7 * 13
        assert_eq!(primes_in(5, 20), vec![5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_in(24, 28), Vec::<u64>::new());
    }

    #[test]
    fn primality_matches_sieve_oracle() {
        // Independent sieve of Eratosthenes over 0..=10_000.
        let n = 10_000usize;
        let mut composite = vec![false; n + 1];
        for i in 2..=n {
            if !composite[i] {
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        for i in 0..=n {
            assert_eq!(is_prime(i as u64), i >= 2 && !composite[i], "n = {i}");
        }
    }

    #[test]
    fn binomial_exact_small_values() {
        assert_eq!(binomial_exact(8, 4), BigInt::from(70));
        assert_eq!(binomial_exact(9, 4), BigInt::from(126));
        assert_eq!(binomial_exact(5, 0), BigInt::from(1));
        assert_eq!(binomial_exact(5, 6), BigInt::zero());
        assert_eq!(binomial_exact(5, -1), BigInt::zero());
    }

    #[test]
    fn binomial_exact_matches_pascal_recurrence() {
        // Independent oracle: build Pascal's triangle by additions only.
        let rows = 41usize;
        let mut triangle: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
        for n in 1..rows {
            let prev = &triangle[n - 1];
            let mut row = vec![BigInt::from(1)];
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::from(1));
            triangle.push(row);
        }
        for n in 0..rows {
            for k in 0..=n {
                assert_eq!(binomial_exact(n as u64, k as i64), triangle[n][k]);
            }
        }
    }

    #[test]
    fn multinomial_iterated_binomials() {
        // (2+1+1)! / (2! 1! 1!) = 12
        assert_eq!(multinomial_exact(&[2, 1, 1]), BigInt::from(12));
        assert_eq!(multinomial_exact(&[3, 3]), binomial_exact(6, 3));
        assert_eq!(multinomial_exact(&[]), BigInt::from(1));
        assert_eq!(multinomial_exact(&[0, 0, 0]), BigInt::from(1));
    }

    #[test]
    fn prime_power_validation() {
        assert!(PrimePower::new(5, 3).is_ok());
        assert_eq!(PrimePower::new(6, 2), Err(NumericError::NotPrime(6)));
        assert_eq!(PrimePower::new(5, 0), Err(NumericError::UnsupportedPower(0)));
        assert_eq!(PrimePower::new(5, 4), Err(NumericError::UnsupportedPower(4)));
        assert_eq!(PrimePower::new(5, 2).unwrap().modulus(), 25);
    }

    #[test]
    fn prime_power_recognition() {
        assert_eq!(PrimePower::from_modulus(125), PrimePower::new(5, 3).ok());
        assert_eq!(PrimePower::from_modulus(49), PrimePower::new(7, 2).ok());
        assert_eq!(PrimePower::from_modulus(97), PrimePower::new(97, 1).ok());
        assert_eq!(PrimePower::from_modulus(12), None);
        assert_eq!(PrimePower::from_modulus(1), None);
        // 2^6 = 64 is p^k with k > 3; the largest admissible reading is none
        // (64 is not p, p^2, or p^3 for prime p).
        assert_eq!(PrimePower::from_modulus(64), None);
    }

    #[test]
    fn binomial_mod_pk_examples() {
        let p5_3 = PrimePower::new(5, 3).unwrap();
        // C(9,4) = 126 = 125 + 1
        assert_eq!(binomial_mod_pk(9, 4, p5_3).value(), 1);
        let p3_2 = PrimePower::new(3, 2).unwrap();
        // C(10,5) = 252 = 2^2 * 3^2 * 7
        assert_eq!(binomial_mod_pk(10, 5, p3_2).value(), 0);
        assert_eq!(binomial_mod_pk(5, 0, p5_3).value(), 1);
        assert_eq!(binomial_mod_pk(5, 7, p5_3).value(), 0);
    }

    #[test]
    fn binomial_mod_pk_matches_exact_reduction() {
        for &p in &[2u64, 3, 5, 7, 11, 13] {
            for k in 1..=3u8 {
                let pp = PrimePower::new(p, k).unwrap();
                for n in 0..=60u64 {
                    for j in 0..=n {
                        let exact = sym_mod_big(&binomial_exact(n, j as i64), pp.modulus());
                        assert_eq!(
                            binomial_mod_pk(n, j as i64, pp),
                            exact.unwrap(),
                            "C({n},{j}) mod {p}^{k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn multinomial_mod_pk_matches_exact_reduction() {
        let pp = PrimePower::new(5, 2).unwrap();
        for a in 0..=12u64 {
            for b in 0..=12u64 {
                for c in 0..=6u64 {
                    let exact = sym_mod_big(&multinomial_exact(&[a, b, c]), 25).unwrap();
                    assert_eq!(multinomial_mod_pk(&[a, b, c], pp), exact);
                }
            }
        }
    }

    #[test]
    fn wolstenholme_mod_p3() {
        // C(2p-1, p-1) = 1 mod p^3 for primes p >= 5.
        for p in primes_in(5, 50) {
            let pp = PrimePower::new(p, 3).unwrap();
            assert_eq!(
                binomial_mod_pk(2 * p - 1, (p - 1) as i64, pp).value(),
                1,
                "p = {p}"
            );
        }
    }

    #[test]
    fn babbage_mod_p2() {
        for p in primes_in(5, 50) {
            let pp = PrimePower::new(p, 2).unwrap();
            assert_eq!(
                binomial_mod_pk(2 * p - 1, (p - 1) as i64, pp).value(),
                1,
                "p = {p}"
            );
        }
    }

    proptest! {
        #[test]
        fn sym_mod_is_congruent_and_in_range(a in -1_000_000i64..1_000_000, m in 2u64..10_000) {
            let r = sym_mod(a, m).unwrap();
            let v = r.value();
            prop_assert_eq!((a - v).rem_euclid(m as i64), 0);
            prop_assert!(2 * v > -(m as i64) && 2 * v <= m as i64);
        }

        #[test]
        fn multinomial_permutation_invariant(mut parts in proptest::collection::vec(0u64..12, 1..5)) {
            let before = multinomial_exact(&parts);
            parts.reverse();
            prop_assert_eq!(multinomial_exact(&parts), before);
            parts.sort();
            prop_assert_eq!(multinomial_exact(&parts), multinomial_exact(&parts));
        }

        #[test]
        fn residue_ops_match_integer_ops(a in -500i64..500, b in -500i64..500, m in 2u64..1000) {
            let ra = sym_mod(a, m).unwrap();
            let rb = sym_mod(b, m).unwrap();
            prop_assert_eq!(ra + rb, sym_mod(a + b, m).unwrap());
            prop_assert_eq!(ra - rb, sym_mod(a - b, m).unwrap());
            prop_assert_eq!(ra * rb, sym_mod(a * b, m).unwrap());
        }
    }
}
