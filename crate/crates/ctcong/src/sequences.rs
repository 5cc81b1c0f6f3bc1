//! Sequence families presented as constant terms `CT[Q · ∏ B_i^{n_i}]`,
//! each paired with a direct combinatorial formula used as an independent
//! oracle.
//!
//! Partial sums over index boxes come in two interchangeable flavors:
//! an exact big-integer accumulation and a p-adic fast path that reduces
//! every term modulo a prime power as it goes. [`SequenceSpec::partial_sum_exact`]
//! picks the fast path automatically when the modulus is a prime power.

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::laurent::{ExponentVector, LaurentPoly, Var};
use crate::numeric::{
    binomial_exact, binomial_mod_pk, multinomial_exact, multinomial_mod_pk, sym_mod_big,
    PrimePower, Residue,
};

/// How a family's terms are computed directly (without constant-term
/// extraction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectFormula {
    /// C(2n, n)
    CentralBinomial,
    /// C_n = C(2n,n) − C(2n,n−1)
    Catalan,
    /// M_n = Σ_k C(n,2k)·C_k
    Motzkin,
    /// T_n = Σ_k C(n,2k)·C(2k,k)
    CentralTrinomial,
    /// C(n+m, m)²
    BinomialSquared,
    /// (n_1+…+n_v)! / (n_1!·…·n_v!)
    Multinomial,
    /// No direct formula: fall back to constant-term expansion.
    CtFallback,
}

/// A sequence family: bases B_1..B_v and a multiplier Q defining terms
/// a(n_1..n_v) = CT[Q · ∏ B_i^{n_i}], plus the direct evaluator and the
/// smallest admissible prime.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    id: String,
    bases: Vec<LaurentPoly>,
    multiplier: LaurentPoly,
    direct: DirectFormula,
    min_prime: u64,
    symmetry: Option<u64>,
}

fn x() -> Var {
    Var::new("x")
}

fn y() -> Var {
    Var::new("y")
}

/// B = 2 + x + 1/x
fn central_base() -> LaurentPoly {
    &(&LaurentPoly::constant(2) + &LaurentPoly::variable(x()))
        + &LaurentPoly::monomial(ExponentVector::single(x(), -1), 1)
}

/// B = 1 + x + 1/x
fn trinomial_base() -> LaurentPoly {
    &(&LaurentPoly::one() + &LaurentPoly::variable(x()))
        + &LaurentPoly::monomial(ExponentVector::single(x(), -1), 1)
}

impl SequenceSpec {
    fn new(
        id: &str,
        bases: Vec<LaurentPoly>,
        multiplier: LaurentPoly,
        direct: DirectFormula,
        min_prime: u64,
        symmetry: Option<u64>,
    ) -> SequenceSpec {
        SequenceSpec {
            id: id.to_owned(),
            bases,
            multiplier,
            direct,
            min_prime,
            symmetry,
        }
    }

    /// The v-index multinomial family: B_i = (x_1+…+x_v)/x_i, Q = 1.
    pub fn multinomial(v: usize) -> SequenceSpec {
        assert!((2..=8).contains(&v), "multinomial arity must be 2..=8");
        let vars: Vec<Var> = (1..=v).map(|i| Var::new(&format!("x{i}"))).collect();
        let sum = vars
            .iter()
            .fold(LaurentPoly::zero(), |acc, &w| &acc + &LaurentPoly::variable(w));
        let bases = vars
            .iter()
            .map(|&w| sum.shift(&ExponentVector::single(w, -1)))
            .collect();
        SequenceSpec::new(
            &format!("multinomial{v}"),
            bases,
            LaurentPoly::one(),
            DirectFormula::Multinomial,
            3,
            Some(1),
        )
    }

    /// A user-supplied single-index family: terms CT[Q · B^n]. There is no
    /// direct formula, so oracles expand the constant term.
    pub fn custom(base: LaurentPoly, multiplier: Option<LaurentPoly>) -> SequenceSpec {
        SequenceSpec::new(
            "custom",
            vec![base],
            multiplier.unwrap_or_else(LaurentPoly::one),
            DirectFormula::CtFallback,
            3,
            None,
        )
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of summation indices.
    pub fn arity(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[LaurentPoly] {
        &self.bases
    }

    pub fn multiplier(&self) -> &LaurentPoly {
        &self.multiplier
    }

    pub fn direct(&self) -> DirectFormula {
        self.direct
    }

    pub fn min_prime(&self) -> u64 {
        self.min_prime
    }

    /// Residue-class modulus hint for the family's congruence pattern.
    pub fn symmetry(&self) -> Option<u64> {
        self.symmetry
    }

    /// Term by exact polynomial expansion: CT[Q · ∏ B_i^{n_i}].
    pub fn ct_term(&self, indices: &[u64]) -> BigInt {
        assert_eq!(indices.len(), self.arity(), "index tuple must match arity");
        let mut acc = self.multiplier.clone();
        for (base, &n) in self.bases.iter().zip(indices) {
            acc = &acc * &base.pow(n);
        }
        acc.constant_term()
    }

    /// Term by the direct combinatorial formula (falls back to [`Self::ct_term`]
    /// when none exists).
    pub fn direct_term(&self, indices: &[u64]) -> BigInt {
        assert_eq!(indices.len(), self.arity(), "index tuple must match arity");
        match self.direct {
            DirectFormula::CentralBinomial => binomial_exact(2 * indices[0], indices[0] as i64),
            DirectFormula::Catalan => catalan_exact(indices[0]),
            DirectFormula::Motzkin => motzkin_exact(indices[0]),
            DirectFormula::CentralTrinomial => central_trinomial_exact(indices[0]),
            DirectFormula::BinomialSquared => {
                let b = binomial_exact(indices[0] + indices[1], indices[1] as i64);
                &b * &b
            }
            DirectFormula::Multinomial => multinomial_exact(indices),
            DirectFormula::CtFallback => self.ct_term(indices),
        }
    }

    /// Term reduced modulo a prime power via p-adic binomial decomposition
    /// (constant-term families reduce an exact expansion instead).
    pub fn direct_term_mod(&self, indices: &[u64], pp: PrimePower) -> Residue {
        assert_eq!(indices.len(), self.arity(), "index tuple must match arity");
        let m = pp.modulus();
        match self.direct {
            DirectFormula::CentralBinomial => {
                binomial_mod_pk(2 * indices[0], indices[0] as i64, pp)
            }
            DirectFormula::Catalan => {
                let n = indices[0];
                binomial_mod_pk(2 * n, n as i64, pp) - binomial_mod_pk(2 * n, n as i64 - 1, pp)
            }
            DirectFormula::Motzkin => {
                let n = indices[0];
                let mut acc = crate::numeric::sym_mod(0, m).expect("valid modulus");
                for k in 0..=n / 2 {
                    let cat = binomial_mod_pk(2 * k, k as i64, pp)
                        - binomial_mod_pk(2 * k, k as i64 - 1, pp);
                    acc = acc + binomial_mod_pk(n, 2 * k as i64, pp) * cat;
                }
                acc
            }
            DirectFormula::CentralTrinomial => {
                let n = indices[0];
                let mut acc = crate::numeric::sym_mod(0, m).expect("valid modulus");
                for k in 0..=n / 2 {
                    acc = acc
                        + binomial_mod_pk(n, 2 * k as i64, pp)
                            * binomial_mod_pk(2 * k, k as i64, pp);
                }
                acc
            }
            DirectFormula::BinomialSquared => {
                let b = binomial_mod_pk(indices[0] + indices[1], indices[1] as i64, pp);
                b * b
            }
            DirectFormula::Multinomial => multinomial_mod_pk(indices, pp),
            DirectFormula::CtFallback => {
                sym_mod_big(&self.ct_term(indices), m).expect("valid modulus")
            }
        }
    }

    /// Σ over 0 ≤ n_i < bounds_i of the terms, reduced modulo `m`, with the
    /// sum carried as one exact big integer.
    pub fn partial_sum_bigint(&self, bounds: &[u64], m: u64) -> Residue {
        assert_eq!(bounds.len(), self.arity(), "bounds must match arity");
        if self.direct == DirectFormula::CtFallback {
            return self.partial_sum_ct(bounds, m);
        }
        let mut total = BigInt::zero();
        for_each_index(bounds, &mut |idx| {
            total += self.direct_term(idx);
        });
        sym_mod_big(&total, m).expect("valid modulus")
    }

    /// Σ over the same box with every term reduced modulo the prime power as
    /// it is produced.
    pub fn partial_sum_padic(&self, bounds: &[u64], pp: PrimePower) -> Residue {
        assert_eq!(bounds.len(), self.arity(), "bounds must match arity");
        let mut total = crate::numeric::sym_mod(0, pp.modulus()).expect("valid modulus");
        for_each_index(bounds, &mut |idx| {
            total = total + self.direct_term_mod(idx, pp);
        });
        total
    }

    /// Σ over the box modulo `m`, dispatching to the p-adic fast path when
    /// `m` is a prime power and the family has a direct formula.
    pub fn partial_sum_exact(&self, bounds: &[u64], m: u64) -> Residue {
        if self.direct != DirectFormula::CtFallback {
            if let Some(pp) = PrimePower::from_modulus(m) {
                return self.partial_sum_padic(bounds, pp);
            }
        }
        self.partial_sum_bigint(bounds, m)
    }

    /// Partial sum by constant-term expansion, keeping polynomial
    /// coefficients reduced modulo `m` throughout (sound because reduction
    /// is a ring homomorphism).
    fn partial_sum_ct(&self, bounds: &[u64], m: u64) -> Residue {
        let mut total: i128 = 0;
        fn rec(
            bases: &[LaurentPoly],
            bounds: &[u64],
            level: usize,
            acc: &LaurentPoly,
            m: u64,
            total: &mut i128,
        ) {
            if level == bases.len() {
                *total += sym_mod_big(&acc.constant_term(), m)
                    .expect("valid modulus")
                    .value() as i128;
                return;
            }
            let mut cur = acc.clone();
            for n in 0..bounds[level] {
                rec(bases, bounds, level + 1, &cur, m, total);
                if n + 1 < bounds[level] {
                    cur = (&cur * &bases[level]).mod_reduce(m);
                }
            }
        }
        let q = self.multiplier.mod_reduce(m);
        rec(&self.bases, bounds, 0, &q, m, &mut total);
        crate::numeric::sym_mod((total.rem_euclid(m as i128)) as i64, m).expect("valid modulus")
    }
}

/// Visit every index tuple of the box ∏ [0, bounds_i) in lexicographic
/// order without allocating per tuple. Any zero bound yields no tuples.
pub fn for_each_index(bounds: &[u64], f: &mut dyn FnMut(&[u64])) {
    if bounds.iter().any(|&b| b == 0) {
        return;
    }
    let mut idx = vec![0u64; bounds.len()];
    loop {
        f(&idx);
        let mut level = bounds.len();
        loop {
            if level == 0 {
                return;
            }
            level -= 1;
            idx[level] += 1;
            if idx[level] < bounds[level] {
                break;
            }
            idx[level] = 0;
        }
    }
}

pub(crate) fn catalan_exact(n: u64) -> BigInt {
    binomial_exact(2 * n, n as i64) - binomial_exact(2 * n, n as i64 - 1)
}

/// M_n = Σ_k C(n,2k)·C_k, with the binomial and Catalan factors advanced
/// incrementally so each term costs O(n) big-integer operations.
fn motzkin_exact(n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::from(1); // C(n, 2k)
    let mut catalan = BigInt::from(1); // C_k
    let mut k = 0u64;
    loop {
        total += &binom * &catalan;
        if 2 * (k + 1) > n {
            return total;
        }
        // C(n, 2k+2) = C(n, 2k) · (n−2k)(n−2k−1) / ((2k+1)(2k+2))
        binom = binom * (n - 2 * k) * (n - 2 * k - 1) / ((2 * k + 1) * (2 * k + 2));
        // C_{k+1} = C_k · 2(2k+1)/(k+2)
        catalan = catalan * 2u64 * (2 * k + 1) / (k + 2);
        k += 1;
    }
}

/// T_n = Σ_k C(n,2k)·C(2k,k), advanced incrementally as above.
pub(crate) fn central_trinomial_exact(n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::from(1); // C(n, 2k)
    let mut central = BigInt::from(1); // C(2k, k)
    let mut k = 0u64;
    loop {
        total += &binom * &central;
        if 2 * (k + 1) > n {
            return total;
        }
        binom = binom * (n - 2 * k) * (n - 2 * k - 1) / ((2 * k + 1) * (2 * k + 2));
        // C(2k+2, k+1) = C(2k, k) · 2(2k+1)/(k+1)
        central = central * 2u64 * (2 * k + 1) / (k + 1);
        k += 1;
    }
}

static REGISTRY: Lazy<Vec<SequenceSpec>> = Lazy::new(|| {
    let one_minus_x = &LaurentPoly::one() - &LaurentPoly::variable(x());
    let one_minus_x2 = &LaurentPoly::one() - &LaurentPoly::monomial(ExponentVector::single(x(), 2), 1);
    let one_plus = |p: &LaurentPoly| &LaurentPoly::one() + p;
    let bs_base1 = &one_plus(&LaurentPoly::variable(y()))
        * &one_plus(&LaurentPoly::monomial(ExponentVector::single(x(), -1), 1));
    let bs_base2 = &one_plus(&LaurentPoly::variable(x()))
        * &one_plus(&LaurentPoly::monomial(ExponentVector::single(y(), -1), 1));
    vec![
        SequenceSpec::new(
            "central_binomial",
            vec![central_base()],
            LaurentPoly::one(),
            DirectFormula::CentralBinomial,
            5,
            Some(3),
        ),
        SequenceSpec::new(
            "catalan",
            vec![central_base()],
            one_minus_x,
            DirectFormula::Catalan,
            5,
            Some(3),
        ),
        SequenceSpec::new(
            "motzkin",
            vec![trinomial_base()],
            one_minus_x2,
            DirectFormula::Motzkin,
            3,
            Some(4),
        ),
        SequenceSpec::new(
            "central_trinomial",
            vec![trinomial_base()],
            LaurentPoly::one(),
            DirectFormula::CentralTrinomial,
            3,
            None,
        ),
        SequenceSpec::new(
            "binomial_squared",
            vec![bs_base1, bs_base2],
            LaurentPoly::one(),
            DirectFormula::BinomialSquared,
            5,
            Some(3),
        ),
        SequenceSpec::multinomial(3),
        SequenceSpec::multinomial(4),
        SequenceSpec::multinomial(5),
    ]
});

/// The built-in families, in registry order.
pub fn registry() -> &'static [SequenceSpec] {
    &REGISTRY
}

/// Look up a built-in family by id. `multinomial2` through `multinomial8`
/// are recognized even though only 3..5 sit in the registry.
pub fn find_spec(id: &str) -> Option<SequenceSpec> {
    if let Some(spec) = REGISTRY.iter().find(|s| s.id() == id) {
        return Some(spec.clone());
    }
    if let Some(v) = id.strip_prefix("multinomial") {
        if let Ok(v) = v.parse::<usize>() {
            if (2..=8).contains(&v) {
                return Some(SequenceSpec::multinomial(v));
            }
        }
    }
    None
}
