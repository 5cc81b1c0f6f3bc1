//! Truncated multivariate power series modulo m, and constant-term
//! extraction from rational functions.
//!
//! The central operation is [`rational_ct`]: given a Laurent numerator and a
//! list of denominator polynomials whose cleared forms have unit constant
//! term, it computes `CT[numer / ∏ denom]` by inverting the denominator
//! product as a truncated series and reading off the finitely many series
//! coefficients the numerator support selects.
//!
//! Series are stored densely (row-major over the truncation box); all the
//! boxes this crate needs are small — a few hundred cells per variable in
//! one dimension, a few thousand cells in two.

use thiserror::Error;

use crate::laurent::{ExponentVector, LaurentPoly, Var};
use crate::numeric::{sym_mod, sym_mod_big, Residue};

/// Errors from series construction and coefficient access.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// The denominator's constant term has no inverse modulo the requested
    /// modulus, so no power-series inverse exists.
    #[error("constant term {ct} is not invertible modulo {modulus}")]
    NonUnitConstantTerm { ct: i64, modulus: u64 },
    /// A coefficient outside the truncation box was requested.
    #[error("coefficient index {requested:?} lies outside the truncation box {bounds:?}")]
    OutOfBox {
        requested: Vec<usize>,
        bounds: Vec<usize>,
    },
}

/// Per-variable inclusive upper degree bounds for a truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBox {
    vars: Vec<Var>,
    bounds: Vec<usize>,
}

impl DegreeBox {
    /// Build a box from (variable, inclusive bound) pairs; variables are
    /// kept in sorted order.
    pub fn new(dims: &[(Var, usize)]) -> DegreeBox {
        let mut dims: Vec<(Var, usize)> = dims.to_vec();
        dims.sort_by_key(|&(v, _)| v);
        dims.dedup_by_key(|&mut (v, _)| v);
        DegreeBox {
            vars: dims.iter().map(|&(v, _)| v).collect(),
            bounds: dims.iter().map(|&(_, b)| b).collect(),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// Number of cells in the box (product of bound+1 over all variables).
    pub fn cell_count(&self) -> usize {
        self.bounds.iter().map(|&b| b + 1).product()
    }

    fn index_of(&self, exps: &[usize]) -> Option<usize> {
        let mut idx = 0usize;
        for (i, &e) in exps.iter().enumerate() {
            if e > self.bounds[i] {
                return None;
            }
            idx = idx * (self.bounds[i] + 1) + e;
        }
        Some(idx)
    }

    /// The position of `var` in this box's dimension order.
    fn axis_of(&self, var: Var) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    /// Convert an exponent vector with all exponents ≥ 0 into box
    /// coordinates, or None when it does not fit.
    fn coords_of(&self, e: &ExponentVector) -> Option<Vec<usize>> {
        let mut coords = vec![0usize; self.vars.len()];
        for (v, exp) in e.iter() {
            if exp < 0 {
                return None;
            }
            let axis = self.axis_of(v)?;
            if exp as usize > self.bounds[axis] {
                return None;
            }
            coords[axis] = exp as usize;
        }
        Some(coords)
    }
}

/// A multivariate power series truncated to a [`DegreeBox`], with
/// coefficients stored as symmetric residues modulo a fixed modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    degree_box: DegreeBox,
    modulus: u64,
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    pub fn degree_box(&self) -> &DegreeBox {
        &self.degree_box
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coefficient at the given box coordinates (one per box variable, in
    /// the box's sorted variable order).
    pub fn coeff(&self, exps: &[usize]) -> Result<Residue, SeriesError> {
        assert_eq!(
            exps.len(),
            self.degree_box.vars.len(),
            "coordinate rank must match the box rank"
        );
        match self.degree_box.index_of(exps) {
            Some(idx) => Ok(sym_mod(self.coeffs[idx], self.modulus).expect("valid modulus")),
            None => Err(SeriesError::OutOfBox {
                requested: exps.to_vec(),
                bounds: self.degree_box.bounds.clone(),
            }),
        }
    }

    /// Coefficient addressed by an exponent vector (exponents of variables
    /// absent from the box must be zero).
    pub fn coeff_at(&self, e: &ExponentVector) -> Result<Residue, SeriesError> {
        match self.degree_box.coords_of(e) {
            Some(coords) => self.coeff(&coords),
            None => Err(SeriesError::OutOfBox {
                requested: e.iter().map(|(_, x)| x.unsigned_abs() as usize).collect(),
                bounds: self.degree_box.bounds.clone(),
            }),
        }
    }
}

/// Invert a polynomial with nonnegative exponents and unit constant term as
/// a power series modulo `m`, truncated to `degree_box`.
///
/// The defining recurrence S[e] = c0⁻¹·(δ_{e,0} − Σ_{0<d≤e} R[d]·S[e−d]) is
/// evaluated cell by cell in row-major order, which always visits S[e−d]
/// before S[e].
pub fn invert_unit(
    r: &LaurentPoly,
    m: u64,
    degree_box: &DegreeBox,
) -> Result<TruncatedSeries, SeriesError> {
    let ct = sym_mod_big(&r.constant_term(), m).expect("valid modulus");
    let inv_c0 = ct.inv().ok_or(SeriesError::NonUnitConstantTerm {
        ct: ct.value(),
        modulus: m,
    })?;

    // Collect the nonconstant terms of R that can influence any cell of the
    // box: nonnegative exponents only (a precondition), within bounds.
    let rank = degree_box.vars.len();
    let mut conv_terms: Vec<(Vec<usize>, i64)> = Vec::new();
    for (e, c) in r.terms() {
        if e.is_empty() {
            continue;
        }
        for (v, exp) in e.iter() {
            assert!(exp >= 0, "invert_unit requires nonnegative exponents, got {v}^{exp}");
            assert!(
                degree_box.axis_of(v).is_some(),
                "denominator variable {v} missing from the truncation box"
            );
        }
        if let Some(coords) = degree_box.coords_of(e) {
            let coeff = sym_mod_big(c, m).expect("valid modulus").value();
            if coeff != 0 {
                conv_terms.push((coords, coeff));
            }
        }
    }

    let total = degree_box.cell_count();
    let mut coeffs = vec![0i64; total];
    let m_i128 = m as i128;
    let mut cursor = vec![0usize; rank];
    for idx in 0..total {
        let mut acc: i128 = if idx == 0 { 1 } else { 0 };
        'terms: for (d, c) in &conv_terms {
            let mut prev = vec![0usize; rank];
            for axis in 0..rank {
                match cursor[axis].checked_sub(d[axis]) {
                    Some(x) => prev[axis] = x,
                    None => continue 'terms,
                }
            }
            let prev_idx = degree_box.index_of(&prev).expect("within box");
            acc -= (*c as i128) * (coeffs[prev_idx] as i128);
        }
        let acc = (acc.rem_euclid(m_i128)) as i64;
        coeffs[idx] = (sym_mod(acc, m).expect("valid modulus") * inv_c0).value();

        // Advance the row-major odometer.
        for axis in (0..rank).rev() {
            if cursor[axis] < degree_box.bounds[axis] {
                cursor[axis] += 1;
                break;
            }
            cursor[axis] = 0;
        }
    }

    Ok(TruncatedSeries {
        degree_box: degree_box.clone(),
        modulus: m,
        coeffs,
    })
}

/// Constant term of `numer / ∏ denom_factors` modulo `m`.
///
/// Each denominator factor is cleared to a polynomial (shifting the
/// numerator by the clearing monomial), the cleared product is inverted once
/// over a box derived from the numerator support (per variable, the most
/// negative numerator exponent, clipped at 0), and the constant term is the
/// sum of numer-coefficient × series-coefficient over all numerator terms
/// with no positive exponent.
pub fn rational_ct(
    numer: &LaurentPoly,
    denom_factors: &[LaurentPoly],
    m: u64,
) -> Result<Residue, SeriesError> {
    rational_ct_with_margin(numer, denom_factors, m, 0)
}

/// [`rational_ct`] with every box bound enlarged by `margin`; the result is
/// independent of the margin (exercised by tests as a correctness property).
pub(crate) fn rational_ct_with_margin(
    numer: &LaurentPoly,
    denom_factors: &[LaurentPoly],
    m: u64,
    margin: usize,
) -> Result<Residue, SeriesError> {
    if numer.is_zero() {
        return Ok(sym_mod(0, m).expect("valid modulus"));
    }

    // Clear each factor and fold the clearing monomials into the numerator:
    // numer/∏D_i == (numer·∏x^{s_i}) / ∏R_i.
    let mut cleared = LaurentPoly::one();
    let mut shift = ExponentVector::empty();
    for d in denom_factors {
        let (r, s) = d.clear_denominator();
        cleared = (&cleared * &r).mod_reduce(m);
        shift = shift.add(&s);
    }
    let numer = numer.shift(&shift);

    if denom_factors.is_empty() {
        return Ok(sym_mod_big(&numer.constant_term(), m).expect("valid modulus"));
    }

    // Box: for each variable anywhere in the expression, the deepest
    // negative numerator exponent (clipped at 0) bounds which series
    // coefficients can contribute to the constant term.
    let mut dims: Vec<(Var, usize)> = Vec::new();
    let mut vars = numer.vars();
    vars.extend(cleared.vars());
    vars.sort();
    vars.dedup();
    for v in vars {
        let min = numer.min_exponent(v).unwrap_or(0);
        dims.push((v, usize::try_from(-min.min(0)).expect("nonnegative") + margin));
    }
    let degree_box = DegreeBox::new(&dims);
    let series = invert_unit(&cleared, m, &degree_box)?;

    let mut acc: i128 = 0;
    for (e, c) in numer.terms() {
        if !e.all_nonpositive() {
            continue;
        }
        let s = series.coeff_at(&e.neg()).expect("within box by construction");
        let c = sym_mod_big(c, m).expect("valid modulus").value();
        acc += (c as i128) * (s.value() as i128);
    }
    Ok(sym_mod((acc.rem_euclid(m as i128)) as i64, m).expect("valid modulus"))
}

/// The coefficient of x^n y^n in a bivariate truncated series.
pub fn diagonal(s: &TruncatedSeries, n: usize) -> Result<Residue, SeriesError> {
    assert_eq!(
        s.degree_box().vars().len(),
        2,
        "diagonal is defined for bivariate series"
    );
    s.coeff(&[n, n])
}
