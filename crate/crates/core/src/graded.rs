//! Weighted grading of the local ring, the graded Jacobian ideal and the Milnor
//! algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{sparse_from_rationals, QMatrix, Rational, SparseEchelon};
use crate::poly::{partial_derivatives, Monomial, Polynomial, WeightSystem};

/// A weighted degree stored as `scaled / den`, with `den` the common
/// denominator of the weight system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeIndex {
    pub scaled: i64,
    pub den: u64,
}

impl DegreeIndex {
    pub fn new(scaled: i64, w: &WeightSystem) -> Self {
        DegreeIndex {
            scaled,
            den: w.denominator(),
        }
    }

    /// `None` when `r` is not on the grid `(1/v) Z`.
    pub fn from_rational(r: &Rational, w: &WeightSystem) -> Option<Self> {
        w.scale(r).map(|s| Self::new(s, w))
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.scaled), BigInt::from(self.den))
    }
}

impl fmt::Display for DegreeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Shifted degree `alpha_w(nu + 1)` of `x^nu`.
pub fn weighted_degree(m: &Monomial, w: &WeightSystem) -> DegreeIndex {
    DegreeIndex::new(w.scaled_degree(m), w)
}

/// Monomials `x^nu` with `v * alpha_w(nu)` (unshifted) equal to `plain`, in
/// increasing lexicographic order.
pub fn monomials_of_plain_degree(w: &WeightSystem, plain: i64) -> Vec<Monomial> {
    fn rec(a: &[i64], i: usize, rest: i64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == a.len() {
            if rest % a[i] == 0 {
                cur.push((rest / a[i]) as u32);
                out.push(Monomial(cur.clone()));
                cur.pop();
            }
            return;
        }
        let mut e = 0;
        while e * a[i] <= rest {
            cur.push(e as u32);
            rec(a, i + 1, rest - e * a[i], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if plain >= 0 {
        rec(w.scaled_weights(), 0, plain, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis of `A^alpha`: all `x^nu` with `alpha_w(nu + 1) = alpha`, lexicographic.
pub fn enumerate_monomials(w: &WeightSystem, alpha: DegreeIndex) -> Vec<Monomial> {
    if alpha.den != w.denominator() {
        return Vec::new();
    }
    monomials_of_plain_degree(w, alpha.scaled - w.scaled_alpha_f())
}

/// All monomials of shifted scaled degree at most `max_scaled`, ordered by
/// degree and then lexicographically.
pub fn monomials_up_to(w: &WeightSystem, max_scaled: i64) -> Vec<Monomial> {
    let af = w.scaled_alpha_f();
    (af..=max_scaled)
        .flat_map(|d| monomials_of_plain_degree(w, d - af))
        .collect()
}

/// Column index for a list of monomials.
#[derive(Debug, Clone, Default)]
pub struct MonomialIndex {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        MonomialIndex { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Coordinates of `p` restricted to the indexed monomials; other terms are
    /// dropped.
    pub fn coords(&self, p: &Polynomial) -> Vec<(usize, Rational)> {
        p.terms()
            .filter_map(|(m, c)| self.get(m).map(|i| (i, c.clone())))
            .collect()
    }

    pub fn dense(&self, p: &Polynomial) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for (i, c) in self.coords(p) {
            v[i] = c;
        }
        v
    }
}

/// Degree-`alpha` slice of `A` together with the coordinates of the degree-`alpha`
/// slice of the Jacobian ideal.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub degree: DegreeIndex,
    pub basis: Vec<Monomial>,
    /// One row per generator `x^mu f_i` of the slice, in `basis` coordinates.
    pub ideal_generators: QMatrix,
    /// Monomials whose classes form a basis of the Milnor algebra in this degree.
    pub quotient_basis: Vec<Monomial>,
}

/// Generators `x^mu f_i` of the degree-`alpha` slice of `(df)` for a
/// quasihomogeneous `f`.
fn jacobian_slice_generators(
    partials: &[Polynomial],
    w: &WeightSystem,
    alpha_scaled: i64,
) -> Vec<Polynomial> {
    let v = w.denominator() as i64;
    let mut gens = Vec::new();
    for (i, fi) in partials.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        let src = alpha_scaled - v + w.scaled(i);
        for mu in enumerate_monomials(w, DegreeIndex::new(src, w)) {
            gens.push(fi.mul_monomial(&mu));
        }
    }
    gens
}

pub fn milnor_piece(f: &Polynomial, w: &WeightSystem, alpha: DegreeIndex) -> (GradedPiece, usize) {
    milnor_piece_with(&partial_derivatives(f), w, alpha)
}

fn milnor_piece_with(
    partials: &[Polynomial],
    w: &WeightSystem,
    alpha: DegreeIndex,
) -> (GradedPiece, usize) {
    let basis = enumerate_monomials(w, alpha);
    let index = MonomialIndex::new(basis.clone());
    let gens = if basis.is_empty() {
        Vec::new()
    } else {
        jacobian_slice_generators(partials, w, alpha.scaled)
    };
    let rows: Vec<Vec<Rational>> = gens.iter().map(|g| index.dense(g)).collect();
    let mut ech = SparseEchelon::new();
    for g in &gens {
        ech.insert(sparse_from_rationals(index.coords(g)));
    }
    let pivots: std::collections::HashSet<usize> = ech.pivots().collect();
    let quotient_basis: Vec<Monomial> = (0..basis.len())
        .filter(|c| !pivots.contains(c))
        .map(|c| basis[c].clone())
        .collect();
    let dim = quotient_basis.len();
    let ideal_generators = QMatrix::from_rows(basis.len(), &rows).expect("rows match basis");
    (
        GradedPiece {
            degree: alpha,
            basis,
            ideal_generators,
            quotient_basis,
        },
        dim,
    )
}

/// Milnor algebra dimension in each scaled degree of `lo..=hi`.
pub fn milnor_dims(f: &Polynomial, w: &WeightSystem, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
    let partials = partial_derivatives(f);
    (lo..=hi)
        .into_par_iter()
        .map(|s| (s, milnor_piece_with(&partials, w, DegreeIndex::new(s, w)).1))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error("singularity is not isolated: Milnor algebra is nonzero in degree {degree}")]
    NotIsolated { degree: Rational },
    #[error("product formula is not a polynomial for these weights")]
    NotPolynomial,
    #[error("non-isolated or internal inconsistency: Milnor basis exponents differ from the product formula")]
    ExponentMismatch,
}

/// Exponents read off the product `prod_i (t^{w_i} - t) / (1 - t^{w_i})`,
/// expanded in `u = t^{1/v}`. Returned as scaled degrees with multiplicity.
pub fn poincare_scaled(w: &WeightSystem) -> Result<BTreeMap<i64, usize>, MilnorError> {
    let v = w.denominator() as usize;
    let mut num = vec![BigInt::from(1)];
    let mut den = vec![BigInt::from(1)];
    for &a in w.scaled_weights() {
        let a = a as usize;
        let mut factor = vec![BigInt::zero(); v + 1];
        factor[a] += 1;
        factor[v] -= 1;
        num = poly_mul(&num, &factor);
        let mut d = vec![BigInt::zero(); a + 1];
        d[0] += 1;
        d[a] -= 1;
        den = poly_mul(&den, &d);
    }
    // Long division from the bottom: den has constant term 1.
    let qlen = num.len() + 1 - den.len().min(num.len() + 1);
    let mut rem = num;
    let mut quo = vec![BigInt::zero(); qlen];
    for k in 0..qlen {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quo[k] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(MilnorError::NotPolynomial);
    }
    let mut out = BTreeMap::new();
    for (k, c) in quo.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = c.to_usize().ok_or(MilnorError::NotPolynomial)?;
        out.insert(k as i64, m);
    }
    Ok(out)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sorted exponent multiset from the product formula.
pub fn poincare_exponents(w: &WeightSystem) -> Result<Vec<Rational>, MilnorError> {
    Ok(expand_multiset(&poincare_scaled(w)?, w))
}

fn expand_multiset(dims: &BTreeMap<i64, usize>, w: &WeightSystem) -> Vec<Rational> {
    dims.iter()
        .flat_map(|(&s, &m)| std::iter::repeat_n(w.to_rational(s), m))
        .collect()
}

/// `prod_i (1/w_i - 1)`.
pub fn milnor_number_formula(w: &WeightSystem) -> Rational {
    w.weights()
        .iter()
        .map(|wi| wi.recip() - Rational::from_integer(1.into()))
        .product()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorData {
    pub mu: usize,
    /// Sorted with multiplicity.
    pub exponents: Vec<Rational>,
    /// Nonzero dimensions keyed by scaled degree.
    pub per_degree_dims: BTreeMap<i64, usize>,
    /// Monomial basis of the Milnor algebra per scaled degree.
    pub basis: BTreeMap<i64, Vec<Monomial>>,
    pub weights: WeightSystem,
    pub n: usize,
}

impl MilnorData {
    pub fn dim_at(&self, scaled: i64) -> usize {
        self.per_degree_dims.get(&scaled).copied().unwrap_or(0)
    }

    pub fn alpha_f(&self) -> Rational {
        self.weights.alpha_f()
    }

    /// `v * (n - alpha_f)`.
    pub fn scaled_top(&self) -> i64 {
        top_scaled(&self.weights)
    }
}

/// `v * (n - alpha_f)`, the top degree of the Milnor algebra.
pub fn top_scaled(w: &WeightSystem) -> i64 {
    w.n() as i64 * w.denominator() as i64 - w.scaled_alpha_f()
}

/// True iff `(df)^alpha = A^alpha` on every grid degree of the window
/// `(n - alpha_f, n - alpha_f + 1]`. Since every `w_i <= 1/2`, fullness on the
/// window propagates to all higher degrees.
pub fn isolated_singularity_check(f: &Polynomial, w: &WeightSystem) -> bool {
    first_window_failure(f, w).is_none()
}

fn first_window_failure(f: &Polynomial, w: &WeightSystem) -> Option<i64> {
    let top = top_scaled(w);
    let v = w.denominator() as i64;
    let dims = milnor_dims(f, w, top + 1, top + v);
    dims.into_iter().find(|&(_, d)| d != 0).map(|(s, _)| s)
}

/// Milnor algebra of a quasihomogeneous `f` with both exponent routes checked.
pub fn milnor_data(f: &Polynomial, w: &WeightSystem) -> Result<MilnorData, MilnorError> {
    if let Some(s) = first_window_failure(f, w) {
        return Err(MilnorError::NotIsolated {
            degree: w.to_rational(s),
        });
    }
    let partials = partial_derivatives(f);
    let lo = w.scaled_alpha_f();
    let hi = top_scaled(w);
    let pieces: Vec<(i64, Vec<Monomial>)> = (lo..=hi)
        .into_par_iter()
        .map(|s| {
            (
                s,
                milnor_piece_with(&partials, w, DegreeIndex::new(s, w))
                    .0
                    .quotient_basis,
            )
        })
        .collect();
    let mut per_degree_dims = BTreeMap::new();
    let mut basis = BTreeMap::new();
    for (s, b) in pieces {
        if !b.is_empty() {
            per_degree_dims.insert(s, b.len());
            basis.insert(s, b);
        }
    }
    let product = poincare_scaled(w).map_err(|_| MilnorError::ExponentMismatch)?;
    if product != per_degree_dims {
        return Err(MilnorError::ExponentMismatch);
    }
    Ok(MilnorData {
        mu: per_degree_dims.values().sum(),
        exponents: expand_multiset(&per_degree_dims, w),
        per_degree_dims,
        basis,
        weights: w.clone(),
        n: w.n(),
    })
}

/// A polynomial generator whose lowest weighted-degree part starts at
/// `start` (scaled, shifted).
#[derive(Debug, Clone)]
pub struct FilteredGenerator {
    pub start: i64,
    pub poly: Polynomial,
}

/// Dimensions of the `U`-graded pieces `Gr^alpha` of the span of `gens`, for
/// every scaled degree up to `max_scaled`.
///
/// Columns are ordered by degree, so the echelon pivot of a span vector is its
/// leading column; counting pivots per degree gives the graded dimensions.
/// Generators starting above `max_scaled` cannot contribute and are skipped;
/// terms above `max_scaled` are truncated.
pub fn filtered_leading_dims(
    gens: &[FilteredGenerator],
    w: &WeightSystem,
    max_scaled: i64,
) -> BTreeMap<i64, usize> {
    let cols = MonomialIndex::new(monomials_up_to(w, max_scaled));
    let mut ech = SparseEchelon::new();
    for g in gens.iter().filter(|g| g.start <= max_scaled) {
        ech.insert(sparse_from_rationals(cols.coords(&g.poly)));
    }
    let mut out = BTreeMap::new();
    for p in ech.pivots() {
        *out.entry(w.scaled_degree(cols.monomial(p))).or_insert(0) += 1;
    }
    out
}

/// Lowest shifted scaled degree among the terms of `p`.
pub fn start_degree(p: &Polynomial, w: &WeightSystem) -> Option<i64> {
    p.terms().map(|(m, _)| w.scaled_degree(m)).min()
}

/// Graded dimensions of `Gr_U` of the Milnor algebra of a possibly
/// semiquasihomogeneous `f`, for scaled degrees `alpha_f ..= max_scaled`.
pub fn filtered_milnor_dims(
    f: &Polynomial,
    w: &WeightSystem,
    max_scaled: i64,
) -> BTreeMap<i64, usize> {
    let mut gens = Vec::new();
    for fi in partial_derivatives(f) {
        let Some(s0) = start_degree(&fi, w) else {
            continue;
        };
        for d in 0..=(max_scaled - s0) {
            for mu in monomials_of_plain_degree(w, d) {
                gens.push(FilteredGenerator {
                    start: s0 + d,
                    poly: fi.mul_monomial(&mu),
                });
            }
        }
    }
    let ideal = filtered_leading_dims(&gens, w, max_scaled);
    (w.scaled_alpha_f()..=max_scaled)
        .map(|s| {
            let total = monomials_of_plain_degree(w, s - w.scaled_alpha_f()).len();
            (s, total - ideal.get(&s).copied().unwrap_or(0))
        })
        .collect()
}
