//! Exact multivariate polynomials, weight systems and the textual input format.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{self, int, QMatrix, Rational, Solution};

/// Exponent vector `nu` of the monomial `x^nu`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Polynomial over the rationals in `n` variables. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let n = m.nvars();
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.nvars(), n, "monomial length must match variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only the monomials accepted by `keep`.
    pub fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = a.mul(b);
                if keep(&m) {
                    out.add_term(m, x * y);
                }
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.n, Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, c * int(e as i64));
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Polynomial, ParseError> {
        parse_polynomial(text, None)
    }
}

/// Exact partials `f_1, ..., f_n`.
pub fn partial_derivatives(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.nvars()).map(|i| f.derivative(i)).collect()
}

impl fmt::Display for Polynomial {
    /// Canonical form: terms in decreasing lexicographic order of exponents,
    /// coefficients as reduced fractions. `parse` reads it back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_one = m.0.iter().all(|&e| e == 0);
            if is_one {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent at position {pos} is not a nonnegative integer")]
    BadExponent { pos: usize },
    #[error("variable index 0 at position {pos}; variables are x1..xn")]
    ZeroIndex { pos: usize },
    #[error("polynomial references x{found} but only {hint} variables were requested")]
    TooManyVariables { found: usize, hint: usize },
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<(usize, BigInt)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        Some((start, s.parse().ok()?))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }
}

/// Parses `poly := term (('+'|'-') term)*`, `term := coeff? ('*'? factor)*`,
/// `factor := 'x' INT ('^' INT)?`, `coeff := INT ('/' INT)?`. A leading sign
/// on the first term is accepted as well.
pub fn parse_polynomial(text: &str, n_hint: Option<usize>) -> Result<Polynomial, ParseError> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    // (coefficient, sparse exponents by 0-based index)
    let mut raw: Vec<(Rational, BTreeMap<usize, u32>)> = Vec::new();
    let mut max_var = 0usize;
    let mut sign = if lx.eat(b'-') {
        -Rational::one()
    } else {
        lx.eat(b'+');
        Rational::one()
    };
    loop {
        let (coeff, exps) = parse_term(&mut lx, &mut max_var)?;
        raw.push((sign * coeff, exps));
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                sign = Rational::one();
            }
            Some(b'-') => {
                lx.pos += 1;
                sign = -Rational::one();
            }
            Some(c) => return Err(lx.err(format!("unexpected character '{}'", c as char))),
        }
    }
    let n = match n_hint {
        Some(h) if h < max_var => {
            return Err(ParseError::TooManyVariables {
                found: max_var,
                hint: h,
            })
        }
        Some(h) => h,
        None => max_var,
    };
    let mut p = Polynomial::zero(n);
    for (c, exps) in raw {
        let mut e = vec![0u32; n];
        for (i, k) in exps {
            e[i] += k;
        }
        p.add_term(Monomial(e), c);
    }
    Ok(p)
}

fn parse_term(
    lx: &mut Lexer<'_>,
    max_var: &mut usize,
) -> Result<(Rational, BTreeMap<usize, u32>), ParseError> {
    let mut coeff = Rational::one();
    let mut exps = BTreeMap::new();
    let mut seen_anything = false;
    if let Some((_, num)) = lx.integer() {
        let den = if lx.eat(b'/') {
            match lx.integer() {
                Some((_, d)) if !d.is_zero() => d,
                Some(_) => return Err(lx.err("zero denominator")),
                None => return Err(lx.err("expected denominator")),
            }
        } else {
            BigInt::one()
        };
        coeff = Rational::new(num, den);
        seen_anything = true;
    }
    loop {
        let star = lx.eat(b'*');
        match lx.peek() {
            Some(b'x') => {
                lx.pos += 1;
                let Some((ipos, idx)) = lx.integer() else {
                    return Err(lx.err("expected variable index after 'x'"));
                };
                let idx = idx
                    .to_usize()
                    .ok_or_else(|| lx.err("variable index too large"))?;
                if idx == 0 {
                    return Err(ParseError::ZeroIndex { pos: ipos });
                }
                let mut e = 1u32;
                if lx.eat(b'^') {
                    let epos = {
                        lx.skip_ws();
                        lx.pos
                    };
                    let Some((_, k)) = lx.integer() else {
                        return Err(ParseError::BadExponent { pos: epos });
                    };
                    if matches!(lx.src.get(lx.pos), Some(b'.') | Some(b'/')) {
                        return Err(ParseError::BadExponent { pos: epos });
                    }
                    e = k.to_u32().ok_or(ParseError::BadExponent { pos: epos })?;
                }
                *max_var = (*max_var).max(idx);
                *exps.entry(idx - 1).or_insert(0) += e;
                seen_anything = true;
            }
            Some(c) if star || !seen_anything => {
                return Err(lx.err(format!("expected factor x<i>, found '{}'", c as char)))
            }
            None if star || !seen_anything => return Err(lx.err("unexpected end of input")),
            _ => break,
        }
    }
    Ok((coeff, exps))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight system is empty")]
    Empty,
    #[error("weight w{index} = {weight} violates 0 < w <= 1/2")]
    OutOfRange { index: usize, weight: Rational },
    #[error("cannot parse weight list: {0}")]
    Parse(String),
}

/// Rational weights `w_1..w_n` with `0 < w_i <= 1/2` and their least common
/// denominator `v`. Weighted degrees are handled as integers scaled by `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Rational>,
    denominator: u64,
    scaled: Vec<i64>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Rational>) -> Result<Self, WeightError> {
        if weights.is_empty() {
            return Err(WeightError::Empty);
        }
        let half = Rational::new(1.into(), 2.into());
        for (i, w) in weights.iter().enumerate() {
            if !w.is_positive() || *w > half {
                return Err(WeightError::OutOfRange {
                    index: i + 1,
                    weight: w.clone(),
                });
            }
        }
        let mut v = BigInt::one();
        for w in &weights {
            v = v.lcm(w.denom());
        }
        let scaled = weights
            .iter()
            .map(|w| {
                (w.numer() * (&v / w.denom()))
                    .to_i64()
                    .expect("weight numerator fits i64")
            })
            .collect();
        Ok(WeightSystem {
            weights,
            denominator: v.to_u64().expect("common denominator fits u64"),
            scaled,
        })
    }

    /// Parses `"1/6,1/4,1/4,1/4"`.
    pub fn parse(text: &str) -> Result<Self, WeightError> {
        let ws = text
            .split(',')
            .map(|s| {
                let s = s.trim();
                let (a, b) = s.split_once('/').unwrap_or((s, "1"));
                let a: BigInt = a
                    .trim()
                    .parse()
                    .map_err(|_| WeightError::Parse(s.to_string()))?;
                let b: BigInt = b
                    .trim()
                    .parse()
                    .map_err(|_| WeightError::Parse(s.to_string()))?;
                if b.is_zero() {
                    return Err(WeightError::Parse(s.to_string()));
                }
                Ok(Rational::new(a, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ws)
    }

    pub fn homogeneous(n: usize, d: u32) -> Self {
        Self::new(vec![exact::rat(1, d as i64); n]).expect("1/d is a valid weight for d >= 2")
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    /// Least common denominator `v`.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `v * w_i`.
    pub fn scaled(&self, i: usize) -> i64 {
        self.scaled[i]
    }

    pub fn scaled_weights(&self) -> &[i64] {
        &self.scaled
    }

    /// `sum w_i`, the weighted degree of the monomial 1 in the shifted convention.
    pub fn alpha_f(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn scaled_alpha_f(&self) -> i64 {
        self.scaled.iter().sum()
    }

    /// `v * alpha_w(nu)` (unshifted).
    pub fn scaled_plain_degree(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.scaled)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    /// `v * alpha_w(nu + 1)`.
    pub fn scaled_degree(&self, m: &Monomial) -> i64 {
        self.scaled_plain_degree(m) + self.scaled_alpha_f()
    }

    pub fn to_rational(&self, scaled: i64) -> Rational {
        Rational::new(scaled.into(), (self.denominator as i64).into())
    }

    /// `v * r` when it is an integer.
    pub fn scale(&self, r: &Rational) -> Option<i64> {
        let s = r * Rational::from_integer(BigInt::from(self.denominator));
        if s.is_integer() {
            s.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("zero polynomial has no weight system")]
    ZeroPolynomial,
    #[error("weights are not determined by the monomials of f; supply --weights")]
    Underdetermined,
    #[error("not quasihomogeneous: no weight system makes every monomial of degree 1")]
    Inconsistent,
    #[error("inferred weight w{index} = {weight} violates 0 < w <= 1/2")]
    OutOfRange { index: usize, weight: Rational },
}

/// Solves `sum_i w_i nu_i = 1` over all monomials of `f`; succeeds only when the
/// solution is unique and admissible.
pub fn infer_weights(f: &Polynomial) -> Result<WeightSystem, InferError> {
    if f.is_zero() {
        return Err(InferError::ZeroPolynomial);
    }
    let n = f.nvars();
    let rows: Vec<Vec<Rational>> = f
        .terms()
        .map(|(m, _)| m.0.iter().map(|&e| int(e as i64)).collect())
        .collect();
    let system = QMatrix::from_rows(n, &rows).expect("rows have n entries");
    let rhs = vec![Rational::one(); rows.len()];
    match exact::solve(&system, &rhs).expect("rhs matches row count") {
        Solution::Inconsistent => Err(InferError::Inconsistent),
        Solution::Underdetermined { .. } => Err(InferError::Underdetermined),
        Solution::Unique(w) => WeightSystem::new(w).map_err(|e| match e {
            WeightError::OutOfRange { index, weight } => InferError::OutOfRange { index, weight },
            _ => unreachable!("solution has n >= 1 entries"),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QHKind {
    Quasihomogeneous,
    SemiQuasihomogeneous,
    Invalid,
}

/// Splitting `f = f' + f''` into the weighted-degree-1 principal part and the
/// strictly higher tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHClassification {
    pub kind: QHKind,
    pub principal: Polynomial,
    pub tail: Polynomial,
    pub diagnostics: String,
}

pub fn classify(f: &Polynomial, w: &WeightSystem) -> QHClassification {
    let n = f.nvars();
    let v = w.denominator() as i64;
    let mut principal = Polynomial::zero(n);
    let mut tail = Polynomial::zero(n);
    let mut low = Vec::new();
    if w.n() != n {
        return QHClassification {
            kind: QHKind::Invalid,
            principal,
            tail,
            diagnostics: format!(
                "weight system has {} entries but f has {n} variables",
                w.n()
            ),
        };
    }
    for (m, c) in f.terms() {
        let d = w.scaled_plain_degree(m);
        match d.cmp(&v) {
            std::cmp::Ordering::Equal => principal.add_term(m.clone(), c.clone()),
            std::cmp::Ordering::Greater => tail.add_term(m.clone(), c.clone()),
            std::cmp::Ordering::Less => low.push(format!("{m} (degree {})", w.to_rational(d))),
        }
    }
    let (kind, diagnostics) = if !low.is_empty() {
        (
            QHKind::Invalid,
            format!("monomials of weighted degree < 1: {}", low.join(", ")),
        )
    } else if principal.is_zero() {
        (
            QHKind::Invalid,
            "no monomial of weighted degree 1".to_string(),
        )
    } else if tail.is_zero() {
        (
            QHKind::Quasihomogeneous,
            "all monomials have weighted degree 1".to_string(),
        )
    } else {
        (
            QHKind::SemiQuasihomogeneous,
            format!("{} tail monomial(s) of weighted degree > 1", tail.len()),
        )
    };
    QHClassification {
        kind,
        principal,
        tail,
        diagnostics,
    }
}
