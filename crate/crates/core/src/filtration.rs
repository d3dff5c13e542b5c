//! Graded models of `A[1/f]`, `A[1/f]/A` and the intersection-cohomology
//! submodule, with their Hodge filtrations computed slice by slice.
//!
//! An element `g / f^P` is stored by its numerator and pole order. Spans are
//! always compared after lifting to a common pole, which turns every question
//! into linear algebra on one weighted slice of the polynomial ring.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::exact::{int, sparse_from_rationals, Rational, SparseEchelon};
use crate::graded::{
    filtered_milnor_dims, milnor_dims, monomials_of_plain_degree, top_scaled, DegreeIndex,
    MonomialIndex,
};
use crate::poly::{classify, partial_derivatives, Monomial, Polynomial, QHKind, WeightSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleTag {
    /// `A[1/f]`.
    Mprime,
    /// `A[1/f] / A`.
    Mdoubleprime,
    /// The intersection-cohomology submodule of `A[1/f] / A`.
    M,
}

impl ModuleTag {
    pub const ALL: [ModuleTag; 3] = [ModuleTag::Mprime, ModuleTag::Mdoubleprime, ModuleTag::M];

    /// Lowest index with `F_p != 0`.
    pub fn lowest_index(self) -> i64 {
        match self {
            ModuleTag::M => 1,
            _ => 0,
        }
    }

    /// Generators need numerator order strictly above the pole order.
    pub fn strict(self) -> bool {
        self == ModuleTag::M
    }

    pub fn modulo_ring(self) -> bool {
        self != ModuleTag::Mprime
    }
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleTag::Mprime => "Mprime",
            ModuleTag::Mdoubleprime => "Mdoubleprime",
            ModuleTag::M => "M",
        })
    }
}

impl FromStr for ModuleTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Mprime" => Ok(ModuleTag::Mprime),
            "Mdoubleprime" => Ok(ModuleTag::Mdoubleprime),
            "M" => Ok(ModuleTag::M),
            _ => Err(format!(
                "unknown module '{s}' (expected Mprime, Mdoubleprime or M)"
            )),
        }
    }
}

/// `numerator / f^pole`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    pub numerator: Polynomial,
    pub pole: u32,
}

impl ModuleElement {
    pub fn new(numerator: Polynomial, pole: u32) -> Self {
        ModuleElement { numerator, pole }
    }

    /// Order `v_w(numerator) - pole` in scaled units; `None` for zero.
    pub fn order(&self, w: &WeightSystem) -> Option<i64> {
        self.numerator
            .terms()
            .map(|(m, _)| w.scaled_degree(m))
            .min()
            .map(|d| d - self.pole as i64 * w.denominator() as i64)
    }

    /// `d_i (g/f^P) = (f d_i g - P g f_i) / f^{P+1}`, dropping numerator terms
    /// of scaled degree above `bound`. Every term of the result has degree at
    /// least that of its source term, so truncation commutes with the step.
    pub fn derivative(&self, i: usize, ctx: &Context, bound: Option<i64>) -> ModuleElement {
        let keep = |m: &Monomial| bound.is_none_or(|b| ctx.w.scaled_degree(m) <= b);
        let a = self.numerator.derivative(i).mul_filtered(&ctx.f, keep);
        let b = self
            .numerator
            .mul_filtered(&ctx.partials[i], keep)
            .scale(&int(self.pole as i64));
        ModuleElement::new(a.sub(&b), self.pole + 1)
    }

    /// Rewrites over `f^pole` with `pole >= self.pole`.
    pub fn lift(&self, pole: u32, ctx: &Context, bound: Option<i64>) -> ModuleElement {
        let keep = |m: &Monomial| bound.is_none_or(|b| ctx.w.scaled_degree(m) <= b);
        let e = pole.checked_sub(self.pole).expect("lift to a higher pole");
        ModuleElement::new(self.numerator.mul_filtered(&ctx.f_power(e), keep), pole)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/f^{}", self.numerator, self.pole)
    }
}

/// Shared data for one input polynomial.
#[derive(Debug, Clone)]
pub struct Context {
    pub f: Polynomial,
    pub w: WeightSystem,
    pub partials: Vec<Polynomial>,
    powers: std::cell::RefCell<Vec<Polynomial>>,
}

impl Context {
    pub fn new(f: &Polynomial, w: &WeightSystem) -> Self {
        Context {
            f: f.clone(),
            w: w.clone(),
            partials: partial_derivatives(f),
            powers: std::cell::RefCell::new(vec![Polynomial::constant(f.nvars(), Rational::one())]),
        }
    }

    pub fn f_power(&self, e: u32) -> Polynomial {
        let mut p = self.powers.borrow_mut();
        while p.len() <= e as usize {
            let next = p.last().unwrap().mul(&self.f);
            p.push(next);
        }
        p[e as usize].clone()
    }

    pub fn v(&self) -> i64 {
        self.w.denominator() as i64
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("truncated: {0} exceeds the cutoff")]
    Truncated(String),
    #[error("input must be quasihomogeneous for this operation")]
    NotQuasihomogeneous,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `k0 = floor(n - alpha_f) - 1` and `k1 = max{k : k < n - alpha_f - 1}`.
pub fn closed_form_levels(n: usize, alpha_f: &Rational) -> (i64, i64) {
    let b = int(n as i64) - alpha_f;
    let k0 = b.floor().to_integer().to_i64().expect("small") - 1;
    let c = &b - int(1);
    let k1 = c.ceil().to_integer().to_i64().expect("small") - 1;
    (k0, k1)
}

/// Generating level of the intersection complex of a cone over a smooth
/// hypersurface of degree `d`: the integer `k` with
/// `k < dimX - dimX/d - 1 <= k + 1`.
pub fn cone_generating_level(dim_x: usize, d: u32) -> i64 {
    closed_form_levels(
        dim_x,
        &Rational::new((dim_x as i64).into(), (d as i64).into()),
    )
    .1
}

/// Limits on the filtration index, the slice degree and the pole order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoffs {
    pub p_max: i64,
    /// Scaled by the weight denominator.
    pub delta_max: i64,
    pub pole_max: i64,
}

impl Cutoffs {
    /// `delta_max = n - alpha_f + k0 + 2`, `p_max = k0 + 2`, `pole_max = p_max + 1`.
    pub fn default_for(w: &WeightSystem) -> Self {
        let (k0, _) = closed_form_levels(w.n(), &w.alpha_f());
        let p_max = k0.max(0) + 2;
        Cutoffs {
            p_max,
            delta_max: top_scaled(w) + (k0 + 2) * w.denominator() as i64,
            pole_max: p_max + 1,
        }
    }

    pub fn with_p_max(self, p_max: i64) -> Self {
        Cutoffs {
            p_max,
            pole_max: p_max + 1,
            ..self
        }
    }
}

/// Dimensions of `F_p` in each weighted degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredPieceTable {
    pub module: ModuleTag,
    /// `(p, scaled delta) -> dim`.
    pub entries: BTreeMap<(i64, i64), usize>,
    pub cutoffs: Cutoffs,
}

/// Slice-wise Hodge filtration of a quasihomogeneous `f`.
///
/// Level `L` stands for `F_L` on `M'` and `M''` and for `F_{L+1}` on `M`. Its
/// degree-`delta` slice is built from the previous level through
/// `F_L = F_{L-1} + sum_i d_i F_{L-1} + G_L`, all over `f^{L+1}`.
pub struct HodgeEngine {
    ctx: Context,
    tag: ModuleTag,
    cutoffs: Cutoffs,
    /// Largest pole index `k` whose generators `G_k` are included.
    k_cap: Option<i64>,
    memo: HashMap<(i64, i64), Rc<Vec<Polynomial>>>,
}

impl HodgeEngine {
    pub fn new(
        f: &Polynomial,
        w: &WeightSystem,
        tag: ModuleTag,
        cutoffs: Cutoffs,
    ) -> Result<Self, FiltrationError> {
        if classify(f, w).kind != QHKind::Quasihomogeneous {
            return Err(FiltrationError::NotQuasihomogeneous);
        }
        Ok(HodgeEngine {
            ctx: Context::new(f, w),
            tag,
            cutoffs,
            k_cap: None,
            memo: HashMap::new(),
        })
    }

    /// Restricts the generators to `G_k` with `k <= cap`.
    pub fn with_generator_cap(mut self, cap: i64) -> Self {
        self.k_cap = Some(cap);
        self.memo.clear();
        self
    }

    fn span(&mut self, level: i64, delta: i64) -> Rc<Vec<Polynomial>> {
        if let Some(s) = self.memo.get(&(level, delta)) {
            return s.clone();
        }
        let v = self.ctx.v();
        let num_deg = delta + (level + 1) * v;
        let result = if level < 0 || num_deg < self.ctx.w.scaled_alpha_f() {
            Vec::new()
        } else {
            let prev_same = self.span(level - 1, delta);
            let prev_shift: Vec<Rc<Vec<Polynomial>>> = (0..self.ctx.n())
                .map(|i| self.span(level - 1, delta + self.ctx.w.scaled(i)))
                .collect();
            let cols = MonomialIndex::new(monomials_of_plain_degree(
                &self.ctx.w,
                num_deg - self.ctx.w.scaled_alpha_f(),
            ));
            let mut ech = SparseEchelon::new();
            let mut kept = Vec::new();
            let mut push = |p: Polynomial| {
                if ech.insert(sparse_from_rationals(cols.coords(&p))) {
                    kept.push(p);
                }
            };
            for g in prev_same.iter() {
                push(g.mul(&self.ctx.f));
            }
            for (i, gens) in prev_shift.iter().enumerate() {
                for g in gens.iter() {
                    let e = ModuleElement::new(g.clone(), level as u32);
                    push(e.derivative(i, &self.ctx, None).numerator);
                }
            }
            let allowed = self.k_cap.is_none_or(|c| level <= c);
            let order_ok = if self.tag.strict() {
                delta > 0
            } else {
                delta >= 0
            };
            if allowed && order_ok {
                for m in cols.monomials().to_vec() {
                    push(Polynomial::term(m, Rational::one()));
                }
            }
            kept
        };
        let rc = Rc::new(result);
        self.memo.insert((level, delta), rc.clone());
        rc
    }

    /// `dim F_p` in scaled degree `delta`.
    pub fn piece(&mut self, p: i64, delta: i64) -> Result<usize, FiltrationError> {
        if p > self.cutoffs.p_max {
            return Err(FiltrationError::Truncated(format!("level p = {p}")));
        }
        if delta > self.cutoffs.delta_max {
            return Err(FiltrationError::Truncated(format!(
                "degree {}",
                self.ctx.w.to_rational(delta)
            )));
        }
        let level = p - self.tag.lowest_index();
        if level < 0 {
            return Ok(0);
        }
        if level + 1 > self.cutoffs.pole_max {
            return Err(FiltrationError::Truncated(format!(
                "pole order {}",
                level + 1
            )));
        }
        let span = self.span(level, delta);
        if !self.tag.modulo_ring() {
            return Ok(span.len());
        }
        let v = self.ctx.v();
        let cols = MonomialIndex::new(monomials_of_plain_degree(
            &self.ctx.w,
            delta + (level + 1) * v - self.ctx.w.scaled_alpha_f(),
        ));
        let ring = monomials_of_plain_degree(&self.ctx.w, delta - self.ctx.w.scaled_alpha_f());
        let fp = self.ctx.f_power((level + 1) as u32);
        let mut ech = SparseEchelon::new();
        for m in &ring {
            ech.insert(sparse_from_rationals(cols.coords(&fp.mul_monomial(m))));
        }
        let base = ech.rank();
        for g in span.iter() {
            ech.insert(sparse_from_rationals(cols.coords(g)));
        }
        Ok(ech.rank() - base)
    }

    /// All entries `p in 0..=p_max`, `delta` from the lowest nonzero degree up
    /// to `delta_max`.
    pub fn table(&mut self) -> Result<FilteredPieceTable, FiltrationError> {
        let mut entries = BTreeMap::new();
        let v = self.ctx.v();
        for p in 0..=self.cutoffs.p_max {
            let lo = self.ctx.w.scaled_alpha_f() - (p + 1) * v;
            for delta in lo..=self.cutoffs.delta_max {
                entries.insert((p, delta), self.piece(p, delta)?);
            }
        }
        Ok(FilteredPieceTable {
            module: self.tag,
            entries,
            cutoffs: self.cutoffs,
        })
    }
}

pub fn hodge_piece(
    f: &Polynomial,
    w: &WeightSystem,
    tag: ModuleTag,
    p: i64,
    delta: DegreeIndex,
    cutoffs: Cutoffs,
) -> Result<usize, FiltrationError> {
    HodgeEngine::new(f, w, tag, cutoffs)?.piece(p, delta.scaled)
}

/// Compares the span over all `k <= p` with the span over `k <= k0`
/// (`k <= k1` for `M`).
pub fn both_formulas_agree(
    f: &Polynomial,
    w: &WeightSystem,
    tag: ModuleTag,
    p: i64,
    delta: DegreeIndex,
) -> Result<bool, FiltrationError> {
    let (k0, k1) = closed_form_levels(w.n(), &w.alpha_f());
    let cap = if tag == ModuleTag::M { k1 } else { k0 };
    let cutoffs = Cutoffs {
        p_max: p.max(0),
        delta_max: delta.scaled,
        pole_max: p.max(0) + 1,
    };
    let full = HodgeEngine::new(f, w, tag, cutoffs)?.piece(p, delta.scaled)?;
    let capped = HodgeEngine::new(f, w, tag, cutoffs)?
        .with_generator_cap(cap)
        .piece(p, delta.scaled)?;
    Ok(full == capped)
}

/// Whether `sum f_i : ⊕ A^{alpha-1+w_i} -> A^alpha` is onto, graded by the
/// weight filtration, at every grid degree in `[alpha, alpha+1]`.
pub fn surjectivity_check(
    f: &Polynomial,
    w: &WeightSystem,
    alpha: &Rational,
) -> Result<bool, FiltrationError> {
    let top = w.to_rational(top_scaled(w));
    if *alpha <= top {
        return Err(FiltrationError::Precondition(format!(
            "degree {alpha} must exceed n - alpha_f = {top}"
        )));
    }
    let v = int(w.denominator() as i64);
    let lo = (alpha * &v).ceil().to_integer().to_i64().expect("small");
    let hi = ((alpha + int(1)) * &v)
        .floor()
        .to_integer()
        .to_i64()
        .expect("small");
    let dims = if classify(f, w).kind == QHKind::Quasihomogeneous {
        milnor_dims(f, w, lo, hi)
    } else {
        filtered_milnor_dims(f, w, hi)
    };
    Ok((lo..=hi).all(|s| dims.get(&s).copied().unwrap_or(0) == 0))
}

/// Nonvanishing of the Milnor algebra in the top degree `n - alpha_f`.
pub fn top_witness(f: &Polynomial, w: &WeightSystem) -> bool {
    let top = top_scaled(w);
    milnor_dims(f, w, top, top)[&top] != 0
}

/// Milnor dimensions at every grid degree of `[lo, hi]`, zeros included.
pub fn milnor_range_dims(
    f: &Polynomial,
    w: &WeightSystem,
    lo: &Rational,
    hi: &Rational,
) -> BTreeMap<DegreeIndex, usize> {
    let v = int(w.denominator() as i64);
    let a = (lo * &v).ceil().to_integer().to_i64().expect("small");
    let b = (hi * &v).floor().to_integer().to_i64().expect("small");
    if a > b {
        return BTreeMap::new();
    }
    milnor_dims(f, w, a, b)
        .into_iter()
        .map(|(s, d)| (DegreeIndex::new(s, w), d))
        .collect()
}
