//! Deciding whether a filtered module is generated by a given part of its
//! Hodge filtration.
//!
//! With `S_k = sum_{j <= r} F_{k-j} D G_j` (plus `A` for the quotient modules),
//! the module is `(q+r)`-generated iff `G_k ⊂ S_k` for every `k > r`. Every
//! element of `S_k` has pole order at most `k+1`, so membership of `a/f^{k+1}`
//! is a question about numerators in `A`. Numerators of order above
//! `n - alpha_f` reduce to `F_1 D G_{k-1}` through
//! `k f_i b / f^{k+1} = (d_i b)/f^k - d_i(b/f^k)` and surjectivity of
//! `sum f_i`, so only finitely many degrees have to be checked.
//!
//! For a quasihomogeneous input each check is one homogeneous slice. Otherwise
//! a monomial `x^mu` of order `beta` is tested against the generator numerators
//! truncated above `beta`: it lies in `S_k` modulo higher order exactly when it
//! lies in that truncated span, and the higher-order remainder is handled at
//! the next degree.

use std::collections::HashSet;

use num_traits::One;

use crate::exact::{sparse_from_rationals, SparseEchelon};
use crate::filtration::{
    closed_form_levels, Context, Cutoffs, FiltrationError, ModuleElement, ModuleTag,
};
use crate::graded::{
    filtered_leading_dims, monomials_of_plain_degree, monomials_up_to, start_degree, top_scaled,
    DegreeIndex, FilteredGenerator, MonomialIndex,
};
use crate::poly::{classify, Monomial, Polynomial, QHKind, WeightSystem};
use crate::residue::commutator_on_a;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `F_{q+r+i} = F_i D F_{q+r}` for all `i >= 0`.
    CertifiedUpTo(Cutoffs),
    /// `witness` lies in `F_p` but not in `F_{p-q-r} D F_{q+r}`.
    WitnessFailure {
        p: i64,
        delta: DegreeIndex,
        witness: ModuleElement,
    },
    Inconclusive(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedUpTo(_))
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::WitnessFailure { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCertificate {
    pub module: ModuleTag,
    pub r: i64,
    pub verdict: Verdict,
    pub trace: Vec<String>,
}

/// Exponent vectors of total order at most `m` in `n` variables.
fn multi_indices(n: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

struct Certifier {
    ctx: Context,
    tag: ModuleTag,
    homogeneous: bool,
}

impl Certifier {
    /// Monomials of shifted scaled degree in `lo..=hi`.
    fn monomials_between(&self, lo: i64, hi: i64) -> Vec<Monomial> {
        let af = self.ctx.w.scaled_alpha_f();
        (lo.max(af)..=hi)
            .flat_map(|d| monomials_of_plain_degree(&self.ctx.w, d - af))
            .collect()
    }

    /// Numerators over `f^{k+1}` of the generators of `S_k` whose order is at
    /// most `beta` (exactly `beta` in the homogeneous case), truncated above
    /// `beta`.
    fn generators(&self, r: i64, k: i64, beta: i64) -> Vec<Polynomial> {
        let w = &self.ctx.w;
        let v = self.ctx.v();
        let n = self.ctx.n();
        let bound = if self.homogeneous { None } else { Some(beta) };
        let mut out = Vec::new();
        for j in 0..=r.min(k) {
            for nu in multi_indices(n, (k - j) as u32) {
                let shift: i64 = nu
                    .iter()
                    .zip(w.scaled_weights())
                    .map(|(&e, &a)| e as i64 * a)
                    .sum();
                let hi = beta + shift - (k - j) * v;
                let lo = if self.homogeneous { hi } else { (j + 1) * v };
                let lo = if self.tag.strict() {
                    lo.max((j + 1) * v + 1)
                } else {
                    lo.max((j + 1) * v)
                };
                for lam in self.monomials_between(lo, hi) {
                    let mut e =
                        ModuleElement::new(Polynomial::term(lam, Rational::one()), (j + 1) as u32);
                    for (i, &times) in nu.iter().enumerate() {
                        for _ in 0..times {
                            e = e.derivative(i, &self.ctx, bound);
                        }
                    }
                    let e = e.lift((k + 1) as u32, &self.ctx, bound);
                    if !e.numerator.is_zero() {
                        out.push(e.numerator);
                    }
                }
            }
        }
        if self.tag.modulo_ring() {
            let lo = if self.homogeneous {
                beta - (k + 1) * v
            } else {
                0
            };
            let fp = self.ctx.f_power((k + 1) as u32);
            for rho in self.monomials_between(lo, beta - (k + 1) * v) {
                let p = match bound {
                    Some(b) => fp.mul_filtered(&Polynomial::term(rho, Rational::one()), |m| {
                        w.scaled_degree(m) <= b
                    }),
                    None => fp.mul_monomial(&rho),
                };
                out.push(p);
            }
        }
        out
    }

    /// First monomial of order `beta` whose quotient by `f^{k+1}` is not in
    /// `S_k` modulo higher order.
    fn check_degree(&self, r: i64, k: i64, beta: i64, trace: &mut Vec<String>) -> Option<Monomial> {
        let w = &self.ctx.w;
        let targets = monomials_of_plain_degree(w, beta - w.scaled_alpha_f());
        if targets.is_empty() {
            return None;
        }
        let cols = if self.homogeneous {
            MonomialIndex::new(targets.clone())
        } else {
            MonomialIndex::new(monomials_up_to(w, beta))
        };
        let gens = self.generators(r, k, beta);
        let mut ech = SparseEchelon::new();
        for g in &gens {
            ech.insert(sparse_from_rationals(cols.coords(g)));
        }
        let missing = targets.into_iter().find(|mu| {
            let row = sparse_from_rationals(vec![(
                cols.get(mu).expect("target indexed"),
                Rational::one(),
            )]);
            !ech.contains(row)
        });
        trace.push(format!(
            "k={k} degree {}: {} generators, rank {}, {}",
            w.to_rational(beta),
            gens.len(),
            ech.rank(),
            match &missing {
                None => "all targets reached".to_string(),
                Some(m) => format!("{m} not reached"),
            }
        ));
        missing
    }
}

/// Decides whether `tag` is `(q+r)`-generated, exactly within `cutoffs`.
pub fn certify_level(
    f: &Polynomial,
    w: &WeightSystem,
    tag: ModuleTag,
    r: i64,
    cutoffs: Cutoffs,
) -> LevelCertificate {
    let mut trace = Vec::new();
    let done = |verdict, trace| LevelCertificate {
        module: tag,
        r,
        verdict,
        trace,
    };
    let cls = classify(f, w);
    if cls.kind == QHKind::Invalid {
        return done(
            Verdict::Inconclusive(format!("invalid input: {}", cls.diagnostics)),
            trace,
        );
    }
    let c = Certifier {
        ctx: Context::new(f, w),
        tag,
        homogeneous: cls.kind == QHKind::Quasihomogeneous,
    };
    let v = c.ctx.v();
    let q = tag.lowest_index();
    let top = top_scaled(w);
    let strict = i64::from(tag.strict());

    if r < 0 {
        // F_{q+r} = 0, so any nonzero element of F_q is a witness.
        let mut beta = v + strict;
        loop {
            if beta - v > cutoffs.delta_max {
                return done(
                    Verdict::Inconclusive("no element of F_q found below the degree cutoff".into()),
                    trace,
                );
            }
            if let Some(mu) = c.check_degree(-1, 0, beta, &mut trace) {
                return done(
                    Verdict::WitnessFailure {
                        p: q,
                        delta: DegreeIndex::new(beta - v, w),
                        witness: ModuleElement::new(Polynomial::term(mu, Rational::one()), 1),
                    },
                    trace,
                );
            }
            beta += 1;
        }
    }

    let mut k = r + 1;
    loop {
        let lo = (k + 1) * v + strict;
        if lo > top {
            break;
        }
        if q + k > cutoffs.p_max
            || k + 1 > cutoffs.pole_max
            || top - (k + 1) * v > cutoffs.delta_max
        {
            return done(
                Verdict::Inconclusive(format!("k = {k} lies beyond the cutoffs")),
                trace,
            );
        }
        for beta in lo..=top {
            if let Some(mu) = c.check_degree(r, k, beta, &mut trace) {
                return done(
                    Verdict::WitnessFailure {
                        p: q + k,
                        delta: DegreeIndex::new(beta - (k + 1) * v, w),
                        witness: ModuleElement::new(
                            Polynomial::term(mu, Rational::one()),
                            (k + 1) as u32,
                        ),
                    },
                    trace,
                );
            }
        }
        k += 1;
    }
    trace.push(format!("no generator degree left above k = {}", k - 1));
    done(Verdict::CertifiedUpTo(cutoffs), trace)
}

/// Expected versus measured generating level of a quasihomogeneous input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessVerdict {
    pub module: ModuleTag,
    /// `k0` for `M'` and `M''`, `k1` for `M`.
    pub expected: i64,
    /// Smallest certified `r`, when every probe was conclusive.
    pub measured: Option<i64>,
    pub certified_at_expected: bool,
    pub fails_below_expected: bool,
}

impl ExactnessVerdict {
    pub fn exact(&self) -> bool {
        self.certified_at_expected && self.fails_below_expected
    }
}

pub fn exactness_probe(
    f: &Polynomial,
    w: &WeightSystem,
    tag: ModuleTag,
    cutoffs: Cutoffs,
) -> Result<ExactnessVerdict, FiltrationError> {
    if classify(f, w).kind != QHKind::Quasihomogeneous {
        return Err(FiltrationError::NotQuasihomogeneous);
    }
    let (k0, k1) = closed_form_levels(w.n(), &w.alpha_f());
    let expected = if tag == ModuleTag::M { k1 } else { k0 };
    let at = certify_level(f, w, tag, expected, cutoffs).verdict;
    let below = certify_level(f, w, tag, expected - 1, cutoffs).verdict;
    let mut measured = None;
    let mut r = -1;
    loop {
        match certify_level(f, w, tag, r, cutoffs).verdict {
            Verdict::CertifiedUpTo(_) => {
                measured = Some(r);
                break;
            }
            Verdict::WitnessFailure { .. } => r += 1,
            Verdict::Inconclusive(_) => break,
        }
    }
    Ok(ExactnessVerdict {
        module: tag,
        expected,
        measured,
        certified_at_expected: at.is_certified(),
        fails_below_expected: below.is_failure(),
    })
}

/// Dimensions of the weight-graded image of
/// `sum_{i<j} (f_i d_j - f_j d_i) : A -> A` for scaled degrees up to
/// `max_scaled`.
pub fn df_image_graded_dims(
    f: &Polynomial,
    w: &WeightSystem,
    max_scaled: i64,
) -> std::collections::BTreeMap<i64, usize> {
    let partials = crate::poly::partial_derivatives(f);
    let n = w.n();
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for mu in monomials_up_to(w, max_scaled) {
                let img = commutator_on_a(
                    &partials,
                    i,
                    j,
                    &Polynomial::term(mu.clone(), Rational::one()),
                );
                if let Some(start) = start_degree(&img, w) {
                    if start <= max_scaled && seen.insert((i, j, mu)) {
                        gens.push(FilteredGenerator { start, poly: img });
                    }
                }
            }
        }
    }
    filtered_leading_dims(&gens, w, max_scaled)
}
