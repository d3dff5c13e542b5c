//! Numeric invariants derived from the exponents: b-function, du Bois and
//! rational classification, monodromy eigenspaces, unipotent Hodge numbers.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{int, Rational};
use crate::graded::MilnorData;
use crate::poly::WeightSystem;

/// `sum w_i`.
pub fn minimal_exponent(w: &WeightSystem) -> Rational {
    w.alpha_f()
}

/// `b_f(s)` in factored form: `prod (s + c)^m` over the map `c -> m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFunction {
    pub factors: BTreeMap<Rational, usize>,
}

impl BFunction {
    /// Roots of `b_f(-s)` (positive rationals) with multiplicity, ascending.
    pub fn roots_of_reflected(&self) -> Vec<Rational> {
        self.factors
            .iter()
            .flat_map(|(c, &m)| std::iter::repeat_n(c.clone(), m))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.factors.values().sum()
    }

    /// Coefficients of `b_f(s)` in increasing powers of `s`.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = vec![Rational::one()];
        for root in self.roots_of_reflected() {
            let mut next = vec![Rational::zero(); c.len() + 1];
            for (i, x) in c.iter().enumerate() {
                next[i] += x * &root;
                next[i + 1] += x;
            }
            c = next;
        }
        c
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.factors
            .iter()
            .map(|(c, &m)| {
                let t = s + c;
                (0..m).fold(Rational::one(), |acc, _| acc * &t)
            })
            .product()
    }
}

impl fmt::Display for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, &m) in &self.factors {
            write!(f, "(s+{c})")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// `(s+1) * prod (s+alpha)` over the distinct exponents.
pub fn bfunction(md: &MilnorData) -> BFunction {
    let mut factors = BTreeMap::new();
    factors.insert(Rational::one(), 1);
    let mut distinct = md.exponents.clone();
    distinct.dedup();
    for a in distinct {
        *factors.entry(a).or_insert(0) += 1;
    }
    BFunction { factors }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    Rational,
    DuBoisOnly,
    Neither,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityClass::Rational => "Rational",
            SingularityClass::DuBoisOnly => "DuBoisOnly",
            SingularityClass::Neither => "Neither",
        })
    }
}

pub fn classify_singularity(alpha_f: &Rational) -> SingularityClass {
    let one = Rational::one();
    if *alpha_f > one {
        SingularityClass::Rational
    } else if *alpha_f == one {
        SingularityClass::DuBoisOnly
    } else {
        SingularityClass::Neither
    }
}

/// Exponent counts grouped by residue class in `[0, 1)`.
pub fn monodromy_eigenspace_dims(md: &MilnorData) -> BTreeMap<Rational, usize> {
    let mut out = BTreeMap::new();
    for a in &md.exponents {
        *out.entry(a - a.floor()).or_insert(0) += 1;
    }
    out
}

/// Milnor dimensions at integer degrees, nonzero entries only.
pub fn unipotent_hodge_dims(md: &MilnorData) -> BTreeMap<i64, usize> {
    let v = md.weights.denominator() as i64;
    md.per_degree_dims
        .iter()
        .filter(|(s, _)| *s % v == 0)
        .map(|(s, &d)| (s / v, d))
        .collect()
}

/// Number of integer exponents with multiplicity.
pub fn invariant_dim(md: &MilnorData) -> usize {
    unipotent_hodge_dims(md).values().sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLevel {
    pub r0: Option<i64>,
    /// `n - r0`, the exact generating level of the finite quotient.
    pub level: Option<i64>,
    /// For `w_i = 1/d`: whether `r0 - 1 < n/d + 1 <= r0`.
    pub homogeneous_bound: Option<bool>,
}

/// `r0 = 1 + min{p : dim (A/(df))^p != 0}`.
pub fn r0_and_quotient_level(md: &MilnorData) -> QuotientLevel {
    let r0 = unipotent_hodge_dims(md).keys().next().map(|p| p + 1);
    let n = md.n as i64;
    let w = md.weights.weights();
    let homogeneous_bound = match (r0, w.iter().all(|x| *x == w[0])) {
        (Some(r0), true) if w[0].numer().is_one() => {
            let b = int(n) * &w[0] + int(1);
            Some(int(r0 - 1) < b && b <= int(r0))
        }
        _ => None,
    };
    QuotientLevel {
        r0,
        level: r0.map(|r| n - r),
        homogeneous_bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralReport {
    pub alpha_f: Rational,
    pub beta_f: Rational,
    pub bfunction: BFunction,
    pub classification: SingularityClass,
    pub eigenspace_dims: BTreeMap<Rational, usize>,
    pub unipotent_hodge_dims: BTreeMap<i64, usize>,
    pub r0: Option<i64>,
    pub dim_ef: usize,
    pub quotient_generated: Option<i64>,
}

pub fn spectral_report(md: &MilnorData) -> SpectralReport {
    let alpha_f = md.alpha_f();
    let q = r0_and_quotient_level(md);
    SpectralReport {
        beta_f: int(md.n as i64) - &alpha_f,
        bfunction: bfunction(md),
        classification: classify_singularity(&alpha_f),
        eigenspace_dims: monodromy_eigenspace_dims(md),
        unipotent_hodge_dims: unipotent_hodge_dims(md),
        r0: q.r0,
        dim_ef: invariant_dim(md),
        quotient_generated: q.level,
        alpha_f,
    }
}

/// Largest root of `b_f(s)/(s+1)`, which is `-alpha_f`.
pub fn max_reduced_root(b: &BFunction) -> Option<Rational> {
    let mut f = b.factors.clone();
    let one = Rational::one();
    if let Some(m) = f.get_mut(&one) {
        *m -= 1;
        if *m == 0 {
            f.remove(&one);
        }
    }
    f.keys().next().map(|c| -c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::graded::milnor_data;
    use crate::poly::Polynomial;

    fn md(f: &str, w: &str) -> MilnorData {
        milnor_data(
            &Polynomial::parse(f).unwrap(),
            &WeightSystem::parse(w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn minimal_exponent_examples() {
        assert_eq!(
            minimal_exponent(&WeightSystem::parse("1/2,1/2,1/2").unwrap()),
            rat(3, 2)
        );
        assert_eq!(
            minimal_exponent(&WeightSystem::parse("1/6,1/4,1/4,1/4").unwrap()),
            rat(11, 12)
        );
        assert_eq!(
            minimal_exponent(&WeightSystem::parse("1/3,1/3,1/3").unwrap()),
            rat(1, 1)
        );
    }

    #[test]
    fn bfunction_examples() {
        let b = bfunction(&md("x1^2+x2^2+x3^2", "1/2,1/2,1/2"));
        assert_eq!(b.roots_of_reflected(), vec![rat(1, 1), rat(3, 2)]);
        let b = bfunction(&md("x1^3+x2^3+x3^3", "1/3,1/3,1/3"));
        assert_eq!(
            b.roots_of_reflected(),
            vec![rat(1, 1), rat(1, 1), rat(4, 3), rat(5, 3), rat(2, 1)]
        );
        assert_eq!(b.to_string(), "(s+1)^2(s+4/3)(s+5/3)(s+2)");
        assert_eq!(max_reduced_root(&b), Some(rat(-1, 1)));
        assert!(b.eval(&rat(-4, 3)).is_zero());
        assert_eq!(b.coefficients().last(), Some(&Rational::one()));
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(classify_singularity(&rat(3, 2)), SingularityClass::Rational);
        assert_eq!(
            classify_singularity(&rat(1, 1)),
            SingularityClass::DuBoisOnly
        );
        assert_eq!(
            classify_singularity(&rat(11, 12)),
            SingularityClass::Neither
        );
    }

    #[test]
    fn eigenspaces() {
        let e = monodromy_eigenspace_dims(&md("x1^3+x2^3+x3^3", "1/3,1/3,1/3"));
        assert_eq!(
            e,
            BTreeMap::from([(rat(0, 1), 2), (rat(1, 3), 3), (rat(2, 3), 3)])
        );
        let e = monodromy_eigenspace_dims(&md("x1^2+x2^2+x3^2", "1/2,1/2,1/2"));
        assert_eq!(e, BTreeMap::from([(rat(1, 2), 1)]));
    }

    #[test]
    fn unipotent_dims_and_r0() {
        let m = md("x1^3+x2^3+x3^3", "1/3,1/3,1/3");
        assert_eq!(unipotent_hodge_dims(&m), BTreeMap::from([(1, 1), (2, 1)]));
        let q = r0_and_quotient_level(&m);
        assert_eq!(q.r0, Some(2));
        assert_eq!(q.homogeneous_bound, Some(true));
        assert_eq!(invariant_dim(&m), 2);

        let m = md("x1^2+x2^2+x3^2", "1/2,1/2,1/2");
        assert!(unipotent_hodge_dims(&m).is_empty());
        assert_eq!(r0_and_quotient_level(&m).r0, None);
        assert_eq!(invariant_dim(&m), 0);

        let m = md("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4");
        assert_eq!(unipotent_hodge_dims(&m), BTreeMap::from([(2, 7)]));
        let q = r0_and_quotient_level(&m);
        assert_eq!((q.r0, q.level), (Some(3), Some(1)));
        assert_eq!(invariant_dim(&m), 7);
    }

    #[test]
    fn report_consistency() {
        let m = md("x1^3*x2 + x2^3", "2/9,1/3");
        let r = spectral_report(&m);
        assert_eq!(&r.alpha_f + &r.beta_f, rat(2, 1));
        assert_eq!(r.eigenspace_dims.values().sum::<usize>(), m.mu);
        assert_eq!(
            r.dim_ef,
            r.eigenspace_dims.get(&rat(0, 1)).copied().unwrap_or(0)
        );
        assert_eq!(max_reduced_root(&r.bfunction), Some(-r.alpha_f.clone()));
    }
}
