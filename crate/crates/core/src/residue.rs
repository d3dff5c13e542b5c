//! Local cohomology at the origin, the residue pairing with the local ring,
//! and the graded spaces cut out by the operators `f_i d_j - f_j d_i`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::exact::{self, int, sparse_from_rationals, QMatrix, Rational, SparseEchelon};
use crate::graded::{enumerate_monomials, DegreeIndex, MonomialIndex};
use crate::poly::{partial_derivatives, Monomial, Polynomial, WeightSystem};

/// Finite combination of the classes `x^{-nu-1}`, keyed by `nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCohomologyElement {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl LocalCohomologyElement {
    pub fn zero(n: usize) -> Self {
        LocalCohomologyElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `c * x^{-nu-1}`.
    pub fn basis(nu: Monomial, c: Rational) -> Self {
        let mut b = Self::zero(nu.nvars());
        b.add_term(nu, c);
        b
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut b = Self::zero(n);
        for (m, c) in terms {
            b.add_term(m, c);
        }
        b
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, nu: &Monomial) -> Rational {
        self.terms.get(nu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, nu: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(nu.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&nu);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// `d_i`: `x^{-nu-1} -> -(nu_i + 1) x^{-nu-e_i-1}`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.n,
            self.terms.iter().map(|(nu, c)| {
                let mut m = nu.clone();
                m.0[i] += 1;
                (m, -(c * int(nu.0[i] as i64 + 1)))
            }),
        )
    }
}

/// Action of `A` on `B`; terms leaving `B` vanish.
pub fn act(a: &Polynomial, b: &LocalCohomologyElement) -> LocalCohomologyElement {
    let mut out = LocalCohomologyElement::zero(b.n);
    for (mu, c) in a.terms() {
        for (nu, d) in &b.terms {
            if let Some(rest) = nu.div(mu) {
                out.add_term(rest, c * d);
            }
        }
    }
    out
}

/// Coefficient of `x^{-1}` in `a . b`.
pub fn residue_pair(a: &Polynomial, b: &LocalCohomologyElement) -> Rational {
    a.terms()
        .map(|(mu, c)| c * b.coeff(mu))
        .fold(Rational::zero(), |s, x| s + x)
}

/// The weighted-degree-1 part of `f`.
pub fn principal_part(f: &Polynomial, w: &WeightSystem) -> Polynomial {
    let v = w.denominator() as i64;
    f.filter(|m| w.scaled_plain_degree(m) == v)
}

/// `(f_i d_j - f_j d_i) b`.
pub fn commutator_on_b(
    partials: &[Polynomial],
    i: usize,
    j: usize,
    b: &LocalCohomologyElement,
) -> LocalCohomologyElement {
    let left = act(&partials[i], &b.derivative(j));
    let right = act(&partials[j], &b.derivative(i));
    left.add(&right.scale(&-Rational::one()))
}

/// `(f_i d_j - f_j d_i) a` on the local ring.
pub fn commutator_on_a(partials: &[Polynomial], i: usize, j: usize, a: &Polynomial) -> Polynomial {
    partials[i]
        .mul(&a.derivative(j))
        .sub(&partials[j].mul(&a.derivative(i)))
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[derive(Debug, Clone)]
pub struct BbarPiece {
    pub degree: DegreeIndex,
    pub basis: Vec<LocalCohomologyElement>,
}

impl BbarPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Common kernel of the operators `f_i d_j - f_j d_i` on `B^alpha`, computed
/// with the principal part of `f`.
pub fn bbar_piece(f: &Polynomial, w: &WeightSystem, alpha: DegreeIndex) -> BbarPiece {
    let fp = principal_part(f, w);
    let partials = partial_derivatives(&fp);
    let n = w.n();
    let basis = enumerate_monomials(w, alpha);
    // Rows are coordinates of the images, keyed by (pair, target monomial).
    let mut row_of: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(basis.len());
    for nu in &basis {
        let b = LocalCohomologyElement::basis(nu.clone(), Rational::one());
        let mut col = Vec::new();
        for (i, j) in pairs(n) {
            for (m, c) in commutator_on_b(&partials, i, j, &b).terms {
                let next = row_of.len();
                let r = *row_of.entry((i, j, m)).or_insert(next);
                col.push((r, c));
            }
        }
        columns.push(col);
    }
    let mut m = QMatrix::zeros(row_of.len(), basis.len());
    for (c, col) in columns.into_iter().enumerate() {
        for (r, x) in col {
            m.set(r, c, x);
        }
    }
    let kernel = if row_of.is_empty() {
        (0..basis.len())
            .map(|k| {
                let mut e = vec![Rational::zero(); basis.len()];
                e[k] = Rational::one();
                e
            })
            .collect()
    } else {
        exact::nullspace(&m)
    };
    let basis = kernel
        .into_iter()
        .map(|x| LocalCohomologyElement::from_terms(n, basis.iter().cloned().zip(x)))
        .collect();
    BbarPiece {
        degree: alpha,
        basis,
    }
}

/// `A^alpha / sum Im(f_i d_j - f_j d_i)`, described by a monomial basis of a
/// complement of the image.
#[derive(Debug, Clone)]
pub struct AbarPiece {
    pub degree: DegreeIndex,
    pub complement: Vec<Monomial>,
}

pub fn abar_piece(f: &Polynomial, w: &WeightSystem, alpha: DegreeIndex) -> AbarPiece {
    let fp = principal_part(f, w);
    let partials = partial_derivatives(&fp);
    let v = w.denominator() as i64;
    let target = MonomialIndex::new(enumerate_monomials(w, alpha));
    let mut ech = SparseEchelon::new();
    if !target.is_empty() {
        for (i, j) in pairs(w.n()) {
            let src = alpha.scaled - v + w.scaled(i) + w.scaled(j);
            for mu in enumerate_monomials(w, DegreeIndex::new(src, w)) {
                let img = commutator_on_a(&partials, i, j, &Polynomial::term(mu, Rational::one()));
                ech.insert(sparse_from_rationals(target.coords(&img)));
            }
        }
    }
    let pivots: std::collections::HashSet<usize> = ech.pivots().collect();
    AbarPiece {
        degree: alpha,
        complement: (0..target.len())
            .filter(|c| !pivots.contains(c))
            .map(|c| target.monomial(c).clone())
            .collect(),
    }
}

pub fn abar_dim(f: &Polynomial, w: &WeightSystem, alpha: DegreeIndex) -> usize {
    abar_piece(f, w, alpha).complement.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingCheck {
    pub degree: DegreeIndex,
    pub abar_dim: usize,
    pub bbar_dim: usize,
    pub perfect: bool,
}

/// Compares `dim Abar^alpha` with `dim Bbar^alpha` and checks that the residue
/// pairing between them is nonsingular.
pub fn pairing_perfectness(f: &Polynomial, w: &WeightSystem, alpha: DegreeIndex) -> PairingCheck {
    let a = abar_piece(f, w, alpha);
    let b = bbar_piece(f, w, alpha);
    let perfect = a.complement.len() == b.dim() && {
        let rows: Vec<Vec<Rational>> = a
            .complement
            .iter()
            .map(|mu| b.basis.iter().map(|e| e.coeff(mu)).collect())
            .collect();
        let m = QMatrix::from_rows(b.dim(), &rows).expect("square pairing matrix");
        exact::rank(&m) == b.dim()
    };
    PairingCheck {
        degree: alpha,
        abar_dim: a.complement.len(),
        bbar_dim: b.dim(),
        perfect,
    }
}

/// Whether `a/f^k` modulo `A` lies in the intersection-cohomology submodule:
/// `a` must kill `Bbar^k`. For semiquasihomogeneous `f` the test runs on the
/// principal part and is exact only at the graded level.
pub fn mf_membership(f: &Polynomial, w: &WeightSystem, a: &Polynomial, k: i64) -> bool {
    assert!(k >= 1, "pole order must be positive");
    let b = bbar_piece(f, w, DegreeIndex::new(k * w.denominator() as i64, w));
    annihilates(a, &b)
}

/// Whether `a` kills every element of a precomputed `Bbar^k`.
pub fn annihilates(a: &Polynomial, b: &BbarPiece) -> bool {
    b.basis.iter().all(|e| act(a, e).is_zero())
}

/// Whether multiplication by `f` maps `Bbar^{k+1}` onto `Bbar^k`.
pub fn f_surjective_on_bbar(f: &Polynomial, w: &WeightSystem, k: i64) -> bool {
    let fp = principal_part(f, w);
    let v = w.denominator() as i64;
    let upper = bbar_piece(f, w, DegreeIndex::new((k + 1) * v, w));
    let lower = bbar_piece(f, w, DegreeIndex::new(k * v, w));
    let idx = MonomialIndex::new(enumerate_monomials(w, DegreeIndex::new(k * v, w)));
    let mut ech = SparseEchelon::new();
    for b in &upper.basis {
        let img = act(&fp, b);
        let coords = img
            .terms()
            .map(|(m, c)| (idx.get(m).expect("image stays in degree k"), c.clone()))
            .collect();
        ech.insert(sparse_from_rationals(coords));
    }
    ech.rank() == lower.dim()
}
