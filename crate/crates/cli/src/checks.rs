//! Built-in property suites behind `shl check <suite>`.

use std::collections::BTreeMap;

use shl_core::certify::certify_level;
use shl_core::exact::{int, rat};
use shl_core::filtration::{
    both_formulas_agree, closed_form_levels, milnor_range_dims, HodgeEngine,
};
use shl_core::graded::{
    milnor_data, milnor_number_formula, monomials_of_plain_degree, poincare_exponents, top_scaled,
};
use shl_core::poly::classify;
use shl_core::residue::{bbar_piece, pairing_perfectness};
use shl_core::spectral::{
    classify_singularity, invariant_dim, monodromy_eigenspace_dims, r0_and_quotient_level,
    unipotent_hodge_dims, SingularityClass,
};
use shl_core::{Cutoffs, DegreeIndex, ModuleTag, Polynomial, QHKind, Rational, WeightSystem};

pub const SUITES: [&str; 5] = [
    "poincare",
    "pairing",
    "symmetry",
    "filtration",
    "paper-examples",
];

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Result<(), String>,
}

type Outcome = Result<(), String>;
type Case = (&'static str, fn() -> Outcome);

const BATTERY: [(&str, &str); 12] = [
    ("x1^2+x2^2", "1/2,1/2"),
    ("x1^3+x2^4", "1/3,1/4"),
    ("x1^3*x2+x2^3", "2/9,1/3"),
    ("x1^2*x2+x2^4", "3/8,1/4"),
    ("x1^4+x1*x2^3", "1/4,1/4"),
    ("x1^2+x2^2+x3^2", "1/2,1/2,1/2"),
    ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
    ("x1^4+x2^4+x3^4", "1/4,1/4,1/4"),
    ("x1^3+x2^3+x3^4", "1/3,1/3,1/4"),
    ("x1^2*x2+x2^3+x3^4", "1/3,1/3,1/4"),
    ("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
    ("x1^3*x2+x2^3+x3^2+x4^2", "2/9,1/3,1/2,1/2"),
];

fn input(f: &str, w: &str) -> (Polynomial, WeightSystem) {
    (
        Polynomial::parse(f).expect("built-in polynomial"),
        WeightSystem::parse(w).expect("built-in weights"),
    )
}

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    ensure(
        got == want,
        format!("{what}: got {got:?}, expected {want:?}"),
    )
}

fn poincare() -> Vec<CheckResult> {
    BATTERY
        .iter()
        .map(|&(fs, ws)| {
            let (f, w) = input(fs, ws);
            let outcome = (|| {
                let md = milnor_data(&f, &w).map_err(|e| e.to_string())?;
                let product = poincare_exponents(&w).map_err(|e| e.to_string())?;
                eq("exponents", &md.exponents, &product)?;
                eq("mu", int(md.mu as i64), milnor_number_formula(&w))
            })();
            CheckResult {
                name: format!("Milnor basis = product formula: {fs}"),
                outcome,
            }
        })
        .collect()
}

fn symmetry() -> Vec<CheckResult> {
    BATTERY
        .iter()
        .map(|&(fs, ws)| {
            let (f, w) = input(fs, ws);
            let outcome = (|| {
                let md = milnor_data(&f, &w).map_err(|e| e.to_string())?;
                let n = int(md.n as i64);
                let mut reflected: Vec<Rational> = md.exponents.iter().map(|a| &n - a).collect();
                reflected.sort();
                eq("reflected exponents", &reflected, &md.exponents)?;
                eq(
                    "eigenspace total",
                    monodromy_eigenspace_dims(&md).values().sum::<usize>(),
                    md.mu,
                )
            })();
            CheckResult {
                name: format!("spectrum symmetry: {fs}"),
                outcome,
            }
        })
        .collect()
}

fn pairing() -> Vec<CheckResult> {
    [
        ("x1^2+x2^2+x3^2", "1/2,1/2,1/2"),
        ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
        ("x1^3*x2+x2^3", "2/9,1/3"),
        ("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
    ]
    .iter()
    .map(|&(fs, ws)| {
        let (f, w) = input(fs, ws);
        let outcome = (|| {
            let v = w.denominator() as i64;
            let top = top_scaled(&w);
            for s in w.scaled_alpha_f()..=top + v {
                let c = pairing_perfectness(&f, &w, DegreeIndex::new(s, &w));
                ensure(
                    c.perfect,
                    format!("not perfect at {}: {c:?}", w.to_rational(s)),
                )?;
            }
            let ef = invariant_dim(&milnor_data(&f, &w).map_err(|e| e.to_string())?);
            let first = (top - v).div_euclid(v) + 1;
            for k in first..first + 2 {
                let dim = bbar_piece(&f, &w, DegreeIndex::new(k * v, &w)).dim();
                eq(&format!("dim Bbar^{k}"), dim, ef)?;
            }
            Ok(())
        })();
        CheckResult {
            name: format!("residue pairing: {fs}"),
            outcome,
        }
    })
    .collect()
}

fn filtration_laws(fs: &str, ws: &str) -> Outcome {
    let (f, w) = input(fs, ws);
    let v = w.denominator() as i64;
    let top = top_scaled(&w);
    let cutoffs = Cutoffs {
        p_max: 3,
        delta_max: top + v,
        pole_max: 4,
    };
    let mut engines: BTreeMap<ModuleTag, HodgeEngine> = ModuleTag::ALL
        .iter()
        .map(|&t| {
            (
                t,
                HodgeEngine::new(&f, &w, t, cutoffs).expect("quasihomogeneous input"),
            )
        })
        .collect();
    for p in 0..=2 {
        for delta in w.scaled_alpha_f() - 3 * v..=top + v {
            let label = format!("p={p} delta={}", w.to_rational(delta));
            let mut at = |t: ModuleTag, p| {
                engines
                    .get_mut(&t)
                    .unwrap()
                    .piece(p, delta)
                    .map_err(|e| e.to_string())
            };
            for tag in ModuleTag::ALL {
                let (a, b) = (at(tag, p)?, at(tag, p + 1)?);
                ensure(a <= b, format!("{label} {tag}: not monotone ({a} > {b})"))?;
                let agree = both_formulas_agree(&f, &w, tag, p, DegreeIndex::new(delta, &w))
                    .map_err(|e| e.to_string())?;
                ensure(agree, format!("{label} {tag}: generator formulas differ"))?;
            }
            if delta >= 0 {
                let count = monomials_of_plain_degree(&w, delta + v - w.scaled_alpha_f()).len();
                eq(&format!("{label} F_0 M'"), at(ModuleTag::Mprime, 0)?, count)?;
            }
            let (m, mpp) = (at(ModuleTag::M, p + 1)?, at(ModuleTag::Mdoubleprime, p)?);
            ensure(
                m <= mpp,
                format!("{label}: F_(p+1) M = {m} exceeds F_p M'' = {mpp}"),
            )?;
        }
    }
    Ok(())
}

fn filtration() -> Vec<CheckResult> {
    [
        ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
        ("x1^4+x2^4+x3^4", "1/4,1/4,1/4"),
    ]
    .iter()
    .map(|&(fs, ws)| CheckResult {
        name: format!("Hodge filtration laws: {fs}"),
        outcome: filtration_laws(fs, ws),
    })
    .collect()
}

fn quartic_sextic() -> Outcome {
    let (f, w) = input("x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4", "1/6,1/4,1/4,1/4");
    let cls = classify(&f, &w);
    eq("classification", cls.kind, QHKind::SemiQuasihomogeneous)?;
    eq("alpha_f", w.alpha_f(), rat(11, 12))?;
    eq("(k0, k1)", closed_form_levels(4, &w.alpha_f()), (2, 2))?;
    let md = milnor_data(&cls.principal, &w).map_err(|e| e.to_string())?;
    eq("mu", md.mu, 135)?;
    eq(
        "unipotent Hodge dims",
        unipotent_hodge_dims(&md),
        BTreeMap::from([(2, 7)]),
    )?;
    eq("r0", r0_and_quotient_level(&md).r0, Some(3))?;
    let nonzero: Vec<(Rational, usize)> =
        milnor_range_dims(&cls.principal, &w, &rat(3, 1), &rat(37, 12))
            .into_iter()
            .filter(|&(_, d)| d > 0)
            .map(|(k, d)| (k.value(), d))
            .collect();
    eq("Milnor dims on [3, 37/12]", nonzero, vec![(rat(37, 12), 1)])?;
    for tag in ModuleTag::ALL {
        let cert = certify_level(&f, &w, tag, 1, Cutoffs::default_for(&w));
        ensure(
            cert.verdict.is_certified(),
            format!("{tag} at level 1: {:?}", cert.verdict),
        )?;
    }
    Ok(())
}

fn quartic_surface() -> Outcome {
    let (f, w) = input("x1^4+x2^4+x3^4+x1^2*x2^2*x3", "1/4,1/4,1/4");
    eq(
        "classification",
        classify(&f, &w).kind,
        QHKind::SemiQuasihomogeneous,
    )?;
    eq("k1", closed_form_levels(3, &w.alpha_f()).1, 1)?;
    let cert = certify_level(&f, &w, ModuleTag::M, 0, Cutoffs::default_for(&w));
    ensure(
        cert.verdict.is_certified(),
        format!("M at level 0: {:?}", cert.verdict),
    )
}

fn singularity_classes() -> Outcome {
    for (ws, want) in [
        ("1/2,1/2,1/2", SingularityClass::Rational),
        ("1/3,1/3,1/3", SingularityClass::DuBoisOnly),
        ("1/6,1/4,1/4,1/4", SingularityClass::Neither),
    ] {
        let w = WeightSystem::parse(ws).expect("built-in weights");
        eq(ws, classify_singularity(&w.alpha_f()), want)?;
    }
    Ok(())
}

fn worked_examples() -> Vec<CheckResult> {
    let cases: [Case; 3] = [
        (
            "quartic-sextic semiquasihomogeneous example",
            quartic_sextic,
        ),
        ("quartic surface generated below k1", quartic_surface),
        ("rational / du Bois classification", singularity_classes),
    ];
    cases
        .iter()
        .map(|(name, f)| CheckResult {
            name: name.to_string(),
            outcome: f(),
        })
        .collect()
}

/// `None` for an unknown suite name.
pub fn run_suite(name: &str) -> Option<Vec<CheckResult>> {
    Some(match name {
        "poincare" => poincare(),
        "pairing" => pairing(),
        "symmetry" => symmetry(),
        "filtration" => filtration(),
        "paper-examples" => worked_examples(),
        _ => return None,
    })
}
