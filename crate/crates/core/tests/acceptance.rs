//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use shl_core::certify::{certify_level, df_image_graded_dims, exactness_probe};
use shl_core::exact::{int, rat, Rational};
use shl_core::filtration::{
    both_formulas_agree, closed_form_levels, cone_generating_level, milnor_range_dims, Cutoffs,
    HodgeEngine, ModuleTag,
};
use shl_core::graded::{
    filtered_milnor_dims, milnor_data, milnor_dims, milnor_number_formula,
    monomials_of_plain_degree, poincare_exponents, top_scaled, DegreeIndex,
};
use shl_core::poly::{classify, Polynomial, QHKind, WeightSystem};
use shl_core::residue::{annihilates, bbar_piece, pairing_perfectness, principal_part};
use shl_core::spectral::{
    classify_singularity, invariant_dim, monodromy_eigenspace_dims, r0_and_quotient_level,
    unipotent_hodge_dims, SingularityClass,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

const QUARTIC_SEXTIC: &str = "x1^6+x2^4+x3^4+x4^4+x1^2*x2*x3*x4";
const QUARTIC_SEXTIC_W: &str = "1/6,1/4,1/4,1/4";
const QUARTIC_SURFACE: &str = "x1^4+x2^4+x3^4+x1^2*x2^2*x3";

fn input(f: &str, w: &str) -> (Polynomial, WeightSystem) {
    (
        Polynomial::parse(f).unwrap(),
        WeightSystem::parse(w).unwrap(),
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

fn within(limit: Duration, start: Instant) -> Outcome {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn quartic_sextic() -> Outcome {
    let start = Instant::now();
    let (f, w) = input(QUARTIC_SEXTIC, QUARTIC_SEXTIC_W);
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
    let range = milnor_range_dims(&cls.principal, &w, &rat(3, 1), &rat(37, 12));
    let nonzero: Vec<(Rational, usize)> = range
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(k, &d)| (k.value(), d))
        .collect();
    eq("Milnor dims on [3, 37/12]", nonzero, vec![(rat(37, 12), 1)])?;
    let cutoffs = Cutoffs::default_for(&w);
    for tag in ModuleTag::ALL {
        let cert = certify_level(&f, &w, tag, 1, cutoffs);
        ensure(
            cert.verdict.is_certified(),
            format!("certify({tag}, 1): {:?}", cert.verdict),
        )?;
    }
    within(Duration::from_secs(60), start)
}

fn quartic_surface() -> Outcome {
    let (f, w) = input(QUARTIC_SURFACE, "1/4,1/4,1/4");
    eq(
        "classification",
        classify(&f, &w).kind,
        QHKind::SemiQuasihomogeneous,
    )?;
    eq("k1", closed_form_levels(3, &w.alpha_f()).1, 1)?;
    let cert = certify_level(&f, &w, ModuleTag::M, 0, Cutoffs::default_for(&w));
    ensure(
        cert.verdict.is_certified(),
        format!("certify(M, 0): {:?}", cert.verdict),
    )
}

/// Integer `k` with `k < dimX - dimX/d - 1 <= k + 1`, found by search.
fn sandwich(dim_x: i64, d: i64) -> i64 {
    let b = int(dim_x) - rat(dim_x, d) - int(1);
    (-10..10)
        .find(|&k| int(k) < b && b <= int(k + 1))
        .expect("sandwich has a solution")
}

fn cones() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for dim_x in 2..=3usize {
        for d in 2..=5u32 {
            let k1 = cone_generating_level(dim_x, d);
            if k1 != sandwich(dim_x as i64, d as i64) {
                bad.push(format!("({dim_x},{d}): formula {k1} differs from sandwich"));
                continue;
            }
            let text: Vec<String> = (1..=dim_x).map(|i| format!("x{i}^{d}")).collect();
            let f = Polynomial::parse(&text.join("+")).unwrap();
            let w = WeightSystem::homogeneous(dim_x, d);
            let probe = exactness_probe(&f, &w, ModuleTag::M, Cutoffs::default_for(&w))
                .map_err(|e| e.to_string())?;
            if !(probe.exact() && probe.measured == Some(k1)) {
                bad.push(format!(
                    "({dim_x},{d}): expected level {k1}, measured {:?}",
                    probe.measured
                ));
            }
        }
    }
    within(Duration::from_secs(120), start)?;
    ensure(bad.is_empty(), bad.join("; "))
}

fn battery() -> Vec<(&'static str, &'static str)> {
    vec![
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
        ("x1^2+x2^2+x3^2+x4^2", "1/2,1/2,1/2,1/2"),
        ("x1^3*x2+x2^3+x3^2+x4^2", "2/9,1/3,1/2,1/2"),
    ]
}

fn two_routes() -> Outcome {
    for (fs, ws) in battery() {
        let (f, w) = input(fs, ws);
        let md = milnor_data(&f, &w).map_err(|e| format!("{fs}: {e}"))?;
        let product = poincare_exponents(&w).map_err(|e| format!("{fs}: {e}"))?;
        eq(fs, &md.exponents, &product)?;
        eq(fs, int(md.mu as i64), milnor_number_formula(&w))?;
    }
    Ok(())
}

fn pairing() -> Outcome {
    for (fs, ws) in [
        ("x1^2+x2^2+x3^2", "1/2,1/2,1/2"),
        ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
        ("x1^6+x2^4+x3^4+x4^4", "1/6,1/4,1/4,1/4"),
    ] {
        let (f, w) = input(fs, ws);
        let v = w.denominator() as i64;
        let top = top_scaled(&w);
        for s in w.scaled_alpha_f()..=top + 2 * v {
            let c = pairing_perfectness(&f, &w, DegreeIndex::new(s, &w));
            ensure(c.perfect, format!("{fs} at {}: {c:?}", w.to_rational(s)))?;
        }
        let ef = invariant_dim(&milnor_data(&f, &w).map_err(|e| e.to_string())?);
        // Integer k with k > beta_f - 1, three of them.
        let first = (top - v) / v + 1;
        for k in first..first + 3 {
            let dim = bbar_piece(&f, &w, DegreeIndex::new(k * v, &w)).dim();
            eq(&format!("{fs}: dim Bbar^{k}"), dim, ef)?;
        }
    }
    Ok(())
}

fn classification_table() -> Outcome {
    for (fs, ws, want) in [
        ("x1^2+x2^2+x3^2", "1/2,1/2,1/2", SingularityClass::Rational),
        (
            "x1^3+x2^3+x3^3",
            "1/3,1/3,1/3",
            SingularityClass::DuBoisOnly,
        ),
        (QUARTIC_SEXTIC, QUARTIC_SEXTIC_W, SingularityClass::Neither),
    ] {
        let (_, w) = input(fs, ws);
        eq(fs, classify_singularity(&w.alpha_f()), want)?;
    }
    Ok(())
}

fn filtration_laws() -> Outcome {
    for (fs, ws) in [
        ("x1^3+x2^3+x3^3", "1/3,1/3,1/3"),
        ("x1^4+x2^4+x3^4", "1/4,1/4,1/4"),
    ] {
        let (f, w) = input(fs, ws);
        let v = w.denominator() as i64;
        let top = top_scaled(&w);
        let cutoffs = Cutoffs {
            p_max: 4,
            delta_max: top + 2 * v,
            pole_max: 5,
        };
        let mut engines: BTreeMap<ModuleTag, HodgeEngine> = ModuleTag::ALL
            .iter()
            .map(|&t| (t, HodgeEngine::new(&f, &w, t, cutoffs).unwrap()))
            .collect();
        let lo = w.scaled_alpha_f() - 5 * v;
        for p in 0..=3 {
            for delta in lo..=top + 2 * v {
                let at = |e: &mut HodgeEngine, p| e.piece(p, delta).map_err(|x| x.to_string());
                let label = format!("{fs} p={p} delta={}", w.to_rational(delta));
                for tag in ModuleTag::ALL {
                    let e = engines.get_mut(&tag).unwrap();
                    let (a, b) = (at(e, p)?, at(e, p + 1)?);
                    ensure(a <= b, format!("{label} {tag}: F_p {a} > F_p+1 {b}"))?;
                    let d = DegreeIndex::new(delta, &w);
                    let agree =
                        both_formulas_agree(&f, &w, tag, p, d).map_err(|x| x.to_string())?;
                    ensure(agree, format!("{label} {tag}: formulas differ"))?;
                }
                if delta >= 0 {
                    let count = monomials_of_plain_degree(&w, delta + v - w.scaled_alpha_f()).len();
                    let e = engines.get_mut(&ModuleTag::Mprime).unwrap();
                    eq(&format!("{label} F_0 law"), at(e, 0)?, count)?;
                }
                let m = at(engines.get_mut(&ModuleTag::M).unwrap(), p + 1)?;
                let mpp = at(engines.get_mut(&ModuleTag::Mdoubleprime).unwrap(), p)?;
                ensure(m <= mpp, format!("{label}: F_p+1 M {m} > F_p M'' {mpp}"))?;
            }
        }
        // Every strict generator a/f^{k+1} used for M lies in M.
        for k in 0..=3i64 {
            let b = bbar_piece(&f, &w, DegreeIndex::new((k + 1) * v, &w));
            for deg in (k + 1) * v + 1..=top + 2 * v + (k + 1) * v {
                for mu in monomials_of_plain_degree(&w, deg - w.scaled_alpha_f()) {
                    let a = Polynomial::term(mu.clone(), int(1));
                    ensure(
                        annihilates(&a, &b),
                        format!("{fs}: {mu}/f^{} not in M", k + 1),
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn symmetry() -> Outcome {
    for (fs, ws) in battery() {
        let (f, w) = input(fs, ws);
        let md = milnor_data(&f, &w).map_err(|e| e.to_string())?;
        let n = int(md.n as i64);
        let mut reflected: Vec<Rational> = md.exponents.iter().map(|a| &n - a).collect();
        reflected.sort();
        eq(fs, &reflected, &md.exponents)?;
        eq(
            fs,
            monodromy_eigenspace_dims(&md).values().sum::<usize>(),
            md.mu,
        )?;
    }
    Ok(())
}

fn semi_qh_invariance() -> Outcome {
    for (fs, ws) in [
        (QUARTIC_SEXTIC, QUARTIC_SEXTIC_W),
        (QUARTIC_SURFACE, "1/4,1/4,1/4"),
    ] {
        let (f, w) = input(fs, ws);
        let fp = principal_part(&f, &w);
        let v = w.denominator() as i64;
        let top = top_scaled(&w);
        let af = w.scaled_alpha_f();
        let gr = filtered_milnor_dims(&f, &w, top + v);
        let direct = milnor_dims(&fp, &w, af, top + v);
        eq(&format!("{fs}: graded Milnor dims"), &gr, &direct)?;
        let alpha_f_of_f = gr
            .iter()
            .find(|(_, &d)| d > 0)
            .map(|(&s, _)| w.to_rational(s));
        eq(&format!("{fs}: alpha_f"), alpha_f_of_f, Some(w.alpha_f()))?;
        let md = milnor_data(&fp, &w).map_err(|e| e.to_string())?;
        let exps: Vec<Rational> = gr
            .iter()
            .flat_map(|(&s, &d)| std::iter::repeat_n(w.to_rational(s), d))
            .collect();
        eq(&format!("{fs}: exponents"), exps, md.exponents)?;
        eq(
            &format!("{fs}: graded image of the 2-form operators"),
            df_image_graded_dims(&f, &w, top + v),
            df_image_graded_dims(&fp, &w, top + v),
        )?;
    }
    Ok(())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "1 quartic-sextic semiquasihomogeneous example",
            quartic_sextic,
        ),
        ("2 quartic surface with level below k1", quartic_surface),
        ("3 cone generating levels", cones),
        ("4 Milnor basis versus product formula", two_routes),
        ("5 residue pairing perfectness and stabilization", pairing),
        ("6 du Bois / rational classification", classification_table),
        ("7 Hodge filtration laws", filtration_laws),
        ("8 spectrum symmetry and eigenspace partition", symmetry),
        ("9 semiquasihomogeneous invariance", semi_qh_invariance),
    ];
    let only: Option<String> = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, check) in criteria {
        if only.as_deref().is_some_and(|o| !name.starts_with(o)) {
            continue;
        }
        let start = Instant::now();
        let res = check();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS criterion {name} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
