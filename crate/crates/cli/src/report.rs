//! The analysis pipeline and the report it produces.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use shl_core::certify::{certify_level, Verdict};
use shl_core::filtration::{closed_form_levels, HodgeEngine};
use shl_core::graded::{milnor_data, milnor_number_formula, top_scaled, MilnorError};
use shl_core::poly::{classify, infer_weights, parse_polynomial, InferError};
use shl_core::residue::{bbar_piece, pairing_perfectness};
use shl_core::spectral::spectral_report;
use shl_core::{Cutoffs, DegreeIndex, ModuleTag, Polynomial, QHKind, Rational, WeightSystem};

use crate::error::CliError;
use crate::json::{rational, Degree};

/// Flags shared by `analyze` and `batch`.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub weights: Option<String>,
    pub max_level: Option<i64>,
    /// Upper bound on the filtration slice degree, as a rational.
    pub max_degree: Option<String>,
    pub module: Option<ModuleTag>,
    pub certify_level: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub classification: ClassificationSummary,
    pub milnor: MilnorSummary,
    pub spectral: SpectralSummary,
    pub pairing: PairingSummary,
    pub filtration: FiltrationSummary,
    pub certificates: Vec<ModuleCertificates>,
    pub meta: Meta,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub polynomial: String,
    pub variables: usize,
    pub weights: Vec<String>,
    pub weights_source: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationSummary {
    pub kind: &'static str,
    pub principal: String,
    pub tail: String,
    pub diagnostics: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentEntry {
    pub degree: Degree,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MilnorSummary {
    /// `"f"` or `"principal part"`.
    pub computed_on: &'static str,
    pub mu: usize,
    pub mu_formula: String,
    pub top_degree: Degree,
    pub exponents: Vec<ExponentEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenspaceEntry {
    pub exponent_mod_1: String,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDim {
    pub p: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub alpha_f: String,
    pub beta_f: String,
    pub bfunction: String,
    pub bfunction_roots: Vec<String>,
    pub singularity_class: String,
    pub eigenspace_dims: Vec<EigenspaceEntry>,
    pub unipotent_hodge_dims: Vec<LevelDim>,
    pub dim_ef: usize,
    pub r0: Option<i64>,
    pub quotient_generated_level: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingEntry {
    pub degree: Degree,
    pub abar_dim: usize,
    pub bbar_dim: usize,
    pub perfect: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StableEntry {
    pub k: i64,
    pub bbar_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingSummary {
    pub computed_on: &'static str,
    pub all_perfect: bool,
    pub degrees: Vec<PairingEntry>,
    /// `dim Bbar^k` at the first integers `k > beta_f - 1`.
    pub stabilization: Vec<StableEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceEntry {
    pub p: i64,
    pub delta: Degree,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceTable {
    pub module: String,
    /// Nonzero entries only.
    pub entries: Vec<PieceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationSummary {
    pub k0: i64,
    pub k1: i64,
    pub tables: Vec<PieceTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Attempt {
    pub r: i64,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Degree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleCertificates {
    pub module: String,
    /// `k0` for `Mprime`/`Mdoubleprime`, `k1` for `M`.
    pub closed_form_level: i64,
    /// Smallest attempted `r` that was certified.
    pub certified_level: Option<i64>,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutoffsEcho {
    pub p_max: i64,
    pub delta_max: Degree,
    pub pole_max: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: &'static str,
    pub micros: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub cutoffs: CutoffsEcho,
    pub timings: Vec<Timing>,
}

fn kind_name(k: QHKind) -> &'static str {
    match k {
        QHKind::Quasihomogeneous => "Quasihomogeneous",
        QHKind::SemiQuasihomogeneous => "SemiQuasihomogeneous",
        QHKind::Invalid => "Invalid",
    }
}

fn resolve_weights(
    f: &Polynomial,
    given: Option<&str>,
) -> Result<(WeightSystem, &'static str), CliError> {
    if let Some(text) = given {
        let w = WeightSystem::parse(text).map_err(|e| CliError::Validation(e.to_string()))?;
        return Ok((w, "given"));
    }
    match infer_weights(f) {
        Ok(w) => Ok((w, "inferred")),
        Err(e @ (InferError::ZeroPolynomial | InferError::Inconsistent)) => {
            Err(CliError::Validation(format!("{e}; supply --weights")))
        }
        Err(InferError::Underdetermined) => Err(CliError::OutOfScope(
            "not an isolated singularity: the monomials of f do not determine its weights".into(),
        )),
        Err(e @ InferError::OutOfRange { .. }) => Err(CliError::OutOfScope(format!(
            "not an isolated quasihomogeneous singularity: {e}"
        ))),
    }
}

fn cutoffs_for(w: &WeightSystem, opts: &Options) -> Result<Cutoffs, CliError> {
    let mut c = Cutoffs::default_for(w);
    if let Some(p) = opts.max_level {
        if p < 0 {
            return Err(CliError::Validation(format!(
                "--max-level must be >= 0, got {p}"
            )));
        }
        c = c.with_p_max(p);
    }
    if let Some(text) = &opts.max_degree {
        let d: Rational = text
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("cannot parse --max-degree '{text}'")))?;
        let scaled = (d * Rational::from_integer((w.denominator() as i64).into())).floor();
        c.delta_max = i64::try_from(scaled.to_integer())
            .map_err(|_| CliError::Validation(format!("--max-degree '{text}' is out of range")))?;
    }
    Ok(c)
}

fn attempt(f: &Polynomial, w: &WeightSystem, tag: ModuleTag, r: i64, c: Cutoffs) -> Attempt {
    let cert = certify_level(f, w, tag, r, c);
    let mut a = Attempt {
        r,
        verdict: "",
        p: None,
        delta: None,
        witness: None,
        reason: None,
    };
    match cert.verdict {
        Verdict::CertifiedUpTo(_) => a.verdict = "CertifiedUpTo",
        Verdict::WitnessFailure { p, delta, witness } => {
            a.verdict = "WitnessFailure";
            a.p = Some(p);
            a.delta = Some(Degree::from_index(delta));
            a.witness = Some(witness.to_string());
        }
        Verdict::Inconclusive(reason) => {
            a.verdict = "Inconclusive";
            a.reason = Some(reason);
        }
    }
    a
}

/// Runs parse, classify, Milnor, spectral, pairing, filtration and
/// certification on one input.
pub fn analyze(text: &str, opts: &Options) -> Result<AnalysisReport, CliError> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: &'static str, timings: &mut Vec<Timing>| {
        timings.push(Timing {
            stage,
            micros: clock.elapsed().as_micros() as u64,
        });
        clock = Instant::now();
    };

    let hint = match &opts.weights {
        Some(t) => Some(
            WeightSystem::parse(t)
                .map_err(|e| CliError::Validation(e.to_string()))?
                .n(),
        ),
        None => None,
    };
    let f = parse_polynomial(text.trim(), hint).map_err(|e| CliError::Validation(e.to_string()))?;
    if f.is_zero() {
        return Err(CliError::Validation(
            "the zero polynomial has no singularity to analyze".into(),
        ));
    }
    let (w, weights_source) = resolve_weights(&f, opts.weights.as_deref())?;
    let cutoffs = cutoffs_for(&w, opts)?;
    lap("parse", &mut timings);

    let cls = classify(&f, &w);
    if cls.kind == QHKind::Invalid {
        return Err(CliError::OutOfScope(format!(
            "not (semi)quasihomogeneous: {}",
            cls.diagnostics
        )));
    }
    let qh = cls.kind == QHKind::Quasihomogeneous;
    let computed_on = if qh { "f" } else { "principal part" };
    lap("classify", &mut timings);

    let md = milnor_data(&cls.principal, &w).map_err(|e| match e {
        MilnorError::NotIsolated { .. } => CliError::OutOfScope(e.to_string()),
        _ => CliError::Inconsistent(e.to_string()),
    })?;
    let top = top_scaled(&w);
    let milnor = MilnorSummary {
        computed_on,
        mu: md.mu,
        mu_formula: rational(&milnor_number_formula(&w)),
        top_degree: Degree::from_scaled(top, &w),
        exponents: md
            .per_degree_dims
            .iter()
            .map(|(&s, &d)| ExponentEntry {
                degree: Degree::from_scaled(s, &w),
                multiplicity: d,
            })
            .collect(),
    };
    lap("milnor", &mut timings);

    let sr = spectral_report(&md);
    let spectral = SpectralSummary {
        alpha_f: rational(&sr.alpha_f),
        beta_f: rational(&sr.beta_f),
        bfunction: sr.bfunction.to_string(),
        bfunction_roots: sr
            .bfunction
            .roots_of_reflected()
            .iter()
            .map(|r| rational(&-r))
            .collect(),
        singularity_class: sr.classification.to_string(),
        eigenspace_dims: sr
            .eigenspace_dims
            .iter()
            .map(|(e, &dim)| EigenspaceEntry {
                exponent_mod_1: rational(e),
                dim,
            })
            .collect(),
        unipotent_hodge_dims: sr
            .unipotent_hodge_dims
            .iter()
            .map(|(&p, &dim)| LevelDim { p, dim })
            .collect(),
        dim_ef: sr.dim_ef,
        r0: sr.r0,
        quotient_generated_level: sr.quotient_generated,
    };
    lap("spectral", &mut timings);

    let v = w.denominator() as i64;
    let degrees: Vec<PairingEntry> = (w.scaled_alpha_f()..=top)
        .map(|s| {
            let c = pairing_perfectness(&cls.principal, &w, DegreeIndex::new(s, &w));
            PairingEntry {
                degree: Degree::from_index(c.degree),
                abar_dim: c.abar_dim,
                bbar_dim: c.bbar_dim,
                perfect: c.perfect,
            }
        })
        .collect();
    let first = (top - v).div_euclid(v) + 1;
    let pairing = PairingSummary {
        computed_on,
        all_perfect: degrees.iter().all(|d| d.perfect),
        degrees,
        stabilization: (first..first + 2)
            .map(|k| StableEntry {
                k,
                bbar_dim: bbar_piece(&cls.principal, &w, DegreeIndex::new(k * v, &w)).dim(),
            })
            .collect(),
    };
    lap("pairing", &mut timings);

    let modules: Vec<ModuleTag> = match opts.module {
        Some(t) => vec![t],
        None => ModuleTag::ALL.to_vec(),
    };
    let (k0, k1) = closed_form_levels(w.n(), &w.alpha_f());
    let mut tables = Vec::new();
    let mut note = None;
    if qh {
        for &tag in &modules {
            let mut engine = HodgeEngine::new(&f, &w, tag, cutoffs)
                .map_err(|e| CliError::Inconsistent(e.to_string()))?;
            let table = engine
                .table()
                .map_err(|e| CliError::Inconsistent(e.to_string()))?;
            tables.push(PieceTable {
                module: tag.to_string(),
                entries: table
                    .entries
                    .iter()
                    .filter(|(_, &d)| d > 0)
                    .map(|(&(p, delta), &dim)| PieceEntry {
                        p,
                        delta: Degree::from_scaled(delta, &w),
                        dim,
                    })
                    .collect(),
            });
        }
    } else {
        note = Some("piece tables need quasihomogeneous input; see certificates".to_string());
    }
    let filtration = FiltrationSummary {
        k0,
        k1,
        tables,
        note,
    };
    lap("filtration", &mut timings);

    let certificates = modules
        .iter()
        .map(|&tag| {
            let expected = if tag == ModuleTag::M { k1 } else { k0 };
            let attempts: Vec<Attempt> = match opts.certify_level {
                Some(r) => vec![attempt(&f, &w, tag, r, cutoffs)],
                None => {
                    let mut out = Vec::new();
                    for r in 0..=expected.max(0) {
                        let a = attempt(&f, &w, tag, r, cutoffs);
                        let stop = a.verdict == "CertifiedUpTo";
                        out.push(a);
                        if stop {
                            break;
                        }
                    }
                    out
                }
            };
            ModuleCertificates {
                module: tag.to_string(),
                closed_form_level: expected,
                certified_level: attempts
                    .iter()
                    .find(|a| a.verdict == "CertifiedUpTo")
                    .map(|a| a.r),
                attempts,
            }
        })
        .collect();
    lap("certify", &mut timings);

    Ok(AnalysisReport {
        input: InputEcho {
            polynomial: f.to_string(),
            variables: f.nvars(),
            weights: w.weights().iter().map(rational).collect(),
            weights_source,
        },
        classification: ClassificationSummary {
            kind: kind_name(cls.kind),
            principal: cls.principal.to_string(),
            tail: cls.tail.to_string(),
            diagnostics: cls.diagnostics,
        },
        milnor,
        spectral,
        pairing,
        filtration,
        certificates,
        meta: Meta {
            tool: "shl",
            version: env!("CARGO_PKG_VERSION"),
            cutoffs: CutoffsEcho {
                p_max: cutoffs.p_max,
                delta_max: Degree::from_scaled(cutoffs.delta_max, &w),
                pole_max: cutoffs.pole_max,
            },
            timings,
        },
    })
}

fn frac(d: &Degree) -> String {
    if d.den == "1" {
        d.num.clone()
    } else {
        format!("{}/{}", d.num, d.den)
    }
}

fn short(r: &str) -> &str {
    r.strip_suffix("/1").unwrap_or(r)
}

/// Human-readable rendering. Carries the same facts as the JSON form.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let i = &r.input;
    let ws: Vec<&str> = i.weights.iter().map(|w| short(w)).collect();
    let _ = writeln!(s, "f = {}", i.polynomial);
    let _ = writeln!(s, "weights ({}): {}", i.weights_source, ws.join(", "));
    let _ = writeln!(
        s,
        "class: {} ({})",
        r.classification.kind, r.classification.diagnostics
    );
    if r.classification.kind == "SemiQuasihomogeneous" {
        let _ = writeln!(s, "principal part: {}", r.classification.principal);
    }
    let m = &r.milnor;
    let _ = writeln!(
        s,
        "mu = {} (computed on {}), top degree {}",
        m.mu,
        m.computed_on,
        frac(&m.top_degree)
    );
    let exps: Vec<String> = m
        .exponents
        .iter()
        .map(|e| format!("{}^{}", frac(&e.degree), e.multiplicity))
        .collect();
    let _ = writeln!(s, "exponents: {}", exps.join(" "));
    let sp = &r.spectral;
    let _ = writeln!(
        s,
        "alpha_f = {}, beta_f = {}, {}",
        short(&sp.alpha_f),
        short(&sp.beta_f),
        sp.singularity_class
    );
    let _ = writeln!(s, "b_f(s) = {}", sp.bfunction);
    let eig: Vec<String> = sp
        .eigenspace_dims
        .iter()
        .map(|e| format!("{}:{}", short(&e.exponent_mod_1), e.dim))
        .collect();
    let _ = writeln!(s, "eigenspaces: {}", eig.join(" "));
    let uni: Vec<String> = sp
        .unipotent_hodge_dims
        .iter()
        .map(|e| format!("p={}:{}", e.p, e.dim))
        .collect();
    let _ = writeln!(
        s,
        "unipotent Hodge dims: {} (dim E_f = {})",
        uni.join(" "),
        sp.dim_ef
    );
    match (sp.r0, sp.quotient_generated_level) {
        (Some(r0), Some(l)) => {
            let _ = writeln!(s, "r0 = {r0}, quotient generated at level {l}");
        }
        _ => {
            let _ = writeln!(s, "r0 undefined (no integer exponent)");
        }
    }
    let pr = &r.pairing;
    let bad: Vec<String> = pr
        .degrees
        .iter()
        .filter(|d| !d.perfect)
        .map(|d| frac(&d.degree))
        .collect();
    if pr.all_perfect {
        let _ = writeln!(
            s,
            "pairing: perfect at all {} grid degrees",
            pr.degrees.len()
        );
    } else {
        let _ = writeln!(s, "pairing: NOT perfect at {}", bad.join(", "));
    }
    let st: Vec<String> = pr
        .stabilization
        .iter()
        .map(|e| format!("k={}:{}", e.k, e.bbar_dim))
        .collect();
    let _ = writeln!(s, "dim Bbar^k: {}", st.join(" "));
    let fl = &r.filtration;
    let _ = writeln!(s, "closed-form levels: k0 = {}, k1 = {}", fl.k0, fl.k1);
    for t in &fl.tables {
        let _ = writeln!(s, "F_p {} (nonzero slices): {}", t.module, t.entries.len());
    }
    if let Some(n) = &fl.note {
        let _ = writeln!(s, "filtration: {n}");
    }
    for c in &r.certificates {
        let lvl = c
            .certified_level
            .map_or("none".to_string(), |l| l.to_string());
        let _ = writeln!(
            s,
            "{}: closed form {}, certified level {}",
            c.module, c.closed_form_level, lvl
        );
        for a in &c.attempts {
            match a.verdict {
                "WitnessFailure" => {
                    let _ = writeln!(
                        s,
                        "  r={}: WitnessFailure at p={} delta={}: {}",
                        a.r,
                        a.p.unwrap_or_default(),
                        a.delta.as_ref().map(frac).unwrap_or_default(),
                        a.witness.as_deref().unwrap_or_default()
                    );
                }
                "Inconclusive" => {
                    let _ = writeln!(
                        s,
                        "  r={}: Inconclusive ({})",
                        a.r,
                        a.reason.as_deref().unwrap_or_default()
                    );
                }
                v => {
                    let _ = writeln!(s, "  r={}: {v}", a.r);
                }
            }
        }
    }
    let c = &r.meta.cutoffs;
    let _ = writeln!(
        s,
        "cutoffs: p_max {}, delta_max {}, pole_max {}",
        c.p_max,
        frac(&c.delta_max),
        c.pole_max
    );
    s
}
