//! The modular 1-form of a Lie n-algebroid by the supertrace formula,
//! closedness verification, and the exactness decision: bounded
//! polynomial search, the vanishing-anchor obstruction, and symbolic
//! witness verification.

use std::collections::BTreeMap;

use crate::algebroid::{JacobiOutcome, LieNAlgebroid};
use crate::error::{FoliaError, Result};
use crate::graded::Section;
use crate::linalg::QMatrix;
use crate::poly::{monomials_of_degree, qi, Mono, Poly, Q};
use crate::ratlog::RatLog;

/// The modular 1-form: one polynomial value per degree-0 basis
/// element, together with the volume section it was computed against.
#[derive(Debug, Clone)]
pub struct ModularOneForm {
    pub values: Vec<Poly>,
    /// Symbolic description of the Berezinian section used.
    pub provenance: String,
}

/// Level-by-level bookkeeping of the Berezinian line bundle: the
/// ordered factor list with its dualization pattern and the sign
/// weight each level contributes to the supertrace. Never materialized
/// as a tensor; the signs carry all the information.
#[derive(Debug, Clone)]
pub struct BerezinianDescriptor {
    pub depth_is_even: bool,
    /// `(factor, dualized)` from the cotangent factor down the levels.
    pub factors: Vec<(String, bool)>,
    /// Sign weight `(-1)^i` attached to level `i`.
    pub level_signs: Vec<i64>,
}

impl BerezinianDescriptor {
    pub fn for_algebroid(alg: &LieNAlgebroid) -> Self {
        let depth = alg.depth();
        let mut factors = vec![("^top T*M".to_string(), true)];
        let mut level_signs = Vec::new();
        for lv in 0..depth {
            let dual = lv % 2 == 1;
            factors.push((
                format!("^top E_{}{}", -(lv as i64), if dual { "*" } else { "" }),
                dual,
            ));
            level_signs.push(if lv % 2 == 0 { 1 } else { -1 });
        }
        BerezinianDescriptor {
            depth_is_even: depth % 2 == 0,
            factors,
            level_signs,
        }
    }
}

/// Per-basis-element breakdown of the supertrace.
#[derive(Debug, Clone)]
pub struct TraceBreakdown {
    /// Divergence of the anchor image.
    pub divergence: Poly,
    /// `(raw adjoint trace, signed contribution)` per level.
    pub levels: Vec<(Poly, Poly)>,
    pub total: Poly,
}

/// Trace of the constant-basis matrix of `b -> l2(a, b)` restricted to
/// `E_{-level}`; equals the proportionality factor of the Lie
/// derivative on the level's top wedge.
pub fn adjoint_trace(alg: &LieNAlgebroid, a: usize, level: usize) -> Result<Poly> {
    let vars = alg.vars().clone();
    let mut trace = Poly::zero(&vars);
    for b in 0..alg.bundle().rank(level) {
        let img = alg.l2_basis((0, a), (level, b)).map_err(|_| {
            FoliaError::MissingBracket(format!(
                "l2({}, E_{{-{level}}} basis) needed for the level-{level} trace",
                alg.bundle().label(0, a)
            ))
        })?;
        trace += &img.coeff(b, &vars);
    }
    Ok(trace)
}

/// The modular 1-form with respect to the standard constant wedge of
/// all basis elements: on each degree-0 basis element,
/// `theta(a) = div(rho(a)) + sum_i (-1)^i tr(ad_a | E_{-i})`.
pub fn modular_one_form(alg: &LieNAlgebroid) -> Result<ModularOneForm> {
    let breakdown = trace_breakdown(alg)?;
    Ok(ModularOneForm {
        values: breakdown.into_iter().map(|b| b.total).collect(),
        provenance: "standard constant wedge of all basis elements".into(),
    })
}

/// The per-level contributions behind `modular_one_form`.
pub fn trace_breakdown(alg: &LieNAlgebroid) -> Result<Vec<TraceBreakdown>> {
    let mut out = Vec::new();
    for a in 0..alg.bundle().rank(0) {
        let divergence = alg.anchor_of_basis(a).divergence();
        let mut total = divergence.clone();
        let mut levels = Vec::new();
        for lv in 0..alg.depth() {
            let raw = adjoint_trace(alg, a, lv)?;
            let signed = if lv % 2 == 0 { raw.clone() } else { -&raw };
            total += &signed;
            levels.push((raw, signed));
        }
        out.push(TraceBreakdown {
            divergence,
            levels,
            total,
        });
    }
    Ok(out)
}

/// One closedness residual entry.
#[derive(Debug, Clone)]
pub enum ClosednessEntry {
    D0 {
        basis: usize,
        residual: Poly,
    },
    D1 {
        pair: (usize, usize),
        residual: Poly,
    },
    Unchecked {
        what: String,
    },
}

#[derive(Debug, Clone)]
pub struct ClosednessReport {
    pub entries: Vec<ClosednessEntry>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| match e {
            ClosednessEntry::D0 { residual, .. } => residual.is_zero(),
            ClosednessEntry::D1 { residual, .. } => residual.is_zero(),
            ClosednessEntry::Unchecked { .. } => true,
        })
    }

    pub fn failures(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                ClosednessEntry::D0 { basis, residual } if !residual.is_zero() => {
                    Some(format!("d0 residual on basis {basis}: {residual}"))
                }
                ClosednessEntry::D1 { pair, residual } if !residual.is_zero() => Some(format!(
                    "d1 residual on pair ({}, {}): {residual}",
                    pair.0, pair.1
                )),
                _ => None,
            })
            .collect()
    }

    pub fn unchecked(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                ClosednessEntry::Unchecked { what } => Some(what.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Runs both differential components on all applicable tuples: the
/// arity-0 part over the degree -1 basis and the arity-1 part over all
/// degree-0 pairs. Missing brackets become `Unchecked` entries.
pub fn closedness_check(alg: &LieNAlgebroid, theta: &[Poly]) -> ClosednessReport {
    let mut entries = Vec::new();
    for (u, residual) in alg.d0_on_one_form(theta).into_iter().enumerate() {
        entries.push(ClosednessEntry::D0 { basis: u, residual });
    }
    let r0 = alg.bundle().rank(0);
    for a in 0..r0 {
        for b in (a + 1)..r0 {
            match alg.d1_on_one_form(theta, a, b) {
                Ok(residual) => entries.push(ClosednessEntry::D1 {
                    pair: (a, b),
                    residual,
                }),
                Err(e) => entries.push(ClosednessEntry::Unchecked {
                    what: e.to_string(),
                }),
            }
        }
    }
    ClosednessReport { entries }
}

/// Result of the bounded polynomial exactness search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Solution(Poly),
    Infeasible,
}

/// Searches for a polynomial `g` of degree at most `max_degree` with
/// `rho(a)[g] = theta(a)` for every degree-0 basis element, by exact
/// linear solve over the monomial coefficients of `g`.
pub fn exactness_search(
    alg: &LieNAlgebroid,
    theta: &[Poly],
    max_degree: u32,
) -> SearchOutcome {
    if alg.anchor_homogeneous_degree().is_ok() {
        exactness_search_sliced(alg, theta, max_degree)
    } else {
        exactness_search_dense(alg, theta, max_degree)
    }
}

fn exactness_search_sliced(
    alg: &LieNAlgebroid,
    theta: &[Poly],
    max_degree: u32,
) -> SearchOutcome {
    let vars = alg.vars().clone();
    let n = vars.len();
    let h = alg
        .anchor_homogeneous_degree()
        .expect("caller checked homogeneity");
    let r0 = alg.bundle().rank(0);
    let mut g = Poly::zero(&vars);
    let max_r = theta
        .iter()
        .filter_map(|p| p.total_degree())
        .max()
        .unwrap_or(0);
    for r in 0..=max_r {
        let rhs_parts: Vec<Poly> = theta.iter().map(|p| p.homogeneous_part(r)).collect();
        if rhs_parts.iter().all(|p| p.is_zero()) {
            continue;
        }
        // a degree-d slice of g produces output in degree d + h - 1
        let d_signed = r as i64 + 1 - h as i64;
        if d_signed < 0 || d_signed as u32 > max_degree {
            return SearchOutcome::Infeasible;
        }
        let d = d_signed as u32;
        let unknown_monos = monomials_of_degree(n, d);
        let out_monos = monomials_of_degree(n, r);
        let mono_pos: BTreeMap<&Mono, usize> =
            out_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = r0 * out_monos.len();
        let mut mat = QMatrix::zero(rows, unknown_monos.len());
        for (mi, m) in unknown_monos.iter().enumerate() {
            let mp = Poly::from_terms(&vars, [(m.clone(), qi(1))]);
            for a in 0..r0 {
                let applied = alg.anchor_of_basis(a).apply(&mp);
                for (mm, c) in applied.terms() {
                    mat.set(a * out_monos.len() + mono_pos[mm], mi, c.clone());
                }
            }
        }
        let mut rhs = vec![qi(0); rows];
        for (a, part) in rhs_parts.iter().enumerate() {
            for (m, c) in part.terms() {
                rhs[a * out_monos.len() + mono_pos[m]] = c.clone();
            }
        }
        match mat.solve(&rhs) {
            None => return SearchOutcome::Infeasible,
            Some(sol) => {
                for (mi, m) in unknown_monos.iter().enumerate() {
                    g += &Poly::from_terms(&vars, [(m.clone(), sol[mi].clone())]);
                }
            }
        }
    }
    SearchOutcome::Solution(g)
}

fn exactness_search_dense(
    alg: &LieNAlgebroid,
    theta: &[Poly],
    max_degree: u32,
) -> SearchOutcome {
    let vars = alg.vars().clone();
    let n = vars.len();
    let r0 = alg.bundle().rank(0);
    let mut unknown_monos = Vec::new();
    for d in 0..=max_degree {
        unknown_monos.extend(monomials_of_degree(n, d));
    }
    let max_anchor = (0..r0)
        .flat_map(|a| alg.anchor_of_basis(a).components().iter())
        .filter_map(|p| p.total_degree())
        .max()
        .unwrap_or(0);
    let max_theta = theta.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let out_bound = (max_degree + max_anchor).max(max_theta + 1);
    let mut out_monos = Vec::new();
    for d in 0..=out_bound {
        out_monos.extend(monomials_of_degree(n, d));
    }
    let mono_pos: BTreeMap<&Mono, usize> =
        out_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = r0 * out_monos.len();
    let mut mat = QMatrix::zero(rows, unknown_monos.len());
    for (mi, m) in unknown_monos.iter().enumerate() {
        let mp = Poly::from_terms(&vars, [(m.clone(), qi(1))]);
        for a in 0..r0 {
            let applied = alg.anchor_of_basis(a).apply(&mp);
            for (mm, c) in applied.terms() {
                mat.set(a * out_monos.len() + mono_pos[mm], mi, c.clone());
            }
        }
    }
    let mut rhs = vec![qi(0); rows];
    for (a, t) in theta.iter().enumerate() {
        for (m, c) in t.terms() {
            rhs[a * out_monos.len() + mono_pos[m]] = c.clone();
        }
    }
    match mat.solve(&rhs) {
        None => SearchOutcome::Infeasible,
        Some(sol) => {
            let mut g = Poly::zero(&vars);
            for (mi, m) in unknown_monos.iter().enumerate() {
                g += &Poly::from_terms(&vars, [(m.clone(), sol[mi].clone())]);
            }
            SearchOutcome::Solution(g)
        }
    }
}

/// Outcome of the continuity obstruction at a candidate singular
/// point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Every anchor image vanishes at the point while some value of
    /// the 1-form does not: no continuously differentiable primitive
    /// can exist on any neighborhood of the point.
    Obstructed { witness_basis: usize },
    NoObstruction,
}

/// Checks the vanishing-anchor obstruction at a rational point.
pub fn origin_obstruction(alg: &LieNAlgebroid, theta: &[Poly], point: &[Q]) -> Obstruction {
    let r0 = alg.bundle().rank(0);
    for a in 0..r0 {
        let vals = alg.anchor_of_basis(a).evaluate_at(point);
        if vals.iter().any(|v| v != &qi(0)) {
            return Obstruction::NoObstruction;
        }
    }
    for (a, t) in theta.iter().enumerate() {
        if t.evaluate_at(point) != qi(0) {
            return Obstruction::Obstructed { witness_basis: a };
        }
    }
    Obstruction::NoObstruction
}

/// Result of checking a closed-form witness.
#[derive(Debug, Clone)]
pub struct WitnessCheck {
    pub passed: bool,
    /// `rho(a)[g] - theta(a)` per basis element.
    pub residuals: Vec<RatLog>,
}

/// Verifies `rho(a)[g] = theta(a)` for every degree-0 basis element as
/// an exact rational-log identity, valid off the declared locus of the
/// witness.
pub fn verify_witness(alg: &LieNAlgebroid, theta: &[Poly], g: &RatLog) -> WitnessCheck {
    let mut residuals = Vec::new();
    let mut passed = true;
    for a in 0..alg.bundle().rank(0) {
        let applied = alg.anchor_of_basis(a).apply_ratlog(g);
        let residual = applied.sub(&RatLog::from_poly(theta[a].clone()));
        if !residual.is_zero() {
            passed = false;
        }
        residuals.push(residual);
    }
    WitnessCheck { passed, residuals }
}

/// The modular 1-form with respect to the scaled section `f * Omega`,
/// as rational-log values: `theta_f(a) = theta(a) + rho(a)[f]/f`.
/// The correction comes from the anchor acting on the scalar factor of
/// the cotangent slot.
pub fn scaled_modular_form(alg: &LieNAlgebroid, f: &Poly) -> Result<Vec<RatLog>> {
    if f.is_zero() {
        return Err(FoliaError::Invalid("scaling factor must not vanish".into()));
    }
    let theta = modular_one_form(alg)?;
    let mut out = Vec::new();
    for a in 0..alg.bundle().rank(0) {
        let base = RatLog::from_poly(theta.values[a].clone());
        let correction = RatLog::from_ratio(alg.anchor_of_basis(a).apply(f), f.clone());
        out.push(base.add(&correction));
    }
    Ok(out)
}

/// Exactness verdict assembled by the pipeline.
#[derive(Debug, Clone)]
pub enum ExactnessVerdict {
    /// A verified primitive, with a note on its domain of validity.
    ExactWithWitness { witness: WitnessKind, domain: String },
    /// The obstruction fires at this point.
    NotExactNear {
        point: Vec<Q>,
        witness_basis: usize,
    },
    InconclusiveAtBound(u32),
}

#[derive(Debug, Clone)]
pub enum WitnessKind {
    Polynomial(Poly),
    RatLog(RatLog),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unimodular {
    Yes,
    No,
    Unknown,
}

/// Options for `assemble_report`.
#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub degree_bound: u32,
    /// Candidate singular points for the obstruction test.
    pub obstruction_points: Vec<Vec<Q>>,
    /// Optional off-locus witness to verify.
    pub witness: Option<RatLog>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            degree_bound: 6,
            obstruction_points: Vec::new(),
            witness: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModularReport {
    pub theta: ModularOneForm,
    pub breakdown: Vec<TraceBreakdown>,
    pub closedness: ClosednessReport,
    pub exactness: ExactnessVerdict,
    pub witness_check: Option<WitnessCheck>,
    pub unimodular: Unimodular,
}

/// Runs the full pipeline: modular 1-form, closedness, bounded
/// exactness search, then the obstruction test at each candidate
/// point. Deterministic; aggregates partial-table errors.
pub fn assemble_report(alg: &LieNAlgebroid, options: &ReportOptions) -> Result<ModularReport> {
    let breakdown = trace_breakdown(alg)?;
    let theta = ModularOneForm {
        values: breakdown.iter().map(|b| b.total.clone()).collect(),
        provenance: "standard constant wedge of all basis elements".into(),
    };
    let closedness = closedness_check(alg, &theta.values);
    let search = exactness_search(alg, &theta.values, options.degree_bound);
    let witness_check = options
        .witness
        .as_ref()
        .map(|g| verify_witness(alg, &theta.values, g));

    let mut obstruction: Option<(Vec<Q>, usize)> = None;
    for point in &options.obstruction_points {
        if let Obstruction::Obstructed { witness_basis } =
            origin_obstruction(alg, &theta.values, point)
        {
            obstruction = Some((point.clone(), witness_basis));
            break;
        }
    }

    let exactness = match (&search, &obstruction) {
        (SearchOutcome::Solution(g), None) => ExactnessVerdict::ExactWithWitness {
            witness: WitnessKind::Polynomial(g.clone()),
            domain: "everywhere".into(),
        },
        (SearchOutcome::Solution(_), Some(_)) => {
            // mutually exclusive by construction: a global polynomial
            // primitive forces theta to vanish wherever the anchor does
            return Err(FoliaError::Invalid(
                "inconsistent verdicts: polynomial witness and obstruction".into(),
            ));
        }
        (SearchOutcome::Infeasible, Some((point, basis))) => ExactnessVerdict::NotExactNear {
            point: point.clone(),
            witness_basis: *basis,
        },
        (SearchOutcome::Infeasible, None) => {
            ExactnessVerdict::InconclusiveAtBound(options.degree_bound)
        }
    };
    let unimodular = match &exactness {
        ExactnessVerdict::ExactWithWitness { .. } => Unimodular::Yes,
        ExactnessVerdict::NotExactNear { .. } => Unimodular::No,
        ExactnessVerdict::InconclusiveAtBound(_) => Unimodular::Unknown,
    };
    Ok(ModularReport {
        theta,
        breakdown,
        closedness,
        exactness,
        witness_check,
        unimodular,
    })
}

/// Signed sum of level-wise traces of a commutator of two adjoint
/// matrices; zero as a matrix identity over the polynomial ring.
pub fn supertrace_of_adjoint_commutator(
    alg: &LieNAlgebroid,
    a: usize,
    b: usize,
) -> Result<Poly> {
    let vars = alg.vars().clone();
    let mut total = Poly::zero(&vars);
    for lv in 0..alg.depth() {
        let r = alg.bundle().rank(lv);
        // columns of the adjoint matrices on the constant basis:
        // ad(x)(e_k) = sum_m M_{mk} e_m
        let ad = |x: usize| -> Result<Vec<Section>> {
            (0..r).map(|k| alg.l2_basis((0, x), (lv, k))).collect()
        };
        let ma = ad(a)?;
        let mb = ad(b)?;
        let mut tr = Poly::zero(&vars);
        for k in 0..r {
            // tr(AB - BA) accumulated entrywise
            for m in 0..r {
                let a_km = ma[m].coeff(k, &vars);
                let b_mk = mb[k].coeff(m, &vars);
                let b_km = mb[m].coeff(k, &vars);
                let a_mk = ma[k].coeff(m, &vars);
                tr += &(&(&a_km * &b_mk) - &(&b_km * &a_mk));
            }
        }
        let signed = if lv % 2 == 0 { tr.clone() } else { -&tr };
        total += &signed;
    }
    Ok(total)
}

/// Convenience wrapper joining the verification sweep used by tests
/// and the command-line front end.
#[derive(Debug, Clone)]
pub struct JacobiSweep {
    pub checked: usize,
    pub failures: Vec<String>,
    pub unchecked: Vec<String>,
}

/// Evaluates the Jacobi identities over every basis element (arity 1),
/// every pair (arity 2), and every degree-0 triple (arity 3).
pub fn jacobi_sweep(alg: &LieNAlgebroid) -> JacobiSweep {
    let mut sweep = JacobiSweep {
        checked: 0,
        failures: Vec::new(),
        unchecked: Vec::new(),
    };
    let bundle = alg.bundle();
    let mut all: Vec<(usize, usize)> = Vec::new();
    for lv in 0..bundle.depth() {
        for i in 0..bundle.rank(lv) {
            all.push((lv, i));
        }
    }
    let record = |outcome: JacobiOutcome, desc: String, sweep: &mut JacobiSweep| match outcome
    {
        JacobiOutcome::Residual(r) => {
            sweep.checked += 1;
            if !r.is_zero() {
                sweep
                    .failures
                    .push(format!("{desc}: residual {}", r.display(bundle)));
            }
        }
        JacobiOutcome::Unchecked(why) => sweep.unchecked.push(format!("{desc}: {why}")),
    };
    for &u in &all {
        let outcome = alg.jacobi_residual(1, &[u]);
        record(outcome, format!("arity 1 on {}", bundle.label(u.0, u.1)), &mut sweep);
    }
    for (i, &u) in all.iter().enumerate() {
        for &v in &all[i..] {
            let outcome = alg.jacobi_residual(2, &[u, v]);
            record(
                outcome,
                format!(
                    "arity 2 on ({}, {})",
                    bundle.label(u.0, u.1),
                    bundle.label(v.0, v.1)
                ),
                &mut sweep,
            );
        }
    }
    let r0 = bundle.rank(0);
    for a in 0..r0 {
        for b in a..r0 {
            for c in b..r0 {
                let outcome = alg.jacobi_residual(3, &[(0, a), (0, b), (0, c)]);
                record(
                    outcome,
                    format!(
                        "arity 3 on ({}, {}, {})",
                        bundle.label(0, a),
                        bundle.label(0, b),
                        bundle.label(0, c)
                    ),
                    &mut sweep,
                );
            }
        }
    }
    sweep
}
