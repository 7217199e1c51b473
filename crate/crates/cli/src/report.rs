//! Human-readable and JSON rendering of verification and modular
//! reports.

use serde_json::{json, Value};

use folia_core::modular::{
    ClosednessReport, ExactnessVerdict, JacobiSweep, ModularReport, Unimodular, WitnessKind,
};
use folia_core::poly::Q;
use folia_core::ratlog::RatLog;
use folia_core::regfol::{self, RegularPresentation};
use folia_core::{ExactnessReport, LieNAlgebroid};

pub struct StructureChecks {
    pub complex_pass: bool,
    pub complex_failures: Vec<String>,
    pub anchor_pass: bool,
    pub anchor_failures: Vec<String>,
    pub jacobi: JacobiSweep,
    pub exactness: Option<ExactnessReport>,
}

pub fn run_structure_checks(
    alg: &LieNAlgebroid,
    exactness_degree: Option<u32>,
) -> Result<StructureChecks, folia_core::FoliaError> {
    let complex = alg.complex_check();
    let mut anchor_failures = Vec::new();
    let r0 = alg.bundle().rank(0);
    for a in 0..r0 {
        for b in (a + 1)..r0 {
            match alg.anchor_morphism_residual(a, b) {
                Ok(r) if r.is_zero() => {}
                Ok(r) => anchor_failures.push(format!(
                    "rho(l2({}, {})) - [rho, rho] = {r}",
                    alg.bundle().label(0, a),
                    alg.bundle().label(0, b)
                )),
                Err(_) => {}
            }
        }
    }
    let jacobi = folia_core::modular::jacobi_sweep(alg);
    let exactness = match exactness_degree {
        Some(d) => Some(alg.sliced_exactness(d)?),
        None => None,
    };
    Ok(StructureChecks {
        complex_pass: complex.passed(),
        complex_failures: complex.failures,
        anchor_pass: anchor_failures.is_empty(),
        anchor_failures,
        jacobi,
        exactness,
    })
}

impl StructureChecks {
    pub fn passed(&self) -> bool {
        self.complex_pass
            && self.anchor_pass
            && self.jacobi.failures.is_empty()
            && self.exactness.as_ref().map_or(true, |e| e.all_exact)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "complex": if self.complex_pass { "pass" } else { "fail" },
            "anchor_morphism": if self.anchor_pass { "pass" } else { "fail" },
            "jacobi": {
                "checked": self.jacobi.checked,
                "failed": self.jacobi.failures.len(),
                "unchecked": self.jacobi.unchecked.len(),
            },
        });
        if let Some(e) = &self.exactness {
            v["exactness_slices"] = json!({
                "max_degree": e.max_degree,
                "all_exact": e.all_exact,
            });
        }
        v
    }

    pub fn to_text(&self, bundle_name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("structure checks for {bundle_name}\n"));
        out.push_str(&format!(
            "  complex (l1 o l1 = 0, rho o l1 = 0): {}\n",
            if self.complex_pass { "pass" } else { "FAIL" }
        ));
        for f in &self.complex_failures {
            out.push_str(&format!("    {f}\n"));
        }
        out.push_str(&format!(
            "  anchor morphism on declared pairs: {}\n",
            if self.anchor_pass { "pass" } else { "FAIL" }
        ));
        for f in &self.anchor_failures {
            out.push_str(&format!("    {f}\n"));
        }
        out.push_str(&format!(
            "  higher Jacobi: {} checked, {} failed, {} unchecked\n",
            self.jacobi.checked,
            self.jacobi.failures.len(),
            self.jacobi.unchecked.len()
        ));
        for f in &self.jacobi.failures {
            out.push_str(&format!("    FAIL {f}\n"));
        }
        if let Some(e) = &self.exactness {
            out.push_str(&format!(
                "  sliced exactness through degree {}: {}\n",
                e.max_degree,
                if e.all_exact { "pass" } else { "FAIL" }
            ));
            for c in e.checks.iter().filter(|c| !c.passes()) {
                out.push_str(&format!(
                    "    position E_-{} degree {}: kernel {} vs image {}\n",
                    c.position, c.degree, c.kernel_dim, c.image_rank
                ));
            }
        }
        out
    }
}

fn q_to_string(q: &Q) -> String {
    if q.denom() == &num_bigint::BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn closedness_json(c: &ClosednessReport) -> Value {
    json!({
        "passed": c.passed(),
        "failures": c.failures(),
        "unchecked": c.unchecked(),
    })
}

fn exactness_json(v: &ExactnessVerdict, checked_witness: Option<&RatLog>) -> Value {
    match v {
        ExactnessVerdict::ExactWithWitness { witness, .. } => {
            let w = match witness {
                WitnessKind::Polynomial(p) => p.to_string(),
                WitnessKind::RatLog(r) => r.to_string(),
            };
            json!({"verdict": "exact_with_witness", "witness": w, "obstruction_point": Value::Null})
        }
        ExactnessVerdict::NotExactNear { point, .. } => {
            let pt: Vec<String> = point.iter().map(q_to_string).collect();
            json!({
                "verdict": "not_exact_near",
                "witness": checked_witness.map(|w| w.to_string()),
                "obstruction_point": pt,
            })
        }
        ExactnessVerdict::InconclusiveAtBound(d) => json!({
            "verdict": format!("inconclusive_at_degree_{d}"),
            "witness": checked_witness.map(|w| w.to_string()),
            "obstruction_point": Value::Null,
        }),
    }
}

pub fn modular_report_json(
    alg: &LieNAlgebroid,
    structure: &StructureChecks,
    report: &ModularReport,
    checked_witness: Option<&RatLog>,
) -> Value {
    let mut theta = serde_json::Map::new();
    for (i, v) in report.theta.values.iter().enumerate() {
        theta.insert(alg.bundle().label(0, i).to_string(), json!(v.to_string()));
    }
    json!({
        "structure_checks": structure.to_json(),
        "theta": Value::Object(theta),
        "closedness": closedness_json(&report.closedness),
        "exactness": exactness_json(&report.exactness, checked_witness),
        "unimodular": match report.unimodular {
            Unimodular::Yes => "yes",
            Unimodular::No => "no",
            Unimodular::Unknown => "unknown",
        },
    })
}

pub fn modular_report_text(
    alg: &LieNAlgebroid,
    report: &ModularReport,
    name: &str,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("modular 1-form of {name} (standard volume section)\n"));
    for (i, b) in report.breakdown.iter().enumerate() {
        let label = alg.bundle().label(0, i);
        let levels: Vec<String> = b
            .levels
            .iter()
            .enumerate()
            .map(|(lv, (raw, signed))| format!("level {lv}: {raw} (signed {signed})"))
            .collect();
        out.push_str(&format!(
            "  theta({label}) = {}   [div {} | {}]\n",
            b.total,
            b.divergence,
            levels.join(" | ")
        ));
    }
    out.push_str(&format!(
        "closedness: {}\n",
        if report.closedness.passed() {
            "pass"
        } else {
            "FAIL"
        }
    ));
    for f in report.closedness.failures() {
        out.push_str(&format!("  {f}\n"));
    }
    for u in report.closedness.unchecked() {
        out.push_str(&format!("  unchecked: {u}\n"));
    }
    match &report.exactness {
        ExactnessVerdict::ExactWithWitness { witness, domain } => {
            let w = match witness {
                WitnessKind::Polynomial(p) => p.to_string(),
                WitnessKind::RatLog(r) => r.to_string(),
            };
            out.push_str(&format!("exactness: exact, witness g = {w} ({domain})\n"));
        }
        ExactnessVerdict::NotExactNear {
            point,
            witness_basis,
        } => {
            let pt: Vec<String> = point.iter().map(q_to_string).collect();
            out.push_str(&format!(
                "exactness: not exact near ({}) — anchors vanish there while theta({}) does not\n",
                pt.join(", "),
                alg.bundle().label(0, *witness_basis)
            ));
        }
        ExactnessVerdict::InconclusiveAtBound(d) => {
            out.push_str(&format!(
                "exactness: inconclusive at polynomial degree bound {d}\n"
            ));
        }
    }
    if let Some(w) = &report.witness_check {
        out.push_str(&format!(
            "declared witness: {}\n",
            if w.passed {
                "verified off the declared locus"
            } else {
                "FAILED"
            }
        ));
        if !w.passed {
            for (i, r) in w.residuals.iter().enumerate() {
                if !r.is_zero() {
                    out.push_str(&format!(
                        "  residual on {}: {r}\n",
                        alg.bundle().label(0, i)
                    ));
                }
            }
        }
    }
    out.push_str(&format!(
        "unimodular: {}\n",
        match report.unimodular {
            Unimodular::Yes => "yes",
            Unimodular::No => "no",
            Unimodular::Unknown => "unknown",
        }
    ));
    out
}

pub struct BottReport {
    pub annihilator_consistent: bool,
    pub flat: bool,
    /// `(generator, theta value)` rows.
    pub theta: Vec<(String, Result<RatLog, String>)>,
    /// Witness residual rows when a witness is supplied.
    pub witness_residuals: Option<Vec<(String, RatLog)>>,
}

pub fn run_bott(p: &RegularPresentation, witness: Option<&RatLog>) -> BottReport {
    let mut theta = Vec::new();
    for (name, u) in &p.generators {
        let t = regfol::transverse_modular_value(p, u).map_err(|e| e.to_string());
        theta.push((name.clone(), t));
    }
    let witness_residuals = witness.map(|h| {
        p.generators
            .iter()
            .map(|(name, u)| {
                let r = regfol::witness_residual(p, u, h)
                    .unwrap_or_else(|_| RatLog::from_poly(folia_core::Poly::int(u.vars(), 0)));
                (name.clone(), r)
            })
            .collect()
    });
    BottReport {
        annihilator_consistent: p.annihilator_consistent(),
        flat: regfol::bott_flatness(p),
        theta,
        witness_residuals,
    }
}

pub fn bott_report_text(r: &BottReport, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("Bott connection report for {name}\n"));
    out.push_str(&format!(
        "  annihilator consistency: {}\n",
        if r.annihilator_consistent { "pass" } else { "FAIL" }
    ));
    out.push_str(&format!(
        "  flatness on the frame: {}\n",
        if r.flat { "pass" } else { "FAIL" }
    ));
    for (g, t) in &r.theta {
        match t {
            Ok(v) => out.push_str(&format!("  theta({g}) = {v}\n")),
            Err(e) => out.push_str(&format!("  theta({g}): {e}\n")),
        }
    }
    if let Some(rows) = &r.witness_residuals {
        for (g, res) in rows {
            if res.is_zero() {
                out.push_str(&format!("  witness residual on {g}: 0 (pass)\n"));
            } else {
                out.push_str(&format!("  witness residual on {g}: {res} (FAIL)\n"));
            }
        }
    }
    out
}

pub fn bott_report_json(r: &BottReport) -> Value {
    let theta: Vec<Value> = r
        .theta
        .iter()
        .map(|(g, t)| match t {
            Ok(v) => json!({"generator": g, "theta": v.to_string()}),
            Err(e) => json!({"generator": g, "error": e}),
        })
        .collect();
    let witness: Value = match &r.witness_residuals {
        None => Value::Null,
        Some(rows) => Value::Array(
            rows.iter()
                .map(|(g, res)| {
                    json!({"generator": g, "residual": res.to_string(), "pass": res.is_zero()})
                })
                .collect(),
        ),
    };
    json!({
        "annihilator_consistent": r.annihilator_consistent,
        "flat": r.flat,
        "theta": theta,
        "witness_residuals": witness,
    })
}

pub fn bott_passed(r: &BottReport) -> bool {
    r.annihilator_consistent
        && r.flat
        && r.theta.iter().all(|(_, t)| t.is_ok())
        && r.witness_residuals
            .as_ref()
            .map_or(true, |rows| rows.iter().all(|(_, res)| res.is_zero()))
}
