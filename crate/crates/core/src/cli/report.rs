use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::constants::SharpConstantResult;
use crate::criteria::CriteriaVerdict;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEntry {
    pub label: String,
    pub value: f64,
    pub err_est: f64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ResultEntry {
    pub fn from_result(label: impl Into<String>, r: &SharpConstantResult) -> Self {
        ResultEntry {
            label: label.into(),
            value: r.value,
            err_est: r.err_est,
            method: r.method.as_str().to_string(),
            argmax: r.argmax.clone(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub reference: String,
    pub candidate: String,
    pub reference_value: f64,
    pub candidate_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CrossCheck {
    pub fn new(reference: &ResultEntry, candidate: &ResultEntry, tolerance: f64) -> Self {
        let abs_diff = (reference.value - candidate.value).abs();
        CrossCheck {
            reference: reference.label.clone(),
            candidate: candidate.label.clone(),
            reference_value: reference.value,
            candidate_value: candidate.value,
            abs_diff,
            tolerance,
            pass: abs_diff <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointVerdict {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    pub verdict: CriteriaVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled_overall: Option<bool>,
}

/// Structured outcome of one CLI command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub report_version: u32,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Vec<ResultEntry>,
    pub cross_checks: Vec<CrossCheck>,
    pub verdicts: Vec<PointVerdict>,
    pub pass: bool,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            report_version: REPORT_VERSION,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            cross_checks: Vec::new(),
            verdicts: Vec::new(),
            pass: true,
            notes: Vec::new(),
            wall_time_seconds: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report inputs are plain data");
        self.inputs.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        if !self.results.is_empty() {
            let _ = writeln!(out, "results:");
            for r in &self.results {
                let _ = writeln!(
                    out,
                    "  {:<28} {:>22.16}  ± {:.1e}  [{}]",
                    r.label, r.value, r.err_est, r.method
                );
                if let Some(z) = &r.argmax {
                    let _ = writeln!(out, "  {:<28} z = {:?}", "", z);
                }
            }
        }
        if !self.cross_checks.is_empty() {
            let _ = writeln!(out, "cross-checks:");
            for c in &self.cross_checks {
                let _ = writeln!(
                    out,
                    "  {} vs {}: |diff| = {:.3e} (tol {:.1e}) {}",
                    c.candidate,
                    c.reference,
                    c.abs_diff,
                    c.tolerance,
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
        }
        for p in &self.verdicts {
            render_verdict(&mut out, p);
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        if let Some(t) = self.wall_time_seconds {
            let _ = writeln!(out, "wall time: {t:.3} s");
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn render_verdict(out: &mut String, p: &PointVerdict) {
    use crate::criteria::{ConditionI, ConditionII};
    let v = &p.verdict;
    match &p.x {
        Some(x) => {
            let _ = writeln!(out, "point {} at x = {:?}:", p.index, x);
        }
        None => {
            let _ = writeln!(out, "point {}:", p.index);
        }
    }
    let e = &v.strongly_elliptic;
    let _ = writeln!(
        out,
        "  strong ellipticity: {} (min eigenvalue {:.6e})",
        if e.holds { "holds" } else { "fails" },
        e.min_eigenvalue
    );
    if let Some(w) = &e.witness {
        let _ = writeln!(out, "    witness sigma = {:?}", w.sigma);
    }
    match &v.condition_i {
        Some(ConditionI::Holds { residual, .. }) => {
            let _ = writeln!(
                out,
                "  condition (i): holds (relative residual {residual:.3e})"
            );
        }
        Some(ConditionI::Fails { residual, reason }) => {
            let _ = writeln!(
                out,
                "  condition (i): fails, {} (relative residual {residual:.3e})",
                reason.as_str()
            );
        }
        None => {
            let _ = writeln!(out, "  condition (i): not checked");
        }
    }
    match &v.condition_ii {
        Some(ConditionII::Holds {
            min_value,
            boundary,
            ..
        }) => {
            let tag = if *boundary {
                "holds (boundary case)"
            } else {
                "holds"
            };
            let _ = writeln!(out, "  condition (ii): {tag}, min Q = {min_value:.6e}");
        }
        Some(ConditionII::Fails {
            min_value, witness, ..
        }) => {
            let _ = writeln!(out, "  condition (ii): fails, min Q = {min_value:.6e}");
            let pairs: Vec<(f64, f64)> = witness.iter().map(|c| (c.re, c.im)).collect();
            let _ = writeln!(out, "    witness zeta = {pairs:?}");
        }
        None => {
            let _ = writeln!(out, "  condition (ii): not checked");
        }
    }
    if let Some(d) = p.doubled_overall {
        let _ = writeln!(
            out,
            "  doubled real system: {}",
            if d { "holds" } else { "fails" }
        );
    }
    let _ = writeln!(
        out,
        "  overall: {}",
        if v.overall { "holds" } else { "fails" }
    );
}
