//! Running the full pipeline on a [`Config`] and rendering the result.
//!
//! Two formats are supported. `text` is for people. `json-lines` emits one
//! JSON object per line; every object has a `"record"` key naming its kind:
//!
//! | record        | keys                                                                   |
//! |---------------|------------------------------------------------------------------------|
//! | `surface`     | `genus`, `e`, `blowups`, `picard_number`, `canonical`, `canonical_sq`  |
//! | `sheaf`       | `rank`, `c1`, `c2`, `euler_char`, `discriminant`, `stack_dim`          |
//! | `polarization`| `class`, `source`, `ampleness`                                         |
//! | `hypothesis`  | `value`, `satisfied`                                                   |
//! | `step`        | `index`, `kind`, `n`, `d`, `fiber_dim`, `blowups`, `before`, `after`   |
//! | `base_case`   | `d`, `k_rank`, `k`, `l_rank`, `l`, `ext_dim_b_to_a`                     |
//! | `audit`       | `step`, `check`, `expected`, `actual`, `terms`, `pass`                 |
//! | `moduli`      | `dim_stable`, `m`, `m_closed_form`, `unirational`, `m_note`            |
//! | `strata`      | `rank`, `d`, `min_part`, `types_checked`, `codim_histogram`, `pass`    |
//! | `stratum`     | `type`, `torsion_points`, `codim`, `role`                              |
//!
//! Divisor classes and `c1` are integer lists in the basis `σ, f, E_1, …`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::config::{Config, PolarizationChoice};
use crate::error::Result;
use crate::invariants::{discriminant, euler_char, stack_dim, ChernData};
use crate::lattice::{DivisorClass, RuledSurface};
use crate::polarization::{construct_good_polarization, is_ample, theorem_condition, Ampleness};
use crate::reduction::{moduli_dims, run_reduction, ModuliDims, ReductionTrace};
use crate::strata::StrataReport;

/// Process exit codes used by the `ruled` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const HYPOTHESIS_FAILED: i32 = 2;
    pub const AUDIT_FAILED: i32 = 3;
    pub const INPUT_ERROR: i32 = 4;
}

/// Environment variable consulted for the default output format.
pub const FORMAT_ENV: &str = "RULED_FORMAT";

pub const M_NOTE: &str = "m is computed with c1^2 in the term (r-1)*c1^2; it is cross-checked against dim M^s - 2g";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(format!("unknown format `{other}` (expected text or json-lines)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Surface,
    Polarization,
    Hypothesis,
    Trace,
    BaseCase,
    Audits,
    Moduli,
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Surface,
        Section::Polarization,
        Section::Hypothesis,
        Section::Trace,
        Section::BaseCase,
        Section::Audits,
        Section::Moduli,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizationSummary {
    pub class: DivisorClass,
    pub constructed: bool,
    pub ampleness: Ampleness,
    /// `H·(K_S + f)`.
    pub condition: i64,
}

impl PolarizationSummary {
    pub fn hypothesis_satisfied(&self) -> bool {
        self.condition < 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub surface: RuledSurface,
    pub sheaf: ChernData,
    pub euler_char: i64,
    pub discriminant: i64,
    pub stack_dim: i64,
    pub polarization: PolarizationSummary,
    /// Present when the rank is at least 2.
    pub trace: Option<ReductionTrace>,
    pub moduli: Option<ModuliDims>,
}

pub fn build_report(config: &Config) -> Result<Report> {
    let s = &config.surface;
    let c = &config.sheaf;
    let (class, constructed) = match &config.polarization {
        PolarizationChoice::Auto => (construct_good_polarization(s)?, true),
        PolarizationChoice::Explicit(h) => (h.clone(), false),
    };
    let polarization = PolarizationSummary {
        ampleness: is_ample(s, &class)?,
        condition: theorem_condition(s, &class)?,
        class,
        constructed,
    };
    let (trace, moduli) = if c.rank() >= 2 {
        (Some(run_reduction(s, c)?), Some(moduli_dims(s, c)?))
    } else {
        (None, None)
    };
    Ok(Report {
        surface: *s,
        sheaf: c.clone(),
        euler_char: euler_char(s, c)?,
        discriminant: discriminant(s, c)?,
        stack_dim: stack_dim(s, c)?,
        polarization,
        trace,
        moduli,
    })
}

impl Report {
    pub fn audits_passed(&self) -> bool {
        self.trace.as_ref().is_none_or(ReductionTrace::audits_passed)
            && self.moduli.as_ref().is_none_or(ModuliDims::routes_agree)
    }

    /// Exit code for a run that displayed `sections`: audit failures win over
    /// hypothesis failures, and either only counts if its section was shown.
    pub fn exit_code(&self, sections: &[Section]) -> i32 {
        let audited = sections.iter().any(|s| matches!(s, Section::Audits | Section::Moduli));
        if audited && !self.audits_passed() {
            return exit::AUDIT_FAILED;
        }
        if sections.contains(&Section::Hypothesis) && !self.polarization.hypothesis_satisfied() {
            return exit::HYPOTHESIS_FAILED;
        }
        exit::OK
    }

    pub fn render(&self, sections: &[Section], format: Format) -> String {
        match format {
            Format::Text => self.render_text(sections),
            Format::JsonLines => lines(self.records(sections)),
        }
    }

    fn render_text(&self, sections: &[Section]) -> String {
        let mut out = String::new();
        for (i, section) in sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            self.text_section(&mut out, *section);
        }
        out
    }

    fn text_section(&self, out: &mut String, section: Section) {
        let s = &self.surface;
        let missing_trace = "(reduction requires rank >= 2)\n";
        match section {
            Section::Surface => {
                let k = s.canonical_class();
                out.push_str("== Surface ==\n");
                let _ = writeln!(out, "surface: {s}");
                let _ = writeln!(out, "picard number: {}", s.picard_number());
                let _ = writeln!(
                    out,
                    "K_S = {k}, K_S^2 = {}",
                    s.self_intersection(&k).unwrap_or_default()
                );
                let _ = writeln!(out, "sheaf: {}", self.sheaf);
                let _ = writeln!(
                    out,
                    "chi = {}, discriminant = {}, stack_dim = {}",
                    self.euler_char, self.discriminant, self.stack_dim
                );
            }
            Section::Polarization => {
                let p = &self.polarization;
                out.push_str("== Polarization ==\n");
                let source = if p.constructed { "constructed" } else { "given" };
                let _ = writeln!(out, "H = {} ({source})", p.class);
                let _ = writeln!(out, "ampleness: {}", p.ampleness.as_str());
            }
            Section::Hypothesis => {
                let p = &self.polarization;
                out.push_str("== Hypothesis H·(K_S+f) ==\n");
                if p.hypothesis_satisfied() {
                    let _ = writeln!(
                        out,
                        "H·(K_S+f) = {} < 0: hypothesis satisfied, H-semistable sheaves are prioritary",
                        p.condition
                    );
                } else {
                    let _ = writeln!(out, "H·(K_S+f) = {} ≥ 0: hypothesis NOT satisfied", p.condition);
                }
            }
            Section::Trace => {
                out.push_str("== Reduction Trace ==\n");
                let Some(trace) = &self.trace else {
                    out.push_str(missing_trace);
                    return;
                };
                for (i, st) in trace.steps.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "[{i}] {:<17} n={:<3} d={:<2} {} -> {} fiber_dim={}",
                        st.kind.as_str(),
                        st.twist_amount,
                        st.d,
                        st.before,
                        st.after,
                        st.fiber_dim
                    );
                }
            }
            Section::BaseCase => {
                out.push_str("== Base Case ==\n");
                let Some(trace) = &self.trace else {
                    out.push_str(missing_trace);
                    return;
                };
                let b = &trace.base;
                let _ = writeln!(out, "d={} k={} l={}", b.d, b.k_deg, b.l_deg);
                let _ = writeln!(out, "K: rank {}, degree {}", b.k_rank, b.k_deg);
                let _ = writeln!(out, "L: rank {}, degree {}", b.l_rank, b.l_deg);
                let _ = writeln!(out, "-chi(B,A) = {}", b.ext_dim_b_to_a);
            }
            Section::Audits => {
                out.push_str("== Dimension Audits ==\n");
                let Some(trace) = &self.trace else {
                    out.push_str(missing_trace);
                    return;
                };
                for a in &trace.audits {
                    let verdict = if a.passed { "PASS" } else { "FAIL" };
                    let _ = write!(
                        out,
                        "[{}] {}: {} = {} {verdict}",
                        a.step,
                        a.kind.as_str(),
                        a.expected,
                        a.actual
                    );
                    if !a.terms.is_empty() {
                        let terms: Vec<String> = a.terms.iter().map(i64::to_string).collect();
                        let _ = write!(out, "  ({})", terms.join(" + "));
                    }
                    out.push('\n');
                }
            }
            Section::Moduli => {
                out.push_str("== Moduli ==\n");
                let Some(m) = &self.moduli else {
                    out.push_str(missing_trace);
                    return;
                };
                let _ = writeln!(out, "dim M^s = {}", m.dim_stable_moduli);
                let _ = writeln!(out, "m = {} (closed form: {})", m.m, m.m_closed_form);
                if !m.routes_agree() {
                    out.push_str("WARNING: the two routes to m disagree\n");
                }
                let _ = writeln!(
                    out,
                    "unirational: {}",
                    if m.unirational { "yes" } else { "not claimed (g > 0)" }
                );
                let _ = writeln!(out, "note: {M_NOTE}");
            }
        }
    }

    pub fn records(&self, sections: &[Section]) -> Vec<Value> {
        let s = &self.surface;
        let mut out = Vec::new();
        for section in sections {
            match section {
                Section::Surface => {
                    let k = s.canonical_class();
                    out.push(json!({
                        "record": "surface",
                        "genus": s.genus(),
                        "e": s.e_invariant(),
                        "blowups": s.blowup_count(),
                        "picard_number": s.picard_number(),
                        "canonical": k.coeffs(),
                        "canonical_sq": s.self_intersection(&k).unwrap_or_default(),
                    }));
                    out.push(json!({
                        "record": "sheaf",
                        "rank": self.sheaf.rank(),
                        "c1": self.sheaf.c1().coeffs(),
                        "c2": self.sheaf.c2(),
                        "euler_char": self.euler_char,
                        "discriminant": self.discriminant,
                        "stack_dim": self.stack_dim,
                    }));
                }
                Section::Polarization => {
                    let p = &self.polarization;
                    out.push(json!({
                        "record": "polarization",
                        "class": p.class.coeffs(),
                        "source": if p.constructed { "constructed" } else { "given" },
                        "ampleness": p.ampleness.as_str(),
                    }));
                }
                Section::Hypothesis => {
                    let p = &self.polarization;
                    out.push(json!({
                        "record": "hypothesis",
                        "value": p.condition,
                        "satisfied": p.hypothesis_satisfied(),
                    }));
                }
                Section::Trace => {
                    for (i, st) in self.trace.iter().flat_map(|t| t.steps.iter()).enumerate() {
                        out.push(json!({
                            "record": "step",
                            "index": i,
                            "kind": st.kind.as_str(),
                            "n": st.twist_amount,
                            "d": st.d,
                            "fiber_dim": st.fiber_dim,
                            "blowups": st.surface.blowup_count(),
                            "before": chern_json(&st.before),
                            "after": chern_json(&st.after),
                        }));
                    }
                }
                Section::BaseCase => {
                    if let Some(t) = &self.trace {
                        let b = &t.base;
                        out.push(json!({
                            "record": "base_case",
                            "d": b.d,
                            "k_rank": b.k_rank,
                            "k": b.k_deg,
                            "l_rank": b.l_rank,
                            "l": b.l_deg,
                            "ext_dim_b_to_a": b.ext_dim_b_to_a,
                        }));
                    }
                }
                Section::Audits => {
                    for a in self.trace.iter().flat_map(|t| t.audits.iter()) {
                        out.push(json!({
                            "record": "audit",
                            "step": a.step,
                            "check": a.kind.as_str(),
                            "expected": a.expected,
                            "actual": a.actual,
                            "terms": a.terms,
                            "pass": a.passed,
                        }));
                    }
                }
                Section::Moduli => {
                    if let Some(m) = &self.moduli {
                        out.push(json!({
                            "record": "moduli",
                            "dim_stable": m.dim_stable_moduli,
                            "m": m.m,
                            "m_closed_form": m.m_closed_form,
                            "unirational": m.unirational,
                            "m_note": M_NOTE,
                        }));
                    }
                }
            }
        }
        out
    }
}

fn chern_json(c: &ChernData) -> Value {
    json!({ "rank": c.rank(), "c1": c.c1().coeffs(), "c2": c.c2() })
}

fn lines(records: Vec<Value>) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Render a splitting-type stratification check.
pub fn render_strata(report: &StrataReport, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "P1 splitting strata: rank {}, degree {}, parts >= {}",
                report.rank,
                -(report.d as i64),
                report.min_part
            );
            let _ = writeln!(out, "{:<24} codim", "type");
            let _ = writeln!(
                out,
                "{:<24} {}  generic",
                report.generic.to_string(),
                report.generic_codim
            );
            if let Some((j, c)) = &report.jumping {
                let _ = writeln!(out, "{:<24} {c}  jumping", j.to_string());
            }
            let named = 1 + u64::from(report.jumping.is_some());
            let rest = report.types_checked.saturating_sub(named);
            let others_min = report
                .codim_histogram
                .iter()
                .filter(|(&c, _)| c >= 2)
                .map(|(&c, _)| c)
                .next();
            match others_min {
                Some(m) => {
                    let _ = writeln!(out, "others: {rest} types, min codim {m}");
                }
                None => {
                    let _ = writeln!(out, "others: {rest} types");
                }
            }
            let hist: Vec<String> = report.codim_histogram.iter().map(|(c, n)| format!("{c}:{n}")).collect();
            let _ = writeln!(out, "codim histogram: {}", hist.join(" "));
            for (t, c) in &report.offending {
                let _ = writeln!(out, "OFFENDING {t} codim {c}");
            }
            out.push_str("note: torsion strata cover reduced torsion only\n");
            let case = if report.d == 0 {
                "degree 0 (trivial + jumping)"
            } else {
                "degree -d, d > 0"
            };
            let verdict = if report.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "stratification bound, {case}: {verdict}");
            out
        }
        Format::JsonLines => {
            let mut records = vec![json!({
                "record": "strata",
                "rank": report.rank,
                "d": report.d,
                "min_part": report.min_part,
                "types_checked": report.types_checked,
                "codim_histogram": report.codim_histogram,
                "pass": report.passed,
            })];
            let stratum = |t: &crate::strata::SplittingType, codim: u64, role: &str| {
                json!({
                    "record": "stratum",
                    "type": t.parts(),
                    "torsion_points": t.torsion_points(),
                    "codim": codim,
                    "role": role,
                })
            };
            records.push(stratum(&report.generic, report.generic_codim, "generic"));
            if let Some((j, c)) = &report.jumping {
                records.push(stratum(j, *c, "jumping"));
            }
            for (t, c) in &report.offending {
                records.push(stratum(t, *c, "offending"));
            }
            lines(records)
        }
    }
}
