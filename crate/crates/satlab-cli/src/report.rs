//! Report structs serialized as deterministic JSON (fixed field order, no
//! timing fields) plus one-line text renderings.

use serde::Serialize;

#[derive(Serialize)]
pub struct Meta {
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
pub struct IndexSummary {
    pub is_central: bool,
    /// present when the index is a scalar multiple of the unit
    pub scalar: Option<f64>,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub meta: Meta,
    pub group_order: usize,
    pub saturated: bool,
    pub consistent: bool,
    /// the five equivalent conditions, checked independently
    pub conditions: [bool; 5],
    pub index: IndexSummary,
    pub orthogonality_residual: f64,
    pub witness_residual: f64,
}

#[derive(Serialize)]
pub struct StratumRow {
    /// isotropy subgroup as sorted element indices
    pub isotropy: Vec<usize>,
    pub points: Vec<String>,
}

#[derive(Serialize)]
pub struct StrataReport {
    pub meta: Meta,
    pub group_order: usize,
    pub points: usize,
    pub free: bool,
    pub saturated: bool,
    pub strata: Vec<StratumRow>,
    /// pointwise Watatani index |G|/|G_x|
    pub index_values: Vec<f64>,
    pub quasi_basis_residual: f64,
}

#[derive(Serialize)]
pub struct HopfAxiomReport {
    pub meta: Meta,
    pub variant: String,
    pub dim: usize,
    pub axioms_pass: bool,
    /// Haar trace of the distinguished projection; must equal 1/dim
    pub tau_e: f64,
}

#[derive(Serialize)]
pub struct HopfSaturationReport {
    pub meta: Meta,
    pub smash_dim: usize,
    pub span_dim: usize,
    pub span_full: bool,
    pub index: IndexSummary,
    pub saturated: bool,
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub meta: Meta,
    pub target: String,
    pub degree_gap: i64,
    pub adjoint_route: bool,
    pub a: String,
    pub b: String,
    pub transcript: Vec<String>,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct BatchReport {
    pub meta: Meta,
    pub max_len: usize,
    pub max_degree: i64,
    pub cases: usize,
    pub backtrack: usize,
    pub extend: usize,
    pub adjoint: usize,
    pub window_exhausted: usize,
    pub all_verified: bool,
}

/// Round to 10 decimals so text and JSON stay byte-stable across runs.
pub fn tidy(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

pub fn render_analyze(r: &AnalyzeReport) -> String {
    let idx = match r.index.scalar {
        Some(s) => format!("{:?}", tidy(s)),
        None => "non-scalar".into(),
    };
    format!("saturated: {}, index: {}, |G|: {}", r.saturated, idx, r.group_order)
}

pub fn render_strata(r: &StrataReport) -> String {
    let mut out = format!(
        "free: {}, saturated: {}, |G|: {}, |X|: {}\n",
        r.free, r.saturated, r.group_order, r.points
    );
    let vals: Vec<String> = r.index_values.iter().map(|v| format!("{:?}", tidy(*v))).collect();
    out.push_str(&format!("index values: ({})\n", vals.join(", ")));
    for row in &r.strata {
        out.push_str(&format!(
            "stratum |H| = {}: {}\n",
            row.isotropy.len(),
            row.points.join(", ")
        ));
    }
    out.pop();
    out
}

pub fn render_hopf_axioms(r: &HopfAxiomReport) -> String {
    format!(
        "variant: {}, dim: {}, axioms: {}, tau(e): {:?}",
        r.variant,
        r.dim,
        if r.axioms_pass { "pass" } else { "fail" },
        tidy(r.tau_e)
    )
}

pub fn render_hopf_saturation(r: &HopfSaturationReport) -> String {
    let idx = match r.index.scalar {
        Some(s) => format!("{:?}", tidy(s)),
        None => "non-scalar".into(),
    };
    format!(
        "saturated: {}, index: {}, span: {}/{}",
        r.saturated, idx, r.span_dim, r.smash_dim
    )
}

pub fn render_witness(r: &WitnessReport) -> String {
    let mut out = format!("target: {}\na: {}\nb: {}\n", r.target, r.a, r.b);
    for line in &r.transcript {
        out.push_str(&format!("  {line}\n"));
    }
    out.push_str(&format!("verified: {}", r.verified));
    out
}

pub fn render_batch(r: &BatchReport) -> String {
    format!(
        "cases: {}, backtrack: {}, extend: {}, adjoint: {}, window exhausted: {}, all verified: {}",
        r.cases, r.backtrack, r.extend, r.adjoint, r.window_exhausted, r.all_verified
    )
}
