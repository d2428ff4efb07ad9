//! Run orchestration and report rendering (JSON schema `ncres-report/1`, markdown).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::fixtures::Fixtures;
use crate::ledger::{fixture_diff, Attribution, LedgerEntry};
use crate::oracle::{check_group, Instantiation};
use crate::pipeline::{assemble_total, BoundaryTotal, CaseId};
use crate::scalar::{GaussianRational, Monomial, Param, ScalarExpr};
use crate::symbol::{Catalog, Family};
use crate::Error;

pub const REPORT_SCHEMA: &str = "ncres-report/1";

pub const INTERIOR_LABEL: &str = "unverified (out of scope — imported by the paper)";

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub families: Vec<Family>,
    pub cases: Vec<CaseId>,
    pub oracle: bool,
    pub seed: u64,
    pub jet_order: usize,
    pub workers: usize,
    pub dim_f: usize,
    pub timing: bool,
    pub fixtures: Fixtures,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            families: Family::ALL.to_vec(),
            cases: CaseId::ALL.to_vec(),
            oracle: true,
            seed: 0,
            jet_order: 1,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            dim_f: 2,
            timing: false,
            fixtures: Fixtures::builtin(),
        }
    }
}

impl RunConfig {
    /// The ledger attributes every mismatch under three consecutive seeds.
    pub fn ledger_seeds(&self) -> [u64; 3] {
        [self.seed, self.seed.wrapping_add(1), self.seed.wrapping_add(2)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub families: Vec<String>,
    pub cases: Vec<String>,
    pub oracle: bool,
    pub seed: u64,
    pub jet_order: usize,
    pub dim_f: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRef {
    pub expr: String,
    pub citation: String,
    pub quote: String,
    pub typo_suspect: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub seed: u64,
    pub exact: [f64; 2],
    pub numeric: [f64; 2],
    pub rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    pub tuples: Vec<String>,
    pub value: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<FixtureRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: String,
    pub complete: bool,
    pub total: String,
    /// Coefficient of π·h1·Ω₄·dimF in the total.
    pub h1_coefficient: String,
    /// Coefficient of π·f⁻¹·df_n·Ω₄·dimF in the total.
    pub f_coefficient: String,
    pub cases: Vec<CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub engine_version: String,
    pub config: ReportConfig,
    pub families: Vec<FamilyReport>,
    pub ledger: Vec<LedgerEntry>,
    /// Wall-clock seconds per family; only present when requested, since it
    /// breaks byte-identical output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn has_engine_bug(&self) -> bool {
        self.ledger.iter().any(|e| e.attribution == Attribution::EngineBug)
    }

    pub fn family(&self, f: Family) -> Option<&FamilyReport> {
        self.families.iter().find(|r| r.family == f.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::Fixture(format!("report: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Fixture(format!("unsupported report schema `{}`", r.schema)));
        }
        Ok(r)
    }
}

fn unit(extra: &[(Param, i32)]) -> Monomial {
    let mut v = vec![(Param::Pi, 1), (Param::Omega4, 1), (Param::DimF, 1)];
    v.extend_from_slice(extra);
    Monomial::from_parts(v, vec![])
}

/// Coefficient of π·h1·Ω₄·dimF.
pub fn h1_coefficient(e: &ScalarExpr) -> GaussianRational {
    e.coefficient(&unit(&[(Param::H1, 1)]))
}

/// Coefficient of π·f⁻¹·df_n·Ω₄·dimF.
pub fn f_coefficient(e: &ScalarExpr) -> GaussianRational {
    e.coefficient(&unit(&[(Param::F, -1), (Param::Df(6), 1)]))
}

/// One family's exact total with its ledger filled when the oracle is on.
pub fn compute_family(family: Family, cfg: &RunConfig) -> Result<(Catalog, BoundaryTotal), Error> {
    let cat = Catalog::build(family, cfg.jet_order)?;
    let mut total = assemble_total(&cat, &cfg.cases, &cfg.fixtures, cfg.workers)?;
    if cfg.oracle {
        fixture_diff(&cat, &mut total, &cfg.fixtures, &cfg.ledger_seeds(), cfg.dim_f)?;
    }
    Ok((cat, total))
}

pub fn run(cfg: &RunConfig) -> Result<Report, Error> {
    let mut families = Vec::new();
    let mut ledger = Vec::new();
    let mut timing = BTreeMap::new();
    for &fam in &cfg.families {
        let start = Instant::now();
        let (cat, total) = compute_family(fam, cfg)?;
        let inst = Instantiation::random(cfg.seed, cfg.dim_f);
        let mut cases = Vec::new();
        for r in &total.per_case {
            let numeric = if cfg.oracle {
                let g = check_group(&cat, r.case_id, &inst)?;
                Some(NumericCheck { seed: g.seed, exact: [g.exact.re, g.exact.im], numeric: [g.numeric.re, g.numeric.im], rel_err: g.rel_err() })
            } else {
                None
            };
            let fixture = cfg.fixtures.entry(fam, r.case_id.name()).map(|e| FixtureRef {
                expr: e.expr.clone(),
                citation: e.citation.clone(),
                quote: e.quote.clone(),
                typo_suspect: e.typo_suspect,
            });
            cases.push(CaseReport {
                case_id: r.case_id.to_string(),
                tuples: r.tuples.iter().map(|t| t.to_string()).collect(),
                value: r.value.to_string(),
                status: r.status.name().into(),
                fixture,
                numeric,
            });
        }
        families.push(FamilyReport {
            family: fam.to_string(),
            complete: total.is_complete(),
            total: total.phi.to_string(),
            h1_coefficient: h1_coefficient(&total.phi).to_string(),
            f_coefficient: f_coefficient(&total.phi).to_string(),
            cases,
        });
        ledger.extend(total.ledger);
        timing.insert(fam.to_string(), start.elapsed().as_secs_f64());
    }
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        engine_version: env!("CARGO_PKG_VERSION").into(),
        config: ReportConfig {
            families: cfg.families.iter().map(|f| f.to_string()).collect(),
            cases: cfg.cases.iter().map(|c| c.to_string()).collect(),
            oracle: cfg.oracle,
            seed: cfg.seed,
            jet_order: cfg.jet_order,
            dim_f: cfg.dim_f,
        },
        families,
        ledger,
        timing: cfg.timing.then_some(timing),
    })
}

fn operator_name(f: Family) -> &'static str {
    match f {
        Family::Dirac => "D̃_F",
        Family::Signature => "D̂_F",
    }
}

fn interior_text(f: Family) -> &'static str {
    match f {
        Family::Dirac => {
            "8π³ ∫_M { tr[ −s/12 + c(A*)c(A) − ¼ Σ_i (c(A*)c(e_i) − c(e_i)c(A))² − ½ Σ_j ∇_j(c(A*))c(e_j) − ½ Σ_j c(e_j)∇_j(c(A)) ] \
             − 2Δf/f + 4 tr[A(grad f)]/f − f²(|grad f|² + 2Δf) } dvol"
        }
        Family::Signature => {
            "8π³ ∫_M { tr[ −s/12 + ⅜(ĉ(ω*) − ĉ(ω))² − ¼ ĉ(ω*)ĉ(ω) − ¼ Σ_j ∇_j(ĉ(ω*))c(e_j) + ¼ Σ_j c(e_j)∇_j(ĉ(ω)) ] \
             + 4f⁻¹Δf + 8⟨grad f, grad f⁻¹⟩ − 5f⁻²(|grad f|² + 2Δf) } dvol"
        }
    }
}

/// Theorem-style statement: boundary term from the computed total, interior
/// term from fixed display text.
pub fn render_theorem(family: Family, total: &ScalarExpr) -> String {
    let d = operator_name(family);
    let symbol = match family {
        Family::Dirac => "Φ",
        Family::Signature => "Ψ",
    };
    let mut s = String::new();
    let _ = writeln!(s, "**{family}.** On a compact 6-manifold M with boundary,");
    let _ = writeln!(s);
    let _ = writeln!(s, "Wres[π⁺(f{d}⁻¹) ∘ π⁺(f⁻¹({d}*)⁻¹ · f{d}⁻¹ · f⁻¹({d}*)⁻¹)] = (interior) + ∫_∂M {symbol} dvol");
    let _ = writeln!(s);
    let _ = writeln!(s, "- boundary term (computed): `{symbol} = {total}`");
    let _ = writeln!(s, "- coefficient of π·h′(0)·dimF·Ω₄: {}", h1_coefficient(total));
    let _ = writeln!(s, "- coefficient of π·f⁻¹∂ₙf·dimF·Ω₄: {}", f_coefficient(total));
    let _ = writeln!(s, "- interior term, {INTERIOR_LABEL}: {}", interior_text(family));
    s
}

pub fn render_markdown(r: &Report) -> Result<String, Error> {
    let mut s = String::new();
    let _ = writeln!(s, "# ncres report\n");
    let _ = writeln!(s, "engine {} · schema {} · seed {} · jet order {}\n", r.engine_version, r.schema, r.config.seed, r.config.jet_order);
    for fr in &r.families {
        let fam: Family = fr.family.parse()?;
        let _ = writeln!(s, "## {}\n", fr.family);
        let _ = writeln!(s, "| case | tuples | value | status | oracle rel. err |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for c in &fr.cases {
            let err = c.numeric.as_ref().map_or("-".to_string(), |n| format!("{:.1e}", n.rel_err));
            let _ = writeln!(s, "| {} | {} | `{}` | {} | {} |", c.case_id, c.tuples.len(), c.value, c.status, err);
        }
        let _ = writeln!(s);
        if fr.complete {
            let total: ScalarExpr = fr.total.parse()?;
            s.push_str(&render_theorem(fam, &total));
        } else {
            let _ = writeln!(s, "partial sum over the selected cases: `{}`", fr.total);
        }
        let _ = writeln!(s);
    }
    let _ = writeln!(s, "## Discrepancy ledger\n");
    if r.ledger.is_empty() {
        let _ = writeln!(s, "no discrepancies\n");
    }
    for e in &r.ledger {
        let _ = writeln!(s, "- **{} {}** ({}), {}", e.family, e.subject, e.attribution.name(), e.citation);
        let _ = writeln!(s, "  - engine: `{}`", e.engine);
        let _ = writeln!(s, "  - reference: `{}`", e.reference);
        let _ = writeln!(s, "  - difference: `{}`", e.difference);
        let _ = writeln!(s, "  - anchor: `{}`", e.quote);
        if let Some(n) = &e.note {
            let _ = writeln!(s, "  - note: {n}");
        }
    }
    if let Some(t) = &r.timing {
        let _ = writeln!(s, "\n## Timing\n");
        for (k, v) in t {
            let _ = writeln!(s, "- {k}: {v:.2} s");
        }
    }
    Ok(s)
}
