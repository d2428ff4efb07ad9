//! Discrepancy ledger: every disagreement between engine and reference values,
//! attributed by the numeric oracle or by exact re-summation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fixtures::{FixtureEntry, Fixtures};
use crate::oracle::{check_group, GroupCheck, Instantiation, ORACLE_TOL};
use crate::pipeline::{BoundaryTotal, CaseId, CaseStatus};
use crate::scalar::ScalarExpr;
use crate::symbol::Catalog;
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attribution {
    /// The oracle reproduces the engine and not the reference.
    PaperSide,
    /// The oracle disagrees with the engine.
    EngineBug,
    /// The reference marks this value as a suspected typo.
    FixtureFlagged,
}

impl Attribution {
    pub fn name(self) -> &'static str {
        match self {
            Attribution::PaperSide => "paper-side",
            Attribution::EngineBug => "engine-bug",
            Attribution::FixtureFlagged => "fixture-flagged",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSample {
    pub seed: u64,
    pub engine: [f64; 2],
    pub oracle: [f64; 2],
    pub reference: [f64; 2],
    pub engine_rel_err: f64,
    pub reference_rel_err: f64,
}

impl OracleSample {
    fn new(check: &GroupCheck, reference: Complex64) -> Self {
        let scale = check.numeric.norm().max(1.0);
        OracleSample {
            seed: check.seed,
            engine: [check.exact.re, check.exact.im],
            oracle: [check.numeric.re, check.numeric.im],
            reference: [reference.re, reference.im],
            engine_rel_err: check.rel_err(),
            reference_rel_err: (reference - check.numeric).norm() / scale,
        }
    }

    pub fn engine_agrees(&self) -> bool {
        self.engine_rel_err <= ORACLE_TOL
    }

    pub fn reference_agrees(&self) -> bool {
        self.reference_rel_err <= ORACLE_TOL
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Oracle { tolerance: f64, samples: Vec<OracleSample> },
    /// The printed total against the sum of the reference's own case values.
    Resummation { case_sum: String, printed: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub family: String,
    /// A case id, `total`, or `<case>/variant`.
    pub subject: String,
    pub attribution: Attribution,
    pub engine: String,
    pub reference: String,
    /// engine − reference
    pub difference: String,
    pub citation: String,
    pub quote: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub evidence: Evidence,
}

/// Oracle runs shared by every entry of one family.
struct OracleRuns<'a> {
    cat: &'a Catalog,
    insts: Vec<Instantiation>,
    cache: BTreeMap<(CaseId, usize), GroupCheck>,
}

impl<'a> OracleRuns<'a> {
    fn new(cat: &'a Catalog, seeds: &[u64], dim_f: usize) -> Self {
        OracleRuns { cat, insts: seeds.iter().map(|&s| Instantiation::random(s, dim_f)).collect(), cache: BTreeMap::new() }
    }

    fn check(&mut self, cases: &[CaseId], idx: usize) -> Result<GroupCheck, Error> {
        let inst = &self.insts[idx];
        let mut sum = GroupCheck { seed: inst.seed, exact: Complex64::new(0.0, 0.0), numeric: Complex64::new(0.0, 0.0) };
        for &c in cases {
            let g = match self.cache.get(&(c, idx)) {
                Some(g) => *g,
                None => {
                    let g = check_group(self.cat, c, inst)?;
                    self.cache.insert((c, idx), g);
                    g
                }
            };
            sum.exact += g.exact;
            sum.numeric += g.numeric;
        }
        Ok(sum)
    }

    fn samples(&mut self, cases: &[CaseId], reference: &ScalarExpr) -> Result<Vec<OracleSample>, Error> {
        (0..self.insts.len())
            .map(|i| {
                let g = self.check(cases, i)?;
                Ok(OracleSample::new(&g, self.insts[i].eval(reference)))
            })
            .collect()
    }
}

fn attribute(samples: &[OracleSample], flagged: bool) -> Attribution {
    if !samples.iter().all(OracleSample::engine_agrees) {
        Attribution::EngineBug
    } else if flagged {
        Attribution::FixtureFlagged
    } else {
        Attribution::PaperSide
    }
}

fn entry(
    total: &BoundaryTotal,
    subject: String,
    engine: &ScalarExpr,
    reference: &ScalarExpr,
    fx: &FixtureEntry,
    attribution: Attribution,
    evidence: Evidence,
) -> LedgerEntry {
    LedgerEntry {
        family: total.family.to_string(),
        subject,
        attribution,
        engine: engine.to_string(),
        reference: reference.to_string(),
        difference: engine.sub(reference).to_string(),
        citation: fx.citation.clone(),
        quote: fx.quote.clone(),
        note: fx.note.clone(),
        evidence,
    }
}

/// Fills `total.ledger`. Mismatches are re-integrated numerically under each
/// seed; the printed total is also checked against the reference's own case sum.
pub fn fixture_diff(cat: &Catalog, total: &mut BoundaryTotal, fixtures: &Fixtures, seeds: &[u64], dim_f: usize) -> Result<(), Error> {
    if cat.family != total.family {
        return Err(Error::EngineBug("catalog and total belong to different families".into()));
    }
    let mut runs = OracleRuns::new(cat, seeds, dim_f);
    let oracle = |samples| Evidence::Oracle { tolerance: ORACLE_TOL, samples };
    let mut ledger = Vec::new();

    for r in &total.per_case {
        let Some(fx) = fixtures.entry(total.family, r.case_id.name()) else { continue };
        if let (Some(reference), CaseStatus::Mismatch | CaseStatus::FixtureFlagged) = (&r.fixture, r.status) {
            let samples = runs.samples(&[r.case_id], reference)?;
            let a = attribute(&samples, fx.typo_suspect);
            ledger.push(entry(total, r.case_id.name().into(), &r.value, reference, fx, a, oracle(samples)));
        }
        for v in fx.variants.iter().filter(|v| v.typo_suspect) {
            let reference = v.normalized()?;
            if reference != r.value {
                let samples = runs.samples(&[r.case_id], &reference)?;
                let a = attribute(&samples, true);
                ledger.push(entry(total, format!("{}/variant", r.case_id), &r.value, &reference, v, a, oracle(samples)));
            }
        }
    }

    if total.is_complete() {
        if let Some(fx) = fixtures.entry(total.family, "total") {
            let printed = fx.normalized()?;
            if printed != total.phi {
                let samples = runs.samples(&CaseId::ALL, &printed)?;
                let a = attribute(&samples, fx.typo_suspect);
                ledger.push(entry(total, "total".into(), &total.phi, &printed, fx, a, oracle(samples)));
            }
            let mut case_sum = ScalarExpr::zero();
            let mut have_all = true;
            for c in CaseId::ALL {
                match fixtures.entry(total.family, c.name()) {
                    Some(e) => case_sum.add_assign(&e.normalized()?),
                    None => have_all = false,
                }
            }
            if have_all && case_sum != printed {
                let mut e = entry(
                    total,
                    "total/resummation".into(),
                    &case_sum,
                    &printed,
                    fx,
                    Attribution::PaperSide,
                    Evidence::Resummation { case_sum: case_sum.to_string(), printed: printed.to_string() },
                );
                e.note = Some("the printed total disagrees with the sum of the printed case values".into());
                ledger.push(e);
            }
        }
    }
    total.ledger = ledger;
    Ok(())
}
