//! Enumeration and evaluation of the boundary cases, assembly of totals.

use std::fmt;
use std::str::FromStr;

use crate::endo::GenKind;
use crate::fixtures::{FixtureEntry, Fixtures};
use crate::integrator::{integrate_boundary_product, pi_plus};
use crate::ledger::LedgerEntry;
use crate::scalar::{GaussianRational, Param, ScalarExpr};
use crate::symbol::{Catalog, Family, RestrictedSymbol, Var};
use crate::Error;

/// Spatial dimension; the boundary sum collects symbols of total order −N.
pub const DIM: i32 = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CaseId {
    AI,
    AII,
    AIII,
    B,
    C,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::AI, CaseId::AII, CaseId::AIII, CaseId::B, CaseId::C];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::AI => "aI",
            CaseId::AII => "aII",
            CaseId::AIII => "aIII",
            CaseId::B => "b",
            CaseId::C => "c",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        CaseId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::OutOfRange(format!("unknown case '{s}'")))
    }
}

/// One index tuple of the boundary sum.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CaseSpec {
    pub family: Family,
    pub r: i32,
    pub l: i32,
    pub j: u32,
    pub k: u32,
    pub alpha: [u8; 5],
}

impl CaseSpec {
    pub fn alpha_len(&self) -> u32 {
        self.alpha.iter().map(|&a| a as u32).sum()
    }

    pub fn satisfies_constraint(&self) -> bool {
        self.r + self.l - self.k as i32 - self.j as i32 - self.alpha_len() as i32 - 1 == -DIM && self.r <= -1 && self.l <= -3
    }

    /// The signature family labels the two off-diagonal tuples the other way round.
    pub fn group(&self) -> CaseId {
        let (b, c) = match self.family {
            Family::Dirac => (CaseId::B, CaseId::C),
            Family::Signature => (CaseId::C, CaseId::B),
        };
        match (self.r, self.l) {
            (-1, -4) => b,
            (-2, -3) => c,
            _ if self.alpha_len() == 1 => CaseId::AI,
            _ if self.j == 1 => CaseId::AII,
            _ => CaseId::AIII,
        }
    }

    /// (−i)^{|α|+j+k+1} / (α!(j+k+1)!)
    pub fn prefactor(&self) -> GaussianRational {
        let n = self.alpha_len() + self.j + self.k + 1;
        let alpha_fact: i128 = self.alpha.iter().map(|&a| (1..=a as i128).product::<i128>()).product();
        let jk_fact: i128 = (1..=(self.j + self.k + 1) as i128).product();
        GaussianRational::i_pow(-(n as i64)) * GaussianRational::frac(1, alpha_fact * jk_fact)
    }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} l={} j={} k={} alpha={:?}", self.r, self.l, self.j, self.k, self.alpha)
    }
}

fn multi_indices(n: u32) -> Vec<[u8; 5]> {
    let mut out = vec![[0u8; 5]];
    for _ in 0..n {
        let mut next: Vec<[u8; 5]> = Vec::new();
        for a in &out {
            for i in 0..5 {
                let mut b = *a;
                b[i] += 1;
                if !next.contains(&b) {
                    next.push(b);
                }
            }
        }
        out = next;
    }
    out.sort();
    out.reverse();
    out
}

/// Every tuple with r ∈ {−1, −2}, l ∈ {−3, −4} meeting the order constraint.
/// The x_n-derivative budget is checked against `jet_order`.
pub fn enumerate_cases(family: Family, jet_order: usize) -> Result<Vec<CaseSpec>, Error> {
    let mut out = Vec::new();
    for r in [-1, -2] {
        for l in [-3, -4] {
            let budget = r + l + DIM - 1;
            if budget < 0 {
                continue;
            }
            for j in 0..=budget as u32 {
                for k in 0..=(budget as u32 - j) {
                    for alpha in multi_indices(budget as u32 - j - k) {
                        let c = CaseSpec { family, r, l, j, k, alpha };
                        debug_assert!(c.satisfies_constraint());
                        if (j.max(k)) as usize > jet_order {
                            return Err(Error::Truncation { order: jet_order });
                        }
                        out.push(c);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The two restricted factors whose traced product is integrated for `spec`.
pub fn case_factors(cat: &Catalog, spec: &CaseSpec) -> Result<(RestrictedSymbol, RestrictedSymbol), Error> {
    if spec.family != cat.family {
        return Err(Error::EngineBug(format!("{} catalog used for a {} case", cat.family, spec.family)));
    }
    if !spec.satisfies_constraint() {
        return Err(Error::EngineBug(format!("tuple {spec} violates the order constraint")));
    }
    let geom = &cat.geom;

    // ∂_{x_n}^j ∂_{ξ'}^α ∂_{ξ_n}^k π⁺ σ_r
    let mut left = cat.left(spec.r)?.derivative_n(Var::Xn, spec.j as usize, geom)?;
    for (i, &a) in spec.alpha.iter().enumerate() {
        left = left.derivative_n(Var::Xi(i + 1), a as usize, geom)?;
    }
    let left = pi_plus(&left.restrict()?.d_xin_n(spec.k as usize))?;

    // ∂_{x'}^α ∂_{ξ_n}^{j+1} ∂_{x_n}^k σ_l
    let mut right = cat.right(spec.l)?.derivative_n(Var::Xn, spec.k as usize, geom)?;
    for (i, &a) in spec.alpha.iter().enumerate() {
        right = right.derivative_n(Var::X(i + 1), a as usize, geom)?;
    }
    let right = right.restrict()?.d_xin_n(spec.j as usize + 1);
    Ok((left, right))
}

/// Exact value of one tuple: prefactor · ∫∫ trace[left × right].
pub fn compute_tuple(cat: &Catalog, spec: &CaseSpec) -> Result<ScalarExpr, Error> {
    let (left, right) = case_factors(cat, spec)?;
    Ok(integrate_boundary_product(&left, &right)?.scale(&spec.prefactor()))
}

/// Per-group values in CaseId order.
pub fn compute_groups(cat: &Catalog, workers: usize) -> Result<Vec<(CaseId, ScalarExpr)>, Error> {
    let specs = enumerate_cases(cat.family, cat.geom.jet_order)?;
    let values = run_parallel(&specs, workers, |s| compute_tuple(cat, s))?;
    let mut out: Vec<(CaseId, ScalarExpr)> = CaseId::ALL.iter().map(|&c| (c, ScalarExpr::zero())).collect();
    for (s, v) in specs.iter().zip(values) {
        let slot = out.iter_mut().find(|(c, _)| *c == s.group()).expect("group");
        slot.1.add_assign(&v);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CaseStatus {
    Match,
    Mismatch,
    FixtureFlagged,
    NoFixture,
}

impl CaseStatus {
    pub fn name(self) -> &'static str {
        match self {
            CaseStatus::Match => "match",
            CaseStatus::Mismatch => "mismatch",
            CaseStatus::FixtureFlagged => "fixture-flagged",
            CaseStatus::NoFixture => "no-fixture",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub case_id: CaseId,
    pub tuples: Vec<CaseSpec>,
    pub value: ScalarExpr,
    /// Reference value already in the engine's trace notation.
    pub fixture: Option<ScalarExpr>,
    pub status: CaseStatus,
}

#[derive(Clone, Debug)]
pub struct BoundaryTotal {
    pub family: Family,
    /// Φ for Dirac, Ψ for signature; the sum over `per_case`.
    pub phi: ScalarExpr,
    pub per_case: Vec<CaseResult>,
    pub ledger: Vec<LedgerEntry>,
}

impl BoundaryTotal {
    pub fn case(&self, c: CaseId) -> Option<&CaseResult> {
        self.per_case.iter().find(|r| r.case_id == c)
    }

    pub fn is_complete(&self) -> bool {
        CaseId::ALL.iter().all(|c| self.case(*c).is_some())
    }
}

/// Shape checks every case value must pass.
pub fn check_case_value(v: &ScalarExpr) -> Result<(), Error> {
    if v.contains(Param::SNorm) {
        return Err(Error::ResidualSnorm);
    }
    if v.contains(Param::H2) {
        return Err(Error::EngineBug("h''(0) survived in a boundary term".into()));
    }
    if (1..6).any(|j| v.contains(Param::Df(j))) {
        return Err(Error::EngineBug("tangential f-derivative survived in a boundary term".into()));
    }
    if v.trace_symbols().any(|t| t.word().iter().any(|g| g.kind == GenKind::CurvatureF)) {
        return Err(Error::ReservedGenerator);
    }
    Ok(())
}

fn status_of(value: &ScalarExpr, entry: Option<&FixtureEntry>) -> Result<(Option<ScalarExpr>, CaseStatus), Error> {
    let Some(e) = entry else { return Ok((None, CaseStatus::NoFixture)) };
    let fx = e.normalized()?;
    let st = if &fx == value {
        CaseStatus::Match
    } else if e.typo_suspect {
        CaseStatus::FixtureFlagged
    } else {
        CaseStatus::Mismatch
    };
    Ok((Some(fx), st))
}

/// Evaluates the requested groups and sums them. The ledger is left empty.
pub fn assemble_total(cat: &Catalog, cases: &[CaseId], fixtures: &Fixtures, workers: usize) -> Result<BoundaryTotal, Error> {
    let specs: Vec<CaseSpec> =
        enumerate_cases(cat.family, cat.geom.jet_order)?.into_iter().filter(|s| cases.contains(&s.group())).collect();
    let values = run_parallel(&specs, workers, |s| compute_tuple(cat, s))?;
    let mut per_case = Vec::new();
    let mut phi = ScalarExpr::zero();
    for c in CaseId::ALL.into_iter().filter(|c| cases.contains(c)) {
        let mut value = ScalarExpr::zero();
        let mut tuples = Vec::new();
        for (s, v) in specs.iter().zip(&values).filter(|(s, _)| s.group() == c) {
            value.add_assign(v);
            tuples.push(*s);
        }
        check_case_value(&value)?;
        let (fixture, status) = status_of(&value, fixtures.entry(cat.family, c.name()))?;
        phi.add_assign(&value);
        per_case.push(CaseResult { case_id: c, tuples, value, fixture, status });
    }
    Ok(BoundaryTotal { family: cat.family, phi, per_case, ledger: Vec::new() })
}

/// Evaluates `f` on every item with up to `workers` threads; results keep
/// input order regardless of scheduling.
pub fn run_parallel<I: Sync, O: Send>(items: &[I], workers: usize, f: impl Fn(&I) -> Result<O, Error> + Sync) -> Result<Vec<O>, Error> {
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<O, Error>>> = (0..items.len()).map(|_| None).collect();
    let done = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let r = f(&items[idx]);
                done.lock().expect("poisoned").push((idx, r));
            });
        }
    });
    for (idx, r) in done.into_inner().expect("poisoned") {
        slots[idx] = Some(r);
    }
    slots.into_iter().map(|s| s.expect("every item evaluated")).collect()
}
