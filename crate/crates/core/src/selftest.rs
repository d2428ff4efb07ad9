//! Fast invariant checks runnable from the command line.

use crate::clifford::{b_coefficient, CliffordRep, RepKind};
use crate::integrator::{pi_minus, pi_plus};
use crate::oracle::{check_group, Instantiation, DEFAULT_SEEDS};
use crate::pipeline::CaseId;
use crate::scalar::{GaussianRational, Param, ScalarExpr};
use crate::symbol::{Catalog, CollarGeometry, Family, Var};
use crate::Error;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<String, String>) -> Self {
        match r {
            Ok(d) => Check::new(name, true, d),
            Err(d) => Check::new(name, false, d),
        }
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

pub fn clifford_relations() -> Result<String, String> {
    for rep in [CliffordRep::spin(), CliffordRep::exterior()] {
        let id = rep.identity();
        for i in 1..=6 {
            for j in 1..=6 {
                let ac = rep.c(i).anticommutator(rep.c(j));
                let ok = if i == j { ac == id.scale(&GaussianRational::int(-2)) } else { ac.is_zero() };
                if !ok {
                    return Err(format!("{:?}: {{c{i}, c{j}}} != -2 delta", rep.kind));
                }
                if rep.has_chat() {
                    let hh = rep.chat(i).map_err(err)?.anticommutator(rep.chat(j).map_err(err)?);
                    let ok = if i == j { hh == id.scale(&GaussianRational::int(2)) } else { hh.is_zero() };
                    let mixed = rep.c(i).anticommutator(rep.chat(j).map_err(err)?);
                    if !ok || !mixed.is_zero() {
                        return Err(format!("chat relations fail at ({i}, {j})"));
                    }
                }
            }
        }
    }
    Ok("spin (8x8) and exterior (64x64): {c_i,c_j} = -2 delta_ij, {chat_i,chat_j} = 2 delta_ij, {c_i,chat_j} = 0".into())
}

/// Degree-wise traces of (ε₁ι₁ − ι₁ε₁)(ε₆ι₆ − ι₆ε₆) on Λ*(ℝ⁶).
pub fn b_coefficients_from_traces() -> Result<Vec<(i64, GaussianRational, GaussianRational)>, Error> {
    let rep = CliffordRep::build(RepKind::Exterior);
    let block = |j: usize| -> Result<_, Error> {
        let (e, i) = rep.eps_iota(j)?;
        e.mul(&i)?.add(&i.mul(&e)?.neg())
    };
    let m = block(1)?.mul(&block(6)?)?;
    (0..=6)
        .map(|deg| {
            let t = rep.degree_trace(&m, deg as u32)?;
            Ok((deg, t, GaussianRational::real(b_coefficient(deg)?)))
        })
        .collect()
}

pub fn b_coefficients() -> Result<String, String> {
    let rows = b_coefficients_from_traces().map_err(err)?;
    let mut sum = GaussianRational::zero();
    for (m, t, b) in &rows {
        if t != b {
            return Err(format!("degree {m}: trace {t} vs binomial formula {b}"));
        }
        sum += t;
    }
    if !sum.is_zero() {
        return Err(format!("sum over degrees is {sum}"));
    }
    Ok(format!("b_6,m = {:?}, sum 0", rows.iter().map(|r| r.1.to_string()).collect::<Vec<_>>()))
}

pub fn collar_geometry() -> Result<String, String> {
    let g = CollarGeometry::new(1).map_err(err)?;
    let h1 = |p, q| ScalarExpr::param(Param::H1).scale(&GaussianRational::frac(p, q));
    if g.gamma_contracted(6) != &h1(5, 2) {
        return Err(format!("Gamma^n = {}", g.gamma_contracted(6)));
    }
    if let Some(k) = (1..6).find(|&k| !g.gamma_contracted(k).is_zero()) {
        return Err(format!("Gamma^{k} = {}", g.gamma_contracted(k)));
    }
    if g.mean_curvature != h1(-5, 2) {
        return Err(format!("K = {}", g.mean_curvature));
    }
    Ok("Gamma^n = 5/2 h1, Gamma^k = 0 (k < 6), K = -5/2 h1".into())
}

/// π⁺ is idempotent and π⁺ + π⁻ = id on the restricted catalog symbols.
pub fn projections(cat: &Catalog) -> Result<String, String> {
    let q = GaussianRational::frac;
    let xi = [q(3, 5), q(0, 1), q(4, 5), q(0, 1), q(0, 1)];
    let mut n = 0;
    for s in [&cat.sigma_m1, &cat.sigma_m2, &cat.q_m3, &cat.q_m4] {
        let r = s.restrict().map_err(err)?;
        let p = pi_plus(&r).map_err(err)?;
        let sum = p.add(&pi_minus(&r).map_err(err)?);
        let pp = pi_plus(&p).map_err(err)?;
        for xn in [q(1, 3), q(-7, 2), q(5, 1)] {
            if pp.eval_at(&xi, &xn) != p.eval_at(&xi, &xn) {
                return Err(format!("pi+ not idempotent on an order {} symbol", s.order()));
            }
            if sum.eval_at(&xi, &xn) != r.eval_at(&xi, &xn) {
                return Err(format!("pi+ + pi- != id on an order {} symbol", s.order()));
            }
        }
        n += 1;
    }
    Ok(format!("{} symbols of the {} catalog", n, cat.family))
}

/// σ₁σ₋₂ + σ₀σ₋₁ + Σ_j ∂_{ξ_j}σ₁ · D_{x_j}σ₋₁ = 0 at x0.
pub fn composition_cancellation(cat: &Catalog) -> Result<String, String> {
    let b = cat.builder();
    let i = GaussianRational::i();
    let sigma1 = cat.c_xi.scale(&i);
    let mut r = sigma1
        .mul(&cat.sigma_m2)
        .and_then(|x| x.add(&b.constant(cat.blocks.sigma0.clone()).mul(&cat.sigma_m1)?))
        .map_err(err)?;
    for j in 1..=6 {
        let var = if j == 6 { Var::Xn } else { Var::X(j) };
        let dxi = b.constant(b.c_dx(j).scale(&i));
        let dx = cat.sigma_m1.derivative(var, &cat.geom).map_err(err)?.scale(&-&i);
        r = r.add(&dxi.mul(&dx).map_err(err)?).map_err(err)?;
    }
    let r = r.at_point();
    let q = GaussianRational::frac;
    for pt in [[q(1, 2), q(-1, 3), q(2, 5), q(0, 1), q(1, 7), q(3, 4)], [q(-2, 3), q(1, 1), q(0, 1), q(1, 4), q(-1, 2), q(-5, 3)]] {
        let v = r.eval_at(&pt).map_err(err)?;
        if !v.is_zero() {
            return Err(format!("order -1 composition residue does not vanish at {pt:?}"));
        }
    }
    Ok(format!("{} catalog, exact at two rational points", cat.family))
}

pub fn oracle_spot_check(cat: &Catalog, case: CaseId) -> Result<String, String> {
    let inst = Instantiation::random(DEFAULT_SEEDS[0], 2);
    let g = check_group(cat, case, &inst).map_err(err)?;
    if g.passes() {
        Ok(format!("{} {case}: relative error {:.1e}", cat.family, g.rel_err()))
    } else {
        Err(format!("{} {case}: exact {} vs numeric {}", cat.family, g.exact, g.numeric))
    }
}

pub fn run(jet_order: usize) -> Result<Vec<Check>, Error> {
    let mut out = vec![
        Check::from_result("clifford relations", clifford_relations()),
        Check::from_result("b_6,m degree traces", b_coefficients()),
        Check::from_result("collar geometry", collar_geometry()),
    ];
    for fam in Family::ALL {
        let cat = Catalog::build(fam, jet_order)?;
        out.push(Check::from_result(&format!("{fam}: pi+ projections"), projections(&cat)));
        out.push(Check::from_result(&format!("{fam}: composition cancellation"), composition_cancellation(&cat)));
        out.push(Check::from_result(&format!("{fam}: oracle spot check"), oracle_spot_check(&cat, CaseId::AII)));
    }
    Ok(out)
}
