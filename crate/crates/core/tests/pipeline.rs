use ncres::clifford::CliffordRep;
use ncres::fixtures::Fixtures;
use ncres::ledger::{Attribution, Evidence};
use ncres::pipeline::{assemble_total, compute_groups, enumerate_cases, CaseId};
use ncres::report::{f_coefficient, h1_coefficient, run, RunConfig};
use ncres::scalar::{GaussianRational, Param, ScalarExpr};
use ncres::symbol::{Catalog, Family};

fn expr(s: &str) -> ScalarExpr {
    s.parse().unwrap()
}

fn groups(fam: Family) -> Vec<(CaseId, ScalarExpr)> {
    compute_groups(&Catalog::build(fam, 1).unwrap(), 4).unwrap()
}

fn value(g: &[(CaseId, ScalarExpr)], c: CaseId) -> &ScalarExpr {
    &g.iter().find(|(k, _)| *k == c).unwrap().1
}

#[test]
fn nine_tuples_in_five_groups() {
    for fam in Family::ALL {
        let specs = enumerate_cases(fam, 1).unwrap();
        assert_eq!(specs.len(), 9);
        let count = |c| specs.iter().filter(|s| s.group() == c).count();
        assert_eq!([CaseId::AI, CaseId::AII, CaseId::AIII, CaseId::B, CaseId::C].map(count), [5, 1, 1, 1, 1]);
    }
    assert!(enumerate_cases(Family::Dirac, 0).is_err());
}

#[test]
fn dirac_case_values() {
    let g = groups(Family::Dirac);
    assert!(value(&g, CaseId::AI).is_zero());
    assert_eq!(value(&g, CaseId::AII), &expr("-15/16*pi*h1*Omega4*dimF + pi*f^-1*df_n*Omega4*dimF"));
    assert_eq!(value(&g, CaseId::AIII), &expr("25/16*pi*h1*Omega4*dimF + pi*f^-1*df_n*Omega4*dimF"));
    assert_eq!(
        value(&g, CaseId::B),
        &expr("-81/16*pi*h1*Omega4*dimF + pi*f^-1*df_n*Omega4*dimF - 2*pi*Omega4*Tr[A_n] - 9/2*pi*Omega4*Tr[Astar_n] + 3/2*pi*Omega4*Tr[sigmaF_n]")
    );
    assert_eq!(value(&g, CaseId::C), &expr("55/16*pi*h1*Omega4*dimF - 2*pi*Omega4*Tr[A_n] - 2*pi*Omega4*Tr[sigmaF_n]"));
}

#[test]
fn signature_case_values() {
    let g = groups(Family::Signature);
    assert!(value(&g, CaseId::AI).is_zero());
    assert_eq!(value(&g, CaseId::AII), &expr("-15/2*pi*h1*Omega4*dimF + 8*pi*f^-1*df_n*Omega4*dimF"));
    assert_eq!(value(&g, CaseId::AIII), &expr("25/2*pi*h1*Omega4*dimF + 8*pi*f^-1*df_n*Omega4*dimF"));
    assert_eq!(value(&g, CaseId::B), &expr("55/2*pi*h1*Omega4*dimF - 16*pi*Omega4*Tr[sigmaFe_n]"));
    assert_eq!(value(&g, CaseId::C), &expr("-81/2*pi*h1*Omega4*dimF + 8*pi*f^-1*df_n*Omega4*dimF + 12*pi*Omega4*Tr[sigmaFe_n]"));
}

#[test]
fn invariant_under_spin_generator_permutation() {
    let reference = groups(Family::Dirac);
    for perm in [[1, 0, 2, 3, 4, 5], [5, 4, 3, 2, 1, 0], [2, 0, 1, 5, 3, 4]] {
        let cat = Catalog::build_with_rep(Family::Dirac, CliffordRep::spin_permuted(perm), 1).unwrap();
        assert_eq!(compute_groups(&cat, 2).unwrap(), reference, "{perm:?}");
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let cat = Catalog::build(Family::Dirac, 1).unwrap();
    let one = compute_groups(&cat, 1).unwrap();
    for w in [2, 3, 16] {
        assert_eq!(compute_groups(&cat, w).unwrap(), one);
    }
}

/// Zero connection, constant conformal factor: no traces and no ∂f survive.
fn trivial_bundle(e: &ScalarExpr) -> ScalarExpr {
    let e = e.substitute(Param::Df(6), &ScalarExpr::zero());
    ScalarExpr::from_terms(e.terms().filter(|(m, _)| m.traces().is_empty()).map(|(m, c)| (m.clone(), c.clone())))
}

#[test]
fn trivial_bundle_dirac_total_is_pure_h_prime() {
    let g = groups(Family::Dirac);
    let mut total = ScalarExpr::zero();
    let mut h1_sum = GaussianRational::zero();
    for (_, v) in &g {
        total.add_assign(v);
        h1_sum += &h1_coefficient(v);
    }
    let reduced = trivial_bundle(&total);
    assert_eq!(reduced, ScalarExpr::param(Param::H1).mul(&expr("pi*Omega4*dimF")).scale(&h1_sum));
    assert_eq!(h1_sum, GaussianRational::int(-1));
}

#[test]
fn assembled_totals_agree_with_group_sums() {
    let fixtures = Fixtures::builtin();
    for fam in Family::ALL {
        let cat = Catalog::build(fam, 1).unwrap();
        let total = assemble_total(&cat, &CaseId::ALL, &fixtures, 4).unwrap();
        let mut sum = ScalarExpr::zero();
        for (_, v) in compute_groups(&cat, 1).unwrap() {
            sum.add_assign(&v);
        }
        assert_eq!(total.phi, sum);
        assert!(total.is_complete());
    }
    let d = assemble_total(&Catalog::build(Family::Dirac, 1).unwrap(), &CaseId::ALL, &fixtures, 1).unwrap();
    assert_eq!(h1_coefficient(&d.phi), GaussianRational::int(-1));
    assert_eq!(f_coefficient(&d.phi), GaussianRational::int(3));
}

#[test]
fn reports_are_deterministic() {
    let cfg = RunConfig { families: vec![Family::Dirac], workers: 1, ..RunConfig::default() };
    let a = run(&cfg).unwrap().to_json();
    let b = run(&RunConfig { workers: 8, ..cfg.clone() }).unwrap().to_json();
    let c = run(&cfg).unwrap().to_json();
    assert_eq!(a, b);
    assert_eq!(a, c);

    let mut reversed = cfg.clone();
    reversed.cases.reverse();
    let r = run(&reversed).unwrap();
    let base = run(&cfg).unwrap();
    assert_eq!(r.families, base.families);
    assert_eq!(r.ledger, base.ledger);
}

#[test]
fn dirac_ledger_attributions() {
    let r = run(&RunConfig { families: vec![Family::Dirac], ..RunConfig::default() }).unwrap();
    assert!(!r.has_engine_bug());
    let subjects: Vec<_> = r.ledger.iter().map(|e| (e.subject.as_str(), e.attribution)).collect();
    assert_eq!(
        subjects,
        [
            ("aII", Attribution::PaperSide),
            ("aIII", Attribution::PaperSide),
            ("b", Attribution::PaperSide),
            ("c/variant", Attribution::FixtureFlagged),
            ("total", Attribution::PaperSide),
        ]
    );
    for e in &r.ledger {
        let Evidence::Oracle { samples, .. } = &e.evidence else { panic!("{}", e.subject) };
        assert_eq!(samples.len(), 3);
        assert!(samples.iter().all(|s| s.engine_agrees() && !s.reference_agrees()));
    }
}

#[test]
fn partial_runs_skip_the_total() {
    let r = run(&RunConfig { families: vec![Family::Dirac], cases: vec![CaseId::C], oracle: false, ..RunConfig::default() }).unwrap();
    let f = r.family(Family::Dirac).unwrap();
    assert!(!f.complete);
    assert_eq!(f.cases.len(), 1);
    assert!(r.ledger.is_empty());
}

#[test]
fn fixture_override_changes_status() {
    let mut fx = Fixtures::builtin();
    fx.families.get_mut("dirac").unwrap().get_mut("aII").unwrap().expr = "-15/16*pi*h1*Omega4*dimF + pi*f^-1*df_n*Omega4*dimF".into();
    let cfg = RunConfig { families: vec![Family::Dirac], cases: vec![CaseId::AII], fixtures: fx, ..RunConfig::default() };
    let r = run(&cfg).unwrap();
    assert_eq!(r.families[0].cases[0].status, "match");
    assert!(r.ledger.is_empty());
}
