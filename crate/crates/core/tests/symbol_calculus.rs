use ncres::clifford::{b_coefficient, CliffordRep};
use ncres::endo::{EndoElement, FGenerator, GenKind};
use ncres::oracle::Instantiation;
use ncres::scalar::{GaussianRational, Param, ScalarExpr};
use ncres::selftest;
use ncres::symbol::{Catalog, CollarGeometry, Family, PreSymbol, Var};
use proptest::prelude::*;

type GR = GaussianRational;

fn expr(s: &str) -> ScalarExpr {
    s.parse().unwrap()
}

fn gen(kind: GenKind, axis: usize) -> FGenerator {
    FGenerator::new(kind, axis as u8)
}

/// Σ_j c(e_j) ⊗ X(e_j) − Σ_j c(e_j) ⊗ Y(e_j)
fn clifford_field(rep: &CliffordRep, plus: GenKind, minus: Option<GenKind>) -> EndoElement {
    let mut acc = EndoElement::zero();
    for j in 1..=6 {
        acc = acc.add(&EndoElement::clifford_gen(rep.c(j), gen(plus, j))).unwrap();
        if let Some(m) = minus {
            acc = acc.add(&EndoElement::clifford_gen(rep.c(j), gen(m, j)).neg()).unwrap();
        }
    }
    acc
}

fn c_dx(rep: &CliffordRep, j: usize) -> EndoElement {
    EndoElement::clifford(rep.c(j))
}

/// c(ξ') at x0 for ξ' = (3/5, 0, 4/5, 0, 0).
fn c_xi_unit(rep: &CliffordRep) -> EndoElement {
    c_dx(rep, 1).scale(&GR::frac(3, 5)).add(&c_dx(rep, 3).scale(&GR::frac(4, 5))).unwrap()
}

#[test]
fn clifford_relations_exhaustive() {
    selftest::clifford_relations().unwrap();
}

#[test]
fn spin_traces_at_the_boundary_point() {
    let rep = CliffordRep::spin();
    let id = EndoElement::identity(8);
    let dxn = c_dx(&rep, 6);
    let cx = c_xi_unit(&rep);
    assert_eq!(id.neg().trace(), expr("-8*dimF"));
    assert!(cx.mul(&dxn).unwrap().trace().is_zero());
    assert_eq!(dxn.mul(&dxn).unwrap().trace(), expr("-8*dimF"));
    assert_eq!(cx.mul(&cx).unwrap().trace(), expr("-8*dimF"));

    // ∂_{x_n} c(ξ') against c(dx_n) and c(ξ')
    let cat = Catalog::build(Family::Dirac, 1).unwrap();
    let d = cat.c_xi.derivative(Var::Xn, &cat.geom).unwrap();
    let xi = [GR::frac(3, 5), GR::zero(), GR::frac(4, 5), GR::zero(), GR::zero(), GR::zero()];
    let d_at = d.eval_at(&xi).unwrap();
    let c_at = cat.c_xi.eval_at(&xi).unwrap();
    assert_eq!(c_at, cx);
    assert!(d_at.mul(&dxn).unwrap().trace().is_zero());
    assert_eq!(d_at.mul(&c_at).unwrap().trace(), expr("-4*h1*dimF"));
}

#[test]
fn spin_traces_of_connection_terms() {
    let rep = CliffordRep::spin();
    let dxn = c_dx(&rep, 6);
    let lambda = clifford_field(&rep, GenKind::SigmaF, Some(GenKind::AStar));
    let c_astar = clifford_field(&rep, GenKind::AStar, None);
    let c_a = clifford_field(&rep, GenKind::A, None);

    assert_eq!(dxn.mul(&lambda).unwrap().trace(), expr("-8*Tr[sigmaF_n] + 8*Tr[Astar_n]"));
    assert_eq!(dxn.mul(&c_astar).unwrap().trace(), expr("-8*Tr[Astar_n]"));
    assert_eq!(dxn.mul(&c_a).unwrap().trace(), expr("-8*Tr[A_n]"));
    for j in 1..=5 {
        let cj = c_dx(&rep, j);
        assert_eq!(cj.mul(&lambda).unwrap().trace(), expr(&format!("-8*Tr[sigmaF_{j}] + 8*Tr[Astar_{j}]")));
        assert_eq!(cj.mul(&c_astar).unwrap().trace(), expr(&format!("-8*Tr[Astar_{j}]")));
        assert_eq!(cj.mul(&c_a).unwrap().trace(), expr(&format!("-8*Tr[A_{j}]")));
    }
    // c(ξ')λ: only tangential components survive, weighted by ξ_j
    assert_eq!(c_xi_unit(&rep).mul(&lambda).unwrap().trace(), expr("-24/5*Tr[sigmaF_1] + 24/5*Tr[Astar_1] - 32/5*Tr[sigmaF_3] + 32/5*Tr[Astar_3]"));
}

#[test]
fn exterior_traces() {
    let rep = CliffordRep::exterior();
    let dxn = c_dx(&rep, 6);
    for i in 1..=6 {
        let ci = c_dx(&rep, i);
        let t = ci.mul(&dxn).unwrap().trace();
        if i < 6 {
            assert!(t.is_zero(), "i = {i}");
        } else {
            assert_eq!(t, expr("-64*dimF"));
        }
        let hat = EndoElement::clifford(rep.chat(i).unwrap());
        assert!(hat.mul(&c_xi_unit(&rep)).unwrap().trace().is_zero());
        assert!(hat.mul(&dxn).unwrap().trace().is_zero());
    }
}

#[test]
fn endo_trace_is_cyclic() {
    let rep = CliffordRep::spin();
    let a = clifford_field(&rep, GenKind::A, Some(GenKind::SigmaF)).add(&c_dx(&rep, 2)).unwrap();
    let b = clifford_field(&rep, GenKind::AStar, None).mul(&c_dx(&rep, 6)).unwrap();
    assert_eq!(a.mul(&b).unwrap().trace(), b.mul(&a).unwrap().trace());
    let id = EndoElement::identity(8);
    let x = EndoElement::clifford_gen(&rep.identity(), gen(GenKind::A, 1));
    let y = EndoElement::clifford_gen(&rep.identity(), gen(GenKind::AStar, 1));
    assert_ne!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
    assert_eq!(x.mul(&id).unwrap(), x);
}

#[test]
fn b_coefficients_match_the_binomial_formula() {
    let rows = selftest::b_coefficients_from_traces().unwrap();
    let expected: [i128; 7] = [1, 2, -1, -4, -1, 2, 1];
    for (m, t, b) in &rows {
        assert_eq!(t, b);
        assert_eq!(*t, GR::int(expected[*m as usize]));
        assert_eq!(b_coefficient(*m).unwrap(), expected[*m as usize].into());
    }
}

#[test]
fn collar_geometry_from_the_metric_jet() {
    let g = CollarGeometry::new(2).unwrap();
    assert_eq!(g.gamma_contracted(6), &expr("5/2*h1"));
    for k in 1..6 {
        assert!(g.gamma_contracted(k).is_zero());
    }
    assert_eq!(g.mean_curvature, expr("-5/2*h1"));
}

#[test]
fn composition_cancels_at_order_minus_one() {
    for fam in Family::ALL {
        let cat = Catalog::build(fam, 1).unwrap();
        selftest::composition_cancellation(&cat).unwrap();
    }
}

#[test]
fn q_m4_recursion_agrees_with_closed_form() {
    let cat = Catalog::build(Family::Dirac, 1).unwrap();
    let closed = cat.q_m4_closed_form().unwrap();
    let q = GR::frac;
    for xi in [[q(1, 2), q(-1, 3), q(2, 5), q(0, 1), q(1, 7), q(3, 4)], [q(2, 1), q(0, 1), q(-1, 1), q(1, 3), q(0, 1), q(-5, 2)]] {
        assert_eq!(cat.q_m4.eval_at(&xi).unwrap(), closed.eval_at(&xi).unwrap());
    }
}

fn rational_point() -> impl Strategy<Value = [GR; 6]> {
    prop::array::uniform6((-6i128..=6, 1i128..=4))
        .prop_filter("nonzero covector", |v| v.iter().any(|(a, _)| *a != 0))
        .prop_map(|v| v.map(|(a, b)| GR::frac(a, b)))
}

fn leibniz(a: &PreSymbol, b: &PreSymbol, var: Var, geom: &CollarGeometry, xi: &[GR; 6]) {
    let lhs = a.mul(b).unwrap().derivative(var, geom).unwrap();
    let rhs = a.derivative(var, geom).unwrap().mul(b).unwrap().add(&a.mul(&b.derivative(var, geom).unwrap()).unwrap()).unwrap();
    assert_eq!(lhs.eval_at(xi).unwrap(), rhs.eval_at(xi).unwrap(), "{var:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leibniz_rules(xi in rational_point()) {
        let cat = Catalog::build(Family::Dirac, 1).unwrap();
        let vars = [Var::Xi(1), Var::Xi(3), Var::Xi(5), Var::XiN, Var::Xn, Var::X(2)];
        for var in vars {
            leibniz(&cat.c_xi, &cat.q_m3, var, &cat.geom, &xi);
        }
        for var in [Var::Xi(2), Var::Xi(4), Var::XiN] {
            leibniz(&cat.sigma_m1, &cat.p2, var, &cat.geom, &xi);
        }
    }

    #[test]
    fn q_m3_is_homogeneous_of_degree_minus_three(xi in rational_point(), num in 1i128..=7, den in 1i128..=5, seed in 0u64..1000) {
        let lambda = GR::frac(num, den);
        let scaled = xi.clone().map(|x| &x * &lambda);
        let inst = Instantiation::random(seed, 2);
        let cat = Catalog::build(Family::Dirac, 1).unwrap();
        let base = inst.endo(&cat.q_m3.eval_at(&xi).unwrap());
        let at_scaled = inst.endo(&cat.q_m3.eval_at(&scaled).unwrap());
        let l = ncres::scalar::rat_to_f64(&lambda.re);
        let expected = base * num_complex::Complex64::new(l.powi(-3), 0.0);
        let err = (&at_scaled - &expected).norm() / expected.norm().max(1.0);
        prop_assert!(err <= 1e-9, "relative error {err}");
    }
}

#[test]
fn q_m3_homogeneity_for_signature() {
    let cat = Catalog::build(Family::Signature, 1).unwrap();
    let inst = Instantiation::random(3, 2);
    let q = GR::frac;
    let xi = [q(1, 2), q(-1, 3), q(2, 5), q(0, 1), q(1, 7), q(3, 4)];
    let lambda = q(5, 3);
    let base = inst.endo(&cat.q_m3.eval_at(&xi).unwrap());
    let scaled = inst.endo(&cat.q_m3.eval_at(&xi.clone().map(|x| &x * &lambda)).unwrap());
    let err = (&scaled - &base * num_complex::Complex64::new((5.0f64 / 3.0).powi(-3), 0.0)).norm() / base.norm();
    assert!(err <= 1e-9, "{err}");
}

#[test]
fn second_tangential_f_derivative_is_rejected() {
    let once = expr("f^-1*h1").laurent_f_derivative(1).unwrap();
    assert_eq!(once, expr("-f^-2*df_1*h1"));
    assert!(matches!(once.laurent_f_derivative(2), Err(ncres::Error::SecondFDerivative)));
    let cat = Catalog::build(Family::Dirac, 1).unwrap();
    let once = cat.c_xi.scale_expr(&expr("f")).derivative(Var::X(1), &cat.geom).unwrap();
    assert!(!once.is_zero());
    assert!(matches!(once.derivative(Var::X(1), &cat.geom), Err(ncres::Error::SecondFDerivative)));
}

#[test]
fn h_prime_free_parameters_stay_formal() {
    let g = CollarGeometry::new(1).unwrap();
    assert!(g.mean_curvature.contains(Param::H1));
    assert!(!g.mean_curvature.contains(Param::H2));
}
