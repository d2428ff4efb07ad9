//! Collar geometry at x0 for g = h(x_n)^{-1} g^∂ + dx_n², h(0) = 1, with the
//! boundary metric flat to first order at x0 (normal coordinates on ∂M).
//!
//! Everything is derived from the metric jet: Christoffel symbols, the
//! orthonormal-frame connection and the Clifford-level connection terms.

#![allow(clippy::needless_range_loop)]

use crate::clifford::CliffordRep;
use crate::endo::EndoElement;
use crate::scalar::{GaussianRational, Jet, Param, ScalarExpr};
use crate::Error;

const N: usize = 6;

#[derive(Clone, Debug)]
pub struct CollarGeometry {
    pub jet_order: usize,
    /// h(x_n) = 1 + h1 x_n + h2 x_n²/2 (+ …)
    pub h: Jet<ScalarExpr>,
    pub sqrt_h: Jet<ScalarExpr>,
    /// Γ^k_{ij}(x0), indices 0-based (5 is the normal direction).
    pub christoffel: Vec<Vec<Vec<ScalarExpr>>>,
    /// Γ^k = g^{ij} Γ^k_{ij}
    pub christoffel_contracted: Vec<ScalarExpr>,
    /// ω_{s,t}(ẽ_l) = ⟨∇_{ẽ_l} ẽ_t, ẽ_s⟩, indexed `[l][s][t]`.
    pub frame_connection: Vec<Vec<Vec<ScalarExpr>>>,
    pub mean_curvature: ScalarExpr,
}

fn h_jet(order: usize) -> Result<Jet<ScalarExpr>, Error> {
    let d = match order {
        1 => vec![ScalarExpr::one(), ScalarExpr::param(Param::H1)],
        2 => vec![ScalarExpr::one(), ScalarExpr::param(Param::H1), ScalarExpr::param(Param::H2)],
        _ => return Err(Error::OutOfRange(format!("jet order must be 1 or 2, got {order}"))),
    };
    Ok(Jet::from_derivatives(d))
}

/// Σ_m coeff(m)·u^m for a jet y = 1 + u with u(0) = 0, truncated at the jet order.
fn unit_series(y: &Jet<ScalarExpr>, coeff: impl Fn(usize) -> GaussianRational) -> Jet<ScalarExpr> {
    let order = y.order();
    let mut d = y.derivatives().to_vec();
    d[0] = ScalarExpr::zero();
    let u = Jet::from_derivatives(d);
    let mut acc = Jet::constant(ScalarExpr::one(), order);
    let mut pow = Jet::constant(ScalarExpr::one(), order);
    for m in 1..=order {
        pow = pow.mul(&u);
        acc = acc.add(&pow.scale(&coeff(m)));
    }
    acc
}

pub fn jet_recip_unit(y: &Jet<ScalarExpr>) -> Jet<ScalarExpr> {
    unit_series(y, |m| GaussianRational::int(if m % 2 == 0 { 1 } else { -1 }))
}

/// √(1+u) via the binomial series C(1/2, m).
pub fn jet_sqrt_unit(y: &Jet<ScalarExpr>) -> Jet<ScalarExpr> {
    unit_series(y, |m| {
        let mut c = GaussianRational::one();
        for k in 0..m {
            c = &c * &GaussianRational::frac(1 - 2 * k as i128, 2 * (k as i128 + 1));
        }
        c
    })
}

impl CollarGeometry {
    pub fn new(jet_order: usize) -> Result<Self, Error> {
        let h = h_jet(jet_order)?;
        let sqrt_h = jet_sqrt_unit(&h);
        let inv_h = jet_recip_unit(&h);

        // metric jets g_ab(x_n)
        let g: Vec<Vec<Jet<ScalarExpr>>> = (0..N)
            .map(|a| {
                (0..N)
                    .map(|b| match (a == b, a < N - 1) {
                        (false, _) => Jet::constant(ScalarExpr::zero(), jet_order),
                        (true, true) => inv_h.clone(),
                        (true, false) => Jet::constant(ScalarExpr::one(), jet_order),
                    })
                    .collect()
            })
            .collect();
        // only ∂_n of the metric survives at x0
        let dg = |l: usize, a: usize, b: usize| -> ScalarExpr {
            if l == N - 1 {
                g[a][b].derivative().expect("jet order >= 1").v0().clone()
            } else {
                ScalarExpr::zero()
            }
        };
        let ginv0 = |k: usize, l: usize| if k == l { g[k][k].v0().try_inverse().expect("unit") } else { ScalarExpr::zero() };

        let half = GaussianRational::frac(1, 2);
        let mut christoffel = vec![vec![vec![ScalarExpr::zero(); N]; N]; N];
        for (k, ck) in christoffel.iter_mut().enumerate() {
            for i in 0..N {
                for j in 0..N {
                    let mut acc = ScalarExpr::zero();
                    for l in 0..N {
                        let gi = ginv0(k, l);
                        if gi.is_zero() {
                            continue;
                        }
                        let s = dg(i, j, l).add(&dg(j, i, l)).sub(&dg(l, i, j));
                        acc.add_assign(&gi.mul(&s));
                    }
                    ck[i][j] = acc.scale(&half);
                }
            }
        }
        let christoffel_contracted = (0..N)
            .map(|k| {
                let mut acc = ScalarExpr::zero();
                for i in 0..N {
                    for j in 0..N {
                        acc.add_assign(&ginv0(i, j).mul(&christoffel[k][i][j]));
                    }
                }
                acc
            })
            .collect();

        // frame ẽ_a = E_a^i ∂_i with E = diag(√h, …, √h, 1); at x0 E = id and the
        // metric is δ, so ω_{s,t}(ẽ_a) = ∂_a(E_t^s) + Γ^s_{a t}.
        let frame = |t: usize| if t < N - 1 { sqrt_h.clone() } else { Jet::constant(ScalarExpr::one(), jet_order) };
        let mut frame_connection = vec![vec![vec![ScalarExpr::zero(); N]; N]; N];
        for (a, wa) in frame_connection.iter_mut().enumerate() {
            for s in 0..N {
                for t in 0..N {
                    let mut v = christoffel[s][a][t].clone();
                    if a == N - 1 && s == t {
                        v.add_assign(frame(t).derivative().expect("jet order >= 1").v0());
                    }
                    wa[s][t] = v;
                }
            }
        }
        // K = Σ_{i<n} ⟨∇_{ẽ_i} ẽ_n, ẽ_i⟩
        let mut mean_curvature = ScalarExpr::zero();
        for i in 0..N - 1 {
            mean_curvature.add_assign(&frame_connection[i][i][N - 1]);
        }

        Ok(CollarGeometry { jet_order, h, sqrt_h, christoffel, christoffel_contracted, frame_connection, mean_curvature })
    }

    /// Γ^k for k = 1..=6.
    pub fn gamma_contracted(&self, k: usize) -> &ScalarExpr {
        &self.christoffel_contracted[k - 1]
    }

    /// ω_{s,t}(ẽ_l), 1-based.
    pub fn omega(&self, l: usize, s: usize, t: usize) -> &ScalarExpr {
        &self.frame_connection[l - 1][s - 1][t - 1]
    }

    /// δ^l = −¼ Σ_{s,t} ω_{s,t}(ẽ_l) c(ẽ_s)c(ẽ_t): the spin-connection term
    /// attached to ẽ_l.
    pub fn delta(&self, rep: &CliffordRep, l: usize) -> Result<EndoElement, Error> {
        Ok(self.quadratic_connection(rep, l, false)?.scale(&GaussianRational::frac(-1, 4)))
    }

    /// Σ_l c(ẽ_l) δ^l, the spin part of σ₀ (both families).
    pub fn spin_sigma0(&self, rep: &CliffordRep) -> Result<EndoElement, Error> {
        let mut acc = EndoElement::zero();
        for l in 1..=N {
            acc = acc.add(&EndoElement::clifford(rep.c(l)).mul(&self.delta(rep, l)?)?)?;
        }
        Ok(acc)
    }

    /// p = ¼ Σ_l c(ẽ_l) Σ_{s,t} ω_{s,t}(ẽ_l) ĉ(ẽ_s)ĉ(ẽ_t) (exterior only).
    pub fn p_term(&self, rep: &CliffordRep) -> Result<EndoElement, Error> {
        let mut acc = EndoElement::zero();
        for l in 1..=N {
            let inner = self.quadratic_connection(rep, l, true)?;
            acc = acc.add(&EndoElement::clifford(rep.c(l)).mul(&inner)?)?;
        }
        Ok(acc.scale(&GaussianRational::frac(1, 4)))
    }

    fn quadratic_connection(&self, rep: &CliffordRep, l: usize, hat: bool) -> Result<EndoElement, Error> {
        let mut acc = EndoElement::zero();
        for s in 1..=N {
            for t in 1..=N {
                let w = self.omega(l, s, t);
                if w.is_zero() {
                    continue;
                }
                let (ms, mt) = if hat { (rep.chat(s)?, rep.chat(t)?) } else { (rep.c(s), rep.c(t)) };
                let m = EndoElement::clifford(&ms.mul(mt)?).scale_expr(w);
                acc = acc.add(&m)?;
            }
        }
        Ok(acc)
    }
}
