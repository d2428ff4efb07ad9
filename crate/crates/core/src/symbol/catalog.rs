//! Every symbol the boundary cases consume, for both operator families.
//!
//! σ₋₁, σ₋₂ belong to f·D⁻¹; p₃, p₂ to the f-conjugated triple product
//! D*f·Df⁻¹·D*f; q₋₃, q₋₄ to its parametrix. q₋₄ is produced by the
//! inverse-symbol recursion; the closed form is kept alongside as a check.

use std::fmt;
use std::str::FromStr;

use super::geometry::CollarGeometry;
use super::presymbol::{PreSymbol, SymKey, Var};
use crate::clifford::{CliffordRep, RepKind};
use crate::endo::{EndoElement, FGenerator, GenKind};
use crate::scalar::{GaussianRational, Jet, Param, ScalarExpr};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Family {
    Dirac,
    Signature,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Dirac, Family::Signature];

    pub fn rep_kind(self) -> RepKind {
        match self {
            Family::Dirac => RepKind::Spin,
            Family::Signature => RepKind::Exterior,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Dirac => "dirac",
            Family::Signature => "signature",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dirac" => Ok(Family::Dirac),
            "signature" => Ok(Family::Signature),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// The order-0 building blocks of one family at x0.
#[derive(Clone, Debug)]
pub struct Blocks {
    /// Σ_l c(ẽ_l)δ^l
    pub spin: EndoElement,
    /// σ₀ of the operator whose inverse is the left factor (D̃_F resp. D̂_F)
    pub sigma0: EndoElement,
    /// G-term of σ₂ of the triple product
    pub named: Vec<(&'static str, EndoElement)>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub family: Family,
    pub rep: CliffordRep,
    pub geom: CollarGeometry,
    pub blocks: Blocks,
    pub c_xi: PreSymbol,
    pub q: PreSymbol,
    pub sigma_m1: PreSymbol,
    pub sigma_m2: PreSymbol,
    pub sigma2: PreSymbol,
    pub p3: PreSymbol,
    pub p2: PreSymbol,
    pub q_m3: PreSymbol,
    pub q_m4: PreSymbol,
}

fn gamma(rep: &CliffordRep, j: usize) -> EndoElement {
    EndoElement::clifford(rep.c(j))
}

fn gen_sum(rep: &CliffordRep, kind: GenKind, hat: bool) -> Result<EndoElement, Error> {
    let mut acc = EndoElement::zero();
    for j in 1..=6 {
        let m = if hat { rep.chat(j)? } else { rep.c(j) };
        acc = acc.add(&EndoElement::clifford_gen(m, FGenerator::new(kind, j as u8)))?;
    }
    Ok(acc)
}

fn h1(c: GaussianRational) -> ScalarExpr {
    ScalarExpr::param(Param::H1).scale(&c)
}

fn f_pow(k: i32) -> ScalarExpr {
    ScalarExpr::param_pow(Param::F, k)
}

fn at(e: EndoElement) -> Jet<EndoElement> {
    Jet::at_point(e)
}

/// Builds c(ξ), Q and the order-0 blocks; shared by the catalog and tests.
pub struct Builder {
    pub rep: CliffordRep,
    pub geom: CollarGeometry,
}

impl Builder {
    pub fn new(rep: CliffordRep, jet_order: usize) -> Result<Self, Error> {
        Ok(Builder { rep, geom: CollarGeometry::new(jet_order)? })
    }

    pub fn jet_order(&self) -> usize {
        self.geom.jet_order
    }

    /// c(ξ) = Σ_{i<n} ξ_i √h γ_i + ξ_n γ_n with full x_n-jets.
    pub fn c_xi(&self) -> Result<PreSymbol, Error> {
        let mut p = PreSymbol::zero(1);
        for i in 1..=5 {
            let coeff = Jet::constant(gamma(&self.rep, i), self.jet_order()).mul_with(&self.geom.sqrt_h, |e, s| e.scale_expr(s));
            p = p.add(&PreSymbol::monomial(SymKey::xi(i), coeff))?;
        }
        p.add(&PreSymbol::monomial(SymKey::xn(1), Jet::constant(gamma(&self.rep, 6), self.jet_order())))
    }

    pub fn q_power(&self, k: i8) -> PreSymbol {
        PreSymbol::monomial(SymKey::q_pow(k), Jet::constant(EndoElement::identity(self.rep.rep_dim), self.jet_order()))
    }

    pub fn constant(&self, e: EndoElement) -> PreSymbol {
        PreSymbol::monomial(SymKey::ONE, at(e))
    }

    /// c(dx_j) at x0.
    pub fn c_dx(&self, j: usize) -> EndoElement {
        gamma(&self.rep, j)
    }

    /// c(df) = Σ_j ∂_j f · c(dx_j).
    pub fn c_df(&self) -> EndoElement {
        let mut acc = EndoElement::zero();
        for j in 1..=6u8 {
            acc = acc.add(&gamma(&self.rep, j as usize).scale_expr(&ScalarExpr::param(Param::Df(j)))).expect("same rep");
        }
        acc
    }

    fn x_var(j: usize) -> Var {
        if j == 6 {
            Var::Xn
        } else {
            Var::X(j)
        }
    }

    /// ξ_j as a symbol (ξ_6 = ξ_n).
    pub fn xi_j(&self, j: usize) -> PreSymbol {
        let key = if j == 6 { SymKey::xn(1) } else { SymKey::xi(j) };
        PreSymbol::monomial(key, at(EndoElement::identity(self.rep.rep_dim)))
    }

    /// c(ξ)σ₀c(ξ)/|ξ|⁴ + c(ξ)/|ξ|⁶ Σ_j c(dx_j)[∂_j c(ξ)|ξ|² − c(ξ)∂_j|ξ|²].
    pub fn sigma_m2(&self, sigma0: &EndoElement) -> Result<PreSymbol, Error> {
        let c = self.c_xi()?;
        let q = self.q_power(1);
        let mut out = c.mul(&self.constant(sigma0.clone()))?.mul(&c)?.mul(&self.q_power(-2))?.at_point();
        let mut sum = PreSymbol::zero(2);
        for j in 1..=6 {
            let dc = c.derivative(Self::x_var(j), &self.geom)?;
            let dq = q.derivative(Self::x_var(j), &self.geom)?;
            let bracket = dc.mul(&q)?.sub(&c.mul(&dq)?)?;
            sum = sum.add(&self.constant(self.c_dx(j)).mul(&bracket)?)?;
        }
        out = out.add(&c.mul(&self.q_power(-3))?.mul(&sum)?.at_point())?;
        Ok(out)
    }

    /// G = c(ξ) Σ_k (4δ^k − 2Γ^k) ξ_k − ¼|ξ|² h'(0) c(dx_n).
    pub fn g_term(&self) -> Result<PreSymbol, Error> {
        let mut inner = PreSymbol::zero(1);
        let id = EndoElement::identity(self.rep.rep_dim);
        for k in 1..=6 {
            let coeff = self
                .geom
                .delta(&self.rep, k)?
                .scale(&GaussianRational::int(4))
                .add(&id.scale_expr(self.geom.gamma_contracted(k)).scale(&GaussianRational::int(-2)))?;
            inner = inner.add(&self.xi_j(k).mul(&self.constant(coeff))?)?;
        }
        let c = self.c_xi()?.at_point();
        let tail = self.q_power(1).mul(&self.constant(self.c_dx(6).scale_expr(&h1(GaussianRational::frac(-1, 4)))))?;
        c.mul(&inner)?.add(&tail.at_point())
    }
}

impl Catalog {
    pub fn build(family: Family, jet_order: usize) -> Result<Self, Error> {
        Self::build_with_rep(family, CliffordRep::build(family.rep_kind()), jet_order)
    }

    /// Same catalog on a caller-supplied representation (e.g. a permuted spin
    /// construction).
    pub fn build_with_rep(family: Family, rep: CliffordRep, jet_order: usize) -> Result<Self, Error> {
        if rep.kind != family.rep_kind() {
            return Err(Error::RepMismatch);
        }
        let b = Builder::new(rep, jet_order)?;
        let spin = b.geom.spin_sigma0(&b.rep)?;
        let c = b.c_xi()?;
        let q = b.q_power(1);
        let g = b.g_term()?;

        let (sigma0, sigma2, named) = match family {
            Family::Dirac => {
                let sf = gen_sum(&b.rep, GenKind::SigmaF, false)?;
                let ca = gen_sum(&b.rep, GenKind::A, false)?;
                let ca_star = gen_sum(&b.rep, GenKind::AStar, false)?;
                let mu = sf.add(&ca)?;
                let lambda = sf.add(&ca_star.neg())?;
                let sigma0 = spin.add(&mu)?;
                let ca_sym = b.constant(ca.clone());
                // G + λ|ξ|² − 2c(ξ)c(A)c(ξ) − 2|ξ|²c(A*)
                let sigma2 = g
                    .add(&q.mul(&b.constant(lambda.clone()))?)?
                    .sub(&c.mul(&ca_sym)?.mul(&c)?.scale(&GaussianRational::int(2)).at_point())?
                    .sub(&q.mul(&b.constant(ca_star.scale(&GaussianRational::int(2))))?.at_point())?
                    .at_point();
                (sigma0, sigma2, vec![("mu", mu), ("lambda", lambda), ("c(A)", ca), ("c(A*)", ca_star)])
            }
            Family::Signature => {
                let p = b.geom.p_term(&b.rep)?;
                let sfe = gen_sum(&b.rep, GenKind::SigmaFe, false)?;
                let chat_w = gen_sum(&b.rep, GenKind::Omega, true)?;
                let chat_ws = gen_sum(&b.rep, GenKind::OmegaStar, true)?;
                let half = GaussianRational::frac(-1, 2);
                let theta = spin.add(&p)?;
                let vartheta = sfe.add(&chat_w.scale(&half))?;
                let vartheta_star = sfe.add(&chat_ws.scale(&half))?;
                let sigma0 = theta.add(&vartheta)?;
                // G + |ξ|²(p + ϑ* − ĉ(ω*)) + c(ξ)ĉ(ω)c(ξ)
                let inner = p.add(&vartheta_star)?.add(&chat_ws.neg())?;
                let sigma2 = g
                    .add(&q.mul(&b.constant(inner))?)?
                    .add(&c.mul(&b.constant(chat_w.clone()))?.mul(&c)?)?
                    .at_point();
                (
                    sigma0,
                    sigma2,
                    vec![("p", p), ("theta", theta), ("vartheta", vartheta), ("vartheta*", vartheta_star), ("chat(omega)", chat_w), ("chat(omega*)", chat_ws)],
                )
            }
        };

        let i = GaussianRational::i();
        let sigma_m1 = c.mul(&b.q_power(-1))?.scale(&i);
        let sigma_m2 = b.sigma_m2(&sigma0)?;

        let p3 = c.mul(&q)?.scale(&i).scale_expr(&f_pow(1));
        let p2 = sigma2.scale_expr(&f_pow(1)).add(&q.mul(&b.constant(b.c_df().scale(&GaussianRational::int(2))))?.at_point())?;
        let q_m3 = c.mul(&b.q_power(-2))?.scale(&i).scale_expr(&f_pow(-1));
        let q_m4 = inverse_recursion_m4(&b, &p3, &p2, &q_m3)?;

        Ok(Catalog {
            family,
            blocks: Blocks { spin, sigma0, named },
            c_xi: c,
            q,
            sigma_m1,
            sigma_m2,
            sigma2,
            p3,
            p2,
            q_m3,
            q_m4,
            rep: b.rep,
            geom: b.geom,
        })
    }

    pub fn builder(&self) -> Builder {
        Builder { rep: self.rep.clone(), geom: self.geom.clone() }
    }

    /// f·σ_r(D⁻¹), r ∈ {−1, −2}.
    pub fn left(&self, r: i32) -> Result<PreSymbol, Error> {
        let s = match r {
            -1 => &self.sigma_m1,
            -2 => &self.sigma_m2,
            _ => return Err(Error::OutOfRange(format!("no left symbol of order {r}"))),
        };
        Ok(s.scale_expr(&f_pow(1)))
    }

    /// q_l of the triple-product parametrix, l ∈ {−3, −4}.
    pub fn right(&self, l: i32) -> Result<&PreSymbol, Error> {
        match l {
            -3 => Ok(&self.q_m3),
            -4 => Ok(&self.q_m4),
            _ => Err(Error::OutOfRange(format!("no right symbol of order {l}"))),
        }
    }

    /// Closed form f⁻¹σ₋₄ + 2c(ξ)c(df)c(ξ)/(f²|ξ|⁶)
    /// + i c(ξ)Σ_j[c(dx_j)|ξ|² + 2ξ_j c(ξ)] D_{x_j}(f⁻¹) c(ξ)/|ξ|⁸.
    pub fn q_m4_closed_form(&self) -> Result<PreSymbol, Error> {
        let b = self.builder();
        let c = &self.c_xi;
        let q = &self.q;
        let i = GaussianRational::i();
        let mut sum_dc = PreSymbol::zero(4);
        let mut sum_df = PreSymbol::zero(3);
        for j in 1..=6 {
            let left = q.mul(&b.constant(b.c_dx(j)))?.add(&b.xi_j(j).mul(c)?.scale(&GaussianRational::int(2)))?;
            let var = Builder::x_var(j);
            let right = c
                .derivative(var, &self.geom)?
                .mul(q)?
                .sub(&c.mul(&q.derivative(var, &self.geom)?)?.scale(&GaussianRational::int(2)))?;
            sum_dc = sum_dc.add(&left.mul(&right)?.at_point())?;
            // D_{x_j}(f⁻¹) = −i ∂_j(f⁻¹) = i f⁻² ∂_j f
            let d_finv = f_pow(-2).mul(&ScalarExpr::param(Param::Df(j as u8))).scale(&i);
            sum_df = sum_df.add(&left.scale_expr(&d_finv).at_point())?;
        }
        let sigma_m4 = c
            .mul(&self.sigma2)?
            .mul(c)?
            .mul(&b.q_power(-4))?
            .add(&c.mul(&b.q_power(-5))?.mul(&sum_dc)?)?
            .at_point();
        let t1 = sigma_m4.scale_expr(&f_pow(-1));
        let t2 = c.mul(&b.constant(b.c_df()))?.mul(c)?.mul(&b.q_power(-3))?.scale_expr(&f_pow(-2)).scale(&GaussianRational::int(2));
        let t3 = c.mul(&sum_df)?.mul(c)?.mul(&b.q_power(-4))?.scale(&i);
        t1.add(&t2.at_point())?.add(&t3.at_point())
    }
}

/// q₋₄ = −p₃⁻¹[p₂p₃⁻¹ + Σ_j ∂_{ξ_j}p₃ · D_{x_j}(p₃⁻¹)], D_x = −i∂_x, with
/// p₃⁻¹ = q₋₃ supplied exactly.
pub fn inverse_recursion_m4(b: &Builder, p3: &PreSymbol, p2: &PreSymbol, q_m3: &PreSymbol) -> Result<PreSymbol, Error> {
    let minus_i = GaussianRational::complex((0, 1), (-1, 1));
    let mut bracket = p2.mul(q_m3)?.at_point();
    for j in 1..=6 {
        let dxi = if j == 6 { Var::XiN } else { Var::Xi(j) };
        let dp3 = p3.derivative(dxi, &b.geom)?;
        let dq = q_m3.derivative(Builder::x_var(j), &b.geom)?.scale(&minus_i);
        bracket = bracket.add(&dp3.mul(&dq)?.at_point())?;
    }
    Ok(q_m3.mul(&bracket)?.neg().at_point())
}

/// p₃⁻¹ for p₃ = κ·c(ξ)·|ξ|^{2k} with κ an invertible scalar: c(ξ)⁻¹ = −c(ξ)/|ξ|².
pub fn invert_leading(b: &Builder, kappa: &ScalarExpr, k: i8) -> Result<PreSymbol, Error> {
    let inv = kappa.try_inverse()?;
    Ok(b.c_xi()?.mul(&b.q_power(-(k + 1)))?.scale_expr(&inv).neg())
}
