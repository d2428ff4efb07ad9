//! π⁺, the real-line ξ_n integral and S⁴ moments.
//!
//! Everything goes through exact partial fractions with poles pinned at ±i;
//! residues are read off as the (ξ_n − i)⁻¹ coefficient.

use std::collections::{BTreeMap, HashMap};

use crate::endo::EndoElement;
use crate::scalar::{binomial, double_factorial, GaussianRational, Param, Rational, Ring, ScalarExpr};
use crate::symbol::{RKey, RestrictedSymbol};
use crate::Error;

/// Decomposition of P(ξ_n)/((ξ_n − i)^a (ξ_n + i)^b).
#[derive(Clone, PartialEq, Debug)]
pub struct PartialFractions<T = EndoElement> {
    /// k ↦ coefficient of (ξ_n − i)^{−k}
    pub upper: BTreeMap<u32, T>,
    /// k ↦ coefficient of (ξ_n + i)^{−k}
    pub lower: BTreeMap<u32, T>,
    /// polynomial part; empty for every decaying input
    pub poly: BTreeMap<u32, T>,
}

impl<T: Ring> PartialFractions<T> {
    /// Back to a restricted symbol over the ξ'-monomial `xi`.
    pub fn to_symbol(&self, xi: [u8; 5], order: i32) -> RestrictedSymbol<T> {
        let mut out = RestrictedSymbol::zero(order);
        for (&k, c) in &self.upper {
            out.add_term(RKey { xi, a: k, b: 0 }, 0, c.clone());
        }
        for (&k, c) in &self.lower {
            out.add_term(RKey { xi, a: 0, b: k }, 0, c.clone());
        }
        for (&k, c) in &self.poly {
            out.add_term(RKey { xi, a: 0, b: 0 }, k, c.clone());
        }
        out
    }
}

/// [u^r] (u + s)^{−b}
fn inv_pow_coeff(s: &GaussianRational, b: u32, r: u32) -> GaussianRational {
    if b == 0 {
        return if r == 0 { GaussianRational::one() } else { GaussianRational::zero() };
    }
    let c = binomial((b + r - 1) as i64, r as i64) * if r % 2 == 0 { 1 } else { -1 };
    let sinv = s.inv().expect("nonzero shift");
    sinv.pow(b + r) * GaussianRational::int(c)
}

/// Principal-part coefficients of ξ_n^p /((ξ_n − z)^a (ξ_n − w)^b) at ξ_n = z:
/// entry k−1 multiplies (ξ_n − z)^{−k}.
fn principal_part(p: u32, a: u32, b: u32, z: &GaussianRational, w: &GaussianRational) -> Vec<GaussianRational> {
    // u = ξ_n − z: ξ_n^p = (u + z)^p, (ξ_n − w)^{−b} = (u + (z − w))^{−b}
    let shift = z - w;
    (1..=a)
        .map(|k| {
            let need = a - k;
            let mut acc = GaussianRational::zero();
            for r in 0..=need {
                let m = need - r;
                if m > p {
                    continue;
                }
                let num = z.pow(p - m) * GaussianRational::int(binomial(p as i64, m as i64));
                acc += &(num * inv_pow_coeff(&shift, b, r));
            }
            acc
        })
        .collect()
}

/// Principal-part coefficients at +i and at −i.
pub type PoleParts = (Vec<GaussianRational>, Vec<GaussianRational>);

/// Scalar partial fractions of ξ_n^p/((ξ_n − i)^a (ξ_n + i)^b), memoized.
#[derive(Default, Debug)]
pub struct PfCache {
    table: HashMap<(u32, u32, u32), PoleParts>,
}

impl PfCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, p: u32, a: u32, b: u32) -> Result<&PoleParts, Error> {
        if p >= a + b {
            return Err(Error::NonDecaying);
        }
        Ok(self.table.entry((p, a, b)).or_insert_with(|| {
            let i = GaussianRational::i();
            let mi = -&i;
            (principal_part(p, a, b, &i, &mi), principal_part(p, b, a, &mi, &i))
        }))
    }

    /// ∫_ℝ ξ_n^p/((ξ_n − i)^a (ξ_n + i)^b) dξ_n divided by π, i.e. 2i·Res_{ξ_n=i}.
    pub fn line_integral_over_pi(&mut self, p: u32, a: u32, b: u32) -> Result<GaussianRational, Error> {
        if p + 2 > a + b {
            return Err(Error::InsufficientDecay);
        }
        let (up, _) = self.get(p, a, b)?;
        Ok(up.first().map_or_else(GaussianRational::zero, |r| r * &GaussianRational::complex((0, 1), (2, 1))))
    }
}

/// Partial fractions of one restricted term Σ_p c_p ξ_n^p / ((ξ_n − i)^a (ξ_n + i)^b).
pub fn partial_fractions<T: Ring>(key: &RKey, poly: &BTreeMap<u32, T>, cache: &mut PfCache) -> Result<PartialFractions<T>, Error> {
    let mut out = PartialFractions { upper: BTreeMap::new(), lower: BTreeMap::new(), poly: BTreeMap::new() };
    for (&p, c) in poly {
        let (up, lo) = cache.get(p, key.a, key.b)?;
        for (dst, coeffs) in [(&mut out.upper, up), (&mut out.lower, lo)] {
            for (k, w) in coeffs.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let e = dst.entry(k as u32 + 1).or_insert_with(T::zero);
                e.plus_assign(&c.scaled(w));
            }
        }
    }
    for m in [&mut out.upper, &mut out.lower] {
        m.retain(|_, v| !v.is_zero());
    }
    Ok(out)
}

fn project<T: Ring>(r: &RestrictedSymbol<T>, upper: bool) -> Result<RestrictedSymbol<T>, Error> {
    let mut cache = PfCache::new();
    let mut out = RestrictedSymbol::zero(r.order());
    for (key, poly) in r.terms() {
        let pf = partial_fractions(key, poly, &mut cache)?;
        let part = if upper { &pf.upper } else { &pf.lower };
        for (&k, c) in part {
            let rk = if upper { RKey { xi: key.xi, a: k, b: 0 } } else { RKey { xi: key.xi, a: 0, b: k } };
            out.add_term(rk, 0, c.clone());
        }
    }
    Ok(out)
}

/// Upper-half-plane principal parts.
pub fn pi_plus<T: Ring>(r: &RestrictedSymbol<T>) -> Result<RestrictedSymbol<T>, Error> {
    project(r, true)
}

pub fn pi_minus<T: Ring>(r: &RestrictedSymbol<T>) -> Result<RestrictedSymbol<T>, Error> {
    project(r, false)
}

/// ∫_ℝ r dξ_n per ξ'-monomial, as a multiple of π (the π itself is left to
/// the caller).
pub fn contour_integral_over_pi<T: Ring>(r: &RestrictedSymbol<T>) -> Result<BTreeMap<[u8; 5], T>, Error> {
    let mut cache = PfCache::new();
    let mut out: BTreeMap<[u8; 5], T> = BTreeMap::new();
    for (key, p, c) in r.monomials() {
        let w = cache.line_integral_over_pi(p, key.a, key.b)?;
        if w.is_zero() {
            continue;
        }
        out.entry(key.xi).or_insert_with(T::zero).plus_assign(&c.scaled(&w));
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// ∫_ℝ r dξ_n with the π parameter attached.
pub fn contour_integral(r: &RestrictedSymbol) -> Result<BTreeMap<[u8; 5], EndoElement>, Error> {
    let pi = ScalarExpr::param(Param::Pi);
    Ok(contour_integral_over_pi(r)?.into_iter().map(|(k, v)| (k, v.scale_expr(&pi))).collect())
}

/// ∫_{S⁴} ξ^a σ(ξ') as an exact multiple of Ω₄.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SphereMoment {
    pub exponents: [u8; 5],
    pub value: Rational,
}

pub fn sphere_moment(exponents: [u8; 5]) -> SphereMoment {
    let value = if exponents.iter().any(|e| e % 2 == 1) {
        Rational::from_integer(0)
    } else {
        // (d−2)!! ∏(2a_i − 1)!! / (d − 2 + 2|a|)!!, d = 5, exponents e_i = 2a_i
        let total: i64 = exponents.iter().map(|&e| e as i64).sum();
        let num: i128 = 3 * exponents.iter().map(|&e| double_factorial(e as i64 - 1)).product::<i128>();
        Rational::new(num, double_factorial(3 + total))
    };
    SphereMoment { exponents, value }
}

fn xi_sum(a: &[u8; 5], b: &[u8; 5]) -> [u8; 5] {
    let mut out = *a;
    for (x, y) in out.iter_mut().zip(b) {
        *x += y;
    }
    out
}

/// ∫_{|ξ'|=1}∫_ℝ trace[integrand] dξ_n σ(ξ'): the coefficient of dx'.
pub fn integrate_boundary(integrand: &RestrictedSymbol) -> Result<ScalarExpr, Error> {
    let mut acc = ScalarExpr::zero();
    for (xi, v) in contour_integral_over_pi(integrand)? {
        let m = sphere_moment(xi).value;
        if m == Rational::from_integer(0) {
            continue;
        }
        acc.add_assign(&v.trace().scale(&GaussianRational::real(m)));
    }
    Ok(acc.mul(&pi_omega4()))
}

pub fn pi_omega4() -> ScalarExpr {
    ScalarExpr::param(Param::Pi).mul(&ScalarExpr::param(Param::Omega4))
}

/// integrate_boundary(left·right) without forming the product: each pair of
/// monomials contributes weight·trace(c_l c_r), weights are folded into the
/// right factor first so only one trace is taken per left monomial.
pub fn integrate_boundary_product(left: &RestrictedSymbol, right: &RestrictedSymbol) -> Result<ScalarExpr, Error> {
    let mut cache = PfCache::new();
    let mut acc = ScalarExpr::zero();
    for (kl, pl, cl) in left.monomials() {
        let mut folded = EndoElement::zero();
        for (kr, pr, cr) in right.monomials() {
            let m = sphere_moment(xi_sum(&kl.xi, &kr.xi)).value;
            if m == Rational::from_integer(0) {
                continue;
            }
            let w = cache.line_integral_over_pi(pl + pr, kl.a + kr.a, kl.b + kr.b)?;
            if w.is_zero() {
                continue;
            }
            folded = folded.add(&cr.scale(&(w * GaussianRational::real(m))))?;
        }
        if !folded.is_zero() {
            acc.add_assign(&cl.trace_product(&folded)?);
        }
    }
    Ok(acc.mul(&pi_omega4()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type GR = GaussianRational;

    fn scalar_term(p: u32, a: u32, b: u32) -> RestrictedSymbol<GR> {
        let mut r = RestrictedSymbol::zero(p as i32 - a as i32 - b as i32);
        r.add_term(RKey { xi: [0; 5], a, b }, p, GR::one());
        r
    }

    #[test]
    fn simple_decompositions() {
        let mut cache = PfCache::new();
        let half_i_inv = GR::complex((0, 1), (-1, 2)); // 1/(2i)
        let (up, lo) = cache.get(0, 1, 1).unwrap().clone();
        assert_eq!(up, vec![half_i_inv.clone()]);
        assert_eq!(lo, vec![-&half_i_inv]);
        let (up, lo) = cache.get(1, 1, 1).unwrap().clone();
        assert_eq!(up, vec![GR::frac(1, 2)]);
        assert_eq!(lo, vec![GR::frac(1, 2)]);
        assert!(matches!(cache.get(2, 1, 1), Err(Error::NonDecaying)));
    }

    #[test]
    fn standard_line_integrals() {
        let mut cache = PfCache::new();
        assert_eq!(cache.line_integral_over_pi(0, 1, 1).unwrap(), GR::one());
        assert_eq!(cache.line_integral_over_pi(0, 2, 2).unwrap(), GR::frac(1, 2));
        assert_eq!(cache.line_integral_over_pi(0, 0, 3).unwrap(), GR::zero());
        assert!(matches!(cache.line_integral_over_pi(1, 1, 1), Err(Error::InsufficientDecay)));
    }

    #[test]
    fn pi_plus_of_lower_pole_vanishes() {
        assert!(pi_plus(&scalar_term(0, 0, 1)).unwrap().is_zero());
        let up = scalar_term(0, 3, 0);
        assert_eq!(pi_plus(&up).unwrap(), up);
    }

    #[test]
    fn moments() {
        assert_eq!(sphere_moment([1, 0, 0, 0, 0]).value, Rational::from_integer(0));
        assert_eq!(sphere_moment([0; 5]).value, Rational::from_integer(1));
        assert_eq!(sphere_moment([2, 0, 0, 0, 0]).value, Rational::new(1, 5));
        assert_eq!(sphere_moment([2, 2, 0, 0, 0]).value, Rational::new(1, 35));
        assert_eq!(sphere_moment([2, 2, 2, 0, 0]).value, Rational::new(1, 315));
        assert_eq!(sphere_moment([4, 0, 0, 0, 0]).value, Rational::new(3, 35));
    }

    #[test]
    fn reassembly_at_rational_points() {
        let mut cache = PfCache::new();
        let key = RKey { xi: [0; 5], a: 3, b: 2 };
        let mut poly = BTreeMap::new();
        poly.insert(0, GR::complex((1, 2), (3, 1)));
        poly.insert(2, GR::int(-4));
        poly.insert(4, GR::frac(5, 7));
        let mut sym = RestrictedSymbol::zero(-1);
        for (&p, c) in &poly {
            sym.add_term(key, p, c.clone());
        }
        let pf = partial_fractions(&key, &poly, &mut cache).unwrap();
        assert!(pf.poly.is_empty());
        let back = pf.to_symbol([0; 5], -1);
        for x in [GR::frac(1, 3), GR::int(-2), GR::frac(7, 5)] {
            assert_eq!(back.eval_at(&[GR::zero(), GR::zero(), GR::zero(), GR::zero(), GR::zero()], &x), sym.eval_at(&[GR::zero(), GR::zero(), GR::zero(), GR::zero(), GR::zero()], &x));
        }
    }
}
