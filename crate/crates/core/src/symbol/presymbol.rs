use std::collections::BTreeMap;
use std::fmt;

use super::geometry::CollarGeometry;
use super::restricted::{RKey, RestrictedSymbol};
use crate::endo::EndoElement;
use crate::scalar::{binomial, GaussianRational, Jet, Param, ScalarExpr};
use crate::Error;

/// Monomial ξ^xi · s^s · ξ_n^xn · Q^q with s = |ξ'|² and Q = h(x_n)s + ξ_n².
///
/// `q` is signed; negative powers are denominators. Products add exponents,
/// so common powers of Q cancel without any gcd step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SymKey {
    pub xi: [u8; 5],
    pub s: u8,
    pub xn: u8,
    pub q: i8,
}

impl SymKey {
    pub const ONE: SymKey = SymKey { xi: [0; 5], s: 0, xn: 0, q: 0 };

    pub fn xi(i: usize) -> SymKey {
        let mut k = SymKey::ONE;
        k.xi[i - 1] = 1;
        k
    }

    pub fn xn(p: u8) -> SymKey {
        SymKey { xn: p, ..SymKey::ONE }
    }

    pub fn q_pow(q: i8) -> SymKey {
        SymKey { q, ..SymKey::ONE }
    }

    pub fn degree(&self) -> i32 {
        self.xi.iter().map(|&e| e as i32).sum::<i32>() + 2 * self.s as i32 + self.xn as i32 + 2 * self.q as i32
    }

    pub fn mul(&self, o: &SymKey) -> SymKey {
        let mut xi = self.xi;
        for (a, b) in xi.iter_mut().zip(o.xi) {
            *a += b;
        }
        SymKey { xi, s: self.s + o.s, xn: self.xn + o.xn, q: self.q + o.q }
    }
}

/// Differentiation variables: ξ_1..ξ_5, ξ_n, x_1..x_5, x_n.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Xi(usize),
    XiN,
    X(usize),
    Xn,
}

/// A symbol at the collar point, homogeneous of degree `order` in ξ, with
/// x_n-jets of exact EndoElement coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct PreSymbol {
    order: i32,
    terms: BTreeMap<SymKey, Jet<EndoElement>>,
}

fn jet_scale_expr(j: &Jet<EndoElement>, s: &Jet<ScalarExpr>) -> Jet<EndoElement> {
    j.mul_with(s, |e, x| e.scale_expr(x))
}

/// Total x_j-derivative of a coefficient jet; f is the only tangentially
/// varying quantity, and any f-dependence pins the result to x0.
fn coeff_x_derivative(c: &Jet<EndoElement>, axis: u8) -> Result<Jet<EndoElement>, Error> {
    let df0 = c.v0().try_map_entries(|v| v.laurent_f_derivative(axis))?;
    let mut f_dependent = !df0.is_zero();
    for d in &c.derivatives()[1..] {
        if f_dependent {
            break;
        }
        f_dependent = !d.try_map_entries(|v| v.laurent_f_derivative(axis))?.is_zero();
    }
    if axis < 6 {
        return Ok(Jet::at_point(df0));
    }
    if !f_dependent {
        return c.derivative();
    }
    Ok(Jet::at_point(c.v1()?.add(&df0)?))
}

impl PreSymbol {
    pub fn zero(order: i32) -> Self {
        PreSymbol { order, terms: BTreeMap::new() }
    }

    pub fn monomial(key: SymKey, coeff: Jet<EndoElement>) -> Self {
        let mut p = PreSymbol::zero(key.degree());
        p.insert(key, coeff);
        p
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymKey, &Jet<EndoElement>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest jet order carried by any coefficient.
    pub fn jet_order(&self) -> usize {
        self.terms.values().map(Jet::order).min().unwrap_or(usize::MAX)
    }

    fn insert(&mut self, key: SymKey, c: Jet<EndoElement>) {
        debug_assert_eq!(key.degree(), self.order, "inhomogeneous term {key:?}");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.order != o.order {
            return Err(Error::EngineBug(format!("adding symbols of orders {} and {}", self.order, o.order)));
        }
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PreSymbol { order: self.order, terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = PreSymbol::zero(self.order);
        for (k, v) in &self.terms {
            out.insert(*k, v.scale(c));
        }
        out
    }

    /// Multiplication by a central scalar (f, df_j, h1, …), constant in x_n.
    pub fn scale_expr(&self, e: &ScalarExpr) -> Self {
        let mut out = PreSymbol::zero(self.order);
        for (k, v) in &self.terms {
            out.insert(*k, v.map(|x| x.scale_expr(e)));
        }
        out
    }

    pub fn scale_jet(&self, e: &Jet<ScalarExpr>) -> Self {
        let mut out = PreSymbol::zero(self.order);
        for (k, v) in &self.terms {
            out.insert(*k, jet_scale_expr(v, e));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        let mut out = PreSymbol::zero(self.order + o.order);
        for (ka, a) in &self.terms {
            for (kb, b) in &o.terms {
                let prod = a.try_mul_with(b)?;
                out.insert(ka.mul(kb), prod);
            }
        }
        Ok(out)
    }

    /// Drops all x_n-derivative information (value at x0 only).
    pub fn at_point(&self) -> Self {
        PreSymbol { order: self.order, terms: self.terms.iter().map(|(k, c)| (*k, c.truncate(0))).collect() }
    }

    pub fn derivative(&self, var: Var, geom: &CollarGeometry) -> Result<Self, Error> {
        match var {
            Var::Xi(i) => self.d_xi(i, geom),
            Var::XiN => self.d_xin(),
            Var::X(j) => self.d_x(j as u8),
            Var::Xn => self.d_xn(geom),
        }
    }

    /// Repeated application; `Var::X`/`Var::Xn` beyond the supported jet
    /// budget fail with an explicit error.
    pub fn derivative_n(&self, var: Var, n: usize, geom: &CollarGeometry) -> Result<Self, Error> {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative(var, geom)?;
        }
        Ok(p)
    }

    fn d_xi(&self, i: usize, geom: &CollarGeometry) -> Result<Self, Error> {
        assert!((1..=5).contains(&i), "tangential ξ index {i}");
        let ix = i - 1;
        let two_h = geom.h.scale(&GaussianRational::int(2));
        let mut out = PreSymbol::zero(self.order - 1);
        for (k, c) in &self.terms {
            if k.xi[ix] > 0 {
                let mut nk = *k;
                nk.xi[ix] -= 1;
                out.insert(nk, c.scale(&GaussianRational::int(k.xi[ix] as i128)));
            }
            if k.s > 0 {
                let mut nk = *k;
                nk.s -= 1;
                nk.xi[ix] += 1;
                out.insert(nk, c.scale(&GaussianRational::int(2 * k.s as i128)));
            }
            if k.q != 0 {
                // ∂_{ξ_i} Q = 2 h ξ_i
                let mut nk = *k;
                nk.q -= 1;
                nk.xi[ix] += 1;
                out.insert(nk, jet_scale_expr(c, &two_h).scale(&GaussianRational::int(k.q as i128)));
            }
        }
        Ok(out)
    }

    fn d_xin(&self) -> Result<Self, Error> {
        let mut out = PreSymbol::zero(self.order - 1);
        for (k, c) in &self.terms {
            if k.xn > 0 {
                out.insert(SymKey { xn: k.xn - 1, ..*k }, c.scale(&GaussianRational::int(k.xn as i128)));
            }
            if k.q != 0 {
                out.insert(SymKey { xn: k.xn + 1, q: k.q - 1, ..*k }, c.scale(&GaussianRational::int(2 * k.q as i128)));
            }
        }
        Ok(out)
    }

    fn d_xn(&self, geom: &CollarGeometry) -> Result<Self, Error> {
        let dh = geom.h.derivative()?;
        let mut out = PreSymbol::zero(self.order);
        for (k, c) in &self.terms {
            out.insert(*k, coeff_x_derivative(c, 6)?);
            if k.q != 0 {
                // ∂_{x_n} Q = h'(x_n) s
                let nk = SymKey { s: k.s + 1, q: k.q - 1, ..*k };
                out.insert(nk, jet_scale_expr(c, &dh).scale(&GaussianRational::int(k.q as i128)));
            }
        }
        Ok(out)
    }

    fn d_x(&self, j: u8) -> Result<Self, Error> {
        assert!((1..=5).contains(&j), "tangential x index {j}");
        let mut out = PreSymbol::zero(self.order);
        for (k, c) in &self.terms {
            out.insert(*k, coeff_x_derivative(c, j)?);
        }
        Ok(out)
    }

    /// |ξ'| = 1, x_n = 0, Q ↦ (ξ_n − i)(ξ_n + i).
    pub fn restrict(&self) -> Result<RestrictedSymbol, Error> {
        let mut out = RestrictedSymbol::zero(self.order);
        for (k, c) in &self.terms {
            let v = c.v0();
            if v.terms().any(|(_, m)| m.entries().any(|(_, _, e)| e.contains(Param::SNorm))) {
                return Err(Error::ResidualSnorm);
            }
            if k.q <= 0 {
                let q = (-k.q) as u32;
                out.add_term(RKey { xi: k.xi, a: q, b: q }, k.xn as u32, v.clone());
            } else {
                // numerator (1 + ξ_n²)^q
                let q = k.q as i64;
                for t in 0..=q {
                    let c = GaussianRational::int(binomial(q, t));
                    out.add_term(RKey { xi: k.xi, a: 0, b: 0 }, k.xn as u32 + 2 * t as u32, v.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// Exact value at x0 and a rational covector (ξ_1..ξ_5, ξ_n).
    pub fn eval_at(&self, xi: &[GaussianRational; 6]) -> Result<EndoElement, Error> {
        let mut s = GaussianRational::zero();
        for x in &xi[..5] {
            s += &(x * x);
        }
        let q = &s + &(&xi[5] * &xi[5]);
        let q_inv = q.inv().ok_or_else(|| Error::NotInvertible("|ξ|² = 0".into()))?;
        let mut acc = EndoElement::zero();
        for (k, c) in &self.terms {
            let mut w = s.pow(k.s as u32) * xi[5].pow(k.xn as u32);
            for (x, &e) in xi[..5].iter().zip(&k.xi) {
                w = w * x.pow(e as u32);
            }
            w = w * if k.q >= 0 { q.pow(k.q as u32) } else { q_inv.pow((-k.q) as u32) };
            acc = acc.add(&c.v0().scale(&w))?;
        }
        Ok(acc)
    }

    /// Canonical debug text: one line per monomial.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, c) in &self.terms {
            out.push_str(&format!("{k}:"));
            for (w, m) in c.v0().terms() {
                let word: Vec<String> = w.iter().map(|g| g.to_string()).collect();
                out.push_str(&format!(" [{}]{{nnz {}}}", word.join(" "), m.nnz()));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SymKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, e) in self.xi.iter().enumerate() {
            if *e > 0 {
                parts.push(if *e == 1 { format!("xi_{}", i + 1) } else { format!("xi_{}^{}", i + 1, e) });
            }
        }
        if self.s > 0 {
            parts.push(format!("snorm^{}", self.s));
        }
        if self.xn > 0 {
            parts.push(format!("xi_n^{}", self.xn));
        }
        if self.q != 0 {
            parts.push(format!("Q^{}", self.q));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

trait TryMulJet {
    fn try_mul_with(&self, o: &Self) -> Result<Jet<EndoElement>, Error>;
}

impl TryMulJet for Jet<EndoElement> {
    fn try_mul_with(&self, o: &Self) -> Result<Jet<EndoElement>, Error> {
        let n = self.order().min(o.order()) + 1;
        let a = self.derivatives();
        let b = o.derivatives();
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = EndoElement::zero();
            for i in 0..=k {
                let p = a[i].mul(&b[k - i])?;
                let c = binomial(k as i64, i as i64);
                acc = acc.add(&if c == 1 { p } else { p.scale(&GaussianRational::int(c)) })?;
            }
            d.push(acc);
        }
        Ok(Jet::from_derivatives(d))
    }
}
