use std::collections::BTreeMap;

use crate::endo::EndoElement;
use crate::scalar::{GaussianRational, Ring};

/// ξ'-monomial and pole orders of one restricted term:
/// ξ^xi · P(ξ_n) / ((ξ_n − i)^a (ξ_n + i)^b).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RKey {
    pub xi: [u8; 5],
    pub a: u32,
    pub b: u32,
}

/// A symbol at x0 with |ξ'| = 1: a sum of ξ'-monomials times rational
/// functions of ξ_n whose only poles are ±i.
#[derive(Clone, PartialEq, Debug)]
pub struct RestrictedSymbol<T = EndoElement> {
    order: i32,
    terms: BTreeMap<RKey, BTreeMap<u32, T>>,
}

impl<T: Ring> RestrictedSymbol<T> {
    pub fn zero(order: i32) -> Self {
        RestrictedSymbol { order, terms: BTreeMap::new() }
    }

    /// Homogeneity degree of the symbol before restriction (kept for audit).
    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RKey, &BTreeMap<u32, T>)> {
        self.terms.iter()
    }

    /// Every (key, ξ_n-power, coefficient) triple.
    pub fn monomials(&self) -> impl Iterator<Item = (&RKey, u32, &T)> {
        self.terms.iter().flat_map(|(k, p)| p.iter().map(move |(e, c)| (k, *e, c)))
    }

    pub fn add_term(&mut self, key: RKey, xn_pow: u32, c: T) {
        if c.is_zero() {
            return;
        }
        let poly = self.terms.entry(key).or_default();
        match poly.get_mut(&xn_pow) {
            Some(e) => {
                e.plus_assign(&c);
                if e.is_zero() {
                    poly.remove(&xn_pow);
                }
            }
            None => {
                poly.insert(xn_pow, c);
            }
        }
        if poly.is_empty() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, p, c) in o.monomials() {
            out.add_term(*k, p, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(T::negate)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|v| v.scaled(c))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> RestrictedSymbol<U> {
        let mut out = RestrictedSymbol::zero(self.order);
        for (k, p, c) in self.monomials() {
            out.add_term(*k, p, f(c));
        }
        out
    }

    /// Decay condition: numerator degree below the total pole order.
    pub fn is_decaying(&self) -> bool {
        self.monomials().all(|(k, p, _)| p < k.a + k.b)
    }

    /// ∂_{ξ_n}.
    pub fn d_xin(&self) -> Self {
        let mut out = RestrictedSymbol::zero(self.order - 1);
        for (k, p, c) in self.monomials() {
            if p > 0 {
                out.add_term(*k, p - 1, c.scaled(&GaussianRational::int(p as i128)));
            }
            if k.a > 0 {
                out.add_term(RKey { a: k.a + 1, ..*k }, p, c.scaled(&GaussianRational::int(-(k.a as i128))));
            }
            if k.b > 0 {
                out.add_term(RKey { b: k.b + 1, ..*k }, p, c.scaled(&GaussianRational::int(-(k.b as i128))));
            }
        }
        out
    }

    pub fn d_xin_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.d_xin())
    }

    /// Exact value at a rational point of the unit sphere and a real ξ_n.
    pub fn eval_at(&self, xi: &[GaussianRational; 5], xn: &GaussianRational) -> Option<T> {
        let up = (xn - &GaussianRational::i()).inv()?;
        let lo = (xn + &GaussianRational::i()).inv()?;
        let mut acc = T::zero();
        for (k, p, c) in self.monomials() {
            let mut w = xn.pow(p) * up.pow(k.a) * lo.pow(k.b);
            for (x, &e) in xi.iter().zip(&k.xi) {
                w = w * x.pow(e as u32);
            }
            acc.plus_assign(&c.scaled(&w));
        }
        Some(acc)
    }
}
