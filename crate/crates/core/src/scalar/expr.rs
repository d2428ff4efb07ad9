use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{GaussianRational, Ring};
use crate::endo::FGenerator;
use crate::Error;

/// Formal scalar parameters. Declaration order is the canonical print order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Param {
    Pi,
    /// h'(0)
    H1,
    /// h''(0)
    H2,
    /// the conformal factor f at x0; the only parameter allowed negative powers
    F,
    /// ∂_{x_j} f at x0, j = 1..=6 (6 is the normal direction)
    Df(u8),
    /// volume of the unit 4-sphere
    Omega4,
    DimF,
    /// |ξ'|², eliminated by restriction
    SNorm,
}

impl Param {
    pub fn name(&self) -> String {
        match self {
            Param::Pi => "pi".into(),
            Param::H1 => "h1".into(),
            Param::H2 => "h2".into(),
            Param::F => "f".into(),
            Param::Df(6) => "df_n".into(),
            Param::Df(j) => format!("df_{j}"),
            Param::Omega4 => "Omega4".into(),
            Param::DimF => "dimF".into(),
            Param::SNorm => "snorm".into(),
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Some(match s {
            "pi" => Param::Pi,
            "h1" => Param::H1,
            "h2" => Param::H2,
            "f" => Param::F,
            "Omega4" => Param::Omega4,
            "dimF" => Param::DimF,
            "snorm" => Param::SNorm,
            "df_n" => Param::Df(6),
            _ => {
                let j: u8 = s.strip_prefix("df_")?.parse().ok()?;
                if !(1..=6).contains(&j) {
                    return None;
                }
                Param::Df(j)
            }
        })
    }
}

/// Formal trace `tr_F` of a nonempty word, normalized to its lexicographically
/// minimal cyclic rotation. No reversal or adjoint identifications.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TraceSymbol(Vec<FGenerator>);

impl TraceSymbol {
    /// `None` for the empty word (whose trace is `dimF`).
    pub fn normalize(word: &[FGenerator]) -> Option<TraceSymbol> {
        if word.is_empty() {
            return None;
        }
        let n = word.len();
        let best = (0..n)
            .map(|r| word[r..].iter().chain(word[..r].iter()).copied().collect::<Vec<_>>())
            .min()
            .expect("nonempty");
        Some(TraceSymbol(best))
    }

    pub fn word(&self) -> &[FGenerator] {
        &self.0
    }
}

impl fmt::Display for TraceSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Tr[")?;
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

/// Product of parameter powers and trace symbols. Both lists are sorted and
/// carry no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    params: Vec<(Param, i32)>,
    traces: Vec<(TraceSymbol, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.params.is_empty() && self.traces.is_empty()
    }

    pub fn params(&self) -> &[(Param, i32)] {
        &self.params
    }

    pub fn traces(&self) -> &[(TraceSymbol, u32)] {
        &self.traces
    }

    pub fn exponent(&self, p: Param) -> i32 {
        self.params.iter().find(|(q, _)| *q == p).map_or(0, |(_, e)| *e)
    }

    pub fn from_parts(params: Vec<(Param, i32)>, traces: Vec<(TraceSymbol, u32)>) -> Self {
        let mut m = Monomial::one();
        for (p, e) in params.into_iter().filter(|&(_, e)| e != 0) {
            m = m.mul(&Monomial { params: vec![(p, e)], traces: vec![] });
        }
        for (t, e) in traces.into_iter().filter(|&(_, e)| e != 0) {
            m = m.mul(&Monomial { params: vec![], traces: vec![(t, e)] });
        }
        m
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { params: merge(&self.params, &o.params), traces: merge_u(&self.traces, &o.traces) }
    }

    /// Same monomial with `p` removed.
    pub fn without(&self, p: Param) -> Monomial {
        Monomial { params: self.params.iter().filter(|(q, _)| *q != p).cloned().collect(), traces: self.traces.clone() }
    }

    pub(crate) fn with_exponent(&self, p: Param, e: i32) -> Monomial {
        let base = self.without(p);
        if e == 0 {
            return base;
        }
        base.mul(&Monomial { params: vec![(p, e)], traces: vec![] })
    }
}

fn merge(a: &[(Param, i32)], b: &[(Param, i32)]) -> Vec<(Param, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            let e = a[i].1 + b[j].1;
            if e != 0 {
                out.push((a[i].0, e));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn merge_u(a: &[(TraceSymbol, u32)], b: &[(TraceSymbol, u32)]) -> Vec<(TraceSymbol, u32)> {
    if b.is_empty() {
        return a.to_vec();
    }
    if a.is_empty() {
        return b.to_vec();
    }
    let mut map: BTreeMap<TraceSymbol, u32> = a.iter().cloned().collect();
    for (t, e) in b {
        *map.entry(t.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

/// Exact polynomial in the formal parameters and trace symbols with
/// Gaussian-rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i128) -> Self {
        Self::constant(GaussianRational::int(n))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ScalarExpr { terms }
    }

    pub fn param(p: Param) -> Self {
        Self::param_pow(p, 1)
    }

    /// `p^e`; panics if a negative power is requested for anything but `F`.
    pub fn param_pow(p: Param, e: i32) -> Self {
        assert!(e >= 0 || p == Param::F, "only f may carry a negative exponent, got {}^{}", p.name(), e);
        Self::term(GaussianRational::one(), Monomial::one().with_exponent(p, e))
    }

    pub fn trace_symbol(t: TraceSymbol) -> Self {
        Self::term(GaussianRational::one(), Monomial { params: vec![], traces: vec![(t, 1)] })
    }

    /// `tr_F(word)`: `dimF` for the empty word, otherwise the normalized trace symbol.
    pub fn trace_of_word(word: &[FGenerator]) -> Self {
        match TraceSymbol::normalize(word) {
            None => Self::param(Param::DimF),
            Some(t) => Self::trace_symbol(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut out = ScalarExpr::zero();
        for (m, c) in it {
            out.add_term(m, &c);
        }
        out
    }

    /// The value if this expression is a pure constant (including zero).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }

    pub fn add_assign(&mut self, o: &ScalarExpr) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = if mb.is_one() {
                    ma.clone()
                } else if ma.is_one() {
                    mb.clone()
                } else {
                    ma.mul(mb)
                };
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> ScalarExpr {
        if c.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> ScalarExpr {
        let mut acc = ScalarExpr::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse, available only for a single term whose
    /// monomial is a power of `f` (the only invertible parameter).
    pub fn try_inverse(&self) -> Result<ScalarExpr, Error> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        if !m.traces.is_empty() || m.params.iter().any(|(p, _)| *p != Param::F) {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let e = m.exponent(Param::F);
        let inv = c.inv().ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        Ok(ScalarExpr::term(inv, Monomial::one().with_exponent(Param::F, -e)))
    }

    /// True if any term involves `p`.
    pub fn contains(&self, p: Param) -> bool {
        self.terms.keys().any(|m| m.exponent(p) != 0)
    }

    pub fn contains_df(&self) -> bool {
        self.terms.keys().any(|m| m.params.iter().any(|(p, _)| matches!(p, Param::Df(_))))
    }

    pub fn trace_symbols(&self) -> impl Iterator<Item = &TraceSymbol> {
        self.terms.keys().flat_map(|m| m.traces.iter().map(|(t, _)| t))
    }

    /// ∂_{x_j} treating `f` as the only x-dependent parameter:
    /// ∂_j(f^k) = k f^{k-1} df_j. A `df` already present would need a second
    /// derivative of `f`, which is deliberately unrepresentable.
    pub fn laurent_f_derivative(&self, j: u8) -> Result<ScalarExpr, Error> {
        assert!((1..=6).contains(&j), "axis index out of range: {j}");
        let mut out = ScalarExpr::zero();
        for (m, c) in &self.terms {
            if m.params.iter().any(|(p, _)| matches!(p, Param::Df(_))) {
                return Err(Error::SecondFDerivative);
            }
            let k = m.exponent(Param::F);
            if k == 0 {
                continue;
            }
            let nm = m.with_exponent(Param::F, k - 1).mul(&Monomial { params: vec![(Param::Df(j), 1)], traces: vec![] });
            out.add_term(nm, &c.scaled(&GaussianRational::int(k as i128)));
        }
        Ok(out)
    }

    /// Substitutes `p ↦ value` (used for `snorm ↦ 1` and oracle checks).
    pub fn substitute(&self, p: Param, value: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(p);
            if e == 0 {
                out.add_term(m.clone(), c);
                continue;
            }
            assert!(e > 0, "cannot substitute into a negative power");
            let rest = ScalarExpr::term(c.clone(), m.without(p));
            out.add_assign(&rest.mul(&value.pow(e as u32)));
        }
        out
    }

    /// Collects the terms by the exponent of `p`, returning `exponent ↦ cofactor`.
    pub fn collect(&self, p: Param) -> BTreeMap<i32, ScalarExpr> {
        let mut out: BTreeMap<i32, ScalarExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(p)).or_default().add_term(m.without(p), c);
        }
        out
    }

    /// Numeric evaluation under caller-provided parameter and trace values.
    pub fn eval(&self, param: &dyn Fn(Param) -> Complex64, trace: &dyn Fn(&TraceSymbol) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut v = Complex64::new(re, im);
            for (p, e) in &m.params {
                v *= param(*p).powi(*e);
            }
            for (t, e) in &m.traces {
                v *= trace(t).powi(*e as i32);
            }
            acc += v;
        }
        acc
    }
}

impl Ring for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
    fn plus_assign(&mut self, other: &Self) {
        self.add_assign(other);
    }
}

impl From<GaussianRational> for ScalarExpr {
    fn from(c: GaussianRational) -> Self {
        ScalarExpr::constant(c)
    }
}

impl From<Param> for ScalarExpr {
    fn from(p: Param) -> Self {
        ScalarExpr::param(p)
    }
}

pub(super) fn monomial_text(m: &Monomial) -> String {
    let mut parts: Vec<String> = m
        .params
        .iter()
        .map(|(p, e)| if *e == 1 { p.name() } else { format!("{}^{}", p.name(), e) })
        .collect();
    parts.extend(m.traces.iter().map(|(t, e)| if *e == 1 { t.to_string() } else { format!("{t}^{e}") }));
    parts.join("*")
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let body = monomial_text(m);
            let (negative, coef) = if c.is_real() {
                let neg = c.re < num_traits::Zero::zero();
                let a = if neg { -c.clone() } else { c.clone() };
                let s = if a.is_one() && !body.is_empty() { String::new() } else { a.to_string() };
                (neg, s)
            } else if body.is_empty() && self.terms.len() == 1 {
                (false, c.to_string())
            } else {
                (false, format!("({c})"))
            };
            let text = match (coef.is_empty(), body.is_empty()) {
                (true, _) => body,
                (false, true) => coef,
                (false, false) => format!("{coef}*{body}"),
            };
            match (k, negative) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}
