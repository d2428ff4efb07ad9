//! End(S⊗F) and End(Λ*⊗F) as (Clifford matrix) ⊗ (free word in formal
//! bundle-endomorphism generators), with the factorized trace
//! `tr = rep_trace · tr_F`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::clifford::CMatrix;
use crate::matrix::SparseMatrix;
use crate::scalar::{GaussianRational, ParseError, Ring, ScalarExpr};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GenKind {
    A,
    AStar,
    SigmaF,
    SigmaFe,
    Omega,
    OmegaStar,
    /// Reserved for curvature terms; no boundary case may produce it.
    CurvatureF,
}

impl GenKind {
    pub const ALL: [GenKind; 7] =
        [GenKind::A, GenKind::AStar, GenKind::SigmaF, GenKind::SigmaFe, GenKind::Omega, GenKind::OmegaStar, GenKind::CurvatureF];

    fn prefix(self) -> &'static str {
        match self {
            GenKind::A => "A",
            GenKind::AStar => "Astar",
            GenKind::SigmaF => "sigmaF",
            GenKind::SigmaFe => "sigmaFe",
            GenKind::Omega => "omega",
            GenKind::OmegaStar => "omegaStar",
            GenKind::CurvatureF => "RF",
        }
    }
}

/// A free generator evaluated on the frame vector `e_axis` (axis 1..=6).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FGenerator {
    pub kind: GenKind,
    pub axis: u8,
}

impl FGenerator {
    pub fn new(kind: GenKind, axis: u8) -> Self {
        assert!((1..=6).contains(&axis), "axis {axis} out of range");
        FGenerator { kind, axis }
    }
}

impl fmt::Display for FGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.axis == 6 {
            write!(f, "{}_n", self.kind.prefix())
        } else {
            write!(f, "{}_{}", self.kind.prefix(), self.axis)
        }
    }
}

impl FromStr for FGenerator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (pre, idx) = s.rsplit_once('_').ok_or_else(|| ParseError::new(format!("bad generator `{s}`")))?;
        let kind = GenKind::ALL
            .into_iter()
            .find(|k| k.prefix() == pre)
            .ok_or_else(|| ParseError::new(format!("bad generator `{s}`")))?;
        let axis: u8 = if idx == "n" { 6 } else { idx.parse().map_err(|_| ParseError::new(format!("bad axis in `{s}`")))? };
        if !(1..=6).contains(&axis) {
            return Err(ParseError::new(format!("bad axis in `{s}`")));
        }
        Ok(FGenerator { kind, axis })
    }
}

pub type Word = Vec<FGenerator>;

pub type EMatrix = SparseMatrix<ScalarExpr>;

/// Σ_w M_w ⊗ w with `M_w` an exact matrix over `ScalarExpr`.
///
/// `dim == 0` marks the universal zero, compatible with any representation.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct EndoElement {
    dim: usize,
    terms: BTreeMap<Word, EMatrix>,
}

fn lift(m: &CMatrix) -> EMatrix {
    m.map(|v| ScalarExpr::constant(v.clone()))
}

impl EndoElement {
    pub fn zero() -> Self {
        EndoElement::default()
    }

    pub fn identity(dim: usize) -> Self {
        Self::clifford(&CMatrix::identity(dim, GaussianRational::one()))
    }

    /// A Clifford matrix tensored with the identity of F.
    pub fn clifford(m: &CMatrix) -> Self {
        Self::from_word(lift(m), vec![])
    }

    /// `m ⊗ g`.
    pub fn clifford_gen(m: &CMatrix, g: FGenerator) -> Self {
        Self::from_word(lift(m), vec![g])
    }

    pub fn from_word(m: EMatrix, w: Word) -> Self {
        let dim = m.dim();
        let mut terms = BTreeMap::new();
        if !m.is_zero() {
            terms.insert(w, m);
        }
        EndoElement { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &EMatrix)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    fn compatible(&self, o: &Self) -> Result<usize, Error> {
        match (self.is_zero(), o.is_zero()) {
            (true, _) => Ok(o.dim.max(self.dim)),
            (_, true) => Ok(self.dim),
            _ if self.dim == o.dim => Ok(self.dim),
            _ => Err(Error::RepMismatch),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        let dim = self.compatible(o)?;
        let mut terms = self.terms.clone();
        for (w, m) in &o.terms {
            match terms.get_mut(w) {
                Some(e) => {
                    *e = e.add(m)?;
                    if e.is_zero() {
                        terms.remove(w);
                    }
                }
                None => {
                    terms.insert(w.clone(), m.clone());
                }
            }
        }
        Ok(EndoElement { dim, terms })
    }

    pub fn neg(&self) -> Self {
        EndoElement { dim: self.dim, terms: self.terms.iter().map(|(w, m)| (w.clone(), m.neg())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return EndoElement { dim: self.dim, terms: BTreeMap::new() };
        }
        EndoElement { dim: self.dim, terms: self.terms.iter().map(|(w, m)| (w.clone(), m.scale(c))).collect() }
    }

    /// Multiplication by a scalar expression (central).
    pub fn scale_expr(&self, e: &ScalarExpr) -> Self {
        if let Some(c) = e.as_constant() {
            return self.scale(&c);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, m)| (w.clone(), m.map(|v| v.mul(e))))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        EndoElement { dim: self.dim, terms }
    }

    /// Applies a map to every matrix entry (e.g. an `x_j`-derivative of the
    /// scalar coefficients).
    pub fn try_map_entries(&self, f: impl Fn(&ScalarExpr) -> Result<ScalarExpr, Error>) -> Result<Self, Error> {
        let mut terms = BTreeMap::new();
        for (w, m) in &self.terms {
            let mut entries = Vec::new();
            for (i, j, v) in m.entries() {
                entries.push((i, j, f(v)?));
            }
            let nm = EMatrix::from_entries(m.dim(), entries);
            if !nm.is_zero() {
                terms.insert(w.clone(), nm);
            }
        }
        Ok(EndoElement { dim: self.dim, terms })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        let dim = self.compatible(o)?;
        let mut out = EndoElement { dim, terms: BTreeMap::new() };
        for (wa, ma) in &self.terms {
            for (wb, mb) in &o.terms {
                let m = ma.mul_with(mb, mul_entries)?;
                if m.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                match out.terms.get_mut(&w) {
                    Some(e) => {
                        *e = e.add(&m)?;
                        if e.is_zero() {
                            out.terms.remove(&w);
                        }
                    }
                    None => {
                        out.terms.insert(w, m);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Σ_w rep_trace(M_w) · tr_F(w).
    pub fn trace(&self) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (w, m) in &self.terms {
            let t = m.trace();
            if !t.is_zero() {
                acc.add_assign(&t.mul(&ScalarExpr::trace_of_word(w)));
            }
        }
        acc
    }

    /// `trace(self · o)` without forming the product.
    pub fn trace_product(&self, o: &Self) -> Result<ScalarExpr, Error> {
        self.compatible(o)?;
        let mut by_word: BTreeMap<Word, ScalarExpr> = BTreeMap::new();
        for (wa, ma) in &self.terms {
            for (wb, mb) in &o.terms {
                let t = ma.trace_product_with(mb, mul_entries)?;
                if t.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                by_word.entry(w).or_default().add_assign(&t);
            }
        }
        let mut acc = ScalarExpr::zero();
        for (w, t) in by_word {
            acc.add_assign(&t.mul(&ScalarExpr::trace_of_word(&w)));
        }
        Ok(acc)
    }

    /// Evaluates at a point: every entry is mapped through `f`.
    pub fn map_entries(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        self.try_map_entries(|v| Ok(f(v))).expect("infallible")
    }
}

fn mul_entries(a: &ScalarExpr, b: &ScalarExpr) -> ScalarExpr {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), _) => b.scale(&x),
        (_, Some(y)) => a.scale(&y),
        _ => a.mul(b),
    }
}

impl Ring for EndoElement {
    fn zero() -> Self {
        EndoElement::zero()
    }
    fn is_zero(&self) -> bool {
        EndoElement::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other).expect("representation mismatch in EndoElement sum")
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other).expect("representation mismatch in EndoElement product")
    }
    fn scaled(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
}
