//! Exact matrix representations of Cl(6): the 8-dimensional spinor module and
//! the 64-dimensional exterior algebra carrying both `c = ε − ι` and `ĉ = ε + ι`.
//!
//! Axes are numbered 1..=6; axis 6 is the normal direction `dx_n`.

use crate::matrix::SparseMatrix;
use crate::scalar::{binomial, GaussianRational, Rational};
use crate::Error;

pub type CMatrix = SparseMatrix<GaussianRational>;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum RepKind {
    Spin,
    Exterior,
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub kind: RepKind,
    pub rep_dim: usize,
    c: Vec<CMatrix>,
    chat: Option<Vec<CMatrix>>,
}

fn g(re: i128, im: i128) -> GaussianRational {
    GaussianRational::complex((re, 1), (im, 1))
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim(), b.dim());
    CMatrix::from_entries(
        na * nb,
        a.entries().flat_map(|(i, j, x)| b.entries().map(move |(k, l, y)| (i * nb + k, j * nb + l, x * y))),
    )
}

fn pauli() -> [CMatrix; 4] {
    [
        CMatrix::identity(2, g(1, 0)),
        CMatrix::from_entries(2, [(0, 1, g(1, 0)), (1, 0, g(1, 0))]),
        CMatrix::from_entries(2, [(0, 1, g(0, -1)), (1, 0, g(0, 1))]),
        CMatrix::from_entries(2, [(0, 0, g(1, 0)), (1, 1, g(-1, 0))]),
    ]
}

impl CliffordRep {
    /// Spinor representation built from iterated 2×2 tensor blocks.
    pub fn spin() -> Self {
        Self::spin_permuted([0, 1, 2, 3, 4, 5])
    }

    /// Same construction with the six hermitian blocks assigned to axes in a
    /// different order; every trace-level output must be independent of it.
    pub fn spin_permuted(perm: [usize; 6]) -> Self {
        let [e, s1, s2, s3] = pauli();
        let herm = [
            kron(&kron(&s1, &e), &e),
            kron(&kron(&s2, &e), &e),
            kron(&kron(&s3, &s1), &e),
            kron(&kron(&s3, &s2), &e),
            kron(&kron(&s3, &s3), &s1),
            kron(&kron(&s3, &s3), &s2),
        ];
        let i = GaussianRational::i();
        let c = perm.iter().map(|&k| herm[k].scale(&i)).collect();
        CliffordRep { kind: RepKind::Spin, rep_dim: 8, c, chat: None }
    }

    /// Exterior algebra Λ*(R⁶) with basis indexed by subsets (bitmasks) of
    /// the six axes; `ε_i e_S = (−1)^{#{s∈S : s<i}} e_{S∪{i}}` and `ι_i = ε_iᵀ`.
    pub fn exterior() -> Self {
        let eps: Vec<CMatrix> = (0..6)
            .map(|i| {
                CMatrix::from_entries(
                    64,
                    (0..64usize).filter(|s| s & (1 << i) == 0).map(move |s| {
                        let sign = if (s & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                        (s | (1 << i), s, g(sign, 0))
                    }),
                )
            })
            .collect();
        let iota: Vec<CMatrix> = eps.iter().map(CMatrix::transpose).collect();
        let c = eps.iter().zip(&iota).map(|(e, i)| e.add(&i.neg()).expect("64")).collect();
        let chat = eps.iter().zip(&iota).map(|(e, i)| e.add(i).expect("64")).collect();
        CliffordRep { kind: RepKind::Exterior, rep_dim: 64, c, chat: Some(chat) }
    }

    pub fn build(kind: RepKind) -> Self {
        match kind {
            RepKind::Spin => Self::spin(),
            RepKind::Exterior => Self::exterior(),
        }
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.rep_dim, GaussianRational::one())
    }

    /// `c(ẽ_j)`, j = 1..=6.
    pub fn c(&self, j: usize) -> &CMatrix {
        assert!((1..=6).contains(&j), "axis {j} out of range");
        &self.c[j - 1]
    }

    /// `ĉ(ẽ_j)`, exterior representation only.
    pub fn chat(&self, j: usize) -> Result<&CMatrix, Error> {
        assert!((1..=6).contains(&j), "axis {j} out of range");
        self.chat.as_ref().map(|v| &v[j - 1]).ok_or(Error::RepMismatch)
    }

    pub fn has_chat(&self) -> bool {
        self.chat.is_some()
    }

    /// ε_j and ι_j recovered from `c` and `ĉ` (exterior only).
    pub fn eps_iota(&self, j: usize) -> Result<(CMatrix, CMatrix), Error> {
        let half = GaussianRational::frac(1, 2);
        let ch = self.chat(j)?;
        let c = self.c(j);
        Ok((ch.add(c)?.scale(&half), ch.add(&c.neg())?.scale(&half)))
    }

    pub fn rep_trace(&self, m: &CMatrix) -> Result<GaussianRational, Error> {
        if m.dim() != self.rep_dim {
            return Err(Error::ShapeMismatch { expected: self.rep_dim, found: m.dim() });
        }
        Ok(m.trace())
    }

    /// Trace restricted to the degree-`m` block Λᵐ (exterior only).
    pub fn degree_trace(&self, mat: &CMatrix, m: u32) -> Result<GaussianRational, Error> {
        if self.kind != RepKind::Exterior {
            return Err(Error::RepMismatch);
        }
        let mut acc = GaussianRational::zero();
        for s in (0..64usize).filter(|s| s.count_ones() == m) {
            acc += &mat.get(s, s);
        }
        Ok(acc)
    }
}

/// `b_{6,m} = C(4,m−2) + C(4,m) − 2·C(4,m−1)`.
pub fn b_coefficient(m: i64) -> Result<Rational, Error> {
    if !(0..=6).contains(&m) {
        return Err(Error::OutOfRange(format!("b_6,m needs 0 <= m <= 6, got {m}")));
    }
    Ok(Rational::from_integer(binomial(4, m - 2) + binomial(4, m) - 2 * binomial(4, m - 1)))
}
