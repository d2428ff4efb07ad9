//! Floating-point re-evaluation of the boundary integrals: random matrices for
//! the bundle generators, adaptive quadrature on the ξ_n line and a product
//! rule on S⁴. Shares no integration code with the exact path.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endo::{EndoElement, FGenerator, GenKind};
use crate::pipeline::{case_factors, compute_tuple, enumerate_cases, CaseId};
use crate::scalar::{Param, ScalarExpr, TraceSymbol};
use crate::symbol::{Catalog, RestrictedSymbol};
use crate::Error;

pub type CMat = DMatrix<Complex64>;

/// Relative agreement demanded between exact and numeric values.
pub const ORACLE_TOL: f64 = 1e-9;

pub const DEFAULT_SEEDS: [u64; 3] = [7, 1_000_003, 0x5eed_cafe];

pub fn omega4() -> f64 {
    8.0 * PI * PI / 3.0
}

/// Within `tol` relative to max(1, |b|).
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

/// Concrete values for every formal symbol, drawn from a rational grid.
#[derive(Clone, Debug)]
pub struct Instantiation {
    pub seed: u64,
    pub dim_f: usize,
    params: BTreeMap<Param, f64>,
    gens: BTreeMap<FGenerator, CMat>,
}

fn grid(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-16i32..=16) as f64 / 8.0
}

/// Scalar parameters stay off zero so no monomial is silently dropped.
fn grid_nonzero(rng: &mut ChaCha8Rng) -> f64 {
    let v = rng.gen_range(1i32..=16) as f64 / 8.0;
    if rng.gen_bool(0.5) { -v } else { v }
}

impl Instantiation {
    pub fn random(seed: u64, dim_f: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = BTreeMap::new();
        params.insert(Param::H1, grid_nonzero(&mut rng));
        params.insert(Param::H2, grid_nonzero(&mut rng));
        params.insert(Param::F, rng.gen_range(4i32..=16) as f64 / 8.0);
        for j in 1..=6 {
            params.insert(Param::Df(j), grid_nonzero(&mut rng));
        }
        let mut gens = BTreeMap::new();
        for kind in GenKind::ALL {
            for axis in 1..=6 {
                let m = CMat::from_fn(dim_f, dim_f, |_, _| Complex64::new(grid(&mut rng), grid(&mut rng)));
                gens.insert(FGenerator::new(kind, axis), m);
            }
        }
        Instantiation { seed, dim_f, params, gens }
    }

    pub fn param(&self, p: Param) -> Complex64 {
        let v = match p {
            Param::Pi => PI,
            Param::Omega4 => omega4(),
            Param::DimF => self.dim_f as f64,
            Param::SNorm => 1.0,
            other => self.params[&other],
        };
        Complex64::new(v, 0.0)
    }

    pub fn generator(&self, g: FGenerator) -> &CMat {
        &self.gens[&g]
    }

    pub fn word(&self, w: &[FGenerator]) -> CMat {
        w.iter().fold(CMat::identity(self.dim_f, self.dim_f), |acc, g| acc * self.generator(*g))
    }

    pub fn trace_symbol(&self, t: &TraceSymbol) -> Complex64 {
        self.word(t.word()).trace()
    }

    pub fn eval(&self, e: &ScalarExpr) -> Complex64 {
        e.eval(&|p| self.param(p), &|t| self.trace_symbol(t))
    }

    /// Dense matrix on (representation) ⊗ F, F the fast index.
    pub fn endo(&self, e: &EndoElement) -> CMat {
        let n = e.dim() * self.dim_f;
        let mut out = CMat::zeros(n, n);
        for (w, m) in e.terms() {
            let wm = self.word(w);
            for (i, j, v) in m.entries() {
                let c = self.eval(v);
                for a in 0..self.dim_f {
                    for b in 0..self.dim_f {
                        out[(i * self.dim_f + a, j * self.dim_f + b)] += c * wm[(a, b)];
                    }
                }
            }
        }
        out
    }
}

fn gl(n: usize) -> Result<GaussLegendre, Error> {
    GaussLegendre::new(n).map_err(|e| Error::Oracle(format!("Gauss-Legendre rule of degree {n}: {e}")))
}

/// ∫_ℝ ξ^p / ((ξ − i)^a (ξ + i)^b) dξ by ξ = tan θ and Gauss–Legendre with node doubling.
pub fn quad_line(p: u32, a: u32, b: u32) -> Result<Complex64, Error> {
    if p + 2 > a + b {
        return Err(Error::InsufficientDecay);
    }
    let f = |theta: f64| {
        let x = theta.tan();
        let sec2 = 1.0 + x * x;
        let z = Complex64::new(x, 0.0);
        let i = Complex64::i();
        z.powu(p) / ((z - i).powu(a) * (z + i).powu(b)) * sec2
    };
    let h = PI / 2.0;
    let mut prev: Option<Complex64> = None;
    let mut n = 16;
    while n <= 2048 {
        let rule = gl(n)?;
        let v = Complex64::new(rule.integrate(-h, h, |t| f(t).re), rule.integrate(-h, h, |t| f(t).im));
        if let Some(q) = prev {
            if (v - q).norm() <= 1e-14 * v.norm().max(1.0) {
                return Ok(v);
            }
        }
        prev = Some(v);
        n *= 2;
    }
    Err(Error::Oracle(format!("line quadrature for (p={p}, a={a}, b={b}) did not settle")))
}

/// Product rule on the unit S⁴ ⊂ ℝ⁵, exact for polynomials of degree ≤ 16.
///
/// ξ₁ = t₁, ξ₂ = s₁t₂, ξ₃ = s₁s₂t₃, (ξ₄, ξ₅) = s₁s₂s₃(cos φ, sin φ) with
/// measure (1 − t₁²) dt₁ · √(1 − t₂²) dt₂ · dt₃ · dφ.
pub fn quad_sphere(f: impl Fn([f64; 5]) -> f64) -> Result<f64, Error> {
    const N: usize = 12;
    const M: usize = 24;
    let rule = gl(N)?;
    let cheb: Vec<(f64, f64)> = (1..=N)
        .map(|k| {
            let th = k as f64 * PI / (N + 1) as f64;
            (th.cos(), PI / (N + 1) as f64 * th.sin().powi(2))
        })
        .collect();
    let phis: Vec<f64> = (0..M).map(|k| 2.0 * PI * k as f64 / M as f64).collect();
    let v = rule.integrate(-1.0, 1.0, |t1| {
        let s1 = (1.0 - t1 * t1).max(0.0).sqrt();
        let inner: f64 = cheb
            .iter()
            .map(|&(t2, w2)| {
                let s2 = (1.0 - t2 * t2).max(0.0).sqrt();
                w2 * rule.integrate(-1.0, 1.0, |t3| {
                    let s3 = (1.0 - t3 * t3).max(0.0).sqrt();
                    let r = s1 * s2 * s3;
                    phis.iter().map(|&ph| f([t1, s1 * t2, s1 * s2 * t3, r * ph.cos(), r * ph.sin()])).sum::<f64>() * 2.0 * PI
                        / M as f64
                })
            })
            .sum();
        (1.0 - t1 * t1) * inner
    });
    Ok(v)
}

pub fn quad_sphere_monomial(e: [u8; 5]) -> Result<f64, Error> {
    quad_sphere(|x| x.iter().zip(&e).map(|(v, &k)| v.powi(k as i32)).product())
}

#[derive(Default)]
struct QuadCache {
    line: BTreeMap<(u32, u32, u32), Complex64>,
    sphere: BTreeMap<[u8; 5], f64>,
}

impl QuadCache {
    fn line(&mut self, p: u32, a: u32, b: u32) -> Result<Complex64, Error> {
        if let Some(v) = self.line.get(&(p, a, b)) {
            return Ok(*v);
        }
        let v = quad_line(p, a, b)?;
        self.line.insert((p, a, b), v);
        Ok(v)
    }

    fn sphere(&mut self, e: [u8; 5]) -> Result<f64, Error> {
        if let Some(v) = self.sphere.get(&e) {
            return Ok(*v);
        }
        let v = quad_sphere_monomial(e)?;
        self.sphere.insert(e, v);
        Ok(v)
    }
}

fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)];
            if x.re != 0.0 || x.im != 0.0 {
                acc += x * b[(k, i)];
            }
        }
    }
    acc
}

fn numeric_product(inst: &Instantiation, left: &RestrictedSymbol, right: &RestrictedSymbol, cache: &mut QuadCache) -> Result<Complex64, Error> {
    let lm: Vec<_> = left.monomials().map(|(k, p, c)| (*k, p, inst.endo(c))).collect();
    let rm: Vec<_> = right.monomials().map(|(k, p, c)| (*k, p, inst.endo(c))).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (kl, pl, ml) in &lm {
        for (kr, pr, mr) in &rm {
            let mut xi = kl.xi;
            for (x, y) in xi.iter_mut().zip(&kr.xi) {
                *x += y;
            }
            let s = cache.sphere(xi)?;
            let line = cache.line(pl + pr, kl.a + kr.a, kl.b + kr.b)?;
            acc += trace_product(ml, mr) * line * s;
        }
    }
    Ok(acc)
}

/// One group evaluated both ways under one instantiation.
#[derive(Clone, Copy, Debug)]
pub struct GroupCheck {
    pub seed: u64,
    pub exact: Complex64,
    pub numeric: Complex64,
}

impl GroupCheck {
    pub fn rel_err(&self) -> f64 {
        (self.exact - self.numeric).norm() / self.numeric.norm().max(1.0)
    }

    pub fn passes(&self) -> bool {
        self.rel_err() <= ORACLE_TOL
    }
}

/// Re-integrates every tuple of `case` numerically and compares with the
/// exact value instantiated at the same point.
pub fn check_group(cat: &Catalog, case: CaseId, inst: &Instantiation) -> Result<GroupCheck, Error> {
    let mut cache = QuadCache::default();
    let mut exact = ScalarExpr::zero();
    let mut numeric = Complex64::new(0.0, 0.0);
    for spec in enumerate_cases(cat.family, cat.geom.jet_order)?.iter().filter(|s| s.group() == case) {
        exact.add_assign(&compute_tuple(cat, spec)?);
        let (l, r) = case_factors(cat, spec)?;
        let (re, im) = spec.prefactor().to_f64_pair();
        numeric += Complex64::new(re, im) * numeric_product(inst, &l, &r, &mut cache)?;
    }
    Ok(GroupCheck { seed: inst.seed, exact: inst.eval(&exact), numeric })
}
