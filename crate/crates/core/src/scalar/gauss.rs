use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::{ParseError, Rational};

/// `re + im·i` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn int(n: i128) -> Self {
        Self::real(Rational::from_integer(n))
    }

    pub fn frac(p: i128, q: i128) -> Self {
        Self::real(Rational::new(p, q))
    }

    pub fn complex(re: (i128, i128), im: (i128, i128)) -> Self {
        GaussianRational { re: Rational::new(re.0, re.1), im: Rational::new(im.0, im.1) }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(&self) -> Rational {
        self.re * self.re + self.im * self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: self.re / n, im: -self.im / n })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Power of `i`: `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::int(-1),
            _ => -Self::i(),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Default for GaussianRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        &self + &o
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        &self - &o
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(self.re * o.re);
        }
        GaussianRational {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        &self * &o
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero GaussianRational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `p/q`, `r/s i`, or `p/q+r/s i` (unit imaginary parts print as `i`).
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_text = |im: &Rational| -> String {
            let a = im.abs();
            if a.is_one() {
                "i".to_string()
            } else {
                format!("{} i", fmt_rat(&a))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{}{}", sign, im_text(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}", fmt_rat(&self.re), sign, im_text(&self.im))
            }
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::new(format!("bad rational `{s}`"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: i128 = p.parse().map_err(|_| bad())?;
    let q: i128 = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Parses an imaginary part such as `i`, `-i`, `5/4 i`, `5/4*i`.
fn parse_imag(s: &str) -> Result<Rational, ParseError> {
    let body = s.trim().strip_suffix('i').ok_or_else(|| ParseError::new(format!("bad imaginary part `{s}`")))?;
    let body = body.trim_end().trim_end_matches('*').trim_end();
    match body {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        _ => parse_rational(body),
    }
}

impl FromStr for GaussianRational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseError::new("empty number"));
        }
        if !s.ends_with('i') {
            return Ok(GaussianRational::real(parse_rational(s)?));
        }
        // split at the last sign that is not in leading position
        let bytes = s.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/');
        match split {
            Some(k) => {
                let re = parse_rational(&s[..k])?;
                let im = parse_imag(&s[k..])?;
                Ok(GaussianRational { re, im })
            }
            None => Ok(GaussianRational { re: Rational::zero(), im: parse_imag(s)? }),
        }
    }
}

/// Binomial coefficient as an exact integer, zero outside `0..=n`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as i128 / (t + 1) as i128;
    }
    acc
}

/// `(2k-1)!!` style double factorial for odd arguments (with `(-1)!! = 1`).
pub fn double_factorial(n: i64) -> i128 {
    let mut acc: i128 = 1;
    let mut m = n;
    while m > 1 {
        acc *= m as i128;
        m -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::int(-1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::frac(-15, 16).to_string(), "-15/16");
        assert_eq!(GaussianRational::complex((11, 1), (5, 4)).to_string(), "11+5/4 i");
        assert_eq!(GaussianRational::complex((0, 1), (-1, 1)).to_string(), "-i");
        assert_eq!(GaussianRational::complex((1, 2), (-3, 1)).to_string(), "1/2-3 i");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7/3", "i", "-i", "5/4 i", "11+5/4 i", "1/2-3 i", "-2/3-i"] {
            let g: GaussianRational = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        let g: GaussianRational = "44/4+5/4*i".parse().unwrap();
        assert_eq!(g, GaussianRational::complex((11, 1), (5, 4)));
    }

    #[test]
    fn inverse() {
        let z = GaussianRational::complex((3, 1), (-4, 1));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(double_factorial(9), 945);
        assert_eq!(double_factorial(-1), 1);
    }
}
