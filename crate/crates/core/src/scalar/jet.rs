use super::{binomial, GaussianRational, Ring};
use crate::Error;

/// Truncated jet in the normal coordinate `x_n` at `x_n = 0`.
///
/// `d[k]` holds the k-th derivative; `order()` is the highest derivative
/// carried. Products truncate to the smaller order, and differentiating an
/// order-0 jet is an explicit error.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<T> {
    d: Vec<T>,
}

impl<T: Ring> Jet<T> {
    pub fn from_derivatives(d: Vec<T>) -> Self {
        assert!(!d.is_empty(), "a jet carries at least its value");
        Jet { d }
    }

    /// A value known only at `x_n = 0`.
    pub fn at_point(v: T) -> Self {
        Jet { d: vec![v] }
    }

    /// An `x_n`-independent value, exact to the given order.
    pub fn constant(v: T, order: usize) -> Self {
        let mut d = vec![v];
        d.extend((0..order).map(|_| T::zero()));
        Jet { d }
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn v0(&self) -> &T {
        &self.d[0]
    }

    pub fn v1(&self) -> Result<&T, Error> {
        self.d.get(1).ok_or(Error::Truncation { order: self.order() })
    }

    pub fn derivatives(&self) -> &[T] {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(T::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet { d: self.d[..=order.min(self.order())].to_vec() }
    }

    pub fn derivative(&self) -> Result<Self, Error> {
        if self.d.len() < 2 {
            return Err(Error::Truncation { order: 0 });
        }
        Ok(Jet { d: self.d[1..].to_vec() })
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Jet<U> {
        Jet { d: self.d.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U, Error>) -> Result<Jet<U>, Error> {
        Ok(Jet { d: self.d.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.d.len().min(o.d.len());
        Jet { d: (0..n).map(|k| self.d[k].plus(&o.d[k])).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(T::negate)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|v| v.scaled(c))
    }

    /// Truncated Leibniz product.
    pub fn mul_with<U: Ring, V: Ring>(&self, o: &Jet<U>, f: impl Fn(&T, &U) -> V) -> Jet<V> {
        let n = self.d.len().min(o.d.len());
        let d = (0..n)
            .map(|k| {
                let mut acc = V::zero();
                for i in 0..=k {
                    let p = f(&self.d[i], &o.d[k - i]);
                    if p.is_zero() {
                        continue;
                    }
                    let b = binomial(k as i64, i as i64);
                    acc.plus_assign(&if b == 1 { p } else { p.scaled(&GaussianRational::int(b)) });
                }
                acc
            })
            .collect();
        Jet { d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_with(o, |a, b| a.times(b))
    }
}

impl<T: Ring> Ring for Jet<T> {
    /// The zero jet of order 0 (absorbing under truncation is avoided by
    /// `plus`, which keeps the larger order when one side is this zero).
    fn zero() -> Self {
        Jet { d: vec![T::zero()] }
    }
    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        if Jet::is_zero(self) && self.d.len() == 1 {
            return other.clone();
        }
        if Jet::is_zero(other) && other.d.len() == 1 {
            return self.clone();
        }
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
}
