use std::collections::BTreeMap;

use crate::scalar::{GaussianRational, Ring};
use crate::Error;

/// Square sparse matrix with exact entries, stored row-wise with sorted columns.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<T> {
    n: usize,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Ring> SparseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SparseMatrix { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize, one: T) -> Self {
        SparseMatrix { n, rows: (0..n).map(|i| vec![(i, one.clone())]).collect() }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); n];
        for (i, j, v) in entries {
            assert!(i < n && j < n, "entry ({i},{j}) outside {n}x{n}");
            match acc[i].get_mut(&j) {
                Some(e) => e.plus_assign(&v),
                None => {
                    acc[i].insert(j, v);
                }
            }
        }
        SparseMatrix { n, rows: acc.into_iter().map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.rows[i].iter().find(|(c, _)| *c == j).map_or_else(T::zero, |(_, v)| v.clone())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, f(v))).filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    fn check(&self, o: &Self) -> Result<(), Error> {
        if self.n != o.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: o.n });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.check(o)?;
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        out.push(a[i].clone());
                        i += 1;
                    } else if i == a.len() || b[j].0 < a[i].0 {
                        out.push(b[j].clone());
                        j += 1;
                    } else {
                        let v = a[i].1.plus(&b[j].1);
                        if !v.is_zero() {
                            out.push((a[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        Ok(SparseMatrix { n: self.n, rows })
    }

    pub fn neg(&self) -> Self {
        self.map(T::negate)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zeros(self.n);
        }
        self.map(|v| v.scaled(c))
    }

    /// Product with an entry map applied to each pairwise product (lets a
    /// constant matrix multiply a matrix over a richer ring).
    pub fn mul_with<U: Ring, V: Ring>(&self, o: &SparseMatrix<U>, f: impl Fn(&T, &U) -> V) -> Result<SparseMatrix<V>, Error> {
        if self.n != o.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: o.n });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, V> = BTreeMap::new();
                for (k, a) in r {
                    for (j, b) in &o.rows[*k] {
                        let p = f(a, b);
                        match acc.get_mut(j) {
                            Some(e) => e.plus_assign(&p),
                            None => {
                                acc.insert(*j, p);
                            }
                        }
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMatrix { n: self.n, rows })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        self.mul_with(o, |a, b| a.times(b))
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for (i, r) in self.rows.iter().enumerate() {
            if let Some((_, v)) = r.iter().find(|(j, _)| *j == i) {
                acc.plus_assign(v);
            }
        }
        acc
    }

    /// `tr(self · o)` without forming the product.
    pub fn trace_product_with<U: Ring, V: Ring>(&self, o: &SparseMatrix<U>, f: impl Fn(&T, &U) -> V) -> Result<V, Error> {
        if self.n != o.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: o.n });
        }
        let mut acc = V::zero();
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r {
                if let Some((_, b)) = o.rows[*k].iter().find(|(j, _)| *j == i) {
                    acc.plus_assign(&f(a, b));
                }
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.n, self.entries().map(|(i, j, v)| (j, i, v.clone())))
    }
}

impl SparseMatrix<GaussianRational> {
    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).and_then(|a| a.add(&o.mul(self)?)).expect("same dimension")
    }

    pub fn is_scalar(&self, c: &GaussianRational) -> bool {
        (0..self.n).all(|i| self.rows[i].len() == 1 && self.rows[i][0].0 == i && &self.rows[i][0].1 == c)
            || (c.is_zero() && self.is_zero())
    }
}
