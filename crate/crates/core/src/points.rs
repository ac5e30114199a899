use crate::error::{Error, Result};
use crate::scalar::Real;

/// A list of `len` points in `dim` dimensions stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Points<T> {
    dim: usize,
    coords: Vec<T>,
}

impl<T: Copy> Points<T> {
    pub fn new(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::Size(format!(
                "{} coordinates do not split into points of dimension {}",
                coords.len(),
                dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[T]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::Size(format!(
                    "point {} has {} coordinates, expected {}",
                    i,
                    r.len(),
                    dim
                )));
            }
            coords.extend_from_slice(r);
        }
        Ok(Self { dim, coords })
    }

    pub fn filled(dim: usize, len: usize, value: T) -> Self {
        Self {
            dim,
            coords: vec![value; dim * len],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize) -> &mut [T] {
        let d = self.dim;
        &mut self.coords[i * d..(i + 1) * d]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, T> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.coords
    }

    /// Reorders points so that entry `i` of the result is `self[order[i]]`.
    pub fn gather(&self, order: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(order.len() * self.dim);
        for &j in order {
            coords.extend_from_slice(self.get(j));
        }
        Self { dim: self.dim, coords }
    }
}

impl<T: Real> Points<T> {
    pub fn map(&self, mut f: impl FnMut(&[T]) -> Vec<T>) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            let q = f(p);
            if q.len() != self.dim {
                return Err(Error::Size(format!(
                    "mapped point has {} coordinates, expected {}",
                    q.len(),
                    self.dim
                )));
            }
            coords.extend(q);
        }
        Ok(Self { dim: self.dim, coords })
    }

    pub fn translated(&self, t: &[T]) -> Self {
        assert_eq!(t.len(), self.dim, "translation dimension");
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, &x)| x + t[k % self.dim])
            .collect();
        Self { dim: self.dim, coords }
    }
}

#[inline]
pub(crate) fn dist2<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

#[inline]
pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}
