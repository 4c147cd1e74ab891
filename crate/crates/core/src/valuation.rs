use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::order::FinitePreorder;
use crate::scalar::{max_of, min_of, Scalar};
use crate::subset::SubsetMask;

/// A scalar-valued function on the carrier `0..n`, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Valuation<T> {
    values: Vec<T>,
}

impl<T: Scalar> Valuation<T> {
    pub fn new(values: Vec<T>) -> Self {
        Valuation { values }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Valuation { values: vec![c; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// True when every value lies in `[0, 1]`.
    pub fn is_normalized(&self) -> bool {
        self.values.iter().all(|v| *v >= T::zero() && *v <= T::one())
    }

    /// `{ x | f(x) > r }`
    pub fn above(&self, r: &T) -> SubsetMask {
        SubsetMask::from_elements(self.len(), (0..self.len()).filter(|&x| self.values[x] > *r))
    }

    /// `{ x | f(x) < r }`
    pub fn below(&self, r: &T) -> SubsetMask {
        SubsetMask::from_elements(self.len(), (0..self.len()).filter(|&x| self.values[x] < *r))
    }

    /// Weakly order-preserving: `x ≼ y ⟹ f(x) ≤ f(y)`.
    pub fn is_monotone(&self, p: &FinitePreorder) -> bool {
        self.len() == p.len() && p.strict_pairs().all(|(x, y)| self.values[x] <= self.values[y])
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        Valuation { values: self.values.iter().zip(&other.values).map(|(a, b)| max_of(a, b)).collect() }
    }

    pub fn pointwise_min(&self, other: &Self) -> Self {
        Valuation { values: self.values.iter().zip(&other.values).map(|(a, b)| min_of(a, b)).collect() }
    }

    /// `a·f + b`
    pub fn affine(&self, a: &T, b: &T) -> Self {
        Valuation { values: self.values.iter().map(|v| a.clone() * v.clone() + b.clone()).collect() }
    }

    pub fn min_value(&self) -> Option<T> {
        self.values.iter().cloned().reduce(|a, b| min_of(&a, &b))
    }

    pub fn max_value(&self) -> Option<T> {
        self.values.iter().cloned().reduce(|a, b| max_of(&a, &b))
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::CarrierMismatch { expected: n, found: self.len() });
        }
        Ok(())
    }
}

impl<T> Index<usize> for Valuation<T> {
    type Output = T;

    fn index(&self, x: usize) -> &T {
        &self.values[x]
    }
}

impl<T: Scalar> From<Vec<T>> for Valuation<T> {
    fn from(values: Vec<T>) -> Self {
        Valuation::new(values)
    }
}

impl<T: Scalar> fmt::Display for Valuation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}
