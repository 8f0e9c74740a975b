//! Finite-rank kernels: order-`q` coefficient tensors over a `d`-element
//! orthonormal basis.
//!
//! Coefficients are addressed by the row-major linear index
//! `i_1 d^(q-1) + ... + i_q` (0-based letters) and stored sparsely as a
//! sorted list of non-zero entries. Random dense kernels and the large
//! diagonal families used for limit scans then share one code path.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outputs up to this many slots are accumulated densely.
const DENSE_ACCUMULATOR_LIMIT: u128 = 1 << 20;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Kernel<T> {
    order: usize,
    dim: usize,
    /// Strictly increasing linear indices, non-zero values.
    entries: Vec<(u128, T)>,
}

/// `dim^order`, or a capacity error when it does not fit the index type.
pub fn index_space(dim: usize, order: usize) -> Result<u128> {
    if dim == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    let order32 = u32::try_from(order)
        .map_err(|_| Error::Capacity(format!("order {order} too large")))?;
    (dim as u128)
        .checked_pow(order32)
        .ok_or_else(|| Error::Capacity(format!("{dim}^{order} index space exceeds 128 bits")))
}

impl<T: Scalar> Kernel<T> {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        index_space(dim, order)?;
        Ok(Kernel {
            order,
            dim,
            entries: Vec::new(),
        })
    }

    /// Order-0 kernel holding the scalar `value`.
    pub fn scalar(value: T, dim: usize) -> Result<Self> {
        Self::from_sorted(0, dim, vec![(0, value)])
    }

    /// Builds from `(multi_index, value)` pairs with 0-based letters.
    /// Repeated multi-indices are rejected.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        index_space(dim, order)?;
        let mut linear = Vec::new();
        for (idx, v) in entries {
            linear.push((encode(&idx, order, dim)?, v));
        }
        linear.sort_by_key(|e| e.0);
        if let Some(w) = linear.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Shape(format!(
                "duplicate index {:?}",
                decode(w[0].0, order, dim)
            )));
        }
        Self::from_sorted(order, dim, linear)
    }

    /// Row-major dense coefficients, `dim^order` of them.
    pub fn from_dense(order: usize, dim: usize, values: Vec<T>) -> Result<Self> {
        let size = index_space(dim, order)?;
        if values.len() as u128 != size {
            return Err(Error::Shape(format!(
                "expected {size} coefficients, got {}",
                values.len()
            )));
        }
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as u128, v))
            .collect();
        Self::from_sorted(order, dim, entries)
    }

    fn from_sorted(order: usize, dim: usize, mut entries: Vec<(u128, T)>) -> Result<Self> {
        index_space(dim, order)?;
        entries.retain(|(_, v)| !v.is_zero());
        Ok(Kernel {
            order,
            dim,
            entries,
        })
    }

    /// `e_{i_1} (x) ... (x) e_{i_q}`, 0-based letters.
    pub fn basis(dim: usize, letters: &[usize]) -> Result<Self> {
        Self::from_entries(letters.len(), dim, [(letters.to_vec(), T::one())])
    }

    /// `sum_{i < count} e_i^{(x) order}`.
    pub fn diagonal(count: usize, order: usize, dim: usize) -> Result<Self> {
        if count > dim {
            return Err(Error::Capacity(format!(
                "{count} diagonal terms need dimension >= {count}, got {dim}"
            )));
        }
        Self::from_entries(order, dim, (0..count).map(|i| (vec![i; order], T::one())))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-zero entries in increasing linear-index order.
    pub fn entries(&self) -> &[(u128, T)] {
        &self.entries
    }

    /// Non-zero entries with decoded 0-based multi-indices.
    pub fn iter_indexed(&self) -> impl Iterator<Item = (Vec<usize>, &T)> + '_ {
        self.entries
            .iter()
            .map(|(i, v)| (decode(*i, self.order, self.dim), v))
    }

    pub fn get(&self, idx: &[usize]) -> Result<T> {
        let key = encode(idx, self.order, self.dim)?;
        Ok(self.get_linear(key))
    }

    fn get_linear(&self, key: u128) -> T {
        match self.entries.binary_search_by_key(&key, |e| e.0) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Scalar value of an order-0 kernel.
    pub fn as_scalar(&self) -> Option<T> {
        (self.order == 0).then(|| self.get_linear(0))
    }

    pub fn map<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> Kernel<U> {
        let entries = self.entries.iter().map(|(i, v)| (*i, f(v))).collect();
        Kernel::from_sorted(self.order, self.dim, entries).expect("shape already validated")
    }

    /// `f*(i_1..i_q) = conj f(i_q..i_1)`.
    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<(u128, T)> = self
            .entries
            .iter()
            .map(|(i, v)| (reverse_digits(*i, self.order, self.dim), v.conj()))
            .collect();
        entries.sort_by_key(|e| e.0);
        Kernel {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        let mut worst = 0.0f64;
        merge(&self.entries, &other.entries, |_, a, b| {
            let d = match (a, b) {
                (Some(a), Some(b)) => (a.clone() - b.clone()).modulus(),
                (Some(a), None) | (None, Some(a)) => a.modulus(),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        });
        Ok(worst)
    }

    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint())
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    /// The `r`-th contraction: the last `r` slots of `self`, read in reverse,
    /// are summed against the first `r` slots of `other`.
    pub fn contract(&self, other: &Self, r: usize) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        if r > self.order.min(other.order) {
            return Err(Error::Shape(format!(
                "contraction index {r} exceeds min order {}",
                self.order.min(other.order)
            )));
        }
        let out_order = self.order + other.order - 2 * r;
        let out_space = index_space(self.dim, out_order)?;
        let inner = index_space(self.dim, r)?;
        let suffix_space = index_space(self.dim, other.order - r)?;

        // Axis reversal of the contracted block of `self`, then a sparse join
        // against the prefixes of `other`.
        let mut products: Vec<(u128, T)> = Vec::new();
        for (idx, a) in &self.entries {
            let head = idx / inner;
            let key = reverse_digits(idx % inner, r, self.dim);
            let lo = key * suffix_space;
            let hi = lo + suffix_space;
            let start = other.entries.partition_point(|e| e.0 < lo);
            let end = other.entries.partition_point(|e| e.0 < hi);
            for (gidx, b) in &other.entries[start..end] {
                products.push((head * suffix_space + (gidx - lo), a.clone() * b.clone()));
            }
        }
        let entries = if out_space <= DENSE_ACCUMULATOR_LIMIT {
            let mut acc: Vec<Option<T>> = vec![None; out_space as usize];
            for (i, v) in products {
                let slot = &mut acc[i as usize];
                *slot = Some(match slot.take() {
                    Some(s) => s + v,
                    None => v,
                });
            }
            acc.into_iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (i as u128, v)))
                .collect()
        } else {
            products.sort_by_key(|e| e.0);
            let mut merged: Vec<(u128, T)> = Vec::with_capacity(products.len());
            for (i, v) in products {
                match merged.last_mut() {
                    Some(last) if last.0 == i => last.1 = last.1.clone() + v,
                    _ => merged.push((i, v)),
                }
            }
            merged
        };
        Self::from_sorted(out_order, self.dim, entries)
    }

    /// `self (x) other`, the zeroth contraction.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.contract(other, 0)
    }

    /// `sum conj(self) other` over all multi-indices.
    pub fn inner_product(&self, other: &Self) -> Result<T> {
        self.same_shape(other)?;
        let mut acc = T::zero();
        merge(&self.entries, &other.entries, |_, a, b| {
            if let (Some(a), Some(b)) = (a, b) {
                acc = acc.clone() + a.conj() * b.clone();
            }
        });
        Ok(acc)
    }

    pub fn norm_sq(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, (_, v)| acc + v.modulus_sq())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().re().max(0.0).sqrt()
    }

    pub fn scale(&self, alpha: &T) -> Self {
        self.map(|v| alpha.clone() * v.clone())
    }

    /// `alpha f + g`.
    pub fn axpy(alpha: &T, f: &Self, g: &Self) -> Result<Self> {
        f.same_shape(g)?;
        let mut entries = Vec::with_capacity(f.nnz() + g.nnz());
        merge(&f.entries, &g.entries, |key, a, b| {
            let v = match (a, b) {
                (Some(a), Some(b)) => alpha.clone() * a.clone() + b.clone(),
                (Some(a), None) => alpha.clone() * a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => T::zero(),
            };
            entries.push((key, v));
        });
        Self::from_sorted(f.order, f.dim, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::axpy(&-T::one(), other, self)
    }

    /// Re-embeds the kernel over a larger basis; new coefficients are zero.
    pub fn zero_pad(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::Shape(format!("cannot pad {} down to {dim}", self.dim)));
        }
        Self::from_entries(
            self.order,
            dim,
            self.iter_indexed().map(|(i, v)| (i, v.clone())),
        )
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::Shape(format!(
                "shape mismatch: (q={}, d={}) vs (q={}, d={})",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }
}

/// `sum_{i < p} e_i (x) e_i` over a `d`-element basis.
pub fn poisson_kernel<T: Scalar>(p: usize, d: usize) -> Result<Kernel<T>> {
    if p == 0 {
        return Err(Error::Domain("rate p must be positive".into()));
    }
    Kernel::diagonal(p, 2, d)
}

impl<T: Scalar> fmt::Debug for Kernel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel(q={}, d={}) {{", self.order, self.dim)?;
        for (k, (idx, v)) in self.iter_indexed().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " {idx:?}: {v:?}")?;
        }
        write!(f, " }}")
    }
}

fn encode(idx: &[usize], order: usize, dim: usize) -> Result<u128> {
    if idx.len() != order {
        return Err(Error::Shape(format!(
            "index {idx:?} has {} letters, order is {order}",
            idx.len()
        )));
    }
    let mut key = 0u128;
    for &i in idx {
        if i >= dim {
            return Err(Error::Shape(format!("letter {i} outside 0..{dim}")));
        }
        key = key * dim as u128 + i as u128;
    }
    Ok(key)
}

fn decode(mut key: u128, order: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in idx.iter_mut().rev() {
        *slot = (key % dim as u128) as usize;
        key /= dim as u128;
    }
    idx
}

fn reverse_digits(mut key: u128, len: usize, dim: usize) -> u128 {
    let d = dim as u128;
    let mut out = 0u128;
    for _ in 0..len {
        out = out * d + key % d;
        key /= d;
    }
    out
}

/// Walks the union of two sorted entry lists in key order.
fn merge<T, F: FnMut(u128, Option<&T>, Option<&T>)>(a: &[(u128, T)], b: &[(u128, T)], mut f: F) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                f(x.0, Some(&x.1), Some(&y.1));
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                f(x.0, Some(&x.1), None);
                i += 1;
            }
            (Some(x), None) => {
                f(x.0, Some(&x.1), None);
                i += 1;
            }
            (_, Some(y)) => {
                f(y.0, None, Some(&y.1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}
