//! Truncated full Fock space over a `d`-dimensional base space.
//!
//! A vector is a sparse map from words over the letters `0..d` to
//! amplitudes; the empty word is the vacuum. `I(e_i)` acts as creation plus
//! annihilation, and higher-order integrals are unfolded with
//! `I(e_i (x) g) = I(e_i) I(g) - I(g_i)`, where `g_i` fixes the first slot
//! of `g` to `i`. Moments are vacuum expectations, computed independently
//! of the contraction engine.
//!
//! The recursion is carried out on operators: each integral is expanded
//! once into creation/annihilation monomials, which are then applied to
//! vectors word by word.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::scalar::Scalar;

pub type Word = Vec<u16>;

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T> {
    dim: usize,
    max_level: usize,
    components: BTreeMap<Word, T>,
}

impl<T: Scalar> FockVector<T> {
    pub fn zero(dim: usize, max_level: usize) -> Result<Self> {
        if dim == 0 || dim > u16::MAX as usize {
            return Err(Error::Shape(format!("unsupported base dimension {dim}")));
        }
        Ok(FockVector {
            dim,
            max_level,
            components: BTreeMap::new(),
        })
    }

    /// The vacuum vector.
    pub fn vacuum(dim: usize, max_level: usize) -> Result<Self> {
        let mut v = Self::zero(dim, max_level)?;
        v.components.insert(Word::new(), T::one());
        Ok(v)
    }

    /// Builds a vector from `(word, amplitude)` pairs; repeated words add up.
    pub fn from_components<I>(dim: usize, max_level: usize, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, T)>,
    {
        let mut v = Self::zero(dim, max_level)?;
        for (word, amp) in components {
            if word.len() > max_level {
                return Err(Error::Capacity(format!(
                    "word of length {} exceeds level bound {max_level}",
                    word.len()
                )));
            }
            if let Some(&bad) = word.iter().find(|&&l| l as usize >= dim) {
                return Err(Error::Shape(format!("letter {bad} outside 0..{dim}")));
            }
            v.accumulate(word, amp);
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn components(&self) -> &BTreeMap<Word, T> {
        &self.components
    }

    pub fn amplitude(&self, word: &[u16]) -> T {
        self.components.get(word).cloned().unwrap_or_else(T::zero)
    }

    pub fn vacuum_amplitude(&self) -> T {
        self.amplitude(&[])
    }

    /// Length of the longest stored word, zero for the zero vector.
    pub fn top_level(&self) -> usize {
        self.components.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn accumulate(&mut self, word: Word, amp: T) {
        if amp.is_zero() {
            return;
        }
        match self.components.remove(&word) {
            Some(prev) => {
                let sum = prev + amp;
                if !sum.is_zero() {
                    self.components.insert(word, sum);
                }
            }
            None => {
                self.components.insert(word, amp);
            }
        }
    }

    fn check_letter(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            return Err(Error::Shape(format!("letter {i} outside 0..{}", self.dim)));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "base dimensions differ: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Prepends letter `i` to every word.
    pub fn create(&self, i: usize) -> Result<Self> {
        self.check_letter(i)?;
        if !self.is_zero() && self.top_level() + 1 > self.max_level {
            return Err(Error::Capacity(format!(
                "creation would exceed level bound {}",
                self.max_level
            )));
        }
        let components = self
            .components
            .iter()
            .map(|(w, a)| {
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(i as u16);
                word.extend_from_slice(w);
                (word, a.clone())
            })
            .collect();
        Ok(FockVector {
            components,
            ..self.empty_like()
        })
    }

    /// Strips a leading letter `i`; words starting otherwise, and the vacuum,
    /// are annihilated.
    pub fn annihilate(&self, i: usize) -> Result<Self> {
        self.check_letter(i)?;
        let components = self
            .components
            .iter()
            .filter(|(w, _)| w.first() == Some(&(i as u16)))
            .map(|(w, a)| (w[1..].to_vec(), a.clone()))
            .collect();
        Ok(FockVector {
            components,
            ..self.empty_like()
        })
    }

    /// `(a_i + a_i^*) v`, i.e. `I(e_i) v`.
    pub fn semicircular(&self, i: usize) -> Result<Self> {
        self.create(i)?.add(&self.annihilate(i)?)
    }

    fn empty_like(&self) -> Self {
        FockVector {
            dim: self.dim,
            max_level: self.max_level,
            components: BTreeMap::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(&T::one(), other)
    }

    /// `self + alpha other`.
    pub fn axpy(&self, alpha: &T, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.max_level = self.max_level.max(other.max_level);
        for (w, a) in &other.components {
            out.accumulate(w.clone(), alpha.clone() * a.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, alpha: &T) -> Self {
        let mut out = self.empty_like();
        for (w, a) in &self.components {
            out.accumulate(w.clone(), alpha.clone() * a.clone());
        }
        out
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        let mut acc = T::zero();
        for (w, a) in &self.components {
            if let Some(b) = other.components.get(w) {
                acc = acc + a.conj() * b.clone();
            }
        }
        Ok(acc)
    }

    /// Drops every word longer than `len`.
    pub fn prune(&mut self, len: usize) {
        self.components.retain(|w, _| w.len() <= len);
    }
}

/// Applies the Wigner integral `I(f)` to `v`.
pub fn wigner_apply<T: Scalar>(f: &Kernel<T>, v: &FockVector<T>) -> Result<FockVector<T>> {
    if f.dim() != v.dim() {
        return Err(Error::Shape(format!(
            "kernel dimension {} differs from Fock base dimension {}",
            f.dim(),
            v.dim()
        )));
    }
    if !v.is_zero() && v.top_level() + f.order() > v.max_level() {
        return Err(Error::Capacity(format!(
            "applying an order-{} integral to level {} exceeds level bound {}",
            f.order(),
            v.top_level(),
            v.max_level()
        )));
    }
    Ok(apply_unfolded(&unfold(f)?, v, usize::MAX))
}

/// `I(f)` unfolded into normal-ordered terms `a*(c_1)..a*(c_k) a(..)`, keyed
/// by `(c, p)` where `p` is the word prefix the annihilators consume.
type Unfolded<T> = BTreeMap<(Word, Word), T>;

fn add_term<T: Scalar>(terms: &mut Unfolded<T>, key: (Word, Word), x: T) {
    let sum = match terms.remove(&key) {
        Some(prev) => prev + x,
        None => x,
    };
    if !sum.is_zero() {
        terms.insert(key, sum);
    }
}

/// Runs the recursion on operators instead of vectors, so it is paid once
/// per kernel. `a_i a*_j = delta_ij` keeps every product normal ordered.
fn unfold<T: Scalar>(f: &Kernel<T>) -> Result<Unfolded<T>> {
    let mut terms = Unfolded::new();
    if f.order() == 0 {
        let c = f.as_scalar().expect("order zero");
        if !c.is_zero() {
            terms.insert((Word::new(), Word::new()), c);
        }
        return Ok(terms);
    }
    for i in 0..f.dim() {
        let tail = first_slot(f, i)?;
        if tail.is_zero() {
            continue;
        }
        let letter = i as u16;
        for ((create, prefix), x) in unfold(&tail)? {
            let mut up = Vec::with_capacity(create.len() + 1);
            up.push(letter);
            up.extend_from_slice(&create);
            add_term(&mut terms, (up, prefix.clone()), x.clone());
            match create.first() {
                None => {
                    let mut longer = prefix;
                    longer.push(letter);
                    add_term(&mut terms, (create, longer), x);
                }
                Some(&c) if c == letter => add_term(&mut terms, (create[1..].to_vec(), prefix), x),
                Some(_) => {}
            }
        }
        if tail.order() >= 1 {
            let inner = first_slot(&tail, i)?;
            for (key, x) in unfold(&inner)? {
                add_term(&mut terms, key, -x);
            }
        }
    }
    Ok(terms)
}

/// Applies `terms` to `v`, never forming words longer than `keep`.
fn apply_unfolded<T: Scalar>(terms: &Unfolded<T>, v: &FockVector<T>, keep: usize) -> FockVector<T> {
    let mut by_prefix: HashMap<&[u16], Vec<(&[u16], &T)>> = HashMap::new();
    for ((create, prefix), x) in terms {
        by_prefix.entry(prefix).or_default().push((create, x));
    }
    let longest = by_prefix.keys().map(|p| p.len()).max().unwrap_or(0);
    let mut out: HashMap<Word, T> = HashMap::new();
    for (w, amp) in &v.components {
        for j in 0..=longest.min(w.len()) {
            let Some(list) = by_prefix.get(&w[..j]) else {
                continue;
            };
            for (create, x) in list {
                if create.len() + w.len() - j > keep {
                    continue;
                }
                let mut word = Vec::with_capacity(create.len() + w.len() - j);
                word.extend_from_slice(create);
                word.extend_from_slice(&w[j..]);
                let term = (*x).clone() * amp.clone();
                match out.get_mut(&word) {
                    Some(acc) => *acc = acc.clone() + term,
                    None => {
                        out.insert(word, term);
                    }
                }
            }
        }
    }
    let mut result = v.empty_like();
    result.components = out.into_iter().filter(|(_, a)| !a.is_zero()).collect();
    result
}

/// `g(j_2, ..., j_q) = f(i, j_2, ..., j_q)`.
fn first_slot<T: Scalar>(f: &Kernel<T>, i: usize) -> Result<Kernel<T>> {
    Kernel::basis(f.dim(), &[i])?.contract(f, 1)
}

/// Vacuum expectation `<Omega, I(f)^m Omega>` with level bound `max_level`.
///
/// The `k`-th application drops words longer than `q (m - k)`: the remaining
/// applications cannot bring them back to the vacuum.
pub fn oracle_moment<T: Scalar>(f: &Kernel<T>, m: usize, max_level: usize) -> Result<T> {
    let q = f.order();
    if max_level < q * m {
        return Err(Error::Capacity(format!(
            "level bound {max_level} below q * m = {}",
            q * m
        )));
    }
    let terms = unfold(f)?;
    let mut v = FockVector::vacuum(f.dim(), max_level)?;
    for k in 1..=m {
        v = apply_unfolded(&terms, &v, q * (m - k));
    }
    Ok(v.vacuum_amplitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poisson_kernel;
    use num_complex::Complex64;

    type V = FockVector<f64>;

    #[test]
    fn annihilation_inverts_creation_on_vacuum() {
        let omega = V::vacuum(3, 4).unwrap();
        assert_eq!(omega.create(1).unwrap().annihilate(1).unwrap(), omega);
        assert!(omega.annihilate(2).unwrap().is_zero());
        assert!(omega.create(0).unwrap().annihilate(1).unwrap().is_zero());
        assert!(omega.create(3).is_err());
    }

    #[test]
    fn semicircular_fourth_moment() {
        let mut v = V::vacuum(2, 4).unwrap();
        for _ in 0..4 {
            v = v.semicircular(0).unwrap();
        }
        assert_eq!(v.vacuum_amplitude(), 2.0);
    }

    #[test]
    fn creation_respects_level_bound() {
        let v = V::vacuum(2, 1).unwrap().create(0).unwrap();
        assert!(matches!(v.create(0), Err(Error::Capacity(_))));
    }

    #[test]
    fn integral_on_vacuum_is_the_kernel() {
        let f = Kernel::<f64>::from_dense(3, 2, (1..=8).map(|x| x as f64).collect()).unwrap();
        let v = wigner_apply(&f, &V::vacuum(2, 3).unwrap()).unwrap();
        for (idx, c) in f.iter_indexed() {
            let word: Word = idx.iter().map(|&i| i as u16).collect();
            assert_eq!(v.amplitude(&word), *c);
        }
        assert_eq!(v.components().len(), f.nnz());
        assert!(v.components().keys().all(|w| w.len() == 3));
    }

    #[test]
    fn scalar_kernel_scales() {
        let v = V::from_components(2, 3, [(vec![0, 1], 2.0), (vec![], -1.0)]).unwrap();
        let c = Kernel::scalar(1.5, 2).unwrap();
        assert_eq!(wigner_apply(&c, &v).unwrap(), v.scale(&1.5));
    }

    #[test]
    fn poisson_kernel_moments() {
        // sum_j p^j R_{m,j} for p = 2: 2, 2, 10, 22.
        let f = poisson_kernel::<f64>(2, 2).unwrap();
        let want = [2.0, 2.0, 10.0, 22.0];
        for (m, w) in (2..=5).zip(want) {
            assert_eq!(oracle_moment(&f, m, 2 * m).unwrap(), w, "m={m}");
        }
    }

    #[test]
    fn isometry_and_catalan() {
        let f = Kernel::<Complex64>::from_dense(
            2,
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        let m2 = oracle_moment(&f, 2, 4).unwrap();
        assert!((m2 - f.norm_sq()).norm() < 1e-14);
        let unit = Kernel::<f64>::from_dense(1, 2, vec![0.6, 0.8]).unwrap();
        assert!((oracle_moment(&unit, 6, 6).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn level_bound_is_enforced() {
        let f = poisson_kernel::<f64>(1, 1).unwrap();
        assert!(matches!(oracle_moment(&f, 3, 5), Err(Error::Capacity(_))));
        let v = V::vacuum(1, 1).unwrap();
        assert!(matches!(wigner_apply(&f, &v), Err(Error::Capacity(_))));
    }
}
