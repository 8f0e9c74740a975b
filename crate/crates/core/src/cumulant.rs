//! Free cumulants and moments linked through sums over non-crossing partitions.
//!
//! Sequences are 1-indexed in the mathematical sense: `values[0]` holds the
//! first cumulant / moment. The numeric mode is the type parameter: use
//! [`BigRational`](num_rational::BigRational) for exact identities and `f64`
//! otherwise.

use crate::error::{check_range, Error, Result};
use crate::partition::{riordan_refined_row, visit_nc, MAX_ENUMERATION};
use crate::scalar::Scalar;

/// Free cumulants `k_1..k_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantSequence<T> {
    values: Vec<T>,
}

/// Moments `mu_1..mu_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<T> {
    values: Vec<T>,
}

macro_rules! sequence_common {
    ($name:ident) => {
        impl<T: Scalar> $name<T> {
            pub fn new(values: Vec<T>) -> Result<Self> {
                if values.is_empty() {
                    return Err(Error::Shape(concat!(stringify!($name), " must be non-empty").into()));
                }
                Ok(Self { values })
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                false
            }

            /// The `m`-th entry, 1-based.
            pub fn get(&self, m: usize) -> &T {
                &self.values[m - 1]
            }

            pub fn values(&self) -> &[T] {
                &self.values
            }

            pub fn into_values(self) -> Vec<T> {
                self.values
            }
        }
    };
}

sequence_common!(CumulantSequence);
sequence_common!(MomentSequence);

fn block_product<T: Scalar>(kappa: &[T], blocks: &[Vec<usize>]) -> T {
    let mut prod = T::one();
    for b in blocks {
        prod = prod * kappa[b.len() - 1].clone();
    }
    prod
}

/// `mu_m = sum over NC(m) of the product of k_{|b|}` for `m = 1..=order`.
pub fn moments_from_cumulants<T: Scalar>(
    kappa: &CumulantSequence<T>,
    order: usize,
) -> Result<MomentSequence<T>> {
    check_range("order", order, 1, MAX_ENUMERATION)?;
    if kappa.len() < order {
        return Err(Error::Shape(format!(
            "{} cumulants given, {order} needed",
            kappa.len()
        )));
    }
    let mut moments = Vec::with_capacity(order);
    for m in 1..=order {
        let mut acc = T::zero();
        visit_nc(m, |blocks| acc = acc.clone() + block_product(&kappa.values, blocks))?;
        moments.push(acc);
    }
    MomentSequence::new(moments)
}

/// Inverts [`moments_from_cumulants`] by forward recursion: the one-block
/// partition contributes `k_m` with coefficient one, every other partition
/// only involves cumulants of lower order.
pub fn cumulants_from_moments<T: Scalar>(
    mu: &MomentSequence<T>,
    order: usize,
) -> Result<CumulantSequence<T>> {
    check_range("order", order, 1, MAX_ENUMERATION)?;
    if mu.len() < order {
        return Err(Error::Shape(format!(
            "{} moments given, {order} needed",
            mu.len()
        )));
    }
    let mut kappa: Vec<T> = Vec::with_capacity(order);
    for m in 1..=order {
        let mut rest = T::zero();
        visit_nc(m, |blocks| {
            if blocks.len() > 1 {
                rest = rest.clone() + block_product(&kappa, blocks);
            }
        })?;
        kappa.push(mu.get(m).clone() - rest);
    }
    CumulantSequence::new(kappa)
}

/// Cumulants of the semicircular law of variance `t`: only `k_2 = t`.
pub fn semicircle_cumulants<T: Scalar>(t: T, len: usize) -> Result<CumulantSequence<T>> {
    check_range("length", len, 1, usize::MAX)?;
    let values = (1..=len)
        .map(|m| if m == 2 { t.clone() } else { T::zero() })
        .collect();
    CumulantSequence::new(values)
}

/// Free Poisson cumulants: every `k_m = lambda`; centering zeroes `k_1`.
pub fn free_poisson_cumulants<T: Scalar>(
    lambda: T,
    centered: bool,
    len: usize,
) -> Result<CumulantSequence<T>> {
    check_positive(&lambda)?;
    check_range("length", len, 1, usize::MAX)?;
    let values = (1..=len)
        .map(|m| {
            if centered && m == 1 {
                T::zero()
            } else {
                lambda.clone()
            }
        })
        .collect();
    CumulantSequence::new(values)
}

/// `phi[Z(lambda)^m] = sum_j lambda^j R_{m,j}` for the centered free Poisson law.
pub fn centered_poisson_moment<T: Scalar>(lambda: T, m: usize) -> Result<T> {
    check_positive(&lambda)?;
    check_range("m", m, 1, MAX_ENUMERATION)?;
    let row = riordan_refined_row(m)?;
    let mut acc = T::zero();
    for (j, count) in row.iter().enumerate().skip(1) {
        acc = acc + lambda.powu(j as u32) * T::from_biguint(count);
    }
    Ok(acc)
}

/// Entrywise sum: the cumulants of a sum of freely independent variables.
pub fn additivity_check<T: Scalar>(
    a: &CumulantSequence<T>,
    b: &CumulantSequence<T>,
) -> Result<CumulantSequence<T>> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "cumulant lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.clone() + y.clone())
        .collect();
    CumulantSequence::new(values)
}

fn check_positive<T: Scalar>(lambda: &T) -> Result<()> {
    let z = lambda.to_complex();
    if z.re > 0.0 && z.im == 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("rate must be positive, got {z}")))
    }
}
