#![allow(dead_code)]

use freechaos::{BigRational, Complex64, Kernel};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_kernel(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> Kernel<Complex64> {
    let values = (0..dim.pow(order as u32))
        .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect();
    Kernel::from_dense(order, dim, values).unwrap()
}

pub fn symmetric_kernel(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> Kernel<Complex64> {
    let f = random_kernel(rng, order, dim);
    Kernel::axpy(&Complex64::one(), &f, &f.adjoint())
        .unwrap()
        .scale(&Complex64::new(0.5, 0.0))
}

/// Mirror-symmetric kernel with small integer coefficients, for exact runs.
pub fn symmetric_integer_kernel(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> Kernel<BigRational> {
    let values: Vec<BigRational> = (0..dim.pow(order as u32))
        .map(|_| BigRational::from_integer(rng.random_range(-3i64..=3).into()))
        .collect();
    let f = Kernel::from_dense(order, dim, values).unwrap();
    Kernel::axpy(&BigRational::one(), &f, &f.adjoint()).unwrap()
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}
