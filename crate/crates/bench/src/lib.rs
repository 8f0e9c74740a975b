//! Fixtures shared by the benchmarks.

use freechaos::{Complex64, Kernel};

/// Deterministic mirror-symmetric kernel with entries in `[-1, 1]`.
pub fn symmetric_kernel(order: usize, dim: usize) -> Kernel<Complex64> {
    let len = dim.pow(order as u32);
    let values = (0..len)
        .map(|i| {
            let x = (i as f64 * 0.618_033_988_749_895).fract() * 2.0 - 1.0;
            let y = (i as f64 * 0.414_213_562_373_095).fract() * 2.0 - 1.0;
            Complex64::new(x, y)
        })
        .collect();
    let f = Kernel::from_dense(order, dim, values).expect("valid shape");
    Kernel::axpy(&Complex64::new(1.0, 0.0), &f, &f.adjoint())
        .expect("same shape")
        .scale(&Complex64::new(0.5, 0.0))
}
