mod common;

use common::{close, random_kernel, rng, symmetric_kernel};
use freechaos::fock::Word;
use freechaos::{
    catalan, oracle_moment, poisson_kernel, wigner_apply, wigner_moment, Complex64, FockVector, Kernel,
};
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, max_len: usize, level: usize) -> FockVector<Complex64> {
    let count = rng.random_range(1..=12usize);
    let components: Vec<(Word, Complex64)> = (0..count)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            let word = (0..len).map(|_| rng.random_range(0..dim) as u16).collect();
            (word, Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        })
        .collect();
    FockVector::from_components(dim, level, components).unwrap()
}

fn distance(a: &FockVector<Complex64>, b: &FockVector<Complex64>) -> f64 {
    let diff = a.axpy(&-Complex64::one(), b).unwrap();
    diff.inner(&diff).unwrap().re.sqrt()
}

#[test]
fn poisson_kernel_vacuum_moments() {
    // sum_j p^j R_{m,j} for m = 2..5.
    let expected = [[1.0, 1.0, 3.0, 6.0], [2.0, 2.0, 10.0, 22.0], [3.0, 3.0, 21.0, 48.0]];
    for (p, row) in (1..=3usize).zip(expected) {
        let f = poisson_kernel::<f64>(p, 3).unwrap();
        for (m, want) in (2..=5).zip(row) {
            assert_eq!(oracle_moment(&f, m, 2 * m).unwrap(), want, "p={p} m={m}");
        }
    }
}

#[test]
fn first_chaos_moments_are_catalan() {
    let f = Kernel::<f64>::from_dense(1, 3, vec![0.48, 0.6, 0.64]).unwrap();
    for m in 1..=8usize {
        let want = if m % 2 == 1 { 0.0 } else { catalan(m / 2).to_string().parse().unwrap() };
        assert!((oracle_moment(&f, m, m).unwrap() - want).abs() < 1e-12, "m={m}");
    }
}

#[test]
fn free_generators_have_vanishing_alternating_moments() {
    // Centered polynomials P(s_i) = s_i^k - phi(s^k), alternating between two letters.
    let mut rng = rng(21);
    for _ in 0..40 {
        let len = rng.random_range(2..=6usize);
        let first = rng.random_range(0..2usize);
        let mut v = FockVector::<f64>::vacuum(2, 3 * len).unwrap();
        for slot in 0..len {
            let letter = (first + slot) % 2;
            let k = rng.random_range(1..=3usize);
            let centre = if k % 2 == 0 { catalan(k / 2).to_string().parse().unwrap() } else { 0.0 };
            let mut power = v.clone();
            for _ in 0..k {
                power = power.semicircular(letter).unwrap();
            }
            v = power.axpy(&-centre, &v).unwrap();
        }
        assert!(v.vacuum_amplitude().abs() < 1e-12);
    }
}

#[test]
fn level_bound_overflow_is_reported() {
    let f = poisson_kernel::<f64>(2, 2).unwrap();
    let v = FockVector::vacuum(2, 3).unwrap();
    let once = wigner_apply(&f, &v).unwrap();
    assert!(wigner_apply(&f, &once).is_err());
    assert!(oracle_moment(&f, 4, 7).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symmetric_integrals_are_self_adjoint(seed in any::<u64>(), q in 1usize..=4, d in 1usize..=3) {
        let mut rng = rng(seed);
        let f = if q == 1 {
            random_kernel(&mut rng, 1, d).map(|c| Complex64::new(c.re, 0.0))
        } else {
            symmetric_kernel(&mut rng, q, d)
        };
        let level = 3 + q;
        let u = random_vector(&mut rng, d, 3, level);
        let v = random_vector(&mut rng, d, 3, level);
        let lhs = u.inner(&wigner_apply(&f, &v).unwrap()).unwrap();
        let rhs = wigner_apply(&f, &u).unwrap().inner(&v).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn product_formula_on_the_vacuum(seed in any::<u64>(), q in 0usize..=4, p in 0usize..=4, d in 1usize..=3) {
        let mut rng = rng(seed);
        let f = random_kernel(&mut rng, q, d);
        let g = random_kernel(&mut rng, p, d);
        let omega = FockVector::vacuum(d, q + p).unwrap();
        let lhs = wigner_apply(&f, &wigner_apply(&g, &omega).unwrap()).unwrap();
        let mut rhs = FockVector::zero(d, q + p).unwrap();
        for r in 0..=q.min(p) {
            rhs = rhs.add(&wigner_apply(&f.contract(&g, r).unwrap(), &omega).unwrap()).unwrap();
        }
        let scale = rhs.inner(&rhs).unwrap().re.sqrt().max(1.0);
        prop_assert!(distance(&lhs, &rhs) <= 1e-10 * scale);
    }

    #[test]
    fn vacuum_image_is_the_kernel(seed in any::<u64>(), q in 0usize..=4, d in 1usize..=3) {
        let f = random_kernel(&mut rng(seed), q, d);
        let v = wigner_apply(&f, &FockVector::vacuum(d, q).unwrap()).unwrap();
        prop_assert_eq!(v.components().len(), f.nnz());
        for (idx, c) in f.iter_indexed() {
            let word: Word = idx.iter().map(|&i| i as u16).collect();
            prop_assert_eq!(v.amplitude(&word), *c);
        }
    }

    #[test]
    fn pruning_is_exact(seed in any::<u64>(), q in 1usize..=4, d in 1usize..=2, m in 2usize..=5) {
        let f = random_kernel(&mut rng(seed), q, d);
        prop_assert_eq!(oracle_moment(&f, m, q * m).unwrap(), oracle_moment(&f, m, q * m + 2).unwrap());
    }

    #[test]
    fn oracle_agrees_with_contractions(seed in any::<u64>(), q in prop::sample::select(vec![2usize, 4]), d in 1usize..=2, m in 2usize..=5) {
        let f = symmetric_kernel(&mut rng(seed), q, d);
        let engine = wigner_moment(&f, m).unwrap().total;
        let oracle = oracle_moment(&f, m, q * m).unwrap();
        prop_assert!(close(oracle, engine, 1e-9));
    }
}
