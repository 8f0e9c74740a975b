//! Moments of Wigner chaos elements by iterated contraction.
//!
//! Expanding `I(f)^m` with the multiplication formula produces one term per
//! admissible contraction sequence `(r_1, ..., r_{m-1})`. Only the sequences
//! that contract the running kernel all the way down to a scalar survive the
//! trace. Each surviving term is the scalar
//! `(..((f ~r_1 f) ~r_2 f) .. ) ~r_{m-1} f`, evaluated strictly left to right.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cumulant::centered_poisson_moment;
use crate::error::{check_range, Error, Result};
use crate::kernel::Kernel;
use crate::scalar::Scalar;

/// Mirror-symmetry tolerance for moment computations.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Tolerance on `||f_n||^2 = lambda` in convergence scans.
pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const MAX_SEQUENCE_LENGTH: usize = 8;

/// Which of the nested sets a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceSet {
    /// Every admissible sequence.
    A,
    /// Admissible and ending at degree zero.
    B,
    /// In `B` with every entry in `{0, q/2, q}`.
    D,
    /// `B` minus `D`.
    E,
}

/// Finest class a sequence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceClass {
    AOnly,
    BAndD,
    BAndE,
}

impl SequenceClass {
    pub fn label(&self) -> &'static str {
        match self {
            SequenceClass::AOnly => "A",
            SequenceClass::BAndD => "D",
            SequenceClass::BAndE => "E",
        }
    }

    pub fn belongs_to(&self, set: SequenceSet) -> bool {
        match set {
            SequenceSet::A => true,
            SequenceSet::B => *self != SequenceClass::AOnly,
            SequenceSet::D => *self == SequenceClass::BAndD,
            SequenceSet::E => *self == SequenceClass::BAndE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractionSequence {
    pub q: usize,
    pub r: Vec<usize>,
    pub class: SequenceClass,
}

impl ContractionSequence {
    /// Classifies `r` for chaos order `q`; errors if `r` is not admissible.
    pub fn new(q: usize, r: Vec<usize>) -> Result<Self> {
        let mut degree = q;
        for (k, &rk) in r.iter().enumerate() {
            if rk > q || rk > degree {
                return Err(Error::Classification(format!(
                    "r_{} = {rk} exceeds min(q = {q}, current degree {degree})",
                    k + 1
                )));
            }
            degree = degree + q - 2 * rk;
        }
        let class = if degree != 0 {
            SequenceClass::AOnly
        } else if r.iter().all(|&rk| rk == 0 || 2 * rk == q || rk == q) {
            SequenceClass::BAndD
        } else {
            SequenceClass::BAndE
        };
        Ok(ContractionSequence { q, r, class })
    }

    /// Number of factors `m = len + 1`.
    pub fn m(&self) -> usize {
        self.r.len() + 1
    }

    /// Degrees of the running kernel after each contraction.
    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = self.q;
        self.r
            .iter()
            .map(|&rk| {
                degree = degree + self.q - 2 * rk;
                degree
            })
            .collect()
    }

    /// Evaluates the left-to-right iterated contraction for kernel `f`.
    pub fn evaluate<T: Scalar>(&self, f: &Kernel<T>) -> Result<Kernel<T>> {
        if f.order() != self.q {
            return Err(Error::Shape(format!(
                "sequence is for order {}, kernel has order {}",
                self.q,
                f.order()
            )));
        }
        let mut acc = f.clone();
        for &rk in &self.r {
            acc = acc.contract(f, rk)?;
        }
        Ok(acc)
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.r.iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

fn check_sequence_bounds(q: usize, m: usize) -> Result<()> {
    if ![2, 4, 6].contains(&q) {
        return Err(Error::OutOfBounds {
            what: "q (one of 2, 4, 6)",
            value: q,
            min: 2,
            max: 6,
        });
    }
    check_range("m", m, 2, MAX_SEQUENCE_LENGTH)
}

/// Sequences of length `m - 1` in the requested set, lexicographic.
pub fn enumerate_sequences(q: usize, m: usize, set: SequenceSet) -> Result<Vec<ContractionSequence>> {
    check_sequence_bounds(q, m)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m - 1);
    extend_sequences(q, m - 1, q, &mut prefix, &mut |r| {
        let seq = ContractionSequence::new(q, r.to_vec()).expect("admissible by construction");
        if seq.class.belongs_to(set) {
            out.push(seq);
        }
    });
    Ok(out)
}

fn extend_sequences<F: FnMut(&[usize])>(
    q: usize,
    remaining: usize,
    degree: usize,
    prefix: &mut Vec<usize>,
    emit: &mut F,
) {
    if remaining == 0 {
        emit(prefix);
        return;
    }
    for rk in 0..=q.min(degree) {
        prefix.push(rk);
        extend_sequences(q, remaining - 1, degree + q - 2 * rk, prefix, emit);
        prefix.pop();
    }
}

/// `phi[I(f)^m]` split over the D and E classes.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    pub q: usize,
    pub m: usize,
    pub total: T,
    pub d_sum: T,
    pub e_sum: T,
    pub per_sequence: Vec<(ContractionSequence, T)>,
}

fn check_moment_input<T: Scalar>(f: &Kernel<T>) -> Result<()> {
    let q = f.order();
    if q == 0 || q % 2 == 1 {
        return Err(Error::Domain(format!("chaos order must be even and positive, got {q}")));
    }
    if !f.is_mirror_symmetric(SYMMETRY_TOL) {
        return Err(Error::Domain("kernel is not mirror symmetric".into()));
    }
    Ok(())
}

fn max_moment_order(q: usize) -> usize {
    if q == 2 {
        8
    } else {
        6
    }
}

/// Moment `phi[I(f)^m]` of a mirror-symmetric kernel of order 2 or 4.
///
/// Sequences are walked depth first so that shared prefixes are contracted
/// once; each term is still the plain left-to-right product, and terms are
/// reported in lexicographic order of their sequences.
pub fn wigner_moment<T: Scalar>(f: &Kernel<T>, m: usize) -> Result<MomentReport<T>> {
    check_moment_input(f)?;
    let q = f.order();
    if q > 4 {
        return Err(Error::OutOfBounds {
            what: "q",
            value: q,
            min: 2,
            max: 4,
        });
    }
    check_range("m", m, 2, max_moment_order(q))?;

    let mut per_sequence = Vec::new();
    let mut prefix = Vec::with_capacity(m - 1);
    walk_closing(f, f, m - 1, &mut prefix, &mut per_sequence)?;

    let mut d_sum = T::zero();
    let mut e_sum = T::zero();
    for (seq, v) in &per_sequence {
        match seq.class {
            SequenceClass::BAndD => d_sum = d_sum + v.clone(),
            SequenceClass::BAndE => e_sum = e_sum + v.clone(),
            SequenceClass::AOnly => unreachable!("walk only emits closing sequences"),
        }
    }
    Ok(MomentReport {
        q,
        m,
        total: d_sum.clone() + e_sum.clone(),
        d_sum,
        e_sum,
        per_sequence,
    })
}

fn walk_closing<T: Scalar>(
    f: &Kernel<T>,
    acc: &Kernel<T>,
    remaining: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<(ContractionSequence, T)>,
) -> Result<()> {
    let q = f.order();
    let degree = acc.order();
    if remaining == 0 {
        if degree == 0 {
            let seq = ContractionSequence::new(q, prefix.clone())?;
            out.push((seq, acc.as_scalar().expect("order zero")));
        }
        return Ok(());
    }
    for rk in 0..=q.min(degree) {
        let next_degree = degree + q - 2 * rk;
        // Each later step lowers the degree by at most q.
        if next_degree > (remaining - 1) * q {
            continue;
        }
        let next = acc.contract(f, rk)?;
        prefix.push(rk);
        walk_closing(f, &next, remaining - 1, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// `I(f) I(g) = sum_r I(f ~r g)`, keyed by the order `q + p - 2r`.
pub fn wigner_product_expand<T: Scalar>(f: &Kernel<T>, g: &Kernel<T>) -> Result<BTreeMap<usize, Kernel<T>>> {
    let mut out: BTreeMap<usize, Kernel<T>> = BTreeMap::new();
    for r in 0..=f.order().min(g.order()) {
        let term = f.contract(g, r)?;
        let order = term.order();
        let merged = match out.remove(&order) {
            Some(prev) => Kernel::axpy(&T::one(), &prev, &term)?,
            None => term,
        };
        out.insert(order, merged);
    }
    Ok(out)
}

/// `phi(F^4) - 2 phi(F^3)` for `F = I(f)`.
pub fn fourth_moment_statistic<T: Scalar>(f: &Kernel<T>) -> Result<T> {
    let m4 = wigner_moment(f, 4)?.total;
    let m3 = wigner_moment(f, 3)?.total;
    Ok(m4 - T::from_i64(2) * m3)
}

/// Squared norms measuring how far `f` is from a free Poisson fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonDefect<T> {
    /// `||f ~(q/2) f - f||^2`
    pub midpoint: T,
    /// `||f ~r f||^2` for `r` in `1..q` other than `q/2`.
    pub offband: BTreeMap<usize, T>,
}

impl<T: Scalar> PoissonDefect<T> {
    pub fn total(&self) -> T {
        self.offband
            .values()
            .fold(self.midpoint.clone(), |acc, v| acc + v.clone())
    }
}

pub fn poisson_defect<T: Scalar>(f: &Kernel<T>) -> Result<PoissonDefect<T>> {
    check_moment_input(f)?;
    let q = f.order();
    let midpoint = f.contract(f, q / 2)?.sub(f)?.norm_sq();
    let mut offband = BTreeMap::new();
    for r in (1..q).filter(|&r| 2 * r != q) {
        offband.insert(r, f.contract(f, r)?.norm_sq());
    }
    Ok(PoissonDefect { midpoint, offband })
}

/// Both sides of `phi[(F^2 - F)^2] = 2 lambda^2 + (defect norms)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourthMomentDecomposition<T> {
    /// `||f||^2`
    pub lambda: T,
    /// `phi(F^4) - 2 phi(F^3) + phi(F^2)` from the moment engine.
    pub lhs: T,
    /// Sum of the pieces below.
    pub rhs: T,
    /// `lambda^2`, from the constant term `f ~q f`.
    pub constant: T,
    /// `||f (x) f||^2`
    pub tensor_square: T,
    pub defect: PoissonDefect<T>,
}

pub fn fourth_moment_decomposition<T: Scalar>(f: &Kernel<T>) -> Result<FourthMomentDecomposition<T>> {
    let lambda = f.norm_sq();
    let lhs = wigner_moment(f, 4)?.total - T::from_i64(2) * wigner_moment(f, 3)?.total
        + wigner_moment(f, 2)?.total;
    let full = f
        .contract(f, f.order())?
        .as_scalar()
        .expect("full contraction is a scalar");
    let constant = full.modulus_sq();
    let tensor_square = f.tensor(f)?.norm_sq();
    let defect = poisson_defect(f)?;
    let rhs = constant.clone() + tensor_square.clone() + defect.total();
    Ok(FourthMomentDecomposition {
        lambda,
        lhs,
        rhs,
        constant,
        tensor_square,
        defect,
    })
}

/// Outcome of bounding one E-class term by its first off-band contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationCheck {
    /// `|value of the sequence|`
    pub term: f64,
    /// `||f ~r_j f||` for the first `r_j` outside `{0, q/2, q}`.
    pub bound_factor: f64,
    /// `(1 + ||f||)^(2m)`
    pub envelope: f64,
    pub holds: bool,
}

pub fn em_domination_check<T: Scalar>(f: &Kernel<T>, seq: &ContractionSequence) -> Result<DominationCheck> {
    check_moment_input(f)?;
    let q = f.order();
    let reclassified = ContractionSequence::new(q, seq.r.clone())?;
    if seq.q != q || reclassified.class != SequenceClass::BAndE {
        return Err(Error::Classification(format!(
            "{} is not an E-class sequence for order {q}",
            seq.display()
        )));
    }
    let term = seq
        .evaluate(f)?
        .as_scalar()
        .expect("closing sequence")
        .modulus();
    let first_offband = seq
        .r
        .iter()
        .copied()
        .find(|&r| r != 0 && r != q && 2 * r != q)
        .expect("E-class sequences have an off-band entry");
    let bound_factor = f.contract(f, first_offband)?.norm();
    let envelope = (1.0 + f.norm()).powi(2 * seq.m() as i32);
    Ok(DominationCheck {
        term,
        bound_factor,
        envelope,
        holds: term <= envelope * bound_factor,
    })
}

/// Built-in kernel families indexed by `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Constant `sum_{i < p} e_i (x) e_i` over `d` basis vectors.
    Poisson { p: usize, d: usize },
    /// `sqrt(lambda / n) sum_{i < n} e_i^(x)4` over `n` basis vectors.
    Semicircle4 { lambda: f64 },
}

impl Family {
    /// `||f_n||^2`, constant along the family.
    pub fn rate(&self) -> f64 {
        match *self {
            Family::Poisson { p, .. } => p as f64,
            Family::Semicircle4 { lambda } => lambda,
        }
    }

    pub fn kernel(&self, n: usize) -> Result<Kernel<Complex64>> {
        match *self {
            Family::Poisson { p, d } => crate::kernel::poisson_kernel(p, d),
            Family::Semicircle4 { lambda } => {
                if n == 0 {
                    return Err(Error::Domain("family index must be positive".into()));
                }
                let c = Complex64::new((lambda / n as f64).sqrt(), 0.0);
                Ok(Kernel::diagonal(n, 4, n)?.scale(&c))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub norm_sq: f64,
    pub statistic: f64,
    /// `|statistic - (2 lambda^2 - lambda)|`
    pub statistic_gap: f64,
    pub defect: PoissonDefect<f64>,
    /// `(m, phi[I(f_n)^m], |phi[I(f_n)^m] - phi[Z(lambda)^m]|)` for `2 <= m <= m_max`.
    pub moments: Vec<(usize, f64, f64)>,
}

/// Tabulates the fourth-moment statistic, the Poisson defect and the moment
/// gaps to the centered free Poisson law along a kernel family.
pub fn convergence_scan<F>(family: F, lambda: f64, m_max: usize, n_list: &[usize]) -> Result<Vec<ScanRow>>
where
    F: Fn(usize) -> Result<Kernel<Complex64>>,
{
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!("rate must be positive, got {lambda}")));
    }
    check_range("m_max", m_max, 2, MAX_SEQUENCE_LENGTH)?;
    let target_statistic = 2.0 * lambda * lambda - lambda;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let f = family(n)?;
        let norm_sq = f.norm_sq().re;
        if (norm_sq - lambda).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization {
                expected: lambda,
                found: norm_sq,
            });
        }
        let mut moments = Vec::new();
        let mut by_order = BTreeMap::new();
        for m in 2..=m_max.max(4) {
            let value = wigner_moment(&f, m)?.total.re;
            by_order.insert(m, value);
            if m <= m_max {
                let target = centered_poisson_moment(lambda, m)?;
                moments.push((m, value, (value - target).abs()));
            }
        }
        let statistic = by_order[&4] - 2.0 * by_order[&3];
        let defect = poisson_defect(&f)?;
        rows.push(ScanRow {
            n,
            norm_sq,
            statistic,
            statistic_gap: (statistic - target_statistic).abs(),
            defect: PoissonDefect {
                midpoint: defect.midpoint.re,
                offband: defect.offband.iter().map(|(r, v)| (*r, v.re)).collect(),
            },
            moments,
        });
    }
    Ok(rows)
}
