//! Truncated Fock-space linear algebra.
//!
//! Quadrature convention: `a = x + i p`, so `[x, p] = i/2` and the vacuum has
//! `⟨x²⟩ = ⟨p²⟩ = 1/4`.

mod eigen;
mod operator;
mod state;

use num_complex::Complex;
use num_traits::Zero;

pub use eigen::HermitianEigen;
pub use operator::{Operator, Symmetry};
pub use state::{DensityMatrix, StateVector};

use crate::error::{check_dim, check_same, Error, Result};
use crate::scalar::{count, lit, Real};

/// Default truncation for mean photon numbers up to 0.5.
pub const DEFAULT_DIM: usize = 40;

/// Largest tail mass a coherent state may lose to truncation.
pub const TRUNCATION_TAIL_TOL: f64 = 1e-10;

/// `⟨n-1|a|n⟩ = √n`.
pub fn annihilation_op<T: Real>(d: usize) -> Result<Operator<T>> {
    let mut a = Operator::zeros(d)?;
    for n in 1..d {
        a[(n - 1, n)] = Complex::new(count::<T>(n).sqrt(), T::zero());
    }
    Ok(a)
}

pub fn creation_op<T: Real>(d: usize) -> Result<Operator<T>> {
    Ok(annihilation_op::<T>(d)?.adjoint())
}

pub fn number_op<T: Real>(d: usize) -> Result<Operator<T>> {
    let diag: Vec<_> = (0..d)
        .map(|n| Complex::new(count::<T>(n), T::zero()))
        .collect();
    Ok(Operator::diagonal(&diag)?.with_symmetry(Symmetry::Hermitian))
}

/// `(x, p)` with `x = (a + a†)/2`, `p = (a - a†)/(2i)`.
pub fn quadrature_ops<T: Real>(d: usize) -> Result<(Operator<T>, Operator<T>)> {
    let a = annihilation_op::<T>(d)?;
    let ad = a.adjoint();
    let half = lit::<T>(0.5);
    let x = (&a + &ad).scale_real(half).with_symmetry(Symmetry::Hermitian);
    // (a - a†)/(2i) = -i/2 (a - a†)
    let p = (&a - &ad)
        .scale(Complex::new(T::zero(), -half))
        .with_symmetry(Symmetry::Hermitian);
    Ok((x, p))
}

/// Poisson mass `Σ_{n≥d} e^{-μ} μⁿ/n!` lost when a coherent state of mean
/// photon number `mu` is truncated to `d` levels.
pub fn poisson_tail(mu: f64, d: usize) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    // log of the first neglected term, then a forward recurrence
    let log_fact: f64 = (1..=d).map(|k| (k as f64).ln()).sum();
    let mut term = (-mu + d as f64 * mu.ln() - log_fact).exp();
    let mut tail = 0.0;
    let mut n = d;
    while term > tail * 1e-17 && n < d + 10_000 {
        tail += term;
        n += 1;
        term *= mu / n as f64;
        if term == 0.0 {
            break;
        }
    }
    tail
}

/// Coherent state `|α⟩` from its closed-form Fock amplitudes, renormalized.
///
/// Fails with [`Error::TruncationOverflow`] when more than 1e-10 of the
/// photon-number distribution lies at or above `d`.
pub fn coherent_state<T: Real>(alpha: Complex<T>, d: usize) -> Result<StateVector<T>> {
    Ok(coherent_state_with_tail(alpha, d)?.0)
}

/// Like [`coherent_state`], also returning the truncated tail mass.
pub fn coherent_state_with_tail<T: Real>(
    alpha: Complex<T>,
    d: usize,
) -> Result<(StateVector<T>, f64)> {
    check_dim(d)?;
    let mu = alpha.norm_sqr().to_f64().unwrap_or(f64::INFINITY);
    let tail = poisson_tail(mu, d);
    if !(tail <= TRUNCATION_TAIL_TOL) {
        return Err(Error::TruncationOverflow { tail_mass: tail });
    }
    let mut amps = Vec::with_capacity(d);
    let mut amp = Complex::new((-alpha.norm_sqr() * lit::<T>(0.5)).exp(), T::zero());
    amps.push(amp);
    for n in 1..d {
        amp = amp * alpha / count::<T>(n).sqrt();
        amps.push(amp);
    }
    Ok((StateVector::new(amps)?, tail))
}

/// Spectral form of an anti-Hermitian `G`: the decomposition of `H = -iG`,
/// so that `exp(sG) = exp(i s H)` for any real `s`.
pub fn anti_hermitian_spectrum<T: Real>(g: &Operator<T>) -> Result<HermitianEigen<T>> {
    let residual = g.symmetry_residual(Symmetry::AntiHermitian);
    if residual > lit::<T>(1e-10) {
        return Err(Error::NotAntiHermitian {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let h = g
        .scale(Complex::new(T::zero(), -T::one()))
        .with_symmetry(Symmetry::Hermitian);
    HermitianEigen::new(&h)
}

/// `exp(G)` for anti-Hermitian `G`.
pub fn unitary_from_generator<T: Real>(g: &Operator<T>) -> Result<Operator<T>> {
    Ok(anti_hermitian_spectrum(g)?.exp_i(T::one()))
}

/// Kronecker product; the second factor's index runs fastest.
pub fn tensor_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    let (da, db) = (a.dim(), b.dim());
    let sym = if a.symmetry() == Symmetry::Hermitian && b.symmetry() == Symmetry::Hermitian {
        Symmetry::Hermitian
    } else {
        Symmetry::General
    };
    Ok(Operator::from_fn(da * db, |r, c| {
        a[(r / db, c / db)] * b[(r % db, c % db)]
    })?
    .with_symmetry(sym))
}

/// Traces out the second factor of a state on `d1·d2` levels.
pub fn partial_trace_second<T: Real>(rho: &DensityMatrix<T>, d2: usize) -> Result<DensityMatrix<T>> {
    check_dim(d2)?;
    let total = rho.dim();
    if total % d2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: (total / d2 + 1) * d2,
            found: total,
        });
    }
    let d1 = total / d2;
    let op = rho.as_operator();
    let out = Operator::from_fn(d1, |r, c| {
        (0..d2).fold(Complex::zero(), |acc, k| acc + op[(r * d2 + k, c * d2 + k)])
    })?;
    Ok(DensityMatrix::new_unchecked(out))
}

/// `‖A - B‖_F`.
pub fn frobenius_distance<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<T> {
    block_distance(a, b, a.dim())
}

/// `‖A - B‖_F` restricted to Fock levels `0..m`.
pub fn block_distance<T: Real>(a: &Operator<T>, b: &Operator<T>, m: usize) -> Result<T> {
    check_same(a.dim(), b.dim())?;
    let m = m.min(a.dim());
    let mut acc = T::zero();
    for r in 0..m {
        for c in 0..m {
            acc = acc + (a[(r, c)] - b[(r, c)]).norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

/// `‖A‖_F` on Fock levels `0..m`.
pub fn block_norm<T: Real>(a: &Operator<T>, m: usize) -> T {
    let m = m.min(a.dim());
    let mut acc = T::zero();
    for r in 0..m {
        for c in 0..m {
            acc = acc + a[(r, c)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Leading block size used when asserting exact operator identities at
/// dimension `d`: one tenth of the levels, at least two.
///
/// Cubic generators couple level `n` to `n ± 3`, so their exponentials are
/// distorted far below the cutoff; a tenth of the space stays clean at the
/// strengths exercised here.
pub fn identity_block(d: usize) -> usize {
    (d / 10).max(2)
}

/// Largest leading block (at most three quarters of `d`) on which the
/// operator-valued `f` agrees between dimensions `d` and `2d` to relative
/// accuracy `rel`.
pub fn converged_block<T: Real>(
    f: impl Fn(usize) -> Result<Operator<T>>,
    d: usize,
    rel: f64,
) -> Result<usize> {
    let a = f(d)?;
    let b = f(2 * d)?;
    let floor = lit::<T>(1e-12);
    let rel = lit::<T>(rel);
    let mut m = (3 * d) / 4;
    while m >= 2 {
        let bb = b.leading_block(m)?;
        let diff = (0..m)
            .flat_map(|r| (0..m).map(move |c| (r, c)))
            .fold(T::zero(), |acc, (r, c)| acc + (a[(r, c)] - bb[(r, c)]).norm_sqr())
            .sqrt();
        if diff <= rel * block_norm(&bb, m) + floor {
            return Ok(m);
        }
        m -= 1;
    }
    Err(Error::Numeric(format!(
        "no leading block is stable under doubling d = {d}"
    )))
}

/// Outcome of recomputing a scalar at twice the truncation dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport<T> {
    pub dim: usize,
    pub value: T,
    pub value_doubled: T,
    pub delta: T,
    pub converged: bool,
}

/// Tolerance of the doubling check.
pub const DOUBLING_TOL: f64 = 1e-8;

/// Evaluates `f` at `d` and `2d`; converged when the two differ by at most `tol`.
pub fn doubling_check<T: Real>(
    f: impl Fn(usize) -> Result<T>,
    d: usize,
    tol: f64,
) -> Result<ConvergenceReport<T>> {
    check_dim(d)?;
    let value = f(d)?;
    let value_doubled = f(2 * d)?;
    let delta = (value - value_doubled).abs();
    Ok(ConvergenceReport {
        dim: d,
        value,
        value_doubled,
        delta,
        converged: delta <= lit::<T>(tol),
    })
}
