//! The Sasaki–Hirota generator for order `M`, the closed-form `M = 1`
//! unitary and the optimal interaction time.

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::fock::{
    annihilation_op, poisson_tail, quadrature_ops, unitary_from_generator, Operator, Symmetry,
    TRUNCATION_TAIL_TOL,
};
use crate::scalar::{count, factorial, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShParams<T> {
    /// Real amplitude `|α|`.
    pub alpha: T,
    /// Order `M ≥ 1`.
    pub order: usize,
    pub dim: usize,
}

impl<T: Real> ShParams<T> {
    /// Validates the parameters, including that `|−2α⟩` fits in `dim` levels.
    pub fn new(alpha: T, order: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "amplitude must be finite and nonnegative, got {alpha}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidArgument("order M must be at least 1".into()));
        }
        let mu = (lit::<T>(4.0) * alpha * alpha).to_f64().unwrap_or(f64::INFINITY);
        let tail = poisson_tail(mu, dim);
        if !(tail <= TRUNCATION_TAIL_TOL) {
            return Err(Error::TruncationOverflow { tail_mass: tail });
        }
        Ok(Self { alpha, order, dim })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShCoefficients<T> {
    /// `c_0 ..= c_M`
    pub c: Vec<T>,
    /// `d_1 ..= d_M`, stored from index 0.
    pub d: Vec<T>,
}

impl<T: Real> ShCoefficients<T> {
    pub fn order(&self) -> usize {
        self.d.len()
    }

    /// `d_n` for `1 ≤ n ≤ M`.
    pub fn d_n(&self, n: usize) -> T {
        self.d[n - 1]
    }
}

/// `c_n ∝ ⟨n|−2α⟩` normalized over `n ≤ M`, and `d_n = c_n / √(1 − c_0²)`.
pub fn coefficients<T: Real>(params: &ShParams<T>) -> Result<ShCoefficients<T>> {
    let alpha = params.alpha;
    if alpha == T::zero() {
        return Err(Error::DegenerateInput(
            "α = 0 gives c_0 = 1 and undefined d_n".into(),
        ));
    }
    let m = params.order;
    let mu = lit::<T>(4.0) * alpha * alpha;
    // Poisson weights μ^k/k!; the common factor e^{-μ} cancels in every ratio
    let weights: Vec<T> = (0..=m)
        .scan(T::one(), |w, k| {
            if k > 0 {
                *w = *w * mu / count::<T>(k);
            }
            Some(*w)
        })
        .collect();
    let total: T = weights.iter().fold(T::zero(), |a, &w| a + w);
    let excited: T = weights[1..].iter().fold(T::zero(), |a, &w| a + w);
    let norm = total.sqrt();
    let c: Vec<T> = (0..=m)
        .map(|n| (lit::<T>(-2.0) * alpha).powi(n as i32) / factorial::<T>(n).sqrt() / norm)
        .collect();
    // 1 - c_0² = excited / total, without cancellation at small α
    let s = (excited / total).sqrt();
    let d = c[1..].iter().map(|&cn| cn / s).collect();
    Ok(ShCoefficients { c, d })
}

/// `K = X − X†` with `X = Σ_l (−a†)^l a^l / l! · Σ_n d_n aⁿ/√n!`, both sums up to `M`.
///
/// Products are formed `3M` levels above the cutoff and then cut back, so the
/// result is the exact compression of `K` rather than a product of truncated
/// ladders (which is wrong in its top rows).
pub fn generator<T: Real>(params: &ShParams<T>) -> Result<Operator<T>> {
    let coeffs = coefficients(params)?;
    let m = params.order;
    let d = params.dim + 3 * m;
    let a = annihilation_op::<T>(d)?;
    let neg_ad = a.adjoint().scale_real(-T::one());

    let mut left = Operator::zeros(d)?;
    let mut ad_pow = Operator::identity(d)?;
    let mut a_pow = Operator::identity(d)?;
    for l in 0..=m {
        if l > 0 {
            ad_pow = &ad_pow * &neg_ad;
            a_pow = &a_pow * &a;
        }
        left = &left + &(&ad_pow * &a_pow).scale_real(T::one() / factorial::<T>(l));
    }

    let mut right = Operator::zeros(d)?;
    let mut a_pow = Operator::identity(d)?;
    for n in 1..=m {
        a_pow = &a_pow * &a;
        right = &right + &a_pow.scale_real(coeffs.d_n(n) / factorial::<T>(n).sqrt());
    }

    let x = &left * &right;
    Ok((&x - &x.adjoint())
        .leading_block(params.dim)?
        .with_symmetry(Symmetry::AntiHermitian))
}

/// Optimal interaction time, `t = −arctan √[(s − 1 + e)/(s + 1 − e)]` with
/// `e = e^{−4α²}`, `s = √(1 − e)`. Nonpositive.
pub fn optimal_time<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::DegenerateInput(format!(
            "optimal time needs α > 0, got {alpha}"
        )));
    }
    // with 1 − e = s² the ratio reduces to (1 − s)/(1 + s)
    let s = (-(lit::<T>(-4.0) * alpha * alpha).exp_m1()).sqrt();
    Ok(-((T::one() - s) / (T::one() + s)).sqrt().atan())
}

/// Anti-Hermitian `−4ip + 2ip³ + i(x²p + px²)`, the `M = 1` generator per unit
/// time, compressed exactly to `d` levels (built 3 levels larger, then cut).
pub fn m1_generator<T: Real>(d: usize) -> Result<Operator<T>> {
    check_dim(d)?;
    let (x, p) = quadrature_ops::<T>(d + 3)?;
    let x2 = &x * &x;
    let p3 = &(&p * &p) * &p;
    let h = &(&(&p3.scale_real(lit(2.0)) - &p.scale_real(lit(4.0))) + &(&x2 * &p)) + &(&p * &x2);
    Ok(h.scale(Complex::new(T::zero(), T::one()))
        .leading_block(d)?
        .with_symmetry(Symmetry::AntiHermitian))
}

/// `exp[(−4ip + 2ip³ + ix²p + ipx²) t]`.
pub fn exact_unitary_m1<T: Real>(t: T, d: usize) -> Result<Operator<T>> {
    let g = m1_generator::<T>(d)?.scale_real(t);
    unitary_from_generator(&g.with_symmetry(Symmetry::AntiHermitian))
}

/// `exp(t_opt · K)`: the receiver unitary of order `M`.
pub fn receiver_unitary<T: Real>(params: &ShParams<T>) -> Result<Operator<T>> {
    let t = optimal_time(params.alpha)?;
    let k = generator(params)?.scale_real(t);
    unitary_from_generator(&k.with_symmetry(Symmetry::AntiHermitian))
}
