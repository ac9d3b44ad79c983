//! Photon loss and imperfect on/off detection.

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::fock::{
    partial_trace_second, tensor_product, DensityMatrix, HermitianEigen, Operator, StateVector,
    Symmetry,
};
use crate::scalar::{count, lit, Real};

/// On/off detector with dark-count parameter `nu` and quantum efficiency `eta_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel<T> {
    pub nu: T,
    pub eta_q: T,
}

impl<T: Real> DetectorModel<T> {
    pub fn new(nu: T, eta_q: T) -> Result<Self> {
        if !(nu >= T::zero()) || !nu.is_finite() {
            return Err(Error::InvalidArgument(format!("dark-count parameter ν = {nu} must be ≥ 0")));
        }
        if !(eta_q >= T::zero() && eta_q <= T::one()) {
            return Err(Error::InvalidArgument(format!("quantum efficiency η_q = {eta_q} outside [0, 1]")));
        }
        Ok(Self { nu, eta_q })
    }

    pub fn ideal() -> Self {
        Self {
            nu: T::zero(),
            eta_q: T::one(),
        }
    }

    pub fn is_ideal(&self) -> bool {
        self.nu == T::zero() && self.eta_q == T::one()
    }

    /// `⟨m|Π_off|m⟩ = e^{−ν}(1 − η_q)^m`.
    pub fn no_click(&self, m: usize) -> T {
        let base = T::one() - self.eta_q;
        let pow = if m == 0 { T::one() } else { base.powi(m as i32) };
        (-self.nu).exp() * pow
    }
}

/// Per-gate beamsplitter loss with reflectivity `eta_bs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossModel<T> {
    pub eta_bs: T,
}

impl<T: Real> LossModel<T> {
    pub fn new(eta_bs: T) -> Result<Self> {
        if !(eta_bs >= T::zero() && eta_bs < T::one()) {
            return Err(Error::InvalidArgument(format!("reflectivity η_BS = {eta_bs} outside [0, 1)")));
        }
        Ok(Self { eta_bs })
    }

    pub fn lossless() -> Self {
        Self { eta_bs: T::zero() }
    }

    pub fn transmissivity(&self) -> T {
        T::one() - self.eta_bs
    }

    pub fn is_lossless(&self) -> bool {
        self.eta_bs == T::zero()
    }
}

/// `(Π_off, Π_on)`: diagonal no-click operator and its complement.
pub fn detector_povm<T: Real>(m: &DetectorModel<T>, d: usize) -> Result<(Operator<T>, Operator<T>)> {
    check_dim(d)?;
    let off: Vec<_> = (0..d).map(|n| Complex::new(m.no_click(n), T::zero())).collect();
    let on: Vec<_> = off.iter().map(|z| Complex::new(T::one() - z.re, T::zero())).collect();
    Ok((
        Operator::diagonal(&off)?.with_symmetry(Symmetry::Hermitian),
        Operator::diagonal(&on)?.with_symmetry(Symmetry::Hermitian),
    ))
}

/// Kraus completeness target for the truncated loss map.
pub const KRAUS_COMPLETENESS: f64 = 1e-14;

/// Kraus weights `w[k][n] = √(C(n,k) T^{n−k} (1−T)^k)` for `E_k|n⟩ = w[k][n] |n−k⟩`,
/// keeping the fewest `k` that reach completeness `1 − 1e-14` on every level.
pub fn loss_kraus_weights(transmissivity: f64, d: usize) -> Result<Vec<Vec<f64>>> {
    check_dim(d)?;
    let t = transmissivity;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!("transmissivity {t} outside (0, 1]")));
    }
    let mut log_fact = vec![0.0f64; d];
    for n in 1..d {
        log_fact[n] = log_fact[n - 1] + (n as f64).ln();
    }
    let log_r = (1.0 - t).ln();
    let log_t = t.ln();
    let mut weights = Vec::new();
    let mut completeness = vec![0.0f64; d];
    for k in 0..d {
        let w: Vec<f64> = (0..d)
            .map(|n| {
                if n < k {
                    return 0.0;
                }
                if k == 0 {
                    return t.powi(n as i32).sqrt();
                }
                let log_p = log_fact[n] - log_fact[k] - log_fact[n - k]
                    + (n - k) as f64 * log_t
                    + k as f64 * log_r;
                (0.5 * log_p).exp()
            })
            .collect();
        for (c, wn) in completeness.iter_mut().zip(&w) {
            *c += wn * wn;
        }
        weights.push(w);
        if completeness.iter().all(|&c| c >= 1.0 - KRAUS_COMPLETENESS) {
            break;
        }
    }
    Ok(weights)
}

/// Pure-loss channel of transmissivity `transmissivity` in Kraus form.
pub fn loss_channel<T: Real>(transmissivity: T, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let d = rho.dim();
    let weights = loss_kraus_weights(transmissivity.to_f64().unwrap_or(f64::NAN), d)?;
    Ok(apply_kraus_weights(&weights, rho))
}

/// Applies precomputed [`loss_kraus_weights`] to `rho`.
pub fn apply_kraus_weights<T: Real>(weights: &[Vec<f64>], rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let d = rho.dim();
    let src = rho.as_operator();
    let mut out = Operator::zeros(d).expect("dimension from a valid state");
    for (k, w) in weights.iter().enumerate() {
        let wk: Vec<T> = w.iter().map(|&v| lit::<T>(v)).collect();
        // (E_k ρ E_k†)_{ij} = w_k(i+k) w_k(j+k) ρ_{i+k, j+k}
        for i in 0..d - k {
            let wi = wk[i + k];
            for j in 0..d - k {
                out[(i, j)] = out[(i, j)] + src[(i + k, j + k)] * (wi * wk[j + k]);
            }
        }
    }
    DensityMatrix::new_unchecked(out)
}

/// Ancilla population allowed to fall outside the oracle's ancilla truncation.
pub const ANCILLA_LEAK_TOL: f64 = 1e-10;

/// Reference loss model: a two-mode beamsplitter with transmitted amplitude
/// `√T` mixes `rho` with an ancilla vacuum, and the ancilla is traced out.
///
/// The beamsplitter conserves total photon number, so its unitary is
/// assembled exactly from one exponential per photon-number block; only the
/// ancilla register is truncated, to `d_anc` levels.
pub fn beamsplitter_loss_oracle<T: Real>(
    transmissivity: T,
    rho: &DensityMatrix<T>,
    d_anc: usize,
) -> Result<DensityMatrix<T>> {
    if d_anc < 8 {
        return Err(Error::InvalidArgument(format!("ancilla needs at least 8 levels, got {d_anc}")));
    }
    if !(transmissivity > T::zero() && transmissivity <= T::one()) {
        return Err(Error::InvalidArgument(format!("transmissivity {transmissivity} outside (0, 1]")));
    }
    let d = rho.dim();
    let theta = transmissivity.sqrt().acos();
    let joint_dim = d * d_anc;
    // columns (n, 0) of the beamsplitter; all other inputs are never populated
    let mut v = Operator::zeros(joint_dim)?;
    v[(0, 0)] = Complex::new(T::one(), T::zero());
    for total in 1..d {
        let block = photon_block_unitary::<T>(total, theta)?;
        // block basis index j <-> |j, total − j⟩; input |total, 0⟩ is j = total
        for j in 0..=total {
            let anc = total - j;
            if anc < d_anc {
                v[(j * d_anc + anc, total * d_anc)] = block[(j, total)];
            }
        }
    }
    let vac = StateVector::<T>::vacuum(d_anc)?.to_density();
    let input = tensor_product(rho.as_operator(), vac.as_operator())?;
    let output = DensityMatrix::new_unchecked(v.conjugate(&input)?);
    let leaked = T::one() - output.trace();
    if leaked > lit::<T>(ANCILLA_LEAK_TOL) {
        return Err(Error::TruncationOverflow {
            tail_mass: leaked.to_f64().unwrap_or(f64::NAN),
        });
    }
    partial_trace_second(&output, d_anc)
}

/// `exp[θ(a b† − a† b)]` on the span of `|j, N − j⟩`, `j = 0..=N`, for `N ≥ 1`.
fn photon_block_unitary<T: Real>(total: usize, theta: T) -> Result<Operator<T>> {
    let n = total + 1;
    // H = −i(a b† − a† b) is Hermitian; a b†|j, m⟩ = √j √(m+1) |j−1, m+1⟩
    let mut h = Operator::<T>::zeros(n)?;
    for j in 1..=total {
        let m = total - j;
        let amp = (count::<T>(j) * count::<T>(m + 1)).sqrt();
        // ⟨j−1, m+1| a b† |j, m⟩ = amp, and the adjoint term mirrors it
        h[(j - 1, j)] = h[(j - 1, j)] + Complex::new(T::zero(), -amp);
        h[(j, j - 1)] = h[(j, j - 1)] + Complex::new(T::zero(), amp);
    }
    let h = h.with_symmetry(Symmetry::Hermitian);
    Ok(HermitianEigen::new(&h)?.exp_i(theta))
}

impl<T: Real> Default for DetectorModel<T> {
    fn default() -> Self {
        Self::ideal()
    }
}

impl<T: Real> Default for LossModel<T> {
    fn default() -> Self {
        Self::lossless()
    }
}
