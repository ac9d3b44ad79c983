//! Capacity of the binary channel a receiver induces, and photon information efficiency.

use crate::error::{Error, Result};
use crate::optimize::minimize_scalar;
use crate::receivers::helstrom;
use crate::scalar::{lit, Real};

/// `H₂(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy<T: Real>(p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    Ok(plogp(p) + plogp(T::one() - p))
}

fn plogp<T: Real>(p: T) -> T {
    if p == T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}

/// Crossover probabilities: `p01 = P(decide − | + sent)`, `p10 = P(decide + | − sent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryChannel<T> {
    pub p01: T,
    pub p10: T,
}

impl<T: Real> BinaryChannel<T> {
    pub fn new(p01: T, p10: T) -> Result<Self> {
        for p in [p01, p10] {
            if !(p >= T::zero() && p <= T::one()) {
                return Err(Error::InvalidArgument(format!("transition probability {p} outside [0, 1]")));
            }
        }
        Ok(Self { p01, p10 })
    }

    pub fn symmetric(p: T) -> Result<Self> {
        Self::new(p, p)
    }

    /// `I(X;Y)` in bits for prior `q = P(+)`.
    pub fn mutual_information(&self, q: T) -> T {
        let one = T::one();
        let y_plus = q * (one - self.p01) + (one - q) * self.p10;
        let h = |p: T| plogp(p) + plogp(one - p);
        let clamp = |p: T| p.max(T::zero()).min(one);
        h(clamp(y_plus)) - q * h(self.p01) - (one - q) * h(self.p10)
    }
}

/// Capacity in bits and the optimal prior `P(+)`, by golden-section search on the prior.
pub fn bac_capacity<T: Real>(ch: &BinaryChannel<T>) -> Result<(T, T)> {
    let report = minimize_scalar(
        |q| Ok(-ch.mutual_information(lit::<T>(q)).to_f64().unwrap_or(f64::NAN)),
        0.0,
        1.0,
        1e-10,
    )?;
    let q = lit::<T>(report.best_point[0]);
    Ok((ch.mutual_information(q).max(T::zero()), q))
}

/// Capacity from the square-channel formula `C = log₂ Σ_j 2^{c_j}` with
/// `c = −W⁻¹ h`, `h_i` the entropy of row `i` of the transition matrix `W`.
/// The optimal output law is `r_j = 2^{c_j − C}`, which fixes the prior.
pub fn bac_capacity_closed_form<T: Real>(ch: &BinaryChannel<T>) -> Result<(T, T)> {
    let one = T::one();
    let det = one - ch.p01 - ch.p10;
    if det.abs() < lit(1e-15) {
        // rows coincide: the output carries no information
        return Ok((T::zero(), lit(0.5)));
    }
    let h0 = binary_entropy(ch.p01)?;
    let h1 = binary_entropy(ch.p10)?;
    // W = [[1−p01, p01], [p10, 1−p10]], W⁻¹ = [[1−p10, −p01], [−p10, 1−p01]] / det
    let c0 = -((one - ch.p10) * h0 - ch.p01 * h1) / det;
    let c1 = -(-ch.p10 * h0 + (one - ch.p01) * h1) / det;
    let two = lit::<T>(2.0);
    let capacity = (two.powf(c0) + two.powf(c1)).log2();
    let r0 = two.powf(c0 - capacity);
    let q = ((r0 - ch.p10) / det).max(T::zero()).min(one);
    Ok((capacity, q))
}

/// Bits per photon: `capacity / n̄`.
pub fn pie<T: Real>(ch: &BinaryChannel<T>, nbar: T) -> Result<T> {
    if !(nbar > T::zero()) {
        return Err(Error::InvalidArgument(format!("mean photon number must be positive, got {nbar}")));
    }
    Ok(bac_capacity(ch)?.0 / nbar)
}

/// Symbol-by-symbol bound `(1 − H₂(p_Helstrom(α)))/α²`.
pub fn pie_bound<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidArgument(format!("amplitude must be positive, got {alpha}")));
    }
    Ok((T::one() - binary_entropy(helstrom(alpha))?) / (alpha * alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5f64).unwrap() - 1.0).abs() < 1e-15);
        for p in [0.01f64, 0.2, 0.37] {
            assert!((binary_entropy(p).unwrap() - binary_entropy(1.0 - p).unwrap()).abs() < 1e-15);
        }
        assert!(binary_entropy(1.2).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn symmetric_channels() {
        for p in [0.0f64, 0.05, 0.3] {
            let ch = BinaryChannel::symmetric(p).unwrap();
            let (c, q) = bac_capacity(&ch).unwrap();
            assert!((c - (1.0 - binary_entropy(p).unwrap())).abs() < 1e-12);
            assert!((q - 0.5).abs() < 1e-4);
            let (cc, qc) = bac_capacity_closed_form(&ch).unwrap();
            assert!((cc - c).abs() < 1e-12 && (qc - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn asymmetric_channel_against_grid_scan() {
        let ch = BinaryChannel::new(0.1f64, 0.3).unwrap();
        let (c, q) = bac_capacity(&ch).unwrap();
        let (cc, qc) = bac_capacity_closed_form(&ch).unwrap();
        assert!((c - cc).abs() <= 1e-9);
        assert!((q - qc).abs() <= 1e-4);
        // grid oracle at 1e-6 resolution
        let best = (0..=1_000_000)
            .map(|k| ch.mutual_information(k as f64 * 1e-6))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best - cc).abs() <= 1e-9);
    }

    #[test]
    fn useless_channel() {
        let ch = BinaryChannel::new(0.4f64, 0.6).unwrap();
        assert!(bac_capacity(&ch).unwrap().0.abs() < 1e-12);
        assert_eq!(bac_capacity_closed_form(&ch).unwrap().0, 0.0);
    }

    #[test]
    fn pie_reductions() {
        let p = 0.07f64;
        let ch = BinaryChannel::symmetric(p).unwrap();
        let nbar = 0.2;
        let v = pie(&ch, nbar).unwrap();
        assert!((v - (1.0 - binary_entropy(p).unwrap()) / nbar).abs() < 1e-10);
        assert!(pie(&ch, 0.0).is_err());
        assert!(pie_bound(0.0).is_err());
    }
}
