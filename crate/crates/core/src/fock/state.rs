use num_complex::Complex;
use num_traits::Zero;

use super::eigen::HermitianEigen;
use super::operator::{Operator, Symmetry};
use crate::error::{check_dim, check_same, Error, Result};
use crate::scalar::{lit, Real};

/// Normalized pure state on a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Normalizes `amplitudes`; the zero vector is rejected.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "state vector must have finite nonzero norm".into(),
            ));
        }
        let inv = T::one() / norm;
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Number state `|n⟩`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::InvalidArgument(format!(
                "Fock level {n} outside truncation {dim}"
            )));
        }
        let mut amps = vec![Complex::zero(); dim];
        amps[n] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes: amps })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_same(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |acc, (&a, &b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `U|ψ⟩`, renormalized to absorb roundoff.
    pub fn evolve(&self, u: &Operator<T>) -> Result<Self> {
        Self::new(u.apply(&self.amplitudes)?)
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, a: &Operator<T>) -> Result<Complex<T>> {
        let av = a.apply(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&av)
            .fold(Complex::zero(), |acc, (&x, &y)| acc + x.conj() * y))
    }

    pub fn populations(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        let d = self.dim();
        let op = Operator::from_fn(d, |r, c| self.amplitudes[r] * self.amplitudes[c].conj())
            .expect("dimension validated at construction")
            .with_symmetry(Symmetry::Hermitian);
        DensityMatrix { op }
    }
}

/// Unit-trace positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (min eigenvalue ≥ -1e-10).
    pub fn new(op: Operator<T>) -> Result<Self> {
        let rho = Self::new_unchecked(op);
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; for channel outputs whose invariants hold by construction.
    pub fn new_unchecked(op: Operator<T>) -> Self {
        Self {
            op: op.with_symmetry(Symmetry::Hermitian),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.op.symmetry_residual(Symmetry::Hermitian);
        if herm > lit::<T>(1e-12) {
            return Err(Error::InvalidArgument(format!(
                "density matrix not Hermitian (residual {herm:e})"
            )));
        }
        let tr = self.op.trace();
        if (tr.re - T::one()).abs() > lit::<T>(1e-10) || tr.im.abs() > lit::<T>(1e-10) {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} differs from one"
            )));
        }
        let min = self.min_eigenvalue()?;
        if min < lit::<T>(-1e-10) {
            return Err(Error::InvalidArgument(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        let eig = HermitianEigen::new(&self.op)?;
        Ok(eig.values[0])
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }

    pub fn trace(&self) -> T {
        self.op.trace().re
    }

    /// `tr(ρ A)`.
    pub fn expectation(&self, a: &Operator<T>) -> Result<Complex<T>> {
        check_same(self.dim(), a.dim())?;
        let d = self.dim();
        let mut acc = Complex::zero();
        for r in 0..d {
            for c in 0..d {
                acc = acc + self.op[(r, c)] * a[(c, r)];
            }
        }
        Ok(acc)
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &Operator<T>) -> Result<Self> {
        Ok(Self::new_unchecked(u.conjugate(&self.op)?))
    }

    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|n| self.op[(n, n)].re).collect()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with_pure(&self, psi: &StateVector<T>) -> Result<T> {
        check_same(self.dim(), psi.dim())?;
        let rho_psi = self.op.apply(psi.amplitudes())?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(&rho_psi)
            .fold(Complex::zero(), |acc, (&a, &b)| acc + a.conj() * b)
            .re)
    }
}
