//! Elementary continuous-variable gates and their matrices on a truncated basis.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{check_dim, Error, Result};
use crate::fock::{
    annihilation_op, block_distance, identity_block, quadrature_ops, unitary_from_generator,
    HermitianEigen, Operator, Symmetry,
};
use crate::scalar::{count, lit, Real};

/// One elementary gate. Real strengths `s` stand for `exp(i s G)` with the
/// generator `G` named by the variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec<T> {
    /// `exp(i s x)`
    LinearX(T),
    /// `exp(i s p)`
    LinearP(T),
    /// `exp(i s x²)`
    QuadraticX(T),
    /// `exp(i s p²)`
    QuadraticP(T),
    /// `exp(i s x³)`
    CubicX(T),
    /// `exp(i s p³)`
    CubicP(T),
    /// `exp(i r (xp + px))`; `r > 0` contracts the x quadrature by `e^{-r}`.
    Squeeze(T),
    /// Quarter turn in phase space, `exp(iπ n/2)`: maps `x -> p` under `F · F†`.
    Fourier,
    /// `exp(β a† - β* a)`
    Displacement(Complex<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateClass {
    Linear,
    Quadratic,
    Cubic,
    Other,
}

impl<T: Real> GateSpec<T> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            GateSpec::LinearX(_) => "linear-x",
            GateSpec::LinearP(_) => "linear-p",
            GateSpec::QuadraticX(_) => "quadratic-x",
            GateSpec::QuadraticP(_) => "quadratic-p",
            GateSpec::CubicX(_) => "cubic-x",
            GateSpec::CubicP(_) => "cubic-p",
            GateSpec::Squeeze(_) => "squeeze",
            GateSpec::Fourier => "fourier",
            GateSpec::Displacement(_) => "displacement",
        }
    }

    pub fn class(&self) -> GateClass {
        match self {
            GateSpec::LinearX(_) | GateSpec::LinearP(_) => GateClass::Linear,
            GateSpec::QuadraticX(_) | GateSpec::QuadraticP(_) => GateClass::Quadratic,
            GateSpec::CubicX(_) | GateSpec::CubicP(_) => GateClass::Cubic,
            _ => GateClass::Other,
        }
    }

    pub fn is_cubic(&self) -> bool {
        self.class() == GateClass::Cubic
    }

    /// Real strength, if the gate has one.
    pub fn strength(&self) -> Option<T> {
        match *self {
            GateSpec::LinearX(s)
            | GateSpec::LinearP(s)
            | GateSpec::QuadraticX(s)
            | GateSpec::QuadraticP(s)
            | GateSpec::CubicX(s)
            | GateSpec::CubicP(s)
            | GateSpec::Squeeze(s) => Some(s),
            GateSpec::Fourier | GateSpec::Displacement(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            GateSpec::Fourier => true,
            GateSpec::Displacement(b) => b.re.is_finite() && b.im.is_finite(),
            _ => self.strength().is_some_and(|s| s.is_finite()),
        }
    }

    /// Inverse as a single gate; `None` for the Fourier gate, whose inverse is `F³`.
    pub fn inverse(&self) -> Option<Self> {
        Some(match *self {
            GateSpec::LinearX(s) => GateSpec::LinearX(-s),
            GateSpec::LinearP(s) => GateSpec::LinearP(-s),
            GateSpec::QuadraticX(s) => GateSpec::QuadraticX(-s),
            GateSpec::QuadraticP(s) => GateSpec::QuadraticP(-s),
            GateSpec::CubicX(s) => GateSpec::CubicX(-s),
            GateSpec::CubicP(s) => GateSpec::CubicP(-s),
            GateSpec::Squeeze(r) => GateSpec::Squeeze(-r),
            GateSpec::Displacement(b) => GateSpec::Displacement(-b),
            GateSpec::Fourier => return None,
        })
    }
}

impl<T: Real> fmt::Display for GateSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateSpec::Fourier => write!(f, "fourier"),
            GateSpec::Displacement(b) => write!(f, "displacement {:.16e} {:.16e}", b.re, b.im),
            _ => write!(
                f,
                "{} {:.16e}",
                self.kind_name(),
                self.strength().expect("parametrized gate")
            ),
        }
    }
}

impl<T: Real + FromStr> FromStr for GateSpec<T> {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty gate line".into()))?;
        let mut num = || -> Result<T> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::InvalidArgument(format!("gate `{kind}` needs a strength")))?;
            tok.parse::<T>()
                .map_err(|_| Error::InvalidArgument(format!("bad gate strength `{tok}`")))
        };
        let gate = match kind {
            "linear-x" => GateSpec::LinearX(num()?),
            "linear-p" => GateSpec::LinearP(num()?),
            "quadratic-x" => GateSpec::QuadraticX(num()?),
            "quadratic-p" => GateSpec::QuadraticP(num()?),
            "cubic-x" => GateSpec::CubicX(num()?),
            "cubic-p" => GateSpec::CubicP(num()?),
            "squeeze" => GateSpec::Squeeze(num()?),
            "fourier" => GateSpec::Fourier,
            "displacement" => {
                let re = num()?;
                let im = num()?;
                GateSpec::Displacement(Complex::new(re, im))
            }
            other => return Err(Error::InvalidArgument(format!("unknown gate kind `{other}`"))),
        };
        if parts.next().is_some() {
            return Err(Error::InvalidArgument(format!("trailing tokens in `{line}`")));
        }
        if !gate.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite strength in `{line}`")));
        }
        Ok(gate)
    }
}

/// Ordered gate list; element 0 acts on the state first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSequence<T> {
    pub gates: Vec<GateSpec<T>>,
}

impl<T: Real> GateSequence<T> {
    pub fn new(gates: Vec<GateSpec<T>>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GateSpec<T>> {
        self.gates.iter()
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: &Self) -> Self {
        self.gates.extend_from_slice(&other.gates);
        self
    }

    /// The sequence repeated `k` times.
    pub fn repeat(&self, k: usize) -> Self {
        Self {
            gates: self.gates.repeat(k),
        }
    }

    /// Sequence undoing `self`.
    pub fn inverse(&self) -> Self {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            match g.inverse() {
                Some(inv) => gates.push(inv),
                None => gates.extend([GateSpec::Fourier; 3]),
            }
        }
        Self { gates }
    }
}

impl<T: Real> fmt::Display for GateSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl<T: Real + FromStr> FromStr for GateSequence<T> {
    type Err = Error;

    /// One gate per line; blank lines and `#` comments are skipped.
    fn from_str(text: &str) -> Result<Self> {
        let gates = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<_>>()?;
        Ok(Self { gates })
    }
}

impl<T> FromIterator<GateSpec<T>> for GateSequence<T> {
    fn from_iter<I: IntoIterator<Item = GateSpec<T>>>(iter: I) -> Self {
        Self {
            gates: iter.into_iter().collect(),
        }
    }
}

/// Quadrature matrices at a fixed dimension with lazily cached spectra.
///
/// Powers of the truncated `x` share its eigenvectors, so one decomposition
/// per quadrature serves the linear, quadratic and cubic gates alike.
#[derive(Debug)]
pub struct GateBasis<T: Real> {
    dim: usize,
    x: Operator<T>,
    p: Operator<T>,
    x_eig: OnceLock<Result<HermitianEigen<T>>>,
    p_eig: OnceLock<Result<HermitianEigen<T>>>,
    squeeze_eig: OnceLock<Result<HermitianEigen<T>>>,
}

impl<T: Real> GateBasis<T> {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let (x, p) = quadrature_ops(dim)?;
        Ok(Self {
            dim,
            x,
            p,
            x_eig: OnceLock::new(),
            p_eig: OnceLock::new(),
            squeeze_eig: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &Operator<T> {
        &self.x
    }

    pub fn p(&self) -> &Operator<T> {
        &self.p
    }

    fn spectrum<'a>(
        cell: &'a OnceLock<Result<HermitianEigen<T>>>,
        build: impl FnOnce() -> Result<HermitianEigen<T>>,
    ) -> Result<&'a HermitianEigen<T>> {
        cell.get_or_init(build).as_ref().map_err(Clone::clone)
    }

    pub fn x_spectrum(&self) -> Result<&HermitianEigen<T>> {
        Self::spectrum(&self.x_eig, || HermitianEigen::new(&self.x))
    }

    pub fn p_spectrum(&self) -> Result<&HermitianEigen<T>> {
        Self::spectrum(&self.p_eig, || HermitianEigen::new(&self.p))
    }

    /// Spectrum of `xp + px`.
    pub fn squeeze_spectrum(&self) -> Result<&HermitianEigen<T>> {
        Self::spectrum(&self.squeeze_eig, || {
            let g = (&(&self.x * &self.p) + &(&self.p * &self.x)).with_symmetry(Symmetry::Hermitian);
            HermitianEigen::new(&g)
        })
    }

    pub fn gate_matrix(&self, g: &GateSpec<T>) -> Result<Operator<T>> {
        if !g.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite gate {g}")));
        }
        let phase = |s: T, k: i32| move |l: T| Complex::from_polar(T::one(), s * l.powi(k));
        Ok(match *g {
            GateSpec::LinearX(s) => self.x_spectrum()?.map(phase(s, 1)),
            GateSpec::QuadraticX(s) => self.x_spectrum()?.map(phase(s, 2)),
            GateSpec::CubicX(s) => self.x_spectrum()?.map(phase(s, 3)),
            GateSpec::LinearP(s) => self.p_spectrum()?.map(phase(s, 1)),
            GateSpec::QuadraticP(s) => self.p_spectrum()?.map(phase(s, 2)),
            GateSpec::CubicP(s) => self.p_spectrum()?.map(phase(s, 3)),
            GateSpec::Squeeze(r) => self.squeeze_spectrum()?.exp_i(r),
            GateSpec::Fourier => fourier_matrix(self.dim)?,
            GateSpec::Displacement(b) => displacement_matrix(b, self.dim)?,
        })
    }

    /// Product of the member matrices with element 0 rightmost.
    pub fn sequence_matrix(&self, seq: &GateSequence<T>) -> Result<Operator<T>> {
        let mut iter = seq.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty gate sequence".into()))?;
        let mut u = self.gate_matrix(first)?;
        for g in iter {
            u = self.gate_matrix(g)?.matmul(&u)?;
        }
        Ok(u)
    }
}

/// Diagonal quarter-turn `exp(iπ n/2)`.
pub fn fourier_matrix<T: Real>(d: usize) -> Result<Operator<T>> {
    let entries: Vec<_> = (0..d)
        .map(|n| Complex::from_polar(T::one(), T::FRAC_PI_2() * count::<T>(n)))
        .collect();
    Operator::diagonal(&entries)
}

/// `exp(β a† - β* a)`.
pub fn displacement_matrix<T: Real>(beta: Complex<T>, d: usize) -> Result<Operator<T>> {
    let a = annihilation_op::<T>(d)?;
    let g = (&a.adjoint().scale(beta) - &a.scale(beta.conj())).with_symmetry(Symmetry::AntiHermitian);
    unitary_from_generator(&g)
}

pub fn gate_matrix<T: Real>(g: &GateSpec<T>, d: usize) -> Result<Operator<T>> {
    GateBasis::new(d)?.gate_matrix(g)
}

pub fn sequence_matrix<T: Real>(seq: &GateSequence<T>, d: usize) -> Result<Operator<T>> {
    GateBasis::new(d)?.sequence_matrix(seq)
}

/// Residual of `e^{itx³} e^{isp²} e^{-itx³} = exp[is(p - (3/2)t x²)²]` on the
/// identity block of dimension `d`.
pub fn conjugation_identity_check<T: Real>(t: T, s: T, d: usize) -> Result<T> {
    conjugation_identity_residual(t, s, d, identity_block(d))
}

/// As [`conjugation_identity_check`] on Fock levels `0..m`.
pub fn conjugation_identity_residual<T: Real>(t: T, s: T, d: usize, m: usize) -> Result<T> {
    let basis = GateBasis::new(d)?;
    let lhs = basis.sequence_matrix(&GateSequence::new(vec![
        GateSpec::CubicX(-t),
        GateSpec::QuadraticP(s),
        GateSpec::CubicX(t),
    ]))?;
    let x2 = basis.x() * basis.x();
    let q = (basis.p() - &x2.scale_real(lit::<T>(1.5) * t)).with_symmetry(Symmetry::Hermitian);
    let rhs = HermitianEigen::new(&q)?.map(|l| Complex::from_polar(T::one(), s * l * l));
    block_distance(&lhs, &rhs, m)
}
