use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{check_dim, check_same, Result};
use crate::scalar::{cre, Real};

/// Structural tag carried alongside the matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Hermitian,
    AntiHermitian,
}

/// Dense complex `d x d` matrix on a truncated Fock basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
    symmetry: Symmetry,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
            symmetry: Symmetry::General,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut op = Self::zeros(dim)?;
        for n in 0..dim {
            op[(n, n)] = Complex::new(T::one(), T::zero());
        }
        op.symmetry = Symmetry::Hermitian;
        Ok(op)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Ok(Self {
            dim,
            data,
            symmetry: Symmetry::General,
        })
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Result<Self> {
        let dim = entries.len();
        let mut op = Self::zeros(dim)?;
        for (n, &v) in entries.iter().enumerate() {
            op[(n, n)] = v;
        }
        Ok(op)
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_dim(dim)?;
        check_same(dim * dim, data.len())?;
        Ok(Self {
            dim,
            data,
            symmetry: Symmetry::General,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Re-tags the operator. The tag is a claim, checked by `symmetry_residual`.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Self {
            dim: d,
            data,
            symmetry: self.symmetry,
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, n| acc + self[(n, n)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
            symmetry: Symmetry::General,
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        let mut out = self.scale(cre(s));
        out.symmetry = self.symmetry;
        out
    }

    /// `‖A - A†‖_F` for Hermitian tags, `‖A + A†‖_F` otherwise, relative to `‖A‖_F`.
    pub fn symmetry_residual(&self, symmetry: Symmetry) -> T {
        let d = self.dim;
        let mut acc = T::zero();
        for r in 0..d {
            for c in 0..d {
                let a = self.data[r * d + c];
                let b = self.data[c * d + r].conj();
                let diff = match symmetry {
                    Symmetry::AntiHermitian => a + b,
                    _ => a - b,
                };
                acc = acc + diff.norm_sqr();
            }
        }
        let norm = self.frobenius_norm();
        if norm == T::zero() {
            T::zero()
        } else {
            acc.sqrt() / norm
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_same(self.dim, rhs.dim)?;
        let d = self.dim;
        let mut out = vec![Complex::zero(); d * d];
        for i in 0..d {
            let out_row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * d..(k + 1) * d];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(Self {
            dim: d,
            data: out,
            symmetry: Symmetry::General,
        })
    }

    /// `A B A†`, the conjugation used for density-matrix evolution.
    pub fn conjugate(&self, inner: &Self) -> Result<Self> {
        let left = self.matmul(inner)?;
        let d = self.dim;
        let mut out = vec![Complex::zero(); d * d];
        // (L A†)_{ij} = sum_k L_ik conj(A_jk): row-by-row dot products
        for i in 0..d {
            let l_row = &left.data[i * d..(i + 1) * d];
            for j in 0..d {
                let a_row = &self.data[j * d..(j + 1) * d];
                let mut acc = Complex::zero();
                for (&l, &a) in l_row.iter().zip(a_row) {
                    acc = acc + l * a.conj();
                }
                out[i * d + j] = acc;
            }
        }
        Ok(Self {
            dim: d,
            data: out,
            symmetry: inner.symmetry,
        })
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_same(self.dim, v.len())?;
        Ok((0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect())
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut result = Self::identity(self.dim)?;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    /// Leading `m x m` block (Fock levels `0..m`).
    pub fn leading_block(&self, m: usize) -> Result<Self> {
        let m = m.min(self.dim);
        let mut out = Self::from_fn(m.max(2), |r, c| {
            if r < m && c < m {
                self[(r, c)]
            } else {
                Complex::zero()
            }
        })?;
        out.symmetry = self.symmetry;
        Ok(out)
    }

    /// `A B - B A`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// `‖U†U - I‖_F`.
    pub fn unitarity_defect(&self) -> T {
        let prod = self
            .adjoint()
            .matmul(self)
            .expect("adjoint preserves dimension");
        let id = Self::identity(self.dim).expect("dimension already validated");
        (&prod - &id).frobenius_norm()
    }
}

impl<T: Real> Index<(usize, usize)> for Operator<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Operator<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

fn zip_with<T: Real>(
    a: &Operator<T>,
    b: &Operator<T>,
    f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
) -> Operator<T> {
    assert_eq!(a.dim, b.dim, "operator dimension mismatch");
    let symmetry = if a.symmetry == b.symmetry {
        a.symmetry
    } else {
        Symmetry::General
    };
    Operator {
        dim: a.dim,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
        symmetry,
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: Self) -> Operator<T> {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: Self) -> Operator<T> {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<T: Real> Neg for &Operator<T> {
    type Output = Operator<T>;

    fn neg(self) -> Operator<T> {
        self.scale_real(-T::one())
    }
}

/// Panics on dimension mismatch; use [`Operator::matmul`] for a checked product.
impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: Self) -> Operator<T> {
        self.matmul(rhs).expect("operator dimension mismatch")
    }
}
