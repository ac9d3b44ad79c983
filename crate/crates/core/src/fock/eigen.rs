//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Every unitary in the crate is `V diag(e^{i s λ}) V†` for some Hermitian
//! generator with spectrum `λ`, so one decomposition serves every strength `s`.

use num_complex::Complex;
use num_traits::Zero;

use super::operator::{Operator, Symmetry};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const MAX_SWEEPS: usize = 60;

/// Spectral decomposition `H = V diag(values) V†` of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Eigenvectors stored as columns.
    pub vectors: Operator<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn new(h: &Operator<T>) -> Result<Self> {
        let n = h.dim();
        let herm_tol = lit::<T>(1e-10);
        let residual = h.symmetry_residual(Symmetry::Hermitian);
        if residual > herm_tol {
            return Err(Error::InvalidArgument(format!(
                "eigensolver needs a Hermitian matrix (relative residual {residual:e})"
            )));
        }

        // symmetrize so the rotations see an exactly Hermitian matrix
        let mut a: Vec<Complex<T>> = vec![Complex::zero(); n * n];
        let half = lit::<T>(0.5);
        for r in 0..n {
            for c in 0..n {
                a[r * n + c] = (h[(r, c)] + h[(c, r)].conj()) * half;
            }
        }
        let mut v = Operator::identity(n)?;
        let scale = h.frobenius_norm().max(T::min_positive_value());
        let tol = T::epsilon() * scale;

        let mut converged = false;
        for sweep in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a, n);
            if off <= tol {
                converged = true;
                break;
            }
            // skip rotations on negligible entries during early sweeps
            let threshold = if sweep < 3 {
                lit::<T>(0.2) * off / count_pairs::<T>(n)
            } else {
                T::zero()
            };
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let mag = apq.norm();
                    if mag == T::zero() {
                        continue;
                    }
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let negligible = T::epsilon() * lit::<T>(0.01);
                    if sweep > 3 && mag <= negligible * (app.abs() + aqq.abs()) {
                        a[p * n + q] = Complex::zero();
                        a[q * n + p] = Complex::zero();
                        continue;
                    }
                    if mag <= threshold {
                        continue;
                    }
                    rotate(&mut a, &mut v, n, p, q, apq, mag, app, aqq);
                }
            }
        }
        if !converged && off_diagonal_norm(&a, n) > tol * lit::<T>(1e3) {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})"
            )));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[i * n + i]
                .re
                .partial_cmp(&a[j * n + j].re)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| a[i * n + i].re).collect();
        let vectors = Operator::from_fn(n, |r, c| v[(r, order[c])])?;
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        let n = self.dim();
        let fv: Vec<Complex<T>> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        // W = V diag(f), then W V†
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            let vi = v.row(i);
            let wi: Vec<Complex<T>> = vi.iter().zip(&fv).map(|(&x, &y)| x * y).collect();
            for j in 0..n {
                let vj = v.row(j);
                let mut acc = Complex::zero();
                for (&w, &x) in wi.iter().zip(vj) {
                    acc = acc + w * x.conj();
                }
                out[i * n + j] = acc;
            }
        }
        Operator::from_row_major(n, out).expect("dimension carried from eigensolver")
    }

    /// `exp(i s H)`.
    pub fn exp_i(&self, s: T) -> Operator<T> {
        self.map(|l| Complex::from_polar(T::one(), s * l))
    }

    /// Reassembles `H`; used to validate decompositions.
    pub fn reconstruct(&self) -> Operator<T> {
        self.map(|l| Complex::new(l, T::zero()))
            .with_symmetry(Symmetry::Hermitian)
    }
}

fn count_pairs<T: Real>(n: usize) -> T {
    lit::<T>((n * n) as f64)
}

fn off_diagonal_norm<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let mut acc = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc = acc + a[r * n + c].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-iφ}) R(θ)` acting on
/// the `(p, q)` plane, updating `A <- U† A U` and `V <- V U`.
#[allow(clippy::too_many_arguments)]
fn rotate<T: Real>(
    a: &mut [Complex<T>],
    v: &mut Operator<T>,
    n: usize,
    p: usize,
    q: usize,
    apq: Complex<T>,
    mag: T,
    app: T,
    aqq: T,
) {
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (lit::<T>(2.0) * mag);
    let t = {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let ph_conj = phase.conj(); // e^{-iφ}

    // U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q)
    let u_pp = Complex::new(cs, T::zero());
    let u_pq = Complex::new(sn, T::zero());
    let u_qp = ph_conj * (-sn);
    let u_qq = ph_conj * cs;

    // A <- A U (columns p, q)
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * u_pp + akq * u_qp;
        a[k * n + q] = akp * u_pq + akq * u_qq;
    }
    // A <- U† A (rows p, q)
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[p * n + q] = Complex::zero();
    a[q * n + p] = Complex::zero();
    a[p * n + p] = Complex::new(a[p * n + p].re, T::zero());
    a[q * n + q] = Complex::new(a[q * n + q].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> Operator<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let raw = Operator::from_fn(n, |_, _| Complex::new(next(), next())).unwrap();
        (&raw + &raw.adjoint()).with_symmetry(Symmetry::Hermitian)
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(2, 1), (5, 2), (17, 3), (40, 4)] {
            let h = random_hermitian(n, seed);
            let eig = HermitianEigen::new(&h).unwrap();
            let err = (&eig.reconstruct() - &h).frobenius_norm();
            assert!(err < 1e-12 * h.frobenius_norm().max(1.0), "n={n} err={err:e}");
            assert!(eig.vectors.unitarity_defect() < 1e-12);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let h = Operator::diagonal(&[
            Complex::new(3.0, 0.0),
            Complex::new(-1.0, 0.0),
            Complex::new(2.0, 0.0),
        ])
        .unwrap();
        let eig = HermitianEigen::new(&h).unwrap();
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn degenerate_spectrum() {
        // 2x2 block [[0, i], [-i, 0]] has eigenvalues ±1, padded with a repeated 1
        let mut h = Operator::<f64>::zeros(3).unwrap();
        h[(0, 1)] = Complex::new(0.0, 1.0);
        h[(1, 0)] = Complex::new(0.0, -1.0);
        h[(2, 2)] = Complex::new(1.0, 0.0);
        let eig = HermitianEigen::new(&h).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!((eig.values[2] - 1.0).abs() < 1e-14);
        assert!((&eig.reconstruct() - &h).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = Operator::<f64>::zeros(2).unwrap();
        h[(0, 1)] = Complex::new(1.0, 0.0);
        assert!(HermitianEigen::new(&h).is_err());
    }

    #[test]
    fn exp_i_is_unitary_and_inverse_pairs() {
        let h = random_hermitian(12, 9);
        let eig = HermitianEigen::new(&h).unwrap();
        let u = eig.exp_i(0.7);
        let w = eig.exp_i(-0.7);
        assert!(u.unitarity_defect() < 1e-12);
        let id = Operator::identity(12).unwrap();
        assert!((&(&u * &w) - &id).frobenius_norm() < 1e-12);
    }

    #[test]
    fn single_precision_path() {
        let h64 = random_hermitian(8, 5);
        let h32 = Operator::<f32>::from_fn(8, |r, c| {
            let z = h64[(r, c)];
            Complex::new(z.re as f32, z.im as f32)
        })
        .unwrap();
        let eig = HermitianEigen::new(&h32).unwrap();
        assert!((&eig.reconstruct() - &h32).frobenius_norm() < 1e-4);
    }
}
