//! Deterministic derivative-free minimizers: golden-section search on an
//! interval and bounded Nelder–Mead with seeded restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Wraps an objective: counts calls, rejects non-finite values, remembers the best point.
struct Tracker<F> {
    f: F,
    evaluations: usize,
    best_point: Vec<f64>,
    best_value: f64,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Tracker<F> {
    fn new(f: F) -> Self {
        Self {
            f,
            evaluations: 0,
            best_point: Vec::new(),
            best_value: f64::INFINITY,
        }
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { point: x.to_vec() });
        }
        if v < self.best_value || self.best_point.is_empty() {
            self.best_value = v;
            self.best_point = x.to_vec();
        }
        Ok(v)
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once
/// the bracket is no wider than `tol`. The endpoints are evaluated too, so a
/// monotone objective returns its better endpoint.
pub fn minimize_scalar(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<OptimizeReport> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut tr = Tracker::new(|x: &[f64]| f(x[0]));
    tr.eval(&[lo])?;
    tr.eval(&[hi])?;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = tr.eval(&[c])?;
    let mut fd = tr.eval(&[d])?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = tr.eval(&[c])?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = tr.eval(&[d])?;
        }
    }
    Ok(OptimizeReport {
        best_point: tr.best_point,
        best_value: tr.best_value,
        evaluations: tr.evaluations,
        converged: true,
    })
}

/// Budgets and tolerances of [`minimize_multi`]; part of the reproducible configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Evaluation budget per run (the initial run and each restart).
    pub max_evals: usize,
    /// Stop when the simplex values spread by at most this much.
    pub ftol: f64,
    /// and its vertices lie within this distance of the best vertex.
    pub xtol: f64,
    /// Additional runs from seeded random points in the box.
    pub restarts: usize,
    pub seed: u64,
    /// Initial simplex edge as a fraction of each bound's width.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            ftol: 1e-12,
            xtol: 1e-8,
            restarts: 2,
            seed: 0,
            initial_step: 0.1,
        }
    }
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Bounded Nelder–Mead from `x0`, then from `restarts` seeded random points;
/// trial points are clamped into `bounds`. Reports the best point over all
/// runs; `converged` is false when the run that found it hit its budget.
pub fn minimize_multi(
    f: impl FnMut(&[f64]) -> Result<f64>,
    x0: &[f64],
    bounds: &[(f64, f64)],
    config: &NelderMeadConfig,
) -> Result<OptimizeReport> {
    if x0.is_empty() || x0.len() != bounds.len() {
        return Err(Error::InvalidArgument(format!(
            "{} start coordinates for {} bounds",
            x0.len(),
            bounds.len()
        )));
    }
    for (i, (&v, &(lo, hi))) in x0.iter().zip(bounds).enumerate() {
        if !(lo <= hi) || !(v >= lo && v <= hi) {
            return Err(Error::InvalidArgument(format!(
                "start coordinate {i} = {v} outside [{lo}, {hi}]"
            )));
        }
    }
    let mut tr = Tracker::new(f);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best_converged = nelder_mead(&mut tr, x0, bounds, config)?;
    let mut best_value = tr.best_value;
    for _ in 0..config.restarts {
        let start: Vec<f64> = bounds
            .iter()
            .map(|&(lo, hi)| if hi > lo { rng.random_range(lo..=hi) } else { lo })
            .collect();
        let converged = nelder_mead(&mut tr, &start, bounds, config)?;
        if tr.best_value < best_value {
            best_value = tr.best_value;
            best_converged = converged;
        }
    }
    Ok(OptimizeReport {
        best_point: tr.best_point,
        best_value: tr.best_value,
        evaluations: tr.evaluations,
        converged: best_converged,
    })
}

fn nelder_mead<F: FnMut(&[f64]) -> Result<f64>>(
    tr: &mut Tracker<F>,
    x0: &[f64],
    bounds: &[(f64, f64)],
    cfg: &NelderMeadConfig,
) -> Result<bool> {
    let n = x0.len();
    let budget_end = tr.evaluations + cfg.max_evals;
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let (lo, hi) = bounds[i];
        let width = if (hi - lo).is_finite() { hi - lo } else { x0[i].abs().max(1.0) };
        let mut step = cfg.initial_step * width;
        if step == 0.0 {
            step = 1e-3;
        }
        let mut v = x0.to_vec();
        // step inward when the start sits on the upper bound
        v[i] = if x0[i] + step <= hi { x0[i] + step } else { x0[i] - step };
        clamp(&mut v, bounds);
        simplex.push(v);
    }
    let mut values = Vec::with_capacity(n + 1);
    for v in &simplex {
        values.push(tr.eval(v)?);
    }

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= cfg.ftol && diameter <= cfg.xtol {
            return Ok(true);
        }
        if tr.evaluations >= budget_end {
            return Ok(false);
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (w - c))
                .collect();
            clamp(&mut p, bounds);
            p
        };

        let xr = along(-1.0);
        let fr = tr.eval(&xr)?;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = tr.eval(&xe)?;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(-0.5);
            let fc = tr.eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = tr.eval(&xc)?;
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let mut p: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            clamp(&mut p, bounds);
            values[i] = tr.eval(&p)?;
            simplex[i] = p;
        }
    }
}
