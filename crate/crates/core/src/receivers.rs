//! Receiver catalog for the BPSK alphabet `{|α⟩, |−α⟩}` with equal priors.
//!
//! The gate-based receivers first displace by `−α`, so the hypotheses enter
//! the unitary as `|0⟩` (for `+`) and `|−2α⟩` (for `−`); a click decides `−`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::decomposition::DecompositionPlan;
use crate::error::{Error, Result};
use crate::fock::{coherent_state, DensityMatrix, Operator, StateVector, DEFAULT_DIM};
use crate::gates::{GateBasis, GateSpec};
use crate::generator::{receiver_unitary, ShParams};
use crate::noise::{apply_kraus_weights, loss_kraus_weights, DetectorModel, LossModel};
use crate::optimize::{minimize_multi, minimize_scalar, NelderMeadConfig, OptimizeReport};
use crate::scalar::{lit, Real};
use crate::special::erfc;

/// Error probability with its two conditional components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRateResult<T> {
    pub p_err: T,
    /// `P(decide − | + sent)`
    pub p_wrong_given_plus: T,
    /// `P(decide + | − sent)`
    pub p_wrong_given_minus: T,
}

impl<T: Real> ErrorRateResult<T> {
    /// Equal-prior average of the components, each clamped into `[0, 1]`.
    pub fn from_components(p_wrong_given_plus: T, p_wrong_given_minus: T) -> Self {
        let clamp = |p: T| p.max(T::zero()).min(T::one());
        let (a, b) = (clamp(p_wrong_given_plus), clamp(p_wrong_given_minus));
        Self {
            p_err: (a + b) * lit(0.5),
            p_wrong_given_plus: a,
            p_wrong_given_minus: b,
        }
    }

    pub fn symmetric(p: T) -> Self {
        Self::from_components(p, p)
    }
}

/// `½(1 − √(1 − e^{−4α²}))`.
pub fn helstrom<T: Real>(alpha: T) -> T {
    let s = (-(lit::<T>(-4.0) * alpha * alpha).exp_m1()).sqrt();
    lit::<T>(0.5) * (T::one() - s)
}

/// `½(1 − erf(√2 α))`, via `erfc` to keep precision in the tail.
pub fn homodyne<T: Real>(alpha: T) -> T {
    lit::<T>(0.5) * erfc(lit::<T>(2.0).sqrt() * alpha)
}

/// `½ e^{−4α²}`.
pub fn kennedy<T: Real>(alpha: T) -> T {
    lit::<T>(0.5) * (lit::<T>(-4.0) * alpha * alpha).exp()
}

/// Search box for displacement and squeezing optimizations:
/// `|β| ≤ beta_scale·α + beta_offset`, `|r| ≤ r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub beta_scale: f64,
    pub beta_offset: f64,
    pub r_max: f64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            beta_scale: 3.0,
            beta_offset: 1.0,
            r_max: 1.5,
        }
    }
}

impl SearchBounds {
    pub fn beta_max(&self, alpha: f64) -> f64 {
        self.beta_scale * alpha + self.beta_offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementOutcome<T> {
    pub p_err: T,
    pub beta: T,
    /// The same error recomputed from the displacement gate on truncated states.
    pub p_err_fock: T,
}

/// On/off error after displacing by `β`, with the better of the two
/// no-click decision rules: `½(1 − |e^{−(α+β)²} − e^{−(α−β)²}|)`.
pub fn displacement_error<T: Real>(alpha: T, beta: T) -> T {
    let a = (-(alpha + beta) * (alpha + beta)).exp();
    let b = (-(alpha - beta) * (alpha - beta)).exp();
    lit::<T>(0.5) * (T::one() - (a - b).abs())
}

/// Optimal displacement receiver. The decision rule makes the objective even
/// in `β`, so the search runs over `β ∈ [−(3α+1), 0]`; the optimum is
/// re-evaluated with the displacement gate at dimension `d` and the two
/// values must agree within 1e-8.
pub fn optimized_displacement<T: Real>(alpha: T, d: usize, bounds: &SearchBounds) -> Result<DisplacementOutcome<T>> {
    let a = positive_alpha(alpha)?;
    let report = minimize_scalar(
        |b| Ok(displacement_error(a, b)),
        -bounds.beta_max(a),
        0.0,
        1e-10,
    )?;
    let beta = report.best_point[0];
    let basis = GateBasis::<T>::new(d)?;
    let dmat = basis.gate_matrix(&GateSpec::Displacement(Complex::new(lit(beta), T::zero())))?;
    let no_click = |sign: T| -> Result<T> {
        let psi = coherent_state(Complex::new(sign * alpha, T::zero()), d)?.evolve(&dmat)?;
        Ok(psi.amplitudes()[0].norm_sqr())
    };
    let (pa, pb) = (no_click(T::one())?, no_click(-T::one())?);
    let p_fock = lit::<T>(0.5) * (T::one() - (pa - pb).abs());
    let p = lit::<T>(report.best_value);
    if (p_fock - p).abs() > lit(1e-8) {
        return Err(Error::Numeric(format!(
            "displacement receiver: Fock value {p_fock} disagrees with closed form {p}"
        )));
    }
    Ok(DisplacementOutcome {
        p_err: p,
        beta: lit(beta),
        p_err_fock: p_fock,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeOutcome<T> {
    pub p_err: T,
    pub beta: T,
    pub r: T,
    pub report: OptimizeReport,
}

/// Displacement `D(β)`, then squeezing `S(r)`, then ideal on/off detection,
/// evaluated on the truncated basis.
pub struct DisplaceSqueezeModel<T: Real> {
    alpha: T,
    basis: GateBasis<T>,
}

impl<T: Real> DisplaceSqueezeModel<T> {
    pub fn new(alpha: T, d: usize) -> Result<Self> {
        Ok(Self {
            alpha: positive_alpha_t(alpha)?,
            basis: GateBasis::new(d)?,
        })
    }

    /// `⟨0|S(r)D(β)|±α⟩` squared for both signs.
    pub fn no_click(&self, beta: T, r: T) -> Result<(T, T)> {
        let d = self.basis.dim();
        let eig = self.basis.squeeze_spectrum()?;
        // row 0 of S(r) = V diag(e^{irλ}) V†
        let v = &eig.vectors;
        let phases: Vec<Complex<T>> = eig
            .values
            .iter()
            .map(|&l| Complex::from_polar(T::one(), r * l))
            .collect();
        let w: Vec<Complex<T>> = (0..d).map(|k| v.row(0)[k] * phases[k]).collect();
        let row: Vec<Complex<T>> = (0..d)
            .map(|j| (0..d).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + w[k] * v.row(j)[k].conj()))
            .collect();
        let amp = |delta: T| -> Result<T> {
            // D(β)|γ⟩ = |γ + β⟩ for real amplitudes
            let psi = coherent_state(Complex::new(delta, T::zero()), d)?;
            let z = row
                .iter()
                .zip(psi.amplitudes())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&s, &x)| acc + s * x);
            Ok(z.norm_sqr())
        };
        Ok((amp(self.alpha + beta)?, amp(-self.alpha + beta)?))
    }

    pub fn error(&self, beta: T, r: T) -> Result<T> {
        let (a, b) = self.no_click(beta, r)?;
        Ok(lit::<T>(0.5) * (T::one() - (a - b).abs()))
    }
}

/// Optimal displacement-plus-squeezing receiver, searched by bounded
/// Nelder–Mead from the optimal pure displacement with `r = 0`, plus seeded restarts.
pub fn optimized_displacement_squeezing<T: Real>(
    alpha: T,
    d: usize,
    bounds: &SearchBounds,
    nm: &NelderMeadConfig,
) -> Result<SqueezeOutcome<T>> {
    let a = positive_alpha(alpha)?;
    let start = optimized_displacement(alpha, d, bounds)?;
    let model = DisplaceSqueezeModel::new(alpha, d)?;
    let bm = bounds.beta_max(a);
    let report = minimize_multi(
        |x| Ok(model.error(lit(x[0]), lit(x[1]))?.to_f64().unwrap_or(f64::NAN)),
        &[start.beta.to_f64().unwrap_or(0.0), 0.0],
        &[(-bm, bm), (-bounds.r_max, bounds.r_max)],
        nm,
    )?;
    Ok(SqueezeOutcome {
        p_err: lit(report.best_value),
        beta: lit(report.best_point[0]),
        r: lit(report.best_point[1]),
        report,
    })
}

/// Error of the gate-based receiver with unitary `u` and detector `detector`.
pub fn error_from_unitary<T: Real>(u: &Operator<T>, alpha: T, detector: &DetectorModel<T>) -> Result<ErrorRateResult<T>> {
    let d = u.dim();
    let plus = StateVector::vacuum(d)?.evolve(u)?;
    let minus = coherent_state(Complex::new(lit::<T>(-2.0) * alpha, T::zero()), d)?.evolve(u)?;
    let off = |psi: &StateVector<T>| {
        psi.populations()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (n, &p)| acc + p * detector.no_click(n))
    };
    Ok(ErrorRateResult::from_components(T::one() - off(&plus), off(&minus)))
}

/// Exact Sasaki–Hirota receiver of order `M` with the ideal detector.
pub fn sh_exact<T: Real>(alpha: T, order: usize, d: usize) -> Result<ErrorRateResult<T>> {
    positive_alpha_t(alpha)?;
    let u = receiver_unitary(&ShParams::new(alpha, order, d)?)?;
    error_from_unitary(&u, alpha, &DetectorModel::ideal())
}

/// `M = 1` receiver realized by `K` splitting iterations, ideal detector.
pub fn decomposed<T: Real>(alpha: T, iterations: usize, d: usize) -> Result<ErrorRateResult<T>> {
    positive_alpha_t(alpha)?;
    ShParams::new(alpha, 1, d)?;
    let plan = DecompositionPlan::receiver(alpha, iterations)?;
    let basis = GateBasis::new(d)?;
    let u = crate::decomposition::iterated_unitary(&plan, &basis)?;
    error_from_unitary(&u, alpha, &DetectorModel::ideal())
}

/// How squeezing parameters map onto the cubic-gate slots of the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqueezeLayout {
    /// One parameter per cubic-gate position in an iteration, shared across iterations.
    PerPosition,
    /// A single parameter for every slot.
    Global,
    /// An independent parameter for every cubic gate of every iteration.
    PerSlot,
}

impl SqueezeLayout {
    pub fn name(self) -> &'static str {
        match self {
            SqueezeLayout::PerPosition => "per-position",
            SqueezeLayout::Global => "global",
            SqueezeLayout::PerSlot => "per-slot",
        }
    }

    pub fn param_count(self, cubic_per_iteration: usize, iterations: usize) -> usize {
        match self {
            SqueezeLayout::PerPosition => cubic_per_iteration,
            SqueezeLayout::Global => 1,
            SqueezeLayout::PerSlot => cubic_per_iteration * iterations,
        }
    }
}

impl fmt::Display for SqueezeLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SqueezeLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-position" => Ok(SqueezeLayout::PerPosition),
            "global" => Ok(SqueezeLayout::Global),
            "per-slot" => Ok(SqueezeLayout::PerSlot),
            other => Err(Error::InvalidArgument(format!("unknown squeeze layout `{other}`"))),
        }
    }
}

/// Squeezing inserted before every cubic gate. In sandwich mode the inverse
/// squeeze follows the gate and its loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Mitigation<T> {
    pub layout: SqueezeLayout,
    pub sandwich: bool,
    pub params: Vec<T>,
}

impl<T: Real> Mitigation<T> {
    pub fn zeros(layout: SqueezeLayout, sandwich: bool, cubic_per_iteration: usize, iterations: usize) -> Self {
        Self {
            layout,
            sandwich,
            params: vec![T::zero(); layout.param_count(cubic_per_iteration, iterations)],
        }
    }

    fn index(&self, cubic_per_iteration: usize, iteration: usize, position: usize) -> usize {
        match self.layout {
            SqueezeLayout::PerPosition => position,
            SqueezeLayout::Global => 0,
            SqueezeLayout::PerSlot => iteration * cubic_per_iteration + position,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverKind {
    Helstrom,
    Homodyne,
    Kennedy,
    OptDisp,
    OptDispSqueeze,
    ShExact,
    Decomposed,
    DecomposedNoisy,
}

impl ReceiverKind {
    pub const ALL: [ReceiverKind; 8] = [
        ReceiverKind::Helstrom,
        ReceiverKind::Homodyne,
        ReceiverKind::Kennedy,
        ReceiverKind::OptDisp,
        ReceiverKind::OptDispSqueeze,
        ReceiverKind::ShExact,
        ReceiverKind::Decomposed,
        ReceiverKind::DecomposedNoisy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReceiverKind::Helstrom => "helstrom",
            ReceiverKind::Homodyne => "homodyne",
            ReceiverKind::Kennedy => "kennedy",
            ReceiverKind::OptDisp => "opt_disp",
            ReceiverKind::OptDispSqueeze => "opt_disp_squeeze",
            ReceiverKind::ShExact => "sh_exact",
            ReceiverKind::Decomposed => "decomposed",
            ReceiverKind::DecomposedNoisy => "decomposed_noisy",
        }
    }
}

impl fmt::Display for ReceiverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReceiverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReceiverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown receiver `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverConfig<T> {
    pub kind: ReceiverKind,
    pub alpha: T,
    /// Sasaki–Hirota order `M`.
    pub order: usize,
    /// Splitting iterations `K`.
    pub iterations: usize,
    pub detector: DetectorModel<T>,
    pub loss: LossModel<T>,
    pub mitigation: Option<Mitigation<T>>,
    pub dim: usize,
    pub bounds: SearchBounds,
    pub optimizer: NelderMeadConfig,
}

impl<T: Real> ReceiverConfig<T> {
    pub fn new(kind: ReceiverKind, alpha: T) -> Self {
        Self {
            kind,
            alpha,
            order: 1,
            iterations: 10,
            detector: DetectorModel::ideal(),
            loss: LossModel::lossless(),
            mitigation: None,
            dim: DEFAULT_DIM,
            bounds: SearchBounds::default(),
            optimizer: NelderMeadConfig::default(),
        }
    }

    /// Rejects parameter combinations that make no sense for the kind.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("amplitude {} must be ≥ 0", self.alpha)));
        }
        let noisy = !self.detector.is_ideal() || !self.loss.is_lossless() || self.mitigation.is_some();
        if noisy && self.kind != ReceiverKind::DecomposedNoisy {
            return Err(Error::InvalidArgument(format!(
                "noise and mitigation apply only to decomposed_noisy, not {}",
                self.kind
            )));
        }
        if self.order == 0 || self.iterations == 0 {
            return Err(Error::InvalidArgument("order and iterations must be ≥ 1".into()));
        }
        if let Some(m) = &self.mitigation {
            let want = m.layout.param_count(CUBIC_PER_ITERATION, self.iterations);
            if m.params.len() != want {
                return Err(Error::InvalidArgument(format!(
                    "{} layout needs {want} squeezing parameters, got {}",
                    m.layout,
                    m.params.len()
                )));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self) -> Result<ErrorRateResult<T>> {
        self.validate()?;
        let a = self.alpha;
        Ok(match self.kind {
            ReceiverKind::Helstrom => ErrorRateResult::symmetric(helstrom(a)),
            ReceiverKind::Homodyne => ErrorRateResult::symmetric(homodyne(a)),
            ReceiverKind::Kennedy => ErrorRateResult::from_components(T::zero(), lit::<T>(2.0) * kennedy(a)),
            ReceiverKind::OptDisp => {
                ErrorRateResult::symmetric(optimized_displacement(a, self.dim, &self.bounds)?.p_err)
            }
            ReceiverKind::OptDispSqueeze => ErrorRateResult::symmetric(
                optimized_displacement_squeezing(a, self.dim, &self.bounds, &self.optimizer)?.p_err,
            ),
            ReceiverKind::ShExact => sh_exact(a, self.order, self.dim)?,
            ReceiverKind::Decomposed => decomposed(a, self.iterations, self.dim)?,
            ReceiverKind::DecomposedNoisy => decomposed_noisy(self)?,
        })
    }
}

/// Cubic gates per splitting iteration.
pub const CUBIC_PER_ITERATION: usize = 4;

/// Precomputed pieces of the noisy decomposed receiver; evaluating a new set
/// of squeezing parameters only rebuilds the squeeze gates.
pub struct NoisyReceiver<T: Real> {
    basis: GateBasis<T>,
    step: Vec<(GateSpec<T>, Operator<T>)>,
    iterations: usize,
    kraus: Option<Vec<Vec<f64>>>,
    detector: DetectorModel<T>,
    rho_plus: DensityMatrix<T>,
    rho_minus: DensityMatrix<T>,
}

impl<T: Real> NoisyReceiver<T> {
    pub fn new(config: &ReceiverConfig<T>) -> Result<Self> {
        let alpha = positive_alpha_t(config.alpha)?;
        let d = config.dim;
        ShParams::new(alpha, 1, d)?;
        let basis = GateBasis::new(d)?;
        let plan = DecompositionPlan::receiver(alpha, config.iterations)?;
        let step = plan
            .step_sequence()
            .iter()
            .map(|g| Ok((*g, basis.gate_matrix(g)?)))
            .collect::<Result<Vec<_>>>()?;
        let kraus = if config.loss.is_lossless() {
            None
        } else {
            Some(loss_kraus_weights(
                config.loss.transmissivity().to_f64().unwrap_or(f64::NAN),
                d,
            )?)
        };
        Ok(Self {
            basis,
            step,
            iterations: config.iterations,
            kraus,
            detector: config.detector,
            rho_plus: StateVector::vacuum(d)?.to_density(),
            rho_minus: coherent_state(Complex::new(lit::<T>(-2.0) * alpha, T::zero()), d)?.to_density(),
        })
    }

    /// Unitary segments between loss points, in application order.
    fn segments(&self, mitigation: Option<&Mitigation<T>>) -> Result<Vec<Operator<T>>> {
        let squeezes: Vec<(Operator<T>, Operator<T>)> = match mitigation {
            Some(m) => m
                .params
                .iter()
                .map(|&r| {
                    let s = self.basis.gate_matrix(&GateSpec::Squeeze(r))?;
                    let inv = s.adjoint();
                    Ok((s, inv))
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let mut segments = Vec::new();
        let mut acc: Option<Operator<T>> = None;
        let push = |acc: &mut Option<Operator<T>>, u: &Operator<T>| -> Result<()> {
            *acc = Some(match acc.take() {
                Some(a) => u.matmul(&a)?,
                None => u.clone(),
            });
            Ok(())
        };
        for it in 0..self.iterations {
            let mut position = 0;
            for (g, u) in &self.step {
                if !g.is_cubic() {
                    push(&mut acc, u)?;
                    continue;
                }
                let sq = mitigation.map(|m| &squeezes[m.index(CUBIC_PER_ITERATION, it, position)]);
                if let Some((s, _)) = sq {
                    push(&mut acc, s)?;
                }
                push(&mut acc, u)?;
                if self.kraus.is_some() {
                    segments.extend(acc.take());
                }
                if let (Some(m), Some((_, inv))) = (mitigation, sq) {
                    if m.sandwich {
                        push(&mut acc, inv)?;
                    }
                }
                position += 1;
            }
        }
        segments.extend(acc);
        Ok(segments)
    }

    pub fn evaluate(&self, mitigation: Option<&Mitigation<T>>) -> Result<ErrorRateResult<T>> {
        let segments = self.segments(mitigation)?;
        // with loss, every segment but possibly the last ends on a cubic gate
        let lossy_segments = match &self.kraus {
            Some(_) => self.iterations * CUBIC_PER_ITERATION,
            None => 0,
        };
        let run = |rho: &DensityMatrix<T>| -> Result<T> {
            let mut rho = rho.clone();
            for (i, u) in segments.iter().enumerate() {
                rho = rho.evolve(u)?;
                if let Some(w) = &self.kraus {
                    if i < lossy_segments {
                        rho = apply_kraus_weights(w, &rho);
                    }
                }
            }
            Ok(rho
                .populations()
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (n, &p)| acc + p * self.detector.no_click(n)))
        };
        let off_plus = run(&self.rho_plus)?;
        let off_minus = run(&self.rho_minus)?;
        Ok(ErrorRateResult::from_components(T::one() - off_plus, off_minus))
    }
}

/// Decomposed receiver with loss after every cubic gate and an imperfect
/// detector, by density-matrix propagation.
pub fn decomposed_noisy<T: Real>(config: &ReceiverConfig<T>) -> Result<ErrorRateResult<T>> {
    NoisyReceiver::new(config)?.evaluate(config.mitigation.as_ref())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MitigationOutcome<T> {
    pub mitigation: Mitigation<T>,
    pub result: ErrorRateResult<T>,
    pub unmitigated: ErrorRateResult<T>,
    pub report: OptimizeReport,
}

/// Minimizes the noisy error over squeezing parameters laid out as in
/// `template` (its values seed the search), within `|r| ≤ r_max`.
pub fn optimize_squeezing_mitigation<T: Real>(
    config: &ReceiverConfig<T>,
    template: &Mitigation<T>,
) -> Result<MitigationOutcome<T>> {
    let mut plain = config.clone();
    plain.mitigation = None;
    plain.validate()?;
    let receiver = NoisyReceiver::new(&plain)?;
    let unmitigated = receiver.evaluate(None)?;
    let n = template.layout.param_count(CUBIC_PER_ITERATION, config.iterations);
    if template.params.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} layout needs {n} squeezing parameters, got {}",
            template.layout,
            template.params.len()
        )));
    }
    let r_max = config.bounds.r_max;
    let x0: Vec<f64> = template
        .params
        .iter()
        .map(|r| r.to_f64().unwrap_or(0.0).clamp(-r_max, r_max))
        .collect();
    let mut trial = template.clone();
    let report = minimize_multi(
        |x| {
            trial.params = x.iter().map(|&v| lit::<T>(v)).collect();
            Ok(receiver.evaluate(Some(&trial))?.p_err.to_f64().unwrap_or(f64::NAN))
        },
        &x0,
        &vec![(-r_max, r_max); n],
        &config.optimizer,
    )?;
    let mut best = template.clone();
    best.params = report.best_point.iter().map(|&v| lit::<T>(v)).collect();
    let result = receiver.evaluate(Some(&best))?;
    Ok(MitigationOutcome {
        mitigation: best,
        result,
        unmitigated,
        report,
    })
}

fn positive_alpha<T: Real>(alpha: T) -> Result<f64> {
    Ok(positive_alpha_t(alpha)?.to_f64().unwrap_or(f64::NAN))
}

fn positive_alpha_t<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::DegenerateInput(format!("receiver needs α > 0, got {alpha}")));
    }
    Ok(alpha)
}
