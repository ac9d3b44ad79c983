//! Gate-level approximations of the `M = 1` receiver unitary and their costs.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{block_distance, converged_block, Operator};
use crate::gates::{GateBasis, GateClass, GateSequence, GateSpec};
use crate::generator::{exact_unitary_m1, optimal_time};
use crate::scalar::{count, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// First-order product formula, error `O(t²)` per step.
    Splitting,
    /// Group-commutator realization of the `x²p + px²` term, error `O(t³)` in the elementary strength.
    Commutator,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Splitting => "splitting",
            Scheme::Commutator => "commutator",
        }
    }

    /// Gates per iteration `(linear, quadratic, cubic)`.
    pub fn per_iteration(self) -> ResourceCount {
        match self {
            Scheme::Splitting => ResourceCount::new(1, 2, 4),
            Scheme::Commutator => ResourceCount::new(1, 2, 3),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "splitting" => Ok(Scheme::Splitting),
            "commutator" => Ok(Scheme::Commutator),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ResourceCount {
    pub linear: u64,
    pub quadratic: u64,
    pub cubic: u64,
}

impl ResourceCount {
    pub const fn new(linear: u64, quadratic: u64, cubic: u64) -> Self {
        Self {
            linear,
            quadratic,
            cubic,
        }
    }

    pub fn total(&self) -> u64 {
        self.linear + self.quadratic + self.cubic
    }
}

impl Add for ResourceCount {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.linear + rhs.linear,
            self.quadratic + rhs.quadratic,
            self.cubic + rhs.cubic,
        )
    }
}

impl Mul<u64> for ResourceCount {
    type Output = Self;

    fn mul(self, k: u64) -> Self {
        Self::new(self.linear * k, self.quadratic * k, self.cubic * k)
    }
}

/// Gate counts of a sequence by class; other gates are ignored.
pub fn census<T: Real>(seq: &GateSequence<T>) -> ResourceCount {
    seq.iter().fold(ResourceCount::default(), |acc, g| {
        acc + match g.class() {
            GateClass::Linear => ResourceCount::new(1, 0, 0),
            GateClass::Quadratic => ResourceCount::new(0, 1, 0),
            GateClass::Cubic => ResourceCount::new(0, 0, 1),
            GateClass::Other => ResourceCount::default(),
        }
    })
}

/// One step of the product formula approximating `exp[(−4ip + 2ip³ + ix²p + ipx²) t]`:
///
/// `exp[−4itp] exp[2itp³] exp[(i/3)x³] exp[−itp²] exp[−(2i/3)x³] exp[itp²] exp[(i/3)x³]`,
/// listed rightmost factor first.
pub fn splitting_sequence<T: Real>(t: T) -> GateSequence<T> {
    let third = T::one() / lit::<T>(3.0);
    GateSequence::new(vec![
        GateSpec::CubicX(third),
        GateSpec::QuadraticP(t),
        GateSpec::CubicX(-lit::<T>(2.0) * third),
        GateSpec::QuadraticP(-t),
        GateSpec::CubicX(third),
        GateSpec::CubicP(lit::<T>(2.0) * t),
        GateSpec::LinearP(lit::<T>(-4.0) * t),
    ])
}

/// One group-commutator step with elementary strength `τ`, approximating the
/// same exponential at time `τ|τ|`.
///
/// Uses `i(x²p + px²) = (2/3)[x³, p²]`: the core
/// `exp[iτ(2/3)p²] exp[iτx³] exp[−iτ(2/3)p²] exp[−iτx³]` gives
/// `exp[τ²(2/3)[x³, p²]] + O(τ³)`, preceded by the linear and cubic `p` terms
/// at strength `τ²`. For `τ < 0` the two core generators trade places, which
/// reverses the sign of the commutator.
pub fn commutator_sequence<T: Real>(tau: T) -> GateSequence<T> {
    let s = tau.abs();
    let target = tau * s;
    let two_thirds = lit::<T>(2.0) / lit::<T>(3.0);
    let (a, b) = (GateSpec::CubicX, GateSpec::QuadraticP);
    let core = if tau >= T::zero() {
        [a(-s), b(-two_thirds * s), a(s), b(two_thirds * s)]
    } else {
        [b(-two_thirds * s), a(-s), b(two_thirds * s), a(s)]
    };
    let mut gates = core.to_vec();
    gates.push(GateSpec::CubicP(lit::<T>(2.0) * target));
    gates.push(GateSpec::LinearP(lit::<T>(-4.0) * target));
    GateSequence::new(gates)
}

/// `K` repetitions of one scheme step covering a total time `t_total`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionPlan<T> {
    pub scheme: Scheme,
    pub t_total: T,
    pub iterations: usize,
}

impl<T: Real> DecompositionPlan<T> {
    pub fn new(scheme: Scheme, t_total: T, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::InvalidArgument("iterations must be at least 1".into()));
        }
        if !t_total.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite time {t_total}")));
        }
        Ok(Self {
            scheme,
            t_total,
            iterations,
        })
    }

    /// Splitting plan for the receiver at amplitude `alpha`.
    pub fn receiver(alpha: T, iterations: usize) -> Result<Self> {
        Self::new(Scheme::Splitting, optimal_time(alpha)?, iterations)
    }

    /// Per-iteration strength: `t/K` for splitting; for the commutator the
    /// signed `τ` with `K τ² = |t|`.
    pub fn step_strength(&self) -> T {
        let k = count::<T>(self.iterations);
        match self.scheme {
            Scheme::Splitting => self.t_total / k,
            Scheme::Commutator => {
                let tau = (self.t_total.abs() / k).sqrt();
                if self.t_total < T::zero() {
                    -tau
                } else {
                    tau
                }
            }
        }
    }

    pub fn step_sequence(&self) -> GateSequence<T> {
        let s = self.step_strength();
        match self.scheme {
            Scheme::Splitting => splitting_sequence(s),
            Scheme::Commutator => commutator_sequence(s),
        }
    }

    /// The full gate list, `K` copies of the step.
    pub fn sequence(&self) -> GateSequence<T> {
        self.step_sequence().repeat(self.iterations)
    }

    pub fn resources(&self) -> ResourceCount {
        self.scheme.per_iteration() * self.iterations as u64
    }
}

/// `[step matrix]^K`; the step's gate spectra come from `basis`.
pub fn iterated_unitary<T: Real>(plan: &DecompositionPlan<T>, basis: &GateBasis<T>) -> Result<Operator<T>> {
    basis
        .sequence_matrix(&plan.step_sequence())?
        .pow(plan.iterations)
}

/// Single-step distance floor below which a scaling measurement is noise.
pub const SCALING_SIGNAL_FLOOR: f64 = 1e-12;

/// `log₂(e_full / e_half)`, the order of a power law sampled at `t` and `t/2`.
pub fn scaling_exponent<T: Real>(e_full: T, e_half: T) -> Result<T> {
    let floor = lit::<T>(SCALING_SIGNAL_FLOOR);
    for e in [e_full, e_half] {
        if !(e >= floor) {
            return Err(Error::InsufficientSignal {
                distance: e.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok((e_full / e_half).log2())
}

/// Difference between one scheme step at strength `t` and the exact unitary it targets.
pub fn step_error_operator<T: Real>(scheme: Scheme, t: T, basis: &GateBasis<T>) -> Result<Operator<T>> {
    let (seq, target_time) = match scheme {
        Scheme::Splitting => (splitting_sequence(t), t),
        Scheme::Commutator => (commutator_sequence(t), t * t.abs()),
    };
    let approx = basis.sequence_matrix(&seq)?;
    Ok(&approx - &exact_unitary_m1(target_time, basis.dim())?)
}

/// Step-error order measured by halving `t_ref` on Fock levels `0..m`.
pub fn error_scaling_exponent_on_block<T: Real>(
    scheme: Scheme,
    t_ref: T,
    d: usize,
    m: usize,
) -> Result<T> {
    let basis = GateBasis::new(d)?;
    let zero = Operator::zeros(d)?;
    let full = block_distance(&step_error_operator(scheme, t_ref, &basis)?, &zero, m)?;
    let half = block_distance(
        &step_error_operator(scheme, t_ref * lit(0.5), &basis)?,
        &zero,
        m,
    )?;
    scaling_exponent(full, half)
}

/// Step-error order, measured on the largest leading block where the step
/// error at `t_ref` is stable between dimensions `d` and `2d`.
pub fn error_scaling_exponent<T: Real>(scheme: Scheme, t_ref: T, d: usize) -> Result<T> {
    let m = scaling_block(scheme, t_ref, d)?;
    error_scaling_exponent_on_block(scheme, t_ref, d, m)
}

/// Block used by [`error_scaling_exponent`].
pub fn scaling_block<T: Real>(scheme: Scheme, t_ref: T, d: usize) -> Result<usize> {
    converged_block(
        |dim| step_error_operator(scheme, t_ref, &GateBasis::new(dim)?),
        d,
        0.01,
    )
}

/// `⌈x⌉`, treating values within relative 1e-9 of an integer as that integer.
fn robust_ceil(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Gates needed to reach unit total strength with elementary strength `t_elem`:
/// `⌈1/t⌉` splitting iterations or `⌈1/t²⌉` commutator iterations.
pub fn resource_table(scheme: Scheme, t_elem: f64) -> Result<ResourceCount> {
    if !(t_elem > 0.0) || !t_elem.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "elementary strength must be positive, got {t_elem}"
        )));
    }
    let k = match scheme {
        Scheme::Splitting => robust_ceil(1.0 / t_elem),
        Scheme::Commutator => robust_ceil(1.0 / (t_elem * t_elem)),
    };
    Ok(scheme.per_iteration() * k)
}

pub const SPLITTING_GATES_PER_ITERATION: u64 = 7;
pub const COMMUTATOR_GATES_PER_ITERATION: u64 = 6;

/// Model-based total gate counts at one amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCountRow {
    pub nbar: f64,
    pub target_time: f64,
    pub splitting_iterations: u64,
    pub commutator_iterations: u64,
    pub splitting_gates: u64,
    pub commutator_gates: u64,
}

/// Error-budget cost model: for target time `T = |t_opt(α)|` and budget `ε`,
/// splitting needs `K ≥ T²/ε` iterations and the commutator scheme
/// `K ≥ T³/ε²` (elementary strength `τ ≤ ε/T`), each at least one.
pub fn gate_count_comparison(alphas: &[f64], error_budget: f64) -> Result<Vec<GateCountRow>> {
    if !(error_budget > 0.0 && error_budget < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "error budget must lie in (0, 0.5), got {error_budget}"
        )));
    }
    alphas
        .iter()
        .map(|&alpha| {
            let t = optimal_time(alpha)?.abs();
            let ks = robust_ceil(t * t / error_budget).max(1);
            let kc = robust_ceil(t * t * t / (error_budget * error_budget)).max(1);
            Ok(GateCountRow {
                nbar: alpha * alpha,
                target_time: t,
                splitting_iterations: ks,
                commutator_iterations: kc,
                splitting_gates: SPLITTING_GATES_PER_ITERATION * ks,
                commutator_gates: COMMUTATOR_GATES_PER_ITERATION * kc,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{frobenius_distance, identity_block};

    #[test]
    fn splitting_census_and_order() {
        for t in [-0.3, 0.0, 0.01, 2.0] {
            let seq = splitting_sequence(t);
            assert_eq!(seq.len(), 7);
            assert_eq!(census(&seq), ResourceCount::new(1, 2, 4));
        }
        let seq = splitting_sequence(0.5);
        assert_eq!(seq.gates[0], GateSpec::CubicX(1.0 / 3.0));
        assert_eq!(seq.gates[6], GateSpec::LinearP(-2.0));
        let plan = DecompositionPlan::new(Scheme::Splitting, 0.5, 10).unwrap();
        assert_eq!(census(&plan.sequence()), ResourceCount::new(10, 20, 40));
        assert_eq!(plan.resources(), ResourceCount::new(10, 20, 40));
    }

    #[test]
    fn commutator_census() {
        for tau in [-0.2, 0.1] {
            assert_eq!(census(&commutator_sequence(tau)), ResourceCount::new(1, 2, 3));
        }
        let plan = DecompositionPlan::new(Scheme::Commutator, 1.0f64, 100).unwrap();
        assert!((plan.step_strength() - 0.1).abs() < 1e-15);
        assert_eq!(plan.resources(), ResourceCount::new(100, 200, 300));
    }

    #[test]
    fn zero_strength_sequences_are_identity_on_block() {
        // the fixed-strength cubic factors cancel exactly only on the clean block
        let basis = GateBasis::<f64>::new(40).unwrap();
        let id = Operator::identity(40).unwrap();
        for seq in [splitting_sequence(0.0), commutator_sequence(0.0)] {
            let u = basis.sequence_matrix(&seq).unwrap();
            assert!(block_distance(&u, &id, identity_block(40)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn single_iteration_is_the_step() {
        let basis = GateBasis::<f64>::new(20).unwrap();
        let plan = DecompositionPlan::new(Scheme::Splitting, -0.4, 1).unwrap();
        let u = iterated_unitary(&plan, &basis).unwrap();
        let v = basis.sequence_matrix(&splitting_sequence(-0.4)).unwrap();
        assert!(frobenius_distance(&u, &v).unwrap() < 1e-14);
    }

    #[test]
    fn iterated_is_unitary() {
        let basis = GateBasis::<f64>::new(60).unwrap();
        for (scheme, k) in [(Scheme::Splitting, 100), (Scheme::Commutator, 37)] {
            let plan = DecompositionPlan::new(scheme, -0.56, k).unwrap();
            assert!(iterated_unitary(&plan, &basis).unwrap().unitarity_defect() <= 1e-9);
        }
    }

    #[test]
    fn more_iterations_approach_exact_unitary() {
        let d = 40;
        let basis = GateBasis::<f64>::new(d).unwrap();
        let alpha = f64::sqrt(0.05);
        let t = optimal_time(alpha).unwrap();
        let exact = exact_unitary_m1(t, d).unwrap();
        let m = identity_block(d);
        let dist = |k| {
            let plan = DecompositionPlan::receiver(alpha, k).unwrap();
            block_distance(&iterated_unitary(&plan, &basis).unwrap(), &exact, m).unwrap()
        };
        let e: Vec<f64> = [5, 10, 20].into_iter().map(dist).collect();
        assert!(e[1] < e[0] && e[2] < e[1], "{e:?}");
    }

    #[test]
    fn scaling_exponent_guards() {
        assert_eq!(scaling_exponent(0.3, 0.3).unwrap(), 0.0);
        assert!((scaling_exponent(0.4f64, 0.1).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            scaling_exponent(1e-13, 1e-14),
            Err(Error::InsufficientSignal { .. })
        ));
    }

    #[test]
    fn table_entries() {
        let s = |t| resource_table(Scheme::Splitting, t).unwrap();
        let c = |t| resource_table(Scheme::Commutator, t).unwrap();
        assert_eq!(s(0.1), ResourceCount::new(10, 20, 40));
        assert_eq!(s(0.01), ResourceCount::new(100, 200, 400));
        assert_eq!(s(0.001), ResourceCount::new(1000, 2000, 4000));
        assert_eq!(c(0.1), ResourceCount::new(100, 200, 300));
        assert_eq!(c(0.01), ResourceCount::new(10_000, 20_000, 30_000));
        assert_eq!(c(0.001), ResourceCount::new(1_000_000, 2_000_000, 3_000_000));
        assert_eq!(s(0.3), ResourceCount::new(4, 8, 16));
        assert!(resource_table(Scheme::Splitting, 0.0).is_err());
        assert!(resource_table(Scheme::Commutator, -0.1).is_err());
    }

    #[test]
    fn gate_count_model() {
        let alphas: Vec<f64> = (1..=30).map(|k| f64::sqrt(0.01 * k as f64)).collect();
        let rows = gate_count_comparison(&alphas, 0.1).unwrap();
        for r in &rows {
            assert!(r.commutator_gates >= r.splitting_gates, "{r:?}");
        }
        let ratio = |budget| {
            let r = gate_count_comparison(&[0.3], budget).unwrap()[0];
            r.commutator_gates as f64 / r.splitting_gates as f64
        };
        assert!(ratio(0.001) > ratio(0.01) && ratio(0.01) > ratio(0.1));
        let r = gate_count_comparison(&[3.0], 0.49).unwrap()[0];
        assert_eq!((r.splitting_iterations, r.commutator_iterations), (1, 1));
        assert!(gate_count_comparison(&[0.3], 0.5).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::Splitting, Scheme::Commutator] {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
    }
}
