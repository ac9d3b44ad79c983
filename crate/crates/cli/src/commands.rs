use rayon::prelude::*;

use cvrx_core::decomposition::{gate_count_comparison, resource_table, DecompositionPlan, Scheme};
use cvrx_core::fock::{doubling_check, DEFAULT_DIM};
use cvrx_core::generator::optimal_time;
use cvrx_core::information::{pie, pie_bound, BinaryChannel};
use cvrx_core::noise::{DetectorModel, LossModel};
use cvrx_core::optimize::NelderMeadConfig;
use cvrx_core::receivers::{
    optimize_squeezing_mitigation, Mitigation, ReceiverConfig, ReceiverKind, SqueezeLayout, CUBIC_PER_ITERATION,
};

use crate::args::{Common, ConvergeArgs, DecomposeArgs, GridArgs, NoisyArgs, PieArgs, ResourcesArgs, SweepArgs};
use crate::table::{real, Cell, Table};

pub const DIM_ENV: &str = "CVRX_DEFAULT_DIM";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs: exit code 2.
    Usage(String),
    /// The computation itself failed: exit code 1.
    Numeric(String),
}

impl From<cvrx_core::Error> for CliError {
    fn from(e: cvrx_core::Error) -> Self {
        use cvrx_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::InvalidDimension { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn resolve_dim(common: &Common) -> Res<usize> {
    if let Some(d) = common.dim {
        return Ok(d);
    }
    match std::env::var(DIM_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{DIM_ENV}={v} is not a dimension"))),
        Err(_) => Ok(DEFAULT_DIM),
    }
}

fn grid(g: &GridArgs) -> Res<Vec<f64>> {
    g.nbar.points(g.log).map_err(usage)
}

fn optimizer(seed: u64) -> NelderMeadConfig {
    NelderMeadConfig {
        seed,
        ..NelderMeadConfig::default()
    }
}

/// Evaluates `f` on every point with `jobs` workers; rows come back in
/// grid order and the first failing point (in grid order) is reported.
fn par_rows<F>(jobs: usize, points: &[f64], f: F) -> Res<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> Res<Vec<Cell>> + Sync,
{
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    let mut indexed: Vec<(usize, Res<Vec<Cell>>)> =
        pool.install(|| points.par_iter().enumerate().map(|(i, &x)| (i, f(x))).collect());
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, r)| r).collect()
}

fn receiver_list(s: &str, allow_noisy: bool) -> Res<Vec<ReceiverKind>> {
    let mut kinds: Vec<ReceiverKind> = Vec::new();
    for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let k: ReceiverKind = name.parse().map_err(|e: cvrx_core::Error| usage(e.to_string()))?;
        if k == ReceiverKind::DecomposedNoisy && !allow_noisy {
            return Err(usage("decomposed_noisy belongs to the `noisy` command"));
        }
        if kinds.contains(&k) {
            return Err(usage(format!("receiver `{name}` listed twice")));
        }
        kinds.push(k);
    }
    if kinds.is_empty() {
        return Err(usage("no receivers requested"));
    }
    Ok(kinds)
}

fn ideal_config(kind: ReceiverKind, nbar: f64, order: usize, iterations: usize, dim: usize, seed: u64) -> ReceiverConfig<f64> {
    let mut cfg = ReceiverConfig::new(kind, nbar.sqrt());
    cfg.order = order;
    cfg.iterations = iterations;
    cfg.dim = dim;
    cfg.optimizer = optimizer(seed);
    cfg
}

fn grid_meta(t: &mut Table, g: &GridArgs, dim: usize, seed: u64) {
    let n = g.nbar;
    t.meta("nbar", format!("{}:{}:{}", n.start, n.stop, n.count));
    t.meta("log", g.log);
    t.meta("dim", dim);
    t.meta("seed", seed);
}

pub fn sweep(a: &SweepArgs) -> Res<Table> {
    let dim = resolve_dim(&a.common)?;
    let kinds = receiver_list(&a.receivers, false)?;
    let points = grid(&a.grid)?;
    let mut notes = Vec::new();
    if let Some(tag) = &a.annotate {
        if tag != "mars" {
            return Err(usage(format!("unknown annotation `{tag}`; only `mars` is known")));
        }
        let marks = [("mars-downlink", a.mars_downlink), ("mars-uplink", a.mars_uplink)];
        if marks.iter().all(|(_, v)| v.is_none()) {
            return Err(usage("--annotate mars needs --mars-downlink and/or --mars-uplink"));
        }
        for (name, v) in marks {
            if let Some(v) = v {
                notes.push(format!("marker {name} nbar={}", real(v)));
            }
        }
    }
    let mut t = Table::new(std::iter::once("nbar".to_string()).chain(kinds.iter().map(|k| k.name().to_string())));
    t.rows = par_rows(a.common.jobs, &points, |nbar| {
        let mut row = vec![Cell::Real(nbar)];
        for &k in &kinds {
            let r = ideal_config(k, nbar, a.order, a.iterations, dim, a.common.seed).evaluate()?;
            row.push(Cell::Real(r.p_err));
        }
        Ok(row)
    })?;
    grid_meta(&mut t, &a.grid, dim, a.common.seed);
    t.meta("order", a.order);
    t.meta("iterations", a.iterations);
    t.notes = notes;
    Ok(t)
}

pub fn noisy(a: &NoisyArgs) -> Res<Table> {
    let dim = resolve_dim(&a.common)?;
    let points = grid(&a.grid)?;
    let detector = DetectorModel::new(a.nu, a.eta_q)?;
    let loss = LossModel::new(a.eta_bs)?;
    let layout: SqueezeLayout = a.layout.parse()?;
    if a.iterations == 0 {
        return Err(usage("--iterations must be at least 1"));
    }
    let mut columns = vec!["nbar", "unmitigated", "unmitigated_wrong_plus", "unmitigated_wrong_minus"];
    if a.mitigate {
        columns.extend(["mitigated", "mitigated_wrong_plus", "mitigated_wrong_minus", "evaluations", "converged", "squeezing"]);
    }
    let mut t = Table::new(columns);
    let nm = NelderMeadConfig {
        max_evals: a.max_evals,
        restarts: a.restarts,
        ..optimizer(a.common.seed)
    };
    t.rows = par_rows(a.common.jobs, &points, |nbar| {
        let mut cfg = ReceiverConfig::new(ReceiverKind::DecomposedNoisy, nbar.sqrt());
        cfg.iterations = a.iterations;
        cfg.dim = dim;
        cfg.detector = detector;
        cfg.loss = loss;
        cfg.optimizer = nm;
        if !a.mitigate {
            let r = cfg.evaluate()?;
            return Ok(vec![Cell::Real(nbar), Cell::Real(r.p_err), Cell::Real(r.p_wrong_given_plus), Cell::Real(r.p_wrong_given_minus)]);
        }
        let template = Mitigation::zeros(layout, a.sandwich, CUBIC_PER_ITERATION, a.iterations);
        let out = optimize_squeezing_mitigation(&cfg, &template)?;
        let params: Vec<String> = out.mitigation.params.iter().map(|&r| real(r)).collect();
        Ok(vec![
            Cell::Real(nbar),
            Cell::Real(out.unmitigated.p_err),
            Cell::Real(out.unmitigated.p_wrong_given_plus),
            Cell::Real(out.unmitigated.p_wrong_given_minus),
            Cell::Real(out.result.p_err),
            Cell::Real(out.result.p_wrong_given_plus),
            Cell::Real(out.result.p_wrong_given_minus),
            Cell::Int(out.report.evaluations as u64),
            Cell::Bool(out.report.converged),
            Cell::Text(params.join(";")),
        ])
    })?;
    grid_meta(&mut t, &a.grid, dim, a.common.seed);
    t.meta("iterations", a.iterations);
    t.meta("eta_bs", a.eta_bs);
    t.meta("eta_q", a.eta_q);
    t.meta("nu", a.nu);
    t.meta("mitigate", a.mitigate);
    if a.mitigate {
        t.meta("layout", layout);
        t.meta("sandwich", a.sandwich);
        t.meta("max_evals", a.max_evals);
        t.meta("restarts", a.restarts);
    }
    Ok(t)
}

fn schemes(s: &str) -> Res<Vec<Scheme>> {
    if s == "both" {
        return Ok(vec![Scheme::Splitting, Scheme::Commutator]);
    }
    Ok(vec![s.parse()?])
}

pub fn resources(a: &ResourcesArgs) -> Res<Table> {
    if a.compare {
        let alphas: Vec<f64> = grid(&a.grid)?.iter().map(|n| n.sqrt()).collect();
        let rows = gate_count_comparison(&alphas, a.budget)?;
        let mut t = Table::new([
            "nbar",
            "target_time",
            "splitting_iterations",
            "commutator_iterations",
            "splitting_gates",
            "commutator_gates",
        ]);
        t.rows = rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Real(r.nbar),
                    Cell::Real(r.target_time),
                    Cell::Int(r.splitting_iterations),
                    Cell::Int(r.commutator_iterations),
                    Cell::Int(r.splitting_gates),
                    Cell::Int(r.commutator_gates),
                ]
            })
            .collect();
        t.meta("budget", a.budget);
        return Ok(t);
    }
    let ts: Vec<f64> = a
        .t
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| usage(format!("--t `{s}`: {e}"))))
        .collect::<Res<_>>()?;
    let mut t = Table::new(["scheme", "t_elem", "linear", "quadratic", "cubic"]);
    for scheme in schemes(&a.scheme)? {
        for &te in &ts {
            let c = resource_table(scheme, te)?;
            t.rows.push(vec![
                Cell::Text(scheme.name().into()),
                Cell::Real(te),
                Cell::Int(c.linear),
                Cell::Int(c.quadratic),
                Cell::Int(c.cubic),
            ]);
        }
    }
    Ok(t)
}

/// Text listing, one gate per line after `#` header lines.
pub fn decompose(a: &DecomposeArgs) -> Res<String> {
    let scheme: Scheme = a.scheme.parse()?;
    let t_total = match (a.alpha, a.t) {
        (Some(alpha), None) => {
            if !(alpha > 0.0) {
                return Err(usage("--alpha must be positive"));
            }
            optimal_time(alpha)?
        }
        (None, Some(t)) => t,
        _ => return Err(usage("give exactly one of --alpha or --t")),
    };
    let plan = DecompositionPlan::new(scheme, t_total, a.iterations)?;
    let seq = plan.sequence();
    let res = plan.resources();
    let mut out = format!(
        "# scheme={} t_total={} iterations={}\n# linear={} quadratic={} cubic={}\n",
        scheme.name(),
        real(t_total),
        a.iterations,
        res.linear,
        res.quadratic,
        res.cubic
    );
    out.push_str(&seq.to_string());
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}

pub fn pie_table(a: &PieArgs) -> Res<Table> {
    let dim = resolve_dim(&a.common)?;
    let kinds = receiver_list(&a.receivers, false)?;
    let points = grid(&a.grid)?;
    if points.iter().any(|&n| n <= 0.0) {
        return Err(usage("PIE needs n̄ > 0 on every grid point"));
    }
    let mut t = Table::new(
        std::iter::once("nbar".to_string())
            .chain(kinds.iter().map(|k| k.name().to_string()))
            .chain(std::iter::once("bound".to_string())),
    );
    t.rows = par_rows(a.common.jobs, &points, |nbar| {
        let mut row = vec![Cell::Real(nbar)];
        for &k in &kinds {
            let r = ideal_config(k, nbar, a.order, a.iterations, dim, a.common.seed).evaluate()?;
            let ch = BinaryChannel::new(r.p_wrong_given_plus, r.p_wrong_given_minus)?;
            row.push(Cell::Real(pie(&ch, nbar)?));
        }
        row.push(Cell::Real(pie_bound(nbar.sqrt())?));
        Ok(row)
    })?;
    grid_meta(&mut t, &a.grid, dim, a.common.seed);
    t.meta("order", a.order);
    t.meta("iterations", a.iterations);
    Ok(t)
}

pub fn converge(a: &ConvergeArgs) -> Res<Table> {
    let dim = resolve_dim(&a.common)?;
    let kind = receiver_list(&a.receiver, false)?[0];
    if !(a.at > 0.0) {
        return Err(usage("--at must be a positive mean photon number"));
    }
    let report = doubling_check(
        |d| Ok(ideal_config(kind, a.at, a.order, a.iterations, d, a.common.seed).evaluate()?.p_err),
        dim,
        a.tol,
    )?;
    let mut t = Table::new(["receiver", "nbar", "dim", "value", "value_doubled", "delta", "converged"]);
    t.rows.push(vec![
        Cell::Text(kind.name().into()),
        Cell::Real(a.at),
        Cell::Int(report.dim as u64),
        Cell::Real(report.value),
        Cell::Real(report.value_doubled),
        Cell::Real(report.delta),
        Cell::Bool(report.converged),
    ]);
    t.meta("tol", a.tol);
    t.meta("order", a.order);
    t.meta("iterations", a.iterations);
    Ok(t)
}
