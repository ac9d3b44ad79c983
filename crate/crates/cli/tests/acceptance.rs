//! Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cvrx_core::decomposition::{error_scaling_exponent, resource_table, Scheme};
use cvrx_core::fock::{
    block_distance, coherent_state, converged_block, frobenius_distance, DensityMatrix, Operator, StateVector,
};
use cvrx_core::generator::{coefficients, exact_unitary_m1, optimal_time, receiver_unitary, ShParams};
use cvrx_core::information::{bac_capacity, bac_capacity_closed_form, pie, pie_bound, BinaryChannel};
use cvrx_core::noise::{beamsplitter_loss_oracle, loss_channel, DetectorModel, LossModel};
use cvrx_core::optimize::NelderMeadConfig;
use cvrx_core::receivers::*;
use num_complex::Complex;

type Check = Result<String, String>;

fn amp(nbar: f64) -> f64 {
    nbar.sqrt()
}

fn ok_if(pass: bool, detail: String) -> Check {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_closed_forms() -> Check {
    let a = amp(0.25);
    let got = [helstrom(a), kennedy(a), homodyne(a)];
    let want = [0.1024700, 0.1839397, 0.158655];
    let worst = got.iter().zip(want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let zero = [helstrom(0.0), kennedy(0.0), homodyne(0.0)];
    ok_if(
        worst <= 1e-5 && zero.iter().all(|&z| z == 0.5),
        format!("values {got:.7?}, worst deviation {worst:.1e}, at zero {zero:?}"),
    )
}

fn c2_coefficients() -> Check {
    let mut worst_d1 = 0.0f64;
    let mut worst_norm = 0.0f64;
    for k in 1..=14 {
        let a = 0.05 * k as f64;
        let c = coefficients(&ShParams::new(a, 1, 40).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst_d1 = worst_d1.max((c.d_n(1) + 1.0).abs());
        for m in 1..=5 {
            let c = coefficients(&ShParams::new(a, m, 40).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            worst_norm = worst_norm.max((c.c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
        }
    }
    ok_if(
        worst_d1 <= 1e-12 && worst_norm <= 1e-12,
        format!("max |d1 + 1| = {worst_d1:.1e}, max |sum c^2 - 1| = {worst_norm:.1e}"),
    )
}

/// Distance between the generator exponential and the closed-form unitary
/// on the leading block where the receiver unitary is stable under doubling `d`.
fn generator_gap(nbar: f64, d: usize) -> Result<f64, String> {
    let a = amp(nbar);
    let t = optimal_time(a).map_err(|e| e.to_string())?;
    let m = converged_block(|dd| receiver_unitary(&ShParams::new(a, 1, dd)?), d, 0.01).map_err(|e| e.to_string())?;
    let u = receiver_unitary(&ShParams::new(a, 1, d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let v = exact_unitary_m1(t, d).map_err(|e| e.to_string())?;
    block_distance(&u, &v, m).map_err(|e| e.to_string())
}

fn c3_values(d: usize) -> Result<Vec<f64>, String> {
    [0.05, 0.1].iter().map(|&n| generator_gap(n, d)).collect()
}

fn c3_generator_consistency() -> Check {
    let v = c3_values(40)?;
    ok_if(v.iter().all(|&x| x <= 1e-8), format!("block Frobenius distances {:.2e}, {:.2e}", v[0], v[1]))
}

fn fig1_grid() -> Vec<f64> {
    (0..20).map(|i| 10f64.powf(-3.0 + 2.0 * i as f64 / 19.0)).collect()
}

fn c4_values(d: usize) -> Result<Vec<f64>, String> {
    fig1_grid()
        .par_iter()
        .map(|&n| decomposed(amp(n), 10, d).map(|r| r.p_err).map_err(|e| e.to_string()))
        .collect()
}

fn c4_fig1() -> Check {
    let vals = c4_values(40)?;
    let rel: Vec<(f64, f64)> = fig1_grid()
        .iter()
        .zip(&vals)
        .map(|(&n, &p)| (n, p / helstrom(amp(n)) - 1.0))
        .collect();
    let bad: Vec<String> = rel
        .iter()
        .filter(|(_, r)| r.abs() > 0.05)
        .map(|(n, r)| format!("nbar {n:.4} at {:.2}%", 100.0 * r))
        .collect();
    let worst = rel.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max);
    let detail = format!("max relative excess {:.2}%", 100.0 * worst);
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; outside 5%: {}", bad.join(", ")))
    }
}

fn c5_scaling() -> Check {
    let s = error_scaling_exponent(Scheme::Splitting, 0.05f64, 60).map_err(|e| e.to_string())?;
    let c = error_scaling_exponent(Scheme::Commutator, 0.05f64, 60).map_err(|e| e.to_string())?;
    ok_if(
        (1.8..=2.2).contains(&s) && (2.7..=3.3).contains(&c),
        format!("splitting {s:.3}, commutator {c:.3}"),
    )
}

fn c6_tables() -> Check {
    let mut rows = Vec::new();
    let mut pass = true;
    for (t, k) in [(0.1, 10u64), (0.01, 100), (0.001, 1000)] {
        let s = resource_table(Scheme::Splitting, t).map_err(|e| e.to_string())?;
        let c = resource_table(Scheme::Commutator, t).map_err(|e| e.to_string())?;
        pass &= (s.linear, s.quadratic, s.cubic) == (k, 2 * k, 4 * k);
        pass &= (c.linear, c.quadratic, c.cubic) == (k * k, 2 * k * k, 3 * k * k);
        rows.push(format!("t={t}: ({},{},{}) / ({},{},{})", s.linear, s.quadratic, s.cubic, c.linear, c.quadratic, c.cubic));
    }
    ok_if(pass, rows.join("; "))
}

fn c7_crossover() -> Check {
    let g = |n: f64| homodyne(amp(n)) - kennedy(amp(n));
    let (mut lo, mut hi) = (0.3, 0.5);
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(format!("no sign change: at 0.3 {:.3e}, at 0.5 {:.3e}", g(lo), g(hi)));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    ok_if((0.35..=0.45).contains(&x), format!("crossover at nbar = {x:.6}"))
}

fn ods(nbar: f64, d: usize) -> Result<f64, String> {
    optimized_displacement_squeezing(amp(nbar), d, &SearchBounds::default(), &NelderMeadConfig::default())
        .map(|o| o.p_err)
        .map_err(|e| e.to_string())
}

fn sh(nbar: f64, m: usize, d: usize) -> Result<f64, String> {
    sh_exact(amp(nbar), m, d).map(|r| r.p_err).map_err(|e| e.to_string())
}

fn c8_squeezing_crossover() -> Check {
    let (hi_ods, hi_sh) = (ods(0.2, 40)?, sh(0.2, 1, 40)?);
    let (lo_ods, lo_sh) = (ods(0.05, 40)?, sh(0.05, 1, 40)?);
    ok_if(
        hi_ods < hi_sh && lo_ods > lo_sh,
        format!("nbar 0.2: squeeze {hi_ods:.6} vs M=1 {hi_sh:.6}; nbar 0.05: squeeze {lo_ods:.6} vs M=1 {lo_sh:.6}"),
    )
}

const C9_GRID: [f64; 3] = [0.05, 0.1, 0.2];

/// Per grid point: [ods, M=2, M=3, M=4, M=5].
fn c9_values(d: usize) -> Result<Vec<[f64; 5]>, String> {
    C9_GRID
        .iter()
        .map(|&n| Ok([ods(n, d)?, sh(n, 2, d)?, sh(n, 3, d)?, sh(n, 4, d)?, sh(n, 5, d)?]))
        .collect()
}

fn c9_higher_orders() -> Check {
    let vals = c9_values(40)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, v) in C9_GRID.iter().zip(&vals) {
        let hi = v[2..].iter().cloned().fold(f64::MIN, f64::max);
        let lo = v[2..].iter().cloned().fold(f64::MAX, f64::min);
        let spread = (hi - lo) / lo;
        pass &= v[1] < v[0] && spread <= 0.02;
        parts.push(format!("nbar {n}: M=2 {:.6} < squeeze {:.6}, M=3..5 spread {:.3}%", v[1], v[0], 100.0 * spread));
    }
    ok_if(pass, parts.join("; "))
}

fn random_low_energy(rng: &mut ChaCha8Rng, d: usize, levels: usize) -> DensityMatrix<f64> {
    let mut mix = Operator::<f64>::zeros(d).unwrap();
    let weights: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let amps: Vec<Complex<f64>> = (0..d)
            .map(|k| {
                if k < levels {
                    Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                } else {
                    Complex::new(0.0, 0.0)
                }
            })
            .collect();
        let rho = StateVector::new(amps).unwrap().to_density().into_operator();
        mix = Operator::from_fn(d, |i, j| mix.row(i)[j] + rho.row(i)[j] * (w / total)).unwrap();
    }
    DensityMatrix::new(mix).unwrap()
}

fn c10_loss_oracle() -> Check {
    let t = 0.99;
    let d = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let rho = random_low_energy(&mut rng, d, 5);
        let kraus = loss_channel(t, &rho).map_err(|e| e.to_string())?;
        let oracle = beamsplitter_loss_oracle(t, &rho, 12).map_err(|e| e.to_string())?;
        worst = worst.max(frobenius_distance(kraus.as_operator(), oracle.as_operator()).map_err(|e| e.to_string())?);
    }
    let mut worst_fid = 1.0f64;
    for gamma in [0.3, 0.7, 1.2] {
        let rho = coherent_state(Complex::new(gamma, 0.2), 40).map_err(|e| e.to_string())?.to_density();
        let out = loss_channel(t, &rho).map_err(|e| e.to_string())?;
        let target = coherent_state(Complex::new(gamma, 0.2) * t.sqrt(), 40).map_err(|e| e.to_string())?;
        worst_fid = worst_fid.min(out.fidelity_with_pure(&target).map_err(|e| e.to_string())?);
    }
    ok_if(
        worst <= 1e-10 && worst_fid >= 1.0 - 1e-9,
        format!("max Frobenius gap {worst:.1e}, min coherent fidelity 1 - {:.1e}", 1.0 - worst_fid),
    )
}

fn c11_noise_mitigation() -> Check {
    // K = 2 with one squeezing parameter per cubic gate; the reasons are in the README
    let k = 2;
    let grid = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3];
    let rows: Vec<Result<(f64, f64, f64, f64), String>> = grid
        .par_iter()
        .map(|&n| {
            let mut cfg = ReceiverConfig::new(ReceiverKind::DecomposedNoisy, amp(n));
            cfg.iterations = k;
            cfg.loss = LossModel::new(0.01).map_err(|e| e.to_string())?;
            cfg.detector = DetectorModel::new(1e-3, 0.8).map_err(|e| e.to_string())?;
            let template = Mitigation::zeros(SqueezeLayout::PerSlot, false, CUBIC_PER_ITERATION, k);
            let out = optimize_squeezing_mitigation(&cfg, &template).map_err(|e| e.to_string())?;
            Ok((n, out.unmitigated.p_err, out.result.p_err, homodyne(amp(n))))
        })
        .collect();
    let rows: Vec<(f64, f64, f64, f64)> = rows.into_iter().collect::<Result<_, _>>()?;
    let never_worse = rows.iter().all(|&(_, u, m, _)| m <= u + 1e-12);
    let beats: Vec<f64> = rows.iter().filter(|&&(_, _, m, h)| m < h).map(|r| r.0).collect();
    let detail = rows
        .iter()
        .map(|(n, u, m, h)| format!("{n}: {u:.4} -> {m:.4} (homodyne {h:.4})"))
        .collect::<Vec<_>>()
        .join("; ");
    ok_if(never_worse && !beats.is_empty(), format!("K={k} per-slot; {detail}; beats homodyne at {beats:?}"))
}

fn c12_pie() -> Check {
    let r = decomposed(amp(0.01), 10, 40).map_err(|e| e.to_string())?;
    let ch = BinaryChannel::new(r.p_wrong_given_plus, r.p_wrong_given_minus).map_err(|e| e.to_string())?;
    let value = pie(&ch, 0.01).map_err(|e| e.to_string())?;
    let bound = pie_bound(amp(0.01)).map_err(|e| e.to_string())?;
    let rel = (bound - value).abs() / bound;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let ch = BinaryChannel::new(rng.random::<f64>(), rng.random::<f64>()).map_err(|e| e.to_string())?;
        let a = bac_capacity(&ch).map_err(|e| e.to_string())?.0;
        let b = bac_capacity_closed_form(&ch).map_err(|e| e.to_string())?.0;
        worst = worst.max((a - b).abs());
    }
    ok_if(
        rel <= 0.10 && worst <= 1e-9,
        format!("PIE {value:.5} vs bound {bound:.5} ({:.2}% below); capacity agreement {worst:.1e}", 100.0 * rel),
    )
}

fn max_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn c13_truncation() -> Check {
    let d3 = max_change(&c3_values(40)?, &c3_values(80)?);
    let d4 = max_change(&c4_values(40)?, &c4_values(80)?);
    let flat = |v: Vec<[f64; 5]>| v.into_iter().flatten().collect::<Vec<f64>>();
    let d9 = max_change(&flat(c9_values(40)?), &flat(c9_values(80)?));
    ok_if(
        [d3, d4, d9].iter().all(|&x| x < 1e-6),
        format!("max change d=40 -> 80: criterion 3 {d3:.1e}, criterion 4 {d4:.1e}, criterion 9 {d9:.1e}"),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cvrx"))
        .args(args)
        .env_remove("CVRX_DEFAULT_DIM")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn c14_determinism() -> Check {
    let commands: [&[&str]; 7] = [
        &["sweep", "--nbar", "0.01:0.3:6", "--receivers", "helstrom,homodyne,kennedy,opt_disp,opt_disp_squeeze,sh_exact,decomposed", "--seed", "7", "--jobs", "3"],
        &["noisy", "--nbar", "0.05:0.2:2", "--iterations", "1", "--mitigate", "--max-evals", "200", "--seed", "7", "--jobs", "2"],
        &["resources"],
        &["resources", "--compare", "--nbar", "0.01:0.5:5"],
        &["decompose", "--alpha", "0.3", "--iterations", "2"],
        &["pie", "--nbar", "0.01:0.1:3", "--log", "--format", "json"],
        &["converge", "--receiver", "decomposed", "--at", "0.05", "--dim", "30"],
    ];
    for args in commands {
        let a = run_cli(args)?;
        let b = run_cli(args)?;
        if a != b {
            return Err(format!("output differs between runs of {args:?}"));
        }
    }
    // worker count must not change the bytes either
    let one = run_cli(&["sweep", "--nbar", "0.01:0.3:6", "--receivers", "opt_disp_squeeze,sh_exact", "--jobs", "1"])?;
    let four = run_cli(&["sweep", "--nbar", "0.01:0.3:6", "--receivers", "opt_disp_squeeze,sh_exact", "--jobs", "4"])?;
    ok_if(one == four, format!("{} commands byte-identical on re-run and across --jobs", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 14] = [
        ("closed-form spot checks", c1_closed_forms),
        ("coefficient identities", c2_coefficients),
        ("generator vs closed-form unitary", c3_generator_consistency),
        ("decomposed receiver within 5% of Helstrom", c4_fig1),
        ("error-order scaling", c5_scaling),
        ("resource tables", c6_tables),
        ("homodyne/Kennedy crossover", c7_crossover),
        ("squeezing vs first-order receiver", c8_squeezing_crossover),
        ("higher-order receivers", c9_higher_orders),
        ("loss channel oracle", c10_loss_oracle),
        ("noise and squeezing mitigation", c11_noise_mitigation),
        ("photon information efficiency", c12_pie),
        ("truncation robustness", c13_truncation),
        ("determinism", c14_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
