//! `opsi-emulation`: the emulated state-creation oracle and the symmetric-subspace reflection.

use pickone_core::{AmplitudeVector, RandomSource, C64};
use pickone_emulation::{
    emulation_bound, random_state, reflection_matrix, run_emulation, symmetric_reflection, CopyLayout,
    EmulationInstance, Frame, RefMode, MAX_TEST_COPIES,
};

use crate::args::{EmulationArgs, RefModeArg};
use crate::report::{Relation, ReportRow};
use crate::trials::{run_trials, trial_rng};

const EXPERIMENT: &str = "opsi-emulation";
const REFLECTION: &str = "symmetric-reflection";
const FLOAT_TOL: f64 = 1e-12;

fn mode(arg: RefModeArg) -> RefMode {
    match arg {
        RefModeArg::SymmetricTest => RefMode::SymmetricTest,
        RefModeArg::ExactRef => RefMode::ExactRef,
    }
}

fn mode_name(arg: RefModeArg) -> &'static str {
    match arg {
        RefModeArg::SymmetricTest => "symmetric-test",
        RefModeArg::ExactRef => "exact-ref",
    }
}

/// `Ψ^{⊗m}` as `m` registers.
fn power(psi: &AmplitudeVector, m: usize) -> anyhow::Result<AmplitudeVector> {
    let mut t = AmplitudeVector::basis(&[1], 0)?;
    for _ in 0..m {
        t = t.tensor(psi);
    }
    Ok(t.reshaped(vec![psi.len(); m.max(1)])?)
}

/// A random unit vector orthogonal to `axis`.
fn orthogonal_state(axis: &AmplitudeVector, rng: &mut RandomSource) -> anyhow::Result<AmplitudeVector> {
    let v = random_state(axis.len(), rng);
    let c: C64 = axis.amps().iter().zip(v.amps()).map(|(a, b)| a.conj() * b).sum();
    let amps = v.amps().iter().zip(axis.amps()).map(|(b, a)| b - c * a).collect();
    Ok(AmplitudeVector::normalized(vec![axis.len()], amps)?)
}

pub fn run(args: &EmulationArgs) -> anyhow::Result<Vec<ReportRow>> {
    let seed = args.common.seed;
    let instances = args.common.trials_or(40);
    let workers = args.common.workers;
    let ref_mode = mode(args.mode);
    let (ns, ms, q) = (&args.n, &args.m, args.q);
    let echo = |n: usize, m: usize, query: usize| serde_json::json!({ "d": args.d, "n": n, "m": m, "q": query, "mode": mode_name(args.mode), "instances": instances });
    let mut rows = Vec::new();
    if ns.iter().chain(ms).any(|&v| v == 0) || q == 0 {
        rows.push(ReportRow::error(EXPERIMENT, &echo(0, 0, q), "joint_trace_distance", "n, m and q must be positive"));
        return Ok(rows);
    }

    // Runs stay in the span of the frame (Ψ, ⊥, χ), so the standard frame in C³ is exact for any d.
    let frame = Frame::standard();
    let grid = run_trials(workers, instances, |i| {
        let inst = EmulationInstance::random(&mut trial_rng(seed, "emulation-instance", i));
        let mut out = Vec::with_capacity(ns.len() * ms.len());
        for &n in ns {
            for &m in ms {
                let run = run_emulation(&frame, &inst, q, n, m, CopyLayout::Symmetric, ref_mode)?;
                out.push(run.iter().map(|o| (o.joint_trace_distance, o.trace_distance)).collect::<Vec<_>>());
            }
        }
        Ok(out)
    })?;
    let at = |a: usize, b: usize| a * ms.len() + b;
    let mut mean = vec![vec![0.0; q]; ns.len() * ms.len()];
    for (a, &n) in ns.iter().enumerate() {
        for (b, &m) in ms.iter().enumerate() {
            for query in 0..q {
                let joint: Vec<f64> = grid.iter().map(|g| g[at(a, b)][query].0).collect();
                let work: Vec<f64> = grid.iter().map(|g| g[at(a, b)][query].1).collect();
                let max = joint.iter().copied().fold(0.0, f64::max);
                mean[at(a, b)][query] = joint.iter().sum::<f64>() / joint.len() as f64;
                let e = echo(n, m, query + 1);
                let bound = emulation_bound(query + 1, n, m, ref_mode);
                rows.push(ReportRow::check(
                    EXPERIMENT,
                    &e,
                    "joint_trace_distance_max",
                    max,
                    Relation::AtMost,
                    bound,
                    FLOAT_TOL,
                ));
                rows.push(ReportRow::report(EXPERIMENT, &e, "joint_trace_distance_mean", mean[at(a, b)][query], bound));
                rows.push(ReportRow::report(
                    EXPERIMENT,
                    &e,
                    "work_trace_distance_mean",
                    work.iter().sum::<f64>() / work.len() as f64,
                    bound,
                ));
            }
        }
    }
    for (query, _) in mean[0].iter().enumerate() {
        for (b, &m) in ms.iter().enumerate() {
            for a in 1..ns.len() {
                let e = echo(ns[a], m, query + 1);
                rows.push(
                    ReportRow::check(
                        EXPERIMENT,
                        &e,
                        "mean_joint_distance_vs_smaller_n",
                        mean[at(a, b)][query],
                        Relation::AtMost,
                        mean[at(a - 1, b)][query],
                        FLOAT_TOL,
                    )
                    .with_detail(format!("previous_n={}", ns[a - 1])),
                );
            }
        }
        for (a, &n) in ns.iter().enumerate() {
            for b in 1..ms.len() {
                let e = echo(n, ms[b], query + 1);
                rows.push(
                    ReportRow::check(
                        EXPERIMENT,
                        &e,
                        "mean_joint_distance_vs_smaller_m",
                        mean[at(a, b)][query],
                        Relation::AtMost,
                        mean[at(a, b - 1)][query],
                        FLOAT_TOL,
                    )
                    .with_detail(format!("previous_m={}", ms[b - 1])),
                );
            }
        }
    }
    rows.push(frame_cross_check(args, ref_mode)?);
    rows.extend(reflection_rows(args)?);
    Ok(rows)
}

/// The full `d`-dimensional simulation with separate copy registers against the reduced one.
fn frame_cross_check(args: &EmulationArgs, ref_mode: RefMode) -> anyhow::Result<ReportRow> {
    let (n, m, q) = (2usize, 2usize, 2usize);
    let e = serde_json::json!({ "d": args.d, "n": n, "m": m, "q": q, "mode": mode_name(args.mode) });
    let mut rng = trial_rng(args.common.seed, "emulation-cross-check", 0);
    let frame = match Frame::random(args.d, &mut rng) {
        Ok(f) => f,
        Err(err) => return Ok(ReportRow::error(EXPERIMENT, &e, "reduced_vs_full_dimension_max_diff", err)),
    };
    let inst = EmulationInstance::random(&mut rng);
    let full = run_emulation(&frame, &inst, q, n, m, CopyLayout::Registers, ref_mode)?;
    let reduced = run_emulation(&Frame::standard(), &inst, q, n, m, CopyLayout::Symmetric, ref_mode)?;
    let diff = full
        .iter()
        .zip(&reduced)
        .flat_map(|(a, b)| [a.joint_trace_distance - b.joint_trace_distance, a.trace_distance - b.trace_distance])
        .map(f64::abs)
        .fold(0.0, f64::max);
    Ok(ReportRow::check(EXPERIMENT, &e, "reduced_vs_full_dimension_max_diff", diff, Relation::AtMost, 0.0, 1e-9))
}

/// Deviation of `I − 2P_sym` from `(I − 2|Ψ⟩⟨Ψ|) ⊗ I` on `φ ⊗ Ψ^{⊗m}` with `φ ⊥ Ψ`, and the
/// eigenvalue −1 on `Ψ^{⊗(m+1)}`.
fn reflection_rows(args: &EmulationArgs) -> anyhow::Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for &m in &args.ref_m {
        let e = serde_json::json!({ "d": args.d, "m": m, "inputs": args.ref_inputs });
        if m == 0 || m > MAX_TEST_COPIES {
            rows.push(ReportRow::error(REFLECTION, &e, "deviation_max", format!("need 1 ≤ m ≤ {MAX_TEST_COPIES}")));
            continue;
        }
        let d = args.d;
        let regs: Vec<usize> = (0..=m).collect();
        let results = run_trials(args.common.workers, args.ref_inputs, |i| {
            let mut rng = trial_rng(args.common.seed, &format!("reflection-{m}"), i);
            let frame = Frame::random(d, &mut rng)?;
            let phi = orthogonal_state(&frame.psi, &mut rng)?;
            let t = power(&frame.psi, m)?;
            let input = phi.tensor(&t).reshaped(vec![d; m + 1])?;
            let ideal = phi
                .apply_register_matrix(0, &reflection_matrix(frame.psi.amps()))?
                .tensor(&t)
                .reshaped(vec![d; m + 1])?;
            let deviation = symmetric_reflection(&input, &regs)?.distance(&ideal)?;
            let sym = frame.psi.tensor(&t).reshaped(vec![d; m + 1])?;
            let negated = AmplitudeVector::new(sym.dims().to_vec(), sym.amps().iter().map(|a| -a).collect())?;
            let eigen_err = symmetric_reflection(&sym, &regs)?.distance(&negated)?;
            Ok((deviation, eigen_err))
        })?;
        let bound = 2.0 / ((m + 1) as f64).sqrt();
        let deviation = results.iter().map(|r| r.0).fold(0.0, f64::max);
        let eigen = results.iter().map(|r| r.1).fold(0.0, f64::max);
        rows.push(ReportRow::check(REFLECTION, &e, "deviation_max", deviation, Relation::AtMost, bound, 1e-9));
        rows.push(ReportRow::check(
            REFLECTION,
            &e,
            "symmetric_eigenvalue_error_max",
            eigen,
            Relation::AtMost,
            0.0,
            1e-7,
        ));
    }
    Ok(rows)
}
