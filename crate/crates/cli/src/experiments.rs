//! The experiment drivers behind the subcommands. Each `*_trajectory`
//! function returns plain records; the `run_*` functions add file output.

use std::path::PathBuf;

use rayon::prelude::*;

use entropic_core::boltzmann::{bz_initial, BoltzConfig, SpectralOperator};
use entropic_core::fokker_planck::{fp_build, fp_initial, FpConfig, FpSystem};
use entropic_core::integrators::{
    forward_euler_step, integrate, IntegrateOptions, MidpointStepper,
};
use entropic_core::theory::{self, InequalityReport, SuitePlan};
use entropic_core::{
    entropy, Distribution, Equilibrium, ExperimentRecord, FixMode, TrajectoryRecorder,
};

use crate::config::{Experiment, RunConfig};
use crate::output;
use crate::CliError;

/// Label used in file names.
pub fn variant_name(fix: bool) -> &'static str {
    if fix {
        "fix_on"
    } else {
        "fix_off"
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub fix: bool,
    pub records: Vec<ExperimentRecord>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub trajectories: Vec<Trajectory>,
    pub files: Vec<PathBuf>,
}

fn step_count(dt: f64, t_end: f64) -> usize {
    ((t_end / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Implicit midpoint on the Fokker-Planck system, with the exact
/// semi-discrete solution as reference.
pub fn fp_trajectory(
    sys: &FpSystem,
    dt: f64,
    t_end: f64,
    fix: Option<FixMode>,
) -> entropic_core::Result<Vec<ExperimentRecord>> {
    let g0 = fp_initial(sys)?;
    let stepper = MidpointStepper::new(&sys.system, dt)?;
    let g0_values = g0.values().to_vec();
    let exact = move |t: f64| sys.exact(&g0_values, t);
    let mut recorder = TrajectoryRecorder::new();
    integrate(
        &g0,
        |g| stepper.step(g),
        IntegrateOptions {
            dt,
            n_steps: step_count(dt, t_end),
            fix,
        },
        &Equilibrium::constant(sys.n),
        &mut recorder,
        Some(&exact),
    )?;
    Ok(recorder.into_samples())
}

fn write_trajectories(
    cfg: &RunConfig,
    prefix: &str,
    trajectories: &[Trajectory],
) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for tr in trajectories {
        let path = cfg
            .out
            .join(format!("{prefix}_{}.csv", variant_name(tr.fix)));
        output::write_atomic(&path, &output::trajectory_csv(&tr.records))?;
        files.push(path);
    }
    Ok(files)
}

pub fn run_fp_experiment(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let sys = fp_build(&FpConfig::new(cfg.n))?;
    let trajectories = cfg
        .fix
        .variants()
        .iter()
        .map(|&fix| {
            let records = fp_trajectory(&sys, cfg.dt, cfg.t_end, fix.then_some(cfg.fix_mode))?;
            Ok(Trajectory { fix, records })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let files = write_trajectories(cfg, "fp", &trajectories)?;
    Ok(ExperimentOutput {
        trajectories,
        files,
    })
}

/// Raw forward Euler at `dt/4`, sampled at the coarse times `k·dt`.
pub fn bz_reference(
    op: &SpectralOperator,
    f0: &Distribution,
    dt: f64,
    n_steps: usize,
) -> entropic_core::Result<Vec<Vec<f64>>> {
    let fine = dt / 4.0;
    let mut f = f0.values().to_vec();
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(f.clone());
    for _ in 0..n_steps {
        for _ in 0..4 {
            f = forward_euler_step(&f, |x| op.collision_rhs(x), fine)?;
        }
        out.push(f.clone());
    }
    Ok(out)
}

/// Forward Euler on the spectral Boltzmann system; errors are measured
/// against `reference`, sampled at the same coarse times.
pub fn bz_trajectory(
    op: &SpectralOperator,
    f0: &Distribution,
    dt: f64,
    n_steps: usize,
    fix: Option<FixMode>,
    reference: &[Vec<f64>],
) -> entropic_core::Result<Vec<ExperimentRecord>> {
    let lookup = |t: f64| reference[(t / dt).round() as usize].clone();
    let mut recorder = TrajectoryRecorder::new();
    integrate(
        f0,
        |f| forward_euler_step(f, |x| op.collision_rhs(x), dt),
        IntegrateOptions { dt, n_steps, fix },
        &Equilibrium::constant(f0.len()),
        &mut recorder,
        Some(&lookup),
    )?;
    Ok(recorder.into_samples())
}

pub fn run_boltzmann_experiment(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let bcfg = BoltzConfig::new(cfg.m_lattice)?;
    let op = SpectralOperator::new(bcfg);
    let f0 = bz_initial(&bcfg)?;
    let n_steps = step_count(cfg.dt, cfg.t_end);
    let reference = bz_reference(&op, &f0, cfg.dt, n_steps)?;
    let trajectories = cfg
        .fix
        .variants()
        .iter()
        .map(|&fix| {
            let records = bz_trajectory(
                &op,
                &f0,
                cfg.dt,
                n_steps,
                fix.then_some(cfg.fix_mode),
                &reference,
            )?;
            Ok(Trajectory { fix, records })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let files = write_trajectories(cfg, "boltzmann", &trajectories)?;
    Ok(ExperimentOutput {
        trajectories,
        files,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Midpoint,
    ForwardEuler,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Midpoint => "midpoint",
            Scheme::ForwardEuler => "euler",
        }
    }
}

/// One error-vs-step series of the convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    pub scheme: Scheme,
    pub fix: bool,
    /// Short tag for the step set, e.g. `coarse`.
    pub set: &'static str,
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log dt`.
    pub slope: f64,
}

impl ConvergenceSeries {
    pub fn label(&self) -> String {
        format!("{}_{}", self.scheme.name(), self.set)
    }
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Relative `L²` error at `t_end` against the exact semi-discrete solution.
pub fn fp_final_error(
    sys: &FpSystem,
    scheme: Scheme,
    dt: f64,
    t_end: f64,
    fix: Option<FixMode>,
) -> entropic_core::Result<f64> {
    let g0 = fp_initial(sys)?;
    let n_steps = step_count(dt, t_end);
    let opts = IntegrateOptions { dt, n_steps, fix };
    let e = Equilibrium::constant(sys.n);
    let mut recorder = TrajectoryRecorder::new();
    let last = match scheme {
        Scheme::Midpoint => {
            let stepper = MidpointStepper::new(&sys.system, dt)?;
            integrate(&g0, |g| stepper.step(g), opts, &e, &mut recorder, None)?
        }
        Scheme::ForwardEuler => integrate(
            &g0,
            |g| forward_euler_step(g, |x| Ok(sys.rhs(x)), dt),
            opts,
            &e,
            &mut recorder,
            None,
        )?,
    };
    let exact = sys.exact(g0.values(), n_steps as f64 * dt);
    entropy::l2_rel_error(last.values(), &exact, &sys.weights)
}

/// `1/128 … 1/2048`: the steps named for the study.
pub fn coarse_steps() -> Vec<f64> {
    (7..=11).map(|k| 0.5f64.powi(k)).collect()
}

/// `1/1024 … 1/16384`: midpoint steps inside the asymptotic range.
pub fn midpoint_asymptotic_steps() -> Vec<f64> {
    (10..=14).map(|k| 0.5f64.powi(k)).collect()
}

/// `2⁻¹⁴ … 2⁻¹⁸`: forward Euler steps inside its stability region.
pub fn euler_steps() -> Vec<f64> {
    (14..=18).map(|k| 0.5f64.powi(k)).collect()
}

pub fn convergence_series(
    sys: &FpSystem,
    scheme: Scheme,
    set: &'static str,
    dts: &[f64],
    t_end: f64,
    fix: Option<FixMode>,
) -> entropic_core::Result<ConvergenceSeries> {
    let errors = dts
        .par_iter()
        .map(|&dt| fp_final_error(sys, scheme, dt, t_end, fix))
        .collect::<entropic_core::Result<Vec<f64>>>()?;
    let lx: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    Ok(ConvergenceSeries {
        scheme,
        fix: fix.is_some(),
        set,
        dts: dts.to_vec(),
        errors,
        slope: least_squares_slope(&lx, &ly),
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceOutput {
    pub series: Vec<ConvergenceSeries>,
    pub files: Vec<PathBuf>,
}

pub fn run_convergence_study(cfg: &RunConfig) -> Result<ConvergenceOutput, CliError> {
    let sys = fp_build(&FpConfig::new(cfg.n))?;
    let mut plan: Vec<(Scheme, &'static str, Vec<f64>, bool)> = Vec::new();
    for &fix in cfg.fix.variants() {
        plan.push((Scheme::Midpoint, "coarse", coarse_steps(), fix));
        plan.push((
            Scheme::Midpoint,
            "asymptotic",
            midpoint_asymptotic_steps(),
            fix,
        ));
        plan.push((Scheme::ForwardEuler, "asymptotic", euler_steps(), fix));
    }
    let series = plan
        .into_par_iter()
        .map(|(scheme, set, dts, fix)| {
            convergence_series(
                &sys,
                scheme,
                set,
                &dts,
                cfg.t_end,
                fix.then_some(cfg.fix_mode),
            )
        })
        .collect::<entropic_core::Result<Vec<_>>>()?;
    let detail = cfg.out.join("convergence.csv");
    let summary = cfg.out.join("convergence_summary.csv");
    output::write_atomic(&detail, &output::convergence_csv(&series))?;
    output::write_atomic(&summary, &output::convergence_summary_csv(&series))?;
    Ok(ConvergenceOutput {
        series,
        files: vec![detail, summary],
    })
}

#[derive(Debug, Clone)]
pub struct TheoryOutput {
    pub reports: Vec<InequalityReport>,
    pub files: Vec<PathBuf>,
}

/// Runs the full theory suite, or the single check named in the config.
/// Fails with a property error listing the worst samples if any check is
/// violated; the report file is written either way.
pub fn run_theory_suite(cfg: &RunConfig) -> Result<TheoryOutput, CliError> {
    let plan = SuitePlan::default();
    let reports = match &cfg.check {
        Some(name) => {
            if !theory::CHECK_NAMES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown check '{name}'; expected one of {}",
                    theory::CHECK_NAMES.join(", ")
                )));
            }
            vec![theory::run_check(name, &plan, cfg.seed)?]
        }
        None => theory::CHECK_NAMES
            .par_iter()
            .map(|name| theory::run_check(name, &plan, cfg.seed))
            .collect::<entropic_core::Result<Vec<_>>>()?,
    };
    let path = cfg.out.join("theory.csv");
    output::write_atomic(&path, &output::theory_csv(&reports))?;
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.satisfied)
        .map(|r| format!("{r}\n  worst sample: {}", r.worst_sample))
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Property(failures.join("\n")));
    }
    Ok(TheoryOutput {
        reports,
        files: vec![path],
    })
}

/// Runs the configured experiment and returns the files written.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    Ok(match cfg.experiment {
        Experiment::Fp => run_fp_experiment(cfg)?.files,
        Experiment::Boltzmann => run_boltzmann_experiment(cfg)?.files,
        Experiment::Convergence => run_convergence_study(cfg)?.files,
        Experiment::Theory => run_theory_suite(cfg)?.files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = [1.0f64, 2.0, 4.0, 8.0].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = [1.0f64, 4.0, 16.0, 64.0]
            .iter()
            .map(|y| (3.0 * y).ln())
            .collect();
        assert!((least_squares_slope(&xs, &ys) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn step_sets_divide_study_horizon() {
        let t_end = RunConfig::defaults(Experiment::Convergence).t_end;
        for dt in coarse_steps()
            .into_iter()
            .chain(midpoint_asymptotic_steps())
            .chain(euler_steps())
        {
            let steps = t_end / dt;
            assert_eq!(steps, steps.round());
        }
    }

    #[test]
    fn small_fp_run_records_every_step() {
        let sys = fp_build(&FpConfig::new(16)).unwrap();
        let records =
            fp_trajectory(&sys, 1.0 / 256.0, 1.0 / 64.0, Some(FixMode::RootSolve)).unwrap();
        assert_eq!(records.len(), 5);
        assert_eq!(records[0].t, 0.0);
        assert!(records[0].l2_rel_error < 1e-13);
        let m0 = records[0].mass;
        assert!(records.iter().all(|r| ((r.mass - m0) / m0).abs() < 1e-12));
    }

    #[test]
    fn small_boltzmann_run() {
        let bcfg = BoltzConfig::new(3).unwrap();
        let op = SpectralOperator::new(bcfg);
        let f0 = bz_initial(&bcfg).unwrap();
        let reference = bz_reference(&op, &f0, 0.001, 4).unwrap();
        let records = bz_trajectory(&op, &f0, 0.001, 4, None, &reference).unwrap();
        assert_eq!(records.len(), 5);
        assert_eq!(records[0].l2_rel_error, 0.0);
        assert!(records[4].l2_rel_error > 0.0);
    }
}
