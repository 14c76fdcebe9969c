//! Implicit-Euler runs with the trajectory checks that apply to each parameter point.

use std::fmt::Write as _;

use semilab_core::semigroup::{
    assemble_generator, check_positivity_submarkov, check_quasi_contractivity, implicit_euler_evolve,
    truncated_potential_experiment, MMatrixCertificate, Potential, Trajectory,
};
use semilab_core::{GridFunction, InequalityReport};
use serde::Serialize;

use crate::config::{GridPoint, RunConfig};
use crate::output::write_json;
use crate::{setup, RunSummary};

#[derive(Debug, Clone, Serialize)]
pub struct TruncationSection {
    pub levels: Vec<f64>,
    pub monotonicity: InequalityReport,
    pub positivity: InequalityReport,
    pub sup_differences: Vec<f64>,
    pub decay_ratios: Vec<f64>,
    /// Consecutive sup-differences shrink at least by a factor 2.
    pub decay: InequalityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub point: GridPoint,
    pub lambda_min: Option<f64>,
    pub lambda: Option<f64>,
    pub certificate: Option<MMatrixCertificate>,
    pub certificate_holds: Option<bool>,
    pub contractivity: Vec<InequalityReport>,
    pub positivity: Option<InequalityReport>,
    /// Present when `c >= 0`.
    pub sub_markov: Option<InequalityReport>,
    /// Monotone approximation by truncated potentials, present when `c < 0`.
    pub truncation: Option<TruncationSection>,
    pub passed: usize,
    pub failed: usize,
    pub error: Option<String>,
}

impl SimulationReport {
    fn reports(&self) -> impl Iterator<Item = &InequalityReport> {
        let trunc = self
            .truncation
            .iter()
            .flat_map(|t| [&t.monotonicity, &t.positivity, &t.decay]);
        self.contractivity
            .iter()
            .chain(self.positivity.iter())
            .chain(self.sub_markov.iter())
            .chain(trunc)
    }
}

pub struct Simulation {
    pub report: SimulationReport,
    pub trajectory: Option<Trajectory>,
}

pub fn simulate_point(cfg: &RunConfig, point: &GridPoint) -> Simulation {
    let mut report = SimulationReport {
        point: *point,
        lambda_min: None,
        lambda: None,
        certificate: None,
        certificate_holds: None,
        contractivity: Vec::new(),
        positivity: None,
        sub_markov: None,
        truncation: None,
        passed: 0,
        failed: 0,
        error: None,
    };
    let trajectory = match fill(cfg, point, &mut report) {
        Ok(t) => Some(t),
        Err(e) => {
            report.error = Some(e.to_string());
            None
        }
    };
    report.passed = report.reports().filter(|r| r.pass).count();
    report.failed = report.reports().filter(|r| !r.pass).count() + usize::from(report.error.is_some());
    Simulation { report, trajectory }
}

fn fill(cfg: &RunConfig, point: &GridPoint, report: &mut SimulationReport) -> semilab_core::Result<Trajectory> {
    let params = setup::params(point)?;
    let mesh = setup::mesh(cfg, params.dim())?;
    let (lm, lambda) = setup::shift(cfg, &params)?;
    report.lambda_min = Some(lm);
    report.lambda = Some(lambda);
    let op = assemble_generator(&params, mesh.clone(), lambda, Potential::Standard)?;
    let cert = op.certificate();
    report.certificate = Some(cert);
    report.certificate_holds = Some(cert.holds_for(cfg.time.dt));

    let u0 = GridFunction::new(mesh.clone(), cfg.initial.sample(&mesh))?;
    let (dt, steps) = (cfg.time.dt, cfg.time.steps);
    let traj = implicit_euler_evolve(&op, &u0, dt, steps, &cfg.p_list)?;
    let tol = &cfg.tolerances;
    report.contractivity = cfg
        .p_list
        .iter()
        .map(|&p| check_quasi_contractivity(&traj, p, lambda, tol.contractivity))
        .collect();
    let mut pos = check_positivity_submarkov(&traj, params.c(), tol.positivity).into_iter();
    report.positivity = pos.next();
    report.sub_markov = pos.next();

    if params.c() < 0.0 {
        let exp = truncated_potential_experiment(
            &params,
            mesh,
            lambda,
            &cfg.truncation_levels,
            &u0,
            dt,
            steps,
            tol.positivity,
        )?;
        let least = exp.decay_ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let decay = InequalityReport::lower("sup-difference decay factor", least, 2.0, 0.0)
            .with_context(format!("ratios {:?}", exp.decay_ratios));
        report.truncation = Some(TruncationSection {
            levels: exp.n_list,
            monotonicity: exp.monotonicity,
            positivity: exp.positivity,
            sup_differences: exp.sup_differences,
            decay_ratios: exp.decay_ratios,
            decay,
        });
    }
    Ok(traj)
}

/// `t,r,value` at every `stride`-th level (the last level is always included).
pub fn trajectory_csv(traj: &Trajectory, stride: usize) -> String {
    let mut s = String::from("t,r,value\n");
    let last = traj.states.len() - 1;
    for (k, (t, st)) in traj.times.iter().zip(&traj.states).enumerate() {
        if k % stride != 0 && k != last {
            continue;
        }
        for (r, v) in st.mesh.nodes().iter().zip(&st.values) {
            let _ = writeln!(s, "{t},{r},{v}");
        }
    }
    s
}

/// `step,t,norm_p...` for every level.
pub fn norms_csv(traj: &Trajectory) -> String {
    let mut s = String::from("step,t");
    for p in &traj.p_list {
        let _ = write!(s, ",norm_p{p}");
    }
    s.push('\n');
    for (k, t) in traj.times.iter().enumerate() {
        let _ = write!(s, "{k},{t}");
        for n in &traj.norms {
            let _ = write!(s, ",{}", n[k]);
        }
        s.push('\n');
    }
    s
}

/// Writes `simulate.json` plus `trajectory_<index>.csv` and `norms_<index>.csv` per point.
pub fn run(cfg: &RunConfig) -> anyhow::Result<RunSummary> {
    let mut reports = Vec::new();
    for point in cfg.params.points() {
        let sim = simulate_point(cfg, &point);
        if let Some(traj) = &sim.trajectory {
            let tag = format!("{:03}", point.index);
            std::fs::write(
                cfg.out_dir.join(format!("trajectory_{tag}.csv")),
                trajectory_csv(traj, cfg.time.output_stride),
            )?;
            std::fs::write(cfg.out_dir.join(format!("norms_{tag}.csv")), norms_csv(traj))?;
        }
        reports.push(sim.report);
    }
    write_json(&cfg.out_dir.join("simulate.json"), &reports)?;
    Ok(RunSummary {
        passed: reports.iter().map(|r| r.passed).sum(),
        failed: reports.iter().map(|r| r.failed).sum(),
    })
}
