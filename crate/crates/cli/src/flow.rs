use std::collections::BTreeMap;

use cosphere::fixtures::check_reduced_membership_with;
use cosphere::tolerance::KERNEL_RESIDUAL;
use cosphere::{
    flow_exact, flow_invariants_closed, flow_rk4, hilbert_map, invariants, momentum,
    trajectory_exact, HilbertImage, PhasePoint, Trajectory, ZeroLevelSampler,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{fmt_f64, CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum FlowMethodArg {
    Exact,
    #[default]
    Rk4,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowSummary {
    pub rows: usize,
    pub start: PhasePoint,
    /// Largest gap between the flowed invariants and the closed form.
    pub max_closed_form_error: f64,
    pub max_p4_drift: f64,
    pub max_mass_drift: f64,
    pub max_momentum: f64,
    /// Endpoint distance to the exact flow.
    pub endpoint_error: f64,
    /// Time spent in each stratum, counted in samples.
    pub strata: BTreeMap<String, usize>,
}

pub struct FlowRun {
    pub summary: FlowSummary,
    pub csv: String,
}

fn start_point(config: &RunConfig) -> CliResult<PhasePoint> {
    if let Some(p) = &config.start {
        return Ok(p.normalized());
    }
    let fixture = config.source.fixture()?;
    let sampler = ZeroLevelSampler::new(fixture.spec(), config.pattern.clone())?;
    Ok(sampler.sample_at(config.require_seed()?, config.sample_index)?)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Flows a zero-level start point of a builtin fixture and tabulates the
/// state, its invariants, the closed-form prediction and the conservation
/// residuals at every time sample.
pub fn run_flow(config: &RunConfig, method: FlowMethodArg) -> CliResult<FlowRun> {
    let fixture = config.source.fixture()?;
    let spec = fixture.spec();
    let start = start_point(config)?;
    if start.x.len() != 2 * spec.n {
        return Err(CliError::Input(format!(
            "start point must have {} coordinates",
            2 * spec.n
        )));
    }
    let image0 = hilbert_map(&spec, &start, KERNEL_RESIDUAL)?;
    let inv0 = invariants(&start);
    let trajectory: Trajectory = match method {
        FlowMethodArg::Rk4 => flow_rk4(&start, config.t_end, config.step)?,
        FlowMethodArg::Exact => {
            if !(config.step > 0.0 && config.t_end > 0.0) {
                return Err(cosphere::Error::Precondition(
                    "step and t_end must be positive".into(),
                )
                .into());
            }
            let steps = (config.t_end / config.step).ceil() as usize;
            let mut times: Vec<f64> = (0..steps).map(|i| i as f64 * config.step).collect();
            times.push(config.t_end);
            times.dedup();
            trajectory_exact(&start, &times)?
        }
    };

    let n = spec.n;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=2 * n).map(|i| format!("x_{i}")));
    header.extend((1..=2 * n).map(|i| format!("u_{i}")));
    for j in 1..=n {
        header.extend((1..=4).map(|q| format!("p{q}_{j}")));
    }
    for j in 1..=n {
        header.extend((1..=3).map(|q| format!("closed_p{q}_{j}")));
    }
    header.extend(
        [
            "closed_form_error",
            "p4_drift",
            "mass_drift",
            "momentum",
            "stratum",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;

    let mut s = FlowSummary {
        rows: trajectory.times.len(),
        start: start.clone(),
        max_closed_form_error: 0.0,
        max_p4_drift: 0.0,
        max_mass_drift: 0.0,
        max_momentum: 0.0,
        endpoint_error: 0.0,
        strata: BTreeMap::new(),
    };
    for (&t, p) in trajectory.times.iter().zip(&trajectory.states) {
        let inv = invariants(p);
        let closed = flow_invariants_closed(&image0, t);
        let err = max_abs_diff(&inv.hilbert_coordinates(), &closed.0);
        let p4 = inv
            .planes
            .iter()
            .zip(&inv0.planes)
            .fold(0.0f64, |m, (a, b)| m.max((a.p4 - b.p4).abs()));
        let mass = inv
            .planes
            .iter()
            .zip(&inv0.planes)
            .fold(0.0f64, |m, (a, b)| {
                m.max(((a.p1 + a.p3) - (b.p1 + b.p3)).abs())
            });
        let j = momentum(&spec, p)?
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let stratum = check_reduced_membership_with(
            fixture,
            &HilbertImage(inv.hilbert_coordinates()),
            config.tolerance,
        )
        .map(|m| m.stratum.to_string())
        .unwrap_or_else(|_| "none".into());
        s.max_closed_form_error = s.max_closed_form_error.max(err);
        s.max_p4_drift = s.max_p4_drift.max(p4);
        s.max_mass_drift = s.max_mass_drift.max(mass);
        s.max_momentum = s.max_momentum.max(j);
        *s.strata.entry(stratum.clone()).or_default() += 1;

        let mut rec = vec![fmt_f64(t)];
        rec.extend(p.x.iter().chain(&p.u).map(|&v| fmt_f64(v)));
        for q in &inv.planes {
            rec.extend([q.p1, q.p2, q.p3, q.p4].map(fmt_f64));
        }
        rec.extend(closed.0.iter().map(|&v| fmt_f64(v)));
        rec.extend([err, p4, mass, j].map(fmt_f64));
        rec.push(stratum);
        w.write_record(&rec)?;
    }
    let end = trajectory.last();
    let exact = flow_exact(&start, *trajectory.times.last().expect("nonempty"));
    s.endpoint_error = max_abs_diff(&end.x, &exact.x).max(max_abs_diff(&end.u, &exact.u));
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(FlowRun {
        summary: s,
        csv: String::from_utf8(bytes).expect("csv is utf-8"),
    })
}

/// Writes the trajectory CSV to `--out` or stdout.
pub fn cmd_flow(config: &RunConfig, method: FlowMethodArg) -> CliResult<FlowSummary> {
    let run = run_flow(config, method)?;
    crate::emit(config.out.as_deref(), &run.csv)?;
    Ok(run.summary)
}
