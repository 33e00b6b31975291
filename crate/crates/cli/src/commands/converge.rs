use checkerboard::continuum::packets::{packet_history, WavePacket};
use checkerboard::continuum::{
    convergence_order_with_floor, transport_residual, zzb_pde_residual, ConvergenceOrder,
};
use checkerboard::lattice::{
    causal_history, Boundary, CausalFieldPair, DirectedAmplitudeField, LatticeSpec,
    TransitionRates,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Case, RunConfig};
use crate::error::CliError;
use crate::report::{write_json, Float};

/// Periodic domain length for the analytic packets.
pub const PACKET_LENGTH: f64 = 16.0;
/// Periodic domain length for lattice-driven ladders.
pub const LATTICE_LENGTH: f64 = 40.0;
/// Time at which lattice histories are differenced.
pub const LATTICE_TIME: f64 = 1.0;

fn sites_for(length: f64, dt: f64) -> Result<usize, CliError> {
    let sites = (length / dt).round();
    if !(sites >= 8.0 && ((sites * dt) - length).abs() <= 1e-9 * length) {
        return Err(CliError::Config(format!(
            "ladder step {dt} must divide the domain length {length} into at least 8 cells"
        )));
    }
    Ok(sites as usize)
}

fn packet() -> WavePacket {
    WavePacket::centered(
        PACKET_LENGTH,
        1.0,
        2.0,
        [Complex64::new(1.0, 0.0), Complex64::new(0.2, 0.4)],
    )
}

/// Transport residual of exactly evolved Gaussian packets at each `Δt`.
pub fn packet_ladder(ladder: &[f64], rates: &TransitionRates) -> Result<Vec<(f64, f64)>, CliError> {
    ladder
        .iter()
        .map(|&dt| {
            let spec = LatticeSpec::new(dt, sites_for(PACKET_LENGTH, dt)?, Boundary::Periodic)?;
            let times: Vec<f64> = (0..5).map(|k| 1.0 + k as f64 * dt).collect();
            let history = packet_history(&packet(), &spec, rates, &times)?;
            Ok((dt, transport_residual(&history, &spec, rates)?))
        })
        .collect()
}

fn lattice_start(spec: &LatticeSpec, rates: &TransitionRates) -> Result<CausalFieldPair, CliError> {
    let dz = spec.delta_z();
    let n = spec.num_sites();
    let z = |i: usize| (i as f64 - n as f64 / 2.0) * dz;
    let plus = (0..n)
        .map(|i| (-z(i).powi(2) / 4.0).exp() * (2.0 * z(i)).cos())
        .collect();
    let minus = (0..n)
        .map(|i| 0.5 * (-(z(i) - 0.5).powi(2) / 4.0).exp())
        .collect();
    let forward = DirectedAmplitudeField::from_real(plus, minus)?;
    Ok(CausalFieldPair::from_forward(forward, rates, spec)?)
}

/// Difference-field residual of causal-lattice runs from smooth data,
/// evaluated around `t = 1`.
pub fn lattice_ladder(ladder: &[f64], rates: &TransitionRates) -> Result<Vec<(f64, f64)>, CliError> {
    ladder
        .iter()
        .map(|&dt| {
            let spec = LatticeSpec::new(dt, sites_for(LATTICE_LENGTH, dt)?, Boundary::Periodic)?;
            let steps = (LATTICE_TIME / dt).round().max(1.0) as usize;
            let history = causal_history(lattice_start(&spec, rates)?, rates, &spec, steps + 1)?;
            Ok((dt, zzb_pde_residual(&history[steps - 1..=steps + 1], &spec, rates)?))
        })
        .collect()
}

pub fn check_ladder(ladder: &[f64]) -> Result<(), CliError> {
    if ladder.len() < 3 {
        return Err(CliError::Config(format!(
            "ladder needs at least 3 levels, got {}",
            ladder.len()
        )));
    }
    if ladder.iter().any(|&dt| dt <= 0.0) || ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Config("ladder must be positive and strictly decreasing".into()));
    }
    Ok(())
}

/// Residual ladder for one case.
pub fn case_ladder(config: &RunConfig, case: Case) -> Result<Vec<(f64, f64)>, CliError> {
    check_ladder(&config.ladder)?;
    let free = TransitionRates::new(0.0, 0.0)?;
    match case {
        Case::Transport => {
            packet_ladder(&config.ladder, &TransitionRates::new(config.zeta_plus, config.zeta_minus)?)
        }
        Case::FreeStreaming => packet_ladder(&config.ladder, &free),
        Case::Lattice => {
            lattice_ladder(&config.ladder, &TransitionRates::new(config.zeta_plus, config.zeta_minus)?)
        }
        Case::LatticeFree => lattice_ladder(&config.ladder, &free),
    }
}

#[derive(Serialize)]
struct Entry {
    dt: Float,
    residual: Float,
}

#[derive(Serialize)]
struct ConvergeReport {
    case: &'static str,
    entries: Vec<Entry>,
    order: Option<Float>,
    exact: bool,
}

pub fn order_parts(order: ConvergenceOrder) -> (Option<f64>, bool) {
    match order {
        ConvergenceOrder::Fitted(x) => (Some(x), false),
        ConvergenceOrder::Exact => (None, true),
    }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let entries = case_ladder(config, config.case)?;
    let (order, exact) = order_parts(convergence_order_with_floor(&entries, config.floor)?);
    let report = ConvergeReport {
        case: config.case.as_str(),
        entries: entries
            .iter()
            .map(|&(dt, residual)| Entry {
                dt: Float(dt),
                residual: Float(residual),
            })
            .collect(),
        order: order.map(Float),
        exact,
    };
    write_json(&report, config.output.as_deref())?;
    Ok(())
}
