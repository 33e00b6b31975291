use std::io::Write;

use checkerboard::lattice::{
    causality_residual, step_causal, step_simple, CausalFieldPair, DirectedAmplitudeField,
    Direction, Kernel, LatticeSpec, ScalarKind, TransitionRates,
};

use crate::config::{Mode, RunConfig, Weight};
use crate::error::CliError;
use crate::report::{fmt_f64, open_output};

pub fn kernel(config: &RunConfig) -> Kernel {
    let kernel = match config.weight {
        Weight::Real => Kernel::real(),
        Weight::Imaginary => Kernel::imaginary(config.epsilon),
    };
    if config.unit_straight {
        kernel.with_unit_straight()
    } else {
        kernel
    }
}

fn write_field(
    out: &mut dyn Write,
    step: usize,
    field: &DirectedAmplitudeField,
    labels: [&str; 2],
) -> std::io::Result<()> {
    for (site, dir, value) in field.iter() {
        let label = match dir {
            Direction::Plus => labels[0],
            Direction::Minus => labels[1],
        };
        writeln!(out, "{step},{site},{label},{},{}", fmt_f64(value.re), fmt_f64(value.im))?;
    }
    Ok(())
}

/// Snapshots after each of steps `1..=steps` (the initial field when
/// `steps = 0`), columns `step,site,dir,re,im`. The optional log holds the
/// conserved sum (simple) or the causality residual (causal) per step.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let spec = LatticeSpec::new(config.dt, config.sites, config.boundary)?;
    let site = config.source_site.unwrap_or(config.sites / 2);
    if site >= config.sites {
        return Err(CliError::Config(format!(
            "source-site {site} is outside a lattice of {} sites",
            config.sites
        )));
    }
    match config.mode {
        Mode::Simple => simulate_simple(config, &spec, site),
        Mode::Causal => simulate_causal(config, &spec, site),
    }
}

fn simulate_simple(config: &RunConfig, spec: &LatticeSpec, site: usize) -> Result<(), CliError> {
    let rates = TransitionRates::symmetric(config.a)?;
    let kernel = kernel(config);
    let kind = match config.weight {
        Weight::Real => ScalarKind::Real,
        Weight::Imaginary => ScalarKind::Complex,
    };
    let mut field = DirectedAmplitudeField::point_source(kind, config.sites, site, config.source_dir);
    // validate before any output is written
    step_simple(&field, &rates, spec, kernel)?;

    let mut out = open_output(config.output.as_deref())?;
    let mut log = config.log.as_deref().map(|p| open_output(Some(p))).transpose()?;
    writeln!(out, "step,site,dir,re,im")?;
    if let Some(log) = log.as_mut() {
        writeln!(log, "step,sum_re,sum_im")?;
        let sum = field.total_sum();
        writeln!(log, "0,{},{}", fmt_f64(sum.re), fmt_f64(sum.im))?;
    }
    if config.steps == 0 {
        write_field(&mut out, 0, &field, ["+", "-"])?;
    }
    for step in 1..=config.steps {
        field = step_simple(&field, &rates, spec, kernel)?;
        write_field(&mut out, step, &field, ["+", "-"])?;
        if let Some(log) = log.as_mut() {
            let sum = field.total_sum();
            writeln!(log, "{step},{},{}", fmt_f64(sum.re), fmt_f64(sum.im))?;
        }
    }
    out.flush()?;
    if let Some(mut log) = log {
        log.flush()?;
    }
    Ok(())
}

fn simulate_causal(config: &RunConfig, spec: &LatticeSpec, site: usize) -> Result<(), CliError> {
    let rates = TransitionRates::new(config.zeta_plus, config.zeta_minus)?;
    let forward =
        DirectedAmplitudeField::point_source(ScalarKind::Real, config.sites, site, config.source_dir);
    let mut pair = CausalFieldPair::from_forward(forward, &rates, spec)?;

    let mut out = open_output(config.output.as_deref())?;
    let mut log = config.log.as_deref().map(|p| open_output(Some(p))).transpose()?;
    writeln!(out, "step,site,dir,re,im")?;
    if let Some(log) = log.as_mut() {
        writeln!(log, "step,causality_residual")?;
    }
    let write_pair = |out: &mut dyn Write, step: usize, pair: &CausalFieldPair| {
        write_field(out, step, &pair.forward, ["+", "-"])?;
        write_field(out, step, &pair.backward, ["bar+", "bar-"])
    };
    if config.steps == 0 {
        write_pair(&mut out, 0, &pair)?;
    }
    for step in 1..=config.steps {
        let next = step_causal(&pair, &rates, spec)?;
        let residual = causality_residual(&pair, &next, spec)?;
        pair = next;
        write_pair(&mut out, step, &pair)?;
        if let Some(log) = log.as_mut() {
            writeln!(log, "{step},{}", fmt_f64(residual))?;
        }
    }
    out.flush()?;
    if let Some(mut log) = log {
        log.flush()?;
    }
    Ok(())
}
