use checkerboard::lattice::{
    path_sum_amplitude, reversal_histogram, Boundary, LatticeSpec, PathQuery, TransitionRates,
};
use serde::Serialize;

use crate::commands::simulate::kernel;
use crate::config::{RunConfig, Weight};
use crate::error::CliError;
use crate::report::{complex, write_json, Float};

#[derive(Serialize)]
struct PathSumReport {
    n: u32,
    start_dir: char,
    end_dir: char,
    displacement: i64,
    reversals: Option<u32>,
    feasible: bool,
    histogram: Vec<u64>,
    amplitude: [Float; 2],
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let spec = LatticeSpec::new(config.dt, config.sites.max(2), Boundary::Periodic)?;
    let rates = TransitionRates::symmetric(config.a)?;
    if config.weight == Weight::Real {
        rates.check_against(&spec)?;
    }
    let mut query = PathQuery::new(config.n, config.start_dir, config.end_dir, config.displacement);
    if let Some(r) = config.reversals {
        query = query.with_reversals(r);
    }
    let kernel = kernel(config);
    let amplitude = path_sum_amplitude(&query, &rates, &spec, kernel)?;
    let report = PathSumReport {
        n: config.n,
        start_dir: config.start_dir.symbol(),
        end_dir: config.end_dir.symbol(),
        displacement: config.displacement,
        reversals: config.reversals,
        feasible: query.is_feasible(),
        histogram: reversal_histogram(&query)?,
        amplitude: complex(amplitude),
    };
    write_json(&report, config.output.as_deref())?;
    Ok(())
}
