use checkerboard::gauge::{dirac_with_potential, FourPotential};
use checkerboard::linalg::{eig4, FourBlock};
use checkerboard::spectral::{
    assemble_intermediate, bilinearization_residual, dirac_form, dispersion, sigma_conjugate,
    MomentumPoint,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{complex, floats, write_json, Float};

type Matrix = Vec<Vec<[Float; 2]>>;

pub fn matrix(h: &FourBlock) -> Matrix {
    (0..4)
        .map(|r| (0..4).map(|c| complex(h.get(r, c))).collect())
        .collect()
}

#[derive(Serialize)]
struct Coupled {
    charge: Float,
    a0: Float,
    a_vec: Vec<Float>,
    hamiltonian: Matrix,
    shifted_eigenvalues: Vec<Float>,
}

#[derive(Serialize)]
struct ChainEntry {
    p: Vec<Float>,
    m: Float,
    p_mag: Float,
    dispersion: [Float; 2],
    intermediate: Matrix,
    sigma_conjugated: Matrix,
    dirac_form: Matrix,
    eigenvalues: Vec<Float>,
    bilinearization_residual: Float,
    #[serde(skip_serializing_if = "Option::is_none")]
    coupled: Option<Coupled>,
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    if config.momenta.is_empty() || config.masses.is_empty() {
        return Err(CliError::Config("chain needs at least one momentum and one mass".into()));
    }
    if let Some(m) = config.masses.iter().find(|m| **m < 0.0) {
        return Err(CliError::Config(format!("mass {m} must be non-negative")));
    }
    let potential = FourPotential::constant(config.charge, config.a0, config.a_vec)?;
    let mut entries = Vec::new();
    for &p in &config.momenta {
        for &m in &config.masses {
            let point = MomentumPoint::new(p, 0.0, m);
            let intermediate = assemble_intermediate(&point);
            let h = dirac_form(p, m);
            let (upper, lower) = dispersion(&point);
            let coupled = if config.charge != 0.0 {
                let (h_a, _) = dirac_with_potential(&point, &potential)?;
                let shift = config.charge * config.a0;
                Some(Coupled {
                    charge: Float(config.charge),
                    a0: Float(config.a0),
                    a_vec: floats(&config.a_vec),
                    hamiltonian: matrix(&h_a),
                    shifted_eigenvalues: floats(&eig4(&h_a)?.map(|e| e + shift)),
                })
            } else {
                None
            };
            entries.push(ChainEntry {
                p: floats(&p),
                m: Float(m),
                p_mag: Float(point.p_mag()),
                dispersion: [Float(upper), Float(lower)],
                intermediate: matrix(&intermediate),
                sigma_conjugated: matrix(&sigma_conjugate(&intermediate)),
                dirac_form: matrix(&h),
                eigenvalues: floats(&eig4(&h)?),
                bilinearization_residual: Float(bilinearization_residual(p)),
                coupled,
            });
        }
    }
    write_json(&entries, config.output.as_deref())?;
    Ok(())
}
