//! Discrete Fourier passage between a periodic `(z, t)` window of chiral
//! fields and mode amplitudes on the conjugate `(p, E)` grid.
//!
//! Synthesis follows the mode expansion
//!
//! ```text
//! A±(z, t) = Σ_{p,E} e^{−i(p z − E t)} a±(p, E) = Σ_{p,E} e^{−i(p z + E t)} ā±(p, E)
//! ```
//!
//! with `p = 2πk/(NΔz)`, `E = 2πj/(TΔt)`. Analysis carries the `1/(N·T)`
//! factor so a unit plane wave maps to a unit spike. Both branches are read
//! from the same spectrum: `ā±(p, E) = a±(p, −E)`.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::modes::ModeAmplitudes;
use crate::continuum::ChiralField;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// Shape and spacing of a rectangular, doubly periodic `(z, t)` window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeGrid {
    pub num_sites: usize,
    pub num_times: usize,
    pub delta_z: f64,
    pub delta_t: f64,
}

impl SpacetimeGrid {
    pub fn new(num_sites: usize, num_times: usize, delta_z: f64, delta_t: f64) -> Result<Self> {
        if num_sites == 0 || num_times == 0 {
            return Err(Error::GridMismatch("grid needs at least one point per axis".into()));
        }
        if !(delta_z > 0.0 && delta_t > 0.0 && delta_z.is_finite() && delta_t.is_finite()) {
            return Err(Error::GridMismatch("grid spacings must be positive".into()));
        }
        Ok(Self {
            num_sites,
            num_times,
            delta_z,
            delta_t,
        })
    }

    pub fn len(&self) -> usize {
        self.num_sites * self.num_times
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, time slowest.
    pub fn index(&self, site: usize, time: usize) -> usize {
        time * self.num_sites + site
    }

    /// Momentum of mode index `k`, folded to `(−N/2, N/2]`.
    pub fn momentum(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * signed_index(k, self.num_sites) as f64
            / (self.num_sites as f64 * self.delta_z)
    }

    /// Energy of mode index `j`, folded to `(−T/2, T/2]`.
    pub fn energy(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * signed_index(j, self.num_times) as f64
            / (self.num_times as f64 * self.delta_t)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples for a {}x{} grid, got {len}",
                self.len(),
                self.num_sites,
                self.num_times
            )));
        }
        Ok(())
    }
}

/// `k` folded into `(−n/2, n/2]`.
pub fn signed_index(k: usize, n: usize) -> i64 {
    let k = k as i64;
    let n = n as i64;
    if 2 * k > n {
        k - n
    } else {
        k
    }
}

/// `A±` sampled on a spacetime grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralWindow {
    pub grid: SpacetimeGrid,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl ChiralWindow {
    pub fn new(grid: SpacetimeGrid, plus: Vec<Complex64>, minus: Vec<Complex64>) -> Result<Self> {
        grid.check_len(plus.len())?;
        grid.check_len(minus.len())?;
        Ok(Self { grid, plus, minus })
    }

    /// Stacks consecutive chiral slices; every slice must have the lattice's
    /// site count.
    pub fn from_history(history: &[ChiralField], spec: &LatticeSpec) -> Result<Self> {
        let grid =
            SpacetimeGrid::new(spec.num_sites(), history.len(), spec.delta_z(), spec.delta_t())?;
        let mut plus = Vec::with_capacity(grid.len());
        let mut minus = Vec::with_capacity(grid.len());
        for slice in history {
            if slice.num_sites() != spec.num_sites() {
                return Err(Error::GridMismatch(format!(
                    "slice has {} sites, window has {}",
                    slice.num_sites(),
                    spec.num_sites()
                )));
            }
            plus.extend_from_slice(&slice.plus);
            minus.extend_from_slice(&slice.minus);
        }
        Self::new(grid, plus, minus)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.plus
            .iter()
            .zip(&other.plus)
            .chain(self.minus.iter().zip(&other.minus))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Forward-branch amplitudes `a±` on the conjugate grid, same layout as the
/// window (`E` index slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub grid: SpacetimeGrid,
    pub a_plus: Vec<Complex64>,
    pub a_minus: Vec<Complex64>,
}

impl ModeSpectrum {
    pub fn new(grid: SpacetimeGrid, a_plus: Vec<Complex64>, a_minus: Vec<Complex64>) -> Result<Self> {
        grid.check_len(a_plus.len())?;
        grid.check_len(a_minus.len())?;
        Ok(Self {
            grid,
            a_plus,
            a_minus,
        })
    }

    /// All four amplitudes at momentum index `k`, energy index `j`.
    pub fn modes_at(&self, k: usize, j: usize) -> ModeAmplitudes {
        let g = &self.grid;
        let here = g.index(k, j);
        let mirrored = g.index(k, (g.num_times - j) % g.num_times);
        ModeAmplitudes {
            a_plus: self.a_plus[here],
            a_minus: self.a_minus[here],
            abar_plus: self.a_plus[mirrored],
            abar_minus: self.a_minus[mirrored],
        }
    }
}

/// Separable 2-D transform. Along `z` the exponent sign is `z_sign`, along
/// `t` it is `t_sign` (`+` is rustfft's inverse direction).
fn transform(
    values: &[Complex64],
    grid: &SpacetimeGrid,
    z_direction: FftDirection,
    t_direction: FftDirection,
    scale: f64,
) -> Vec<Complex64> {
    let (n, t) = (grid.num_sites, grid.num_times);
    let mut planner = FftPlanner::<f64>::new();
    let mut data = values.to_vec();

    let along_z = planner.plan_fft(n, z_direction);
    for row in data.chunks_exact_mut(n) {
        along_z.process(row);
    }

    let along_t = planner.plan_fft(t, t_direction);
    let mut column = vec![Complex64::new(0.0, 0.0); t];
    for site in 0..n {
        for (time, slot) in column.iter_mut().enumerate() {
            *slot = data[time * n + site];
        }
        along_t.process(&mut column);
        for (time, value) in column.iter().enumerate() {
            data[time * n + site] = value * scale;
        }
    }
    data
}

/// `a(p, E) = (1/(N·T)) Σ_{z,t} e^{+i(p z − E t)} A(z, t)` for one component.
pub fn analyze(values: &[Complex64], grid: &SpacetimeGrid) -> Result<Vec<Complex64>> {
    grid.check_len(values.len())?;
    let scale = 1.0 / grid.len() as f64;
    Ok(transform(values, grid, FftDirection::Inverse, FftDirection::Forward, scale))
}

/// `A(z, t) = Σ_{p,E} e^{−i(p z − E t)} a(p, E)` for one component.
pub fn synthesize(spectrum: &[Complex64], grid: &SpacetimeGrid) -> Result<Vec<Complex64>> {
    grid.check_len(spectrum.len())?;
    Ok(transform(spectrum, grid, FftDirection::Forward, FftDirection::Inverse, 1.0))
}

pub fn dft_forward(window: &ChiralWindow) -> Result<ModeSpectrum> {
    ModeSpectrum::new(
        window.grid,
        analyze(&window.plus, &window.grid)?,
        analyze(&window.minus, &window.grid)?,
    )
}

pub fn dft_inverse(spectrum: &ModeSpectrum) -> Result<ChiralWindow> {
    ChiralWindow::new(
        spectrum.grid,
        synthesize(&spectrum.a_plus, &spectrum.grid)?,
        synthesize(&spectrum.a_minus, &spectrum.grid)?,
    )
}
