//! Minimal coupling to an electromagnetic four-potential.
//!
//! In momentum space the substitution `p → p − eA`, `E → E − eA⁰` carries
//! the free Hamiltonian over to `α·(p − eA) + βm` with eigenvalue
//! `E − eA⁰`. In position space the same statement is
//!
//! ```text
//! [α·(−i∇ − eA) + βm] ψ = (i∂t − eA⁰) ψ
//! ```
//!
//! which [`position_space_residual`] evaluates on a periodic `z` axis. The
//! transverse momenta `p_x`, `p_y` of a [`SpinorField`] are fixed parameters
//! and are applied algebraically. Units are `ħ = c = 1`, metric `(+,−,−,−)`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{dirac_alpha, dirac_beta, FourBlock};
use crate::spectral::{dirac_form, MomentumPoint, SpacetimeGrid};

/// Spinor values at one grid point.
pub type Spinor = [Complex64; 4];

/// Potential sampled on a `(z, t)` grid, same layout as [`SpinorField`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    pub grid: SpacetimeGrid,
    pub a0: Vec<f64>,
    pub a_vec: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialField {
    Constant { a0: f64, a_vec: [f64; 3] },
    Sampled(SampledPotential),
}

/// `(A⁰, A)` together with the charge `e` that couples to it.
#[derive(Debug, Clone, PartialEq)]
pub struct FourPotential {
    pub charge: f64,
    pub field: PotentialField,
}

impl FourPotential {
    pub fn constant(charge: f64, a0: f64, a_vec: [f64; 3]) -> Result<Self> {
        if !(charge.is_finite() && a0.is_finite() && a_vec.iter().all(|x| x.is_finite())) {
            return Err(Error::GridMismatch("potential values must be finite".into()));
        }
        Ok(Self {
            charge,
            field: PotentialField::Constant { a0, a_vec },
        })
    }

    pub fn zero() -> Self {
        Self {
            charge: 0.0,
            field: PotentialField::Constant {
                a0: 0.0,
                a_vec: [0.0; 3],
            },
        }
    }

    pub fn sampled(charge: f64, sampled: SampledPotential) -> Result<Self> {
        let n = sampled.grid.len();
        if sampled.a0.len() != n || sampled.a_vec.len() != n {
            return Err(Error::GridMismatch(format!(
                "sampled potential needs {n} values per component"
            )));
        }
        let finite = charge.is_finite()
            && sampled.a0.iter().all(|x| x.is_finite())
            && sampled.a_vec.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(Error::GridMismatch("potential values must be finite".into()));
        }
        Ok(Self {
            charge,
            field: PotentialField::Sampled(sampled),
        })
    }

    /// `(A⁰, A)` at a grid point; constant potentials ignore the index.
    fn at(&self, index: usize) -> (f64, [f64; 3]) {
        match &self.field {
            PotentialField::Constant { a0, a_vec } => (*a0, *a_vec),
            PotentialField::Sampled(s) => (s.a0[index], s.a_vec[index]),
        }
    }
}

/// `p → p − eA`, `E → E − eA⁰` for a constant potential. The mass is kept.
pub fn minimal_couple(point: &MomentumPoint, potential: &FourPotential) -> Result<MomentumPoint> {
    let PotentialField::Constant { a0, a_vec } = potential.field else {
        return Err(Error::SampledPotential);
    };
    let e = potential.charge;
    Ok(MomentumPoint::new(
        [
            point.p[0] - e * a_vec[0],
            point.p[1] - e * a_vec[1],
            point.p[2] - e * a_vec[2],
        ],
        point.energy - e * a0,
        point.mass,
    ))
}

/// `H_A = α·(p − eA) + βm` and `|det(H_A − (E − eA⁰) I)|`, which vanishes
/// exactly on the coupled mass shell `(E − eA⁰)² = |p − eA|² + m²`.
pub fn dirac_with_potential(
    point: &MomentumPoint,
    potential: &FourPotential,
) -> Result<(FourBlock, f64)> {
    let coupled = minimal_couple(point, potential)?;
    let h = dirac_form(coupled.p, coupled.mass);
    let shifted = h - FourBlock::identity().scale(coupled.energy);
    Ok((h, shifted.determinant().norm()))
}

/// Four-component field on a periodic `z` axis over a run of time slices,
/// with fixed transverse momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub grid: SpacetimeGrid,
    pub transverse: [f64; 2],
    pub values: Vec<Spinor>,
}

impl SpinorField {
    pub fn new(grid: SpacetimeGrid, transverse: [f64; 2], values: Vec<Spinor>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} spinors, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::GridMismatch("spinor values must be finite".into()));
        }
        Ok(Self {
            grid,
            transverse,
            values,
        })
    }

    pub fn zeros(grid: SpacetimeGrid, transverse: [f64; 2]) -> Self {
        Self {
            grid,
            transverse,
            values: vec![[Complex64::new(0.0, 0.0); 4]; grid.len()],
        }
    }

    pub fn at(&self, site: usize, time: usize) -> Spinor {
        self.values[self.grid.index(site, time)]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// One momentum-space component `Ψ(p) e^{i(p·x − E t)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveMode {
    pub momentum: [f64; 3],
    pub energy: f64,
    pub spinor: Spinor,
}

/// Relative tolerance for `p_z` landing on the grid's momentum lattice.
const ON_GRID_TOLERANCE: f64 = 1e-9;

/// `ψ(z, t) = Σ Ψ e^{i(p_z z − E t)}` sampled at `z = jΔz`, `t = kΔt`.
///
/// Every `p_z` must be a multiple of `2π/(NΔz)` and all modes must share the
/// same transverse momentum, which is recorded on the result.
pub fn plane_wave_synthesize(modes: &[PlaneWaveMode], grid: SpacetimeGrid) -> Result<SpinorField> {
    let transverse = modes
        .first()
        .map_or([0.0, 0.0], |m| [m.momentum[0], m.momentum[1]]);
    let n = grid.num_sites;
    let period = n as f64 * grid.delta_z;
    let mut wave_numbers = Vec::with_capacity(modes.len());
    for mode in modes {
        if [mode.momentum[0], mode.momentum[1]] != transverse {
            return Err(Error::GridMismatch(
                "all modes must share the same transverse momentum".into(),
            ));
        }
        let k = mode.momentum[2] * period / (2.0 * std::f64::consts::PI);
        let rounded = k.round();
        if (k - rounded).abs() > ON_GRID_TOLERANCE * rounded.abs().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "p_z = {} is not on the momentum grid of spacing {}",
                mode.momentum[2],
                2.0 * std::f64::consts::PI / period
            )));
        }
        wave_numbers.push((rounded as i64).rem_euclid(n as i64) as usize);
    }

    let mut values = vec![[Complex64::new(0.0, 0.0); 4]; grid.len()];
    for (mode, &k) in modes.iter().zip(&wave_numbers) {
        for time in 0..grid.num_times {
            let t = time as f64 * grid.delta_t;
            for site in 0..n {
                // reduce k·j modulo N before scaling to keep the phase exact
                let spatial = 2.0 * std::f64::consts::PI * ((k * site) % n) as f64 / n as f64;
                let phase = Complex64::from_polar(1.0, spatial - mode.energy * t);
                let slot = &mut values[grid.index(site, time)];
                for (v, s) in slot.iter_mut().zip(&mode.spinor) {
                    *v += s * phase;
                }
            }
        }
    }
    SpinorField::new(grid, transverse, values)
}

/// Time-derivative stencil for [`position_space_residual_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeStencil {
    /// Second-order central difference, one slice dropped at each end.
    Central,
    /// Richardson combination of the central differences over `Δt` and
    /// `2Δt` (fourth order), two slices dropped at each end.
    #[default]
    Richardson,
}

impl TimeStencil {
    fn reach(self) -> usize {
        match self {
            TimeStencil::Central => 1,
            TimeStencil::Richardson => 2,
        }
    }
}

/// `∂z` of every component on each time slice, by FFT. The Nyquist mode of
/// an even grid is dropped.
fn spectral_z_derivative(psi: &SpinorField) -> Vec<Spinor> {
    let grid = psi.grid;
    let n = grid.num_sites;
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let multipliers: Vec<Complex64> = (0..n)
        .map(|k| {
            if n.is_multiple_of(2) && k == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, grid.momentum(k) / n as f64)
            }
        })
        .collect();

    let mut out = vec![[Complex64::new(0.0, 0.0); 4]; grid.len()];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for time in 0..grid.num_times {
        for component in 0..4 {
            for (site, slot) in row.iter_mut().enumerate() {
                *slot = psi.values[grid.index(site, time)][component];
            }
            forward.process(&mut row);
            for (value, m) in row.iter_mut().zip(&multipliers) {
                *value *= m;
            }
            inverse.process(&mut row);
            for (site, value) in row.iter().enumerate() {
                out[grid.index(site, time)][component] = *value;
            }
        }
    }
    out
}

fn check_potential_grid(psi: &SpinorField, potential: &FourPotential) -> Result<()> {
    if let PotentialField::Sampled(s) = &potential.field {
        if s.grid != psi.grid {
            return Err(Error::GridMismatch(format!(
                "potential grid {:?} differs from field grid {:?}",
                s.grid, psi.grid
            )));
        }
    }
    Ok(())
}

/// Max-norm of `[α·(−i∇ − eA) + βm]ψ − (i∂t − eA⁰)ψ` over all sites of the
/// interior time slices, using the default (Richardson) time stencil.
pub fn position_space_residual(psi: &SpinorField, potential: &FourPotential, mass: f64) -> Result<f64> {
    position_space_residual_with(psi, potential, mass, TimeStencil::default())
}

pub fn position_space_residual_with(
    psi: &SpinorField,
    potential: &FourPotential,
    mass: f64,
    stencil: TimeStencil,
) -> Result<f64> {
    check_potential_grid(psi, potential)?;
    let grid = psi.grid;
    let reach = stencil.reach();
    if grid.num_times < 2 * reach + 1 {
        return Err(Error::TooFewSlices {
            needed: 2 * reach + 1,
            found: grid.num_times,
        });
    }
    let d_z = spectral_z_derivative(psi);
    let alpha = [dirac_alpha(0), dirac_alpha(1), dirac_alpha(2)];
    let beta = dirac_beta();
    let e = potential.charge;
    let i = Complex64::new(0.0, 1.0);
    let dt = grid.delta_t;

    let slice_max = |time: usize| -> f64 {
        let mut worst: f64 = 0.0;
        for site in 0..grid.num_sites {
            let index = grid.index(site, time);
            let psi_here = psi.values[index];
            let (a0, a_vec) = potential.at(index);
            let at = |offset: isize| psi.values[grid.index(site, (time as isize + offset) as usize)];
            let d_t: Spinor = std::array::from_fn(|c| {
                let near = (at(1)[c] - at(-1)[c]) / (2.0 * dt);
                match stencil {
                    TimeStencil::Central => near,
                    TimeStencil::Richardson => {
                        let far = (at(2)[c] - at(-2)[c]) / (4.0 * dt);
                        (near * 4.0 - far) / 3.0
                    }
                }
            });
            let kinetic = [
                psi_here.map(|v| v * (psi.transverse[0] - e * a_vec[0])),
                psi_here.map(|v| v * (psi.transverse[1] - e * a_vec[1])),
                std::array::from_fn(|c| -i * d_z[index][c] - psi_here[c] * (e * a_vec[2])),
            ];
            let mut lhs = beta.apply(psi_here).map(|v| v * mass);
            for (matrix, v) in alpha.iter().zip(kinetic) {
                for (acc, term) in lhs.iter_mut().zip(matrix.apply(v)) {
                    *acc += term;
                }
            }
            for c in 0..4 {
                let rhs = i * d_t[c] - psi_here[c] * (e * a0);
                worst = worst.max((lhs[c] - rhs).norm());
            }
        }
        worst
    };

    let maxima: Vec<f64> = (reach..grid.num_times - reach)
        .into_par_iter()
        .map(slice_max)
        .collect();
    Ok(maxima.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig4;
    use crate::spectral::{dirac_spinor, EnergyBranch};
    use std::f64::consts::PI;

    #[test]
    fn zero_charge_is_identity() {
        let pt = MomentumPoint::new([1.0, -2.0, 0.5], 3.0, 1.0);
        let pot = FourPotential::constant(0.0, 7.0, [1.0, 2.0, 3.0]).unwrap();
        assert_eq!(minimal_couple(&pt, &pot).unwrap(), pt);
    }

    #[test]
    fn coupling_examples() {
        let pot = FourPotential::constant(1.0, 0.0, [1.0, 0.0, 0.0]).unwrap();
        let shifted = minimal_couple(&MomentumPoint::new([3.0, 0.0, 0.0], 0.0, 0.0), &pot).unwrap();
        assert_eq!(shifted.p, [2.0, 0.0, 0.0]);
        assert_eq!(shifted.p_mag(), 2.0);

        let pot = FourPotential::constant(1.0, 2.0, [0.0; 3]).unwrap();
        let shifted = minimal_couple(&MomentumPoint::new([0.0; 3], 5.0, 0.0), &pot).unwrap();
        assert_eq!(shifted.energy, 3.0);
    }

    #[test]
    fn sampled_potential_rejected_in_momentum_space() {
        let grid = SpacetimeGrid::new(2, 1, 1.0, 1.0).unwrap();
        let sampled = SampledPotential { grid, a0: vec![0.0; 2], a_vec: vec![[0.0; 3]; 2] };
        let pot = FourPotential::sampled(1.0, sampled).unwrap();
        let pt = MomentumPoint::new([0.0; 3], 1.0, 1.0);
        assert_eq!(minimal_couple(&pt, &pot), Err(Error::SampledPotential));
    }

    #[test]
    fn dirac_with_potential_examples() {
        let free = MomentumPoint::new([3.0, 0.0, 4.0], 5.0, 0.0);
        let (h, det) = dirac_with_potential(&free, &FourPotential::zero()).unwrap();
        assert!(h.max_abs_diff(&dirac_form([3.0, 0.0, 4.0], 0.0)) == 0.0);
        assert!(det <= 1e-10, "{det}");

        let pot = FourPotential::constant(1.0, 0.0, [1.0, 0.0, 0.0]).unwrap();
        let (h, det) = dirac_with_potential(&MomentumPoint::new([4.0, 0.0, 4.0], 5.0, 0.0), &pot).unwrap();
        assert!(det <= 1e-10, "{det}");
        let ev = eig4(&h).unwrap();
        for (got, want) in ev.iter().zip([5.0, 5.0, -5.0, -5.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    fn grid(n: usize, t: usize, length: f64, dt: f64) -> SpacetimeGrid {
        SpacetimeGrid::new(n, t, length / n as f64, dt).unwrap()
    }

    fn on_shell_mode(k: i64, transverse: [f64; 2], mass: f64, g: &SpacetimeGrid, pot: &FourPotential) -> PlaneWaveMode {
        let p_z = 2.0 * PI * k as f64 / (g.num_sites as f64 * g.delta_z);
        let canonical = [transverse[0], transverse[1], p_z];
        let kinetic = minimal_couple(&MomentumPoint::new(canonical, 0.0, mass), pot).unwrap();
        let (spinor, kinetic_energy) = dirac_spinor(kinetic.p, mass, EnergyBranch::Positive, 0);
        let (_, a0) = match pot.field {
            PotentialField::Constant { a0, .. } => (0, a0),
            _ => unreachable!(),
        };
        PlaneWaveMode { momentum: canonical, energy: kinetic_energy + pot.charge * a0, spinor }
    }

    #[test]
    fn free_plane_wave_solves_the_equation() {
        let g = grid(32, 24, 2.0 * PI, 1e-3);
        let pot = FourPotential::zero();
        let mode = on_shell_mode(2, [0.3, -0.4], 1.0, &g, &pot);
        let psi = plane_wave_synthesize(&[mode], g).unwrap();
        assert!(position_space_residual(&psi, &pot, 1.0).unwrap() <= 1e-10);
    }

    #[test]
    fn gauge_shifted_plane_wave_solves_the_coupled_equation() {
        let g = grid(32, 24, 2.0 * PI, 1e-3);
        let pot = FourPotential::constant(0.7, 0.4, [0.2, -0.1, 0.5]).unwrap();
        let mode = on_shell_mode(-3, [0.3, -0.4], 1.2, &g, &pot);
        let psi = plane_wave_synthesize(&[mode], g).unwrap();
        assert!(position_space_residual(&psi, &pot, 1.2).unwrap() <= 1e-10);
        // the same wave without the potential is not a solution
        assert!(position_space_residual(&psi, &FourPotential::zero(), 1.2).unwrap() > 0.1);
    }

    #[test]
    fn synthesis_is_linear() {
        let g = grid(16, 6, 2.0 * PI, 0.01);
        let pot = FourPotential::zero();
        let m1 = on_shell_mode(1, [0.0, 0.0], 0.5, &g, &pot);
        let m2 = on_shell_mode(-2, [0.0, 0.0], 0.5, &g, &pot);
        let both = plane_wave_synthesize(&[m1, m2], g).unwrap();
        let one = plane_wave_synthesize(&[m1], g).unwrap();
        let two = plane_wave_synthesize(&[m2], g).unwrap();
        let sum: Vec<Spinor> = one
            .values
            .iter()
            .zip(&two.values)
            .map(|(a, b)| std::array::from_fn(|c| a[c] + b[c]))
            .collect();
        assert!(both.max_abs_diff(&SpinorField::new(g, [0.0, 0.0], sum).unwrap()) < 1e-14);
        assert_eq!(plane_wave_synthesize(&[], g).unwrap(), SpinorField::zeros(g, [0.0, 0.0]));
    }

    #[test]
    fn single_mode_is_the_plane_wave() {
        let g = grid(8, 3, 4.0, 0.1);
        let spinor = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.0), Complex64::new(0.5, 0.5)];
        let p_z = 2.0 * PI * 3.0 / 4.0;
        let mode = PlaneWaveMode { momentum: [0.0, 0.0, p_z], energy: 1.7, spinor };
        let psi = plane_wave_synthesize(&[mode], g).unwrap();
        for time in 0..3 {
            for site in 0..8 {
                let (z, t) = (site as f64 * 0.5, time as f64 * 0.1);
                let phase = Complex64::from_polar(1.0, p_z * z - 1.7 * t);
                for c in 0..4 {
                    assert!((psi.at(site, time)[c] - spinor[c] * phase).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn off_grid_and_mixed_transverse_modes_are_rejected() {
        let g = grid(8, 3, 4.0, 0.1);
        let zero = [Complex64::new(0.0, 0.0); 4];
        let off = PlaneWaveMode { momentum: [0.0, 0.0, 1.0], energy: 1.0, spinor: zero };
        assert!(matches!(plane_wave_synthesize(&[off], g), Err(Error::GridMismatch(_))));
        let a = PlaneWaveMode { momentum: [0.0, 0.0, 0.0], energy: 1.0, spinor: zero };
        let b = PlaneWaveMode { momentum: [1.0, 0.0, 0.0], energy: 1.0, spinor: zero };
        assert!(matches!(plane_wave_synthesize(&[a, b], g), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn random_field_is_not_a_solution() {
        let g = grid(16, 8, 2.0 * PI, 0.01);
        let values: Vec<Spinor> = (0..g.len())
            .map(|i| std::array::from_fn(|c| Complex64::new(((i * 7 + c * 13) % 11) as f64 / 11.0, ((i * 3 + c) % 5) as f64 / 5.0)))
            .collect();
        let psi = SpinorField::new(g, [0.0, 0.0], values).unwrap();
        assert!(position_space_residual(&psi, &FourPotential::zero(), 1.0).unwrap() > 0.1);
    }

    // ψ' = e^{ieχ}ψ with A_z = ∂zχ, A⁰ = −∂tχ is again a solution.
    #[test]
    fn pure_gauge_sampled_potential() {
        let g = grid(64, 16, 2.0 * PI, 1e-3);
        let e = 0.8;
        let free = FourPotential::zero();
        let mode = on_shell_mode(1, [0.2, 0.0], 1.0, &g, &free);
        let psi = plane_wave_synthesize(&[mode], g).unwrap();

        let chi = |z: f64, t: f64| 0.3 * z.sin() * (1.0 + 0.5 * t);
        let mut a0 = Vec::new();
        let mut a_vec = Vec::new();
        let mut values = Vec::new();
        for time in 0..g.num_times {
            for site in 0..g.num_sites {
                let (z, t) = (site as f64 * g.delta_z, time as f64 * g.delta_t);
                a0.push(-0.3 * z.sin() * 0.5);
                a_vec.push([0.0, 0.0, 0.3 * z.cos() * (1.0 + 0.5 * t)]);
                let phase = Complex64::from_polar(1.0, e * chi(z, t));
                values.push(psi.at(site, time).map(|v| v * phase));
            }
        }
        let gauged = SpinorField::new(g, psi.transverse, values).unwrap();
        let pot = FourPotential::sampled(e, SampledPotential { grid: g, a0, a_vec }).unwrap();
        assert!(position_space_residual(&gauged, &pot, 1.0).unwrap() <= 1e-9);
        assert!(position_space_residual(&gauged, &free, 1.0).unwrap() > 1e-2);
    }

    #[test]
    fn richardson_beats_central() {
        let g = grid(16, 12, 2.0 * PI, 0.01);
        let pot = FourPotential::zero();
        let mode = on_shell_mode(2, [0.0, 0.0], 1.0, &g, &pot);
        let psi = plane_wave_synthesize(&[mode], g).unwrap();
        let central = position_space_residual_with(&psi, &pot, 1.0, TimeStencil::Central).unwrap();
        let richardson = position_space_residual_with(&psi, &pot, 1.0, TimeStencil::Richardson).unwrap();
        // E = √5: central error ~ E³Δt²/6, Richardson ~ E⁵Δt⁴/30
        assert!(central > 1e-5 && central < 2e-4, "{central}");
        assert!(richardson < 1e-7, "{richardson}");
    }

    #[test]
    fn potential_grid_must_match() {
        let g = grid(8, 5, 4.0, 0.1);
        let other = grid(8, 5, 4.0, 0.2);
        let sampled = SampledPotential { grid: other, a0: vec![0.0; 40], a_vec: vec![[0.0; 3]; 40] };
        let pot = FourPotential::sampled(1.0, sampled).unwrap();
        let psi = SpinorField::zeros(g, [0.0, 0.0]);
        assert!(matches!(position_space_residual(&psi, &pot, 1.0), Err(Error::GridMismatch(_))));
    }
}
