use std::f64::consts::PI;

use checkerboard::gauge::{
    dirac_with_potential, minimal_couple, plane_wave_synthesize, position_space_residual,
    FourPotential, PlaneWaveMode, PotentialField,
};
use checkerboard::linalg::eig4;
use checkerboard::spectral::{dirac_spinor, EnergyBranch, MomentumPoint, SpacetimeGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid(n: usize, t: usize, length: f64, dt: f64) -> SpacetimeGrid {
    SpacetimeGrid::new(n, t, length / n as f64, dt).unwrap()
}

/// Positive-energy mode with canonical momentum `(p_x, p_y, 2πk/L)` that
/// solves the coupled equation for a constant potential.
fn coupled_mode(
    k: i64,
    transverse: [f64; 2],
    mass: f64,
    spin: usize,
    g: &SpacetimeGrid,
    pot: &FourPotential,
) -> PlaneWaveMode {
    let p_z = 2.0 * PI * k as f64 / (g.num_sites as f64 * g.delta_z);
    let canonical = [transverse[0], transverse[1], p_z];
    let kinetic = minimal_couple(&MomentumPoint::new(canonical, 0.0, mass), pot).unwrap();
    let (spinor, energy) = dirac_spinor(kinetic.p, mass, EnergyBranch::Positive, spin);
    let PotentialField::Constant { a0, .. } = pot.field else {
        unreachable!()
    };
    PlaneWaveMode {
        momentum: canonical,
        energy: energy + pot.charge * a0,
        spinor,
    }
}

#[test]
fn coupled_superposition_on_a_large_grid() {
    let g = grid(128, 128, 2.0 * PI, 5e-4);
    let pot = FourPotential::constant(0.9, 0.6, [0.1, -0.2, 0.4]).unwrap();
    let modes: Vec<PlaneWaveMode> = [-2, 0, 1, 3]
        .iter()
        .enumerate()
        .map(|(i, &k)| coupled_mode(k, [0.3, 0.1], 1.5, i % 2, &g, &pot))
        .collect();
    let psi = plane_wave_synthesize(&modes, g).unwrap();
    let residual = position_space_residual(&psi, &pot, 1.5).unwrap();
    assert!(residual <= 1e-10, "{residual}");
}

#[test]
fn negative_energy_modes_solve_the_free_equation() {
    let g = grid(32, 16, 2.0 * PI, 5e-4);
    let p = [0.2, 0.0, 2.0];
    let (spinor, energy) = dirac_spinor(p, 0.8, EnergyBranch::Negative, 1);
    let psi = plane_wave_synthesize(&[PlaneWaveMode { momentum: p, energy, spinor }], g).unwrap();
    assert!(position_space_residual(&psi, &FourPotential::zero(), 0.8).unwrap() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coupled_spectrum_is_shifted_shell(
        p in prop::array::uniform3(-5.0f64..5.0),
        a in prop::array::uniform3(-3.0f64..3.0),
        a0 in -3.0f64..3.0,
        e in -2.0f64..2.0,
        m in 0.0f64..5.0,
    ) {
        let pot = FourPotential::constant(e, a0, a).unwrap();
        let (h, _) = dirac_with_potential(&MomentumPoint::new(p, 0.0, m), &pot).unwrap();
        let shell = (0..3).map(|r| (p[r] - e * a[r]).powi(2)).sum::<f64>() + m * m;
        let root = shell.sqrt();
        let energies = eig4(&h).unwrap().map(|x| x + e * a0);
        let want = [root + e * a0, root + e * a0, -root + e * a0, -root + e * a0];
        for (got, want) in energies.iter().zip(want) {
            prop_assert!((got - want).abs() <= 1e-10);
        }
        let (_, det) = dirac_with_potential(&MomentumPoint::new(p, root + e * a0, m), &pot).unwrap();
        prop_assert!(det <= 1e-9 * (1.0 + shell * shell));
    }

    // (x − y) + y can differ from x by one rounding.
    #[test]
    fn opposite_charge_undoes_coupling(
        p in prop::array::uniform3(-10.0f64..10.0),
        energy in -10.0f64..10.0,
        a in prop::array::uniform3(-3.0f64..3.0),
        a0 in -3.0f64..3.0,
        e in -2.0f64..2.0,
    ) {
        let point = MomentumPoint::new(p, energy, 1.0);
        let plus = FourPotential::constant(e, a0, a).unwrap();
        let minus = FourPotential::constant(-e, a0, a).unwrap();
        let back = minimal_couple(&minimal_couple(&point, &plus).unwrap(), &minus).unwrap();
        for r in 0..3 {
            prop_assert!((back.p[r] - p[r]).abs() <= 1e-14);
        }
        prop_assert!((back.energy - energy).abs() <= 1e-14);
        prop_assert_eq!(back.mass, 1.0);
    }

    #[test]
    fn constant_shift_matches_free_residual(
        k in -3i64..=3,
        a in prop::array::uniform3(-1.0f64..1.0),
        a0 in -1.0f64..1.0,
        e in -1.0f64..1.0,
        m in 0.5f64..2.0,
    ) {
        let g = grid(32, 12, 2.0 * PI, 5e-4);
        let free = FourPotential::zero();
        let pot = FourPotential::constant(e, a0, a).unwrap();
        let unshifted = coupled_mode(k, [0.2, -0.1], m, 0, &g, &free);
        let shifted = coupled_mode(k, [0.2, -0.1], m, 0, &g, &pot);
        let free_residual =
            position_space_residual(&plane_wave_synthesize(&[unshifted], g).unwrap(), &free, m).unwrap();
        let coupled_residual =
            position_space_residual(&plane_wave_synthesize(&[shifted], g).unwrap(), &pot, m).unwrap();
        prop_assert!((free_residual - coupled_residual).abs() <= 1e-10);
        prop_assert!(coupled_residual <= 1e-10);
    }
}

#[test]
fn spinor_helper_is_an_eigenvector() {
    let (spinor, energy) = dirac_spinor([1.0, 2.0, 2.0], 4.0, EnergyBranch::Positive, 0);
    let h = checkerboard::spectral::dirac_form([1.0, 2.0, 2.0], 4.0);
    let image = h.apply(spinor);
    for c in 0..4 {
        assert!((image[c] - spinor[c] * energy).norm() < 1e-13);
    }
    let norm: f64 = spinor.iter().map(Complex64::norm_sqr).sum();
    assert!((norm - 1.0).abs() < 1e-14);
}
