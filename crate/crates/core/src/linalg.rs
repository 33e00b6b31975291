//! Fixed-size complex blocks and the Pauli / Dirac matrices.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBlock(pub Matrix2<Complex64>);

/// A dense 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourBlock(pub Matrix4<Complex64>);

impl TwoBlock {
    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Self {
        Self(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    }

    pub fn from_real_rows(rows: [[f64; 2]; 2]) -> Self {
        Self(Matrix2::from_fn(|r, c| Complex64::new(rows[r][c], 0.0)))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn zeros() -> Self {
        Self(Matrix2::zeros())
    }

    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        Self::from_rows([[a, ZERO], [ZERO, b]])
    }

    pub fn sigma_x() -> Self {
        Self::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn sigma_y() -> Self {
        Self::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn sigma_z() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(self.0 * s)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.0;
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
            m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
        ]
    }
}

impl FourBlock {
    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|r, c| rows[r][c]))
    }

    pub fn from_real_rows(rows: [[f64; 4]; 4]) -> Self {
        Self(Matrix4::from_fn(|r, c| Complex64::new(rows[r][c], 0.0)))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn zeros() -> Self {
        Self(Matrix4::zeros())
    }

    /// `[[a, b], [c, d]]` assembled from 2×2 blocks.
    pub fn from_blocks(a: TwoBlock, b: TwoBlock, c: TwoBlock, d: TwoBlock) -> Self {
        Self(Matrix4::from_fn(|r, col| {
            let block = match (r / 2, col / 2) {
                (0, 0) => &a,
                (0, 1) => &b,
                (1, 0) => &c,
                _ => &d,
            };
            block.0[(r % 2, col % 2)]
        }))
    }

    /// 2×2 block at block position `(row, col)`.
    pub fn block(&self, row: usize, col: usize) -> TwoBlock {
        TwoBlock(Matrix2::from_fn(|r, c| self.0[(2 * row + r, 2 * col + c)]))
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|r| (0..4).map(|c| self.0[(r, c)] * v[c]).sum())
    }
}

macro_rules! block_ops {
    ($t:ident) => {
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                $t(self.0 * rhs.0)
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $t(self.0 + rhs.0)
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $t(self.0 - rhs.0)
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(-self.0)
            }
        }
    };
}

block_ops!(TwoBlock);
block_ops!(FourBlock);

/// Tolerance on `‖H − H†‖_max` accepted by [`eig4`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalues of a Hermitian 4×4 block, sorted in descending order.
pub fn eig4(h: &FourBlock) -> Result<[f64; 4]> {
    let deviation = h.hermitian_deviation();
    if deviation.is_nan() || deviation > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(deviation));
    }
    // Symmetrize so the solver sees an exactly Hermitian matrix.
    let sym = (h.0 + h.0.adjoint()) * Complex64::new(0.5, 0.0);
    let values = sym.symmetric_eigenvalues();
    let mut out = [values[0], values[1], values[2], values[3]];
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Dirac-representation `β = diag(1, 1, −1, −1)`.
pub fn dirac_beta() -> FourBlock {
    FourBlock::from_blocks(
        TwoBlock::identity(),
        TwoBlock::zeros(),
        TwoBlock::zeros(),
        -TwoBlock::identity(),
    )
}

/// Dirac-representation `αₖ = [[0, σₖ], [σₖ, 0]]`, `k ∈ {0, 1, 2}` for x, y, z.
pub fn dirac_alpha(axis: usize) -> FourBlock {
    let sigma = match axis {
        0 => TwoBlock::sigma_x(),
        1 => TwoBlock::sigma_y(),
        2 => TwoBlock::sigma_z(),
        _ => panic!("axis must be 0, 1 or 2, got {axis}"),
    };
    FourBlock::from_blocks(TwoBlock::zeros(), sigma, sigma, TwoBlock::zeros())
}
