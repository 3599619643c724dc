//! Standard gates as dense matrices.

use nalgebra::DMatrix;
use std::f64::consts::FRAC_1_SQRT_2;

use super::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

pub fn x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn h() -> DMatrix<C64> {
    let s = FRAC_1_SQRT_2;
    DMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)])
}

pub fn s() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)])
}

pub fn s_dagger() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., -1.)])
}

pub fn t() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        ],
    )
}

/// CNOT with the control on the first target.
pub fn cnot() -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = c(1., 0.);
    m[(1, 1)] = c(1., 0.);
    m[(2, 3)] = c(1., 0.);
    m[(3, 2)] = c(1., 0.);
    m
}

pub fn cz() -> DMatrix<C64> {
    let mut m = identity(4);
    m[(3, 3)] = c(-1., 0.);
    m
}

/// Single-qubit unitary
///
/// ```text
/// [ cos(θ/2)          -e^{iλ} sin(θ/2)     ]
/// [ e^{iφ} sin(θ/2)    e^{i(φ+λ)} cos(θ/2) ]
/// ```
pub fn u3(theta: f64, phi: f64, lambda: f64) -> DMatrix<C64> {
    let (sn, cs) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(
        2,
        2,
        &[
            c(cs, 0.),
            -C64::from_polar(sn, lambda),
            C64::from_polar(sn, phi),
            C64::from_polar(cs, phi + lambda),
        ],
    )
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Frobenius distance of `U U†` from the identity.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u * u.adjoint();
    (prod - identity(u.nrows())).norm()
}
