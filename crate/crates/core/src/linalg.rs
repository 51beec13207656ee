//! Small dense vector/matrix helpers shared across the crate.

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// a + s * b
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, got })
    }
}

/// Columns-of-vectors to a dense matrix.
pub fn matrix_from_columns(cols: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = cols.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let cols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn apply_matrix(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(m.ncols(), x.len());
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

/// Coordinates (alpha, beta) of `z` in the two-vector basis {a, b} via the
/// 2x2 Gram system, together with the relative residual of the projection.
pub fn plane_coordinates(a: &[f64], b: &[f64], z: &[f64]) -> (f64, f64, f64) {
    let gaa = dot(a, a);
    let gab = dot(a, b);
    let gbb = dot(b, b);
    let det = gaa * gbb - gab * gab;
    if det.abs() < f64::EPSILON * gaa * gbb {
        return (f64::NAN, f64::NAN, f64::INFINITY);
    }
    let za = dot(z, a);
    let zb = dot(z, b);
    let alpha = (za * gbb - zb * gab) / det;
    let beta = (zb * gaa - za * gab) / det;
    let recon: Vec<f64> = a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect();
    let resid = norm2(&sub(z, &recon));
    let scale = norm2(z).max(1e-300);
    (alpha, beta, resid / scale)
}

/// Relative residual of `z` after orthogonal projection onto span(basis).
/// Uses modified Gram-Schmidt on a scratch copy of the basis.
pub fn span_residual(basis: &[Vec<f64>], z: &[f64]) -> f64 {
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for v in basis {
        let mut w = v.clone();
        for q in &ortho {
            let c = dot(&w, q);
            w = axpy(&w, -c, q);
        }
        let n = norm2(&w);
        if n > 1e-14 * norm2(v).max(1.0) {
            ortho.push(scale(&w, 1.0 / n));
        }
    }
    let mut r = z.to_vec();
    for q in &ortho {
        let c = dot(&r, q);
        r = axpy(&r, -c, q);
    }
    norm2(&r) / norm2(z).max(1e-300)
}

/// Solves T * B = G for T, where B has the basis vectors as columns and G the
/// corresponding image vectors.
pub fn solve_from_basis(basis: &[Vec<f64>], images: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let b = matrix_from_columns(basis);
    let g = matrix_from_columns(images);
    // T = G * B^{-1}, computed as (B^T)^{-1} applied to rows of G.
    let lu = b.transpose().lu();
    let tt = lu
        .solve(&g.transpose())
        .ok_or_else(|| GeomError::InvalidParameter("basis matrix is singular".into()))?;
    Ok(tt.transpose())
}
