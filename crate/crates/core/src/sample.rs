//! Deterministic seeded sampling of points, cones and maps, used by the
//! verification operations and by the test suites.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cones::{ConeSpec, OrderUnitSpace, ProjectivePoint};
use crate::error::Result;
use crate::linalg::{self, norm2};
use crate::simplexgeom::{DeltaPoint, FiniteK, SimplexIsometry};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random strictly interior point of the cross section.
pub fn interior_point<R: Rng>(space: &OrderUnitSpace, rng: &mut R) -> ProjectivePoint {
    let raw = interior_vector(space, rng);
    space.project(&raw).expect("sampled vector is interior")
}

/// A random strictly interior cone vector (unnormalized).
pub fn interior_vector<R: Rng>(space: &OrderUnitSpace, rng: &mut R) -> Vec<f64> {
    let n = space.dim();
    match space.cone() {
        ConeSpec::Orthant { .. } => (0..n).map(|_| rng.random_range(-2.0..2.0f64).exp()).collect(),
        ConeSpec::Lorentz { .. } => {
            let dir = unit_direction(n - 1, rng);
            let rho: f64 = rng.random_range(0.0..0.95);
            let scale = rng.random_range(-1.0..1.0f64).exp();
            let mut x = Vec::with_capacity(n);
            x.push(scale);
            x.extend(dir.iter().map(|d| d * rho * scale));
            x
        }
        ConeSpec::PolyhedralFacets { .. } => {
            // Strict positive combination of the extreme rays stays interior
            // for a pointed full-dimensional cone.
            let rays = space.cone().extreme_rays().expect("validated facet cone");
            let mut x = vec![0.0; n];
            for r in &rays {
                let w: f64 = rng.random_range(0.1..1.0);
                for (xi, ri) in x.iter_mut().zip(r) {
                    *xi += w * ri;
                }
            }
            x
        }
    }
}

/// A boundary point of the cross section: the chord endpoint construction
/// applied to two random interior points.
pub fn boundary_point<R: Rng>(space: &OrderUnitSpace, rng: &mut R) -> Vec<f64> {
    loop {
        let x = interior_point(space, rng);
        let y = interior_point(space, rng);
        if let Ok(chord) = space.chord_endpoints(&x, &y) {
            return chord.x_prime;
        }
    }
}

pub fn unit_direction<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-1.0..1.0f64))
            .collect();
        let n = norm2(&v);
        if n > 1e-3 {
            return linalg::scale(&v, 1.0 / n);
        }
    }
}

/// A random product of spatial rotations and hyperbolic boosts, optionally
/// scaled: a bi-positive automorphism of the Lorentz cone.
pub fn random_lorentz_map<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut m = spatial_rotation(n, rng);
    m = boost(n, rng) * m;
    m = spatial_rotation(n, rng) * m;
    let scale = rng.random_range(-0.7..0.7f64).exp();
    m * scale
}

fn spatial_rotation<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    // Random orthogonal block on the spatial coordinates via QR.
    let g = DMatrix::from_fn(n - 1, n - 1, |_, _| rng.random_range(-1.0..1.0f64));
    let q = g.qr().q();
    let mut m = DMatrix::identity(n, n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            m[(i + 1, j + 1)] = q[(i, j)];
        }
    }
    m
}

fn boost<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let axis = rng.random_range(1..n);
    let a: f64 = rng.random_range(-1.2..1.2);
    let mut m = DMatrix::identity(n, n);
    m[(0, 0)] = a.cosh();
    m[(0, axis)] = a.sinh();
    m[(axis, 0)] = a.sinh();
    m[(axis, axis)] = a.cosh();
    m
}

/// Positive diagonal times permutation: a bi-positive automorphism of the
/// orthant.
pub fn random_orthant_map<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let perm = random_permutation(n, rng);
    let mut m = DMatrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = rng.random_range(-1.5..1.5f64).exp();
    }
    m
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates.
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// A random pointed facet cone with certified nonempty interior, built from
/// covectors tilted toward a common interior direction.
pub fn random_facet_cone<R: Rng>(dim: usize, n_facets: usize, rng: &mut R) -> Result<ConeSpec> {
    loop {
        let axis = unit_direction(dim, rng);
        let facets: Vec<Vec<f64>> = (0..n_facets)
            .map(|_| loop {
                let mut a = unit_direction(dim, rng);
                let c = linalg::dot(&a, &axis);
                if c.abs() >= 0.35 {
                    if c < 0.0 {
                        a = linalg::scale(&a, -1.0);
                    }
                    return a;
                }
            })
            .collect();
        let cone = ConeSpec::PolyhedralFacets { facets };
        if cone.validate().is_ok() {
            return Ok(cone);
        }
    }
}

/// A random point of the weighted simplex.
pub fn random_delta_point<R: Rng>(k: &FiniteK, rng: &mut R) -> DeltaPoint {
    let f: Vec<f64> = (0..k.len())
        .map(|_| rng.random_range(-1.5..1.5f64).exp())
        .collect();
    k.delta_point(&f).expect("positive vector")
}

/// A random gauge/relabelling/inversion isometry of the simplex geometry.
pub fn random_simplex_isometry<R: Rng>(k: &FiniteK, rng: &mut R) -> SimplexIsometry {
    let eps = if rng.random_range(0..2) == 0 { 1 } else { -1 };
    let theta = random_permutation(k.len(), rng);
    let g: Vec<f64> = (0..k.len())
        .map(|_| rng.random_range(-1.0..1.0f64).exp())
        .collect();
    SimplexIsometry::new(k, eps, theta, g).expect("valid random isometry")
}
