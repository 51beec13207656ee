//! Structural probes of the reconstruction pipeline: cross-ratio invariance
//! of the two-dimensional solve, bi-positivity of reconstructed matrices, and
//! boundary behaviour against radial limits.

use hilbertgeom::collineation::{
    base_change, extend_to_boundary, reconstruct_linear, InducedMap, IsometryOracle,
};
use hilbertgeom::cones::{ConeSpec, OrderUnitSpace};
use hilbertgeom::linalg;
use hilbertgeom::sample;
use rand::Rng;

fn lorentz(n: usize) -> OrderUnitSpace {
    OrderUnitSpace::standard(ConeSpec::Lorentz { dim: n }).unwrap()
}

/// Cross ratio of four collinear points, in the order (outer, inner, inner,
/// outer).
fn cross_ratio(p1: &[f64], p2: &[f64], p3: &[f64], p4: &[f64]) -> f64 {
    let e = |a: &[f64], b: &[f64]| linalg::norm2(&linalg::sub(a, b));
    (e(p1, p3) / e(p1, p2)) * (e(p4, p2) / e(p4, p3))
}

#[test]
fn base_change_preserves_cross_ratios() {
    let space = lorentz(3);
    let mut rng = sample::rng(0x2222);
    for _ in 0..50 {
        let l = sample::random_lorentz_map(3, &mut rng);
        let oracle = InducedMap::new(&space, &space, l).unwrap();
        let x = sample::interior_point(&space, &mut rng);
        let y = sample::interior_point(&space, &mut rng);
        if space.hilbert_dist(x.rep(), y.rep()).unwrap() < 1e-3 {
            continue;
        }
        let chord = space.chord_endpoints(&x, &y).unwrap();
        let plane = match base_change(&space, &space, &oracle, &x, &y) {
            Ok(p) => p,
            Err(_) => continue,
        };

        for lam in [0.2, 0.45, 0.7] {
            // A point of the chord strictly between x' and x.
            let z_raw: Vec<f64> = chord
                .x_prime
                .iter()
                .zip(x.rep())
                .map(|(a, b)| lam * a + (1.0 - lam) * b)
                .collect();
            let z = space.project(&z_raw).unwrap();

            let reference = cross_ratio(&chord.x_prime, z.rep(), x.rep(), &chord.y_prime);

            let sx_prime = space
                .normalize_section(&plane.apply(&chord.x_prime).unwrap())
                .unwrap();
            let sy_prime = space
                .normalize_section(&plane.apply(&chord.y_prime).unwrap())
                .unwrap();
            let sz = space.normalize_section(&plane.apply(z.rep()).unwrap()).unwrap();
            let sx = space.normalize_section(&plane.apply(x.rep()).unwrap()).unwrap();
            let mapped = cross_ratio(&sx_prime, &sz, &sx, &sy_prime);

            assert!(
                (reference - mapped).abs() <= 1e-9 * (1.0 + reference),
                "cross ratio drifted: {reference} vs {mapped}"
            );
        }
    }
}

#[test]
fn reconstruction_is_bipositive() {
    let space = lorentz(4);
    let mut rng = sample::rng(0x3333);
    let l = sample::random_lorentz_map(4, &mut rng);
    let oracle = InducedMap::new(&space, &space, l).unwrap();
    let t = reconstruct_linear(&space, &space, &oracle).unwrap();

    for _ in 0..1000 {
        let x = sample::interior_vector(&space, &mut rng);
        let image = linalg::apply_matrix(&t, &x);
        assert!(
            space.cone().contains(&image, 1e-9),
            "interior point left the cone"
        );
    }
    for _ in 0..1000 {
        // Spacelike vectors: outside both the cone and its negation.
        let dir = sample::unit_direction(3, &mut rng);
        let s: f64 = rng.random_range(-0.9..0.9);
        let mut x = vec![s];
        x.extend(dir);
        let image = linalg::apply_matrix(&t, &x);
        assert!(
            !space.cone().contains(&image, 1e-9),
            "exterior point entered the cone"
        );
    }
}

#[test]
fn boundary_extension_tracks_radial_limits() {
    let space = lorentz(3);
    let mut rng = sample::rng(0x4444);
    let l = sample::random_lorentz_map(3, &mut rng);
    let oracle = InducedMap::new(&space, &space, l.clone()).unwrap();
    let t = reconstruct_linear(&space, &space, &oracle).unwrap();
    let p = space.project(space.order_unit()).unwrap();

    for _ in 0..100 {
        let b = sample::boundary_point(&space, &mut rng);
        let direct = extend_to_boundary(&t, &space, &space, &b).unwrap();
        let mut gaps = Vec::new();
        for step in [0.9, 0.99, 0.999] {
            let along: Vec<f64> = p
                .rep()
                .iter()
                .zip(&b)
                .map(|(a, c)| (1.0 - step) * a + step * c)
                .collect();
            let image = oracle
                .eval(&space.project(&along).unwrap())
                .unwrap();
            gaps.push(linalg::norm2(&linalg::sub(image.rep(), &direct)));
        }
        assert!(
            gaps[2] <= gaps[0] + 1e-12,
            "radial images should approach the boundary image"
        );
        assert!(gaps[2] <= 5e-2, "final radial gap too large: {}", gaps[2]);
    }
}


