//! Metric-space invariants of the cone metrics and the body lift, exercised
//! across every catalogued cone family with seeded sampling.

use hilbertgeom::cones::{positive_operator_norm, ConeSpec, OrderUnitSpace};
use hilbertgeom::convexset::{self, ConvexBody};
use hilbertgeom::linalg;
use hilbertgeom::sample;
use proptest::prelude::*;
use rand::Rng;

fn families(seed: u64) -> Vec<(String, OrderUnitSpace)> {
    let mut rng = sample::rng(seed);
    let mut out = Vec::new();
    for n in [2usize, 3, 6] {
        out.push((
            format!("orthant({n})"),
            OrderUnitSpace::standard(ConeSpec::Orthant { dim: n }).unwrap(),
        ));
    }
    for n in [2usize, 3, 5] {
        out.push((
            format!("lorentz({n})"),
            OrderUnitSpace::standard(ConeSpec::Lorentz { dim: n }).unwrap(),
        ));
    }
    for k in 0..2 {
        let dim = 3 + k;
        let cone = sample::random_facet_cone(dim, dim + 2, &mut rng).unwrap();
        out.push((
            format!("facets({dim})"),
            OrderUnitSpace::standard(cone).unwrap(),
        ));
    }
    out
}

#[test]
fn hilbert_metric_axioms_per_family() {
    for (name, space) in families(100) {
        let mut rng = sample::rng(0xaaa);
        for _ in 0..1000 {
            let x = sample::interior_point(&space, &mut rng);
            let y = sample::interior_point(&space, &mut rng);
            let z = sample::interior_point(&space, &mut rng);
            let dxy = space.hilbert_dist(x.rep(), y.rep()).unwrap();
            let dyx = space.hilbert_dist(y.rep(), x.rep()).unwrap();
            let dxz = space.hilbert_dist(x.rep(), z.rep()).unwrap();
            let dzy = space.hilbert_dist(z.rep(), y.rep()).unwrap();
            assert!(dxy >= 0.0, "{name}: nonnegativity");
            assert!((dxy - dyx).abs() <= 1e-9, "{name}: symmetry");
            assert!(dxy <= dxz + dzy + 1e-9, "{name}: triangle inequality");
            // Identity of indiscernibles at the projective level.
            assert!(space.hilbert_dist(x.rep(), x.rep()).unwrap() <= 1e-12);
            if dxy <= 1e-12 {
                let gap = linalg::norm2(&linalg::sub(x.rep(), y.rep()));
                assert!(gap <= 1e-6, "{name}: zero distance only for equal points");
            }
        }
    }
}

#[test]
fn scaling_invariance_and_thompson_bounds() {
    for (name, space) in families(200) {
        let mut rng = sample::rng(0xbbb);
        for _ in 0..300 {
            let x = sample::interior_vector(&space, &mut rng);
            let y = sample::interior_vector(&space, &mut rng);
            let lam: f64 = rng.random_range(-3.0..3.0f64).exp();
            let mu: f64 = rng.random_range(-3.0..3.0f64).exp();
            let d = space.hilbert_dist(&x, &y).unwrap();
            let d_scaled = space
                .hilbert_dist(&linalg::scale(&x, lam), &linalg::scale(&y, mu))
                .unwrap();
            assert!((d - d_scaled).abs() <= 1e-9 * (1.0 + d), "{name}: scaling");

            let dt = space.thompson_dist(&x, &y).unwrap();
            assert!(d <= 2.0 * dt + 1e-9, "{name}: d_H <= 2 d_T");
            let dt_ray = space
                .thompson_dist(&linalg::scale(&x, lam), &x)
                .unwrap();
            assert!(
                (dt_ray - lam.ln().abs()).abs() <= 1e-9,
                "{name}: Thompson along a ray"
            );
        }
    }
}

#[test]
fn cross_ratio_route_agrees_everywhere() {
    for (name, space) in families(300) {
        let mut rng = sample::rng(0xccc);
        for _ in 0..300 {
            let x = sample::interior_point(&space, &mut rng);
            let y = sample::interior_point(&space, &mut rng);
            let direct = space.hilbert_dist(x.rep(), y.rep()).unwrap();
            let via_chord = space.cross_ratio_dist(x.rep(), y.rep()).unwrap();
            assert!(
                (direct - via_chord).abs() <= 1e-9,
                "{name}: cross-ratio route off by {:.3e}",
                (direct - via_chord).abs()
            );
        }
    }
}

#[test]
fn gauge_duality() {
    for (name, space) in families(400) {
        let mut rng = sample::rng(0xddd);
        for _ in 0..300 {
            let x = sample::interior_point(&space, &mut rng);
            let y = sample::interior_point(&space, &mut rng);
            let prod = space.gauge(x.rep(), y.rep()).unwrap() * space.gauge(y.rep(), x.rep()).unwrap();
            assert!(prod >= 1.0 - 1e-12, "{name}: gauge product below one");
        }
        // Equality exactly at projectively equal points.
        let x = sample::interior_point(&space, &mut rng);
        let scaled = linalg::scale(x.rep(), 3.7);
        let prod = space.gauge(x.rep(), &scaled).unwrap() * space.gauge(&scaled, x.rep()).unwrap();
        assert!((prod - 1.0).abs() <= 1e-12, "{name}: gauge duality equality");
    }
}

#[test]
fn induced_isometries_are_exact() {
    let mut rng = sample::rng(0xeee);
    // Diagonal-times-permutation maps on orthants.
    for n in [2usize, 4, 7] {
        let space = OrderUnitSpace::standard(ConeSpec::Orthant { dim: n }).unwrap();
        for _ in 0..100 {
            let t = sample::random_orthant_map(n, &mut rng);
            let x = sample::interior_point(&space, &mut rng);
            let y = sample::interior_point(&space, &mut rng);
            let fx = hilbertgeom::induced_isometry_apply(&t, &space, &space, &x).unwrap();
            let fy = hilbertgeom::induced_isometry_apply(&t, &space, &space, &y).unwrap();
            let defect = (space.hilbert_dist(fx.rep(), fy.rep()).unwrap()
                - space.hilbert_dist(x.rep(), y.rep()).unwrap())
            .abs();
            assert!(defect <= 1e-9, "orthant({n}): defect {defect:.3e}");
        }
    }
    // Lorentz-group elements on Lorentz cones.
    for n in [3usize, 4, 6] {
        let space = OrderUnitSpace::standard(ConeSpec::Lorentz { dim: n }).unwrap();
        for _ in 0..100 {
            let t = sample::random_lorentz_map(n, &mut rng);
            let x = sample::interior_point(&space, &mut rng);
            let y = sample::interior_point(&space, &mut rng);
            let fx = hilbertgeom::induced_isometry_apply(&t, &space, &space, &x).unwrap();
            let fy = hilbertgeom::induced_isometry_apply(&t, &space, &space, &y).unwrap();
            let defect = (space.hilbert_dist(fx.rep(), fy.rep()).unwrap()
                - space.hilbert_dist(x.rep(), y.rep()).unwrap())
            .abs();
            assert!(defect <= 1e-9, "lorentz({n}): defect {defect:.3e}");
        }
    }
}

#[test]
fn operator_norm_dominates_sampled_suprema() {
    let mut rng = sample::rng(0xfff);
    for n in [2usize, 3, 5] {
        let space = OrderUnitSpace::standard(ConeSpec::Orthant { dim: n }).unwrap();
        for _ in 0..20 {
            let t = sample::random_orthant_map(n, &mut rng);
            let norm = positive_operator_norm(&space, &space, &t).unwrap();
            // Brute-force supremum over unit-ball samples; the order unit
            // itself attains the norm, so the supremum matches from below.
            let mut sup: f64 = 0.0;
            for _ in 0..200 {
                let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let un = space.order_unit_norm(&raw);
                if un < 1e-9 {
                    continue;
                }
                let x = linalg::scale(&raw, 1.0 / un);
                sup = sup.max(space.order_unit_norm(&linalg::apply_matrix(&t, &x)));
            }
            sup = sup.max(space.order_unit_norm(&linalg::apply_matrix(&t, space.order_unit())));
            assert!(sup <= norm + 1e-9, "norm is an upper bound");
            assert!(norm - sup <= 1e-6, "supremum reaches the norm from below");
        }
    }
}

#[test]
fn lift_invariants() {
    let bodies = vec![
        ConvexBody::Polytope {
            vertices: vec![vec![-1.0], vec![1.0]],
        },
        ConvexBody::Ball {
            radius: 1.0,
            dim: 2,
        },
        ConvexBody::Polytope {
            vertices: vec![
                vec![1.1, 0.0],
                vec![0.4, 0.9],
                vec![-0.8, 0.6],
                vec![-1.0, -0.5],
                vec![0.5, -1.0],
            ],
        },
        ConvexBody::Ball {
            radius: 2.5,
            dim: 3,
        },
    ];
    let mut rng = sample::rng(0x1111);
    for body in &bodies {
        let lifted = convexset::lift(body).unwrap();
        let space = lifted.space();

        // The lifted unit is an order unit and the state is one on it.
        assert!(space.is_order_unit(space.order_unit()));
        assert!((space.state_value(space.order_unit()) - 1.0).abs() <= 1e-12);

        let d = body.dim();
        let sample_pt = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            loop {
                let y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                if body.is_interior(&y) && body.interior_margin(&y).unwrap() > 0.05 {
                    return y;
                }
            }
        };

        for _ in 0..100 {
            let p = sample_pt(&mut rng);
            let q = sample_pt(&mut rng);
            let direct = convexset::body_dist(body, &p, &q).unwrap();
            let lifted_d = space
                .hilbert_dist(&lifted.embed(&p).unwrap(), &lifted.embed(&q).unwrap())
                .unwrap();
            assert!(
                (direct - lifted_d).abs() <= 1e-9,
                "body distance vs lifted distance"
            );
        }

        // Minkowski norm axioms on sampled vectors.
        for _ in 0..100 {
            let y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let z: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lam: f64 = rng.random_range(0.0..3.0);
            let ny = body.minkowski_norm(&y).unwrap();
            let nz = body.minkowski_norm(&z).unwrap();
            let nsum = body
                .minkowski_norm(&linalg::add(&y, &z))
                .unwrap();
            assert!(
                (body.minkowski_norm(&linalg::scale(&y, lam)).unwrap() - lam * ny).abs() <= 1e-9,
                "homogeneity"
            );
            assert!(nsum <= ny + nz + 1e-9, "triangle inequality");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The orthant gauge is the supremum of coordinate ratios.
    #[test]
    fn orthant_gauge_is_sup_ratio(
        x in prop::collection::vec(0.05f64..20.0, 2..8),
        scale in 0.05f64..20.0,
    ) {
        let n = x.len();
        let y: Vec<f64> = x.iter().rev().map(|v| v * scale).collect();
        let space = OrderUnitSpace::standard(ConeSpec::Orthant { dim: n }).unwrap();
        let sup = x
            .iter()
            .zip(&y)
            .map(|(a, b)| a / b)
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((space.gauge(&x, &y).unwrap() - sup).abs() <= 1e-12 * sup.abs());
    }

    /// Thompson and Hilbert agree on state-normalized pairs up to the
    /// two-sided bound d_T <= d_H <= 2 d_T.
    #[test]
    fn normalized_points_sandwich(
        raw_x in prop::collection::vec(0.1f64..10.0, 3),
        raw_y in prop::collection::vec(0.1f64..10.0, 3),
    ) {
        let space = OrderUnitSpace::standard(ConeSpec::Orthant { dim: 3 }).unwrap();
        let x = space.project(&raw_x).unwrap();
        let y = space.project(&raw_y).unwrap();
        let dh = space.hilbert_dist(x.rep(), y.rep()).unwrap();
        let dt = space.thompson_dist(x.rep(), y.rep()).unwrap();
        prop_assert!(dt <= dh + 1e-12);
        prop_assert!(dh <= 2.0 * dt + 1e-12);
    }
}
