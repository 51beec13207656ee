//! Browser bindings: three interactive scenes over the core library.
//!
//! Every export takes a JSON string and returns a JSON string, so the page
//! needs no glue types; errors come back as `{"error": {...}}`. The same
//! functions compile and run natively, which is how they are tested.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use hilbertgeom::collineation::{
    reconstruct_linear, verify_projective_linearity, InducedMap, IsometryOracle,
};
use hilbertgeom::cones::{ConeSpec, OrderUnitSpace};
use hilbertgeom::convexset::{self, ConvexBody};
use hilbertgeom::json::IsometryJson;
use hilbertgeom::linalg;
use hilbertgeom::simplexgeom::{
    find_nonaffine_midpoint, isometry_apply, log_map, variation_norm, FiniteK, QuotientFunction,
};
use hilbertgeom::GeomError;

fn fail(msg: &str) -> String {
    serde_json::json!({"error": {"detail": msg}}).to_string()
}

fn run<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| fail(&e.to_string())),
        Err(msg) => fail(&msg),
    }
}

fn domain(e: GeomError) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Scene 1: Hilbert geometry of a planar convex body.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct BodySceneIn {
    body: ConvexBody,
    p: Vec<f64>,
    q: Vec<f64>,
    #[serde(default = "default_radii")]
    ball_radii: Vec<f64>,
    #[serde(default = "default_samples")]
    samples: usize,
}

fn default_radii() -> Vec<f64> {
    vec![0.5, 1.0, 1.5]
}

fn default_samples() -> usize {
    96
}

#[derive(Serialize)]
struct BodySceneOut {
    d_h: f64,
    d_t: f64,
    x_prime: Vec<f64>,
    y_prime: Vec<f64>,
    outline: Vec<Vec<f64>>,
    balls: Vec<BallOut>,
}

#[derive(Serialize)]
struct BallOut {
    radius: f64,
    points: Vec<Vec<f64>>,
}

/// Chord endpoints, both metrics, and metric circles around `p` for a planar
/// convex body.
#[wasm_bindgen]
pub fn body_scene(input: &str) -> String {
    run(body_scene_impl(input))
}

fn body_scene_impl(input: &str) -> Result<BodySceneOut, String> {
    let scene: BodySceneIn = serde_json::from_str(input).map_err(|e| e.to_string())?;
    if scene.body.dim() != 2 {
        return Err("the body scene is two-dimensional".into());
    }
    scene.body.validate().map_err(domain)?;
    let body = &scene.body;

    let (x_prime, y_prime) = convexset::body_chord(body, &scene.p, &scene.q).map_err(domain)?;
    let d_h = convexset::body_dist(body, &scene.p, &scene.q).map_err(domain)?;

    // Thompson distance of the canonical lifted representatives.
    let lifted = convexset::lift(body).map_err(domain)?;
    let d_t = lifted
        .space()
        .thompson_dist(
            &lifted.embed(&scene.p).map_err(domain)?,
            &lifted.embed(&scene.q).map_err(domain)?,
        )
        .map_err(domain)?;

    let outline = outline_of(body, scene.samples);
    let balls = scene
        .ball_radii
        .iter()
        .map(|&r| BallOut {
            radius: r,
            points: metric_circle(body, &scene.p, r, scene.samples),
        })
        .collect();

    Ok(BodySceneOut {
        d_h,
        d_t,
        x_prime,
        y_prime,
        outline,
        balls,
    })
}

fn outline_of(body: &ConvexBody, samples: usize) -> Vec<Vec<f64>> {
    match body {
        ConvexBody::Ball { radius, .. } => (0..=samples)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                vec![radius * a.cos(), radius * a.sin()]
            })
            .collect(),
        ConvexBody::Polytope { vertices } => {
            // Order hull vertices by angle around the (interior) origin.
            let mut vs = vertices.clone();
            vs.sort_by(|a, b| {
                a[1].atan2(a[0])
                    .partial_cmp(&b[1].atan2(b[0]))
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let mut out = vs.clone();
            if let Some(first) = vs.first() {
                out.push(first.clone());
            }
            out
        }
    }
}

/// Points at metric distance `rho` from `center`, one per direction, found by
/// bisection along each ray (the distance is strictly increasing toward the
/// boundary).
fn metric_circle(body: &ConvexBody, center: &[f64], rho: f64, samples: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let a = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let dir = vec![a.cos(), a.sin()];
        let far = linalg::axpy(center, 1.0, &dir);
        let t_max = match convexset::body_chord(body, center, &far) {
            Ok((_, beyond)) => {
                // Parameter of the boundary along this ray.
                let to_boundary = linalg::sub(&beyond, center);
                linalg::norm2(&to_boundary)
            }
            Err(_) => continue,
        };
        let mut lo = 0.0f64;
        let mut hi = t_max * (1.0 - 1e-9);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let pt = linalg::axpy(center, mid, &dir);
            let d = convexset::body_dist(body, center, &pt).unwrap_or(f64::INFINITY);
            if d < rho {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(linalg::axpy(center, 0.5 * (lo + hi), &dir));
    }
    out
}

// ---------------------------------------------------------------------------
// Scene 2: the three-point simplex geometry and its isometries.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SimplexSceneIn {
    #[serde(default)]
    mu: Option<Vec<f64>>,
    p: Vec<f64>,
    q: Vec<f64>,
    iso: IsometryJson,
}

#[derive(Serialize)]
struct LabelledPoint {
    simplex: Vec<f64>,
    log2d: Vec<f64>,
}

#[derive(Serialize)]
struct SimplexSceneOut {
    p: LabelledPoint,
    q: LabelledPoint,
    hp: LabelledPoint,
    hq: LabelledPoint,
    mid_affine: LabelledPoint,
    midpoint: Option<LabelledPoint>,
    d_pq: f64,
    d_image: f64,
    // Variation-norm spheres of radius d/2 around p and q in Log
    // coordinates; their intersection is the midpoint set.
    ball_p: Vec<Vec<f64>>,
    ball_q: Vec<Vec<f64>>,
}

/// Distances, isometry images, and the midpoint set picture for the
/// three-point simplex geometry.
#[wasm_bindgen]
pub fn simplex_scene(input: &str) -> String {
    run(simplex_scene_impl(input))
}

/// Orthonormal 2d coordinates on the sum-zero subspace of three coordinates.
fn log2d(q: &QuotientFunction) -> Vec<f64> {
    let r = q.rep();
    let b1 = [
        1.0 / 2.0f64.sqrt(),
        -(1.0 / 2.0f64.sqrt()),
        0.0,
    ];
    let b2 = [
        1.0 / 6.0f64.sqrt(),
        1.0 / 6.0f64.sqrt(),
        -2.0 / 6.0f64.sqrt(),
    ];
    vec![
        r[0] * b1[0] + r[1] * b1[1] + r[2] * b1[2],
        r[0] * b2[0] + r[1] * b2[1] + r[2] * b2[2],
    ]
}

fn labelled(k: &FiniteK, p: &hilbertgeom::DeltaPoint) -> LabelledPoint {
    let _ = k;
    LabelledPoint {
        simplex: p.values().to_vec(),
        log2d: log2d(&log_map(p)),
    }
}

/// Vertices of the variation-norm sphere of radius `r` centred at `c`, in
/// Log coordinates: the hexagon through the quotient images of the scaled
/// indicator functions.
fn var_sphere(c: &QuotientFunction, r: f64) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    let sets: [&[usize]; 6] = [&[0], &[0, 1], &[1], &[1, 2], &[2], &[0, 2]];
    for s in sets {
        let mut ind = vec![0.0; 3];
        for &i in s {
            ind[i] = 1.0;
        }
        let v = QuotientFunction::new(ind).scale(r).add(c);
        verts.push(log2d(&v));
    }
    if let Some(first) = verts.first().cloned() {
        verts.push(first);
    }
    verts
}

fn simplex_scene_impl(input: &str) -> Result<SimplexSceneOut, String> {
    let scene: SimplexSceneIn = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let k = match scene.mu {
        Some(mu) => FiniteK::with_weights(mu).map_err(domain)?,
        None => FiniteK::uniform(3).map_err(domain)?,
    };
    if k.len() != 3 {
        return Err("the simplex scene uses exactly three base points".into());
    }
    let p = k.delta_point(&scene.p).map_err(domain)?;
    let q = k.delta_point(&scene.q).map_err(domain)?;
    let iso = scene.iso.to_isometry(&k).map_err(domain)?;

    let hp = isometry_apply(&k, &iso, &p).map_err(domain)?;
    let hq = isometry_apply(&k, &iso, &q).map_err(domain)?;
    let d_pq = k.dist(&p, &q);
    let d_image = k.dist(&hp, &hq);

    let a = log_map(&p);
    let b = log_map(&q);
    let mid_q = a.add(&b).scale(0.5);
    let mid_affine = k.exp_map(&mid_q).map_err(domain)?;
    let witness = match find_nonaffine_midpoint(&k, &p, &q) {
        Ok(w) => w,
        Err(GeomError::CoincidentPoints { .. }) => None,
        Err(e) => return Err(domain(e)),
    };

    let half = 0.5 * variation_norm(&a.sub(&b));
    Ok(SimplexSceneOut {
        p: labelled(&k, &p),
        q: labelled(&k, &q),
        hp: labelled(&k, &hp),
        hq: labelled(&k, &hq),
        mid_affine: labelled(&k, &mid_affine),
        midpoint: witness.map(|w| labelled(&k, &w)),
        d_pq,
        d_image,
        ball_p: var_sphere(&a, half),
        ball_q: var_sphere(&b, half),
    })
}

// ---------------------------------------------------------------------------
// Scene 3: black-box reconstruction on the Klein disk.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct ReconstructSceneIn {
    #[serde(default)]
    angle_deg: f64,
    #[serde(default)]
    rapidity: f64,
}

#[derive(Serialize)]
struct ArrowOut {
    z: Vec<f64>,
    fz: Vec<f64>,
    tz: Vec<f64>,
}

#[derive(Serialize)]
struct ReconstructSceneOut {
    matrix: Vec<Vec<f64>>,
    max_residual: f64,
    is_isometry_residual: f64,
    arrows: Vec<ArrowOut>,
}

/// Treats a rotation-plus-boost of the Klein disk as a black box,
/// reconstructs its matrix from oracle calls, and reports the residuals plus
/// a field of sample arrows (point, oracle image, matrix image).
#[wasm_bindgen]
pub fn reconstruct_scene(input: &str) -> String {
    run(reconstruct_scene_impl(input))
}

fn reconstruct_scene_impl(input: &str) -> Result<ReconstructSceneOut, String> {
    let scene: ReconstructSceneIn = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let space = OrderUnitSpace::standard(ConeSpec::Lorentz { dim: 3 }).map_err(domain)?;

    let a = scene.angle_deg.to_radians();
    let rot = DMatrix::from_row_slice(
        3,
        3,
        &[1.0, 0.0, 0.0, 0.0, a.cos(), -a.sin(), 0.0, a.sin(), a.cos()],
    );
    let r = scene.rapidity;
    let boost = DMatrix::from_row_slice(
        3,
        3,
        &[r.cosh(), r.sinh(), 0.0, r.sinh(), r.cosh(), 0.0, 0.0, 0.0, 1.0],
    );
    let hidden = rot * boost;

    let oracle = InducedMap::new(&space, &space, hidden).map_err(domain)?;
    let t = reconstruct_linear(&space, &space, &oracle).map_err(domain)?;
    let report = verify_projective_linearity(&space, &space, &oracle, &t, 64, 0).map_err(domain)?;

    // Arrow field over a polar grid of the disk.
    let mut arrows = Vec::new();
    for ring in 1..4 {
        let rho = 0.22 * ring as f64;
        for k in 0..8 {
            let phi = std::f64::consts::PI * 2.0 * k as f64 / 8.0;
            let z = vec![1.0, rho * phi.cos(), rho * phi.sin()];
            let zp = space.project(&z).map_err(domain)?;
            let fz = oracle.eval(&zp).map_err(domain)?;
            let tz = hilbertgeom::induced_isometry_apply(&t, &space, &space, &zp).map_err(domain)?;
            arrows.push(ArrowOut {
                z: vec![z[1], z[2]],
                fz: vec![fz.rep()[1], fz.rep()[2]],
                tz: vec![tz.rep()[1], tz.rep()[2]],
            });
        }
    }

    Ok(ReconstructSceneOut {
        matrix: linalg::matrix_to_rows(&t),
        max_residual: report.max_residual,
        is_isometry_residual: report.is_isometry_residual,
        arrows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_scene_on_disk() {
        let input = r#"{"body": {"ball": {"radius": 1.0, "dim": 2}},
                        "p": [0.0, 0.0], "q": [0.5, 0.0],
                        "ball_radii": [1.0], "samples": 16}"#;
        let out: serde_json::Value = serde_json::from_str(&body_scene(input)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        let d_h = out["d_h"].as_f64().unwrap();
        assert!((d_h - 3.0f64.ln()).abs() < 1e-9);
        // Metric circle points all sit at distance 1 from p.
        let pts = out["balls"][0]["points"].as_array().unwrap();
        assert!(!pts.is_empty());
        for pt in pts {
            let x = pt[0].as_f64().unwrap();
            let y = pt[1].as_f64().unwrap();
            let body = ConvexBody::Ball { radius: 1.0, dim: 2 };
            let d = convexset::body_dist(&body, &[0.0, 0.0], &[x, y]).unwrap();
            assert!((d - 1.0).abs() < 1e-6, "circle point at distance {d}");
        }
    }

    #[test]
    fn body_scene_rejects_outside_points() {
        let input = r#"{"body": {"ball": {"radius": 1.0, "dim": 2}},
                        "p": [0.0, 0.0], "q": [2.0, 0.0]}"#;
        let out: serde_json::Value = serde_json::from_str(&body_scene(input)).unwrap();
        assert!(out.get("error").is_some());
    }

    #[test]
    fn simplex_scene_preserves_distance_and_finds_midpoint() {
        let input = r#"{"p": [2.718281828459045, 0.36787944117144233, 1.0],
                        "q": [1.0, 1.0, 1.0],
                        "iso": {"eps": -1, "theta": [1, 2, 0], "g": [2.0, 1.0, 1.0]}}"#;
        let out: serde_json::Value = serde_json::from_str(&simplex_scene(input)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        let d = out["d_pq"].as_f64().unwrap();
        let di = out["d_image"].as_f64().unwrap();
        assert!((d - di).abs() < 1e-12);
        assert!(out["midpoint"].is_object(), "expected an off-chord midpoint");
        // Hexagon comes back closed.
        assert_eq!(out["ball_p"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn reconstruct_scene_matches_hidden_map() {
        let input = r#"{"angle_deg": 25.0, "rapidity": 0.4}"#;
        let out: serde_json::Value = serde_json::from_str(&reconstruct_scene(input)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        assert!(out["max_residual"].as_f64().unwrap() < 1e-8);
        let arrows = out["arrows"].as_array().unwrap();
        assert_eq!(arrows.len(), 24);
        for arrow in arrows {
            let fz = arrow["fz"].as_array().unwrap();
            let tz = arrow["tz"].as_array().unwrap();
            for (a, b) in fz.iter().zip(tz) {
                assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-8);
            }
        }
    }
}
