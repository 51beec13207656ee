//! Order-unit cones and the two projective metrics.
//!
//! A cone order `x <= y` (meaning `y - x` in the cone) induces the gauge
//! `M(x/y) = inf { beta > 0 : x <= beta y }`. Birkhoff's distance is
//! `d_H(x, y) = log(M(x/y) M(y/x))`, a metric between rays of the cone
//! interior, and Thompson's distance is `d_T(x, y) = log max(M(x/y), M(y/x))`,
//! a metric on the interior itself.
//!
//! Fixing a strictly positive state phi identifies rays with the cross
//! section `{x interior : phi(x) = 1}`. On that section d_H coincides with
//! the classical cross-ratio distance along chords, which this module also
//! computes directly from chord endpoints as an independent route.
//!
//! Three cone families are catalogued, each with closed-form gauges:
//! the nonnegative orthant, the Lorentz (ice-cream) cone
//! `{x : x_1 >= ||(x_2, ..., x_n)||_2}`, and polyhedral cones given by facet
//! functionals `{x : a_i . x >= 0}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{self, check_dim, dot, norm2};
use crate::polytope;

/// Relative slack below which a point counts as non-interior.
pub const INTERIOR_TOL: f64 = 1e-12;

/// Hilbert distance below which two points are treated as projectively equal.
pub const COINCIDENT_TOL: f64 = 1e-12;

/// A finite-dimensional closed cone in one of the catalogued families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConeSpec {
    /// `{x : x_i >= 0 for all i}`
    Orthant { dim: usize },
    /// `{x : x_1 >= ||(x_2, ..., x_n)||_2}`, dim >= 2
    Lorentz { dim: usize },
    /// `{x : a_i . x >= 0 for all i}`, pointed with nonempty interior
    #[serde(rename = "facets")]
    PolyhedralFacets { facets: Vec<Vec<f64>> },
}

impl ConeSpec {
    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Orthant { dim } | ConeSpec::Lorentz { dim } => *dim,
            ConeSpec::PolyhedralFacets { facets } => facets.first().map_or(0, Vec::len),
        }
    }

    /// Structural validation. For polyhedral cones this certifies pointedness
    /// (facet rows have full rank) and nonempty interior (a strictly feasible
    /// point exists), both found by enumeration on the facet description.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConeSpec::Orthant { dim } => {
                if *dim == 0 {
                    return Err(GeomError::InvalidCone("orthant dimension must be >= 1".into()));
                }
            }
            ConeSpec::Lorentz { dim } => {
                if *dim < 2 {
                    return Err(GeomError::InvalidCone("Lorentz dimension must be >= 2".into()));
                }
            }
            ConeSpec::PolyhedralFacets { facets } => {
                let dim = self.dim();
                if dim == 0 {
                    return Err(GeomError::InvalidCone("facet cone has no coordinates".into()));
                }
                for f in facets {
                    if f.len() != dim {
                        return Err(GeomError::DimensionMismatch {
                            expected: dim,
                            got: f.len(),
                        });
                    }
                    if norm2(f) < 1e-300 {
                        return Err(GeomError::InvalidCone("zero facet functional".into()));
                    }
                }
                polytope::interior_witness(facets)?;
            }
        }
        Ok(())
    }

    /// Scale-free interior slack: the smallest facet value (or Lorentz slack)
    /// of `x`, divided by `||x||`. Positive exactly on the interior.
    pub fn interior_margin(&self, x: &[f64]) -> f64 {
        let nx = norm2(x);
        if nx < 1e-300 {
            return 0.0;
        }
        match self {
            ConeSpec::Orthant { .. } => x.iter().fold(f64::INFINITY, |m, &v| m.min(v)) / nx,
            ConeSpec::Lorentz { .. } => {
                let spatial = norm2(&x[1..]);
                (x[0] - spatial) / nx
            }
            ConeSpec::PolyhedralFacets { facets } => facets
                .iter()
                .fold(f64::INFINITY, |m, a| m.min(dot(a, x) / norm2(a)))
                / nx,
        }
    }

    /// Strict interiority with the crate-wide relative tolerance.
    pub fn is_interior(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.interior_margin(x) > INTERIOR_TOL
    }

    /// Cone membership up to a relative tolerance (boundary included).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim() && self.interior_margin(x) >= -tol
    }

    /// A canonical interior point.
    pub fn interior_point(&self) -> Result<Vec<f64>> {
        match self {
            ConeSpec::Orthant { dim } => Ok(vec![1.0; *dim]),
            ConeSpec::Lorentz { dim } => {
                let mut u = vec![0.0; *dim];
                u[0] = 1.0;
                Ok(u)
            }
            ConeSpec::PolyhedralFacets { facets } => polytope::interior_witness(facets),
        }
    }

    /// Extreme rays, for the families where they are finitely enumerable.
    pub fn extreme_rays(&self) -> Result<Vec<Vec<f64>>> {
        match self {
            ConeSpec::Orthant { dim } => Ok((0..*dim)
                .map(|i| {
                    let mut e = vec![0.0; *dim];
                    e[i] = 1.0;
                    e
                })
                .collect()),
            ConeSpec::Lorentz { .. } => Err(GeomError::InvalidParameter(
                "Lorentz cone has a continuum of extreme rays".into(),
            )),
            ConeSpec::PolyhedralFacets { facets } => polytope::extreme_rays(facets),
        }
    }

    /// `inf { beta : beta y - x in cone }` for interior `y` and arbitrary `x`.
    ///
    /// Orthant and facet cones take the largest coordinate/facet ratio. The
    /// Lorentz value is the larger root of the boundary quadratic
    /// `Q(beta y - x) = 0` in the bilinear form
    /// `Q(u, v) = u_1 v_1 - sum_{i >= 2} u_i v_i`: for beta above that root
    /// the vector `beta y - x` sits inside the cone, between the roots it is
    /// spacelike, and below the smaller root it lies in the negated cone.
    pub(crate) fn upper_gauge(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        match self {
            ConeSpec::Orthant { .. } => Ok(x
                .iter()
                .zip(y)
                .fold(f64::NEG_INFINITY, |m, (&xi, &yi)| m.max(xi / yi))),
            ConeSpec::PolyhedralFacets { facets } => Ok(facets
                .iter()
                .fold(f64::NEG_INFINITY, |m, a| m.max(dot(a, x) / dot(a, y)))),
            ConeSpec::Lorentz { .. } => {
                let q = |u: &[f64], v: &[f64]| u[0] * v[0] - dot(&u[1..], &v[1..]);
                let a = q(y, y);
                let b = q(x, y);
                // Split x = (b/a) y + w with w Q-orthogonal to y. For
                // timelike y the complement is spacelike, so the
                // discriminant b^2 - a Q(x, x) equals -a Q(w, w) >= 0; this
                // form avoids the cancellation of the textbook one when x
                // and y are nearly proportional.
                let w: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| xi - (b / a) * yi).collect();
                let qww = q(&w, &w);
                let disc = -a * qww;
                if disc < -1e-10 * (b * b).max(a * a).max(1e-300) {
                    return Err(GeomError::NumericalDegeneracy { discriminant: disc });
                }
                Ok((b + disc.max(0.0).sqrt()) / a)
            }
        }
    }
}

/// An order-unit space: a catalogued cone, a distinguished interior order
/// unit `u`, and a strictly positive state `phi` with `phi(u) = 1`.
///
/// The state is rescaled at construction so that `phi(u) = 1` holds exactly.
#[derive(Clone, Debug)]
pub struct OrderUnitSpace {
    cone: ConeSpec,
    u: Vec<f64>,
    phi: Vec<f64>,
}

impl OrderUnitSpace {
    pub fn new(cone: ConeSpec, u: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        cone.validate()?;
        let dim = cone.dim();
        check_dim(dim, u.len())?;
        check_dim(dim, phi.len())?;
        if !cone.is_interior(&u) {
            return Err(GeomError::NotInterior {
                detail: format!(
                    "order unit has interior margin {:.3e}",
                    cone.interior_margin(&u)
                ),
            });
        }
        check_strictly_positive(&cone, &phi)?;
        let pu = dot(&phi, &u);
        if pu <= 0.0 {
            return Err(GeomError::InvalidParameter(
                "state is nonpositive on the order unit".into(),
            ));
        }
        let phi = linalg::scale(&phi, 1.0 / pu);
        Ok(Self { cone, u, phi })
    }

    /// The canonical space for a cone: orthant gets the all-ones unit and the
    /// averaging state, Lorentz gets the axis vector for both, and facet
    /// cones get a certified interior point and the sum of facet functionals.
    pub fn standard(cone: ConeSpec) -> Result<Self> {
        cone.validate()?;
        let dim = cone.dim();
        let (u, phi) = match &cone {
            ConeSpec::Orthant { .. } => (vec![1.0; dim], vec![1.0 / dim as f64; dim]),
            ConeSpec::Lorentz { .. } => {
                let mut e = vec![0.0; dim];
                e[0] = 1.0;
                (e.clone(), e)
            }
            ConeSpec::PolyhedralFacets { facets } => {
                let u = polytope::interior_witness(facets)?;
                let mut phi = vec![0.0; dim];
                for a in facets {
                    let na = norm2(a);
                    for (p, ai) in phi.iter_mut().zip(a) {
                        *p += ai / na;
                    }
                }
                (u, phi)
            }
        };
        Self::new(cone, u, phi)
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn order_unit(&self) -> &[f64] {
        &self.u
    }

    pub fn state(&self) -> &[f64] {
        &self.phi
    }

    pub fn state_value(&self, x: &[f64]) -> f64 {
        dot(&self.phi, x)
    }

    fn require_interior(&self, x: &[f64], which: &str) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        if !self.cone.is_interior(x) {
            return Err(GeomError::NotInterior {
                detail: format!(
                    "{which} has interior margin {:.3e}",
                    self.cone.interior_margin(x)
                ),
            });
        }
        Ok(())
    }

    /// The gauge `M(x/y) = inf { beta > 0 : x <= beta y }` for interior x, y.
    pub fn gauge(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.require_interior(x, "first argument")?;
        self.require_interior(y, "second argument")?;
        self.cone.upper_gauge(x, y)
    }

    /// Birkhoff's distance `log(M(x/y) M(y/x))` between interior rays.
    pub fn hilbert_dist(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok((self.gauge(x, y)? * self.gauge(y, x)?).ln().max(0.0))
    }

    /// Thompson's distance `log max(M(x/y), M(y/x))` on the cone interior.
    pub fn thompson_dist(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.gauge(x, y)?.max(self.gauge(y, x)?).ln().max(0.0))
    }

    /// The order-unit norm `inf { lam > 0 : -lam u <= x <= lam u }`.
    pub fn order_unit_norm(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "order_unit_norm: dimension mismatch");
        if norm2(x) == 0.0 {
            return 0.0;
        }
        let up = self
            .cone
            .upper_gauge(x, &self.u)
            .expect("order unit is interior");
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let down = self
            .cone
            .upper_gauge(&neg, &self.u)
            .expect("order unit is interior");
        up.max(down).max(0.0)
    }

    /// True exactly on the cone interior (the order units of the cone).
    pub fn is_order_unit(&self, x: &[f64]) -> bool {
        self.cone.is_interior(x)
    }

    /// Normalizes an interior vector to the state-one cross section.
    pub fn project(&self, x: &[f64]) -> Result<ProjectivePoint> {
        self.require_interior(x, "point")?;
        let s = self.state_value(x);
        if s <= 0.0 {
            return Err(GeomError::InvalidParameter(
                "state is nonpositive on the given interior vector".into(),
            ));
        }
        Ok(ProjectivePoint {
            rep: linalg::scale(x, 1.0 / s),
        })
    }

    /// Normalizes an arbitrary vector with positive state value; used for
    /// boundary points of the cross section.
    pub fn normalize_section(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let s = self.state_value(x);
        if s <= 0.0 {
            return Err(GeomError::StateVanishes { value: s });
        }
        Ok(linalg::scale(x, 1.0 / s))
    }

    /// Endpoints of the chord of the cross section through two distinct
    /// points: `x - M(y/x)^{-1} y` and `y - M(x/y)^{-1} x` land on the cone
    /// boundary and normalize to the section endpoints nearest `x` and `y`
    /// respectively. Also returns `t` with `x = t x' + (1 - t) y'`.
    pub fn chord_endpoints(&self, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<Chord> {
        let d = self.hilbert_dist(x.rep(), y.rep())?;
        if d < COINCIDENT_TOL {
            return Err(GeomError::CoincidentPoints { d_h: d });
        }
        let myx = self.gauge(y.rep(), x.rep())?;
        let mxy = self.gauge(x.rep(), y.rep())?;
        let wx = linalg::axpy(x.rep(), -1.0 / myx, y.rep());
        let wy = linalg::axpy(y.rep(), -1.0 / mxy, x.rep());
        let x_prime = self.normalize_section(&wx)?;
        let y_prime = self.normalize_section(&wy)?;
        let span = linalg::sub(&x_prime, &y_prime);
        let t = dot(&linalg::sub(x.rep(), &y_prime), &span) / dot(&span, &span);
        if !(0.0..=1.0).contains(&t) {
            return Err(GeomError::ChordDegenerate {
                detail: format!("interior point parameter t = {t} outside (0, 1)"),
            });
        }
        Ok(Chord {
            x_prime,
            y_prime,
            t,
        })
    }

    /// Cross-ratio distance: log of `[x', x, y, y']` evaluated with Euclidean
    /// norms on the state-one slice. Coincident points give 0. Agrees with
    /// `hilbert_dist` on every catalogued cone.
    pub fn cross_ratio_dist(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let px = self.project(x)?;
        let py = self.project(y)?;
        let d = self.hilbert_dist(px.rep(), py.rep())?;
        if d < COINCIDENT_TOL {
            return Ok(0.0);
        }
        let chord = self.chord_endpoints(&px, &py)?;
        let e = |a: &[f64], b: &[f64]| norm2(&linalg::sub(a, b));
        let cr = (e(&chord.x_prime, py.rep()) / e(&chord.x_prime, px.rep()))
            * (e(&chord.y_prime, px.rep()) / e(&chord.y_prime, py.rep()));
        Ok(cr.ln())
    }
}

/// A point of the state-one cross section of the cone interior.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    rep: Vec<f64>,
}

impl ProjectivePoint {
    pub fn rep(&self) -> &[f64] {
        &self.rep
    }

    pub fn into_rep(self) -> Vec<f64> {
        self.rep
    }
}

/// Boundary endpoints of a section chord, with the parameter of the first
/// interior point: `x = t x' + (1 - t) y'`, `0 < t < 1`.
#[derive(Clone, Debug)]
pub struct Chord {
    pub x_prime: Vec<f64>,
    pub y_prime: Vec<f64>,
    pub t: f64,
}

/// Applies a bi-positive linear map to a section point and renormalizes:
/// `x -> T x / phi_2(T x)`. Such maps satisfy `M(Tx/Ty) = M(x/y)` and hence
/// preserve both metrics. Only the image of the given point is checked here;
/// use [`crate::collineation::InducedMap::new`] for a full probe battery.
pub fn induced_isometry_apply(
    t: &DMatrix<f64>,
    source: &OrderUnitSpace,
    target: &OrderUnitSpace,
    x: &ProjectivePoint,
) -> Result<ProjectivePoint> {
    check_dim(source.dim(), t.ncols())?;
    check_dim(target.dim(), t.nrows())?;
    let y = linalg::apply_matrix(t, x.rep());
    if !target.cone().is_interior(&y) {
        return Err(GeomError::NotBiPositive {
            detail: format!(
                "image of an interior point has margin {:.3e}",
                target.cone().interior_margin(&y)
            ),
        });
    }
    target.project(&y)
}

/// Operator norm of a positive map between order-unit spaces. For positive
/// `T` the norm is attained at the order unit: `||T|| = ||T u_1||_{u_2}`.
pub fn positive_operator_norm(
    source: &OrderUnitSpace,
    target: &OrderUnitSpace,
    t: &DMatrix<f64>,
) -> Result<f64> {
    check_dim(source.dim(), t.ncols())?;
    check_dim(target.dim(), t.nrows())?;
    check_positive_map(source, target, t)?;
    Ok(target.order_unit_norm(&linalg::apply_matrix(t, source.order_unit())))
}

/// Verifies `T(C_1) subseteq C_2` on extreme rays where enumerable, otherwise
/// on a deterministic boundary sample.
fn check_positive_map(
    source: &OrderUnitSpace,
    target: &OrderUnitSpace,
    t: &DMatrix<f64>,
) -> Result<()> {
    let tol = 1e-9;
    for p in positivity_probes(source.cone())? {
        let image = linalg::apply_matrix(t, &p);
        if !target.cone().contains(&image, tol) {
            return Err(GeomError::NotPositive {
                detail: format!(
                    "image of a cone point has margin {:.3e}",
                    target.cone().interior_margin(&image)
                ),
            });
        }
    }
    Ok(())
}

/// Generators whose images certify positivity: extreme rays for polyhedral
/// families, a deterministic boundary fan for the Lorentz cone.
pub(crate) fn positivity_probes(cone: &ConeSpec) -> Result<Vec<Vec<f64>>> {
    match cone {
        ConeSpec::Orthant { .. } | ConeSpec::PolyhedralFacets { .. } => cone.extreme_rays(),
        ConeSpec::Lorentz { dim } => {
            let n = *dim;
            let mut probes = Vec::new();
            for i in 1..n {
                for s in [-1.0, 1.0] {
                    let mut p = vec![0.0; n];
                    p[0] = 1.0;
                    p[i] = s;
                    probes.push(p);
                }
            }
            // A fixed low-discrepancy fan to cover mixed directions.
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..32 {
                let mut dir = vec![0.0; n];
                dir[0] = 1.0;
                let mut s2 = 0.0;
                for d in dir.iter_mut().skip(1) {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    *d = ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
                    s2 += *d * *d;
                }
                if s2 > 1e-12 {
                    let inv = 1.0 / s2.sqrt();
                    for d in dir.iter_mut().skip(1) {
                        *d *= inv;
                    }
                    probes.push(dir);
                }
            }
            Ok(probes)
        }
    }
}

fn check_strictly_positive(cone: &ConeSpec, phi: &[f64]) -> Result<()> {
    let fail = |detail: String| Err(GeomError::InvalidParameter(detail));
    match cone {
        ConeSpec::Orthant { .. } => {
            if phi.iter().any(|&p| p <= 0.0) {
                return fail("state must be strictly positive in every coordinate".into());
            }
        }
        ConeSpec::Lorentz { .. } => {
            // The Lorentz cone is self-dual; strict positivity means the
            // state lies in the open dual cone.
            if phi[0] <= norm2(&phi[1..]) * (1.0 + 1e-12) {
                return fail("state is not interior to the dual Lorentz cone".into());
            }
        }
        ConeSpec::PolyhedralFacets { facets } => {
            for ray in polytope::extreme_rays(facets)? {
                if dot(phi, &ray) <= 1e-12 {
                    return fail(format!(
                        "state vanishes on an extreme ray (value {:.3e})",
                        dot(phi, &ray)
                    ));
                }
            }
        }
    }
    Ok(())
}
