//! Bounded convex bodies and their cone lift.
//!
//! A bounded convex body `B` with the origin interior lifts to the cone
//! `{ lam (y, 1) : lam >= 0, y in B }` one dimension up, with order unit
//! `(0, 1)` and state `(y, s) -> s`. The body is then affinely isomorphic to
//! the state-one cross section, turning the cross-ratio metric on the body
//! into Birkhoff's metric on the cone. Polytopes lift to facet cones, balls
//! to the Lorentz cone (with the lift axis moved to the first coordinate).

use serde::{Deserialize, Serialize};

use crate::cones::{ConeSpec, OrderUnitSpace};
use crate::error::{GeomError, Result};
use crate::linalg::{self, check_dim, dot, norm2};
use crate::polytope;

/// Largest polytope dimension for which facets are derived by enumeration;
/// higher-dimensional cones should be given directly in facet form.
pub const MAX_POLYTOPE_DIM: usize = 6;

/// A bounded convex body containing the origin in its interior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexBody {
    /// Convex hull of finitely many points.
    Polytope { vertices: Vec<Vec<f64>> },
    /// Euclidean ball of the given radius centred at the origin.
    Ball { radius: f64, dim: usize },
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope { vertices } => vertices.first().map_or(0, Vec::len),
            ConvexBody::Ball { dim, .. } => *dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexBody::Ball { radius, dim } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(GeomError::InvalidParameter("ball radius must be positive".into()));
                }
                if *dim == 0 {
                    return Err(GeomError::InvalidParameter("ball dimension must be >= 1".into()));
                }
            }
            ConvexBody::Polytope { vertices } => {
                let dim = self.dim();
                if dim == 0 || dim > MAX_POLYTOPE_DIM {
                    return Err(GeomError::InvalidParameter(format!(
                        "polytope dimension must be in 1..={MAX_POLYTOPE_DIM}"
                    )));
                }
                for v in vertices {
                    check_dim(dim, v.len())?;
                }
                // 0 interior iff the polar body is bounded; unboundedness of
                // the polar shows up as a recession ray in the enumeration.
                self.facet_normals().map(|_| ())?;
            }
        }
        Ok(())
    }

    /// Outer normals `c_j` of the facet description `c_j . y <= 1`, derived
    /// as the vertices of the polar body.
    fn facet_normals(&self) -> Result<Vec<Vec<f64>>> {
        match self {
            ConvexBody::Ball { .. } => Err(GeomError::InvalidParameter(
                "a ball has no finite facet description".into(),
            )),
            ConvexBody::Polytope { vertices } => {
                let b = vec![1.0; vertices.len()];
                polytope::enumerate_vertices(vertices, &b)
                    .map_err(|_| GeomError::OriginNotInterior)
            }
        }
    }

    /// Scale-free interior slack of `y` (positive exactly on the interior).
    pub fn interior_margin(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        match self {
            ConvexBody::Ball { radius, .. } => Ok((radius - norm2(y)) / radius),
            ConvexBody::Polytope { .. } => {
                let normals = self.facet_normals()?;
                Ok(normals
                    .iter()
                    .map(|c| (1.0 - dot(c, y)) / (1.0 + norm2(c) * norm2(y)))
                    .fold(f64::INFINITY, f64::min))
            }
        }
    }

    pub fn is_interior(&self, y: &[f64]) -> bool {
        matches!(self.interior_margin(y), Ok(m) if m > 1e-12)
    }

    /// Minkowski functional of the symmetrized body `B cap -B`: the norm the
    /// lifted order unit induces on the base space.
    pub fn minkowski_norm(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), y.len())?;
        match self {
            ConvexBody::Ball { radius, .. } => Ok(norm2(y) / radius),
            ConvexBody::Polytope { .. } => {
                let normals = self.facet_normals()?;
                Ok(normals
                    .iter()
                    .map(|c| dot(c, y).abs())
                    .fold(0.0, f64::max))
            }
        }
    }
}

/// The lifted order-unit space together with the affine identification
/// between the body and the state-one cross section.
#[derive(Clone, Debug)]
pub struct LiftedSpace {
    space: OrderUnitSpace,
    body: ConvexBody,
}

impl LiftedSpace {
    pub fn space(&self) -> &OrderUnitSpace {
        &self.space
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    /// The affine embedding of a body point into the cross section.
    pub fn embed(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.body.dim(), y.len())?;
        match &self.body {
            ConvexBody::Polytope { .. } => {
                let mut x = y.to_vec();
                x.push(1.0);
                Ok(x)
            }
            ConvexBody::Ball { radius, .. } => {
                let mut x = Vec::with_capacity(y.len() + 1);
                x.push(1.0);
                x.extend(y.iter().map(|v| v / radius));
                Ok(x)
            }
        }
    }

    /// Inverse of [`embed`](Self::embed) after state normalization.
    pub fn project_to_body(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.space.dim(), x.len())?;
        let x = self.space.normalize_section(x)?;
        match &self.body {
            ConvexBody::Polytope { .. } => Ok(x[..x.len() - 1].to_vec()),
            ConvexBody::Ball { radius, .. } => Ok(linalg::scale(&x[1..], *radius)),
        }
    }
}

/// Lifts a convex body to its cone, expressed in the catalogued families:
/// polytopes become facet cones (facet `c . y <= 1` lifts to the functional
/// `(-c, 1)`), balls become Lorentz cones with the lift axis first.
pub fn lift(body: &ConvexBody) -> Result<LiftedSpace> {
    body.validate()?;
    let space = match body {
        ConvexBody::Polytope { .. } => {
            let normals = body.facet_normals()?;
            let dim = body.dim();
            let facets: Vec<Vec<f64>> = normals
                .iter()
                .map(|c| {
                    let mut row: Vec<f64> = c.iter().map(|v| -v).collect();
                    row.push(1.0);
                    row
                })
                .collect();
            let mut u = vec![0.0; dim + 1];
            u[dim] = 1.0;
            OrderUnitSpace::new(ConeSpec::PolyhedralFacets { facets }, u.clone(), u)?
        }
        ConvexBody::Ball { dim, .. } => {
            let mut u = vec![0.0; dim + 1];
            u[0] = 1.0;
            OrderUnitSpace::new(ConeSpec::Lorentz { dim: dim + 1 }, u.clone(), u)?
        }
    };
    Ok(LiftedSpace {
        space,
        body: body.clone(),
    })
}

/// Boundary endpoints of the chord of the body through two distinct interior
/// points, ordered so the first endpoint lies beyond `p` and the second
/// beyond `q`.
pub fn body_chord(body: &ConvexBody, p: &[f64], q: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (t_min, t_max) = chord_parameters(body, p, q)?;
    let v = linalg::sub(q, p);
    Ok((linalg::axpy(p, t_min, &v), linalg::axpy(p, t_max, &v)))
}

/// Cross-ratio distance between interior points of the body, computed on the
/// chord through them. Equals the Birkhoff distance of the lifted points.
pub fn body_dist(body: &ConvexBody, p: &[f64], q: &[f64]) -> Result<f64> {
    if linalg::norm2(&linalg::sub(q, p)) < 1e-15 * (1.0 + norm2(p)) {
        return Ok(0.0);
    }
    let (t_min, t_max) = chord_parameters(body, p, q)?;
    // Points on the chord at parameters t_min < 0 < 1 < t_max; the
    // cross-ratio of (endpoint, p, q, endpoint) in these coordinates:
    let cr = ((1.0 - t_min) * t_max) / ((-t_min) * (t_max - 1.0));
    Ok(cr.ln())
}

/// Chord parameters: p + t (q - p) is in the body exactly for t in
/// [t_min, t_max], with t_min < 0 and t_max > 1 for interior p, q.
fn chord_parameters(body: &ConvexBody, p: &[f64], q: &[f64]) -> Result<(f64, f64)> {
    check_dim(body.dim(), p.len())?;
    check_dim(body.dim(), q.len())?;
    for (pt, name) in [(p, "p"), (q, "q")] {
        if !body.is_interior(pt) {
            return Err(GeomError::NotInterior {
                detail: format!("{name} is not interior to the body"),
            });
        }
    }
    let v = linalg::sub(q, p);
    match body {
        ConvexBody::Ball { radius, .. } => {
            let a = dot(&v, &v);
            let b = dot(p, &v);
            let c = dot(p, p) - radius * radius;
            let disc = b * b - a * c;
            if disc <= 0.0 || a == 0.0 {
                return Err(GeomError::CoincidentPoints { d_h: 0.0 });
            }
            let root = disc.sqrt();
            Ok(((-b - root) / a, (-b + root) / a))
        }
        ConvexBody::Polytope { .. } => {
            let normals = body.facet_normals()?;
            let mut t_min = f64::NEG_INFINITY;
            let mut t_max = f64::INFINITY;
            for cvec in &normals {
                let slope = dot(cvec, &v);
                let slack = 1.0 - dot(cvec, p);
                if slope.abs() < 1e-14 {
                    continue;
                }
                let t = slack / slope;
                if slope > 0.0 {
                    t_max = t_max.min(t);
                } else {
                    t_min = t_min.max(t);
                }
            }
            if !(t_min.is_finite() && t_max.is_finite()) {
                return Err(GeomError::ChordDegenerate {
                    detail: "chord does not meet the boundary on both sides".into(),
                });
            }
            Ok((t_min, t_max))
        }
    }
}
