//! Wire schemas for spaces, bodies, point sets and isometries.
//!
//! The structs here mirror the JSON accepted and emitted by the CLI and the
//! browser demo. They deliberately carry no invariants; conversion into the
//! validated core types happens through the `to_*` methods.

use serde::{Deserialize, Serialize};

use crate::cones::{ConeSpec, OrderUnitSpace};
use crate::convexset::ConvexBody;
use crate::error::Result;
use crate::simplexgeom::{FiniteK, SimplexIsometry};

/// `{"cone": {...}, "u": [...], "phi": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub cone: ConeSpec,
    pub u: Vec<f64>,
    pub phi: Vec<f64>,
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<OrderUnitSpace> {
        OrderUnitSpace::new(self.cone.clone(), self.u.clone(), self.phi.clone())
    }

    pub fn from_space(space: &OrderUnitSpace) -> Self {
        Self {
            cone: space.cone().clone(),
            u: space.order_unit().to_vec(),
            phi: space.state().to_vec(),
        }
    }
}

/// `{"polytope": {"vertices": [[...]]}}` or `{"ball": {"radius": r, "dim": d}}`
pub type BodyJson = ConvexBody;

/// `{"n": n, "mu": [...]}`; `mu` defaults to uniform weights.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteKJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
}

impl FiniteKJson {
    pub fn to_finite_k(&self) -> Result<FiniteK> {
        match &self.mu {
            Some(mu) => {
                crate::linalg::check_dim(self.n, mu.len())?;
                FiniteK::with_weights(mu.clone())
            }
            None => FiniteK::uniform(self.n),
        }
    }
}

/// `{"eps": 1|-1, "theta": [0-based permutation], "g": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometryJson {
    pub eps: i32,
    pub theta: Vec<usize>,
    pub g: Vec<f64>,
}

impl IsometryJson {
    pub fn to_isometry(&self, k: &FiniteK) -> Result<SimplexIsometry> {
        SimplexIsometry::new(k, self.eps, self.theta.clone(), self.g.clone())
    }

    pub fn from_isometry(iso: &SimplexIsometry) -> Self {
        Self {
            eps: iso.eps,
            theta: iso.theta.clone(),
            g: iso.g.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_schema_shape() {
        let json = r#"{"cone": {"type": "orthant", "dim": 2}, "u": [1, 1], "phi": [0.5, 0.5]}"#;
        let space: SpaceJson = serde_json::from_str(json).unwrap();
        assert!(space.to_space().is_ok());

        let json = r#"{"cone": {"type": "facets", "facets": [[1, 1], [-1, 1]]}, "u": [0, 1], "phi": [0, 1]}"#;
        let space: SpaceJson = serde_json::from_str(json).unwrap();
        assert!(space.to_space().is_ok());
    }

    #[test]
    fn body_schema_shape() {
        let json = r#"{"polytope": {"vertices": [[-1], [1]]}}"#;
        let body: BodyJson = serde_json::from_str(json).unwrap();
        assert!(body.validate().is_ok());

        let json = r#"{"ball": {"radius": 1.0, "dim": 2}}"#;
        let body: BodyJson = serde_json::from_str(json).unwrap();
        assert!(body.validate().is_ok());
    }

    #[test]
    fn finite_k_defaults_to_uniform() {
        let k: FiniteKJson = serde_json::from_str(r#"{"n": 4}"#).unwrap();
        let k = k.to_finite_k().unwrap();
        assert_eq!(k.weights(), &[0.25; 4]);
    }
}
