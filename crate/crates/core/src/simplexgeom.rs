//! The simplex geometry over a finite point set and its isometry group.
//!
//! Over a finite set with a strictly positive weight vector, the open
//! weighted simplex `{f > 0 : sum_i mu_i f_i = 1}` carries Birkhoff's metric
//! of the positive orthant. The coordinatewise logarithm, taken modulo
//! constants, is an isometry onto the quotient space of functions modulo
//! constants with the variation norm `max - min`. All metric structure of the
//! simplex geometry is therefore linear in Log coordinates.
//!
//! Every surjective isometry of the simplex geometry is of the form
//! `f -> g (f o theta)^eps`, normalized back to the simplex: a gauge `g > 0`,
//! a relabelling `theta`, and a sign `eps` that inverts the functions. The
//! triple composes as a semidirect product of the gauge translations with the
//! sign-and-relabelling group, and [`find_nonaffine_midpoint`] witnesses that
//! geodesics between simplex points are generally not unique.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::check_dim;

/// Largest canonical representative entry accepted by [`FiniteK::exp_map`].
pub const EXP_GUARD: f64 = 700.0;

/// A finite point set with a strictly positive weight vector (a measure with
/// full support).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteK {
    mu: Vec<f64>,
}

impl FiniteK {
    pub fn uniform(n: usize) -> Result<Self> {
        Self::with_weights(vec![1.0 / n.max(1) as f64; n])
    }

    /// Weights `2^-1, ..., 2^-n`: the finite truncation of the dyadic
    /// weighting on sequences.
    pub fn dyadic(n: usize) -> Result<Self> {
        Self::with_weights((1..=n).map(|i| (2.0f64).powi(-(i as i32))).collect())
    }

    pub fn with_weights(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(GeomError::InvalidParameter("weight vector is empty".into()));
        }
        if mu.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(GeomError::InvalidParameter(
                "weights must be strictly positive".into(),
            ));
        }
        Ok(Self { mu })
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.mu
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.mu.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Normalizes a strictly positive vector onto the weighted simplex.
    pub fn delta_point(&self, f: &[f64]) -> Result<DeltaPoint> {
        check_dim(self.len(), f.len())?;
        if f.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(GeomError::InvalidParameter(
                "simplex points must be strictly positive".into(),
            ));
        }
        let total = self.integrate(f);
        Ok(DeltaPoint {
            f: f.iter().map(|v| v / total).collect(),
        })
    }

    /// The constant function, normalized.
    pub fn constant(&self) -> DeltaPoint {
        let total: f64 = self.mu.iter().sum();
        DeltaPoint {
            f: vec![1.0 / total; self.len()],
        }
    }

    /// Inverse of [`log_map`]: coordinatewise exponential of any
    /// representative, normalized back onto the simplex. Representatives with
    /// entries beyond the exp guard are rejected rather than overflowed.
    pub fn exp_map(&self, q: &QuotientFunction) -> Result<DeltaPoint> {
        check_dim(self.len(), q.rep().len())?;
        let max = q.rep().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        if max > EXP_GUARD {
            return Err(GeomError::OverflowGuard { max });
        }
        let f: Vec<f64> = q.rep().iter().map(|v| v.exp()).collect();
        self.delta_point(&f)
    }

    /// Birkhoff distance on the simplex: the variation norm of the Log
    /// difference.
    pub fn dist(&self, p: &DeltaPoint, q: &DeltaPoint) -> f64 {
        variation_norm(&log_map(p).sub(&log_map(q)))
    }
}

/// A point of the open weighted simplex: strictly positive with unit
/// integral.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaPoint {
    f: Vec<f64>,
}

impl DeltaPoint {
    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn into_values(self) -> Vec<f64> {
        self.f
    }
}

/// A function modulo additive constants, stored by its sum-zero
/// representative.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientFunction {
    rep: Vec<f64>,
}

impl QuotientFunction {
    /// Canonicalizes an arbitrary representative to sum zero.
    pub fn new(raw: Vec<f64>) -> Self {
        let mean: f64 = raw.iter().sum::<f64>() / raw.len().max(1) as f64;
        QuotientFunction {
            rep: raw.iter().map(|v| v - mean).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        QuotientFunction { rep: vec![0.0; n] }
    }

    pub fn rep(&self) -> &[f64] {
        &self.rep
    }

    pub fn sub(&self, other: &QuotientFunction) -> QuotientFunction {
        QuotientFunction::new(
            self.rep
                .iter()
                .zip(&other.rep)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &QuotientFunction) -> QuotientFunction {
        QuotientFunction::new(
            self.rep
                .iter()
                .zip(&other.rep)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> QuotientFunction {
        QuotientFunction::new(self.rep.iter().map(|v| s * v).collect())
    }
}

/// Coordinatewise logarithm into the quotient space. Isometric: variation
/// distance of images equals the simplex distance of the preimages.
pub fn log_map(p: &DeltaPoint) -> QuotientFunction {
    QuotientFunction::new(p.values().iter().map(|v| v.ln()).collect())
}

/// The variation norm `max - min` of any representative.
pub fn variation_norm(q: &QuotientFunction) -> f64 {
    let max = q.rep().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min = q.rep().iter().fold(f64::INFINITY, |m, &v| m.min(v));
    (max - min).max(0.0)
}

/// Quotient norm of the sup norm, doubled: `2 min_lam ||rep - lam||_inf`,
/// computed at the exact minimizer `lam = (max + min) / 2`. Exists as an
/// independent check of [`variation_norm`], with which it coincides.
pub fn quotient_norm_oracle(q: &QuotientFunction) -> f64 {
    let max = q.rep().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min = q.rep().iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let lam = 0.5 * (max + min);
    2.0 * q
        .rep()
        .iter()
        .fold(0.0f64, |m, &v| m.max((v - lam).abs()))
}

/// Simplex distance; equal to the orthant Birkhoff distance of the raw
/// positive vectors.
pub fn simplex_dist(k: &FiniteK, p: &DeltaPoint, q: &DeltaPoint) -> f64 {
    k.dist(p, q)
}

/// A surjective isometry of the simplex geometry in gauge/relabelling/sign
/// coordinates. The gauge is stored canonically with unit integral, which
/// makes the triple unique.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexIsometry {
    pub eps: i32,
    pub theta: Vec<usize>,
    pub g: Vec<f64>,
}

impl SimplexIsometry {
    pub fn new(k: &FiniteK, eps: i32, theta: Vec<usize>, g: Vec<f64>) -> Result<Self> {
        if eps != 1 && eps != -1 {
            return Err(GeomError::InvalidParameter("eps must be +1 or -1".into()));
        }
        check_dim(k.len(), theta.len())?;
        check_dim(k.len(), g.len())?;
        let mut seen = vec![false; k.len()];
        for &t in &theta {
            if t >= k.len() || seen[t] {
                return Err(GeomError::InvalidParameter(
                    "theta is not a permutation".into(),
                ));
            }
            seen[t] = true;
        }
        if g.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
            return Err(GeomError::InvalidParameter(
                "gauge must be strictly positive".into(),
            ));
        }
        let total = k.integrate(&g);
        Ok(Self {
            eps,
            theta,
            g: g.iter().map(|v| v / total).collect(),
        })
    }

    pub fn identity(k: &FiniteK) -> Self {
        let n = k.len();
        Self::new(k, 1, (0..n).collect(), vec![1.0; n]).expect("identity is valid")
    }

    /// Pointwise inversion of the simplex, `f -> 1/f` normalized.
    pub fn inversion(k: &FiniteK) -> Self {
        let n = k.len();
        Self::new(k, -1, (0..n).collect(), vec![1.0; n]).expect("inversion is valid")
    }
}

/// Applies the isometry: `h(f)_i = g_i * f_{theta(i)}^eps`, normalized.
pub fn isometry_apply(k: &FiniteK, h: &SimplexIsometry, p: &DeltaPoint) -> Result<DeltaPoint> {
    check_dim(k.len(), h.theta.len())?;
    check_dim(k.len(), p.values().len())?;
    let f: Vec<f64> = h
        .g
        .iter()
        .zip(&h.theta)
        .map(|(gi, &ti)| {
            let v = p.values()[ti];
            if h.eps == 1 {
                gi * v
            } else {
                gi / v
            }
        })
        .collect();
    k.delta_point(&f)
}

/// Closed-form composition: `compose(h2, h1)` applies `h1` first. In
/// coordinates: the signs multiply, the relabellings compose as
/// `theta_1 o theta_2`, and the gauge picks up the relabelled, sign-twisted
/// gauge of the inner map.
pub fn isometry_compose(
    k: &FiniteK,
    h2: &SimplexIsometry,
    h1: &SimplexIsometry,
) -> Result<SimplexIsometry> {
    check_dim(k.len(), h2.theta.len())?;
    check_dim(k.len(), h1.theta.len())?;
    let n = k.len();
    let eps = h1.eps * h2.eps;
    let theta: Vec<usize> = (0..n).map(|i| h1.theta[h2.theta[i]]).collect();
    let g: Vec<f64> = (0..n)
        .map(|i| {
            let inner = h1.g[h2.theta[i]];
            let twisted = if h2.eps == 1 { inner } else { 1.0 / inner };
            h2.g[i] * twisted
        })
        .collect();
    SimplexIsometry::new(k, eps, theta, g)
}

/// Group inverse: `compose(h, isometry_inverse(h))` is the identity in
/// canonical form.
pub fn isometry_inverse(k: &FiniteK, h: &SimplexIsometry) -> Result<SimplexIsometry> {
    check_dim(k.len(), h.theta.len())?;
    let n = k.len();
    let mut theta_inv = vec![0usize; n];
    for (i, &t) in h.theta.iter().enumerate() {
        theta_inv[t] = i;
    }
    let g: Vec<f64> = (0..n)
        .map(|j| {
            let gj = h.g[theta_inv[j]];
            if h.eps == 1 {
                1.0 / gj
            } else {
                gj
            }
        })
        .collect();
    SimplexIsometry::new(k, h.eps, theta_inv, g)
}

/// The linear part of the isometry in Log coordinates:
/// `q -> eps * (q o theta)`, which permutes and possibly negates the
/// representative. Preserves the variation norm exactly. Permutation and
/// negation keep the representative sum-zero, so no re-canonicalization
/// happens (it would only reshuffle last bits).
pub fn quotient_linear_isometry_apply(
    eps: i32,
    theta: &[usize],
    q: &QuotientFunction,
) -> QuotientFunction {
    let rep = theta
        .iter()
        .map(|&t| if eps == 1 { q.rep()[t] } else { -q.rep()[t] })
        .collect();
    QuotientFunction { rep }
}

/// Grid search for a midpoint off the affine chord.
///
/// Works in Log coordinates, where midpoints form a polytope of the
/// variation norm. Candidates are single-coordinate perturbations of the
/// affine midpoint on a fixed grid; a candidate is a witness when both half
/// distances match to `tol` and it stays at least `1e-3` away from the
/// affine midpoint. `None` is returned when the grid certifies no such
/// candidate (always, in particular, for a two-point base set, whose
/// quotient space is one-dimensional).
pub fn find_nonaffine_midpoint(
    k: &FiniteK,
    p: &DeltaPoint,
    q: &DeltaPoint,
) -> Result<Option<DeltaPoint>> {
    find_nonaffine_midpoint_with_tol(k, p, q, 1e-9)
}

pub fn find_nonaffine_midpoint_with_tol(
    k: &FiniteK,
    p: &DeltaPoint,
    q: &DeltaPoint,
    tol: f64,
) -> Result<Option<DeltaPoint>> {
    const STEP: f64 = 1e-2;
    const SEPARATION: f64 = 1e-3;
    const MAX_CANDIDATES: usize = 10_000;

    let n = k.len();
    let a = log_map(p);
    let b = log_map(q);
    let d = variation_norm(&a.sub(&b));
    if d < 1e-12 {
        return Err(GeomError::CoincidentPoints { d_h: d });
    }
    let half = 0.5 * d;
    let mid = a.add(&b).scale(0.5);

    let max_multiple = ((d / STEP).floor() as usize).max(1);
    let budget_per_dir = (MAX_CANDIDATES / (2 * n).max(1)).max(1);
    let multiples = max_multiple.min(budget_per_dir);

    for coord in 0..n {
        for sign in [1.0, -1.0] {
            for m in 1..=multiples {
                let offset = sign * STEP * m as f64;
                let mut rep = mid.rep().to_vec();
                rep[coord] += offset;
                let cand = QuotientFunction::new(rep);
                let d_left = variation_norm(&a.sub(&cand));
                let d_right = variation_norm(&cand.sub(&b));
                if (d_left - half).abs() <= tol
                    && (d_right - half).abs() <= tol
                    && variation_norm(&cand.sub(&mid)) >= SEPARATION
                {
                    return Ok(Some(k.exp_map(&cand)?));
                }
            }
        }
    }
    Ok(None)
}
