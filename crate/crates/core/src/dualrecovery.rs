//! Dual-space recovery of simplex isometries.
//!
//! The dual of the quotient space (functions modulo constants, variation
//! norm) is the space of signed measures annihilating constants, with half
//! the total variation norm. The extreme points of its unit ball are exactly
//! the differences of two point masses, and the maximal equilateral families
//! at mutual distance one are the bundles sharing a source (or a sink). A
//! linear isometry of the quotient space therefore permutes those bundles,
//! which pins down its relabelling and sign; together with the image of the
//! constant function this reconstructs the full gauge/relabelling/sign triple
//! of a black-box isometry of the simplex geometry.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{GeomError, Result};
use crate::linalg::{self, check_dim};
use crate::sample;
use crate::simplexgeom::{
    log_map, variation_norm, DeltaPoint, FiniteK, QuotientFunction, SimplexIsometry,
};

/// Tolerance for matching adjoint images to signed Dirac differences.
pub const PATTERN_TOL: f64 = 1e-9;
/// Tolerance for the affinity probe in Log coordinates.
pub const AFFINE_TOL: f64 = 1e-7;
/// Tolerance for the recovered isometry reproducing its oracle.
pub const REPRODUCE_TOL: f64 = 1e-8;

/// A signed measure on a finite point set, stored by its point weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedMeasure {
    pub weights: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    /// The difference of point masses `delta_s - delta_t`.
    pub fn dirac_diff(n: usize, s: usize, t: usize) -> Self {
        let mut w = vec![0.0; n];
        w[s] += 1.0;
        w[t] -= 1.0;
        Self { weights: w }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Integration pairing with a function.
    pub fn pair(&self, f: &[f64]) -> f64 {
        linalg::dot(&self.weights, f)
    }
}

/// Positive and negative parts: disjointly supported positive measures with
/// `m = plus - minus`.
pub fn hahn_jordan(m: &SignedMeasure) -> (SignedMeasure, SignedMeasure) {
    let plus = m.weights.iter().map(|&w| w.max(0.0)).collect();
    let minus = m.weights.iter().map(|&w| (-w).max(0.0)).collect();
    (SignedMeasure::new(plus), SignedMeasure::new(minus))
}

/// Total variation norm: the sum of absolute point weights.
pub fn tv_norm(m: &SignedMeasure) -> f64 {
    m.weights.iter().map(|w| w.abs()).sum()
}

/// Half total variation distance, the dual-ball metric.
pub fn dual_dist(a: &SignedMeasure, b: &SignedMeasure) -> f64 {
    0.5 * a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

/// All extreme points of the dual unit ball: the `n (n - 1)` signed Dirac
/// differences, in lexicographic `(s, t)` order.
pub fn extreme_points(n: usize) -> Vec<SignedMeasure> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for s in 0..n {
        for t in 0..n {
            if s != t {
                out.push(SignedMeasure::dirac_diff(n, s, t));
            }
        }
    }
    out
}

/// Outcome of the equilateral test on a family of dual extreme points.
#[derive(Clone, Debug, PartialEq)]
pub enum EquilateralWitness {
    /// All pairwise dual distances are one; the family sits inside a single
    /// source bundle (`sign = 1`) or sink bundle (`sign = -1`).
    Equilateral { source: usize, sign: i32 },
    /// A pair at dual distance two, with its indices.
    NotEquilateral { i: usize, j: usize, distance: f64 },
}

/// Checks the maximal-equilateral structure of a family of extreme points.
pub fn equilateral_witness(family: &[SignedMeasure]) -> Result<EquilateralWitness> {
    if family.is_empty() {
        return Err(GeomError::MalformedInput {
            detail: "empty family".into(),
        });
    }
    let mut pairs = Vec::with_capacity(family.len());
    for m in family {
        pairs.push(match_dirac_pattern(&m.weights)?);
    }

    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            if pairs[i] == pairs[j] {
                continue;
            }
            let d = dual_dist(&family[i], &family[j]);
            if (d - 1.0).abs() > 1e-9 {
                return Ok(EquilateralWitness::NotEquilateral { i, j, distance: d });
            }
        }
    }

    // All pairwise distances are one; a common source or a common sink must
    // exist (both hold for a singleton, source wins by convention).
    let (s0, t0) = pairs[0];
    if pairs.iter().all(|&(s, _)| s == s0) {
        return Ok(EquilateralWitness::Equilateral { source: s0, sign: 1 });
    }
    if pairs.iter().all(|&(_, t)| t == t0) {
        return Ok(EquilateralWitness::Equilateral {
            source: t0,
            sign: -1,
        });
    }
    Err(GeomError::InconsistentSign)
}

/// Matches a weight vector against `delta_s - delta_t`, returning `(s, t)`.
fn match_dirac_pattern(w: &[f64]) -> Result<(usize, usize)> {
    let mut plus = None;
    let mut minus = None;
    for (i, &v) in w.iter().enumerate() {
        if (v - 1.0).abs() <= PATTERN_TOL {
            if plus.replace(i).is_some() {
                return Err(GeomError::MalformedInput {
                    detail: "two +1 entries".into(),
                });
            }
        } else if (v + 1.0).abs() <= PATTERN_TOL {
            if minus.replace(i).is_some() {
                return Err(GeomError::MalformedInput {
                    detail: "two -1 entries".into(),
                });
            }
        } else if v.abs() > PATTERN_TOL {
            return Err(GeomError::MalformedInput {
                detail: format!("entry {i} is {v:.3e}, not in {{-1, 0, 1}}"),
            });
        }
    }
    match (plus, minus) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => Err(GeomError::MalformedInput {
            detail: "missing +1 or -1 entry".into(),
        }),
    }
}

/// Adjoint action on the annihilator of constants: transpose, then project
/// back to sum-zero weights. Pairing against sum-zero functions is unchanged
/// by the projection.
pub fn adjoint_apply(t: &DMatrix<f64>, m: &SignedMeasure) -> SignedMeasure {
    let n = m.len();
    let mut w = vec![0.0; n];
    for j in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            acc += t[(i, j)] * m.weights[i];
        }
        w[j] = acc;
    }
    let mean: f64 = w.iter().sum::<f64>() / n as f64;
    SignedMeasure::new(w.iter().map(|v| v - mean).collect())
}

/// Recovers the sign and relabelling of a linear variation-norm isometry
/// given as a matrix acting on sum-zero representatives.
///
/// The adjoint must map every signed Dirac difference to a signed Dirac
/// difference; the common-source structure of each bundle determines the
/// relabelling, and a single global sign applies to every bundle.
pub fn recover_eps_theta(t: &DMatrix<f64>, n: usize) -> Result<(i32, Vec<usize>)> {
    check_dim(n, t.nrows())?;
    check_dim(n, t.ncols())?;
    if n < 2 {
        return Ok((1, vec![0; n]));
    }

    // Image pattern of every delta_s - delta_t under the adjoint.
    let mut image = vec![vec![(0usize, 0usize); n]; n];
    for s in 0..n {
        for u in 0..n {
            if s == u {
                continue;
            }
            let m = adjoint_apply(t, &SignedMeasure::dirac_diff(n, s, u));
            image[s][u] = match_dirac_pattern(&m.weights).map_err(|e| {
                GeomError::NotIsometricIsomorphism {
                    detail: format!("adjoint image of ({s}, {u}): {e}"),
                }
            })?;
        }
    }

    // Global sign from one bundle: the images of {delta_0 - delta_u}_u share
    // either their +1 position (sign +1) or their -1 position (sign -1).
    let probe: Vec<(usize, usize)> = (1..n).map(|u| image[0][u]).collect();
    let eps = if probe.iter().all(|&(p, _)| p == probe[0].0) {
        1
    } else if probe.iter().all(|&(_, q)| q == probe[0].1) {
        -1
    } else {
        return Err(GeomError::InconsistentSign);
    };

    let mut theta = vec![usize::MAX; n];
    for s in 0..n {
        let bundle: Vec<(usize, usize)> = (0..n).filter(|&u| u != s).map(|u| image[s][u]).collect();
        let common = if eps == 1 {
            let p = bundle[0].0;
            if !bundle.iter().all(|&(a, _)| a == p) {
                return Err(GeomError::InconsistentSign);
            }
            p
        } else {
            let q = bundle[0].1;
            if !bundle.iter().all(|&(_, b)| b == q) {
                return Err(GeomError::InconsistentSign);
            }
            q
        };
        theta[s] = common;
    }

    // theta must be a bijection.
    let mut seen = vec![false; n];
    for &v in &theta {
        if v == usize::MAX || seen[v] {
            return Err(GeomError::NotIsometricIsomorphism {
                detail: "recovered relabelling is not a bijection".into(),
            });
        }
        seen[v] = true;
    }

    // Cross-check on a basis: T e_j (mod constants) must equal the
    // sign-twisted relabelling action.
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let ebar = QuotientFunction::new(e);
        let via_t = apply_matrix_quotient(t, &ebar);
        let direct = crate::simplexgeom::quotient_linear_isometry_apply(eps, &theta, &ebar);
        let gap = variation_norm(&via_t.sub(&direct));
        if gap > 1e-7 {
            return Err(GeomError::NotIsometricIsomorphism {
                detail: format!("basis reproduction gap {gap:.3e}"),
            });
        }
    }
    Ok((eps, theta))
}

fn apply_matrix_quotient(t: &DMatrix<f64>, q: &QuotientFunction) -> QuotientFunction {
    QuotientFunction::new(linalg::apply_matrix(t, q.rep()))
}

/// A black-box self map of the weighted simplex.
pub trait DeltaOracle {
    fn eval(&self, p: &DeltaPoint) -> Result<DeltaPoint>;
}

impl<F> DeltaOracle for F
where
    F: Fn(&DeltaPoint) -> Result<DeltaPoint>,
{
    fn eval(&self, p: &DeltaPoint) -> Result<DeltaPoint> {
        self(p)
    }
}

/// An explicit isometry used as a black box (for self-tests and the CLI).
pub struct IsometryBlackBox<'a> {
    pub k: &'a FiniteK,
    pub iso: SimplexIsometry,
}

impl DeltaOracle for IsometryBlackBox<'_> {
    fn eval(&self, p: &DeltaPoint) -> Result<DeltaPoint> {
        crate::simplexgeom::isometry_apply(self.k, &self.iso, p)
    }
}

/// Recovers the full gauge/relabelling/sign triple of a black-box surjective
/// isometry of the simplex geometry.
///
/// In Log coordinates the map must be affine (checked; this is what makes
/// the operation an isometry detector). Subtracting the image of the origin
/// leaves the linear part, whose matrix on a basis feeds
/// [`recover_eps_theta`]; the gauge is the image of the constant function.
/// The recovered triple is validated against the oracle on fresh samples.
pub fn recover_simplex_isometry(k: &FiniteK, h: &dyn DeltaOracle) -> Result<SimplexIsometry> {
    let n = k.len();

    // Isometry pre-check on sampled pairs.
    let mut rng = sample::rng(0xd0a1);
    for _ in 0..8 {
        let p = sample::random_delta_point(k, &mut rng);
        let q = sample::random_delta_point(k, &mut rng);
        let d = k.dist(&p, &q);
        let d_img = k.dist(&h.eval(&p)?, &h.eval(&q)?);
        if (d - d_img).abs() > REPRODUCE_TOL * (1.0 + d) {
            return Err(GeomError::NotIsometry {
                defect: (d - d_img).abs(),
            });
        }
    }

    // Transport to Log coordinates and split off the affine offset.
    let eval_log = |q: &QuotientFunction| -> Result<QuotientFunction> {
        Ok(log_map(&h.eval(&k.exp_map(q)?)?))
    };
    let origin_image = eval_log(&QuotientFunction::zero(n))?;
    let linear = |q: &QuotientFunction| -> Result<QuotientFunction> {
        Ok(eval_log(q)?.sub(&origin_image))
    };

    // Affinity probe on random combinations.
    for _ in 0..8 {
        let q1 = QuotientFunction::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
        let q2 = QuotientFunction::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
        let (a, b) = (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let lhs = linear(&q1.scale(a).add(&q2.scale(b)))?;
        let rhs = linear(&q1)?.scale(a).add(&linear(&q2)?.scale(b));
        let resid = variation_norm(&lhs.sub(&rhs));
        if resid > AFFINE_TOL {
            return Err(GeomError::NotAffineInLog { residual: resid });
        }
    }

    // Matrix of the linear part on the projected coordinate basis.
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        columns.push(linear(&QuotientFunction::new(e))?.rep().to_vec());
    }
    let t = linalg::matrix_from_columns(&columns);
    let (eps, theta) = recover_eps_theta(&t, n)?;

    // The gauge is the image of the constant function, already canonical.
    let g = h.eval(&k.constant())?.into_values();
    let recovered = SimplexIsometry::new(k, eps, theta, g)?;

    // Fresh-sample reproduction check.
    for _ in 0..10 {
        let p = sample::random_delta_point(k, &mut rng);
        let expected = h.eval(&p)?;
        let got = crate::simplexgeom::isometry_apply(k, &recovered, &p)?;
        let gap = k.dist(&expected, &got);
        if gap > REPRODUCE_TOL {
            return Err(GeomError::OracleInconsistent { residual: gap });
        }
    }
    Ok(recovered)
}
