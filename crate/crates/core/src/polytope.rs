//! Extreme-ray and vertex enumeration for polyhedral sets via the double
//! description method.
//!
//! The enumerator maintains a generator description of the cone defined by the
//! halfspaces processed so far. Each new halfspace splits the current rays by
//! sign; adjacent (+,-) pairs combine into new boundary rays. Adjacency is the
//! usual combinatorial test on active constraint sets.
//!
//! Everything here is desk-scale: at most 128 constraints, dimensions small
//! enough that the ray population stays in the hundreds.

use crate::error::{GeomError, Result};
use crate::linalg::{self, norm2};

const SIGN_TOL: f64 = 1e-10;
const MAX_CONSTRAINTS: usize = 128;

#[derive(Clone)]
struct Ray {
    dir: Vec<f64>,
    /// Active (tight) constraints among those processed so far.
    active: u128,
}

/// Extreme rays of the pointed, full-dimensional cone `{x : rows[i] . x >= 0}`.
///
/// Rays are returned with unit Euclidean norm, in a deterministic order.
/// Fails if the rows do not have full column rank (the cone then contains a
/// line, or the input is degenerate).
pub fn extreme_rays(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let dim = rows
        .first()
        .ok_or_else(|| GeomError::InvalidCone("no facet rows given".into()))?
        .len();
    if rows.len() > MAX_CONSTRAINTS {
        return Err(GeomError::InvalidParameter(format!(
            "too many constraints for enumeration ({} > {MAX_CONSTRAINTS})",
            rows.len()
        )));
    }
    for r in rows {
        if r.len() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
    }

    // Normalized working copy; zero rows are rejected outright.
    let mut work: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let n = norm2(r);
        if n < 1e-300 {
            return Err(GeomError::InvalidCone("zero facet functional".into()));
        }
        work.push(linalg::scale(r, 1.0 / n));
    }

    let initial = independent_subset(&work, dim)?;
    let m0 = linalg::matrix_from_rows(&initial.iter().map(|&i| work[i].clone()).collect::<Vec<_>>());
    let inv = m0
        .try_inverse()
        .ok_or_else(|| GeomError::InvalidCone("initial facet subset is singular".into()))?;

    // Columns of the inverse span the initial simplicial cone; column j is
    // tight on every initial row except row j.
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<f64> = (0..dim).map(|i| inv[(i, j)]).collect();
            let n = norm2(&col);
            let mut active: u128 = 0;
            for (slot, &row_idx) in initial.iter().enumerate() {
                if slot != j {
                    active |= 1u128 << row_idx;
                }
            }
            Ray {
                dir: linalg::scale(&col, 1.0 / n),
                active,
            }
        })
        .collect();

    let mut processed: u128 = initial.iter().fold(0u128, |m, &i| m | (1u128 << i));

    for (idx, row) in work.iter().enumerate() {
        if processed & (1u128 << idx) != 0 {
            continue;
        }
        insert_halfspace(&mut rays, row, idx, processed);
        processed |= 1u128 << idx;
        if rays.is_empty() {
            return Err(GeomError::InvalidCone("cone has empty interior".into()));
        }
    }

    let mut out: Vec<Vec<f64>> = rays.into_iter().map(|r| r.dir).collect();
    dedupe(&mut out);
    Ok(out)
}

/// Vertices of the bounded polytope `{x : a[i] . x <= b[i]}`.
///
/// Works on the homogenization `{(t, x) : t >= 0, b t - A x >= 0}`; a ray with
/// vanishing first coordinate witnesses an unbounded polyhedron and is
/// reported as an error.
pub fn enumerate_vertices(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<Vec<f64>>> {
    if a.len() != b.len() {
        return Err(GeomError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let dim = a
        .first()
        .ok_or_else(|| GeomError::InvalidParameter("no inequalities given".into()))?
        .len();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(a.len() + 1);
    let mut t_row = vec![0.0; dim + 1];
    t_row[0] = 1.0;
    rows.push(t_row);
    for (ai, &bi) in a.iter().zip(b) {
        let mut r = Vec::with_capacity(dim + 1);
        r.push(bi);
        r.extend(ai.iter().map(|v| -v));
        rows.push(r);
    }

    let rays = extreme_rays(&rows)?;
    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        if ray[0] <= SIGN_TOL {
            return Err(GeomError::InvalidParameter(
                "polyhedron is unbounded (recession ray found)".into(),
            ));
        }
        vertices.push(ray[1..].iter().map(|v| v / ray[0]).collect());
    }
    dedupe(&mut vertices);
    Ok(vertices)
}

/// Interior witness for the cone `{x : rows[i] . x >= 0}`: the normalized sum
/// of its extreme rays, provided every facet slack is strictly positive there.
pub fn interior_witness(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let rays = extreme_rays(rows)?;
    let dim = rows[0].len();
    let mut x = vec![0.0; dim];
    for r in &rays {
        for (xi, ri) in x.iter_mut().zip(r) {
            *xi += ri;
        }
    }
    let n = norm2(&x);
    if n < 1e-300 {
        return Err(GeomError::InvalidCone("cone has empty interior".into()));
    }
    let x = linalg::scale(&x, 1.0 / n);
    for r in rows {
        if linalg::dot(r, &x) <= SIGN_TOL * norm2(r) {
            return Err(GeomError::InvalidCone(
                "cone has empty interior (no strictly feasible point)".into(),
            ));
        }
    }
    Ok(x)
}

fn insert_halfspace(rays: &mut Vec<Ray>, row: &[f64], row_idx: usize, _processed: u128) {
    let vals: Vec<f64> = rays.iter().map(|r| linalg::dot(row, &r.dir)).collect();

    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if v > SIGN_TOL {
            pos.push(i);
        } else if v < -SIGN_TOL {
            neg.push(i);
        } else {
            zero.push(i);
        }
    }

    if neg.is_empty() {
        for &i in &zero {
            rays[i].active |= 1u128 << row_idx;
        }
        return;
    }

    let bit = 1u128 << row_idx;
    let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zero.len());
    for &i in &pos {
        next.push(rays[i].clone());
    }
    for &i in &zero {
        let mut r = rays[i].clone();
        r.active |= bit;
        next.push(r);
    }

    for &p in &pos {
        for &q in &neg {
            let common = rays[p].active & rays[q].active;
            // Combinatorial adjacency: no third ray is tight on everything
            // both p and q are tight on.
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(k, r)| k == p || k == q || (r.active & common) != common);
            if !adjacent {
                continue;
            }
            let new_dir = linalg::axpy(
                &linalg::scale(&rays[q].dir, vals[p]),
                -vals[q],
                &rays[p].dir,
            );
            let n = norm2(&new_dir);
            if n < 1e-14 {
                continue;
            }
            next.push(Ray {
                dir: linalg::scale(&new_dir, 1.0 / n),
                active: common | bit,
            });
        }
    }
    *rays = next;
}

/// Greedy row selection until `dim` linearly independent rows are found.
fn independent_subset(rows: &[Vec<f64>], dim: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        let mut w = r.clone();
        for q in &ortho {
            let c = linalg::dot(&w, q);
            w = linalg::axpy(&w, -c, q);
        }
        let n = norm2(&w);
        if n > 1e-9 {
            ortho.push(linalg::scale(&w, 1.0 / n));
            chosen.push(i);
            if chosen.len() == dim {
                return Ok(chosen);
            }
        }
    }
    Err(GeomError::InvalidCone(format!(
        "facet rows span only {} of {} dimensions (cone is not pointed)",
        chosen.len(),
        dim
    )))
}

/// Removes near-duplicate vectors; keeps first occurrences, ordered
/// lexicographically for deterministic output.
fn dedupe(vecs: &mut Vec<Vec<f64>>) {
    vecs.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.partial_cmp(y) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    vecs.dedup_by(|a, b| {
        let d = linalg::norm2(&linalg::sub(a, b));
        d < 1e-9
    });
}
