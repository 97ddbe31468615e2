//! Polyhedral feasibility kit: strict-interior witnesses with maximized
//! margin, and affine-dimension tests for faces. Backed by a small dense
//! simplex solver; every returned witness is re-validated against the
//! system it came from before being handed out.

mod simplex;

use simplex::{solve, LpOutcome, LpProblem, Rel};

/// Tolerance below which a maximized margin counts as "no interior".
pub const DEFAULT_MARGIN_TOL: f64 = 1e-7;
/// Witnesses must re-satisfy every row within this bound.
const VALIDATION_TOL: f64 = 1e-9;
/// Extent below which a face direction counts as degenerate.
const DIMENSION_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("linear program unbounded; the system is missing its domain box rows")]
    Unbounded,
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("witness validation failed: {0}")]
    Validation(String),
}

/// One row `<a, x> <= b`, or `<a, x> < b` when `strict`.
#[derive(Debug, Clone)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
    pub strict: bool,
}

/// Conjunction of halfspaces describing a polyhedron (plus, by convention,
/// the strict rows whose slack is to be maximized).
#[derive(Debug, Clone, Default)]
pub struct HalfspaceSystem {
    pub rows: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, a: Vec<f64>, b: f64, strict: bool) {
        debug_assert!(a.iter().all(|v| v.is_finite()) && b.is_finite());
        self.rows.push(Halfspace { a, b, strict });
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.a.len())
    }
}

/// Strictly feasible point together with the slack it achieves on every
/// strict row.
#[derive(Debug, Clone)]
pub struct FeasibilityWitness {
    pub point: Vec<f64>,
    pub margin: f64,
}

/// Finds a point maximizing the minimum slack `t` over the strict rows of
/// `sys`, subject to the non-strict rows, the given equalities, and the
/// strict rows themselves. Returns `None` iff the optimal `t` is at most
/// `margin_tol` (empty or lower-dimensional interior) or the system is
/// infeasible.
///
/// The system must be bounded (callers include the domain box rows); an
/// unbounded program is reported as an error.
pub fn strict_feasible(
    sys: &HalfspaceSystem,
    equalities: &[(Vec<f64>, f64)],
    margin_tol: f64,
) -> Result<Option<FeasibilityWitness>, GeometryError> {
    let d = sys.dim();
    if d == 0 {
        return Err(GeometryError::Solver("empty system".into()));
    }
    if !sys.rows.iter().any(|r| r.strict) {
        return Err(GeometryError::Solver(
            "system has no strict rows to maximize a margin over".into(),
        ));
    }
    // Variables: y = (x_1..x_d, t); maximize t.
    let mut rows = Vec::with_capacity(sys.rows.len() + equalities.len());
    for r in &sys.rows {
        let mut coeffs = r.a.clone();
        coeffs.push(if r.strict { 1.0 } else { 0.0 });
        rows.push((coeffs, Rel::Le, r.b));
    }
    for (a, b) in equalities {
        let mut coeffs = a.clone();
        coeffs.push(0.0);
        rows.push((coeffs, Rel::Eq, *b));
    }
    let mut objective = vec![0.0; d + 1];
    objective[d] = 1.0;
    match solve(&LpProblem { vars: d + 1, objective, rows }) {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(GeometryError::Unbounded),
        LpOutcome::Optimal { y, objective } => {
            if objective <= margin_tol {
                return Ok(None);
            }
            let point = y[..d].to_vec();
            validate_witness(sys, equalities, &point, objective)?;
            Ok(Some(FeasibilityWitness { point, margin: objective }))
        }
    }
}

/// Re-substitutes a solver result into the original system. Mandatory after
/// every solve: a tableau bug must surface here, not downstream.
fn validate_witness(
    sys: &HalfspaceSystem,
    equalities: &[(Vec<f64>, f64)],
    point: &[f64],
    margin: f64,
) -> Result<(), GeometryError> {
    for (i, r) in sys.rows.iter().enumerate() {
        let lhs = dot(&r.a, point);
        let bound = if r.strict { r.b - margin } else { r.b };
        if lhs > bound + VALIDATION_TOL {
            return Err(GeometryError::Validation(format!(
                "row {i}: {lhs} > {bound} (strict={}, margin={margin})",
                r.strict
            )));
        }
    }
    for (i, (a, b)) in equalities.iter().enumerate() {
        let lhs = dot(a, point);
        if (lhs - b).abs() > VALIDATION_TOL {
            return Err(GeometryError::Validation(format!("equality {i}: {lhs} != {b}")));
        }
    }
    Ok(())
}

/// True iff the closed solution set of `sys` (strict rows relaxed to
/// non-strict) intersected with the equalities contains `k + 1` affinely
/// independent points, i.e. has affine dimension at least `k`.
///
/// Directions are discovered by maximizing/minimizing objectives orthogonal
/// to the affine hull found so far; if every such objective has zero
/// extent, the set lies in the current hull and the dimension is exact.
pub fn face_dimension_at_least(
    sys: &HalfspaceSystem,
    equalities: &[(Vec<f64>, f64)],
    k: usize,
) -> Result<bool, GeometryError> {
    let d = sys.dim();
    debug_assert!(k <= d);
    let base = match solve_closed(sys, equalities, &vec![0.0; d])? {
        Some(x) => x,
        None => return Ok(false),
    };
    if k == 0 {
        return Ok(true);
    }
    let mut hull: Vec<Vec<f64>> = Vec::new(); // orthonormal directions
    loop {
        if hull.len() >= k {
            return Ok(true);
        }
        let mut grew = false;
        for i in 0..d {
            let mut c = vec![0.0; d];
            c[i] = 1.0;
            orthogonalize(&mut c, &hull);
            if norm(&c) < 1e-12 {
                continue;
            }
            normalize(&mut c);
            let hi = solve_closed(sys, equalities, &c)?
                .ok_or_else(|| GeometryError::Solver("feasible set vanished".into()))?;
            let neg: Vec<f64> = c.iter().map(|v| -v).collect();
            let lo = solve_closed(sys, equalities, &neg)?
                .ok_or_else(|| GeometryError::Solver("feasible set vanished".into()))?;
            let extent = dot(&c, &hi) - dot(&c, &lo);
            if extent > DIMENSION_TOL {
                let far = if (dot(&c, &hi) - dot(&c, &base)).abs()
                    >= (dot(&c, &lo) - dot(&c, &base)).abs()
                {
                    hi
                } else {
                    lo
                };
                let mut dir: Vec<f64> = far.iter().zip(&base).map(|(a, b)| a - b).collect();
                orthogonalize(&mut dir, &hull);
                if norm(&dir) > 1e-12 {
                    normalize(&mut dir);
                    hull.push(dir);
                    grew = true;
                    break;
                }
            }
        }
        if !grew {
            return Ok(hull.len() >= k);
        }
    }
}

fn solve_closed(
    sys: &HalfspaceSystem,
    equalities: &[(Vec<f64>, f64)],
    objective: &[f64],
) -> Result<Option<Vec<f64>>, GeometryError> {
    let mut rows = Vec::with_capacity(sys.rows.len() + equalities.len());
    for r in &sys.rows {
        rows.push((r.a.clone(), Rel::Le, r.b));
    }
    for (a, b) in equalities {
        rows.push((a.clone(), Rel::Eq, *b));
    }
    match solve(&LpProblem { vars: sys.dim(), objective: objective.to_vec(), rows }) {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(GeometryError::Unbounded),
        LpOutcome::Optimal { y, .. } => Ok(Some(y)),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    for v in a {
        *v /= n;
    }
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let proj = dot(v, b);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= proj * bi;
        }
    }
}

/// Rank (with tolerance) of a set of row vectors; used to decide whether a
/// set of switching hyperplanes spans a single hyperplane.
pub fn row_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        orthogonalize(&mut v, &basis);
        if norm(&v) > tol {
            normalize(&mut v);
            basis.push(v);
        }
    }
    basis.len()
}
