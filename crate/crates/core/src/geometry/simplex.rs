//! Small dense two-phase simplex with Bland's rule.
//!
//! Solves `maximize c.y  s.t.  A y <= b, E y = f` with free variables `y`
//! (internally split into positive parts). Problem sizes in this crate are
//! at most a few hundred rows and ~20 variables, so a dense tableau with
//! anti-cycling pivoting is simple and reliable.

const PIVOT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { y: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

pub struct LpProblem {
    /// Number of free variables.
    pub vars: usize,
    /// Objective to maximize.
    pub objective: Vec<f64>,
    /// Rows (coefficients, relation, rhs).
    pub rows: Vec<(Vec<f64>, Rel, f64)>,
}

struct Tableau {
    /// rows x cols matrix, one extra rhs column at the end.
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns that may never re-enter the basis (artificials).
    banned: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.a[row][col];
        debug_assert!(piv.abs() > PIVOT_EPS);
        let inv = 1.0 / piv;
        for v in self.a[row].iter_mut() {
            *v *= inv;
        }
        self.rhs[row] *= inv;
        for r in 0..self.a.len() {
            if r == row {
                continue;
            }
            let factor = self.a[r][col];
            if factor == 0.0 {
                continue;
            }
            for c in 0..self.cols {
                self.a[r][c] -= factor * self.a[row][c];
            }
            self.rhs[r] -= factor * self.rhs[row];
        }
        self.basis[row] = col;
    }

    /// Maximizes `obj` over the current basic feasible solution using
    /// Bland's rule (lowest eligible index), which cannot cycle.
    /// Returns false when the objective is unbounded above.
    fn optimize(&mut self, obj: &[f64]) -> bool {
        loop {
            // Reduced costs z_j - c_j relative to the current basis.
            let mut entering = None;
            for j in 0..self.cols {
                if self.banned[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut zj = 0.0;
                for (r, &bi) in self.basis.iter().enumerate() {
                    zj += obj[bi] * self.a[r][j];
                }
                if obj[j] - zj > PIVOT_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else { return true };
            let mut leaving: Option<usize> = None;
            let mut best = f64::INFINITY;
            for r in 0..self.a.len() {
                if self.a[r][col] > PIVOT_EPS {
                    let ratio = self.rhs[r] / self.a[r][col];
                    let better = ratio < best - PIVOT_EPS
                        || (ratio < best + PIVOT_EPS
                            && leaving.is_none_or(|l| self.basis[r] < self.basis[l]));
                    if better {
                        best = ratio;
                        leaving = Some(r);
                    }
                }
            }
            let Some(row) = leaving else { return false };
            self.pivot(row, col);
        }
    }

    fn objective_value(&self, obj: &[f64]) -> f64 {
        self.basis.iter().enumerate().map(|(r, &j)| obj[j] * self.rhs[r]).sum()
    }
}

pub fn solve(p: &LpProblem) -> LpOutcome {
    let n = p.vars;
    let m = p.rows.len();
    // Free variables split: y_i = v_{2i} - v_{2i+1}.
    let split = 2 * n;
    let n_slack = p.rows.iter().filter(|r| r.1 == Rel::Le).count();
    let cols = split + n_slack + m; // artificials reserved for every row
    let mut a = vec![vec![0.0; cols]; m];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![usize::MAX; m];
    let mut banned = vec![false; cols];
    let mut n_art = 0;
    let mut slack_at = split;

    for (r, (coeffs, rel, b)) in p.rows.iter().enumerate() {
        debug_assert_eq!(coeffs.len(), n);
        let flip = *b < 0.0;
        let sgn = if flip { -1.0 } else { 1.0 };
        for (i, &c) in coeffs.iter().enumerate() {
            a[r][2 * i] = sgn * c;
            a[r][2 * i + 1] = -sgn * c;
        }
        rhs[r] = sgn * b;
        match rel {
            Rel::Le => {
                a[r][slack_at] = sgn;
                if !flip {
                    basis[r] = slack_at;
                }
                slack_at += 1;
            }
            Rel::Eq => {}
        }
        if basis[r] == usize::MAX {
            // Needs an artificial variable to start feasible.
            let col = split + n_slack + n_art;
            a[r][col] = 1.0;
            basis[r] = col;
            banned[col] = true; // re-entry forbidden after phase 1
            n_art += 1;
        }
    }

    let mut t = Tableau { a, rhs, basis, cols, banned };

    // Phase 1: drive artificials to zero.
    let has_artificials = t.basis.iter().any(|&j| j >= split + n_slack);
    if has_artificials {
        let mut phase1 = vec![0.0; cols];
        for v in phase1.iter_mut().skip(split + n_slack).take(n_art) {
            *v = -1.0;
        }
        // Artificials must be allowed in the basis during phase 1 but are
        // never entering candidates (they start basic and only leave).
        t.optimize(&phase1);
        if t.objective_value(&phase1) < -1e-7 {
            return LpOutcome::Infeasible;
        }
        // Pivot any remaining zero-level artificials out of the basis.
        for r in 0..t.a.len() {
            if t.basis[r] >= split + n_slack {
                if let Some(col) = (0..split + n_slack).find(|&j| t.a[r][j].abs() > PIVOT_EPS) {
                    t.pivot(r, col);
                }
                // A fully zero row is redundant; the artificial stays basic
                // at level zero, which is harmless since it cannot grow.
            }
        }
    }

    // Phase 2: the real objective on the split variables.
    let mut obj = vec![0.0; cols];
    for i in 0..n {
        obj[2 * i] = p.objective[i];
        obj[2 * i + 1] = -p.objective[i];
    }
    if !t.optimize(&obj) {
        return LpOutcome::Unbounded;
    }

    let mut y = vec![0.0; n];
    for (r, &j) in t.basis.iter().enumerate() {
        if j < split {
            let i = j / 2;
            if j % 2 == 0 {
                y[i] += t.rhs[r];
            } else {
                y[i] -= t.rhs[r];
            }
        }
    }
    let objective = p.objective.iter().zip(&y).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal { y, objective }
}
