//! Exact rational simplex on dense-row / sparse-column problems.
//!
//! Minimizes `c'x` subject to `Ax = b`, `x >= 0`, starting from a caller
//! supplied feasible basis. Pivoting uses the most-negative reduced cost
//! with a permanent switch to Bland's rule after a fixed number of
//! iterations, which guarantees termination on degenerate problems. All
//! arithmetic is exact.

use crate::error::Error;
use crate::scalar::Scalar;
use crate::Result;

/// One structural column: sparse `(row, value)` entries.
pub type SparseCol = Vec<(usize, Scalar)>;

pub struct SimplexProblem {
    /// Objective coefficients, one per column.
    pub objective: Vec<Scalar>,
    /// Constraint columns (sparse), each over `rhs.len()` rows.
    pub columns: Vec<SparseCol>,
    /// Right-hand side.
    pub rhs: Vec<Scalar>,
}

pub struct SimplexSolution {
    pub value: Scalar,
    /// Primal values per column.
    pub primal: Vec<Scalar>,
    /// Simplex multipliers (dual values), one per row.
    pub duals: Vec<Scalar>,
    pub basis: Vec<usize>,
    pub iterations: usize,
}

const BLAND_SWITCH: usize = 500;

pub fn solve_with_basis(problem: &SimplexProblem, basis: Vec<usize>) -> Result<SimplexSolution> {
    let m = problem.rhs.len();
    let n = problem.columns.len();
    if basis.len() != m {
        return Err(Error::Internal(format!(
            "basis has {} columns for {} rows",
            basis.len(),
            m
        )));
    }
    if problem.objective.len() != n {
        return Err(Error::Internal("objective/column length mismatch".into()));
    }

    let mut state = State::new(problem, basis)?;
    let mut iterations = 0usize;
    loop {
        let bland = iterations >= BLAND_SWITCH;
        let entering = match state.price(bland) {
            Some(j) => j,
            None => break,
        };
        state.pivot(entering, bland)?;
        iterations += 1;
    }

    let mut primal = vec![Scalar::zero(); n];
    for (i, &j) in state.basis.iter().enumerate() {
        primal[j] = state.x_b[i].clone();
    }
    let mut value = Scalar::zero();
    for (j, x) in primal.iter().enumerate() {
        if !x.is_zero() {
            value = value + &problem.objective[j] * x;
        }
    }
    let duals = state.multipliers();
    Ok(SimplexSolution {
        value,
        primal,
        duals,
        basis: state.basis,
        iterations,
    })
}

struct State<'a> {
    problem: &'a SimplexProblem,
    basis: Vec<usize>,
    /// Dense basis inverse, row major.
    b_inv: Vec<Vec<Scalar>>,
    /// Current basic solution `B^-1 b`.
    x_b: Vec<Scalar>,
    in_basis: Vec<bool>,
}

impl<'a> State<'a> {
    fn new(problem: &'a SimplexProblem, basis: Vec<usize>) -> Result<Self> {
        let m = problem.rhs.len();
        // Gauss-Jordan inversion of the basis matrix.
        let mut mat: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); m]; m];
        for (bi, &j) in basis.iter().enumerate() {
            for (row, val) in &problem.columns[j] {
                mat[*row][bi] = val.clone();
            }
        }
        let mut inv: Vec<Vec<Scalar>> = (0..m)
            .map(|i| {
                let mut row = vec![Scalar::zero(); m];
                row[i] = Scalar::one();
                row
            })
            .collect();
        for col in 0..m {
            let pivot_row = (col..m)
                .find(|&r| !mat[r][col].is_zero())
                .ok_or_else(|| Error::Internal("singular starting basis".into()))?;
            mat.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let p = mat[col][col].clone();
            let p_inv = p.recip();
            for v in mat[col].iter_mut() {
                *v = &*v * &p_inv;
            }
            for v in inv[col].iter_mut() {
                *v = &*v * &p_inv;
            }
            for r in 0..m {
                if r != col && !mat[r][col].is_zero() {
                    let factor = mat[r][col].clone();
                    for c in 0..m {
                        let d = &mat[col][c] * &factor;
                        mat[r][c] = &mat[r][c] - &d;
                        let d = &inv[col][c] * &factor;
                        inv[r][c] = &inv[r][c] - &d;
                    }
                }
            }
        }
        let x_b: Vec<Scalar> = (0..m)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..m {
                    if !inv[i][k].is_zero() && !problem.rhs[k].is_zero() {
                        acc = acc + &inv[i][k] * &problem.rhs[k];
                    }
                }
                acc
            })
            .collect();
        if x_b.iter().any(|x| x.is_negative()) {
            return Err(Error::Internal("starting basis is infeasible".into()));
        }
        let mut in_basis = vec![false; problem.columns.len()];
        for &j in &basis {
            in_basis[j] = true;
        }
        Ok(State {
            problem,
            basis,
            b_inv: inv,
            x_b,
            in_basis,
        })
    }

    fn multipliers(&self) -> Vec<Scalar> {
        let m = self.x_b.len();
        (0..m)
            .map(|k| {
                let mut acc = Scalar::zero();
                for (i, &j) in self.basis.iter().enumerate() {
                    let c = &self.problem.objective[j];
                    if !c.is_zero() && !self.b_inv[i][k].is_zero() {
                        acc = acc + c * &self.b_inv[i][k];
                    }
                }
                acc
            })
            .collect()
    }

    /// Entering column with negative reduced cost, or `None` at optimality.
    fn price(&self, bland: bool) -> Option<usize> {
        let duals = self.multipliers();
        let mut best: Option<(usize, Scalar)> = None;
        for (j, col) in self.problem.columns.iter().enumerate() {
            if self.in_basis[j] {
                continue;
            }
            let mut reduced = self.problem.objective[j].clone();
            for (row, val) in col {
                if !duals[*row].is_zero() {
                    reduced = reduced - &duals[*row] * val;
                }
            }
            if reduced.is_negative() {
                if bland {
                    return Some(j);
                }
                match &best {
                    Some((_, r)) if *r <= reduced => {}
                    _ => best = Some((j, reduced)),
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn pivot(&mut self, entering: usize, bland: bool) -> Result<()> {
        let m = self.x_b.len();
        // Direction d = B^-1 A_j.
        let col = &self.problem.columns[entering];
        let d: Vec<Scalar> = (0..m)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (row, val) in col {
                    if !self.b_inv[i][*row].is_zero() {
                        acc = acc + &self.b_inv[i][*row] * val;
                    }
                }
                acc
            })
            .collect();
        // Ratio test.
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if d[i].is_positive() {
                let ratio = &self.x_b[i] / &d[i];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        if ratio < *lr {
                            true
                        } else if ratio == *lr {
                            if bland {
                                self.basis[i] < self.basis[*li]
                            } else {
                                // Deterministic tie-break outside Bland mode too.
                                self.basis[i] < self.basis[*li]
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (leave_row, _) = leave.ok_or_else(|| {
            Error::Internal("unbounded linear program (cannot happen for gauge problems)".into())
        })?;

        // Pivot: normalize row `leave_row`, eliminate elsewhere.
        let pivot = d[leave_row].clone();
        let pivot_inv = pivot.recip();
        for v in self.b_inv[leave_row].iter_mut() {
            *v = &*v * &pivot_inv;
        }
        self.x_b[leave_row] = &self.x_b[leave_row] * &pivot_inv;
        for i in 0..m {
            if i != leave_row && !d[i].is_zero() {
                let factor = d[i].clone();
                let (pivot_row, target_row) = if i < leave_row {
                    let (a, b) = self.b_inv.split_at_mut(leave_row);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = self.b_inv.split_at_mut(i);
                    (&a[leave_row], &mut b[0])
                };
                for (t, p) in target_row.iter_mut().zip(pivot_row.iter()) {
                    if !p.is_zero() {
                        *t = &*t - &(p * &factor);
                    }
                }
                let delta = &self.x_b[leave_row] * &factor;
                self.x_b[i] = &self.x_b[i] - &delta;
            }
        }
        self.in_basis[self.basis[leave_row]] = false;
        self.in_basis[entering] = true;
        self.basis[leave_row] = entering;
        Ok(())
    }
}
