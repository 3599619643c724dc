use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

const EPS: f64 = 1e-11;

/// `min cᵀx` subject to `Ax = b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: DVector<f64>,
    pub objective: f64,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Result<Self> {
        if a.nrows() != b.len() || a.ncols() != c.len() {
            return Err(Error::Argument(format!(
                "LP shapes disagree: A {}x{}, b {}, c {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        if a.iter()
            .chain(b.iter())
            .chain(c.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::Argument("LP data must be finite".into()));
        }
        Ok(Self { a, b, c })
    }

    pub fn n_constraints(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_variables(&self) -> usize {
        self.a.ncols()
    }

    /// Two-phase tableau simplex with Bland's rule.
    pub fn solve(&self) -> Result<LpSolution> {
        let (m, n) = self.a.shape();
        let pivot_cap = 50 * (m + n).max(10);
        // Columns: n structural, m artificial, then the right-hand side.
        let width = n + m + 1;
        let mut t = DMatrix::<f64>::zeros(m, width);
        for i in 0..m {
            let sign = if self.b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[(i, j)] = sign * self.a[(i, j)];
            }
            t[(i, n + i)] = 1.0;
            t[(i, width - 1)] = sign * self.b[i];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut pivots = 0;

        let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
        run_phase(&mut t, &mut basis, &phase1, n + m, &mut pivots, pivot_cap)?;
        let infeasibility: f64 = basis
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= n)
            .map(|(i, _)| t[(i, width - 1)])
            .sum();
        let scale = 1.0 + self.b.amax();
        if infeasibility > 1e-9 * scale {
            return Err(Error::Solver(format!(
                "LP infeasible (residual {infeasibility:e})"
            )));
        }

        // Drive remaining artificials out; rows with no structural pivot are redundant.
        let mut keep = vec![true; m];
        for i in 0..m {
            if basis[i] < n {
                continue;
            }
            match (0..n).find(|&j| t[(i, j)].abs() > 1e-9) {
                Some(j) => {
                    pivot(&mut t, &mut basis, i, j);
                    pivots += 1;
                }
                None => keep[i] = false,
            }
        }
        let rows: Vec<usize> = (0..m).filter(|&i| keep[i]).collect();
        let mut t2 = DMatrix::<f64>::zeros(rows.len(), n + 1);
        let mut basis2 = Vec::with_capacity(rows.len());
        for (r, &i) in rows.iter().enumerate() {
            for j in 0..n {
                t2[(r, j)] = t[(i, j)];
            }
            t2[(r, n)] = t[(i, width - 1)];
            basis2.push(basis[i]);
        }

        let cost: Vec<f64> = self.c.iter().copied().collect();
        run_phase(&mut t2, &mut basis2, &cost, n, &mut pivots, pivot_cap)?;

        let mut x = DVector::zeros(n);
        for (r, &j) in basis2.iter().enumerate() {
            x[j] = t2[(r, n)].max(0.0);
        }
        let objective = self.c.dot(&x);
        Ok(LpSolution {
            x,
            objective,
            pivots,
        })
    }
}

fn pivot(t: &mut DMatrix<f64>, basis: &mut [usize], row: usize, col: usize) {
    let p = t[(row, col)];
    let width = t.ncols();
    for j in 0..width {
        t[(row, j)] /= p;
    }
    for i in 0..t.nrows() {
        if i == row {
            continue;
        }
        let f = t[(i, col)];
        if f != 0.0 {
            for j in 0..width {
                let v = t[(row, j)];
                t[(i, j)] -= f * v;
            }
        }
    }
    basis[row] = col;
}

/// Minimises `cost` over the first `active` columns from the current basis.
fn run_phase(
    t: &mut DMatrix<f64>,
    basis: &mut [usize],
    cost: &[f64],
    active: usize,
    pivots: &mut usize,
    cap: usize,
) -> Result<()> {
    let rhs = t.ncols() - 1;
    loop {
        // Reduced cost of column j: c_j − c_Bᵀ B⁻¹ A_j, read off the tableau.
        let entering = (0..active).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: f64 = basis
                .iter()
                .enumerate()
                .map(|(i, &b)| cost[b] * t[(i, j)])
                .sum();
            cost[j] - z < -EPS
        });
        let Some(col) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..t.nrows() {
            let a = t[(i, col)];
            if a > EPS {
                let ratio = t[(i, rhs)] / a;
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Solver("LP unbounded".into()));
        };
        pivot(t, basis, row, col);
        *pivots += 1;
        if *pivots > cap {
            return Err(Error::Solver(format!("pivot limit {cap} exceeded")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_textbook_problem() {
        // min −x − y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6  → x = 1.6, y = 1.2
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 1.0, 0.0, 3.0, 1.0, 0.0, 1.0]);
        let lp = LinearProgram::new(
            a,
            DVector::from_vec(vec![4.0, 6.0]),
            DVector::from_vec(vec![-1.0, -1.0, 0.0, 0.0]),
        )
        .unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective + 2.8).abs() < 1e-12);
        assert!((s.x[0] - 1.6).abs() < 1e-12 && (s.x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn redundant_rows_and_negative_rhs() {
        // x + y = −(−2) twice, min x + 2y → x = 2.
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, 2.0, 2.0]);
        let lp = LinearProgram::new(
            a,
            DVector::from_vec(vec![-2.0, 4.0]),
            DVector::from_vec(vec![1.0, 2.0]),
        )
        .unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_bad_shapes() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let lp = LinearProgram::new(
            a.clone(),
            DVector::from_vec(vec![-1.0]),
            DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        assert!(matches!(lp.solve(), Err(Error::Solver(_))));
        assert!(LinearProgram::new(
            a,
            DVector::from_vec(vec![1.0, 2.0]),
            DVector::from_vec(vec![1.0])
        )
        .is_err());
    }

    #[test]
    fn unbounded() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let lp = LinearProgram::new(
            a,
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![0.0, -1.0]),
        )
        .unwrap();
        assert!(matches!(lp.solve(), Err(Error::Solver(_))));
    }
}
