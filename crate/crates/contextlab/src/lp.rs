//! Exact linear programming over rationals.
//!
//! Feasibility and maximization for problems of the form
//!
//! ```text
//! x >= 0,   A x = b,   maximize c . x (optional)
//! ```
//!
//! solved by a dense two-phase simplex with Bland's rule on
//! arbitrary-precision rationals. Bland's rule cannot cycle, so the solver
//! always terminates, and exact arithmetic makes Feasible/Infeasible a
//! theorem about the input rather than a statement up to tolerance. The
//! problems built by this crate are tiny (at most a few hundred variables
//! and a few dozen rows), so no sparsity or pricing tricks are needed.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// An equality-constrained LP over nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
    objective: Option<Vec<Rational>>,
}

/// Outcome of [`LinearProgram::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    /// The constraints admit a solution. `optimum` is present iff an
    /// objective was supplied; the witness is then an optimal vertex.
    Feasible {
        witness: Vec<Rational>,
        optimum: Option<Rational>,
    },
    /// No nonnegative assignment satisfies every equality.
    Infeasible,
    /// The region is non-empty but the objective grows without bound.
    Unbounded,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Feasible { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn optimum(&self) -> Option<&Rational> {
        match self {
            LpResult::Feasible { optimum, .. } => optimum.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("coefficient row has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, rows: Vec::new(), objective: None }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds the equality `coeffs . x = rhs`.
    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.rows.push((coeffs, rhs));
    }

    /// Sets the objective `maximize coeffs . x`.
    pub fn maximize(&mut self, coeffs: Vec<Rational>) {
        self.objective = Some(coeffs);
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        for (coeffs, _) in &self.rows {
            if coeffs.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    expected: self.num_vars,
                    got: coeffs.len(),
                });
            }
        }
        if let Some(obj) = &self.objective {
            if obj.len() != self.num_vars {
                return Err(LpError::DimensionMismatch {
                    expected: self.num_vars,
                    got: obj.len(),
                });
            }
        }
        Ok(())
    }

    /// Decides the program exactly. Deterministic: identical inputs yield
    /// identical results, including the witness vertex.
    pub fn solve(&self) -> Result<LpResult, LpError> {
        self.check_dimensions()?;
        let n = self.num_vars;
        let m = self.rows.len();
        let width = n + m + 1; // structural | artificial | rhs

        // Tableau with b >= 0 and one artificial basis column per row.
        let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
        for (i, (coeffs, rhs)) in self.rows.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            let flip = rhs.is_negative();
            for (j, c) in coeffs.iter().enumerate() {
                row[j] = if flip { -c.clone() } else { c.clone() };
            }
            row[width - 1] = if flip { -rhs.clone() } else { rhs.clone() };
            row[n + i] = Rational::one();
            tab.push(row);
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // Phase 1: maximize minus the sum of artificials.
        let mut phase1 = vec![Rational::zero(); n + m];
        for c in phase1.iter_mut().skip(n) {
            *c = -Rational::one();
        }
        let (status, z1) = simplex(&mut tab, &mut basis, &phase1, n + m);
        debug_assert!(matches!(status, Status::Optimal), "phase 1 is bounded above by 0");
        if z1.is_negative() {
            return Ok(LpResult::Infeasible);
        }

        // Drive remaining artificials out of the basis; rows that cannot
        // pivot are redundant and dropped.
        let mut row = 0;
        while row < tab.len() {
            if basis[row] >= n {
                match (0..n).find(|&j| !tab[row][j].is_zero()) {
                    Some(j) => pivot(&mut tab, &mut basis, row, j),
                    None => {
                        tab.remove(row);
                        basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }

        // Phase 2 (only when an objective was supplied): artificials stay
        // blocked from entering.
        let optimum = match &self.objective {
            None => None,
            Some(obj) => {
                let mut cost = obj.clone();
                cost.resize(n + m, Rational::zero());
                let (status, z2) = simplex(&mut tab, &mut basis, &cost, n);
                match status {
                    Status::Unbounded => return Ok(LpResult::Unbounded),
                    Status::Optimal => Some(z2),
                }
            }
        };

        let mut witness = vec![Rational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            debug_assert!(b < n, "artificials leave the basis before extraction");
            witness[b] = tab[i].last().unwrap().clone();
        }
        debug_assert!(self.verify(&witness));
        Ok(LpResult::Feasible { witness, optimum })
    }

    /// Exact re-substitution check: does `x` satisfy every equality and
    /// the nonnegativity bounds?
    pub fn verify(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(coeffs, rhs)| {
                let lhs: Rational = coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
                lhs == *rhs
            })
    }
}

enum Status {
    Optimal,
    Unbounded,
}

/// Bland-rule simplex on an m x (cols+1) tableau. `allowed` limits which
/// columns may enter the basis; `cost` covers all columns. Returns the
/// final objective value.
fn simplex(
    tab: &mut [Vec<Rational>],
    basis: &mut [usize],
    cost: &[Rational],
    allowed: usize,
) -> (Status, Rational) {
    let m = tab.len();
    let rhs_col = cost.len();
    loop {
        let basic_cost: Vec<&Rational> = basis.iter().map(|&b| &cost[b]).collect();
        // Entering column: lowest index with positive reduced cost.
        let entering = (0..allowed).find(|&j| {
            let mut red = cost[j].clone();
            for i in 0..m {
                if !basic_cost[i].is_zero() && !tab[i][j].is_zero() {
                    red -= &(basic_cost[i] * &tab[i][j]);
                }
            }
            red.is_positive()
        });
        let Some(e) = entering else {
            let z = (0..m).map(|i| basic_cost[i] * &tab[i][rhs_col]).sum();
            return (Status::Optimal, z);
        };
        // Leaving row: minimum ratio, ties broken by lowest basic index.
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][e].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            return (Status::Unbounded, Rational::zero());
        };
        pivot(tab, basis, l, e);
    }
}

fn pivot(tab: &mut [Vec<Rational>], basis: &mut [usize], l: usize, e: usize) {
    let p = tab[l][e].clone();
    for v in tab[l].iter_mut() {
        *v /= &p;
    }
    for i in 0..tab.len() {
        if i == l || tab[i][e].is_zero() {
            continue;
        }
        let f = tab[i][e].clone();
        for j in 0..tab[i].len() {
            if !tab[l][j].is_zero() {
                let delta = &f * &tab[l][j];
                tab[i][j] -= delta;
            }
        }
    }
    basis[l] = e;
}
