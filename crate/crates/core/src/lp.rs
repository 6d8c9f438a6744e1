//! Dense two-phase simplex over an exact field, with Bland's rule.

use crate::scalar::Exact;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Maximize `objective · x` subject to `rows`, with `x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Row<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Exact> LinearProgram<T> {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            objective: vec![T::zero(); vars],
            rows: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `Σ coeff·x_var  rel  rhs` from sparse terms.
    pub fn constrain(&mut self, terms: &[(usize, T)], relation: Relation, rhs: T) {
        let mut coeffs = vec![T::zero(); self.vars()];
        for (j, c) in terms {
            coeffs[*j] = coeffs[*j].clone() + c.clone();
        }
        self.rows.push(Row { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpResult<T> {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau<T> {
    /// `m` rows of `cols + 1` entries; the last is the right-hand side.
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
    first_artificial: usize,
}

impl<T: Exact> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let n = lp.vars();
        let m = lp.rows.len();
        let slacks = lp.rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let first_artificial = n + slacks;
        let cols = first_artificial + m;
        let mut a = Vec::with_capacity(m);
        let mut slack = n;
        for (i, r) in lp.rows.iter().enumerate() {
            let mut row = vec![T::zero(); cols + 1];
            for (j, c) in r.coeffs.iter().enumerate() {
                row[j] = c.clone();
            }
            match r.relation {
                Relation::Le => {
                    row[slack] = T::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[cols] = r.rhs.clone();
            if r.rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[first_artificial + i] = T::one();
            a.push(row);
        }
        Tableau {
            a,
            basis: (first_artificial..cols).collect(),
            n,
            first_artificial,
        }
    }

    fn cols(&self) -> usize {
        self.first_artificial + self.a.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[T], limit: usize) -> bool {
        let rhs = self.cols();
        loop {
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() && !cost[b].is_zero() {
                        r = r - cost[b].clone() * self.a[i][j].clone();
                    }
                }
                r.is_positive()
            });
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_positive() {
                    continue;
                }
                let ratio = self.a[i][rhs].clone() / self.a[i][j].clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else { return false };
            self.pivot(i, j);
        }
    }

    fn run(mut self, objective: &[T]) -> LpResult<T> {
        let cols = self.cols();
        let mut phase1 = vec![T::zero(); cols];
        for c in phase1.iter_mut().skip(self.first_artificial) {
            *c = -T::one();
        }
        self.optimize(&phase1, cols);
        let infeasible = self
            .basis
            .iter()
            .enumerate()
            .any(|(i, &b)| b >= self.first_artificial && self.a[i][cols].is_positive());
        if infeasible {
            return LpResult::Infeasible;
        }
        // Move zero-level artificials out of the basis where possible.
        for i in 0..self.a.len() {
            if self.basis[i] >= self.first_artificial {
                if let Some(j) = (0..self.first_artificial).find(|&j| !self.a[i][j].is_zero()) {
                    self.pivot(i, j);
                }
            }
        }
        let mut cost = vec![T::zero(); cols];
        cost[..self.n].clone_from_slice(objective);
        if !self.optimize(&cost, self.first_artificial) {
            return LpResult::Unbounded;
        }
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.a[i][cols].clone();
            }
        }
        let value = x
            .iter()
            .zip(objective)
            .fold(T::zero(), |acc, (v, c)| acc + v.clone() * c.clone());
        LpResult::Optimal { x, value }
    }
}
