//! Revised simplex over exact rationals with an explicit basis inverse and
//! Bland's pivoting rule.
//!
//! Problems are in standard form `min c·x, A x = b, x ≥ 0, b ≥ 0` and must
//! come with a starting basis made of unit columns, so no tolerance or
//! phase bookkeeping lives here. [`solve_feasibility`] builds the phase-1
//! problem for general constraint systems.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A sparse column with its objective coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub entries: Vec<(usize, Rational)>,
    pub cost: Rational,
}

impl Column {
    pub fn new(entries: Vec<(usize, Rational)>, cost: Rational) -> Self {
        Column { entries, cost }
    }

    pub fn unit(row: usize, cost: Rational) -> Self {
        Column {
            entries: vec![(row, Rational::one())],
            cost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unbounded;

#[derive(Debug, Clone)]
pub struct Simplex {
    columns: Vec<Column>,
    /// Column index basic in each row.
    basis: Vec<usize>,
    /// Row of each basic column, `usize::MAX` otherwise.
    position: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    frozen: Vec<bool>,
    pivots: u64,
}

impl Simplex {
    /// `basis[r]` must index a column equal to the unit vector `e_r`, and
    /// `rhs` must be nonnegative.
    pub fn new(rhs: Vec<Rational>, columns: Vec<Column>, basis: Vec<usize>) -> Self {
        let rows = rhs.len();
        assert_eq!(basis.len(), rows, "one basic column per row");
        assert!(rhs.iter().all(|b| !b.is_negative()), "rhs must be nonnegative");
        let mut position = vec![usize::MAX; columns.len()];
        for (r, &c) in basis.iter().enumerate() {
            let col = &columns[c];
            assert!(
                col.entries.len() == 1 && col.entries[0].0 == r && col.entries[0].1.is_one(),
                "basis column {c} is not e_{r}"
            );
            position[c] = r;
        }
        let mut binv = vec![vec![Rational::zero(); rows]; rows];
        for (r, row) in binv.iter_mut().enumerate() {
            row[r] = Rational::one();
        }
        let frozen = vec![false; columns.len()];
        Simplex {
            columns,
            basis,
            position,
            binv,
            xb: rhs,
            frozen,
            pivots: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.basis.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &Column {
        &self.columns[c]
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    pub fn add_column(&mut self, column: Column) -> usize {
        self.columns.push(column);
        self.position.push(usize::MAX);
        self.frozen.push(false);
        self.columns.len() - 1
    }

    /// Excludes a column from entering the basis.
    pub fn freeze(&mut self, c: usize) {
        self.frozen[c] = true;
    }

    pub fn is_basic(&self, c: usize) -> bool {
        self.position[c] != usize::MAX
    }

    /// Current value of column `c`.
    pub fn value(&self, c: usize) -> Rational {
        match self.position[c] {
            usize::MAX => Rational::zero(),
            r => self.xb[r].clone(),
        }
    }

    pub fn objective(&self) -> Rational {
        self.basis
            .iter()
            .zip(&self.xb)
            .fold(Rational::zero(), |acc, (&c, x)| acc + &self.columns[c].cost * x)
    }

    /// Simplex multipliers `y = c_B B^{-1}`.
    pub fn duals(&self) -> Vec<Rational> {
        let rows = self.rows();
        let mut y = vec![Rational::zero(); rows];
        for (k, &c) in self.basis.iter().enumerate() {
            let cost = &self.columns[c].cost;
            if cost.is_zero() {
                continue;
            }
            for (j, v) in self.binv[k].iter().enumerate() {
                if !v.is_zero() {
                    y[j] += cost * v;
                }
            }
        }
        y
    }

    /// `c_j − y·a_j` for an arbitrary column against multipliers `y`.
    pub fn reduced_cost(column: &Column, y: &[Rational]) -> Rational {
        column
            .entries
            .iter()
            .fold(column.cost.clone(), |acc, (r, v)| acc - &y[*r] * v)
    }

    fn ftran(&self, column: &Column) -> Vec<Rational> {
        self.binv
            .iter()
            .map(|row| {
                column
                    .entries
                    .iter()
                    .fold(Rational::zero(), |acc, (r, v)| {
                        if row[*r].is_zero() {
                            acc
                        } else {
                            acc + &row[*r] * v
                        }
                    })
            })
            .collect()
    }

    /// Lowest-index column with negative reduced cost.
    fn entering(&self, y: &[Rational]) -> Option<usize> {
        (0..self.columns.len()).find(|&c| {
            !self.frozen[c]
                && !self.is_basic(c)
                && Simplex::reduced_cost(&self.columns[c], y).is_negative()
        })
    }

    fn pivot(&mut self, q: usize, d: &[Rational], r: usize) {
        let rows = self.rows();
        let pivot = d[r].clone();
        let pivot_row: Vec<Rational> = self.binv[r].iter().map(|v| v / &pivot).collect();
        let x_r = &self.xb[r] / &pivot;
        let nonzero: Vec<usize> = (0..rows).filter(|&j| !pivot_row[j].is_zero()).collect();
        for k in 0..rows {
            if k == r || d[k].is_zero() {
                continue;
            }
            let f = d[k].clone();
            for &j in &nonzero {
                let delta = &f * &pivot_row[j];
                self.binv[k][j] -= delta;
            }
            self.xb[k] -= &f * &x_r;
        }
        self.binv[r] = pivot_row;
        self.xb[r] = x_r;
        self.position[self.basis[r]] = usize::MAX;
        self.basis[r] = q;
        self.position[q] = r;
        self.pivots += 1;
    }

    /// Runs Bland's rule to optimality over the current columns.
    pub fn optimize(&mut self) -> Result<(), Unbounded> {
        loop {
            let y = self.duals();
            let Some(q) = self.entering(&y) else {
                return Ok(());
            };
            let d = self.ftran(&self.columns[q]);
            let mut leave: Option<(usize, Rational)> = None;
            for (r, dr) in d.iter().enumerate() {
                if !dr.is_positive() {
                    continue;
                }
                let ratio = &self.xb[r] / dr;
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, _) = leave.ok_or(Unbounded)?;
            self.pivot(q, &d, r);
        }
    }
}

/// Direction of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Constraint system over nonnegative variables `x_0 .. x_{n-1}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    variables: usize,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(variables: usize) -> Self {
        LinearProgram {
            variables,
            constraints: Vec::new(),
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Adds `Σ terms (sense) rhs`. Panics if a term names an undeclared variable.
    pub fn add(&mut self, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> usize {
        assert!(
            terms.iter().all(|(v, _)| *v < self.variables),
            "constraint references an undeclared variable"
        );
        self.constraints.push(Constraint { terms, sense, rhs });
        self.constraints.len() - 1
    }

    /// `true` when `x` satisfies every constraint and `x ≥ 0`, exactly.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = c
                    .terms
                    .iter()
                    .fold(Rational::zero(), |acc, (v, a)| acc + a * &x[*v]);
                match c.sense {
                    Sense::Le => lhs <= c.rhs,
                    Sense::Ge => lhs >= c.rhs,
                    Sense::Eq => lhs == c.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Phase 1: minimizes total artificial infeasibility. Deterministic.
pub fn solve_feasibility(lp: &LinearProgram) -> Feasibility {
    let n = lp.variables;
    let rows = lp.constraints.len();
    if rows == 0 {
        return Feasibility::Feasible(vec![Rational::zero(); n]);
    }
    let mut structural: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut extra: Vec<Column> = Vec::new();
    let mut basis = vec![usize::MAX; rows];
    let mut rhs = Vec::with_capacity(rows);
    for (r, c) in lp.constraints.iter().enumerate() {
        let flip = c.rhs.is_negative();
        let sign = |v: &Rational| if flip { -v } else { v.clone() };
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        for (v, a) in &c.terms {
            match merged.iter_mut().find(|(u, _)| u == v) {
                Some((_, acc)) => *acc += a,
                None => merged.push((*v, a.clone())),
            }
        }
        for (v, a) in merged {
            if !a.is_zero() {
                structural[v].push((r, sign(&a)));
            }
        }
        rhs.push(sign(&c.rhs));
        let slack = match c.sense {
            Sense::Le => Some(Rational::one()),
            Sense::Ge => Some(-Rational::one()),
            Sense::Eq => None,
        };
        if let Some(s) = slack {
            let s = sign(&s);
            let unit = s.is_one();
            extra.push(Column::new(vec![(r, s)], Rational::zero()));
            if unit {
                basis[r] = n + extra.len() - 1;
            }
        }
    }
    let mut columns: Vec<Column> = structural
        .into_iter()
        .map(|e| Column::new(e, Rational::zero()))
        .chain(extra)
        .collect();
    for (r, b) in basis.iter_mut().enumerate() {
        if *b == usize::MAX {
            columns.push(Column::unit(r, Rational::one()));
            *b = columns.len() - 1;
        }
    }
    let mut simplex = Simplex::new(rhs, columns, basis);
    simplex
        .optimize()
        .expect("phase-1 objective is bounded below by zero");
    if simplex.objective().is_zero() {
        Feasibility::Feasible((0..n).map(|v| simplex.value(v)).collect())
    } else {
        Feasibility::Infeasible
    }
}
