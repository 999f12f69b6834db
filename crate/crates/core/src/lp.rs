//! Exact rational linear programming.
//!
//! A two-phase primal simplex with Bland's rule, run on a fraction-free integer
//! tableau: every constraint row is scaled to integers and pivots use the
//! Bareiss-style update `(a*p - b*c) / det`, which is always an exact division.
//! The tableau is first tried on checked `i128` arithmetic and rebuilt on
//! `BigInt` if any intermediate overflows, so results never depend on the path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{dot, Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `a.x <= b`
    Le,
    /// `a.x < b`; optimization treats it as `<=`, strict search enforces it.
    Lt,
    /// `a.x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint { coeffs, relation, rhs }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn lt(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Lt, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    /// `-coeffs . x <= -rhs`, i.e. `coeffs . x >= rhs`.
    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn gt(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::lt(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    /// Optimal objective value.
    pub value: Rational,
    /// A point attaining it.
    pub point: Point,
    /// Dual multipliers, one per constraint: nonnegative for inequalities,
    /// free for equalities, with `sum y_k a_k = c` and `sum y_k b_k = value`.
    pub dual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarKind {
    Free,
    NonNeg,
}

/// Maximizes `objective . x` over free variables `x` in R^dim.
pub fn maximize(objective: &[Rational], constraints: &[LinearConstraint]) -> LpOutcome {
    let kinds = vec![VarKind::Free; objective.len()];
    solve(&kinds, objective, constraints)
}

/// Minimizes `objective . x`. The returned duals satisfy the same equations
/// as for [`maximize`] but with nonpositive inequality multipliers.
pub fn minimize(objective: &[Rational], constraints: &[LinearConstraint]) -> LpOutcome {
    let neg: Vec<Rational> = objective.iter().map(|c| -c).collect();
    match maximize(&neg, constraints) {
        LpOutcome::Optimal(mut s) => {
            s.value = -s.value;
            s.dual.iter_mut().for_each(|y| *y = -&*y);
            LpOutcome::Optimal(s)
        }
        other => other,
    }
}

pub fn is_feasible(dim: usize, constraints: &[LinearConstraint]) -> bool {
    !matches!(maximize(&vec![Rational::zero(); dim], constraints), LpOutcome::Infeasible)
}

/// Finds a point satisfying every constraint, with `Lt` rows strictly.
///
/// Adds a slack `t` in `[0, 1]` to every strict row and maximizes it; a strict
/// solution exists iff the optimum is positive.
pub fn strict_point(dim: usize, constraints: &[LinearConstraint]) -> Option<Point> {
    if !constraints.iter().any(|c| c.relation == Relation::Lt) {
        return match maximize(&vec![Rational::zero(); dim], constraints) {
            LpOutcome::Optimal(s) => Some(s.point),
            _ => None,
        };
    }
    let mut kinds = vec![VarKind::Free; dim];
    kinds.push(VarKind::NonNeg);
    let mut rows: Vec<LinearConstraint> = constraints
        .iter()
        .map(|c| {
            let mut coeffs = c.coeffs.clone();
            let slack = if c.relation == Relation::Lt { Rational::one() } else { Rational::zero() };
            coeffs.push(slack);
            let relation = if c.relation == Relation::Lt { Relation::Le } else { c.relation };
            LinearConstraint::new(coeffs, relation, c.rhs.clone())
        })
        .collect();
    let mut cap = vec![Rational::zero(); dim];
    cap.push(Rational::one());
    rows.push(LinearConstraint::le(cap.clone(), Rational::one()));
    match solve(&kinds, &cap, &rows) {
        LpOutcome::Optimal(s) if s.value.is_positive() => {
            let mut point = s.point;
            point.truncate(dim);
            debug_assert!(constraints.iter().all(|c| c.is_satisfied(&point)));
            Some(point)
        }
        _ => None,
    }
}

/// Checks a dual certificate of optimality exactly.
pub fn verify_dual(objective: &[Rational], constraints: &[LinearConstraint], solution: &LpSolution) -> bool {
    if solution.dual.len() != constraints.len() {
        return false;
    }
    let signs_ok = constraints.iter().zip(&solution.dual).all(|(c, y)| c.relation == Relation::Eq || !y.is_negative());
    let combo_ok = (0..objective.len()).all(|j| {
        let s = constraints.iter().zip(&solution.dual).fold(Rational::zero(), |acc, (c, y)| acc + y * &c.coeffs[j]);
        s == objective[j]
    });
    let bound = constraints.iter().zip(&solution.dual).fold(Rational::zero(), |acc, (c, y)| acc + y * &c.rhs);
    let primal_ok = constraints.iter().all(|c| {
        let lhs = dot(&c.coeffs, &solution.point);
        match c.relation {
            Relation::Eq => lhs == c.rhs,
            _ => lhs <= c.rhs,
        }
    });
    signs_ok && combo_ok && primal_ok && bound == solution.value && dot(objective, &solution.point) == solution.value
}

fn solve(kinds: &[VarKind], objective: &[Rational], constraints: &[LinearConstraint]) -> LpOutcome {
    debug_assert_eq!(kinds.len(), objective.len());
    debug_assert!(constraints.iter().all(|c| c.coeffs.len() == kinds.len()));
    let setup = Setup::new(kinds, objective, constraints);
    match setup.run::<i128>() {
        Ok(outcome) => outcome,
        Err(Overflow) => setup.run::<BigInt>().unwrap_or_else(|_| unreachable!("BigInt arithmetic cannot overflow")),
    }
}

#[cfg(test)]
fn solve_big(kinds: &[VarKind], objective: &[Rational], constraints: &[LinearConstraint]) -> LpOutcome {
    Setup::new(kinds, objective, constraints).run::<BigInt>().unwrap()
}

#[derive(Debug)]
struct Overflow;

trait PivotInt: Clone + std::fmt::Debug {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn sub(&self, other: &Self) -> Result<Self, Overflow>;
    fn add(&self, other: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl PivotInt for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*other).ok_or(Overflow)
    }
    fn sub(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*other).ok_or(Overflow)
    }
    fn add(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_add(*other).ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
}

impl PivotInt for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }
    fn sub(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self - other)
    }
    fn add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
}

/// Integer-scaled standard form shared by both arithmetic backends.
struct Setup {
    /// Structural column range per variable: (plus column, optional minus column).
    var_cols: Vec<(usize, Option<usize>)>,
    /// Scaled integer objective over all columns (before artificials).
    objective: Vec<BigInt>,
    objective_scale: BigInt,
    rows: Vec<BigInt>,
    width: usize,
    /// Row multiplier `sigma * s` relating LP rows to input rows.
    row_scale: Vec<BigInt>,
    slack_col: Vec<Option<usize>>,
    art_col: Vec<Option<usize>>,
    m: usize,
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

impl Setup {
    fn new(kinds: &[VarKind], objective: &[Rational], constraints: &[LinearConstraint]) -> Self {
        let mut var_cols = Vec::with_capacity(kinds.len());
        let mut col = 0;
        for kind in kinds {
            match kind {
                VarKind::Free => {
                    var_cols.push((col, Some(col + 1)));
                    col += 2;
                }
                VarKind::NonNeg => {
                    var_cols.push((col, None));
                    col += 1;
                }
            }
        }
        let m = constraints.len();
        let mut slack_col = vec![None; m];
        let mut art_col = vec![None; m];
        let mut flipped = vec![false; m];
        for (k, c) in constraints.iter().enumerate() {
            flipped[k] = c.rhs.is_negative();
            if c.relation != Relation::Eq {
                slack_col[k] = Some(col);
                col += 1;
            }
        }
        for (k, c) in constraints.iter().enumerate() {
            if c.relation == Relation::Eq || flipped[k] {
                art_col[k] = Some(col);
                col += 1;
            }
        }
        let width = col;
        let stride = width + 1;
        let mut rows = vec![BigInt::zero(); m * stride];
        let mut row_scale = Vec::with_capacity(m);
        for (k, c) in constraints.iter().enumerate() {
            let s = lcm_of_denominators(c.coeffs.iter().chain(std::iter::once(&c.rhs)));
            let sigma = if flipped[k] { -BigInt::one() } else { BigInt::one() };
            let factor = &s * &sigma;
            let row = &mut rows[k * stride..(k + 1) * stride];
            for (j, a) in c.coeffs.iter().enumerate() {
                let v = (a * Rational::from_integer(factor.clone())).to_integer();
                let (plus, minus) = var_cols[j];
                if let Some(minus) = minus {
                    row[minus] = -&v;
                }
                row[plus] = v;
            }
            if let Some(sc) = slack_col[k] {
                row[sc] = sigma.clone();
            }
            if let Some(ac) = art_col[k] {
                row[ac] = BigInt::one();
            }
            row[width] = (&c.rhs * Rational::from_integer(factor.clone())).to_integer();
            row_scale.push(factor);
        }
        let objective_scale = lcm_of_denominators(objective.iter());
        let mut obj = vec![BigInt::zero(); width];
        for (j, c) in objective.iter().enumerate() {
            let v = (c * Rational::from_integer(objective_scale.clone())).to_integer();
            let (plus, minus) = var_cols[j];
            if let Some(minus) = minus {
                obj[minus] = -&v;
            }
            obj[plus] = v;
        }
        Setup { var_cols, objective: obj, objective_scale, rows, width, row_scale, slack_col, art_col, m }
    }

    fn run<T: PivotInt>(&self) -> Result<LpOutcome, Overflow> {
        let stride = self.width + 1;
        let mut data = Vec::with_capacity(self.rows.len());
        for v in &self.rows {
            data.push(T::from_big(v).ok_or(Overflow)?);
        }
        let basis: Vec<usize> =
            (0..self.m).map(|k| self.art_col[k].or(self.slack_col[k]).expect("every row has a basic column")).collect();
        let mut is_art = vec![false; self.width];
        for c in self.art_col.iter().flatten() {
            is_art[*c] = true;
        }
        let mut t = Tableau {
            data,
            obj: vec![T::nil(); stride],
            stride,
            basis,
            det: T::unit(),
            blocked: vec![false; self.width],
        };

        // Phase I: maximize -(sum of artificials).
        if self.art_col.iter().any(Option::is_some) {
            for k in 0..self.m {
                if self.art_col[k].is_some() {
                    for col in 0..stride {
                        if !is_art.get(col).copied().unwrap_or(false) {
                            let v = t.obj[col].add(&t.data[k * stride + col])?;
                            t.obj[col] = v;
                        }
                    }
                }
            }
            if t.simplex()? == Phase::Unbounded {
                unreachable!("phase I objective is bounded above by zero");
            }
            if t.obj[self.width].is_pos() {
                return Ok(LpOutcome::Infeasible);
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            for r in 0..self.m {
                if !is_art[t.basis[r]] {
                    continue;
                }
                let entering = (0..self.width).find(|&c| !is_art[c] && !t.data[r * stride + c].is_nil());
                if let Some(c) = entering {
                    if t.data[r * stride + c].is_neg() {
                        // rhs is zero here, so negating the row keeps it feasible.
                        for col in 0..stride {
                            let v = t.data[r * stride + col].neg()?;
                            t.data[r * stride + col] = v;
                        }
                    }
                    t.pivot(r, c)?;
                }
            }
            t.blocked = is_art.clone();
        }

        // Phase II objective row: Z_k = c_k det - sum_i c_{B_i} M_ik.
        let mut cost = Vec::with_capacity(self.width);
        for v in &self.objective {
            cost.push(T::from_big(v).ok_or(Overflow)?);
        }
        cost.push(T::nil());
        for col in 0..stride {
            let mut z = cost[col].mul(&t.det)?;
            for r in 0..self.m {
                let cb = &cost[t.basis[r]];
                if !cb.is_nil() {
                    z = z.sub(&cb.mul(&t.data[r * stride + col])?)?;
                }
            }
            t.obj[col] = z;
        }
        if t.simplex()? == Phase::Unbounded {
            return Ok(LpOutcome::Unbounded);
        }
        Ok(LpOutcome::Optimal(self.extract(&t)))
    }

    fn extract<T: PivotInt>(&self, t: &Tableau<T>) -> LpSolution {
        let det = Rational::from_integer(t.det.to_big());
        let mut col_value = vec![Rational::zero(); self.width];
        for (r, &b) in t.basis.iter().enumerate() {
            col_value[b] = Rational::from_integer(t.data[r * t.stride + self.width].to_big()) / &det;
        }
        let point: Point = self
            .var_cols
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => &col_value[plus] - &col_value[minus],
                None => col_value[plus].clone(),
            })
            .collect();
        let denom = &det * Rational::from_integer(self.objective_scale.clone());
        let dual = (0..self.m)
            .map(|k| {
                // Reduced cost of the row's unit column (slack, or artificial for
                // equalities). Row negations during drive-out cancel out here.
                let (col, unit) = match (self.slack_col[k], self.art_col[k]) {
                    (Some(sc), _) => (sc, self.row_scale[k].signum()),
                    (None, Some(ac)) => (ac, BigInt::one()),
                    (None, None) => unreachable!(),
                };
                let z = Rational::from_integer(t.obj[col].to_big()) / &denom;
                let pi = -z * Rational::from_integer(unit);
                pi * Rational::from_integer(self.row_scale[k].clone())
            })
            .collect::<Vec<_>>();
        let objective: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(plus, _)| Rational::new(self.objective[plus].clone(), self.objective_scale.clone()))
            .collect();
        let value = dot(&objective, &point);
        debug_assert_eq!(
            value,
            -Rational::from_integer(t.obj[self.width].to_big()) / &denom,
            "objective row out of sync"
        );
        LpSolution { value, point, dual }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau<T> {
    /// Row-major `m x (width + 1)`; last column is the right-hand side.
    data: Vec<T>,
    obj: Vec<T>,
    stride: usize,
    basis: Vec<usize>,
    /// Common denominator of every entry; always positive.
    det: T,
    blocked: Vec<bool>,
}

impl<T: PivotInt> Tableau<T> {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    /// Runs simplex iterations with Bland's rule until optimal or unbounded.
    fn simplex(&mut self) -> Result<Phase, Overflow> {
        let width = self.stride - 1;
        loop {
            let Some(enter) = (0..width).find(|&c| !self.blocked[c] && self.obj[c].is_pos()) else {
                return Ok(Phase::Optimal);
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows() {
                let a = &self.data[r * self.stride + enter];
                if !a.is_pos() {
                    continue;
                }
                leave = Some(match leave {
                    None => r,
                    Some(best) => {
                        // rhs_r / a_r vs rhs_best / a_best, denominators positive.
                        let lhs = self.data[r * self.stride + width].mul(&self.data[best * self.stride + enter])?;
                        let rhs = self.data[best * self.stride + width].mul(a)?;
                        let diff = lhs.sub(&rhs)?;
                        if diff.is_neg() || (diff.is_nil() && self.basis[r] < self.basis[best]) {
                            r
                        } else {
                            best
                        }
                    }
                });
            }
            let Some(leave) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(leave, enter)?;
        }
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<(), Overflow> {
        let stride = self.stride;
        let p = self.data[r * stride + s].clone();
        debug_assert!(p.is_pos());
        let pivot_row: Vec<T> = self.data[r * stride..(r + 1) * stride].to_vec();
        let det = self.det.clone();
        let update = |row: &mut [T]| -> Result<(), Overflow> {
            let factor = row[s].clone();
            if factor.is_nil() {
                for v in row.iter_mut() {
                    if !v.is_nil() {
                        *v = v.mul(&p)?.div_exact(&det);
                    }
                }
            } else {
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    let scaled = v.mul(&p)?;
                    let next = if pr.is_nil() { scaled } else { scaled.sub(&factor.mul(pr)?)? };
                    *v = next.div_exact(&det);
                }
            }
            Ok(())
        };
        for i in 0..self.rows() {
            if i != r {
                update(&mut self.data[i * stride..(i + 1) * stride])?;
            }
        }
        update(&mut self.obj)?;
        self.det = p;
        self.basis[r] = s;
        Ok(())
    }
}
