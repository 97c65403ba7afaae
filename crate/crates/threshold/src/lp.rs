//! Linear-program feasibility by phase-one simplex.
//!
//! Problems are solved in floating point first and every verdict is then
//! certified in exact rational arithmetic. A feasible point is checked
//! directly (or re-solved exactly on its active constraints). An infeasible
//! verdict is certified by a Farkas vector rebuilt exactly from the
//! floating duals. When a certificate cannot be produced the problem is
//! solved again with a rational tableau.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Feasibility tolerance of the floating solver.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Smallest pivot element accepted by the floating solver.
const PIVOT_TOLERANCE: f64 = 1e-7;

/// Consecutive degenerate pivots before floating solves switch to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;

/// Exact input coefficient.
pub type Coeff = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<Coeff>,
    pub cmp: Cmp,
    pub rhs: Coeff,
}

/// A system of linear constraints over free real variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    nvars: usize,
    rows: Vec<Row>,
    /// Every row is `a·x >= 1` and only the strict system `a·x > 0` matters.
    cone: bool,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            rows: Vec::new(),
            cone: false,
        }
    }

    /// Strict homogeneous system `a_i · x > 0`, normalized to margin 1.
    pub fn strict_cone(nvars: usize, rows: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut lp = Self::new(nvars);
        for r in rows {
            lp.push(
                r.into_iter().map(|v| Coeff::from_integer(v as i128)).collect(),
                Cmp::Ge,
                Coeff::from_integer(1),
            );
        }
        lp.cone = true;
        lp
    }

    pub fn push(&mut self, coeffs: Vec<Coeff>, cmp: Cmp, rhs: Coeff) {
        assert_eq!(coeffs.len(), self.nvars, "row width");
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Exact check of a candidate point. For cone systems, any point with
    /// every row strictly positive is accepted and returned rescaled to margin 1.
    pub fn certify(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let values: Vec<BigRational> = self
            .rows
            .iter()
            .map(|r| {
                r.coeffs
                    .iter()
                    .zip(x)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, v)| to_big(c) * v)
                    .fold(<BigRational as Zero>::zero(), |a, b| a + b)
            })
            .collect();
        if self.cone {
            let min = values.iter().min()?.clone();
            if !min.is_positive() {
                return None;
            }
            return Some(x.iter().map(|v| v / &min).collect());
        }
        let ok = self.rows.iter().zip(&values).all(|(r, v)| {
            let b = to_big(&r.rhs);
            match r.cmp {
                Cmp::Ge => *v >= b,
                Cmp::Le => *v <= b,
                Cmp::Eq => *v == b,
            }
        });
        ok.then(|| x.to_vec())
    }
}

fn to_big(c: &Coeff) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

fn to_f64(c: &Coeff) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

/// Arithmetic needed by the tableau.
pub trait Scalar: Clone + Debug {
    /// Exact arithmetic: ties are exact and Bland's rule guarantees termination.
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_coeff(c: &Coeff) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    fn is_nil(&self) -> bool {
        !self.positive() && !self.negative()
    }
    fn to_f64(&self) -> f64;
    /// Large enough to pivot on; floating solves refuse tiny pivots.
    fn pivotable(&self) -> bool {
        self.positive()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_coeff(c: &Coeff) -> Self {
        to_f64(c)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn positive(&self) -> bool {
        *self > FLOAT_TOLERANCE
    }
    fn negative(&self) -> bool {
        *self < -FLOAT_TOLERANCE
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pivotable(&self) -> bool {
        *self > PIVOT_TOLERANCE
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_coeff(c: &Coeff) -> Self {
        to_big(c)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhaseOne<T> {
    Feasible(Vec<T>),
    /// Minimum total artificial infeasibility, with the phase-one duals
    /// (one per input row, in the orientation of the input) and the final
    /// basic point.
    Infeasible {
        residual: T,
        duals: Vec<T>,
        point: Vec<T>,
    },
    /// Pivot limit hit (floating path only), with the last basic point.
    Stalled(Vec<T>),
}

/// Phase-one simplex with Bland's rule. `pivot_limit` bounds the number of
/// pivots; exact arithmetic passes `usize::MAX` since Bland's rule terminates.
pub fn phase_one<T: Scalar>(lp: &LinearProgram, pivot_limit: usize) -> PhaseOne<T> {
    let nv = lp.nvars;
    let m = lp.rows.len();
    if m == 0 {
        return PhaseOne::Feasible(vec![T::zero(); nv]);
    }
    // Columns: u (nv), v (nv), slacks, artificials, rhs.
    let slack_rows: Vec<usize> = (0..m).filter(|&i| lp.rows[i].cmp != Cmp::Eq).collect();
    let mut rows: Vec<(Vec<T>, Cmp, T)> = lp
        .rows
        .iter()
        .map(|r| {
            let a: Vec<T> = r.coeffs.iter().map(T::from_coeff).collect();
            let b = T::from_coeff(&r.rhs);
            if r.rhs < Coeff::zero() {
                let flip = match r.cmp {
                    Cmp::Ge => Cmp::Le,
                    Cmp::Le => Cmp::Ge,
                    Cmp::Eq => Cmp::Eq,
                };
                (a.iter().map(T::neg).collect(), flip, b.neg())
            } else {
                (a, r.cmp, b)
            }
        })
        .collect();
    let slack_base = 2 * nv;
    let art_base = slack_base + slack_rows.len();
    // rows whose slack can start in the basis
    let needs_art: Vec<bool> = rows.iter().map(|(_, c, _)| *c != Cmp::Le).collect();
    let art_count = needs_art.iter().filter(|&&b| b).count();
    let ncols = art_base + art_count;
    let rhs = ncols;

    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut basis = vec![0usize; m];
    let mut art_index = art_base;
    // column holding +e_i for row i, and its phase-one cost
    let mut unit = vec![(0usize, false); m];
    for (i, (a, cmp, b)) in rows.drain(..).enumerate() {
        let mut row = vec![T::zero(); ncols + 1];
        for (j, v) in a.into_iter().enumerate() {
            row[nv + j] = v.neg();
            row[j] = v;
        }
        if let Some(k) = slack_rows.iter().position(|&r| r == i) {
            row[slack_base + k] = match cmp {
                Cmp::Ge => T::one().neg(),
                _ => T::one(),
            };
            if cmp == Cmp::Le {
                basis[i] = slack_base + k;
                unit[i] = (slack_base + k, false);
            }
        }
        if needs_art[i] {
            row[art_index] = T::one();
            basis[i] = art_index;
            unit[i] = (art_index, true);
            art_index += 1;
        }
        row[rhs] = b;
        tab.push(row);
    }
    // Reduced costs for minimizing the artificial sum.
    let mut obj = vec![T::zero(); ncols + 1];
    for (i, row) in tab.iter().enumerate() {
        if needs_art[i] {
            for j in 0..art_base {
                obj[j] = obj[j].sub(&row[j]);
            }
            obj[rhs] = obj[rhs].sub(&row[rhs]);
        }
    }
    tab.push(obj);

    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    loop {
        let obj = &tab[m];
        // Floating solves price by steepest reduced cost and fall back to
        // Bland's rule only on long degenerate runs; exact solves always use Bland.
        let bland = T::EXACT || degenerate_run > DEGENERATE_SWITCH;
        let enter = if bland {
            (0..ncols).find(|&j| obj[j].negative())
        } else {
            (0..ncols)
                .filter(|&j| obj[j].negative())
                .min_by(|&a, &b| obj[a].to_f64().total_cmp(&obj[b].to_f64()))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut min_ratio: Option<T> = None;
        for row in tab.iter().take(m) {
            if row[enter].pivotable() {
                let r = row[rhs].div(&row[enter]);
                if min_ratio.as_ref().is_none_or(|best| r.sub(best).negative()) {
                    min_ratio = Some(r);
                }
            }
        }
        // Phase one is bounded below by zero, so a leaving row exists.
        let Some(min_ratio) = min_ratio else {
            return PhaseOne::Stalled(basic_point(&tab, &basis, nv));
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            let a = &tab[i][enter];
            if !a.pivotable() || tab[i][rhs].div(a).sub(&min_ratio).positive() {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let better = if bland {
                        basis[i] < basis[l]
                    } else {
                        let (ai, al) = (a.to_f64(), tab[l][enter].to_f64());
                        ai > al || (ai == al && basis[i] < basis[l])
                    };
                    Some(if better { i } else { l })
                }
            };
        }
        let p = leave.expect("a row attains the minimum ratio");
        degenerate_run = if min_ratio.is_nil() { degenerate_run + 1 } else { 0 };
        pivot(&mut tab, p, enter);
        basis[p] = enter;
        pivots += 1;
        if pivots > pivot_limit {
            return PhaseOne::Stalled(basic_point(&tab, &basis, nv));
        }
    }
    let residual = tab[m][rhs].neg();
    if residual.positive() {
        // y_i = c_i - r_i on the unit column of row i
        let duals = unit
            .iter()
            .zip(&lp.rows)
            .map(|(&(col, art), r)| {
                let cost = if art { T::one() } else { T::zero() };
                let y = cost.sub(&tab[m][col]);
                if r.rhs < Coeff::zero() {
                    y.neg()
                } else {
                    y
                }
            })
            .collect();
        return PhaseOne::Infeasible {
            residual,
            duals,
            point: basic_point(&tab, &basis, nv),
        };
    }
    PhaseOne::Feasible(basic_point(&tab, &basis, nv))
}

/// Current basic solution restricted to the original variables.
fn basic_point<T: Scalar>(tab: &[Vec<T>], basis: &[usize], nv: usize) -> Vec<T> {
    let rhs = tab[0].len() - 1;
    let mut x = vec![T::zero(); nv];
    for (i, &b) in basis.iter().enumerate() {
        if b < nv {
            x[b] = x[b].add(&tab[i][rhs]);
        } else if b < 2 * nv {
            x[b - nv] = x[b - nv].sub(&tab[i][rhs]);
        }
    }
    x
}

fn pivot<T: Scalar>(tab: &mut [Vec<T>], p: usize, q: usize) {
    let inv = T::one().div(&tab[p][q]);
    for v in tab[p].iter_mut() {
        if !v.is_nil() {
            *v = v.mul(&inv);
        }
    }
    let prow = tab[p].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == p {
            continue;
        }
        let factor = row[q].clone();
        if factor.is_nil() {
            continue;
        }
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_nil() {
                *v = v.sub(&factor.mul(pv));
            }
        }
    }
}

/// How a verdict was established in exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A rational point satisfying every constraint.
    Point,
    /// A rational Farkas vector proving infeasibility.
    Farkas,
    /// A rational phase-one solve.
    ExactSolve,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Feasible(Vec<f64>),
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Objective of the floating solve, NaN when it hit the pivot limit.
    /// For general systems this is the phase-one infeasibility; for cone
    /// systems it is the best margin `min a·w` over `|w_j| <= 1`, so values
    /// near zero flag near-degenerate instances.
    pub residual: f64,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible(_))
    }
}

pub fn solve_exact(lp: &LinearProgram) -> Option<Vec<BigRational>> {
    match phase_one::<BigRational>(lp, usize::MAX) {
        PhaseOne::Feasible(x) => Some(x),
        PhaseOne::Infeasible { .. } => None,
        PhaseOne::Stalled(_) => unreachable!("Bland's rule terminates in exact arithmetic"),
    }
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .fold(<BigRational as Zero>::zero(), |acc, v| acc + v)
}

/// Reduced row echelon form on the first `ncols` columns, in place.
/// Returns the pivot column of each nonzero row, top to bottom.
fn rref(mat: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for v in mat[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    pivots
}

impl LinearProgram {
    /// Exact Farkas certificate near the floating duals `y`: a rational `y'`
    /// with `y'A = 0`, `y'_i >= 0` on `>=` rows, `y'_i <= 0` on `<=` rows and
    /// `y'b > 0`. The candidate is the projection of `y` onto the null space
    /// of the rows in its support.
    pub fn certify_infeasible(&self, y: &[f64]) -> bool {
        let scale = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !(scale > 0.0 && scale.is_finite()) {
            return false;
        }
        let support: Vec<usize> = (0..self.rows.len())
            .filter(|&i| y[i].abs() > FLOAT_TOLERANCE * scale)
            .collect();
        let k = support.len();
        let mut mat: Vec<Vec<BigRational>> = (0..self.nvars)
            .map(|j| support.iter().map(|&i| to_big(&self.rows[i].coeffs[j])).collect())
            .collect();
        let pivots = rref(&mut mat, k);
        let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return false;
        }
        let null: Vec<Vec<BigRational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![<BigRational as Zero>::zero(); k];
                v[f] = One::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -mat[r][f].clone();
                }
                v
            })
            .collect();
        let target: Vec<BigRational> = support.iter().map(|&i| rational(y[i] / scale)).collect();
        let d = null.len();
        let mut gram: Vec<Vec<BigRational>> = (0..d)
            .map(|a| {
                let mut row: Vec<BigRational> = (0..d).map(|b| dot(&null[a], &null[b])).collect();
                row.push(dot(&null[a], &target));
                row
            })
            .collect();
        if rref(&mut gram, d).len() < d {
            return false;
        }
        let certificate: Vec<BigRational> = (0..k)
            .map(|c| {
                (0..d)
                    .map(|a| &gram[a][d] * &null[a][c])
                    .fold(<BigRational as Zero>::zero(), |acc, v| acc + v)
            })
            .collect();
        let signs_ok = support.iter().zip(&certificate).all(|(&i, v)| match self.rows[i].cmp {
            Cmp::Ge => !v.is_negative(),
            Cmp::Le => !v.is_positive(),
            Cmp::Eq => true,
        });
        let b: Vec<BigRational> = support.iter().map(|&i| to_big(&self.rows[i].rhs)).collect();
        signs_ok && dot(&certificate, &b).is_positive()
    }

    /// Exact point on the constraints active at `x`: the active rows are
    /// solved as equations with the remaining variables fixed to `x`.
    fn polish(&self, x: &[f64]) -> Option<Vec<BigRational>> {
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let nv = self.nvars;
        let mut mat: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .filter(|r| {
                let v: f64 = r.coeffs.iter().zip(x).map(|(c, v)| to_f64(c) * v).sum();
                let b = to_f64(&r.rhs);
                r.cmp == Cmp::Eq || (v - b).abs() <= 1e-7 * (1.0 + b.abs())
            })
            .map(|r| r.coeffs.iter().chain(std::iter::once(&r.rhs)).map(to_big).collect())
            .collect();
        let pivots = rref(&mut mat, nv);
        if mat[pivots.len()..].iter().any(|row| !row[nv].is_zero()) {
            return None;
        }
        let mut point: Vec<BigRational> = x.iter().map(|&v| rational(v)).collect();
        for (r, &p) in pivots.iter().enumerate() {
            let mut v = mat[r][nv].clone();
            for f in (0..nv).filter(|f| !pivots.contains(f)) {
                v -= &mat[r][f] * &point[f];
            }
            point[p] = v;
        }
        self.certify(&point)
    }
}

fn exact_verdict(lp: &LinearProgram, residual: f64) -> Feasibility {
    let verdict = match solve_exact(lp) {
        Some(x) => Verdict::Feasible(x.iter().map(Scalar::to_f64).collect()),
        None => Verdict::Infeasible,
    };
    Feasibility {
        verdict,
        certificate: Certificate::ExactSolve,
        residual,
    }
}

/// Outcome of the margin simplex on a cone system.
struct ConeSolve<T> {
    basis: Vec<usize>,
    margin: T,
    stalled: bool,
}

/// Simplex on the dual of `max d` s.t. `A w >= d`, `|w_j| <= 1`, `d <= 1`:
/// minimize `sum p + sum q + r` over `y, p, q, r >= 0` with
/// `-A^T y + p - q = 0` and `sum y + r = 1`. Only `nvars + 1` rows, and
/// `{p, r}` is a feasible starting basis. The optimum is the best margin.
fn cone_simplex<T: Scalar>(lp: &LinearProgram, pivot_limit: usize) -> ConeSolve<T> {
    let nv = lp.nvars;
    let m = lp.rows.len();
    // Columns: y (m), p (nv), q (nv), r, rhs.
    let (p_base, q_base, r_col) = (m, m + nv, m + 2 * nv);
    let ncols = r_col + 1;
    let mut tab: Vec<Vec<T>> = vec![vec![T::zero(); ncols + 1]; nv + 2];
    for (i, row) in lp.rows.iter().enumerate() {
        for (j, c) in row.coeffs.iter().enumerate() {
            if !c.is_zero() {
                tab[j][i] = T::from_coeff(c).neg();
            }
        }
        tab[nv][i] = T::one();
    }
    for j in 0..nv {
        tab[j][p_base + j] = T::one();
        tab[j][q_base + j] = T::one().neg();
    }
    tab[nv][r_col] = T::one();
    tab[nv][ncols] = T::one();
    // Reduced costs c - c_B B^{-1} A with B = I on the p and r columns.
    let mut basis: Vec<usize> = (0..nv).map(|j| p_base + j).chain([r_col]).collect();
    let mut obj = vec![T::zero(); ncols + 1];
    for (k, v) in obj.iter_mut().enumerate() {
        let cost = if k >= p_base && k < ncols { T::one() } else { T::zero() };
        let used: T = (0..=nv).fold(T::zero(), |a, i| a.add(&tab[i][k]));
        *v = cost.sub(&used);
    }
    tab[nv + 1] = obj;
    let rows = nv + 1;
    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    let mut stalled = false;
    loop {
        let obj = &tab[rows];
        let bland = T::EXACT || degenerate_run > DEGENERATE_SWITCH;
        let enter = if bland {
            (0..ncols).find(|&j| obj[j].negative())
        } else {
            (0..ncols)
                .filter(|&j| obj[j].negative())
                .min_by(|&a, &b| obj[a].to_f64().total_cmp(&obj[b].to_f64()))
        };
        let Some(enter) = enter else {
            break;
        };
        let mut best: Option<(usize, T)> = None;
        for i in 0..rows {
            let a = &tab[i][enter];
            if !a.pivotable() {
                continue;
            }
            let r = tab[i][ncols].div(a);
            best = match best {
                None => Some((i, r)),
                Some((l, rl)) => {
                    let d = r.sub(&rl);
                    let better = if d.negative() {
                        true
                    } else if d.positive() {
                        false
                    } else if bland {
                        basis[i] < basis[l]
                    } else {
                        a.to_f64() > tab[l][enter].to_f64()
                    };
                    Some(if better { (i, r) } else { (l, rl) })
                }
            };
        }
        // Bounded below by zero; a missing row means lost precision.
        let Some((p, ratio)) = best else {
            stalled = true;
            break;
        };
        degenerate_run = if ratio.is_nil() { degenerate_run + 1 } else { 0 };
        pivot(&mut tab, p, enter);
        basis[p] = enter;
        pivots += 1;
        if pivots > pivot_limit {
            stalled = true;
            break;
        }
    }
    ConeSolve {
        basis,
        margin: tab[rows][ncols].neg(),
        stalled,
    }
}

/// Column `k` of the margin simplex, exactly.
fn cone_column(lp: &LinearProgram, k: usize) -> Vec<BigRational> {
    let (nv, m) = (lp.nvars, lp.rows.len());
    let mut col = vec![<BigRational as Zero>::zero(); nv + 1];
    if k < m {
        for (j, c) in lp.rows[k].coeffs.iter().enumerate() {
            col[j] = -to_big(c);
        }
        col[nv] = One::one();
    } else if k < m + nv {
        col[k - m] = One::one();
    } else if k < m + 2 * nv {
        col[k - m - nv] = -<BigRational as One>::one();
    } else {
        col[nv] = One::one();
    }
    col
}

/// Solves the square system `mat · x = rhs` exactly; `None` when singular.
fn solve_square(mut mat: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = mat.len();
    for (row, b) in mat.iter_mut().zip(rhs) {
        row.push(b);
    }
    if rref(&mut mat, n).len() < n {
        return None;
    }
    Some(mat.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

impl LinearProgram {
    /// Exact certificate from a basis of the margin simplex: either a point
    /// with every row strictly positive (from the basis duals) or a Gordan
    /// vector `y >= 0`, `y != 0`, `y A = 0` (from the basic solution).
    fn certify_cone_basis(&self, basis: &[usize], expect_feasible: bool) -> Option<Verdict> {
        let cols: Vec<Vec<BigRational>> = basis.iter().map(|&k| cone_column(self, k)).collect();
        if expect_feasible {
            self.cone_point(basis, &cols).or_else(|| self.gordan(basis, &cols))
        } else {
            self.gordan(basis, &cols).or_else(|| self.cone_point(basis, &cols))
        }
    }

    /// `B^T pi = c_B` gives the row prices; `pi` restricted to `w` is the point.
    fn cone_point(&self, basis: &[usize], cols: &[Vec<BigRational>]) -> Option<Verdict> {
        let m = self.rows.len();
        let costs: Vec<BigRational> = basis
            .iter()
            .map(|&k| {
                if k < m {
                    <BigRational as Zero>::zero()
                } else {
                    One::one()
                }
            })
            .collect();
        let pi = solve_square(cols.to_vec(), costs)?;
        let w = self.certify(&pi[..self.nvars])?;
        Some(Verdict::Feasible(w.iter().map(Scalar::to_f64).collect()))
    }

    /// The basic solution `B x_B = b`, read on the `y` columns.
    fn gordan(&self, basis: &[usize], cols: &[Vec<BigRational>]) -> Option<Verdict> {
        let (nv, m) = (self.nvars, self.rows.len());
        let transpose: Vec<Vec<BigRational>> = (0..=nv)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let mut b = vec![<BigRational as Zero>::zero(); nv + 1];
        b[nv] = One::one();
        let xb = solve_square(transpose, b)?;
        let mut y = vec![<BigRational as Zero>::zero(); m];
        for (&k, v) in basis.iter().zip(&xb) {
            if k < m {
                y[k] = v.clone();
            }
        }
        if y.iter().any(Signed::is_negative) || y.iter().all(Zero::is_zero) {
            return None;
        }
        let balanced = (0..nv).all(|j| {
            y.iter()
                .zip(&self.rows)
                .filter(|(v, _)| !v.is_zero())
                .map(|(v, r)| v * to_big(&r.coeffs[j]))
                .fold(<BigRational as Zero>::zero(), |a, t| a + t)
                .is_zero()
        });
        balanced.then_some(Verdict::Infeasible)
    }

    fn cone_feasibility(&self) -> Feasibility {
        let limit = 50 * (self.rows.len() + 2 * self.nvars + 10);
        let solve = cone_simplex::<f64>(self, limit);
        let margin = if solve.stalled { f64::NAN } else { solve.margin };
        if let Some(verdict) = self.certify_cone_basis(&solve.basis, margin > FLOAT_TOLERANCE) {
            let certificate = match verdict {
                Verdict::Feasible(_) => Certificate::Point,
                Verdict::Infeasible => Certificate::Farkas,
            };
            return Feasibility {
                verdict,
                certificate,
                residual: margin,
            };
        }
        let exact = cone_simplex::<BigRational>(self, usize::MAX);
        let verdict = self
            .certify_cone_basis(&exact.basis, exact.margin.is_positive())
            .expect("an optimal exact basis certifies itself");
        Feasibility {
            verdict,
            certificate: Certificate::ExactSolve,
            residual: margin,
        }
    }
}

/// Decides feasibility; the verdict always carries an exact certificate.
pub fn feasibility(lp: &LinearProgram) -> Feasibility {
    if lp.cone {
        return lp.cone_feasibility();
    }
    let limit = 50 * (lp.rows.len() + 2 * lp.nvars + 10);
    let (residual, duals, x) = match phase_one::<f64>(lp, limit) {
        PhaseOne::Feasible(x) => (0.0, None, x),
        PhaseOne::Infeasible {
            residual,
            duals,
            point,
        } => (residual, Some(duals), point),
        PhaseOne::Stalled(x) => (f64::NAN, None, x),
    };
    if let Some(y) = &duals {
        if lp.certify_infeasible(y) {
            return Feasibility {
                verdict: Verdict::Infeasible,
                certificate: Certificate::Farkas,
                residual,
            };
        }
    }
    // A floating verdict of infeasibility with a tiny residual may still
    // leave a point that is exactly feasible (always so for cones).
    let point = x
        .iter()
        .all(|v| v.is_finite())
        .then(|| lp.certify(&x.iter().map(|&v| rational(v)).collect::<Vec<_>>()))
        .flatten()
        .or_else(|| lp.polish(&x));
    match point {
        Some(point) => Feasibility {
            verdict: Verdict::Feasible(point.iter().map(Scalar::to_f64).collect()),
            certificate: Certificate::Point,
            residual,
        },
        None => exact_verdict(lp, residual),
    }
}
