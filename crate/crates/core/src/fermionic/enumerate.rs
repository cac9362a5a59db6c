//! Integer points under a quadratic level set, in exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// `f(x) = xᵀ M x / 2 + l·x + c` over rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub matrix: Vec<Vec<BigRational>>,
    pub linear: Vec<BigRational>,
    pub constant: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadraticForm {
    pub fn from_integers(matrix: &[Vec<i64>], linear: &[i64], constant: i64) -> Self {
        QuadraticForm {
            matrix: matrix.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
            linear: linear.iter().map(|&x| rat(x)).collect(),
            constant: rat(constant),
        }
    }

    /// Recovers the form of a quadratic function from its values at `0`,
    /// `e_i` and `e_i + e_j`. Exact when `f` is a polynomial of degree ≤ 2.
    pub fn fit(dim: usize, f: impl Fn(&[i64]) -> BigRational) -> Self {
        let mut x = vec![0i64; dim];
        let c = f(&x);
        let mut single = Vec::with_capacity(dim);
        let mut single_neg = Vec::with_capacity(dim);
        for i in 0..dim {
            x[i] = 1;
            single.push(f(&x));
            x[i] = -1;
            single_neg.push(f(&x));
            x[i] = 0;
        }
        let mut matrix = vec![vec![BigRational::zero(); dim]; dim];
        let mut linear = vec![BigRational::zero(); dim];
        for i in 0..dim {
            // f(e_i) + f(-e_i) - 2c = M_ii
            matrix[i][i] = &single[i] + &single_neg[i] - &c - &c;
            linear[i] = (&single[i] - &single_neg[i]) / rat(2);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                x[i] = 1;
                x[j] = 1;
                let v = f(&x) - &single[i] - &single[j] + &c;
                x[i] = 0;
                x[j] = 0;
                matrix[i][j] = v.clone();
                matrix[j][i] = v;
            }
        }
        QuadraticForm { matrix, linear, constant: c }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, x: &[i64]) -> BigRational {
        let mut acc = self.constant.clone();
        for i in 0..self.dim() {
            if x[i] == 0 {
                continue;
            }
            let xi = rat(x[i]);
            acc += &self.linear[i] * &xi;
            acc += &self.matrix[i][i] * &xi * &xi / rat(2);
            for j in i + 1..self.dim() {
                if x[j] != 0 {
                    acc += &self.matrix[i][j] * &xi * rat(x[j]);
                }
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("the form is not positive definite and the orthant bound does not apply")]
    Unbounded,
    #[error("more than {0} lattice points below the level")]
    TooManyPoints(usize),
}

/// Hard cap on the number of points, as a guard against runaway windows.
pub const MAX_POINTS: usize = 20_000_000;

/// Every integer `x` respecting `bounds` with `f(x) ≤ level`.
///
/// Positive definite forms use Fincke–Pohst around the real minimizer;
/// otherwise, when every variable is nonnegative and every matrix entry is
/// nonnegative with a positive diagonal, a depth-first search prunes with the
/// separable bound obtained by dropping the cross terms among free variables.
pub fn points_below(
    form: &QuadraticForm,
    bounds: &[VarBound],
    level: &BigRational,
) -> Result<Vec<Vec<i64>>, EnumerationError> {
    assert_eq!(bounds.len(), form.dim());
    if form.dim() == 0 {
        return Ok(if form.constant <= *level { vec![Vec::new()] } else { Vec::new() });
    }
    if let Some(dec) = Decomposition::new(form) {
        return fincke_pohst(form, &dec, bounds, level);
    }
    let orthant = bounds.iter().all(|b| *b == VarBound::NonNegative)
        && form.matrix.iter().all(|r| r.iter().all(|x| !x.is_negative()))
        && (0..form.dim()).all(|i| form.matrix[i][i].is_positive());
    if orthant {
        return orthant_search(form, level);
    }
    Err(EnumerationError::Unbounded)
}

/// `yᵀ(M/2)y = Σ_i d_i (y_i + Σ_{j>i} u_ij y_j)²` together with the real
/// minimizer `x* = -M⁻¹ l`.
struct Decomposition {
    d: Vec<BigRational>,
    u: Vec<Vec<BigRational>>,
    center: Vec<BigRational>,
}

impl Decomposition {
    fn new(form: &QuadraticForm) -> Option<Self> {
        let n = form.dim();
        let half = rat(2);
        let mut q: Vec<Vec<BigRational>> = form.matrix.iter().map(|r| r.iter().map(|x| x / &half).collect()).collect();
        for i in 0..n {
            if !q[i][i].is_positive() {
                return None;
            }
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = &q[i][j] / &q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = &q[k][i] * &q[i][l];
                    q[k][l] -= t;
                }
            }
        }
        let d: Vec<BigRational> = (0..n).map(|i| q[i][i].clone()).collect();
        let u: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| if j > i { q[i][j].clone() } else { BigRational::zero() }).collect()).collect();
        let center = solve(&form.matrix, &form.linear.iter().map(|x| -x).collect::<Vec<_>>())?;
        Some(Decomposition { d, u, center })
    }
}

/// Solves `M x = b` by Gaussian elimination; `None` if singular.
fn solve(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut a: Vec<Vec<BigRational>> = m.iter().zip(b).map(|(r, x)| {
        let mut row = r.clone();
        row.push(x.clone());
        row
    }).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = BigRational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

fn floor_i64(x: &BigRational) -> i64 {
    x.numer().div_floor(x.denom()).to_i64().expect("coordinate fits in i64")
}

fn fincke_pohst(
    form: &QuadraticForm,
    dec: &Decomposition,
    bounds: &[VarBound],
    level: &BigRational,
) -> Result<Vec<Vec<i64>>, EnumerationError> {
    let n = form.dim();
    let min_value = form.eval_rational(&dec.center);
    let budget = level - min_value;
    let mut out = Vec::new();
    if budget.is_negative() {
        return Ok(out);
    }
    let mut x = vec![0i64; n];
    fp_level(form, dec, bounds, level, n - 1, budget, &mut x, &mut out)?;
    Ok(out)
}

impl QuadraticForm {
    fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        let n = self.dim();
        let mut acc = self.constant.clone();
        for i in 0..n {
            acc += &self.linear[i] * &x[i];
            for j in 0..n {
                acc += &self.matrix[i][j] * &x[i] * &x[j] / rat(2);
            }
        }
        acc
    }
}

#[allow(clippy::too_many_arguments)]
fn fp_level(
    form: &QuadraticForm,
    dec: &Decomposition,
    bounds: &[VarBound],
    level: &BigRational,
    i: usize,
    budget: BigRational,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<(), EnumerationError> {
    let n = form.dim();
    let mut c = dec.center[i].clone();
    for j in i + 1..n {
        c -= &dec.u[i][j] * (rat(x[j]) - &dec.center[j]);
    }
    let lower = match bounds[i] {
        VarBound::NonNegative => Some(0i64),
        VarBound::Free => None,
    };
    let visit = |v: i64, out: &mut Vec<Vec<i64>>, x: &mut Vec<i64>| -> Result<bool, EnumerationError> {
        let t = rat(v) - &c;
        let used = &dec.d[i] * &t * &t;
        if used > budget {
            return Ok(false);
        }
        x[i] = v;
        if i == 0 {
            // the ellipsoid test is exact, but recheck against the form itself
            if form.eval(x) <= *level {
                if out.len() >= MAX_POINTS {
                    return Err(EnumerationError::TooManyPoints(MAX_POINTS));
                }
                out.push(x.clone());
            }
        } else {
            fp_level(form, dec, bounds, level, i - 1, &budget - used, x, out)?;
        }
        Ok(true)
    };
    let start = floor_i64(&c);
    // upward from the center (or from the lower bound)
    let mut v = lower.map_or(start + 1, |lo| lo.max(start + 1));
    while visit(v, out, x)? {
        v += 1;
    }
    // downward from the center
    let mut v = start;
    loop {
        if lower.is_some_and(|lo| v < lo) {
            break;
        }
        if !visit(v, out, x)? {
            break;
        }
        v -= 1;
    }
    x[i] = 0;
    Ok(())
}

/// Depth-first search over `x ≥ 0` for forms with nonnegative entries.
fn orthant_search(form: &QuadraticForm, level: &BigRational) -> Result<Vec<Vec<i64>>, EnumerationError> {
    let n = form.dim();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let lin: Vec<BigRational> = form.linear.clone();
    orthant_rec(form, level, 0, form.constant.clone(), lin, &mut x, &mut out)?;
    Ok(out)
}

/// `min_{x ≥ 0} (a x²/2 + b x)` with `a > 0`, over integers.
fn separable_min(a: &BigRational, b: &BigRational) -> BigRational {
    let vertex = -(b / a);
    let v = floor_i64(&vertex).max(0);
    let at = |t: i64| {
        let t = rat(t);
        a * &t * &t / rat(2) + b * &t
    };
    let lo = at(v);
    let hi = at(v + 1);
    if lo < hi { lo } else { hi }
}

/// `value` is the form restricted to the fixed coordinates `x[..i]`, and
/// `lin[j]` the effective linear coefficient of each free `x_j`.
fn orthant_rec(
    form: &QuadraticForm,
    level: &BigRational,
    i: usize,
    value: BigRational,
    lin: Vec<BigRational>,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<(), EnumerationError> {
    let n = form.dim();
    if i == n {
        if value <= *level {
            if out.len() >= MAX_POINTS {
                return Err(EnumerationError::TooManyPoints(MAX_POINTS));
            }
            out.push(x.clone());
        }
        return Ok(());
    }
    let a = &form.matrix[i][i];
    let vertex = floor_i64(&-(&lin[i] / a)).max(0);
    let mut t = 0i64;
    loop {
        let tr = rat(t);
        let own = a * &tr * &tr / rat(2) + &lin[i] * &tr;
        let new_value = &value + &own;
        let new_lin: Vec<BigRational> =
            (0..n).map(|j| if j > i { &lin[j] + &form.matrix[i][j] * &tr } else { lin[j].clone() }).collect();
        let bound: BigRational =
            (i + 1..n).map(|j| separable_min(&form.matrix[j][j], &new_lin[j])).fold(new_value.clone(), |acc, m| acc + m);
        if bound <= *level {
            x[i] = t;
            orthant_rec(form, level, i + 1, new_value, new_lin, x, out)?;
        } else if t > vertex {
            break;
        }
        t += 1;
    }
    x[i] = 0;
    Ok(())
}
