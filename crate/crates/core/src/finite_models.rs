//! Weighted path operators `A^{l,i,j}` and their exact eigenspace at `−2`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dyadic::rational;
use crate::error::{Error, Result};

/// Path on `l + 1` vertices with edge weights `α, 2, …, 2, β` and zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathModel {
    pub l: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
}

impl PathModel {
    pub fn new(l: usize, alpha: BigRational, beta: BigRational) -> Result<Self> {
        if l < 2 {
            return Err(Error::Domain(format!("path length must be at least 2, got {l}")));
        }
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::Domain("boundary weights must be nonzero".into()));
        }
        Ok(PathModel { l, alpha, beta })
    }

    pub fn vertex_count(&self) -> usize {
        self.l + 1
    }

    /// Weight of the edge between vertices `r` and `r + 1`.
    pub fn edge_weight(&self, r: usize) -> BigRational {
        if r == 0 {
            self.alpha.clone()
        } else if r + 1 == self.l {
            self.beta.clone()
        } else {
            rational(2, 1)
        }
    }

    pub fn edge_weights(&self) -> Vec<BigRational> {
        (0..self.l).map(|r| self.edge_weight(r)).collect()
    }

    /// Dense `A − λ·I`.
    pub fn shifted_matrix(&self, lambda: &BigRational) -> Vec<Vec<BigRational>> {
        let n = self.vertex_count();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (r, row) in m.iter_mut().enumerate() {
            row[r] = -lambda.clone();
        }
        for r in 0..self.l {
            let w = self.edge_weight(r);
            m[r][r + 1] = w.clone();
            m[r + 1][r] = w;
        }
        m
    }

    /// The `(i, j)` ending scenario these boundary weights realize, if any.
    pub fn scenario(&self) -> Option<(u8, u8)> {
        let (two, half) = (rational(2, 1), rational(1, 2));
        match (self.alpha == two || self.alpha == half, self.beta == two || self.beta == half) {
            (true, true) => {
                let fate = |w: &BigRational| if *w == two { 1 } else { 2 };
                let (a, b) = (fate(&self.alpha), fate(&self.beta));
                Some((a.min(b), a.max(b)))
            }
            _ => None,
        }
    }
}

/// Boundary weight contributed by an end with the given walker fate.
fn boundary_weight(fate: u8) -> Result<BigRational> {
    match fate {
        1 => Ok(rational(2, 1)),
        2 => Ok(rational(1, 2)),
        _ => Err(Error::Domain(format!("ending scenario must be 1 or 2, got {fate}"))),
    }
}

/// `A^{l,i,j}`: good ends carry weight 2, bad ends 1/2. The `(1,2)` model puts the bad end first.
pub fn build_model(l: usize, i: u8, j: u8) -> Result<PathModel> {
    let (a, b) = if i == 1 && j == 2 { (boundary_weight(2)?, boundary_weight(1)?) } else { (boundary_weight(i)?, boundary_weight(j)?) };
    PathModel::new(l, a, b)
}

/// Sparse integer row.
type Row = BTreeMap<usize, BigInt>;

fn integer_row(row: &[BigRational]) -> Row {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(c, q)| (c, q.numer() * (&lcm / q.denom()))).collect()
}

fn normalize(row: &mut Row) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// Rank of a rational matrix by fraction-free elimination on sparse integer rows.
pub fn rational_rank(matrix: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Row> = matrix.iter().map(|r| integer_row(r)).filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    while let Some(pos) = (0..rows.len()).min_by_key(|&k| (*rows[k].keys().next().unwrap(), rows[k].len())) {
        let pivot = rows.swap_remove(pos);
        let (&c, pc) = pivot.iter().next().unwrap();
        let pc = pc.clone();
        for r in rows.iter_mut() {
            let Some(rc) = r.get(&c).cloned() else { continue };
            let (a, b) = (&pc / pc.gcd(&rc), &rc / pc.gcd(&rc));
            for v in r.values_mut() {
                *v *= &a;
            }
            for (col, pv) in &pivot {
                let e = r.entry(*col).or_insert_with(BigInt::zero);
                *e -= pv * &b;
                if e.is_zero() {
                    r.remove(col);
                }
            }
            normalize(r);
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// `dim ker(A − λ·I)` over the rationals.
///
/// All edge weights are nonzero, so rows `0..l` of `A − λ·I` have rank `l` and a
/// kernel vector is fixed by `x₀ = 1` and the three-term recurrence; the kernel
/// is nonzero exactly when that vector also satisfies row `l`.
pub fn kernel_dim_at(model: &PathModel, lambda: &BigRational) -> usize {
    let l = model.l;
    let mut prev = BigRational::zero();
    let mut cur = BigRational::one();
    for r in 0..l {
        let back = if r == 0 { BigRational::zero() } else { model.edge_weight(r - 1) * &prev };
        let next = (lambda * &cur - back) / model.edge_weight(r);
        prev = std::mem::replace(&mut cur, next);
    }
    usize::from((model.edge_weight(l - 1) * &prev - lambda * &cur).is_zero())
}

/// `dim ker(A + 2·I)`.
pub fn kernel_dim_minus_two(model: &PathModel) -> usize {
    kernel_dim_at(model, &rational(-2, 1))
}

/// Solution of the first `l` rows of `(A + 2)x = 0` with `x₀ = 2α`:
/// `x₁ = −4` and `x_{r+1} = −(w_{r−1,r}x_{r−1} + 2x_r)/w_{r,r+1}`.
pub fn kernel_vector(l: usize, alpha: &BigRational, beta: &BigRational) -> Result<Vec<BigRational>> {
    let model = PathModel::new(l, alpha.clone(), beta.clone())?;
    let two = rational(2, 1);
    let mut x = vec![&two * alpha, rational(-4, 1)];
    for r in 1..l {
        let next = -(model.edge_weight(r - 1) * &x[r - 1] + &two * &x[r]) / model.edge_weight(r);
        x.push(next);
    }
    Ok(x)
}

/// The deleted last row `β·x_{l−1} + 2·x_l = 0` holds for [`kernel_vector`].
pub fn closure_holds(l: usize, alpha: &BigRational, beta: &BigRational) -> Result<bool> {
    let x = kernel_vector(l, alpha, beta)?;
    Ok((beta * &x[l - 1] + rational(2, 1) * &x[l]).is_zero())
}

/// Applies a dense matrix to a vector.
pub fn apply(matrix: &[Vec<BigRational>], x: &[BigRational]) -> Vec<BigRational> {
    matrix.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelRow {
    pub l: usize,
    pub i: u8,
    pub j: u8,
    pub dim: usize,
}

/// `dim ker(A^{l,i,j} + 2)` for every `l` in range and each scenario `(1,1), (1,2), (2,2)`.
pub fn model_table(ls: impl IntoIterator<Item = usize>) -> Result<Vec<ModelRow>> {
    let mut out = Vec::new();
    for l in ls {
        for (i, j) in [(1, 1), (1, 2), (2, 2)] {
            let dim = kernel_dim_minus_two(&build_model(l, i, j)?);
            out.push(ModelRow { l, i, j, dim });
        }
    }
    Ok(out)
}

pub fn model_table_csv(rows: &[ModelRow]) -> String {
    let mut s = String::from("l,i,j,dim\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", r.l, r.i, r.j, r.dim);
    }
    s
}

/// True iff `v` is a nonzero rational multiple of `w`.
pub fn proportional(v: &[BigRational], w: &[BigRational]) -> bool {
    if v.len() != w.len() {
        return false;
    }
    let Some(k) = w.iter().position(|q| !q.is_zero()) else { return false };
    let c = &v[k] / &w[k];
    !c.is_zero() && v.iter().zip(w).all(|(a, b)| *a == &c * b)
}

/// Sign pattern helper for display: `+`, `-`, `0` per entry.
pub fn sign_string(v: &[BigRational]) -> String {
    v.iter()
        .map(|q| {
            if q.is_zero() {
                '0'
            } else if q.is_positive() {
                '+'
            } else {
                '-'
            }
        })
        .collect()
}
