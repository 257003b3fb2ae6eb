//! Exact linear algebra over the rationals.
//!
//! Everything here is plain dense Gauss-Jordan elimination with exact
//! `BigRational` arithmetic: no pivot thresholds, no rounding, fully
//! deterministic.  Solvers return either a particular solution together with
//! a kernel basis, or an inconsistency certificate: a left null vector `y`
//! of the coefficient matrix with `y . b != 0`.

use num::{One, Zero};

use crate::error::Error;
use crate::poly::Rational;

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of solving `A x = b` exactly.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// `particular` solves the system; adding any combination of `kernel`
    /// vectors gives every other solution.
    Solution { particular: Vec<Rational>, kernel: Vec<Vec<Rational>> },
    /// No solution exists; `left_null` is a certificate: it annihilates
    /// every column of `A` but pairs nontrivially with `b`.
    Inconsistent { left_null: Vec<Rational> },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            SolveOutcome::Solution { particular, .. } => Some(particular),
            SolveOutcome::Inconsistent { .. } => None,
        }
    }
}

/// Solves `A x = b` over the rationals by Gauss-Jordan elimination.
///
/// The elimination tracks the row transform so that an unsolvable row
/// directly yields the left-null certificate.  Free variables are set to
/// zero in the particular solution, which makes the output deterministic.
pub fn solve(a: &QMat, b: &[Rational]) -> Result<SolveOutcome, Error> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but right-hand side has {}",
            a.rows,
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut transform = QMat::identity(a.rows);
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; a.rows];
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; a.cols];

    let mut next_row = 0;
    for col in 0..a.cols {
        // Find the first usable pivot below the current elimination front.
        let Some(pr) = (next_row..a.rows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        swap_rows(&mut m, &mut rhs, &mut transform, next_row, pr);
        let inv = {
            let p = m[(next_row, col)].clone();
            Rational::one() / p
        };
        scale_row(&mut m, &mut rhs, &mut transform, next_row, &inv);
        for r in 0..a.rows {
            if r != next_row && !m[(r, col)].is_zero() {
                let factor = m[(r, col)].clone();
                sub_scaled_row(&mut m, &mut rhs, &mut transform, r, next_row, &factor);
            }
        }
        pivot_of_row[next_row] = Some(col);
        pivot_row_of_col[col] = Some(next_row);
        next_row += 1;
        if next_row == a.rows {
            break;
        }
    }

    // Any pivotless row with a nonzero right-hand side certifies
    // inconsistency; the corresponding transform row is the certificate.
    for r in 0..a.rows {
        if pivot_of_row[r].is_none() && !rhs[r].is_zero() {
            return Ok(SolveOutcome::Inconsistent {
                left_null: transform.row(r).to_vec(),
            });
        }
    }

    let mut particular = vec![Rational::zero(); a.cols];
    for r in 0..a.rows {
        if let Some(c) = pivot_of_row[r] {
            particular[c] = rhs[r].clone();
        }
    }

    let mut kernel = Vec::new();
    for free in 0..a.cols {
        if pivot_row_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); a.cols];
        v[free] = Rational::one();
        for r in 0..a.rows {
            if let Some(c) = pivot_of_row[r] {
                v[c] = -m[(r, free)].clone();
            }
        }
        kernel.push(v);
    }

    Ok(SolveOutcome::Solution { particular, kernel })
}

fn swap_rows(m: &mut QMat, rhs: &mut [Rational], t: &mut QMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
    rhs.swap(a, b);
    for j in 0..t.cols {
        let tmp = t[(a, j)].clone();
        t[(a, j)] = t[(b, j)].clone();
        t[(b, j)] = tmp;
    }
}

fn scale_row(m: &mut QMat, rhs: &mut [Rational], t: &mut QMat, r: usize, c: &Rational) {
    for j in 0..m.cols {
        if !m[(r, j)].is_zero() {
            let v = &m[(r, j)] * c;
            m[(r, j)] = v;
        }
    }
    rhs[r] = &rhs[r] * c;
    for j in 0..t.cols {
        if !t[(r, j)].is_zero() {
            let v = &t[(r, j)] * c;
            t[(r, j)] = v;
        }
    }
}

fn sub_scaled_row(
    m: &mut QMat,
    rhs: &mut [Rational],
    t: &mut QMat,
    dst: usize,
    src: usize,
    factor: &Rational,
) {
    for j in 0..m.cols {
        if !m[(src, j)].is_zero() {
            let v = &m[(dst, j)] - &(&m[(src, j)] * factor);
            m[(dst, j)] = v;
        }
    }
    rhs[dst] = &rhs[dst] - &(&rhs[src] * factor);
    for j in 0..t.cols {
        if !t[(src, j)].is_zero() {
            let v = &t[(dst, j)] - &(&t[(src, j)] * factor);
            t[(dst, j)] = v;
        }
    }
}

/// An incrementally maintained reduced row basis: supports rank queries and
/// "does this vector enlarge the span" tests, all deterministic.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    /// Rows kept in reduced echelon form; `pivots[i]` is the pivot column of
    /// `rows[i]`, strictly increasing is NOT maintained, but pivots are
    /// unique per row.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; returns the residual.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *vi = &*vi - &(ri * &factor);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Inserts `v` into the span.  Returns `true` when the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut res = self.reduce(v);
        let Some(p) = res.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / res[p].clone();
        for c in res.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        // Back-eliminate the new pivot from existing rows to keep reductions
        // canonical.
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for (ri, ni) in row.iter_mut().zip(&res) {
                    if !ni.is_zero() {
                        *ri = &*ri - &(ni * &factor);
                    }
                }
            }
        }
        self.rows.push(res);
        self.pivots.push(p);
        true
    }
}
