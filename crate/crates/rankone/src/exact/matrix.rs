use super::quadrat::QuadRat;
use super::scalar::{CompositionScalar, ScalarKind};
use super::ExactError;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense matrix over exact composition scalars, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<CompositionScalar>,
}

impl ExactMatrix {
    pub fn zero(kind: ScalarKind, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![CompositionScalar::zero(kind); rows * cols],
        }
    }

    pub fn identity(kind: ScalarKind, n: usize) -> Self {
        let mut m = Self::zero(kind, n, n);
        for i in 0..n {
            m[(i, i)] = CompositionScalar::one(kind);
        }
        m
    }

    pub fn from_fn(
        kind: ScalarKind,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CompositionScalar,
    ) -> Self {
        let mut m = Self::zero(kind, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.kind(), self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.kind(), self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn kind(&self) -> ScalarKind {
        self.data
            .iter()
            .map(|s| s.kind)
            .max()
            .unwrap_or(ScalarKind::Real)
    }

    pub fn trace(&self) -> CompositionScalar {
        assert!(self.is_square());
        let mut t = CompositionScalar::zero(self.kind());
        for i in 0..self.rows {
            t = &t + &self[(i, i)];
        }
        t
    }

    /// Re(tr(self)), exact.
    pub fn re_trace(&self) -> QuadRat {
        self.trace().re()
    }

    pub fn scale(&self, q: &QuadRat) -> Self {
        Self::from_fn(self.kind(), self.rows, self.cols, |i, j| self[(i, j)].scale(q))
    }

    pub fn scale_scalar(&self, s: &CompositionScalar) -> Self {
        Self::from_fn(self.kind(), self.rows, self.cols, |i, j| s * &self[(i, j)])
    }

    /// Column extraction as an (n x 1) matrix.
    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.kind(), self.rows, 1, |i, _| self[(i, j)].clone())
    }

    /// Determinant by exact elimination. Requires a commutative scalar kind.
    pub fn determinant(&self) -> Result<CompositionScalar, ExactError> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("determinant of non-square".into()));
        }
        if self.kind() == ScalarKind::Quaternion {
            return Err(ExactError::DimensionMismatch(
                "determinant over quaternions is not defined here".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = CompositionScalar::one(self.kind());
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Ok(CompositionScalar::zero(self.kind()));
            };
            if p != col {
                for j in 0..n {
                    let tmp = a[(p, j)].clone();
                    a[(p, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                }
                det = -&det;
            }
            det = &det * &a[(col, col)];
            let inv = a[(col, col)].inv();
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] * &inv;
                for j in col..n {
                    let sub = &factor * &a[(col, j)];
                    a[(r, j)] = &a[(r, j)] - &sub;
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = CompositionScalar;
    fn index(&self, (i, j): (usize, usize)) -> &CompositionScalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CompositionScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::from_fn(self.kind().max(rhs.kind()), self.rows, self.cols, |i, j| {
            &self[(i, j)] + &rhs[(i, j)]
        })
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::from_fn(self.kind().max(rhs.kind()), self.rows, self.cols, |i, j| {
            &self[(i, j)] - &rhs[(i, j)]
        })
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix::from_fn(self.kind(), self.rows, self.cols, |i, j| -&self[(i, j)])
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let kind = self.kind().max(rhs.kind());
        let mut out = ExactMatrix::zero(kind, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        out
    }
}

/// Solve A x = b exactly by elimination with left multipliers, so the
/// routine is valid over the quaternions as well.
pub fn solve_linear(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
    if !a.is_square() {
        return Err(ExactError::DimensionMismatch("coefficient matrix not square".into()));
    }
    if a.rows != b.rows {
        return Err(ExactError::DimensionMismatch("rhs rows".into()));
    }
    let n = a.rows;
    let kind = a.kind().max(b.kind());
    let mut m = a.clone();
    let mut rhs = b.clone();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
        let Some(p) = pivot else {
            return Err(ExactError::SingularMatrix);
        };
        if p != col {
            for j in 0..n {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(col, j)].clone();
                m[(col, j)] = tmp;
            }
            for j in 0..rhs.cols {
                let tmp = rhs[(p, j)].clone();
                rhs[(p, j)] = rhs[(col, j)].clone();
                rhs[(col, j)] = tmp;
            }
        }
        let inv = m[(col, col)].inv();
        for r in 0..n {
            if r == col || m[(r, col)].is_zero() {
                continue;
            }
            let factor = &m[(r, col)] * &inv;
            for j in col..n {
                let sub = &factor * &m[(col, j)];
                m[(r, j)] = &m[(r, j)] - &sub;
            }
            for j in 0..rhs.cols {
                let sub = &factor * &rhs[(col, j)];
                rhs[(r, j)] = &rhs[(r, j)] - &sub;
            }
        }
    }
    let mut x = ExactMatrix::zero(kind, n, rhs.cols);
    for i in 0..n {
        let inv = m[(i, i)].inv();
        for j in 0..rhs.cols {
            x[(i, j)] = &inv * &rhs[(i, j)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadrat::rat;

    #[test]
    fn solve_identity_returns_rhs() {
        let a = ExactMatrix::identity(ScalarKind::Real, 3);
        let b = ExactMatrix::from_fn(ScalarKind::Real, 3, 1, |i, _| {
            CompositionScalar::from_int(i as i64 + 1)
        });
        assert_eq!(solve_linear(&a, &b).unwrap(), b);
    }

    #[test]
    fn solve_diagonal_scaling() {
        // [[2,0],[0,2]] x = (1,0)  ->  (1/2, 0)
        let mut a = ExactMatrix::zero(ScalarKind::Real, 2, 2);
        a[(0, 0)] = CompositionScalar::from_int(2);
        a[(1, 1)] = CompositionScalar::from_int(2);
        let mut b = ExactMatrix::zero(ScalarKind::Real, 2, 1);
        b[(0, 0)] = CompositionScalar::from_int(1);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x[(0, 0)], CompositionScalar::from_rat(rat(1, 2)));
        assert!(x[(1, 0)].is_zero());
    }

    #[test]
    fn singular_reported() {
        let a = ExactMatrix::zero(ScalarKind::Real, 2, 2);
        let b = ExactMatrix::zero(ScalarKind::Real, 2, 1);
        assert_eq!(solve_linear(&a, &b), Err(ExactError::SingularMatrix));
    }

    #[test]
    fn conj_transpose_involution() {
        let m = ExactMatrix::from_fn(ScalarKind::Complex, 2, 3, |i, j| {
            let mut s = CompositionScalar::from_int((i * 3 + j) as i64);
            s.c[1] = QuadRat::from_int(i as i64 - j as i64);
            s.kind = ScalarKind::Complex;
            s
        });
        assert_eq!(m.conj_transpose().conj_transpose(), m);
    }
}
