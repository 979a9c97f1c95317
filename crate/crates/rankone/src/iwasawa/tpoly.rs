use crate::exact::{CompositionScalar, ExactMatrix, QuadRat, ScalarKind};
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in the curve parameter t with exact scalar coefficients.
/// Equality compares coefficients only, not the carrier kind.
#[derive(Clone, Eq)]
pub struct TPoly {
    /// Coefficients by ascending power of t; trailing zeros trimmed.
    pub coeffs: Vec<CompositionScalar>,
    pub kind: ScalarKind,
}

impl PartialEq for TPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl TPoly {
    pub fn zero(kind: ScalarKind) -> Self {
        TPoly {
            coeffs: Vec::new(),
            kind,
        }
    }

    pub fn constant(s: CompositionScalar) -> Self {
        let kind = s.kind;
        let mut p = TPoly {
            coeffs: vec![s],
            kind,
        };
        p.trim();
        p
    }

    /// c * t^k
    pub fn monomial(c: CompositionScalar, k: usize) -> Self {
        let kind = c.kind;
        let mut coeffs = vec![CompositionScalar::zero(kind); k + 1];
        coeffs[k] = c;
        let mut p = TPoly { coeffs, kind };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> CompositionScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CompositionScalar::zero(self.kind))
    }

    /// d/dt at t = 0, i.e. the linear coefficient.
    pub fn d_dt_at_zero(&self) -> CompositionScalar {
        self.coeff(1)
    }

    pub fn eval_rat(&self, t: &QuadRat) -> CompositionScalar {
        let mut acc = CompositionScalar::zero(self.kind);
        let mut pow = QuadRat::one();
        for c in &self.coeffs {
            acc = &acc + &c.scale(&pow);
            pow = &pow * t;
        }
        acc
    }
}

impl std::fmt::Debug for TPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if k == 0 {
                    format!("{:?}", c)
                } else {
                    format!("({:?})t^{k}", c)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let kind = self.kind.max(rhs.kind);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        let mut p = TPoly { coeffs, kind };
        p.trim();
        p
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        self + &(-rhs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            kind: self.kind,
        }
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        let kind = self.kind.max(rhs.kind);
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero(kind);
        }
        let mut coeffs =
            vec![CompositionScalar::zero(kind); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        let mut p = TPoly { coeffs, kind };
        p.trim();
        p
    }
}

/// Matrix whose entries are exact polynomials in t.
#[derive(Clone, PartialEq, Eq)]
pub struct TpMatrix {
    pub n: usize,
    pub kind: ScalarKind,
    data: Vec<TPoly>,
}

impl TpMatrix {
    pub fn from_constant(m: &ExactMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows;
        let kind = m.kind();
        let data = (0..n * n)
            .map(|idx| TPoly::constant(m[(idx / n, idx % n)].clone()))
            .collect();
        TpMatrix { n, kind, data }
    }

    pub fn identity(kind: ScalarKind, n: usize) -> Self {
        Self::from_constant(&ExactMatrix::identity(kind, n))
    }

    /// exp(t * g) for nilpotent g, exact: the series terminates.
    /// Errors if g is not nilpotent within n steps.
    pub fn exp_nilpotent(g: &ExactMatrix) -> Option<Self> {
        assert!(g.is_square());
        let n = g.rows;
        let kind = g.kind();
        let mut out = Self::identity(kind, n);
        let mut power = ExactMatrix::identity(kind, n);
        let mut factorial = QuadRat::one();
        for k in 1..=n {
            power = &power * g;
            if power.is_zero() {
                return Some(out);
            }
            factorial = &factorial * &QuadRat::from_int(k as i64);
            let inv = factorial.inv();
            for i in 0..n {
                for j in 0..n {
                    if power[(i, j)].is_zero() {
                        continue;
                    }
                    let term = TPoly::monomial(power[(i, j)].scale(&inv), k);
                    let idx = i * n + j;
                    out.data[idx] = &out.data[idx] + &term;
                }
            }
        }
        None
    }

    pub fn entry(&self, i: usize, j: usize) -> &TPoly {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: TPoly) {
        self.data[i * self.n + j] = p;
    }

    pub fn mul(&self, rhs: &TpMatrix) -> TpMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let kind = self.kind.max(rhs.kind);
        let mut out = TpMatrix {
            n,
            kind,
            data: vec![TPoly::zero(kind); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                if self.entry(i, k).is_zero() {
                    continue;
                }
                for j in 0..n {
                    if rhs.entry(k, j).is_zero() {
                        continue;
                    }
                    let prod = self.entry(i, k) * rhs.entry(k, j);
                    let idx = i * n + j;
                    out.data[idx] = &out.data[idx] + &prod;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &TpMatrix) -> TpMatrix {
        assert_eq!(self.n, rhs.n);
        TpMatrix {
            n: self.n,
            kind: self.kind.max(rhs.kind),
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// First nonzero entry position, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|p| !p.is_zero())
            .map(|idx| (idx / self.n, idx % self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_basis, Family, FormSpec};

    #[test]
    fn exp_of_n_generator_is_quadratic() {
        let b = build_basis(&FormSpec::new(Family::O, 3).unwrap()).unwrap();
        let x1 = &b.gen("X1").unwrap().mat;
        let e = TpMatrix::exp_nilpotent(x1).unwrap();
        // top-right corner is -t^2/2
        let corner = e.entry(0, 3);
        assert_eq!(corner.degree(), Some(2));
        assert_eq!(
            corner.coeff(2),
            CompositionScalar::from_rat(crate::exact::rat(-1, 2))
        );
    }

    #[test]
    fn split_generator_is_not_nilpotent() {
        let b = build_basis(&FormSpec::new(Family::O, 2).unwrap()).unwrap();
        let h = &b.gen("H").unwrap().mat;
        assert!(TpMatrix::exp_nilpotent(h).is_none());
    }
}
