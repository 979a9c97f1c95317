use super::quadrat::{QuadRat, Rat};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which composition algebra the scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum ScalarKind {
    Real,
    Complex,
    Quaternion,
}

/// Exact scalar in R, C or H with components in Q(sqrt 2).
///
/// Components are ordered (1, i, j, k); complex scalars use the first two,
/// reals the first one. Multiplication follows i^2 = j^2 = k^2 = -1, ij = k.
/// The kind tag tracks which algebra the value is carried in; equality is on
/// the components only, so 1 in R equals 1 in C.
#[derive(Clone, Eq)]
pub struct CompositionScalar {
    pub kind: ScalarKind,
    pub c: [QuadRat; 4],
}

impl PartialEq for CompositionScalar {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl std::hash::Hash for CompositionScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl CompositionScalar {
    pub fn new(kind: ScalarKind, c: [QuadRat; 4]) -> Self {
        let s = CompositionScalar { kind, c };
        s.check_kind();
        s
    }

    fn check_kind(&self) {
        match self.kind {
            ScalarKind::Real => {
                assert!(self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero())
            }
            ScalarKind::Complex => assert!(self.c[2].is_zero() && self.c[3].is_zero()),
            ScalarKind::Quaternion => {}
        }
    }

    pub fn zero(kind: ScalarKind) -> Self {
        CompositionScalar {
            kind,
            c: [QuadRat::zero(), QuadRat::zero(), QuadRat::zero(), QuadRat::zero()],
        }
    }

    pub fn one(kind: ScalarKind) -> Self {
        let mut s = Self::zero(kind);
        s.c[0] = QuadRat::one();
        s
    }

    pub fn real(q: QuadRat) -> Self {
        let mut s = Self::zero(ScalarKind::Real);
        s.c[0] = q;
        s
    }

    pub fn from_rat(q: Rat) -> Self {
        Self::real(QuadRat::from_rat(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(QuadRat::from_int(n))
    }

    /// The imaginary unit of the requested kind's slot: 1 -> i, 2 -> j, 3 -> k.
    pub fn unit(kind: ScalarKind, slot: usize) -> Self {
        assert!(slot >= 1 && slot <= 3);
        if slot >= 2 {
            assert_eq!(kind, ScalarKind::Quaternion);
        } else {
            assert_ne!(kind, ScalarKind::Real);
        }
        let mut s = Self::zero(kind);
        s.c[slot] = QuadRat::one();
        s
    }

    pub fn i(kind: ScalarKind) -> Self {
        Self::unit(kind, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|q| q.is_zero())
    }

    /// Conjugation: negates the imaginary components. An involution.
    pub fn conj(&self) -> Self {
        CompositionScalar {
            kind: self.kind,
            c: [
                self.c[0].clone(),
                -&self.c[1],
                -&self.c[2],
                -&self.c[3],
            ],
        }
    }

    /// Real part as an exact field element.
    pub fn re(&self) -> QuadRat {
        self.c[0].clone()
    }

    /// Reduced norm x * conj(x), a nonnegative element of Q(sqrt 2).
    pub fn norm(&self) -> QuadRat {
        let mut n = QuadRat::zero();
        for q in &self.c {
            n += &(q * q);
        }
        n
    }

    /// Multiplicative inverse conj(x)/norm(x); panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero scalar");
        let ni = n.inv();
        let cj = self.conj();
        CompositionScalar {
            kind: self.kind,
            c: [
                &cj.c[0] * &ni,
                &cj.c[1] * &ni,
                &cj.c[2] * &ni,
                &cj.c[3] * &ni,
            ],
        }
    }

    pub fn scale(&self, q: &QuadRat) -> Self {
        CompositionScalar {
            kind: self.kind,
            c: [
                &self.c[0] * q,
                &self.c[1] * q,
                &self.c[2] * q,
                &self.c[3] * q,
            ],
        }
    }

    fn join_kind(a: ScalarKind, b: ScalarKind) -> ScalarKind {
        a.max(b)
    }
}

impl fmt::Debug for CompositionScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = ["", "i", "j", "k"];
        let mut parts = Vec::new();
        for (q, u) in self.c.iter().zip(units.iter()) {
            if !q.is_zero() {
                parts.push(format!("{}{}", q, u));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Add for &CompositionScalar {
    type Output = CompositionScalar;
    fn add(self, rhs: &CompositionScalar) -> CompositionScalar {
        CompositionScalar {
            kind: CompositionScalar::join_kind(self.kind, rhs.kind),
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Sub for &CompositionScalar {
    type Output = CompositionScalar;
    fn sub(self, rhs: &CompositionScalar) -> CompositionScalar {
        self + &(-rhs)
    }
}

impl Neg for &CompositionScalar {
    type Output = CompositionScalar;
    fn neg(self) -> CompositionScalar {
        CompositionScalar {
            kind: self.kind,
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Mul for &CompositionScalar {
    type Output = CompositionScalar;
    fn mul(self, rhs: &CompositionScalar) -> CompositionScalar {
        // Quaternion product on components (1, i, j, k); commutative cases
        // are the subalgebras with the upper components zero.
        let (a0, a1, a2, a3) = (&self.c[0], &self.c[1], &self.c[2], &self.c[3]);
        let (b0, b1, b2, b3) = (&rhs.c[0], &rhs.c[1], &rhs.c[2], &rhs.c[3]);
        let c0 = &(&(a0 * b0) - &(a1 * b1)) - &(&(a2 * b2) + &(a3 * b3));
        let c1 = &(&(a0 * b1) + &(a1 * b0)) + &(&(a2 * b3) - &(a3 * b2));
        let c2 = &(&(a0 * b2) - &(a1 * b3)) + &(&(a2 * b0) + &(a3 * b1));
        let c3 = &(&(a0 * b3) + &(a1 * b2)) - &(&(a2 * b1) - &(a3 * b0));
        CompositionScalar {
            kind: CompositionScalar::join_kind(self.kind, rhs.kind),
            c: [c0, c1, c2, c3],
        }
    }
}

macro_rules! forward_owned_scalar {
    ($trait:ident, $method:ident) => {
        impl $trait for CompositionScalar {
            type Output = CompositionScalar;
            fn $method(self, rhs: CompositionScalar) -> CompositionScalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_scalar!(Add, add);
forward_owned_scalar!(Sub, sub);
forward_owned_scalar!(Mul, mul);

impl Neg for CompositionScalar {
    type Output = CompositionScalar;
    fn neg(self) -> CompositionScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::quadrat::rat;

    fn q(kind: ScalarKind, a: i64, b: i64, c: i64, d: i64) -> CompositionScalar {
        CompositionScalar {
            kind,
            c: [
                QuadRat::from_int(a),
                QuadRat::from_int(b),
                QuadRat::from_int(c),
                QuadRat::from_int(d),
            ],
        }
    }

    #[test]
    fn quaternion_table() {
        let k = ScalarKind::Quaternion;
        let i = CompositionScalar::unit(k, 1);
        let j = CompositionScalar::unit(k, 2);
        let kk = CompositionScalar::unit(k, 3);
        let m1 = -&CompositionScalar::one(k);
        assert_eq!(&i * &i, m1);
        assert_eq!(&j * &j, -&CompositionScalar::one(k));
        assert_eq!(&kk * &kk, -&CompositionScalar::one(k));
        assert_eq!(&i * &j, kk);
        assert_eq!(&j * &i, -&CompositionScalar::unit(k, 3));
    }

    #[test]
    fn conj_is_involution_and_norm_multiplicative() {
        let a = q(ScalarKind::Quaternion, 1, -2, 3, 5);
        let b = q(ScalarKind::Quaternion, -4, 1, 0, 2);
        assert_eq!(a.conj().conj(), a);
        let ab = &a * &b;
        assert_eq!(ab.norm(), &a.norm() * &b.norm());
    }

    #[test]
    fn inverse() {
        let a = CompositionScalar {
            kind: ScalarKind::Complex,
            c: [
                QuadRat::from_rat(rat(2, 3)),
                QuadRat::from_rat(rat(-1, 5)),
                QuadRat::zero(),
                QuadRat::zero(),
            ],
        };
        assert_eq!(&a * &a.inv(), CompositionScalar::one(ScalarKind::Complex));
    }
}
