use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).
///
/// The extension is needed because some of the basis normalizations carry a
/// factor 1/sqrt(2); arithmetic stays exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    pub rat: Rat,
    pub irr: Rat,
}

impl QuadRat {
    pub fn new(rat: Rat, irr: Rat) -> Self {
        QuadRat { rat, irr }
    }

    pub fn zero() -> Self {
        QuadRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        QuadRat::new(Rat::one(), Rat::zero())
    }

    pub fn from_rat(q: Rat) -> Self {
        QuadRat::new(q, Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        QuadRat::from_rat(rat_i(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QuadRat::from_rat(rat(n, d))
    }

    /// sqrt(2) itself.
    pub fn sqrt2() -> Self {
        QuadRat::new(Rat::zero(), Rat::one())
    }

    /// 1/sqrt(2) = sqrt(2)/2.
    pub fn inv_sqrt2() -> Self {
        QuadRat::new(Rat::zero(), rat(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.irr.is_zero() {
            Some(&self.rat)
        } else {
            None
        }
    }

    /// Field inverse; panics on zero (callers check).
    pub fn inv(&self) -> Self {
        // (a + b s)^-1 = (a - b s) / (a^2 - 2 b^2), s = sqrt 2
        let den = &self.rat * &self.rat - rat_i(2) * &self.irr * &self.irr;
        assert!(!den.is_zero(), "inverse of zero in Q(sqrt 2)");
        QuadRat::new(&self.rat / &den, -&self.irr / &den)
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64().unwrap() + self.irr.to_f64().unwrap() * std::f64::consts::SQRT_2
    }

    /// Exact string form: "n/d", "n/d*s2" or "n/d+n/d*s2".
    pub fn to_exact_string(&self) -> String {
        if self.irr.is_zero() {
            format!("{}", self.rat)
        } else if self.rat.is_zero() {
            format!("{}*s2", self.irr)
        } else if self.irr.is_negative() {
            format!("{}{}*s2", self.rat, self.irr)
        } else {
            format!("{}+{}*s2", self.rat, self.irr)
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.rat + &rhs.rat, &self.irr + &rhs.irr)
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(&self.rat - &rhs.rat, &self.irr - &rhs.irr)
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(
            &self.rat * &rhs.rat + rat_i(2) * &self.irr * &rhs.irr,
            &self.rat * &rhs.irr + &self.irr * &rhs.rat,
        )
    }
}

impl Div for &QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: &QuadRat) -> QuadRat {
        self * &rhs.inv()
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat::new(-&self.rat, -&self.irr)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

impl AddAssign<&QuadRat> for QuadRat {
    fn add_assign(&mut self, rhs: &QuadRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QuadRat> for QuadRat {
    fn sub_assign(&mut self, rhs: &QuadRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QuadRat> for QuadRat {
    fn mul_assign(&mut self, rhs: &QuadRat) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QuadRat::sqrt2();
        assert_eq!(&s * &s, QuadRat::from_int(2));
    }

    #[test]
    fn inverse_is_exact() {
        let x = QuadRat::new(rat(3, 2), rat(-1, 3));
        let y = &x * &x.inv();
        assert_eq!(y, QuadRat::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(QuadRat::from_ratio(-3, 2).to_exact_string(), "-3/2");
        assert_eq!(QuadRat::inv_sqrt2().to_exact_string(), "1/2*s2");
        assert_eq!(
            QuadRat::new(rat(1, 2), rat(1, 2)).to_exact_string(),
            "1/2+1/2*s2"
        );
    }
}
